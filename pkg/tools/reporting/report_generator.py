"""
###############################################################################
# ReportGenerator - CSV, JSON and text exports of experiment results
###############################################################################
"""

import json
from datetime import datetime

import numpy as np
import pandas as pd


def _jsonable(value):
    """numpy scalars and arrays → plain Python for json.dump"""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value


class ReportGenerator:
    ###############################################################################
    # ReportGenerator - Export ExperimentReports, reproduction tables and gates
    ###############################################################################

    def __init__(self, report=None, checks=None, title=None):
        """
        Initialize ReportGenerator

        Args:
            report: ExperimentReport to export
            checks: Reproduction DataFrame (check, expected, actual, passed)
            title: Heading for the text report

        Example:
            report = ReportGenerator(report=sweeps.run_prep_sweep(['c422']))
            report.to_csv('prep.csv')
            report.to_json('prep.json')
        """
        if report is None and checks is None:
            raise ValueError("Must provide at least one of: report, checks")
        self.report = report
        self.checks = checks
        self.title = title or (f"{report.kind.upper()} EXPERIMENTS" if report is not None else "REPRODUCTION")

    def to_dataframe(self):
        return self.report.to_dataframe() if self.report is not None else self.checks

    ###########################################################################
    # CSV Export
    ###########################################################################

    def to_csv(self, filepath):
        """
        Export one row per point (or per check) to CSV

        Args:
            filepath: Path to save CSV file
        """
        df = self.to_dataframe()
        df.to_csv(filepath, index=False)
        print(f"✅ Results exported to {filepath}")
        return df

    ###########################################################################
    # JSON Export
    ###########################################################################

    def to_dict(self):
        data = {'generated_at': datetime.now().isoformat(), 'title': self.title}
        if self.report is not None:
            data.update(self.report.to_dict())
        if self.checks is not None:
            data['checks'] = self.checks.to_dict(orient='records')
        return _jsonable(data)

    def to_json(self, filepath):
        """
        Export the complete report, config echo included, to JSON

        Args:
            filepath: Path to save JSON file
        """
        data = self.to_dict()
        with open(filepath, 'w') as f:
            json.dump(data, f, indent=2)
        print(f"✅ Complete report exported to {filepath}")
        return data

    @staticmethod
    def gates_to_json(records, filepath=None):
        """
        Gate listing: circuit word, logical symplectic matrix and transversality per record

        Returns:
            list of dicts
        """
        data = _jsonable([record.to_dict() for record in records])
        if filepath:
            with open(filepath, 'w') as f:
                json.dump(data, f, indent=2)
            print(f"✅ {len(data)} gates exported to {filepath}")
        return data

    ###########################################################################
    # Text Report
    ###########################################################################

    def generate_text_report(self, filepath=None):
        """
        Generate formatted text report

        Args:
            filepath: Path to save report (None = print to console)

        Returns:
            str: Report content
        """
        lines = []
        lines.append("=" * 80)
        lines.append(f"REPORT: {self.title}")
        lines.append("=" * 80)
        lines.append(f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        lines.append("")

        if self.report is not None:
            df = self.report.to_dataframe()
            lines.append(f"Codes: {', '.join(self.report.codes)}")
            lines.append(f"p grid: {', '.join(f'{p:.1e}' for p in self.report.p_grid)}")
            lines.append(f"Runtime: {self.report.runtime:.1f}s")
            lines.append("")
            columns = [c for c in ('code', 'p', 'shots', 'acceptance', 'failures', 'epsilon_L', 'epsilon_L_stddev',
                                   'allow_m', 'm', 'rounds') if c in df.columns]
            lines.append("Points:")
            lines.append("-" * 80)
            lines.append(df[columns].to_string(index=False) if len(df) else "(none)")
            lines.append("")

        if self.checks is not None:
            passed = int(self.checks['passed'].sum()) if len(self.checks) else 0
            lines.append(f"Checks: {passed}/{len(self.checks)} passed")
            lines.append("-" * 80)
            for _, row in self.checks.iterrows():
                mark = 'PASS' if row['passed'] else 'FAIL'
                lines.append(f"  [{mark}] {row['check']}: expected {row['expected']}, got {row['actual']}")
            lines.append("")

        lines.append("=" * 80)
        report_text = "\n".join(lines)

        if filepath:
            with open(filepath, 'w') as f:
                f.write(report_text)
            print(f"✅ Text report saved to {filepath}")
        else:
            print(report_text)

        return report_text
