"""
###############################################################################
# CLI - Command line entry point
###############################################################################
# Verbs:
#     build      seed → CSD code JSON
#     distance   information-set distance estimate
#     gates      logical gate listing
#     compile    factor a target Clifford into free gates and injections
#     prep       noisy state preparation sweep
#     memory     noisy memory sweep
#     reproduce  reference value checks (exit 1 on any failure)
#     decode     BP+OSD over a DEM file and sampled shots
#
# Any CsdError exits with code 2 and a one-line message.
###############################################################################
"""

import argparse
import json
import logging
import os
import sys

import numpy as np
import pandas as pd

from core.codes import code_from_dict, code_to_dict, validate
from core.compiler import csd_generator_set, factorize, schedule, schedule_to_dict, target_from_rows
from core.config import SimulationConfig
from core.construction import build_csd
from core.decoder import BpOsdDecoder, DecodingProblem
from core.distance import estimate_distance
from core.exceptions import CsdError, FormatError
from core.gates import find_swap_transversal_gates, g_tau_records
from core.protocols import PrepPolicy
from core.simulation import DetectorErrorModel, sample
from tools.reporting import ReportGenerator
from tools.reproduction import reproduce_tables
from tools.sweeps import SweepRunner

logger = logging.getLogger(__name__)


###############################################################################
# Helpers
###############################################################################

def _load_code(source):
    """A seed name, or a path to a code JSON written by `build`"""
    if os.path.exists(source):
        with open(source) as f:
            try:
                return code_from_dict(json.load(f))
            except json.JSONDecodeError as e:
                raise FormatError(f"{source} is not valid JSON: {e}")
    return build_csd(source).csd


def _write(data, path):
    """Write a DataFrame or JSON-ready object; the extension picks the format"""
    if path is None:
        if isinstance(data, pd.DataFrame):
            print(data.to_string(index=False))
        else:
            print(json.dumps(data, indent=2))
        return
    if path.endswith('.csv'):
        frame = data if isinstance(data, pd.DataFrame) else pd.DataFrame(data if isinstance(data, list) else [data])
        frame.to_csv(path, index=False)
    else:
        payload = data.to_dict(orient='records') if isinstance(data, pd.DataFrame) else data
        with open(path, 'w') as f:
            json.dump(payload, f, indent=2, default=str)
    logger.info(f"Wrote {path}")


def _p_grid(text, config):
    return [float(v) for v in text.split(',')] if text else config.p_grid


###############################################################################
# Verbs
###############################################################################

def cmd_build(args, config):
    construction = build_csd(args.code_seed)
    report = validate(construction.csd)
    if args.verbose:
        report.summary()
    data = code_to_dict(construction.csd)
    data['seed'] = construction.seed.parameters()
    data['q_max'] = report.q_max
    _write(data, args.out)
    return 0


def cmd_distance(args, config):
    code = _load_code(args.code)
    estimate = estimate_distance(code, args.trials or config.distance_trials, config.seed, config.threads)
    _write(estimate.to_dict(), args.out)
    return 0


def cmd_gates(args, config):
    if os.path.exists(args.code):
        records = find_swap_transversal_gates(_load_code(args.code))
    else:
        records = g_tau_records(build_csd(args.code))
    data = ReportGenerator.gates_to_json(records)
    if args.list:
        _write(data, args.out)
    else:
        print(f"{len(records)} gates")
    return 0


def cmd_compile(args, config):
    construction = build_csd(args.code)
    with open(args.target) as f:
        try:
            rows = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f"{args.target} is not valid JSON: {e}")
    rows = rows['matrix'] if isinstance(rows, dict) else rows
    gens = csd_generator_set(construction, tuple(args.injections.split(',')))
    fact = factorize(target_from_rows(rows), gens)
    data = fact.to_dict()
    data['schedule'] = schedule_to_dict(schedule(fact, gens, construction.csd))
    _write(data, args.out)
    return 0


def cmd_prep(args, config):
    sweeps = SweepRunner(config)
    policy = PrepPolicy(args.basis, 0, not args.no_flagcilla)
    allow = [int(m) for m in args.allow_m.split(',')] if args.allow_m else None
    report = sweeps.run_prep_sweep(args.code, _p_grid(args.p, config), args.shots, policy, allow)
    report.summary()
    if args.out:
        _export(report, args.out)
    return 0


def cmd_memory(args, config):
    sweeps = SweepRunner(config)
    report = sweeps.run_memory_sweep(args.code, _p_grid(args.p, config), args.shots, args.rounds)
    report.summary()
    if args.out:
        _export(report, args.out)
    return 0


def _export(report, path):
    generator = ReportGenerator(report=report)
    if path.endswith('.csv'):
        generator.to_csv(path)
    else:
        generator.to_json(path)


def cmd_reproduce(args, config):
    checks = reproduce_tables(config, include_groups=not args.skip_groups)
    ReportGenerator(checks=checks, title="REPRODUCTION").generate_text_report()
    if args.out:
        _write(checks, args.out)
    return 0 if checks['passed'].all() else 1


def cmd_decode(args, config):
    with open(args.dem) as f:
        dem = DetectorErrorModel.from_text(f.read())
    if args.shots:
        samples = np.load(args.shots)
        detectors = np.asarray(samples['detectors'], dtype=bool)
        observables = np.asarray(samples['observables'], dtype=bool) if 'observables' in samples else None
    else:
        detectors, observables = sample(dem, args.sample, config.seed, config.batch_size)
    if detectors.shape[1] != dem.num_detectors:
        raise FormatError(f"Shots have {detectors.shape[1]} detectors, DEM has {dem.num_detectors}")
    decoder = BpOsdDecoder(DecodingProblem.from_dem(dem), config, args.backend)
    predictions, failures = decoder.decode_batch(detectors, observables)
    frame = pd.DataFrame(predictions.astype(int), columns=[f"L{o}" for o in range(predictions.shape[1])])
    if failures is not None:
        frame['failure'] = failures.astype(int)
        print(f"Shots: {len(frame)}  Failures: {int(failures.sum())}  p_L: {failures.mean():.3e}")
    _write(frame, args.out)
    return 0


###############################################################################
# Parser
###############################################################################

def build_parser():
    parser = argparse.ArgumentParser(prog='csd', description='Concatenated symplectic double codes')
    parser.add_argument('--seed', dest='global_seed', type=int, default=None, help='PRNG seed')
    parser.add_argument('--threads', type=int, default=None, help='Worker threads (default: CSD_THREADS or 1)')
    parser.add_argument('--out', dest='global_out', default=None, help='Output path (.csv or .json)')
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
    sub = parser.add_subparsers(dest='verb', required=True)

    def verb(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument('--out', default=None, help='Output path (.csv or .json)')
        p.set_defaults(handler=handler)
        return p

    def with_rng(p):
        p.add_argument('--seed', dest='rng_seed', type=int, default=None, help='PRNG seed')
        return p

    p = verb('build', cmd_build, 'Build a CSD code from a seed')
    p.add_argument('--seed', dest='code_seed', required=True, help="Seed code: c422, c513, c833, c1244")

    p = with_rng(verb('distance', cmd_distance, 'Estimate the distance'))
    p.add_argument('--code', required=True, help='Seed name or code JSON')
    p.add_argument('--trials', type=int, default=None)

    p = verb('gates', cmd_gates, 'List logical gates')
    p.add_argument('--code', required=True, help='Seed name (G_tau generators) or code JSON (automorphism search)')
    p.add_argument('--list', action='store_true', help='Emit every gate record as JSON')

    p = verb('compile', cmd_compile, 'Compile a logical Clifford')
    p.add_argument('--code', required=True, help='Seed name')
    p.add_argument('--target', required=True, help='JSON 2k x 2k bit matrix (list of row strings)')
    p.add_argument('--injections', default='s', help="Comma list of s, sx, global_s")

    p = with_rng(verb('prep', cmd_prep, 'State preparation sweep'))
    p.add_argument('--code', nargs='+', default=['c422'])
    p.add_argument('--p', default=None, help='Comma list of physical error rates')
    p.add_argument('--shots', type=int, default=None)
    p.add_argument('--basis', choices=('Z', 'X'), default='Z')
    p.add_argument('--allow-m', default=None, help='Comma list of allow_m values')
    p.add_argument('--no-flagcilla', action='store_true')

    p = with_rng(verb('memory', cmd_memory, 'Memory sweep'))
    p.add_argument('--code', nargs='+', default=['c422'])
    p.add_argument('--p', default=None, help='Comma list of physical error rates')
    p.add_argument('--shots', type=int, default=None)
    p.add_argument('--rounds', type=int, default=None, help='Default: code distance')

    p = with_rng(verb('reproduce', cmd_reproduce, 'Run the reference checks'))
    p.add_argument('--skip-groups', action='store_true', help='Skip the gate group orders')

    p = with_rng(verb('decode', cmd_decode, 'Decode shots against a DEM'))
    p.add_argument('--dem', required=True, help='DEM text file')
    p.add_argument('--shots', default=None, help='.npz with detectors (and observables) arrays')
    p.add_argument('--sample', type=int, default=1000, help='Shots to sample from the DEM when --shots is absent')
    p.add_argument('--osd-order', type=int, default=None)
    p.add_argument('--backend', choices=('native', 'ldpc'), default='native')
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.out = args.out or args.global_out
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        config = SimulationConfig.from_env("CLI Config")
        rng_seed = getattr(args, 'rng_seed', None)
        config.update(seed=rng_seed if rng_seed is not None else args.global_seed, threads=args.threads,
                      osd_order=getattr(args, 'osd_order', None))
        return args.handler(args, config)
    except CsdError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
