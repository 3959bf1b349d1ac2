"""
###############################################################################
# FaultAnalyzer - Exhaustive single-fault check of protocol circuits
###############################################################################
# A fault passes when it triggers a detector, or when its residual Pauli on
# the data is equivalent to weight ≤ 1 modulo the output stabilizer group.
###############################################################################
"""

import logging
import time

import numpy as np
import pandas as pd

from core.f2 import pack_bits, rref_packed, unpack_bits
from core.noise import NoiseModel, annotate
from core.protocols import PrepPolicy, build_state_prep, build_y_measurement, prep_output_stabilizers, \
    y_output_stabilizers
from core.simulation import elementary_faults, single_fault_effects

logger = logging.getLogger(__name__)


class StabilizerCosets:
    ###############################################################################
    # StabilizerCosets - Canonical representatives of Paulis modulo a group
    ###############################################################################

    def __init__(self, stabilizers, n):
        rows = np.array([s.symplectic().to_array() for s in stabilizers], dtype=bool).reshape(-1, 2 * n)
        self.n = n
        if len(rows):
            data, pivots = rref_packed(pack_bits(rows), 2 * n)
            self.reduced = unpack_bits(data, 2 * n)[:len(pivots)].astype(np.uint8)
            self.pivots = np.array(pivots, dtype=int)
        else:
            self.reduced = np.zeros((0, 2 * n), dtype=np.uint8)
            self.pivots = np.zeros(0, dtype=int)
        self._light = {self.canonical(v) for v in self._light_paulis()}

    def _light_paulis(self):
        yield np.zeros(2 * self.n, dtype=bool)
        for q in range(self.n):
            for x, z in ((1, 0), (0, 1), (1, 1)):
                v = np.zeros(2 * self.n, dtype=bool)
                v[q], v[self.n + q] = x, z
                yield v

    def canonical(self, vector):
        """Coset representative with zeros on every pivot column, as bytes"""
        v = np.asarray(vector, dtype=np.uint8)
        if self.pivots.size:
            v = (v + v[self.pivots] @ self.reduced) % 2
        return np.packbits(v.astype(bool)).tobytes()

    def is_light(self, vector):
        """Equivalent to a Pauli of weight at most 1"""
        return self.canonical(vector) in self._light


class FaultReport:
    ###############################################################################
    # FaultReport - Outcome of one exhaustive enumeration
    ###############################################################################

    def __init__(self, name, total, detected, harmless, counterexamples, runtime):
        self.name = name
        self.total = total
        self.detected = detected
        self.harmless = harmless
        self.counterexamples = counterexamples
        self.runtime = runtime

    @property
    def ok(self):
        return not self.counterexamples

    def to_dataframe(self):
        return pd.DataFrame([{'fault': fault.describe(), 'position': fault.position,
                              'residual_weight': weight} for fault, weight in self.counterexamples])

    def to_dict(self):
        return {'name': self.name, 'total': self.total, 'detected': self.detected, 'harmless': self.harmless,
                'counterexamples': [fault.describe() for fault, _ in self.counterexamples],
                'runtime_s': self.runtime, 'ok': self.ok}

    def summary(self):
        print("=" * 80)
        print(f"SINGLE-FAULT CHECK: {self.name}")
        print("=" * 80)
        print(f"  Faults:                 {self.total:>15,}")
        print(f"  Detected:               {self.detected:>15,}")
        print(f"  Harmless undetected:    {self.harmless:>15,}")
        print(f"  Counterexamples:        {len(self.counterexamples):>15,}")
        for fault, weight in self.counterexamples[:10]:
            print(f"    {fault.describe()} (residual weight {weight})")
        print("=" * 80)

    def __repr__(self):
        return f"FaultReport({self.name}, faults={self.total}, counterexamples={len(self.counterexamples)})"


class FaultAnalyzer:
    ###############################################################################
    # FaultAnalyzer - Propagates every elementary fault of a noisy circuit
    ###############################################################################

    def __init__(self, circuit, stabilizers, n_data, name='circuit', p=1e-3):
        """
        Initialize FaultAnalyzer

        Args:
            circuit: Noiseless protocol circuit
            stabilizers: Stabilizer generators of the ideal output on qubits 0..n_data-1
            n_data: Number of data qubits
            name: Label for the report
            p: Noise strength used to place faults (only locations matter)
        """
        self.circuit = circuit
        self.noisy = annotate(circuit, NoiseModel(p))
        self.cosets = StabilizerCosets(stabilizers, n_data)
        self.n_data = n_data
        self.name = name

    @classmethod
    def for_state_prep(cls, construction, policy=None):
        policy = policy or PrepPolicy()
        code = construction.csd
        circuit = build_state_prep(code, construction.layout, policy)
        label = f"{code.parameters()} |{'0' if policy.basis == 'Z' else '+'}̄⟩ prep"
        return cls(circuit, prep_output_stabilizers(code, policy.basis), code.n, label)

    @classmethod
    def for_y_measurement(cls, construction, logical_index=0):
        code = construction.csd
        circuit = build_y_measurement(code, construction.layout, logical_index, prepare=True)
        return cls(circuit, y_output_stabilizers(code, logical_index), code.n,
                   f"{code.parameters()} Ȳ_{logical_index} measurement")

    def analyze(self):
        """
        Returns:
            FaultReport listing every fault that is neither detected nor light
        """
        started = time.time()
        faults = elementary_faults(self.noisy)
        detected = harmless = 0
        counterexamples = []
        for fault, detectors, _, x, z in single_fault_effects(self.noisy, faults, data_qubits=range(self.n_data)):
            if detectors.any():
                detected += 1
                continue
            residual = np.concatenate([x, z])
            if self.cosets.is_light(residual):
                harmless += 1
            else:
                counterexamples.append((fault, int(np.count_nonzero(x | z))))
        report = FaultReport(self.name, len(faults), detected, harmless, counterexamples, time.time() - started)
        logger.info(f"Single-fault check of {self.name}: {len(faults)} faults, "
                    f"{len(counterexamples)} counterexamples in {report.runtime:.1f}s")
        return report
