"""
###############################################################################
# Comprehensive Example - CSD codes from seed to decoded logical error rates
###############################################################################
# This demonstrates:
# 1. Building a CSD code from a seed and validating it
# 2. Distance estimation
# 3. SWAP-transversal logical gates and the group they generate
# 4. Compiling a logical Clifford into free layers and injected S gates
# 5. Fault-tolerant state preparation and its single-fault check
# 6. A noisy prep sweep and a memory experiment with BP+OSD decoding
# 7. Exporting reports
###############################################################################
"""

import logging

from core import NoiseModel, PrepPolicy, SimulationConfig, build_csd, estimate_distance, validate
from core.compiler import csd_generator_set, factorize, schedule, schedule_to_dict
from core.gates import g_tau_generators, g_tau_records, replay_reference_gates
from core.groups import group_closure, group_order, targeted_s
from core.protocols import build_state_prep
from tools import ExperimentRunner, FaultAnalyzer, ReportGenerator, SweepRunner

logging.basicConfig(level=logging.INFO, format='%(levelname)s %(name)s: %(message)s')

config = SimulationConfig("Example Config")
config.update(seed=7, distance_trials=1000)

###############################################################################
# PART 1: CONSTRUCTION
###############################################################################

print("=" * 80)
print("PART 1: BUILDING THE [[16,4,4]] CSD CODE FROM THE [[4,2,2]] SEED")
print("=" * 80)

construction = build_csd('c422')
csd = construction.csd

print(f"\n✅ Seed:   {construction.seed.parameters()}")
print(f"✅ Double: {construction.double.parameters()}")
print(f"✅ CSD:    {csd.parameters()} with {construction.layout.n_blocks} C4 blocks")

validate(csd).summary()

###############################################################################
# PART 2: DISTANCE
###############################################################################

print("\n" + "=" * 80)
print("PART 2: DISTANCE ESTIMATION")
print("=" * 80)

for name, code in (('double', construction.double), ('CSD', csd)):
    estimate = estimate_distance(code, config.distance_trials, config.seed, config.threads)
    print(f"   {name:<7} d_est = {estimate.d_est}  (sectors {estimate.sector_weights})")

###############################################################################
# PART 3: LOGICAL GATES
###############################################################################

print("\n" + "=" * 80)
print("PART 3: SWAP-TRANSVERSAL GATES")
print("=" * 80)

records = g_tau_records(construction)
for record in records[:4]:
    print(f"   {record.label:<12} {record.transversality:<18} {record.action.shape()}")

rows = replay_reference_gates(construction)
print(f"\n🔍 Reference gate replay: {sum(row['ok'] for row in rows)}/{len(rows)} rows match")

generators = g_tau_generators(construction)
order = group_closure(generators, as_keys=True)[0]
print(f"   |G_tau| = {order}")
print(f"   |<G_tau, S_0>| = {group_order(generators + [targeted_s(generators[0].t, 0)]):,}")

###############################################################################
# PART 4: COMPILATION
###############################################################################

print("\n" + "=" * 80)
print("PART 4: COMPILING A LOGICAL CLIFFORD")
print("=" * 80)

gens = csd_generator_set(construction, ('s',))
target = gens.free[0] @ targeted_s(gens.t, 2) @ gens.free[1]
fact = factorize(target, gens)
print(f"\n✅ {fact}")
print(f"   Verified: {fact.verify()}")
for entry in schedule_to_dict(schedule(fact, gens, csd)):
    print(f"   {entry['kind']:<10} {entry}")

###############################################################################
# PART 5: STATE PREPARATION
###############################################################################

print("\n" + "=" * 80)
print("PART 5: FAULT-TOLERANT STATE PREPARATION")
print("=" * 80)

prep = build_state_prep(csd, construction.layout, PrepPolicy('Z'))
print(f"\n   Depth {prep.depth()}, {prep.count('CX')} CX gates, {prep.num_detectors} postselection detectors")

FaultAnalyzer.for_state_prep(construction).analyze().summary()

###############################################################################
# PART 6: NOISY EXPERIMENTS
###############################################################################

print("\n" + "=" * 80)
print("PART 6: PREP SWEEP AND MEMORY EXPERIMENT")
print("=" * 80)

sweeps = SweepRunner(config)
prep_report = sweeps.run_prep_sweep([construction], p_grid=[1e-3, 3e-3], shots=5_000, allow_m_values=[0, 1])
prep_report.summary()

runner = ExperimentRunner(config)
memory_point = runner.memory_experiment(construction, rounds=4, model=NoiseModel(1e-3), shots=2_000)
memory_point.metrics.summary()

###############################################################################
# PART 7: EXPORT
###############################################################################

print("\n" + "=" * 80)
print("PART 7: EXPORTING REPORTS")
print("=" * 80)

report = ReportGenerator(report=prep_report)
report.to_csv('prep_sweep.csv')
report.to_json('prep_sweep.json')
ReportGenerator.gates_to_json(records, 'gates_c422.json')

print("\n" + "=" * 80)
print("✅ EXAMPLE COMPLETE")
print("=" * 80)
