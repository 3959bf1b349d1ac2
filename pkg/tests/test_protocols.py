import pytest

from core.codes import ConcatLayout
from core.exceptions import ProtocolError
from core.pauli import PauliOperator
from core.protocols import (CheckTracker, PrepPolicy, bare_cnot_order, build_bare_measure, build_flag_c4_x,
                            build_flag_c4_z, build_flagcilla_c4, build_injection_circuits, build_memory_circuit,
                            build_prep_experiment_circuit, build_state_prep, build_steane_round,
                            build_y_measurement, c4_checks_to_verify, encoder_circuit, logical_y, merge_parallel,
                            parallel_batches, prep_output_stabilizers, y_check_schedule, y_gate_order,
                            y_output_stabilizers, y_segments)
from core.simulation import check_determinism, simulate


def _stabilizes_all(tableau, stabilizers, up_to_sign=True):
    return all(tableau.stabilizes(p, up_to_sign=up_to_sign) for p in stabilizers)


###############################################################################
# Fragments
###############################################################################

def test_generator_touches_every_block(c422):
    assert c4_checks_to_verify(c422.csd, 0, c422.layout) == [0, 1, 2, 3]


def test_bare_measure(c422):
    fragment = build_bare_measure(c422.csd, 0, c422.layout)
    assert fragment.circuit.count('CX') == 8
    assert fragment.records == {'syndrome': 0}
    assert list(fragment.blocks) == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        build_bare_measure(c422.csd, c422.layout.n_concat_x, c422.layout)


def test_bare_cnot_order_splits_each_block():
    order = bare_cnot_order([0, 2, 5, 6, 9, 11])
    assert order == [0, 5, 9, 2, 6, 11]
    assert len({q // 4 for q in order[:3]}) == 3


def test_flagged_fragments(c422):
    for build in (build_flag_c4_x, build_flag_c4_z):
        fragment = build(c422.layout, 1)
        assert fragment.circuit.count('CX') == 6
        assert set(fragment.records) == {'syndrome', 'flag'}


def test_flagcilla_needs_earlier_values(c422):
    with pytest.raises(ProtocolError):
        build_flagcilla_c4(c422.layout, 0, CheckTracker(c422.layout.n_blocks))
    tracker = CheckTracker(c422.layout.n_blocks, known=('X', 'Z'))
    fragment = build_flagcilla_c4(c422.layout, 0, tracker)
    assert fragment.circuit.count('CX') == 8


def test_merge_parallel(c422):
    layout = c422.layout
    circuit, records = merge_parallel([build_flag_c4_x(layout, 0), build_flag_c4_x(layout, 1)])
    assert circuit.num_measurements == 4
    assert sorted(r for rec in records for r in rec.values()) == [0, 1, 2, 3]
    with pytest.raises(ProtocolError):
        merge_parallel([build_flag_c4_x(layout, 0), build_flag_c4_z(layout, 0)])


def test_parallel_batches_cover_every_generator(c422):
    batches = parallel_batches(c422.csd, c422.layout)
    assert sorted(g for batch in batches for g in batch) == list(range(c422.layout.n_concat_x))
    z_batches = parallel_batches(c422.csd, c422.layout, 'Z')
    assert sorted(g for batch in z_batches for g in batch) == list(range(c422.layout.n_concat_z))


def test_concatenated_counts_are_per_type(c422):
    layout = c422.layout
    assert layout.n_blocks + layout.n_concat_z == c422.csd.hz.rows
    x_only = ConcatLayout(layout.blocks, layout.pair_map, n_concat_x=layout.n_concat_x, n_concat_z=0)
    assert parallel_batches(c422.csd, x_only, 'Z') == []
    assert x_only.concat_rows('Z') == []
    with pytest.raises(ValueError):
        build_bare_measure(c422.csd, 0, x_only, basis='Z')

    too_many = ConcatLayout(layout.blocks, layout.pair_map, n_concat_x=layout.n_concat_x,
                            n_concat_z=layout.n_concat_z + 1)
    with pytest.raises(ProtocolError):
        build_bare_measure(c422.csd, layout.n_concat_z, too_many, basis='Z')


###############################################################################
# State preparation
###############################################################################

def test_prep_policy_validation():
    assert PrepPolicy('X').dual == 'Z'
    assert PrepPolicy(allow_m=1).accepts([0, 1, 2]).tolist() == [True, True, False]
    assert PrepPolicy(allow_m=1).m == 2
    assert PrepPolicy().to_dict()['m'] == 1
    with pytest.raises(ValueError):
        PrepPolicy('Y')
    with pytest.raises(ValueError):
        PrepPolicy(allow_m=-1)


@pytest.mark.parametrize('basis', ['Z', 'X'])
def test_state_prep_output(c422, basis):
    circuit = build_state_prep(c422.csd, c422.layout, PrepPolicy(basis))
    assert circuit.postselect_detectors() == list(range(circuit.num_detectors))
    check_determinism(circuit)
    _, tableau = simulate(circuit, seed=1)
    code = c422.csd
    assert _stabilizes_all(tableau, code.checks)
    logicals = code.logical_z if basis == 'Z' else code.logical_x
    assert _stabilizes_all(tableau, logicals, up_to_sign=False)
    assert _stabilizes_all(tableau, prep_output_stabilizers(code, basis))


@pytest.mark.parametrize('use_flagcilla', [True, False])
def test_prep_experiment_is_deterministic(c422, use_flagcilla):
    circuit = build_prep_experiment_circuit(c422.csd, c422.layout, PrepPolicy(use_flagcilla=use_flagcilla))
    assert check_determinism(circuit)
    assert len(circuit.observables()) == c422.csd.n_logicals


def test_encoder_circuit_prepares_plus_state(c422):
    code = c422.csd
    encoder = encoder_circuit(code, 'X')
    _, tableau = simulate(encoder.to_circuit())
    assert _stabilizes_all(tableau, list(code.checks) + list(code.logical_x), up_to_sign=False)


###############################################################################
# Logical Y measurement
###############################################################################

def test_y_gate_order_splits_outer_blocks():
    pauli = PauliOperator.from_string('YXZIXXII')
    assert y_gate_order(pauli) == [(0, 'Y'), (4, 'X'), (1, 'X'), (2, 'Z'), (5, 'X')]
    with pytest.raises(ProtocolError):
        y_gate_order(PauliOperator.from_string('XXIIIIII'))


def test_y_gate_order_prefixes_are_detectable_or_light(c422):
    y = logical_y(c422.csd, 0)
    order = y_gate_order(y)
    for t in range(1, len(order)):
        prefix = order[:t]
        if len(prefix) == 1:
            continue
        odd_blocks = set()
        for block in {q // 4 for q, _ in prefix}:
            letters = [letter for q, letter in prefix if q // 4 == block]
            x_odd = sum(letter in 'XY' for letter in letters) % 2
            z_odd = sum(letter in 'ZY' for letter in letters) % 2
            if x_odd or z_odd:
                odd_blocks.add(block)
        assert odd_blocks, f"prefix {prefix} commutes with every C4 check"


def test_y_segments_obey_block_rule():
    segments = y_segments(PauliOperator.from_string('YXZIXXII'))
    assert segments == [[(0, 'Y'), (4, 'X')], [(1, 'X'), (2, 'Z'), (5, 'X')]]
    assert y_check_schedule(segments) == [[], [0, 1]]


def test_logical_y_is_hermitian(c422):
    y = logical_y(c422.csd, 0)
    assert y.phase in (0, 2)
    with pytest.raises(ValueError):
        logical_y(c422.csd, c422.csd.n_logicals)


def test_y_measurement_output(c422):
    circuit = build_y_measurement(c422.csd, c422.layout, 0)
    assert circuit.postselect_detectors() == list(range(circuit.num_detectors))
    check_determinism(circuit)
    _, tableau = simulate(circuit, seed=4)
    assert tableau.stabilizes(logical_y(c422.csd, 0))
    assert _stabilizes_all(tableau, y_output_stabilizers(c422.csd, 0))


###############################################################################
# Steane rounds and injection
###############################################################################

def test_steane_round_is_deterministic(c422):
    assert check_determinism(build_steane_round(c422.csd, c422.layout))


def test_memory_circuit(c422):
    circuit = build_memory_circuit(c422.csd, c422.layout, rounds=2)
    assert check_determinism(circuit)
    assert len(circuit.observables()) == c422.csd.n_logicals
    with pytest.raises(ValueError):
        build_memory_circuit(c422.csd, c422.layout, rounds=0)


@pytest.mark.parametrize('kind', ['s_teleport', 'knill_s'])
def test_s_injection_output(c422, kind):
    code = c422.csd
    circuit = build_injection_circuits(code, kind)
    check_determinism(circuit)
    _, tableau = simulate(circuit, seed=2)
    ys = [logical_y(code, j) for j in range(code.n_logicals)]
    assert _stabilizes_all(tableau, list(code.checks) + ys)


def test_sqrtx_injection_maps_zero_to_y_eigenstates(c422):
    code = c422.csd
    circuit = build_injection_circuits(code, 'sqrtx_teleport', input_state='Z')
    check_determinism(circuit)
    _, tableau = simulate(circuit, seed=3)
    ys = [logical_y(code, j) for j in range(code.n_logicals)]
    assert _stabilizes_all(tableau, list(code.checks) + ys)


def test_unknown_injection_kind(c422):
    with pytest.raises(ValueError):
        build_injection_circuits(c422.csd, 'teleport_t')
