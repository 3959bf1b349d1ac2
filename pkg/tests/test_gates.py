import numpy as np
import pytest

from core.circuit import CliffordCircuit
from core.codes import ZXDuality
from core.exceptions import BudgetExceededError, MissingRealizationError, NotALogicalGateError
from core.gates import (LogicalAction, csd_word, find_swap_transversal_gates, g_tau_generators, g_tau_records,
                        h_tau, is_hadamard_swap_form, lift_circuit, lift_single_qubit, lift_swap, logical_action,
                        replay_reference_gates, s_tau, swap_network)
from core.groups import (check_two_block_completeness, global_s, group_closure, group_order, is_full_symplectic,
                         sp_order, targeted_s)
from core.pauli import PauliOperator, SymplecticMatrix, is_symplectic, symplectic_product


###############################################################################
# Paulis and symplectic matrices
###############################################################################

def test_pauli_product_sign():
    x = PauliOperator.from_string('X')
    z = PauliOperator.from_string('Z')
    assert (x * z).to_string() == '-iY'
    assert symplectic_product(PauliOperator.from_string('XXII'), PauliOperator.from_string('ZIZI')) == 1


def test_symplectic_identity_and_inverse():
    m = CliffordCircuit(2, [('H', 0), ('CX', 0, 1), ('S', 1)]).symplectic_matrix()
    assert is_symplectic(m)
    assert m.compose(m.inverse()).is_identity()
    assert SymplecticMatrix.identity(2).is_identity()


###############################################################################
# Logical actions
###############################################################################

def test_identity_circuit_has_identity_action(c422):
    action = logical_action(CliffordCircuit(c422.csd.n), c422.csd)
    assert action.is_identity()
    assert action.shape() == 'identity'


def test_non_logical_circuit_is_rejected(c422):
    with pytest.raises(NotALogicalGateError):
        logical_action(CliffordCircuit(4, [('H', 0)]), c422.seed)


def test_h_tau_and_s_tau_on_the_double(c422):
    h = h_tau(c422.double, c422.tau)
    s = s_tau(c422.double, c422.tau)
    assert h.verify(c422.double)
    assert (h.action @ h.action).is_identity()
    assert s.action.shape() == 'unitriangular'
    assert s.action.phase_block_valid()


def test_s_tau_on_csd_matches_double(c422):
    on_double = s_tau(c422.double, c422.tau)
    on_csd = s_tau(c422.csd, layout=c422.layout)
    assert on_csd.transversality == 'transversal'
    assert on_csd.action == on_double.action


def test_transversal_h_is_hadamard_up_to_swap(c422):
    assert is_hadamard_swap_form(h_tau(c422.csd, layout=c422.layout).action)


###############################################################################
# Lifting
###############################################################################

def test_lift_single_qubit_words():
    tau = ZXDuality.standard(8)
    assert lift_single_qubit('H', 0, tau).ops == [('SWAP', 0, 4)]
    assert lift_single_qubit('S', 1, tau).ops == [('CX', 1, 5)]
    assert lift_single_qubit('SQRT_X', 1, tau).ops == [('CX', 5, 1)]
    assert lift_single_qubit(np.eye(2, dtype=int), 2, tau).ops == []


def test_lift_swap_mirrors_across_duality():
    tau = ZXDuality.standard(8)
    assert lift_swap(0, 1, tau).ops == [('SWAP', 0, 1), ('SWAP', 4, 5)]
    with pytest.raises(ValueError):
        lift_swap(2, 2, tau)


def test_lift_circuit_rejects_entangling_gates():
    with pytest.raises(MissingRealizationError):
        lift_circuit(CliffordCircuit(4, [('CX', 0, 1)]), ZXDuality.standard(8))


def test_csd_word_needs_global_hadamard(c422):
    with pytest.raises(MissingRealizationError):
        csd_word(CliffordCircuit(8, [('H', 0)]), c422.layout)


def test_swap_network_realizes_permutation():
    perm = [2, 0, 3, 1]
    content = list(range(4))
    for a, b in swap_network(perm):
        content[a], content[b] = content[b], content[a]
    assert [content.index(q) for q in range(4)] == perm


###############################################################################
# Automorphisms and G_tau
###############################################################################

def test_seed_automorphisms_verify(c422):
    records = find_swap_transversal_gates(c422.seed)
    assert any(r.action.is_identity() for r in records)
    assert len({r.action.key() for r in records}) == len(records)
    assert all(r.verify(c422.seed) for r in records)


def test_brute_force_budget(c422):
    with pytest.raises(BudgetExceededError):
        find_swap_transversal_gates(c422.double)


def test_reference_gate_replay(c422):
    rows = replay_reference_gates(c422)
    assert len(rows) == 8
    assert all(row['ok'] for row in rows), [row['label'] for row in rows if not row['ok']]


def test_g_tau_records_are_swap_transversal(c422):
    records = g_tau_records(c422)
    assert all(r.verify(c422.csd) for r in records)
    assert {r.transversality for r in records} <= {'swap-transversal', 'transversal'}


@pytest.mark.parametrize('fixture, order', [('c422', 216), ('c513', 18)])
def test_g_tau_order(request, fixture, order):
    construction = request.getfixturevalue(fixture)
    assert group_closure(g_tau_generators(construction), as_keys=True)[0] == order


###############################################################################
# Group orders
###############################################################################

def test_sp_order():
    assert sp_order(1) == 6
    assert sp_order(2) == 720
    assert sp_order(4) == 47_377_612_800
    with pytest.raises(ValueError):
        sp_order(0)


def test_c513_targeted_s_completes_sp4(c513):
    gens = g_tau_generators(c513)
    assert not is_full_symplectic(gens)
    assert is_full_symplectic(gens + [targeted_s(2, 0)])
    assert group_order(gens + [targeted_s(2, 0)]) == 720


def test_closure_matches_schreier_sims(c513):
    gens = g_tau_generators(c513)
    assert group_order(gens) == group_closure(gens, as_keys=True)[0]


def test_two_block_completeness():
    assert check_two_block_completeness()


def test_mixed_dimensions_rejected():
    with pytest.raises(ValueError):
        group_closure([LogicalAction.identity(1), LogicalAction.identity(2)])


@pytest.mark.slow
def test_c422_injected_group_orders(c422):
    gens = g_tau_generators(c422)
    assert group_order(gens + [targeted_s(4, 0)]) == 47_377_612_800
    assert group_order(gens + [global_s(4)]) == 1_625_702_400
