"""
###############################################################################
# Groups - Closures and orders of logical gate groups inside Sp_2t(F2)
###############################################################################
# Small groups are enumerated by BFS on integer row keys. Larger ones are
# handed to sympy as permutation groups on the 2^(2t) - 1 nonzero vectors,
# whose Schreier–Sims order computation is exact.
###############################################################################
"""

import logging
from collections import deque
from math import prod

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from .exceptions import CapExceededError
from .f2 import BitMatrix, rref
from .gates import LogicalAction
from .pauli import SymplecticMatrix

logger = logging.getLogger(__name__)

DEFAULT_CAP = 1_000_000

# Largest t for which the permutation representation is built
MAX_PERMUTATION_T = 5


def key_product(a, b):
    """Product of two matrices given as row keys (column j at bit j): a then b"""
    out = []
    for row in a:
        acc, j = 0, 0
        while row:
            if row & 1:
                acc ^= b[j]
            row >>= 1
            j += 1
        out.append(acc)
    return tuple(out)


def identity_key(t):
    return tuple(1 << i for i in range(2 * t))


def _dimension(generators):
    dims = {g.t for g in generators}
    if len(dims) != 1:
        raise ValueError(f"Generators must share one dimension, got Sp{sorted(2 * d for d in dims)}")
    return dims.pop()


def group_closure(generators, cap=DEFAULT_CAP, as_keys=False):
    """
    Enumerate the group generated by a set of logical actions

    Args:
        generators: Non-empty list of LogicalAction of equal dimension
        cap: Maximum number of elements before giving up
        as_keys: Return row keys instead of LogicalAction objects

    Returns:
        tuple: (order, elements) with elements in BFS order from the identity

    Raises:
        CapExceededError: when the closure grows past cap

    Example:
        order, _ = group_closure([h_tau(double).action])   # 2
    """
    t = _dimension(generators)
    gen_keys = [g.key() for g in generators]
    start = identity_key(t)
    seen = {start}
    order_list = [start]
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for g in gen_keys:
            image = key_product(current, g)
            if image in seen:
                continue
            seen.add(image)
            order_list.append(image)
            if len(seen) > cap:
                raise CapExceededError(f"Group closure exceeded {cap} elements")
            queue.append(image)
    logger.debug(f"Closure of {len(generators)} generators in Sp{2 * t}: {len(seen)} elements")
    if as_keys:
        return len(seen), order_list
    return len(seen), [LogicalAction.from_key(t, key) for key in order_list]


def sp_order(t):
    """
    |Sp_2t(F2)| = 2^(t²) ∏_{i=1..t} (4^i - 1)

    Example:
        sp_order(2)   # 720
    """
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    return 2 ** (t * t) * prod(4 ** i - 1 for i in range(1, t + 1))


def _vector_permutation(key, t):
    """Permutation of the nonzero vectors 1..2^(2t)-1 (shifted to 0-based points)"""
    size = 1 << (2 * t)
    images = np.zeros(size, dtype=np.int64)
    for j, row in enumerate(key):
        bit = 1 << j
        # images[v] = XOR of rows for the bits of v, built by doubling
        images[bit:2 * bit] = images[:bit] ^ row
    return Permutation([int(v) - 1 for v in images[1:]])


def group_order(generators):
    """
    Exact order of ⟨generators⟩ by Schreier–Sims on the nonzero vectors

    Raises:
        ValueError: if t exceeds MAX_PERMUTATION_T
    """
    t = _dimension(generators)
    if t > MAX_PERMUTATION_T:
        raise ValueError(f"Permutation representation limited to t ≤ {MAX_PERMUTATION_T}, got t={t}")
    group = PermutationGroup([_vector_permutation(g.key(), t) for g in generators])
    order = int(group.order())
    logger.debug(f"Schreier–Sims order of {len(generators)} generators in Sp{2 * t}: {order}")
    return order


def is_full_symplectic(generators):
    """
    True iff the generators produce all of Sp_2t(F2)

    Enumeration for t ≤ 2, Schreier–Sims above that.
    """
    t = _dimension(generators)
    target = sp_order(t)
    if t <= 2:
        try:
            order, _ = group_closure(generators, cap=target, as_keys=True)
        except CapExceededError:
            return False
        return order == target
    return group_order(generators) == target


###############################################################################
# Injected phase gates
###############################################################################

def global_s(t):
    """S on every logical qubit: X̄_i → Ȳ_i"""
    array = np.eye(2 * t, dtype=bool)
    for i in range(t):
        array[i, t + i] = True
    return LogicalAction(SymplecticMatrix.from_array(array))


def targeted_s(t, i):
    """S on logical qubit i only"""
    if not 0 <= i < t:
        raise ValueError(f"Logical qubit {i} out of range for t={t}")
    array = np.eye(2 * t, dtype=bool)
    array[i, t + i] = True
    return LogicalAction(SymplecticMatrix.from_array(array))


def targeted_sqrt_x(t, i):
    """√X on logical qubit i: Z̄_i → Ȳ_i"""
    if not 0 <= i < t:
        raise ValueError(f"Logical qubit {i} out of range for t={t}")
    array = np.eye(2 * t, dtype=bool)
    array[t + i, i] = True
    return LogicalAction(SymplecticMatrix.from_array(array))


###############################################################################
# CNOT-type actions and two-block completeness
###############################################################################

def gf2_inverse(matrix):
    """Inverse of a square 0/1 array over GF(2)"""
    matrix = np.asarray(matrix, dtype=bool)
    k = matrix.shape[0]
    augmented = BitMatrix.from_array(np.hstack([matrix, np.eye(k, dtype=bool)]), 2 * k)
    reduced, pivots, rank = rref(augmented)
    if rank < k or pivots[:k] != list(range(k)):
        raise ValueError("Matrix is singular over GF(2)")
    return reduced.to_array()[:k, k:]


def cnot_action(m):
    """diag(M, (M⁻¹)ᵀ): the action of a CNOT circuit with X-block M"""
    m = np.asarray(m, dtype=bool)
    k = m.shape[0]
    zero = np.zeros((k, k), dtype=bool)
    return LogicalAction(SymplecticMatrix.from_blocks(m, zero, zero, gf2_inverse(m).T))


def unitriangular(a, lower=False):
    """GL matrix [[I, A], [0, I]] (or [[I, 0], [A, I]] when lower) as a 0/1 array"""
    a = np.asarray(a, dtype=bool)
    k = a.shape[0]
    eye = np.eye(k, dtype=bool)
    zero = np.zeros((k, k), dtype=bool)
    return np.block([[eye, zero], [a, eye]]) if lower else np.block([[eye, a], [zero, eye]])


def embed_block_action(action, block, n_blocks):
    """Place a per-block action on block `block` of n_blocks equal blocks"""
    q = action.t
    total = q * n_blocks
    a, b, c, d = action.blocks()
    array = np.eye(2 * total, dtype=bool)
    xs = np.arange(block * q, (block + 1) * q)
    zs = total + xs
    array[np.ix_(xs, xs)] = a
    array[np.ix_(xs, zs)] = b
    array[np.ix_(zs, xs)] = c
    array[np.ix_(zs, zs)] = d
    return LogicalAction(SymplecticMatrix.from_array(array))


def transversal_cnot_action(q, control=0, target=1):
    """Logical CNOT from every qubit of block `control` to the same qubit of block `target`"""
    m = np.eye(2 * q, dtype=bool)
    for i in range(q):
        m[control * q + i, target * q + i] = True
    return cnot_action(m)


def single_block_generators(q):
    """H̄ and S̄ on each of q logical qubits plus CNOTs between neighbours: generates Sp_2q"""
    gens = []
    for i in range(q):
        h = np.eye(2 * q, dtype=bool)
        h[[i, q + i]] = h[[q + i, i]]
        gens.append(LogicalAction(SymplecticMatrix.from_array(h)))
        gens.append(targeted_s(q, i))
    for i in range(q - 1):
        m = np.eye(q, dtype=bool)
        m[i, i + 1] = True
        gens.append(cnot_action(m))
    return gens


def two_block_generators(block_generators):
    """
    Generators on two equal code blocks: the per-block group on each block
    plus transversal CNOTs in both directions

    Args:
        block_generators: LogicalActions of one block (Sp_2q)

    Returns:
        list of LogicalAction on 2q logical qubits
    """
    q = _dimension(block_generators)
    gens = [embed_block_action(g, b, 2) for b in range(2) for g in block_generators]
    gens.append(transversal_cnot_action(q, 0, 1))
    gens.append(transversal_cnot_action(q, 1, 0))
    return gens


def check_two_block_completeness(block_generators=None, q=1):
    """
    True iff two blocks with full per-block Clifford groups and transversal
    CNOTs generate Sp on all 2q logical qubits

    Args:
        block_generators: Per-block generators (default: single_block_generators(q))
        q: Logical qubits per block when block_generators is omitted
    """
    block_generators = block_generators or single_block_generators(q)
    if not is_full_symplectic(block_generators):
        logger.warning("Per-block generators do not produce the full symplectic group")
        return False
    full = is_full_symplectic(two_block_generators(block_generators))
    logger.info(f"Two-block completeness for Sp{2 * _dimension(block_generators)} blocks: {full}")
    return full
