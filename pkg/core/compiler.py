"""
###############################################################################
# Compiler - Logical Clifford factorization with minimal injection count
###############################################################################
# Free moves (elements of G_τ, SWAP-transversal) cost nothing; injected S / √X
# gates cost one resource state each. Factorizations alternate free elements
# and injections; schedules compress each free element into one layer of
# single-qubit gates plus a qubit relabeling.
###############################################################################
"""

import itertools
import logging
from collections import deque

import numpy as np

from .exceptions import MissingRealizationError, NotInGroupError
from .gates import (SP2_WORDS, GateRecord, LogicalAction, automorphism_circuit, g_tau_records,
                    logical_action, single_qubit_matrix)
from .groups import global_s, group_closure, identity_key, key_product, sp_order, targeted_s, targeted_sqrt_x
from .pauli import SymplecticMatrix

logger = logging.getLogger(__name__)

# Element-level BFS runs when the ambient group is at most this large
EXACT_LIMIT = 1_000_000

# Meet-in-the-middle limits
FORWARD_CAP = 200_000
MAX_HEURISTIC_INJECTIONS = 6
BACKWARD_CAP = 500_000


def _key_inverse(t, key):
    return SymplecticMatrix.from_key(t, key).inverse().key()


def default_injection_qubit(t):
    """Phase gates go on the third logical qubit of four-pair codes, else the first"""
    return 2 if t == 4 else 0


class GeneratorSet:
    ###############################################################################
    # GeneratorSet - Free (zero-cost) generators plus labeled injected gates
    ###############################################################################

    def __init__(self, free, injected):
        """
        Initialize GeneratorSet

        Args:
            free: List of GateRecord or LogicalAction (free generators)
            injected: Dict label -> LogicalAction (each costs one injection)
        """
        if not free and not injected:
            raise ValueError("GeneratorSet needs at least one generator")
        self.free_records = []
        for i, item in enumerate(free):
            if isinstance(item, GateRecord):
                self.free_records.append(item)
            else:
                self.free_records.append(GateRecord(f"g{i}", None, item, 'swap-transversal'))
        self.injected = dict(injected)
        dims = {r.action.t for r in self.free_records} | {a.t for a in self.injected.values()}
        if len(dims) != 1:
            raise ValueError(f"Generators must share one dimension, got {sorted(dims)}")
        self.t = dims.pop()

        # Unique labels keep words readable and sortable
        self.free_labels = []
        used = set()
        for i, record in enumerate(self.free_records):
            label = record.label if record.label not in used else f"{record.label}#{i}"
            used.add(label)
            self.free_labels.append(label)
        self._free_group = None
        self._tables = {}

    @property
    def free(self):
        return [r.action for r in self.free_records]

    def _edges(self):
        """(label, key, cost) in sorted label order"""
        edges = [(label, r.action.key(), 0) for label, r in zip(self.free_labels, self.free_records)]
        edges += [(label, action.key(), 1) for label, action in self.injected.items()]
        return sorted(edges, key=lambda e: e[0])

    def free_group(self):
        """{key: shortest free-generator label path} for every element of ⟨free⟩"""
        if self._free_group is None:
            start = identity_key(self.t)
            paths = {start: ()}
            queue = deque([start])
            edges = [(label, key) for label, key, cost in self._edges() if cost == 0]
            while queue:
                current = queue.popleft()
                for label, key in edges:
                    image = key_product(current, key)
                    if image not in paths:
                        paths[image] = paths[current] + (label,)
                        queue.append(image)
            self._free_group = paths
            logger.debug(f"Free group order {len(paths)}")
        return self._free_group

    def record_for(self, label):
        return self.free_records[self.free_labels.index(label)]

    def __repr__(self):
        return f"GeneratorSet(Sp{2 * self.t}, free={len(self.free_records)}, injected={sorted(self.injected)})"


class FactorStep:
    ###############################################################################
    # FactorStep - One entry of a factorization word
    ###############################################################################

    def __init__(self, kind, action, labels):
        self.kind = kind          # 'free' or 'injected'
        self.action = action
        self.labels = tuple(labels)

    def to_dict(self):
        return {'kind': self.kind, 'labels': list(self.labels), 'matrix': self.action.to_strings()}

    def __repr__(self):
        return f"FactorStep({self.kind}, {' '.join(self.labels) or 'I'})"


class Factorization:
    ###############################################################################
    # Factorization - Alternating free / injected word whose product is the target
    ###############################################################################

    def __init__(self, target, word, exact):
        self.target = target
        self.word = word
        self.exact = exact

    @property
    def injection_count(self):
        return sum(1 for step in self.word if step.kind == 'injected')

    def product(self):
        if not self.word:
            return LogicalAction.identity(self.target.t)
        result = self.word[0].action
        for step in self.word[1:]:
            result = result @ step.action
        return result

    def verify(self):
        return self.product() == self.target

    def to_dict(self):
        return {
            'injection_count': self.injection_count,
            'exact': self.exact,
            'word': [step.to_dict() for step in self.word],
        }

    def __repr__(self):
        return f"Factorization(injections={self.injection_count}, steps={len(self.word)}, exact={self.exact})"


def _word_from_labels(labels, gens):
    """Group a flat label sequence into alternating free / injected steps"""
    t = gens.t
    actions = {label: r.action for label, r in zip(gens.free_labels, gens.free_records)}
    word, run = [], []

    def close_run():
        if run:
            action = LogicalAction.identity(t)
            for label in run:
                action = action @ actions[label]
            word.append(FactorStep('free', action, run))
            run.clear()

    for label in labels:
        if label in gens.injected:
            close_run()
            word.append(FactorStep('injected', gens.injected[label], [label]))
        else:
            run.append(label)
    close_run()
    return word


###############################################################################
# 0/1 BFS over group elements
###############################################################################

def zero_one_bfs(gens, max_injections=None, cap=EXACT_LIMIT):
    """
    Minimal injection count of every reachable element

    Free edges cost 0 and injected edges cost 1; generators are tried in
    sorted label order so parents are deterministic.

    Returns:
        tuple: (dist, parent) dicts keyed by element key; parent maps to
               (previous key, label)
    """
    edges = gens._edges()
    start = identity_key(gens.t)
    dist = {start: 0}
    parent = {start: None}
    queue = deque([start])
    done = set()
    while queue:
        current = queue.popleft()
        if current in done:
            continue
        done.add(current)
        for label, key, cost in edges:
            level = dist[current] + cost
            if max_injections is not None and level > max_injections:
                continue
            image = key_product(current, key)
            if image in dist and dist[image] <= level:
                continue
            if image not in dist and len(dist) >= cap:
                if max_injections is None:
                    raise NotInGroupError(f"Element search exceeded {cap} states")
                continue
            dist[image] = level
            parent[image] = (current, label)
            if cost:
                queue.append(image)
            else:
                queue.appendleft(image)
    return dist, parent


def _labels_to(parent, key):
    labels = []
    while parent[key] is not None:
        key, label = parent[key]
        labels.append(label)
    return labels[::-1]


def injection_histogram(gens, limit=EXACT_LIMIT):
    """
    Minimal injection count of every element of the generated group

    Returns:
        dict: injection count -> number of elements

    Raises:
        ValueError: if the ambient group is larger than limit
    """
    if sp_order(gens.t) > limit:
        raise ValueError(f"Sp{2 * gens.t} has {sp_order(gens.t)} elements; histogram limited to {limit}")
    dist, _ = _exact_tables(gens)
    histogram = {}
    for level in dist.values():
        histogram[level] = histogram.get(level, 0) + 1
    logger.info(f"Injection histogram over {len(dist)} elements: {dict(sorted(histogram.items()))}")
    return dict(sorted(histogram.items()))


def _exact_tables(gens):
    if 'exact' not in gens._tables:
        gens._tables['exact'] = zero_one_bfs(gens)
    return gens._tables['exact']


###############################################################################
# Coset search
###############################################################################

def _canonical(key, free_keys):
    """(smallest key of key·F, the free element used)"""
    best, used = None, None
    for f in free_keys:
        image = key_product(key, f)
        if best is None or image < best:
            best, used = image, f
    return best, used


def _coset_search(target_key, gens, cap):
    """
    BFS on right cosets g·⟨free⟩, one injection per edge

    Returns:
        flat label sequence realizing the target
    """
    free = gens.free_group()
    free_keys = sorted(free)
    injected = sorted(gens.injected.items())
    t = gens.t

    start, used = _canonical(identity_key(t), free_keys)
    goal, _ = _canonical(target_key, free_keys)
    # coset representative -> (previous rep, free key, injection label, canonicalizing free key)
    parent = {start: (None, None, None, used)}
    frontier = [start]
    while goal not in parent:
        if not frontier:
            raise NotInGroupError("Target is not reachable from the generators")
        nxt = []
        for rep in frontier:
            for f in free_keys:
                moved = key_product(rep, f)
                for label, inj in injected:
                    rep2, used2 = _canonical(key_product(moved, inj.key()), free_keys)
                    if rep2 in parent:
                        continue
                    parent[rep2] = (rep, f, label, used2)
                    nxt.append(rep2)
                    if len(parent) > cap:
                        raise NotInGroupError(f"Coset search exceeded {cap} cosets")
        frontier = nxt

    # Unwind: rep_l = rep_{l-1} · f · inj · used_l
    chain = []
    rep = goal
    while True:
        prev, f, label, used_key = parent[rep]
        chain.append((f, label, used_key))
        if prev is None:
            break
        rep = prev
    chain.reverse()
    labels = list(free[chain[0][2]])
    for f, label, used_key in chain[1:]:
        labels += list(free[f]) + [label] + list(free[used_key])
    tail = key_product(_key_inverse(t, goal), target_key)
    labels += list(free[tail])
    return labels


###############################################################################
# Meet-in-the-middle
###############################################################################

def _heuristic_search(target_key, gens, forward_cap, max_injections):
    dist, parent = zero_one_bfs(gens, max_injections=max_injections, cap=forward_cap)
    if target_key in dist:
        return _labels_to(parent, target_key)
    forward_depth = max(dist.values())
    free = gens.free_group()
    free_keys = sorted(free)
    injected = sorted(gens.injected.items())
    t = gens.t

    for depth in range(1, max_injections - forward_depth + 1):
        steps = [(label, inj.key(), f) for label, inj in injected for f in free_keys]
        if len(steps) ** depth > BACKWARD_CAP:
            break
        best = None
        for combo in itertools.product(steps, repeat=depth):
            back = identity_key(t)
            for _, inj_key, f in combo:
                back = key_product(key_product(back, inj_key), f)
            head = key_product(target_key, _key_inverse(t, back))
            if head in dist and (best is None or dist[head] < best[0]):
                best = (dist[head], head, combo)
        if best is not None:
            _, head, combo = best
            labels = _labels_to(parent, head)
            for label, _, f in combo:
                labels += [label] + list(free[f])
            return labels
    raise NotInGroupError(f"No factorization found with at most {max_injections} injections")


###############################################################################
# Entry point
###############################################################################

def factorize(target, gens, exact_limit=EXACT_LIMIT, allow_coset_search=True,
              forward_cap=FORWARD_CAP, max_injections=MAX_HEURISTIC_INJECTIONS):
    """
    Factor a logical Clifford into free elements and injected gates

    Args:
        target: LogicalAction
        gens: GeneratorSet of the same dimension
        exact_limit: Element BFS when |Sp_2t| ≤ exact_limit
        allow_coset_search: Otherwise BFS on right cosets of the free group
                            when their number is ≤ exact_limit
        forward_cap, max_injections: Meet-in-the-middle limits

    Returns:
        Factorization (exact=True when the injection count is provably minimal)

    Raises:
        NotInGroupError: when the target cannot be reached

    Example:
        fact = factorize(targeted_s(2, 0), gens)
        fact.injection_count   # 1
    """
    if target.t != gens.t:
        raise ValueError(f"Target in Sp{2 * target.t} but generators in Sp{2 * gens.t}")
    key = target.key()
    ambient = sp_order(gens.t)

    if ambient <= exact_limit:
        dist, parent = _exact_tables(gens)
        if key not in dist:
            raise NotInGroupError("Target is not in the generated group")
        labels, exact = _labels_to(parent, key), True
    elif allow_coset_search and ambient // len(gens.free_group()) <= exact_limit:
        labels, exact = _coset_search(key, gens, exact_limit), True
    else:
        labels, exact = _heuristic_search(key, gens, forward_cap, max_injections), False

    fact = Factorization(target, _word_from_labels(labels, gens), exact)
    if not fact.verify():
        raise NotInGroupError("Internal factorization does not reproduce the target")
    logger.info(f"Factorized target with {fact.injection_count} injections ({'exact' if exact else 'heuristic'})")
    return fact


def csd_generator_set(construction, injections=('s',), qubit=None, seed_gates=None):
    """
    Free generators G_τ on the CSD code plus injected gates

    Args:
        construction: CsdConstruction
        injections: Any of 's' (targeted S), 'sx' (targeted √X), 'global_s'
        qubit: Injection target (default: default_injection_qubit)
    """
    records = g_tau_records(construction, seed_gates)
    t = records[0].action.t
    qubit = default_injection_qubit(t) if qubit is None else qubit
    injected = {}
    for name in injections:
        if name == 's':
            injected[f"S{qubit}"] = targeted_s(t, qubit)
        elif name == 'sx':
            injected[f"SX{qubit}"] = targeted_sqrt_x(t, qubit)
        elif name == 'global_s':
            injected['S_all'] = global_s(t)
        else:
            raise ValueError(f"Unknown injection '{name}'. Use 's', 'sx' or 'global_s'")
    return GeneratorSet(records, injected)


###############################################################################
# Physical schedules
###############################################################################

class CompressedLayer:
    ###############################################################################
    # CompressedLayer - One single-qubit Clifford per qubit, then a relabeling
    ###############################################################################

    def __init__(self, words, perm):
        self.words = list(words)
        self.perm = list(perm)

    @property
    def n(self):
        return len(self.words)

    def to_circuit(self):
        return automorphism_circuit(self.n, self.perm, self.words)

    def to_dict(self):
        return {'kind': 'layer', 'gates': self.words, 'relabel': self.perm}

    def __repr__(self):
        active = sum(1 for w in self.words if w)
        return f"CompressedLayer(n={self.n}, non-identity={active})"


class InjectionMarker:
    def __init__(self, label):
        self.label = label

    def to_dict(self):
        return {'kind': 'injection', 'label': self.label}

    def __repr__(self):
        return f"InjectionMarker({self.label})"


_SP2_BY_MATRIX = {single_qubit_matrix(word).tobytes(): word for word in SP2_WORDS}


def compress(circuit):
    """
    Collapse single-qubit gates and SWAPs into one CompressedLayer

    Raises:
        MissingRealizationError: for entangling gates other than SWAP
    """
    n = circuit.n
    at = list(range(n))                                 # at[position] = content
    matrices = [np.eye(2, dtype=np.uint8) for _ in range(n)]
    for name, *qubits in circuit.ops:
        if name == 'SWAP':
            a, b = qubits
            at[a], at[b] = at[b], at[a]
        elif len(qubits) == 1:
            content = at[qubits[0]]
            matrices[content] = (matrices[content] @ single_qubit_matrix(name)) & 1
        else:
            raise MissingRealizationError(f"{name}{tuple(qubits)} cannot be compressed to single-qubit gates")
    perm = [0] * n
    for position, content in enumerate(at):
        perm[content] = position
    words = [_SP2_BY_MATRIX[m.astype(np.uint8).tobytes()] for m in matrices]
    return CompressedLayer(words, perm)


def schedule(fact, gens, code=None):
    """
    Physical schedule: compressed layers alternating with injection markers

    Args:
        fact: Factorization
        gens: GeneratorSet whose free records carry circuits
        code: Optional code to verify each layer against logical_action

    Raises:
        MissingRealizationError: if a free generator has no circuit
    """
    entries = []
    for step in fact.word:
        if step.kind == 'injected':
            entries.append(InjectionMarker(step.labels[0]))
            continue
        circuit = None
        for label in step.labels:
            record = gens.record_for(label)
            if record.circuit is None:
                raise MissingRealizationError(f"Free generator '{label}' has no physical circuit")
            circuit = record.circuit.copy() if circuit is None else circuit + record.circuit
        if circuit is None:
            continue
        layer = compress(circuit)
        if code is not None and logical_action(layer.to_circuit(), code) != step.action:
            raise MissingRealizationError(f"Compressed layer for {step.labels} changes the logical action")
        entries.append(layer)
    logger.debug(f"Schedule with {len(entries)} entries, {fact.injection_count} injections")
    return entries


def schedule_to_dict(entries):
    return [entry.to_dict() for entry in entries]


def target_from_rows(rows):
    """LogicalAction from a list of 0/1 strings (row i = image of basis vector i)"""
    return LogicalAction(SymplecticMatrix.from_array(np.array([[ch == '1' for ch in r] for r in rows])))


def enumerate_group(gens, cap=EXACT_LIMIT):
    """Elements of the full generated group as LogicalActions (free and injected generators)"""
    generators = gens.free + list(gens.injected.values())
    return group_closure(generators, cap=cap)[1]
