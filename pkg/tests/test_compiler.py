import pytest

from core.circuit import CliffordCircuit
from core.compiler import (GeneratorSet, InjectionMarker, compress, csd_generator_set, factorize,
                           injection_histogram, schedule, schedule_to_dict, target_from_rows)
from core.exceptions import MissingRealizationError, NotInGroupError
from core.gates import g_tau_records, logical_action
from core.groups import targeted_s, targeted_sqrt_x
from tools.reproduction import histogram_median


@pytest.fixture(scope='module')
def s_only(c513):
    return csd_generator_set(c513, ('s',))


def test_c513_histogram_s_only(s_only):
    histogram = injection_histogram(s_only)
    assert sum(histogram.values()) == 720
    assert max(histogram) == 4
    assert histogram[0] == 18
    assert histogram_median(histogram) <= 2


def test_c513_histogram_with_sqrt_x(c513, s_only):
    combined = injection_histogram(csd_generator_set(c513, ('s', 'sx')))
    assert sum(combined.values()) == 720
    assert max(combined) <= max(injection_histogram(s_only))
    assert histogram_median(combined) <= 2


def test_free_group_covering_everything(c513):
    gens = GeneratorSet([r.action for r in g_tau_records(c513)] + [targeted_s(2, 0)], {})
    assert injection_histogram(gens) == {0: 720}


def test_free_element_needs_no_injection(s_only):
    target = s_only.free[0] @ s_only.free[1]
    fact = factorize(target, s_only)
    assert fact.injection_count == 0
    assert fact.exact
    assert fact.verify()


def test_targeted_s_needs_one_injection(s_only):
    fact = factorize(targeted_s(2, 0), s_only)
    assert fact.injection_count == 1
    assert fact.verify()
    assert fact.to_dict()['injection_count'] == 1


def test_identity_target():
    gens = GeneratorSet([targeted_s(2, 0)], {'SX0': targeted_sqrt_x(2, 0)})
    fact = factorize(target_from_rows(['1000', '0100', '0010', '0001']), gens)
    assert fact.word == []
    assert fact.verify()


def test_unreachable_target(c513):
    gens = GeneratorSet(g_tau_records(c513), {})
    with pytest.raises(NotInGroupError):
        factorize(targeted_s(2, 0), gens)


def test_dimension_mismatch(s_only):
    with pytest.raises(ValueError):
        factorize(targeted_s(1, 0), s_only)


def test_unknown_injection(c513):
    with pytest.raises(ValueError):
        csd_generator_set(c513, ('t',))


def test_schedule_alternates_layers_and_injections(c513, s_only):
    target = s_only.free[0] @ targeted_s(2, 0) @ s_only.free[1]
    fact = factorize(target, s_only)
    entries = schedule(fact, s_only, c513.csd)
    markers = [e for e in entries if isinstance(e, InjectionMarker)]
    assert len(markers) == fact.injection_count
    for entry in schedule_to_dict(entries):
        assert entry['kind'] in ('layer', 'injection')


def test_compress_keeps_logical_action(c422):
    record = g_tau_records(c422)[0]
    layer = compress(record.circuit)
    assert logical_action(layer.to_circuit(), c422.csd) == record.action


def test_compress_rejects_entangling_gates():
    with pytest.raises(MissingRealizationError):
        compress(CliffordCircuit(2, [('CX', 0, 1)]))


@pytest.mark.slow
def test_c422_targeted_s_factorization(c422):
    gens = csd_generator_set(c422, ('s',))
    fact = factorize(targeted_s(4, 2), gens)
    assert fact.injection_count == 1
    assert fact.verify()
