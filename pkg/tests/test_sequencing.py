from collections import Counter

import numpy as np
import pytest
from scipy.stats import chisquare

from adaseq.core import QueryLedger, ValidationError
from adaseq.matroids import (ContractedMatroid, GraphicMatroid, IntersectionConstraint, PartitionMatroid,
                             UniformMatroid, random_graphic_matroid, random_partition_matroid)
from adaseq.sequencing import (chi2_equivalence, exact_sequence_law, random_sequence, random_sequence_independence,
                               random_sequence_rank, random_sequence_sequential, sequence_law)

GENS = ("sequential", "rank", "independence")


def tv(law_a, law_b):
    na, nb = sum(law_a.values()), sum(law_b.values())
    keys = set(law_a) | set(law_b)
    return 0.5 * sum(abs(law_a.get(k, 0) / na - law_b.get(k, 0) / nb) for k in keys)


def three_element_partition():
    return PartitionMatroid([0, 0, 1], [1, 1])


@pytest.mark.parametrize("gen", GENS)
def test_uniform_k1_is_uniform(gen):
    rng = np.random.default_rng(1)
    law = sequence_law(UniformMatroid(3, 1), gen, 9000, rng)
    assert all(len(s) == 1 for s in law)
    counts = [law[(a,)] for a in range(3)]
    assert chisquare(counts).pvalue > 0.01


def test_rank_zero_gives_empty():
    rng = np.random.default_rng(0)
    for gen in GENS:
        assert random_sequence(UniformMatroid(4, 0), rng, None, gen).order == ()
    c = ContractedMatroid(UniformMatroid(4, 2), {0, 1})
    for gen in GENS:
        assert random_sequence(c, rng, None, gen).order == ()


def test_partition_capacity_forcing():
    rng = np.random.default_rng(2)
    for _ in range(50):
        seq = random_sequence_sequential(three_element_partition(), rng).order
        assert len(seq) == 2
        if seq[0] in (0, 1):
            assert seq[1] == 2


def test_exact_law_matches_hand_count():
    law = exact_sequence_law(three_element_partition())
    assert law == pytest.approx({(0, 2): 1 / 3, (1, 2): 1 / 3, (2, 0): 1 / 6, (2, 1): 1 / 6})


def test_rank_uniform_k2_pairs_equally_likely():
    rng = np.random.default_rng(3)
    a = sequence_law(UniformMatroid(3, 2), "rank", 10_000, rng)
    b = sequence_law(UniformMatroid(3, 2), "sequential", 10_000, rng)
    assert len(a) == 6
    assert tv(a, b) < 0.05


def test_independence_first_element_law():
    rng = np.random.default_rng(4)
    m = three_element_partition()
    a = sequence_law(m, "independence", 10_000, rng)
    b = sequence_law(m, "sequential", 10_000, rng)
    first = lambda law: Counter({k: sum(v for s, v in law.items() if s[0] == k) for k in range(3)})
    assert tv(first(a), first(b)) < 0.05


def sample_matroids():
    rng = np.random.default_rng(11)
    return [UniformMatroid(8, 3),
            random_partition_matroid(10, 4, rng, 2),
            random_graphic_matroid(9, 5, rng),
            ContractedMatroid(GraphicMatroid(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]), {0}, {1, 2, 3, 4})]


@pytest.mark.parametrize("m", sample_matroids(), ids=repr)
@pytest.mark.parametrize("gen", GENS)
def test_prefix_feasible_and_maximal(m, gen):
    rng = np.random.default_rng(5)
    base = m.base if isinstance(m, ContractedMatroid) else m
    S = m.S if isinstance(m, ContractedMatroid) else frozenset()
    ground = m.X if isinstance(m, ContractedMatroid) else frozenset(range(m.n))
    for _ in range(30):
        seq = random_sequence(m, rng, None, gen)
        assert len(set(seq.order)) == len(seq.order)
        for i in range(len(seq) + 1):
            assert base.is_independent(S | seq.prefix(i))
        full = S | frozenset(seq.order)
        assert not any(base.is_independent(full | {a}) for a in ground - full)
        assert len(seq) == m.rank(ground)


def test_independence_uniform_full_rank_two_steps():
    led = QueryLedger()
    seq = random_sequence_independence(UniformMatroid(10, 10), np.random.default_rng(0), led)
    assert len(seq) == 10
    assert seq.m_steps == 2 == led.m_steps


def test_rank_generator_one_step():
    led = QueryLedger()
    for i in range(5):
        seq = random_sequence_rank(random_partition_matroid(20, 5, np.random.default_rng(i), 2),
                                   np.random.default_rng(i), led)
        assert seq.m_steps == 1
    assert led.m_steps == 5


def test_rank_generator_requires_native_rank():
    m = IntersectionConstraint([UniformMatroid(4, 2)])
    with pytest.raises(ValidationError):
        random_sequence_rank(m, np.random.default_rng(0))


def test_step_accounting():
    rng = np.random.default_rng(6)
    for m in sample_matroids():
        r = m.rank()
        for _ in range(10):
            seq = random_sequence_sequential(m, rng)
            assert seq.m_steps in (r, r + 1)
            led = QueryLedger()
            seq = random_sequence_independence(m, rng, led)
            assert seq.m_steps % 2 == 0 and seq.m_steps <= 2 * max(1, len(seq))


def test_sequential_limit():
    seq = random_sequence_sequential(UniformMatroid(6, 4), np.random.default_rng(0), limit=2)
    assert len(seq) == 2 and seq.m_steps == 2


def test_determinism():
    m = random_graphic_matroid(10, 6, np.random.default_rng(1))
    for gen in GENS:
        a = random_sequence(m, np.random.default_rng(9), None, gen)
        b = random_sequence(m, np.random.default_rng(9), None, gen)
        assert a == b


def test_chi2_equivalence_detects_difference():
    same = chi2_equivalence(Counter({"a": 500, "b": 500}), Counter({"a": 490, "b": 510}))
    diff = chi2_equivalence(Counter({"a": 800, "b": 200}), Counter({"a": 500, "b": 500}))
    assert same[1] > 0.01 and diff[1] < 1e-6
    assert chi2_equivalence(Counter({"a": 3}), Counter({"a": 5}))[1] == 1.0


def test_unknown_generator():
    with pytest.raises(ValidationError):
        random_sequence(UniformMatroid(2, 1), np.random.default_rng(0), None, "magic")
