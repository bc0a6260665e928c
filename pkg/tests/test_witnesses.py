import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advbound import measures as M
from advbound.constructions import gen_fpp, gen_gth, gen_or, gen_osp, gen_random_partial, osp_index
from advbound.core import str_to_word
from advbound.errors import (
    EmptyWitness,
    IncompleteFamily,
    InvalidPartition,
    InvalidWitness,
    NotADistribution,
    WordNotInDomain,
)
from advbound.witnesses import (
    DistanceScheme,
    DistributionFamily,
    Rank1Witness,
    RelationalWitness,
    WeightScheme,
    allones_relational,
    as_rank1,
    dump_witness,
    eval_distance_scheme,
    eval_mm_witness,
    eval_rank1,
    eval_rank1_general,
    eval_relational,
    eval_weighted,
    index_distance_scheme,
    load_witness,
    parse_rational,
    uniform_rank1,
    witness_to_json,
)


def w(s):
    return str_to_word(s)


def relational_by_definition(f, R):
    """Direct transcription over all ordered pairs and positions."""
    best = None
    dom = f.domain
    for x in dom:
        for y in dom:
            r = R.r(x, y)
            if r == 0:
                continue
            for i in range(f.n):
                if x[i] == y[i]:
                    continue
                thx = sum(R.r(x, z) for z in dom) / sum(R.r(x, z) for z in dom if z[i] != x[i])
                thy = sum(R.r(y, z) for z in dom) / sum(R.r(y, z) for z in dom if z[i] != y[i])
                v = max(thx, thy)
                best = v if best is None else min(best, v)
    return best


def random_relation(f, rnd):
    pairs = [(x, y, Fraction(rnd.randint(0, 3))) for x in f.domain for y in f.domain
             if x < y and f(x) != f(y)]
    if all(r == 0 for *_, r in pairs):
        pairs[0] = (pairs[0][0], pairs[0][1], Fraction(1))
    return RelationalWitness.from_pairs(pairs)


def random_rank1(f, rnd, A=(0,)):
    A = frozenset(A)
    B = frozenset(range(f.h)) - A
    X = [x for x in f.domain if f(x) in A]
    Y = [y for y in f.domain if f(y) in B]
    p = {x: Fraction(rnd.randint(0, 3)) for x in X}
    q = {y: Fraction(rnd.randint(0, 3)) for y in Y}
    p[X[0]] += 1
    q[Y[-1]] += 1
    return Rank1Witness(A, B, p, q)


functions = st.builds(
    lambda n, k, seed: gen_random_partial(n, 2, 2, Fraction(k, 4), seed),
    st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**63))


# --- examples -------------------------------------------------------------------

def test_allones_on_gth4():
    f = gen_gth(4)
    R = allones_relational(f)
    assert len(R.weights) == 4
    assert eval_relational(f, R) == 2
    assert eval_weighted(f, WeightScheme.from_relational(R)) == 2


def test_uniform_rank1_on_fpp2():
    f = gen_fpp(2)
    W = uniform_rank1(f)
    assert eval_rank1(f, W) == Fraction(7, 3)
    assert eval_rank1_general(f, W) == Fraction(7, 3)
    assert eval_rank1(f, W) <= M.ca1(f)


def test_osp4_index_distance_scheme():
    f = gen_osp(4)
    D = index_distance_scheme(f, osp_index)
    assert len(D.d) == 6
    res = eval_distance_scheme(f, D)
    assert res.W == Fraction(14, 3)
    assert res.bound == Fraction(14, 15)


def test_uniform_mm_on_gth4():
    f = gen_gth(4)
    P = DistributionFamily({x: (Fraction(1, 4),) * 4 for x in f.domain})
    assert eval_mm_witness(f, P) == 2
    assert eval_mm_witness(f, P) >= M.mm(f)


def test_mm_zero_overlap_is_infinite():
    f = gen_gth(4)
    P = DistributionFamily({x: tuple(Fraction(v) for v in x) for x in f.domain})
    assert eval_mm_witness(f, P) == math.inf


def test_relational_matches_definition_on_examples():
    for f in (gen_gth(4), gen_osp(4), gen_or(3)):
        R = allones_relational(f)
        assert eval_relational(f, R) == relational_by_definition(f, R)


# --- validation errors -----------------------------------------------------------

def test_witness_errors():
    f = gen_gth(4)
    a, b, c = w("1000"), w("0010"), w("0100")
    with pytest.raises(EmptyWitness):
        eval_relational(f, RelationalWitness({}))
    with pytest.raises(InvalidWitness):
        eval_relational(f, RelationalWitness.from_pairs([(a, c, 1)]))
    with pytest.raises(InvalidWitness):
        eval_relational(f, RelationalWitness.from_pairs([(a, b, -1)]))
    with pytest.raises(InvalidWitness):
        RelationalWitness.from_pairs([(a, b, 1), (b, a, 2)])
    with pytest.raises(WordNotInDomain):
        eval_relational(f, RelationalWitness.from_pairs([(w("1111"), b, 1)]))
    with pytest.raises(IncompleteFamily):
        eval_mm_witness(f, DistributionFamily({a: (Fraction(1),) + (Fraction(0),) * 3}))
    with pytest.raises(NotADistribution):
        eval_mm_witness(f, DistributionFamily({x: (Fraction(1, 2),) * 4 for x in f.domain}))
    with pytest.raises(InvalidPartition):
        eval_rank1(f, Rank1Witness(frozenset({0}), frozenset({0, 1}), {a: 1}, {b: 1}))
    with pytest.raises(InvalidPartition):
        eval_rank1(f, Rank1Witness(frozenset({0}), frozenset({1}), {b: 1}, {a: 1}))
    with pytest.raises(NotADistribution):
        eval_rank1(f, Rank1Witness(frozenset({0}), frozenset({1}), {a: 0}, {b: 1}))
    with pytest.raises(InvalidWitness):
        eval_distance_scheme(f, DistanceScheme({(a, b): 0}))
    with pytest.raises(EmptyWitness):
        eval_distance_scheme(f, DistanceScheme({}))


def test_weighted_needs_wprime_at_least_w():
    f = gen_gth(4)
    R = allones_relational(f)
    s = WeightScheme.from_relational(R)
    key = next(iter(s.wprime))
    low = dict(s.wprime)
    low[key] = Fraction(1, 2)
    with pytest.raises(InvalidWitness):
        eval_weighted(f, WeightScheme(R, low))


# --- soundness and consistency properties -------------------------------------------

@settings(max_examples=60, deadline=None)
@given(functions, st.integers(0, 2**32))
def test_relational_matches_definition(f, seed):
    R = random_relation(f, random.Random(seed))
    assert eval_relational(f, R) == relational_by_definition(f, R)


@settings(max_examples=60, deadline=None)
@given(functions, st.integers(0, 2**32))
def test_rank1_forms_agree_and_stay_below_ca1(f, seed):
    W = random_rank1(f, random.Random(seed))
    v = eval_rank1(f, W)
    assert v == eval_rank1_general(f, W)
    if v is not None:
        assert v <= M.ca1(f)


@settings(max_examples=60, deadline=None)
@given(functions, st.integers(0, 2**32))
def test_rank1_round_trips_through_relation(f, seed):
    W = random_rank1(f, random.Random(seed)).normalized()
    R = RelationalWitness.from_pairs((x, y, px * qy) for x, px in W.p.items() for y, qy in W.q.items())
    back = as_rank1(f, R)
    assert back is not None
    assert eval_rank1(f, back) == eval_rank1(f, W)
    assert eval_relational(f, R) == eval_rank1(f, W)


def test_as_rank1_rejects_matching():
    f = gen_gth(4)
    R = RelationalWitness.from_pairs([(w("1000"), w("0010"), 1), (w("0100"), w("0001"), 1)])
    assert as_rank1(f, R) is None


@settings(max_examples=60, deadline=None)
@given(functions, st.integers(0, 2**32))
def test_mm_witness_never_below_mm(f, seed):
    rnd = random.Random(seed)
    p = {}
    for x in f.domain:
        raw = [rnd.randint(0, 3) for _ in range(f.n)]
        raw[rnd.randrange(f.n)] += 1
        p[x] = tuple(Fraction(v, sum(raw)) for v in raw)
    assert eval_mm_witness(f, DistributionFamily(p)) >= M.mm(f)


@settings(max_examples=60, deadline=None)
@given(functions, st.integers(0, 2**32))
def test_weighted_with_larger_wprime_is_below_relational(f, seed):
    rnd = random.Random(seed)
    R = random_relation(f, rnd)
    wp = {k: v + rnd.randint(0, 2) for k, v in WeightScheme.from_relational(R).wprime.items()}
    assert eval_weighted(f, WeightScheme(R, wp)) <= eval_relational(f, R)


# --- JSON -------------------------------------------------------------------------------

def all_kinds():
    f4, fpp, osp = gen_gth(4), gen_fpp(2), gen_osp(4)
    R = allones_relational(f4)
    return [
        R,
        WeightScheme.from_relational(R),
        DistributionFamily({x: (Fraction(1, 4),) * 4 for x in f4.domain}),
        uniform_rank1(fpp),
        index_distance_scheme(osp, osp_index),
    ]


@pytest.mark.parametrize("witness", all_kinds(), ids=lambda x: type(x).__name__)
def test_json_round_trip(witness):
    text = dump_witness(witness)
    assert json.loads(text)["type"] in ("relational", "weighted", "mm", "rank1", "distance")
    assert load_witness(text, 2) == witness
    assert witness_to_json(load_witness(text, 2)) == json.loads(text)


def test_weighted_without_wprime_defaults_to_w():
    doc = {"type": "weighted", "w": [{"x": "1000", "y": "0010", "w": "1"}]}
    s = load_witness(json.dumps(doc), 2)
    assert s.wprime[(w("1000"), w("0010"), 0)] == 1
    assert s.wprime[(w("0010"), w("1000"), 2)] == 1


@pytest.mark.parametrize("text", ["2/4", "1/1", "0/3", "1.5", "1e3", "+1", "1/0", " 1", "01"])
def test_rational_strictness(text):
    with pytest.raises(InvalidWitness):
        parse_rational(text)


def test_rational_accepts_canonical():
    assert parse_rational("-3/7") == Fraction(-3, 7)
    assert parse_rational("0") == 0
    with pytest.raises(InvalidWitness):
        parse_rational(1)


@pytest.mark.parametrize("doc", [
    "[]",
    "not json",
    '{"pairs": []}',
    '{"type": "nope"}',
    '{"type": "relational", "pairs": [{"x": "1000", "y": "0010"}]}',
    '{"type": "relational", "pairs": [{"x": "1020", "y": "0010", "r": "1"}]}',
    '{"type": "distance", "pairs": [{"x": "1000", "y": "0010", "d": "1"}]}',
    '{"type": "distance", "pairs": [{"x": "1000", "y": "0010", "d": true}]}',
    '{"type": "weighted", "w": [], "w_prime": [{"x": "1000", "y": "0010", "i": 0, "w": "1"}]}',
    '{"type": "rank1", "A": ["0"], "B": [1], "p": {}, "q": {}}',
    '{"type": "mm", "p": []}',
])
def test_malformed_documents(doc):
    with pytest.raises(InvalidWitness):
        load_witness(doc, 2)
