import pytest

from app.errors import InvalidArgumentError
from core.spectra import (
    WeightContext,
    exponent_to_pair,
    pair_to_exponent,
    s0_closed_form,
    s_k,
    t_k,
    verify_lemma1,
    verify_prop3,
    verify_sk_symmetry,
    wt_n,
    wt_n_vec,
)


def test_weight_is_taken_modulo_2n_minus_1():
    ctx = WeightContext(2)
    assert wt_n(7, ctx) == 3
    assert wt_n(15, ctx) == 0
    assert wt_n(16, ctx) == 1
    assert wt_n_vec([0, 15, 16, 14], ctx).tolist() == [0, 0, 1, 3]


def test_context_rejects_nonpositive_m():
    with pytest.raises(InvalidArgumentError):
        WeightContext(0)


@pytest.mark.parametrize("pair, exponent", [((1, 1), 1), ((0, 2), 12), ((0, 4), 9), ((0, 0), 0)])
def test_pair_to_exponent(pair, exponent):
    ctx = WeightContext(2)
    assert pair_to_exponent(*pair, ctx) == exponent
    assert exponent_to_pair(exponent, ctx) == pair


def test_pairing_is_a_bijection():
    ctx = WeightContext(3)
    images = {pair_to_exponent(j, k, ctx) for j in range(7) for k in range(9)}
    assert images == set(range(63))


def test_pair_ranges():
    ctx = WeightContext(2)
    with pytest.raises(InvalidArgumentError):
        pair_to_exponent(3, 0, ctx)
    with pytest.raises(InvalidArgumentError):
        pair_to_exponent(0, 5, ctx)
    with pytest.raises(InvalidArgumentError):
        exponent_to_pair(15, ctx)


@pytest.mark.parametrize("m", range(2, 11))
def test_weight_complement_identity(m):
    report = verify_lemma1(WeightContext(m))
    assert report.passed, report.counterexamples
    assert report.details["pairs_checked"] == ((1 << m) - 1) * (1 << m)


def test_s0_members_for_m3():
    ctx = WeightContext(3)
    assert s_k(ctx, 0).members == frozenset({0, 1, 2, 4})
    assert 4 in s_k(ctx, 0)
    assert len(t_k(ctx, 0)) == 3


@pytest.mark.parametrize("m, size", [(2, 1), (3, 4), (4, 5), (5, 16), (6, 22), (8, 93), (9, 256), (10, 386)])
def test_s0_cardinality(m, size):
    assert len(s_k(WeightContext(m), 0)) == size
    assert s0_closed_form(m) == size


@pytest.mark.parametrize("m", range(2, 11))
def test_sk_bound_and_equality_cases(m):
    report = verify_prop3(WeightContext(m))
    assert report.passed, report.counterexamples
    assert report.details["equality_cases"] == ([0] if m % 2 else [])
    assert report.details["max_card"] <= 1 << (m - 1)


@pytest.mark.parametrize("m", range(2, 8))
def test_sk_tk_symmetry(m):
    assert verify_sk_symmetry(WeightContext(m)).passed


def test_k_out_of_range():
    with pytest.raises(InvalidArgumentError):
        s_k(WeightContext(2), 5)
