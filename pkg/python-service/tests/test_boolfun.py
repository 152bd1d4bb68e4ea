import numpy as np
import pytest

from app.errors import FieldMismatchError, InvalidArgumentError
from core.boolfun import (
    AnfForm,
    TruthTable,
    affine_transform,
    algebraic_degree,
    anf_of,
    bivariate_coefficient,
    bivariate_of,
    from_support,
    frobenius_twist,
    random_table,
    truth_table_of,
    tt_of,
    univariate_degree,
    univariate_interpolate,
    univariate_of,
)
from core.constructions import carlet_feng, construction1, construction2, construction2_alt
from core.field import make_field


def _trace_table(spec):
    return TruthTable(spec.n, spec.trace_vec(np.arange(spec.size)))


def test_truth_table_validation():
    with pytest.raises(InvalidArgumentError):
        TruthTable(3, np.zeros(7, dtype=np.uint8))
    with pytest.raises(InvalidArgumentError):
        TruthTable(2, np.array([0, 2, 0, 0]))
    with pytest.raises(InvalidArgumentError):
        TruthTable.from_indices(3, [8])


def test_hex_encoding_is_bit_v_at_point_v():
    assert TruthTable(2, np.array([1, 0, 0, 0])).hex() == "1"
    table = TruthTable.from_indices(3, [0, 7])
    assert table.hex() == "81"
    assert TruthTable.from_hex(3, "81") == table
    assert TruthTable.from_indices(4, [15]).hex() == "8000"


def test_from_hex_checks_length():
    with pytest.raises(InvalidArgumentError):
        TruthTable.from_hex(3, "081")


def test_weight_support_and_complement():
    table = TruthTable.from_indices(3, [1, 2, 4, 7])
    assert table.weight == 4
    assert table.is_balanced()
    assert table.support().tolist() == [1, 2, 4, 7]
    assert table.complement().support().tolist() == [0, 3, 5, 6]
    assert (table * table.complement()).weight == 0
    assert table(7) == 1 and table(3) == 0


def test_anf_of_product_and_majority():
    product = anf_of(TruthTable(2, np.array([0, 0, 0, 1])))
    assert product.monomials() == [3]
    assert product.degree == 2
    assert product.describe() == "x1*x2"
    majority = TruthTable.from_indices(3, [3, 5, 6, 7])
    assert anf_of(majority).monomials() == [3, 5, 6]
    assert algebraic_degree(majority) == 2


def test_anf_evaluation_matches_table(rng):
    table = random_table(5, rng)
    anf = anf_of(table)
    assert tt_of(anf) == table
    assert [anf.evaluate(v) for v in range(32)] == table.bits.tolist()


def test_zero_anf():
    anf = AnfForm(3, np.zeros(8, dtype=np.uint8))
    assert anf.is_zero()
    assert anf.degree == 0
    assert anf.describe() == "0"


def test_trace_function_univariate_form(gf16):
    form = univariate_interpolate(_trace_table(gf16), gf16)
    assert form.nonzero_indices().tolist() == [1, 2, 4, 8]
    assert form.coefficient(1) == gf16.one
    assert univariate_degree(form) == 1


@pytest.mark.parametrize("n", [4, 6])
def test_univariate_interpolation_reproduces_table(n, rng):
    spec = make_field(n)
    table = random_table(n, rng)
    form = univariate_interpolate(table, spec)
    assert form.satisfies_frobenius_closure()
    assert form.coeffs[0] == table(0)
    assert form.coeffs[spec.order] == table.weight % 2
    assert truth_table_of(form) == table
    assert univariate_degree(form) == algebraic_degree(table)


@pytest.mark.parametrize("n", [6, 8])
def test_univariate_degree_matches_anf_degree(n, rng):
    spec = make_field(n)
    tables = [random_table(n, rng) for _ in range(20)]
    tables += [construction1(spec), construction2(spec), construction2_alt(spec), carlet_feng(spec)]
    for table in tables:
        assert univariate_degree(univariate_interpolate(table, spec)) == algebraic_degree(table)


def test_cyclotomic_shortcut_agrees_with_full_sum(gf64, rng):
    table = random_table(6, rng)
    fast = univariate_interpolate(table, gf64)
    full = univariate_interpolate(table, gf64, use_cyclotomic=False)
    assert fast == full


def test_interpolation_needs_matching_field(gf16):
    with pytest.raises(FieldMismatchError):
        univariate_interpolate(TruthTable.zeros(6), gf16)


def test_bivariate_conversion(gf64, rng):
    table = random_table(6, rng)
    form = univariate_interpolate(table, gf64)
    bc = bivariate_of(form)
    assert bc.grid.shape == (7, 9)
    assert univariate_of(bc) == form
    for i in (1, 5, 9, 21, 62):
        assert bivariate_coefficient(bc, i) == form.coefficient(i)
    assert bc.grid[0, 0] == form.coeffs[0] ^ form.coeffs[63]


def test_frobenius_twist(gf16, rng):
    trace_table = _trace_table(gf16)
    assert frobenius_twist(trace_table, gf16, 1) == trace_table
    table = random_table(4, rng)
    assert frobenius_twist(table, gf16, 4) == table
    twisted = frobenius_twist(table, gf16, 1)
    assert twisted.weight == table.weight
    assert frobenius_twist(twisted, gf16, 3) == table


def test_affine_transform(rng):
    table = random_table(4, rng)
    identity = np.eye(4, dtype=np.int64)
    assert affine_transform(table, identity) == table
    shifted = affine_transform(table, identity, shift=5)
    assert shifted.bits.tolist() == [table(v ^ 5) for v in range(16)]
    swap = np.eye(4, dtype=np.int64)[[1, 0, 2, 3]]
    assert algebraic_degree(affine_transform(table, swap)) == algebraic_degree(table)
    with pytest.raises(InvalidArgumentError):
        affine_transform(table, np.eye(3))


def test_from_support(gf16):
    table = from_support(gf16, [gf16.one, gf16.alpha_power(1)])
    assert table.support().tolist() == [1, 2]
    with pytest.raises(FieldMismatchError):
        from_support(gf16, [make_field(6).one])
