import numpy as np
import pytest

from tools.gf2 import (
    kernel_basis,
    monomials_up_to,
    moebius,
    pack_rows,
    parity,
    popcount,
    rank,
    row_reduce,
    unpack_row,
    walsh_butterfly,
)


def test_popcount_and_parity():
    values = np.array([0, 1, 3, 255, 1 << 40, (1 << 63) | 1], dtype=np.uint64)
    assert popcount(values).tolist() == [0, 1, 2, 8, 1, 2]
    assert parity(values).tolist() == [0, 1, 0, 0, 1, 0]


def test_moebius_of_single_variable():
    # f = x1 on two variables
    assert moebius(np.array([0, 1, 0, 1])).tolist() == [0, 1, 0, 0]


def test_moebius_is_an_involution(rng):
    bits = rng.integers(0, 2, size=64, dtype=np.uint8)
    assert np.array_equal(moebius(moebius(bits)), bits)


def test_moebius_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        moebius(np.zeros(6, dtype=np.uint8))


def test_walsh_butterfly_of_constant():
    spectrum = walsh_butterfly(np.ones(8, dtype=np.int32))
    assert spectrum.tolist() == [8, 0, 0, 0, 0, 0, 0, 0]


def test_pack_and_unpack_across_words(rng):
    bits = rng.integers(0, 2, size=(3, 130), dtype=np.uint8)
    packed = pack_rows(bits)
    assert packed.shape == (3, 3)
    for r in range(3):
        assert np.array_equal(unpack_row(packed[r], 130), bits[r])


def test_rank_of_identity_and_duplicates():
    eye = np.eye(5, dtype=np.uint8)
    assert rank(eye) == 5
    assert rank(np.vstack([eye, eye])) == 5
    assert rank(np.zeros((0, 4), dtype=np.uint8)) == 0


def test_kernel_basis_solves_the_system(rng):
    mat = rng.integers(0, 2, size=(30, 130), dtype=np.uint8)
    basis = kernel_basis(mat)
    assert len(basis) == 130 - rank(mat)
    for vec in basis:
        assert vec.any()
        assert not ((mat.astype(np.int64) @ vec.astype(np.int64)) % 2).any()


def test_kernel_vectors_have_unit_free_coordinate(rng):
    mat = rng.integers(0, 2, size=(6, 10), dtype=np.uint8)
    echelon = row_reduce(pack_rows(mat), 10)
    free = echelon.free_columns()
    assert len(free) == echelon.nullity
    vec = echelon.kernel_vector(free[0])
    assert vec[free[0]] == 1
    assert all(vec[c] == 0 for c in free[1:])


def test_kernel_of_empty_system_is_everything():
    basis = kernel_basis(np.zeros((0, 3), dtype=np.uint8))
    assert [v.tolist() for v in basis] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_monomial_order():
    assert monomials_up_to(3, 1).tolist() == [0, 1, 2, 4]
    assert monomials_up_to(3, 2).tolist() == [0, 1, 2, 4, 3, 5, 6]
    assert monomials_up_to(4, 2).size == 11
