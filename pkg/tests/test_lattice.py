"""Rational reconstruction and exact-integer LLL."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmzv.lattice import IntLattice, lll_reduce, rational_reconstruct


def test_reconstruct_half_mod_7():
    # 1/2 = 4 mod 7
    assert rational_reconstruct(4, 7, 2) == Fraction(1, 2)


def test_reconstruct_integer():
    assert rational_reconstruct(3, 1009, 10) == Fraction(3)
    assert rational_reconstruct(1009 - 5, 1009, 10) == Fraction(-5)


def test_reconstruct_failure_is_genuine():
    # exhaustively confirm no fraction of height <= 3 equals 500 mod 1009
    hits = [
        (a, b)
        for a in range(-3, 4)
        for b in range(1, 4)
        if math.gcd(abs(a), b) == 1 and (a - 500 * b) % 1009 == 0
    ]
    assert hits == []
    assert rational_reconstruct(500, 1009, 3) is None


def test_reconstruct_validates_arguments():
    with pytest.raises(ValueError):
        rational_reconstruct(1, 7, 0)
    with pytest.raises(ValueError):
        rational_reconstruct(0, 1, 1)


@given(st.integers(-1000, 1000), st.integers(1, 1000), st.data())
def test_reconstruct_round_trip(num, den, data):
    frac = Fraction(num, den)
    bound = max(abs(frac.numerator), frac.denominator, 1)
    modulus = data.draw(st.sampled_from([2**31 - 1, 10**9 + 7, 2**61 - 1]))
    assert 2 * bound * bound < modulus
    r = frac.numerator * pow(frac.denominator, -1, modulus) % modulus
    assert rational_reconstruct(r, modulus, bound) == frac


def test_lll_identity_fixed():
    got = lll_reduce([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert got.basis == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_lll_shortens():
    got = lll_reduce([(1, 1), (1, 0)], delta=Fraction(3, 4))
    norms = sorted(sum(x * x for x in v) for v in got.basis)
    assert norms == [1, 1]


def test_lll_finds_small_relation():
    # 2*201 - 402 = 0, so (0, -2, 1) (up to sign) lies in the lattice
    got = lll_reduce([(201, 1, 0), (402, 0, 1)])
    vecs = {v for v in got.basis} | {tuple(-x for x in v) for v in got.basis}
    assert (0, -2, 1) in vecs


def test_lll_rejects_dependent_rows():
    with pytest.raises(ValueError):
        lll_reduce([(1, 2), (2, 4)])


def test_lll_rejects_bad_delta():
    with pytest.raises(ValueError):
        lll_reduce([(1, 0), (0, 1)], delta=Fraction(1, 8))


def _gram_schmidt(rows):
    basis = [[Fraction(x) for x in row] for row in rows]
    ortho, mu = [], []
    for i, v in enumerate(basis):
        coeffs = []
        w = list(v)
        for j, u in enumerate(ortho):
            den = sum(x * x for x in u)
            c = sum(a * b for a, b in zip(v, u)) / den if den else Fraction(0)
            coeffs.append(c)
            w = [a - c * b for a, b in zip(w, u)]
        ortho.append(w)
        mu.append(coeffs)
    return ortho, mu


def _is_reduced(rows, delta):
    ortho, mu = _gram_schmidt(rows)
    for i in range(len(rows)):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, len(rows)):
        lhs = sum(x * x for x in ortho[k]) + mu[k][k - 1] ** 2 * sum(
            x * x for x in ortho[k - 1]
        )
        if lhs < delta * sum(x * x for x in ortho[k - 1]):
            return False
    return True


@st.composite
def small_bases(draw):
    n = draw(st.integers(2, 4))
    rows = [
        tuple(draw(st.integers(-40, 40)) for _ in range(n)) for _ in range(n)
    ]
    return rows


@given(small_bases(), st.data())
def test_lll_output_is_reduced_and_spans(rows, data):
    delta = data.draw(st.sampled_from([Fraction(3, 4), Fraction(99, 100)]))
    try:
        got = lll_reduce(rows, delta=delta)
    except ValueError:
        # dependent rows: confirm via exact determinant of the Gram matrix
        ortho, _ = _gram_schmidt(rows)
        assert any(all(x == 0 for x in u) for u in ortho)
        return
    assert _is_reduced(got.basis, delta)
    # unimodular change of basis: same Gram determinant
    def gram_det(vs):
        ortho, _ = _gram_schmidt(vs)
        det = Fraction(1)
        for u in ortho:
            det *= sum(x * x for x in u)
        return det

    assert gram_det(got.basis) == gram_det(rows)


def test_int_lattice_validates():
    with pytest.raises(ValueError):
        IntLattice(((1, 2), (1,)))
    assert IntLattice(((1, 2), (3, 4))).rank == 2
