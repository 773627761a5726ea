import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisteklov import (
    BasisSizeError,
    HarmonicPoly,
    ProblemKind,
    Spectrum,
    SpectrumEntry,
    ball_spectrum_p1,
    count_upto,
    disk_spectrum_harmonic,
    disk_spectrum_p2,
    harmonic_basis,
    harmonic_dim,
    radial_verify_p2,
    verify_ball_eigenpair,
)


# ---------------------------------------------------------------------------
# test-local exact linear algebra, used as an independent oracle
# ---------------------------------------------------------------------------

def monos(n, m):
    if n == 1:
        return [(m,)]
    return [(k, *rest) for k in range(m + 1) for rest in monos(n - 1, m - k)]


def rank(rows):
    rows = [list(r) for r in rows]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def laplacian_nullity(n, m):
    """Brute-force nullity of the Laplacian on degree-m monomials."""
    cols = monos(n, m)
    if m < 2:
        return len(cols)
    rows_idx = {a: i for i, a in enumerate(monos(n, m - 2))}
    matrix = [[Fraction(0)] * len(cols) for _ in rows_idx]
    for j, alpha in enumerate(cols):
        for i in range(n):
            if alpha[i] >= 2:
                beta = list(alpha)
                beta[i] -= 2
                matrix[rows_idx[tuple(beta)]][j] += alpha[i] * (alpha[i] - 1)
    return len(cols) - rank(matrix)


def coeff_vector(poly, monomial_list):
    return [poly.terms.get(a, Fraction(0)) for a in monomial_list]


# ---------------------------------------------------------------------------
# harmonic dimensions
# ---------------------------------------------------------------------------

def test_harmonic_dim_reference_values():
    assert harmonic_dim(2, 0) == 1
    assert harmonic_dim(4, 1) == 4
    assert harmonic_dim(3, 4) == 9
    assert harmonic_dim(1, 0) == 1 and harmonic_dim(1, 1) == 1
    assert harmonic_dim(1, 5) == 0
    assert harmonic_dim(2, 9) == 2


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_harmonic_dim_matches_nullspace_oracle(n):
    for m in range(0, 7):
        assert harmonic_dim(n, m) == laplacian_nullity(n, m)


def test_pascal_consistency_bigint():
    for n in range(2, 9):
        running = 0
        for m in range(0, 201):
            running += harmonic_dim(n, m)
            assert running == math.comb(n + m - 1, n - 1) + math.comb(n + m - 2, n - 1)


def test_harmonic_dim_rejects_bad_arguments():
    with pytest.raises(ValueError):
        harmonic_dim(0, 1)
    with pytest.raises(ValueError):
        harmonic_dim(3, -1)


# ---------------------------------------------------------------------------
# harmonic bases
# ---------------------------------------------------------------------------

def test_harmonic_basis_degree_zero_and_one():
    (one,) = harmonic_basis(2, 0)
    assert one.terms == {(0, 0): Fraction(1)}
    lin = harmonic_basis(2, 1)
    grid = monos(2, 1)
    vectors = [coeff_vector(p, grid) for p in lin]
    targets = [coeff_vector(HarmonicPoly.variable(2, i), grid) for i in range(2)]
    assert rank(vectors) == rank(vectors + targets) == 2


def test_harmonic_basis_degree_two_span():
    basis = harmonic_basis(2, 2)
    grid = monos(2, 2)
    x1sq_minus_x2sq = HarmonicPoly(2, {(2, 0): 1, (0, 2): -1})
    x1x2 = HarmonicPoly(2, {(1, 1): 1})
    vectors = [coeff_vector(p, grid) for p in basis]
    targets = [coeff_vector(q, grid) for q in (x1sq_minus_x2sq, x1x2)]
    assert len(basis) == 2
    assert rank(vectors) == rank(vectors + targets) == 2


@pytest.mark.parametrize("n,m_top", [(2, 60), (3, 14), (4, 8), (5, 6), (6, 5)])
def test_harmonic_basis_counts_and_exactness(n, m_top):
    for m in range(0, m_top + 1):
        basis = harmonic_basis(n, m)
        assert len(basis) == harmonic_dim(n, m)
        grid = monos(n, m)
        for p in basis:
            assert p.is_homogeneous(m)
            assert p.is_harmonic()
        assert rank([coeff_vector(p, grid) for p in basis]) == len(basis)


def test_harmonic_basis_cap():
    with pytest.raises(BasisSizeError):
        harmonic_basis(3, 40, max_monomials=100)
    with pytest.raises(ValueError):
        harmonic_basis(1, 3)


# ---------------------------------------------------------------------------
# polynomial plumbing
# ---------------------------------------------------------------------------

def test_poly_sphere_reduction():
    r2 = HarmonicPoly(3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
    assert r2.reduce_on_sphere().terms == {(0, 0, 0): Fraction(1)}
    assert (r2 - HarmonicPoly.constant(3, 1)).vanishes_on_sphere()
    assert (r2 * r2).reduce_on_sphere().terms == {(0, 0, 0): Fraction(1)}


def test_poly_calculus():
    p = HarmonicPoly(2, {(3, 1): Fraction(1, 2)})
    assert p.partial(0).terms == {(2, 1): Fraction(3, 2)}
    assert p.x_dot_grad().terms == {(3, 1): Fraction(2)}
    assert p.evaluate([2, 3]) == Fraction(12)
    assert p.degree() == 4 and p.is_homogeneous(4)


@given(st.integers(0, 12), st.integers(0, 12))
@settings(max_examples=25, deadline=None)
def test_times_one_minus_r2_vanishes_on_sphere(i, j):
    p = HarmonicPoly(2, {(i, j): 1})
    assert p.times_one_minus_r2().vanishes_on_sphere()


# ---------------------------------------------------------------------------
# eigenpair verification
# ---------------------------------------------------------------------------

def test_eigenpair_constant_mode():
    check = verify_ball_eigenpair(2, 0, HarmonicPoly.constant(2, 1))
    assert check.all_ok
    # the hand computation behind it: lap((1-r^2)) = -4, inward slope 2 on the circle
    phi = HarmonicPoly.constant(2, 1).times_one_minus_r2()
    assert phi.laplacian().terms == {(0, 0): Fraction(-4)}
    assert (-phi.x_dot_grad()).reduce_on_sphere().terms == {(0, 0): Fraction(2)}


def test_eigenpair_linear_mode():
    psi = HarmonicPoly.variable(2, 0)
    assert verify_ball_eigenpair(2, 1, psi).all_ok
    phi = psi.times_one_minus_r2()
    assert phi.laplacian().terms == {(1, 0): Fraction(-8)}


def test_eigenpair_whole_basis_n3():
    for psi in harmonic_basis(3, 2):
        assert verify_ball_eigenpair(3, 2, psi).all_ok


@pytest.mark.parametrize("n,m", [(2, 17), (2, 60), (3, 9), (3, 20), (4, 5),
                                 (5, 4), (6, 3)])
def test_eigenpair_across_dimensions(n, m):
    basis = harmonic_basis(n, m)
    for psi in basis:
        assert verify_ball_eigenpair(n, m, psi).all_ok


@given(st.integers(2, 4), st.integers(0, 6), st.data())
@settings(max_examples=20, deadline=None)
def test_eigenpair_for_random_combinations(n, m, data):
    basis = harmonic_basis(n, m)
    weights = data.draw(st.lists(st.integers(-3, 3), min_size=len(basis),
                                 max_size=len(basis)))
    psi = HarmonicPoly.zero(n)
    for w, p in zip(weights, basis):
        psi = psi + w * p
    if psi.is_zero:
        return
    assert verify_ball_eigenpair(n, m, psi).all_ok


def test_eigenpair_rejections():
    with pytest.raises(ValueError):
        verify_ball_eigenpair(2, 2, HarmonicPoly(2, {(2, 0): 1}))  # not harmonic
    with pytest.raises(ValueError):
        verify_ball_eigenpair(2, 2, HarmonicPoly.variable(2, 0))  # wrong degree
    with pytest.raises(ValueError):
        verify_ball_eigenpair(3, 1, HarmonicPoly.variable(2, 0))  # wrong n
    with pytest.raises(ValueError):
        verify_ball_eigenpair(2, 0, HarmonicPoly.zero(2))


# ---------------------------------------------------------------------------
# radial verification for the disk flux problem
# ---------------------------------------------------------------------------

def test_radial_reference_values():
    u1, mu3, residual = radial_verify_p2(1)
    assert (u1, mu3, residual) == (Fraction(-1, 4), 4, 0)
    u1, mu3, residual = radial_verify_p2(2)
    assert (u1, mu3, residual) == (Fraction(-1, 12), 24, 0)
    _, mu3, residual = radial_verify_p2(10)
    assert mu3 == 2200 and residual == 0


def test_radial_exact_through_200():
    for m in range(1, 201):
        u1, mu3, residual = radial_verify_p2(m)
        assert residual == 0
        assert mu3 == 2 * m * m * (m + 1)
        assert u1 == Fraction(-1, 2 * m * (m + 1))


def test_radial_rejects_m_zero():
    with pytest.raises(ValueError):
        radial_verify_p2(0)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

def test_ball_spectrum_examples():
    s = ball_spectrum_p1(2, 2)
    assert [(e.value, e.mult) for e in s.entries] == [(2, 1), (4, 2), (6, 2)]
    s = ball_spectrum_p1(3, 1)
    assert [(e.value, e.mult) for e in s.entries] == [(3, 1), (5, 3)]
    s = ball_spectrum_p1(7, 0)
    assert [(e.value, e.mult) for e in s.entries] == [(7, 1)]


def test_disk_p2_examples():
    s = disk_spectrum_p2(0)
    assert [(e.value, e.mult) for e in s.entries] == [(0, 1)]
    s = disk_spectrum_p2(1)
    assert s.entries[1].cube == 4
    assert s.entries[1].value == pytest.approx(1.587401051968199, rel=1e-15)
    s = disk_spectrum_p2(2)
    assert s.entries[2].cube == 24
    assert s.entries[2].value == pytest.approx(24 ** (1 / 3), rel=1e-15)


def test_disk_p2_cubes_exact_and_increasing():
    s = disk_spectrum_p2(300)
    values = [e.value for e in s.entries]
    assert values == sorted(values)
    for m, e in enumerate(s.entries):
        assert e.cube == 2 * m * m * (m + 1)


def test_disk_harmonic_examples():
    assert [(e.value, e.mult) for e in disk_spectrum_harmonic(0).entries] == [(0, 1)]
    s = disk_spectrum_harmonic(3)
    assert (3.0, 2) in [(e.value, e.mult) for e in s.entries]
    # separation-of-variables count: constant plus a cos/sin pair per degree
    assert count_upto(disk_spectrum_harmonic(40), 10.5) == 21


def test_spectrum_invariants():
    with pytest.raises(ValueError):
        Spectrum(ProblemKind.HARMONIC_STEKLOV, 2,
                 (SpectrumEntry(1.0, 1), SpectrumEntry(1.0, 1)))
    with pytest.raises(ValueError):
        Spectrum(ProblemKind.NEUMANN_TRACE, 2, (SpectrumEntry(0.0, 1),))
    with pytest.raises(ValueError):
        Spectrum(ProblemKind.HARMONIC_STEKLOV, 2, (SpectrumEntry(1.0, 0),))
    with pytest.raises(ValueError):
        Spectrum(ProblemKind.HARMONIC_STEKLOV, 2, (SpectrumEntry(-1.0, 1),))
    with pytest.raises(ValueError):
        ball_spectrum_p1(1, 3)
    with pytest.raises(ValueError):
        disk_spectrum_p2(-1)
