"""Constant-coefficient biharmonic model problems on the half-space.

Three independent routes to the same boundary maps live here: exact
Fourier-side profiles in the normal variable, a banded finite-difference
solver for the fourth-order two-point problem that recovers the boundary
symbols numerically, and the explicit sphere-integral kernels evaluated by
quadrature.  Tests play the routes against one another.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg


class SolverError(RuntimeError):
    """Numerical failure inside a solve (singular system, blow-up)."""


class AdequacyError(ValueError):
    """Domain truncation too short for the requested covector."""


@dataclass(frozen=True, eq=False)
class MetricBlock:
    """Constant coefficient matrix with a tangential SPD block and a normal
    scalar; the off-diagonal normal couplings are zero by assumption."""

    a_tan: np.ndarray
    a_nn: float

    def __post_init__(self):
        a = np.asarray(self.a_tan, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("tangential block must be square")
        if not np.allclose(a, a.T, rtol=0.0, atol=1e-12):
            raise ValueError("tangential block must be symmetric")
        try:
            np.linalg.cholesky(a)
        except np.linalg.LinAlgError:
            raise ValueError("tangential block must be positive definite") from None
        if not self.a_nn > 0:
            raise ValueError("normal coefficient must be positive")
        object.__setattr__(self, "a_tan", a)

    @property
    def dim(self) -> int:
        return self.a_tan.shape[0] + 1

    @staticmethod
    def identity(n: int) -> "MetricBlock":
        return MetricBlock(np.eye(n - 1), 1.0)


@dataclass(frozen=True, eq=False)
class FourierDatum:
    """One tangential frequency with its boundary amplitude."""

    eta: np.ndarray
    amplitude: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "eta", np.atleast_1d(np.asarray(self.eta, dtype=float)))


@dataclass(frozen=True)
class HalfSpaceGrid:
    """Uniform grid on [0, L] in the normal variable."""

    h: float
    L: float

    def __post_init__(self):
        if not (self.h > 0 and self.L > 0):
            raise ValueError("need h > 0 and L > 0")
        steps = self.L / self.h
        if abs(steps - round(steps)) > 1e-9 or round(steps) < 8:
            raise ValueError("L must be an integer multiple (>= 8) of h")

    @property
    def n_steps(self) -> int:
        return round(self.L / self.h)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.n_steps + 1)


def xi_norm(A: MetricBlock, eta) -> float:
    """Normal-variable decay rate sqrt(eta . a_tan . eta / a_nn)."""
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if eta.shape != (A.dim - 1,):
        raise ValueError(f"covector must have {A.dim - 1} components")
    if not np.any(eta):
        raise ValueError("covector must be nonzero")
    return math.sqrt(float(eta @ A.a_tan @ eta) / A.a_nn)


# ---------------------------------------------------------------------------
# exact Fourier-side solutions
# ---------------------------------------------------------------------------

def fourier_solution_p1(A: MetricBlock, datum: FourierDatum, x_n):
    """Bounded profile with zero trace and normal derivative amplitude/sqrt(a_nn):
    (amplitude / sqrt(a_nn)) * x_n * exp(-|xi'| x_n)."""
    x_n = np.asarray(x_n, dtype=float)
    if np.any(x_n < 0):
        raise ValueError("x_n must be nonnegative")
    k = xi_norm(A, datum.eta)
    return datum.amplitude / math.sqrt(A.a_nn) * x_n * np.exp(-k * x_n)


def fourier_solution_p2(A: MetricBlock, datum: FourierDatum, x_n):
    """Bounded profile with trace equal to the amplitude and zero normal
    derivative: amplitude * exp(-|xi'| x_n) * (1 + |xi'| x_n)."""
    x_n = np.asarray(x_n, dtype=float)
    if np.any(x_n < 0):
        raise ValueError("x_n must be nonnegative")
    k = xi_norm(A, datum.eta)
    return datum.amplitude * np.exp(-k * x_n) * (1.0 + k * x_n)


# ---------------------------------------------------------------------------
# finite-difference recovery of the boundary symbols
# ---------------------------------------------------------------------------

def _banded_matvec(diags: list[np.ndarray], offsets: Sequence[int], x: np.ndarray):
    n = x.shape[0]
    out = np.zeros(n, dtype=x.dtype)
    for diag, off in zip(diags, offsets):
        if off >= 0:
            out[: n - off] += diag * x[off:]
        else:
            out[-off:] += diag * x[: n + off]
    return out


def _solve_ode(A: MetricBlock, k: float, grid: HalfSpaceGrid, bc_value: float,
               bc_slope: float) -> np.ndarray:
    """Solve the discretized (d^2/dx^2 - k^2)^2 u = 0 on [0, L].

    Boundary rows: u(0) = bc_value, one-sided second-order u'(0) = bc_slope,
    far field u(L) = u'(L) = 0.  Interior rows use the five-point stencil of
    the squared operator scaled by h^4.  One step of extended-precision
    iterative refinement compensates the fourth-order conditioning.
    """
    if grid.L * k < 20.0:
        raise AdequacyError(f"need L * |xi'| >= 20, got {grid.L * k:.3f}")
    h = grid.h
    n = grid.n_steps
    s = (k * h) ** 2

    ab = np.zeros((5, n + 1))
    # interior rows i = 2 .. n-2: [1, -4-2s, 6+4s+s^2, -4-2s, 1]
    ab[0, 4 : n + 1] = 1.0
    ab[1, 3:n] = -4.0 - 2.0 * s
    ab[2, 2 : n - 1] = 6.0 + 4.0 * s + s * s
    ab[3, 1 : n - 2] = -4.0 - 2.0 * s
    ab[4, 0 : n - 3] = 1.0
    # row 0: trace
    ab[2, 0] = 1.0
    # row 1: one-sided slope (-3 u0 + 4 u1 - u2) = 2 h * bc_slope
    ab[3, 0] = -3.0
    ab[2, 1] = 4.0
    ab[1, 2] = -1.0
    # row n-1: far-field slope (u_{n-2} - 4 u_{n-1} + 3 u_n) = 0
    ab[3, n - 2] = 1.0
    ab[2, n - 1] = -4.0
    ab[1, n] = 3.0
    # row n: far-field value
    ab[2, n] = 1.0

    rhs = np.zeros(n + 1)
    rhs[0] = bc_value
    rhs[1] = 2.0 * h * bc_slope

    try:
        u = scipy.linalg.solve_banded((2, 2), ab, rhs)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SolverError(f"banded solve failed: {exc}") from None
    if not np.all(np.isfinite(u)):
        raise SolverError("banded solve produced non-finite values")

    # refinement step: residual in 80-bit floats, correction in the same LU-free solve
    offsets = (2, 1, 0, -1, -2)
    diags64 = [ab[0, 2:], ab[1, 1:], ab[2], ab[3, :-1], ab[4, :-2]]
    diags = [d.astype(np.longdouble) for d in diags64]
    resid = rhs.astype(np.longdouble) - _banded_matvec(diags, offsets, u.astype(np.longdouble))
    du = scipy.linalg.solve_banded((2, 2), ab, resid.astype(float))
    u = u + du
    return u


def bvp_solve_p1(A: MetricBlock, datum: FourierDatum, grid: HalfSpaceGrid) -> float:
    """Numerically recover the trace-zero boundary symbol.

    Solves the normal-variable problem with u(0) = 0 and
    sqrt(a_nn) u'(0) = amplitude, then returns
    -(a_nn u''(0) - a_nn |xi'|^2 u(0)) / amplitude via a one-sided
    second-order stencil.  The result is amplitude-independent and converges
    at O(h^2) to twice the tangential metric norm of the covector.
    """
    k = xi_norm(A, datum.eta)
    u = _solve_ode(A, k, grid, 0.0, 1.0 / math.sqrt(A.a_nn))
    h = grid.h
    upp0 = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h**2
    return -(A.a_nn * upp0 - A.a_nn * k * k * u[0])


def bvp_solve_p2(A: MetricBlock, datum: FourierDatum, grid: HalfSpaceGrid) -> float:
    """Numerically recover the flux boundary symbol.

    Solves with u(0) = amplitude and u'(0) = 0, then returns
    sqrt(a_nn) (a_nn u'''(0) - a_nn |xi'|^2 u'(0)) / amplitude using one-sided
    second-order stencils; converges to twice the tangential metric norm cubed
    (the boundary third-derivative stencil costs one order, absorbed in the
    tolerance).
    """
    k = xi_norm(A, datum.eta)
    u = _solve_ode(A, k, grid, 1.0, 0.0)
    h = grid.h
    up0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
    uppp0 = (-2.5 * u[0] + 9.0 * u[1] - 12.0 * u[2] + 7.0 * u[3] - 1.5 * u[4]) / h**3
    return math.sqrt(A.a_nn) * (A.a_nn * uppp0 - A.a_nn * k * k * up0)


# ---------------------------------------------------------------------------
# explicit kernels
# ---------------------------------------------------------------------------

def _kernel_integrand(A: MetricBlock, which: str, x: np.ndarray, x_n: float,
                      eta: np.ndarray) -> complex:
    n = A.dim
    q = math.sqrt(float(eta @ A.a_tan @ eta) / A.a_nn)
    z = complex(float(x @ eta), x_n * q)
    if which == "K2":
        return x_n / math.sqrt(A.a_nn) * z ** (1 - n)
    return z ** (1 - n) + (n - 1) * 1j * x_n * q * z ** (-n)


def kernel_K(A: MetricBlock, which: str, x, x_n: float, quad_points: int = 256) -> float:
    """Evaluate the half-space kernels K1/K2 by their unit-sphere integrals.

    For a 1-dimensional boundary the sphere is the two points +-1 (summed
    exactly); for a 2-dimensional boundary the circle integral uses the
    periodic trapezoid rule.  The kernels are singular on the boundary, so
    x_n must be positive.  The imaginary part of the assembled integral must
    vanish to rounding and is checked before the real part is returned.
    """
    if which not in ("K1", "K2"):
        raise ValueError("which must be 'K1' or 'K2'")
    n = A.dim
    if n not in (2, 3):
        raise ValueError("kernels are implemented for total dimension 2 or 3")
    if not x_n > 0:
        raise ValueError("kernels are singular at the boundary: need x_n > 0")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (n - 1,):
        raise ValueError(f"boundary point must have {n - 1} components")

    prefactor = (-1.0) ** (n - 1) * math.factorial(n - 2) / (2.0j * math.pi) ** (n - 1)
    if n == 2:
        total = sum(
            _kernel_integrand(A, which, x, x_n, np.array([s])) for s in (1.0, -1.0)
        )
    else:
        if quad_points < 4 or quad_points % 2:
            raise ValueError("need an even quad_points >= 4")
        thetas = 2.0 * math.pi * np.arange(quad_points) / quad_points
        total = (2.0 * math.pi / quad_points) * sum(
            _kernel_integrand(A, which, x, x_n, np.array([math.cos(t), math.sin(t)]))
            for t in thetas
        )
    value = prefactor * total
    if abs(value.imag) > 1e-10:
        raise SolverError(f"kernel integral has imaginary part {value.imag:.3e}")
    return value.real


# ---------------------------------------------------------------------------
# boundary-data solves: kernel convolution vs Fourier synthesis
# ---------------------------------------------------------------------------

def _check_boundary_data(y: np.ndarray, phi: np.ndarray, h: np.ndarray):
    y = np.asarray(y, dtype=float)
    phi = np.zeros_like(y) if phi is None else np.asarray(phi, dtype=float)
    h = np.zeros_like(y) if h is None else np.asarray(h, dtype=float)
    if y.ndim != 1 or y.size < 4:
        raise ValueError("need a 1-d sample grid with at least 4 points")
    if phi.shape != y.shape or h.shape != y.shape:
        raise ValueError("data arrays must match the sample grid")
    dy = np.diff(y)
    if not np.allclose(dy, dy[0], rtol=1e-12, atol=0.0):
        raise ValueError("sample grid must be uniform")
    for name, data in (("phi", phi), ("h", h)):
        if max(abs(data[0]), abs(data[-1])) > 1e-12:
            raise ValueError(f"support violation: {name} is nonzero at the window edge")
    return y, phi, h, float(dy[0])


def solve_by_kernel(A: MetricBlock, y, phi, h, points, quad_points: int = 256,
                    min_xn: float = 1e-3) -> np.ndarray:
    """Solve the half-plane problem by discrete kernel convolution.

    ``y`` is a uniform sample grid carrying the trace data ``phi`` and the
    scaled normal-derivative data ``h`` (either may be None); ``points`` is a
    sequence of (x', x_n) evaluation points with x_n >= min_xn, kept away from
    the kernel singularity.  Trapezoid weights reduce to dy because the data
    must vanish at the window edges.
    """
    if A.dim != 2:
        raise ValueError("kernel convolution is implemented for the half-plane")
    y, phi, h, dy = _check_boundary_data(y, phi, h)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if np.any(pts[:, 1] < min_xn):
        raise ValueError(f"evaluation points need x_n >= {min_xn}")
    out = np.zeros(pts.shape[0])
    for i, (xp, xn) in enumerate(pts):
        acc = 0.0
        for yj, pj, hj in zip(y, phi, h):
            if pj:
                acc += kernel_K(A, "K1", xp - yj, xn, quad_points) * pj
            if hj:
                acc += kernel_K(A, "K2", xp - yj, xn, quad_points) * hj
        out[i] = acc * dy
    return out


def fourier_synthesis(A: MetricBlock, y, phi, h, points, eta_max: float = 40.0,
                      eta_points: int = 8193) -> np.ndarray:
    """Solve the same problem from the Fourier side.

    Applies the exact normal-variable profiles to the discrete transform of
    the boundary data and inverts by trapezoid quadrature on a frequency
    interval wide enough for the exponential decay to wash out.
    """
    if A.dim != 2:
        raise ValueError("fourier synthesis is implemented for the half-plane")
    y, phi, h, dy = _check_boundary_data(y, phi, h)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if np.any(pts[:, 1] <= 0):
        raise ValueError("evaluation points need x_n > 0")

    etas = np.linspace(-eta_max, eta_max, eta_points)
    deta = etas[1] - etas[0]
    w = np.full(eta_points, deta)
    w[0] = w[-1] = 0.5 * deta

    phase = np.exp(-1j * np.outer(etas, y))
    phi_hat = dy * phase @ phi
    h_hat = dy * phase @ h
    rate = math.sqrt(float(A.a_tan[0, 0]) / A.a_nn) * np.abs(etas)

    out = np.zeros(pts.shape[0])
    for i, (xp, xn) in enumerate(pts):
        decay = np.exp(-rate * xn)
        profile = (h_hat * (xn / math.sqrt(A.a_nn)) * decay
                   + phi_hat * decay * (1.0 + rate * xn))
        out[i] = (w * profile * np.exp(1j * etas * xp)).sum().real / (2.0 * math.pi)
    return out
