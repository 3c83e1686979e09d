"""Trigonometric Rosen-Morse potential: spectrum, exact solutions, node rules.

    V0(x) = a(a+1)/2 csc^2 x - b cot x,   0 < x < pi,   a > 0.

The left solution psi_L (vanishing at 0) is evaluated from two closed forms
of the same function:

* the single-term series in w = 1 - exp(-2ix), |w| = 2 sin x, which is
  accurate near x = 0 where psi_L ~ sin^(a+1) x;
* the two-term connection form in z = exp(2ix), with Gamma-function
  coefficients kappa_L, rho_L.  Its first 2F1 has c - a - b = -2a - 1 and
  diverges on |z| = 1, so it is summed after an Euler transformation; both
  series then converge absolutely on the unit circle.

Each point takes whichever form has the smaller rounding-amplification
estimate.  psi_R is the mirror image, psi_R(x; b) = psi_L(pi - x; -b), which
coincides with the kappa_R/rho_R form (see ``psi_R_connection``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import BranchError, ParameterPoleError, PreconditionError, SpectralCollisionError
from .evaluator import SolutionEvaluator, interior
from .oracle import quadrature

DIRECT_RADIUS = 0.9
CONNECTION_COND_OK = 1e2
DIRECT_COND_MAX = 1e6
COLLISION_TOL = 1e-9


@dataclass(frozen=True)
class TrmParams:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise PreconditionError("a must be positive")
        if not math.isfinite(self.b):
            raise PreconditionError("b must be finite")

    def mirrored(self) -> "TrmParams":
        return TrmParams(self.a, -self.b)


@dataclass(frozen=True)
class AuxExponents:
    mu: complex
    nu: complex


def potential(p: TrmParams, x):
    """V0(x) = a(a+1)/2 csc^2 x - b cot x on (0, pi)."""
    arr = interior(x)
    s = np.sin(arr)
    v = 0.5 * p.a * (p.a + 1.0) / s**2 - p.b * np.cos(arr) / s
    return float(v) if arr.ndim == 0 else v


def bound_energy(p: TrmParams, n: int) -> float:
    """E_n = (n+a+1)^2/2 - b^2 / (2 (n+a+1)^2)."""
    if n < 0 or int(n) != n:
        raise PreconditionError("n must be a non-negative integer")
    k = n + p.a + 1.0
    return 0.5 * k * k - p.b * p.b / (2.0 * k * k)


def exponents(p: TrmParams, E) -> AuxExponents:
    """mu = 2b / sqrt(E + sqrt(E^2 + b^2)), nu = 1 - sqrt(E + sqrt(E^2 + b^2)), principal roots."""
    E = complex(E)
    inner = E * E + p.b * p.b
    if inner == 0:
        raise BranchError("E^2 + b^2 = 0: exponents undefined")
    s2 = E + cmath.sqrt(inner)
    if s2 == 0:
        raise BranchError("E + sqrt(E^2 + b^2) = 0: exponents undefined")
    s = cmath.sqrt(s2)
    return AuxExponents(mu=2.0 * p.b / s, nu=1.0 - s)


def _bound_index(a: float, nu: complex) -> int | None:
    """n if nu + a = -n (a bound-state energy), else None."""
    t = nu + a
    n = round(t.real)
    if n <= 0 and abs(t - n) < 1e-12:
        return -n
    return None


def kappa_L(a: float, mu: complex, nu: complex) -> complex:
    return (specfun.gamma(2 * a + 2) * specfun.gamma(1 - nu - 0.5j * mu)
            * specfun.rgamma(a + 1 - 0.5j * mu) * specfun.rgamma(a + 2 - nu))


def rho_L(a: float, mu: complex, nu: complex) -> complex:
    return (cmath.exp((2 * a + 1) * cmath.log(0.5j)) * specfun.gamma(2 * a + 2)
            * specfun.gamma(nu - 1 + 0.5j * mu)
            * specfun.rgamma(a + 1 + 0.5j * mu) * specfun.rgamma(a + nu))


def _right_coefficients(a: float, mu: complex, nu: complex):
    """(kappa_R, rho_R, c) where c bounds the cancellation inside the brackets."""
    g = specfun.gamma(nu - 0.5j * mu) * specfun.gamma(1 - nu + 0.5j * mu)
    k1 = cmath.exp(0.5 * mu * math.pi) * specfun.rgamma(a + 1 + 0.5j * mu) * specfun.rgamma(-a - 0.5j * mu)
    k2 = cmath.exp(-1j * nu * math.pi) * specfun.rgamma(a + nu) * specfun.rgamma(1 - a - nu)
    r1 = cmath.exp(-0.5 * mu * math.pi) * specfun.rgamma(a + 1 - 0.5j * mu) * specfun.rgamma(-a + 0.5j * mu)
    r2 = cmath.exp(1j * nu * math.pi) * specfun.rgamma(a + 2 - nu) * specfun.rgamma(nu - a - 1)
    kb, rb = k1 + k2, r1 + r2
    c = 1.0
    if kb != 0:
        c = max(c, (abs(k1) + abs(k2)) / abs(kb))
    if rb != 0:
        c = max(c, (abs(r1) + abs(r2)) / abs(rb))
    return g * kappa_L(a, mu, nu) * kb, -g * rho_L(a, mu, nu) * rb, c


def kappa_R(a: float, mu: complex, nu: complex) -> complex:
    return _right_coefficients(a, mu, nu)[0]


def rho_R(a: float, mu: complex, nu: complex) -> complex:
    return _right_coefficients(a, mu, nu)[1]


def _direct(a, mu, nu, x, want_condition=False):
    """Single-term form exp(p0 x) sin^(a+1) x 2F1(nu+a, a+1-i mu/2; 2a+2; 1 - e^{-2ix})."""
    p0 = -(0.5 * mu + 1j * (nu + a))
    e = np.exp(-2j * x)
    w = 1.0 - e
    A, B, C = nu + a, a + 1 - 0.5j * mu, 2 * a + 2
    F, dF, cond = specfun.hyp2f1_pair(A, B, C, w, return_condition=True)
    s = np.sin(x)
    pre = np.exp(p0 * x) * s ** (a + 1)
    u = pre * F
    du = u * (p0 + (a + 1) * np.cos(x) / s) + pre * dF * (2j * e)
    if want_condition:
        return u, du, cond
    return u, du


def _basis_terms(a, mu, nu, x):
    """Connection basis f1, f2 (z = e^{2ix}), derivatives and series condition numbers."""
    z = np.exp(2j * x)
    s = np.sin(x)
    cot = np.cos(x) / s
    sma = s ** (-a)

    # f1 after Euler: (1-z)^(-2a-1) = (2 sin x)^(-2a-1) e^{-i(2a+1)(x - pi/2)}
    q1 = -(0.5 * mu - 1j * (nu + a)) - 1j * (2 * a + 1)
    c1 = 2.0 ** (-2 * a - 1) * cmath.exp(0.5j * math.pi * (2 * a + 1))
    A1, B1, C1 = 0.5j * mu - a, nu - a - 1, nu + 0.5j * mu
    G1, dG1, k1 = specfun.hyp2f1_pair(A1, B1, C1, z, return_condition=True)
    pre1 = c1 * np.exp(q1 * x) * sma
    f1 = pre1 * G1
    df1 = f1 * (q1 - a * cot) + pre1 * dG1 * (2j * z)

    q2 = 0.5 * mu + 1j * (1 - nu - a)
    A2, B2, C2 = 1 - nu - a, -a - 0.5j * mu, 2 - nu - 0.5j * mu
    F2, dF2, k2 = specfun.hyp2f1_pair(A2, B2, C2, z, return_condition=True)
    pre2 = np.exp(q2 * x) * sma
    f2 = pre2 * F2
    df2 = f2 * (q2 - a * cot) + pre2 * dF2 * (2j * z)
    return (f1, f2), (df1, df2), (k1, k2)


def _combine(c1, c2, a, mu, nu, x):
    """c1 f1 + c2 f2; returns (u, u', condition estimate)."""
    (f1, f2), (df1, df2), (k1, k2) = _basis_terms(a, mu, nu, x)
    t1 = c1 * f1
    t2 = c2 * f2
    u = t1 + t2
    du = c1 * df1 + c2 * df2
    cond = (np.abs(t1) * k1 + np.abs(t2) * k2) / np.maximum(np.abs(u), 1e-300)
    return u, du, cond


def _two_term(a, mu, nu, x):
    """kappa_L f1 + rho_L f2."""
    return _combine(kappa_L(a, mu, nu), rho_L(a, mu, nu), a, mu, nu, x)


def _mirror_term(a, mu, nu, x):
    """psi_L(x; mu) written as psi_R(pi - x; -mu) = kappa_R f1 + rho_R f2 at pi - x."""
    kr, rr, c = _right_coefficients(a, -mu, nu)
    u, du, cond = _combine(kr, rr, a, -mu, nu, np.pi - x)
    return u, -du, cond * c


def _safe(form, *args):
    # a form whose Gamma factors or series parameters hit a pole is simply unavailable
    try:
        return form(*args)
    except (ParameterPoleError, specfun.PoleError):
        return None


def _check_poles(a, mu, nu):
    for gc in (nu + 0.5j * mu, 2 - nu - 0.5j * mu):
        if specfun._nonpositive_integer(complex(gc)) is not None:
            raise ParameterPoleError(f"2F1 lower parameter {gc!r} is a non-positive integer")


def _best_connection(a, mu, nu, x):
    # the left and mirrored right connection forms cancel in opposite regimes
    # (roughly exp(+-pi mu)); the mirror is only tried where the first is poor
    first = _safe(_two_term, a, mu, nu, x)
    if first is None:
        second = _safe(_mirror_term, a, mu, nu, x)
        if second is None:
            raise ParameterPoleError("both connection forms hit a Gamma pole")
        return second[0], second[1]
    u, du, cond = first
    poor = cond > CONNECTION_COND_OK
    if np.any(poor):
        second = _safe(_mirror_term, a, mu, nu, x[poor])
        if second is not None:
            mu2, mdu2, mc = second
            pick = mc < cond[poor]
            idx = np.nonzero(poor)[0][pick]
            u[idx], du[idx] = mu2[pick], mdu2[pick]
    return u, du


def left_solution(a: float, mu: complex, nu: complex, x: np.ndarray):
    """Raw complex (psi_L, psi_L') at an array of interior points."""
    x = np.asarray(x, dtype=float)
    n = _bound_index(a, nu)
    if n is not None:
        # terminating series: the single-term form is exact everywhere
        return _direct(a, mu, complex(-(n + a)), x)
    u = np.empty(x.shape, dtype=complex)
    du = np.empty(x.shape, dtype=complex)
    near = (x < 0.5 * np.pi) & (2.0 * np.sin(x) <= DIRECT_RADIUS)
    rest = ~near
    if np.any(near):
        ud, dud, cd = _direct(a, mu, nu, x[near], want_condition=True)
        u[near], du[near] = ud, dud
        # a badly conditioned direct sum hands the point over to the connection form
        bad = np.zeros(x.shape, dtype=bool)
        bad[near] = cd > DIRECT_COND_MAX
        rest |= bad
    if np.any(rest):
        u[rest], du[rest] = _best_connection(a, mu, nu, x[rest])
    return u, du


def _psi_L_func(p: TrmParams, mu, nu):
    def f(x):
        return left_solution(p.a, mu, nu, x)
    return f


def _psi_R_func(p: TrmParams, mu, nu):
    def f(x):
        u, du = left_solution(p.a, -mu, nu, np.pi - x)
        return u, -du
    return f


def _potential_fn(p: TrmParams):
    return lambda x: potential(p, x)


def psi_L(p: TrmParams, E) -> SolutionEvaluator:
    """Solution vanishing at x = 0 (diverging at pi), scaled by kappa_L, rho_L."""
    ex = exponents(p, E)
    if _bound_index(p.a, ex.nu) is None:
        _check_poles(p.a, ex.mu, ex.nu)
    return SolutionEvaluator(_psi_L_func(p, ex.mu, ex.nu), energy=_energy(E), kind="L",
                             potential=_potential_fn(p), params={"a": p.a, "b": p.b})


def psi_R(p: TrmParams, E) -> SolutionEvaluator:
    """Solution vanishing at x = pi (diverging at 0); psi_R(x; b) = psi_L(pi - x; -b)."""
    ex = exponents(p, E)
    if _bound_index(p.a, ex.nu) is None:
        _check_poles(p.a, -ex.mu, ex.nu)
    return SolutionEvaluator(_psi_R_func(p, ex.mu, ex.nu), energy=_energy(E), kind="R",
                             potential=_potential_fn(p), params={"a": p.a, "b": p.b})


def psi_R_connection(p: TrmParams, E) -> SolutionEvaluator:
    """psi_R straight from the kappa_R f1 + rho_R f2 connection form.

    Only the two-term form is used, so accuracy degrades close to x = pi where
    the terms cancel; kept as an independent cross-check of the mirrored psi_R.
    """
    ex = exponents(p, E)
    mu, nu = ex.mu, ex.nu
    kr, rr = kappa_R(p.a, mu, nu), rho_R(p.a, mu, nu)

    def f(x):
        (f1, f2), (d1, d2), _ = _basis_terms(p.a, mu, nu, x)
        return kr * f1 + rr * f2, kr * d1 + rr * d2

    return SolutionEvaluator(f, energy=_energy(E), kind="R", potential=_potential_fn(p),
                             params={"a": p.a, "b": p.b, "form": "connection"})


def psi_L_single_term(p: TrmParams, E) -> SolutionEvaluator:
    """The single-term series form of psi_L; converges only for 2 sin x < 1."""
    ex = exponents(p, E)

    def f(x):
        return _direct(p.a, ex.mu, ex.nu, x)

    return SolutionEvaluator(f, energy=_energy(E), kind="L", potential=_potential_fn(p),
                             params={"a": p.a, "b": p.b, "form": "single-term"})


def _energy(E):
    E = complex(E)
    return E.real if E.imag == 0 else E


def bound_state(p: TrmParams, n: int) -> SolutionEvaluator:
    """Normalised eigenfunction psi_n, positive on its first lobe."""
    if n < 0 or int(n) != n:
        raise PreconditionError("n must be a non-negative integer")
    k = n + p.a + 1.0
    mu, nu = 2.0 * p.b / k, complex(-(n + p.a))

    def raw(x):
        return _direct(p.a, mu, nu, x)

    norm2 = quadrature(lambda x: np.real(raw(x)[0]) ** 2, 0.0 + 1e-300, np.pi - 1e-15, tol=1e-14)
    c = 1.0 / math.sqrt(norm2)
    return SolutionEvaluator(lambda x: tuple(c * v for v in raw(x)), energy=bound_energy(p, n),
                             kind="bound", potential=_potential_fn(p),
                             params={"a": p.a, "b": p.b, "n": int(n)}, normalized=True,
                             square_integrable=True)


def general_solution(p: TrmParams, E: float, lam: float) -> SolutionEvaluator:
    """psi(x; E, lambda) = psi_L(x) + lambda psi_R(x)."""
    if not math.isfinite(lam):
        raise PreconditionError("lambda must be finite")
    if complex(E).imag != 0:
        raise PreconditionError("general solutions take a real energy")
    left = psi_L(p, E)
    if lam == 0:
        fl = left.func
    else:
        right = psi_R(p, E)
        fl_, fr = left.func, right.func

        def fl(x):
            u1, d1 = fl_(x)
            u2, d2 = fr(x)
            return u1 + lam * u2, d1 + lam * d2

    return SolutionEvaluator(fl, energy=float(E), kind="general", potential=_potential_fn(p),
                             params={"a": p.a, "b": p.b, "lambda": float(lam)})


def gap_index(p: TrmParams, E: float) -> int:
    """j with E in (E_j, E_{j+1}); -1 below the ground state.

    Raises SpectralCollisionError within 1e-9 of an eigenvalue.
    """
    n = 0
    while True:
        En = bound_energy(p, n)
        if abs(E - En) <= COLLISION_TOL:
            raise SpectralCollisionError(f"E = {E} coincides with E_{n} = {En}")
        if E < En:
            return n - 1
        n += 1


def predicted_node_count(p: TrmParams, E: float, lam: float) -> int:
    """Interior zeros of psi_L + lambda psi_R from the gap index parity and sign of lambda."""
    j = gap_index(p, E)
    if j < 0:
        return 0 if lam >= 0 else 1
    if j % 2 == 0:
        return j + 2 if lam > 0 else j + 1
    return j + 1 if lam >= 0 else j + 2


def nodes_required(j: int, want: str) -> str:
    """Sign of lambda giving the 'lower' (j+1) or 'upper' (j+2) node count in gap j."""
    if j < 0:
        return "nonneg" if want == "lower" else "neg"
    if want == "lower":
        return "nonpos" if j % 2 == 0 else "nonneg"
    return "pos" if j % 2 == 0 else "neg"
