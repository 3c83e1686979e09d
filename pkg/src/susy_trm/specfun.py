"""Complex gamma and Gauss hypergeometric functions.

Only what the closed-form Rosen-Morse solutions need: a Lanczos gamma with
reflection, its reciprocal (entire, so it is safe at poles), and a plain
Gauss series for 2F1 that is vectorised over the argument.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from numba import njit
from scipy.special import digamma

from .errors import ConvergenceError, ParameterPoleError, PoleError, PreconditionError

POLE_TOL = 1e-12
SERIES_TOL = 1e-16
MAX_TERMS = 200_000
PLAIN_RADIUS = 0.9
TAYLOR_SHRINK = 0.6
MAX_STEPS = 200
NEAR_ONE = 0.8
INTEGER_TOL = 1e-12
NONINTEGER_MIN = 1e-3

# Lanczos coefficients, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _as_complex(z, name="argument") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise PreconditionError(f"{name} must be finite, got {z!r}")
    return z


def _nonpositive_integer(z: complex, tol: float = POLE_TOL) -> int | None:
    """Return -n if z is within tol of the non-positive integer -n, else None."""
    n = round(z.real)
    if n <= 0 and abs(z - n) < tol:
        return int(n)
    return None


def _lanczos(z: complex) -> complex:
    # Gamma(z) for Re z >= 1/2
    z -= 1.0
    acc = _LANCZOS_P[0]
    for i in range(1, len(_LANCZOS_P)):
        acc += _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * cmath.exp((z + 0.5) * cmath.log(t) - t) * acc


def _sinpi(z: complex) -> complex:
    # sin(pi z) with the integer part removed first, so it stays accurate near poles
    n = round(z.real)
    v = cmath.sin(math.pi * (z - n))
    return -v if n % 2 else v


def gamma(z) -> complex:
    """Complex gamma function.

    Lanczos approximation on ``Re z >= 1/2`` and the reflection formula
    ``Gamma(z) Gamma(1-z) = pi / sin(pi z)`` elsewhere.

    Raises PoleError within 1e-12 of a non-positive integer.
    """
    z = _as_complex(z)
    if _nonpositive_integer(z) is not None:
        raise PoleError(f"gamma has a pole at {z!r}")
    if z.real < 0.5:
        return math.pi / (_sinpi(z) * _lanczos(1.0 - z))
    return _lanczos(z)


def rgamma(z) -> complex:
    """Reciprocal gamma 1/Gamma(z); entire, returns ~0 at the poles of Gamma."""
    z = _as_complex(z)
    if z.real < 0.5:
        n = _nonpositive_integer(z)
        if n is not None:
            return 0j
        return _sinpi(z) * _lanczos(1.0 - z) / math.pi
    return 1.0 / _lanczos(z)


def _termination_degree(alpha: complex, beta: complex) -> int | None:
    degrees = [-n for n in (_nonpositive_integer(alpha), _nonpositive_integer(beta)) if n is not None]
    return min(degrees) if degrees else None


def hyp2f1_series(alpha, beta, gamma_c, z, *, max_terms: int = MAX_TERMS,
                  return_condition: bool = False):
    """Vectorised Gauss series for 2F1(alpha, beta; gamma_c; z).

    ``z`` may be a scalar or an array. Inside the disk the series is summed
    until each term drops below 1e-16 of the running sum; a terminating
    series is summed exactly for any z.

    With ``return_condition`` the ratio max|term| / |sum| is returned as a
    second value; it bounds the relative rounding error amplification.
    """
    alpha = _as_complex(alpha, "alpha")
    beta = _as_complex(beta, "beta")
    gamma_c = _as_complex(gamma_c, "gamma")
    zz = np.asarray(z, dtype=complex)
    shape = zz.shape
    zz = zz.ravel()
    if not np.all(np.isfinite(zz)):
        raise PreconditionError("z must be finite")

    degree = _termination_degree(alpha, beta)
    cpole = _nonpositive_integer(gamma_c)
    if cpole is not None and (degree is None or degree > -cpole):
        raise ParameterPoleError(f"gamma parameter {gamma_c!r} is a non-positive integer")

    if degree is not None:
        # exact finite sum, valid for every z
        a_int, b_int = alpha, beta
        if _nonpositive_integer(alpha) == -degree:
            a_int = complex(-degree)
        else:
            b_int = complex(-degree)
        total = np.ones_like(zz)
        term = np.ones_like(zz)
        big = np.ones(zz.shape)
        for k in range(degree):
            term = term * ((a_int + k) * (b_int + k) / ((gamma_c + k) * (k + 1))) * zz
            total = total + term
            big = np.maximum(big, np.abs(term))
        out = total.reshape(shape)
        if return_condition:
            return out, (big / np.maximum(np.abs(total), 1e-300)).reshape(shape)
        return out

    if np.any(np.abs(zz) >= 1.0 - 1e-9):
        raise ConvergenceError("|z| >= 1 - 1e-9 with a non-terminating series")

    total, cond, ok = _gauss_sum(alpha, beta, gamma_c, zz, SERIES_TOL, max_terms)
    if not ok:
        raise ConvergenceError(f"2F1 series did not converge in {max_terms} terms")
    out = total.reshape(shape)
    if return_condition:
        return out, cond.reshape(shape)
    return out


@njit(cache=True)
def _gauss_sum(a, b, c, z, tol, max_terms):
    # per-point summation; each point stops as soon as its own tail is negligible
    n = z.size
    out = np.empty(n, dtype=np.complex128)
    cond = np.empty(n, dtype=np.float64)
    ok = True
    for i in range(n):
        zi = z[i]
        term = 1.0 + 0.0j
        s = 1.0 + 0.0j
        big = 1.0
        converged = False
        for k in range(max_terms):
            rz = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * zi
            term = term * rz
            s = s + term
            m = abs(term)
            if m > big:
                big = m
            if m == 0.0 or (m <= tol * abs(s) and abs(rz) < 1.0):
                converged = True
                break
        if not converged:
            ok = False
        out[i] = s
        cond[i] = big / max(abs(s), 1e-300)
    return out, cond, ok


def _series_pair(alpha, beta, gamma_c, pref, z, terminating):
    # value, derivative and condition from the Gauss series
    if terminating:
        f, cond = hyp2f1_series(alpha, beta, gamma_c, z, return_condition=True)
        d = np.zeros_like(z) if pref == 0 else pref * hyp2f1_series(alpha + 1, beta + 1, gamma_c + 1, z)
        return f, d, cond
    f, d, cond, ok = _gauss_pair_sum(alpha, beta, gamma_c, z, SERIES_TOL, MAX_TERMS)
    if not ok:
        raise ConvergenceError(f"2F1 series did not converge in {MAX_TERMS} terms")
    return f, d, cond


@njit(cache=True)
def _gauss_pair_sum(a, b, c, z, tol, max_terms):
    # F and F' in one pass: F' = sum_k k t_k / z, with F'(0) = ab/c
    n = z.size
    out = np.empty(n, dtype=np.complex128)
    dout = np.empty(n, dtype=np.complex128)
    cond = np.empty(n, dtype=np.float64)
    ok = True
    for i in range(n):
        zi = z[i]
        if zi == 0:
            out[i] = 1.0
            dout[i] = a * b / c
            cond[i] = 1.0
            continue
        term = 1.0 + 0.0j
        s = 1.0 + 0.0j
        ds = 0.0 + 0.0j
        big = 1.0
        converged = False
        for k in range(max_terms):
            rz = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * zi
            term = term * rz
            s = s + term
            ds = ds + (k + 1.0) * term
            m = abs(term)
            if m > big:
                big = m
            if m == 0.0 or (abs(rz) < 1.0 and m <= tol * abs(s)
                            and (k + 1.0) * m <= tol * abs(ds)):
                converged = True
                break
        if not converged:
            ok = False
        out[i] = s
        dout[i] = ds / zi
        cond[i] = big / max(abs(s), 1e-300)
    return out, dout, cond, ok


def hyp2f1_pair(alpha, beta, gamma_c, z, *, return_condition: bool = False):
    """2F1 and its z-derivative on the closed unit disk, vectorised.

    For |z| <= 0.9 (or a terminating series) the Gauss series is summed
    directly.  Elsewhere the value is continued analytically along a straight
    path from 0.6 z/|z|: each step re-expands the hypergeometric ODE in a
    Taylor series whose step is half the distance to the nearest singular
    point (0 or 1), so every expansion converges like 2^-n.  Near z = 1 the
    path therefore takes geometrically shrinking steps.
    """
    alpha = _as_complex(alpha, "alpha")
    beta = _as_complex(beta, "beta")
    gamma_c = _as_complex(gamma_c, "gamma")
    zz = np.asarray(z, dtype=complex)
    shape = zz.shape
    zz = zz.ravel()
    if not np.all(np.isfinite(zz)):
        raise PreconditionError("z must be finite")
    terminating = _termination_degree(alpha, beta) is not None
    if not terminating and (np.any(np.abs(zz) > 1.0 + 1e-12) or np.any(zz == 1.0)):
        raise ConvergenceError("continuation is limited to the closed unit disk minus z = 1")
    if _nonpositive_integer(gamma_c) is not None:
        raise ParameterPoleError(f"gamma parameter {gamma_c!r} is a non-positive integer")
    pref = alpha * beta / gamma_c
    f = np.empty_like(zz)
    d = np.empty_like(zz)
    cond = np.empty(zz.shape)
    inner = np.abs(zz) <= PLAIN_RADIUS
    if terminating:
        inner[:] = True
    if np.any(inner):
        f[inner], d[inner], cond[inner] = _series_pair(alpha, beta, gamma_c, pref, zz[inner], terminating)
    outer = ~inner
    if np.any(outer):
        zo = zz[outer]
        z0 = TAYLOR_SHRINK * zo / np.abs(zo)
        f0, d0, c0 = _series_pair(alpha, beta, gamma_c, pref, z0, False)
        fo, do, co, ok = _continue(alpha, beta, gamma_c, z0, f0, d0, c0, zo, SERIES_TOL, MAX_STEPS)
        if not ok:
            raise ConvergenceError("analytic continuation of 2F1 did not converge")
        # near z = 1 the expansion about 1 may do better: keep whichever is better conditioned
        m = gamma_c - alpha - beta
        mdist = abs(m - round(m.real))
        near = np.abs(1.0 - zo) < NEAR_ONE
        if np.any(near) and (mdist < INTEGER_TOL or mdist > NONINTEGER_MIN):
            zn = zo[near]
            fn, cn = _about_one(alpha, beta, gamma_c, zn)
            if pref == 0:
                dn, cd = np.zeros_like(zn), np.ones(zn.shape)
            else:
                dn, cd = _about_one(alpha + 1, beta + 1, gamma_c + 1, zn)
                dn = pref * dn
            cn = np.maximum(cn, cd)
            pick = np.zeros(zo.shape, dtype=bool)
            pick[near] = cn < co[near]
            sub = pick[near]
            fo[pick], do[pick], co[pick] = fn[sub], dn[sub], cn[sub]
        f[outer], d[outer], cond[outer] = fo, do, co
    if return_condition:
        return f.reshape(shape), d.reshape(shape), cond.reshape(shape)
    return f.reshape(shape), d.reshape(shape)


def _about_one(a, b, c, z):
    """2F1 for |1 - z| < 1/2 from the expansions about z = 1.

    Non-integer m = c - a - b uses the two-term Gamma connection; integer m
    uses the logarithmic form.  A negative m is first made positive by
    Euler's transformation.  All connection coefficients are products of
    (reciprocal) Gamma functions, so no cancellation arises even when
    F(1) is much smaller than F near 0.
    """
    m = c - a - b
    mi = round(m.real)
    if abs(m - mi) < INTEGER_TOL:
        if mi < 0:
            v, cnd = _about_one(c - a, c - b, c, z)
            return np.exp(m * np.log(1.0 - z)) * v, cnd
        return _log_case(a, b, int(mi), z)
    y = 1.0 - z
    g = gamma(c)
    t1 = g * gamma(m) * rgamma(c - a) * rgamma(c - b)
    t2 = g * gamma(-m) * rgamma(a) * rgamma(b)
    out = np.zeros_like(z)
    size = np.zeros(z.shape)
    if t1 != 0:
        v = t1 * _near_series(a, b, 1.0 - m, y)
        out, size = out + v, size + np.abs(v)
    if t2 != 0:
        v = t2 * np.exp(m * np.log(y)) * _near_series(c - a, c - b, 1.0 + m, y)
        out, size = out + v, size + np.abs(v)
    return out, size / np.maximum(np.abs(out), 1e-300)


def _near_series(a, b, c, y):
    # plain Gauss series with |y| < 1/2, parameter poles already excluded
    return _gauss_sum(complex(a), complex(b), complex(c), y, SERIES_TOL, MAX_TERMS)[0]


def _log_case(a, b, m, z):
    # F(a, b; a+b+m; z), m = 0, 1, 2, ...:
    # Gamma(c) { sum_{k<m} (a)_k (b)_k (m-k-1)!/k! (z-1)^k / (Gamma(a+m) Gamma(b+m))
    #   - (z-1)^m / (Gamma(a) Gamma(b)) sum_k (a+m)_k (b+m)_k / (k! (k+m)!) (1-z)^k
    #       [ln(1-z) - psi(k+1) - psi(k+m+1) + psi(a+k+m) + psi(b+k+m)] }
    c = a + b + m
    y = 1.0 - z
    finite = np.zeros_like(z)
    size = np.zeros(z.shape)
    term = 1.0 + 0j
    ra = rgamma(a + m) * rgamma(b + m)
    for k in range(m):
        v = term * math.factorial(m - k - 1) * (-y) ** k * ra
        finite, size = finite + v, size + np.abs(v)
        term = term * (a + k) * (b + k) / (k + 1)
    pre = rgamma(a) * rgamma(b)
    tail = np.zeros_like(z)
    tail_size = np.zeros(z.shape)
    if pre != 0:
        logy = np.log(y)
        coef = 1.0 / math.factorial(m) + 0j
        psi1 = complex(digamma(1.0))
        psim = complex(digamma(m + 1.0))
        psia = complex(digamma(a + m))
        psib = complex(digamma(b + m))
        yk = np.ones_like(z)
        amp = np.abs(y)
        for k in range(MAX_TERMS):
            piece = coef * yk * (logy - psi1 - psim + psia + psib)
            tail = tail + piece
            tail_size = tail_size + np.abs(piece)
            if np.all(np.abs(piece) <= SERIES_TOL * np.maximum(np.abs(tail), 1e-300)) and k > 2:
                break
            coef = coef * (a + m + k) * (b + m + k) / ((k + 1.0) * (k + m + 1.0))
            psi1 += 1.0 / (k + 1.0)
            psim += 1.0 / (k + m + 1.0)
            psia += 1.0 / (a + m + k)
            psib += 1.0 / (b + m + k)
            yk = yk * y
        else:
            raise ConvergenceError("logarithmic 2F1 expansion did not converge")
        tail = tail * pre * (-y) ** m
        tail_size = tail_size * np.abs(pre * y**m)
    total = finite - tail
    return gamma(c) * total, (size + tail_size) / np.maximum(np.abs(total), 1e-300)


@njit(cache=True)
def _taylor_step(a, b, c, w0, f0, d0, t, tol):
    # Taylor series of the solution of z(1-z)F'' + [c-(a+b+1)z]F' - abF = 0
    # about w0 with F(w0) = f0, F'(w0) = d0, evaluated at w0 + t; g_n = f_n t^n
    ab = a * b
    q1 = -(a + b + 1.0)
    p0 = w0 * (1.0 - w0)
    p1 = 1.0 - 2.0 * w0
    q0 = c + q1 * w0
    g0 = f0 + 0j
    g1 = d0 * t
    s = g0 + g1
    ds = d0 + 0j
    big = max(abs(g0), abs(g1))
    for n in range(400):
        g2 = -((p1 * n * (n + 1.0) + q0 * (n + 1.0)) * g1 * t
               + (-n * (n - 1.0) + q1 * n - ab) * g0 * t * t) / (p0 * (n + 2.0) * (n + 1.0))
        s += g2
        ds += (n + 2.0) * g2 / t
        m = abs(g2)
        if m > big:
            big = m
        scale = tol * max(abs(s), big)
        if (n + 2.0) * m <= scale and (n + 1.0) * abs(g1) <= 10.0 * scale:
            return s, ds, big / max(abs(s), 1e-300), True
        g0 = g1
        g1 = g2
    return s, ds, big / max(abs(s), 1e-300), False


@njit(cache=True)
def _continue(a, b, c, z0, f0, d0, c0, z, tol, max_steps):
    n_pts = z.size
    out = np.empty(n_pts, dtype=np.complex128)
    dout = np.empty(n_pts, dtype=np.complex128)
    cond = np.empty(n_pts, dtype=np.float64)
    ok = True
    for i in range(n_pts):
        p = z0[i]
        f = f0[i]
        d = d0[i]
        worst = 0.0
        cnd = c0[i]
        done = False
        for _ in range(max_steps):
            r = min(abs(p), abs(1.0 - p))
            rem = z[i] - p
            dist = abs(rem)
            last = dist <= 0.5 * r
            t = rem if last else rem * (0.5 * r / dist)
            scale = abs(f) * max(cnd, 1.0)
            f, d, cnd, good = _taylor_step(a, b, c, p, f, d, t, tol)
            if not good:
                break
            # rounding committed at each node is carried forward relative to |F| there
            if scale > worst:
                worst = scale
            if abs(f) * cnd > worst:
                worst = abs(f) * cnd
            p = p + t
            if last:
                done = True
                break
        if not done:
            ok = False
        out[i] = f
        dout[i] = d
        cond[i] = worst / max(abs(f), 1e-300)
    return out, dout, cond, ok

def hyp2f1(alpha, beta, gamma_c, z) -> complex:
    """Gauss hypergeometric function 2F1(alpha, beta; gamma_c; z), series only.

    Valid for |z| < 1, or for any z when alpha or beta is a non-positive
    integer (terminating series).
    """
    z = _as_complex(z, "z")
    return complex(hyp2f1_series(alpha, beta, gamma_c, z))


def hyp2f1_dz(alpha, beta, gamma_c, z) -> complex:
    """d/dz 2F1(alpha, beta; gamma_c; z) = (alpha beta / gamma_c) 2F1(alpha+1, beta+1; gamma_c+1; z)."""
    alpha = _as_complex(alpha, "alpha")
    beta = _as_complex(beta, "beta")
    gamma_c = _as_complex(gamma_c, "gamma")
    if _nonpositive_integer(gamma_c) is not None:
        raise ParameterPoleError(f"gamma parameter {gamma_c!r} is a non-positive integer")
    z = _as_complex(z, "z")
    pref = alpha * beta / gamma_c
    if pref == 0:
        return 0j
    return pref * hyp2f1(alpha + 1, beta + 1, gamma_c + 1, z)

