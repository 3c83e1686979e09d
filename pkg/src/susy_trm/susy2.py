"""Second-order SUSY transformations of the trigonometric Rosen-Morse potential.

For two seeds u1, u2 at energies eps1 > eps2 the partner is

    V2 = V0 - (ln W)'',   W = u1 u2' - u1' u2,

and every derivative of W comes from the Schrodinger equation:
W' = 2 (eps1 - eps2) u1 u2 and W'' = 2 (eps1 - eps2)(u1 u2)'.  The same
formula covers the complex case (u2 = conj u1) and the confluent case
(W = w0 + integral of u^2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import trm
from .errors import (DegenerateEnergyError, InvalidSeedCombination, PreconditionError,
                     SingularTransformError)
from .evaluator import SolutionEvaluator, interior
from .oracle import Grid, quadrature, square_integrable
from .susy1 import N_LEVELS, NODE_FLOOR, NODE_GRID, PartnerPotential

CONFLUENT_GRID = 4001
GL_NODES = 32
PANEL_TOL = 1e-17  # absolute, per panel; the integrand is a normalised density
NEAR_LIMIT = 1e-6
EDGE_SPLIT = 0.25  # within this distance of a shared zero, W is integrated from the end

CASE_NAMES = {
    "i": "delete two",
    "ii": "create two",
    "iii": "create one",
    "iv": "move one",
    "v": "delete one",
    "vi": "isospectral",
}


@dataclass(frozen=True)
class SeedSpec:
    """A seed solution by recipe.

    kind "bound" uses psi_n (``n``), "general" psi_L + lam psi_R, and "L"/"R"
    the one-sided solutions.  A general seed with lam = 0 is psi_L.
    """

    kind: str
    epsilon: complex
    lam: float | None = None
    n: int | None = None

    def __post_init__(self):
        if self.kind not in ("bound", "general", "L", "R"):
            raise PreconditionError(f"unknown seed kind {self.kind!r}")
        if self.kind == "general" and (self.lam is None or not math.isfinite(self.lam)):
            raise PreconditionError("a general seed needs a finite lambda")
        if self.kind == "bound" and (self.n is None or self.n < 0):
            raise PreconditionError("a bound seed needs n >= 0")

    @classmethod
    def bound(cls, p: trm.TrmParams, n: int) -> "SeedSpec":
        return cls("bound", trm.bound_energy(p, n), n=int(n))

    @property
    def side(self) -> str | None:
        """"L" or "R" for one-sided seeds (including lam = 0), else None."""
        if self.kind in ("L", "R"):
            return self.kind
        if self.kind == "general" and self.lam == 0.0:
            return "L"
        return None

    @property
    def energy(self) -> float:
        return float(np.real(self.epsilon))

    def solution(self, p: trm.TrmParams) -> SolutionEvaluator:
        if self.kind == "bound":
            return trm.bound_state(p, self.n)
        if self.kind == "general":
            return trm.general_solution(p, self.energy, self.lam)
        return (trm.psi_L if self.kind == "L" else trm.psi_R)(p, self.epsilon)


@dataclass(frozen=True)
class SecondOrderSpec:
    case: str
    seeds: tuple = ()
    j: int | None = None
    w0: float | None = None

    def __post_init__(self):
        if self.case not in ("real", "complex", "confluent"):
            raise PreconditionError(f"unknown second-order case {self.case!r}")
        if self.case == "real":
            if len(self.seeds) != 2:
                raise PreconditionError("the real case takes two seeds")
            if self.seeds[0].energy == self.seeds[1].energy:
                raise PreconditionError("the real case needs eps1 != eps2")
        elif self.case == "complex":
            if len(self.seeds) != 1 or complex(self.seeds[0].epsilon).imag == 0:
                raise PreconditionError("the complex case takes one seed with Im(eps) != 0")
            if self.seeds[0].kind not in ("L", "R"):
                raise PreconditionError("complex seeds must be psi_L or psi_R")
        else:
            if self.j is None or self.j < 0 or self.w0 is None:
                raise PreconditionError("the confluent case needs j >= 0 and w0")
            if -1.0 < self.w0 < 0.0:
                raise PreconditionError("w0 must lie in (-inf, -1] or [0, inf)")


@dataclass(frozen=True)
class WronskianEvaluator:
    """x -> (W, W', W'') with every derivative obtained analytically."""

    func: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]
    kind: str = "real"
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        xs = interior(x)
        w, dw, d2w = self.func(np.atleast_1d(xs))
        if xs.ndim == 0:
            return w[0], dw[0], d2w[0]
        return w, dw, d2w

    eval = __call__


@dataclass(frozen=True)
class RealCase:
    label: str
    name: str
    predicted_spectrum: list[float]
    note: str = ""

    def __str__(self):
        return f"({self.label}) {self.name}"


def _vanishes(u: SolutionEvaluator, end: str) -> bool:
    """Does the seed go to zero (like sin^(a+1)) at this end?"""
    if u.kind == "bound":
        return True
    if u.kind == "general" and u.params.get("lambda") == 0.0:
        return end == "left"
    return u.kind == ("L" if end == "left" else "R")


_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_NODES)


def _edge_integral(density, lo, hi):
    """Integral of density over [lo_i, hi_i] by one Gauss-Legendre panel each."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    pts = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = density(pts.ravel()).reshape(pts.shape)
    return half * (vals @ _GL_W)


def _from_edges(f, density, g, left: bool, right: bool):
    """Replace W near ends where it vanishes by g times the integral of density.

    Where both seeds behave like sin^(a+1), u1 u2' and u1' u2 agree to leading
    order and their difference loses about log10(1/x) digits per order; the
    integral of W' = g density from the end has no such cancellation.
    """
    if not (left or right):
        return f

    def h(x):
        w, dw, d2w = f(x)
        w = np.array(w, copy=True)
        if left:
            m = x < EDGE_SPLIT
            if np.any(m):
                w[m] = g * _edge_integral(density, np.zeros(m.sum()), x[m])
        if right:
            m = x > math.pi - EDGE_SPLIT
            if np.any(m):
                w[m] = -g * _edge_integral(density, x[m], np.full(m.sum(), math.pi))
        return w, dw, d2w

    return h


def wronskian_real(u1: SolutionEvaluator, u2: SolutionEvaluator, eps1: float,
                   eps2: float) -> WronskianEvaluator:
    """W(u1, u2) for real seeds at eps1 != eps2."""
    eps1, eps2 = float(np.real(eps1)), float(np.real(eps2))
    if eps1 == eps2:
        raise PreconditionError("eps1 and eps2 must differ")
    g = 2.0 * (eps1 - eps2)

    def f(x):
        a, da = u1(x)
        b, db = u2(x)
        return a * db - da * b, g * a * b, g * (da * b + a * db)

    def density(x):
        return np.real(u1.func(x)[0]) * np.real(u2.func(x)[0])

    f = _from_edges(f, density, g, _vanishes(u1, "left") and _vanishes(u2, "left"),
                    _vanishes(u1, "right") and _vanishes(u2, "right"))
    return WronskianEvaluator(f, "real", {"eps1": eps1, "eps2": eps2})


def check_wronskian(W: WronskianEvaluator, grid: Grid = NODE_GRID) -> None:
    """Raise SingularTransformError if W vanishes or changes sign on the grid."""
    w = np.real(W(grid.nodes)[0])
    if not np.all(np.isfinite(w)):
        raise SingularTransformError("Wronskian is not finite on the check grid")
    s = np.sign(w)
    if np.any(s == 0) or np.any(s[1:] != s[0]):
        raise SingularTransformError("Wronskian changes sign inside (0, pi)")
    pad = 1
    mag = np.pad(np.abs(w), pad, mode="edge")
    scale = np.lib.stride_tricks.sliding_window_view(mag, 2 * pad + 1).max(axis=1)
    if np.any(np.abs(w) < NODE_FLOOR * scale):
        raise SingularTransformError("Wronskian nearly vanishes inside (0, pi)")


def _log_second(W: WronskianEvaluator, x):
    w, dw, d2w = W.func(x)
    r = dw / w
    return np.real(d2w / w - r * r)


def second_order_potential(p: trm.TrmParams, W: WronskianEvaluator, *,
                           predicted_spectrum: list[float] | None = None,
                           provenance: str = "second-order",
                           singular_coefficient: dict | None = None,
                           check: bool = True, seeds: tuple = ()) -> PartnerPotential:
    """V2 = V0 - [W''/W - (W'/W)^2]."""
    if check:
        check_wronskian(W)

    def v2(x):
        xs = interior(x)
        xa = np.atleast_1d(xs)
        out = trm.potential(p, xa) - _log_second(W, xa)
        return float(out[0]) if xs.ndim == 0 else out

    if predicted_spectrum is None:
        predicted_spectrum = [trm.bound_energy(p, n) for n in range(N_LEVELS)]
    if singular_coefficient is None:
        c = 0.5 * p.a * (p.a + 1)
        singular_coefficient = {"left": c, "right": c}
    return PartnerPotential(func=v2, predicted_spectrum=sorted(predicted_spectrum),
                            provenance=provenance, singular_coefficient=singular_coefficient,
                            seeds=seeds, params={"a": p.a, "b": p.b, "wronskian": W})


# ---------------------------------------------------------------- real case

def _gap(p: trm.TrmParams, eps: float) -> int:
    try:
        return trm.gap_index(p, eps)
    except trm.SpectralCollisionError as exc:
        raise InvalidSeedCombination(f"non-bound seed sits on an eigenvalue: {exc}") from exc


def _nodes(p: trm.TrmParams, s: SeedSpec) -> int:
    # psi_L and psi_R (the lambda -> 0 and lambda -> +-inf limits) both keep
    # the lower count, j + 1 nodes in gap j
    if s.side is not None:
        return _gap(p, s.energy) + 1
    return trm.predicted_node_count(p, s.energy, s.lam)


def _levels(p: trm.TrmParams, count: int) -> list[float]:
    return [trm.bound_energy(p, n) for n in range(count)]


def _edge_exponent(a: float, s: SeedSpec, end: str) -> float:
    """u ~ sin^s at the given end: a + 1 where u vanishes, -a where it diverges."""
    if s.kind == "bound":
        return a + 1
    side = s.side
    if side == "L":
        return a + 1 if end == "left" else -a
    if side == "R":
        return -a if end == "left" else a + 1
    return -a


def _pair_coefficients(a: float, s1: SeedSpec, s2: SeedSpec) -> dict[str, float]:
    # W ~ sin^(e1 + e2 - 1) for unequal exponents; equal exponents cancel the
    # leading order and leave sin^(2e + 1).  V2 gains that power times csc^2.
    out = {}
    for end in ("left", "right"):
        e1, e2 = _edge_exponent(a, s1, end), _edge_exponent(a, s2, end)
        power = 2 * e1 + 1 if e1 == e2 else e1 + e2 - 1
        out[end] = 0.5 * a * (a + 1) + power
    return out


def _need(cond: bool, rule: str) -> None:
    if not cond:
        raise InvalidSeedCombination(rule)


def validate_real_case(p: trm.TrmParams, spec: SecondOrderSpec,
                       n_levels: int = N_LEVELS) -> RealCase:
    """Classify an ordered seed pair (eps1 > eps2) into sub-cases (i)-(vi).

    Raises InvalidSeedCombination naming the first admissibility rule that
    fails.  The returned predicted spectrum holds the lowest ``n_levels``.
    """
    if spec.case != "real":
        raise PreconditionError("validate_real_case handles the real case only")
    s1, s2 = spec.seeds
    _need(s1.energy > s2.energy, "seed 1 must carry the higher energy (eps1 > eps2)")
    base = _levels(p, n_levels + 2)
    b1, b2 = s1.kind == "bound", s2.kind == "bound"
    if b1 or b2:
        if b1 and b2:
            _need(s1.n == s2.n + 1, "(i) needs consecutive bound states psi_{j+1}, psi_j")
            j = s2.n
            spectrum = [e for k, e in enumerate(base) if k not in (j, j + 1)]
            return RealCase("i", CASE_NAMES["i"], spectrum[:n_levels])
        bound, other = (s1, s2) if b1 else (s2, s1)
        j = bound.n
        g = _gap(p, other.energy)
        _need(g in (j - 1, j), f"(iv)/(v) need the other seed in a gap next to E_{j}")
        if other.side is not None:
            spectrum = [e for k, e in enumerate(base) if k != j]
            return RealCase("v", CASE_NAMES["v"], spectrum[:n_levels])
        _need(_nodes(p, other) == j + 1,
              f"(iv) needs a general seed with {j + 1} nodes "
              f"(lambda {'< 0' if j % 2 == 0 else '> 0'})")
        spectrum = sorted([e for k, e in enumerate(base) if k != j] + [other.energy])
        return RealCase("iv", CASE_NAMES["iv"], spectrum[:n_levels],
                        "moved down" if other is s2 else "moved up")
    j1, j2 = _gap(p, s1.energy), _gap(p, s2.energy)
    _need(j1 == j2, "both non-bound seeds must lie in the same gap")
    j = j1
    sides = (s1.side, s2.side)
    if sides[0] is not None and sides[1] is not None:
        return RealCase("vi", CASE_NAMES["vi"], base[:n_levels])
    if sides[0] is None and sides[1] is None:
        _need(_nodes(p, s1) == j + 1, f"(ii) needs the upper seed with {j + 1} nodes")
        _need(_nodes(p, s2) == j + 2, f"(ii) needs the lower seed with {j + 2} nodes")
        spectrum = sorted(base + [s1.energy, s2.energy])
        return RealCase("ii", CASE_NAMES["ii"], spectrum[:n_levels])
    if sides[0] is not None:
        _need(_nodes(p, s2) == j + 2, f"(iii) needs the eps2 seed with {j + 2} nodes")
        added = s2.energy
    else:
        _need(_nodes(p, s1) == j + 1, f"(iii) needs the eps1 seed with {j + 1} nodes")
        added = s1.energy
    spectrum = sorted(base + [added])
    return RealCase("iii", CASE_NAMES["iii"], spectrum[:n_levels])


def real_case_potential(p: trm.TrmParams, s1: SeedSpec, s2: SeedSpec,
                        n_levels: int = N_LEVELS) -> tuple[PartnerPotential, RealCase]:
    """Validate the pair, build W from the two seeds and return V2 with its case."""
    if s1.energy < s2.energy:
        s1, s2 = s2, s1
    case = validate_real_case(p, SecondOrderSpec("real", (s1, s2)), n_levels)
    u1, u2 = s1.solution(p), s2.solution(p)
    W = wronskian_real(u1, u2, s1.energy, s2.energy)
    pot = second_order_potential(p, W, predicted_spectrum=case.predicted_spectrum,
                                 provenance=str(case),
                                 singular_coefficient=_pair_coefficients(p.a, s1, s2),
                                 seeds=((u1, s1.energy), (u2, s2.energy)))
    return pot, case


def _wronskian_potential(W: WronskianEvaluator, v0):
    def v2(x):
        return np.asarray(v0(x)) - _log_second(W, x)
    return v2


def map_eigenfunction_2(W: WronskianEvaluator, u1: SolutionEvaluator, u2: SolutionEvaluator,
                        eps1: float, eps2: float, psi: SolutionEvaluator,
                        E_n: float) -> SolutionEvaluator:
    """W(u1, u2, psi) / (2 W(u1, u2) sqrt((E_n - eps1)(E_n - eps2))).

    In the 3x3 Wronskian the row of second derivatives is 2V times the first
    row minus 2 (eps1 u1, eps2 u2, E psi); the V part drops out of the
    determinant, so no second derivative is ever formed.
    """
    eps1, eps2, E_n = float(eps1), float(eps2), float(E_n)
    if E_n in (eps1, eps2):
        raise DegenerateEnergyError("cannot map a state at a factorisation energy")
    norm = 2.0 * math.sqrt(abs((E_n - eps1) * (E_n - eps2)))

    def det3(a, b, c, da, db, dc, ea, eb, ec):
        return a * (db * ec - dc * eb) - b * (da * ec - dc * ea) + c * (da * eb - db * ea)

    def f(x):
        a, da = u1(x)
        b, db = u2(x)
        c, dc = psi(x)
        w, dw, _ = W.func(x)
        w3 = -2.0 * det3(a, b, c, da, db, dc, eps1 * a, eps2 * b, E_n * c)
        dw3 = -2.0 * det3(a, b, c, da, db, dc, eps1 * da, eps2 * db, E_n * dc)
        val = w3 / (w * norm)
        dval = (dw3 * w - w3 * dw) / (w * w * norm)
        return val, dval

    v2 = _wronskian_potential(W, u1.potential)
    return SolutionEvaluator(f, energy=E_n, kind="mapped2", potential=v2,
                             params={"eps1": eps1, "eps2": eps2, **psi.params},
                             normalized=psi.normalized, square_integrable=psi.square_integrable)


def _quotient_state(W: WronskianEvaluator, u: SolutionEvaluator, energy: float, v2,
                    label: str) -> SolutionEvaluator:
    def f(x):
        y, dy = u(x)
        w, dw, _ = W.func(x)
        return y / w, (dy * w - y * dw) / (w * w)

    sq = square_integrable(f)
    c = 1.0
    if sq:
        c = 1.0 / math.sqrt(quadrature(lambda x: np.abs(f(x)[0]) ** 2, 0.0, math.pi,
                                       tol=0.0, rel_tol=1e-11))

    def scaled(x):
        v, dv = f(x)
        return c * v, c * dv

    return SolutionEvaluator(scaled, energy=energy, kind=label, potential=v2,
                             normalized=sq, square_integrable=sq)


def new_bound_states_2(W: WronskianEvaluator, u1: SolutionEvaluator,
                       u2: SolutionEvaluator) -> tuple[SolutionEvaluator, SolutionEvaluator]:
    """(u2/W at eps1, u1/W at eps2), each flagged by the endpoint probe."""
    check_wronskian(W)
    v2 = _wronskian_potential(W, u1.potential)
    e1, e2 = float(np.real(u1.energy)), float(np.real(u2.energy))
    return (_quotient_state(W, u2, e1, v2, "new-eps1"),
            _quotient_state(W, u1, e2, v2, "new-eps2"))


# ------------------------------------------------------------- complex case

def wronskian_complex(u: SolutionEvaluator) -> WronskianEvaluator:
    """w = Im(u conj u'), proportional to W(u, conj u); w' = 2 Im(eps) |u|^2."""
    g = 2.0 * complex(u.energy).imag

    def f(x):
        y, dy = u.raw(x)
        w = np.imag(y * np.conj(dy))
        return w, g * np.abs(y) ** 2, 2.0 * g * np.real(np.conj(y) * dy)

    def density(x):
        return np.abs(u.func(x)[0]) ** 2

    f = _from_edges(f, density, g, _vanishes(u, "left"), _vanishes(u, "right"))
    return WronskianEvaluator(f, "complex", {"epsilon": complex(u.energy)})


def complex_case_potential(p: trm.TrmParams, eps: complex, side: str = "L",
                           n_levels: int = N_LEVELS) -> PartnerPotential:
    """Isospectral partner from the complex seed psi_L or psi_R at eps (Im eps != 0)."""
    eps = complex(eps)
    if eps.imag == 0:
        raise PreconditionError("the complex case needs Im(eps) != 0")
    if side not in ("L", "R"):
        raise PreconditionError("side must be 'L' or 'R'")
    spec = SecondOrderSpec("complex", (SeedSpec(side, eps),))
    u = spec.seeds[0].solution(p)
    W = wronskian_complex(u)
    # u and conj u vanish at the same end, where W ~ sin^(2a+3)
    c = 0.5 * p.a * (p.a + 1)
    coef = {"left": c, "right": c}
    coef["left" if side == "L" else "right"] = 0.5 * (p.a + 2) * (p.a + 3)
    coef["right" if side == "L" else "left"] = 0.5 * (p.a - 1) * (p.a - 2)
    return second_order_potential(p, W, predicted_spectrum=_levels(p, n_levels),
                                  provenance=f"complex {side} isospectral",
                                  singular_coefficient=coef, seeds=((u, eps),))


# ----------------------------------------------------------- confluent case

class CumulativeIntegral:
    """Q(x) = integral_0^x f(y)^2 dy for a fixed real f on (0, pi).

    Panel integrals on a uniform grid are summed once (Gauss-Legendre, 32
    nodes per panel, panels split adaptively); a query adds the partial panel
    [x_k, x] exactly with the same rule, so no interpolation error enters.
    The complement pi-side sums give 1 - Q without cancellation near pi.
    """

    def __init__(self, f, n_grid: int = CONFLUENT_GRID):
        self._f = f
        self.grid = np.linspace(0.0, math.pi, int(n_grid))
        gx, gw = np.polynomial.legendre.leggauss(GL_NODES)
        self._gx, self._gw = gx, gw
        panels = np.array([quadrature(self._sq, lo, hi, tol=PANEL_TOL, rel_tol=1e-14, max_evals=20000)
                           if hi > lo else 0.0
                           for lo, hi in zip(self.grid[:-1], self.grid[1:])])
        self.panels = panels
        self.left = np.concatenate([[0.0], np.cumsum(panels)])
        self.right = np.concatenate([np.cumsum(panels[::-1])[::-1], [0.0]])
        self.total = float(self.left[-1])

    def _sq(self, x):
        v = np.real(self._f(np.asarray(x))[0])
        return v * v

    def _partial(self, lo, hi):
        # vectorised fixed-order rule over [lo_i, hi_i]
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        pts = mid[:, None] + half[:, None] * self._gx[None, :]
        flat = np.clip(pts.ravel(), 1e-300, math.pi * (1 - 1e-16))
        vals = self._sq(flat).reshape(pts.shape)
        return half * (vals @ self._gw)

    def _locate(self, x):
        k = np.clip(np.searchsorted(self.grid, x, side="right") - 1, 0, self.grid.size - 2)
        return k

    def from_left(self, x):
        x = np.asarray(x, dtype=float)
        k = self._locate(np.atleast_1d(x))
        out = self.left[k] + self._partial(self.grid[k], np.atleast_1d(x))
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def from_right(self, x):
        x = np.asarray(x, dtype=float)
        k = self._locate(np.atleast_1d(x)) + 1
        out = self.right[k] + self._partial(np.atleast_1d(x), self.grid[k])
        return out.reshape(x.shape) if x.ndim else float(out[0])


def confluent_wronskian(psi: SolutionEvaluator, w0: float,
                        cumulative: CumulativeIntegral | None = None) -> WronskianEvaluator:
    """W = w0 + Q(x); for w0 <= -1 written as (w0 + 1) - (integral from x to pi).

    psi is normalised, so Q(pi) = 1 exactly; using the summed total instead
    would leave a 1e-15 constant that swamps the sin^(2a+3) decay at pi.
    """
    w0 = float(w0)
    if -1.0 < w0 < 0.0:
        raise PreconditionError("w0 must lie in (-inf, -1] or [0, inf)")
    cum = cumulative or CumulativeIntegral(psi.func)
    tail = w0 + 1.0

    def f(x):
        y, dy = psi(x)
        if w0 <= -1.0:
            w = tail - cum.from_right(x)
        else:
            w = w0 + cum.from_left(x)
        return w, y * y, 2.0 * y * dy

    return WronskianEvaluator(f, "confluent", {"w0": w0, "Q_pi": cum.total})


def confluent_potential(p: trm.TrmParams, j: int, w0: float,
                        n_levels: int = N_LEVELS) -> PartnerPotential:
    """Confluent partner seeded by the normalised bound state psi_j.

    w0 = 0 or -1 erases E_j; other admissible w0 keep the spectrum.
    """
    spec = SecondOrderSpec("confluent", j=int(j), w0=float(w0))
    w0 = spec.w0
    if 0.0 < abs(w0) < NEAR_LIMIT or 0.0 < abs(w0 + 1.0) < NEAR_LIMIT:
        warnings.warn("w0 is close to a deleting value; the erased level is nearly bound "
                      "and may show up in a numerical spectrum", RuntimeWarning, stacklevel=2)
    psi = trm.bound_state(p, spec.j)
    W = confluent_wronskian(psi, w0)
    base = _levels(p, n_levels + 1)
    c = 0.5 * p.a * (p.a + 1)
    coef = {"left": c, "right": c}
    if w0 == 0.0 or w0 == -1.0:
        spectrum = [e for k, e in enumerate(base) if k != spec.j][:n_levels]
        # W vanishes like the integral of psi^2 ~ sin^(2a+3) at one end
        coef["left" if w0 == 0.0 else "right"] = 0.5 * (p.a + 2) * (p.a + 3)
        label = f"confluent delete E_{spec.j}"
    else:
        spectrum = base[:n_levels]
        label = "confluent isospectral"
    return second_order_potential(p, W, predicted_spectrum=spectrum, provenance=label,
                                  singular_coefficient=coef, seeds=((psi, psi.energy),))


def fit_singular_coefficient(V, end: str = "left", delta: float = 1e-4) -> float:
    """Extrapolate sin^2(x) V(x) to the endpoint from x = delta * {1, 2, 4}.

    Quadratic Richardson in the distance to the end removes the linear
    cot-term and the next correction.
    """
    d = delta * np.array([1.0, 2.0, 4.0])
    x = d if end == "left" else math.pi - d
    y = np.sin(x) ** 2 * np.asarray(V(x))
    # values at h, 2h, 4h of c + alpha h + beta h^2
    return float((8 * y[0] - 6 * y[1] + y[2]) / 3)
