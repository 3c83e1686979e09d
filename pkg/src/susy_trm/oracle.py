"""Independent numerical checks: finite-difference spectra, node counts,
ODE residuals and adaptive quadrature.

Nothing here knows about hypergeometric functions; potentials and solutions
enter only as black-box callables.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError, NumericalError, PreconditionError

SAFETY = 4.0
TOL_FLOOR = 1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [delta, pi - delta]; Dirichlet values sit one step outside."""

    n_points: int = 4001
    delta: float = 1e-4

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 501:
            raise PreconditionError("n_points must be an integer >= 501")
        if not (0.0 < self.delta <= 1e-3):
            raise PreconditionError("delta must lie in (0, 1e-3]")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.delta, np.pi - self.delta, int(self.n_points))

    @property
    def step(self) -> float:
        return (np.pi - 2.0 * self.delta) / (self.n_points - 1)

    @classmethod
    def aligned(cls, n_points: int) -> "Grid":
        """Grid whose Dirichlet points sit exactly at 0 and pi (delta = step)."""
        return cls(int(n_points), np.pi / (int(n_points) + 1))

    @property
    def is_aligned(self) -> bool:
        return abs(self.delta * (self.n_points + 1) - np.pi) < 1e-12

    def refined(self) -> "Grid":
        """Step halved; an aligned grid stays aligned and nests inside the refinement."""
        if self.is_aligned:
            return Grid.aligned(2 * self.n_points + 1)
        return Grid(2 * self.n_points - 1, self.delta)


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    certified_tolerance: float
    coarse: np.ndarray
    grid: Grid
    level_tolerances: np.ndarray | None = None
    predicted: list[float] | None = None
    matches: list[bool] = field(default_factory=list)

    def compare(self, predicted) -> list[bool]:
        """Flag each predicted level found within the certified tolerance."""
        self.predicted = [float(e) for e in predicted]
        n = min(len(self.predicted), len(self.eigenvalues))
        self.matches = [abs(self.eigenvalues[i] - self.predicted[i]) <= self.certified_tolerance
                        for i in range(n)]
        return self.matches


def _potential_values(V, x) -> np.ndarray:
    v = np.asarray(V(x), dtype=float)
    if v.shape != x.shape or not np.all(np.isfinite(v)):
        raise PreconditionError("potential must be finite on the grid")
    return v


def _lowest(V, grid: Grid, k: int, values: np.ndarray | None = None) -> np.ndarray:
    h = grid.step
    v = _potential_values(V, grid.nodes) if values is None else values
    diag = 1.0 / h**2 + v
    off = np.full(v.size - 1, -0.5 / h**2)
    try:
        w = eigh_tridiagonal(diag, off, eigvals_only=True, select="i",
                             select_range=(0, k - 1), lapack_driver="stebz")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"tridiagonal eigensolve failed: {exc}") from exc
    return np.sort(w)


def _report(coarse, fine, grid) -> SpectrumReport:
    per_level = np.maximum(SAFETY * np.abs(fine - coarse), TOL_FLOOR)
    return SpectrumReport(eigenvalues=fine, certified_tolerance=float(np.max(per_level)),
                          coarse=coarse, grid=grid, level_tolerances=per_level)


def fd_eigensolve(V, grid: Grid | None = None, k: int = 5) -> SpectrumReport:
    """Lowest k eigenvalues of -1/2 d^2/dx^2 + V with Dirichlet ends.

    Solved on ``grid`` and on the grid with the step halved; the reported
    eigenvalues are the fine ones and the certified tolerance is four times
    the largest change between the two resolutions.
    """
    grid = grid or Grid()
    if k < 1:
        raise PreconditionError("k must be positive")
    fine_grid = grid.refined()
    fine_values = coarse_values = None
    if grid.is_aligned:
        # nested grids: the coarse nodes are every other fine node
        fine_values = _potential_values(V, fine_grid.nodes)
        coarse_values = fine_values[1::2]
    coarse = _lowest(V, grid, k, coarse_values)
    fine = _lowest(V, fine_grid, k, fine_values)
    return _report(coarse, fine, grid)


MAX_POINTS = 600_000
MAX_TOLERANCE = 0.5


@dataclass
class Certification:
    """Outcome of matching an oracle spectrum against predicted levels.

    ``missing`` lists predicted levels not found, ``spurious`` oracle levels
    below the top of the predicted band that match nothing, ``unresolved``
    levels whose tolerance is too wide to tell neighbours apart.
    """

    ok: bool
    report: SpectrumReport
    missing: list[float]
    spurious: list[float]
    unresolved: list[float]
    grids: list[int]


def _separation(levels: np.ndarray) -> np.ndarray:
    if levels.size < 2:
        return np.full(levels.shape, np.inf)
    gaps = np.diff(levels)
    return np.minimum(np.concatenate([[np.inf], gaps]), np.concatenate([gaps, [np.inf]]))


def _judge(report: SpectrumReport, predicted: np.ndarray,
           max_tolerance: float) -> tuple[list, list, list]:
    m = predicted.size
    ev, tol = report.eigenvalues, report.level_tolerances
    ceiling = np.minimum(0.5 * _separation(predicted), max_tolerance)
    missing, unresolved = [], []
    for i in range(m):
        if tol[i] >= ceiling[i]:
            unresolved.append(float(predicted[i]))
        if abs(ev[i] - predicted[i]) > tol[i]:
            missing.append(float(predicted[i]))
    spurious = []
    for e, t in zip(ev[m:], tol[m:]):
        if e < predicted[-1] - t:
            spurious.append(float(e))
            if t >= min(0.5 * float(np.min(np.abs(predicted - e))), max_tolerance):
                unresolved.append(float(e))
    return missing, spurious, unresolved


def certify_spectrum(V, predicted, start: Grid | None = None,
                     max_points: int = MAX_POINTS, extra: int = 1,
                     max_tolerance: float = MAX_TOLERANCE) -> Certification:
    """Check predicted levels against the oracle, refining until the verdict is certain.

    Fine-grid level i must lie within its own tolerance 4 |fine_i - coarse_i|
    of predicted level i, and that tolerance must stay below ``max_tolerance``
    and below half the distance to the neighbouring predicted levels.  A level failing the second test is
    unresolved and the grid is refined; aligned grids nest, so only the new
    nodes are evaluated.  ``extra`` levels above the predicted band are solved
    for to catch unpredicted states below its top.
    """
    predicted = np.sort(np.asarray(predicted, dtype=float))
    if predicted.size == 0:
        raise PreconditionError("nothing to certify")
    grid = start or Grid.aligned(4001)
    if not grid.is_aligned:
        raise PreconditionError("certification needs an aligned grid")
    k = predicted.size + extra
    fine_grid = grid.refined()
    fine_values = _potential_values(V, fine_grid.nodes)
    coarse = _lowest(V, grid, k, fine_values[1::2])
    tried = [grid.n_points]
    while True:
        fine = _lowest(V, fine_grid, k, fine_values)
        tried.append(fine_grid.n_points)
        report = _report(coarse, fine, grid)
        report.compare(predicted)
        missing, spurious, unresolved = _judge(report, predicted, max_tolerance)
        ok = not (missing or spurious or unresolved)
        nxt = fine_grid.refined()
        if ok or not unresolved or nxt.n_points > max_points:
            return Certification(ok, report, missing, spurious, unresolved, tried)
        # the fine solve becomes the next coarse one
        values = np.empty(nxt.n_points)
        values[1::2] = fine_values
        values[0::2] = _potential_values(V, nxt.nodes[0::2])
        grid, fine_grid, fine_values, coarse = fine_grid, nxt, values, fine


def _values(f, x):
    out = f(x)
    if isinstance(out, tuple):
        out = out[0]
    return np.asarray(out)


def count_nodes(f, grid: Grid | None = None, graze: float = 1e-12) -> int:
    """Number of sign changes of f on the grid.

    A sign change whose two flanking values are both below ``graze`` times the
    local magnitude is bisected; it only counts if the refined values stay
    clear of that floor.
    """
    grid = grid or Grid(2000)
    x = grid.nodes
    y = np.real(_values(f, x))
    # local scale: running max over a small window, robust to huge dynamic range
    pad = 8
    mag = np.abs(y)
    padded = np.pad(mag, pad, mode="edge")
    windows = np.lib.stride_tricks.sliding_window_view(padded, 2 * pad + 1)
    scale = windows.max(axis=1)
    s = np.sign(y)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    count = 0
    for i in idx:
        floor = graze * max(scale[i], scale[i + 1])
        if abs(y[i]) >= floor or abs(y[i + 1]) >= floor:
            count += 1
            continue
        lo, hi, ylo = x[i], x[i + 1], y[i]
        genuine = False
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            ym = float(np.real(_values(f, np.array([mid]))[0]))
            if abs(ym) >= floor:
                genuine = True
                break
            if np.sign(ym) == np.sign(ylo):
                lo, ylo = mid, ym
            else:
                hi = mid
        count += genuine
    return count


def ode_residual(f, E, V, points, step: float = 1e-5) -> float:
    """max |-f''/2 + V f - E f| / ((1 + |f|)(1 + |E|)) over the points.

    f'' comes from a central difference of f's derivative channel.
    """
    x = np.asarray(points, dtype=float)
    u, _ = f(x)
    _, dp = f(x + step)
    _, dm = f(x - step)
    d2 = (dp - dm) / (2.0 * step)
    res = np.abs(-0.5 * d2 + (np.asarray(V(x)) - E) * u)
    return float(np.max(res / ((1.0 + np.abs(u)) * (1.0 + abs(E)))))


def residual_points(V, E, f=None, n: int = 50, step: float = 1e-5, tol: float = 1e-6,
                    margin: float = 0.1, lo: float = 0.0, hi: float = np.pi) -> np.ndarray:
    """n evenly spread points of (lo, hi) where the difference stencil resolves the ODE.

    The central difference of u' is off by about step^2 |u''''| / 6, and for a
    solution u'''' = 2V''u + 4V'u' + 4(V - E)^2 u.  With |u| and |u'| replaced
    by the local amplitude A = sqrt(|u|^2 + |u'|^2 / (2|V - E| + 1)), a point
    is kept when that bound, normalised as in ``ode_residual``, stays below
    ``margin * tol``.  Without ``f`` the amplitude is taken equal to |u|.
    """
    cand = np.linspace(lo, hi, 40 * n + 2)[1:-1]
    dv = 1e-4
    vm, v0, vp = (np.asarray(V(cand + s)) for s in (-dv, 0.0, dv))
    d1 = np.abs(vp - vm) / (2 * dv)
    d2 = np.abs(vp - 2 * v0 + vm) / dv**2
    gap = np.abs(v0 - E)
    k = np.sqrt(2.0 * gap + 1.0)
    ratio = np.ones_like(cand)
    if f is not None:
        u, du = f(cand)
        amp = np.sqrt(np.abs(u) ** 2 + np.abs(du) ** 2 / k**2)
        ratio = amp / (1.0 + np.abs(u))
    bound = step**2 / 6.0 * (2 * d2 + 4 * d1 * k + 4 * gap**2) * ratio / (1.0 + abs(E))
    ok = cand[bound <= margin * tol]
    if ok.size < n:
        raise PreconditionError("too few points where the difference stencil resolves the ODE")
    return ok[np.linspace(0, ok.size - 1, n).round().astype(int)]


_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)


def _gl(f, lo, hi):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return half * np.sum(_GL_W * f(mid + half * _GL_X))


def quadrature(f, lo: float, hi: float, tol: float = 1e-10, rel_tol: float = 0.0,
               max_evals: int = 1_000_000) -> float:
    """Globally adaptive composite Gauss-Legendre (15 nodes per panel) on [lo, hi].

    Each panel's error is estimated by comparing it with the sum over its two
    halves; the panel with the largest error is split until the summed error
    is below max(tol, rel_tol * |integral|).
    """
    if not lo < hi:
        raise PreconditionError("quadrature needs lo < hi")

    def split(a, b, est):
        m = 0.5 * (a + b)
        left, right = _gl(f, a, m), _gl(f, m, b)
        return [(a, m, left), (m, b, right)], abs(left + right - est)

    whole = _gl(f, lo, hi)
    evals = 15
    heap = []  # (-error, tiebreak, a, b, value)
    total, err_sum = 0.0, 0.0
    counter = 0
    halves, err = split(lo, hi, whole)
    evals += 30
    for a, b, v in halves:
        heapq.heappush(heap, (-err / 2, counter, a, b, v))
        counter += 1
        total += v
        err_sum += err / 2
    while err_sum > max(tol, rel_tol * abs(total)):
        if evals > max_evals:
            raise ConvergenceError("adaptive quadrature exceeded its evaluation budget")
        neg_err, _, a, b, v = heapq.heappop(heap)
        if b - a < 1e-15 * (hi - lo):
            # cannot resolve further; accept this panel as is
            err_sum += neg_err
            heapq.heappush(heap, (0.0, counter, a, b, v))
            counter += 1
            continue
        halves, e = split(a, b, v)
        evals += 30
        total += halves[0][2] + halves[1][2] - v
        err_sum += neg_err + e
        for a2, b2, v2 in halves:
            heapq.heappush(heap, (-e / 2, counter, a2, b2, v2))
            counter += 1
    # re-sum to shed the rounding accumulated by incremental updates
    total = sum(item[4] for item in heap)
    return float(total) if np.isrealobj(total) else complex(total)


PROBE_DELTAS = (1e-3, 1e-4, 1e-5)
PROBE_RTOL = 1e-4


def square_integrable(f, deltas=PROBE_DELTAS, rtol: float = PROBE_RTOL) -> bool:
    """Endpoint probe: does the integral of |f|^2 over (d, pi - d) settle as d -> 0?

    The truncated integrals for successive d must agree to ``rtol``; a
    divergent tail makes them keep growing.
    """
    def g(x):
        v = _values(f, x)
        return np.abs(v) ** 2

    vals = []
    for d in deltas:
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            try:
                val = quadrature(g, d, np.pi - d, tol=0.0, rel_tol=1e-10)
            except ConvergenceError:
                return False
        if not np.isfinite(val):
            return False
        vals.append(val)
    return all(abs(vals[i + 1] - vals[i]) <= rtol * abs(vals[i + 1]) for i in range(len(vals) - 1))
