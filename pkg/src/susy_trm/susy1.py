"""First-order SUSY (Darboux) transformations of the trigonometric Rosen-Morse
potential.

A nodeless seed solution u of H0 u = eps u factorises H0 - eps = A^+ A with
A = (d/dx - u'/u) / sqrt(2).  The partner

    V1 = V0 - (ln u)'' = 2 eps - V0 + (u'/u)^2

is assembled without differentiating u numerically: (ln u)'' is replaced by
2(V0 - eps) - (u'/u)^2 from the Schrodinger equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import trm
from .errors import DegenerateEnergyError, PreconditionError, SingularTransformError
from .evaluator import SolutionEvaluator, interior
from .oracle import Grid, count_nodes, quadrature, square_integrable

N_LEVELS = 8
NODE_GRID = Grid(2000, 1e-4)
NODE_FLOOR = 1e-12


@dataclass(frozen=True)
class FirstOrderSeed:
    """Factorisation energy together with the kind of solution used as seed.

    ``source`` is one of "bound" (the ground state, deleted), "general" (a
    nodeless psi_L + lambda psi_R, creates a level), "L" or "R" (isospectral).
    """

    epsilon: float
    source: str
    lam: float | None = None

    def __post_init__(self):
        if self.source not in ("bound", "general", "L", "R"):
            raise PreconditionError(f"unknown seed source {self.source!r}")
        if self.source == "general" and not (self.lam is not None and self.lam > 0):
            raise PreconditionError("a level-creating seed needs lambda > 0")

    def case(self) -> str:
        return {"bound": "delete-ground", "general": "create-ground"}.get(self.source, "isospectral")

    def validate(self, p: trm.TrmParams) -> None:
        e0 = trm.bound_energy(p, 0)
        if self.source == "bound":
            if abs(self.epsilon - e0) > trm.COLLISION_TOL:
                raise PreconditionError("deleting the ground level needs epsilon = E0")
        elif not self.epsilon < e0:
            raise PreconditionError("epsilon must lie below E0")

    def solution(self, p: trm.TrmParams) -> SolutionEvaluator:
        self.validate(p)
        if self.source == "bound":
            return trm.bound_state(p, 0)
        if self.source == "general":
            return trm.general_solution(p, self.epsilon, self.lam)
        return (trm.psi_L if self.source == "L" else trm.psi_R)(p, self.epsilon)


@dataclass(frozen=True)
class PartnerPotential:
    """Transformed potential with its predicted spectrum.

    ``singular_coefficient`` maps "left"/"right" to c in V ~ c / sin^2 x at
    that endpoint.  ``seeds`` keeps the factorisation data used to build it.
    """

    func: Callable[[np.ndarray], np.ndarray]
    predicted_spectrum: list[float]
    provenance: str
    singular_coefficient: dict[str, float]
    seeds: tuple = field(default=(), compare=False)
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, x):
        return self.func(x)

    def eval(self, x):
        return self.func(x)


def _seed_values(seed: SolutionEvaluator, x):
    u, du = seed(x)
    if not seed.is_real:
        raise PreconditionError("first-order seeds must have a real energy")
    return u, du


def check_nodeless(seed: SolutionEvaluator, grid: Grid = NODE_GRID) -> None:
    """Raise SingularTransformError if the seed has a node on the check grid."""
    x = grid.nodes
    u = np.real(seed.value(x))
    if not np.all(np.isfinite(u)):
        raise SingularTransformError("seed is not finite on the check grid")
    pad = 1
    mag = np.pad(np.abs(u), pad, mode="edge")
    scale = np.lib.stride_tricks.sliding_window_view(mag, 2 * pad + 1).max(axis=1)
    if np.any(np.abs(u) < NODE_FLOOR * scale):
        raise SingularTransformError("seed vanishes inside (0, pi)")
    if count_nodes(seed, grid) > 0:
        raise SingularTransformError("seed changes sign inside (0, pi)")


def log_derivative(seed: SolutionEvaluator, x):
    u, du = _seed_values(seed, x)
    return du / u


def _endpoint_coefficients(a: float, regular_left: bool, regular_right: bool) -> dict[str, float]:
    # u ~ sin^(a+1) at a regular end, sin^(-a) at a diverging one; -(ln u)''
    # adds (a+1) or -a times csc^2 to the a(a+1)/2 csc^2 of V0
    def coef(regular):
        return 0.5 * (a + 1) * (a + 2) if regular else 0.5 * a * (a - 1)
    return {"left": coef(regular_left), "right": coef(regular_right)}


def _regular_ends(seed: SolutionEvaluator) -> tuple[bool, bool]:
    kind = seed.kind
    if kind == "bound":
        return True, True
    if kind == "L":
        return True, False
    if kind == "R":
        return False, True
    lam = seed.params.get("lambda", 0.0)
    return lam == 0.0, False


def _predicted(p: trm.TrmParams, case: str, epsilon: float, n_levels: int) -> list[float]:
    if case == "delete-ground":
        return [trm.bound_energy(p, n) for n in range(1, n_levels + 1)]
    levels = [trm.bound_energy(p, n) for n in range(n_levels)]
    if case == "create-ground":
        levels = [float(epsilon)] + levels[:-1]
    return sorted(levels)


def _infer_case(p: trm.TrmParams, seed: SolutionEvaluator, epsilon: float) -> str:
    if seed.kind == "bound":
        if seed.params.get("n") != 0:
            raise SingularTransformError("only the ground state is a nodeless bound seed")
        return "delete-ground"
    if seed.kind == "general" and seed.params.get("lambda", 0.0) != 0.0:
        return "create-ground"
    return "isospectral"


def first_order_potential(p: trm.TrmParams, seed: SolutionEvaluator, epsilon: float,
                          n_levels: int = N_LEVELS, check: bool = True) -> PartnerPotential:
    """V1 = 2 eps - V0 + (u'/u)^2 for a nodeless seed u at energy eps."""
    epsilon = float(epsilon)
    if abs(complex(seed.energy) - epsilon) > 1e-9 * max(1.0, abs(epsilon)):
        raise PreconditionError("seed energy differs from the factorisation energy")
    if check:
        check_nodeless(seed)
    case = _infer_case(p, seed, epsilon)
    v0 = seed.potential or (lambda x: trm.potential(p, x))

    def v1(x):
        xs = interior(x)
        w = log_derivative(seed, np.atleast_1d(xs))
        out = 2.0 * epsilon - np.asarray(v0(np.atleast_1d(xs))) + w * w
        return float(out[0]) if xs.ndim == 0 else out

    left, right = _regular_ends(seed)
    return PartnerPotential(func=v1, predicted_spectrum=_predicted(p, case, epsilon, n_levels),
                            provenance=case,
                            singular_coefficient=_endpoint_coefficients(p.a, left, right),
                            seeds=((seed, epsilon),), params={"a": p.a, "b": p.b})


def delete_ground(p: trm.TrmParams, n_levels: int = N_LEVELS) -> PartnerPotential:
    """Remove E0; the result is again Rosen-Morse with a -> a + 1."""
    return first_order_potential(p, trm.bound_state(p, 0), trm.bound_energy(p, 0), n_levels)


def create_ground(p: trm.TrmParams, epsilon: float, lam: float,
                  n_levels: int = N_LEVELS) -> PartnerPotential:
    """Add a new ground level at epsilon < E0 using psi_L + lam psi_R, lam > 0."""
    seed = FirstOrderSeed(float(epsilon), "general", float(lam))
    return first_order_potential(p, seed.solution(p), epsilon, n_levels)


def isospectral(p: trm.TrmParams, epsilon: float, side: str = "L",
                n_levels: int = N_LEVELS) -> PartnerPotential:
    """Partner with the same spectrum, seeded by psi_L or psi_R below E0."""
    seed = FirstOrderSeed(float(epsilon), side)
    return first_order_potential(p, seed.solution(p), epsilon, n_levels)


def map_eigenfunction_1(seed: SolutionEvaluator, epsilon: float, psi: SolutionEvaluator,
                        E_n: float) -> SolutionEvaluator:
    """(-psi' + (u'/u) psi) / sqrt(2 (E_n - eps)), an eigenfunction of V1 at E_n."""
    epsilon = float(epsilon)
    E_n = float(E_n)
    if E_n == epsilon:
        raise DegenerateEnergyError("cannot map a state at the factorisation energy")
    if not E_n > epsilon:
        raise PreconditionError("E_n must exceed the factorisation energy")
    v0 = seed.potential
    norm = math.sqrt(2.0 * (E_n - epsilon))

    def f(x):
        u, du = seed.func(x)
        w = du / u
        y, dy = psi.func(x)
        v = np.asarray(v0(x))
        val = (-dy + w * y) / norm
        # psi'' = 2 (V0 - E_n) psi and w' = 2 (V0 - eps) - w^2
        dval = (-2.0 * (v - E_n) * y + (2.0 * (v - epsilon) - w * w) * y + w * dy) / norm
        return val, dval

    partner = _partner_fn(seed, epsilon)
    return SolutionEvaluator(f, energy=E_n, kind="mapped", potential=partner,
                             params={"epsilon": epsilon, "source": psi.kind, **psi.params},
                             normalized=psi.normalized, square_integrable=psi.square_integrable)


def _partner_fn(seed: SolutionEvaluator, epsilon: float):
    v0 = seed.potential

    def v1(x):
        u, du = seed.func(x)
        w = np.real(du / u)
        return 2.0 * epsilon - np.asarray(v0(x)) + w * w

    return v1


def _inverse_square(seed: SolutionEvaluator):
    def g(x):
        u = np.real(seed.func(np.asarray(x))[0])
        return 1.0 / (u * u)
    return g


def missing_state(seed: SolutionEvaluator, epsilon: float | None = None,
                  check: bool = True) -> SolutionEvaluator:
    """1/u, the state of V1 at the factorisation energy.

    Normalised by quadrature when square-integrable; otherwise returned as
    is with ``square_integrable=False``.
    """
    if check:
        check_nodeless(seed)
    eps = float(np.real(seed.energy)) if epsilon is None else float(epsilon)
    base = seed.func

    def f(x):
        u, du = base(x)
        return 1.0 / u, -du / (u * u)

    sq = square_integrable(lambda x: 1.0 / np.real(base(np.asarray(x))[0]))
    c = 1.0
    if sq:
        norm2 = quadrature(_inverse_square(seed), 0.0, math.pi, tol=0.0, rel_tol=1e-11)
        c = 1.0 / math.sqrt(norm2)

    def scaled(x):
        v, dv = f(x)
        return c * v, c * dv

    return SolutionEvaluator(scaled, energy=eps, kind="missing", potential=_partner_fn(seed, eps),
                             params=dict(seed.params), normalized=sq, square_integrable=sq)
