"""Callable Schrodinger solutions carrying energy and provenance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

RawFunc = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


def interior(x) -> np.ndarray:
    """Coerce to a float array and check 0 < x < pi."""
    from .errors import DomainError

    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= np.pi):
        raise DomainError("x must lie in the open interval (0, pi)")
    return arr


@dataclass(frozen=True)
class SolutionEvaluator:
    """A solution u of -u''/2 + V u = E u, evaluated with its first derivative.

    ``func`` maps an array of x in (0, pi) to complex arrays ``(u, u')``.
    Calling the evaluator returns the canonical values: real parts when the
    energy is real, complex values otherwise.  ``potential`` is the V the
    solution satisfies (V0 for seeds, the partner potential for mapped states).
    """

    func: RawFunc
    energy: complex
    kind: str
    potential: Callable[[np.ndarray], np.ndarray] | None = None
    params: dict[str, Any] = field(default_factory=dict)
    normalized: bool = False
    square_integrable: bool | None = None

    @property
    def is_real(self) -> bool:
        return complex(self.energy).imag == 0.0

    def raw(self, x):
        xs = interior(x)
        u, du = self.func(np.atleast_1d(xs))
        if xs.ndim == 0:
            return complex(u[0]), complex(du[0])
        return u, du

    def __call__(self, x):
        u, du = self.raw(x)
        if self.is_real:
            return np.real(u), np.real(du)
        return u, du

    eval = __call__

    def value(self, x):
        return self(x)[0]

    def imag_residue(self, x) -> float:
        """max |Im u| relative to the local amplitude of u over x.

        The amplitude is sqrt(|u|^2 + |u'|^2 / (2|V - E| + 1)), which stays
        finite at the nodes of Re u, where a pointwise ratio is meaningless.
        Without a potential the ratio is taken against |u| alone.
        """
        xs = np.atleast_1d(interior(x))
        u, du = self.func(xs)
        if self.potential is not None:
            k2 = 2.0 * np.abs(np.asarray(self.potential(xs)) - self.energy) + 1.0
            amp = np.sqrt(np.abs(u) ** 2 + np.abs(du) ** 2 / k2)
        else:
            amp = np.abs(u)
        return float(np.max(np.abs(u.imag) / np.maximum(amp, 1e-300)))

    def with_scale(self, c: complex, **changes) -> "SolutionEvaluator":
        """Return the evaluator multiplied by a constant."""
        f = self.func

        def scaled(x):
            u, du = f(x)
            return c * u, c * du

        kw = dict(func=scaled, energy=self.energy, kind=self.kind, potential=self.potential,
                  params=dict(self.params), normalized=self.normalized,
                  square_integrable=self.square_integrable)
        kw.update(changes)
        return SolutionEvaluator(**kw)
