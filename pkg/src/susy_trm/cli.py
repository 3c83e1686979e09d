"""Command-line front end.

    susy-trm spectrum  --a 2 --b 50 --levels 5
    susy-trm transform --a 2 --b 50 --order 2 --seed1 bound:1 --seed2 bound:0 --out v2.csv
    susy-trm verify    --a 2 --b 50 --order 1 --seed1 general:-200:10
    susy-trm verify    --matrix
    susy-trm eval      --a 2 --b 50 --order 1 --seed1 general:-200:10 --state missing

Seeds: ``bound:<n>``, ``general:<eps>:<lambda>``, ``L:<eps>``, ``R:<eps>``,
``complex:<re>:<im>:<L|R>``.  Output is data only: CSV with 12 significant
digits, JSON with 17 and a ``"schema"`` tag.  Exit codes: 0 ok, 2 config,
3 singular or invalid seed, 4 verification failure, 5 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import oracle, susy1, susy2, trm
from .errors import PreconditionError, SusyTrmError
from .evaluator import SolutionEvaluator

SCHEMA = "susy-trm/1"
GRID_ENV = "SUSY_TRM_GRID"
DEFAULT_ORACLE_POINTS = 4001
DEFAULT_VERIFY_LEVELS = 6
EXIT_VERIFY = 4
EXIT_INTERNAL = 5


class ConfigError(PreconditionError):
    """Bad command line or configuration."""


# ------------------------------------------------------------------ output

def _fmt(v: float, digits: int) -> str:
    return format(float(v), f".{digits}g")


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)
               for v in seq):
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj, 17) if math.isfinite(obj) else "null"
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _csv(header: list[str], columns: list[np.ndarray]) -> str:
    buf = io.StringIO(newline="")
    buf.write(",".join(header) + "\n")
    for row in zip(*columns):
        buf.write(",".join(_fmt(v, 12) for v in row) + "\n")
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ------------------------------------------------------------------- seeds

@dataclass(frozen=True)
class SeedArg:
    """Parsed seed text; ``complex_side`` is set only for complex seeds."""

    text: str
    kind: str
    epsilon: complex = 0.0
    lam: float | None = None
    n: int | None = None
    complex_side: str | None = None

    def spec(self, p: trm.TrmParams) -> susy2.SeedSpec:
        if self.kind == "complex":
            raise ConfigError(f"seed {self.text!r}: complex seeds only enter --case complex")
        if self.kind == "bound":
            return susy2.SeedSpec.bound(p, self.n)
        return susy2.SeedSpec(self.kind, float(np.real(self.epsilon)), self.lam)

    def solution(self, p: trm.TrmParams) -> SolutionEvaluator:
        if self.kind == "complex":
            return (trm.psi_L if self.complex_side == "L" else trm.psi_R)(p, self.epsilon)
        return self.spec(p).solution(p)


def _number(text: str, what: str, seed: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"seed {seed!r}: {what} {text!r} is not a number") from None
    if not math.isfinite(v):
        raise ConfigError(f"seed {seed!r}: {what} must be finite")
    return v


def parse_seed(text: str) -> SeedArg:
    """Parse the flat seed grammar into a SeedArg."""
    parts = text.split(":")
    kind = parts[0]
    if kind == "bound" and len(parts) == 2:
        try:
            n = int(parts[1])
        except ValueError:
            raise ConfigError(f"seed {text!r}: level index must be an integer") from None
        if n < 0:
            raise ConfigError(f"seed {text!r}: level index must be >= 0")
        return SeedArg(text, "bound", n=n)
    if kind == "general" and len(parts) == 3:
        return SeedArg(text, "general", _number(parts[1], "energy", text),
                       lam=_number(parts[2], "lambda", text))
    if kind in ("L", "R") and len(parts) == 2:
        return SeedArg(text, kind, _number(parts[1], "energy", text))
    if kind == "complex" and len(parts) == 4 and parts[3] in ("L", "R"):
        eps = complex(_number(parts[1], "real part", text), _number(parts[2], "imaginary part", text))
        return SeedArg(text, "complex", eps, complex_side=parts[3])
    raise ConfigError(f"cannot parse seed {text!r}; expected bound:<n>, general:<eps>:<lambda>, "
                      "L:<eps>, R:<eps> or complex:<re>:<im>:<L|R>")


# ------------------------------------------------------------------ config

@dataclass
class JobConfig:
    command: str
    a: float = 2.0
    b: float = 50.0
    order: int | None = None
    case: str | None = None
    seed1: SeedArg | None = None
    seed2: SeedArg | None = None
    j: int | None = None
    w0: float | None = None
    points: int = 1000
    delta: float = 1e-4
    n_points: int | None = None
    levels: int | None = None
    state: str | None = None
    predicted: list[float] | None = None
    out: str | None = None
    json_out: str | None = None
    matrix: bool = False
    max_points: int = oracle.MAX_POINTS
    extras: dict = field(default_factory=dict)

    def params(self) -> trm.TrmParams:
        return trm.TrmParams(self.a, self.b)

    def oracle_points(self) -> int:
        if self.n_points is not None:
            return self.n_points
        env = os.environ.get(GRID_ENV)
        if env:
            try:
                return int(env)
            except ValueError:
                raise ConfigError(f"{GRID_ENV} must be an integer, got {env!r}") from None
        return DEFAULT_ORACLE_POINTS

    def validate(self) -> None:
        """Cheap checks shared by every command, run before any computation."""
        self.params()
        if self.points < 2:
            raise ConfigError("--points must be at least 2")
        if not (0.0 < self.delta <= 1e-3):
            raise ConfigError("--delta must lie in (0, 1e-3]")
        if self.levels is not None and self.levels < 1:
            raise ConfigError("--levels must be positive")
        if self.command in ("transform", "verify", "eval") and not self.matrix:
            self._validate_transform()
        if self.command == "verify":
            oracle.Grid.aligned(self.oracle_points())

    def _validate_transform(self) -> None:
        if self.command == "eval" and self.order is None and self.seed1 is None and self.j is None:
            return
        order = self.order or (2 if (self.seed2 or self.j is not None or self._complex()) else 1)
        self.order = order
        if order == 1:
            if self.seed1 is None or self.seed2 is not None or self.j is not None:
                raise ConfigError("first order takes exactly one seed (--seed1)")
            if self.seed1.kind == "complex":
                raise ConfigError("first-order seeds must have a real energy")
            self.case = self.case or "first"
            return
        if order != 2:
            raise ConfigError("--order must be 1 or 2")
        case = self.case or ("confluent" if self.j is not None else
                             "complex" if self._complex() else "real")
        self.case = case
        if case == "real":
            if self.seed1 is None or self.seed2 is None:
                raise ConfigError("the real case needs --seed1 and --seed2")
        elif case == "complex":
            if self.seed1 is None or self.seed1.kind != "complex" or self.seed2 is not None:
                raise ConfigError("the complex case takes one complex:<re>:<im>:<L|R> seed")
        elif case == "confluent":
            if self.j is None or self.w0 is None:
                raise ConfigError("the confluent case needs --j and --w0")
            if self.j < 0:
                raise ConfigError("--j must be >= 0")
            if -1.0 < self.w0 < 0.0:
                raise ConfigError("--w0 must lie in (-inf, -1] or [0, inf)")
        else:
            raise ConfigError(f"unknown case {case!r}")

    def _complex(self) -> bool:
        return self.seed1 is not None and self.seed1.kind == "complex"

    def describe(self) -> dict:
        out = {"a": self.a, "b": self.b, "order": self.order, "case": self.case}
        if self.seed1:
            out["seed1"] = self.seed1.text
        if self.seed2:
            out["seed2"] = self.seed2.text
        if self.j is not None:
            out["j"] = self.j
            out["w0"] = self.w0
        return out


# --------------------------------------------------------------- transforms

@dataclass
class Transform:
    potential: susy1.PartnerPotential
    label: str
    order: int
    seeds: tuple = ()          # (SolutionEvaluator, energy) pairs, in transform order
    wronskian: Any = None


def build_transform(cfg: JobConfig) -> Transform:
    p = cfg.params()
    if cfg.order == 1:
        seed = cfg.seed1.solution(p)
        eps = float(np.real(seed.energy))
        pot = susy1.first_order_potential(p, seed, eps)
        return Transform(pot, pot.provenance, 1, ((seed, eps),))
    if cfg.case == "real":
        pot, case = susy2.real_case_potential(p, cfg.seed1.spec(p), cfg.seed2.spec(p))
        label = str(case) + (f" ({case.note})" if case.note else "")
        return Transform(pot, label, 2, pot.seeds, pot.params["wronskian"])
    if cfg.case == "complex":
        pot = susy2.complex_case_potential(p, cfg.seed1.epsilon, cfg.seed1.complex_side)
        return Transform(pot, pot.provenance, 2, pot.seeds, pot.params["wronskian"])
    pot = susy2.confluent_potential(p, cfg.j, cfg.w0)
    return Transform(pot, pot.provenance, 2, pot.seeds, pot.params["wronskian"])


def _sample_grid(cfg: JobConfig) -> np.ndarray:
    return np.linspace(cfg.delta, np.pi - cfg.delta, cfg.points)


# ---------------------------------------------------------------- commands

def cmd_spectrum(cfg: JobConfig) -> int:
    p = cfg.params()
    count = cfg.levels or 5
    doc = {"schema": SCHEMA, "a": p.a, "b": p.b,
           "levels": [{"n": n, "E_n": trm.bound_energy(p, n)} for n in range(count)]}
    _emit(dumps(doc) + "\n", cfg.out)
    return 0


def cmd_transform(cfg: JobConfig) -> int:
    t = build_transform(cfg)
    p = cfg.params()
    x = _sample_grid(cfg)
    name = "V1" if t.order == 1 else "V2"
    _emit(_csv(["x", "V0", name], [x, trm.potential(p, x), t.potential(x)]), cfg.out)
    sidecar = {"schema": SCHEMA, "command": "transform", "config": cfg.describe(),
               "case": t.label, "provenance": t.potential.provenance,
               "predicted_spectrum": t.potential.predicted_spectrum,
               "singular_coefficient": t.potential.singular_coefficient,
               "grid": {"points": cfg.points, "delta": cfg.delta}}
    path = cfg.json_out or (cfg.out + ".json" if cfg.out not in (None, "-") else None)
    if path:
        _emit(dumps(sidecar) + "\n", path)
    else:
        sys.stderr.write(dumps(sidecar) + "\n")
    return 0


def _certify(cfg: JobConfig) -> tuple[dict, bool]:
    t0 = time.perf_counter()
    t = build_transform(cfg)
    count = cfg.levels or DEFAULT_VERIFY_LEVELS
    predicted = cfg.predicted if cfg.predicted is not None else t.potential.predicted_spectrum[:count]
    cert = oracle.certify_spectrum(t.potential, predicted, start=oracle.Grid.aligned(cfg.oracle_points()),
                                   max_points=cfg.max_points)
    rep = cert.report
    doc = {"config": cfg.describe(), "case": t.label, "ok": cert.ok,
           "predicted": sorted(float(e) for e in predicted),
           "eigenvalues": rep.eigenvalues, "coarse": rep.coarse,
           "level_tolerances": rep.level_tolerances,
           "certified_tolerance": rep.certified_tolerance,
           "missing": cert.missing, "spurious": cert.spurious, "unresolved": cert.unresolved,
           "grids": cert.grids, "seconds": round(time.perf_counter() - t0, 3)}
    return doc, cert.ok


def cmd_verify(cfg: JobConfig) -> int:
    if cfg.matrix:
        return _verify_matrix(cfg)
    doc, ok = _certify(cfg)
    _emit(dumps({"schema": SCHEMA, "command": "verify", **doc}) + "\n", cfg.out)
    return 0 if ok else EXIT_VERIFY


def _resolve_state(cfg: JobConfig) -> SolutionEvaluator:
    sel = cfg.state
    if sel is None:
        raise ConfigError("eval needs --state")
    p = cfg.params()
    head, _, rest = sel.partition(":")
    if head in ("bound", "general", "L", "R", "complex"):
        return parse_seed(sel).solution(p)
    if cfg.order is None:
        raise ConfigError(f"state {sel!r} needs a transformation (--order and seeds)")
    t = build_transform(cfg)
    if head == "missing":
        if t.order != 1 or rest:
            raise ConfigError("'missing' selects the first-order missing state")
        seed, eps = t.seeds[0]
        return susy1.missing_state(seed, eps)
    if head == "mapped":
        try:
            n = int(rest)
        except ValueError:
            raise ConfigError(f"state {sel!r}: expected mapped:<n>") from None
        if n < 0:
            raise ConfigError("mapped:<n> needs n >= 0")
        psi, E = trm.bound_state(p, n), trm.bound_energy(p, n)
        if t.order == 1:
            seed, eps = t.seeds[0]
            return susy1.map_eigenfunction_1(seed, eps, psi, E)
        if cfg.case != "real":
            raise ConfigError("mapped states are available for first order and the real case")
        (u1, e1), (u2, e2) = t.seeds
        return susy2.map_eigenfunction_2(t.wronskian, u1, u2, e1, e2, psi, E)
    if head == "new" and rest in ("1", "2"):
        if cfg.case != "real":
            raise ConfigError("new:<1|2> selects the real-case states u2/W and u1/W")
        (u1, _), (u2, _) = t.seeds
        return susy2.new_bound_states_2(t.wronskian, u1, u2)[int(rest) - 1]
    raise ConfigError(f"invalid state selector {sel!r}; expected a seed, missing, mapped:<n> or new:<1|2>")


def cmd_eval(cfg: JobConfig) -> int:
    f = _resolve_state(cfg)
    x = _sample_grid(cfg)
    u, du = f(x)  # real parts for real energies
    u, du = np.asarray(u, dtype=complex), np.asarray(du, dtype=complex)
    _emit(_csv(["x", "re", "im", "d_re", "d_im"], [x, u.real, u.imag, du.real, du.imag]), cfg.out)
    return 0


# ----------------------------------------------------------- verify matrix

# The design matrix of spectral modifications for TRM(a=2, b=50) (first-order
# deletion also at b=10).  Each entry is a command line for `verify`.
SCENARIOS: dict[str, list[list[str]]] = {
    "first-order delete": [["--b", "10", "--order", "1", "--seed1", "bound:0"],
                           ["--order", "1", "--seed1", "bound:0"]],
    "first-order create": [["--order", "1", "--seed1", "general:-310.5:1"],
                           ["--order", "1", "--seed1", "general:-200:10"]],
    "first-order isospectral": [["--order", "1", "--seed1", "L:-310.5"],
                                ["--order", "1", "--seed1", "R:-200"]],
    "(i) delete two": [["--order", "2", "--seed1", "bound:1", "--seed2", "bound:0"],
                       ["--order", "2", "--seed1", "bound:3", "--seed2", "bound:2"]],
    "(ii) create two": [["--order", "2", "--seed1", "general:-150:1", "--seed2", "general:-250:-1"],
                        ["--order", "2", "--seed1", "general:-2:1", "--seed2", "general:-10:-1"]],
    "(iii) create one": [["--order", "2", "--seed1", "R:-40", "--seed2", "general:-60:-1"],
                         ["--order", "2", "--seed1", "L:-2", "--seed2", "general:-10:-1"]],
    "(iv) move one": [["--order", "2", "--seed1", "bound:1", "--seed2", "general:-100:1"],
                      ["--order", "2", "--seed1", "general:0:-1", "--seed2", "bound:4"]],
    "(v) delete one": [["--order", "2", "--seed1", "bound:1", "--seed2", "R:-100"],
                       ["--order", "2", "--seed1", "L:0", "--seed2", "bound:4"]],
    "(vi) isospectral": [["--order", "2", "--seed1", "L:-40", "--seed2", "L:-60"],
                         ["--order", "2", "--seed1", "L:-2", "--seed2", "R:-10"]],
    "complex": [["--order", "2", "--seed1", "complex:-16.72:1:L"],
                ["--order", "2", "--seed1", "complex:-16.72:20:L"],
                ["--order", "2", "--seed1", "complex:0:1:L"],
                ["--order", "2", "--seed1", "complex:0:20:L"]],
    "confluent": [["--order", "2", "--j", "1", "--w0", "0"],
                  ["--order", "2", "--j", "1", "--w0", "0.05"],
                  ["--order", "2", "--j", "3", "--w0", "0"],
                  ["--order", "2", "--j", "3", "--w0", "0.05"]],
}


def scenario_configs(base: JobConfig | None = None):
    """(scenario name, JobConfig) for every entry of the verify matrix."""
    parser = build_parser()
    for name, runs in SCENARIOS.items():
        for argv in runs:
            args = parser.parse_args(["verify", "--a", "2", "--b", "50", *argv])
            cfg = config_from_args(args)
            if base is not None:
                cfg.n_points, cfg.levels, cfg.max_points = base.n_points, base.levels, base.max_points
            cfg.validate()
            yield name, cfg


def _verify_matrix(cfg: JobConfig) -> int:
    results = []
    all_ok = True
    for name, sub in scenario_configs(cfg):
        try:
            doc, ok = _certify(sub)
        except SusyTrmError as exc:
            doc, ok = {"config": sub.describe(), "ok": False,
                       "error": {"type": type(exc).__name__, "message": str(exc)}}, False
        doc["scenario"] = name
        results.append(doc)
        all_ok &= ok
        sys.stderr.write(f"{'PASS' if ok else 'FAIL'}  {name}  {doc['config']}\n")
    _emit(dumps({"schema": SCHEMA, "command": "verify", "matrix": True, "ok": all_ok,
                 "results": results}) + "\n", cfg.out)
    return 0 if all_ok else EXIT_VERIFY


COMMANDS = {"spectrum": cmd_spectrum, "transform": cmd_transform,
            "verify": cmd_verify, "eval": cmd_eval}


# ----------------------------------------------------------------- parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _seed(text: str) -> SeedArg:
    try:
        return parse_seed(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="susy-trm", description="SUSY partners of the trigonometric "
                     "Rosen-Morse potential: spectra, potentials, solutions, verification.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, transform=True):
        sp.add_argument("--a", type=float, default=2.0, help="centrifugal parameter, a > 0")
        sp.add_argument("--b", type=float, default=50.0, help="cotangent strength")
        sp.add_argument("--out", help="output file (default: stdout)")
        if transform:
            sp.add_argument("--order", type=int, choices=(1, 2))
            sp.add_argument("--case", choices=("real", "complex", "confluent"))
            sp.add_argument("--seed1", type=_seed)
            sp.add_argument("--seed2", type=_seed)
            sp.add_argument("--j", type=int, help="confluent case: level index")
            sp.add_argument("--w0", type=float, help="confluent case: integration constant")
            sp.add_argument("--points", type=int, default=1000, help="CSV sample count")
            sp.add_argument("--delta", type=float, default=1e-4, help="endpoint inset of the samples")

    sp = sub.add_parser("spectrum", help="closed-form bound-state energies")
    common(sp, transform=False)
    sp.add_argument("--levels", type=int, default=5)

    sp = sub.add_parser("transform", help="sample V0 and the partner potential as CSV")
    common(sp)
    sp.add_argument("--json", dest="json_out", help="sidecar path (default: <out>.json)")

    sp = sub.add_parser("verify", help="check the predicted spectrum with the FD oracle")
    common(sp)
    sp.add_argument("--levels", type=int, help=f"predicted levels checked (default {DEFAULT_VERIFY_LEVELS})")
    sp.add_argument("--n-points", type=int, help=f"starting oracle grid (default ${GRID_ENV} or "
                    f"{DEFAULT_ORACLE_POINTS})")
    sp.add_argument("--max-points", type=int, default=oracle.MAX_POINTS,
                    help="largest grid the oracle may refine to")
    sp.add_argument("--predicted", type=_float_list, help="override the predicted levels (comma-separated)")
    sp.add_argument("--matrix", action="store_true", help="run the built-in scenario matrix")

    sp = sub.add_parser("eval", help="sample a solution as CSV x,re,im,d_re,d_im")
    common(sp)
    sp.add_argument("--state", required=True,
                    help="a seed, or missing, mapped:<n>, new:<1|2> for the configured transform")
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    known = {f for f in JobConfig.__dataclass_fields__}
    values = {k: v for k, v in vars(args).items() if k in known and v is not None}
    return JobConfig(**values)


def _fail(exc: BaseException, code: int) -> int:
    doc = {"schema": SCHEMA, "error": {"type": type(exc).__name__, "message": str(exc),
                                       "exit_code": code}}
    sys.stdout.write(dumps(doc) + "\n")
    sys.stderr.write(f"error: {exc}\n")
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except SusyTrmError as exc:
        return _fail(exc, exc.exit_code)
    except (OSError, MemoryError) as exc:
        return _fail(exc, EXIT_INTERNAL)
    except Exception as exc:  # noqa: BLE001 - last line of the exit-code contract
        return _fail(exc, EXIT_INTERNAL)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
