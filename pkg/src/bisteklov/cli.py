"""Command-line front end: CSV tables for spectra, counting laws, sharpness
studies, symbol evaluation, and half-space verification.

Exit codes: 0 success, 2 validation failure, 3 numerical failure.  Output is
deterministic for a fixed configuration (Monte Carlo is seeded); reals are
written with 17 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import counting, halfspace, spectra, symbols
from .spectra import ProblemKind

_PROBLEMS = {
    "p1": ProblemKind.NEUMANN_TRACE,
    "p2": ProblemKind.DIRICHLET_TRACE,
    "harmonic": ProblemKind.HARMONIC_STEKLOV,
}


# ---------------------------------------------------------------------------
# weight expressions: constants, t/theta, +, -, *, cos, sin, parentheses
# ---------------------------------------------------------------------------

class WeightExpr:
    """Tiny arithmetic expression over the boundary parameter."""

    def __init__(self, text: str):
        self.text = text
        self._uses_param = False
        self._tokens = self._tokenize(text)
        self._pos = 0
        self.fn = self._parse_expr()
        if self._pos != len(self._tokens):
            raise ValueError(f"trailing input in weight expression: {text!r}")

    @property
    def is_constant(self) -> bool:
        return not self._uses_param

    def constant_value(self) -> float:
        if not self.is_constant:
            raise ValueError(f"weight expression {self.text!r} is not constant")
        return self.fn(0.0)

    @staticmethod
    def _tokenize(text: str) -> list[str]:
        tokens, i = [], 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
            elif c in "+-*()":
                tokens.append(c)
                i += 1
            elif c.isdigit() or c == ".":
                j = i
                while j < len(text) and (text[j].isdigit() or text[j] in ".eE"
                                         or (text[j] in "+-" and text[j - 1] in "eE")):
                    j += 1
                tokens.append(text[i:j])
                i = j
            elif c.isalpha():
                j = i
                while j < len(text) and text[j].isalpha():
                    j += 1
                tokens.append(text[i:j])
                i = j
            else:
                raise ValueError(f"bad character {c!r} in weight expression")
        return tokens

    def _peek(self):
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def _take(self, expected=None):
        tok = self._peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"malformed weight expression {self.text!r}")
        self._pos += 1
        return tok

    def _parse_expr(self) -> Callable[[float], float]:
        value = self._parse_term()
        while self._peek() in ("+", "-"):
            op = self._take()
            rhs = self._parse_term()
            lhs = value
            value = ((lambda t, a=lhs, b=rhs: a(t) + b(t)) if op == "+"
                     else (lambda t, a=lhs, b=rhs: a(t) - b(t)))
        return value

    def _parse_term(self) -> Callable[[float], float]:
        value = self._parse_unary()
        while self._peek() == "*":
            self._take()
            rhs = self._parse_unary()
            lhs = value
            value = lambda t, a=lhs, b=rhs: a(t) * b(t)
        return value

    def _parse_unary(self) -> Callable[[float], float]:
        if self._peek() == "-":
            self._take()
            inner = self._parse_unary()
            return lambda t, a=inner: -a(t)
        return self._parse_atom()

    def _parse_atom(self) -> Callable[[float], float]:
        tok = self._take()
        if tok == "(":
            inner = self._parse_expr()
            self._take(")")
            return inner
        if tok in ("t", "theta"):
            self._uses_param = True
            return lambda t: t
        if tok == "pi":
            return lambda t: math.pi
        if tok in ("cos", "sin"):
            self._take("(")
            inner = self._parse_expr()
            self._take(")")
            f = math.cos if tok == "cos" else math.sin
            return lambda t, a=inner, f=f: f(a(t))
        try:
            value = float(tok)
        except ValueError:
            raise ValueError(f"unknown token {tok!r} in weight expression") from None
        return lambda t: value


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    problem: ProblemKind
    n: int
    m_max: int
    rho: str
    h: float
    L: float
    panels: int
    quad_points: int
    eta: float
    epsilon: float
    levels: int
    points: int
    samples: int
    xn: float
    seed: int
    mode: str
    out: str | None


# the growth-law study needs enough eigenvalues for a decade-wide fit
_COMMAND_DEFAULTS = {"weyl": {"m_max": 200}}

_DEFAULTS = {
    "problem": "p1",
    "n": 2,
    "m_max": 10,
    "rho": "1",
    "h": 1.0 / 256.0,
    "L": 30.0,
    "panels": 64,
    "quad_points": 256,
    "eta": 1.0,
    "epsilon": 0.0,
    "levels": 4,
    "points": 72,
    "samples": 128,
    "xn": 1.0,
    "seed": 0,
    "mode": "bvp",
    "out": None,
}

_FIELD_TYPES = {
    "problem": str, "n": int, "m_max": int, "rho": str, "h": float, "L": float,
    "panels": int, "quad_points": int, "eta": float, "epsilon": float,
    "levels": int, "points": int, "samples": int, "xn": float, "seed": int,
    "mode": str, "out": str,
}


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            for sep in ("=", ":"):
                if sep in line:
                    key, _, val = line.partition(sep)
                    break
            else:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _build_config(args: argparse.Namespace) -> RunConfig:
    file_values = _read_config_file(args.config) if args.config else {}
    command_defaults = _COMMAND_DEFAULTS.get(args.command, {})
    merged = {}
    for field, caster in _FIELD_TYPES.items():
        flag = getattr(args, field, None)
        if flag is not None:
            merged[field] = flag
        elif field in file_values:
            merged[field] = caster(file_values[field])
        else:
            merged[field] = command_defaults.get(field, _DEFAULTS[field])
    if merged["problem"] not in _PROBLEMS:
        raise ValueError(f"unknown problem {merged['problem']!r}")
    merged["problem"] = _PROBLEMS[merged["problem"]]
    return RunConfig(command=args.command, **merged)


def _validate(cfg: RunConfig) -> None:
    if cfg.n < 2:
        raise ValueError("need n >= 2")
    if cfg.problem is not ProblemKind.NEUMANN_TRACE and cfg.command in ("spectrum", "weyl") \
            and cfg.n != 2:
        raise ValueError("disk closed forms require n = 2")
    if cfg.m_max < 0:
        raise ValueError("need m-max >= 0")
    if not cfg.h > 0 or not cfg.L > 0:
        raise ValueError("need h > 0 and L > 0")
    if cfg.panels < 1 or cfg.quad_points < 4:
        raise ValueError("need panels >= 1 and quad-points >= 4")
    if cfg.levels < 1 or cfg.points < 1 or cfg.samples < 4:
        raise ValueError("need levels >= 1, points >= 1, samples >= 4")
    if cfg.eta == 0.0:
        raise ValueError("eta must be nonzero")
    if cfg.epsilon < 0.0:
        raise ValueError("epsilon must be nonnegative")
    if not cfg.xn > 0.0:
        raise ValueError("xn must be positive")
    if cfg.mode not in ("bvp", "kernel"):
        raise ValueError("mode must be bvp or kernel")


# ---------------------------------------------------------------------------
# CSV helpers
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _emit(header: list[str], rows: list[list], out: str | None) -> None:
    def write(stream):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])

    if out is None:
        write(sys.stdout)
    else:
        with open(out, "w", encoding="utf-8", newline="") as f:
            write(f)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _constant_rho(cfg: RunConfig) -> float:
    expr = WeightExpr(cfg.rho)
    if not expr.is_constant:
        raise ValueError("this command needs a constant weight; expressions over "
                         "the boundary parameter belong to the 'symbol' command")
    c = expr.constant_value()
    if not c > 0:
        raise ValueError("weight constant must be positive")
    return c


def _scaled_spectrum(cfg: RunConfig, c: float) -> spectra.Spectrum:
    if cfg.problem is ProblemKind.NEUMANN_TRACE:
        spec = spectra.ball_spectrum_p1(cfg.n, cfg.m_max)
    elif cfg.problem is ProblemKind.DIRICHLET_TRACE:
        spec = spectra.disk_spectrum_p2(cfg.m_max)
    else:
        spec = spectra.disk_spectrum_harmonic(cfg.m_max)
    if c == 1.0:
        return spec
    # constant weight c divides every eigenvalue; exact cubes no longer integral
    entries = tuple(
        spectra.SpectrumEntry(e.value / c, e.mult) for e in spec.entries
    )
    return spectra.Spectrum(spec.problem, spec.n, entries)


def cmd_spectrum(cfg: RunConfig) -> None:
    c = _constant_rho(cfg)
    spec = _scaled_spectrum(cfg, c)
    rows, cumulative = [], 0
    for index, entry in enumerate(spec.entries):
        cumulative += entry.mult
        rows.append([index, entry.value, entry.mult, cumulative])
    _emit(["index", "value", "multiplicity", "cumulative_count"], rows, cfg.out)


def cmd_weyl(cfg: RunConfig) -> None:
    c = _constant_rho(cfg)
    spec = _scaled_spectrum(cfg, c)
    model = counting.WeylModel(cfg.problem, cfg.n,
                               c ** (cfg.n - 1) * counting.sphere_area(cfg.n))
    rows, cumulative, samples = [], 0, []
    for entry in spec.entries:
        cumulative += entry.mult
        tau = entry.value
        predicted = model.predicted(tau)
        residual = (cumulative - predicted) / tau ** (cfg.n - 2) if tau > 0 \
            else float(cumulative)
        rows.append([tau, cumulative, predicted, residual])
        if tau > 0:
            samples.append((tau, cumulative))
    report = counting.remainder_fit(counting.CountingSeries(tuple(samples)), model)
    rows.append(["summary", report.second_coeff_estimate, report.trend_slope,
                 report.sharp_verdict])
    _emit(["tau", "count", "predicted", "residual_scaled"], rows, cfg.out)


def _halfspace_bvp(cfg: RunConfig) -> None:
    if cfg.seed:
        # seeded SPD block exercises the anisotropic recovery path
        rng = np.random.default_rng(cfg.seed)
        m = rng.normal(size=(cfg.n - 1, cfg.n - 1))
        block = halfspace.MetricBlock(m @ m.T + (cfg.n - 1) * np.eye(cfg.n - 1),
                                      float(rng.uniform(0.5, 3.0)))
        eta = rng.normal(size=cfg.n - 1)
        if not np.any(eta):
            eta[0] = 1.0
        metric = symbols.BoundaryMetric.constant(block.a_tan)
    else:
        metric = symbols.BoundaryMetric.identity(cfg.n - 1)
        block = halfspace.MetricBlock.identity(cfg.n)
        eta = np.zeros(cfg.n - 1)
        eta[0] = cfg.eta
    datum = halfspace.FourierDatum(eta)
    if cfg.problem is ProblemKind.NEUMANN_TRACE:
        target = symbols.symbol_F(metric, None, eta)
        solver = halfspace.bvp_solve_p1
    elif cfg.problem is ProblemKind.DIRICHLET_TRACE:
        target = symbols.symbol_Theta(metric, None, eta)
        solver = halfspace.bvp_solve_p2
    else:
        raise ValueError("halfspace solvers exist for p1 and p2 only")

    rate = halfspace.xi_norm(block, eta)
    rows, errors = [], []
    for level in range(cfg.levels - 1, -1, -1):
        # step and truncation scale with the decay rate of the profile
        h = cfg.h * 2.0 ** level / rate
        steps = max(8, math.ceil(cfg.L / rate / h))
        grid = halfspace.HalfSpaceGrid(h, steps * h)
        recovered = solver(block, datum, grid)
        rel = abs(recovered - target) / abs(target)
        errors.append(rel)
        rows.append([h, recovered, target, rel])
    if len(errors) > 1:
        ratios = [errors[i] / errors[i + 1] for i in range(len(errors) - 1)]
        order = sum(math.log2(r) for r in ratios) / len(ratios)
    else:
        order = float("nan")
    rows.append(["summary", order, target, errors[-1]])
    _emit(["h", "recovered", "target", "rel_error"], rows, cfg.out)


def _halfspace_kernel(cfg: RunConfig) -> None:
    if cfg.n != 2:
        raise ValueError("kernel mode runs on the half-plane (n = 2)")
    block = halfspace.MetricBlock.identity(2)
    y = np.linspace(-cfg.L / 2.0, cfg.L / 2.0, cfg.samples)
    data = np.exp(-(y ** 2))
    points = [(float(x), cfg.xn) for x in y]
    via_kernel = halfspace.solve_by_kernel(block, y, None, data, points,
                                           quad_points=cfg.quad_points)
    via_fourier = halfspace.fourier_synthesis(block, y, np.zeros_like(y), data, points)
    rows = [[float(x), k, f, abs(k - f)]
            for x, k, f in zip(y, via_kernel, via_fourier)]
    rows.append(["summary", float(np.max(np.abs(via_kernel - via_fourier))),
                 cfg.samples, cfg.xn])
    _emit(["x", "kernel", "fourier", "abs_error"], rows, cfg.out)


def cmd_halfspace(cfg: RunConfig) -> None:
    if cfg.mode == "bvp":
        _halfspace_bvp(cfg)
    else:
        _halfspace_kernel(cfg)


def cmd_symbol(cfg: RunConfig) -> None:
    expr = WeightExpr(cfg.rho)
    weight = counting.unit_circle_weight(expr.fn, cfg.epsilon)
    metric = symbols.BoundaryMetric.identity(cfg.n - 1)
    eta = np.zeros(cfg.n - 1)
    eta[0] = cfg.eta
    sublevel = symbols.steklov_symbol(cfg.problem, metric, weight)
    rows = []
    for j in range(cfg.points):
        theta = 2.0 * math.pi * j / cfg.points
        rho = expr.fn(theta)
        if rho < 0:
            raise ValueError(f"weight is negative at theta={theta:.6g}")
        value = symbols.symbol_steklov(cfg.problem, metric, weight, theta, eta)
        volume = counting.hormander_phase_volume(sublevel, theta)
        rows.append([theta, rho, value, volume])
    integral = counting.boundary_integral(weight, cfg.n, cfg.panels)
    c_lead = counting.weyl_leading(cfg.problem, cfg.n, integral)
    rows.append(["summary", integral, c_lead, ""])
    _emit(["theta", "rho", "symbol", "phase_volume"], rows, cfg.out)


def cmd_identity_check(cfg: RunConfig) -> None:
    rows = [[n, counting.gamma_identity_check(n)] for n in range(2, max(cfg.n, 2) + 1)]
    _emit(["n", "residual"], rows, cfg.out)


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "weyl": cmd_weyl,
    "halfspace": cmd_halfspace,
    "symbol": cmd_symbol,
    "identity-check": cmd_identity_check,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", choices=sorted(_PROBLEMS))
    common.add_argument("--n", type=int)
    common.add_argument("--m-max", dest="m_max", type=int)
    common.add_argument("--rho", type=str, help="weight: constant or expression in t")
    common.add_argument("--h", type=float)
    common.add_argument("--L", type=float)
    common.add_argument("--panels", type=int)
    common.add_argument("--quad-points", dest="quad_points", type=int)
    common.add_argument("--eta", type=float)
    common.add_argument("--epsilon", type=float)
    common.add_argument("--levels", type=int)
    common.add_argument("--points", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--xn", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--mode", choices=["bvp", "kernel"])
    common.add_argument("--out", type=str, help="output path (default: stdout)")
    common.add_argument("--config", type=str, help="key = value file; flags win")

    parser = argparse.ArgumentParser(prog="bisteklov",
                                     description="spectra, counting laws, and "
                                                 "half-space symbol recovery")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common],
                   help="closed-form spectrum as CSV")
    sub.add_parser("weyl", parents=[common],
                   help="counting function vs its growth law, with sharpness summary")
    sub.add_parser("halfspace", parents=[common],
                   help="finite-difference symbol recovery or kernel comparison")
    sub.add_parser("symbol", parents=[common],
                   help="weighted symbol and phase volume over the boundary")
    sub.add_parser("identity-check", parents=[common],
                   help="residuals of the closed-form constant identity")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code else 0
    try:
        cfg = _build_config(args)
        _validate(cfg)
        _DISPATCH[cfg.command](cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (halfspace.SolverError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
