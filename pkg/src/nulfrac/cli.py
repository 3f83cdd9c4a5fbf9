"""Command-line front end: ``nulfrac <command> [options]``.

Settings come from an optional JSON file (``--config``) and from flags; a flag
given on the command line always wins over the file.  Grid data are CSV files
with header ``s,f`` and unit-spaced ``s``.  Exit status: 0 on success, 1 when a
``verify`` run has failing checks, 2 on any input or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from .central import (
    CentralConfig,
    CentralTaylorKind,
    SeriesSpec,
    central_caputo,
    central_diff_k,
    central_rl_diff,
    central_taylor_defect,
    fde_residual,
    frac_exp_value,
    frac_trig,
    sequential_diff,
    solve_seq_fde,
)
from .errors import ConfigError, EmptyError, IoError, NulfracError, ParseError, SpacingError
from .grid import GridFunction
from .lattice import FracOrder, LatticeSpec
from .mutation import KERNEL_SITES, KernelMutation
from .operators import (
    AbelVariant,
    OperatorConfig,
    TaylorKind,
    abel_solve,
    caputo_diff,
    frac_sum,
    frac_taylor_defect,
    rl_diff_compose,
    rl_diff_direct,
    rl_diff_residue,
    taylor_expand_integer,
)
from .verify import run_suite, write_report_json

SPACING_TOL = 1e-9

COMMANDS = ("sum", "diff", "central-diff", "caputo", "solve-abel", "taylor", "exp", "trig", "solve-fde", "verify")


# ---------------------------------------------------------------------------
# CSV I/O
# ---------------------------------------------------------------------------
def load_grid_csv(path) -> GridFunction:
    """Read a ``s,f`` CSV file into a :class:`GridFunction`."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise EmptyError(f"{path}: file is empty")
    header = [c.strip().lower() for c in rows[0]]
    if header != ["s", "f"]:
        raise ParseError(f"{path}: expected header 's,f', got {','.join(rows[0])!r}")
    if len(rows) == 1:
        raise EmptyError(f"{path}: no data rows")
    s_vals, f_vals = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise ParseError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        try:
            s_val, f_val = float(row[0]), float(row[1])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-numeric value in {row!r}") from None
        if not (math.isfinite(s_val) and math.isfinite(f_val)):
            raise ParseError(f"{path}:{lineno}: non-finite value in {row!r}")
        s_vals.append(s_val)
        f_vals.append(f_val)
    steps = np.diff(s_vals)
    if steps.size and np.max(np.abs(steps - 1.0)) > SPACING_TOL:
        bad = int(np.argmax(np.abs(steps - 1.0)))
        raise SpacingError(f"{path}: step {float(steps[bad])!r} between rows {bad + 2} and {bad + 3} is not 1")
    return GridFunction(s_vals[0], f_vals)


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", newline="", encoding="utf-8"), True
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_csv(path, header: Sequence[str], rows) -> None:
    """Write rows with full-precision (round-trip) floats."""
    fh, close = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    finally:
        if close:
            fh.close()


def write_grid_csv(path, f: GridFunction) -> None:
    write_csv(path, ("s", "f"), zip(f.points, f.values))


def write_json(path, obj) -> None:
    from .verify import dumps_json

    fh, close = _open_out(path)
    try:
        fh.write(dumps_json(obj))
    finally:
        if close:
            fh.close()


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------
@dataclass
class RunConfig:
    """Fully resolved settings of one CLI invocation."""

    command: str
    lattice: LatticeSpec
    gamma: float = 0.0
    alpha: float = 1.0
    mode: str = "compose"
    variant: str = "compose"
    kind: str = "integer"
    k: int | None = None
    seq_k: int | None = None
    p: float | None = None
    q_order: float | None = None
    central: bool = False
    input: str | None = None
    output: str | None = None
    a: float = 0.0
    lam: tuple[float, float] = (0.0, 0.0)
    omega: float = 0.0
    max_terms: int = 400
    tail_tol: float | None = None
    z_start: float | None = None
    count: int = 10
    coeffs: list[float] = field(default_factory=list)
    seed: int = 0
    trials: int = 1
    mutate: str | None = None
    timing: bool = False

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command == "diff" and self.mode == "direct" and FracOrder(self.alpha).is_integer:
            from .errors import IntegerOrderError

            raise IntegerOrderError("direct mode requires a non-integer alpha")

    def operator_config(self) -> OperatorConfig:
        return OperatorConfig(self.lattice, self.gamma, FracOrder(self.alpha))

    def central_config(self) -> CentralConfig:
        series = SeriesSpec(lam=self.lam, omega=self.omega, max_terms=self.max_terms, tail_tol=self.tail_tol)
        return CentralConfig(self.lattice, FracOrder(self.alpha), a=self.a, series=series)


_LATTICE_KEYS = ("family", "q", "c1", "c2", "c3")


def _parse_pair(text) -> tuple[float, float]:
    if isinstance(text, (list, tuple)):
        vals = [float(v) for v in text]
    elif isinstance(text, (int, float)):
        vals = [float(text)]
    else:
        try:
            vals = [float(v) for v in str(text).split(",")]
        except ValueError:
            raise ConfigError(f"cannot parse {text!r} as 're[,im]'") from None
    if len(vals) == 1:
        vals.append(0.0)
    if len(vals) != 2:
        raise ConfigError(f"expected 're[,im]', got {text!r}")
    return vals[0], vals[1]


def _parse_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse {text!r} as a comma-separated list") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nulfrac", description="Fractional sums and differences on non-uniform lattices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, grid: bool = True) -> None:
        p.add_argument("--config", help="JSON file with settings (flags override it)")
        p.add_argument("--family", choices=["quadratic", "q_quadratic", "linear", "q_linear"], help="lattice family")
        p.add_argument("--q", type=float, help="lattice base q (q-families)")
        p.add_argument("--c1", type=float)
        p.add_argument("--c2", type=float)
        p.add_argument("--c3", type=float)
        p.add_argument("--gamma", type=float, help="lattice shift gamma")
        p.add_argument("--alpha", type=float, help="order alpha")
        p.add_argument("--output", "-o", help="output file (default: stdout)")
        if grid:
            p.add_argument("--input", "-i", help="input CSV with header s,f")

    p = sub.add_parser("sum", help="fractional sum")
    common(p)
    p = sub.add_parser("diff", help="Riemann-Liouville fractional difference")
    common(p)
    p.add_argument("--mode", choices=["compose", "direct", "residue"])
    p = sub.add_parser("central-diff", help="central difference (integer --k or fractional --alpha)")
    common(p)
    p.add_argument("--k", type=int, help="integer depth (overrides --alpha)")
    p.add_argument("--mode", choices=["compose", "direct"])
    p.add_argument("--sequential", type=int, dest="seq_k", help="k-fold sequential Caputo difference of order alpha")
    p = sub.add_parser("caputo", help="Caputo fractional difference")
    common(p)
    p.add_argument("--central", action="store_true", default=None, help="central instead of backward")
    p = sub.add_parser("solve-abel", help="solve the generalized Abel equation")
    common(p)
    p.add_argument("--variant", choices=[v.value for v in AbelVariant])
    p = sub.add_parser("taylor", help="Taylor-formula defect (or integer Taylor remainder)")
    common(p)
    p.add_argument("--kind", choices=["integer", "rl", "caputo", "sequential", "p5", "p6"])
    p.add_argument("--central", action="store_true", default=None, help="central-calculus identity")
    p.add_argument("--k", type=int, help="depth for integer / sequential kinds")
    p.add_argument("--p", type=float, help="first order of a mixed composition")
    p.add_argument("--q-order", type=float, dest="q_order", help="second order of a mixed composition")
    for name, helptext in (("exp", "fractional exponential series"), ("trig", "fractional cos/sin series")):
        p = sub.add_parser(name, help=helptext)
        common(p, grid=False)
        p.add_argument("--a", type=float, help="anchor a")
        if name == "exp":
            p.add_argument("--lam", help="eigenvalue 're[,im]'")
        else:
            p.add_argument("--omega", type=float)
        p.add_argument("--z-start", type=float, dest="z_start", help="first evaluation point (default a + 1/2)")
        p.add_argument("--count", type=int, help="number of unit-spaced points")
        p.add_argument("--max-terms", type=int, dest="max_terms")
        p.add_argument("--tail-tol", type=float, dest="tail_tol", help="relative tail tolerance (default from NULFRAC_TAIL_TOL)")
    p = sub.add_parser("solve-fde", help="characteristic roots and residuals of a sequential FDE")
    common(p, grid=False)
    p.add_argument("--coeffs", help="a_0,a_1,...,a_n")
    p.add_argument("--a", type=float, help="anchor a")
    p.add_argument("--max-terms", type=int, dest="max_terms")
    p.add_argument("--tail-tol", type=float, dest="tail_tol")
    p = sub.add_parser("verify", help="run the identity suite")
    p.add_argument("--config", help="JSON file with settings (flags override it)")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--mutate", choices=list(KERNEL_SITES), help="flip the sign of one kernel exponent")
    p.add_argument("--timing", action="store_true", default=None, help="include elapsed times in the report")
    p.add_argument("--output", "-o", help="report file (default: stdout)")
    return parser


def _load_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    """Merge the JSON config file (if any) with the command-line flags."""
    settings: dict[str, Any] = {}
    if getattr(ns, "config", None):
        settings.update(_load_config_file(ns.config))
    lat_data = dict(settings.pop("lattice", {}) or {})
    for key in _LATTICE_KEYS:
        if key in settings:
            lat_data[key] = settings.pop(key)
    flags = {k: v for k, v in vars(ns).items() if v is not None and k not in ("config", "command")}
    for key in _LATTICE_KEYS:
        if key in flags:
            lat_data[key] = flags.pop(key)
    settings.update(flags)
    command = ns.command
    if command == "verify":
        lattice = LatticeSpec.quadratic()
    else:
        lat_data.setdefault("family", "quadratic")
        lattice = LatticeSpec.from_dict(lat_data)
    known = set(RunConfig.__dataclass_fields__) - {"command", "lattice"}
    unknown = set(settings) - known
    if unknown:
        raise ConfigError(f"unknown setting(s): {', '.join(sorted(unknown))}")
    if "lam" in settings:
        settings["lam"] = _parse_pair(settings["lam"])
    if "coeffs" in settings:
        settings["coeffs"] = _parse_list(settings["coeffs"])
    return RunConfig(command=command, lattice=lattice, **settings)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------
def _need_input(cfg: RunConfig) -> GridFunction:
    if not cfg.input:
        raise ConfigError(f"'{cfg.command}' needs --input")
    return load_grid_csv(cfg.input)


def _series_points(cfg: RunConfig) -> np.ndarray:
    if cfg.count < 1:
        raise ConfigError("count must be positive")
    start = cfg.a + 0.5 if cfg.z_start is None else cfg.z_start
    return start + np.arange(cfg.count, dtype=float)


def compute(cfg: RunConfig):
    """Library result of a (non-verify) command; the CLI only serializes it."""
    cmd = cfg.command
    if cmd == "sum":
        return frac_sum(cfg.operator_config(), _need_input(cfg))
    if cmd == "diff":
        f, ocfg = _need_input(cfg), cfg.operator_config()
        if cfg.mode == "direct":
            return rl_diff_direct(ocfg, f)
        if cfg.mode == "residue":
            return rl_diff_residue(ocfg, f)
        return rl_diff_compose(ocfg, f)
    if cmd == "central-diff":
        f, ccfg = _need_input(cfg), cfg.central_config()
        if cfg.seq_k is not None:
            return sequential_diff(ccfg, cfg.seq_k, f)
        if cfg.k is not None:
            return central_diff_k(ccfg, cfg.k, f)
        return central_rl_diff(ccfg, f, cfg.mode)
    if cmd == "caputo":
        f = _need_input(cfg)
        if cfg.central:
            return central_caputo(cfg.central_config(), f)
        return caputo_diff(cfg.operator_config(), f)
    if cmd == "solve-abel":
        return abel_solve(cfg.operator_config(), _need_input(cfg), cfg.variant)
    if cmd == "taylor":
        f = _need_input(cfg)
        if cfg.central:
            return central_taylor_defect(cfg.central_config(), f, CentralTaylorKind(cfg.kind), k=cfg.k, p=cfg.p, q=cfg.q_order)
        if cfg.kind == "integer":
            ocfg = cfg.operator_config()
            k = cfg.k if cfg.k is not None else ocfg.m
            poly, rem = taylor_expand_integer(ocfg, k, f)
            fa = f.extended(rem.base)
            return GridFunction(rem.base, rem.values + poly.values - fa)
        if cfg.kind not in ("rl", "caputo"):
            raise ConfigError(f"kind {cfg.kind!r} needs --central")
        return frac_taylor_defect(cfg.operator_config(), f, TaylorKind(cfg.kind))
    if cmd == "exp":
        ccfg = cfg.central_config()
        return [(z, frac_exp_value(ccfg, z)) for z in _series_points(cfg)]
    if cmd == "trig":
        ccfg = cfg.central_config()
        return [(z, frac_trig(ccfg, z)) for z in _series_points(cfg)]
    if cmd == "solve-fde":
        if len(cfg.coeffs) < 2:
            raise ConfigError("solve-fde needs --coeffs a_0,...,a_n with n >= 1")
        ccfg = cfg.central_config()
        sols = solve_seq_fde(ccfg, cfg.coeffs)
        residual = max(fde_residual(ccfg, cfg.coeffs, s.root) for s in sols)
        relative = max(fde_residual(ccfg, cfg.coeffs, s.root, relative=True) for s in sols)
        return {
            "roots": [{"re": s.root.real, "im": s.root.imag} for s in sols],
            "residual": residual,
            "relative_residual": relative,
        }
    raise ConfigError(f"unsupported command {cmd!r}")


def run_command(cfg: RunConfig) -> int:
    """Execute ``cfg`` and write its output; returns the exit status."""
    if cfg.command == "verify":
        if cfg.trials < 1:
            raise ConfigError("trials must be at least 1")
        mutation = KernelMutation(cfg.mutate) if cfg.mutate else None
        reports = run_suite(cfg.seed, cfg.trials, mutation=mutation)
        if cfg.output in (None, "-"):
            from .verify import reports_to_json

            sys.stdout.write(reports_to_json(reports, cfg.timing))
        else:
            write_report_json(reports, cfg.output, cfg.timing)
        failed = [r.id for r in reports if not r.passed]
        if failed:
            print(f"nulfrac: {len(failed)} of {len(reports)} checks failed: {', '.join(sorted(set(failed)))}", file=sys.stderr)
            return 1
        return 0
    result = compute(cfg)
    if cfg.command == "exp":
        complex_lam = cfg.lam[1] != 0.0
        header = ("z", "value", "value_im", "err_estimate") if complex_lam else ("z", "value", "err_estimate")
        rows = []
        for z, r in result:
            row = [float(z), float(r.value.real)]
            if complex_lam:
                row.append(float(r.value.imag))
            row.append(float(r.err_estimate))
            rows.append(row)
        write_csv(cfg.output, header, rows)
    elif cfg.command == "trig":
        write_csv(cfg.output, ("z", "cos", "sin"), [(float(z), float(c), float(s)) for z, (c, s) in result])
    elif cfg.command == "solve-fde":
        write_json(cfg.output, result)
    else:
        write_grid_csv(cfg.output, result)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        cfg = resolve_config(ns)
        return run_command(cfg)
    except NulfracError as exc:
        print(f"nulfrac: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (TypeError, ValueError) as exc:
        print(f"nulfrac: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
