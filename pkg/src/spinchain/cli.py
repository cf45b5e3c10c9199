"""Command-line front end: evolve / sweep / validate / plot.

Scenario configs are flat ``key = value`` text files with ``#`` comments;
every key has a matching command-line flag and flags override file values.
Outputs are deterministic: CSV with 17 significant digits and LF line
endings, SVG charts with fixed formatting. Exit codes: 0 ok, 1 validation
failure, 2 config error, 3 numeric instability.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .dynamics import (
    IntegratorConfig,
    StepUnstable,
    analytic_state,
    evolve,
    lindblad_rhs,
    record_from_state,
    steady_state_limit,
    x_leakage,
)
from .linalg import max_abs
from .measures import (
    BasisRotation,
    concurrence_generic,
    concurrence_x,
    evaluate_measures,
    l1_coherence,
    lqfi,
    lqfi_bruteforce,
    lqfi_paper_variant,
)
from .model import ModelParams, derived_scales, hamiltonian_block, initial_state, jump_operators
from .plotting import EmptyData, UnknownColumn, emit_plot

CSV_COLUMNS = [
    "t", "rho11", "rho22", "rho33", "rho44", "abs_rho14", "abs_rho23",
    "concurrence", "c1_branch", "c2_branch", "l1_coherence", "l1_rotated",
    "lqfi", "trace_dev", "min_eig",
]

THREADS_ENV = "SPINCHAIN_THREADS"

_PARAM_KEYS = ("J", "Jz", "eta", "J0", "B", "b", "gamma", "mu", "theta")
_FLOAT_KEYS = {"J", "Jz", "eta", "J0", "B", "b", "gamma", "theta",
               "t_max", "dt", "phi", "varphi"}
_INT_KEYS = {"mu", "record_every"}
_BOOL_KEYS = {"compare_j0_zero", "plot"}
_STR_KEYS = {"mode", "out"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS | _STR_KEYS

_MODES = ("single-sector", "sector-mixture")


class ConfigError(Exception):
    """Malformed config file, bad flag value, or inconsistent scenario."""


@dataclass(frozen=True)
class ScenarioConfig:
    """One fully specified run: model, integration window, and output."""

    params: ModelParams
    mode: str = "single-sector"
    t_max: float = 20.0
    dt: float = 1e-3
    record_every: int = 10
    phi: float | None = None
    varphi: float | None = None
    compare_j0_zero: bool = False
    output_path: str | None = None
    plot: bool = False


class Event(NamedTuple):
    kind: str  # "ESD" or "ESB"
    t: float


def _coerce(key: str, raw: str, where: str):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _BOOL_KEYS:
            low = raw.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        return raw
    except ValueError as exc:
        raise ConfigError(f"{where}: bad value for {key!r}: {exc}") from exc


def parse_config_file(path) -> dict:
    """Parse a flat ``key = value`` config file into typed entries."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    entries: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{path}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{where}: empty value for {key!r}")
        entries[key] = _coerce(key, value, where)
    return entries


def scenario_from_entries(entries: dict) -> ScenarioConfig:
    """Build and validate a ScenarioConfig from typed entries."""
    params_kwargs = {k: entries[k] for k in _PARAM_KEYS if k in entries}
    mode = entries.get("mode", "single-sector")
    if mode not in _MODES:
        raise ConfigError(f"mode must be one of {_MODES}, got {mode!r}")
    try:
        params = ModelParams(**params_kwargs)
        cfg = ScenarioConfig(
            params=params,
            mode=mode,
            t_max=entries.get("t_max", 20.0),
            dt=entries.get("dt", 1e-3),
            record_every=entries.get("record_every", 10),
            phi=entries.get("phi"),
            varphi=entries.get("varphi"),
            compare_j0_zero=entries.get("compare_j0_zero", False),
            output_path=entries.get("out"),
            plot=entries.get("plot", False),
        )
        # validate the integration window eagerly so errors surface as config errors
        IntegratorConfig(dt=cfg.dt, t_max=cfg.t_max, record_every=cfg.record_every)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def _rotation_of(cfg: ScenarioConfig) -> BasisRotation | None:
    if cfg.phi is None and cfg.varphi is None:
        return None
    return BasisRotation(phi=cfg.phi or 0.0, varphi=cfg.varphi or 0.0)


def _scenario_states(cfg: ScenarioConfig) -> list[tuple[float, np.ndarray]]:
    icfg = IntegratorConfig(dt=cfg.dt, t_max=cfg.t_max, record_every=cfg.record_every)
    rho0 = initial_state(cfg.params.theta)
    if cfg.mode == "single-sector":
        return evolve(rho0, cfg.params, icfg)
    # equal-weight sector average; the mu = 0 sector is doubly degenerate
    sequences = []
    for mu, weight in ((1, 0.25), (0, 0.50), (-1, 0.25)):
        seq = evolve(rho0, replace(cfg.params, mu=mu), icfg)
        sequences.append((weight, seq))
    out = []
    for idx in range(len(sequences[0][1])):
        t = sequences[0][1][idx][0]
        avg = sum(w * seq[idx][1] for w, seq in sequences)
        out.append((t, avg))
    return out


def _row_values(t: float, rho, rotation: BasisRotation | None) -> list[float]:
    rec = record_from_state(t, rho)
    ms = evaluate_measures(rho)
    l1_rot = ms.l1_coherence if rotation is None else l1_coherence(rho, rotation)
    return [
        rec.t, rec.rho11, rec.rho22, rec.rho33, rec.rho44,
        rec.abs_rho14, rec.abs_rho23,
        ms.concurrence, ms.c1_branch, ms.c2_branch,
        ms.l1_coherence, l1_rot, ms.lqfi,
        rec.trace_dev, rec.min_eig,
    ]


def scenario_rows(cfg: ScenarioConfig) -> tuple[list[str], list[list[float]]]:
    """Evaluate one scenario into a CSV header and data rows.

    With compare_j0_zero the same scenario is re-run at J0 = 0 and every
    non-time column is appended again with a ``_ref`` suffix.
    """
    rotation = _rotation_of(cfg)
    states = _scenario_states(cfg)
    header = list(CSV_COLUMNS)
    rows = [_row_values(t, rho, rotation) for t, rho in states]
    if cfg.compare_j0_zero:
        ref_cfg = replace(cfg, params=replace(cfg.params, J0=0.0), compare_j0_zero=False)
        ref_rows = [_row_values(t, rho, rotation) for t, rho in _scenario_states(ref_cfg)]
        header += [name + "_ref" for name in CSV_COLUMNS[1:]]
        rows = [row + ref_row[1:] for row, ref_row in zip(rows, ref_rows)]
    return header, rows


def format_csv_value(x) -> str:
    return format(float(x), ".17g")


def write_csv(path, header: list[str], rows) -> None:
    """Write rows with 17 significant digits and LF endings (byte stable)."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_csv_value(v) for v in row))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))


def detect_events(times, values, threshold: float = 1e-9, sustain: int = 3) -> list[Event]:
    """Sudden-death / sudden-birth events of a sampled nonnegative series.

    A maximal run of at least `sustain` consecutive samples below
    `threshold` counts as a dead interval. Entering one from above is an
    ESD event, leaving one is an ESB event; event times interpolate the
    threshold crossing linearly between the bracketing samples. Runs
    touching the series ends yield no event on that side, so a constant
    zero series reports nothing and events always alternate in kind.
    """
    times = list(times)
    values = list(values)
    n = len(values)
    dead = [v < threshold for v in values]
    events: list[Event] = []
    i = 0
    while i < n:
        if not dead[i]:
            i += 1
            continue
        j = i
        while j < n and dead[j]:
            j += 1
        if j - i >= sustain:
            if i > 0:
                events.append(Event("ESD", _crossing(times[i - 1], values[i - 1],
                                                     times[i], values[i], threshold)))
            if j < n:
                events.append(Event("ESB", _crossing(times[j - 1], values[j - 1],
                                                     times[j], values[j], threshold)))
        i = j
    return events


def _crossing(t0, v0, t1, v1, threshold) -> float:
    if v1 == v0:
        return 0.5 * (t0 + t1)
    lam = (v0 - threshold) / (v0 - v1)
    return float(t0 + lam * (t1 - t0))


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if n < 0:
        raise ConfigError(f"{THREADS_ENV} must be >= 0, got {n}")
    return n if n > 0 else 1


# ---------------------------------------------------------------------------
# subcommands


def run_evolve(cfg: ScenarioConfig, out_path=None) -> int:
    header, rows = scenario_rows(cfg)
    path = Path(out_path or cfg.output_path or "evolve.csv")
    write_csv(path, header, rows)
    print(f"wrote {path} ({len(rows)} samples)")
    c_idx = CSV_COLUMNS.index("concurrence")
    events = detect_events([r[0] for r in rows], [r[c_idx] for r in rows])
    for ev in events:
        print(f"{ev.kind} at t = {format(ev.t, '.6g')}")
    if cfg.plot:
        svg = path.with_suffix(".svg")
        emit_plot(path, ["concurrence", "l1_coherence", "lqfi"], svg)
        print(f"wrote {svg}")
    return 0


def run_sweep(cfg: ScenarioConfig, param: str, start: float, stop: float,
              count: int, out_path=None) -> int:
    if param not in _PARAM_KEYS:
        raise ConfigError(f"sweep parameter must be one of {_PARAM_KEYS}, got {param!r}")
    if count < 2:
        raise ConfigError(f"sweep count must be >= 2, got {count}")
    values = np.linspace(start, stop, count)
    point_cfgs = []
    for v in values:
        value = v
        if param == "mu":
            if abs(v - round(v)) > 1e-12:
                raise ConfigError(f"mu sweep values must be integers, got {v!r}")
            value = int(round(v))
        try:
            point_cfgs.append(replace(cfg, params=replace(cfg.params, **{param: value})))
        except ValueError as exc:
            raise ConfigError(f"sweep value {param}={value!r}: {exc}") from exc

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scenario_rows, point_cfgs))
    else:
        results = [scenario_rows(c) for c in point_cfgs]

    header = ["sweep_value"] + results[0][0]
    rows = []
    for value, (_, point_rows) in zip(values, results):
        for row in point_rows:
            rows.append([float(value)] + row)
    path = Path(out_path or cfg.output_path or "sweep.csv")
    write_csv(path, header, rows)
    print(f"wrote {path} ({count} values of {param} x {len(results[0][1])} samples)")
    return 0


def run_plot(csv_path, columns: list[str], out_path) -> int:
    emit_plot(csv_path, columns, out_path)
    print(f"wrote {out_path}")
    return 0


# ---------------------------------------------------------------------------
# validate


def _random_valid_params(rng, gamma_override=None) -> ModelParams:
    while True:
        gamma = float(rng.uniform(0.05, 3.0)) if gamma_override is None else gamma_override
        try:
            p = ModelParams(
                J=float(rng.uniform(-3, 3)), Jz=float(rng.uniform(-3, 3)),
                eta=float(rng.uniform(-3, 3)), J0=float(rng.uniform(-3, 3)),
                B=float(rng.uniform(-3, 3)), b=float(rng.uniform(-3, 3)),
                gamma=gamma, mu=int(rng.integers(-1, 2)),
                theta=float(rng.uniform(0, math.pi)),
            )
        except ValueError:
            continue
        d = derived_scales(p)
        if d.Omega > 1e-6 and d.omega > 1e-6:
            return p


def random_x_state(rng) -> np.ndarray:
    """Random valid X-form density matrix (Dirichlet populations,
    positivity-bounded coherences with random phases)."""
    pops = rng.dirichlet(np.ones(4))
    m14 = float(rng.uniform(0, 1)) * math.sqrt(pops[0] * pops[3])
    m23 = float(rng.uniform(0, 1)) * math.sqrt(pops[1] * pops[2])
    ph14 = float(rng.uniform(0, 2 * math.pi))
    ph23 = float(rng.uniform(0, 2 * math.pi))
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0], rho[1, 1], rho[2, 2], rho[3, 3] = pops
    rho[0, 3] = m14 * np.exp(1j * ph14)
    rho[3, 0] = np.conj(rho[0, 3])
    rho[1, 2] = m23 * np.exp(1j * ph23)
    rho[2, 1] = np.conj(rho[1, 2])
    return rho


class _Report:
    def __init__(self):
        self.failed = 0

    def line(self, status: str, name: str, detail: str):
        if status == "FAIL":
            self.failed += 1
        print(f"{status:<4}  {name:<28}  {detail}")


def run_validate(quick: bool = False, dt: float | None = None,
                 gamma: float | None = None) -> int:
    """Run the cross-checks between independent computation routes.

    Prints one line per check; exit status 1 when any check fails.
    ``--quick`` lowers sample counts without touching tolerances.
    """
    rep = _Report()
    rng = np.random.default_rng(20240817)
    dt = 1e-3 if dt is None else dt
    base_gamma = 0.2 if gamma is None else gamma

    # 1. closed forms reproduce the initial state exactly at t = 0
    residue = 0.0
    for theta in np.linspace(0.0, math.pi / 2, 9):
        p = ModelParams(theta=float(theta), gamma=base_gamma)
        residue = max(residue, max_abs(analytic_state(p, 0.0) - initial_state(theta)))
    rep.line("PASS" if residue <= 1e-9 else "FAIL", "initial-condition residue",
             f"max|err| = {residue:.3e}  tol = 1e-09")

    # 2. closed forms against direct integration, plus conservation checks
    mus = (1,) if quick else (1, 0, -1)
    t_max = 5.0 if quick else 20.0
    worst = 0.0
    worst_tr = 0.0
    worst_eig = 0.0
    worst_leak = 0.0
    blew_up = None
    for theta in (math.pi / 4, 0.0):
        for mu in mus:
            p = ModelParams(theta=theta, mu=mu, gamma=base_gamma)
            cfg = IntegratorConfig(dt=dt, t_max=t_max, record_every=10)
            try:
                series = evolve(initial_state(theta), p, cfg)
            except StepUnstable as exc:
                blew_up = str(exc)
                break
            for t, rho in series:
                worst = max(worst, max_abs(rho - analytic_state(p, t)))
                rec = record_from_state(t, rho)
                worst_tr = max(worst_tr, rec.trace_dev)
                worst_eig = min(worst_eig, rec.min_eig)
                worst_leak = max(worst_leak, x_leakage(rho))
        if blew_up:
            break
    if blew_up:
        rep.line("FAIL", "analytic-vs-numeric", f"integration unstable: {blew_up}")
    else:
        rep.line("PASS" if worst <= 1e-6 else "FAIL", "analytic-vs-numeric",
                 f"max|err| = {worst:.3e}  tol = 1e-06  (dt = {dt:g})")
        cons_ok = worst_tr <= 1e-8 and worst_eig >= -1e-9 and worst_leak <= 1e-9
        rep.line("PASS" if cons_ok else "FAIL", "conservation",
                 f"trace_dev = {worst_tr:.3e}  min_eig = {worst_eig:.3e}  "
                 f"x_leakage = {worst_leak:.3e}")

    # 3. X-state concurrence against the generic spin-flip route
    n_states = 200 if quick else 1000
    worst = 0.0
    for _ in range(n_states):
        rho = random_x_state(rng)
        xc = concurrence_x(rho)
        worst = max(worst, abs(xc.concurrence - concurrence_generic(rho)))
    rep.line("PASS" if worst <= 1e-9 else "FAIL", "concurrence x-vs-generic",
             f"n = {n_states}  max|diff| = {worst:.3e}  tol = 1e-09")

    # 4. LQFI eigenvalue route against the direction-grid minimum
    n_states = 10 if quick else 50
    worst = 0.0
    for _ in range(n_states):
        rho = random_x_state(rng)
        worst = max(worst, abs(lqfi(rho) - lqfi_bruteforce(rho)))
    rep.line("PASS" if worst <= 1e-3 else "FAIL", "lqfi-vs-bruteforce",
             f"n = {n_states}  max|diff| = {worst:.3e}  tol = 1e-03")

    # 5. LQFI anchors and the dropped-diagonal variant probe
    bell = initial_state(math.pi / 4)
    product = np.zeros((4, 4), dtype=complex)
    product[1, 1] = 1.0  # |01><01|
    mixed = np.eye(4, dtype=complex) / 4.0
    anchors_ok = (abs(lqfi(mixed)) <= 1e-10
                  and abs(lqfi(product)) <= 1e-9
                  and abs(lqfi(bell) - 1.0) <= 1e-9)
    rep.line("PASS" if anchors_ok else "FAIL", "lqfi anchors",
             f"I/4: {lqfi(mixed):.3e}  product: {lqfi(product):.3e}  "
             f"Bell: {lqfi(bell):.10f}")
    rep.line("INFO", "lqfi variant probe",
             f"pure product |01>: full-sum = {lqfi(product):.3e}, "
             f"diagonal-dropped = {lqfi_paper_variant(product):.6f} "
             f"(spurious 1 expected); I/4: full-sum = {lqfi(mixed):.3e}, "
             f"diagonal-dropped = {lqfi_paper_variant(mixed):.3e}")

    # 6. stationary state annihilated by the generator, plus trace identity
    if base_gamma == 0:
        rep.line("SKIP", "steady-state fixed point", "gamma = 0: no unique stationary state")
    else:
        n_draws = 20 if quick else 100
        worst = 0.0
        worst_tr = 0.0
        for _ in range(n_draws):
            p = _random_valid_params(rng, gamma_override=None if gamma is None else gamma)
            ss = steady_state_limit(p)
            worst = max(worst, max_abs(lindblad_rhs(ss, hamiltonian_block(p), jump_operators(p))))
            d = derived_scales(p)
            ident = (4 * p.J**2 * p.eta**2 + 16 * d.Delta**2 + 4 * p.gamma**2) \
                / (4 * (d.Omega**2 + p.gamma**2))
            worst_tr = max(worst_tr, abs(ident - 1.0))
        ok = worst <= 1e-8 and worst_tr <= 1e-12
        rep.line("PASS" if ok else "FAIL", "steady-state fixed point",
                 f"n = {n_draws}  max|rhs| = {worst:.3e}  tol = 1e-08  "
                 f"trace identity dev = {worst_tr:.3e}")

    status = 1 if rep.failed else 0
    print(f"validate: {'FAIL' if status else 'OK'} ({rep.failed} failing checks)")
    return status


# ---------------------------------------------------------------------------
# argument parsing


def _add_override_flags(sub):
    for key in ("J", "Jz", "eta", "J0", "B", "b", "gamma", "theta",
                "t-max", "dt", "phi", "varphi"):
        sub.add_argument(f"--{key}", type=float, default=None,
                         dest=key.replace("-", "_"))
    sub.add_argument("--mu", type=int, default=None)
    sub.add_argument("--record-every", type=int, default=None, dest="record_every")
    sub.add_argument("--mode", choices=_MODES, default=None)
    sub.add_argument("--compare-j0-zero", action="store_const", const=True,
                     default=None, dest="compare_j0_zero")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinchain",
        description="Dissipative XYZ dimer in an Ising sector: evolve, sweep, validate, plot.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_evolve = sub.add_parser("evolve", help="integrate one scenario and write a CSV")
    p_evolve.add_argument("--config", required=True)
    p_evolve.add_argument("--out", default=None)
    p_evolve.add_argument("--plot", action="store_const", const=True, default=None)
    _add_override_flags(p_evolve)

    p_sweep = sub.add_parser("sweep", help="run a linear grid over one parameter")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--param", required=True)
    p_sweep.add_argument("--from", dest="start", type=float, required=True)
    p_sweep.add_argument("--to", dest="stop", type=float, required=True)
    p_sweep.add_argument("--count", type=int, required=True)
    p_sweep.add_argument("--out", default=None)
    _add_override_flags(p_sweep)

    p_validate = sub.add_parser("validate", help="cross-check the computation routes")
    p_validate.add_argument("--quick", action="store_true")
    p_validate.add_argument("--dt", type=float, default=None)
    p_validate.add_argument("--gamma", type=float, default=None)

    p_plot = sub.add_parser("plot", help="render CSV columns as an SVG chart")
    p_plot.add_argument("--csv", required=True)
    p_plot.add_argument("--columns", required=True,
                        help="comma-separated column names")
    p_plot.add_argument("--out", required=True)
    return parser


def _scenario_from_args(args) -> ScenarioConfig:
    entries = parse_config_file(args.config)
    overrides = {}
    for key in _PARAM_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    for key in ("t_max", "dt", "record_every", "phi", "varphi",
                "mode", "compare_j0_zero"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "plot", None) is not None:
        overrides["plot"] = True
    if getattr(args, "out", None) is not None:
        overrides["out"] = args.out
    entries.update(overrides)
    return scenario_from_entries(entries)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "evolve":
            cfg = _scenario_from_args(args)
            return run_evolve(cfg)
        if args.command == "sweep":
            cfg = _scenario_from_args(args)
            return run_sweep(cfg, args.param, args.start, args.stop, args.count)
        if args.command == "validate":
            return run_validate(quick=args.quick, dt=args.dt, gamma=args.gamma)
        if args.command == "plot":
            columns = [c for c in args.columns.split(",") if c]
            return run_plot(args.csv, columns, args.out)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (UnknownColumn, EmptyData) as exc:
        detail = exc.args[0] if exc.args else exc
        print(f"config error: {detail}", file=sys.stderr)
        return 2
    except (FileNotFoundError, IsADirectoryError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except StepUnstable as exc:
        print(f"numeric instability: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
