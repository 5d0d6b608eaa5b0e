"""Command-line front end: experiment presets, config files, CSV/JSON output.

Every run writes ``<output_dir>/<experiment>.csv`` plus a
``<experiment>.meta.json`` sidecar holding the fully resolved configuration,
the seed, reference values and timing.  Exit codes: 0 success, 1 I/O failure,
2 usage or validation error, 3 computation contract violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from ._util import resolve_threads
from .errors import ConfigError, ContractViolationError, PoleProximityError, TtclabError
from .floquet import eigenphase_sweep
from .meanfield import ClassicalState, lyapunov_max, phase_portrait
from .model import ModelParams
from .spectral import R_COE, R_POISSON, mean_r_sweep
from .spin import SpinBasisSpec
from .survival import (
    basis_averaged_survival,
    make_random_basis,
    make_state,
    make_sx_eigen_basis,
    make_sz_fock_basis,
    rmt_saturation,
    survival_probability,
    verify_reduction,
)

EXPERIMENTS = (
    "eigenphases",
    "spacing-ratio",
    "survival",
    "basis-survival",
    "lyapunov",
    "phase-portrait",
    "verify-reduction",
    "rmt-refs",
)

STATES = ("x_polarized", "neg_x_polarized", "gaussian")  # plus "fock:<m>"
BASES = ("sz_fock", "sx_eigen", "random_haar")
MODES = ("stroboscopic", "full_continuous")


@dataclass
class RunConfig:
    experiment: str = ""
    N: int = 60
    k_z: float = 3.0
    alpha_x: float = 1.0
    alpha_z: float = 0.01
    delta: float = 0.0
    beta: float = 0.5
    t_min: float = 0.0
    t_max: float = 20.0
    t_steps: int = 2000
    n: int = 50
    seed: int = 0
    output_dir: str = "."
    state: str = "x_polarized"
    basis: str = "random_haar"
    T: float = 5.0
    n_cycles: int = 20
    n_samples: int = 500
    mode: str = "stroboscopic"
    dt: float = 1e-3
    d0: float = 1e-8
    kz_sweep: str = ""
    T_sweep: str = ""
    threads: int = 0  # 0 = all available cores
    open_spectrum: bool = False
    desk_scale: bool = False

    def params(self) -> ModelParams:
        return ModelParams(
            k_z=self.k_z,
            alpha_x=self.alpha_x,
            alpha_z=self.alpha_z,
            delta=self.delta,
            beta=self.beta,
            N=self.N,
        )

    def t_grid(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)


PRESETS = {
    # classical portraits, strongly chaotic panel (kick period 5); the weakly
    # chaotic panel is the same run with --T 1
    "fig2": dict(experiment="phase-portrait", T=5.0, n_cycles=50, k_z=3.0, alpha_z=0.01),
    # Lyapunov exponent versus kick period, alternating flows
    "fig3": dict(
        experiment="lyapunov",
        mode="stroboscopic",
        T_sweep="0.25:5.0:20",
        n_cycles=20,
        n_samples=1500,
        k_z=3.0,
        alpha_z=0.01,
    ),
    # spacing-ratio flow (panel (b)); panel (a) is --experiment eigenphases --N 16
    "fig4": dict(
        experiment="spacing-ratio", N=100, t_min=0.0, t_max=5.0, t_steps=501, k_z=3.0, alpha_z=0.01
    ),
    # basis-summed survival; switch basis with --basis sz_fock / sx_eigen
    "fig5": dict(
        experiment="basis-survival",
        N=60,
        n=50,
        basis="random_haar",
        t_min=0.0,
        t_max=20.0,
        t_steps=2000,
        k_z=3.0,
        alpha_z=0.01,
    ),
    # full-model regularity scan over the interaction strength
    "fig6": dict(
        experiment="lyapunov",
        mode="full_continuous",
        kz_sweep="0.0:6.0:13",
        T=5.0,
        n_cycles=100,
        n_samples=1500,
        dt=1e-2,
        alpha_z=0.01,
    ),
    # single-state survival; switch state with --state gaussian / fock:<m>
    "fig7": dict(
        experiment="survival",
        N=200,
        n=50,
        state="neg_x_polarized",
        t_min=0.0,
        t_max=160.0,
        t_steps=1600,
        k_z=3.0,
        alpha_z=0.01,
    ),
}

_BOOL_KEYS = {"open_spectrum", "desk_scale"}


def _coerce(key: str, value: str):
    field_types = {f.name: f.type for f in fields(RunConfig)}
    if key not in field_types:
        raise ConfigError(f"unknown configuration key '{key}'")
    kind = field_types[key]
    try:
        if key in _BOOL_KEYS:
            low = value.strip().lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(value)
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
        return value.strip()
    except ValueError as exc:
        raise ConfigError(f"malformed value for '{key}': {value!r}") from exc


def read_config_file(path: str) -> dict:
    """Parse a flat ``key = value`` file with ``#`` comments."""
    overrides = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        overrides[key.strip()] = _coerce(key.strip(), value.strip())
    return overrides


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttclab",
        description="Floquet-correlator chaos laboratory for the probed bosonic Josephson junction.",
    )
    parser.add_argument("--experiment", choices=EXPERIMENTS, help="what to compute")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="figure preset to start from")
    parser.add_argument("--config", metavar="FILE", help="flat key = value config file")
    parser.add_argument("--N", type=int, help="boson number")
    parser.add_argument("--kz", dest="k_z", type=float, help="interaction energy k_z")
    parser.add_argument("--alpha-x", dest="alpha_x", type=float, help="hopping energy (the unit)")
    parser.add_argument("--alpha-z", dest="alpha_z", type=float, help="tilt energy")
    parser.add_argument("--delta", type=float, help="dot level splitting")
    parser.add_argument("--beta", type=float, help="boson-dot coupling")
    parser.add_argument("--t-min", dest="t_min", type=float)
    parser.add_argument("--t-max", dest="t_max", type=float)
    parser.add_argument("--t-steps", dest="t_steps", type=int)
    parser.add_argument("--n", type=int, help="correlator order")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--output-dir", dest="output_dir")
    parser.add_argument("--state", help="x_polarized | neg_x_polarized | gaussian | fock:<m>")
    parser.add_argument("--basis", choices=BASES)
    parser.add_argument("--T", type=float, help="classical kick period")
    parser.add_argument("--n-cycles", dest="n_cycles", type=int)
    parser.add_argument("--n-samples", dest="n_samples", type=int)
    parser.add_argument("--mode", choices=MODES)
    parser.add_argument("--dt", type=float, help="classical integrator step")
    parser.add_argument("--d0", type=float, help="Benettin companion displacement")
    parser.add_argument("--kz-sweep", dest="kz_sweep", help="min:max:count sweep of k_z")
    parser.add_argument("--T-sweep", dest="T_sweep", help="min:max:count sweep of T")
    parser.add_argument("--threads", type=int, help="worker threads (0 = all cores)")
    parser.add_argument("--open-spectrum", dest="open_spectrum", action="store_true", default=None,
                        help="drop the wrap-around eigenphase spacing")
    parser.add_argument("--desk-scale", dest="desk_scale", action="store_true", default=None,
                        help="halve N and n for quick runs")
    return parser


def _parse_sweep(text: str, key: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"malformed value for '{key}': expected min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"malformed value for '{key}': {text!r}") from exc
    if count < 1 or hi < lo:
        raise ConfigError(f"out-of-range sweep for '{key}': {text!r}")
    return np.linspace(lo, hi, count)


def _validate(cfg: RunConfig) -> RunConfig:
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {cfg.experiment!r}; choose one of {', '.join(EXPERIMENTS)}"
        )
    if cfg.t_min > cfg.t_max:
        raise ConfigError(f"t_min = {cfg.t_min} exceeds t_max = {cfg.t_max}")
    if cfg.t_steps < 1:
        raise ConfigError(f"t_steps must be >= 1, got {cfg.t_steps}")
    if cfg.n < 1:
        raise ConfigError(f"n must be >= 1, got {cfg.n}")
    if cfg.N < 1:
        raise ConfigError(f"N must be >= 1, got {cfg.N}")
    if cfg.mode not in MODES:
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    if cfg.basis not in BASES:
        raise ConfigError(f"unknown basis {cfg.basis!r}")
    if not (cfg.state in STATES or cfg.state.startswith("fock:")):
        raise ConfigError(f"unknown state {cfg.state!r}; use x_polarized, gaussian or fock:<m>")
    if cfg.kz_sweep:
        _parse_sweep(cfg.kz_sweep, "kz_sweep")
    if cfg.T_sweep:
        _parse_sweep(cfg.T_sweep, "T_sweep")
    return cfg


def parse_config(argv) -> RunConfig:
    """Resolve defaults, preset, config file and flags (in increasing priority)."""
    parser = _build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        raise SystemExit(2)
    args = parser.parse_args(argv)
    resolved = asdict(RunConfig())
    if args.preset:
        resolved.update(PRESETS[args.preset])
    if args.config:
        resolved.update(read_config_file(args.config))
    for field in fields(RunConfig):
        value = getattr(args, field.name, None)
        if value is not None:
            resolved[field.name] = value
    cfg = RunConfig(**resolved)
    if cfg.desk_scale:
        cfg.N = max(1, cfg.N // 2)
        cfg.n = max(1, cfg.n // 2)
    return _validate(cfg)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(_fmt(x) if not isinstance(x, str) else x for x in row) + "\n")


def _resolve_state(cfg: RunConfig, spec: SpinBasisSpec):
    if cfg.state.startswith("fock:"):
        return make_state("fock", spec, m=float(cfg.state.split(":", 1)[1]))
    return make_state(cfg.state, spec)


def _resolve_basis(cfg: RunConfig, spec: SpinBasisSpec):
    if cfg.basis == "sz_fock":
        return make_sz_fock_basis(spec)
    if cfg.basis == "sx_eigen":
        return make_sx_eigen_basis(spec)
    return make_random_basis(spec.D, cfg.seed)


def run_experiment(cfg: RunConfig) -> int:
    """Execute the configured experiment and write CSV + meta JSON."""
    started = time.time()
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    threads = resolve_threads(None if cfg.threads == 0 else cfg.threads)
    p = cfg.params()
    spec = p.spec
    extra_meta: dict = {}

    if cfg.experiment == "eigenphases":
        t_grid, phases = eigenphase_sweep(p, cfg.t_grid(), threads=threads)
        header = ["t"] + [f"theta_{j + 1}" for j in range(spec.D)]
        rows = [(t, *row) for t, row in zip(t_grid, phases)]
    elif cfg.experiment == "spacing-ratio":
        t_grid, means = mean_r_sweep(p, cfg.t_grid(), circular=not cfg.open_spectrum, threads=threads)
        header = ["t", "mean_r"]
        rows = list(zip(t_grid, means))
        extra_meta["r_coe"] = R_COE
        extra_meta["r_poisson"] = R_POISSON
    elif cfg.experiment == "survival":
        series = survival_probability(p, _resolve_state(cfg, spec), cfg.t_grid(), n=cfg.n, threads=threads)
        header = ["t", "P"]
        rows = list(zip(series.t_grid, series.values))
        extra_meta.update(_survival_meta(series, spec.D))
    elif cfg.experiment == "basis-survival":
        series = basis_averaged_survival(p, _resolve_basis(cfg, spec), cfg.t_grid(), n=cfg.n, threads=threads)
        header = ["t", "P_bar"]
        rows = list(zip(series.t_grid, series.values))
        extra_meta.update(_survival_meta(series, spec.D))
    elif cfg.experiment == "lyapunov":
        header, rows, extra_meta = _run_lyapunov(cfg, p)
    elif cfg.experiment == "phase-portrait":
        header = ["initial", "cycle", "half", "z", "phi"]
        rows = []
        for label, orbit in phase_portrait(p, cfg.T, cfg.n_cycles, dt=cfg.dt, seed=cfg.seed):
            for idx, (z, phi) in enumerate(orbit):
                if idx == 0:
                    cycle, half = 0, 0
                else:
                    cycle, half = (idx + 1) // 2, 1 if idx % 2 == 1 else 2
                rows.append((label, cycle, half, z, phi))
    elif cfg.experiment == "verify-reduction":
        state = _resolve_state(cfg, spec)
        table = verify_reduction(p, state, cfg.t_grid(), cfg.n, threads=threads)
        header = ["t", "discrepancy"]
        rows = [tuple(r) for r in table]
        extra_meta["max_discrepancy"] = float(np.max(table[:, 1]))
    elif cfg.experiment == "rmt-refs":
        sat = rmt_saturation(spec.D)
        header = ["D", "ipr_cue", "ipr_coe", "p_cue", "p_coe", "t_th_cue", "t_th_coe"]
        rows = [(spec.D, sat.ipr_cue, sat.ipr_coe, sat.p_cue, sat.p_coe, sat.t_th_cue, sat.t_th_coe)]
        extra_meta.update({k: getattr(sat, k) for k in ("ipr_cue", "ipr_coe", "p_cue", "p_coe", "t_th_cue", "t_th_coe")})
    else:  # pragma: no cover - guarded by _validate
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")

    csv_path = out_dir / f"{cfg.experiment}.csv"
    _write_csv(csv_path, header, rows)
    meta = {
        "config": asdict(cfg),
        "version": __version__,
        "wall_time_s": time.time() - started,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "csv": csv_path.name,
    }
    meta.update(extra_meta)
    with open(out_dir / f"{cfg.experiment}.meta.json", "w", encoding="utf-8") as handle:
        json.dump(meta, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return 0


def _survival_meta(series, D: int) -> dict:
    sat = rmt_saturation(D)
    return {
        "n": series.n,
        "window": list(series.window),
        "long_time_avg": series.long_time_avg,
        "ipr_long_time_avg": series.ipr_long_time_avg,
        "references": {
            "ipr_cue": sat.ipr_cue,
            "ipr_coe": sat.ipr_coe,
            "p_cue": sat.p_cue,
            "p_coe": sat.p_coe,
            "t_th_cue": sat.t_th_cue,
            "t_th_coe": sat.t_th_coe,
        },
    }


def _run_lyapunov(cfg: RunConfig, p: ModelParams):
    if cfg.kz_sweep and cfg.T_sweep:
        raise ConfigError("choose either kz_sweep or T_sweep, not both")
    results = []
    if cfg.kz_sweep:
        sweep_key = "k_z"
        for k_z in _parse_sweep(cfg.kz_sweep, "kz_sweep"):
            params = ModelParams(k_z=float(k_z), alpha_x=cfg.alpha_x, alpha_z=cfg.alpha_z,
                                 delta=cfg.delta, beta=cfg.beta, N=cfg.N)
            res = lyapunov_max(params, cfg.T, cfg.n_cycles, cfg.n_samples, seed=cfg.seed,
                               mode=cfg.mode, dt=cfg.dt, d0=cfg.d0)
            results.append((float(k_z), res))
    else:
        sweep_key = "T"
        periods = _parse_sweep(cfg.T_sweep, "T_sweep") if cfg.T_sweep else [cfg.T]
        for T in periods:
            res = lyapunov_max(p, float(T), cfg.n_cycles, cfg.n_samples, seed=cfg.seed,
                               mode=cfg.mode, dt=cfg.dt, d0=cfg.d0)
            results.append((float(T), res))
    header = [sweep_key, "lambda_mean", "lambda_std", "n_discarded"]
    rows = [(x, r.lambda_max, r.lambda_std, r.n_discarded) for x, r in results]
    meta = {"mode": cfg.mode, "sweep_key": sweep_key}
    return header, rows, meta


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run_experiment(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ContractViolationError, PoleProximityError) as exc:
        print(f"computation contract violated: {exc}", file=sys.stderr)
        return 3
    except TtclabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
