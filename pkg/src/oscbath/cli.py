"""Command-line interface: configuration, orchestration, output emission.

Exit status: 0 on success, 2 for configuration or validation problems, 3 for
numeric failures inside a computation.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, io
from .analysis import classify_regime, compare_trajectories
from .bath import (
    KERNEL_MATCHED,
    PAPER_EQ44,
    discretize_ohmic,
    effective_frequency_squared,
    memory_kernel_continuum,
    memory_kernel_discrete,
)
from .config import ConfigDocument, RunManifest, load_config
from .dynamics import (
    LABEL_BOHMIAN,
    LABEL_FULL,
    LABEL_GLE,
    LABEL_MARKOV_QUANTUM,
    LangevinParams,
    bohmian_langevin_analytic,
    classical_noise,
    integrate_damped_oscillator,
    integrate_full_hamiltonian,
    integrate_gle,
    quantum_langevin_analytic,
)
from .errors import ConfigError, InvalidSpec, NegativeXiSq, OscbathError
from .modes import PhasePoint, build_ground_state, sample_ground_state
from .potentials import bohmian_coefficients

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

METHODS = (LABEL_FULL, LABEL_GLE, LABEL_MARKOV_QUANTUM, LABEL_BOHMIAN)
NOISE_POLICIES = ("equilibrium", "ground_state")
R_PROBE_TIMES = (0.0, 1.0, 5.0)


def _say(message: str, plain: bool) -> None:
    if not plain and sys.stdout.isatty():
        message = f"\x1b[1m{message}\x1b[0m"
    print(message)


def _load_config(args, default_discretization: str) -> ConfigDocument:
    cfg = load_config(args.config) if args.config else ConfigDocument()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg.resolved(default_discretization)


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _build_all(cfg: ConfigDocument):
    params = cfg.system_params()
    bath = discretize_ohmic(cfg.bath_spec())
    gs = build_ground_state(params, bath)
    return params, bath, gs


def _derived_map(cfg: ConfigDocument, params, bath, gs) -> dict[str, str]:
    omega_sq = effective_frequency_squared(params, bath)
    regime = classify_regime(cfg.omega0, cfg.omega_c)
    derived = {
        "omega_sq": io.format_float(omega_sq),
        "regime": regime.label,
        "regime_ratio": io.format_float(regime.ratio),
    }
    try:
        coeffs = bohmian_coefficients(gs, bath)
        derived["xi_sq"] = io.format_float(coeffs.xi_sq)
    except NegativeXiSq:
        derived["xi_sq"] = "unavailable (xi^2 <= 0)"
    return derived


def _write_manifest(out, command, cfg, outputs, derived) -> None:
    manifest = RunManifest(
        command=command, config=cfg, outputs=tuple(outputs), derived=derived
    )
    manifest.write(out / "manifest.txt")


def _initial_bath_data(cfg: ConfigDocument, bath, gs, policy: str):
    """Shared initial bath coordinates for the full and gle methods."""
    if policy == "equilibrium":
        return bath.gamma * cfg.q0, np.zeros(bath.n_modes)
    rng = np.random.default_rng(cfg.seed)
    point = sample_ground_state(gs, rng, 1)[0]
    return point.x, point.p_bath


def _run_method(method: str, cfg: ConfigDocument, params, bath, gs, noise_data):
    x0, p0 = noise_data
    if method == LABEL_FULL:
        initial = PhasePoint(q=cfg.q0, p=cfg.qdot0, x=x0, p_bath=p0)
        return integrate_full_hamiltonian(initial, params, bath, cfg.dt, cfg.t_end)
    if method == LABEL_GLE:
        return integrate_gle(
            cfg.q0, cfg.qdot0, bath, params, cfg.dt, cfg.t_end, noise=(x0, p0)
        )
    if method == LABEL_MARKOV_QUANTUM:
        return integrate_damped_oscillator(
            cfg.q0, cfg.qdot0, params.omega0, params.lambda_q, cfg.dt, cfg.t_end,
            LABEL_MARKOV_QUANTUM,
        )
    if method == LABEL_BOHMIAN:
        coeffs = bohmian_coefficients(gs, bath)
        return integrate_damped_oscillator(
            cfg.q0, cfg.qdot0, coeffs.xi, params.lambda_b, cfg.dt, cfg.t_end,
            LABEL_BOHMIAN,
        )
    raise ConfigError(f"unknown method {method!r}; expected one of {METHODS}")


def _parse_methods(spec: str) -> list[str]:
    methods = [m.strip() for m in spec.split(",") if m.strip()]
    if not methods:
        raise ConfigError("methods list is empty")
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}; expected one of {METHODS}")
    return methods


def cmd_bath(args) -> int:
    cfg = _load_config(args, PAPER_EQ44)
    out = _out_dir(args)
    params, bath, gs = _build_all(cfg)
    derived = _derived_map(cfg, params, bath, gs)
    derived["weight_sum"] = io.format_float(float(np.sum(bath.weights)))
    _write_manifest(out, "bath", cfg, ["bath.csv", "modes.csv"], derived)
    io.write_bath_csv(out / "bath.csv", bath)
    io.write_mode_table_csv(out / "modes.csv", gs)
    _say(f"bath: {bath.n_modes} modes, sum gamma^2 omega^2 = {derived['weight_sum']}", args.plain)
    _say(f"wrote {out / 'bath.csv'}, {out / 'modes.csv'}", args.plain)
    return EXIT_OK


def cmd_kernel(args) -> int:
    cfg = _load_config(args, KERNEL_MATCHED)
    out = _out_dir(args)
    params, bath, gs = _build_all(cfg)
    t = cfg.dt * np.arange(int(round(cfg.t_end / cfg.dt)) + 1)
    discrete = memory_kernel_discrete(bath, t)
    continuum = memory_kernel_continuum(cfg.lambda_q_prime, cfg.omega_c, t)
    derived = _derived_map(cfg, params, bath, gs)
    derived["kernel_t0"] = io.format_float(discrete[0])
    derived["kernel_max_abs_diff"] = io.format_float(float(np.max(np.abs(discrete - continuum))))
    outputs = ["kernel.csv"]
    if args.format in ("svg", "both"):
        outputs.append("kernel.svg")
    _write_manifest(out, "kernel", cfg, outputs, derived)
    io.write_columns_csv(out / "kernel.csv", ["t", "discrete", "continuum"], [t, discrete, continuum])
    if "kernel.svg" in outputs:
        io.write_svg_plot(
            out / "kernel.svg", t,
            [("discrete", "blue", discrete), ("continuum", "red", continuum)],
            y_label="T(t)",
        )
    _say(f"kernel: T(0) = {derived['kernel_t0']}, max |discrete - continuum| = "
         f"{derived['kernel_max_abs_diff']}", args.plain)
    _say(f"wrote {', '.join(str(out / name) for name in outputs)}", args.plain)
    return EXIT_OK


def _sample_report(cfg, params, bath, gs, batch):
    """Statistics lines and pass flags for the sample command."""
    coeffs = bohmian_coefficients(gs, bath)
    count = len(batch)
    positions = np.column_stack((batch.q, batch.x))
    names = ["q"] + [f"x_{a + 1}" for a in range(bath.n_modes)]

    metrics: dict[str, float] = {}
    checks: list[tuple[str, bool, str]] = []

    means = positions.mean(axis=0)
    stderrs = positions.std(axis=0, ddof=1) / math.sqrt(count)
    z_max = float(np.max(np.abs(means) / stderrs))
    metrics["mean_abs_z_max"] = z_max
    checks.append(("coordinate means within 4 standard errors of 0", z_max < 4.0,
                   f"max |mean|/stderr = {z_max:.3f}"))

    exact_cov = (gs.hbar / 2.0) * np.linalg.inv(gs.precision_core)
    emp_cov = np.cov(positions, rowvar=False)
    sigma = np.sqrt(np.diagonal(exact_cov))
    scale = np.outer(sigma, sigma)
    cov_dev = float(np.max(np.abs(emp_cov - exact_cov) / scale))
    diag_dev = float(np.max(np.abs(np.diagonal(emp_cov) / np.diagonal(exact_cov) - 1.0)))
    metrics["cov_max_scaled_dev"] = cov_dev
    metrics["cov_max_diag_rel_dev"] = diag_dev
    checks.append(("covariance within 5% of (hbar/2) M^-1 (per-entry scale)",
                   cov_dev < 0.05, f"max scaled deviation = {cov_dev:.4f}"))
    checks.append(("variances within 5% relative", diag_dev < 0.05,
                   f"max diagonal relative deviation = {diag_dev:.4f}"))

    eta_vals = batch.x @ coeffs.eta_weights
    eta_mean = float(eta_vals.mean())
    eta_stderr = float(eta_vals.std(ddof=1) / math.sqrt(count))
    metrics["eta_mean"] = eta_mean
    metrics["eta_stderr"] = eta_stderr
    checks.append(("<eta> consistent with 0", abs(eta_mean) < 4.0 * eta_stderr,
                   f"mean = {eta_mean:.3e}, stderr = {eta_stderr:.3e}"))

    c = bath.coupling
    for t_probe in R_PROBE_TIMES:
        cos_w = np.cos(bath.omega * t_probe)
        sin_w = np.sin(bath.omega * t_probe)
        r_vals = (batch.x - batch.q[:, None] * bath.gamma) @ (c * cos_w) \
            + batch.p_bath @ (c * sin_w / bath.omega)
        r_mean = float(r_vals.mean())
        r_stderr = float(r_vals.std(ddof=1) / math.sqrt(count))
        metrics[f"R_mean_t{t_probe:g}"] = r_mean
        metrics[f"R_stderr_t{t_probe:g}"] = r_stderr
        checks.append((f"<R(t={t_probe:g})> consistent with 0",
                       abs(r_mean) < 4.0 * r_stderr,
                       f"mean = {r_mean:.3e}, stderr = {r_stderr:.3e}"))

    lines = [f"ground-state sampling report ({count} samples, {bath.n_modes} modes)"]
    for i, name in enumerate(names):
        lines.append(f"  mean[{name}] = {means[i]:+.5e}  stderr = {stderrs[i]:.3e}")
    all_pass = True
    for label, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        all_pass &= ok
        lines.append(f"[{status}] {label}: {detail}")
    lines.append(f"overall: {'PASS' if all_pass else 'FAIL'}")
    return metrics, lines, all_pass


def cmd_sample(args) -> int:
    cfg = _load_config(args, PAPER_EQ44)
    if cfg.sample_count < 100:
        raise ConfigError(f"sample_count must be >= 100, got {cfg.sample_count}")
    out = _out_dir(args)
    params, bath, gs = _build_all(cfg)
    derived = _derived_map(cfg, params, bath, gs)
    outputs = ["samples.csv", "sample_stats.csv", "sample_report.txt"]
    _write_manifest(out, "sample", cfg, outputs, derived)

    rng = np.random.default_rng(cfg.seed)
    batch = sample_ground_state(gs, rng, cfg.sample_count)
    metrics, lines, all_pass = _sample_report(cfg, params, bath, gs, batch)

    io.write_samples_csv(out / "samples.csv", batch)
    io.write_metrics_csv(out / "sample_stats.csv", metrics)
    (out / "sample_report.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        _say(line, args.plain)
    _say(f"wrote {', '.join(str(out / name) for name in outputs)}", args.plain)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load_config(args, KERNEL_MATCHED)
    methods = _parse_methods(args.methods)
    out = _out_dir(args)
    params, bath, gs = _build_all(cfg)
    derived = _derived_map(cfg, params, bath, gs)
    derived["noise"] = args.noise
    outputs = [f"traj_{m}.csv" for m in methods]
    if args.format in ("svg", "both"):
        outputs.append("simulate.svg")
    _write_manifest(out, "simulate", cfg, outputs, derived)

    noise_data = _initial_bath_data(cfg, bath, gs, args.noise)
    trajectories = []
    for method in methods:
        try:
            traj = _run_method(method, cfg, params, bath, gs, noise_data)
        except OscbathError as exc:
            raise type(exc)(f"method {method}: {exc}") from exc
        trajectories.append(traj)
        io.write_trajectory_csv(out / f"traj_{method}.csv", traj, cfg.seed)
        _say(f"wrote {out / f'traj_{method}.csv'}", args.plain)
    if "simulate.svg" in outputs:
        colors = {"full": "black", "gle": "green",
                  "markov_quantum": "blue", "bohmian": "red"}
        io.write_svg_plot(
            out / "simulate.svg", trajectories[0].t,
            [(tr.label, colors[tr.label], tr.q) for tr in trajectories],
        )
        _say(f"wrote {out / 'simulate.svg'}", args.plain)
    return EXIT_OK


def cmd_compare(args) -> int:
    out = _out_dir(args)
    if args.trajectories:
        if len(args.trajectories) != 2:
            raise ConfigError(
                f"compare needs exactly two trajectory files, got {len(args.trajectories)}"
            )
        cfg = _load_config(args, KERNEL_MATCHED)
        traj_a, _ = io.read_trajectory_csv(args.trajectories[0])
        traj_b, _ = io.read_trajectory_csv(args.trajectories[1])
        labels = (traj_a.label, traj_b.label)
        params, bath, gs = _build_all(cfg)
        derived = _derived_map(cfg, params, bath, gs)
    else:
        cfg = _load_config(args, KERNEL_MATCHED)
        methods = _parse_methods(args.methods)
        if len(methods) != 2:
            raise ConfigError(f"compare needs exactly two methods, got {methods}")
        params, bath, gs = _build_all(cfg)
        derived = _derived_map(cfg, params, bath, gs)
        noise_data = _initial_bath_data(cfg, bath, gs, args.noise)
        traj_a = _run_method(methods[0], cfg, params, bath, gs, noise_data)
        traj_b = _run_method(methods[1], cfg, params, bath, gs, noise_data)
        labels = tuple(methods)
    derived["compared"] = f"{labels[0]} vs {labels[1]}"
    _write_manifest(out, "compare", cfg, ["compare.csv", "compare.txt"], derived)

    result = compare_trajectories(traj_a, traj_b)
    metrics = {
        "relative_l2": result.relative_l2,
        "max_abs_diff": result.max_abs_diff,
        "frequency_ratio": result.frequency_ratio,
        "decay_ratio": result.decay_ratio,
    }
    io.write_metrics_csv(out / "compare.csv", metrics)
    lines = [f"comparison of {labels[0]} (a) vs {labels[1]} (b)"]
    lines.append(f"  relative L2 difference : {result.relative_l2:.6e}")
    lines.append(f"  max abs difference     : {result.max_abs_diff:.6e}")
    lines.append(f"  frequency ratio (b/a)  : {result.frequency_ratio:.6f}")
    lines.append(f"  decay-rate ratio (b/a) : {result.decay_ratio:.6f}")
    (out / "compare.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        _say(line, args.plain)
    return EXIT_OK


def figure1_xi_sq(cfg: ConfigDocument) -> float:
    """Effective Bohmian frequency (squared) used for the overlay curves.

    In the common macroscopic regime (omega_c^2 > omega0) the coupling term
    lambda_q_prime * omega_c^4 dominates and is used alone, matching the
    reference overlay; otherwise omega0^2 is kept so the two curves merge as
    the central frequency takes over.
    """
    coupling_term = cfg.lambda_q_prime * cfg.omega_c**4
    regime = classify_regime(cfg.omega0, cfg.omega_c)
    if regime.label == "regime1":
        return coupling_term
    return cfg.omega0**2 + coupling_term


def cmd_figure1(args) -> int:
    cfg = _load_config(args, PAPER_EQ44)
    out = _out_dir(args)
    params, bath, gs = _build_all(cfg)
    derived = _derived_map(cfg, params, bath, gs)
    xi_sq = figure1_xi_sq(cfg)
    xi = math.sqrt(xi_sq)
    derived["xi_sq_curve"] = io.format_float(xi_sq)
    derived["xi_curve"] = io.format_float(xi)
    fmt = args.format or "both"
    outputs = []
    if fmt in ("csv", "both"):
        outputs.append("figure1.csv")
    if fmt in ("svg", "both"):
        outputs.append("figure1.svg")
    _write_manifest(out, "figure1", cfg, outputs, derived)

    t = cfg.dt * np.arange(int(round(cfg.t_end / cfg.dt)) + 1)
    q_quantum = quantum_langevin_analytic(
        t, LangevinParams(omega=cfg.omega0, lam=cfg.lambda_q, amplitude=1.0,
                          phase=math.pi / 2.0)
    )
    q_bohmian = bohmian_langevin_analytic(
        t, LangevinParams(omega=xi, lam=cfg.lambda_b, amplitude=1.0,
                          phase=math.pi / 2.0)
    )
    if "figure1.csv" in outputs:
        io.write_columns_csv(out / "figure1.csv", ["t", "q_quantum", "q_bohmian"],
                             [t, q_quantum, q_bohmian])
    if "figure1.svg" in outputs:
        io.write_svg_plot(
            out / "figure1.svg", t,
            [("quantum", "blue", q_quantum), ("bohmian", "red", q_bohmian)],
        )
    _say(f"figure1: xi = {io.format_float(xi)} ({derived['regime']}, "
         f"r = {derived['regime_ratio']})", args.plain)
    _say(f"wrote {', '.join(str(out / name) for name in outputs)}", args.plain)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscbath",
        description="Damped macroscopic oscillator in a discretized Ohmic bath.",
    )
    parser.add_argument("--version", action="version", version=f"oscbath {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="path to a key = value config file")
        p.add_argument("--out-dir", default=".", help="output directory (default: .)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--format", choices=("csv", "svg", "both"), default=None,
                       help="output formats for plot-capable commands")
        p.add_argument("--plain", action="store_true",
                       help="plain log output (no terminal styling)")

    p = sub.add_parser("bath", help="emit the discretized bath and mode tables")
    add_common(p)
    p.set_defaults(func=cmd_bath)

    p = sub.add_parser("kernel", help="emit discrete vs continuum memory kernels")
    add_common(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("sample", help="sample the ground state and report statistics")
    add_common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("simulate", help="integrate trajectories for selected methods")
    add_common(p)
    p.add_argument("--methods", default=",".join(METHODS),
                   help=f"comma-separated subset of {METHODS}")
    p.add_argument("--noise", choices=NOISE_POLICIES, default="equilibrium",
                   help="initial bath data: shifted equilibrium or a ground-state draw")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="compare two methods or two trajectory files")
    add_common(p)
    p.add_argument("trajectories", nargs="*",
                   help="two trajectory CSV files (alternative to --methods)")
    p.add_argument("--methods", default="full,gle",
                   help="two comma-separated methods to simulate and compare")
    p.add_argument("--noise", choices=NOISE_POLICIES, default="equilibrium")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("figure1", help="overlay the quantum and Bohmian damped curves")
    add_common(p)
    p.set_defaults(func=cmd_figure1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidSpec) as exc:
        print(f"oscbath: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OscbathError as exc:
        print(f"oscbath: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
