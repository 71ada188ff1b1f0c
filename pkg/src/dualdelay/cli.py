"""Command-line front end.

Subcommands: threshold-static, threshold-dynamic, security-prob,
simulate {growth|race|threshold}, corruption {mc|sweep}.

A JSON config file (sections: model, sim, sweep, output, args) supplies
defaults; command-line flags override file keys. The seed is resolved as
flag > config > DUALDELAY_SEED environment variable > 0. Every output
carries a header with the resolved configuration; feeding that
configuration back through --config reproduces the output except for its
timestamp line.

Exit codes: 0 success, 2 configuration error, 3 domain error. Errors are
printed as a single "error: <kind>: <detail>" line on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__, report, sweeps
from .analytic import static_threshold_approx, static_threshold_exact
from .corruption import CorruptionRun, asymptotic_threshold_rule, clt_convergence_sweep, mc_exceedance
from .errors import ConfigError, DualDelayError
from .params import DynamicParams, StaticParams
from .simulate import (
    ADV_SYNC_MODES,
    SimConfig,
    estimate_empirical_threshold,
    simulate_adversarial_growth,
    simulate_honest_growth,
    simulate_private_race,
)

MODEL_KEYS = {
    "lambda_total", "beta", "delta_honest", "delta_adv",
    "n_total", "n_val", "delay_coeff", "topo_k", "sync_c", "corr_c",
}
SIM_KEYS = {"horizon", "confirm_depth", "trials", "base_seed", "adv_sync_mode"}
SWEEP_KEYS = {"axis", "min", "max", "step", "values"}
OUTPUT_KEYS = {"path", "format"}
SECTIONS = {"model", "sim", "sweep", "output", "args", "command"}

DEFAULT_SEED = 0
DEFAULT_SWEEP_N = (100, 1000, 10000)

# Emitted-curve constants for the fig2 preset. The source material states
# none; these are the illustrative values used throughout the docs, echoed
# in the output header, and the exploration report lists alternatives that
# reproduce the dip-then-rise shape.
FIG2_PRESET_MODEL = {"corr_c": 1.0, "sync_c": 0.1, "delay_coeff": 0.05, "lambda_total": 10.0}


# ---------------------------------------------------------------------------
# Config loading and resolution
# ---------------------------------------------------------------------------

def load_config_file(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    for section in raw:
        if section not in SECTIONS:
            raise ConfigError(f"unknown config section '{section}'")
    for section, allowed in (("model", MODEL_KEYS), ("sim", SIM_KEYS),
                             ("sweep", SWEEP_KEYS), ("output", OUTPUT_KEYS)):
        for key in raw.get(section, {}):
            if key not in allowed:
                raise ConfigError(f"unknown key '{key}' in section '{section}'")
    sweep = raw.get("sweep", {})
    if "axis" in sweep and sweep["axis"] not in MODEL_KEYS:
        raise ConfigError(f"sweep axis '{sweep['axis']}' is not a model field")
    return raw


class Resolved:
    """Merged view of config file and flags; records what a run used."""

    def __init__(self, command: str, file_cfg: dict):
        self.command = command
        self.model = dict(file_cfg.get("model", {}))
        self.sim = dict(file_cfg.get("sim", {}))
        self.sweep = dict(file_cfg.get("sweep", {}))
        self.output = dict(file_cfg.get("output", {}))
        self.args = dict(file_cfg.get("args", {}))

    def override(self, section: str, key: str, value) -> None:
        if value is not None:
            getattr(self, section)[key] = value

    def model_value(self, key: str, default=None, required: bool = False):
        if key in self.model:
            return self.model[key]
        if required:
            raise ConfigError(f"missing required model value '{key}'")
        if default is not None:
            self.model[key] = default
        return default

    def echo(self) -> dict:
        doc = {"command": self.command}
        for name in ("model", "sim", "sweep", "output", "args"):
            section = getattr(self, name)
            if section:
                doc[name] = section
        return doc


def resolve_seed(flag_seed, resolved: Resolved) -> int:
    if flag_seed is not None:
        seed = int(flag_seed)
    elif "base_seed" in resolved.sim:
        seed = int(resolved.sim["base_seed"])
    elif os.environ.get("DUALDELAY_SEED"):
        try:
            seed = int(os.environ["DUALDELAY_SEED"])
        except ValueError as exc:
            raise ConfigError(f"DUALDELAY_SEED is not an integer: {exc}") from exc
    else:
        seed = DEFAULT_SEED
    resolved.sim["base_seed"] = seed
    return seed


def resolve_threads(value: str | None) -> int:
    if value in (None, "1"):
        return 1
    if value == "auto":
        return os.cpu_count() or 1
    try:
        n = int(value)
    except ValueError as exc:
        raise ConfigError(f"--threads must be an integer or 'auto', got {value!r}") from exc
    if n < 1:
        raise ConfigError("--threads must be >= 1")
    return n


def sweep_axis_values(resolved: Resolved, axis: str, default=None) -> list[float]:
    sweep = resolved.sweep
    if sweep.get("axis", axis) != axis:
        raise ConfigError(f"sweep axis '{sweep['axis']}' not supported here (expected '{axis}')")
    if "values" in sweep:
        values = [float(v) for v in sweep["values"]]
    elif {"min", "max", "step"} <= sweep.keys():
        lo, hi, step = float(sweep["min"]), float(sweep["max"]), float(sweep["step"])
        if step <= 0 or hi < lo:
            raise ConfigError("sweep requires step > 0 and max >= min")
        count = int(round((hi - lo) / step))
        values = [lo + i * step for i in range(count + 1)]
    elif default is not None:
        values = [float(v) for v in default]
    else:
        raise ConfigError(f"no sweep values given for axis '{axis}'")
    resolved.sweep = {"axis": axis, "values": values}
    return values


def sim_config(resolved: Resolved, **defaults) -> SimConfig:
    merged = dict(defaults)
    merged.update(resolved.sim)
    resolved.sim = merged
    return SimConfig(
        horizon=float(merged.get("horizon", 1e6)),
        confirm_depth=int(merged.get("confirm_depth", 6)),
        trials=int(merged.get("trials", 1)),
        base_seed=int(merged["base_seed"]),
        adv_sync_mode=str(merged.get("adv_sync_mode", "serial_sync")),
    )


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def emit(ns, resolved: Resolved, columns: list[str], rows: list[dict],
         extra_header: list[str] | None = None) -> None:
    fmt = ns.format or resolved.output.get("format") or "csv"
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown output format '{fmt}'")
    out_path = ns.out or resolved.output.get("path")
    resolved.output = {"format": fmt, **({"path": out_path} if out_path else {})}
    seed = resolved.sim["base_seed"]
    text = report.render(fmt, columns, rows, seed, resolved.echo())
    if extra_header and fmt == "csv":
        head, _, tail = text.partition("\n")
        text = head + "\n" + "".join(f"# {line}\n" for line in extra_header) + tail
    elif extra_header and fmt == "json":
        doc = json.loads(text)
        doc["explore"] = extra_header
        text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def maybe_plot(ns, rows: list[dict], plotter_name: str) -> None:
    if getattr(ns, "plot", None):
        from . import plotting

        getattr(plotting, plotter_name)(rows, ns.plot)


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------

def cmd_threshold_static(ns) -> int:
    resolved = Resolved("threshold-static", ns.file_cfg)
    if ns.preset == "fig2":
        raise ConfigError("preset fig2 applies to security-prob")
    if ns.preset == "fig1":
        lambdas = list(sweeps.FIG1_LAMBDAS)
        resolved.model["delta_honest"] = sweeps.FIG1_DELTA_HONEST
        axis = sweep_axis_values(resolved, "delta_adv", default=sweeps.fig1_delta_adv_axis())
    else:
        if ns.lambda_total is not None:
            lambdas = [float(v) for v in ns.lambda_total]
        elif "lambda_total" in resolved.model:
            lambdas = [float(resolved.model["lambda_total"])]
        elif "lambdas" in resolved.args:
            lambdas = [float(v) for v in resolved.args["lambdas"]]
        else:
            raise ConfigError("missing required model value 'lambda_total'")
        resolved.override("model", "delta_honest", ns.delta)
        resolved.model_value("delta_honest", required=True)
        if ns.delta_a is not None:
            resolved.sweep = {"axis": "delta_adv", "values": [float(ns.delta_a)]}
        elif ns.delta_a_range is not None:
            lo, hi, step = ns.delta_a_range
            resolved.sweep = {"axis": "delta_adv", "min": lo, "max": hi, "step": step}
        axis = sweep_axis_values(resolved, "delta_adv")
    resolved.args["lambdas"] = lambdas
    resolve_seed(ns.seed, resolved)
    delta_honest = float(resolved.model["delta_honest"])

    threads = resolve_threads(ns.threads)
    points = [(lam, da) for lam in lambdas for da in axis]

    def one(point):
        lam, da = point
        exact = static_threshold_exact(lam, delta_honest, da)
        approx = static_threshold_approx(lam, delta_honest, da)
        return {
            "lambda": lam, "delta_adv": da,
            "beta_star_exact": exact.beta_star,
            "beta_star_approx": approx.beta_star,
            "clamped": approx.clamped,
        }

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, points))
    else:
        rows = [one(p) for p in points]

    columns = ["lambda", "delta_adv", "beta_star_exact", "beta_star_approx", "clamped"]
    emit(ns, resolved, columns, rows)
    maybe_plot(ns, rows, "plot_static_threshold")
    return 0


def _dynamic_base(
    resolved: Resolved, ns, *, require_topo_k: bool, require_corr_c: bool, n_probe: float
) -> DynamicParams:
    resolved.override("model", "lambda_total", ns.lambda_total)
    resolved.override("model", "delay_coeff", ns.delay_coeff)
    resolved.override("model", "sync_c", ns.sync_c)
    resolved.override("model", "corr_c", ns.corr_c)
    if getattr(ns, "topo_k", None) is not None:
        resolved.model["topo_k"] = ns.topo_k
    lam = resolved.model_value("lambda_total", required=True)
    delay_coeff = resolved.model_value("delay_coeff", required=True)
    sync_c = resolved.model_value("sync_c", required=True)
    # topo_k and corr_c default to inert placeholders on the commands whose
    # outputs do not depend on them.
    corr_c = resolved.model_value("corr_c", required=require_corr_c, default=0.5)
    if require_topo_k:
        topo_k = resolved.model_value("topo_k", required=True)
    else:
        topo_k = resolved.model_value("topo_k", default=1.0)
    return DynamicParams(
        n_total=n_probe, n_val=n_probe, delay_coeff=float(delay_coeff),
        topo_k=float(topo_k), sync_c=float(sync_c), corr_c=float(corr_c),
        lambda_total=float(lam),
    )


def cmd_threshold_dynamic(ns) -> int:
    resolved = Resolved("threshold-dynamic", ns.file_cfg)
    if ns.preset:
        raise ConfigError(f"preset {ns.preset} does not apply to threshold-dynamic")
    if ns.n:
        resolved.sweep = {"axis": "n_total", "values": [float(v) for v in ns.n]}
    axis = sweep_axis_values(resolved, "n_total", default=DEFAULT_SWEEP_N)
    base = _dynamic_base(resolved, ns, require_topo_k=True, require_corr_c=False, n_probe=max(axis))
    resolve_seed(ns.seed, resolved)
    rows = sweeps.dynamic_threshold_rows(base, axis)
    columns = ["n", "delta_n", "beta_star_asymptotic", "beta_star_exact", "residual"]
    emit(ns, resolved, columns, rows)
    maybe_plot(ns, rows, "plot_dynamic_threshold")
    return 0


def cmd_security_prob(ns) -> int:
    resolved = Resolved("security-prob", ns.file_cfg)
    if ns.preset == "fig1":
        raise ConfigError("preset fig1 applies to threshold-static")
    explore = bool(ns.explore_constants or resolved.args.get("explore_constants"))
    if ns.preset == "fig2":
        for key, value in FIG2_PRESET_MODEL.items():
            resolved.model.setdefault(key, value)
        resolved.sweep.setdefault("values", list(sweeps.FIG2_N_GRID))
        resolved.sweep.setdefault("axis", "n_val")
        explore = True
    if ns.n:
        resolved.sweep = {"axis": "n_val", "values": [float(v) for v in ns.n]}
    axis = sweep_axis_values(resolved, "n_val", default=sweeps.FIG2_N_GRID)
    base = _dynamic_base(resolved, ns, require_topo_k=False, require_corr_c=True, n_probe=max(axis))
    resolved.args["explore_constants"] = explore
    resolve_seed(ns.seed, resolved)

    rows = sweeps.security_prob_rows(base, axis)
    header = None
    if explore:
        hits = sweeps.explore_fig2_constants(base.lambda_total, n_grid=axis)
        header = [f"explore: {json.dumps(h, sort_keys=True)}" for h in hits[:8]]
        header.insert(0, f"explore: {len(hits)} constant set(s) reproduce a dip-then-rise curve")
    columns = ["n", "delta_n", "p_star", "beta_star", "z_n", "pr_secure",
               "pr_exceed_exact", "exact_from_gaussian"]
    emit(ns, resolved, columns, rows, extra_header=header)
    maybe_plot(ns, rows, "plot_security_prob")
    return 0


def _static_params_from(resolved: Resolved, ns, *, need_beta: bool) -> StaticParams:
    side_rate_flags = [getattr(ns, "lambda_a", None), getattr(ns, "lambda_h", None)]
    if any(v is not None for v in side_rate_flags):
        if ns.lambda_total is not None or getattr(ns, "beta", None) is not None:
            raise ConfigError("--lambda-a/--lambda-h conflict with --lambda/--beta")
        if ns.lambda_a is not None:
            resolved.model["lambda_total"] = float(ns.lambda_a)
            resolved.model["beta"] = 1.0
        else:
            resolved.model["lambda_total"] = float(ns.lambda_h)
            resolved.model["beta"] = 0.0
    resolved.override("model", "lambda_total", ns.lambda_total)
    resolved.override("model", "beta", getattr(ns, "beta", None))
    resolved.override("model", "delta_honest", getattr(ns, "delta", None))
    resolved.override("model", "delta_adv", getattr(ns, "delta_a", None))
    lam = resolved.model_value("lambda_total", required=True)
    beta = resolved.model_value("beta", required=need_beta, default=0.0 if not need_beta else None)
    return StaticParams(
        lambda_total=float(lam),
        beta=float(beta),
        delta_honest=float(resolved.model_value("delta_honest", default=0.0)),
        delta_adv=float(resolved.model_value("delta_adv", default=0.0)),
    )


def cmd_simulate_growth(ns) -> int:
    resolved = Resolved("simulate growth", ns.file_cfg)
    side = ns.side or resolved.args.get("side")
    if side not in ("honest", "adversarial"):
        raise ConfigError("--side must be 'honest' or 'adversarial'")
    resolved.args["side"] = side
    params = _static_params_from(resolved, ns, need_beta=False)
    resolved.override("sim", "horizon", ns.horizon)
    resolved.override("sim", "trials", ns.trials)
    resolved.override("sim", "adv_sync_mode", ns.mode)
    resolve_seed(ns.seed, resolved)
    config = sim_config(resolved, trials=4)
    if side == "adversarial":
        rate, delay = params.lambda_a, params.delta_adv
        est = simulate_adversarial_growth(rate, delay, config)
    else:
        rate, delay = params.lambda_h, params.delta_honest
        est = simulate_honest_growth(rate, delay, config)
    rows = [{
        "side": side, "mode": config.adv_sync_mode, "rate": rate, "delay": delay,
        "empirical_rate": est.empirical_rate, "block_count": est.block_count,
        "ci_halfwidth": est.ci_halfwidth, "horizon": config.horizon, "trials": config.trials,
    }]
    columns = ["side", "mode", "rate", "delay", "empirical_rate", "block_count",
               "ci_halfwidth", "horizon", "trials"]
    emit(ns, resolved, columns, rows)
    return 0


def cmd_simulate_race(ns) -> int:
    resolved = Resolved("simulate race", ns.file_cfg)
    params = _static_params_from(resolved, ns, need_beta=True)
    resolved.override("sim", "confirm_depth", ns.kconf)
    resolved.override("sim", "trials", ns.trials)
    resolve_seed(ns.seed, resolved)
    config = sim_config(resolved, trials=100_000)
    result = simulate_private_race(params, config, threads=resolve_threads(ns.threads))
    rows = [{
        "beta": params.beta, "lambda": params.lambda_total,
        "delta_honest": params.delta_honest, "delta_adv": params.delta_adv,
        "confirm_depth": config.confirm_depth, "trials": result.trials,
        "success_count": result.success_count, "success_prob": result.success_prob,
        "mean_honest_len": result.mean_honest_len, "mean_adv_len": result.mean_adv_len,
    }]
    columns = ["beta", "lambda", "delta_honest", "delta_adv", "confirm_depth", "trials",
               "success_count", "success_prob", "mean_honest_len", "mean_adv_len"]
    emit(ns, resolved, columns, rows)
    return 0


def cmd_simulate_threshold(ns) -> int:
    resolved = Resolved("simulate threshold", ns.file_cfg)
    params = _static_params_from(resolved, ns, need_beta=False)
    resolved.override("sim", "horizon", ns.horizon)
    resolved.override("sim", "trials", ns.trials)
    resolve_seed(ns.seed, resolved)
    config = sim_config(resolved, trials=1, horizon=1e6)
    beta_hat = estimate_empirical_threshold(
        params.lambda_total, params.delta_honest, params.delta_adv, config
    )
    rows = [{
        "lambda": params.lambda_total, "delta_honest": params.delta_honest,
        "delta_adv": params.delta_adv, "beta_hat": beta_hat, "bracket_width": 0.01,
        "horizon": config.horizon, "trials": config.trials,
    }]
    columns = ["lambda", "delta_honest", "delta_adv", "beta_hat", "bracket_width",
               "horizon", "trials"]
    emit(ns, resolved, columns, rows)
    return 0


def cmd_corruption_mc(ns) -> int:
    resolved = Resolved("corruption mc", ns.file_cfg)
    if ns.n is not None:
        resolved.model["n_val"] = int(ns.n)
    resolved.override("args", "p", ns.p)
    resolved.override("args", "beta_star", ns.beta_star)
    resolved.override("sim", "trials", ns.trials)
    resolve_seed(ns.seed, resolved)
    n_val = resolved.model_value("n_val", required=True)
    if "p" not in resolved.args:
        raise ConfigError("missing required value 'p' (per-validator corruption probability)")
    if "beta_star" not in resolved.args:
        raise ConfigError("missing required value 'beta_star'")
    config = sim_config(resolved, trials=100_000)
    run = CorruptionRun(
        n_val=int(n_val), p=float(resolved.args["p"]), trials=config.trials,
        base_seed=config.base_seed, beta_star=float(resolved.args["beta_star"]),
    )
    est = mc_exceedance(run, threads=resolve_threads(ns.threads))
    rows = [{
        "n_val": run.n_val, "p": run.p, "beta_star": run.beta_star, "trials": run.trials,
        "mc_estimate": est.mc_estimate, "ci_low": est.ci_low, "ci_high": est.ci_high,
        "exact": est.exact, "gaussian": est.gaussian,
    }]
    columns = ["n_val", "p", "beta_star", "trials", "mc_estimate", "ci_low", "ci_high",
               "exact", "gaussian"]
    emit(ns, resolved, columns, rows)
    return 0


def cmd_corruption_sweep(ns) -> int:
    resolved = Resolved("corruption sweep", ns.file_cfg)
    resolved.override("model", "corr_c", ns.corr_c)
    resolved.override("model", "lambda_total", ns.lambda_total)
    resolved.override("model", "sync_c", ns.sync_c)
    resolved.override("sim", "trials", ns.trials)
    if ns.n:
        resolved.sweep = {"axis": "n_val", "values": [int(v) for v in ns.n]}
    axis = [int(v) for v in sweep_axis_values(resolved, "n_val", default=DEFAULT_SWEEP_N)]
    corr_c = float(resolved.model_value("corr_c", required=True))
    lam = float(resolved.model_value("lambda_total", required=True))
    sync_c = float(resolved.model_value("sync_c", required=True))
    resolve_seed(ns.seed, resolved)
    config = sim_config(resolved, trials=100_000)
    rows = clt_convergence_sweep(
        corr_c, axis, asymptotic_threshold_rule(lam, sync_c),
        trials=config.trials, base_seed=config.base_seed,
        threads=resolve_threads(ns.threads),
    )
    columns = ["n", "p_star", "beta_star", "mc", "exact", "gaussian"]
    emit(ns, resolved, columns, rows)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _common_flags(parser: argparse.ArgumentParser, root: bool = False) -> None:
    # On subparsers the flags default to SUPPRESS so an unset flag after the
    # subcommand does not overwrite a value given in the global position.
    kw = {} if root else {"default": argparse.SUPPRESS}
    parser.add_argument("--config", metavar="PATH", help="JSON run configuration", **kw)
    parser.add_argument("--seed", type=int, metavar="U64", help="RNG base seed", **kw)
    parser.add_argument("--out", metavar="PATH", help="output file (default: stdout)", **kw)
    parser.add_argument("--format", choices=("csv", "json"), help="output format (default csv)", **kw)
    parser.add_argument("--preset", choices=("fig1", "fig2"), help="built-in parameter preset", **kw)
    parser.add_argument("--threads", metavar="N|auto", help="evaluate points concurrently", **kw)
    parser.add_argument("--plot", metavar="PATH", help="also render a figure to PATH", **kw)


def build_parser() -> argparse.ArgumentParser:
    # abbreviation matching off: flags in scripts stay unambiguous as new
    # options are added (and --p must not collide with --preset/--plot)
    parser = argparse.ArgumentParser(
        prog="dualdelay",
        description="Security thresholds for longest-chain consensus under dual delays",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"dualdelay {__version__}")
    _common_flags(parser, root=True)
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("threshold-static", help="fixed-delay threshold sweep", allow_abbrev=False)
    _common_flags(p)
    p.add_argument("--lambda", dest="lambda_total", action="append", type=float,
                   help="block rate; repeat for multiple curves")
    p.add_argument("--delta", type=float, help="honest propagation delay [s]")
    p.add_argument("--delta-a", type=float, help="single adversarial delay [s]")
    p.add_argument("--delta-a-range", nargs=3, type=float, metavar=("MIN", "MAX", "STEP"),
                   help="adversarial delay axis")
    p.set_defaults(handler=cmd_threshold_static)

    p = commands.add_parser("threshold-dynamic", help="scale-dependent threshold sweep", allow_abbrev=False)
    _common_flags(p)
    p.add_argument("--n", action="append", type=float, help="node count; repeatable")
    p.add_argument("--lambda", dest="lambda_total", type=float)
    p.add_argument("--delay-coeff", type=float, help="honest delay coefficient [s]")
    p.add_argument("--topo-k", type=float, help="reception-delay suppression exponent")
    p.add_argument("--sync-c", type=float, help="adversarial sync delay coefficient [s]")
    p.add_argument("--corr-c", type=float, help="corruption probability coefficient")
    p.set_defaults(handler=cmd_threshold_dynamic)

    p = commands.add_parser("security-prob", help="security probability sweep", allow_abbrev=False)
    _common_flags(p)
    p.add_argument("--n", action="append", type=float, help="validator count; repeatable")
    p.add_argument("--lambda", dest="lambda_total", type=float)
    p.add_argument("--delay-coeff", type=float)
    p.add_argument("--topo-k", type=float)
    p.add_argument("--sync-c", type=float)
    p.add_argument("--corr-c", type=float)
    p.add_argument("--explore-constants", action="store_true",
                   help="search constants for a dip-then-rise curve; report in header")
    p.set_defaults(handler=cmd_security_prob)

    sim = commands.add_parser("simulate", help="Monte Carlo chain simulations", allow_abbrev=False)
    sim_sub = sim.add_subparsers(dest="sim_command", required=True)

    p = sim_sub.add_parser("growth", help="empirical chain growth rate", allow_abbrev=False)
    _common_flags(p)
    p.add_argument("--side", choices=("honest", "adversarial"))
    p.add_argument("--lambda-a", type=float, help="adversarial rate (implies beta=1)")
    p.add_argument("--lambda-h", type=float, help="honest rate (implies beta=0)")
    p.add_argument("--lambda", dest="lambda_total", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--delta-a", type=float)
    p.add_argument("--mode", choices=ADV_SYNC_MODES)
    p.add_argument("--horizon", type=float)
    p.add_argument("--trials", type=int)
    p.set_defaults(handler=cmd_simulate_growth)

    p = sim_sub.add_parser("race", help="honest vs private chain race", allow_abbrev=False)
    _common_flags(p)
    p.add_argument("--beta", type=float)
    p.add_argument("--lambda", dest="lambda_total", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--delta-a", type=float)
    p.add_argument("--kconf", type=int, help="confirmation depth")
    p.add_argument("--trials", type=int)
    p.set_defaults(handler=cmd_simulate_race)

    p = sim_sub.add_parser("threshold", help="empirical threshold by rate crossing", allow_abbrev=False)
    _common_flags(p)
    p.add_argument("--lambda", dest="lambda_total", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--delta-a", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--trials", type=int)
    p.set_defaults(handler=cmd_simulate_threshold)

    cor = commands.add_parser("corruption", help="corruption model Monte Carlo", allow_abbrev=False)
    cor_sub = cor.add_subparsers(dest="corruption_command", required=True)

    p = cor_sub.add_parser("mc", help="exceedance probability for one setting", allow_abbrev=False)
    _common_flags(p)
    p.add_argument("--n", type=int, help="validator count")
    p.add_argument("--p", type=float, help="per-validator corruption probability")
    p.add_argument("--beta-star", type=float, help="threshold to exceed")
    p.add_argument("--trials", type=int)
    p.set_defaults(handler=cmd_corruption_mc)

    p = cor_sub.add_parser("sweep", help="exceedance convergence along a node grid", allow_abbrev=False)
    _common_flags(p)
    p.add_argument("--n", action="append", type=int, help="validator count; repeatable")
    p.add_argument("--corr-c", type=float)
    p.add_argument("--lambda", dest="lambda_total", type=float)
    p.add_argument("--sync-c", type=float)
    p.add_argument("--trials", type=int)
    p.set_defaults(handler=cmd_corruption_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        ns.file_cfg = load_config_file(ns.config) if ns.config else {}
        return ns.handler(ns)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except DualDelayError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
