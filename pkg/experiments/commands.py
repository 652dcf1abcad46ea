"""
Experiment commands: validation, optimization runs, sweeps, connection-mode
comparison and hitting-time measurements

Every command is a pure function of its config (seed included) apart from
wall-clock timings, and writes plot-ready CSV/JSON into an output directory.
"""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from analysis.fairness import Genome, decode_genome, utility
from analysis.throughput import AssociationPattern, PowerAllocation, all_rates
from channel.geometry import NetworkScenario, generate_scenario
from config import CONNECTION_MODES, HITTING_TIME_LIMITS, SWEEP_AXES, VALIDATION_LIMITS
from models.errors import CapacityError, InvalidParameterError
from models.results import EvaluationMethod, ModeShares, RunReport, UserRow
from models.settings import GaConfig, OptimizerKind, SimConfig, UtilityKind
from optimizers.base import SearchResult
from optimizers.bcga import run_bcga
from optimizers.exhaustive import exhaustive_search
from optimizers.hga import run_hga
from optimizers.population import GenomeConstraint
from scenario_io.config_loader import apply_overrides, emit_config, load_config
from scenario_io.reports import round_floats, scenario_digest, write_run_artefacts, write_table
from scenario_io.streams import seeded_stream

logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    """Outcome of one command: exit status, artefact paths and headline numbers"""
    name: str
    exit_code: int = 0
    outputs: Dict[str, str] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)
    message: str = ""


def build_scenario(config: SimConfig, seed: Optional[int] = None) -> NetworkScenario:
    seed = config.run.seed if seed is None else seed
    return generate_scenario(config, seeded_stream(seed, "scenario"))


def mode_shares(assoc: AssociationPattern) -> ModeShares:
    """Percentage of users per connection mode"""
    alpha = assoc.alpha.astype(bool)
    alpha_tilde = assoc.alpha_tilde.astype(bool)
    k = assoc.num_users
    return ModeShares(
        satellite_only=100.0 * np.sum(alpha_tilde & ~alpha) / k,
        aps_only=100.0 * np.sum(alpha & ~alpha_tilde) / k,
        both=100.0 * np.sum(alpha & alpha_tilde) / k,
        unserved=100.0 * np.sum(~alpha & ~alpha_tilde) / k,
    )


def run_optimizer(
    scenario: NetworkScenario,
    config: SimConfig,
    kind: Optional[UtilityKind] = None,
    method: Optional[OptimizerKind] = None,
    constraint: Optional[GenomeConstraint] = None,
    seeds: Sequence[Genome] = (),
) -> SearchResult:
    """Dispatch to the configured optimizer

    Seed genomes enter the GA populations, so the result is never worse than
    any of them. The hybrid GA is also warm-started from the binary GA's best
    association at full power.
    """
    kind = UtilityKind(kind or config.optimizer.utility)
    method = OptimizerKind(method or config.optimizer.method)

    if method == OptimizerKind.EXHAUSTIVE:
        if constraint is not None or seeds:
            raise InvalidParameterError("exhaustive search does not take connection-mode constraints or seeds")
        return exhaustive_search(
            scenario,
            kind,
            include_zero_index=config.optimizer.include_zero_index,
            max_bits=config.optimizer.max_exhaustive_bits,
            workers=config.run.workers,
        )

    binary = run_bcga(scenario, kind, config.ga_config(), constraint=constraint, seeds=seeds)
    if method == OptimizerKind.BCGA:
        return binary

    warm = Genome(bits=binary.best_genome.bits, xi=np.ones(scenario.num_users))
    hybrid = run_hga(scenario, kind, config.hga_config(), seeds=[warm, *seeds], constraint=constraint)
    hybrid.evaluations += binary.evaluations
    hybrid.wall_time_s += binary.wall_time_s
    return hybrid


def build_run_report(
    command: str,
    config: SimConfig,
    scenario: NetworkScenario,
    result: SearchResult,
    kind: UtilityKind,
    method: OptimizerKind,
) -> RunReport:
    """Decode the best genome and assemble everything a run persists"""
    constants = scenario.constants
    assoc, power = decode_genome(result.best_genome, p_max=constants.data_power_max_w)
    power = PowerAllocation.full(constants) if power is None else power
    rates = all_rates(scenario, assoc, power)
    baseline = all_rates(scenario, AssociationPattern.full(scenario.num_users))
    rate_vec = np.array(rates.rate_mbps)
    baseline_vec = np.array(baseline.rate_mbps)

    users = [
        UserRow(
            user_id=i,
            x_m=float(scenario.user_positions[i, 0]),
            y_m=float(scenario.user_positions[i, 1]),
            alpha=int(assoc.alpha[i]),
            alpha_tilde=int(assoc.alpha_tilde[i]),
            xi=float(power.xi[i]),
            p_w=float(power.powers[i]),
            sinr=rates.sinr[i],
            rate_mbps=rates.rate_mbps[i],
        )
        for i in range(scenario.num_users)
    ]
    return RunReport(
        command=command,
        config=config.model_dump(mode="json"),
        scenario_digest=scenario_digest(scenario),
        optimizer=method.value,
        utility=kind,
        best_value=float(result.best_value),
        baseline_value=float(utility(baseline_vec, kind)),
        utilities={k.value: float(utility(rate_vec, k)) for k in UtilityKind},
        baseline_utilities={k.value: float(utility(baseline_vec, k)) for k in UtilityKind},
        total_throughput_mbps=float(rate_vec.sum()),
        min_throughput_mbps=float(rate_vec.min()),
        mode_shares=mode_shares(assoc),
        best_bits=[int(b) for b in result.best_genome.bits],
        best_xi=None if result.best_genome.xi is None else [float(x) for x in result.best_genome.xi],
        evaluations=result.evaluations,
        generation_found=result.generation_found,
        users=users,
        history=result.history,
        timings={"optimizer_s": result.wall_time_s},
    )


def _output_dir(config: SimConfig, out_dir: Optional[Union[str, Path]]) -> Path:
    return Path(config.run.output_dir if out_dir is None else out_dir)


def _run_jobs(func: Callable[[Any], Any], jobs: Sequence[Any], workers: int) -> List[Any]:
    """Map func over jobs, in a process pool when workers > 1; results keep job order"""
    if workers <= 1 or len(jobs) <= 1:
        return [func(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, jobs))


def _relative_error(reference: float, estimate: float) -> float:
    if reference > 0:
        return abs(reference - estimate) / reference
    return 0.0 if estimate == 0 else math.inf


def cmd_validate(config: SimConfig, out_dir: Optional[Union[str, Path]] = None) -> CommandResult:
    """Closed-form vs Monte-Carlo SINR per user on a small network"""
    radio = config.radio
    if (
        radio.num_aps > VALIDATION_LIMITS["max_aps"]
        or radio.num_users > VALIDATION_LIMITS["max_users"]
        or radio.num_sat_antennas > VALIDATION_LIMITS["max_sat_antennas"]
    ):
        raise CapacityError(
            f"validate is limited to N <= {VALIDATION_LIMITS['max_aps']}, K <= {VALIDATION_LIMITS['max_users']}, "
            f"M <= {VALIDATION_LIMITS['max_sat_antennas']}; got N={radio.num_aps} K={radio.num_users} "
            f"M={radio.num_sat_antennas}"
        )
    scenario = build_scenario(config)
    k = scenario.num_users
    if config.mc.pattern:
        genome = Genome.from_string(config.mc.pattern)
        assoc, _ = decode_genome(genome)
    else:
        assoc = AssociationPattern.full(k)

    start = time.perf_counter()
    closed = all_rates(scenario, assoc, method=EvaluationMethod.CLOSED_FORM)
    sampled = all_rates(
        scenario,
        assoc,
        method=EvaluationMethod.MONTE_CARLO,
        n_real=config.mc.realizations,
        rng=seeded_stream(config.run.seed, "mc"),
        batch_size=config.mc.batch_size,
    )
    elapsed = time.perf_counter() - start

    rows = []
    for i in range(k):
        error = _relative_error(closed.sinr[i], sampled.sinr[i])
        rows.append({
            "user_id": i,
            "alpha": int(assoc.alpha[i]),
            "alpha_tilde": int(assoc.alpha_tilde[i]),
            "sinr_closed_form": closed.sinr[i],
            "sinr_monte_carlo": sampled.sinr[i],
            "relative_error": error,
            "passed": bool(error <= config.mc.tolerance),
        })
    worst = max(rows, key=lambda row: row["relative_error"])
    passed = all(row["passed"] for row in rows)

    out = _output_dir(config, out_dir)
    outputs = {"validation": str(write_table(rows, out / "validation.csv"))}
    summary = {
        "scenario_digest": scenario_digest(scenario),
        "realizations": config.mc.realizations,
        "tolerance": config.mc.tolerance,
        "worst_user": worst["user_id"],
        "worst_relative_error": worst["relative_error"],
        "passed": passed,
        "diagnostics": sampled.diagnostics,
        "elapsed_s": elapsed,
    }
    message = (
        f"all {k} users within {config.mc.tolerance:.1%}"
        if passed
        else f"user {worst['user_id']} off by {worst['relative_error']:.2%} "
        f"(tolerance {config.mc.tolerance:.1%})"
    )
    return CommandResult("validate", 0 if passed else 1, outputs, round_floats(summary), message)


def cmd_optimize(
    config: SimConfig,
    out_dir: Optional[Union[str, Path]] = None,
    command: str = "optimize",
) -> CommandResult:
    """Run the configured optimizer and write users.csv, history.csv, summary.json"""
    kind = config.optimizer.utility
    method = config.optimizer.method
    scenario = build_scenario(config)
    result = run_optimizer(scenario, config, kind, method)
    report = build_run_report(command, config, scenario, result, kind, method)
    outputs = write_run_artefacts(report, _output_dir(config, out_dir))
    gain = report.best_value / report.baseline_value - 1.0 if report.baseline_value > 0 else math.inf
    summary = {
        "best_value": report.best_value,
        "baseline_value": report.baseline_value,
        "gain_over_full_association": gain,
        "mode_shares": report.mode_shares.model_dump(),
        "evaluations": report.evaluations,
        "generation_found": report.generation_found,
        "wall_time_s": result.wall_time_s,
    }
    message = f"{kind.value} utility {report.best_value:.6g} Mbps (full association {report.baseline_value:.6g})"
    return CommandResult(command, 0, outputs, summary, message)


def cmd_exhaustive(config: SimConfig, out_dir: Optional[Union[str, Path]] = None) -> CommandResult:
    exhaustive = apply_overrides(config, ["optimizer.method=exhaustive"])
    return cmd_optimize(exhaustive, out_dir, command="exhaustive")


def _sweep_point(job: Dict[str, Any]) -> Dict[str, Any]:
    config = load_config(job["config"], job["overrides"])
    kind = config.optimizer.utility
    method = config.optimizer.method
    scenario = build_scenario(config)
    result = run_optimizer(scenario, config, kind, method)
    report = build_run_report("sweep", config, scenario, result, kind, method)
    return {
        "axis": job["axis"],
        "axis_value": job["value"],
        "utility_kind": kind.value,
        "replicate": job["replicate"],
        "seed": config.run.seed,
        "best_fitness": report.best_value,
        "baseline_fitness": report.baseline_value,
        "total_throughput_mbps": report.total_throughput_mbps,
        "min_throughput_mbps": report.min_throughput_mbps,
        "evaluations": report.evaluations,
    }


def cmd_sweep(
    config: SimConfig,
    axis: str,
    values: Sequence[Union[int, float]],
    out_dir: Optional[Union[str, Path]] = None,
    replicates: int = 1,
    kinds: Optional[Sequence[UtilityKind]] = None,
) -> CommandResult:
    """One optimization per (axis value, utility, replicate), long-format CSV"""
    if axis not in SWEEP_AXES:
        raise InvalidParameterError(f"unknown sweep axis '{axis}'; expected one of {sorted(SWEEP_AXES)}")
    if not values:
        raise InvalidParameterError("sweep needs at least one axis value")
    key = SWEEP_AXES[axis]
    kinds = [UtilityKind(k) for k in (kinds or [config.optimizer.utility])]
    text = emit_config(config)
    jobs = [
        {
            "config": text,
            "overrides": [
                f"{key}={value}",
                f"optimizer.utility={kind.value}",
                f"run.seed={config.run.seed + replicate}",
            ],
            "axis": axis,
            "value": value,
            "replicate": replicate,
        }
        for value in values
        for kind in kinds
        for replicate in range(replicates)
    ]
    logger.info(f"Sweeping {axis} over {list(values)} ({len(jobs)} runs, {config.run.workers} workers)")
    rows = _run_jobs(_sweep_point, jobs, config.run.workers)
    rows.sort(key=lambda row: (row["axis_value"], row["utility_kind"], row["replicate"]))
    path = write_table(rows, _output_dir(config, out_dir) / "sweep.csv")
    return CommandResult("sweep", 0, {"sweep": str(path)}, {"runs": len(rows)}, f"{len(rows)} sweep runs")


def cmd_compare_modes(config: SimConfig, out_dir: Optional[Union[str, Path]] = None) -> CommandResult:
    """Optimize under satellite-only, APs-only and unconstrained association

    The unconstrained run is seeded with the constrained winners, so its
    best value is never below theirs.
    """
    kind = config.optimizer.utility
    method = config.optimizer.method
    if method == OptimizerKind.EXHAUSTIVE:
        logger.info("compare-modes constrains GA genomes; using the binary GA instead of enumeration")
        method = OptimizerKind.BCGA
    scenario = build_scenario(config)
    summary_rows, rate_rows, winners = [], [], []
    for mode in CONNECTION_MODES:
        constraint = GenomeConstraint.from_mode(mode, scenario.num_users)
        if constraint.allowed.all():
            result = run_optimizer(scenario, config, kind, method, seeds=winners)
        else:
            result = run_optimizer(scenario, config, kind, method, constraint=constraint)
            winners.append(result.best_genome)
        report = build_run_report("compare-modes", config, scenario, result, kind, method)
        rates = np.array([row.rate_mbps for row in report.users])
        summary_rows.append({
            "mode": mode,
            "best_fitness": report.best_value,
            "min_rate_mbps": float(rates.min()),
            "median_rate_mbps": float(np.median(rates)),
            "max_rate_mbps": float(rates.max()),
            "total_throughput_mbps": report.total_throughput_mbps,
        })
        rate_rows.extend(
            {"mode": mode, "user_id": row.user_id, "rate_mbps": row.rate_mbps} for row in report.users
        )
    out = _output_dir(config, out_dir)
    outputs = {
        "compare_modes": str(write_table(summary_rows, out / "compare_modes.csv")),
        "mode_rates": str(write_table(rate_rows, out / "mode_rates.csv")),
    }
    best = max(summary_rows, key=lambda row: row["best_fitness"])
    summary = {row["mode"]: row["best_fitness"] for row in summary_rows}
    return CommandResult("compare-modes", 0, outputs, summary, f"best mode: {best['mode']}")


def _first_hit(result: SearchResult, target: float) -> Optional[int]:
    for row in result.history:
        if row.best_fitness >= target:
            return row.generation
    return None


def _hitting_trial(job: Dict[str, Any]) -> Dict[str, Any]:
    config: GaConfig = job["ga_config"]
    result = run_bcga(job["scenario"], job["kind"], config, target_value=job["target"])
    hit = _first_hit(result, job["target"])
    return {
        "p_m": job["p_m"],
        "trial": job["trial"],
        "seed": config.seed,
        "hit_generation": -1 if hit is None else hit,
        "censored": hit is None,
    }


def hitting_time_bound(p_m: float, num_users: int, constant: float = 1.0) -> float:
    """Lower-bound curve c (1 - p_m)^(-2K) / K"""
    return constant * (1.0 - p_m) ** (-2 * num_users) / num_users


def cmd_hitting_time(
    config: SimConfig,
    n_trials: int,
    out_dir: Optional[Union[str, Path]] = None,
    pm_grid: Optional[Sequence[float]] = None,
    bound_constant: float = 1.0,
) -> CommandResult:
    """First generation at which the binary GA reaches the exhaustive optimum"""
    k = config.radio.num_users
    if k > HITTING_TIME_LIMITS["max_users"]:
        raise CapacityError(
            f"hitting-time needs an exhaustive optimum; K={k} exceeds {HITTING_TIME_LIMITS['max_users']}"
        )
    if n_trials < 1:
        raise InvalidParameterError("hitting-time needs at least one trial")
    kind = config.optimizer.utility
    scenario = build_scenario(config)
    optimum = exhaustive_search(scenario, kind, include_zero_index=config.optimizer.include_zero_index).best_value
    target = optimum - 1e-12 * max(1.0, abs(optimum))
    grid = list(pm_grid) if pm_grid else [config.ga.mutation_rate]

    base = config.ga_config()
    jobs = [
        {
            "scenario": scenario,
            "kind": kind,
            "ga_config": base.model_copy(update={"mutation_rate": p_m, "seed": base.seed + trial}),
            "target": target,
            "p_m": p_m,
            "trial": trial,
        }
        for p_m in grid
        for trial in range(n_trials)
    ]
    logger.info(f"Hitting-time: {len(jobs)} trials against optimum {optimum:.6g}")
    trials = _run_jobs(_hitting_trial, jobs, config.run.workers)

    summary_rows = []
    for p_m in grid:
        rows = [row for row in trials if row["p_m"] == p_m]
        hits = np.array([row["hit_generation"] for row in rows if not row["censored"]], dtype=float)
        summary_rows.append({
            "p_m": p_m,
            "trials": len(rows),
            "hits": int(hits.size),
            "censored": len(rows) - int(hits.size),
            "hit_rate": hits.size / len(rows),
            "mean_generation": float(hits.mean()) if hits.size else math.nan,
            "median_generation": float(np.median(hits)) if hits.size else math.nan,
            "std_generation": float(hits.std()) if hits.size else math.nan,
            "lower_bound": hitting_time_bound(p_m, k, bound_constant),
        })

    out = _output_dir(config, out_dir)
    outputs = {
        "trials": str(write_table(trials, out / "hitting_time.csv")),
        "summary": str(write_table(summary_rows, out / "hitting_summary.csv")),
    }
    min_rate = HITTING_TIME_LIMITS["min_hit_rate"]
    weakest = min(summary_rows, key=lambda row: row["hit_rate"])
    passed = weakest["hit_rate"] >= min_rate
    summary = {
        "optimum": optimum,
        "rows": round_floats(summary_rows),
        "passed": passed,
    }
    message = (
        f"hit rate >= {min_rate:.0%} for every p_m"
        if passed
        else f"p_m={weakest['p_m']} reached the optimum in only {weakest['hit_rate']:.0%} of trials"
    )
    return CommandResult("hitting-time", 0 if passed else 1, outputs, summary, message)
