"""Deterministic experiment orchestration: seed derivation, recovery trials,
and the phase sweep over (signal class, sampling rate) grids.

Per-trial seeds are derived with SHA-256 from (master seed, grid index, trial
index), so results do not depend on execution order and independent trials can
run in parallel.
"""
from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .ratio import fourier_ratio
from .recovery import RecoveryConfig, bernoulli_sample, recover_l1, restrict
from .signals import generate_signal
from .systems import OrthonormalSystem, parse_system

DEFAULT_ERROR_CONSTANT = 11.47


def derive_seed(master: int, *indices: int) -> int:
    """Stable 64-bit seed from SHA-256 of the master seed and index path."""
    payload = ":".join(str(v) for v in (master, *indices)).encode()
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")


def success_threshold(eps: float, constant: float = DEFAULT_ERROR_CONSTANT) -> float:
    return max(constant * eps, 1e-5)


@dataclass(frozen=True)
class PhaseSweepConfig:
    system: str
    signal: str = "sparse:3"
    p_values: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0)
    trials: int = 50
    master_seed: int = 0
    eps: float = 0.0
    max_iterations: int = 5000
    step: float = 1.0
    tolerance: float = 1e-9
    threshold: float | None = None
    jobs: int = 1


@dataclass(frozen=True)
class TrialRecord:
    p: float
    trial: int
    seed: int
    relative_error: float
    iterations: int
    converged: bool
    success: bool


def _run_trial(args) -> TrialRecord:
    system_spec, signal_spec, p, grid_index, trial, master_seed, eps, solver, threshold = args
    system = parse_system(system_spec)
    seed = derive_seed(master_seed, grid_index, trial)
    f = generate_signal(system, signal_spec, seed=derive_seed(seed, 0))
    sample = bernoulli_sample(system.group, p, derive_seed(seed, 1))
    sigma = eps * f.l2
    y = restrict(f.values, sample)
    config = RecoveryConfig(
        max_iterations=solver[0], step=solver[1], tolerance=solver[2], fidelity_radius=sigma
    )
    result = recover_l1(system, sample, y, config, truth=f)
    rel = result.relative_error if result.relative_error is not None else float("inf")
    return TrialRecord(
        p=p,
        trial=trial,
        seed=seed,
        relative_error=rel,
        iterations=result.iterations,
        converged=result.converged,
        success=rel <= threshold,
    )


@dataclass(frozen=True)
class PhaseSweepReport:
    config: PhaseSweepConfig
    records: tuple[TrialRecord, ...]
    aggregates: tuple[dict, ...]
    code_version: str = __version__

    def to_json(self) -> str:
        config = asdict(self.config)
        # worker count has no effect on the results and must not make
        # otherwise-identical reports differ
        config.pop("jobs", None)
        payload = {
            "config": config,
            "records": [asdict(r) for r in self.records],
            "aggregates": list(self.aggregates),
            "code_version": self.code_version,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_csv_rows(self) -> list[str]:
        system = parse_system(self.config.system)
        header = "system,M,signal,p,trials,success_rate,mean_relative_error"
        rows = [header]
        for agg in self.aggregates:
            rows.append(
                f"{self.config.system},{system.size},{self.config.signal},"
                f"{agg['p']},{agg['trials']},{agg['success_rate']},{agg['mean_relative_error']}"
            )
        return rows


def run_phase_sweep(config: PhaseSweepConfig) -> PhaseSweepReport:
    if not config.p_values:
        raise ValueError("phase sweep needs at least one p value")
    if any(not 0.0 < p <= 1.0 for p in config.p_values):
        raise ValueError("p values must lie in (0, 1]")
    threshold = (
        config.threshold if config.threshold is not None else success_threshold(max(config.eps, 0.0))
    )
    solver = (config.max_iterations, config.step, config.tolerance)
    tasks = [
        (
            config.system,
            config.signal,
            p,
            grid_index,
            trial,
            config.master_seed,
            config.eps,
            solver,
            threshold,
        )
        for grid_index, p in enumerate(config.p_values)
        for trial in range(config.trials)
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_run_trial, tasks))
    else:
        records = [_run_trial(t) for t in tasks]
    aggregates = []
    for p in config.p_values:
        here = [r for r in records if r.p == p]
        errors = np.array([r.relative_error for r in here])
        aggregates.append(
            {
                "p": p,
                "trials": len(here),
                "success_rate": float(np.mean([r.success for r in here])),
                "mean_relative_error": float(np.mean(errors)),
            }
        )
    return PhaseSweepReport(config=config, records=tuple(records), aggregates=tuple(aggregates))


def fr_report(system: OrthonormalSystem, f, etas=(0.1, 0.25, 0.5)) -> dict:
    """FR of the coefficients plus sparsification summaries at a few etas."""
    from .ratio import soft_sparsify

    c = system.analyze(f)
    out = {
        "system": system.system_id,
        "fr": fourier_ratio(c),
        "coefficient_l1": c.l1,
        "coefficient_l2": c.l2,
        "sparsify": [],
    }
    for eta in etas:
        res = soft_sparsify(c, eta)
        out["sparsify"].append({"eta": eta, "s": res.s, "tail_l2": res.tail_l2, "tail_l1": res.tail_l1})
    return out
