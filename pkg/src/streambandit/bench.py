"""Seeded trial batteries with sample/pass/memory aggregation and CSV output.

A battery fixes one instance realization, then runs every configured
algorithm on it for each trial with per-(trial, algorithm) derived seeds, so
algorithms are compared paired on identical instances with disjoint reward
randomness.  Results order is deterministic regardless of scheduling.
"""

from __future__ import annotations

import csv
import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .algorithms import AlgorithmConfig
from .generators import HardInstanceParams, gen_arithmetic, gen_cluster, gen_hard_batched, gen_uniform
from .instances import BanditInstance, load_instance
from .trial import TrialResult, run_trial

#: Published full-scale comparison rows (n = 2000 instances), kept as context
#: metadata: desk-scale batteries reproduce orderings, not these magnitudes.
#: "keepbest" plays the single-pass worst-case baseline role; "jhtx" the
#: gap-halving multi-pass baseline; "alg1" the known-gap eliminator.
REFERENCE_FULL_SCALE = {
    "uniform": {
        "keepbest": {"mean_samples": 5.62e11, "mean_passes": 1.0},
        "jhtx": {"mean_samples": 1.41e10, "mean_passes": 16.4},
        "alg1": {"mean_samples": 1.18e9, "mean_passes": 8.83},
    },
    "arithmetic": {
        "keepbest": {"mean_samples": 4.01e12, "mean_passes": 1.0},
        "jhtx": {"mean_samples": 5.05e10, "mean_passes": 18.53},
        "alg1": {"mean_samples": 4.61e9, "mean_passes": 8.67},
    },
    "cluster": {
        "keepbest": {"mean_samples": 3.32e10, "mean_passes": 1.0},
        "jhtx": {"mean_samples": 1.38e11, "mean_passes": 13.47},
        "alg1": {"mean_samples": 1.73e10, "mean_passes": 9.03},
    },
}

RESULTS_COLUMNS = (
    "trial",
    "algorithm",
    "seed",
    "returned_arm",
    "correct",
    "total_pulls",
    "passes_used",
    "peak_arm_memory",
    "peak_stats_words",
)

SUMMARY_COLUMNS = ("algorithm", "mean_samples", "samples_ci95", "mean_passes", "success_rate")


def derive_seed(base_seed: int, *parts) -> int:
    """Stable 63-bit seed from a base seed and any hashable tag parts."""
    text = ":".join([str(base_seed)] + [str(p) for p in parts])
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


@dataclass(frozen=True)
class ExperimentSpec:
    """One battery: an instance source, algorithm list, trial count, base seed."""

    instance_source: dict
    algorithms: tuple[AlgorithmConfig, ...]
    trials: int
    base_seed: int = 0
    scale_note: str = ""

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.algorithms:
            raise ValueError("at least one algorithm config required")
        object.__setattr__(self, "algorithms", tuple(self.algorithms))

    def to_dict(self) -> dict:
        return {
            "instance": dict(self.instance_source),
            "algorithms": [c.to_dict() for c in self.algorithms],
            "trials": self.trials,
            "base_seed": self.base_seed,
            "scale_note": self.scale_note,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        return cls(
            instance_source=d["instance"],
            algorithms=tuple(AlgorithmConfig.from_dict(a) for a in d["algorithms"]),
            trials=d["trials"],
            base_seed=d.get("base_seed", 0),
            scale_note=d.get("scale_note", ""),
        )


def resolve_instance(source: dict, base_seed: int) -> BanditInstance:
    """Materialize the battery's fixed instance from a path or generator spec."""
    if "path" in source:
        return load_instance(source["path"])
    family = source["generator"]
    seed = source.get("seed")
    if seed is None:
        seed = derive_seed(base_seed, "instance", family)
    n = source["n"]
    if family == "uniform":
        return gen_uniform(n, seed)
    if family == "arithmetic":
        return gen_arithmetic(n, source.get("lo", 0.0), source.get("hi", 1.0), seed)
    if family == "cluster":
        return gen_cluster(
            n,
            best=source.get("best", 0.9),
            c1=source.get("c1", 0.899),
            c2=source.get("c2", 0.898),
            seed=seed,
        )
    if family == "hard":
        params = HardInstanceParams(
            n=n, B=source["B"], C=source.get("C", 1), gamma=source.get("gamma")
        )
        return gen_hard_batched(params, seed)[0]
    raise ValueError(f"unknown generator {family!r}")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    result: TrialResult

    @property
    def algorithm(self) -> str:
        return self.result.algorithm


def _run_one(args) -> tuple[int, int, TrialResult]:
    instance, config, trial, algo_index, seed = args
    return trial, algo_index, run_trial(instance, config, seed)


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> tuple[BanditInstance, list[TrialRecord]]:
    """Run the battery; per-trial failures are recorded, never aborting it."""
    instance = resolve_instance(spec.instance_source, spec.base_seed)
    tasks = []
    for trial in range(spec.trials):
        for algo_index, config in enumerate(spec.algorithms):
            seed = derive_seed(spec.base_seed, trial, config.algorithm)
            tasks.append((instance, config, trial, algo_index, seed))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_one, tasks, chunksize=1))
    else:
        outcomes = [_run_one(t) for t in tasks]
    outcomes.sort(key=lambda o: (o[0], o[1]))
    return instance, [TrialRecord(trial=t, result=r) for t, _, r in outcomes]


@dataclass(frozen=True)
class AlgorithmSummary:
    algorithm: str
    mean_samples: float
    samples_ci95: float
    mean_passes: float
    success_rate: float
    mean_peak_memory: float


def _mean(xs) -> float:
    return sum(xs) / len(xs)


def _ci95(xs) -> float:
    if len(xs) < 2:
        return 0.0
    m = _mean(xs)
    var = sum((x - m) ** 2 for x in xs) / (len(xs) - 1)
    return 1.96 * math.sqrt(var) / math.sqrt(len(xs))


def aggregate(records: list[TrialRecord]) -> list[AlgorithmSummary]:
    """Per-algorithm means and 95% normal-approximation CIs, trials i.i.d.

    Failed trials count as incorrect but their pull counts still enter the
    sample means, so residual failures cannot bias samples downward.
    """
    if not records:
        raise ValueError("no records to aggregate")
    order: list[str] = []
    groups: dict[str, list[TrialResult]] = {}
    for rec in records:
        if rec.algorithm not in groups:
            order.append(rec.algorithm)
            groups[rec.algorithm] = []
        groups[rec.algorithm].append(rec.result)
    out = []
    for name in order:
        rs = groups[name]
        pulls = [r.total_pulls for r in rs]
        out.append(
            AlgorithmSummary(
                algorithm=name,
                mean_samples=_mean(pulls),
                samples_ci95=_ci95(pulls),
                mean_passes=_mean([r.passes_used for r in rs]),
                success_rate=_mean([1.0 if r.correct else 0.0 for r in rs]),
                mean_peak_memory=_mean([r.peak_arm_memory for r in rs]),
            )
        )
    return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit_results_csv(records: list[TrialRecord], path: str | Path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(RESULTS_COLUMNS)
            for rec in records:
                r = rec.result
                w.writerow(
                    [
                        _fmt(rec.trial),
                        r.algorithm,
                        _fmt(r.seed),
                        _fmt(r.returned_arm),
                        _fmt(r.correct),
                        _fmt(r.total_pulls),
                        _fmt(r.passes_used),
                        _fmt(r.peak_arm_memory),
                        _fmt(r.peak_stats_words),
                    ]
                )
    except OSError as e:
        raise OSError(f"cannot write results CSV at {path}: {e}") from e


def parse_results_csv(path: str | Path) -> list[TrialRecord]:
    """Inverse of emit_results_csv for every numeric field."""
    records = []
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            result = TrialResult(
                returned_arm=int(row["returned_arm"]) if row["returned_arm"] else None,
                correct=row["correct"] == "true",
                total_pulls=int(row["total_pulls"]),
                passes_used=int(row["passes_used"]),
                peak_arm_memory=int(row["peak_arm_memory"]),
                peak_stats_words=int(row["peak_stats_words"]) if row["peak_stats_words"] else None,
                seed=int(row["seed"]),
                algorithm=row["algorithm"],
                failure_reason=None,
            )
            records.append(TrialRecord(trial=int(row["trial"]), result=result))
    return records


def emit_summary_csv(summaries: list[AlgorithmSummary], path: str | Path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(SUMMARY_COLUMNS)
            for s in summaries:
                w.writerow(
                    [
                        s.algorithm,
                        _fmt(s.mean_samples),
                        _fmt(s.samples_ci95),
                        _fmt(s.mean_passes),
                        _fmt(s.success_rate),
                    ]
                )
    except OSError as e:
        raise OSError(f"cannot write summary CSV at {path}: {e}") from e


def emit_plot_data(records: list[TrialRecord], path: str | Path) -> None:
    """Per-trial log10(samples) series per algorithm, for external plotting."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(("trial", "algorithm", "log10_samples", "passes_used"))
            for rec in records:
                r = rec.result
                logs = format(math.log10(r.total_pulls), ".17g") if r.total_pulls > 0 else ""
                w.writerow([rec.trial, r.algorithm, logs, r.passes_used])
    except OSError as e:
        raise OSError(f"cannot write plot data at {path}: {e}") from e
