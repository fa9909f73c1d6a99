"""Best-arm identification algorithms against the streaming session interface.

Four algorithms, all single-threaded against one session:

* ``stream_elimination`` -- the geometric multi-pass eliminator with a known
  optimality gap.  P + 1 passes, single-arm memory, cumulative pull top-ups.
* ``stream_elimination_re`` -- the bounded-statistics variant: per-arm counts
  are discarded between passes and re-estimated level by level, so only the
  per-pass maxima (at most P + 3 words) persist.
* ``single_pass_keepbest`` -- champion/challenger baseline, one pass.
* ``doubling_gap_elimination`` -- gap-halving eliminator that needs no gap
  knowledge; pass count grows with log(1/gap).

Estimate tie-breaking is always "first maximum in arrival order".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .instances import BanditInstance
from .schedules import BudgetOverflowError, EliminationSchedule
from .session import END_OF_PASS, INT64_MAX, StreamSession


class InconclusiveError(Exception):
    """The run ended without isolating a single arm."""


class PassCapExceededError(Exception):
    """The doubling eliminator hit its pass cap with several arms active."""


@dataclass(frozen=True)
class AlgorithmConfig:
    """Wire-format algorithm selection.

    ``algorithm`` is one of ``"alg1"`` (stream elimination), ``"alg2"``
    (bounded-statistics re-estimating variant), ``"keepbest"``, ``"jhtx"``
    (the doubling baseline).  ``P`` defaults to ceil(log2 n) for the two
    multi-pass eliminators when omitted.
    """

    algorithm: str
    P: int | None = None
    delta: float = 0.05
    delta2_source: str = "exact"
    pass_cap: int | None = None

    def __post_init__(self):
        if self.algorithm not in ("alg1", "alg2", "keepbest", "jhtx"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.delta2_source not in ("exact", "lower_bound", "none"):
            raise ValueError(f"unknown delta2_source {self.delta2_source!r}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must be in (0, 1)")
        if self.P is not None and self.P < 1:
            raise ValueError("P must be >= 1")

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "P": self.P,
            "delta": self.delta,
            "delta2_source": self.delta2_source,
            "pass_cap": self.pass_cap,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AlgorithmConfig":
        return cls(
            algorithm=d["algorithm"],
            P=d.get("P"),
            delta=d.get("delta", 0.05),
            delta2_source=d.get("delta2_source", "exact"),
            pass_cap=d.get("pass_cap"),
        )


def default_passes(n: int) -> int:
    """ceil(log2 n), the pass setting that optimizes the sample/pass trade-off."""
    return max(1, math.ceil(math.log2(max(2, n))))


def resolve_delta2(instance: BanditInstance, config: AlgorithmConfig) -> float | None:
    """Gap value the configured algorithm may consume, validated against the instance."""
    if config.algorithm == "jhtx":
        return None
    if config.delta2_source == "none":
        raise ValueError(f"{config.algorithm} requires gap side information")
    if instance.known_delta2 is None:
        if instance.n == 1:
            return None
        raise ValueError("instance carries no known_delta2")
    if config.delta2_source == "exact" and instance.delta2_mode != "exact":
        raise ValueError("config expects an exact gap but the instance holds a lower bound")
    return instance.known_delta2


@dataclass(frozen=True)
class PassRecord:
    """Per-pass snapshot of an elimination run, for property checks."""

    pass_index: int
    epsilon: float
    budget: int
    active_before: tuple[int, ...]
    estimates: tuple[float, ...] = field(repr=False)
    mu_max: float = 0.0
    active_after: tuple[int, ...] = ()


def _walk_single_arm(session: StreamSession, passes: int) -> int:
    # Degenerate one-arm stream: no gap information is needed or used.
    for p in range(passes):
        if p > 0:
            session.begin_pass()
        while (arm := session.advance()) is not END_OF_PASS:
            session.retain(arm)
            session.evict(arm)
    return 0


def stream_elimination(
    session: StreamSession,
    P: int,
    delta: float,
    delta2: float | None,
    trace: list[PassRecord] | None = None,
) -> int:
    """Multi-pass geometric eliminator; returns the surviving arm index.

    Pass p tops every active arm's cumulative pulls up to T_p (earlier pulls
    are a prefix of the same reward tape) and drops arms whose estimate falls
    more than eps_p below the pass maximum.  Exactly P + 1 passes; one arm
    handle held at a time.
    """
    n = session.n
    if n == 1 and delta2 is None:
        return _walk_single_arm(session, P + 1)
    if delta2 is None:
        raise ValueError("stream_elimination requires a known gap or lower bound")
    sched = EliminationSchedule.build(n, P, delta, delta2)
    active = [True] * n
    pulled = [0] * n
    successes = [0] * n
    estimates = [0.0] * n
    for p in range(P + 1):
        if p > 0:
            session.begin_pass()
        budget = sched.budgets[p]
        while (arm := session.advance()) is not END_OF_PASS:
            if not active[arm]:
                continue
            session.retain(arm)
            need = budget - pulled[arm]
            if need > 0:
                successes[arm] += session.pull(arm, need)
                pulled[arm] = budget
            estimates[arm] = successes[arm] / budget
            session.evict(arm)
        mu_max = -math.inf
        for i in range(n):
            if active[i] and estimates[i] > mu_max:
                mu_max = estimates[i]
        threshold = mu_max - sched.epsilons[p]
        before = tuple(i for i in range(n) if active[i]) if trace is not None else ()
        for i in range(n):
            if active[i] and estimates[i] < threshold:
                active[i] = False
        if trace is not None:
            trace.append(
                PassRecord(
                    pass_index=p,
                    epsilon=sched.epsilons[p],
                    budget=budget,
                    active_before=before,
                    estimates=tuple(estimates),
                    mu_max=mu_max,
                    active_after=tuple(i for i in range(n) if active[i]),
                )
            )
    survivors = [i for i in range(n) if active[i]]
    if len(survivors) != 1:
        raise InconclusiveError(f"{len(survivors)} arms survived the final pass")
    return survivors[0]


def stream_elimination_re(
    session: StreamSession,
    P: int,
    delta: float,
    delta2: float | None,
) -> int:
    """Bounded-statistics eliminator; retains only per-pass maxima.

    In pass p each arriving arm is re-estimated level by level (fresh pulls,
    topped up within the pass to T_0, T_1, ..., T_p) and eliminated for the
    pass as soon as a level-j estimate falls more than eps_j below the
    level-j maximum.  Arms that survive every level update the current pass
    maximum with their level-p estimate.  When a pass eliminates n - 1 arms
    the current champion is returned.
    """
    n = session.n
    if session.stats_mode != "bounded":
        raise ValueError("stream_elimination_re runs in the bounded statistics model")
    if n == 1 and delta2 is None:
        session.declare_stats(3)
        return _walk_single_arm(session, 1)
    if delta2 is None:
        raise ValueError("stream_elimination_re requires a known gap or lower bound")
    sched = EliminationSchedule.build_re(n, P, delta, delta2)
    maxima: list[float] = []  # mu-hat-max of completed passes, one word each
    champion: int | None = None
    for p in range(P + 1):
        if p > 0:
            session.begin_pass()
        # retained words: p completed maxima + running maximum + champion + counter
        session.declare_stats(p + 3)
        cur_max = -math.inf
        eliminated_count = 0
        while (arm := session.advance()) is not END_OF_PASS:
            session.retain(arm)
            pulled = 0
            successes = 0
            estimate = 0.0
            survived = True
            for j in range(p + 1):
                budget = sched.budgets[j]
                need = budget - pulled
                if need > 0:
                    successes += session.pull(arm, need)
                    pulled = budget
                estimate = successes / budget
                level_max = maxima[j] if j < p else cur_max
                if estimate < level_max - sched.epsilons[j]:
                    eliminated_count += 1
                    survived = False
                    break
            if survived and estimate > cur_max:
                cur_max = estimate
                champion = arm
            session.evict(arm)
        maxima.append(cur_max)
        if eliminated_count == n - 1:
            return champion  # type: ignore[return-value]
    raise InconclusiveError("no pass eliminated all suboptimal arms")


def single_pass_keepbest(session: StreamSession, delta: float, delta2: float | None) -> int:
    """Champion/challenger baseline: one pass, fixed pulls per arriving arm.

    Each arm gets t = ceil(8 ln(2n / delta) / delta2^2) pulls; the champion's
    empirical mean is frozen from its own t pulls.  Holds at most two arms.
    """
    n = session.n
    if n == 1 and delta2 is None:
        return _walk_single_arm(session, 1)
    if delta2 is None:
        raise ValueError("single_pass_keepbest requires a known gap or lower bound")
    value = 8.0 * math.log(2.0 * n / delta) / (delta2 * delta2)
    if not value < INT64_MAX:
        raise BudgetOverflowError(f"pull budget {value:.3g} exceeds the 64-bit counter")
    t = max(1, math.ceil(value))
    champion = -1
    champ_mean = -math.inf
    while (arm := session.advance()) is not END_OF_PASS:
        session.retain(arm)
        mean = session.pull(arm, t) / t
        if mean > champ_mean:
            if champion >= 0:
                session.evict(champion)
            champion = arm
            champ_mean = mean
        else:
            session.evict(arm)
    return champion


def doubling_gap_elimination(session: StreamSession, delta: float, pass_cap: int = 60) -> int:
    """Gap-halving eliminator; no gap knowledge needed.

    Pass r uses threshold eps_r = 2^-r / 4 and budget
    T_r = ceil(8 ln(4 n r (r+1) / delta) / eps_r^2) (the per-pass confidence
    delta / (2 r (r+1)) sums below delta over any number of passes), topping
    up cumulative pulls and eliminating below the pass maximum.  Stops when a
    single arm remains.
    """
    n = session.n
    if n == 1:
        return _walk_single_arm(session, 1)
    if pass_cap < 1:
        raise ValueError("pass_cap must be >= 1")
    active = [True] * n
    active_count = n
    pulled = [0] * n
    successes = [0] * n
    estimates = [0.0] * n
    for r in range(1, pass_cap + 1):
        if r > 1:
            session.begin_pass()
        eps = 2.0 ** (-r) / 4.0
        value = 8.0 * math.log(4.0 * n * r * (r + 1) / delta) / (eps * eps)
        if not value < INT64_MAX:
            raise BudgetOverflowError(f"pull budget {value:.3g} exceeds the 64-bit counter")
        budget = max(1, math.ceil(value))
        while (arm := session.advance()) is not END_OF_PASS:
            if not active[arm]:
                continue
            session.retain(arm)
            need = budget - pulled[arm]
            if need > 0:
                successes[arm] += session.pull(arm, need)
                pulled[arm] = budget
            estimates[arm] = successes[arm] / budget
            session.evict(arm)
        mu_max = -math.inf
        for i in range(n):
            if active[i] and estimates[i] > mu_max:
                mu_max = estimates[i]
        threshold = mu_max - eps
        for i in range(n):
            if active[i] and estimates[i] < threshold:
                active[i] = False
                active_count -= 1
        if active_count == 1:
            return next(i for i in range(n) if active[i])
    raise PassCapExceededError(f"{active_count} arms still active after {pass_cap} passes")
