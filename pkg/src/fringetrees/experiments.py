"""Monte Carlo experiments on random binary trees.

All experiments draw trial ``i`` from the stream derived from ``(seed, i)``
and reduce per-trial results in trial order, so the output does not depend on
how many worker processes ran the trials.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy import stats

from . import constants as K
from .dag import ClassFilter, all_trees, dag_sizes, fringe_profile
from .exact import (catalan, expected_occurrences_uniform, expected_z_bst,
                    variance_occurrences_uniform, variance_x_bst_asymptotic)
from .models import ModelKind, make_rng, pbst_neg_log2, sample
from .tree import sym_count

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2 * 10**9  # leaves sampled per experiment
TREND_SIZES = (2**14, 2**16, 2**18, 2**20)


class BudgetExceeded(RuntimeError):
    pass


def _cut_point_a(rule) -> float:
    if rule == "log4":
        return 1 / math.log(4)
    if rule == "log_b":
        return 1 / math.log(K.REFERENCE["b"])
    a = float(rule)
    if a <= 0:
        raise ValueError(f"cut-point factor must be positive, got {rule!r}")
    return a


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelKind = ModelKind.UNIFORM
    n: int = 1000
    trials: int = 10
    seed: int = 0
    epsilon: float = 1 / 6
    delta: float = 0.5
    cut_point_rule: str | float = "log4"
    workers: int = 1
    slack: float = 1.10
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "model", ModelKind(self.model))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        if not 0 < self.epsilon < 1 / 3:
            raise ValueError("epsilon must lie in (0, 1/3)")
        if not 0 < self.delta < 2 / 3:
            raise ValueError("delta must lie in (0, 2/3)")
        if self.slack < 1:
            raise ValueError("slack must be >= 1")
        _cut_point_a(self.cut_point_rule)
        if self.n * self.trials > self.budget:
            raise BudgetExceeded(
                f"n * trials = {self.n * self.trials} exceeds the budget of {self.budget} leaves")

    @property
    def cut_point_a(self) -> float:
        return _cut_point_a(self.cut_point_rule)


def _run_trials(fn, trials: int, workers: int) -> list:
    if workers <= 1 or trials <= 1:
        return [fn(i) for i in range(trials)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials), chunksize=max(1, trials // (4 * workers))))


def _summary(values) -> dict:
    a = np.asarray(values, dtype=np.float64)
    if a.size == 0:
        return {"mean": math.nan, "std": math.nan, "min": math.nan, "max": math.nan}
    return {"mean": float(a.mean()),
            "std": float(a.std(ddof=1)) if a.size > 1 else 0.0,
            "min": float(a.min()), "max": float(a.max())}


# counts (asymptotic bands)


def normalizer(model, n: int) -> float:
    """Multiplier turning a count into the ratio compared with the constants."""
    if n < 2:
        return 0.0
    ln = math.log(n)
    return (math.sqrt(ln) if ModelKind(model) is ModelKind.UNIFORM else ln) / n


def bands(model) -> dict:
    """Asymptotic (lower, upper) constants for the ordered and unordered counts."""
    r = K.reference_report()
    if ModelKind(model) is ModelKind.UNIFORM:
        return {"ordered": (r.c, r.c), "unordered": (r.c1, r.c2)}
    return {"ordered": (r.c5, r.c6), "unordered": (r.c3, r.c4)}


def _count_trial(model, n, seed, i):
    t = sample(model, n, make_rng(seed, i))
    h, f = dag_sizes(t)
    return h, f


@dataclass
class ExperimentRecord:
    model: ModelKind
    n: int
    seed: int
    ordered: np.ndarray
    unordered: np.ndarray
    slack: float = 1.10

    header = ("trial", "n", "ordered_count", "unordered_count", "ordered_ratio",
              "unordered_ratio")

    @property
    def trials(self) -> int:
        return len(self.ordered)

    @property
    def ordered_ratio(self) -> np.ndarray:
        return self.ordered * normalizer(self.model, self.n)

    @property
    def unordered_ratio(self) -> np.ndarray:
        return self.unordered * normalizer(self.model, self.n)

    def verdicts(self) -> dict:
        out = {}
        for name, ratios in (("ordered", self.ordered_ratio), ("unordered", self.unordered_ratio)):
            lo, hi = bands(self.model)[name]
            mean = float(np.mean(ratios)) if len(ratios) else math.nan
            out[name] = {"band": [lo, hi], "slack": self.slack,
                         "inside": bool(lo / self.slack <= mean <= hi * self.slack)}
        return out

    def pathwise_ok(self) -> bool:
        return bool(np.all(self.unordered <= self.ordered))

    def rows(self):
        for i in range(self.trials):
            yield (i, self.n, int(self.ordered[i]), int(self.unordered[i]),
                   float(self.ordered_ratio[i]), float(self.unordered_ratio[i]))

    def summary(self) -> dict:
        return {
            "kind": "counts", "model": self.model.value, "n": self.n, "seed": self.seed,
            "trials": self.trials,
            "ordered_count": _summary(self.ordered),
            "unordered_count": _summary(self.unordered),
            "ordered_ratio": _summary(self.ordered_ratio),
            "unordered_ratio": _summary(self.unordered_ratio),
            "unordered_le_ordered": self.pathwise_ok(),
            "verdict": self.verdicts(),
        }


def run_count_experiment(cfg: ExperimentConfig) -> ExperimentRecord:
    """Sample ``cfg.trials`` trees and record both DAG sizes per tree."""
    res = _run_trials(partial(_count_trial, cfg.model, cfg.n, cfg.seed), cfg.trials, cfg.workers)
    ordered = np.array([r[0] for r in res], dtype=np.int64)
    unordered = np.array([r[1] for r in res], dtype=np.int64)
    return ExperimentRecord(cfg.model, cfg.n, cfg.seed, ordered, unordered, cfg.slack)


def trend_check(model, sizes=TREND_SIZES, leaves: int = 2**25, min_trials: int = 5,
                seed: int = 0, workers: int = 1) -> dict:
    """Mean normalized ratios across growing ``n``.

    Each size gets ``max(min_trials, ceil(leaves / n))`` trials, so every
    point is averaged over about the same number of leaves.  The sequences
    are expected to move monotonically; ``monotone`` records whether each one
    does, with its direction.
    """
    out = {"model": ModelKind(model).value, "sizes": list(sizes), "trials": [],
           "ordered": [], "unordered": []}
    for j, n in enumerate(sizes):
        trials = max(min_trials, -(-leaves // n))
        rec = run_count_experiment(ExperimentConfig(model=model, n=n, trials=trials,
                                                    seed=seed + j, workers=workers))
        out["trials"].append(trials)
        out["ordered"].append(float(rec.ordered_ratio.mean()))
        out["unordered"].append(float(rec.unordered_ratio.mean()))
    for name in ("ordered", "unordered"):
        d = np.diff(out[name])
        out[f"{name}_direction"] = "down" if np.all(d < 0) else "up" if np.all(d > 0) else "mixed"
    out["monotone"] = all(out[f"{nm}_direction"] != "mixed" for nm in ("ordered", "unordered"))
    return out


# concentration


def admissible_sizes(n: int, epsilon: float, a: float) -> list[int]:
    lo = math.ceil(a * math.log(n) - 1e-12)
    hi = math.floor(n ** epsilon + 1e-12)
    return list(range(max(lo, 1), hi + 1))


@dataclass
class ConcentrationReport:
    model: ModelKind
    n: int
    epsilon: float
    sizes: list
    expected: dict          # k -> exact E(X_{n,k})
    bound: dict             # k -> allowed deviation
    counts: np.ndarray      # trials x len(sizes)
    tail_threshold: float
    tail_limit: float
    tail: np.ndarray        # per trial Y
    filter_name: str = "all"

    header = ("trial", "n", "k", "count", "expected", "bound", "violated")

    @property
    def trials(self) -> int:
        return len(self.tail)

    def violation_rate(self) -> dict:
        out = {}
        for j, k in enumerate(self.sizes):
            dev = np.abs(self.counts[:, j] - float(self.expected[k]))
            out[k] = float(np.mean(dev > self.bound[k])) if self.trials else 0.0
        return out

    def tail_ok_rate(self) -> float:
        return float(np.mean(self.tail <= self.tail_limit)) if self.trials else 1.0

    def rows(self):
        for i in range(self.trials):
            for j, k in enumerate(self.sizes):
                c = int(self.counts[i, j])
                e = float(self.expected[k])
                yield (i, self.n, k, c, e, self.bound[k], int(abs(c - e) > self.bound[k]))
            yield (i, self.n, "Y", int(self.tail[i]), "", self.tail_limit,
                   int(self.tail[i] > self.tail_limit))

    def summary(self) -> dict:
        return {
            "kind": "concentration", "model": self.model.value, "n": self.n,
            "epsilon": self.epsilon, "trials": self.trials, "filter": self.filter_name,
            "sizes": self.sizes,
            "expected": {str(k): float(v) for k, v in self.expected.items()},
            "bound": {str(k): v for k, v in self.bound.items()},
            "violation_rate": {str(k): v for k, v in self.violation_rate().items()},
            "tail_threshold": self.tail_threshold, "tail_limit": self.tail_limit,
            "tail_ok_rate": self.tail_ok_rate(),
        }


def _concentration_trial(model, n, seed, threshold, filt, sizes, i):
    t = sample(model, n, make_rng(seed, i))
    prof = fringe_profile(t, tail_threshold=threshold, filters=[filt])
    x = prof.filtered[filt.name]
    return [int(x[k]) if k <= n else 0 for k in sizes], prof.tail_count


def concentration_check(cfg: ExperimentConfig, k_range=None,
                        filt: ClassFilter | None = None) -> ConcentrationReport:
    """Violation rates of the per-size deviation bounds and the tail bound.

    For each admissible ``k`` (``a ln n <= k <= n**epsilon``) the check is
    ``|X - E X| <= w**0.5 * g(k) * n**(1/2 + epsilon)`` with ``w = s_k`` and
    ``g(k) = 2**-k`` under the uniform model, ``w = p_k`` and ``g(k) = 1/k``
    under the BST model; ``E X`` is exact.  The tail count of fringe subtrees
    with more than ``n**epsilon`` leaves is compared with
    ``n**(1 - epsilon/3)`` (uniform) or ``n**(1 - epsilon/2)`` (BST).
    """
    n, eps = cfg.n, cfg.epsilon
    allowed = admissible_sizes(n, eps, cfg.cut_point_a)
    if k_range is None:
        sizes = allowed
    else:
        sizes = sorted(set(int(k) for k in k_range))
        bad = [k for k in sizes if k not in allowed]
        if bad:
            raise ValueError(f"sizes {bad} outside the admissible range {allowed}")
    filt = filt or all_trees()
    expected, bound = {}, {}
    for k in sizes:
        w = filt.weight(k, cfg.model, seed=cfg.seed)
        if cfg.model is ModelKind.UNIFORM:
            expected[k] = expected_occurrences_uniform(n, k, int(w))
            bound[k] = math.sqrt(w) * 2.0 ** -k * n ** (0.5 + eps)
        else:
            expected[k] = expected_z_bst(n, k) * w
            bound[k] = math.sqrt(w) / k * n ** (0.5 + eps)
    threshold = n ** eps
    limit = n ** (1 - eps / 3) if cfg.model is ModelKind.UNIFORM else n ** (1 - eps / 2)
    fn = partial(_concentration_trial, cfg.model, n, cfg.seed, threshold, filt, sizes)
    res = _run_trials(fn, cfg.trials, cfg.workers)
    counts = np.array([r[0] for r in res], dtype=np.int64).reshape(len(res), len(sizes))
    tail = np.array([r[1] for r in res], dtype=np.int64)
    return ConcentrationReport(cfg.model, n, eps, sizes, expected, bound, counts,
                               threshold, limit, tail, filt.name)


# fringe-count moments at fixed size


def _size_count_trial(model, n, k, seed, i):
    t = sample(model, n, make_rng(seed, i))
    return int(np.count_nonzero(t.sizes == k))


def fringe_moments(model, n: int, k: int, trials: int, seed: int = 0, workers: int = 1) -> dict:
    """Sample mean/variance of the number of size-``k`` fringe subtrees.

    Alongside: the exact mean, the asymptotic variance reference and (uniform
    model) the exact finite-``n`` variance.
    """
    model = ModelKind(model)
    if n * trials > DEFAULT_BUDGET:
        raise BudgetExceeded(f"n * trials = {n * trials} exceeds the budget")
    xs = np.array(_run_trials(partial(_size_count_trial, model, n, k, seed), trials, workers),
                  dtype=np.float64)
    out = {"model": model.value, "n": n, "k": k, "trials": trials, "seed": seed,
           "sample_mean": float(xs.mean()), "sample_var": float(xs.var(ddof=1))}
    if model is ModelKind.UNIFORM:
        s = catalan(k - 1)
        out["exact_mean"] = float(expected_occurrences_uniform(n, k, s))
        out["exact_var"] = float(variance_occurrences_uniform(n, k, s))
        out["reference_var"] = s * 4.0 ** (1 - k) * n
    else:
        out["exact_mean"] = float(expected_z_bst(n, k))
        out["reference_var"] = variance_x_bst_asymptotic(n, k, 1.0)
    return out


# central limit diagnostics


class CltKind(str, enum.Enum):
    LOG2_AUT_UNIFORM = "log2_aut_uniform"
    LOG2_BST_WEIGHT = "log2_bst_weight"
    SYM_BST = "sym_bst"


_CLT_SETUP = {
    CltKind.LOG2_AUT_UNIFORM: (ModelKind.UNIFORM, "gamma"),
    CltKind.LOG2_BST_WEIGHT: (ModelKind.BST, "mu"),
    CltKind.SYM_BST: (ModelKind.BST, "nu"),
}


def _clt_trial(kind, k, seed, i):
    model, _ = _CLT_SETUP[kind]
    t = sample(model, k, make_rng(seed, i))
    if kind is CltKind.LOG2_BST_WEIGHT:
        return pbst_neg_log2(t)
    return float(sym_count(t))


@dataclass
class CltReport:
    kind: CltKind
    k: int
    seed: int
    values: np.ndarray
    degenerate: bool = field(init=False)

    header = ("trial", "k", "value")

    def __post_init__(self):
        self.degenerate = bool(len(self.values) < 2 or np.ptp(self.values) == 0)

    @property
    def trials(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    @property
    def variance(self) -> float:
        return float(self.values.var(ddof=1))

    @property
    def slope(self) -> float:
        return self.mean / self.k

    @property
    def target(self) -> float:
        return K.REFERENCE[_CLT_SETUP[self.kind][1]]

    @property
    def variance_per_k(self) -> float:
        return self.variance / self.k

    def standardized(self) -> np.ndarray:
        if self.degenerate:
            return np.full(self.trials, math.nan)
        return (self.values - self.mean) / math.sqrt(self.variance)

    @property
    def skewness(self) -> float:
        return math.nan if self.degenerate else float(stats.skew(self.values))

    def normality(self) -> tuple[float, float]:
        """D'Agostino-Pearson statistic and p-value of the standardized sample."""
        if self.degenerate or self.trials < 20:
            return math.nan, math.nan
        res = stats.normaltest(self.standardized())
        return float(res.statistic), float(res.pvalue)

    def rows(self):
        for i, v in enumerate(self.values):
            yield (i, self.k, float(v))

    def summary(self) -> dict:
        stat, p = self.normality()
        return {
            "kind": "clt", "statistic": self.kind.value, "k": self.k, "seed": self.seed,
            "trials": self.trials, "degenerate": self.degenerate,
            "mean": self.mean, "variance": self.variance if self.trials > 1 else math.nan,
            "variance_per_k": self.variance_per_k if self.trials > 1 else math.nan,
            "slope": self.slope, "target_slope": self.target,
            "slope_rel_error": abs(self.slope - self.target) / self.target,
            "skewness": self.skewness, "normality_statistic": stat, "normality_p": p,
        }


def clt_sample(kind, k: int, trials: int, seed: int = 0, workers: int = 1) -> CltReport:
    kind = CltKind(kind)
    if k < 1:
        raise ValueError("k must be >= 1")
    if trials < 100:
        raise ValueError("CLT diagnostics need at least 100 trials")
    vals = _run_trials(partial(_clt_trial, kind, k, seed), trials, workers)
    return CltReport(kind, k, seed, np.asarray(vals, dtype=np.float64))


# export


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return x
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return None
        return float(f"{x:.12g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, dict):
        return {str(k): _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    return x


def _csv_cell(x):
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def render(obj, fmt: str = "csv") -> str:
    """Serialize a record/report: CSV of per-trial rows or JSON summary."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(obj.header)
        for row in obj.rows():
            w.writerow([_csv_cell(c) for c in row])
        return buf.getvalue()
    if fmt == "json":
        summary = obj.summary() if hasattr(obj, "summary") else obj
        return json.dumps(_fmt(summary), indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def export(obj, path, fmt: str = "csv") -> None:
    text = render(obj, fmt)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {os.fspath(path)!r}: {exc.strerror or exc}") from exc
