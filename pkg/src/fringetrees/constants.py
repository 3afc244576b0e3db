"""Numerical constants behind the fringe-subtree bounds.

* ``mu``: mean growth rate of ``-log2 P_bst`` for random BSTs,
  ``sum_k 2 log2(k) / ((k+1)(k+2))``.
* ``nu``: mean growth rate of the number of symmetrical nodes in random
  BSTs, ``sum_k P_k^1 / (k (2k+1)(2k-1))``, where ``P_k^r`` is the probability
  that ``2**r`` independent random BSTs with ``k`` leaves are isomorphic.
* ``b``: exponential growth rate of the Wedderburn-Etherington numbers.
* ``gamma``: mean growth rate of ``log2 |Aut|`` for uniform trees.  There is
  no series for it here; it is an input checked by simulation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .exact import wedderburn_etherington
from .models import make_rng, sample_uniform
from .tree import sym_count

LN2 = math.log(2.0)

REFERENCE = {
    "gamma": 0.2710416936,
    "mu": 1.7363771368,
    "nu": 0.3795493473,
    "b": 2.4832535362,
    "c": 1.3285649405,
    "c1": 1.0591261434,
    "c2": 1.0761505454,
    "c3": 1.5470025923,
    "c4": 1.8191392203,
    "c5": 2.4071298335,
    "c6": 2.7725887222,
    "sigma_sq_sym_bst": 0.115,
}


class SeriesValue(NamedTuple):
    value: float
    tail_bound: float
    partial_sum: float


# mu


def mu_term(k):
    k = np.asarray(k, dtype=np.float64)
    return 2.0 * np.log2(k) / ((k + 1.0) * (k + 2.0))


def mu(K: int = 10**7, chunk: int = 1 << 20) -> SeriesValue:
    """Partial sum to ``K`` plus a midpoint-integral estimate of the tail.

    ``tail_bound`` certifies the remainder: for ``x >= 2`` the summand is below
    ``2 log2(x) / x**2``, which is decreasing, so the tail is at most
    ``int_K^inf 2 log2(x)/x**2 dx = 2 (log2 K + 1/ln 2) / K``; the bound
    reported, ``2 (log2 K + 2/ln 2) / K``, is looser still.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    parts = []
    for lo in range(1, K + 1, chunk):
        ks = np.arange(lo, min(lo + chunk, K + 1), dtype=np.float64)
        parts.append(float(mu_term(ks).sum()))
    partial = math.fsum(parts)
    bound = 2.0 * (math.log2(K) + 2.0 / LN2) / K
    # midpoint rule: sum_{k>K} f(k) ~ int_{K+1/2}^inf f, error O(f'(K));
    # x = a/t maps the tail onto (0, 1] with only a log singularity at 0
    a = K + 0.5

    def integrand(t):
        x = a / t
        return 2.0 * math.log2(x) / ((x + 1.0) * (x + 2.0)) * a / (t * t)

    tail, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-16, epsrel=1e-13, limit=200)
    return SeriesValue(partial + tail, bound, partial)


# P_k^r and nu


class PIsoTable:
    """Memo of ``P_k^r`` for ``k <= kmax``, one array per ``r``.

    The recurrence conditions on the root split: sizes ``(i, k-i)`` with
    ``i < k/2`` are hit by all ``2**r`` trees with probability
    ``(2/(k-1))**(2**r)``; the balanced split ``k/2`` needs the two halves of
    every tree to match those of the first one in some order, with a
    correction when the two halves are themselves isomorphic (this is where
    ``P_{k/2}^{r+1}`` enters).
    """

    def __init__(self):
        self._rows: dict[int, np.ndarray] = {}

    def row(self, r: int, kmax: int) -> np.ndarray:
        """``P_k^r`` for ``k = 0..kmax`` (index 0 unused, set to 1)."""
        if r < 1:
            raise ValueError("r must be >= 1")
        have = self._rows.get(r)
        if have is not None and len(have) > kmax:
            return have
        p = np.ones(max(kmax, 3) + 1)
        if kmax >= 4:
            upper = self.row(r + 1, kmax // 2)
            e = 2.0 ** r
            for k in range(4, kmax + 1):
                h = (k - 1) // 2
                conv = float(np.dot(p[1:h + 1], p[k - 1:k - h - 1:-1]))
                lead = (2.0 / (k - 1)) ** e
                val = lead * conv
                if k % 2 == 0:
                    q = p[k // 2]
                    q_up = upper[k // 2]
                    # (1/(k-1))^e * (2^(e-1) q^2 - (2^(e-1) - 1) q_up), rearranged
                    # so that 2^(e-1) never overflows
                    val += 0.5 * lead * (q * q - q_up) + (1.0 / (k - 1)) ** e * q_up
                p[k] = val
        self._rows[r] = p
        return p

    def __call__(self, k: int, r: int) -> float:
        if k < 1:
            raise ValueError("k must be >= 1")
        return float(self.row(r, k)[k])


def p_iso(k: int, r: int = 1, table: PIsoTable | None = None) -> float:
    """Probability that ``2**r`` independent random BSTs of size ``k`` are isomorphic."""
    return (table or PIsoTable())(k, r)


def nu_term(k, p):
    k = np.asarray(k, dtype=np.float64)
    return p / (k * (2 * k + 1) * (2 * k - 1))


def nu(K: int = 10**4, table: PIsoTable | None = None) -> SeriesValue:
    """Partial sum to ``K``; the tail is at most ``1/(8 K**2)`` since ``P <= 1``.

    The summand with ``P = 1`` is convex, so the tail sum is below
    ``int_{K+1/2}^inf dx / (x (4x**2 - 1))``, which is under ``1/(8 K**2)``.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    table = table or PIsoTable()
    p = table.row(1, K)[1:K + 1]
    ks = np.arange(1, K + 1)
    partial = math.fsum(nu_term(ks, p))
    return SeriesValue(partial, 1.0 / (8.0 * K * K), partial)


# b


def estimate_b(K: int = 500) -> float:
    """Ratio estimate ``(W_{K+1}/W_K) ((K+1)/K)**1.5``; error is about ``1.6/K**2``."""
    if K < 10:
        raise ValueError("K must be >= 10")
    ratio = wedderburn_etherington(K + 1) / wedderburn_etherington(K)
    return ratio * ((K + 1) / K) ** 1.5


def extrapolate_b(K: int = 1000) -> tuple[float, float]:
    """Richardson step on :func:`estimate_b` (``K`` and ``2K``) with an error estimate."""
    hi = (4 * estimate_b(2 * K) - estimate_b(K)) / 3
    lo = (4 * estimate_b(K) - estimate_b(K // 2)) / 3
    return hi, abs(hi - lo)


# gamma


def estimate_gamma(k: int, trials: int, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo mean of ``sym(T)/k`` over uniform trees, with its standard error."""
    if k < 2 or trials < 1:
        raise ValueError("need k >= 2 and trials >= 1")
    vals = np.array([sym_count(sample_uniform(k, make_rng(seed, i))) / k
                     for i in range(trials)])
    se = float(vals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.nan
    if trials > 1 and np.all(vals == vals[0]):
        se = 0.0
    return float(vals.mean()), se


# derived constants


@dataclass(frozen=True)
class ConstantsReport:
    gamma: float
    mu: float
    nu: float
    b: float
    c: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    mu_tail_bound: float = math.nan
    nu_tail_bound: float = math.nan
    b_error: float = math.nan

    def as_dict(self) -> dict:
        return asdict(self)


def derived_constants(gamma: float, mu: float, nu: float, b: float, **errors) -> ConstantsReport:
    for name, v in (("gamma", gamma), ("mu", mu), ("nu", nu), ("b", b)):
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite")
    if b <= 1:
        raise ValueError("b must exceed 1")
    return ConstantsReport(
        gamma=gamma, mu=mu, nu=nu, b=b,
        c=2 * math.sqrt(math.log(4) / math.pi),
        c1=2 * math.sqrt((1 + gamma) * LN2 / math.pi),
        c2=2 * math.sqrt(math.log(b) / math.pi),
        c3=2 * (mu + nu - 1) * LN2,
        c4=2 * math.log(b),
        c5=2 * mu * LN2,
        c6=2 * math.log(4),
        **errors,
    )


def reference_report() -> ConstantsReport:
    r = REFERENCE
    return derived_constants(r["gamma"], r["mu"], r["nu"], r["b"])


def compute_report(mu_terms: int = 10**7, nu_terms: int = 10**4,
                   b_terms: int = 1000) -> ConstantsReport:
    """Report from freshly computed ``mu``, ``nu`` and ``b``; ``gamma`` is the reference value."""
    m = mu(mu_terms)
    v = nu(nu_terms)
    bv, berr = extrapolate_b(b_terms)
    return derived_constants(REFERENCE["gamma"], m.value, v.value, bv,
                             mu_tail_bound=m.tail_bound, nu_tail_bound=v.tail_bound,
                             b_error=berr)
