import math
from fractions import Fraction

import pytest

from fringetrees import constants as C
from fringetrees.exact import class_probabilities


def test_mu_converges_and_bound_holds():
    small = C.mu(10**4)
    big = C.mu(10**6)
    assert abs(small.value - big.value) <= small.tail_bound
    assert big.partial_sum < big.value
    assert abs(big.value - C.REFERENCE["mu"]) < 1e-8


def test_mu_term():
    assert C.mu_term(1) == 0
    assert C.mu_term(2) == pytest.approx(2 / 12)


@pytest.mark.parametrize("k", range(1, 9))
def test_p_iso_matches_class_distribution(k):
    probs = class_probabilities(k, "bst")
    for r in (1, 2):
        oracle = sum(p ** (2 ** r) for p in probs.values())
        assert C.p_iso(k, r) == pytest.approx(float(oracle), abs=1e-15)


def test_p_iso_known_values():
    assert C.p_iso(4, 1) == pytest.approx(5 / 9, abs=1e-15)
    assert C.p_iso(5, 1) == pytest.approx(7 / 18, abs=1e-15)
    assert sum(p * p for p in class_probabilities(5, "bst").values()) == Fraction(7, 18)


def test_p_iso_monotone():
    table = C.PIsoTable()
    r1 = table.row(1, 300)
    r2 = table.row(2, 300)
    assert all(r1[k + 1] <= r1[k] for k in range(1, 300))
    assert all(r2[k] <= r1[k] for k in range(1, 301))
    assert 0 < r2[300]
    with pytest.raises(ValueError):
        table.row(0, 5)


def test_nu():
    v = C.nu(10**4)
    assert abs(v.value - C.REFERENCE["nu"]) < 1e-8
    coarse = C.nu(100)
    assert 0 <= v.value - coarse.value <= coarse.tail_bound


def test_b_estimates():
    errs = [abs(C.estimate_b(K) - C.REFERENCE["b"]) for K in (50, 100, 200, 400)]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 1e-4
    val, err = C.extrapolate_b(1000)
    assert abs(val - C.REFERENCE["b"]) < max(err, 1e-9)


def test_derived_from_reference():
    rep = C.reference_report()
    for name in ("c", "c1", "c2", "c3", "c4", "c5", "c6"):
        assert abs(getattr(rep, name) - C.REFERENCE[name]) < 1e-9
    assert rep.c6 == pytest.approx(2 * math.log(4))
    assert math.isnan(rep.mu_tail_bound)


def test_derived_constant_ordering():
    rep = C.reference_report()
    # unordered bounds never exceed the ordered ones
    assert rep.c1 <= rep.c2 <= rep.c
    assert rep.c3 <= rep.c4 <= rep.c5 <= rep.c6


@pytest.mark.parametrize("kw", [dict(b=1.0), dict(mu=float("nan")), dict(gamma=float("inf"))])
def test_derived_rejects(kw):
    args = dict(gamma=0.27, mu=1.7, nu=0.38, b=2.48)
    args.update(kw)
    with pytest.raises(ValueError):
        C.derived_constants(**args)


def test_gamma_estimate():
    g, se = C.estimate_gamma(512, 200, seed=3)
    assert abs(g - C.REFERENCE["gamma"]) < 5 * se + 0.01
