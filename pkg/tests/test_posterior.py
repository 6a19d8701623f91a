import math

import numpy as np
import pytest
from scipy import integrate

from mobvpa import (
    BivariateSample,
    DomainError,
    GammaHyper,
    GibbsConfig,
    Partition,
    ReferencePrior,
    log_conditional,
    log_full_posterior_gamma,
    loglik,
    partition,
    run_chain,
    sample,
)

HYPER = GammaHyper()


def test_flat_prior_reduction():
    pt = partition(sample((0.1, 0.2, 0.4), 300, seed=1))
    flat = GammaHyper(1, 1, 1, 1e12, 1e12, 1e12)
    p = (0.2, 0.3, 0.5)
    diff = log_full_posterior_gamma(p, pt, flat) - loglik(p, pt)
    assert abs(diff) < 1e-9 * sum(p)


def test_hand_sum_single_pair():
    pt = partition(BivariateSample([(0.5, 2.0)]))
    p = (1.0, 1.0, 1.0)
    expected = loglik(p, pt) + (0 - 1 / 3) + (0 - 1 / 3) + (0 - 1 / 2)
    assert log_full_posterior_gamma(p, pt, HYPER) == pytest.approx(expected, abs=1e-14)


def test_prior_part_independent_of_data():
    p = (0.3, 0.7, 1.1)
    parts = []
    for seed in range(3):
        pt = partition(sample((1, 2, 3), 100, seed=seed))
        parts.append(log_full_posterior_gamma(p, pt, HYPER) - loglik(p, pt))
    assert parts[0] == pytest.approx(parts[1], abs=1e-12) == pytest.approx(parts[2], abs=1e-12)


def test_nonpositive_rejected():
    with pytest.raises(DomainError):
        log_full_posterior_gamma((0, 1, 1), Partition(n0=1), HYPER)
    with pytest.raises(DomainError):
        log_conditional(2, (1, 1, -1), Partition(n0=1), HYPER)


@pytest.mark.parametrize("which", [0, 1, 2])
def test_conditional_differences_match_joint(which):
    rng = np.random.default_rng(which)
    pt = partition(sample((0.1, 0.2, 0.4), 500, seed=2))
    base = [0.15, 0.25, 0.35]
    for _ in range(20):
        a, b = rng.uniform(0.01, 2.0, 2)
        pa = list(base)
        pb = list(base)
        pa[which], pb[which] = a, b
        lhs = log_conditional(which, pa, pt, HYPER) - log_conditional(which, pb, pt, HYPER)
        rhs = log_full_posterior_gamma(pa, pt, HYPER) - log_full_posterior_gamma(pb, pt, HYPER)
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_alpha0_conditional_closed_form():
    # Written out by hand: the terms of the log posterior that involve alpha0.
    pt = partition(sample((0.1, 0.2, 0.4), 400, seed=3))
    a1, a2 = 0.2, 0.4
    h = HYPER

    def closed_form(a0):
        return (
            pt.n0 * math.log(a0) + pt.n2 * math.log(a0 + a1) + pt.n1 * math.log(a0 + a2)
            - a0 * (pt.s0 + pt.s1b + pt.s2a) + (h.k0 - 1) * math.log(a0) - a0 / h.t0
        )

    offsets = [log_conditional(0, (a0, a1, a2), pt, h) - closed_form(a0) for a0 in (0.05, 0.1, 0.5, 2.0)]
    assert np.ptp(offsets) < 1e-9


def test_reference_variant_composition():
    pt = Partition(n0=1, n1=1, n2=1, s0=math.log(2), s1a=0.0, s1b=math.log(3), s2a=math.log(4), s2b=math.log(2))
    p = (1.0, 1.0, 1.0)
    assert log_conditional(0, p, pt, ReferencePrior()) == pytest.approx(loglik(p, pt) + 0.2027, abs=1e-4)


def test_gamma_conditional_tends_to_flat():
    pt = partition(sample((0.1, 0.2, 0.4), 200, seed=4))
    p = (0.1, 0.2, 0.4)
    for theta in (1e2, 1e4, 1e6):
        h = GammaHyper(1, 1, 1, theta, theta, theta)
        for which in range(3):
            diff = loglik(p, pt) - log_conditional(which, p, pt, h)
            assert diff == pytest.approx(p[which] / theta, rel=1e-6, abs=1e-12)


@pytest.mark.parametrize("prior", [HYPER, ReferencePrior()], ids=["gamma", "reference"])
@pytest.mark.parametrize("which", [0, 1, 2])
def test_conditional_integrable(prior, which):
    pt = partition(sample((0.1, 0.2, 0.4), 300, seed=5))
    p = [0.1, 0.2, 0.4]
    peak = log_conditional(which, p, pt, prior)

    def f(x):
        q = list(p)
        q[which] = x
        return math.exp(log_conditional(which, q, pt, prior) - peak)

    total, err = integrate.quad(f, 0, np.inf, limit=200, points=None)
    assert math.isfinite(total) and total > 0
    assert err < 1e-6 * total


def test_conjugate_alpha1_conditional():
    # Without x1 > x2 pairs, alpha1 is a posteriori Gamma(n1 + k1, rate D1 + 1/theta1)
    # and independent of the other two parameters.
    full = sample((0.1, 0.2, 0.4), 1500, seed=6)
    keep = full.pairs[full.x1 <= full.x2]
    pt = partition(BivariateSample(keep))
    assert pt.n2 == 0
    h = HYPER
    shape = pt.n1 + h.k1
    rate = pt.exposures[1] + 1 / h.t1
    iid = np.random.default_rng(7).gamma(shape, 1 / rate, 2000)
    chain = run_chain(pt, h, GibbsConfig(burn_in=200, draws=2000, seed=8))
    assert chain.samples[:, 1].mean() == pytest.approx(shape / rate, rel=0.02)
    assert chain.samples[:, 1].mean() == pytest.approx(iid.mean(), rel=0.02)
