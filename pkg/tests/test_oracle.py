"""
几何分类与特征根检验的交叉验证
"""
import numpy as np
import pytest

from wcdelay.core.errors import DomainError
from wcdelay.schemas.kernel import DiracKernel, GammaKernel, UniformKernel
from wcdelay.schemas.stability import Verdict
from wcdelay.services.oracle import (
    characteristic_function,
    dirac_rhp_zero_count,
    gamma_characteristic_roots,
    gamma_rightmost_real_part,
    nondelayed_stable,
    root_stable,
)
from wcdelay.services.stability import classify, classify_nondelayed


def test_nondelayed_agrees_with_trace_determinant():
    rng = np.random.default_rng(1)
    for alpha, beta in rng.uniform(-5, 5, size=(200, 2)):
        result = classify_nondelayed(alpha, beta)
        if result.verdict is not Verdict.MARGINAL:
            assert nondelayed_stable(alpha, beta) == (result.verdict is Verdict.STABLE)


def test_gamma_roots_solve_characteristic_equation():
    roots = gamma_characteristic_roots(2, 0.8, -5.0, 10.0)
    assert roots.size == 6
    values = characteristic_function(GammaKernel(p=2), 0.8, -5.0, 10.0, roots)
    assert np.max(np.abs(values)) < 1e-6


def test_gamma_rightmost_root():
    assert gamma_rightmost_real_part(1, 0.1, 0.0, 0.0) == pytest.approx(-1.0, abs=1e-6)
    assert gamma_rightmost_real_part(2, 1.0, 3.0, 1.0) > 0


def test_dirac_zero_count():
    assert dirac_rhp_zero_count(1.0, 0.0, 0.0) == 0
    assert dirac_rhp_zero_count(1.0, 2.5, 0.0) == 1
    count = dirac_rhp_zero_count(1.0, -6.0, 20.0)
    assert count >= 2 and count % 2 == 0


def test_uniform_has_no_root_oracle():
    with pytest.raises(DomainError):
        root_stable(UniformKernel(eps=0.5), 1.0, 0.0, 0.0)


def _agree(kernel, samples, margin=1e-3):
    checked = 0
    for tau, alpha, beta in samples:
        result = classify(kernel, tau, alpha, beta)
        if result.distance_to_boundary < margin:
            continue
        assert root_stable(kernel, tau, alpha, beta) == (result.verdict is Verdict.STABLE), (tau, alpha, beta)
        checked += 1
    return checked


@pytest.mark.slow
@pytest.mark.parametrize("p", [1, 2, 3])
def test_gamma_classification_matches_roots(p):
    rng = np.random.default_rng(100 + p)
    samples = np.column_stack([
        10 ** rng.uniform(-2, 1, 200),
        rng.uniform(-40, 3, 200),
        rng.uniform(-10, 250, 200),
    ])
    assert _agree(GammaKernel(p=p), samples) > 150


@pytest.mark.slow
def test_dirac_classification_matches_argument_principle():
    rng = np.random.default_rng(42)
    samples = np.column_stack([
        10 ** rng.uniform(-2, 0.5, 100),
        rng.uniform(-30, 3, 100),
        rng.uniform(-10, 150, 100),
    ])
    assert _agree(DiracKernel(), samples) > 70
