"""
测试公共夹具：对称耦合模型、平衡点与各类时滞核
"""
import pytest

from wcdelay.schemas.kernel import DiracKernel, GammaKernel, UniformKernel
from wcdelay.schemas.model import ModelConfig
from wcdelay.services.model import find_equilibria

# 对称耦合模型的已知结果
U_STAR, V_STAR = 0.0660694, 0.076733
ALPHA, BETA = -31.8118, 188.846
TAU_DIRAC, TAU_GAMMA2 = 0.0674893, 0.202917

SECTION3 = {"a": -6.0, "b": 3.0, "c": 3.0, "d": -6.0, "theta_u": 0.1, "theta_v": 0.2, "delta": 40.0}


@pytest.fixture
def section3_config() -> ModelConfig:
    return ModelConfig(**SECTION3)


@pytest.fixture
def params(section3_config):
    return section3_config.params


@pytest.fixture
def act(section3_config):
    return section3_config.activation


@pytest.fixture
def equilibrium(params, act):
    equilibria = find_equilibria(params, act)
    return min(equilibria, key=lambda eq: abs(eq.u_star - U_STAR) + abs(eq.v_star - V_STAR))


@pytest.fixture
def dirac():
    return DiracKernel()


@pytest.fixture
def weak_gamma():
    return GammaKernel(p=1)


@pytest.fixture
def strong_gamma():
    return GammaKernel(p=2)


@pytest.fixture
def uniform_half():
    return UniformKernel(eps=0.5)
