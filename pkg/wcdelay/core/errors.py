"""
异常定义
每个异常携带命令行退出码，CLI 层据此映射（0 成功，2 配置错误，3 数值不收敛，4 定义域/范围错误）
"""


class WcDelayError(Exception):
    """所有业务异常的基类"""

    exit_code = 1


class ConfigError(WcDelayError):
    """配置解析或校验失败"""

    exit_code = 2


class KernelParseError(ConfigError):
    """时滞核描述字符串无法解析"""


class ConvergenceError(WcDelayError):
    """数值迭代未收敛"""

    exit_code = 3


class DomainError(WcDelayError):
    """参数超出定义域或适用范围"""

    exit_code = 4


class NoPointwiseDensityError(DomainError):
    """Dirac 核没有逐点密度"""


class KernelRangeError(DomainError):
    """超出时滞核极坐标形式的有效频率范围"""


class UnsupportedKernelError(DomainError):
    """时滞核不满足分析所需的假设（例如 μ_τ ≥ 0）"""


class PreconditionError(DomainError):
    """调用前置条件不满足"""


class UnstableWithoutDelayError(DomainError):
    """无时滞时平衡点已不稳定，临界时滞无意义"""
