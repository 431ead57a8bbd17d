class LabError(Exception):
    """实验室错误基类，exit_code 对应命令行退出码"""
    exit_code: int = 4

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ConfigError(LabError):
    exit_code = 2


class SpecViolation(ConfigError):
    """输入扩散参数与信号不相容"""


class StepOutOfRange(ConfigError):
    """步长无效"""


class JetOrderError(ConfigError):
    """请求的导数阶数超过 jet 阶数"""


class DomainCondition(LabError):
    exit_code = 3


class NoOscillation(DomainCondition):
    """没有检测到振荡"""


class NoBracket(DomainCondition):
    """求根区间不包含目标值"""


class DomainError(DomainCondition):
    """参数不在定义域内"""


class EmptyEnsemble(DomainCondition):
    """样本为空"""


class NumericalFailure(LabError):
    exit_code = 4


class StateEscape(NumericalFailure):
    """门控变量离开 (0,1)"""
