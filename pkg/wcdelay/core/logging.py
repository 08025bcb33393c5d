"""
日志配置
所有日志写到 stderr，带 [wcdelay] 前缀；数据输出走 stdout 或文件
"""
import logging
import sys

logger = logging.getLogger("wcdelay")


def setup_logging(debug: bool = False) -> None:
    """配置包日志器，重复调用只会替换处理器"""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[wcdelay] %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(logging.DEBUG if debug else logging.INFO)
    logger.propagate = False
