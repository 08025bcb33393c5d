# wcdelay 分布时滞 Wilson-Cowan 系统稳定性与分岔分析
__version__ = "1.0.0"
