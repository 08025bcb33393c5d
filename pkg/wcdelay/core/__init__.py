# 核心模块：异常与日志
