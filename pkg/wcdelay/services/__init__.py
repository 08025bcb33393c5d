# 业务逻辑层模块
