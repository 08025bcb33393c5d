# 数据模式模块
