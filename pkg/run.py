#!/usr/bin/env python3
"""
wcdelay 启动脚本
等价于安装后的 wcdelay 命令
"""
import sys

from wcdelay.cli import main


if __name__ == "__main__":
    sys.exit(main())
