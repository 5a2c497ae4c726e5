"""
python -m liederiv

Library 說明：
- sys.exit() 把 main() 的返回值當作行程的結束碼（0、1、2、3）
"""
import sys

from .cli import main

sys.exit(main())
