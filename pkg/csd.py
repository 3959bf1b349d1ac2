"""
###############################################################################
# csd - Command line entry script
###############################################################################
# Usage:
#     python csd.py build --seed c422 --out code.json
#     python csd.py distance --code c513 --trials 1000 --seed 7
#     python csd.py reproduce
###############################################################################
"""

import sys

from tools.cli import main

if __name__ == '__main__':
    sys.exit(main())
