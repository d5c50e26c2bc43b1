#!/usr/bin/env python3
"""Fast development subset of the fracest suites; same as ``run_tests.py --quick``."""

import sys

from run_tests import main

if __name__ == '__main__':
    sys.exit(main(['--quick', *sys.argv[1:]]))
