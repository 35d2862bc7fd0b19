#!/usr/bin/env python3
"""
Main entry point for the xbow command line
"""

import sys
from xbow.cli.main import main

if __name__ == '__main__':
    sys.exit(main())
