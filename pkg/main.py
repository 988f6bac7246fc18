"""
main.py — Entry point to run the trigonal knot degree toolkit
"""

import sys

from trigonal_knots.ui.cli import main

if __name__ == "__main__":
    # Equivalent to running: trigonal-knots <subcommand> ...
    sys.exit(main())
