#!/usr/bin/env python3
"""Best key rate at 1000 km for emitter budgets 10..200 (table hardware, 1 km minimum spacing).

Usage: python3 scripts/emitter_sweep.py [out_dir]
"""

import sys
from pathlib import Path

from treerepeater.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "results")
sys.exit(main(["sweep-emitters", "--distance", "1000", "--budgets", "10:200:10",
               "--out", str(out / "emitter_sweep_1000km.csv")]))
