#!/usr/bin/env python3
"""Monte-Carlo check of the closed-form transmission probability on all small trees.

Depth 2 and 3, branching entries in {2, 3, 4}, mu in {0.05, 0.1, 0.3, 0.5},
1e5 samples per cell.  Exit status 0 iff every cell lies within 4 sigma.

Usage: python3 scripts/mc_validation.py [out_dir]
"""

import sys
from pathlib import Path

from treerepeater.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "results")
sys.exit(main(["validate-mc", "--samples", "100000", "--out", str(out / "mc_validation.csv")]))
