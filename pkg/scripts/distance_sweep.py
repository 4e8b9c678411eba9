#!/usr/bin/env python3
"""Best key rate for 100..3000 km at three photon error rates and two gate-time settings.

Writes one CSV per gate setting (``.gates0`` = 10 ns E/CZ gates, ``.gates1`` = 100 ns).
Expect a few minutes; pass ``--workers N`` through to parallelize.

Usage: python3 scripts/distance_sweep.py [out_dir] [extra cli flags...]
"""

import sys
from pathlib import Path

from treerepeater.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "results")
sys.exit(main(["sweep-distance", "--distances", "100:3000:100", "--budget", "100",
               "--eps-r", "1e-5,1e-4,1e-3", "--gate-sets", "10:10,100:100",
               "--out", str(out / "distance_sweep.csv"), *sys.argv[2:]]))
