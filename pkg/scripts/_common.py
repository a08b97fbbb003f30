"""Shared argument handling for the reproduction scripts."""

import argparse
from pathlib import Path

import numpy as np


def parser(description: str, default_out: str) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--out", type=Path, default=Path("runs") / default_out, help="output directory")
    ap.add_argument("--points", type=int, default=13, help="rise-time grid size")
    ap.add_argument("--tmin", type=float, default=50e-12, help="shortest rise time (s)")
    ap.add_argument("--tmax", type=float, default=5e-9, help="longest rise time (s)")
    ap.add_argument("--threads", type=int, default=1)
    return ap


def rise_times(args) -> list[float]:
    return [float(t) for t in np.geomspace(args.tmin, args.tmax, args.points)]
