"""Regenerate tests/data/cpb_eight_level_golden.json with the test-local Magnus oracle.

The reference value is produced without the package propagator so that the
CLI golden test compares two independent integrators.
"""

import json
import sys
from pathlib import Path

import numpy as np
import yaml

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracles import cpb_matrix, magnus4  # noqa: E402


def main(n_steps: int = 16000) -> None:
    cfg = yaml.safe_load((ROOT / "tests/data/cpb_eight_level.yaml").read_text())
    dev, basis, pulse = cfg["device"], cfg["basis"], cfg["pulse"]
    ej, eq = float(dev["ej_hz"]), float(dev["eq_hz"])
    a, b, t_r = float(pulse["start"]), float(pulse["end"]), float(pulse["t_r"])

    def h(t):
        return cpb_matrix(ej, eq, basis["n_min"], basis["n_max"], a + (b - a) * t / t_r)

    psi0 = np.linalg.eigh(h(0.0))[1][:, 0]
    results = {}
    for n in (n_steps // 2, n_steps):
        psi = magnus4(h, 0.0, t_r, psi0, n)
        v = np.linalg.eigh(h(t_r))[1]
        results[n] = float(abs(np.vdot(v[:, 1], psi)) ** 2)
    golden = {
        "p_excited_final": results[n_steps],
        "step_halving_change": abs(results[n_steps] - results[n_steps // 2]),
        "method": "commutator-free Magnus, 4th order",
        "n_steps": n_steps,
    }
    out = ROOT / "tests/data/cpb_eight_level_golden.json"
    out.write_text(json.dumps(golden, indent=2) + "\n")
    print(out, golden)


if __name__ == "__main__":
    main()
