"""Population leaking out of the qubit subspace of the 8-level CPB.

Writes ``leakage_vs_risetime.csv`` for the four shapes over n_g 0.1 -> 0.9
and ``leakage_vs_range.csv`` for a 1 ns linear rise over n_g_min -> 1 - n_g_min.
"""

import numpy as np

from lzphoton.dynamics import leakage_scan
from lzphoton.io import write_csv
from lzphoton.model import ChargeBasis, CpbParams

from _common import parser, rise_times

SHAPES = ("linear", "gaussian", "tanh", "exponential")
HEADER = ["shape", "t_r", "ng_min", "leakage", "p_excited", "error"]


def rows_of(points):
    return [(q.shape, q.t_r, q.ng_min, q.leakage, q.p_excited, q.error) for q in points]


def main(argv=None):
    ap = parser(__doc__.splitlines()[0], "leakage")
    ap.set_defaults(tmin=1e-12, points=25)
    args = ap.parse_args(argv)
    p, basis = CpbParams.from_energies(1e9, 19.27e9), ChargeBasis(-3, 4)
    rows = []
    for s in SHAPES:
        rows += rows_of(leakage_scan(p, basis, s, rise_times(args), 0.1, workers=args.threads))
    print(write_csv(args.out / "leakage_vs_risetime.csv", HEADER, rows))
    ranges = [float(x) for x in np.linspace(0.0, 0.4, 17)]
    rows = rows_of(leakage_scan(p, basis, "linear", 1e-9, ranges, workers=args.threads))
    print(write_csv(args.out / "leakage_vs_range.csv", HEADER, rows))


if __name__ == "__main__":
    main()
