"""Efficiency envelope under +/-10% errors on C_o and E_J against rise time.

CPB at n_rms = 0.5e-3 and flux qubit with a 10 MHz linewidth cap.
Writes ``fabrication.csv``.
"""

from _common import parser, rise_times
from lzphoton.io import write_csv
from lzphoton.model import CpbParams, FluxParams
from lzphoton.optimize import OptimizationProblem, fabrication_envelope, risetime_sweep


def main(argv=None):
    ap = parser(__doc__.splitlines()[0], "fabrication")
    ap.add_argument("--rel-err", type=float, default=0.10)
    args = ap.parse_args(argv)
    grid = rise_times(args)
    problems = {
        "cpb": OptimizationProblem("cpb", CpbParams(n_rms=0.5e-3), grid[0]),
        "flux": OptimizationProblem("flux", FluxParams(), grid[0], linewidth_max_hz=10e6),
    }
    rows = []
    for arch, prob in problems.items():
        for t_r, r in zip(grid, risetime_sweep(prob, grid, workers=args.threads)):
            env = fabrication_envelope(r, args.rel_err)
            rows.append((arch, t_r, env.eta_nominal, env.eta_min, env.eta_max, env.width))
    path = write_csv(args.out / "fabrication.csv", ["architecture", "t_r", "eta", "eta_min", "eta_max", "width"], rows)
    print(path)


if __name__ == "__main__":
    main()
