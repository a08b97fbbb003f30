"""Optimal flux-qubit efficiency against rise time for several linewidth caps.

Writes ``flux_optimum.csv`` with the optimal (C_o, E_J), T1 and linewidth.
"""

from _common import parser, rise_times
from lzphoton.io import write_csv
from lzphoton.model import FluxParams
from lzphoton.optimize import OptimizationProblem, risetime_sweep


def main(argv=None):
    ap = parser(__doc__.splitlines()[0], "flux_optimum")
    ap.add_argument("--caps", type=float, nargs="+", default=[5e6, 10e6, 50e6], help="linewidth caps (Hz)")
    args = ap.parse_args(argv)
    grid = rise_times(args)
    rows = []
    for lm in args.caps:
        prob = OptimizationProblem("flux", FluxParams(), grid[0], linewidth_max_hz=lm)
        for t_r, r in zip(grid, risetime_sweep(prob, grid, workers=args.threads)):
            if not r.feasible:
                rows.append((lm, t_r, r.status) + (float("nan"),) * 6)
                continue
            rep = r.report
            rows.append((lm, t_r, r.status, r.params.co, r.params.ej_hz, rep.eta, rep.t1,
                         rep.gamma2 / (2 * 3.141592653589793), rep.rep_rate_hz))
    path = write_csv(args.out / "flux_optimum.csv",
                     ["linewidth_max_hz", "t_r", "status", "co", "ej_hz", "eta", "t1", "gamma2_hz", "rep_rate_hz"], rows)
    print(path)


if __name__ == "__main__":
    main()
