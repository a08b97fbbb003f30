"""Optimal CPB efficiency, T1 and output capacitance against rise time.

Two charge-noise levels, fixed device otherwise.  Writes ``cpb_optimum.csv``.
"""

from dataclasses import replace

from _common import parser, rise_times
from lzphoton.io import write_csv
from lzphoton.model import CpbParams
from lzphoton.optimize import OptimizationProblem, risetime_sweep


def main(argv=None):
    args = parser(__doc__.splitlines()[0], "cpb_optimum").parse_args(argv)
    grid = rise_times(args)
    rows = []
    for n_rms in (0.5e-3, 0.05e-3):
        prob = OptimizationProblem("cpb", CpbParams(n_rms=n_rms), grid[0])
        for t_r, r in zip(grid, risetime_sweep(replace(prob), grid, workers=args.threads)):
            rep = r.report
            rows.append((n_rms, t_r, r.status, r.params.co, rep.eta, rep.p_ex, rep.t1, rep.fwhm_hz, rep.rep_rate_hz))
    path = write_csv(args.out / "cpb_optimum.csv",
                     ["n_rms", "t_r", "status", "co", "eta", "p_ex", "t1", "fwhm_hz", "rep_rate_hz"], rows)
    print(path)


if __name__ == "__main__":
    main()
