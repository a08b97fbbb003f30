"""Excitation probability of the 8-level CPB for four rise shapes.

Writes ``shapes.csv`` against the nominal rise time and ``collapse.csv``
against the effective rise time, where the curves should coincide.
"""

from lzphoton.dynamics import cpb_ng_segment, simulate_cpb_rise
from lzphoton.io import write_csv
from lzphoton.model import ChargeBasis, CpbParams
from lzphoton.pulses import effective_rise_time

from _common import parser, rise_times

SHAPES = ("linear", "gaussian", "tanh", "exponential")


def main(argv=None):
    ap = parser(__doc__.splitlines()[0], "rise_shapes")
    ap.set_defaults(tmin=1e-12, points=25)
    args = ap.parse_args(argv)
    p, basis = CpbParams.from_energies(1e9, 19.27e9), ChargeBasis(-3, 4)
    ratio = {s: effective_rise_time(cpb_ng_segment(s, 0.1, 0.9, 1.0)) for s in SHAPES}
    grid = rise_times(args)
    rows = []
    for s in SHAPES:
        for t_r in grid:
            res = simulate_cpb_rise(p, basis, s, 0.1, 0.9, t_r)
            rows.append((s, t_r, t_r * ratio[s], res.p_excited_final, res.p_ground_final))
    print(write_csv(args.out / "shapes.csv", ["shape", "t_r", "t_r_eff", "p_excited", "p_ground"], rows))
    rows = []
    for t_eff in grid:
        ps = [simulate_cpb_rise(p, basis, s, 0.1, 0.9, t_eff / ratio[s]).p_excited_final for s in SHAPES]
        rows.append((t_eff, *ps, max(ps) - min(ps)))
    print(write_csv(args.out / "collapse.csv", ["t_r_eff", *SHAPES, "spread"], rows))


if __name__ == "__main__":
    main()
