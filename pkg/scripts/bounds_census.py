"""NCHV bounds for every supported geometry, plus the sign census of all 3-qubit hyperbolic quadrics."""
import argparse
import time
from collections import Counter

from qcontext.contextuality import analyze
from qcontext.geometry import build_polar_space, doily, doily_grids, hyperbolic_quadric_parameters, quadric


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--restarts", type=int, default=64, help="local-search restarts when the sweep is too large")
    ap.add_argument("--skip-quadric", action="store_true", help="skip the ~20 s exact sweep on Q0+(5,2)")
    args = ap.parse_args()

    configs = [("grid " + g.meta["p"], g) for g in doily_grids()]
    configs += [("doily", doily())]
    if not args.skip_quadric:
        configs.append(("quadric3:0", quadric(3)))
    configs.append(("w52", build_polar_space(3)))

    print(f"{'geometry':<14} {'M':>4} {'S':>4} {'P':>4} {'cert':<12} {'b_nchv':>6} {'eps':>6} {'sec':>6}")
    for name, cfg in configs:
        t0 = time.perf_counter()
        a = analyze(cfg, restarts=args.restarts)
        dt = time.perf_counter() - t0
        print(f"{name:<14} {a.M:>4} {a.S:>4} {a.P:>4} {a.P_certainty:<12} {a.b_nchv:>6} {str(a.epsilon):>6} {dt:>6.2f}")

    census = Counter(quadric(3, p).S for p in hyperbolic_quadric_parameters(3))
    print("\nQ_p+(5,2) positive-line counts:", dict(sorted(census.items())))


if __name__ == "__main__":
    main()
