"""Simulate the 15 doily contexts and print a per-context table with the chi summary."""
import argparse

from qcontext.contextuality import analyze
from qcontext.geometry import doily
from qcontext.simulator import DEFAULT_NOISE, NoiseModel, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shots", type=int, default=8192)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--p1", type=float, default=DEFAULT_NOISE.p1)
    ap.add_argument("--p2", type=float, default=DEFAULT_NOISE.p2)
    ap.add_argument("--ro", type=float, default=DEFAULT_NOISE.p_ro)
    ap.add_argument("--input", choices=("zero", "random"), default="zero")
    args = ap.parse_args()

    config = doily()
    analysis = analyze(config)
    noise = NoiseModel(args.p1, args.p2, args.ro)
    rep = run_experiment(config, args.input, args.shots, noise, args.seed, analysis)

    print(f"{'context':<10} {'sign':>4} {'#1':>6} {'#-1':>6} {'mean':>8} {'std':>7}")
    for r in rep.rows:
        print(f"{r.context:<10} {r.sign:>4} {r.count_plus:>6} {r.count_minus:>6} {r.mean:>8.4f} {r.std:>7.4f}")
    s = rep.summary
    print(f"\nchi = {s.chi:.4f} +- {s.sigma_chi:.4f}   b_nchv = {s.b_nchv}   b_qm = {s.b_qm}")
    v = s.violation_sigmas
    print(f"violation = {v if isinstance(v, str) else f'{v:.1f} sigma'}")


if __name__ == "__main__":
    main()
