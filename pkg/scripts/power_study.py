"""Power of the four root functionals in a one-way layout as the group shift grows.

    python scripts/power_study.py --groups 5 5 5 --p 2 --replicates 4000

The alternative moves the last group's mean along a fixed direction by
``delta`` (in units of the unit covariance); one row of rejection rates per
``delta``.
"""

import argparse

import numpy as np

from matmod import hypothesis as ht
from matmod.arrays import Array
from matmod.linear_models import one_way_layout
from matmod.montecarlo import power
from matmod.submodules import Submodule


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--groups", type=int, nargs="+", default=[5, 5, 5])
    parser.add_argument("--p", type=int, default=2)
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--replicates", type=int, default=4000)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--deltas", type=float, nargs="+", default=[0.0, 0.5, 1.0, 1.5, 2.0, 3.0])
    args = parser.parse_args()

    model = one_way_layout(args.groups)
    spec = ht.HypothesisSpec(model.l, Submodule.mean(model.n))
    direction = np.ones(args.p) / np.sqrt(args.p)
    last = np.zeros(model.n)
    last[-args.groups[-1]:] = 1.0

    print("delta\t" + "\t".join(ht.STATISTICS))
    for delta in args.deltas:
        mean = Array(np.outer(direction * delta, last))
        rates = power(spec, args.p, mean, alpha=args.alpha, replicates=args.replicates, seed=args.seed)
        print(f"{delta:g}\t" + "\t".join(f"{rates[s]:.3f}" for s in ht.STATISTICS))


if __name__ == "__main__":
    main()
