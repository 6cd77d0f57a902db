"""Run every Monte Carlo check and print one line per scenario.

    python scripts/run_scenarios.py [--scale 0.5] [--seed 7]

``--scale`` multiplies each scenario's default replicate count.
"""

import argparse
import time

from matmod import montecarlo as mc


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scale", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=None, help="override every scenario seed")
    args = parser.parse_args()

    failures = 0
    for name, (_, config_cls) in mc.SCENARIOS.items():
        replicates = max(1000, int(config_cls().replicates * args.scale))
        start = time.perf_counter()
        result = mc.run_scenario(name, replicates=replicates, seed=args.seed)
        print(f"{result.line()}  [{time.perf_counter() - start:.1f}s]")
        failures += not result.passed
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
