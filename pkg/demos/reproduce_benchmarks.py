"""Reproduction harness for the three benchmark datasets (German Credit,
Adult, Heritage Health). The datasets are not bundled; prepare them yourself:

1. Obtain each dataset from its public source and encode it (discretize or
   median-binarize numeric attributes, 1-hot the categoricals) into a feature
   CSV with numeric columns plus ``y`` and ``group`` (0/1, group 1 = protected:
   women for German/Adult, age >= 60 for Health).
2. Score it with 5-fold cross-validated logistic regression:
       rashomon estimate --features german_features.csv --output german.csv
3. Point this script at the scored files:
       python demos/reproduce_benchmarks.py --german german.csv \
              --adult adult.csv --health health.csv

Reference behavior checked per dataset (tolerances as documented):
  - German: PPR-optimal disparity reaches 0 at some eps < 0.005
  - population flip fraction of uniform samples at eps=0.02 within 2 points
    of 12% (German), 7% (Adult), 5% (Health)
  - reported alongside: B(eps) and log10 set size at eps in {0.005, 0.02}

Full sweeps over N up to ~184k records and 20 eps values with 10k Gibbs
iterations run for hours; this script does single-eps spot checks by default.
"""

import argparse
import sys

import numpy as np

from rashomon import GibbsConfig, RashomonQuery, gibbs_sample_array, optimize_ppr, rashomon_base
from rashomon.cli import ingest

FLIP_FRACTION_AT_002 = {"german": 0.12, "adult": 0.07, "health": 0.05}


def check(label: str, ok: bool, detail: str) -> bool:
    print(f"  [{'ok' if ok else 'MISMATCH'}] {label}: {detail}")
    return ok


def examine(name: str, path: str, seed: int) -> bool:
    print(f"\n=== {name} ({path}) ===")
    ds = ingest(path)
    print(f"  N={ds.n}, mean weight {ds.mean_weight:.3f}, "
          f"group 1 share {np.mean(ds.group == 1):.1%}")
    all_ok = True

    if name == "german":
        found = None
        for eps in (0.001, 0.002, 0.003, 0.004, 0.0045):
            if optimize_ppr(RashomonQuery(ds, eps)).final_disparity < 1e-9:
                found = eps
                break
        all_ok &= check("PPR disparity eradicated below eps=0.005", found is not None,
                        f"zero first reached at eps={found}")

    eps = 0.02
    samples = gibbs_sample_array(RashomonQuery(ds, eps), GibbsConfig(seed=seed))
    flip_fraction = float(samples.mean())
    target = FLIP_FRACTION_AT_002[name]
    all_ok &= check(f"flip fraction at eps={eps}",
                    abs(flip_fraction - target) <= 0.02,
                    f"{flip_fraction:.3f} vs reference {target:.2f} (+-0.02)")

    for e in (0.005, 0.02):
        curve = rashomon_base(ds.weights, e, grid_points=128)
        print(f"  B({e}) = {float(curve.base[-1]):.4f}, "
              f"log10 |R_N| = {float(curve.log10_size[-1]):.1f}")
    return all_ok


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    for name in ("german", "adult", "health"):
        parser.add_argument(f"--{name}", help=f"scored CSV for {name} (p,group[,y])")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    supplied = [(n, getattr(args, n)) for n in ("german", "adult", "health")
                if getattr(args, n)]
    if not supplied:
        parser.print_help()
        print("\nno datasets supplied; nothing to do", file=sys.stderr)
        return 2

    all_ok = all([examine(name, path, args.seed) for name, path in supplied])
    print(f"\n{'all reference checks reproduced' if all_ok else 'some checks mismatched'}")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
