"""How big is the set, and how much of the error budget do its members spend?

|R_N(eps)| grows like B(eps)^N; B is computed by integrating C and compared
against the closed-form ceiling exp(pi sqrt(eps/3)) that holds for uniformly
distributed weights. The second half samples the set and shows that members
overwhelmingly sit at the edge of the tolerance: the budget you grant is the
budget that gets spent.
"""

import numpy as np

from rashomon import (
    Dataset,
    GibbsConfig,
    RashomonQuery,
    gibbs_sample_array,
    rashomon_base,
    uniform_closed_forms,
)
from rashomon.oracle import enumerate_rashomon


def main():
    rng = np.random.default_rng(21)
    n = 1000
    # probabilities clustered near the decision boundary: low weights, big sets
    ds = Dataset(rng.beta(4.0, 4.0, n), rng.integers(0, 2, n))

    print(f"N = {n}; mean weight {ds.mean_weight:.3f}")
    print("\n eps      B(eps)    log10 |R|   uniform-weight reference B")
    for eps in (0.001, 0.005, 0.01, 0.02):
        curve = rashomon_base(ds.weights, eps, grid_points=128)
        b = float(curve.base[-1])
        print(f" {eps:<8g} {b:<9.4f} {curve.log10_size[-1]:<11.1f} "
              f"{uniform_closed_forms(eps)[1]:.4f}")
    print("(low-confidence datasets outgrow the uniform-weight reference;\n"
          " raising eps from 0.005 to 0.02 multiplies the count by "
          "dozens of orders of magnitude)")

    # exact cross-check at enumerable scale: N log B tracks log |R_N|
    small = Dataset(rng.random(14), rng.integers(0, 2, 14))
    print("\nsmall-N sanity (N=14): enumeration vs N log B")
    for eps in (0.02, 0.05, 0.08):
        size = enumerate_rashomon(RashomonQuery(small, eps)).size
        pred = 14 * rashomon_base(small.weights, eps, grid_points=64).log_base[-1]
        print(f"  eps={eps:<5g} log|R| = {np.log(size):6.3f}   N log B = {pred:6.3f}")

    eps = 0.01
    samples = gibbs_sample_array(RashomonQuery(ds, eps), GibbsConfig(seed=5))
    frac = samples @ ds.weights / n / eps
    print(f"\ntolerance actually used by {len(samples)} uniform members at eps={eps}:")
    print(f"  mean {frac.mean():.4f}, 2.5th pct {np.percentile(frac, 2.5):.4f}, "
          f"97.5th pct {np.percentile(frac, 97.5):.4f}")
    print("  (nearly all of it, for nearly all members)")


if __name__ == "__main__":
    main()
