"""Who gets arbitrary predictions?

The chance that a record's prediction differs from the Bayes-optimal one in a
random member of R_N(eps) depends only on its weight: q(w) = 1/(1 + e^{C w}),
with C solved from the dataset's weight profile and eps. This script prints
q as a function of the underlying probability p for several tolerances, then
shows how identical group rates can hide very different exposure to flips,
and checks the large-N formula against exact enumeration at small N.
"""

import numpy as np

from rashomon import Dataset, RashomonQuery, flip_probabilities, solve_c
from rashomon.oracle import enumerate_rashomon


def main():
    rng = np.random.default_rng(3)
    ds = Dataset(rng.random(20_000), rng.integers(0, 2, 20_000))

    eps_list = (0.001, 0.01, 0.02)
    cs = {eps: solve_c(ds.weights, eps) for eps in eps_list}
    print("C(eps) for this dataset:", {e: round(c, 3) for e, c in cs.items()})

    print("\nflip probability by underlying p (rows) and eps (columns)")
    print("   p    " + "".join(f"eps={e:<8g}" for e in eps_list))
    for p in (0.50, 0.55, 0.60, 0.70, 0.80, 0.95):
        w = abs(2 * p - 1)
        row = "".join(f"{1 / (1 + np.exp(cs[e] * w)):<12.4f}" for e in eps_list)
        print(f"  {p:.2f}  {row}")
    print("(a record at p=0.5 is a coin flip in every member; certainty protects)")

    # two groups with identical positive rates but unequal arbitrariness
    p = np.concatenate([np.full(5000, 0.70), np.full(2500, 0.55), np.full(2500, 0.95)])
    ds2 = Dataset(p, [1] * 5000 + [0] * 5000)
    print("\ngroups with equal PPR/FPR/TPR but different weight profiles:")
    for eps in (0.005, 0.02, 0.05):
        sol = flip_probabilities(RashomonQuery(ds2, eps))
        qa = sol.q[ds2.group == 1].mean()
        qb = sol.q[ds2.group == 0].mean()
        print(f"  eps={eps:<6g} mean q: group1={qa:.4f} group0={qb:.4f} "
              f"ratio {qb / qa:.3f}")

    # the formula is a large-N limit; watch it converge against enumeration
    print("\nmax |asymptotic q - exact q| as N grows (same weight law, eps=0.05):")
    for n in (8, 12, 16):
        dsn = Dataset(0.5 + rng.random(n) / 2, [1] * n)
        sol = flip_probabilities(RashomonQuery(dsn, 0.05))
        exact = enumerate_rashomon(RashomonQuery(dsn, 0.05)).exact_q
        print(f"  N={n:<3d} {np.max(np.abs(sol.q - exact)):.4f}")


if __name__ == "__main__":
    main()
