"""Walk the twelve metrics across three synthetic-data failure modes.

Three pairs of point clouds, all 1000 points in 8 dimensions:

  match      both sets drawn from the same standard Gaussian
  shifted    synthetic mean moved 3 units along every axis
  collapsed  synthetic collapsed onto a tight ball around one point

A good fidelity metric should stay high for "match" and "collapsed" (the
collapsed samples sit inside the real support) and drop for "shifted".
A good diversity metric should stay high only for "match".  Run it and see
which metrics actually behave that way.

    python3 demos/metric_tour.py
"""

import numpy as np

from gensanity import (
    DIVERSITY_METRICS,
    FIDELITY_METRICS,
    METRIC_LABELS,
    MetricConfig,
    compute_all,
)

N, DIM = 1000, 8


def make_pairs(seed: int):
    rng = np.random.default_rng(seed)
    real = rng.standard_normal((N, DIM))
    pairs = {
        "match": rng.standard_normal((N, DIM)),
        "shifted": rng.standard_normal((N, DIM)) + 3.0,
        "collapsed": 0.05 * rng.standard_normal((N, DIM)),
    }
    return real, pairs


def main() -> None:
    real, pairs = make_pairs(seed=7)
    config = MetricConfig()
    scores = {name: compute_all(real, syn, config) for name, syn in pairs.items()}

    header = f"{'metric':<10}" + "".join(f"{name:>12}" for name in pairs)
    for group_name, group in (("fidelity", FIDELITY_METRICS), ("diversity", DIVERSITY_METRICS)):
        print(f"\n{group_name}")
        print(header)
        for mid in group:
            row = "".join(f"{scores[name][mid]:>12.3f}" for name in pairs)
            print(f"{METRIC_LABELS[mid]:<10}{row}")

    print()
    print("Things worth noticing:")
    print(" - Density exceeds 1 under mode collapse: piling synthetic points into")
    print("   one dense spot inflates it, which is why it is paired with Coverage.")
    print(" - The fidelity column disagrees about collapse: I-Prec and P-Prec read")
    print("   the collapsed set as perfect (the points do sit in real support)")
    print("   while C-Prec and symPrec drop to zero.  That disagreement is the")
    print("   reason each metric is benchmarked as a pair under known failures.")
    print(" - Nothing survives the 3-sigma shift: disjoint supports floor every")
    print("   pair on both sides.")


if __name__ == "__main__":
    main()
