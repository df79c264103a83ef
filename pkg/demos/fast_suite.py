"""Run a slice of the sanity-check suite end to end and read the verdicts.

Uses fast mode (halved repeats, coarser sweep grid) and two checks so the
whole thing finishes in well under a minute on one core.  Prints the
fidelity verdict table and shows where the exported files land.

    python3 demos/fast_suite.py
"""

import tempfile
from pathlib import Path

from gensanity import SuiteConfig, export_suite, render_table, run_suite

LETTER_MEANING = {
    "T": "shape criterion met",
    "F": "shape criterion missed",
    "H": "dual-sided check resolved high",
    "L": "dual-sided check resolved low",
    "E": "errored while producing curves",
}


def main() -> None:
    config = SuiteConfig(
        seed=0,
        repeats=4,
        checks=("gaussian_mean_difference", "mode_collapse"),
        base_size=500,
        grid=9,
        fast=True,
    )
    print(f"running {len(config.checks)} checks, fast mode "
          f"(effective grid {config.effective_grid}, "
          f"{config.effective_repeats} repeats per cell)")
    results = run_suite(config)

    md, _ = render_table(results, "fidelity")
    print()
    print(md)
    print("Letters:", ", ".join(f"{k} = {v}" for k, v in LETTER_MEANING.items()))

    # The same verdicts are available programmatically, down to the failing
    # bullet of each shape criterion.
    misses = [v for v in results.verdicts if v.letter == "F"]
    print(f"\n{len(results.verdicts)} verdict cells, {len(misses)} misses.")
    for v in misses[:4]:
        first_bad = next(
            bullet["check"]
            for shape_results in v.variant_results.values()
            for results_list in shape_results.values()
            for shape in results_list
            for bullet in shape["bullets"]
            if bullet["margin"] < 0
        )
        print(f"  {v.row} / {v.desideratum} / {v.metric}: {first_bad}")

    with tempfile.TemporaryDirectory() as out:
        export_suite(results, out)
        print("\nexported files:")
        for path in sorted(Path(out).iterdir()):
            print(f"  {path.name}  ({path.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
