"""Score a tabular dataset pair twice: through the CLI and in-process.

Builds a small mixed-type table (two numerical columns, one categorical),
saves real and synthetic versions to CSV with a shared JSON schema, then
computes all metrics both ways:

  1. `gensanity eval --real ... --synthetic ... --schema ...` (subprocess)
  2. embed_pair + compute_all on the same files loaded back in

The two routes share the embedding pipeline, so they must agree exactly.
This is the file contract external tools integrate against.

    python3 demos/tabular_cli_roundtrip.py
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from gensanity import (
    CATEGORICAL,
    Column,
    Dataset,
    compute_all,
    embed_pair,
    load_dataset,
    save_dataset,
)

COLUMNS = (
    Column("amount"),
    Column("age"),
    Column("segment", CATEGORICAL, categories=4),
)


def make_table(rng, n, drift=0.0):
    amount = rng.lognormal(mean=3.0 + drift, sigma=0.6, size=n)
    age = rng.normal(40.0 + 5.0 * drift, 12.0, size=n)
    segment = rng.integers(0, 4, size=n)
    return Dataset(COLUMNS, np.column_stack([amount, age, segment]))


def main() -> None:
    rng = np.random.default_rng(42)
    real = make_table(rng, 600)
    synthetic = make_table(rng, 600, drift=0.3)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        save_dataset(real, tmp / "real.csv", tmp / "schema.json")
        save_dataset(synthetic, tmp / "synthetic.csv", tmp / "schema.json")

        cmd = [
            sys.executable, "-m", "gensanity", "eval",
            "--real", str(tmp / "real.csv"),
            "--synthetic", str(tmp / "synthetic.csv"),
            "--schema", str(tmp / "schema.json"),
        ]
        out = subprocess.run(cmd, capture_output=True, text=True, check=True)
        via_cli = json.loads(out.stdout)

        emb_real, emb_syn = embed_pair(
            load_dataset(tmp / "real.csv", tmp / "schema.json"),
            load_dataset(tmp / "synthetic.csv", tmp / "schema.json"),
        )
        via_lib = compute_all(emb_real, emb_syn)

    print(f"{'metric':<10}{'cli':>12}{'library':>12}")
    worst = 0.0
    for mid, lib_val in via_lib.items():
        cli_val = via_cli[mid]
        worst = max(worst, abs(cli_val - lib_val))
        print(f"{mid:<10}{cli_val:>12.6f}{lib_val:>12.6f}")
    print(f"\nlargest gap between routes: {worst:.1e}")
    if worst != 0.0:
        raise SystemExit("routes disagree, the file contract is broken")
    print("CLI and library agree bit for bit.")


if __name__ == "__main__":
    main()
