"""Generate a synthetic two-system corpus and run the full report on it.

    python3 scripts/run_synthetic.py --journals 500 --out runs/synthetic
"""

import argparse
import time
from pathlib import Path

from subjcat.cli import main as cli_main
from subjcat.synth import SynthConfig, write_synthetic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--journals", type=int, default=500)
    ap.add_argument("--cats-a", type=int, default=40)
    ap.add_argument("--cats-b", type=int, default=55)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="runs/synthetic")
    args = ap.parse_args()

    cfg = SynthConfig(n_journals=args.journals, n_cats_a=args.cats_a, n_cats_b=args.cats_b, seed=args.seed)
    out = Path(args.out)
    pa, pb = write_synthetic(out / "input", cfg)
    start = time.perf_counter()
    code = cli_main(["report", "--input-a", str(pa), "--input-b", str(pb), "--out", str(out / "report")])
    print(f"exit {code} after {time.perf_counter() - start:.2f}s")
    raise SystemExit(code)


if __name__ == "__main__":
    main()
