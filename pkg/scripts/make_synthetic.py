#!/usr/bin/env python3
"""Generate a synthetic observation corpus with planted class signals.

Writes obs/<clip>.jsonl (plus .flow raster sidecars for every tenth
clip), clips.tsv and embeddings.txt under the output directory, ready for
`adverbial pipeline`.
"""

import argparse
from pathlib import Path

from adverbial.synth import SynthConfig, generate_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path, help="output corpus directory")
    parser.add_argument("--clips", type=int, default=200)
    parser.add_argument("--seed", type=int, default=3)
    parser.add_argument("--window", type=int, default=5)
    args = parser.parse_args()
    metas = generate_corpus(args.out, SynthConfig(
        n_clips=args.clips, seed=args.seed, window=args.window))
    print(f"wrote {len(metas)} clips under {args.out}")


if __name__ == "__main__":
    main()
