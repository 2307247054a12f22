"""Command-line entry point for the fine-tuning and export jobs."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .corpus import CorpusError, corpus_vocabulary, read_flat_corpus
from .export import export_action_embeddings, export_summaries
from .finetune import FineTuneJob, finetune
from .model import build_tiny_mlm

log = logging.getLogger("neural_adapter")


def cmd_make_tiny(args) -> int:
    words = corpus_vocabulary(read_flat_corpus(args.corpus))
    build_tiny_mlm(words, Path(args.out), hidden_size=args.hidden,
                   num_layers=args.layers, num_heads=args.heads,
                   seed=args.seed)
    log.info("wrote tiny checkpoint with %d-word vocabulary to %s",
             len(words), args.out)
    return 0


def cmd_finetune(args) -> int:
    result = finetune(FineTuneJob(
        corpus_path=Path(args.corpus), model_dir=args.model,
        output_dir=Path(args.out), epochs=args.epochs,
        learning_rate=args.lr, batch_size=args.batch_size,
        holdout_fraction=args.holdout, seed=args.seed))
    trace = " -> ".join(f"{loss:.4f}" for loss in result.holdout_losses)
    log.info("held-out loss trace: %s", trace)
    if result.holdout_losses[1] >= result.holdout_losses[0]:
        log.warning("held-out loss did not decrease over epoch 1")
    return 0


def cmd_summaries(args) -> int:
    entries = export_summaries(args.model, Path(args.corpus), Path(args.out))
    log.info("wrote %d summary vectors to %s", len(entries), args.out)
    return 0


def cmd_action_embeddings(args) -> int:
    entries = export_action_embeddings(args.model, Path(args.vocab),
                                       Path(args.out))
    log.info("wrote %d action embeddings to %s", len(entries), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neural-adapter",
        description="Fine-tune a masked language model on flattened "
                    "object-behaviour corpora and export summary vectors.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-tiny", help="random-init word-level checkpoint")
    p.add_argument("--corpus", required=True, help="flat corpus (vocabulary)")
    p.add_argument("--out", required=True)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--heads", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_make_tiny)

    p = sub.add_parser("finetune", help="masked-word fine-tuning")
    p.add_argument("--corpus", required=True, help="masked corpus file")
    p.add_argument("--model", required=True,
                   help="checkpoint directory or hub name")
    p.add_argument("--out", required=True, help="output checkpoint directory")
    p.add_argument("--epochs", type=int, default=2)
    p.add_argument("--lr", type=float, default=5e-4)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--holdout", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("summaries", help="export per-snippet summary vectors")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True, help="unmasked flat corpus")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_summaries)

    p = sub.add_parser("action-embeddings",
                       help="export action-token embeddings")
    p.add_argument("--model", required=True)
    p.add_argument("--vocab", required=True,
                   help="one action token per line")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_action_embeddings)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CorpusError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
