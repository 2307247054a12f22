"""Exports in the word-vector format the classifier side consumes.

Summary vectors are the mean of the final transformer layer's word-level
features over the whole unmasked flat sentence (special and padding
positions excluded); action embeddings come from the model's input
embedding table, averaged over subwords, with zero vectors (and a
warning) for out-of-vocabulary actions.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import torch

from .corpus import FlatLine, read_flat_corpus
from .model import load_mlm, max_input_words

log = logging.getLogger(__name__)


def format_word_vectors(entries: dict[str, np.ndarray], dim: int) -> str:
    lines = [f"{len(entries)} {dim}"]
    for key, vec in entries.items():
        lines.append(key + " " + " ".join(f"{float(v):.6g}" for v in vec))
    return "".join(line + "\n" for line in lines)


def summary_vector(model, tokenizer, line: FlatLine,
                   limit: int) -> tuple[np.ndarray, bool]:
    ids = [tokenizer.cls_id]
    for word in line.words:
        ids.extend(tokenizer.encode_word(word))
    truncated = len(ids) - 1 > limit
    ids = ids[:limit + 1] + [tokenizer.sep_id]
    tensor = torch.tensor([ids])
    with torch.no_grad():
        hidden = model(input_ids=tensor,
                       output_hidden_states=True).hidden_states[-1][0]
    word_states = hidden[1:-1]  # drop [CLS] and [SEP]
    return word_states.mean(dim=0).numpy(), truncated


def export_summaries(model_dir: str, corpus_path: Path,
                     out_path: Path) -> dict[str, np.ndarray]:
    lines = read_flat_corpus(corpus_path)
    if not lines:
        raise ValueError(f"flat corpus {corpus_path} is empty")
    tokenizer, model = load_mlm(model_dir)
    limit = max_input_words(model)
    entries: dict[str, np.ndarray] = {}
    truncated = 0
    for line in lines:
        if line.key in entries:
            raise ValueError(f"duplicate corpus key {line.key!r}")
        vec, was_truncated = summary_vector(model, tokenizer, line, limit)
        truncated += was_truncated
        entries[line.key] = vec
    if truncated:
        log.warning("%d lines exceeded the %d-token model limit; their "
                    "summaries cover the truncated prefix", truncated, limit)
    dim = int(model.config.hidden_size)
    Path(out_path).write_text(format_word_vectors(entries, dim),
                              encoding="utf-8")
    return entries


def export_action_embeddings(model_dir: str, vocab_path: Path,
                             out_path: Path) -> dict[str, np.ndarray]:
    tokens = [line.strip() for line in
              Path(vocab_path).read_text(encoding="utf-8").splitlines()
              if line.strip()]
    if not tokens:
        raise ValueError(f"action vocabulary {vocab_path} is empty")
    tokenizer, model = load_mlm(model_dir)
    table = model.get_input_embeddings().weight.detach()
    dim = table.shape[1]
    entries: dict[str, np.ndarray] = {}
    for token in tokens:
        ids = [i for i in tokenizer.encode_word(token)
               if i != tokenizer.unk_id]
        if not ids:
            log.warning("action token %r not in the model vocabulary; "
                        "writing a zero vector", token)
            entries[token] = np.zeros(dim)
        else:
            entries[token] = table[ids].mean(dim=0).numpy()
    Path(out_path).write_text(format_word_vectors(entries, dim),
                              encoding="utf-8")
    return entries
