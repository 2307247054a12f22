"""Masked-word fine-tuning over a pre-masked behaviour corpus.

Each corpus line arrives already masked at the word level; inputs replace
every masked word with the model's mask token (one per subword of the
original word) and the loss is computed only at those positions. A
held-out shard is split off up front and its loss evaluated before
training and after every epoch, so the smoke criterion (held-out loss
strictly decreases over epoch 1) is directly observable in the result.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from pathlib import Path

import torch

from .corpus import MaskedLine, check_mask_fraction, read_masked_corpus
from .model import load_mlm, max_input_words

log = logging.getLogger(__name__)

IGNORE_INDEX = -100


@dataclass
class FineTuneJob:
    corpus_path: Path
    model_dir: str
    output_dir: Path
    epochs: int = 2
    learning_rate: float = 5e-4
    batch_size: int = 8
    holdout_fraction: float = 0.2
    seed: int = 0


@dataclass
class FineTuneResult:
    checkpoint: Path
    holdout_losses: list[float]
    train_losses: list[float]
    mask_fraction: float
    truncated_lines: int = 0


@dataclass
class _Example:
    input_ids: list[int]
    labels: list[int]


def build_example(line: MaskedLine, tokenizer, limit: int) -> tuple[_Example, bool]:
    """Token ids and label ids for one masked line.

    Masked words contribute the mask id repeated once per subword of the
    original word, with the original subword ids as labels; everything
    else is ignored by the loss. Returns the example and whether the
    line was truncated at the model's input limit.
    """
    originals = dict(line.targets)
    input_ids = [tokenizer.cls_id]
    labels = [IGNORE_INDEX]
    for pos, word in enumerate(line.words):
        if pos in originals:
            pieces = tokenizer.encode_word(originals[pos])
            input_ids.extend([tokenizer.mask_id] * len(pieces))
            labels.extend(pieces)
        else:
            pieces = tokenizer.encode_word(word)
            input_ids.extend(pieces)
            labels.extend([IGNORE_INDEX] * len(pieces))
    truncated = len(input_ids) - 1 > limit
    input_ids = input_ids[:limit + 1]
    labels = labels[:limit + 1]
    input_ids.append(tokenizer.sep_id)
    labels.append(IGNORE_INDEX)
    return _Example(input_ids, labels), truncated


def _batches(examples: list[_Example], batch_size: int, pad_id: int):
    for start in range(0, len(examples), batch_size):
        chunk = examples[start:start + batch_size]
        width = max(len(e.input_ids) for e in chunk)
        ids = torch.full((len(chunk), width), pad_id, dtype=torch.long)
        labels = torch.full((len(chunk), width), IGNORE_INDEX,
                            dtype=torch.long)
        attention = torch.zeros((len(chunk), width), dtype=torch.long)
        for row, e in enumerate(chunk):
            n = len(e.input_ids)
            ids[row, :n] = torch.tensor(e.input_ids)
            labels[row, :n] = torch.tensor(e.labels)
            attention[row, :n] = 1
        yield ids, attention, labels


def _mean_loss(model, examples, batch_size, pad_id) -> float:
    total = 0.0
    weight = 0
    model.eval()
    with torch.no_grad():
        for ids, attention, labels in _batches(examples, batch_size, pad_id):
            n_targets = int((labels != IGNORE_INDEX).sum())
            if n_targets == 0:
                continue
            out = model(input_ids=ids, attention_mask=attention,
                        labels=labels)
            total += float(out.loss.detach()) * n_targets
            weight += n_targets
    if weight == 0:
        raise ValueError("no masked targets in the evaluation shard")
    return total / weight


def finetune(job: FineTuneJob) -> FineTuneResult:
    lines = read_masked_corpus(job.corpus_path)
    if not lines:
        raise ValueError(f"masked corpus {job.corpus_path} is empty")
    fraction = check_mask_fraction(lines)

    tokenizer, model = load_mlm(job.model_dir)
    limit = max_input_words(model)
    examples = []
    truncated = 0
    for line in lines:
        example, was_truncated = build_example(line, tokenizer, limit)
        truncated += was_truncated
        examples.append(example)
    if truncated:
        log.warning("%d corpus lines exceeded the %d-token model limit "
                    "and were truncated", truncated, limit)

    rng = random.Random(job.seed)
    order = list(range(len(examples)))
    rng.shuffle(order)
    n_holdout = max(1, int(len(examples) * job.holdout_fraction))
    if n_holdout >= len(examples):
        raise ValueError("corpus too small to split a held-out shard")
    holdout = [examples[i] for i in order[:n_holdout]]
    train = [examples[i] for i in order[n_holdout:]]

    torch.manual_seed(job.seed)
    optimizer = torch.optim.AdamW(model.parameters(), lr=job.learning_rate)
    holdout_losses = [_mean_loss(model, holdout, job.batch_size,
                                 tokenizer.pad_id)]
    train_losses = []
    log.info("held-out masked-word loss before training: %.4f",
             holdout_losses[0])
    for epoch in range(job.epochs):
        model.train()
        rng.shuffle(train)
        epoch_total, epoch_weight = 0.0, 0
        for ids, attention, labels in _batches(train, job.batch_size,
                                               tokenizer.pad_id):
            optimizer.zero_grad()
            out = model(input_ids=ids, attention_mask=attention,
                        labels=labels)
            out.loss.backward()
            optimizer.step()
            n_targets = int((labels != IGNORE_INDEX).sum())
            epoch_total += float(out.loss.detach()) * n_targets
            epoch_weight += n_targets
        train_losses.append(epoch_total / max(epoch_weight, 1))
        holdout_losses.append(_mean_loss(model, holdout, job.batch_size,
                                         tokenizer.pad_id))
        log.info("epoch %d: train loss %.4f, held-out loss %.4f",
                 epoch + 1, train_losses[-1], holdout_losses[-1])

    out_dir = Path(job.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    if hasattr(tokenizer, "save"):
        tokenizer.save(out_dir)
    else:
        tokenizer.tokenizer.save_pretrained(out_dir)
    return FineTuneResult(checkpoint=out_dir, holdout_losses=holdout_losses,
                          train_losses=train_losses, mask_fraction=fraction,
                          truncated_lines=truncated)
