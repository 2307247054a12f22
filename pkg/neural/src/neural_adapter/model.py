"""Model and tokenizer handling.

Two tokenizer routes share one tiny interface (per-word id lists plus the
special ids): a word-level vocabulary built from the corpus (used by the
tiny from-scratch checkpoints, and exactly matched to the whitespace
corpus format), and any Hugging Face tokenizer for real pretrained
checkpoints. Checkpoint directories carrying a ``word_vocab.json`` load
the word-level route.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from transformers import AutoModelForMaskedLM, AutoTokenizer, BertConfig, \
    BertForMaskedLM

WORD_VOCAB_FILE = "word_vocab.json"
SPECIALS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]")


class WordTokenizer:
    """One id per whitespace word; unknown words map to [UNK]."""

    def __init__(self, vocab: dict[str, int]):
        self.vocab = vocab
        self.pad_id = vocab["[PAD]"]
        self.unk_id = vocab["[UNK]"]
        self.cls_id = vocab["[CLS]"]
        self.sep_id = vocab["[SEP]"]
        self.mask_id = vocab["[MASK]"]

    @classmethod
    def from_words(cls, words: list[str]) -> "WordTokenizer":
        vocab = {tok: i for i, tok in enumerate(SPECIALS)}
        for word in words:
            if word not in vocab:
                vocab[word] = len(vocab)
        return cls(vocab)

    def __len__(self) -> int:
        return len(self.vocab)

    def encode_word(self, word: str) -> list[int]:
        return [self.vocab.get(word, self.unk_id)]

    def save(self, out_dir: Path) -> None:
        path = Path(out_dir) / WORD_VOCAB_FILE
        path.write_text(json.dumps(self.vocab, indent=0, sort_keys=False)
                        + "\n", encoding="utf-8")

    @classmethod
    def load(cls, model_dir: Path) -> "WordTokenizer":
        path = Path(model_dir) / WORD_VOCAB_FILE
        return cls(json.loads(path.read_text(encoding="utf-8")))


class HfWordAdapter:
    """Per-word encoding through a Hugging Face tokenizer (subword route)."""

    def __init__(self, tokenizer):
        self.tokenizer = tokenizer
        self.pad_id = tokenizer.pad_token_id
        self.unk_id = tokenizer.unk_token_id
        self.cls_id = tokenizer.cls_token_id
        self.sep_id = tokenizer.sep_token_id
        self.mask_id = tokenizer.mask_token_id

    def __len__(self) -> int:
        return len(self.tokenizer)

    def encode_word(self, word: str) -> list[int]:
        ids = self.tokenizer(word, add_special_tokens=False)["input_ids"]
        return ids if ids else [self.unk_id]


def build_tiny_mlm(words: list[str], out_dir: Path, hidden_size: int = 64,
                   num_layers: int = 2, num_heads: int = 2,
                   max_words: int = 512, seed: int = 0) -> Path:
    """Randomly initialized BERT-family MLM over a word-level vocabulary.

    Intended for offline smoke runs and tests; real experiments pass a
    pretrained checkpoint path to the finetune/export commands instead.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tokenizer = WordTokenizer.from_words(words)
    config = BertConfig(
        vocab_size=len(tokenizer),
        hidden_size=hidden_size,
        num_hidden_layers=num_layers,
        num_attention_heads=num_heads,
        intermediate_size=hidden_size * 4,
        max_position_embeddings=max_words + 2,  # room for [CLS]/[SEP]
        pad_token_id=tokenizer.pad_id,
    )
    torch.manual_seed(seed)
    model = BertForMaskedLM(config)
    model.save_pretrained(out_dir)
    tokenizer.save(out_dir)
    return out_dir


def load_mlm(model_dir: str):
    """(tokenizer, model) from a checkpoint directory or hub name."""
    model = AutoModelForMaskedLM.from_pretrained(model_dir)
    if (Path(model_dir) / WORD_VOCAB_FILE).exists():
        tokenizer = WordTokenizer.load(Path(model_dir))
    else:
        tokenizer = HfWordAdapter(AutoTokenizer.from_pretrained(model_dir))
    model.eval()
    return tokenizer, model


def max_input_words(model) -> int:
    return int(model.config.max_position_embeddings) - 2
