"""Masked-language-model fine-tuning over flattened behaviour corpora."""

__version__ = "0.1.0"
