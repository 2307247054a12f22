"""Stable seed derivation (hash-based, platform-independent)."""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, *parts: str) -> int:
    """Mix a global seed with string scope parts into a new 64-bit seed."""
    h = hashlib.blake2s(digest_size=8)
    h.update(str(seed).encode())
    for part in parts:
        h.update(b"\x00" + part.encode())
    return int.from_bytes(h.digest(), "big")
