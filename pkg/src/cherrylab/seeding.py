"""Per-phase seed derivation.

A phase seed is the first eight bytes of SHA-256 over the parent seed with the
phase labels appended, ``"<seed>/<label>/<label>..."``.
"""

from __future__ import annotations

import hashlib


def derive_seed(seed: int | None, *labels: object) -> int:
    base = "none" if seed is None else str(int(seed))
    text = "/".join([base, *map(str, labels)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")
