"""Shared plumbing: deterministic seeding, ordered parallel maps, atomic output."""

from __future__ import annotations

import hashlib
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def derived_rng(*entropy: int) -> np.random.Generator:
    """Generator seeded from a tuple of non-negative integers.

    The same tuple always yields the same stream, independent of platform
    and of any other generator created elsewhere.
    """
    for e in entropy:
        if e < 0:
            raise ValueError(f"seed components must be non-negative, got {e}")
    return np.random.default_rng(np.random.SeedSequence(list(entropy)))


def derived_seed(*entropy: int) -> int:
    """Single integer seed derived from a tuple, for APIs that take one int."""
    for e in entropy:
        if e < 0:
            raise ValueError(f"seed components must be non-negative, got {e}")
    return int(np.random.SeedSequence(list(entropy)).generate_state(1, np.uint64)[0])


def ordered_map(fn, items, threads: int = 1) -> list:
    """Apply ``fn`` to every item, returning results in input order.

    The result is identical for every ``threads`` value: each call is
    independent and results are collected by position, never by completion
    time.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def atomic_write_bytes(path: str | os.PathLike, data: bytes) -> None:
    """Write a file via temp-and-rename so readers never see partial output."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def sha256_of_files(paths) -> str:
    """Joint content hash of the given files, order-independent.

    Each file contributes its basename and bytes; entries are sorted by
    basename so the digest does not depend on argument order.
    """
    h = hashlib.sha256()
    for p in sorted(os.fspath(p) for p in paths):
        h.update(os.path.basename(p).encode("utf-8"))
        h.update(b"\0")
        with open(p, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                h.update(chunk)
        h.update(b"\0")
    return h.hexdigest()
