"""Sample specifications and deterministic tuple enumeration.

Scans over point tuples come in two flavours: exhaustive over an enumeration
depth, or seeded-random with a fixed count.  Random samples are materialized
up front from a seeded generator so that chunked/parallel evaluation cannot
change the result.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import UsageError


@dataclass(frozen=True)
class ExhaustiveSample:
    """All k-tuples (with repetition) of points enumerated to `depth`."""

    depth: int


@dataclass(frozen=True)
class SeededSample:
    """`count` k-tuples drawn with a fixed `seed` from the depth-`depth` enumeration.

    Models with a continuous point set may override the draw to sample the
    ball of radius `depth` directly instead of its finite enumeration.
    """

    count: int
    seed: int
    depth: int


SampleSpec = ExhaustiveSample | SeededSample


def materialize_tuples(space, spec, k):
    """Return (tuples, exhaustive_flag) for a k-tuple sample over `space`."""
    if isinstance(spec, ExhaustiveSample):
        points = space.enumerate(spec.depth)
        if not points:
            raise UsageError("empty enumeration")
        return list(itertools.product(points, repeat=k)), True
    if isinstance(spec, SeededSample):
        if spec.count <= 0:
            raise UsageError("sample count must be positive")
        rng = np.random.default_rng(spec.seed)
        draw = getattr(space, "random_points", None)
        if draw is not None:
            flat = draw(spec.count * k, spec.depth, rng)
        else:
            points = space.enumerate(spec.depth)
            idx = rng.integers(0, len(points), size=spec.count * k)
            flat = [points[i] for i in idx]
        return [tuple(flat[i * k:(i + 1) * k]) for i in range(spec.count)], False
    # explicit list of tuples
    tuples = list(spec)
    if not tuples:
        raise UsageError("empty sample")
    return tuples, False


def worker_count():
    """Parallelism cap: COARSEHYP_THREADS, default 1 (fully deterministic path)."""
    raw = os.environ.get("COARSEHYP_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return max(1, n) if n else 1


def chunked_max(fn, chunks):
    """Evaluate fn on each chunk (possibly in parallel) and reduce in order.

    fn returns (value, payload); the reduction keeps the first chunk attaining
    the maximum, so the result is identical to a sequential in-order scan.
    """
    workers = worker_count()
    if workers == 1 or len(chunks) <= 1:
        results = [fn(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, chunks))
    best_val, best_payload = None, None
    for val, payload in results:
        if val is None:
            continue
        if best_val is None or val > best_val:
            best_val, best_payload = val, payload
    return best_val, best_payload
