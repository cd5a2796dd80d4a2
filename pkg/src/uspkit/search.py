"""Segmented, parallel, resumable search for perfect-number variants.

The search runs in two layers.  A flat uint32 lookup table of divisor sums
is built once per run (segment by segment, optionally across worker
processes).  The classification pass then walks [1, limit] in segments: a
number n is a hit for the second-order classes exactly when the re-applied
divisor sum equals 2n, and the inequality sigma(m) >= m + 1 means any n with
a first application above 2n - 1 can be discarded before the second lookup,
which keeps every needed lookup inside a table of size 2 * limit.  Values
past the table (only possible when the table is memory-capped) are
factorized on the fly.

Every hit is recomputed from scratch from its factorization during the
ordered merge, independent of the sieve that produced it, and odd hits of
the doubly-applied unitary class additionally pass the structural check.
Output order and checkpoint bytes depend only on (limit, segment_size,
classes, parity), never on worker count or interruption points.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .arith import Factorization, factorize, unitary_sigma
from .sieve import _divisor_sum_segment, base_primes
from .structure import UspStructureVerdict, check_usp_structure

CLASS_ORDER = ("usp", "unitary_perfect", "super_perfect", "perfect")

#: classes needing a second divisor-sum application (table to 2 * limit)
_SECOND_ORDER = {"usp": True, "unitary_perfect": False,
                 "super_perfect": True, "perfect": False}
_UNITARY = {"usp": True, "unitary_perfect": True,
            "super_perfect": False, "perfect": False}

DEFAULT_LIMIT = 10**8
HARD_LIMIT = 10**10
DEFAULT_SEGMENT_SIZE = 1 << 22

CHECKPOINT_MAGIC = "uspsearch-v1"


def sigma_from_factorization(f: Factorization) -> int:
    """Ordinary divisor sum from a factorization."""
    total = 1
    for p, e in f.entries:
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


class CheckpointError(Exception):
    """Raised for unusable checkpoint files (corruption or config mismatch)."""


@dataclass(frozen=True)
class SearchHit:
    n: int
    sigma_star_n: int
    sigma_star_sigma_star_n: int
    classification: str
    parity: str
    structure: UspStructureVerdict | None = None

    def checkpoint_line(self) -> str:
        return (
            f"hit {self.n} {self.sigma_star_n} "
            f"{self.sigma_star_sigma_star_n} {self.classification}"
        )

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "sigma_star": self.sigma_star_n,
                "sigma_star_sigma_star": self.sigma_star_sigma_star_n,
                "classification": self.classification,
                "parity": self.parity,
                "structure": None if self.structure is None else self.structure.to_dict(),
            }
        )


def verify_hit(n: int, classification: str) -> SearchHit:
    """Rebuild a hit from n alone via exact factorization.

    Raises RuntimeError when the claimed classification does not survive
    recomputation; this is the independent second check on every hit.
    """
    fn = factorize(n)
    s_star = unitary_sigma(fn)
    fs = factorize(s_star)
    ss_star = unitary_sigma(fs)
    if classification == "usp":
        ok = ss_star == 2 * n
    elif classification == "unitary_perfect":
        ok = s_star == 2 * n
    elif classification == "super_perfect":
        ok = sigma_from_factorization(factorize(sigma_from_factorization(fn))) == 2 * n
    elif classification == "perfect":
        ok = sigma_from_factorization(fn) == 2 * n
    else:
        raise ValueError(f"unknown classification {classification!r}")
    if not ok:
        raise RuntimeError(
            f"sieve hit {n} ({classification}) fails exact recomputation"
        )
    structure = None
    if classification == "usp" and n % 2 == 1:
        structure = check_usp_structure(n, fs)
    return SearchHit(
        n, s_star, ss_star, classification,
        "odd" if n % 2 else "even", structure,
    )


@dataclass(frozen=True)
class SearchConfig:
    limit: int
    classes: tuple[str, ...] = ("usp",)
    parity: str = "all"
    segment_size: int = DEFAULT_SEGMENT_SIZE
    workers: int = 1
    checkpoint_path: str | None = None
    resume: bool = False
    sieve_bound: int | None = None
    table_budget_bytes: int = 1 << 30
    max_segments: int | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.limit <= HARD_LIMIT:
            raise ValueError(f"limit must be in [1, {HARD_LIMIT}], got {self.limit}")
        if self.parity not in ("all", "odd", "even"):
            raise ValueError(f"parity must be all/odd/even, got {self.parity!r}")
        bad = [c for c in self.classes if c not in CLASS_ORDER]
        if bad or not self.classes:
            raise ValueError(f"unknown classes {bad}; choose from {CLASS_ORDER}")
        if self.segment_size < 1024:
            raise ValueError("segment_size must be at least 1024")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class SearchResult:
    hits: list[SearchHit]
    completed: bool
    segments_done: int
    total_segments: int
    elapsed: float
    checkpoint_text: str


# ---------------------------------------------------------------------------
# table construction

def _table_segment(task: tuple[bool, int, int]) -> np.ndarray:
    unitary, lo, hi = task
    primes = base_primes(isqrt(hi - 1))
    seg = _divisor_sum_segment(lo, hi, primes, unitary)
    if seg.max(initial=0) >= 1 << 32:
        raise OverflowError(f"divisor sums in [{lo}, {hi}) exceed uint32")
    return seg.astype(np.uint32)


def _build_table(unitary: bool, bound: int, segment_size: int, workers: int) -> np.ndarray:
    table = np.zeros(bound + 1, dtype=np.uint32)
    spans = [
        (lo, min(bound + 1, lo + segment_size))
        for lo in range(1, bound + 1, segment_size)
    ]
    tasks = [(unitary, lo, hi) for lo, hi in spans]
    if workers > 1 and len(spans) > 1:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            for (lo, hi), seg in zip(spans, pool.map(_table_segment, tasks)):
                table[lo:hi] = seg
    else:
        for task in tasks:
            table[task[1] : task[2]] = _table_segment(task)
    return table


# ---------------------------------------------------------------------------
# segment classification

# read-only state inherited by forked scan workers
_SCAN_STATE: dict | None = None


def _exact_divisor_sum(m: int, unitary: bool) -> int:
    f = factorize(m)
    return unitary_sigma(f) if unitary else sigma_from_factorization(f)


def _classify_segment(lo: int, hi: int, state: dict) -> list[tuple[int, str]]:
    n_all = np.arange(lo, hi, dtype=np.int64)
    if state["parity"] == "odd":
        n_all = n_all[n_all % 2 == 1]
    elif state["parity"] == "even":
        n_all = n_all[n_all % 2 == 0]
    if n_all.size == 0:
        return []
    hits: list[tuple[int, str]] = []
    for cls in CLASS_ORDER:
        if cls not in state["classes"]:
            continue
        unitary = _UNITARY[cls]
        table = state["star_table"] if unitary else state["sigma_table"]
        bound = state["star_bound"] if unitary else state["sigma_bound"]
        if hi - 1 <= bound:
            first = table[n_all].astype(np.int64)
        else:
            primes = base_primes(isqrt(hi - 1))
            full = _divisor_sum_segment(lo, hi, primes, unitary)
            first = full[n_all - lo]
        if not _SECOND_ORDER[cls]:
            good = n_all[first == 2 * n_all]
        else:
            # sigma(m) >= m + 1, so a hit needs first <= 2n - 1; that also
            # keeps every second lookup within a 2*limit table
            cand = first <= 2 * n_all - 1
            mm = first[cand]
            nn = n_all[cand]
            ok = np.zeros(mm.shape[0], dtype=bool)
            in_table = mm <= bound
            ok[in_table] = table[mm[in_table]].astype(np.int64) == 2 * nn[in_table]
            for j in np.nonzero(~in_table)[0]:
                ok[j] = _exact_divisor_sum(int(mm[j]), unitary) == 2 * int(nn[j])
            good = nn[ok]
        hits.extend((int(x), cls) for x in good)
    hits.sort(key=lambda t: (t[0], CLASS_ORDER.index(t[1])))
    return hits


def _scan_task(args: tuple[int, int, int]) -> tuple[int, list[tuple[int, str]]]:
    idx, lo, hi = args
    return idx, _classify_segment(lo, hi, _SCAN_STATE)


# ---------------------------------------------------------------------------
# checkpoints

def render_checkpoint(
    limit: int, segment_size: int, hits_by_segment: list[list[SearchHit]]
) -> str:
    lines = [f"{CHECKPOINT_MAGIC} {limit} {segment_size}"]
    for idx, seg_hits in enumerate(hits_by_segment):
        lines.append(f"seg {idx} {len(seg_hits)}")
        lines.extend(h.checkpoint_line() for h in seg_hits)
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    return body + f"digest {digest}\n"


def parse_checkpoint(text: str) -> tuple[int, int, list[list[SearchHit]]]:
    lines = text.splitlines()
    if len(lines) < 2 or not lines[-1].startswith("digest "):
        raise CheckpointError("missing digest line")
    body = "\n".join(lines[:-1]) + "\n"
    if hashlib.sha256(body.encode()).hexdigest() != lines[-1].split()[1]:
        raise CheckpointError("digest mismatch; refusing corrupted checkpoint")
    head = lines[0].split()
    if len(head) != 3 or head[0] != CHECKPOINT_MAGIC:
        raise CheckpointError(f"bad header {lines[0]!r}")
    limit, segment_size = int(head[1]), int(head[2])
    hits_by_segment: list[list[SearchHit]] = []
    i = 1
    while i < len(lines) - 1:
        parts = lines[i].split()
        if parts[0] != "seg" or int(parts[1]) != len(hits_by_segment):
            raise CheckpointError(f"unexpected line {lines[i]!r}")
        count = int(parts[2])
        seg_hits = []
        for j in range(i + 1, i + 1 + count):
            _, n, s, ss, cls = lines[j].split()
            hit = verify_hit(int(n), cls)
            if (hit.sigma_star_n, hit.sigma_star_sigma_star_n) != (int(s), int(ss)):
                raise CheckpointError(f"hit line {lines[j]!r} fails recomputation")
            seg_hits.append(hit)
        hits_by_segment.append(seg_hits)
        i += 1 + count
    return limit, segment_size, hits_by_segment


def _write_atomic(path: str, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# orchestration

def _table_bounds(config: SearchConfig) -> tuple[int, int]:
    budget_entries = max(config.table_budget_bytes // 4, 1 << 16)
    star = sigma = 0
    for cls in config.classes:
        need = (2 if _SECOND_ORDER[cls] else 1) * config.limit
        if _UNITARY[cls]:
            star = max(star, need)
        else:
            sigma = max(sigma, need)
    if config.sieve_bound is not None:
        star = min(star, config.sieve_bound)
        sigma = min(sigma, config.sieve_bound)
    return min(star, budget_entries), min(sigma, budget_entries)


def run_search(config: SearchConfig) -> SearchResult:
    """Execute a (possibly resumed) search; see module docstring.

    Returns the merged hits for all completed segments.  When max_segments
    stops the run early, completed is False and the checkpoint holds the
    finished prefix.
    """
    global _SCAN_STATE
    t0 = time.perf_counter()
    spans = [
        (idx, lo, min(config.limit + 1, lo + config.segment_size))
        for idx, lo in enumerate(range(1, config.limit + 1, config.segment_size))
    ]
    total = len(spans)

    hits_by_segment: list[list[SearchHit]] = []
    if config.resume:
        if not config.checkpoint_path or not os.path.exists(config.checkpoint_path):
            raise CheckpointError("resume requested but checkpoint file not found")
        with open(config.checkpoint_path) as fh:
            cp_limit, cp_seg, hits_by_segment = parse_checkpoint(fh.read())
        if (cp_limit, cp_seg) != (config.limit, config.segment_size):
            raise CheckpointError(
                f"checkpoint was written for limit={cp_limit}, "
                f"segment_size={cp_seg}; refusing to mix configurations"
            )
        hits_by_segment = hits_by_segment[:total]
    start = len(hits_by_segment)

    star_bound, sigma_bound = _table_bounds(config)
    state = {
        "classes": set(config.classes),
        "parity": config.parity,
        "star_table": None,
        "sigma_table": None,
        "star_bound": star_bound,
        "sigma_bound": sigma_bound,
    }
    if star_bound:
        state["star_table"] = _build_table(
            True, star_bound, config.segment_size, config.workers
        )
    if sigma_bound:
        state["sigma_table"] = _build_table(
            False, sigma_bound, config.segment_size, config.workers
        )

    todo = spans[start:]
    if config.max_segments is not None:
        todo = todo[: config.max_segments]

    def merge(seg_hits_raw: list[tuple[int, str]]) -> None:
        verified = [verify_hit(n, cls) for n, cls in seg_hits_raw]
        hits_by_segment.append(verified)
        if config.checkpoint_path:
            _write_atomic(
                config.checkpoint_path,
                render_checkpoint(config.limit, config.segment_size, hits_by_segment),
            )

    if config.workers > 1 and len(todo) > 1:
        _SCAN_STATE = state
        try:
            ctx = multiprocessing.get_context("fork")
            with ProcessPoolExecutor(max_workers=config.workers, mp_context=ctx) as pool:
                pending: dict[int, list[tuple[int, str]]] = {}
                next_idx = start
                for idx, raw in pool.map(_scan_task, todo):
                    pending[idx] = raw
                    while next_idx in pending:
                        merge(pending.pop(next_idx))
                        next_idx += 1
        finally:
            _SCAN_STATE = None
    else:
        for idx, lo, hi in todo:
            merge(_classify_segment(lo, hi, state))

    completed = len(hits_by_segment) == total
    text = render_checkpoint(config.limit, config.segment_size, hits_by_segment)
    if config.checkpoint_path:
        _write_atomic(config.checkpoint_path, text)
    return SearchResult(
        hits=[h for seg in hits_by_segment for h in seg],
        completed=completed,
        segments_done=len(hits_by_segment),
        total_segments=total,
        elapsed=time.perf_counter() - t0,
        checkpoint_text=text,
    )


def find_usp(limit: int, parity: str = "all", **kwargs) -> list[SearchHit]:
    """All n <= limit with the unitary divisor sum applied twice equal to 2n."""
    return run_search(SearchConfig(limit=limit, classes=("usp",), parity=parity, **kwargs)).hits


def find_unitary_perfect(limit: int, parity: str = "all", **kwargs) -> list[SearchHit]:
    """All n <= limit whose unitary divisor sum equals 2n."""
    return run_search(
        SearchConfig(limit=limit, classes=("unitary_perfect",), parity=parity, **kwargs)
    ).hits


def find_super_perfect(limit: int, parity: str = "all", **kwargs) -> list[SearchHit]:
    """All n <= limit with the ordinary divisor sum applied twice equal to 2n."""
    return run_search(
        SearchConfig(limit=limit, classes=("super_perfect",), parity=parity, **kwargs)
    ).hits


def find_perfect(limit: int, parity: str = "all", **kwargs) -> list[SearchHit]:
    """All n <= limit with sigma(n) = 2n."""
    return run_search(
        SearchConfig(limit=limit, classes=("perfect",), parity=parity, **kwargs)
    ).hits
