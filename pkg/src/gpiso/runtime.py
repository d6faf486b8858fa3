"""Fork-join execution layer with semantic work/span counters.

Counters model the task DAG, not wall-clock time: `task(n)` records n unit
tasks executed sequentially; `parallel` combines branch counters by the
fork-join laws (work adds, span takes the max).  A balanced `parallel_for`
with a tree combine therefore has span max(branch spans) + ceil(log2 t)
combine levels.  Because counters are derived from the DAG shape alone,
reports are identical no matter how many OS threads actually ran.
"""

from __future__ import annotations

import contextvars
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field


@dataclass
class SpanCounter:
    work: int = 0
    span: int = 0

    def add_sequential(self, other: "SpanCounter") -> None:
        self.work += other.work
        self.span += other.span


_workers = 1


def set_workers(n: int) -> None:
    global _workers
    if n < 1:
        raise ValueError("worker count must be >= 1")
    _workers = n


def get_workers() -> int:
    return _workers


_current: contextvars.ContextVar[SpanCounter | None] = contextvars.ContextVar(
    "gpiso_span_counter", default=None
)


class span_scope:
    """Context manager installing a fresh counter for one measured run."""

    def __init__(self):
        self.counter = SpanCounter()
        self._token = None

    def __enter__(self) -> SpanCounter:
        self._token = _current.set(self.counter)
        return self.counter

    def __exit__(self, *exc):
        _current.reset(self._token)
        return False


def task(n: int = 1) -> None:
    """Record n sequentially-dependent unit tasks."""
    ctr = _current.get()
    if ctr is not None:
        ctr.work += n
        ctr.span += n


def _run_branch(fn, arg, counter):
    token = _current.set(counter)
    try:
        return fn(arg)
    finally:
        _current.reset(token)


def parallel_for(items, fn, combine_cost: int = 0):
    """Apply fn to each item as parallel branches; return results in order.

    Branch sub-counters fold into the enclosing counter as one parallel
    composition: work += sum(branch work), span += max(branch span).  When
    combine_cost > 0, a balanced binary combine tree is charged on top:
    work += (t-1)*combine_cost, span += ceil(log2 t)*combine_cost.

    Results are always collected in item order, so verdicts built from them
    are schedule-independent.
    """
    items = list(items)
    if not items:
        return []
    outer = _current.get()
    counters = [SpanCounter() for _ in items]
    if _workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=min(_workers, len(items))) as pool:
            futures = [
                pool.submit(_run_branch, fn, it, c) for it, c in zip(items, counters)
            ]
            results = [f.result() for f in futures]
    else:
        results = [_run_branch(fn, it, c) for it, c in zip(items, counters)]
    if outer is not None:
        outer.work += sum(c.work for c in counters)
        outer.span += max(c.span for c in counters)
        if combine_cost and len(items) > 1:
            outer.work += (len(items) - 1) * combine_cost
            outer.span += math.ceil(math.log2(len(items))) * combine_cost
    return results
