import math

from gpiso import runtime


def test_sequential_tasks():
    with runtime.span_scope() as ctr:
        for _ in range(7):
            runtime.task()
    assert ctr.work == 7
    assert ctr.span == 7


def test_parallel_for_unit_tasks_tree_combine():
    for t in (1, 2, 5, 8, 13):
        with runtime.span_scope() as ctr:
            runtime.parallel_for(range(t), lambda _: runtime.task(), combine_cost=1)
        expected_span = 1 + (math.ceil(math.log2(t)) if t > 1 else 0)
        assert ctr.span == expected_span
        assert ctr.work == t + (t - 1 if t > 1 else 0)
        assert ctr.span <= ctr.work


def test_nested_composition_laws():
    def branch(depth):
        for _ in range(depth):
            runtime.task()

    with runtime.span_scope() as ctr:
        runtime.task()
        runtime.parallel_for([3, 1, 2], branch)
        runtime.task()
    # sequential parts add, the parallel part contributes max(3,1,2)
    assert ctr.span == 1 + 3 + 1
    assert ctr.work == 1 + 6 + 1


def test_counters_identical_across_worker_counts():
    def job(n):
        def inner(i):
            runtime.task(i + 1)
            return i * i

        return runtime.parallel_for(range(n), inner, combine_cost=1)

    snapshots = []
    for workers in (1, 2, 8):
        runtime.set_workers(workers)
        try:
            with runtime.span_scope() as ctr:
                results = job(6)
            snapshots.append((tuple(results), ctr.work, ctr.span))
        finally:
            runtime.set_workers(1)
    assert snapshots[0] == snapshots[1] == snapshots[2]


def test_empty_parallel_for():
    with runtime.span_scope() as ctr:
        assert runtime.parallel_for([], lambda x: x) == []
    assert ctr.work == 0 and ctr.span == 0
