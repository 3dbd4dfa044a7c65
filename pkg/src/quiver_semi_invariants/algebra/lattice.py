"""
Bounded enumeration of nonnegative integer solutions of A·a = b.
"""

from collections.abc import Sequence


def nonneg_lattice_solutions(
    a: Sequence[Sequence[int]], b: Sequence[int], bound: int
) -> list[tuple[int, ...]]:
    """
    All vectors v with A·v = b, 0 <= v_j <= bound, in decreasing lexicographic order.

    Depth-first over the variables; a branch is cut as soon as some row can no
    longer reach its target with the remaining variables inside the box.
    """
    if bound < 0:
        return []
    rows = [list(r) for r in a]
    n = len(rows[0]) if rows else 0
    if any(len(r) != n for r in rows) or len(b) != len(rows):
        raise ValueError("A must be rectangular with one row per entry of b")

    # reach_lo[k][i] / reach_hi[k][i]: extreme values of row i over variables k..n-1
    reach_lo = [[0] * len(rows) for _ in range(n + 1)]
    reach_hi = [[0] * len(rows) for _ in range(n + 1)]
    for k in range(n - 1, -1, -1):
        for i, row in enumerate(rows):
            c = row[k] * bound
            reach_lo[k][i] = reach_lo[k + 1][i] + min(0, c)
            reach_hi[k][i] = reach_hi[k + 1][i] + max(0, c)

    solutions: list[tuple[int, ...]] = []
    current = [0] * n

    def feasible(k: int, residual: list[int]) -> bool:
        return all(
            reach_lo[k][i] <= residual[i] <= reach_hi[k][i] for i in range(len(rows))
        )

    def descend(k: int, residual: list[int]) -> None:
        if k == n:
            if all(r == 0 for r in residual):
                solutions.append(tuple(current))
            return
        for value in range(bound, -1, -1):
            nxt = [residual[i] - rows[i][k] * value for i in range(len(rows))]
            if feasible(k + 1, nxt):
                current[k] = value
                descend(k + 1, nxt)
        current[k] = 0

    start = list(b)
    if feasible(0, start):
        descend(0, start)
    return solutions
