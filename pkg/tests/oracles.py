"""Independent reference implementations used to cross-check the library.

Everything here recomputes results from first principles (its own adjacency
rule, breadth-first search, explicit set bookkeeping) and must not reuse the
library's connectivity machinery.
"""

from collections import deque
from decimal import Decimal, getcontext

BLACK, WHITE, EMPTY = 1, 2, 0


def uct_reference(wins, visits, parent_visits, cp):
    """Selection score evaluated in 50-digit decimal arithmetic."""
    getcontext().prec = 50
    exploit = Decimal(wins) / Decimal(visits)
    explore = Decimal(str(cp)) * (Decimal(parent_visits).ln() / Decimal(visits)).sqrt()
    return float(exploit + explore)


def hex_neighbors(r, c, size):
    """Rhombus-grid hexagonal adjacency, derived independently."""
    out = []
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1), (-1, 1), (1, -1)):
        rr, cc = r + dr, c + dc
        if 0 <= rr < size and 0 <= cc < size:
            out.append((rr, cc))
    return out


def _spans(cells, size, color, start_cells, goal_cells):
    """BFS through same-colored stones from any start to any goal cell."""
    start = [p for p in start_cells if cells[p[0] * size + p[1]] == color]
    goals = set(goal_cells)
    seen = set(start)
    frontier = deque(start)
    while frontier:
        r, c = frontier.popleft()
        if (r, c) in goals:
            return True
        for nr, nc in hex_neighbors(r, c, size):
            if (nr, nc) not in seen and cells[nr * size + nc] == color:
                seen.add((nr, nc))
                frontier.append((nr, nc))
    return False


def bfs_winner(cells, size):
    """Winner by breadth-first path search: BLACK spans top-bottom,
    WHITE spans left-right, or None."""
    top = [(0, c) for c in range(size)]
    bottom = [(size - 1, c) for c in range(size)]
    left = [(r, 0) for r in range(size)]
    right = [(r, size - 1) for r in range(size)]
    black = _spans(cells, size, BLACK, top, bottom)
    white = _spans(cells, size, WHITE, left, right)
    assert not (black and white), "two crossing chains cannot coexist"
    if black:
        return BLACK
    if white:
        return WHITE
    return None


class SetPartitionOracle:
    """Naive reachability bookkeeping: connectivity as explicit merged sets."""

    def __init__(self, n):
        self.sets = [{i} for i in range(n)]
        self.where = list(range(n))

    def union(self, a, b):
        sa, sb = self.where[a], self.where[b]
        if sa == sb:
            return
        if len(self.sets[sa]) < len(self.sets[sb]):
            sa, sb = sb, sa
        for x in self.sets[sb]:
            self.where[x] = sa
        self.sets[sa] |= self.sets[sb]
        self.sets[sb] = set()

    def connected(self, a, b):
        return self.where[a] == self.where[b]
