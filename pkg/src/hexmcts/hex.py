"""Hex game rules: board state, move generation, playouts, winner detection.

Board cells live on a size x size rhombus of hexagons, indexed row-major.
Cell (r, c) is adjacent to (r, c+-1), (r+-1, c), (r-1, c+1) and (r+1, c-1).
Black owns the top and bottom edges and moves first; White owns the left and
right edges. A player wins by connecting their two edges with a chain of
their stones; a completely filled board always has exactly one winner.

Connectivity is tracked incrementally with a disjoint-set structure over
all cells plus four virtual edge nodes, so the winner test is two finds.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Optional

from .rng import RngStream

# Move: a cell index in [0, size*size).
Move = int

EMPTY = 0


class Player(IntEnum):
    BLACK = 1  # connects top to bottom, moves first
    WHITE = 2  # connects left to right

    @property
    def opponent(self) -> "Player":
        return Player(3 - self)


BLACK = Player.BLACK
WHITE = Player.WHITE


class DisjointSet:
    """Union-find with union by size and two-pass path compression.

    Roots store their negated set size, so one flat list holds both the
    parent links and the balancing metadata (cheap to copy per playout).
    """

    __slots__ = ("_parent",)

    def __init__(self, n_elements: int):
        self._parent = [-1] * n_elements

    def __len__(self) -> int:
        return len(self._parent)

    def find(self, x: int) -> int:
        parent = self._parent
        root = x
        while parent[root] >= 0:
            root = parent[root]
        while parent[x] >= 0:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b; returns False if already joined."""
        parent = self._parent
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if parent[ra] > parent[rb]:  # sizes are negative: ra must be the bigger set
            ra, rb = rb, ra
        parent[ra] += parent[rb]
        parent[rb] = ra
        return True

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def copy(self) -> "DisjointSet":
        dup = DisjointSet.__new__(DisjointSet)
        dup._parent = self._parent.copy()
        return dup


class _Geometry:
    """Immutable per-size tables, shared by every board of that size."""

    __slots__ = ("size", "n2", "nbrs", "bit", "top_mask", "bottom_mask",
                 "pad_w", "black_top", "black_bottom", "white_left", "white_right")

    def __init__(self, size: int):
        n2 = size * size
        self.size = size
        self.n2 = n2
        # Virtual edge nodes, appended after the real cells.
        self.black_top = n2
        self.black_bottom = n2 + 1
        self.white_left = n2 + 2
        self.white_right = n2 + 3

        # Neighbor lists include the virtual nodes a cell touches. Virtual
        # nodes carry their owner's color in the cells array, so "same color
        # as the mover" covers edge unions with no special cases.
        nbrs = []
        for r in range(size):
            for c in range(size):
                lst = []
                for dr, dc in ((-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0)):
                    rr, cc = r + dr, c + dc
                    if 0 <= rr < size and 0 <= cc < size:
                        lst.append(rr * size + cc)
                if r == 0:
                    lst.append(self.black_top)
                if r == size - 1:
                    lst.append(self.black_bottom)
                if c == 0:
                    lst.append(self.white_left)
                if c == size - 1:
                    lst.append(self.white_right)
                nbrs.append(tuple(lst))
        self.nbrs = tuple(nbrs)

        # Bitboard layout: one padding column per row so that single-bit
        # shifts never bleed across row boundaries.
        w = size + 1
        self.pad_w = w
        self.bit = tuple(1 << (r * w + c) for r in range(size) for c in range(size))
        top = bottom = 0
        for c in range(size):
            top |= self.bit[c]
            bottom |= self.bit[(size - 1) * size + c]
        self.top_mask = top
        self.bottom_mask = bottom


_GEOMETRY_CACHE: dict[int, _Geometry] = {}


def _geometry(size: int) -> _Geometry:
    geo = _GEOMETRY_CACHE.get(size)
    if geo is None:
        geo = _GEOMETRY_CACHE[size] = _Geometry(size)
    return geo


def _black_spans(black_bits: int, geo: _Geometry) -> bool:
    """Flood fill over black stones: does black connect top to bottom?"""
    reach = black_bits & geo.top_mask
    if not reach:
        return False
    bottom = geo.bottom_mask
    w = geo.pad_w
    wm1 = w - 1
    while True:
        grown = (reach
                 | (reach << 1) | (reach >> 1)
                 | (reach << w) | (reach >> w)
                 | (reach << wm1) | (reach >> wm1)) & black_bits
        if grown & bottom:
            return True
        if grown == reach:
            return False
        reach = grown


class HexBoard:
    """Mutable Hex position.

    Single-owner value: never share one board mutably across workers. Tasks
    copy() the root position and replay moves on their copy. Stones are never
    removed, so the disjoint set needs no rollback.
    """

    __slots__ = ("size", "cells", "to_move", "dsu", "empty_count", "bb_black", "_geo")

    def __init__(self, size: int):
        if size < 1:
            raise ValueError(f"board size must be >= 1, got {size}")
        geo = _geometry(size)
        self._geo = geo
        self.size = size
        # Virtual edge nodes sit at the tail, pre-colored with their owner,
        # which makes the neighbor color test uniform for edge unions.
        self.cells = [EMPTY] * geo.n2 + [BLACK, BLACK, WHITE, WHITE]
        self.to_move: Player = BLACK
        self.dsu = DisjointSet(geo.n2 + 4)
        self.empty_count = geo.n2
        self.bb_black = 0  # black stones only; see random_playout

    def copy(self) -> "HexBoard":
        dup = HexBoard.__new__(HexBoard)
        dup._geo = self._geo
        dup.size = self.size
        dup.cells = self.cells.copy()
        dup.to_move = self.to_move
        dup.dsu = self.dsu.copy()
        dup.empty_count = self.empty_count
        dup.bb_black = self.bb_black
        return dup

    def legal_moves(self) -> list[Move]:
        """Empty cells in ascending index order."""
        cells = self.cells
        return [i for i in range(self._geo.n2) if cells[i] == EMPTY]

    def place(self, move: Move) -> None:
        """Place the side-to-move's stone; unions neighbors, flips the turn.

        Placing on an occupied or out-of-range cell is a contract violation.
        """
        cells = self.cells
        if not 0 <= move < self._geo.n2:
            raise ValueError(f"move {move} out of range for board size {self.size}")
        if cells[move] != EMPTY:
            raise ValueError(f"cell {move} is already occupied")
        mover = self.to_move
        cells[move] = mover
        dsu = self.dsu
        for nb in self._geo.nbrs[move]:
            if cells[nb] == mover:
                dsu.union(move, nb)
        if mover == BLACK:
            self.bb_black |= self._geo.bit[move]
        self.empty_count -= 1
        self.to_move = WHITE if mover == BLACK else BLACK

    def winner(self) -> Optional[Player]:
        """The player whose virtual edge nodes are joined, if any.

        At most one player can connect: the two chains would have to cross.
        """
        geo = self._geo
        dsu = self.dsu
        if dsu.find(geo.black_top) == dsu.find(geo.black_bottom):
            return BLACK
        if dsu.find(geo.white_left) == dsu.find(geo.white_right):
            return WHITE
        return None

    def __str__(self) -> str:
        chars = {EMPTY: ".", BLACK: "X", WHITE: "O"}
        s = self.size
        rows = []
        for r in range(s):
            row = self.cells[r * s:(r + 1) * s]
            rows.append(" " * r + " ".join(chars[v] for v in row))
        return "\n".join(rows)


def random_playout(board: HexBoard, stream: RngStream) -> Player:
    """Complete the game with uniformly random alternating moves; return the winner.

    A board that is already won returns its winner with no moves played.
    Otherwise the empty cells are filled in a uniformly random order with
    alternating colors, which draws from exactly the same distribution as
    move-by-move uniform random play. The winner of the filled board equals
    the first winner along the way: a completed chain can never be cut, and
    it blocks the opponent's crossing for good. That leaves one connectivity
    test over black's stones; if black does not span, white does.

    The input board is not modified.
    """
    won = board.winner()
    if won is not None:
        return won
    geo = board._geo
    cells = board.cells
    empties = [i for i in range(geo.n2) if cells[i] == EMPTY]
    order = stream.permutation(len(empties))
    bit = geo.bit
    black = board.bb_black
    # The mover takes positions 0, 2, 4, ... of the random order.
    first = 0 if board.to_move == BLACK else 1
    for j in order[first::2]:
        black |= bit[empties[j]]
    return BLACK if _black_spans(black, geo) else WHITE
