"""Four-phase UCT search over a shared tree with per-node locks.

Many tasks may run uct_search against the same root concurrently. Win and
visit counters are plain ints written only under the owning node's lock
(CPython offers no lock-free atomics); reads during selection are unlocked
and may be momentarily stale, which the search tolerates. Child slots are
pre-sized, written once under the lock, and published by bumping the slot
counter, so readers never see a half-built child.

Nodes store only the move that led to them: tasks reconstruct positions by
replaying moves on a copy of the root board while descending, which bounds
memory at one board per live task instead of one per node.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import log, sqrt
from typing import Optional

from .hex import HexBoard, Move, Player, random_playout
from .rng import RngStream

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class SearchConfig:
    """Tunables of one search run."""

    n_playouts: int
    n_tasks: int = 1
    cp: float = 1.0
    seed: int = 1
    board_size: int = 11

    def __post_init__(self):
        if self.n_playouts < 1:
            raise ValueError(f"n_playouts must be >= 1, got {self.n_playouts}")
        if self.n_tasks < 1:
            raise ValueError(f"n_tasks must be >= 1, got {self.n_tasks}")
        if self.cp < 0:
            raise ValueError(f"cp must be >= 0, got {self.cp}")


class TreeNode:
    """One node of the shared search tree.

    wins counts playouts won by player_just_moved, the player whose move led
    here, so a node's win rate is the quality of that move. The child slot
    array and the untried-move list are allocated on first expansion (the
    root eagerly); most nodes stay leaves and never pay for them. A slot
    array never grows: expansion claims the next index under the lock.
    """

    __slots__ = ("move", "player_just_moved", "parent", "lock", "wins",
                 "visits", "children", "child_count", "untried", "untried_left")

    def __init__(self, move: Optional[Move], player_just_moved: Player,
                 parent: Optional["TreeNode"] = None):
        self.move = move
        self.player_just_moved = player_just_moved
        self.parent = parent
        self.lock = threading.Lock()
        self.wins = 0
        self.visits = 0
        self.children: Optional[list[Optional[TreeNode]]] = None
        self.child_count = 0
        self.untried: Optional[list[Move]] = None
        self.untried_left = -1  # -1: not yet initialized from a board

    @classmethod
    def for_root(cls, board: HexBoard) -> "TreeNode":
        """Build a root for the position, child slots sized up front.

        Eager sizing means no task ever races the root's slot allocation.
        """
        root = cls(move=None, player_just_moved=board.to_move.opponent)
        root._initialize(board)
        return root

    def _initialize(self, board: HexBoard) -> None:
        """Size the slot array from the node's position. Call under lock
        (or before the node is shared)."""
        if self.untried_left != -1:
            return
        if board.winner() is not None:
            moves: list[Move] = []  # a decided game admits no further moves
        else:
            moves = board.legal_moves()
        self.untried = moves
        self.children = [None] * len(moves)
        self.untried_left = len(moves)

    def is_fully_expanded(self) -> bool:
        return self.untried_left == 0

    def filled_children(self) -> list["TreeNode"]:
        """The published children, in slot order."""
        if self.children is None:
            return []
        return [c for c in self.children[:self.child_count] if c is not None]


def uct_score(w_j: int, n_j: int, n_parent: int, cp: float) -> float:
    """Upper confidence score of a visited child: w_j/n_j + cp*sqrt(ln(n_parent)/n_j).

    Scoring an unvisited child (n_j == 0) is a contract violation; selection
    never asks for it.
    """
    if n_j < 1:
        raise ValueError(f"n_j must be >= 1, got {n_j}")
    if n_parent < 1:
        raise ValueError(f"n_parent must be >= 1, got {n_parent}")
    return w_j / n_j + cp * sqrt(log(n_parent) / n_j)


def select(node: TreeNode, board: HexBoard, cp: float) -> TreeNode:
    """Descend to the first node that is not fully expanded or is terminal.

    Replays each traversed move on board (mutated in place). At each fully
    expanded node the child with the highest confidence score is taken,
    ties to the lowest slot index. A child whose visit count still reads 0
    (its creating task has not backed up yet) is taken immediately: it is
    maximally unexplored.
    """
    while node.untried_left == 0:
        count = node.child_count
        if count == 0:
            break  # terminal: a decided position has no children
        children = node.children
        nv = node.visits
        log_parent = log(nv) if nv > 1 else 0.0
        best = None
        best_score = _NEG_INF
        for i in range(count):
            child = children[i]
            n = child.visits
            if n == 0:
                best = child
                break
            score = child.wins / n + cp * sqrt(log_parent / n)
            if score > best_score:
                best_score = score
                best = child
        board.place(best.move)
        node = best
    return node


def expand(node: TreeNode, board: HexBoard, stream: RngStream) -> TreeNode:
    """Claim one untried move at random and publish the new child.

    Returns node unchanged if it is terminal or (possibly because another
    task won the race) fully expanded. Otherwise plays the claimed move on
    board and returns the child. The whole step runs under the node's lock,
    so no information is lost and no slot is written twice.
    """
    with node.lock:
        if node.untried_left == -1:
            node._initialize(board)
        remaining = node.untried_left
        if remaining == 0:
            return node
        untried = node.untried
        j = stream.next_below(remaining)
        move = untried[j]
        untried[j] = untried[remaining - 1]
        untried.pop()
        node.untried_left = remaining - 1
        mover = board.to_move
        board.place(move)
        child = TreeNode(move=move, player_just_moved=mover, parent=node)
        node.children[node.child_count] = child
        node.child_count += 1
        return child


def backup(node: TreeNode, winner: Player) -> None:
    """Propagate one playout outcome along the parent links to the root.

    Every node on the path gains a visit; a win is credited where the
    player who moved into the node is the playout winner.
    """
    while node is not None:
        with node.lock:
            node.visits += 1
            if node.player_just_moved == winner:
                node.wins += 1
        node = node.parent


def uct_search(root: TreeNode, root_board: HexBoard, m: int,
               stream: RngStream, cp: float = 1.0) -> None:
    """Run exactly m select/expand/playout/backup iterations against root.

    Safe to call concurrently from many tasks sharing one root; each call
    must own its stream. root_board is only ever copied.
    """
    if m < 1:
        raise ValueError(f"iteration count must be >= 1, got {m}")
    for _ in range(m):
        board = root_board.copy()
        node = select(root, board, cp)
        node = expand(node, board, stream)
        winner = random_playout(board, stream)
        backup(node, winner)


def best_child(root: TreeNode) -> Move:
    """The move of the most-visited child, ties to the lowest slot index."""
    children = root.filled_children()
    if not children:
        raise ValueError("root has no children; search has not expanded it")
    best = children[0]
    for child in children[1:]:
        if child.visits > best.visits:
            best = child
    return best.move


def dump_tree(root: TreeNode) -> str:
    """Deterministic depth-first dump: one node per line, indented by depth,
    as '<move> <wins> <visits>' with '-' for the root. Children appear in
    slot (creation) order, so sequential runs dump identically."""
    lines: list[str] = []

    def walk(node: TreeNode, depth: int) -> None:
        move = "-" if node.move is None else node.move
        lines.append(f"{'  ' * depth}{move} {node.wins} {node.visits}")
        for child in node.filled_children():
            walk(child, depth + 1)

    walk(root, 0)
    return "\n".join(lines)
