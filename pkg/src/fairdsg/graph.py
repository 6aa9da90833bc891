"""Graph containers and the density / balance / fairness measures.

Everything in this module is immutable after construction and safe to share
between threads. Graphs are canonicalized on construction (self-loops dropped,
duplicate edges merged by summing weights, endpoints stored with u < v and
sorted), so the same edge multiset always produces identical arrays regardless
of input order.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

RED = 0
BLUE = 1

_CODE_OF_LABEL = {"R": RED, "B": BLUE}
_LABEL_OF_CODE = {RED: "R", BLUE: "B"}


class Coloring:
    """Per-node Red/Blue assignment with cached class counts."""

    __slots__ = ("codes", "n_red", "n_blue")

    def __init__(self, codes: Iterable[int]):
        arr = np.array(list(codes) if not isinstance(codes, np.ndarray) else codes,
                       dtype=np.int8)
        if arr.ndim != 1:
            raise ValueError("color codes must form a one-dimensional sequence")
        if arr.size and not np.isin(arr, (RED, BLUE)).all():
            raise ValueError("color codes must be RED (0) or BLUE (1)")
        arr.flags.writeable = False
        self.codes = arr
        self.n_blue = int(arr.sum())
        self.n_red = int(arr.size) - self.n_blue

    @property
    def n(self) -> int:
        return int(self.codes.size)

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "Coloring":
        """Build from 'R'/'B' characters, e.g. the string ``"RRBB"``."""
        try:
            return cls([_CODE_OF_LABEL[ch] for ch in labels])
        except KeyError as exc:
            raise ValueError(f"unknown color label {exc.args[0]!r}") from None

    def labels(self) -> str:
        return "".join(_LABEL_OF_CODE[int(c)] for c in self.codes)

    def red_mask(self) -> np.ndarray:
        return self.codes == RED

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Coloring) and np.array_equal(self.codes, other.codes)

    def __repr__(self) -> str:
        return f"Coloring(n_red={self.n_red}, n_blue={self.n_blue})"


class NodeSet:
    """Strictly sorted, duplicate-free set of node ids.

    The normalized indicator (1/sqrt(m) on members, 0 elsewhere) is
    materialized on demand via :meth:`indicator`.
    """

    __slots__ = ("members",)

    def __init__(self, members: Iterable[int] = ()):
        arr = np.unique(np.fromiter((int(i) for i in members), dtype=np.int64))
        if arr.size and arr[0] < 0:
            raise ValueError("node ids must be non-negative")
        arr.flags.writeable = False
        self.members = arr

    @property
    def size(self) -> int:
        return int(self.members.size)

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        return (int(i) for i in self.members)

    def __contains__(self, node: int) -> bool:
        i = np.searchsorted(self.members, node)
        return i < self.members.size and self.members[i] == node

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NodeSet) and np.array_equal(self.members, other.members)

    def __repr__(self) -> str:
        inner = ", ".join(str(i) for i in self.members[:8])
        if self.size > 8:
            inner += ", ..."
        return f"NodeSet([{inner}], size={self.size})"

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(int(i) for i in self.members)

    def mask(self, n: int) -> np.ndarray:
        """Boolean membership mask over node ids 0..n-1."""
        self._check_range(n)
        out = np.zeros(n, dtype=bool)
        out[self.members] = True
        return out

    def indicator(self, n: int) -> np.ndarray:
        """Normalized indicator: 1/sqrt(m) on members, 0 elsewhere."""
        if self.size == 0:
            raise ValueError("indicator of the empty set is undefined")
        out = np.zeros(n, dtype=np.float64)
        self._check_range(n)
        out[self.members] = 1.0 / np.sqrt(self.size)
        return out

    def _check_range(self, n: int) -> None:
        if self.size and self.members[-1] >= n:
            raise ValueError(
                f"node id {int(self.members[-1])} out of range for n={n}")


class LabeledGraph:
    """Undirected weighted graph in canonical compressed-sparse form.

    Attributes
    ----------
    n : node count (ids are dense, 0..n-1)
    edge_u, edge_v, edge_w : canonical edge list with edge_u < edge_v,
        sorted lexicographically
    arc_src, arc_dst, arc_w : both orientations of every edge, sorted,
        with CSR-style ``indptr`` for per-node slices
    degrees : weighted degree per node
    d_max : maximum weighted degree
    node_names : optional external identifier per node
    """

    __slots__ = ("n", "edge_u", "edge_v", "edge_w", "arc_src", "arc_dst", "arc_w",
                 "indptr", "degrees", "d_max", "node_names",
                 "n_self_loops_dropped", "n_duplicates_merged")

    def __init__(self, n: int, edge_u: np.ndarray, edge_v: np.ndarray,
                 edge_w: np.ndarray, node_names: Sequence[str] | None,
                 n_self_loops_dropped: int, n_duplicates_merged: int):
        self.n = int(n)
        self.edge_u = edge_u
        self.edge_v = edge_v
        self.edge_w = edge_w
        for a in (edge_u, edge_v, edge_w):
            a.flags.writeable = False
        src = np.concatenate([edge_u, edge_v])
        dst = np.concatenate([edge_v, edge_u])
        w2 = np.concatenate([edge_w, edge_w])
        order = np.lexsort((dst, src))
        self.arc_src = src[order]
        self.arc_dst = dst[order]
        self.arc_w = w2[order]
        for a in (self.arc_src, self.arc_dst, self.arc_w):
            a.flags.writeable = False
        counts = np.bincount(self.arc_src, minlength=self.n) if self.n else np.zeros(0, np.int64)
        self.indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.indptr.flags.writeable = False
        if self.n:
            self.degrees = np.bincount(self.arc_src, weights=self.arc_w, minlength=self.n)
        else:
            self.degrees = np.zeros(0, dtype=np.float64)
        self.degrees.flags.writeable = False
        self.d_max = float(self.degrees.max()) if self.n else 0.0
        if node_names is not None:
            names = tuple(str(s) for s in node_names)
            if len(names) != self.n:
                raise ValueError("node_names length must equal the node count")
            self.node_names = names
        else:
            self.node_names = None
        self.n_self_loops_dropped = int(n_self_loops_dropped)
        self.n_duplicates_merged = int(n_duplicates_merged)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence],
                   node_names: Sequence[str] | None = None) -> "LabeledGraph":
        """Build a graph from (u, v) or (u, v, w) items.

        Unweighted pairs get weight 1.0. Self-loops are dropped and counted;
        parallel edges are merged by summing their weights.
        """
        if n < 0:
            raise ValueError("node count must be non-negative")
        acc: dict[tuple[int, int], float] = {}
        self_loops = 0
        duplicates = 0
        for item in edges:
            if len(item) == 2:
                u, v = item
                w = 1.0
            else:
                u, v, w = item
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a node id outside 0..{n - 1}")
            if w < 0.0:
                raise ValueError(f"edge ({u}, {v}) has negative weight {w}")
            if u == v:
                self_loops += 1
                continue
            key = (u, v) if u < v else (v, u)
            if key in acc:
                acc[key] += w
                duplicates += 1
            else:
                acc[key] = w
        if acc:
            keys = sorted(acc)
            eu = np.array([k[0] for k in keys], dtype=np.int64)
            ev = np.array([k[1] for k in keys], dtype=np.int64)
            ew = np.array([acc[k] for k in keys], dtype=np.float64)
        else:
            eu = np.zeros(0, dtype=np.int64)
            ev = np.zeros(0, dtype=np.int64)
            ew = np.zeros(0, dtype=np.float64)
        return cls(n, eu, ev, ew, node_names, self_loops, duplicates)

    @property
    def num_edges(self) -> int:
        return int(self.edge_u.size)

    @property
    def total_weight(self) -> float:
        return float(self.edge_w.sum())

    def edges(self) -> Iterator[tuple[int, int, float]]:
        for u, v, w in zip(self.edge_u, self.edge_v, self.edge_w):
            yield int(u), int(v), float(w)

    def neighbors(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        """(neighbor ids, weights) of node u, sorted by neighbor id."""
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return self.arc_dst[lo:hi], self.arc_w[lo:hi]

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Adjacency-matrix action A @ x without materializing A."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n,):
            raise ValueError(f"vector of length {x.size} does not match n={self.n}")
        if self.arc_src.size == 0:
            return np.zeros(self.n, dtype=np.float64)
        return np.bincount(self.arc_src, weights=self.arc_w * x[self.arc_dst],
                           minlength=self.n)

    def same_structure(self, other: "LabeledGraph") -> bool:
        """True when both graphs have identical canonical edge arrays."""
        return (self.n == other.n
                and np.array_equal(self.edge_u, other.edge_u)
                and np.array_equal(self.edge_v, other.edge_v)
                and np.array_equal(self.edge_w, other.edge_w))

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, edges={self.num_edges})"


def density(g: LabeledGraph, s: NodeSet) -> float:
    """Average weighted degree of the subgraph induced by ``s``: 2 w(E_S)/|S|."""
    if s.size == 0:
        raise ValueError("empty-set density undefined")
    mask = s.mask(g.n)
    inside = mask[g.edge_u] & mask[g.edge_v]
    return 2.0 * float(g.edge_w[inside].sum()) / s.size


def color_counts(s: NodeSet, c: Coloring) -> tuple[int, int]:
    """(red, blue) member counts of ``s``."""
    if s.size:
        s._check_range(c.n)
        blue = int((c.codes[s.members] == BLUE).sum())
        return s.size - blue, blue
    return 0, 0


def balance(s: NodeSet, c: Coloring) -> float:
    """min(x/y, y/x) over the color counts x, y; 0.0 when a class is empty."""
    if s.size == 0:
        raise ValueError("balance of the empty set is undefined")
    x, y = color_counts(s, c)
    if x == 0 or y == 0:
        return 0.0
    return min(x / y, y / x)


def imbalance(s: NodeSet, c: Coloring) -> int:
    """| |S ∩ Red| - |S ∩ Blue| |; the empty set is vacuously balanced."""
    x, y = color_counts(s, c)
    return abs(x - y)


def is_fair(s: NodeSet, c: Coloring) -> bool:
    return imbalance(s, c) == 0


def induced_subgraph(g: LabeledGraph, s: NodeSet) -> LabeledGraph:
    """Subgraph induced by ``s``, densely relabeled in member order.

    The original ids survive through ``node_names`` (existing names are
    propagated, otherwise the stringified original id is used).
    """
    s._check_range(g.n)
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[s.members] = np.arange(s.size)
    mask = s.mask(g.n)
    inside = mask[g.edge_u] & mask[g.edge_v]
    edges = zip(new_id[g.edge_u[inside]], new_id[g.edge_v[inside]], g.edge_w[inside])
    if g.node_names is not None:
        names = [g.node_names[i] for i in s.members]
    else:
        names = [str(int(i)) for i in s.members]
    return LabeledGraph.from_edges(s.size, edges, node_names=names)
