"""Connected interaction graphs: construction, ingestion, validation, sampling.

Vertices are the integers ``0..n-1``. Edges are undirected, stored
canonically as ``(low, high)`` pairs sorted lexicographically, with no
self-loops and no duplicates. All factory functions reject disconnected
results, so downstream code can treat any factory-built Graph as a valid
interaction network.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .rng import RngStream

__all__ = [
    "Graph",
    "GraphError",
    "GRAPH_FAMILIES",
    "build",
    "from_edge_list",
    "is_connected",
    "sample_edge",
]

GRAPH_FAMILIES = ("complete", "path", "cycle", "star", "grid", "erdos_renyi")


class GraphError(ValueError):
    """A graph violates the validity contract (simple, in-range, connected)."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1`` with canonical edges.

    The raw constructor checks structural validity (vertex range, edge
    canonicalization, no self-loops or duplicates, at least one edge) but
    not connectivity; use :func:`build`, :func:`from_edge_list`, or
    :meth:`from_edges` for that guarantee, and :func:`is_connected` to
    test an arbitrary instance.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise GraphError(f"graph needs at least 2 vertices, got n={self.n}")
        if not self.edges:
            raise GraphError("graph needs at least one edge")
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise GraphError(
                    f"edge ({u}, {v}) is not canonical for n={self.n}: "
                    "expected 0 <= low < high < n"
                )
        if list(self.edges) != sorted(set(self.edges)):
            raise GraphError("edges must be sorted and free of duplicates")

    @classmethod
    def from_edges(cls, n: int, edges) -> Graph:
        """Build a validated connected graph from any iterable of pairs.

        Pairs may appear in either orientation; they are canonicalized and
        sorted. Self-loops and duplicate edges (in either orientation) are
        rejected, as is a disconnected result.
        """
        canonical: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            pair = (u, v) if u < v else (v, u)
            if pair in seen:
                raise GraphError(f"duplicate edge {pair}")
            seen.add(pair)
            canonical.append(pair)
        graph = cls(n, tuple(sorted(canonical)))
        if not is_connected(graph):
            raise GraphError("graph is disconnected")
        return graph

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, vertex: int) -> int:
        return sum(1 for u, v in self.edges if vertex in (u, v))


def _adjacency(graph: Graph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(graph.n)]
    for u, v in graph.edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def is_connected(graph: Graph) -> bool:
    """True iff every vertex is reachable from vertex 0."""
    adj = _adjacency(graph)
    seen = [False] * graph.n
    seen[0] = True
    queue = deque([0])
    found = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                found += 1
                queue.append(v)
    return found == graph.n


def build(
    family: str,
    n: int | None = None,
    *,
    width: int | None = None,
    height: int | None = None,
    p: float | None = None,
    seed: int | None = None,
    max_attempts: int = 10_000,
) -> Graph:
    """Construct a named graph family instance.

    Families: ``complete``, ``path``, ``cycle``, ``star`` (hub is vertex 0)
    take ``n >= 2``. ``grid`` takes ``width`` and ``height`` (and optionally
    ``n``, which must equal ``width * height``). ``erdos_renyi`` takes
    ``n``, an edge probability ``p`` in (0, 1], and a ``seed``; candidates
    are redrawn until one is connected, which keeps the law uniform over
    connected outcomes, and gives up after ``max_attempts`` tries.

    A cycle on 2 vertices would duplicate its single edge, so it
    degenerates to the one-edge graph on 2 vertices.
    """
    key = family.replace("-", "_").lower()
    if key not in GRAPH_FAMILIES:
        raise GraphError(f"unknown graph family {family!r}; expected one of {GRAPH_FAMILIES}")

    if key == "grid":
        if width is None or height is None:
            raise GraphError("grid requires width and height")
        if width < 1 or height < 1:
            raise GraphError(f"grid dimensions must be positive, got {width}x{height}")
        if n is not None and n != width * height:
            raise GraphError(f"grid {width}x{height} has {width * height} vertices, not {n}")
        return _grid(width, height)

    if n is None:
        raise GraphError(f"family {family!r} requires n")
    if n < 2:
        raise GraphError(f"family {family!r} requires n >= 2, got {n}")

    if key == "complete":
        return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))
    if key == "path":
        return Graph(n, tuple((i, i + 1) for i in range(n - 1)))
    if key == "cycle":
        if n == 2:
            return Graph(2, ((0, 1),))
        ring = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
        return Graph(n, tuple(sorted(ring)))
    if key == "star":
        return Graph(n, tuple((0, i) for i in range(1, n)))

    # erdos_renyi
    if p is None or not 0.0 < p <= 1.0:
        raise GraphError(f"erdos_renyi requires edge probability p in (0, 1], got {p}")
    if seed is None:
        raise GraphError("erdos_renyi requires a seed")
    stream = RngStream(seed)
    for _ in range(max_attempts):
        edges = tuple(
            (i, j) for i in range(n) for j in range(i + 1, n) if stream.chance(p)
        )
        if edges:
            candidate = Graph(n, edges)
            if is_connected(candidate):
                return candidate
    raise GraphError(
        f"no connected sample in {max_attempts} attempts (n={n}, p={p}); "
        "raise p or max_attempts"
    )


def _grid(width: int, height: int) -> Graph:
    n = width * height
    if n < 2:
        raise GraphError("grid needs at least 2 vertices")
    edges = []
    for r in range(height):
        for c in range(width):
            v = r * width + c
            if c + 1 < width:
                edges.append((v, v + 1))
            if r + 1 < height:
                edges.append((v, v + width))
    return Graph(n, tuple(sorted(edges)))


def from_edge_list(text: str) -> Graph:
    """Parse the whitespace edge-list format into a validated Graph.

    Each non-blank line holds two distinct nonnegative vertex ids
    separated by whitespace. Lines starting with ``#`` are comments.
    The vertex count is one plus the largest id seen. Parse failures,
    self-loops, duplicate edges, and disconnected results each raise
    GraphError with a distinct message naming the offending line.
    """
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    max_vertex = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphError(f"line {lineno}: expected two vertex ids, got {raw!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphError(f"line {lineno}: vertex ids must be integers, got {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: vertex ids must be nonnegative, got {raw!r}")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at vertex {u}")
        pair = (u, v) if u < v else (v, u)
        if pair in seen:
            raise GraphError(f"line {lineno}: duplicate edge {pair}")
        seen.add(pair)
        edges.append(pair)
        max_vertex = max(max_vertex, pair[1])
    if not edges:
        raise GraphError("edge list is empty")
    graph = Graph(max_vertex + 1, tuple(sorted(edges)))
    if not is_connected(graph):
        raise GraphError("graph is disconnected")
    return graph


def sample_edge(graph: Graph, rng: RngStream) -> tuple[int, int]:
    """Draw one edge uniformly and return it in random orientation.

    Consumes exactly two draws: an edge index uniform over
    ``0..edge_count-1``, then an orientation bit. Each ordered pair
    therefore has probability ``1 / (2 * edge_count)``.
    """
    index = rng.uniform_int_inclusive(graph.edge_count - 1)
    u, v = graph.edges[index]
    if rng.uniform_int_inclusive(1):
        return v, u
    return u, v
