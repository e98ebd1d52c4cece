"""Vertex-partitioned graph instances and structural queries.

An instance pairs a finite simple graph with an ordered partition of its
vertex set into blocks. Vertices are dense 0-based integers and blocks are
addressed by their position in the partition, so every derived artifact
(traces, JSON files, DOT exports) is canonical and byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class InstanceFormatError(ValueError):
    """Instance JSON text violates the canonical file format."""


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def groups(self) -> list[list[int]]:
        """Members per set, each ascending, ordered by smallest member."""
        out: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), []).append(x)
        return sorted(out.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    ``edges`` holds each edge once as an ascending pair; the tuple itself is
    sorted, so equal graphs compare equal structurally.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    @staticmethod
    def from_edges(n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        normalized = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            normalized.add((u, v) if u < v else (v, u))
        return Graph(n, tuple(sorted(normalized)))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        neigh: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            neigh[u].add(v)
            neigh[v].add(u)
        return tuple(frozenset(s) for s in neigh)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    @cached_property
    def max_degree(self) -> int:
        return max((len(s) for s in self.adjacency), default=0)


@dataclass(frozen=True)
class Instance:
    """A graph together with an ordered partition of its vertices into blocks.

    Construction does not enforce the partition invariants; ``validate``
    reports violations, which lets callers inspect malformed inputs instead
    of crashing on them.
    """

    graph: Graph
    blocks: tuple[tuple[int, ...], ...]

    @staticmethod
    def make(graph: Graph, blocks: Iterable[Iterable[int]]) -> "Instance":
        return Instance(graph, tuple(tuple(sorted(b)) for b in blocks))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return len(self.blocks)

    @cached_property
    def block_of(self) -> dict[int, int]:
        owner: dict[int, int] = {}
        for i, block in enumerate(self.blocks):
            for v in block:
                owner.setdefault(v, i)
        return owner

    def block_set(self, i: int) -> frozenset[int]:
        return frozenset(self.blocks[i])


def validate(instance: Instance) -> list[str]:
    """All violated partition invariants, empty when the instance is valid."""
    problems: list[str] = []
    n = instance.n
    seen: dict[int, int] = {}
    for i, block in enumerate(instance.blocks):
        if not block:
            problems.append(f"block {i} is empty")
        for v in block:
            if not 0 <= v < n:
                problems.append(f"block {i} holds out-of-range vertex {v}")
            elif v in seen:
                problems.append(
                    f"blocks not disjoint: vertex {v} in blocks {seen[v]} and {i}"
                )
            else:
                seen[v] = i
    missing = [v for v in range(n) if v not in seen]
    if missing:
        problems.append(f"block union != vertex set: missing vertices {missing}")
    return problems


def _as_vertex_set(instance: Instance, x: Iterable[int]) -> frozenset[int]:
    xs = frozenset(x)
    for v in xs:
        if not 0 <= v < instance.n:
            raise ValueError(f"vertex {v} out of range for n={instance.n}")
    return xs


def index_set(instance: Instance, x: Iterable[int]) -> frozenset[int]:
    """Indices of the blocks that the vertex set meets."""
    xs = _as_vertex_set(instance, x)
    return frozenset(instance.block_of[v] for v in xs)


@dataclass(frozen=True)
class BlockGraph:
    """Multigraph on block indices obtained by contracting a vertex set blockwise.

    ``edges`` lists each parallel edge separately as an ascending pair;
    a pair (i, i) is a loop and contributes two to the degree of i.
    """

    nodes: frozenset[int]
    edges: tuple[tuple[int, int], ...]

    def degree(self, i: int) -> int:
        d = 0
        for a, b in self.edges:
            if a == i:
                d += 1
            if b == i:
                d += 1
        return d

    def multiplicity(self, i: int, j: int) -> int:
        pair = (i, j) if i <= j else (j, i)
        return sum(1 for e in self.edges if e == pair)

    def components(self) -> list[frozenset[int]]:
        order = sorted(self.nodes)
        pos = {b: k for k, b in enumerate(order)}
        uf = UnionFind(len(order))
        for a, b in self.edges:
            uf.union(pos[a], pos[b])
        return [frozenset(order[k] for k in grp) for grp in uf.groups()]

    def is_forest(self) -> bool:
        if any(a == b for a, b in self.edges):
            return False
        per_comp_edges: dict[frozenset[int], int] = {}
        comps = self.components()
        locate = {b: comp for comp in comps for b in comp}
        for a, _b in self.edges:
            comp = locate[a]
            per_comp_edges[comp] = per_comp_edges.get(comp, 0) + 1
        return all(per_comp_edges.get(comp, 0) == len(comp) - 1 for comp in comps)

    def is_disjoint_cycles(self) -> bool:
        return all(self.degree(i) == 2 for i in self.nodes)


def block_graph(instance: Instance, x: Iterable[int]) -> BlockGraph:
    """Contract each block's intersection with x to one node, keeping induced edges."""
    xs = _as_vertex_set(instance, x)
    nodes = frozenset(instance.block_of[v] for v in xs)
    edges = []
    for u, v in instance.graph.edges:
        if u in xs and v in xs:
            i, j = instance.block_of[u], instance.block_of[v]
            edges.append((i, j) if i <= j else (j, i))
    return BlockGraph(nodes, tuple(sorted(edges)))


def components(graph: Graph) -> list[tuple[int, ...]]:
    """Connected components as ascending tuples, ordered by smallest member."""
    uf = UnionFind(graph.n)
    for u, v in graph.edges:
        uf.union(u, v)
    return [tuple(grp) for grp in uf.groups()]


def induced_components(graph: Graph, vertices: Iterable[int]) -> list[tuple[int, ...]]:
    """Connected components of the subgraph induced on the given vertices."""
    vs = sorted(set(vertices))
    pos = {v: k for k, v in enumerate(vs)}
    uf = UnionFind(len(vs))
    for u, v in graph.edges:
        if u in pos and v in pos:
            uf.union(pos[u], pos[v])
    return [tuple(vs[k] for k in grp) for grp in uf.groups()]


def complete_bipartite_parts(
    graph: Graph, component: Iterable[int]
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """The bipartition (A, B) when the component induces a complete bipartite graph.

    Returns None when it does not (including a single isolated vertex, which
    has no two nonempty sides). The side containing the smallest vertex id is
    A, which makes the orientation deterministic.
    """
    comp = set(component)
    if not comp:
        raise ValueError("component must be nonempty")
    for v in comp:
        if not 0 <= v < graph.n:
            raise ValueError(f"vertex {v} out of range for n={graph.n}")
        for w in graph.neighbors(v):
            if w not in comp:
                raise ValueError("vertex set is not closed under edges")
    start = min(comp)
    color = {start: 0}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in graph.neighbors(v):
            if w not in color:
                color[w] = 1 - color[v]
                stack.append(w)
            elif color[w] == color[v]:
                return None
    if len(color) != len(comp):
        raise ValueError("vertex set is not connected")
    a = tuple(sorted(v for v in comp if color[v] == 0))
    b = tuple(sorted(v for v in comp if color[v] == 1))
    if not a or not b:
        return None
    inside = sum(1 for u, v in graph.edges if u in comp)
    if inside != len(a) * len(b):
        return None
    return a, b


@dataclass(frozen=True)
class BlockDeletion:
    """Result of deleting blocks: the sub-instance plus the id maps back.

    ``vertex_map`` and ``block_map`` send surviving old ids to their new,
    re-densified ids, so certificates computed in the sub-instance can be
    lifted back to the original.
    """

    instance: Instance
    vertex_map: dict[int, int]
    block_map: dict[int, int]


def delete_blocks(instance: Instance, block_indices: Iterable[int]) -> BlockDeletion:
    """Remove whole blocks (with their vertices), re-densifying ids in order."""
    drop = set(block_indices)
    for j in drop:
        if not 0 <= j < instance.m:
            raise ValueError(f"block index {j} out of range for m={instance.m}")
    removed = {v for j in drop for v in instance.blocks[j]}
    kept_vertices = [v for v in range(instance.n) if v not in removed]
    vmap = {old: new for new, old in enumerate(kept_vertices)}
    kept_blocks = [i for i in range(instance.m) if i not in drop]
    bmap = {old: new for new, old in enumerate(kept_blocks)}
    edges = [
        (vmap[u], vmap[v])
        for u, v in instance.graph.edges
        if u in vmap and v in vmap
    ]
    blocks = [tuple(vmap[v] for v in instance.blocks[i]) for i in kept_blocks]
    sub = Instance.make(Graph.from_edges(len(kept_vertices), edges), blocks)
    return BlockDeletion(sub, vmap, bmap)


def relabel(
    instance: Instance, vertex_map: Mapping[int, int], block_order: Sequence[int]
) -> Instance:
    """Apply a vertex bijection and reorder blocks; position k gets old block block_order[k]."""
    if sorted(vertex_map) != list(range(instance.n)) or sorted(
        vertex_map.values()
    ) != list(range(instance.n)):
        raise ValueError("vertex_map must be a bijection on the vertex range")
    if sorted(block_order) != list(range(instance.m)):
        raise ValueError("block_order must be a permutation of the block range")
    edges = [(vertex_map[u], vertex_map[v]) for u, v in instance.graph.edges]
    blocks = [
        tuple(sorted(vertex_map[v] for v in instance.blocks[old]))
        for old in block_order
    ]
    return Instance.make(Graph.from_edges(instance.n, edges), blocks)


# --- canonical JSON serialization -----------------------------------------


def to_payload(instance: Instance) -> dict:
    return {
        "n": instance.n,
        "edges": [list(e) for e in instance.graph.edges],
        "blocks": [list(b) for b in instance.blocks],
    }


def canonical_json(instance: Instance) -> str:
    """The one canonical text form: sorted keys, sorted lists, two-space indent."""
    return json.dumps(to_payload(instance), sort_keys=True, indent=2) + "\n"


class _ArrayLocator:
    """Best-effort line numbers for the elements of one top-level array key."""

    def __init__(self, text: str, key: str):
        self.lines: list[int] = []
        marker = f'"{key}"'
        pos = text.find(marker)
        if pos < 0:
            return
        try:
            pos = text.index(":", pos + len(marker))
            pos = text.index("[", pos) + 1
        except ValueError:
            return
        decoder = json.JSONDecoder()
        while pos < len(text):
            while pos < len(text) and text[pos] in " \t\r\n":
                pos += 1
            if pos >= len(text) or text[pos] == "]":
                break
            self.lines.append(text.count("\n", 0, pos) + 1)
            try:
                _, pos = decoder.raw_decode(text, pos)
            except json.JSONDecodeError:
                break
            while pos < len(text) and text[pos] in " \t\r\n":
                pos += 1
            if pos < len(text) and text[pos] == ",":
                pos += 1

    def line(self, k: int) -> int | None:
        return self.lines[k] if k < len(self.lines) else None


def _fail(line: int | None, message: str) -> None:
    prefix = f"line {line}: " if line is not None else ""
    raise InstanceFormatError(prefix + message)


def parse_instance(text: str) -> Instance:
    """Parse canonical instance JSON, rejecting invariant violations precisely.

    Errors carry the line of the offending edge or block when it can be
    located in the source text.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        _fail(1, "top level must be a JSON object")
    keys = set(data)
    if keys != {"n", "edges", "blocks"}:
        _fail(1, f"object must have exactly the keys n, edges, blocks (got {sorted(keys)})")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        _fail(1, "n must be a nonnegative integer")

    edge_lines = _ArrayLocator(text, "edges")
    raw_edges = data["edges"]
    if not isinstance(raw_edges, list):
        _fail(1, "edges must be an array")
    edges: list[tuple[int, int]] = []
    for k, item in enumerate(raw_edges):
        line = edge_lines.line(k)
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)
        ):
            _fail(line, f"edge #{k} must be a pair of integers")
        u, v = item
        if u == v:
            _fail(line, f"edge #{k} is a self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            _fail(line, f"edge #{k} = [{u}, {v}] out of range for n={n}")
        if u > v:
            _fail(line, f"edge #{k} = [{u}, {v}] must be ascending")
        edges.append((u, v))
    for k in range(1, len(edges)):
        if edges[k] <= edges[k - 1]:
            _fail(edge_lines.line(k), f"edge #{k} breaks the sorted, duplicate-free order")

    block_lines = _ArrayLocator(text, "blocks")
    raw_blocks = data["blocks"]
    if not isinstance(raw_blocks, list):
        _fail(1, "blocks must be an array")
    seen: dict[int, int] = {}
    blocks: list[tuple[int, ...]] = []
    for k, item in enumerate(raw_blocks):
        line = block_lines.line(k)
        if not isinstance(item, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in item
        ):
            _fail(line, f"block #{k} must be an array of integers")
        if not item:
            _fail(line, f"block #{k} is empty")
        if item != sorted(item) or len(set(item)) != len(item):
            _fail(line, f"block #{k} must be strictly ascending")
        for v in item:
            if not 0 <= v < n:
                _fail(line, f"block #{k} holds out-of-range vertex {v}")
            if v in seen:
                _fail(line, f"blocks not disjoint: vertex {v} in blocks {seen[v]} and {k}")
            seen[v] = k
        blocks.append(tuple(item))
    missing = [v for v in range(n) if v not in seen]
    if missing:
        _fail(block_lines.line(0), f"block union != vertex set: missing vertices {missing}")
    return Instance.make(Graph.from_edges(n, edges), blocks)


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def save_instance(instance: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(instance))


def instance_to_dot(instance: Instance) -> str:
    """DOT text for the graph with blocks drawn as clusters."""
    lines = ["graph instance {"]
    for i, block in enumerate(instance.blocks):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="U{i}";')
        for v in block:
            lines.append(f"    {v};")
        lines.append("  }")
    for u, v in instance.graph.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
