"""Exhaustive ground truth for independent transversals.

Everything here is brute force on purpose: enumerate the independent
transversals, build the reconfiguration graph, and decide the minimality
predicates by checking every single-block deletion. The enumeration guard
keeps the tooling desk-scale; it refuses loudly instead of hanging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

from .instance import Instance, UnionFind, delete_blocks

DEFAULT_ENUMERATION_CAP = 10_000_000


class EnumerationCapExceeded(RuntimeError):
    """The transversal search space exceeds the configured cap."""


class RGStatus(Enum):
    EMPTY = "EMPTY"
    CONNECTED = "CONNECTED"
    DISCONNECTED = "DISCONNECTED"


@dataclass(frozen=True)
class Transversal:
    """One chosen vertex per block, indexed by block position.

    Independence is a property checked separately, not an invariant of the
    type.
    """

    choice: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.choice)

    def as_set(self) -> frozenset[int]:
        return frozenset(self.choice)


def search_space(instance: Instance, block_indices: Iterable[int] | None = None) -> int:
    indices = range(instance.m) if block_indices is None else block_indices
    return math.prod(len(instance.blocks[i]) for i in indices)


def _guard_cap(instance: Instance, block_indices: Sequence[int], cap: int) -> None:
    space = search_space(instance, block_indices)
    if space > cap:
        raise EnumerationCapExceeded(
            f"search space {space} exceeds enumeration cap {cap}"
        )


def is_independent(instance: Instance, t: Transversal) -> bool:
    """True when no two chosen vertices are adjacent.

    Raises ValueError for malformed transversals (wrong length, or a vertex
    outside its block).
    """
    if len(t.choice) != instance.m:
        raise ValueError(
            f"transversal has {len(t.choice)} entries for {instance.m} blocks"
        )
    for i, v in enumerate(t.choice):
        if instance.block_of.get(v) != i:
            raise ValueError(f"vertex {v} is not in block {i}")
    adjacency = instance.graph.adjacency
    chosen = t.choice
    for i, v in enumerate(chosen):
        nv = adjacency[v]
        for u in chosen[i + 1 :]:
            if u in nv:
                return False
    return True


def its_over_blocks(
    instance: Instance,
    block_indices: Sequence[int],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[tuple[int, ...]]:
    """All independent choices over the listed blocks, one vertex per block.

    Vertices keep their original ids; the result is lexicographic in the
    choice vectors. This is the workhorse behind transversal enumeration and
    the sub-instance searches.
    """
    _guard_cap(instance, block_indices, cap)
    blocks = [instance.blocks[i] for i in block_indices]
    adjacency = instance.graph.adjacency
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def extend(k: int) -> None:
        if k == len(blocks):
            out.append(tuple(chosen))
            return
        for v in blocks[k]:
            nv = adjacency[v]
            if not any(u in nv for u in chosen):
                chosen.append(v)
                extend(k + 1)
                chosen.pop()

    extend(0)
    return out


def enumerate_its(
    instance: Instance, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[Transversal]:
    """All independent transversals in lexicographic order.

    With zero blocks the single empty transversal is returned: the empty
    instance counts as having exactly one (empty) transversal.
    """
    return [
        Transversal(c) for c in its_over_blocks(instance, range(instance.m), cap)
    ]


@dataclass(frozen=True)
class ReconfigGraph:
    """Graph on the independent transversals with the one-swap adjacency.

    Two transversals are adjacent when their union is independent and one
    vertex larger, i.e. they differ in exactly one block and the two
    representatives there are non-adjacent. Component labels are the
    smallest transversal index in the component.
    """

    its: tuple[Transversal, ...]
    neighbors: tuple[tuple[int, ...], ...]
    component_id: tuple[int, ...]

    @cached_property
    def index_by_choice(self) -> dict[tuple[int, ...], int]:
        return {t.choice: k for k, t in enumerate(self.its)}

    def index_of(self, choice: tuple[int, ...]) -> int | None:
        return self.index_by_choice.get(tuple(choice))

    @property
    def edge_count(self) -> int:
        return sum(len(ns) for ns in self.neighbors) // 2

    @property
    def component_count(self) -> int:
        return len(set(self.component_id))

    def component_members(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for k, label in enumerate(self.component_id):
            out.setdefault(label, []).append(k)
        return {label: tuple(members) for label, members in out.items()}


def build_rg(instance: Instance, cap: int = DEFAULT_ENUMERATION_CAP) -> ReconfigGraph:
    """Enumerate the transversals and connect single-block swaps.

    Edges are found by scanning replacements within each block of each
    transversal rather than comparing all pairs.
    """
    its = enumerate_its(instance, cap)
    index = {t.choice: k for k, t in enumerate(its)}
    adjacency = instance.graph.adjacency
    neighbors: list[list[int]] = [[] for _ in its]
    for k, t in enumerate(its):
        chosen = t.choice
        for i in range(instance.m):
            for v in instance.blocks[i]:
                if v == chosen[i]:
                    continue
                nv = adjacency[v]
                if any(u in nv for u in chosen):
                    continue
                other = index[chosen[:i] + (v,) + chosen[i + 1 :]]
                neighbors[k].append(other)
        neighbors[k].sort()
    uf = UnionFind(len(its))
    for k, ns in enumerate(neighbors):
        for other in ns:
            uf.union(k, other)
    label: dict[int, int] = {}
    component_id = [0] * len(its)
    for k in range(len(its)):
        root = uf.find(k)
        if root not in label:
            label[root] = k
        component_id[k] = label[root]
    return ReconfigGraph(
        tuple(its), tuple(tuple(ns) for ns in neighbors), tuple(component_id)
    )


def rg_status(instance: Instance, cap: int = DEFAULT_ENUMERATION_CAP) -> RGStatus:
    """EMPTY, CONNECTED or DISCONNECTED; zero blocks count as CONNECTED."""
    rg = build_rg(instance, cap)
    if not rg.its:
        return RGStatus.EMPTY
    return RGStatus.CONNECTED if rg.component_count == 1 else RGStatus.DISCONNECTED


def is_minimally_rgd(instance: Instance, cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """Disconnected, yet every single-block deletion leaves a connected space."""
    if rg_status(instance, cap) is not RGStatus.DISCONNECTED:
        return False
    for i in range(instance.m):
        sub = delete_blocks(instance, [i]).instance
        if rg_status(sub, cap) is not RGStatus.CONNECTED:
            return False
    return True


def is_minimally_nit(instance: Instance, cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """No transversal at all, yet every single-block deletion is nonempty connected."""
    if rg_status(instance, cap) is not RGStatus.EMPTY:
        return False
    for i in range(instance.m):
        sub = delete_blocks(instance, [i]).instance
        if rg_status(sub, cap) is not RGStatus.CONNECTED:
            return False
    return True


def same_component(rg: ReconfigGraph, s: int, t: int) -> bool:
    if not (0 <= s < len(rg.its) and 0 <= t < len(rg.its)):
        raise IndexError("transversal index out of range")
    return rg.component_id[s] == rg.component_id[t]


_DOT_COLORS = (
    "lightblue",
    "lightgoldenrod",
    "lightpink",
    "palegreen",
    "plum",
    "lightsalmon",
    "khaki",
    "lightcyan",
)


def rg_to_dot(rg: ReconfigGraph) -> str:
    """DOT text for the reconfiguration graph, one fill color per component."""
    palette = {
        label: _DOT_COLORS[k % len(_DOT_COLORS)]
        for k, label in enumerate(sorted(set(rg.component_id)))
    }
    lines = ["graph reconfiguration {", "  node [style=filled];"]
    for k, t in enumerate(rg.its):
        text = "(" + ",".join(str(v) for v in t.choice) + ")"
        color = palette[rg.component_id[k]]
        lines.append(f'  {k} [label="{text}", fillcolor={color}];')
    for k, ns in enumerate(rg.neighbors):
        for other in ns:
            if k < other:
                lines.append(f"  {k} -- {other};")
    lines.append("}")
    return "\n".join(lines) + "\n"
