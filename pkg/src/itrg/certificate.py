"""Executable certificates behind disconnected transversal spaces.

Given an instance whose reconfiguration graph is disconnected, this module
picks an extremal transversal pair from two components, grows it into an
induced matching configuration, checks the configuration's structural
properties one by one, and finally derives for every block a witness vertex
whose entire neighborhood is one component side inside that block.

The growth and the witness surgery fail loudly: if a guaranteed step cannot
be carried out, the input violated the preconditions or the implementation
is wrong, and silently continuing would only corrupt the certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import (
    BlockGraph,
    Instance,
    block_graph,
    complete_bipartite_parts,
    components,
    index_set,
    induced_components,
)
from .oracle import (
    DEFAULT_ENUMERATION_CAP,
    ReconfigGraph,
    Transversal,
    build_rg,
    is_minimally_rgd,
    its_over_blocks,
)


class CertificateError(RuntimeError):
    """A guaranteed certificate step failed."""


@dataclass(frozen=True)
class FeasibleTuple:
    """A grown vertex set with the transversal pair it was grown from.

    ``stars`` maps each vertex of r outside both transversals (a star
    center) to its neighbors inside r that the pair shares. ``forest`` is
    the blockwise contraction of r minus the s-only vertices, whose trees
    hang from the ``roots``, the blocks where s and t disagree.
    """

    r: frozenset[int]
    s: Transversal
    t: Transversal
    c0: int
    c1: int
    stars: tuple[tuple[int, tuple[int, ...]], ...]
    forest: BlockGraph
    roots: tuple[int, ...]

    @property
    def s_set(self) -> frozenset[int]:
        return self.s.as_set()

    @property
    def t_set(self) -> frozenset[int]:
        return self.t.as_set()

    @property
    def shared(self) -> frozenset[int]:
        return self.s_set & self.t_set

    @property
    def swapped(self) -> frozenset[int]:
        return self.s_set ^ self.t_set

    def agreement_blocks(self) -> frozenset[int]:
        return frozenset(
            i for i, (a, b) in enumerate(zip(self.s.choice, self.t.choice)) if a == b
        )

    @classmethod
    def build(
        cls,
        instance: Instance,
        r: frozenset[int],
        s: Transversal,
        t: Transversal,
        c0: int,
        c1: int,
    ) -> "FeasibleTuple":
        r = frozenset(r)
        s_set, t_set = s.as_set(), t.as_set()
        shared = s_set & t_set
        adjacency = instance.graph.adjacency
        centers = sorted(r - (s_set | t_set))
        stars = tuple(
            (w, tuple(sorted(adjacency[w] & r & shared))) for w in centers
        )
        forest = block_graph(instance, r - (s_set - t_set))
        roots = tuple(
            sorted(
                i
                for i, (a, b) in enumerate(zip(s.choice, t.choice))
                if a != b
            )
        )
        return cls(r, s, t, c0, c1, stars, forest, roots)


def extremal_pair(
    instance: Instance,
    rg: ReconfigGraph | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Transversal, Transversal, ReconfigGraph]:
    """A pair from the two lowest-labeled components agreeing on as many blocks as possible.

    Ties break lexicographically on the pair of choice vectors, so reruns
    produce identical certificates.
    """
    rg = rg if rg is not None else build_rg(instance, cap)
    if not rg.its:
        raise ValueError("reconfiguration graph is empty")
    labels = sorted(set(rg.component_id))
    if len(labels) < 2:
        raise ValueError("reconfiguration graph is connected")
    c0, c1 = labels[0], labels[1]
    members0 = [k for k, c in enumerate(rg.component_id) if c == c0]
    members1 = [k for k, c in enumerate(rg.component_id) if c == c1]
    best_key = None
    best: tuple[int, int] | None = None
    for si in members0:
        s_choice = rg.its[si].choice
        for ti in members1:
            t_choice = rg.its[ti].choice
            agree = sum(1 for a, b in zip(s_choice, t_choice) if a == b)
            key = (-agree, s_choice, t_choice)
            if best_key is None or key < best_key:
                best_key = key
                best = (si, ti)
    assert best is not None
    return rg.its[best[0]], rg.its[best[1]], rg


@dataclass(frozen=True)
class GrowStep:
    """One growth iteration: the vertex adopted as a star center, the
    agreement-block transversal chosen for it, and everything added to the
    grown set (the vertex itself plus its new leaves)."""

    chosen: int
    candidate: tuple[int, ...]
    added: tuple[int, ...]


def _initial_tuple(
    instance: Instance, s: Transversal, t: Transversal, rg: ReconfigGraph
) -> FeasibleTuple:
    s_idx = rg.index_of(s.choice)
    t_idx = rg.index_of(t.choice)
    if s_idx is None or t_idx is None:
        raise ValueError("pair members are not transversals of this instance")
    c0, c1 = rg.component_id[s_idx], rg.component_id[t_idx]
    if c0 == c1:
        raise ValueError("pair members lie in the same component")
    return FeasibleTuple.build(instance, s.as_set() ^ t.as_set(), s, t, c0, c1)


def grow_trace(
    instance: Instance,
    s: Transversal,
    t: Transversal,
    rg: ReconfigGraph,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[FeasibleTuple, tuple[GrowStep, ...]]:
    """Grow the pair's symmetric difference until it totally dominates its blocks.

    Each round picks the smallest vertex x in the touched blocks with no
    neighbor in the grown set, searches all transversals of the agreement
    blocks that (a) agree with the shared choice on touched blocks, (b) send
    no edge from their new vertices into the grown set, and (c) complete both
    half-pairs back into the original two components, and adopts one that
    minimizes x's neighbors in it (ties: lexicographically smallest). The
    grown set absorbs x and those neighbors. Feasibility is re-checked after
    every round and any violation aborts.
    """
    adjacency = instance.graph.adjacency
    tup = _initial_tuple(instance, s, t, rg)
    props = check_feasible(instance, tup, rg)
    if not all(props.values()):
        raise CertificateError(f"initial pair is not feasible: {props}")
    agreement = sorted(tup.agreement_blocks())
    candidates = its_over_blocks(instance, agreement, cap)
    cur_s = list(s.choice)
    cur_t = list(t.choice)
    r = set(tup.r)
    steps: list[GrowStep] = []
    for _ in range(instance.n + 1):
        touched = sorted({instance.block_of[v] for v in r})
        touched_set = set(touched)
        domain = sorted(v for i in touched for v in instance.blocks[i])
        undominated = [x for x in domain if not (adjacency[x] & r)]
        if not undominated:
            break
        x = undominated[0]
        nx = adjacency[x]
        best_key = None
        chosen = None
        for cand in candidates:
            agrees = True
            for i, v in zip(agreement, cand):
                if i in touched_set and v != cur_s[i]:
                    agrees = False
                    break
            if not agrees:
                continue
            if any(v not in r and (adjacency[v] & r) for v in cand):
                continue
            lookup = dict(zip(agreement, cand))
            s_choice = tuple(
                lookup.get(i, cur_s[i]) for i in range(instance.m)
            )
            s_idx = rg.index_of(s_choice)
            if s_idx is None or rg.component_id[s_idx] != tup.c0:
                continue
            t_choice = tuple(
                lookup.get(i, cur_t[i]) for i in range(instance.m)
            )
            t_idx = rg.index_of(t_choice)
            if t_idx is None or rg.component_id[t_idx] != tup.c1:
                continue
            conflicts = len(nx & set(cand))
            key = (conflicts, cand)
            if best_key is None or key < best_key:
                best_key = key
                chosen = (cand, s_choice, t_choice)
        if chosen is None:
            raise CertificateError(
                f"no admissible agreement-block transversal for vertex {x}"
            )
        cand, s_choice, t_choice = chosen
        leaves = sorted(nx & set(cand))
        if not leaves:
            raise CertificateError(
                f"chosen transversal leaves vertex {x} without neighbors in it"
            )
        r |= {x, *leaves}
        cur_s, cur_t = list(s_choice), list(t_choice)
        steps.append(GrowStep(x, cand, tuple([x] + leaves)))
        tup = FeasibleTuple.build(
            instance,
            frozenset(r),
            Transversal(tuple(cur_s)),
            Transversal(tuple(cur_t)),
            tup.c0,
            tup.c1,
        )
        props = check_feasible(instance, tup, rg)
        if not all(props.values()):
            raise CertificateError(
                f"feasibility lost after adopting vertex {x}: {props}"
            )
    else:
        raise CertificateError("growth failed to terminate")
    return tup, tuple(steps)


def grow(
    instance: Instance,
    s: Transversal,
    t: Transversal,
    rg: ReconfigGraph,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> FeasibleTuple:
    tup, _ = grow_trace(instance, s, t, rg, cap)
    return tup


def _max_agreement(rg: ReconfigGraph, c0: int, c1: int) -> int:
    best = -1
    members0 = [k for k, c in enumerate(rg.component_id) if c == c0]
    members1 = [k for k, c in enumerate(rg.component_id) if c == c1]
    for si in members0:
        s_choice = rg.its[si].choice
        for ti in members1:
            agree = sum(1 for a, b in zip(s_choice, rg.its[ti].choice) if a == b)
            best = max(best, agree)
    return best


def check_feasible(
    instance: Instance,
    tup: FeasibleTuple,
    rg: ReconfigGraph | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> dict[str, bool]:
    """The four defining properties of a grown tuple, each checked literally.

    extremal_pair: the two transversals sit in their recorded distinct
      components and agree on as many blocks as any pair from those
      components (verified by exhaustive pair scan).
    index_coverage: the swapped vertices all lie in the grown set, and the
      grown set meets a block through s exactly when it does through t.
    star_forest: the grown set minus the swapped vertices induces disjoint
      nontrivial stars, one per center outside both transversals, with all
      leaves shared by the pair.
    block_forest: contracting the grown set minus the s-only vertices
      blockwise gives a forest over the touched blocks, each tree holding
      exactly one disagreement block.
    """
    rg = rg if rg is not None else build_rg(instance, cap)
    adjacency = instance.graph.adjacency
    s_set, t_set = tup.s_set, tup.t_set
    shared, swapped = tup.shared, tup.swapped
    result: dict[str, bool] = {}

    extremal = False
    s_idx = rg.index_of(tup.s.choice)
    t_idx = rg.index_of(tup.t.choice)
    if s_idx is not None and t_idx is not None:
        placed = (
            rg.component_id[s_idx] == tup.c0
            and rg.component_id[t_idx] == tup.c1
            and tup.c0 != tup.c1
        )
        if placed:
            agree = sum(
                1 for a, b in zip(tup.s.choice, tup.t.choice) if a == b
            )
            extremal = agree == _max_agreement(rg, tup.c0, tup.c1)
    result["extremal_pair"] = extremal

    touched = index_set(instance, tup.r)
    result["index_coverage"] = (
        swapped <= tup.r
        and index_set(instance, tup.r & s_set) == touched
        and index_set(instance, tup.r & t_set) == touched
    )

    core = tup.r - swapped
    centers = tup.r - (s_set | t_set)
    comps = induced_components(instance.graph, core)
    stars_ok = len(comps) == len(centers)
    for comp in comps:
        comp_set = set(comp)
        comp_centers = comp_set & centers
        leaves = comp_set - comp_centers
        if len(comp_centers) != 1 or not leaves or not leaves <= shared:
            stars_ok = False
            break
        center = next(iter(comp_centers))
        if any(leaf not in adjacency[center] for leaf in leaves):
            stars_ok = False
            break
        if any(
            other in adjacency[leaf]
            for leaf in leaves
            for other in leaves
            if other > leaf
        ):
            stars_ok = False
            break
    result["star_forest"] = stars_ok

    bg = block_graph(instance, tup.r - (s_set - t_set))
    roots = set(tup.roots)
    rooted = all(len(set(comp) & roots) == 1 for comp in bg.components())
    result["block_forest"] = bg.nodes == touched and bg.is_forest() and rooted
    return result


@dataclass(frozen=True)
class ImcReport:
    """Verdicts for the induced-matching-configuration checks.

    ``full_index``: the grown set meets every block. ``covers_pair``: both
    transversals lie inside the grown set (and together meet every block).
    ``induced_matching``: the grown set induces a matching. The remaining
    flags are the configuration's consequences, checked independently:
    the swapped vertices contract to disjoint cycles blockwise, every vertex
    of the graph has exactly one neighbor in the grown set, matched swapped
    pairs have their whole neighborhoods inside each other's blocks, and
    every star center's neighborhood stays inside blocks hanging below it.
    """

    is_imc: bool
    full_index: bool
    covers_pair: bool
    induced_matching: bool
    swapped_blocks_are_cycles: bool
    unique_anchor: bool
    pair_neighborhoods_confined: bool
    center_neighborhoods_descend: bool


def _star_partner(tup: FeasibleTuple) -> dict[int, int]:
    """Each star center's unique leaf; raises when a star is not a single edge."""
    out: dict[int, int] = {}
    for center, leaves in tup.stars:
        if len(leaves) != 1:
            raise CertificateError(
                f"star at vertex {center} has {len(leaves)} leaves, expected one"
            )
        out[center] = leaves[0]
    return out


def _parent_edges(instance: Instance, tup: FeasibleTuple) -> dict[int, tuple[int, int]]:
    """Per child block, the (center, leaf) edge attaching it to its parent block."""
    out: dict[int, tuple[int, int]] = {}
    for center, leaf in _star_partner(tup).items():
        child = instance.block_of[leaf]
        if child in out:
            raise CertificateError(f"block {child} has two attachment edges")
        out[child] = (center, leaf)
    return out


def descendant_blocks(
    instance: Instance, tup: FeasibleTuple, center: int
) -> frozenset[int]:
    """Blocks reachable downward from a star center through its own edge.

    The center's leaf names the first block; from there every star centered
    in an already-reached block pulls in the block of its leaf.
    """
    partner = _star_partner(tup)
    if center not in partner:
        raise ValueError(f"vertex {center} is not a star center")
    centers_in: dict[int, list[int]] = {}
    for w in partner:
        centers_in.setdefault(instance.block_of[w], []).append(w)
    reached: set[int] = set()
    frontier = [instance.block_of[partner[center]]]
    while frontier:
        blk = frontier.pop()
        if blk in reached:
            continue
        reached.add(blk)
        for w in centers_in.get(blk, ()):
            frontier.append(instance.block_of[partner[w]])
    return frozenset(reached)


def check_imc(
    instance: Instance, tup: FeasibleTuple, rg: ReconfigGraph | None = None
) -> ImcReport:
    """Evaluate the configuration checks on a feasible tuple."""
    adjacency = instance.graph.adjacency
    s_set, t_set = tup.s_set, tup.t_set
    every_block = frozenset(range(instance.m))

    full_index = index_set(instance, tup.r) == every_block
    covers_pair = (s_set | t_set) <= tup.r and index_set(
        instance, s_set | t_set
    ) == every_block
    induced_matching = all(len(adjacency[v] & tup.r) <= 1 for v in tup.r)

    bg = block_graph(instance, tup.swapped)
    cycles = bool(bg.nodes) and bg.is_disjoint_cycles()

    unique_anchor = all(
        len(adjacency[v] & tup.r) == 1 for v in range(instance.n)
    )

    confined = True
    swapped = tup.swapped
    for u, v in instance.graph.edges:
        if u in swapped and v in swapped:
            in_s = u in s_set
            if in_s == (v in s_set):
                confined = False
                break
            bu, bv = instance.block_of[u], instance.block_of[v]
            if not (
                adjacency[u] <= instance.block_set(bv)
                and adjacency[v] <= instance.block_set(bu)
            ):
                confined = False
                break
    result_descend = True
    try:
        for center, _ in tup.stars:
            allowed = descendant_blocks(instance, tup, center)
            hood = {instance.block_of[v] for v in adjacency[center]}
            if not hood <= allowed:
                result_descend = False
                break
    except CertificateError:
        result_descend = False

    return ImcReport(
        is_imc=full_index and covers_pair and induced_matching,
        full_index=full_index,
        covers_pair=covers_pair,
        induced_matching=induced_matching,
        swapped_blocks_are_cycles=cycles,
        unique_anchor=unique_anchor,
        pair_neighborhoods_confined=confined,
        center_neighborhoods_descend=result_descend,
    )


@dataclass(frozen=True)
class Witness:
    """A vertex whose entire neighborhood is one component side inside a block."""

    vertex: int
    side: tuple[int, ...]
    component_index: int


def _reroute(
    instance: Instance,
    tup: FeasibleTuple,
    target: int,
    v: int,
    w: int,
    x: int,
    rg: ReconfigGraph,
) -> FeasibleTuple:
    """Swing the target block's attachment edge one level down.

    ``v`` is the target block's shared vertex, ``w`` its star-center partner
    in the parent block, and ``x`` a neighbor of w outside the target block.
    The unique downward path from w's block through the target to x's block
    is rewired: each intermediate block hands its shared vertex over to the
    star center below it, x joins both transversals, and v leaves the grown
    set. The resulting tuple is a configuration again with the target block's
    degree reduced by one.
    """
    parent = _parent_edges(instance, tup)
    j_block = instance.block_of[w]
    k_block = instance.block_of[x]
    chain = [k_block]
    for _ in range(instance.m + 1):
        if chain[-1] == j_block:
            break
        edge = parent.get(chain[-1])
        if edge is None:
            raise CertificateError(
                f"block {chain[-1]} is not attached below block {j_block}"
            )
        chain.append(instance.block_of[edge[0]])
    else:
        raise CertificateError("attachment path did not close")
    chain.reverse()
    if len(chain) < 3 or chain[1] != target:
        raise CertificateError("attachment path does not pass through the target block")
    centers = []
    leaves = []
    for blk in chain[1:]:
        center, leaf = parent[blk]
        centers.append(center)
        leaves.append(leaf)
    if centers[0] != w or leaves[0] != v:
        raise CertificateError("attachment path disagrees with the chosen edge")
    s_choice = list(tup.s.choice)
    t_choice = list(tup.t.choice)
    for pos in range(1, len(chain) - 1):
        blk = chain[pos]
        s_choice[blk] = t_choice[blk] = centers[pos]
    s_choice[chain[-1]] = t_choice[chain[-1]] = x
    new = FeasibleTuple.build(
        instance,
        (tup.r - {v}) | {x},
        Transversal(tuple(s_choice)),
        Transversal(tuple(t_choice)),
        tup.c0,
        tup.c1,
    )
    props = check_feasible(instance, new, rg)
    report = check_imc(instance, new, rg)
    if not all(props.values()) or not report.is_imc:
        raise CertificateError(
            f"rerouting broke the configuration: {props}, {report}"
        )
    return new


def _witness_for_block(
    instance: Instance,
    tup: FeasibleTuple,
    target: int,
    rg: ReconfigGraph,
) -> int:
    adjacency = instance.graph.adjacency
    target_block = instance.block_set(target)
    if tup.s.choice[target] != tup.t.choice[target]:
        rep = tup.s.choice[target]
        anchors = adjacency[rep] & tup.r
        if len(anchors) != 1:
            raise CertificateError(f"vertex {rep} has {len(anchors)} anchors in the grown set")
        u = next(iter(anchors))
        if not adjacency[u] <= target_block:
            raise CertificateError(
                f"matched partner {u} escapes block {target}"
            )
        return u
    current = tup
    for _ in range(instance.m + 1):
        v = current.s.choice[target]
        anchors = adjacency[v] & current.r
        if len(anchors) != 1:
            raise CertificateError(f"vertex {v} has {len(anchors)} anchors in the grown set")
        w = next(iter(anchors))
        if adjacency[w] <= target_block:
            return w
        x = min(adjacency[w] - target_block)
        current = _reroute(instance, current, target, v, w, x, rg)
    raise CertificateError("degree reduction failed to converge")


def containment_witnesses(
    instance: Instance,
    cap: int = DEFAULT_ENUMERATION_CAP,
    rg: ReconfigGraph | None = None,
) -> dict[int, Witness]:
    """For every block, a vertex whose whole neighborhood is a side inside it.

    Preconditions (oracle-checked): every component complete bipartite, one
    component per block, and the instance minimally disconnected. The search
    walks the configuration's block forest; when the target block carries a
    swapped pair the matched partner witnesses directly, otherwise the
    attachment edge is swung downward until its center's neighborhood falls
    inside the target block.
    """
    comps = components(instance.graph)
    if len(comps) != instance.m:
        raise ValueError("component count must equal block count")
    sides = []
    for comp in comps:
        parts = complete_bipartite_parts(instance.graph, comp)
        if parts is None:
            raise ValueError("a component is not complete bipartite")
        sides.append(parts)
    if not is_minimally_rgd(instance, cap):
        raise ValueError("instance is not minimally disconnected")
    rg = rg if rg is not None else build_rg(instance, cap)
    s, t, rg = extremal_pair(instance, rg=rg, cap=cap)
    base, _ = grow_trace(instance, s, t, rg, cap)
    comp_of_vertex = {
        v: ci for ci, comp in enumerate(comps) for v in comp
    }
    adjacency = instance.graph.adjacency
    out: dict[int, Witness] = {}
    for target in range(instance.m):
        u = _witness_for_block(instance, base, target, rg)
        hood = tuple(sorted(adjacency[u]))
        if not frozenset(hood) <= instance.block_set(target):
            raise CertificateError(f"witness {u} escapes block {target}")
        ci = comp_of_vertex[u]
        if hood not in (sides[ci][0], sides[ci][1]):
            raise CertificateError(
                f"witness {u} neighborhood is not a full side of component {ci}"
            )
        out[target] = Witness(u, hood, ci)
    return out
