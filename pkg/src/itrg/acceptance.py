"""The package's headline guarantees as a runnable acceptance suite.

Every check is exact: combinatorial equalities verified by brute force at
desk scale, with randomized coverage driven by one seed. The suite backs the
command line ``verify`` subcommand and the acceptance tests; the two scale
profiles only change how many randomized cases are drawn, never what is
asserted.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable

from .certificate import check_imc, containment_witnesses, extremal_pair, grow_trace
from .construct import (
    ElementarySpec,
    IterationChoice,
    VerificationError,
    all_side_transversal,
    build_elementary,
    combine,
    elementary_association,
    generate_bad_instance,
    second_component_it,
    single_block_spec,
    standard_bipartition,
)
from .instance import (
    Graph,
    Instance,
    canonical_json,
    delete_blocks,
    index_set,
    induced_components,
)
from .oracle import (
    RGStatus,
    build_rg,
    enumerate_its,
    is_minimally_rgd,
    rg_status,
)
from .recognize import check_shape, infer_delta, recognize, replay_trace, side_containment
from .sampling import (
    perturb_instance,
    random_bipartite_pair_instance,
    random_bounded_degree_instance,
    random_disconnected_instance,
    random_distribution,
    random_instance,
)

DEFAULT_SEED = 20250809


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str


PROFILES: dict[str, dict[str, int]] = {
    "full": {
        "glue_cases": 200,
        "biconditional_cases": 100,
        "elementary_cases": 50,
        "perturbations": 200,
        "degree_cases": 500,
        "generator_components": 3,
        "extra_certificate_cases": 20,
    },
    "quick": {
        "glue_cases": 40,
        "biconditional_cases": 25,
        "elementary_cases": 12,
        "perturbations": 40,
        "degree_cases": 80,
        "generator_components": 2,
        "extra_certificate_cases": 6,
    },
}


def _empty_instance() -> Instance:
    return Instance.make(Graph.from_edges(0, []), [])


def _two_copies(delta: int) -> Instance:
    return generate_bad_instance(
        delta,
        spec=single_block_spec(delta),
        iterations=1,
        choices=[IterationChoice(0, tuple(range(delta)))],
    )


# --- criterion runners ------------------------------------------------------


def check_single_block_extremes(params: dict, rng: random.Random) -> CriterionResult:
    """Single-block balanced complete bipartite instances for side sizes 1..3."""
    for delta in (1, 2, 3):
        instance = build_elementary(single_block_spec(delta))
        rg = build_rg(instance)
        if len(rg.its) != 2 * delta:
            return CriterionResult(
                "single-block-extremes",
                False,
                f"delta={delta}: expected {2 * delta} transversals, got {len(rg.its)}",
            )
        if rg.component_count != 2:
            return CriterionResult(
                "single-block-extremes",
                False,
                f"delta={delta}: expected 2 components, got {rg.component_count}",
            )
        if not is_minimally_rgd(instance):
            return CriterionResult(
                "single-block-extremes", False, f"delta={delta}: not minimally disconnected"
            )
    return CriterionResult("single-block-extremes", True, "side sizes 1, 2, 3")


def check_two_copy_standard(params: dict, rng: random.Random) -> CriterionResult:
    """Two balanced components with the sidewise partition, side sizes 1 and 2."""
    for delta in (1, 2):
        instance = _two_copies(delta)
        rg = build_rg(instance)
        if rg.component_count != 2:
            return CriterionResult(
                "two-copy-standard-bipartition",
                False,
                f"delta={delta}: component count {rg.component_count}",
            )
        if not is_minimally_rgd(instance):
            return CriterionResult(
                "two-copy-standard-bipartition",
                False,
                f"delta={delta}: not minimally disconnected",
            )
        verdict, trace = recognize(instance)
        if not verdict or len(trace.steps) != 1:
            return CriterionResult(
                "two-copy-standard-bipartition",
                False,
                f"delta={delta}: verdict={verdict}, peels={len(trace.steps)}",
            )
    return CriterionResult("two-copy-standard-bipartition", True, "side sizes 1, 2")


def check_glue_disconnection(params: dict, rng: random.Random) -> CriterionResult:
    """Gluing a no-transversal bipartite pair onto a disconnected instance keeps it disconnected."""
    target = params["glue_cases"]
    for case in range(target):
        g = random_disconnected_instance(rng)
        h = random_bipartite_pair_instance(rng)
        donor = rng.randrange(g.m)
        dist = random_distribution(rng, g.blocks[donor], h.m)
        combined = combine(g, donor, h, dist)
        if rg_status(combined) is not RGStatus.DISCONNECTED:
            return CriterionResult(
                "gluing-preserves-disconnection",
                False,
                f"case {case}: combined instance became connected or empty",
            )
    return CriterionResult(
        "gluing-preserves-disconnection", True, f"{target} randomized cases"
    )


def check_glue_biconditional(params: dict, rng: random.Random) -> CriterionResult:
    """Minimality of the glued instance is equivalent to minimality of the base.

    Also checks the four one-directional deletion claims separately, on a
    case mix that contains both minimally disconnected bases and others.
    """
    target = params["biconditional_cases"]
    seen_minimal = {True: 0, False: 0}
    bad_pool = [
        build_elementary(single_block_spec(1)),
        build_elementary(single_block_spec(2)),
        _two_copies(1),
    ]
    for case in range(target):
        source = case % 3
        if source == 0:
            g = random_instance(rng)
        elif source == 1:
            g = random_disconnected_instance(rng)
        else:
            g = bad_pool[rng.randrange(len(bad_pool))]
        h = random_bipartite_pair_instance(rng)
        donor = rng.randrange(g.m)
        dist = random_distribution(rng, g.blocks[donor], h.m)
        combined = combine(g, donor, h, dist)

        g_status = rg_status(g)
        c_status = rg_status(combined)
        g_deletions = [
            rg_status(delete_blocks(g, [i]).instance) for i in range(g.m)
        ]
        c_deletions = [
            rg_status(delete_blocks(combined, [i]).instance)
            for i in range(combined.m)
        ]
        g_min = g_status is RGStatus.DISCONNECTED and all(
            d is RGStatus.CONNECTED for d in g_deletions
        )
        c_min = c_status is RGStatus.DISCONNECTED and all(
            d is RGStatus.CONNECTED for d in c_deletions
        )
        seen_minimal[g_min] += 1
        if g_min != c_min:
            return CriterionResult(
                "gluing-minimality-biconditional",
                False,
                f"case {case}: base minimal={g_min} but glued minimal={c_min}",
            )
        forward = (g_status is not RGStatus.DISCONNECTED) or (
            c_status is RGStatus.DISCONNECTED
        )
        backward = (c_status is not RGStatus.DISCONNECTED) or (
            g_status is RGStatus.DISCONNECTED
        )
        g_crit = all(d is RGStatus.CONNECTED for d in g_deletions)
        c_crit = all(d is RGStatus.CONNECTED for d in c_deletions)
        del_forward = (not g_crit) or c_crit
        del_backward = (not c_crit) or g_crit
        if not (forward and backward and del_forward and del_backward):
            return CriterionResult(
                "gluing-minimality-biconditional",
                False,
                f"case {case}: directional claim failed "
                f"({forward}, {backward}, {del_forward}, {del_backward})",
            )
    if not (seen_minimal[True] and seen_minimal[False]):
        return CriterionResult(
            "gluing-minimality-biconditional",
            False,
            f"case mix degenerate: {seen_minimal}",
        )
    return CriterionResult(
        "gluing-minimality-biconditional",
        True,
        f"{target} cases ({seen_minimal[True]} minimal, {seen_minimal[False]} not)",
    )


def _random_elementary_spec(rng: random.Random) -> ElementarySpec:
    m = rng.randint(1, 3)
    parts = tuple((rng.randint(1, 2), rng.randint(1, 2)) for _ in range(m))
    targets = tuple(
        tuple(rng.randrange(m) for _ in range(b)) for _, b in parts
    )
    return ElementarySpec(parts, targets)


def check_elementary_second_component(
    params: dict, rng: random.Random
) -> CriterionResult:
    """Verified elementary instances are disconnected and the peel-found
    transversal sits outside the designated-side component."""
    target = params["elementary_cases"]
    found = 0
    for _ in range(20_000):
        if found >= target:
            break
        spec = _random_elementary_spec(rng)
        try:
            instance = build_elementary(spec, verify=True)
        except VerificationError:
            continue
        found += 1
        if rg_status(instance) is not RGStatus.DISCONNECTED:
            return CriterionResult(
                "elementary-second-component",
                False,
                f"verified elementary instance not disconnected: {spec}",
            )
        association = elementary_association(spec)
        rg = build_rg(instance)
        anchor = rg.index_of(all_side_transversal(instance, association).choice)
        other = rg.index_of(second_component_it(instance, association).choice)
        if anchor is None or other is None:
            return CriterionResult(
                "elementary-second-component",
                False,
                f"transversal lookup failed for {spec}",
            )
        if rg.component_id[anchor] == rg.component_id[other]:
            return CriterionResult(
                "elementary-second-component",
                False,
                f"both transversals share a component for {spec}",
            )
    if found < target:
        return CriterionResult(
            "elementary-second-component",
            False,
            f"only {found} verified elementary instances found",
        )
    return CriterionResult(
        "elementary-second-component", True, f"{found} verified elementary instances"
    )


def _verified_bases(delta: int, max_components: int) -> list[ElementarySpec]:
    """All elementary bases with balanced parts and blocks of size 2*delta
    that pass the deletion clause, for every base size up to the cap."""
    bases: list[ElementarySpec] = []
    for m_base in range(1, max_components + 1):
        parts = ((delta, delta),) * m_base
        for flat in itertools.product(range(m_base), repeat=delta * m_base):
            loads = [0] * m_base
            for t in flat:
                loads[t] += 1
            if any(load != delta for load in loads):
                continue
            targets = tuple(
                flat[i * delta : (i + 1) * delta] for i in range(m_base)
            )
            spec = ElementarySpec(parts, targets)
            try:
                build_elementary(spec, verify=True)
            except VerificationError:
                continue
            bases.append(spec)
    return bases


def generated_bad_instances(
    delta: int, max_components: int
) -> list[tuple[Instance, int]]:
    """Exhaustive generator outputs: every verified base, every donor, every
    balanced split, chained up to the component cap. Returns (instance,
    iteration count) pairs."""
    out: list[tuple[Instance, int]] = []
    for spec in _verified_bases(delta, max_components):
        base = build_elementary(spec)
        frontier: list[tuple[Instance, list[IterationChoice]]] = [(base, [])]
        out.append((base, 0))
        for _ in range(max_components - len(spec.parts)):
            grown: list[tuple[Instance, list[IterationChoice]]] = []
            for inst, choices in frontier:
                for donor in range(inst.m):
                    for to_a in itertools.combinations(inst.blocks[donor], delta):
                        step = IterationChoice(donor, to_a)
                        nxt = generate_bad_instance(
                            delta,
                            spec=spec,
                            iterations=len(choices) + 1,
                            choices=choices + [step],
                        )
                        grown.append((nxt, choices + [step]))
                        out.append((nxt, len(choices) + 1))
            frontier = grown
    return out


def _oracle_bad(instance: Instance) -> bool:
    delta = infer_delta(instance)
    return (
        delta is not None
        and check_shape(instance, delta)
        and is_minimally_rgd(instance)
    )


def check_generator_recognizer(params: dict, rng: random.Random) -> CriterionResult:
    """Every exhaustively generated instance recognizes YES and the oracle
    agrees; single-edit perturbations keep recognizer and oracle in accord."""
    max_components = params["generator_components"]
    corpus: list[Instance] = []
    for delta in (1, 2):
        for instance, iterations in generated_bad_instances(delta, max_components):
            corpus.append(instance)
            verdict, trace = recognize(instance)
            if not verdict:
                return CriterionResult(
                    "generator-recognizer-agreement",
                    False,
                    f"generated instance rejected: {trace.reason}",
                )
            if len(trace.steps) != iterations:
                return CriterionResult(
                    "generator-recognizer-agreement",
                    False,
                    f"expected {iterations} peels, got {len(trace.steps)}",
                )
            if not _oracle_bad(instance):
                return CriterionResult(
                    "generator-recognizer-agreement",
                    False,
                    "oracle rejects a generated instance",
                )
    checked = 0
    while checked < params["perturbations"]:
        perturbed = perturb_instance(rng, corpus[rng.randrange(len(corpus))])
        if perturbed is None:
            continue
        checked += 1
        verdict, _ = recognize(perturbed)
        if verdict != _oracle_bad(perturbed):
            return CriterionResult(
                "generator-recognizer-agreement",
                False,
                f"recognizer verdict {verdict} disagrees with oracle on a perturbation",
            )
    return CriterionResult(
        "generator-recognizer-agreement",
        True,
        f"{len(corpus)} generated instances, {checked} perturbations",
    )


def check_trace_replay(params: dict, rng: random.Random) -> CriterionResult:
    """Reverse-folding every YES trace rebuilds the input byte-exactly."""
    count = 0
    for delta in (1, 2):
        for instance, _ in generated_bad_instances(
            delta, params["generator_components"]
        ):
            verdict, trace = recognize(instance)
            if not verdict:
                return CriterionResult(
                    "trace-replay-byte-exact", False, "generated instance rejected"
                )
            rebuilt = replay_trace(trace)
            if canonical_json(rebuilt) != canonical_json(instance):
                return CriterionResult(
                    "trace-replay-byte-exact",
                    False,
                    "replayed instance differs from the input",
                )
            count += 1
    return CriterionResult("trace-replay-byte-exact", True, f"{count} traces replayed")


def _random_cb_instance(rng: random.Random, max_components: int = 3) -> Instance:
    """Random disjoint union of complete bipartite components, one block per
    component, every block nonempty."""
    k = rng.randint(1, max_components)
    sizes = [(rng.randint(1, 2), rng.randint(1, 2)) for _ in range(k)]
    edges: list[tuple[int, int]] = []
    offset = 0
    vertices: list[int] = []
    for a, b in sizes:
        edges.extend(
            (u, v)
            for u in range(offset, offset + a)
            for v in range(offset + a, offset + a + b)
        )
        offset += a + b
        vertices = list(range(offset))
    rng.shuffle(vertices)
    blocks: list[list[int]] = [[vertices[i]] for i in range(k)]
    for v in vertices[k:]:
        blocks[rng.randrange(k)].append(v)
    return Instance.make(Graph.from_edges(offset, edges), blocks)


def certificate_corpus(
    params: dict, rng: random.Random
) -> list[Instance]:
    """Minimally disconnected unions of complete bipartite components with one
    component per block: all generated extremal instances plus sampled
    general-shape ones."""
    corpus = [
        inst
        for delta in (1, 2)
        for inst, _ in generated_bad_instances(delta, params["generator_components"])
    ]
    corpus.append(build_elementary(ElementarySpec(((1, 2),), ((0, 0),))))
    extra = 0
    for _ in range(4000):
        if extra >= params["extra_certificate_cases"]:
            break
        candidate = _random_cb_instance(rng)
        if is_minimally_rgd(candidate):
            corpus.append(candidate)
            extra += 1
    return corpus


def brute_force_witnesses(instance: Instance) -> dict[int, set[int]]:
    """Independent scan: per block, all vertices whose whole nonempty
    neighborhood sits inside the block."""
    adjacency = instance.graph.adjacency
    out: dict[int, set[int]] = {}
    for i in range(instance.m):
        block = instance.block_set(i)
        out[i] = {
            u for u in range(instance.n) if adjacency[u] and adjacency[u] <= block
        }
    return out


def check_certificate_machinery(params: dict, rng: random.Random) -> CriterionResult:
    """On every corpus instance: growth terminates feasibly, the terminal
    tuple passes all configuration checks, the structural side conditions
    hold, and the derived witnesses agree with the brute-force scan."""
    corpus = certificate_corpus(params, rng)
    for idx, instance in enumerate(corpus):
        rg = build_rg(instance)
        s, t, rg = extremal_pair(instance, rg=rg)
        tup, _ = grow_trace(instance, s, t, rg)
        report = check_imc(instance, tup, rg)
        flags = (
            report.is_imc,
            report.swapped_blocks_are_cycles,
            report.unique_anchor,
            report.pair_neighborhoods_confined,
            report.center_neighborhoods_descend,
        )
        if not all(flags):
            return CriterionResult(
                "matching-configuration-machinery",
                False,
                f"instance {idx}: configuration checks failed: {report}",
            )

        adjacency = instance.graph.adjacency
        swapped = tup.swapped
        if any(not (adjacency[v] & swapped) for v in swapped):
            return CriterionResult(
                "matching-configuration-machinery",
                False,
                f"instance {idx}: isolated vertex among the swapped ones",
            )
        comps = induced_components(instance.graph, range(instance.n))
        comp_of = {v: ci for ci, comp in enumerate(comps) for v in comp}
        comps_with_r = {comp_of[v] for v in tup.r}
        touched = index_set(instance, tup.r)
        for i in touched:
            for v in instance.blocks[i]:
                if comp_of[v] not in comps_with_r:
                    return CriterionResult(
                        "matching-configuration-machinery",
                        False,
                        f"instance {idx}: touched-block vertex in an untouched component",
                    )
        for v in tup.shared - tup.r:
            if comp_of[v] in comps_with_r:
                return CriterionResult(
                    "matching-configuration-machinery",
                    False,
                    f"instance {idx}: left-out shared vertex in a touched component",
                )
        others = set(range(instance.m)) - touched
        sub = delete_blocks(instance, others).instance
        if rg_status(sub) is not RGStatus.DISCONNECTED:
            return CriterionResult(
                "matching-configuration-machinery",
                False,
                f"instance {idx}: touched-block sub-instance not disconnected",
            )
        containment = side_containment(instance)
        if any(not containment[i] for i in range(instance.m)):
            return CriterionResult(
                "matching-configuration-machinery",
                False,
                f"instance {idx}: a block contains no full component side",
            )

        witnesses = containment_witnesses(instance, rg=rg)
        scan = brute_force_witnesses(instance)
        for i in range(instance.m):
            if not scan[i]:
                return CriterionResult(
                    "matching-configuration-machinery",
                    False,
                    f"instance {idx}: brute scan found no witness for block {i}",
                )
            if witnesses[i].vertex not in scan[i]:
                return CriterionResult(
                    "matching-configuration-machinery",
                    False,
                    f"instance {idx}: derived witness disagrees with the scan",
                )
    return CriterionResult(
        "matching-configuration-machinery", True, f"{len(corpus)} corpus instances"
    )


def _is_balanced_cb(instance: Instance, comp: tuple[int, ...], delta: int) -> bool:
    if len(comp) != 2 * delta:
        return False
    comp_set = set(comp)
    adjacency = instance.graph.adjacency
    color = {comp[0]: 0}
    stack = [comp[0]]
    while stack:
        v = stack.pop()
        for w in adjacency[v] & comp_set:
            if w not in color:
                color[w] = 1 - color[v]
                stack.append(w)
            elif color[w] == color[v]:
                return False
    if len(color) != len(comp):
        return False
    a = sum(1 for v in comp if color[v] == 0)
    if a != delta:
        return False
    inside = sum(len(adjacency[v] & comp_set) for v in comp) // 2
    return inside == delta * delta


def has_forbidden_union(instance: Instance, delta: int) -> bool:
    """Some nonempty block subset induces exactly that many balanced complete
    bipartite components covering the subset."""
    m = instance.m
    for r in range(1, m + 1):
        for subset in itertools.combinations(range(m), r):
            verts = [v for i in subset for v in instance.blocks[i]]
            if len(verts) != 2 * delta * r:
                continue
            comps = induced_components(instance.graph, verts)
            if len(comps) != r:
                continue
            if all(_is_balanced_cb(instance, comp, delta) for comp in comps):
                return True
    return False


def check_degree_condition(params: dict, rng: random.Random) -> CriterionResult:
    """Bounded-degree instances with big blocks and no forbidden union are connected."""
    target = params["degree_cases"]
    checked = 0
    while checked < target:
        delta = rng.randint(1, 2)
        instance = random_bounded_degree_instance(rng, delta)
        if has_forbidden_union(instance, delta):
            continue
        checked += 1
        if rg_status(instance) is not RGStatus.CONNECTED:
            return CriterionResult(
                "degree-condition-connectivity",
                False,
                f"case {checked}: instance not connected (delta={delta})",
            )
    return CriterionResult(
        "degree-condition-connectivity", True, f"{target} filtered random instances"
    )


def check_empty_instance(params: dict, rng: random.Random) -> CriterionResult:
    """Zero blocks: exactly one (empty) transversal and a connected space."""
    empty = _empty_instance()
    its = enumerate_its(empty)
    if len(its) != 1 or its[0].choice != ():
        return CriterionResult(
            "empty-instance-convention", False, f"expected one empty transversal, got {its}"
        )
    if rg_status(empty) is not RGStatus.CONNECTED:
        return CriterionResult(
            "empty-instance-convention", False, "empty instance not connected"
        )
    return CriterionResult("empty-instance-convention", True, "single empty transversal")


CRITERIA: tuple[tuple[str, Callable[[dict, random.Random], CriterionResult]], ...] = (
    ("single-block-extremes", check_single_block_extremes),
    ("two-copy-standard-bipartition", check_two_copy_standard),
    ("gluing-preserves-disconnection", check_glue_disconnection),
    ("gluing-minimality-biconditional", check_glue_biconditional),
    ("elementary-second-component", check_elementary_second_component),
    ("generator-recognizer-agreement", check_generator_recognizer),
    ("trace-replay-byte-exact", check_trace_replay),
    ("matching-configuration-machinery", check_certificate_machinery),
    ("degree-condition-connectivity", check_degree_condition),
    ("empty-instance-convention", check_empty_instance),
)


def run_criterion(
    name: str, profile: str = "full", seed: int = DEFAULT_SEED
) -> CriterionResult:
    params = PROFILES[profile]
    runner = dict(CRITERIA)[name]
    rng = random.Random(seed)
    try:
        return runner(params, rng)
    except Exception as exc:  # a crash is a failure, not an abort
        return CriterionResult(name, False, f"raised {type(exc).__name__}: {exc}")


def run_all(
    profile: str = "full",
    seed: int = DEFAULT_SEED,
    names: Iterable[str] | None = None,
) -> list[CriterionResult]:
    selected = list(names) if names is not None else [n for n, _ in CRITERIA]
    return [run_criterion(name, profile, seed) for name in selected]
