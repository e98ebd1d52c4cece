"""Independent transversals of vertex-partitioned graphs, their
reconfiguration graphs, and the extremal instances where reconfiguration
breaks down: exhaustive oracles, constructive generation, polynomial-time
recognition with replayable traces, and matching-configuration certificates.
"""

__version__ = "0.1.0"

from .certificate import (
    CertificateError,
    FeasibleTuple,
    ImcReport,
    Witness,
    check_feasible,
    check_imc,
    containment_witnesses,
    descendant_blocks,
    extremal_pair,
    grow,
    grow_trace,
)
from .construct import (
    ConstructionError,
    Distribution,
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
    BlockDeletion,
    BlockGraph,
    Graph,
    Instance,
    InstanceFormatError,
    block_graph,
    canonical_json,
    complete_bipartite_parts,
    components,
    delete_blocks,
    index_set,
    induced_components,
    instance_to_dot,
    load_instance,
    parse_instance,
    relabel,
    save_instance,
    validate,
)
from .oracle import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapExceeded,
    ReconfigGraph,
    RGStatus,
    Transversal,
    build_rg,
    enumerate_its,
    is_independent,
    is_minimally_nit,
    is_minimally_rgd,
    rg_status,
    rg_to_dot,
    same_component,
)
from .recognize import (
    PeelError,
    PeelStep,
    RecognitionTrace,
    Straddler,
    check_shape,
    find_straddler,
    infer_delta,
    is_irreducible,
    peel,
    recognize,
    recognize_general,
    replay_trace,
    side_containment,
    unique_association,
)

__all__ = [name for name in dir() if not name.startswith("_")]
