"""Exact homomorphism densities in step kernels, off-diagonal commonality gaps,
counterexample witnesses and flag-algebra certificates for pairs of graphs."""
from ._backend import BACKEND
from .certificate import (
    Certificate,
    FloatCertificate,
    VerificationReport,
    load_certificate,
    psd_check,
    round_certificate,
    save_certificate,
    search,
    slack,
    verify,
)
from .errors import (
    CommonPairsError,
    GraphError,
    KernelError,
    OrderingError,
    ParseError,
    PreconditionError,
)
from .expansion import (
    ColourSystem,
    WitnessReport,
    candidate_p,
    commonality_gap,
    expansion_functional,
    expansion_identity_check,
    extend_witness_colour,
    girth_witness,
    k4_witness,
    multicolour_girth_witness,
)
from .flags import Flag, coefficient, flag, glue, gluing_table, ordering_recovery, product_integral_check
from .graphs import (
    Graph,
    GraphClassTable,
    aut_count,
    canonical_form,
    complement,
    contains_k4,
    cycle_count,
    disjoint_union,
    edge_subgraph,
    enumerate_classes,
    girth,
    hom_inj_count,
    parse_graph,
    strip_isolated,
    t_inj,
)
from .kernels import (
    Rational,
    StepKernel,
    affine_shift,
    complement_graphon,
    d_density,
    density,
    is_d_regular,
    kernel_B,
    kernel_K,
    scale_down,
    t_ind,
    tensor,
    tensor_power_density,
)

__version__ = "0.1.0"
