"""One-shot quantum state redistribution toolkit.

Smooth min/max entropies computed exactly on small registers via
semidefinite programming, Monte Carlo decoupling checks, and an
executable ebit-based redistribution protocol with achievability and
converse bound verification.
"""

__version__ = "0.1.0"

from .registers import (  # noqa: F401
    SystemLayout,
    QuantumState,
    PureState,
    IsometryMap,
    LayoutError,
    tensor_product,
    partial_trace,
    permute,
    permute_and_embed,
    relabel,
    purify,
    apply_isometry,
    trace_norm_distance,
    fidelity,
    generalized_fidelity,
    purified_distance,
    haar_unitary,
    random_pure_state,
    maximally_mixed,
    max_entangled,
    max_entangled_pure,
    basis_state,
    standard_state,
)
from .seeding import derive_seed  # noqa: F401
