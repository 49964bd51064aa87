"""Graphical exchange mechanisms: prices, clearing, complexity and minimality."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    InfeasibleError,
    InvalidQueryError,
    MalformedInputError,
    MechanismError,
    ResourceLimitError,
)
from .graphs import (  # noqa: E402
    DirectedGraph,
    canonical_form,
    chorded_triangle,
    classify,
    complete,
    cycle,
    enumerate_connected_graphs,
    enumerate_itrees,
    is_connected,
    shortest_path_length,
    star,
)
from .pricing import (  # noqa: E402
    MarketState,
    OfferVector,
    PriceRay,
    clear,
    convert,
    net_trade,
    price_by_solve,
    price_by_trees,
    return_vector,
    stochastic_decomposition,
)
from .complexity import (  # noqa: E402
    ComplexityProfile,
    index_complexity,
    pi_numeric,
    pi_symbolic,
    profile,
    tau_matrix,
)
from .minimality import (  # noqa: E402
    dominates,
    minimal_set,
    scalarized_best,
    strongly_minimal_set,
    weak_dominates,
)
