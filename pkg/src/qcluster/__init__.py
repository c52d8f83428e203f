"""Exact arithmetic in the rank-two quantum cluster algebra A_q(1,4)."""
from .bases import (
    FAMILIES,
    Cheb,
    ClusterMonomial,
    DeltaPow,
    ExpansionError,
    FormalCombination,
    One,
    Window,
    basis_element,
    check_label,
    denominator_vector,
    expand_in_basis,
    family_labels,
    realize,
)
from .cluster import Frame, chebyshev, cluster_monomial, cluster_var, parity_bracket, x_delta, x_delta_from_window
from .expr import evaluate
from .multiplication import (
    TheoremCase,
    coef_ab,
    coef_c,
    inner_sum_p,
    theorem2_lhs,
    theorem2_rhs,
    verify_theorem2,
)
from .qcoeff import ONE, ZERO, QLaurent, ql_add, ql_at_one, ql_bar, ql_is_positive, ql_mul, qpow
from .torus import TorusElement, t_add, t_bar, t_is_positive, t_min_terms, t_monomial, t_mul
from .triangular import (
    EExpansion,
    alpha,
    aux_monomials,
    expand_in_standard,
    lusztig_C,
    order_prec,
    order_preceq,
    phi,
    plus_part,
    psi,
    standard_monomial,
    verify_section4,
)

__all__ = [name for name in dir() if not name.startswith("_")]
