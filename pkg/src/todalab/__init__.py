"""todalab: exact combinatorics and numerics of Toda-lattice blow-ups.

The package computes blow-up counts from Weyl-group sign dynamics, the
blow-up polynomial p(q) and its finite-Chevalley-group factorization,
blow-up graphs, Wronskian Schur tau functions with real-root experiments,
affine sign dynamics for the A(1) family, and a numerical verification
layer for the type-A flow.
"""

from .rootdata import (
    LieType,
    CompactDual,
    RootSystem,
    cartan_matrix,
    extended_cartan,
    langlands_dual,
    inverse_cartan,
    tau_multiplicities,
    dual_root_counts,
    two_rho_height,
    compact_dual_info,
    positive_roots,
)
from .weyl import WeylGroup, WeylElement
from .signflow import parse_signs, format_signs, reflect_sign, act_word, eta, eta_table
from .blowup_poly import (
    IntPolynomial,
    FactoredForm,
    p_epsilon,
    closed_form_p,
    chevalley_order,
    brute_force_so_order,
    poincare_polynomial_k,
)
from .todagraph import build_graph, components, to_dot, graph_to_dict, matching_report
from .schurtau import (
    PolyRing,
    ExactPoly,
    ring_for,
    hk,
    schur_wronskian,
    tau_functions,
    minimal_degree,
    minimal_degrees,
    tangent_cone,
    hirota_residual,
    nu_degrees,
    nu_check,
    sturm_real_roots,
    real_root_count_experiment,
)
from .affine import AffineWeylGroup, affine_eta, p_series, rational_guess
from . import numtoda

__version__ = "0.1.0"
