"""Osculating curves and functions: jets, osculants, and numerical checks of
their disjointness."""

__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402
from .algebraic import (AlgebraicCurve, MobiusOsculant, OsculatingCircle, classify_conic,  # noqa: E402
                        condition_matrix, extactic_indicator, find_extactic_points,
                        find_schwarzian_zeros, find_vertices, n_conditions,
                        osculating_algebraic_curve, osculating_circle, osculating_mobius,
                        schwarzian)
from .chebyshev import (ChebSystem, annihilator_coefficients, apply_D, cheb_system,  # noqa: E402
                        find_flexes, osculating_element, trig_basis, verify_disjoint_cheb,
                        wronskian)
from .contour import Polyline, plot_implicit, trace_oval  # noqa: E402
from .curves import PlaneCurve, graph, load_curve, parametric, parse_curve_spec  # noqa: E402
from .errors import OsculantError  # noqa: E402
from .expr import eval_jet, eval_real, parse, to_text  # noqa: E402
from .jet import Jet, jet_constant, jet_variable  # noqa: E402
from .report import VerificationReport  # noqa: E402
from .taitkneser import (FamilyMap, circle_family, circles_nested, conic_family,  # noqa: E402
                         envelope_multiplicity_check, graph_family, infinitesimal_index,
                         infinitesimal_multiplicity, mobius_family, oval_vs_curve,
                         verify_algebraic_family, verify_circle_family, verify_mobius_family)
from .taylor import (family_derivative, find_polynomial_vertices, osculating_polynomial,  # noqa: E402
                     verify_disjoint_graphs)
