"""Exact K-theoretic Soergel bimodule calculus over Kac-Moody root data."""

from .laurent import (Lattice, LatticeMap, LaurentPoly, LatticeMismatch, NotDivisible, lp_add, lp_mul,
                      divide_exact, lp_divide_exact, substitute, lp_substitute, quotient_is_reduced)
from .intmat import smith_normal_form
from .rootdatum import (RootDatum, DatumClassification, RootDatumError, NotSCTypeAt, validate, classify,
                        langlands_dual, affinize, find_fundamental_weight, highest_root, NAMED)
from .weyl import WeylGroup, WeylElement, weyl_group, act_on_weight, multiply, length, bruhat_leq
from .demazure import (DemazureContext, demazure_context, demazure, demazure_minus, is_invariant,
                       ps_split)
from .bimodule import (BSObject, StdBimodule, DirectSum, KaroubiObject, BimMorphism, HomResult,
                       IncompleteBound, right_action_matrix, tensor, tensor_std, hom_std, gr_map,
                       std_multiplicities, decompose_bsbs, hom_bounded, central_element)
from .complexes import (ChainComplex, HomotopyCertificate, rouquier_delta, rouquier_nabla, tensor_complex,
                        gaussian_eliminate, minimize, is_unit_complex, dualize, hom_complex,
                        find_isomorphism, unit_complex)

__version__ = "0.1.0"
