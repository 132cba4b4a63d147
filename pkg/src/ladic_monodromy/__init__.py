"""ℓ-adic group rings of free pro-ℓ groups, integral periods and a unipotence gate."""

from .padic import (INF, PadicScalar, PrecisionError, RationalBound, brute_val_qpow, cbound,
                    order_mod, scalar_arith, val_qpow, valuation)
from .freealg import (AlgebraElement, AlgebraSignature, TensorElement, antipode, augment,
                      coproduct, exp_elem, filtration_degree, from_text, group_element,
                      log_elem, mul, structure_tests, tensor, to_text)
from .groupoid import (FiniteGroupAlgebra, TorsorElement, abelianization_iso,
                       abelianization_rank, torsor_compose, torsor_compose_right,
                       verify_hopf_axioms)
from .galois import (QuasiScalar, TorsorCocycle, apply_sigma, canonical_path, eigen_lift,
                     eigenbasis, ext_annihilator, verify_quasi_scalar)
from .periods import PeriodTriple, integral_period, search_integral_period
from .convergent import (ConvergenceError, RepSpec, estimate_r0, evaluate_rho_r,
                         product_bound_check, radius_report, valuation_sequence)
from .gate import CyclotomicSpec, is_unipotent, threshold, triviality_level, verdict

__version__ = "0.1.0"
