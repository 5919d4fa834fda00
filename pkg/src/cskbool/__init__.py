"""Boolean and free convolution powers, variance functions of
Cauchy-Stieltjes kernel families, and boolean cumulants.

The exact layer (:mod:`.exact`, :mod:`.cumulants`, :mod:`.variance`) works
over rationals; :mod:`.measures` evaluates transforms of concrete measures
numerically.
"""
from .config import Config
from .cumulants import (
    CumulantSequence,
    boolean_power,
    boolean_to_moments,
    bp_inverse,
    bp_map,
    free_power,
    free_to_moments,
    hankel_psd_check,
    moments_to_boolean,
    moments_to_free,
)
from .errors import ConvergenceError, CSKError, DomainError, RootIsolationError
from .exact import Polynomial, TruncatedSeries, poly_derivative_power, series_mul, series_reciprocal, series_reversion
from .measures import (
    Measure,
    bernoulli,
    boolean_power_atomic,
    cauchy_transform,
    csk_member_density,
    dirac,
    k_transform,
    marchenko_pastur,
    means_domain,
    pseudo_variance_numeric,
    verify_boolean_power_vf,
)
from .variance import (
    PseudoVarianceExpr,
    VarianceFunction,
    cubic_class_check,
    lagrange_boolean_cumulants,
    pvf_affine,
    pvf_boolean_power,
    vf_bijection_pair,
    vf_boolean_power,
    vf_bt,
    vf_free_power,
    vf_mixed_power,
    vf_to_pseudo,
)

__version__ = "0.1.0"
