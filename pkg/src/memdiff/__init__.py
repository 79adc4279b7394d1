"""memdiff: resolvent families for diffusion with an exponentially damped,
weakly singular memory kernel.

The central object is the scalar family S(t) solving

    u'(t) = rho u(t) + rho (kappa * u)(t),   u(0) = 1,
    kappa(t) = alpha e^{-beta t} t^{mu-1} / Gamma(mu),

computed by three mutually validating routes (Mittag-Leffler series,
Volterra product integration, contour inversion of the closed-form Laplace
transform), together with regime classification and decay-bound
verification, and the diagonal Dirichlet-Laplacian realization on an
interval.
"""

from .errors import (AccuracyError, ContourError, ConvergenceError,
                     DomainError, HypothesisError, MemdiffError, ModeError,
                     SingularityError, StepSizeError, TruncationError)
from .inversion import (InversionConfig, forward_transform, invert_S,
                        invert_S_curve, invert_transform)
from .resolvent import (Curve, CurveMethod, Mu1Case, Mu1Classification,
                        mu1_classify, mu1_closed_form, series_S, series_curve)
from .special import (DEFAULT_SERIES_CONTROL, MLParams, SeriesControl,
                      log_gamma, prabhakar_ml, reg_lower_inc_gamma)
from .spectral import (SpectralModel, eigen_pairs, field, mode_curve,
                       operator_norm_curve)
from .stability import (BoundCheck, DecayBound, LemmaCheck, LemmaReport,
                        RateFit, Regime, RegimeClass, classify,
                        fit_decay_rate, lemma_property_suite,
                        theoretical_bound, verify_bound)
from .symbols import (KernelParams, ScalarProblem, laplace_G_hat,
                      laplace_S_hat, laplace_S_hat_den, symbol_g, symbol_h,
                      symbol_h_tilde)
from .volterra import VolterraConfig, kernel_a, solve_volterra

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "BoundCheck", "ContourError", "ConvergenceError",
    "Curve", "CurveMethod", "DEFAULT_SERIES_CONTROL", "DecayBound",
    "DomainError", "HypothesisError", "InversionConfig", "KernelParams",
    "LemmaCheck", "LemmaReport", "MLParams", "MemdiffError", "ModeError",
    "Mu1Case", "Mu1Classification", "RateFit", "Regime", "RegimeClass",
    "ScalarProblem", "SeriesControl", "SingularityError", "SpectralModel",
    "StepSizeError", "TruncationError", "VolterraConfig", "classify",
    "eigen_pairs", "field", "fit_decay_rate", "forward_transform",
    "invert_S", "invert_S_curve", "invert_transform", "kernel_a",
    "laplace_G_hat", "laplace_S_hat", "laplace_S_hat_den",
    "lemma_property_suite", "log_gamma", "mode_curve", "mu1_classify",
    "mu1_closed_form", "operator_norm_curve", "prabhakar_ml",
    "reg_lower_inc_gamma", "series_S", "series_curve", "solve_volterra",
    "symbol_g", "symbol_h", "symbol_h_tilde", "theoretical_bound",
    "verify_bound",
]
