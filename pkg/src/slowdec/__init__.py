"""Slow-decrease diagnostics for canonical products with prescribed zeros."""

__version__ = "0.1.0"

from .exceptions import AtZeroError, ConfigError, GeneratorError, PoleError, RadiusError, SlowdecError
from .seqcore import (
    CountingSnapshot,
    SequenceSpec,
    ZeroPoint,
    ZeroSequence,
    build_sequence,
    counting_snapshot,
    density_estimate,
    from_points,
    n_minus,
    n_plus,
    nu,
    project_real,
)
from .product_eval import LogModulus, Phi0Evaluator, ProductEvaluator, eval_phi0_log, log_abs_product
from .representations import PoissonRepresentation, favorov_log, poisson_log, poisson_log_lower
from .criteria import (
    INCONCLUSIVE,
    NOT_SLOWLY_DECREASING,
    SLOWLY_DECREASING,
    SlowDecreaseParams,
    check_lemma2,
    check_slow_decrease_def,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    classify,
    cond2_3_quantity,
    cond2_quantity,
    geometric_grid,
    lemma1_consistency,
    lemma3_diagnostic,
    lemma4_diagnostic,
)
from .estimators import CanonicalProduct, SlowDecreaseClassifier, ZeroCountingTransformer
