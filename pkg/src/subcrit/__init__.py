"""subcrit: contractive autoregressive-type Markov chains.

Simulation of six related process families (additive and max
autoregression with random nonnegative coefficient matrices, multitype
branching with immigration in random environment, general random
exchange processes, mortal frog systems, cookie-perturbed random walks
in random environment), Monte Carlo estimation of the contraction rate
of random matrix products, and numerical recurrence/transience
classification through product-series criteria, cross-checked by
simulation probes.
"""

__version__ = "0.1.0"

from .classify import (
    INCONCLUSIVE,
    POSITIVE_RECURRENT,
    RECURRENT,
    TRANSIENT,
    TRANSIENT_LEFT,
    TRANSIENT_RIGHT,
    SeriesSpec,
    Verdict,
    anchor_scan,
    cookie_verdict,
    exchange_verdict,
    frog_rho,
    frog_verdict,
    kesten_kellerer_verdict,
    series_verdict,
    sufficient_conditions,
)
from .dist import (
    Deterministic,
    DiscreteTable,
    ExpOf,
    FloorOf,
    Geometric,
    InnovationLaw,
    LogPareto,
    ParetoTail,
    Poisson,
    ScaledVector,
    Shifted,
    TailClass,
    ZeroInflated,
    law_from_json,
    tail_class,
)
from .harness import (
    AgreementReport,
    ProbeReport,
    Scenario,
    agreement,
    classify_scenario,
    parse_scenario,
    probe,
    run_scenario,
)
from .matrix_env import (
    LogProductState,
    LyapunovEstimate,
    MatrixEnsemble,
    VariationStats,
    absorb,
    check_pr,
    estimate_lyapunov,
    is_primitive,
    perron_limit,
    sample_matrix,
    spectral_radius,
    variation_stats,
)
from .processes import (
    ArState,
    BranchingState,
    CookieWalkConfig,
    ExchangeState,
    FrogConfig,
    FrogOutcome,
    OffspringModel,
    TrajectoryRecord,
    ar_step,
    branching_step,
    exchange_step,
    simulate_ar,
    simulate_branching,
    simulate_cookie_walk,
    simulate_exchange,
    simulate_frog,
)
from .selftest import selftest
