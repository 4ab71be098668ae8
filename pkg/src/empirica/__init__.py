"""empirica: simulation and numerical verification of the joint limit of
the empirical process and the rescaled empirical distribution function."""

from .cadlag import (
    CadlagStep,
    CountingClass,
    Grid,
    TimeChange,
    classify_counting,
    j1_distance,
    j1_local_distance,
    modulus_w_hat,
    oscillation,
)
from .changepoint import (
    ChangePointModel,
    EstimatePair,
    LimitPairSample,
    estimate,
    run_convergence_1d,
    simulate_limit_pair,
)
from .charfn import CharFn, empirical_cf, psi_limit, psi_n_bruteforce, psi_n_exact
from .dists import (
    AtomMix,
    C1Derivatives,
    Cdf,
    PolygonalF,
    StandardNormal,
    Uniform01,
    one_sided_derivatives,
    quantile_transform,
    sample,
)
from .empirical import (
    AlphaProcess,
    BetaProcess,
    EmpiricalCdf,
    Fidi,
    extract_fidi,
    make_alpha,
    make_beta,
)
from .kernels import BACKEND
from .limits import (
    BrownianBridgeFidi,
    TwoSidedPoissonPath,
    n0_fidi_law,
    sample_bridge_fidi,
    sample_n0_path,
)
from .montecarlo import (
    ExperimentConfig,
    run_fidi_convergence,
    run_independence,
    run_linkage_check,
    run_modulus_diagnostics,
)
from .report import ExperimentReport, RunManifest

__version__ = "0.1.0"
