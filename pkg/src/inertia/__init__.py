"""Inertial belief updating on finite state spaces.

Posteriors are the beliefs closest to the prior, in a subjective distance,
among those consistent with the observed event. The package bundles the
distance catalog and its closed-form posteriors, a generic simplex solver,
complete updating rules for zero-probability events (ladders and the
two-branch hypothesis-testing rule), revealed-preference audits of observed
conditional beliefs, distorted signal-structure updating, and a persuasion
solver against distorted receivers.
"""

from .core import (
    DEFAULT_POLICY,
    Belief,
    EmptySupport,
    Event,
    InertiaError,
    InvalidBelief,
    NullEvent,
    NumericPolicy,
    StateSpace,
    all_nonempty_events,
    bayes_update,
    bayes_update_weights,
    event_mass,
    support,
)
from .distances import (
    BayesianDivergence,
    ConfirmationBias,
    DistanceSpec,
    Distorted,
    DomainError,
    Euclidean,
    Identity,
    LogShifted,
    Mixed,
    Power,
    PowerRenyi,
    Sigmoid,
    SupportDependent,
    Table,
    TableMiss,
    bayesian_function,
    distance_eval,
    sigma_eval,
)
from .solver import (
    NoConvergence,
    SolverConfig,
    UndefinedPosterior,
    closed_form_posterior,
    minimize_over_event,
    posterior,
    project_onto_event_face,
)
from .models import (
    IUModel,
    UpdateFamily,
    UpdateFamilyError,
    WIUModel,
    iu_posterior,
    update_family,
    wiu_posterior,
)
from .audits import (
    AuditReport,
    CycleFound,
    GammaMismatch,
    Inconsistent,
    Violation,
    check_conditional_consistency,
    check_consequentialism,
    check_consistency_axiom,
    check_dynamic_coherence,
    check_dynamic_consistency,
    check_iia,
    check_monotonicity,
    fit_distortion,
    rank_certificate,
    recover_wiu,
    run_all_audits,
)
from .ladders import (
    ConstructionFailed,
    HTModel,
    Ladder,
    LadderDistance,
    LadderError,
    NotCPS,
    Unreachable,
    check_cps,
    cps_distance,
    cps_posterior,
    ecps_posterior,
    ht_from_ecps,
    ht_posterior,
    ladder_from_family,
)
from .signals import (
    SignalModel,
    ZeroDenominator,
    grether_distance_check,
    grether_posterior,
    product_prior,
)
from .persuasion import (
    Degenerate,
    PersuasionEnv,
    PersuasionSolution,
    SignalStructure,
    grid_oracle,
    optimize_binary,
    optimize_rich,
    receiver_action,
    sender_value,
)

__version__ = "0.1.0"
