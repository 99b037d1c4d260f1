"""Minimum description length model selection: universal codes, parametric
complexity, model and variable selection, Bayesian-network scores and tests."""
from .models import (
    CountStats,
    TransitionStats,
    GaussianStats,
    GramStats,
    ModelFamily,
    Multinomial,
    Bernoulli,
    MarkovChain,
    GaussianLocation,
    LinearRegression,
    Singleton,
    Luckiness,
    Uniform,
    GaussianOnCoefficients,
    DiscretizedMass,
    StartUpData,
    CustomLuckiness,
    sufficient_stats,
    log_likelihood,
    mle,
    mdl_estimate,
)
from .complexity import (
    Method,
    ComplexityValue,
    FisherIntegral,
    comp_bernoulli_exact,
    comp_multinomial_exact,
    comp_multinomial_szpankowski,
    jeffreys_integral_multinomial,
    comp_asymptotic,
    comp_bernoulli,
    comp_markov,
)
from .universal import (
    Beta,
    Dirichlet,
    Normal,
    jeffreys_prior,
    UniversalDistribution,
    BayesMarginal,
    ConditionalBayes,
    NML,
    LNMLRegression,
    TwoPart,
    PluginPredictor,
    PointMass,
    bayes_log_marginal,
    bayes_log_predictive,
    conditional_bayes_log,
    nml_log_marginal,
    lnml_regression_log,
    two_part_log,
    preq_plugin_log,
    regret,
)
from .switchdist import (
    default_switch_prior,
    SwitchBoundCheck,
    SwitchDistribution,
    switch_log_marginal,
    switch_regret_bound_check,
)
from .selection import (
    Candidate,
    SelectionRow,
    SelectionResult,
    select,
    gamma_code_length,
    subset_codelength,
    variable_select,
    parse_subset,
    markov_order_select,
)
from .bnscore import (
    CategoricalDataset,
    Dag,
    fnml_local,
    nml_full,
    qnml_local,
    bdeu_local,
    LocalScoreCache,
    network_score,
    fnml_total,
    qnml_total,
    bdeu_total,
    HillClimbResult,
    hill_climb,
)
from .safetest import (
    EvidenceReport,
    as_simple_null,
    evidence,
    combine,
    sequential_evidence,
    simulate_evidence,
    Type1Result,
    type1_simulate,
)
from .estimators import (
    MDLVariableSelector,
    MarkovOrderSelector,
    StructureLearner,
)
from .exceptions import (
    MDLError,
    InvalidInputError,
    DegenerateDesignError,
    InvalidLuckinessError,
    UnsupportedPriorError,
    ComplexityDivergesError,
    NoDataRemainingError,
    UndefinedStartError,
    UnsupportedCompositeError,
    UnsupportedCardinalityError,
)

__version__ = "0.1.0"

__all__ = [
    "CountStats",
    "TransitionStats",
    "GaussianStats",
    "GramStats",
    "ModelFamily",
    "Multinomial",
    "Bernoulli",
    "MarkovChain",
    "GaussianLocation",
    "LinearRegression",
    "Singleton",
    "Luckiness",
    "Uniform",
    "GaussianOnCoefficients",
    "DiscretizedMass",
    "StartUpData",
    "CustomLuckiness",
    "sufficient_stats",
    "log_likelihood",
    "mle",
    "mdl_estimate",
    "Method",
    "ComplexityValue",
    "FisherIntegral",
    "comp_bernoulli_exact",
    "comp_multinomial_exact",
    "comp_multinomial_szpankowski",
    "jeffreys_integral_multinomial",
    "comp_asymptotic",
    "comp_bernoulli",
    "comp_markov",
    "Beta",
    "Dirichlet",
    "Normal",
    "jeffreys_prior",
    "UniversalDistribution",
    "BayesMarginal",
    "ConditionalBayes",
    "NML",
    "LNMLRegression",
    "TwoPart",
    "PluginPredictor",
    "PointMass",
    "bayes_log_marginal",
    "bayes_log_predictive",
    "conditional_bayes_log",
    "nml_log_marginal",
    "lnml_regression_log",
    "two_part_log",
    "preq_plugin_log",
    "regret",
    "default_switch_prior",
    "SwitchBoundCheck",
    "SwitchDistribution",
    "switch_log_marginal",
    "switch_regret_bound_check",
    "Candidate",
    "SelectionRow",
    "SelectionResult",
    "select",
    "gamma_code_length",
    "subset_codelength",
    "variable_select",
    "parse_subset",
    "markov_order_select",
    "CategoricalDataset",
    "Dag",
    "fnml_local",
    "nml_full",
    "qnml_local",
    "bdeu_local",
    "LocalScoreCache",
    "network_score",
    "fnml_total",
    "qnml_total",
    "bdeu_total",
    "HillClimbResult",
    "hill_climb",
    "EvidenceReport",
    "as_simple_null",
    "evidence",
    "combine",
    "sequential_evidence",
    "simulate_evidence",
    "Type1Result",
    "type1_simulate",
    "MDLVariableSelector",
    "MarkovOrderSelector",
    "StructureLearner",
    "MDLError",
    "InvalidInputError",
    "DegenerateDesignError",
    "InvalidLuckinessError",
    "UnsupportedPriorError",
    "ComplexityDivergesError",
    "NoDataRemainingError",
    "UndefinedStartError",
    "UnsupportedCompositeError",
    "UnsupportedCardinalityError",
]
