//! Seeded Monte Carlo estimation of confidence sets for rationalizability.
//!
//! A replication draws one dataset, evaluates whether the target action is
//! weakly rationalizable for some permitted belief and certified for all of
//! them, and the engine averages the two indicators over replications.  The
//! lower estimate can never exceed the upper one by more than Monte Carlo
//! noise because the indicators are ordered within every replication.
//!
//! Seeding is counter-based: each replication derives its generator from the
//! master seed and its own index, so results are bit-identical no matter how
//! replications are scheduled across threads.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::iter::{IntoParallelIterator, ParallelIterator};
use serde::Serialize;

use crate::learning::Dataset;
use crate::scenarios::{
    lockdown_status, sample_binary_dataset, sample_coordination_dataset, sample_location_dataset,
    sample_trade_dataset, trade_disagreement, CoordinationScenario, DisagreementChecker,
    GaussianLocationScenario, LockdownStatus, RichPriorsScenario, TradeScenario,
};
use crate::{Error, Result};

/// Outcome of the certified-for-all-beliefs evaluation in one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trivalent {
    /// Certification succeeded.
    Yes,
    /// Certification is refuted.
    No,
    /// Neither certificate nor refutation was found; counted separately and
    /// contributing zero to the lower estimate.
    Indeterminate,
}

/// Indicators produced by one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicationOutcome {
    /// The action survives for at least one permitted belief.
    pub weak: bool,
    /// The action is certified against every permitted belief.
    pub strong: Trivalent,
}

/// Which evaluation route the engine runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Scenario's exact characterization only.
    FastOnly,
    /// Learning-rule plus solver pipeline only.
    GenericOnly,
    /// Run both and fail loudly on any per-replication disagreement.
    CrossCheck,
}

/// A Monte Carlo cell: a data-generating process bound to a target action
/// and a permitted rule set, with two independent evaluation routes.
pub trait MonteCarloScenario: Sync {
    /// Smallest dataset size the sampler accepts.
    fn min_n(&self) -> u32 {
        1
    }

    /// Draw one dataset of size `n`.
    ///
    /// # Errors
    /// Implementation-defined sampling errors.
    fn sample(&self, n: u32, rng: &mut dyn RngCore) -> Result<Dataset>;

    /// Exact-characterization indicators.
    ///
    /// # Errors
    /// Implementation-defined evaluation errors.
    fn fast(&self, data: &Dataset) -> Result<ReplicationOutcome>;

    /// Solver-route indicators; defaults to the fast route for scenarios
    /// whose only evaluation is already exact.
    ///
    /// # Errors
    /// Implementation-defined evaluation errors.
    fn generic(&self, data: &Dataset) -> Result<ReplicationOutcome> {
        self.fast(data)
    }
}

/// Monte Carlo estimate of a confidence set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceEstimate {
    /// Mean of the certified-for-all indicator.
    pub p_lower_hat: f64,
    /// Mean of the some-belief indicator.
    pub p_upper_hat: f64,
    /// Binomial standard error of the lower estimate.
    pub se_lower: f64,
    /// Binomial standard error of the upper estimate.
    pub se_upper: f64,
    /// Fraction of replications with an indeterminate certification.
    pub indeterminate_rate: f64,
    /// Number of replications.
    pub replications: u32,
    /// Master seed the replication streams derive from.
    pub master_seed: u64,
    /// Dataset size per replication.
    pub n: u32,
}

const SPLITMIX_INCREMENT: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix_next(state: &mut u64) -> u64 {
    *state = state.wrapping_add(SPLITMIX_INCREMENT);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the 256-bit stream seed for one replication.
///
/// The index is folded into the master seed by multiplication with the odd
/// 64-bit golden-ratio constant (injective per master seed), and four
/// successive SplitMix64 outputs form the stream key.  The derivation
/// depends only on the pair of inputs, never on execution order.
#[must_use]
pub fn derive_replication_seed(master_seed: u64, replication_index: u64) -> [u8; 32] {
    let mut state = master_seed ^ replication_index.wrapping_mul(SPLITMIX_INCREMENT);
    let mut out = [0u8; 32];
    for chunk in out.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix_next(&mut state).to_le_bytes());
    }
    out
}

/// The replication's dedicated generator.
#[must_use]
pub fn replication_rng(master_seed: u64, replication_index: u64) -> ChaCha12Rng {
    ChaCha12Rng::from_seed(derive_replication_seed(master_seed, replication_index))
}

fn run_replication(
    scenario: &dyn MonteCarloScenario,
    n: u32,
    master_seed: u64,
    index: u64,
    mode: EvalMode,
) -> Result<ReplicationOutcome> {
    let mut rng = replication_rng(master_seed, index);
    let data = scenario.sample(n, &mut rng)?;
    let outcome = match mode {
        EvalMode::FastOnly => scenario.fast(&data)?,
        EvalMode::GenericOnly => scenario.generic(&data)?,
        EvalMode::CrossCheck => {
            let fast = scenario.fast(&data)?;
            let generic = scenario.generic(&data)?;
            if fast != generic {
                return Err(Error::CrossCheckMismatch(format!(
                    "replication {index}: fast {fast:?} vs generic {generic:?}"
                )));
            }
            fast
        }
    };
    if outcome.strong == Trivalent::Yes && !outcome.weak {
        return Err(Error::Internal(format!(
            "replication {index}: certified but not weakly rationalizable"
        )));
    }
    Ok(outcome)
}

/// Estimate `[p_lower, p_upper]` for a scenario cell by `replications`
/// seeded Monte Carlo draws of size-`n` datasets.
///
/// Replications run in parallel; the reduction is a sum of integer counts,
/// so the estimate is identical for every execution order.  Indeterminate
/// certifications count zero toward the lower estimate, stay in both
/// denominators, and are reported in `indeterminate_rate`.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `replications = 0` or `n` below the
/// scenario minimum; [`Error::CrossCheckMismatch`] when the two routes
/// disagree in cross-check mode; evaluation errors are propagated.
pub fn estimate_confidence_set(
    scenario: &dyn MonteCarloScenario,
    n: u32,
    replications: u32,
    master_seed: u64,
    mode: EvalMode,
) -> Result<ConfidenceEstimate> {
    if replications == 0 {
        return Err(Error::invalid("replications must be >= 1"));
    }
    if n < scenario.min_n() {
        return Err(Error::invalid(format!(
            "n = {n} below scenario minimum {}",
            scenario.min_n()
        )));
    }
    let outcomes: Vec<ReplicationOutcome> = (0..u64::from(replications))
        .into_par_iter()
        .map(|r| run_replication(scenario, n, master_seed, r, mode))
        .collect::<Result<_>>()?;
    let mut weak_count = 0u64;
    let mut strong_count = 0u64;
    let mut indet_count = 0u64;
    for o in &outcomes {
        weak_count += u64::from(o.weak);
        match o.strong {
            Trivalent::Yes => strong_count += 1,
            Trivalent::No => {}
            Trivalent::Indeterminate => indet_count += 1,
        }
    }
    let r = f64::from(replications);
    let p_upper_hat = weak_count as f64 / r;
    let p_lower_hat = strong_count as f64 / r;
    let se = |p: f64| (p * (1.0 - p) / r).sqrt();
    Ok(ConfidenceEstimate {
        p_lower_hat,
        p_upper_hat,
        se_lower: se(p_lower_hat),
        se_upper: se(p_upper_hat),
        indeterminate_rate: indet_count as f64 / r,
        replications,
        master_seed,
        n,
    })
}

/// Entry action of the rectangle-classification market, evaluated by a
/// configured disagreement checker.  Certification is structurally refuted
/// in this market, so the strong indicator is identically no; both checkers
/// are exact characterizations, so the generic route coincides with the
/// fast one and checker comparisons happen across cells.
#[derive(Debug, Clone)]
pub struct TradeMc {
    /// Environment parameters.
    pub scenario: TradeScenario,
    /// Which per-dataset disagreement test to use.
    pub checker: DisagreementChecker,
}

impl MonteCarloScenario for TradeMc {
    fn sample(&self, n: u32, rng: &mut dyn RngCore) -> Result<Dataset> {
        sample_trade_dataset(&self.scenario, n, rng)
    }

    fn fast(&self, data: &Dataset) -> Result<ReplicationOutcome> {
        Ok(ReplicationOutcome {
            weak: trade_disagreement(data, &self.scenario, self.checker)?,
            strong: Trivalent::No,
        })
    }
}

/// Strict action of the lockdown coordination game.  The fast route reads
/// the confidence interval's position against 1; the generic route feeds
/// interval-derived point-mass beliefs to the game solver.
#[derive(Debug, Clone, Copy)]
pub struct CoordinationMc {
    /// Environment parameters.
    pub scenario: CoordinationScenario,
}

fn status_outcome(status: LockdownStatus) -> ReplicationOutcome {
    ReplicationOutcome {
        weak: status != LockdownStatus::NoneRationalizable,
        strong: if status == LockdownStatus::StrongForAll {
            Trivalent::Yes
        } else {
            Trivalent::No
        },
    }
}

impl MonteCarloScenario for CoordinationMc {
    fn min_n(&self) -> u32 {
        2
    }

    fn sample(&self, n: u32, rng: &mut dyn RngCore) -> Result<Dataset> {
        sample_coordination_dataset(&self.scenario, n, rng)
    }

    fn fast(&self, data: &Dataset) -> Result<ReplicationOutcome> {
        let iv = self.scenario.beta_confidence_interval(data)?;
        Ok(status_outcome(lockdown_status(iv)))
    }

    fn generic(&self, data: &Dataset) -> Result<ReplicationOutcome> {
        let iv = self.scenario.beta_confidence_interval(data)?;
        Ok(status_outcome(self.scenario.solver_status(iv)?))
    }
}

/// Entry action of the binary-signal market with a prior grid.  The fast
/// route compares grid-corner posteriors to the price; the generic route
/// applies the posterior learning rules and solves the market game.
#[derive(Debug, Clone)]
pub struct RichPriorsMc {
    /// Environment parameters.
    pub scenario: RichPriorsScenario,
}

impl MonteCarloScenario for RichPriorsMc {
    fn sample(&self, n: u32, rng: &mut dyn RngCore) -> Result<Dataset> {
        sample_binary_dataset(&self.scenario, n, rng)
    }

    fn fast(&self, data: &Dataset) -> Result<ReplicationOutcome> {
        let st = self.scenario.trade_status(data)?;
        Ok(ReplicationOutcome {
            weak: st.weak_enter,
            strong: if st.strong_enter {
                Trivalent::Yes
            } else {
                Trivalent::No
            },
        })
    }

    fn generic(&self, data: &Dataset) -> Result<ReplicationOutcome> {
        let st = self.scenario.solver_trade_status(data)?;
        Ok(ReplicationOutcome {
            weak: st.weak_enter,
            strong: if st.strong_enter {
                Trivalent::Yes
            } else {
                Trivalent::No
            },
        })
    }
}

/// Strict action under Gaussian location learning with a family of
/// conjugate priors.  The fast route thresholds posterior means; the
/// generic route solves the game on the learned belief set.
#[derive(Debug, Clone)]
pub struct LocationMc {
    /// Environment parameters.
    pub scenario: GaussianLocationScenario,
}

fn pair_outcome((weak, strong): (bool, bool)) -> ReplicationOutcome {
    ReplicationOutcome {
        weak,
        strong: if strong { Trivalent::Yes } else { Trivalent::No },
    }
}

impl MonteCarloScenario for LocationMc {
    fn sample(&self, n: u32, rng: &mut dyn RngCore) -> Result<Dataset> {
        sample_location_dataset(&self.scenario, n, rng)
    }

    fn fast(&self, data: &Dataset) -> Result<ReplicationOutcome> {
        self.scenario.status(data).map(pair_outcome)
    }

    fn generic(&self, data: &Dataset) -> Result<ReplicationOutcome> {
        self.scenario.solver_status(data).map(pair_outcome)
    }
}
