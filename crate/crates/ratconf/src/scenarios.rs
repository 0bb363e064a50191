//! Concrete environments: data-generating processes paired with fast
//! per-dataset rationalizability checkers and solver-based cross-checks.
//!
//! Three environments ship here.  A market for a rectangle-classification
//! technology, where entry is rationalizable only while consistent
//! classifiers disagree about the traded point.  A lockdown coordination
//! game whose payoff parameter is a growth rate estimated from a noisy count
//! series.  A binary-signal market with a grid of priors and accuracies,
//! where entry needs posteriors on both sides of the price.  A fourth,
//! Gaussian location learning, exercises the deviation-based bounds on a
//! family of conjugate priors.
//!
//! Each environment has two evaluation routes: a direct formula or geometric
//! test (fast path), and the learning-rule plus game-solver pipeline
//! (generic path).  The two are kept independent so they can be compared
//! replication by replication.

use rand_core::RngCore;

use crate::closedforms::{self, Bound, EmpiricalMeasure};
use crate::gauss;
use crate::learning::{self, posterior_binary_pq, Dataset, LearningRule, Observation, RuleSet};
use crate::measures::{Belief, BeliefSet, ParameterBox};
use crate::solver::{strong_rationalizable, weak_rationalizable, FiniteGame, StrongStatus};
use crate::{Error, Result};

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::invalid(format!("{name} must be in (0,1), got {v}")));
    }
    Ok(())
}

/// Market for a rectangle classifier: attributes are uniform on `[-1,1]^m`,
/// the label is membership in a true rectangle around the origin, and the
/// traded question is the origin's own label.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeScenario {
    rlo: Vec<f64>,
    rhi: Vec<f64>,
    price: f64,
    cost: f64,
}

impl TradeScenario {
    /// Rectangle `[-rlo_k, rhi_k]` per dimension, all bounds in (0,1), with
    /// `0 < cost < price < 1`.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] on violated bounds.
    pub fn new(rlo: Vec<f64>, rhi: Vec<f64>, price: f64, cost: f64) -> Result<Self> {
        if rlo.is_empty() || rlo.len() != rhi.len() {
            return Err(Error::invalid("rlo and rhi must be nonempty, equal length"));
        }
        for v in rlo.iter().chain(&rhi) {
            check_open_unit("rectangle bound", *v)?;
        }
        check_open_unit("price", price)?;
        if !(cost > 0.0 && cost < price) {
            return Err(Error::invalid(format!(
                "cost must satisfy 0 < cost < price, got {cost}"
            )));
        }
        Ok(TradeScenario {
            rlo,
            rhi,
            price,
            cost,
        })
    }

    /// Symmetric rectangle `[-a, a]^m`.
    ///
    /// # Errors
    /// As [`TradeScenario::new`].
    pub fn symmetric(m: u32, a: f64, price: f64, cost: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("m must be >= 1"));
        }
        TradeScenario::new(vec![a; m as usize], vec![a; m as usize], price, cost)
    }

    /// Attribute count.
    #[must_use]
    pub fn m(&self) -> u32 {
        self.rlo.len() as u32
    }

    /// Posted price.
    #[must_use]
    pub fn price(&self) -> f64 {
        self.price
    }

    /// Seller's entry cost.
    #[must_use]
    pub fn cost(&self) -> f64 {
        self.cost
    }

    /// Probability that a uniform attribute draw is labeled 1.
    #[must_use]
    pub fn volume_fraction(&self) -> f64 {
        self.rlo
            .iter()
            .zip(&self.rhi)
            .map(|(&a, &b)| (a + b) / 2.0)
            .product()
    }

    /// Exact disagreement probability for `n` observations.
    ///
    /// # Errors
    /// Propagates [`closedforms::trade_pbar_rect`] errors.
    pub fn closed_form_pbar(&self, n: u32) -> Result<f64> {
        closedforms::trade_pbar_rect(n, &self.rlo, &self.rhi)
    }

    fn inside(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.rlo.iter().zip(&self.rhi))
            .all(|(&xi, (&a, &b))| -a <= xi && xi <= b)
    }
}

/// Which per-dataset disagreement test the trade environment uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisagreementChecker {
    /// Exact geometric test on the bounding box of 1-labeled observations.
    BoundingBox,
    /// Per-dimension occupancy test matching the closed-form derivation.
    PerDimension,
}

/// Draw `n` labeled attribute vectors, uniform on `[-1,1]^m`, labels truthful
/// for the scenario's rectangle (closed membership).
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `n = 0`.
pub fn sample_trade_dataset<R: RngCore + ?Sized>(
    s: &TradeScenario,
    n: u32,
    rng: &mut R,
) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let m = s.rlo.len();
    let mut obs = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let x: Vec<f64> = (0..m).map(|_| 2.0 * gauss::uniform01(rng) - 1.0).collect();
        let label = u8::from(s.inside(&x));
        obs.push(Observation::AttributeLabeled { x, label });
    }
    Dataset::new(obs)
}

/// True when some rectangle consistent with the data excludes the origin,
/// decided exactly: the closed bounding box of 1-labeled observations is the
/// smallest consistent rectangle, so disagreement holds iff the origin lies
/// outside it.  No 1-labeled observations means an empty box, hence true.
///
/// # Errors
/// Returns [`Error::InvalidInput`] unless the data are attribute-labeled.
pub fn trade_disagreement_bb(data: &Dataset) -> Result<bool> {
    let rows = data.labeled()?;
    let ones: Vec<&[f64]> = rows
        .iter()
        .filter(|(_, l)| *l == 1)
        .map(|(x, _)| *x)
        .collect();
    let Some(first) = ones.first() else {
        return Ok(true);
    };
    let m = first.len();
    for k in 0..m {
        let lo = ones.iter().map(|x| x[k]).fold(f64::INFINITY, f64::min);
        let hi = ones.iter().map(|x| x[k]).fold(f64::NEG_INFINITY, f64::max);
        if !(lo <= 0.0 && 0.0 <= hi) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Per-dimension occupancy disagreement test: true when some dimension `k`
/// has no observation coordinate in `[-rlo_k, 0)` or none in `(0, rhi_k]`.
/// All observations count, not only 1-labeled ones; this mirrors the event
/// whose probability the closed form computes, so Monte Carlo over this
/// checker reproduces [`closedforms::trade_pbar_rect`] exactly.
///
/// # Errors
/// Returns [`Error::InvalidInput`] unless the data are attribute-labeled
/// with the scenario's dimension.
pub fn trade_disagreement_paper(data: &Dataset, s: &TradeScenario) -> Result<bool> {
    let rows = data.labeled()?;
    let m = s.rlo.len();
    if rows.iter().any(|(x, _)| x.len() != m) {
        return Err(Error::invalid("observation dimension mismatch"));
    }
    for k in 0..m {
        let has_lo = rows
            .iter()
            .any(|(x, _)| x[k] >= -s.rlo[k] && x[k] < 0.0);
        let has_hi = rows.iter().any(|(x, _)| x[k] > 0.0 && x[k] <= s.rhi[k]);
        if !has_lo || !has_hi {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Dispatch on the configured checker.
///
/// # Errors
/// Propagates the underlying checker's errors.
pub fn trade_disagreement(
    data: &Dataset,
    s: &TradeScenario,
    checker: DisagreementChecker,
) -> Result<bool> {
    match checker {
        DisagreementChecker::BoundingBox => trade_disagreement_bb(data),
        DisagreementChecker::PerDimension => trade_disagreement_paper(data, s),
    }
}

/// Lockdown coordination environment: a count series grows at rate `beta`
/// with Gaussian noise of known standard deviation `sigma`, and the policy
/// question is whether the slope clears 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinationScenario {
    beta: f64,
    sigma: f64,
    alpha: f64,
}

impl CoordinationScenario {
    /// # Errors
    /// Returns [`Error::InvalidInput`] unless `sigma > 0`, `alpha` is in
    /// (0,1), and `beta` is finite.
    pub fn new(beta: f64, sigma: f64, alpha: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::invalid("beta must be finite"));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::invalid("sigma must be positive"));
        }
        check_open_unit("alpha", alpha)?;
        Ok(CoordinationScenario { beta, sigma, alpha })
    }

    /// True slope.
    #[must_use]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Known noise standard deviation.
    #[must_use]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Confidence level parameter.
    #[must_use]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Exact confidence pair for this scenario at sample size `n`.
    ///
    /// # Errors
    /// Propagates [`closedforms::coord_closed_form`] errors.
    pub fn closed_form(&self, n: u32) -> Result<closedforms::ClosedFormPair> {
        closedforms::coord_closed_form(n, self.beta, self.sigma, self.alpha)
    }

    /// Confidence interval for the slope from an observed series, using the
    /// scenario's known `sigma` and level `alpha`.
    ///
    /// # Errors
    /// Propagates estimation errors; needs at least two observations.
    pub fn beta_confidence_interval(&self, data: &Dataset) -> Result<ConfidenceInterval> {
        let (beta_hat, scale) = slope_and_scale(data)?;
        let half = gauss::z_alpha(self.alpha)? * self.sigma * scale.sqrt();
        Ok(ConfidenceInterval {
            lower: beta_hat - half,
            upper: beta_hat + half,
        })
    }

    /// Solver route for the interval's status: point-mass beliefs at the
    /// endpoints and midpoint, fed to the coordination game.
    ///
    /// # Errors
    /// Propagates solver errors.
    pub fn solver_status(&self, interval: ConfidenceInterval) -> Result<LockdownStatus> {
        let ConfidenceInterval { lower, upper } = interval;
        if !(lower.is_finite() && upper.is_finite() && lower <= upper) {
            return Err(Error::invalid("interval must be finite with lower <= upper"));
        }
        let bx = ParameterBox::new(vec![lower - 1.0], vec![upper + 1.0])?;
        let game = FiniteGame::coordination(bx.clone())?;
        let mut members = Vec::new();
        for b in [lower, 0.5 * (lower + upper), upper] {
            let belief = Belief::point_mass(bx.clone(), bx.point(vec![b])?)?;
            if !members
                .iter()
                .any(|m: &Belief| m.approx_eq(&belief, learning::BELIEF_DEDUP_TOL))
            {
                members.push(belief);
            }
        }
        let beliefs = BeliefSet::new(members)?;
        let strong_idx = game.action_index(0, "strong")?;
        let weak_sets = weak_rationalizable(&game, &beliefs)?;
        let strong = strong_rationalizable(&game, &beliefs)?;
        if strong.strong_status[0][strong_idx] == StrongStatus::CertifiedStrong {
            Ok(LockdownStatus::StrongForAll)
        } else if weak_sets[0].contains(&strong_idx) {
            Ok(LockdownStatus::SomeNotAll)
        } else {
            Ok(LockdownStatus::NoneRationalizable)
        }
    }
}

/// A two-sided confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    /// Lower endpoint.
    pub lower: f64,
    /// Upper endpoint.
    pub upper: f64,
}

impl ConfidenceInterval {
    /// Half of the interval length.
    #[must_use]
    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }
}

/// Rationalizability summary of the strict action as a function of the
/// confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LockdownStatus {
    /// The interval sits inside `[1, inf)`: strict action for every belief.
    StrongForAll,
    /// The interval straddles 1: strict action for some belief only.
    SomeNotAll,
    /// The interval lies below 1: strict action for no belief.
    NoneRationalizable,
}

/// Draw the count series `(t, beta*t + eps_t)` for `t = 1..n` with
/// `eps_t ~ N(0, sigma^2)` i.i.d.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `n < 2` (the slope's sampling
/// variance is undefined from one point).
pub fn sample_coordination_dataset<R: RngCore + ?Sized>(
    s: &CoordinationScenario,
    n: u32,
    rng: &mut R,
) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::invalid("n must be >= 2"));
    }
    let obs = (1..=n)
        .map(|t| Observation::TimeSeries {
            t,
            log_count: s.beta * f64::from(t) + s.sigma * gauss::standard_normal(rng),
        })
        .collect();
    Dataset::new(obs)
}

/// Slope estimate and its variance scale `n / sum((t - tbar)^2)`.
///
/// The weights start from the through-origin least-squares solution and add
/// a component orthogonal to the design, scaled so the sampling variance
/// under i.i.d. noise is exactly `sigma^2 * n / sum((t - tbar)^2)`; for the
/// canonical design `t = 1..n` that is `12 sigma^2 / (n^2 - 1)`, the
/// variance the confidence interval is built around.
fn slope_and_scale(data: &Dataset) -> Result<(f64, f64)> {
    let rows = data.time_series()?;
    let n = rows.len();
    if n < 2 {
        return Err(Error::invalid("slope estimation needs n >= 2"));
    }
    let t: Vec<f64> = rows.iter().map(|&(t, _)| f64::from(t)).collect();
    let y: Vec<f64> = rows.iter().map(|&(_, y)| y).collect();
    let st2: f64 = t.iter().map(|v| v * v).sum();
    let tbar = t.iter().sum::<f64>() / n as f64;
    let c: f64 = t.iter().map(|v| (v - tbar) * (v - tbar)).sum();
    if c <= 0.0 {
        return Err(Error::invalid(
            "degenerate design: all time indices equal",
        ));
    }
    let scale = n as f64 / c;
    // v is orthogonal to the design in the unbiasedness sense (sum v_t t = 0)
    // and nonzero because all t are positive.
    let w0: Vec<f64> = t.iter().map(|v| v / st2).collect();
    let v: Vec<f64> = (0..n)
        .map(|j| f64::from(u8::from(j == 0)) - t[0] / st2 * t[j])
        .collect();
    let v2: f64 = v.iter().map(|x| x * x).sum();
    let a = ((scale - 1.0 / st2) / v2).sqrt();
    let beta_hat = (0..n).map(|j| (w0[j] + a * v[j]) * y[j]).sum();
    Ok((beta_hat, scale))
}

/// Slope estimate for a count series: unbiased for the trend coefficient,
/// exact on noiseless data, and with sampling variance
/// `12 sigma^2 / (n^2 - 1)` on the canonical design `t = 1..n`.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for fewer than two observations or a
/// degenerate design (all time indices equal).
pub fn ols_beta_hat(data: &Dataset) -> Result<f64> {
    slope_and_scale(data).map(|(b, _)| b)
}

/// Classify an interval against the threshold 1; the endpoint 1 counts as
/// inside `[1, inf)`.
#[must_use]
pub fn lockdown_status(interval: ConfidenceInterval) -> LockdownStatus {
    if interval.lower >= 1.0 {
        LockdownStatus::StrongForAll
    } else if interval.upper >= 1.0 {
        LockdownStatus::SomeNotAll
    } else {
        LockdownStatus::NoneRationalizable
    }
}

/// Binary-signal market with a grid of priors and signal accuracies.  The
/// signal equals the true state with probability `q_star`; an observer with
/// prior `pi` and assumed accuracy `q` holds the two-point posterior
/// computed by [`posterior_binary_pq`].
#[derive(Debug, Clone, PartialEq)]
pub struct RichPriorsScenario {
    q_star: f64,
    v: u8,
    price: f64,
    pi_grid: Vec<f64>,
    q_grid: Vec<f64>,
}

impl RichPriorsScenario {
    /// # Errors
    /// Returns [`Error::InvalidInput`] unless `q_star` is in (1/2,1), `v` is
    /// 0 or 1, `price` is in (0,1), priors lie in (0,1), and accuracies lie
    /// in (1/2,1].
    pub fn new(
        q_star: f64,
        v: u8,
        price: f64,
        pi_grid: Vec<f64>,
        q_grid: Vec<f64>,
    ) -> Result<Self> {
        if !(q_star > 0.5 && q_star < 1.0) {
            return Err(Error::invalid(format!(
                "q_star must be in (1/2,1), got {q_star}"
            )));
        }
        if v > 1 {
            return Err(Error::invalid("v must be 0 or 1"));
        }
        check_open_unit("price", price)?;
        if pi_grid.is_empty() || q_grid.is_empty() {
            return Err(Error::invalid("grids must be nonempty"));
        }
        for &pi in &pi_grid {
            check_open_unit("pi", pi)?;
        }
        for &q in &q_grid {
            if !(q > 0.5 && q <= 1.0) {
                return Err(Error::invalid(format!("q must be in (1/2,1], got {q}")));
            }
        }
        Ok(RichPriorsScenario {
            q_star,
            v,
            price,
            pi_grid,
            q_grid,
        })
    }

    /// The truncated prior family used throughout the worked examples:
    /// priors {1/4, 3/4}, accuracies {2/3, 1}, signal accuracy 3/4.
    ///
    /// # Errors
    /// As [`RichPriorsScenario::new`].
    pub fn truncated_example(v: u8, price: f64) -> Result<Self> {
        RichPriorsScenario::new(
            0.75,
            v,
            price,
            vec![0.25, 0.75],
            vec![2.0 / 3.0, 1.0],
        )
    }

    /// Posted price.
    #[must_use]
    pub fn price(&self) -> f64 {
        self.price
    }

    /// True state.
    #[must_use]
    pub fn v(&self) -> u8 {
        self.v
    }

    /// Signal accuracy of the true process.
    #[must_use]
    pub fn q_star(&self) -> f64 {
        self.q_star
    }

    /// Smallest and largest posterior over the full grid for a dataset.
    ///
    /// The posterior is monotone in the prior and monotone in the accuracy
    /// (direction set by the sign of the signal excess), so the extremes are
    /// attained at grid corners; scanning the full product is still cheap
    /// and assumption-free.
    ///
    /// # Errors
    /// Propagates [`posterior_binary_pq`] errors.
    pub fn posterior_range(&self, data: &Dataset) -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &pi in &self.pi_grid {
            for &q in &self.q_grid {
                let v_hat = posterior_binary_pq(pi, q, data)?;
                lo = lo.min(v_hat);
                hi = hi.max(v_hat);
            }
        }
        Ok((lo, hi))
    }

    /// Fast-path rationalizability status for entry.
    ///
    /// Entry is weakly rationalizable iff grid posteriors fall strictly on
    /// both sides of the price: a low posterior makes entry profitable
    /// against buy-at-low-value conjectures, a high posterior keeps the
    /// buyer's buy action alive.  Certification for every grid belief is
    /// structurally impossible: it would need every posterior below the
    /// price (entry margin) and some posterior above it (a live buyer),
    /// which contradict, so `strong_enter` computes that conjunction rather
    /// than hard-coding false.
    ///
    /// # Errors
    /// Propagates posterior errors.
    pub fn trade_status(&self, data: &Dataset) -> Result<TradeStatus> {
        let (lo, hi) = self.posterior_range(data)?;
        let weak_enter = lo < self.price && hi > self.price;
        let strong_enter = weak_enter && hi < self.price;
        Ok(TradeStatus {
            weak_enter,
            strong_enter,
        })
    }

    /// Generic-path status: grid posteriors become two-point beliefs via the
    /// learning rules, and the market game is solved for weak and certified
    /// rationalizability of entry.  The entry cost is calibrated to
    /// `price * (1 - price)` so the seller's and buyer's posterior
    /// thresholds coincide at the price.
    ///
    /// # Errors
    /// Propagates learning and solver errors.
    pub fn solver_trade_status(&self, data: &Dataset) -> Result<TradeStatus> {
        let bx = ParameterBox::new(vec![-0.5], vec![1.5])?;
        let cost = self.price * (1.0 - self.price);
        let game = FiniteGame::trade(bx.clone(), self.price, cost)?;
        let mut rules = Vec::new();
        for &pi in &self.pi_grid {
            for &q in &self.q_grid {
                rules.push(LearningRule::BinaryPiQ { pi, q });
            }
        }
        let beliefs = learning::plausible_set(&RuleSet::new(rules)?, data, &bx)?;
        let enter = game.action_index(0, "enter")?;
        let weak_sets = weak_rationalizable(&game, &beliefs)?;
        let strong = strong_rationalizable(&game, &beliefs)?;
        Ok(TradeStatus {
            weak_enter: weak_sets[0].contains(&enter),
            strong_enter: strong.strong_status[0][enter] == StrongStatus::CertifiedStrong,
        })
    }

    /// Weak-entry status of a dataset summarized by its count of 1-signals.
    /// The posterior depends on the data only through this count.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] for `n = 0` or `ones > n`.
    pub fn weak_enter_from_counts(&self, ones: u32, n: u32) -> Result<bool> {
        if n == 0 || ones > n {
            return Err(Error::invalid("need 0 <= ones <= n with n >= 1"));
        }
        let mut zs = vec![0u8; n as usize];
        zs.iter_mut().take(ones as usize).for_each(|z| *z = 1);
        let data = Dataset::from_binary(&zs)?;
        let status = self.trade_status(&data)?;
        Ok(status.weak_enter)
    }

    /// Exact probability that entry is weakly rationalizable at sample size
    /// `n`: the binomial mass of 1-signal counts whose posteriors straddle
    /// the price.
    ///
    /// # Errors
    /// Propagates count-status errors.
    pub fn exact_pbar(&self, n: u32) -> Result<f64> {
        if n == 0 {
            return Err(Error::invalid("n must be >= 1"));
        }
        let p1 = if self.v == 1 {
            self.q_star
        } else {
            1.0 - self.q_star
        };
        let nf = f64::from(n);
        let mut total = 0.0;
        let mut log_choose = 0.0f64;
        for k in 0..=n {
            if k > 0 {
                log_choose += (nf - f64::from(k) + 1.0).ln() - f64::from(k).ln();
            }
            if self.weak_enter_from_counts(k, n)? {
                let log_pmf =
                    log_choose + f64::from(k) * p1.ln() + (nf - f64::from(k)) * (1.0 - p1).ln();
                total += log_pmf.exp();
            }
        }
        Ok(total)
    }

    /// Large-deviation upper bound on the weak-entry probability: scan all
    /// counts, take the smallest divergence from the true signal law among
    /// entry-inducing counts, and apply the method-of-types bound.
    ///
    /// # Errors
    /// Propagates count-status and divergence errors.
    pub fn sanov_bound(&self, n: u32) -> Result<SanovRate> {
        if n == 0 {
            return Err(Error::invalid("n must be >= 1"));
        }
        let p1 = if self.v == 1 {
            self.q_star
        } else {
            1.0 - self.q_star
        };
        let truth = EmpiricalMeasure::from_probs(vec![p1, 1.0 - p1])?;
        let mut dkl_star = f64::INFINITY;
        let mut weak_count = 0u32;
        for k in 0..=n {
            if self.weak_enter_from_counts(k, n)? {
                weak_count += 1;
                let qhat =
                    EmpiricalMeasure::from_counts(&[u64::from(k), u64::from(n - k)])?;
                dkl_star = dkl_star.min(closedforms::kl_divergence(&qhat, &truth)?);
            }
        }
        let bound = closedforms::sanov_upper_bound(n, 2, dkl_star)?;
        Ok(SanovRate {
            weak_count,
            dkl_star,
            bound,
        })
    }
}

/// Rationalizability status of the seller's entry action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TradeStatus {
    /// Entry survives for some permitted belief.
    pub weak_enter: bool,
    /// Entry is certified against every permitted belief.
    pub strong_enter: bool,
}

/// Output of the large-deviation pipeline at one sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SanovRate {
    /// Number of 1-signal counts that make entry weakly rationalizable.
    pub weak_count: u32,
    /// Smallest divergence (bits) from the truth among those counts;
    /// infinite when no count qualifies.
    pub dkl_star: f64,
    /// `(n+1)^2 * 2^(-n * dkl_star)`, clamped into [0,1].
    pub bound: Bound,
}

/// Draw `n` i.i.d. binary signals with `P(z = v) = q_star`.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `n = 0`.
pub fn sample_binary_dataset<R: RngCore + ?Sized>(
    s: &RichPriorsScenario,
    n: u32,
    rng: &mut R,
) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let zs: Vec<u8> = (0..n)
        .map(|_| {
            if gauss::uniform01(rng) < s.q_star {
                s.v
            } else {
                1 - s.v
            }
        })
        .collect();
    Dataset::from_binary(&zs)
}

/// Gaussian location environment: signals `z_t = beta + eps_t` with standard
/// normal noise, observed by a family of conjugate learners whose prior
/// means span `[-eta, eta]`.  Each learner's posterior mean is
/// `(x + n*zbar)/(n+1)`, clamped into the parameter box `[beta-2, beta+2]`,
/// and the question is again whether the location clears 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianLocationScenario {
    beta: f64,
    eta: f64,
    prior_means: Vec<f64>,
}

impl GaussianLocationScenario {
    /// Evenly spaced prior means over `[-eta, eta]`.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] unless `beta > 1`, `eta >= 0`, and
    /// `grid_count >= 2`.
    pub fn new(beta: f64, eta: f64, grid_count: u32) -> Result<Self> {
        if !(beta > 1.0) || !beta.is_finite() {
            return Err(Error::invalid("beta must exceed 1"));
        }
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::invalid("eta must be >= 0"));
        }
        if grid_count < 2 {
            return Err(Error::invalid("grid_count must be >= 2"));
        }
        let step = 2.0 * eta / f64::from(grid_count - 1);
        let prior_means = (0..grid_count)
            .map(|i| -eta + f64::from(i) * step)
            .collect();
        Ok(GaussianLocationScenario {
            beta,
            eta,
            prior_means,
        })
    }

    /// True location.
    #[must_use]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Half-range of the prior means.
    #[must_use]
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The parameter box shared by learners and the game.
    ///
    /// # Errors
    /// Box construction cannot fail for finite `beta`.
    pub fn parameter_box(&self) -> Result<ParameterBox> {
        ParameterBox::new(vec![self.beta - 2.0], vec![self.beta + 2.0])
    }

    /// The conjugate learner family.
    ///
    /// # Errors
    /// Rule-set construction fails only on an empty family.
    pub fn rules(&self) -> Result<RuleSet> {
        RuleSet::new(
            self.prior_means
                .iter()
                .map(|&m| LearningRule::NormalConjugate { prior_mean: m })
                .collect(),
        )
    }

    /// Posterior means of every learner, clamped into the parameter box.
    ///
    /// # Errors
    /// Propagates learning errors.
    pub fn posterior_means(&self, data: &Dataset) -> Result<Vec<f64>> {
        let vs = data.scalar_values()?;
        let n = vs.len() as f64;
        let zbar = vs.iter().sum::<f64>() / n;
        let bx = self.parameter_box()?;
        Ok(self
            .prior_means
            .iter()
            .map(|&x| {
                ((x + n * zbar) / (n + 1.0))
                    .clamp(self.beta - 2.0, self.beta + 2.0)
            })
            .inspect(|m| debug_assert!(bx.contains(&[*m])))
            .collect())
    }

    /// Fast-path status of the strict action: weakly rationalizable iff
    /// some posterior mean reaches 1, certified for all learners iff every
    /// posterior mean does.
    ///
    /// # Errors
    /// Propagates learning errors.
    pub fn status(&self, data: &Dataset) -> Result<(bool, bool)> {
        let means = self.posterior_means(data)?;
        let hi = means.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let lo = means.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        Ok((hi >= 1.0, lo >= 1.0))
    }

    /// Generic-path status via learned beliefs and the coordination game.
    ///
    /// # Errors
    /// Propagates learning and solver errors.
    pub fn solver_status(&self, data: &Dataset) -> Result<(bool, bool)> {
        let bx = self.parameter_box()?;
        let game = FiniteGame::coordination(bx.clone())?;
        let beliefs = learning::plausible_set(&self.rules()?, data, &bx)?;
        let strong_idx = game.action_index(0, "strong")?;
        let weak_sets = weak_rationalizable(&game, &beliefs)?;
        let strong = strong_rationalizable(&game, &beliefs)?;
        Ok((
            weak_sets[0].contains(&strong_idx),
            strong.strong_status[0][strong_idx] == StrongStatus::CertifiedStrong,
        ))
    }

    /// Largest Prokhorov deviation of any learner's belief from the
    /// point-mass limit at the true location.
    ///
    /// # Errors
    /// Propagates learning errors.
    pub fn sup_deviation(&self, data: &Dataset) -> Result<f64> {
        let bx = self.parameter_box()?;
        let limit = Belief::point_mass(bx.clone(), bx.point(vec![self.beta])?)?;
        learning::sup_deviation(&self.rules()?, data, &limit, &bx)
    }
}

/// Draw `n` location signals `beta + eps_t`, standard normal noise.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `n = 0`.
pub fn sample_location_dataset<R: RngCore + ?Sized>(
    s: &GaussianLocationScenario,
    n: u32,
    rng: &mut R,
) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let obs = (0..n)
        .map(|_| Observation::ScalarSignal {
            z: s.beta + gauss::standard_normal(rng),
        })
        .collect();
    Dataset::new(obs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha12Rng;
    use rand_core::SeedableRng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn trade_s(m: u32, a: f64) -> TradeScenario {
        let p = 0.75;
        TradeScenario::symmetric(m, a, p, p * (1.0 - p)).unwrap()
    }

    fn labeled_dataset(points: &[(&[f64], u8)]) -> Dataset {
        Dataset::new(
            points
                .iter()
                .map(|&(x, label)| Observation::AttributeLabeled {
                    x: x.to_vec(),
                    label,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn trade_scenario_validation() {
        assert!(TradeScenario::symmetric(0, 0.1, 0.75, 0.1).is_err());
        assert!(TradeScenario::symmetric(2, 1.0, 0.75, 0.1).is_err());
        assert!(TradeScenario::new(vec![0.2], vec![0.3, 0.4], 0.75, 0.1).is_err());
        assert!(TradeScenario::symmetric(2, 0.1, 0.75, 0.75).is_err());
        assert!(TradeScenario::symmetric(2, 0.1, 0.75, 0.0).is_err());
        let s = trade_s(3, 0.2);
        assert!((s.volume_fraction() - 0.2f64.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn trade_sampler_labels_truthful() {
        let s = TradeScenario::new(vec![0.3, 0.1], vec![0.2, 0.5], 0.6, 0.2).unwrap();
        let mut r = rng(11);
        let data = sample_trade_dataset(&s, 500, &mut r).unwrap();
        assert!(sample_trade_dataset(&s, 0, &mut r).is_err());
        for (x, label) in data.labeled().unwrap() {
            assert_eq!(label, u8::from(s.inside(x)));
        }
    }

    #[test]
    fn trade_sampler_label_frequency_matches_volume() {
        let s = TradeScenario::new(vec![0.4, 0.3], vec![0.6, 0.7], 0.6, 0.2).unwrap();
        let want = s.volume_fraction();
        let mut r = rng(12);
        let data = sample_trade_dataset(&s, 100_000, &mut r).unwrap();
        let ones = data
            .labeled()
            .unwrap()
            .iter()
            .filter(|(_, l)| *l == 1)
            .count() as f64;
        let freq = ones / 100_000.0;
        let se = (want * (1.0 - want) / 100_000.0).sqrt();
        assert!((freq - want).abs() < 3.0 * se, "{freq} vs {want}");
    }

    #[test]
    fn bounding_box_checker_examples() {
        let d = labeled_dataset(&[(&[0.05, 0.05], 1)]);
        assert!(trade_disagreement_bb(&d).unwrap());
        let d = labeled_dataset(&[(&[-0.05, 0.02], 1), (&[0.05, -0.02], 1)]);
        assert!(!trade_disagreement_bb(&d).unwrap());
        let d = labeled_dataset(&[(&[0.9, 0.9], 0), (&[-0.8, 0.2], 0)]);
        assert!(trade_disagreement_bb(&d).unwrap());
    }

    #[test]
    fn per_dimension_checker_examples() {
        let s = trade_s(2, 0.1);
        let d = labeled_dataset(&[(&[0.05, 0.05], 1)]);
        assert!(trade_disagreement_paper(&d, &s).unwrap());
        let d = labeled_dataset(&[(&[-0.05, 0.05], 1), (&[0.05, -0.05], 1)]);
        assert!(!trade_disagreement_paper(&d, &s).unwrap());
        // A 0-labeled point outside the rectangle never occupies a side.
        let d = labeled_dataset(&[(&[-0.5, 0.05], 0), (&[0.05, -0.05], 1)]);
        assert!(trade_disagreement_paper(&d, &s).unwrap());
    }

    #[test]
    fn per_dimension_implies_bounding_box_on_samples() {
        let s = trade_s(2, 0.3);
        let mut r = rng(13);
        for _ in 0..2000 {
            let data = sample_trade_dataset(&s, 8, &mut r).unwrap();
            let paper = trade_disagreement_paper(&data, &s).unwrap();
            let bb = trade_disagreement_bb(&data).unwrap();
            assert!(!paper || bb, "paper event without bb event");
            assert_eq!(
                bb,
                trade_disagreement(&data, &s, DisagreementChecker::BoundingBox).unwrap()
            );
            assert_eq!(
                paper,
                trade_disagreement(&data, &s, DisagreementChecker::PerDimension).unwrap()
            );
        }
    }

    #[test]
    fn per_dimension_frequency_matches_closed_form() {
        let s = trade_s(2, 0.1);
        let n = 20;
        let want = s.closed_form_pbar(n).unwrap();
        let reps = 20_000;
        let mut r = rng(14);
        let mut hits = 0u32;
        for _ in 0..reps {
            let data = sample_trade_dataset(&s, n, &mut r).unwrap();
            hits += u32::from(trade_disagreement_paper(&data, &s).unwrap());
        }
        let freq = f64::from(hits) / f64::from(reps);
        let se = (want * (1.0 - want) / f64::from(reps)).sqrt();
        assert!((freq - want).abs() < 3.0 * se, "{freq} vs {want}");
    }

    #[test]
    fn coordination_sampler_moments() {
        let s = CoordinationScenario::new(2.0, 3.0, 0.05).unwrap();
        assert!(sample_coordination_dataset(&s, 1, &mut rng(1)).is_err());
        let mut r = rng(15);
        let mut resid = Vec::new();
        for _ in 0..5_000 {
            let data = sample_coordination_dataset(&s, 20, &mut r).unwrap();
            for (t, y) in data.time_series().unwrap() {
                resid.push(y - 2.0 * f64::from(t));
            }
        }
        let n = resid.len() as f64;
        let mean = resid.iter().sum::<f64>() / n;
        let var = resid.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 3.0 * 3.0 / n.sqrt(), "mean {mean}");
        // Variance of the sample variance is about 2 sigma^4 / n.
        let var_se = 3.0f64.powi(2) * (2.0 / n).sqrt();
        assert!((var - 9.0).abs() < 3.0 * var_se, "var {var}");
    }

    #[test]
    fn slope_exact_on_noiseless_data() {
        let s = CoordinationScenario::new(2.0, 1e-300, 0.05).unwrap();
        let mut r = rng(16);
        let data = sample_coordination_dataset(&s, 12, &mut r).unwrap();
        let b = ols_beta_hat(&data).unwrap();
        assert!((b - 2.0).abs() < 1e-9, "{b}");
    }

    #[test]
    fn slope_linear_in_added_trend() {
        let s = CoordinationScenario::new(1.4, 2.0, 0.05).unwrap();
        let mut r = rng(17);
        let data = sample_coordination_dataset(&s, 15, &mut r).unwrap();
        let b = ols_beta_hat(&data).unwrap();
        let shifted = Dataset::new(
            data.time_series()
                .unwrap()
                .into_iter()
                .map(|(t, y)| Observation::TimeSeries {
                    t,
                    log_count: y + 0.7 * f64::from(t),
                })
                .collect(),
        )
        .unwrap();
        let b2 = ols_beta_hat(&shifted).unwrap();
        assert!((b2 - b - 0.7).abs() < 1e-10, "{b2} vs {b}");
    }

    #[test]
    fn slope_degenerate_design_rejected() {
        let data = Dataset::new(
            (0..4)
                .map(|_| Observation::TimeSeries {
                    t: 3,
                    log_count: 1.0,
                })
                .collect(),
        )
        .unwrap();
        assert!(ols_beta_hat(&data).is_err());
    }

    #[test]
    fn slope_variance_matches_formula() {
        let (n, sigma) = (20u32, 1.5);
        let s = CoordinationScenario::new(2.0, sigma, 0.05).unwrap();
        let mut r = rng(18);
        let reps = 10_000;
        let mut bs = Vec::with_capacity(reps);
        for _ in 0..reps {
            let data = sample_coordination_dataset(&s, n, &mut r).unwrap();
            bs.push(ols_beta_hat(&data).unwrap());
        }
        let mean = bs.iter().sum::<f64>() / reps as f64;
        let var = bs.iter().map(|b| (b - mean) * (b - mean)).sum::<f64>() / (reps - 1) as f64;
        let want = 12.0 * sigma * sigma / (f64::from(n * n) - 1.0);
        assert!((mean - 2.0).abs() < 4.0 * (want / reps as f64).sqrt(), "{mean}");
        assert!((var / want - 1.0).abs() < 0.1, "{var} vs {want}");
    }

    #[test]
    fn interval_half_width_reference_value() {
        let s = CoordinationScenario::new(2.0, 100.0, 0.05).unwrap();
        let mut r = rng(19);
        let data = sample_coordination_dataset(&s, 100, &mut r).unwrap();
        let iv = s.beta_confidence_interval(&data).unwrap();
        // Arithmetic route: z * sigma * sqrt(12/(n^2-1)).
        let want = gauss::z_alpha(0.05).unwrap() * 100.0 * (12.0 / 9999.0f64).sqrt();
        assert!((iv.half_width() - want).abs() < 1e-10);
        // 40-digit reference for the same quantity.
        assert!((iv.half_width() - 6.789853905640054716).abs() < 1e-12);
    }

    #[test]
    fn interval_collapses_as_alpha_grows() {
        let s = CoordinationScenario::new(2.0, 5.0, 0.999_999).unwrap();
        let mut r = rng(20);
        let data = sample_coordination_dataset(&s, 10, &mut r).unwrap();
        let iv = s.beta_confidence_interval(&data).unwrap();
        assert!(iv.half_width() < 1e-4);
    }

    #[test]
    fn interval_coverage_near_nominal() {
        let s = CoordinationScenario::new(2.0, 10.0, 0.05).unwrap();
        let mut r = rng(21);
        let reps = 10_000u32;
        let mut covered = 0u32;
        for _ in 0..reps {
            let data = sample_coordination_dataset(&s, 30, &mut r).unwrap();
            let iv = s.beta_confidence_interval(&data).unwrap();
            covered += u32::from(iv.lower <= 2.0 && 2.0 <= iv.upper);
        }
        let freq = f64::from(covered) / f64::from(reps);
        let se = (0.95 * 0.05 / f64::from(reps)).sqrt();
        assert!((freq - 0.95).abs() < 3.0 * se, "{freq}");
    }

    #[test]
    fn lockdown_status_examples() {
        let iv = |lower, upper| ConfidenceInterval { lower, upper };
        assert_eq!(lockdown_status(iv(1.2, 3.0)), LockdownStatus::StrongForAll);
        assert_eq!(lockdown_status(iv(0.5, 1.5)), LockdownStatus::SomeNotAll);
        assert_eq!(
            lockdown_status(iv(0.2, 0.9)),
            LockdownStatus::NoneRationalizable
        );
        // Endpoint exactly 1 counts as inside the closed ray.
        assert_eq!(lockdown_status(iv(1.0, 2.0)), LockdownStatus::StrongForAll);
        assert_eq!(lockdown_status(iv(0.3, 1.0)), LockdownStatus::SomeNotAll);
    }

    #[test]
    fn lockdown_status_agrees_with_solver() {
        let s = CoordinationScenario::new(2.0, 10.0, 0.05).unwrap();
        let cases = [
            (1.2, 3.0),
            (0.5, 1.5),
            (0.2, 0.9),
            (1.05, 1.1),
            (0.95, 0.99),
            (0.99, 1.01),
        ];
        for (lower, upper) in cases {
            let iv = ConfidenceInterval { lower, upper };
            assert_eq!(
                s.solver_status(iv).unwrap(),
                lockdown_status(iv),
                "interval [{lower}, {upper}]"
            );
        }
        // And on sampled intervals.
        let mut r = rng(22);
        for _ in 0..25 {
            let data = sample_coordination_dataset(&s, 40, &mut r).unwrap();
            let iv = s.beta_confidence_interval(&data).unwrap();
            assert_eq!(s.solver_status(iv).unwrap(), lockdown_status(iv));
        }
    }

    #[test]
    fn richpriors_validation_and_sampler() {
        assert!(RichPriorsScenario::new(0.5, 1, 0.75, vec![0.25], vec![0.9]).is_err());
        assert!(RichPriorsScenario::new(0.75, 2, 0.75, vec![0.25], vec![0.9]).is_err());
        assert!(RichPriorsScenario::new(0.75, 1, 0.75, vec![], vec![0.9]).is_err());
        assert!(RichPriorsScenario::new(0.75, 1, 0.75, vec![0.25], vec![0.5]).is_err());
        let s = RichPriorsScenario::truncated_example(1, 0.75).unwrap();
        let mut r = rng(23);
        let data = sample_binary_dataset(&s, 100_000, &mut r).unwrap();
        let ones = data.binary_ones().unwrap() as f64;
        let freq = ones / 100_000.0;
        let se = (0.75 * 0.25 / 100_000.0f64).sqrt();
        assert!((freq - 0.75).abs() < 3.0 * se, "{freq}");
        // Deterministic under a fixed stream.
        let d1 = sample_binary_dataset(&s, 50, &mut rng(24)).unwrap();
        let d2 = sample_binary_dataset(&s, 50, &mut rng(24)).unwrap();
        assert_eq!(d1.binary_ones().unwrap(), d2.binary_ones().unwrap());
        // v = 0 flips the signal frequency.
        let s0 = RichPriorsScenario::truncated_example(0, 0.75).unwrap();
        let d0 = sample_binary_dataset(&s0, 100_000, &mut rng(25)).unwrap();
        let freq0 = d0.binary_ones().unwrap() as f64 / 100_000.0;
        assert!((freq0 - 0.25).abs() < 3.0 * se, "{freq0}");
    }

    #[test]
    fn richpriors_count_threshold_at_n20() {
        let s = RichPriorsScenario::truncated_example(1, 0.75).unwrap();
        // Only the count straddling the posterior threshold qualifies.
        let weak: Vec<u32> = (0..=20)
            .filter(|&k| s.weak_enter_from_counts(k, 20).unwrap())
            .collect();
        assert_eq!(weak, vec![11]);
        for (n, want) in [(50u32, 26u32), (100, 51), (200, 101)] {
            let weak: Vec<u32> = (0..=n)
                .filter(|&k| s.weak_enter_from_counts(k, n).unwrap())
                .collect();
            assert_eq!(weak, vec![want], "n={n}");
        }
    }

    #[test]
    fn richpriors_status_monotone_in_grids() {
        let base = RichPriorsScenario::new(
            0.75,
            1,
            0.75,
            vec![0.25, 0.75],
            vec![2.0 / 3.0, 0.9],
        )
        .unwrap();
        let wider = RichPriorsScenario::new(
            0.75,
            1,
            0.75,
            vec![0.1, 0.25, 0.75, 0.9],
            vec![0.55, 2.0 / 3.0, 0.9, 1.0],
        )
        .unwrap();
        let mut r = rng(26);
        for _ in 0..200 {
            let data = sample_binary_dataset(&base, 21, &mut r).unwrap();
            let narrow = base.trade_status(&data).unwrap();
            let wide = wider.trade_status(&data).unwrap();
            assert!(!narrow.weak_enter || wide.weak_enter);
        }
    }

    #[test]
    fn richpriors_posterior_extremes_vs_price() {
        let s = RichPriorsScenario::truncated_example(1, 0.75).unwrap();
        // 11 ones in 20: low corner 4/7, high corners reach 1.
        let mut zs = vec![0u8; 20];
        zs.iter_mut().take(11).for_each(|z| *z = 1);
        let data = Dataset::from_binary(&zs).unwrap();
        let (lo, hi) = s.posterior_range(&data).unwrap();
        assert!((lo - 4.0 / 7.0).abs() < 1e-12);
        assert!((hi - 1.0).abs() < 1e-12);
        let st = s.trade_status(&data).unwrap();
        assert!(st.weak_enter && !st.strong_enter);
        // 12 ones: every posterior is above the price.
        let mut zs = vec![0u8; 20];
        zs.iter_mut().take(12).for_each(|z| *z = 1);
        let data = Dataset::from_binary(&zs).unwrap();
        let (lo, _) = s.posterior_range(&data).unwrap();
        assert!((lo - 16.0 / 19.0).abs() < 1e-12);
        assert!(!s.trade_status(&data).unwrap().weak_enter);
    }

    #[test]
    fn richpriors_solver_route_agrees() {
        let s = RichPriorsScenario::truncated_example(1, 0.75).unwrap();
        let mut r = rng(27);
        for _ in 0..60 {
            // Odd sample sizes keep posteriors away from the price exactly.
            let data = sample_binary_dataset(&s, 21, &mut r).unwrap();
            let fast = s.trade_status(&data).unwrap();
            let generic = s.solver_trade_status(&data).unwrap();
            assert_eq!(fast, generic, "ones={}", data.binary_ones().unwrap());
            assert!(!generic.strong_enter);
        }
    }

    #[test]
    fn richpriors_exact_pbar_reference_values() {
        let s = RichPriorsScenario::truncated_example(1, 0.75).unwrap();
        let cases = [
            (20u32, 0.027060750762757379562, 1e-15),
            (50, 2.4372676932415296772e-4, 1e-15),
            (100, 1.3256796691430538041e-7, 1e-18),
        ];
        for (n, want, tol) in cases {
            let got = s.exact_pbar(n).unwrap();
            assert!((got - want).abs() < tol, "n={n}: {got} vs {want}");
        }
        assert!(s.exact_pbar(200).unwrap() < 1e-12);
    }

    #[test]
    fn richpriors_sanov_pipeline_reference_values() {
        let s = RichPriorsScenario::truncated_example(1, 0.75).unwrap();
        let r20 = s.sanov_bound(20).unwrap();
        assert_eq!(r20.weak_count, 1);
        assert!((r20.dkl_star - 0.13549617061555580655).abs() < 1e-12);
        assert!(r20.bound.clamped && r20.bound.value == 1.0);
        let r50 = s.sanov_bound(50).unwrap();
        assert!((r50.dkl_star - 0.17697396362979698041).abs() < 1e-12);
        assert!(r50.bound.clamped);
        let r100 = s.sanov_bound(100).unwrap();
        assert!((r100.dkl_star - 0.19195768287940042776).abs() < 1e-12);
        assert!(!r100.bound.clamped);
        assert!((r100.bound.value - 0.016987939399596833394).abs() < 1e-12);
        let r200 = s.sanov_bound(200).unwrap();
        assert!((r200.dkl_star - 0.19966607309015453635).abs() < 1e-12);
        assert!((r200.bound.value / 3.85e-8 - 1.0).abs() < 0.01);
        // The bound dominates the exact probability wherever it is binding.
        for n in [20u32, 50, 100, 200] {
            assert!(s.exact_pbar(n).unwrap() <= s.sanov_bound(n).unwrap().bound.value);
        }
    }

    #[test]
    fn location_scenario_basics() {
        assert!(GaussianLocationScenario::new(1.0, 1.0, 3).is_err());
        assert!(GaussianLocationScenario::new(2.0, -0.1, 3).is_err());
        assert!(GaussianLocationScenario::new(2.0, 1.0, 1).is_err());
        let s = GaussianLocationScenario::new(2.0, 1.0, 5).unwrap();
        let mut r = rng(28);
        let data = sample_location_dataset(&s, 50, &mut r).unwrap();
        let means = s.posterior_means(&data).unwrap();
        assert_eq!(means.len(), 5);
        // Means are ordered with the prior means and near the truth.
        for w in means.windows(2) {
            assert!(w[0] <= w[1]);
        }
        assert!((means[2] - 2.0).abs() < 1.0);
    }

    #[test]
    fn location_status_routes_agree() {
        let s = GaussianLocationScenario::new(2.0, 1.0, 3).unwrap();
        let mut r = rng(29);
        for n in [2u32, 5, 20] {
            for _ in 0..40 {
                let data = sample_location_dataset(&s, n, &mut r).unwrap();
                let fast = s.status(&data).unwrap();
                let generic = s.solver_status(&data).unwrap();
                assert_eq!(fast, generic);
                // Certification implies weak rationalizability.
                assert!(!fast.1 || fast.0);
            }
        }
    }

    #[test]
    fn location_sup_deviation_tracks_means() {
        let s = GaussianLocationScenario::new(2.0, 1.0, 3).unwrap();
        let mut r = rng(30);
        let data = sample_location_dataset(&s, 100, &mut r).unwrap();
        let means = s.posterior_means(&data).unwrap();
        let want = means
            .iter()
            .map(|m| (m - 2.0).abs().min(1.0))
            .fold(0.0f64, f64::max);
        let got = s.sup_deviation(&data).unwrap();
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        // Deviations shrink with more data on average.
        let small = sample_location_dataset(&s, 2, &mut r).unwrap();
        assert!(s.sup_deviation(&small).unwrap() > got);
    }
}
