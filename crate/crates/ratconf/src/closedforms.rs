//! Analytic confidence-set formulas and finite-sample bounds.
//!
//! Everything here is a pure formula: exact disagreement probabilities for
//! the rectangle-classification market, normal-theory expressions for the
//! coordination game, deviation-based lower bounds on the probability that a
//! prediction holds for all permitted beliefs, and a Sanov-style chain
//! (empirical KL rate plus a polynomial prefactor) upper-bounding the
//! probability that it holds for some belief.
//!
//! Lower and upper bounds can be vacuous at small sample sizes; operations
//! therefore return both the raw value and its clamp into [0, 1], with a
//! flag, instead of silently truncating.

use crate::measures::ParameterPoint;
use crate::solver::FiniteGame;
use crate::{gauss, Error, Result};

/// An analytic `[p_lower, p_upper]` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormPair {
    /// Probability that the prediction holds for every permitted belief.
    pub p_lower: f64,
    /// Probability that it holds for some permitted belief.
    pub p_upper: f64,
}

impl ClosedFormPair {
    /// Validate `0 <= p_lower <= p_upper <= 1`.
    ///
    /// # Errors
    /// Returns [`Error::Internal`] on violation; the constructors here are
    /// only fed formula outputs, so a violation is a formula bug.
    pub fn new(p_lower: f64, p_upper: f64) -> Result<Self> {
        if !(0.0 <= p_lower && p_lower <= p_upper && p_upper <= 1.0) {
            return Err(Error::Internal(format!(
                "invalid closed-form pair [{p_lower}, {p_upper}]"
            )));
        }
        Ok(ClosedFormPair { p_lower, p_upper })
    }
}

/// A one-sided bound with its raw (possibly out-of-range) value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    /// The formula value before clamping; negative or above 1 when vacuous.
    pub raw: f64,
    /// `raw` clamped into [0, 1].
    pub value: f64,
    /// True when clamping changed the value.
    pub clamped: bool,
}

impl Bound {
    fn from_raw(raw: f64) -> Bound {
        let value = raw.clamp(0.0, 1.0);
        Bound {
            raw,
            value,
            clamped: value != raw,
        }
    }
}

/// Inputs shared by the deviation-based lower bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    /// Strictness margin of the prediction at the limit belief.
    pub delta_inf: f64,
    /// Lipschitz constant of payoffs in the parameter (sup norms).
    pub lipschitz_k: f64,
    /// Diameter bound: distances of parameter points never exceed `xi`.
    pub xi: f64,
    /// Payoff spread over profiles and the relevant parameter support.
    pub payoff_spread: f64,
    /// Expected largest deviation of any permitted belief from the limit.
    pub expected_sup_deviation: f64,
    /// Common-belief level; 1 recovers the common-certainty bounds.
    pub q_belief: f64,
}

impl BoundInputs {
    /// Validate positivity requirements.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] unless `delta_inf`, `lipschitz_k`,
    /// `xi`, and `payoff_spread` are positive, `expected_sup_deviation >= 0`,
    /// and `q_belief` lies in (0, 1].
    pub fn new(
        delta_inf: f64,
        lipschitz_k: f64,
        xi: f64,
        payoff_spread: f64,
        expected_sup_deviation: f64,
        q_belief: f64,
    ) -> Result<Self> {
        let pos = [
            ("delta_inf", delta_inf),
            ("lipschitz_k", lipschitz_k),
            ("xi", xi),
            ("payoff_spread", payoff_spread),
        ];
        for (name, v) in pos {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(expected_sup_deviation >= 0.0) || !expected_sup_deviation.is_finite() {
            return Err(Error::invalid("expected_sup_deviation must be >= 0"));
        }
        if !(q_belief > 0.0 && q_belief <= 1.0) {
            return Err(Error::invalid(format!(
                "q_belief must be in (0, 1], got {q_belief}"
            )));
        }
        Ok(BoundInputs {
            delta_inf,
            lipschitz_k,
            xi,
            payoff_spread,
            expected_sup_deviation,
            q_belief,
        })
    }
}

/// A probability vector over a finite signal alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    probs: Vec<f64>,
    counts_compatible: bool,
}

impl EmpiricalMeasure {
    /// Measure from raw probabilities (zeros allowed).
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] unless entries are nonnegative and sum
    /// to 1 within 1e-12.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("measure needs at least one category"));
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::invalid("probabilities must be finite and >= 0"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("probabilities sum to {total}, not 1")));
        }
        Ok(EmpiricalMeasure {
            probs,
            counts_compatible: false,
        })
    }

    /// Empirical measure of observed counts; probabilities are multiples of
    /// one over the total count.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] when the total count is zero.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if counts.is_empty() || total == 0 {
            return Err(Error::invalid("counts must be nonempty with positive total"));
        }
        Ok(EmpiricalMeasure {
            probs: counts.iter().map(|&c| c as f64 / total as f64).collect(),
            counts_compatible: true,
        })
    }

    /// The probability vector.
    #[must_use]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Whether the measure was built from counts.
    #[must_use]
    pub fn counts_compatible(&self) -> bool {
        self.counts_compatible
    }
}

fn check_unit_open(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::invalid(format!("{name} must be in (0,1), got {v}")));
    }
    Ok(())
}

/// Probability that some pair of rectangles consistent with `n` uniform
/// observations classifies the origin differently, when the true rectangle
/// has per-dimension bounds `[-rlo[k], rhi[k]]`.
///
/// Per dimension, the disagreement event is that some side of the origin
/// inside the true rectangle contains no observation; the product over
/// dimensions of the complements gives the no-disagreement probability.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `n = 0`, empty or mismatched bounds,
/// or bounds outside (0, 1).
pub fn trade_pbar_rect(n: u32, rlo: &[f64], rhi: &[f64]) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    if rlo.is_empty() || rlo.len() != rhi.len() {
        return Err(Error::invalid("rlo and rhi must be nonempty, equal length"));
    }
    for (&a, &b) in rlo.iter().zip(rhi) {
        check_unit_open("rlo", a)?;
        check_unit_open("rhi", b)?;
    }
    let np = n as i32;
    // log1p/expm1 keep deep-tail values exact; miss = 1 maps to -inf and a
    // final probability of exactly 1.
    let mut log_keep = 0.0f64;
    for (&a, &b) in rlo.iter().zip(rhi) {
        let miss = ((2.0 - a) / 2.0).powi(np) + ((2.0 - b) / 2.0).powi(np)
            - ((2.0 - a - b) / 2.0).powi(np);
        log_keep += (-miss.min(1.0)).ln_1p();
    }
    Ok(-log_keep.exp_m1())
}

/// Symmetric-rectangle special case of [`trade_pbar_rect`]: true rectangle
/// `[-a, a]^m`.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `n = 0`, `m = 0`, or `a` outside
/// (0, 1).
pub fn trade_pbar_symmetric(n: u32, m: u32, a: f64) -> Result<f64> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("n and m must be >= 1"));
    }
    check_unit_open("a", a)?;
    let np = n as i32;
    let miss = 2.0 * ((2.0 - a) / 2.0).powi(np) - (1.0 - a).powi(np);
    Ok(-(f64::from(m) * (-miss.min(1.0)).ln_1p()).exp_m1())
}

/// Exact confidence pair for the coordination game: the probability that the
/// slope confidence interval lies in `[1, inf)` (lower) or reaches it
/// (upper), under the estimator distribution `N(beta, 12 sigma^2/(n^2-1))`.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `n < 2`, `sigma <= 0`, or `alpha`
/// outside (0, 1).
pub fn coord_closed_form(n: u32, beta: f64, sigma: f64, alpha: f64) -> Result<ClosedFormPair> {
    if n < 2 {
        return Err(Error::invalid("n must be >= 2"));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::invalid("sigma must be positive"));
    }
    check_unit_open("alpha", alpha)?;
    if !beta.is_finite() {
        return Err(Error::invalid("beta must be finite"));
    }
    let z = gauss::z_alpha(alpha)?;
    let nf = f64::from(n);
    let drift = ((beta - 1.0) / sigma) * ((nf * nf - 1.0) / 12.0).sqrt();
    let p_lower = 1.0 - gauss::norm_cdf(z - drift)?;
    let p_upper = 1.0 - gauss::norm_cdf(-z - drift)?;
    ClosedFormPair::new(p_lower, p_upper)
}

/// Deviation-based lower bound on the all-beliefs probability:
/// `1 - (2*K*xi/delta_inf) * E[sup deviation]`, using the Prokhorov
/// deviation of permitted beliefs from the limit.
///
/// # Errors
/// Input validation happens in [`BoundInputs::new`].
#[must_use]
pub fn markov_lower_bound(inputs: &BoundInputs) -> Bound {
    let BoundInputs {
        delta_inf,
        lipschitz_k,
        xi,
        expected_sup_deviation,
        ..
    } = *inputs;
    Bound::from_raw(1.0 - (2.0 * lipschitz_k * xi / delta_inf) * expected_sup_deviation)
}

/// Lower bound for point-supported beliefs concentrating near the limit
/// parameter: `1 - (2*K/delta_inf) * E[sup ||theta - theta_inf||]`.
///
/// # Errors
/// Returns [`Error::InvalidInput`] unless `delta_inf > 0`, `lipschitz_k > 0`,
/// and the expectation is nonnegative.
pub fn shrink_lower_bound(
    delta_inf: f64,
    lipschitz_k: f64,
    expected_sup_param_deviation: f64,
) -> Result<Bound> {
    if !(delta_inf > 0.0) {
        return Err(Error::invalid("delta_inf must be positive"));
    }
    if !(lipschitz_k > 0.0) {
        return Err(Error::invalid("lipschitz_k must be positive"));
    }
    if !(expected_sup_param_deviation >= 0.0) {
        return Err(Error::invalid("expected deviation must be >= 0"));
    }
    Ok(Bound::from_raw(
        1.0 - (2.0 * lipschitz_k / delta_inf) * expected_sup_param_deviation,
    ))
}

/// Lower bound when the belief restriction holds only with common q-belief
/// instead of common certainty:
/// `1 - (2*M*xi*q / (delta_inf*q - (1-q)*M)) * E[sup deviation]`.
///
/// At `q = 1` this reduces to the certainty bound with the payoff spread `M`
/// in place of `K`.
///
/// # Errors
/// Returns [`Error::Domain`] unless `q_belief > M/(delta_inf + M)`, the
/// level below which the denominator loses positivity.
pub fn pbelief_lower_bound(inputs: &BoundInputs) -> Result<Bound> {
    let BoundInputs {
        delta_inf,
        xi,
        payoff_spread: m,
        expected_sup_deviation,
        q_belief: q,
        ..
    } = *inputs;
    let threshold = m / (delta_inf + m);
    if !(q > threshold) {
        return Err(Error::domain(format!(
            "q_belief {q} must exceed M/(delta_inf+M) = {threshold}"
        )));
    }
    let denom = delta_inf * q - (1.0 - q) * m;
    Ok(Bound::from_raw(
        1.0 - (2.0 * m * xi * q / denom) * expected_sup_deviation,
    ))
}

/// Lower bound for the location-learning family with unit-variance signals
/// and prior means spread over `[-eta, eta]`:
/// `1 - (1/(beta-1)) * (sqrt(2/(pi n)) + (beta+eta)/(n+1))`.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `beta <= 1`, `eta < 0`, or `n = 0`.
pub fn gaussian_corollary_bound(n: u32, beta: f64, eta: f64) -> Result<Bound> {
    if !(beta > 1.0) {
        return Err(Error::invalid(format!("beta must exceed 1, got {beta}")));
    }
    if !(eta >= 0.0) {
        return Err(Error::invalid("eta must be >= 0"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let nf = f64::from(n);
    let raw = 1.0
        - (1.0 / (beta - 1.0))
            * ((2.0 / (std::f64::consts::PI * nf)).sqrt() + (beta + eta) / (nf + 1.0));
    Ok(Bound::from_raw(raw))
}

/// Kullback-Leibler divergence `D(qhat || q)` in bits, with `0 log 0 = 0`.
/// Returns positive infinity when `qhat` charges a category that `q` does
/// not.
///
/// # Errors
/// Returns [`Error::InvalidInput`] on mismatched alphabet sizes.
pub fn kl_divergence(qhat: &EmpiricalMeasure, q: &EmpiricalMeasure) -> Result<f64> {
    if qhat.probs().len() != q.probs().len() {
        return Err(Error::invalid("measures must share one alphabet"));
    }
    let mut total = 0.0;
    for (&ph, &p) in qhat.probs().iter().zip(q.probs()) {
        if ph == 0.0 {
            continue;
        }
        if p == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += ph * (ph / p).log2();
    }
    Ok(total)
}

/// Method-of-types bound `(n+1)^alphabet_size * 2^(-n*dkl_star)` on the
/// probability that the empirical measure lands in a set whose divergence
/// from the truth is at least `dkl_star` bits.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `n = 0` or a negative rate.
pub fn sanov_upper_bound(n: u32, alphabet_size: u32, dkl_star: f64) -> Result<Bound> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    if !(dkl_star >= 0.0) {
        return Err(Error::invalid("dkl_star must be >= 0"));
    }
    let nf = f64::from(n);
    let raw = (nf + 1.0).powi(alphabet_size as i32) * (-nf * dkl_star).exp2();
    Ok(Bound::from_raw(raw))
}

/// Empirical-mean threshold below which the binary posterior with prior
/// `pi_lo` and accuracy `q_lo` drops below `price`, and the largest
/// count-compatible mean below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZbarThreshold {
    /// The real-valued threshold on the empirical mean of the signals.
    pub zbar_star: f64,
    /// `floor(zbar_star * n) / n`: the largest feasible empirical mean, used
    /// as the divergence-minimizing measure in the rate computation.
    pub feasible_mean: f64,
}

/// Threshold on the empirical signal mean at which the posterior
/// `posterior_binary_pq(pi_lo, q_lo, ...)` crosses `price`:
/// `1/2 * (1 + (1/n) * log_b(pi_lo/(1-pi_lo) * (1-price)/price))` with log
/// base `(1-q_lo)/q_lo`.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `n = 0` or parameters outside their
/// open ranges (`q_lo` strictly between 1/2 and 1).
pub fn zbar_threshold(n: u32, pi_lo: f64, q_lo: f64, price: f64) -> Result<ZbarThreshold> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    check_unit_open("pi_lo", pi_lo)?;
    check_unit_open("price", price)?;
    if !(q_lo > 0.5 && q_lo < 1.0) {
        return Err(Error::invalid(format!("q_lo must be in (1/2,1), got {q_lo}")));
    }
    let nf = f64::from(n);
    let base = (1.0 - q_lo) / q_lo;
    let arg = pi_lo / (1.0 - pi_lo) * (1.0 - price) / price;
    let zbar_star = 0.5 * (1.0 + arg.ln() / base.ln() / nf);
    let feasible_mean = (zbar_star * nf).floor() / nf;
    Ok(ZbarThreshold {
        zbar_star,
        feasible_mean,
    })
}

/// The printed closed-form exponent for the truncated-prior trade bound at
/// accuracy 3/4 and price 3/4, transcribed literally:
/// `(3/4)(log2(3n) - log2(floor(n/2 + log2 9))) + (1/4)(log2 n - log2(floor(n/2 - log2 9)))`.
///
/// The inner floor reaches zero below `n = 9`.  Whether this expression
/// bounds anything is not asserted here; see the rate-comparison report in
/// the acceptance checks.
///
/// # Errors
/// Returns [`Error::Domain`] when a floor argument is not positive.
pub fn sanov_trade_rate(n: u32) -> Result<f64> {
    let nf = f64::from(n);
    let l9 = 9.0f64.log2();
    let a1 = (nf / 2.0 + l9).floor();
    let a2 = (nf / 2.0 - l9).floor();
    if a1 < 1.0 || a2 < 1.0 {
        return Err(Error::domain(format!(
            "floor arguments not positive at n = {n}"
        )));
    }
    Ok(0.75 * ((3.0 * nf).log2() - a1.log2()) + 0.25 * (nf.log2() - a2.log2()))
}

/// Largest payoff difference across players, action-profile pairs, and
/// support-point pairs; the spread `M` used by [`pbelief_lower_bound`].
///
/// # Errors
/// Returns [`Error::InvalidInput`] for an empty support.
pub fn payoff_spread(game: &FiniteGame, support: &[ParameterPoint]) -> Result<f64> {
    let mut worst = 0.0f64;
    for player in 0..game.num_players() {
        worst = worst.max(game.payoff_spread(player, support)?);
    }
    Ok(worst)
}
