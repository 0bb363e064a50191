//! Datasets, learning rules, and the plausible-belief construction.
//!
//! A learning rule maps a dataset to a belief over the parameter box.  Agents
//! may disagree on the rule; the set of beliefs produced by a family of rules
//! on the same data is the plausible set, and its spread (measured by the
//! Prokhorov distance to a limit belief) is what the lower bounds in
//! [`crate::closedforms`] consume.

use crate::measures::{prokhorov_distance, Belief, BeliefSet, ParameterBox, ParameterPoint};
use crate::{Error, Result};
use std::sync::Arc;

/// Beliefs produced by different rules are considered identical when their
/// atoms match within this tolerance (see [`Belief::approx_eq`]).
pub const BELIEF_DEDUP_TOL: f64 = 1e-12;

/// Ridge added to singular normal equations in [`ols_subset_estimate`].
pub const OLS_RIDGE: f64 = 1e-10;

/// One data point.  A dataset holds observations of exactly one kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    /// Attribute vector with a binary label (trade scenario).
    AttributeLabeled {
        /// Attribute coordinates.
        x: Vec<f64>,
        /// Label in {0, 1}.
        label: u8,
    },
    /// Time index with a continuous outcome (coordination scenario).
    TimeSeries {
        /// Time index, starting at 1.
        t: u32,
        /// Observed outcome at `t` (log of a count in the motivating story).
        log_count: f64,
    },
    /// A single binary signal (rich-priors scenario).
    BinarySignal {
        /// Signal in {0, 1}.
        z: u8,
    },
    /// Attribute vector paired with an observed parameter value
    /// (regression and case-based rules).
    AttributeValued {
        /// Attribute coordinates.
        x: Vec<f64>,
        /// Observed parameter vector.
        theta: Vec<f64>,
    },
    /// A single real-valued signal (Gaussian location scenario).
    ScalarSignal {
        /// Signal value.
        z: f64,
    },
}

/// Discriminant of [`Observation`], used for homogeneity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservationKind {
    /// See [`Observation::AttributeLabeled`].
    AttributeLabeled,
    /// See [`Observation::TimeSeries`].
    TimeSeries,
    /// See [`Observation::BinarySignal`].
    BinarySignal,
    /// See [`Observation::AttributeValued`].
    AttributeValued,
    /// See [`Observation::ScalarSignal`].
    ScalarSignal,
}

impl Observation {
    fn kind(&self) -> ObservationKind {
        match self {
            Observation::AttributeLabeled { .. } => ObservationKind::AttributeLabeled,
            Observation::TimeSeries { .. } => ObservationKind::TimeSeries,
            Observation::BinarySignal { .. } => ObservationKind::BinarySignal,
            Observation::AttributeValued { .. } => ObservationKind::AttributeValued,
            Observation::ScalarSignal { .. } => ObservationKind::ScalarSignal,
        }
    }
}

/// Nonempty, kind-homogeneous collection of observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    obs: Vec<Observation>,
}

impl Dataset {
    /// Wrap observations, checking nonemptiness, kind homogeneity, finite
    /// values, binary fields in {0,1}, and consistent attribute dimensions.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] when any check fails.
    pub fn new(obs: Vec<Observation>) -> Result<Self> {
        let Some(first) = obs.first() else {
            return Err(Error::invalid("dataset requires at least one observation"));
        };
        let kind = first.kind();
        let mut x_dim: Option<usize> = None;
        let mut theta_dim: Option<usize> = None;
        for o in &obs {
            if o.kind() != kind {
                return Err(Error::invalid("dataset observations must share one kind"));
            }
            match o {
                Observation::AttributeLabeled { x, label } => {
                    check_dim(&mut x_dim, x.len(), "attribute")?;
                    check_finite(x)?;
                    check_bit(*label)?;
                }
                Observation::TimeSeries { t, log_count } => {
                    if *t == 0 {
                        return Err(Error::invalid("time indices start at 1"));
                    }
                    check_finite(&[*log_count])?;
                }
                Observation::BinarySignal { z } => check_bit(*z)?,
                Observation::AttributeValued { x, theta } => {
                    check_dim(&mut x_dim, x.len(), "attribute")?;
                    check_dim(&mut theta_dim, theta.len(), "theta")?;
                    check_finite(x)?;
                    check_finite(theta)?;
                }
                Observation::ScalarSignal { z } => check_finite(&[*z])?,
            }
        }
        Ok(Dataset { obs })
    }

    /// Dataset of binary signals.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] if empty or any entry is not 0/1.
    pub fn from_binary(zs: &[u8]) -> Result<Self> {
        Dataset::new(zs.iter().map(|&z| Observation::BinarySignal { z }).collect())
    }

    /// Dataset of scalar signals.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] if empty or non-finite.
    pub fn from_scalars(zs: &[f64]) -> Result<Self> {
        Dataset::new(zs.iter().map(|&z| Observation::ScalarSignal { z }).collect())
    }

    /// Number of observations.
    #[must_use]
    pub fn len(&self) -> usize {
        self.obs.len()
    }

    /// Always false; kept for idiomatic completeness.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.obs.is_empty()
    }

    /// Observations in order.
    #[must_use]
    pub fn observations(&self) -> &[Observation] {
        &self.obs
    }

    /// Common kind of the observations.
    #[must_use]
    pub fn kind(&self) -> ObservationKind {
        self.obs[0].kind()
    }

    fn expect_kind(&self, kind: ObservationKind, op: &str) -> Result<()> {
        if self.kind() != kind {
            return Err(Error::invalid(format!(
                "{op} requires {kind:?} data, got {:?}",
                self.kind()
            )));
        }
        Ok(())
    }

    /// Count of 1-signals in a binary dataset.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] on kind mismatch.
    pub fn binary_ones(&self) -> Result<u64> {
        self.expect_kind(ObservationKind::BinarySignal, "binary_ones")?;
        Ok(self
            .obs
            .iter()
            .map(|o| match o {
                Observation::BinarySignal { z } => u64::from(*z),
                _ => unreachable!(),
            })
            .sum())
    }

    /// Scalar signals as a vector.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] on kind mismatch.
    pub fn scalar_values(&self) -> Result<Vec<f64>> {
        self.expect_kind(ObservationKind::ScalarSignal, "scalar_values")?;
        Ok(self
            .obs
            .iter()
            .map(|o| match o {
                Observation::ScalarSignal { z } => *z,
                _ => unreachable!(),
            })
            .collect())
    }

    /// Time-series pairs `(t, log_count)`.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] on kind mismatch.
    pub fn time_series(&self) -> Result<Vec<(u32, f64)>> {
        self.expect_kind(ObservationKind::TimeSeries, "time_series")?;
        Ok(self
            .obs
            .iter()
            .map(|o| match o {
                Observation::TimeSeries { t, log_count } => (*t, *log_count),
                _ => unreachable!(),
            })
            .collect())
    }

    /// Attribute/label pairs.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] on kind mismatch.
    pub fn labeled(&self) -> Result<Vec<(&[f64], u8)>> {
        self.expect_kind(ObservationKind::AttributeLabeled, "labeled")?;
        Ok(self
            .obs
            .iter()
            .map(|o| match o {
                Observation::AttributeLabeled { x, label } => (x.as_slice(), *label),
                _ => unreachable!(),
            })
            .collect())
    }

    /// Attribute/parameter pairs.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] on kind mismatch.
    pub fn attribute_valued(&self) -> Result<Vec<(&[f64], &[f64])>> {
        self.expect_kind(ObservationKind::AttributeValued, "attribute_valued")?;
        Ok(self
            .obs
            .iter()
            .map(|o| match o {
                Observation::AttributeValued { x, theta } => (x.as_slice(), theta.as_slice()),
                _ => unreachable!(),
            })
            .collect())
    }
}

fn check_dim(slot: &mut Option<usize>, got: usize, what: &str) -> Result<()> {
    match slot {
        None => {
            *slot = Some(got);
            Ok(())
        }
        Some(d) if *d == got => Ok(()),
        Some(d) => Err(Error::invalid(format!(
            "inconsistent {what} dimension: {got} vs {d}"
        ))),
    }
}

fn check_finite(v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("observation values must be finite"));
    }
    Ok(())
}

fn check_bit(b: u8) -> Result<()> {
    if b > 1 {
        return Err(Error::invalid(format!("binary field must be 0 or 1, got {b}")));
    }
    Ok(())
}

/// Likelihood of an observation under a model point, for [`LearningRule::BayesFinite`].
pub type LikelihoodFn = dyn Fn(&Observation, &ParameterPoint) -> f64 + Send + Sync;

/// Dissimilarity between an observed attribute vector and the query point,
/// for [`LearningRule::CaseBased`].  Enters the weights as `exp(-lambda * g)`,
/// so larger values mean less weight.
pub type SimilarityFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;

/// A map from datasets to beliefs.
#[derive(Clone)]
pub enum LearningRule {
    /// Bayesian updating of a finite model grid.
    BayesFinite {
        /// Candidate parameter points.
        models: Vec<ParameterPoint>,
        /// Prior probability of each model (simplex vector, zeros allowed).
        prior: Vec<f64>,
        /// Per-observation likelihood, assumed i.i.d. across observations.
        likelihood: Arc<LikelihoodFn>,
    },
    /// Point mass at the sample mean of scalar signals.
    MeanPointMass,
    /// Point mass at the sample median of scalar signals (even sample sizes
    /// use the midpoint of the two central order statistics).
    MedianPointMass,
    /// Point mass at the least-squares prediction from a subset of attributes.
    OlsSubset {
        /// Zero-based attribute indices the rule conditions on.
        indices: Vec<usize>,
        /// Query attribute vector (full length; the rule selects `indices`).
        x_star: Vec<f64>,
    },
    /// Point mass at a similarity-weighted average of observed parameters.
    CaseBased {
        /// Weight decay rate; 0 gives the plain average.
        lambda: f64,
        /// Dissimilarity function, see [`SimilarityFn`].
        similarity: Arc<SimilarityFn>,
        /// Query attribute vector.
        x_star: Vec<f64>,
    },
    /// Two-point posterior from binary signals: prior weight `pi` on the
    /// high state and signal accuracy `q`.
    BinaryPiQ {
        /// Prior probability of the high state, in (0,1).
        pi: f64,
        /// Signal accuracy, in (1/2, 1].
        q: f64,
    },
    /// Conjugate normal updating of a location parameter: prior `N(prior_mean, 1)`
    /// with unit-variance signals, yielding a point mass at the posterior mean
    /// `(prior_mean + n*zbar) / (n + 1)` projected onto the box.
    NormalConjugate {
        /// Prior mean, typically drawn from a symmetric grid.
        prior_mean: f64,
    },
}

impl std::fmt::Debug for LearningRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LearningRule::BayesFinite { models, prior, .. } => f
                .debug_struct("BayesFinite")
                .field("models", &models.len())
                .field("prior", prior)
                .finish_non_exhaustive(),
            LearningRule::MeanPointMass => write!(f, "MeanPointMass"),
            LearningRule::MedianPointMass => write!(f, "MedianPointMass"),
            LearningRule::OlsSubset { indices, x_star } => f
                .debug_struct("OlsSubset")
                .field("indices", indices)
                .field("x_star", x_star)
                .finish(),
            LearningRule::CaseBased { lambda, x_star, .. } => f
                .debug_struct("CaseBased")
                .field("lambda", lambda)
                .field("x_star", x_star)
                .finish_non_exhaustive(),
            LearningRule::BinaryPiQ { pi, q } => f
                .debug_struct("BinaryPiQ")
                .field("pi", pi)
                .field("q", q)
                .finish(),
            LearningRule::NormalConjugate { prior_mean } => f
                .debug_struct("NormalConjugate")
                .field("prior_mean", prior_mean)
                .finish(),
        }
    }
}

/// Nonempty family of learning rules.
#[derive(Debug, Clone)]
pub struct RuleSet {
    rules: Vec<LearningRule>,
}

impl RuleSet {
    /// Wrap a nonempty rule list.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] if empty.
    pub fn new(rules: Vec<LearningRule>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::invalid("rule set must be nonempty"));
        }
        Ok(RuleSet { rules })
    }

    /// The rules.
    #[must_use]
    pub fn rules(&self) -> &[LearningRule] {
        &self.rules
    }
}

/// Apply one learning rule to a dataset, producing a belief on `bx`.
///
/// Point-estimate rules (mean, median, regression, case-based, conjugate
/// normal) project their estimate onto the box coordinate-wise; the
/// projection is part of the rule definition here, since beliefs must live
/// on the parameter space.
///
/// # Errors
/// Kind mismatches and parameter-range violations give
/// [`Error::InvalidInput`]; Bayesian updating against data impossible under
/// every model gives [`Error::ZeroLikelihood`].
pub fn apply_rule(rule: &LearningRule, data: &Dataset, bx: &ParameterBox) -> Result<Belief> {
    match rule {
        LearningRule::BayesFinite {
            models,
            prior,
            likelihood,
        } => bayes_finite(models, prior, likelihood.as_ref(), data, bx),
        LearningRule::MeanPointMass => {
            let vs = data.scalar_values()?;
            let mean = vs.iter().sum::<f64>() / vs.len() as f64;
            scalar_point_mass(bx, mean)
        }
        LearningRule::MedianPointMass => {
            let mut vs = data.scalar_values()?;
            vs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let n = vs.len();
            let med = if n % 2 == 1 {
                vs[n / 2]
            } else {
                0.5 * (vs[n / 2 - 1] + vs[n / 2])
            };
            scalar_point_mass(bx, med)
        }
        LearningRule::OlsSubset { indices, x_star } => {
            ols_subset_estimate(indices, data, x_star, bx)
        }
        LearningRule::CaseBased {
            lambda,
            similarity,
            x_star,
        } => case_based_estimate(*lambda, similarity.as_ref(), data, x_star, bx),
        LearningRule::BinaryPiQ { pi, q } => {
            let v_hat = posterior_binary_pq(*pi, *q, data)?;
            two_state_belief(bx, v_hat)
        }
        LearningRule::NormalConjugate { prior_mean } => {
            if !prior_mean.is_finite() {
                return Err(Error::invalid("prior_mean must be finite"));
            }
            let vs = data.scalar_values()?;
            let n = vs.len() as f64;
            let zbar = vs.iter().sum::<f64>() / n;
            scalar_point_mass(bx, (prior_mean + n * zbar) / (n + 1.0))
        }
    }
}

fn scalar_point_mass(bx: &ParameterBox, value: f64) -> Result<Belief> {
    if bx.dim() != 1 {
        return Err(Error::invalid(
            "scalar point-estimate rules need a one-dimensional box",
        ));
    }
    Belief::point_mass(bx.clone(), bx.clamp(&[value])?)
}

/// Belief with weight `v_hat` on the high state (coordinate 1) and the rest
/// on the low state (coordinate 0).  Extreme posteriors that round to 0 or 1
/// collapse to the corresponding point mass.
fn two_state_belief(bx: &ParameterBox, v_hat: f64) -> Result<Belief> {
    if bx.dim() != 1 || !bx.contains(&[0.0]) || !bx.contains(&[1.0]) {
        return Err(Error::invalid(
            "two-state posterior needs a one-dimensional box containing 0 and 1",
        ));
    }
    let lo = bx.point(vec![0.0])?;
    let hi = bx.point(vec![1.0])?;
    if v_hat <= 0.0 {
        Belief::point_mass(bx.clone(), lo)
    } else if v_hat >= 1.0 {
        Belief::point_mass(bx.clone(), hi)
    } else {
        Belief::new(bx.clone(), vec![(lo, 1.0 - v_hat), (hi, v_hat)])
    }
}

fn bayes_finite(
    models: &[ParameterPoint],
    prior: &[f64],
    likelihood: &LikelihoodFn,
    data: &Dataset,
    bx: &ParameterBox,
) -> Result<Belief> {
    if models.is_empty() || models.len() != prior.len() {
        return Err(Error::invalid(
            "BayesFinite needs matching nonempty models and prior",
        ));
    }
    let psum: f64 = prior.iter().sum();
    if prior.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) || (psum - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("BayesFinite prior must be a probability vector"));
    }
    // Log-space accumulation; models with zero prior or zero likelihood drop out.
    let mut logpost: Vec<Option<f64>> = Vec::with_capacity(models.len());
    for (model, &pw) in models.iter().zip(prior) {
        if pw == 0.0 {
            logpost.push(None);
            continue;
        }
        let mut ll = pw.ln();
        let mut dead = false;
        for obs in data.observations() {
            let l = likelihood(obs, model);
            if !l.is_finite() || l < 0.0 {
                return Err(Error::invalid(format!(
                    "likelihood must be finite and nonnegative, got {l}"
                )));
            }
            if l == 0.0 {
                dead = true;
                break;
            }
            ll += l.ln();
        }
        logpost.push(if dead { None } else { Some(ll) });
    }
    let max_ll = logpost
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    if max_ll == f64::NEG_INFINITY {
        return Err(Error::ZeroLikelihood(
            "data inconsistent with all models".into(),
        ));
    }
    let raw: Vec<f64> = logpost
        .iter()
        .map(|ll| ll.map_or(0.0, |v| (v - max_ll).exp()))
        .collect();
    let total: f64 = raw.iter().sum();
    let atoms: Vec<(ParameterPoint, f64)> = models
        .iter()
        .zip(&raw)
        .filter(|(_, &w)| w > 0.0)
        .map(|(m, &w)| (m.clone(), w / total))
        .collect();
    Belief::new(bx.clone(), atoms)
}

/// Two-point posterior weight on the high state after binary signals.
///
/// With `k` ones out of `n` draws, returns
/// `1 / (1 + ((1-pi)/pi) * ((1-q)/q)^(2k-n))`.
///
/// `q = 1` is accepted with its continuous-limit semantics (noiseless
/// signals): majority ones gives 1, majority zeros gives 0, an exact tie
/// returns the prior `pi`.
///
/// # Errors
/// Returns [`Error::InvalidInput`] unless `0 < pi < 1` and `1/2 < q <= 1`;
/// kind mismatches also error.
pub fn posterior_binary_pq(pi: f64, q: f64, data: &Dataset) -> Result<f64> {
    if !(pi > 0.0 && pi < 1.0) {
        return Err(Error::invalid(format!("pi must be in (0,1), got {pi}")));
    }
    if !(q > 0.5 && q <= 1.0) {
        return Err(Error::invalid(format!("q must be in (1/2, 1], got {q}")));
    }
    let ones = data.binary_ones()? as f64;
    let n = data.len() as f64;
    let exponent = 2.0 * ones - n; // n * (2*zbar - 1), exactly integer-valued
    let odds_factor = if exponent == 0.0 {
        1.0
    } else if q == 1.0 {
        if exponent > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        ((1.0 - q) / q).powf(exponent)
    };
    let inv_prior_odds = (1.0 - pi) / pi;
    Ok(1.0 / (1.0 + inv_prior_odds * odds_factor))
}

/// Least-squares point estimate from a subset of attributes.
///
/// Fits, separately for each parameter coordinate, the linear function of
/// the selected attributes (through the origin; add a constant attribute to
/// model an intercept) minimizing mean squared error, then evaluates it at
/// `x_star` and returns a point mass at the projection of that prediction
/// onto the box.  Singular normal equations fall back to a ridge of
/// [`OLS_RIDGE`].
///
/// # Errors
/// Returns [`Error::InvalidInput`] for an empty or out-of-range index set,
/// duplicate indices, `n < |indices|`, or mismatched `x_star` length.
pub fn ols_subset_estimate(
    indices: &[usize],
    data: &Dataset,
    x_star: &[f64],
    bx: &ParameterBox,
) -> Result<Belief> {
    let rows = data.attribute_valued()?;
    let (x0, th0) = rows[0];
    let p = x0.len();
    let d = th0.len();
    if indices.is_empty() {
        return Err(Error::invalid("index set must be nonempty"));
    }
    let mut seen = vec![false; p];
    for &i in indices {
        if i >= p {
            return Err(Error::invalid(format!("attribute index {i} out of range (p={p})")));
        }
        if seen[i] {
            return Err(Error::invalid(format!("duplicate attribute index {i}")));
        }
        seen[i] = true;
    }
    if rows.len() < indices.len() {
        return Err(Error::invalid(format!(
            "need at least {} observations for {} indices, got {}",
            indices.len(),
            indices.len(),
            rows.len()
        )));
    }
    if x_star.len() != p {
        return Err(Error::invalid("x_star length must match attribute dimension"));
    }
    let k = indices.len();
    // Normal equations: G = X'X on selected columns, rhs = X'theta per coord.
    let mut g = vec![vec![0.0; k]; k];
    let mut rhs = vec![vec![0.0; d]; k];
    for (x, th) in &rows {
        for (a, &ia) in indices.iter().enumerate() {
            for (b, &ib) in indices.iter().enumerate() {
                g[a][b] += x[ia] * x[ib];
            }
            for (j, &t) in th.iter().enumerate() {
                rhs[a][j] += x[ia] * t;
            }
        }
    }
    let beta = match solve_gaussian(&g, &rhs) {
        Some(b) => b,
        None => {
            let mut gr = g.clone();
            for (i, row) in gr.iter_mut().enumerate() {
                row[i] += OLS_RIDGE;
            }
            solve_gaussian(&gr, &rhs).ok_or_else(|| {
                Error::Internal("ridge-regularized normal equations still singular".into())
            })?
        }
    };
    let mut pred = vec![0.0; d];
    for (a, &ia) in indices.iter().enumerate() {
        for j in 0..d {
            pred[j] += beta[a][j] * x_star[ia];
        }
    }
    Belief::point_mass(bx.clone(), bx.clamp(&pred)?)
}

/// Solve `G b = rhs` (multiple right-hand sides) by Gaussian elimination with
/// partial pivoting.  Returns `None` when a pivot is negligible relative to
/// the matrix scale.
fn solve_gaussian(g: &[Vec<f64>], rhs: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let k = g.len();
    let d = rhs[0].len();
    let scale = 1.0
        + g.iter()
            .flatten()
            .fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut a: Vec<Vec<f64>> = g
        .iter()
        .zip(rhs)
        .map(|(row, r)| row.iter().copied().chain(r.iter().copied()).collect())
        .collect();
    for col in 0..k {
        let (piv, mag) = (col..k)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if mag < 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..k + d {
                        let sub = f * a[col][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
    }
    Some(
        (0..k)
            .map(|r| (0..d).map(|j| a[r][k + j] / a[r][r]).collect())
            .collect(),
    )
}

/// Dissimilarity-weighted average of observed parameter values.
///
/// Weights are `exp(-lambda * g(x_k, x_star))`, normalized; `lambda = 0`
/// gives the plain average and large `lambda` concentrates on the nearest
/// case.  Returns a point mass at the weighted average (projected onto the
/// box only to absorb floating-point residue; the average of in-box points
/// is already in the box).
///
/// # Errors
/// Returns [`Error::InvalidInput`] for `lambda < 0`, mismatched `x_star`, or
/// a dissimilarity returning a negative or non-finite value.
pub fn case_based_estimate(
    lambda: f64,
    similarity: &SimilarityFn,
    data: &Dataset,
    x_star: &[f64],
    bx: &ParameterBox,
) -> Result<Belief> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    let rows = data.attribute_valued()?;
    if x_star.len() != rows[0].0.len() {
        return Err(Error::invalid("x_star length must match attribute dimension"));
    }
    let d = rows[0].1.len();
    let gs: Vec<f64> = rows
        .iter()
        .map(|(x, _)| {
            let g = similarity(x, x_star);
            if !g.is_finite() || g < 0.0 {
                Err(Error::invalid(format!(
                    "dissimilarity must be finite and nonnegative, got {g}"
                )))
            } else {
                Ok(g)
            }
        })
        .collect::<Result<_>>()?;
    // Stable softmin: shift by the smallest exponent before exponentiating.
    let gmin = gs.iter().copied().fold(f64::INFINITY, f64::min);
    let ws: Vec<f64> = gs.iter().map(|g| (-(lambda * (g - gmin))).exp()).collect();
    let total: f64 = ws.iter().sum();
    let mut avg = vec![0.0; d];
    for ((_, th), w) in rows.iter().zip(&ws) {
        for (j, &t) in th.iter().enumerate() {
            avg[j] += w * t / total;
        }
    }
    Belief::point_mass(bx.clone(), bx.clamp(&avg)?)
}

/// The set of beliefs a rule family produces on one dataset, deduplicated by
/// atom-level equality within [`BELIEF_DEDUP_TOL`].
///
/// # Errors
/// Propagates any [`apply_rule`] error.
pub fn plausible_set(rules: &RuleSet, data: &Dataset, bx: &ParameterBox) -> Result<BeliefSet> {
    let mut members: Vec<Belief> = Vec::with_capacity(rules.rules().len());
    for rule in rules.rules() {
        let b = apply_rule(rule, data, bx)?;
        if !members.iter().any(|m| m.approx_eq(&b, BELIEF_DEDUP_TOL)) {
            members.push(b);
        }
    }
    BeliefSet::new(members)
}

/// Largest Prokhorov distance from any rule's belief to `limit`.
///
/// # Errors
/// Propagates [`apply_rule`] and distance errors.
pub fn sup_deviation(
    rules: &RuleSet,
    data: &Dataset,
    limit: &Belief,
    bx: &ParameterBox,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for rule in rules.rules() {
        let b = apply_rule(rule, data, bx)?;
        worst = worst.max(prokhorov_distance(&b, limit)?);
    }
    Ok(worst)
}
