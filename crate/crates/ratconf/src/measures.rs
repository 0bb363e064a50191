//! Parameter boxes, finite-support beliefs, and distances between them.
//!
//! Parameters live in an axis-aligned box in `R^d` with the sup norm.  A
//! belief is a finitely supported probability measure on the box; a belief
//! set is a nonempty collection of beliefs over one common box.  Two belief
//! distances are provided: the Prokhorov metric, computed by bisection over
//! the coupling characterization, and the 1-Wasserstein distance from a
//! transportation LP.

use crate::lp;
use crate::{Error, Result};

/// Sup-distance below which two support points are merged into one atom.
pub const ATOM_MERGE_TOL: f64 = 1e-12;

/// Belief weights must sum to 1 within this before renormalization.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Termination width for the Prokhorov bisection bracket.
pub const PROKHOROV_TOL: f64 = 1e-9;

/// Slack added when classifying a transport arc as within distance `eps`.
const ARC_SLACK: f64 = 1e-12;

/// Axis-aligned compact parameter space `prod_k [lower_k, upper_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ParameterBox {
    /// Build a box from per-coordinate bounds.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] if the vectors differ in length, are
    /// empty, contain non-finite entries, or any `lower_k >= upper_k`.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::invalid("box bounds must be nonempty and equal length"));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !l.is_finite() || !u.is_finite() {
                return Err(Error::invalid("box bounds must be finite"));
            }
            if l >= u {
                return Err(Error::invalid(format!(
                    "box requires lower < upper per coordinate, got [{l}, {u}]"
                )));
            }
        }
        Ok(ParameterBox { lower, upper })
    }

    /// Symmetric interval `[-h, h]` in each of `dim` coordinates.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] if `dim == 0` or `h <= 0`.
    pub fn centered(dim: usize, h: f64) -> Result<Self> {
        ParameterBox::new(vec![-h; dim.max(1)], vec![h; dim])
    }

    /// Number of coordinates.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Lower bounds.
    #[must_use]
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// Upper bounds.
    #[must_use]
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Sup-norm diameter: the largest side length.
    #[must_use]
    pub fn diameter(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .fold(0.0, f64::max)
    }

    /// Whether `coords` lies in the closed box (exact bounds, no slack).
    #[must_use]
    pub fn contains(&self, coords: &[f64]) -> bool {
        coords.len() == self.dim()
            && coords
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(c, (l, u))| *c >= *l && *c <= *u)
    }

    /// Validate `coords` into a [`ParameterPoint`] of this box.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] on dimension mismatch, non-finite
    /// coordinates, or coordinates outside the closed box.
    pub fn point(&self, coords: Vec<f64>) -> Result<ParameterPoint> {
        if coords.len() != self.dim() {
            return Err(Error::invalid(format!(
                "point dimension {} does not match box dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("point coordinates must be finite"));
        }
        if !self.contains(&coords) {
            return Err(Error::invalid(format!(
                "point {coords:?} lies outside the box"
            )));
        }
        Ok(ParameterPoint { coords })
    }

    /// Project `coords` onto the closed box coordinate-wise.
    ///
    /// Used by learning rules whose raw estimate may exit the parameter
    /// space; the projection is documented behavior, not a silent fixup.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] on dimension mismatch or non-finite
    /// coordinates.
    pub fn clamp(&self, coords: &[f64]) -> Result<ParameterPoint> {
        if coords.len() != self.dim() {
            return Err(Error::invalid("clamp dimension mismatch"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("clamp requires finite coordinates"));
        }
        let clamped = coords
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(c, (l, u))| c.max(*l).min(*u))
            .collect();
        Ok(ParameterPoint { coords: clamped })
    }
}

/// A point of a [`ParameterBox`]; constructed through the box so membership
/// is validated exactly once.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPoint {
    coords: Vec<f64>,
}

impl ParameterPoint {
    /// Coordinates.
    #[must_use]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Sup-norm distance between two points.
///
/// # Errors
/// Returns [`Error::InvalidInput`] on dimension mismatch.
pub fn sup_distance(a: &ParameterPoint, b: &ParameterPoint) -> Result<f64> {
    if a.coords.len() != b.coords.len() {
        return Err(Error::invalid("sup_distance dimension mismatch"));
    }
    Ok(a.coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Finitely supported probability measure on a [`ParameterBox`].
///
/// Construction merges support points closer than [`ATOM_MERGE_TOL`] in sup
/// norm, requires strictly positive weights summing to 1 within
/// [`WEIGHT_SUM_TOL`], and renormalizes the sum to exactly 1.
#[derive(Debug, Clone)]
pub struct Belief {
    parameter_box: ParameterBox,
    atoms: Vec<(ParameterPoint, f64)>,
}

impl Belief {
    /// Build a belief from weighted support points.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] for an empty support, points outside
    /// the box, nonpositive weights, or a weight sum off 1 by more than
    /// [`WEIGHT_SUM_TOL`].
    pub fn new(parameter_box: ParameterBox, atoms: Vec<(ParameterPoint, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("belief requires at least one atom"));
        }
        let mut sum = 0.0;
        for (p, w) in &atoms {
            if !parameter_box.contains(p.coords()) {
                return Err(Error::invalid("belief atom lies outside the box"));
            }
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::invalid(format!("belief weights must be positive, got {w}")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::invalid(format!(
                "belief weights sum to {sum}, expected 1 within {WEIGHT_SUM_TOL}"
            )));
        }
        // Merge near-duplicate support points; first occurrence keeps its
        // coordinates as the representative.
        let mut merged: Vec<(ParameterPoint, f64)> = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            let mut absorbed = false;
            for (q, v) in &mut merged {
                if sup_distance(&p, q)? <= ATOM_MERGE_TOL {
                    *v += w;
                    absorbed = true;
                    break;
                }
            }
            if !absorbed {
                merged.push((p, w));
            }
        }
        for (_, w) in &mut merged {
            *w /= sum;
        }
        Ok(Belief {
            parameter_box,
            atoms: merged,
        })
    }

    /// Point mass at `point`.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] if `point` is outside the box.
    pub fn point_mass(parameter_box: ParameterBox, point: ParameterPoint) -> Result<Self> {
        Belief::new(parameter_box, vec![(point, 1.0)])
    }

    /// Support points with weights (weights sum to exactly 1).
    #[must_use]
    pub fn atoms(&self) -> &[(ParameterPoint, f64)] {
        &self.atoms
    }

    /// The box this belief lives on.
    #[must_use]
    pub fn parameter_box(&self) -> &ParameterBox {
        &self.parameter_box
    }

    /// Expectation of a coordinate of the parameter under this belief.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] if `coord` is out of range.
    pub fn mean_coord(&self, coord: usize) -> Result<f64> {
        if coord >= self.parameter_box.dim() {
            return Err(Error::invalid("mean_coord index out of range"));
        }
        Ok(self
            .atoms
            .iter()
            .map(|(p, w)| w * p.coords()[coord])
            .sum())
    }

    /// Whether two beliefs have the same support and weights within `tol`.
    ///
    /// Atoms are matched after sorting lexicographically by coordinates, so
    /// the comparison is order-insensitive.  Intended for deduplication of
    /// rule outputs, where distinct beliefs differ well beyond `tol`.
    #[must_use]
    pub fn approx_eq(&self, other: &Belief, tol: f64) -> bool {
        if self.parameter_box != other.parameter_box || self.atoms.len() != other.atoms.len() {
            return false;
        }
        let key = |a: &(ParameterPoint, f64)| a.0.coords().to_vec();
        let mut mine: Vec<_> = self.atoms.clone();
        let mut theirs: Vec<_> = other.atoms.clone();
        mine.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        theirs.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        mine.iter().zip(&theirs).all(|((p, w), (q, v))| {
            (w - v).abs() <= tol && sup_distance(p, q).map(|d| d <= tol).unwrap_or(false)
        })
    }
}

/// Nonempty collection of beliefs over one common box.
#[derive(Debug, Clone)]
pub struct BeliefSet {
    members: Vec<Belief>,
}

impl BeliefSet {
    /// Wrap a nonempty vector of beliefs sharing one box.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] if empty or the boxes differ.
    pub fn new(members: Vec<Belief>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::invalid("belief set must be nonempty"));
        };
        let bx = first.parameter_box().clone();
        if members.iter().any(|b| *b.parameter_box() != bx) {
            return Err(Error::invalid("belief set members must share one box"));
        }
        Ok(BeliefSet { members })
    }

    /// Member beliefs.
    #[must_use]
    pub fn members(&self) -> &[Belief] {
        &self.members
    }

    /// Common parameter box.
    #[must_use]
    pub fn parameter_box(&self) -> &ParameterBox {
        self.members[0].parameter_box()
    }
}

/// Pairwise sup distances between the supports of two beliefs.
fn distance_matrix(a: &Belief, b: &Belief) -> Result<Vec<Vec<f64>>> {
    a.atoms()
        .iter()
        .map(|(p, _)| {
            b.atoms()
                .iter()
                .map(|(q, _)| sup_distance(p, q))
                .collect::<Result<Vec<f64>>>()
        })
        .collect()
}

fn check_same_box(a: &Belief, b: &Belief) -> Result<()> {
    if a.parameter_box() != b.parameter_box() {
        return Err(Error::invalid("belief distance requires a common box"));
    }
    Ok(())
}

/// Minimum coupling mass that must travel farther than `eps` (closed arcs,
/// [`ARC_SLACK`] slack on the comparison).
fn excess_mass(dist: &[Vec<f64>], wa: &[f64], wb: &[f64], eps: f64) -> Result<f64> {
    let cost: Vec<Vec<f64>> = dist
        .iter()
        .map(|row| {
            row.iter()
                .map(|&d| if d <= eps + ARC_SLACK { 0.0 } else { 1.0 })
                .collect()
        })
        .collect();
    let (value, _) = lp::transportation(&cost, wa, wb)?;
    Ok(value)
}

/// Prokhorov distance between two beliefs over the same box.
///
/// Uses the coupling characterization: the distance is the smallest `eps`
/// admitting a coupling that moves at most `eps` mass farther than `eps`.
/// Feasibility at a given `eps` is a 0/1-cost transportation problem; the
/// smallest feasible `eps` is then bracketed by bisection on `[0, 1]` to
/// width [`PROKHOROV_TOL`], returning the feasible upper end.
///
/// # Errors
/// Returns [`Error::InvalidInput`] if the beliefs live on different boxes.
pub fn prokhorov_distance(a: &Belief, b: &Belief) -> Result<f64> {
    check_same_box(a, b)?;
    let dist = distance_matrix(a, b)?;
    let wa: Vec<f64> = a.atoms().iter().map(|(_, w)| *w).collect();
    let wb: Vec<f64> = b.atoms().iter().map(|(_, w)| *w).collect();

    let feasible = |eps: f64| -> Result<bool> {
        Ok(excess_mass(&dist, &wa, &wb, eps)? <= eps + ARC_SLACK)
    };

    if feasible(0.0)? {
        return Ok(0.0);
    }
    // Mass never exceeds 1, so eps = 1 is always feasible.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > PROKHOROV_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// 1-Wasserstein distance between two beliefs over the same box, with sup
/// norm ground cost, via the transportation LP.
///
/// # Errors
/// Returns [`Error::InvalidInput`] if the beliefs live on different boxes.
pub fn wasserstein_distance(a: &Belief, b: &Belief) -> Result<f64> {
    check_same_box(a, b)?;
    let dist = distance_matrix(a, b)?;
    let wa: Vec<f64> = a.atoms().iter().map(|(_, w)| *w).collect();
    let wb: Vec<f64> = b.atoms().iter().map(|(_, w)| *w).collect();
    let (value, _) = lp::transportation(&dist, &wa, &wb)?;
    // Clamp the LP's numeric noise at zero.
    Ok(value.max(0.0))
}
