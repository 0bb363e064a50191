//! Finite-game rationalizability under belief restrictions.
//!
//! Given a finite game whose payoffs depend on an unknown parameter and a set
//! of permitted first-order beliefs, this module computes which actions are
//! weakly rationalizable (justifiable under some permitted belief), which are
//! certifiably rationalizable for every type consistent with the restriction,
//! and how strict a best reply an action is at a limit belief.
//!
//! Conjectures about opponents may correlate with the parameter: the
//! certificate LP carries one mixture over opponent profiles per belief atom,
//! which is the interim correlated notion of rationalizability.

use crate::lp;
use crate::measures::{Belief, BeliefSet, ParameterBox, ParameterPoint};
use crate::{gauss, Error, Result};
use rand_core::RngCore;
use std::sync::Arc;

/// Feasibility tolerance for best-reply certificates.  Margins within the
/// band around the threshold count as feasible for weak rationalizability and
/// infeasible for strong certification, so weak over-approximates and strong
/// under-approximates.
pub const CERT_TOL: f64 = 1e-9;

/// Bracket width at which the strictness-margin bisection stops.
pub const DELTA_BRACKET: f64 = 1e-6;

/// Payoff function: (player, action profile, parameter) -> utility.
pub type PayoffFn = dyn Fn(usize, &[usize], &ParameterPoint) -> f64 + Send + Sync;

/// A finite normal-form game with parameter-dependent payoffs.
#[derive(Clone)]
pub struct FiniteGame {
    actions: Vec<Vec<String>>,
    payoff: Arc<PayoffFn>,
    lipschitz_k: f64,
    parameter_box: ParameterBox,
}

impl std::fmt::Debug for FiniteGame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGame")
            .field("actions", &self.actions)
            .field("lipschitz_k", &self.lipschitz_k)
            .field("parameter_box", &self.parameter_box)
            .finish_non_exhaustive()
    }
}

impl FiniteGame {
    /// Build a game from per-player action name lists, a payoff function, a
    /// declared Lipschitz constant for payoffs in the parameter (sup norm),
    /// and the parameter box.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] for an empty player list, a player
    /// with no actions, or a non-positive Lipschitz constant.
    pub fn new(
        actions: Vec<Vec<String>>,
        payoff: Arc<PayoffFn>,
        lipschitz_k: f64,
        parameter_box: ParameterBox,
    ) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::invalid("game needs at least one player"));
        }
        if actions.iter().any(Vec::is_empty) {
            return Err(Error::invalid("every player needs at least one action"));
        }
        if !(lipschitz_k > 0.0) || !lipschitz_k.is_finite() {
            return Err(Error::invalid("lipschitz_k must be positive and finite"));
        }
        Ok(FiniteGame {
            actions,
            payoff,
            lipschitz_k,
            parameter_box,
        })
    }

    /// Two-player coordination game on a one-dimensional growth-rate box.
    ///
    /// Actions are `strong` (index 0) and `weak` (index 1) for both players.
    /// Both pay -1 when both go strong, -1-b for strong against weak, and -b
    /// for weak regardless, where b is the parameter.  The strong action is
    /// part of a coordinated equilibrium exactly when b >= 1.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] if the box is not one-dimensional.
    pub fn coordination(parameter_box: ParameterBox) -> Result<Self> {
        if parameter_box.dim() != 1 {
            return Err(Error::invalid("coordination game needs a 1-d parameter box"));
        }
        let payoff: Arc<PayoffFn> = Arc::new(|player, profile, theta| {
            let b = theta.coords()[0];
            if profile[player] == 0 {
                if profile[1 - player] == 0 {
                    -1.0
                } else {
                    -1.0 - b
                }
            } else {
                -b
            }
        });
        FiniteGame::new(
            vec![
                vec!["strong".into(), "weak".into()],
                vec!["strong".into(), "weak".into()],
            ],
            payoff,
            1.0,
            parameter_box,
        )
    }

    /// Two-player market-entry game on a one-dimensional value box.
    ///
    /// Player 0 is the seller with actions `exit` (keep a good worth the
    /// parameter v) and `enter` (pay `cost` to list it at the posted
    /// `price`).  Player 1 is the buyer with actions `pass` and `buy`; a buy
    /// order commits the posted price, so it pays v - price when the seller
    /// entered and -price otherwise.  Consequences: buying is justifiable
    /// only under a belief with mean value at or above `price`, and entering
    /// only under a belief with mean value at or below `1 - cost/price`
    /// (conjecturing the buyer buys exactly at low values).
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] unless `0 < cost < price < 1` and the
    /// box is one-dimensional containing `[0, 1]`.
    pub fn trade(parameter_box: ParameterBox, price: f64, cost: f64) -> Result<Self> {
        if !(0.0 < cost && cost < price && price < 1.0) {
            return Err(Error::invalid(format!(
                "need 0 < cost < price < 1, got cost={cost}, price={price}"
            )));
        }
        if parameter_box.dim() != 1
            || !parameter_box.contains(&[0.0])
            || !parameter_box.contains(&[1.0])
        {
            return Err(Error::invalid(
                "trade game needs a 1-d parameter box containing [0, 1]",
            ));
        }
        let payoff: Arc<PayoffFn> = Arc::new(move |player, profile, theta| {
            let v = theta.coords()[0];
            let entered = profile[0] == 1;
            let bought = profile[1] == 1;
            if player == 0 {
                match (entered, bought) {
                    (false, _) => v,
                    (true, true) => price - cost,
                    (true, false) => v - cost,
                }
            } else if bought {
                if entered {
                    v - price
                } else {
                    -price
                }
            } else {
                0.0
            }
        });
        FiniteGame::new(
            vec![
                vec!["exit".into(), "enter".into()],
                vec!["pass".into(), "buy".into()],
            ],
            payoff,
            1.0,
            parameter_box,
        )
    }

    /// Number of players.
    #[must_use]
    pub fn num_players(&self) -> usize {
        self.actions.len()
    }

    /// Action names for one player.
    ///
    /// # Panics
    /// Panics if `player` is out of range.
    #[must_use]
    pub fn actions(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    /// Index of a named action.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] for an unknown player or name.
    pub fn action_index(&self, player: usize, name: &str) -> Result<usize> {
        self.actions
            .get(player)
            .ok_or_else(|| Error::invalid(format!("no player {player}")))?
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::invalid(format!("player {player} has no action '{name}'")))
    }

    /// Payoff for `player` at an action profile and parameter point.
    #[must_use]
    pub fn payoff(&self, player: usize, profile: &[usize], theta: &ParameterPoint) -> f64 {
        (self.payoff)(player, profile, theta)
    }

    /// Declared Lipschitz constant of payoffs in the parameter.
    #[must_use]
    pub fn lipschitz_k(&self) -> f64 {
        self.lipschitz_k
    }

    /// The parameter box.
    #[must_use]
    pub fn parameter_box(&self) -> &ParameterBox {
        &self.parameter_box
    }

    /// Width of `player`'s payoff range over all action profiles and the
    /// given parameter points.  Upper-bounds every best-reply margin the
    /// player can have under beliefs supported on those points.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] for an empty support or out-of-range
    /// player.
    pub fn payoff_spread(&self, player: usize, support: &[ParameterPoint]) -> Result<f64> {
        if player >= self.num_players() {
            return Err(Error::invalid(format!("no player {player}")));
        }
        if support.is_empty() {
            return Err(Error::invalid("payoff_spread needs a nonempty support"));
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for profile in all_profiles(&self.action_counts()) {
            for theta in support {
                let u = self.payoff(player, &profile, theta);
                lo = lo.min(u);
                hi = hi.max(u);
            }
        }
        Ok(hi - lo)
    }

    /// Verify the declared Lipschitz constant on randomly sampled parameter
    /// pairs, across all players and profiles.
    ///
    /// # Errors
    /// Returns [`Error::InvalidInput`] when a sampled pair violates the
    /// declared constant beyond [`CERT_TOL`].
    pub fn spot_check_lipschitz(&self, rng: &mut dyn RngCore, pairs: usize) -> Result<()> {
        let dim = self.parameter_box.dim();
        let counts = self.action_counts();
        let draw = |rng: &mut dyn RngCore| -> Result<ParameterPoint> {
            let coords: Vec<f64> = (0..dim)
                .map(|k| {
                    let (lo, hi) = (self.parameter_box.lower()[k], self.parameter_box.upper()[k]);
                    lo + (hi - lo) * gauss::uniform01(rng)
                })
                .collect();
            self.parameter_box.point(coords)
        };
        for _ in 0..pairs {
            let a = draw(rng)?;
            let b = draw(rng)?;
            let dist = crate::measures::sup_distance(&a, &b)?;
            for profile in all_profiles(&counts) {
                for player in 0..self.num_players() {
                    let gap = (self.payoff(player, &profile, &a)
                        - self.payoff(player, &profile, &b))
                    .abs();
                    if gap > self.lipschitz_k * dist + CERT_TOL {
                        return Err(Error::invalid(format!(
                            "Lipschitz violation: |payoff gap| {gap} > K*d = {}",
                            self.lipschitz_k * dist
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn action_counts(&self) -> Vec<usize> {
        self.actions.iter().map(Vec::len).collect()
    }

    fn check_belief_box(&self, bx: &ParameterBox) -> Result<()> {
        if bx.lower() != self.parameter_box.lower() || bx.upper() != self.parameter_box.upper() {
            return Err(Error::invalid(
                "belief parameter box must match the game's box",
            ));
        }
        Ok(())
    }
}

/// Outcome of the two strong-rationalizability tests for one action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrongStatus {
    /// The action belongs to a family that is uniformly a best reply for
    /// every permitted belief (sufficient for rationalizability of all
    /// consistent types).
    CertifiedStrong,
    /// Some permitted belief, held with common certainty, eliminates the
    /// action (necessary test fails).
    RefutedStrong,
    /// Neither the certificate nor a refutation applies.
    Indeterminate,
}

/// Weak and strong answers for every player and action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalizabilityResult {
    /// Per player, the sorted action indices that are weakly rationalizable.
    pub weak_sets: Vec<Vec<usize>>,
    /// Per player and action index, the three-valued strong status.
    pub strong_status: Vec<Vec<StrongStatus>>,
}

/// Strictness margin of an action at a limit belief.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrictnessMargin {
    /// Estimated supremum of margins at which the action stays justifiable.
    pub value: f64,
    /// Width of the final bisection bracket (0 when no bisection was needed).
    pub bracket_width: f64,
    /// False when the action is not even weakly justifiable at the belief,
    /// in which case `value` is 0.
    pub rationalizable: bool,
}

/// Cartesian product of `0..counts[i]` in lexicographic order.
fn all_profiles(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &c in counts {
        let mut next = Vec::with_capacity(out.len() * c);
        for p in &out {
            for a in 0..c {
                let mut q = p.clone();
                q.push(a);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Opponent profiles (full profiles with the player's own slot filled later):
/// product of allowed actions over players other than `player`.
fn opponent_profiles(allowed: &[Vec<usize>], player: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for (j, acts) in allowed.iter().enumerate() {
        if j == player {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * acts.len());
        for p in &out {
            for &a in acts {
                let mut q = p.clone();
                q.push(a);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Best achievable worst-case advantage of `action` over the player's other
/// actions, at belief `nu`, when opponents play within `allowed` sets.
///
/// The maximization is over conjectures that assign, per belief atom, an
/// arbitrary mixture over allowed opponent profiles; the minimum runs over
/// all alternative own actions.  Positive infinity when the player has no
/// alternative action.
///
/// `allowed` has one entry per player; the player's own entry is ignored.
///
/// # Errors
/// Returns [`Error::InvalidInput`] for out-of-range players, actions, or
/// action indices, an empty allowed set for an opponent, or a belief on a
/// different box.
pub fn best_reply_margin(
    game: &FiniteGame,
    player: usize,
    action: usize,
    nu: &Belief,
    allowed: &[Vec<usize>],
) -> Result<f64> {
    let players = game.num_players();
    if player >= players {
        return Err(Error::invalid(format!("no player {player}")));
    }
    if action >= game.actions(player).len() {
        return Err(Error::invalid(format!(
            "player {player} has no action index {action}"
        )));
    }
    if allowed.len() != players {
        return Err(Error::invalid("allowed needs one entry per player"));
    }
    for (j, acts) in allowed.iter().enumerate() {
        if j == player {
            continue;
        }
        if acts.is_empty() {
            return Err(Error::invalid(format!("empty allowed set for player {j}")));
        }
        if acts.iter().any(|&a| a >= game.actions(j).len()) {
            return Err(Error::invalid(format!("allowed action out of range for player {j}")));
        }
    }
    game.check_belief_box(nu.parameter_box())?;

    let alternatives: Vec<usize> = (0..game.actions(player).len())
        .filter(|&a| a != action)
        .collect();
    if alternatives.is_empty() {
        return Ok(f64::INFINITY);
    }
    let opp = opponent_profiles(allowed, player);
    let weights: Vec<f64> = nu.atoms().iter().map(|(_, w)| *w).collect();
    let full = |own: usize, opp_profile: &[usize]| -> Vec<usize> {
        let mut p = Vec::with_capacity(players);
        let mut it = opp_profile.iter();
        for j in 0..players {
            if j == player {
                p.push(own);
            } else {
                p.push(*it.next().unwrap());
            }
        }
        p
    };
    let diffs: Vec<Vec<Vec<f64>>> = alternatives
        .iter()
        .map(|&alt| {
            opp.iter()
                .map(|o| {
                    let pa = full(action, o);
                    let pb = full(alt, o);
                    nu.atoms()
                        .iter()
                        .map(|(theta, _)| {
                            game.payoff(player, &pa, theta) - game.payoff(player, &pb, theta)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    lp::max_min_margin(&weights, &diffs)
}

/// Whether `action` is a `delta`-best reply to `nu` against the allowed
/// sets, within the [`CERT_TOL`] feasibility band (ties feasible).
///
/// # Errors
/// Same as [`best_reply_margin`]; additionally `delta < 0` is rejected.
pub fn best_reply_certificate(
    game: &FiniteGame,
    player: usize,
    action: usize,
    nu: &Belief,
    allowed: &[Vec<usize>],
    delta: f64,
) -> Result<bool> {
    if !(delta >= 0.0) {
        return Err(Error::invalid(format!("delta must be >= 0, got {delta}")));
    }
    Ok(best_reply_margin(game, player, action, nu, allowed)? >= delta - CERT_TOL)
}

/// Iterated simultaneous elimination from full action sets.  `survives`
/// receives (player, action, current allowed sets).  If any player's set
/// empties, the whole family collapses to empty (no nonempty closed family
/// exists through an empty opponent set).
fn iterate_elimination(
    game: &FiniteGame,
    mut survives: impl FnMut(usize, usize, &[Vec<usize>]) -> Result<bool>,
) -> Result<Vec<Vec<usize>>> {
    let players = game.num_players();
    let mut allowed: Vec<Vec<usize>> = (0..players)
        .map(|i| (0..game.actions(i).len()).collect())
        .collect();
    let max_rounds: usize = allowed.iter().map(Vec::len).sum::<usize>() + 1;
    for _ in 0..max_rounds {
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(players);
        for i in 0..players {
            let mut keep = Vec::with_capacity(allowed[i].len());
            for &a in &allowed[i] {
                if survives(i, a, &allowed)? {
                    keep.push(a);
                }
            }
            next.push(keep);
        }
        if next.iter().any(Vec::is_empty) {
            return Ok(vec![Vec::new(); players]);
        }
        if next == allowed {
            return Ok(allowed);
        }
        allowed = next;
    }
    Err(Error::Internal(
        "elimination failed to reach a fixed point within the round bound".into(),
    ))
}

/// Actions justifiable under **some** permitted belief: the greatest family
/// in which every member action is a best reply (zero margin, ties feasible)
/// to some belief in `beliefs`, against opponents confined to the family.
///
/// # Errors
/// Belief-box mismatches and LP failures propagate; an empty result is
/// reported as [`Error::Internal`] since some action always survives.
pub fn weak_rationalizable(game: &FiniteGame, beliefs: &BeliefSet) -> Result<Vec<Vec<usize>>> {
    game.check_belief_box(beliefs.parameter_box())?;
    let sets = iterate_elimination(game, |i, a, allowed| {
        for nu in beliefs.members() {
            if best_reply_margin(game, i, a, nu, allowed)? >= -CERT_TOL {
                return Ok(true);
            }
        }
        Ok(false)
    })?;
    if sets.iter().any(Vec::is_empty) {
        return Err(Error::Internal(
            "weak rationalizability produced an empty set".into(),
        ));
    }
    Ok(sets)
}

/// Three-valued strong rationalizability for every action.
///
/// The certificate half computes the greatest family in which every action
/// is a strict-side best reply for **every** permitted belief; membership is
/// sufficient for the action to be rationalizable for all types consistent
/// with the restriction.  The refutation half checks each belief as a
/// common-certainty type: failing [`weak_rationalizable`] under a singleton
/// is conclusive.  Actions caught by neither test are `Indeterminate`.
///
/// # Errors
/// Propagates certificate errors.
pub fn strong_rationalizable(
    game: &FiniteGame,
    beliefs: &BeliefSet,
) -> Result<RationalizabilityResult> {
    game.check_belief_box(beliefs.parameter_box())?;
    let weak_sets = weak_rationalizable(game, beliefs)?;
    let certified = iterate_elimination(game, |i, a, allowed| {
        for nu in beliefs.members() {
            if !(best_reply_margin(game, i, a, nu, allowed)? >= CERT_TOL) {
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    let players = game.num_players();
    let mut refuted: Vec<Vec<bool>> = (0..players)
        .map(|i| vec![false; game.actions(i).len()])
        .collect();
    for nu in beliefs.members() {
        let singleton = BeliefSet::new(vec![nu.clone()])?;
        let w = weak_rationalizable(game, &singleton)?;
        for i in 0..players {
            for a in 0..game.actions(i).len() {
                if !w[i].contains(&a) {
                    refuted[i][a] = true;
                }
            }
        }
    }
    let strong_status = (0..players)
        .map(|i| {
            (0..game.actions(i).len())
                .map(|a| {
                    if certified[i].contains(&a) {
                        StrongStatus::CertifiedStrong
                    } else if refuted[i][a] {
                        StrongStatus::RefutedStrong
                    } else {
                        StrongStatus::Indeterminate
                    }
                })
                .collect()
        })
        .collect();
    Ok(RationalizabilityResult {
        weak_sets,
        strong_status,
    })
}

/// Greatest family closed under `delta`-best replies to the single belief
/// `limit` (ties feasible).  May be empty for large `delta`.
///
/// # Errors
/// Rejects `delta < 0`; propagates certificate errors.
pub fn delta_strict_sets(
    game: &FiniteGame,
    limit: &Belief,
    delta: f64,
) -> Result<Vec<Vec<usize>>> {
    if !(delta >= 0.0) {
        return Err(Error::invalid(format!("delta must be >= 0, got {delta}")));
    }
    delta_sets_with_threshold(game, limit, delta - CERT_TOL)
}

fn delta_sets_with_threshold(
    game: &FiniteGame,
    limit: &Belief,
    threshold: f64,
) -> Result<Vec<Vec<usize>>> {
    game.check_belief_box(limit.parameter_box())?;
    iterate_elimination(game, |i, a, allowed| {
        Ok(best_reply_margin(game, i, a, limit, allowed)? >= threshold)
    })
}

/// Largest `delta` at which `action` remains in [`delta_strict_sets`] at the
/// belief `limit`, located by bisection to a bracket of [`DELTA_BRACKET`].
///
/// Returns margin 0 with `rationalizable: false` when the action is not
/// justifiable at all, and margin 0 (with the flag set) when it is
/// justifiable only with ties.
///
/// # Errors
/// Propagates certificate errors.
pub fn delta_inf(
    game: &FiniteGame,
    limit: &Belief,
    player: usize,
    action: usize,
) -> Result<StrictnessMargin> {
    if player >= game.num_players() || action >= game.actions(player).len() {
        return Err(Error::invalid("player or action out of range"));
    }
    let member = |delta: f64| -> Result<bool> {
        Ok(delta_strict_sets(game, limit, delta)?[player].contains(&action))
    };
    if !member(0.0)? {
        return Ok(StrictnessMargin {
            value: 0.0,
            bracket_width: 0.0,
            rationalizable: false,
        });
    }
    // Strict-side survival at zero; without it the supremum is exactly 0.
    let strict0 = delta_sets_with_threshold(game, limit, CERT_TOL)?[player].contains(&action);
    if !strict0 {
        return Ok(StrictnessMargin {
            value: 0.0,
            bracket_width: 0.0,
            rationalizable: true,
        });
    }
    let support: Vec<ParameterPoint> = limit.atoms().iter().map(|(p, _)| p.clone()).collect();
    let spread = (0..game.num_players())
        .map(|j| game.payoff_spread(j, &support))
        .try_fold(0.0f64, |m, s| s.map(|s| m.max(s)))?;
    if member(spread)? {
        return Ok(StrictnessMargin {
            value: spread,
            bracket_width: 0.0,
            rationalizable: true,
        });
    }
    let (mut lo, mut hi) = (0.0, spread);
    while hi - lo > DELTA_BRACKET {
        let mid = 0.5 * (lo + hi);
        if member(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(StrictnessMargin {
        value: 0.5 * (lo + hi),
        bracket_width: hi - lo,
        rationalizable: true,
    })
}
