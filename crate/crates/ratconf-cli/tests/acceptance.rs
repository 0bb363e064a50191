//! Acceptance suite: nine product-level checks covering estimator vs
//! closed-form agreement, analytic bound validity, solver characterizations,
//! metric oracles, and end-to-end reproducibility.  Each criterion prints a
//! PASS or FAIL line with supporting measurements; failures are collected so
//! every criterion reports before the final assertion.
//!
//! Tolerances: Monte Carlo columns agree with exact values within 3 standard
//! errors, where the SE floor uses the exact probability so degenerate cells
//! (estimates of exactly 0 or 1) are judged against the binomial noise they
//! actually carry.  Analytic oracles match to 1e-6; frozen constants to 1e-12.

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;

use ratconf::closedforms::{self, BoundInputs};
use ratconf::confidence::{
    estimate_confidence_set, replication_rng, ConfidenceEstimate, CoordinationMc, EvalMode,
    LocationMc, RichPriorsMc, TradeMc,
};
use ratconf::gauss;
use ratconf::measures::{
    prokhorov_distance, wasserstein_distance, Belief, BeliefSet, ParameterBox,
};
use ratconf::scenarios::{
    sample_location_dataset, CoordinationScenario, DisagreementChecker, GaussianLocationScenario,
    RichPriorsScenario, TradeScenario,
};
use ratconf::solver::{
    self, strong_rationalizable, weak_rationalizable, FiniteGame, PayoffFn, StrongStatus,
};

/// Master seed for every Monte Carlo cell in this suite.
const SEED: u64 = 0x5EED_2026;

type Criterion = fn() -> Result<Vec<String>, String>;

fn lib<T>(r: Result<T, ratconf::Error>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

/// Binomial SE floored by the exact-probability SE, so cells whose estimate
/// lands exactly on 0 or 1 are still compared against real sampling noise.
fn se_floor(p_exact: f64, se_mc: f64, replications: u32) -> f64 {
    let exact = (p_exact * (1.0 - p_exact) / f64::from(replications)).sqrt();
    se_mc.max(exact)
}

fn check_within(
    label: &str,
    estimate: f64,
    exact: f64,
    se: f64,
    replications: u32,
) -> Result<(), String> {
    let tol = 3.0 * se_floor(exact, se, replications);
    let dev = (estimate - exact).abs();
    if dev > tol {
        return Err(format!(
            "{label}: estimate {estimate:.6} vs exact {exact:.6}, \
             deviation {dev:.2e} exceeds 3 SE = {tol:.2e}"
        ));
    }
    Ok(())
}

// --- criterion 1 -----------------------------------------------------------

fn c1_coordination_consistency() -> Result<Vec<String>, String> {
    const R: u32 = 10_000;
    let start = Instant::now();
    let mut worst = 0.0f64;
    for sigma in [10.0, 100.0] {
        let scenario = lib(CoordinationScenario::new(2.0, sigma, 0.05))?;
        let mc = CoordinationMc { scenario };
        for n in [10u32, 50, 100] {
            let est = lib(estimate_confidence_set(&mc, n, R, SEED, EvalMode::FastOnly))?;
            let cf = lib(scenario.closed_form(n))?;
            check_within(
                &format!("sigma={sigma} n={n} lower"),
                est.p_lower_hat,
                cf.p_lower,
                est.se_lower,
                R,
            )?;
            check_within(
                &format!("sigma={sigma} n={n} upper"),
                est.p_upper_hat,
                cf.p_upper,
                est.se_upper,
                R,
            )?;
            let dl = (est.p_lower_hat - cf.p_lower).abs() / se_floor(cf.p_lower, est.se_lower, R);
            let du = (est.p_upper_hat - cf.p_upper).abs() / se_floor(cf.p_upper, est.se_upper, R);
            worst = worst.max(dl).max(du);
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 60.0 {
        return Err(format!("runtime {:.1}s exceeds the 60s budget", elapsed.as_secs_f64()));
    }
    Ok(vec![
        format!("worst cell deviation {worst:.2} SE across 6 cells at R={R}"),
        format!("runtime {:.1}s (budget 60s)", elapsed.as_secs_f64()),
    ])
}

// --- criterion 2 -----------------------------------------------------------

fn c2_trade_consistency() -> Result<Vec<String>, String> {
    const R: u32 = 100_000;
    let mut info = Vec::new();
    let mut worst = 0.0f64;
    for m in [1u32, 2, 5, 10] {
        let mut gaps = Vec::new();
        for n in [5u32, 20, 50] {
            let cf = lib(closedforms::trade_pbar_symmetric(n, m, 0.1))?;
            let scenario = lib(TradeScenario::symmetric(m, 0.1, 0.75, 0.1875))?;
            let exact_checker = TradeMc {
                scenario: scenario.clone(),
                checker: DisagreementChecker::PerDimension,
            };
            let box_checker = TradeMc {
                scenario,
                checker: DisagreementChecker::BoundingBox,
            };
            // Same master seed: both checkers see identical datasets.
            let est = lib(estimate_confidence_set(&exact_checker, n, R, SEED, EvalMode::FastOnly))?;
            let est_box =
                lib(estimate_confidence_set(&box_checker, n, R, SEED, EvalMode::FastOnly))?;
            if est.p_lower_hat != 0.0 || est_box.p_lower_hat != 0.0 {
                return Err(format!(
                    "m={m} n={n}: lower estimate must be exactly 0, got {} / {}",
                    est.p_lower_hat, est_box.p_lower_hat
                ));
            }
            check_within(
                &format!("m={m} n={n} upper"),
                est.p_upper_hat,
                cf,
                est.se_upper,
                R,
            )?;
            worst = worst.max((est.p_upper_hat - cf).abs() / se_floor(cf, est.se_upper, R));
            let tol = 3.0 * se_floor(cf, est_box.se_upper, R);
            if est_box.p_upper_hat < cf - tol {
                return Err(format!(
                    "m={m} n={n}: box-checker estimate {} fell below closed form {cf} - 3 SE",
                    est_box.p_upper_hat
                ));
            }
            gaps.push(est_box.p_upper_hat - est.p_upper_hat);
        }
        info.push(format!(
            "m={m}: box-checker excess over exact checker at n=5/20/50: \
             {:+.1e} / {:+.1e} / {:+.1e}",
            gaps[0], gaps[1], gaps[2]
        ));
    }
    info.push(format!("worst exact-checker deviation {worst:.2} SE at R={R}"));
    Ok(info)
}

// --- criterion 3 -----------------------------------------------------------

fn c3_narrative_anchors() -> Result<Vec<String>, String> {
    let trade = lib(closedforms::trade_pbar_symmetric(20, 10, 0.1))?;
    if trade < 0.99 {
        return Err(format!("trade upper probability at (n=20, m=10) is {trade}, want >= 0.99"));
    }
    let pair = lib(closedforms::coord_closed_form(100, 2.0, 100.0, 0.05))?;
    if !(0.95..=1.0).contains(&pair.p_upper) {
        return Err(format!("coordination upper at (n=100, sigma=100) is {}", pair.p_upper));
    }
    // The formula at this design yields ~0.0473.  A figure of 0.08 is
    // sometimes quoted for this cell but is not what the formula produces;
    // pin the computed value and keep an asserted distance from 0.08 so any
    // silent recalibration toward that figure fails loudly.
    let frozen = 0.047_330_894_053_110_084_172;
    if (pair.p_lower - frozen).abs() > 1e-12 {
        return Err(format!("coordination lower drifted: {} vs frozen {frozen}", pair.p_lower));
    }
    if (pair.p_lower - 0.08).abs() <= 0.02 {
        return Err(format!(
            "coordination lower {} is within 0.02 of 0.08; the formula value must stay distinct",
            pair.p_lower
        ));
    }
    Ok(vec![
        format!("trade upper at (20, 10, a=0.1) = {trade:.6}"),
        format!(
            "coordination pair at (100, sigma=100) = [{:.6}, {:.6}]; lower != 0.08 by design",
            pair.p_lower, pair.p_upper
        ),
    ])
}

// --- criterion 4 -----------------------------------------------------------

fn c4_closed_form_monotonicity() -> Result<Vec<String>, String> {
    let mut prev = 0.0;
    for m in [1u32, 2, 5, 10] {
        let p = lib(closedforms::trade_pbar_symmetric(20, m, 0.1))?;
        if p <= prev {
            return Err(format!("trade upper not increasing at m={m}: {p} <= {prev}"));
        }
        prev = p;
    }
    let tail = lib(closedforms::trade_pbar_symmetric(1000, 2, 0.1))?;
    if tail >= 1e-3 {
        return Err(format!("trade upper at n=1000 is {tail}, want < 1e-3"));
    }
    // Strict comparisons need values below f64 saturation: by n=500 at
    // small sigma both probabilities round to exactly 1, so the grid stops
    // at n=100 and the saturated end is covered by the large-n criterion.
    let ns = [10u32, 50, 100];
    let sigmas = [5.0, 10.0, 50.0, 100.0];
    for &sigma in &sigmas {
        let mut prev: Option<(f64, f64)> = None;
        for &n in &ns {
            let pair = lib(closedforms::coord_closed_form(n, 2.0, sigma, 0.05))?;
            if let Some((lo, hi)) = prev {
                if pair.p_lower <= lo || pair.p_upper <= hi {
                    return Err(format!("coordination pair not increasing in n at sigma={sigma}, n={n}"));
                }
            }
            prev = Some((pair.p_lower, pair.p_upper));
        }
    }
    for &n in &ns {
        let mut prev: Option<(f64, f64)> = None;
        for &sigma in &sigmas {
            let pair = lib(closedforms::coord_closed_form(n, 2.0, sigma, 0.05))?;
            if let Some((lo, hi)) = prev {
                if pair.p_lower >= lo || pair.p_upper >= hi {
                    return Err(format!("coordination pair not decreasing in sigma at n={n}, sigma={sigma}"));
                }
            }
            prev = Some((pair.p_lower, pair.p_upper));
        }
    }
    Ok(vec![format!("trade upper at (n=1000, m=2) = {tail:.2e}")])
}

// --- criterion 5 -----------------------------------------------------------

fn c5_bound_validation() -> Result<Vec<String>, String> {
    const R: u32 = 10_000;
    let mut info = Vec::new();

    // Location learning: the analytic lower bound must not exceed the
    // estimated lower probability.
    let location = lib(GaussianLocationScenario::new(2.0, 1.0, 5))?;
    let mc = LocationMc { scenario: location.clone() };
    let mut est_at_100: Option<ConfidenceEstimate> = None;
    for n in [10u32, 100, 1000] {
        let est = lib(estimate_confidence_set(&mc, n, R, SEED, EvalMode::FastOnly))?;
        let bound = lib(closedforms::gaussian_corollary_bound(n, 2.0, 1.0))?;
        let tol = 3.0 * se_floor(est.p_lower_hat, est.se_lower, R);
        if bound.value > est.p_lower_hat + tol {
            return Err(format!(
                "location n={n}: lower bound {:.4} exceeds estimate {:.4} + 3 SE",
                bound.value, est.p_lower_hat
            ));
        }
        info.push(format!(
            "location n={n}: lower bound {:.4}{} <= estimate {:.4}",
            bound.value,
            if bound.clamped { " (clamped)" } else { "" },
            est.p_lower_hat
        ));
        if n == 100 {
            est_at_100 = Some(est);
        }
    }

    // Binary-signal market: the large-deviations upper bound must not fall
    // below the estimated upper probability.
    let rich = lib(RichPriorsScenario::truncated_example(1, 0.75))?;
    let rich_mc = RichPriorsMc { scenario: rich.clone() };
    for n in [20u32, 50, 100] {
        let est = lib(estimate_confidence_set(&rich_mc, n, R, SEED, EvalMode::FastOnly))?;
        let rate = lib(rich.sanov_bound(n))?;
        let exact = lib(rich.exact_pbar(n))?;
        let tol = 3.0 * se_floor(exact, est.se_upper, R);
        if rate.bound.value < est.p_upper_hat - tol {
            return Err(format!(
                "market n={n}: upper bound {:.4} fell below estimate {:.4} - 3 SE",
                rate.bound.value, est.p_upper_hat
            ));
        }
        info.push(format!(
            "market n={n}: upper bound {:.3e}{} >= estimate {:.3e}",
            rate.bound.value,
            if rate.bound.clamped { " (clamped, vacuous)" } else { "" },
            est.p_upper_hat
        ));
    }

    // Deviation-driven lower bound with every input estimated or computed:
    // strictness margin from the solver, Lipschitz constant and payoff
    // spread from the game, expected deviation from a separate seed stream.
    let bx = lib(location.parameter_box())?;
    let game = lib(FiniteGame::coordination(bx.clone()))?;
    let strong = lib(game.action_index(0, "strong"))?;
    let truth = lib(bx.point(vec![2.0]))?;
    let limit = lib(Belief::point_mass(bx.clone(), truth.clone()))?;
    let margin = lib(solver::delta_inf(&game, &limit, 0, strong))?;
    const DEV_REPS: u64 = 2000;
    let mut total = 0.0;
    for i in 0..DEV_REPS {
        let mut rng = replication_rng(SEED ^ 0xE0DE, i);
        let data = lib(sample_location_dataset(&location, 100, &mut rng))?;
        total += lib(location.sup_deviation(&data))?;
    }
    let expected_dev = total / DEV_REPS as f64;
    let spread = lib(closedforms::payoff_spread(&game, std::slice::from_ref(&truth)))?;
    let inputs = lib(BoundInputs::new(
        margin.value,
        game.lipschitz_k(),
        bx.diameter(),
        spread,
        expected_dev,
        1.0,
    ))?;
    let markov = closedforms::markov_lower_bound(&inputs);
    let est = est_at_100.expect("n=100 ran above");
    let tol = 3.0 * se_floor(est.p_lower_hat, est.se_lower, R);
    if markov.value > est.p_lower_hat + tol {
        return Err(format!(
            "deviation bound {:.4} exceeds location estimate {:.4} + 3 SE at n=100",
            markov.value, est.p_lower_hat
        ));
    }
    info.push(format!(
        "deviation bound at n=100: margin {:.6}, E[sup dev] {:.4}, bound {:.4}{} <= estimate {:.4}",
        margin.value,
        expected_dev,
        markov.value,
        if markov.clamped { " (clamped, vacuous)" } else { "" },
        est.p_lower_hat
    ));
    Ok(info)
}

// --- criterion 6 -----------------------------------------------------------

fn c6_solver_characterization() -> Result<Vec<String>, String> {
    let bx = lib(ParameterBox::new(vec![0.0], vec![4.0]))?;
    let game = lib(FiniteGame::coordination(bx.clone()))?;
    let strong = lib(game.action_index(0, "strong"))?;
    let mut rng = ChaCha12Rng::seed_from_u64(600);

    // Point-mass belief sets: the strict action survives for some belief
    // exactly when some mass point reaches 1, and for all beliefs exactly
    // when every mass point does.  Mass points near the tie at 1 are
    // excluded so the comparison is exact.
    for trial in 0..100 {
        let count = 1 + (rand_core::RngCore::next_u32(&mut rng) % 3) as usize;
        let betas: Vec<f64> = (0..count)
            .map(|_| loop {
                let b = 4.0 * gauss::uniform01(&mut rng);
                if !(0.99..=1.01).contains(&b) {
                    break b;
                }
            })
            .collect();
        let members: Result<Vec<Belief>, String> = betas
            .iter()
            .map(|&b| lib(bx.point(vec![b])).and_then(|p| lib(Belief::point_mass(bx.clone(), p))))
            .collect();
        let beliefs = lib(BeliefSet::new(members?))?;
        let max = betas.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let min = betas.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let weak_sets = lib(weak_rationalizable(&game, &beliefs))?;
        let result = lib(strong_rationalizable(&game, &beliefs))?;
        for player in 0..2 {
            let weak = weak_sets[player].contains(&strong);
            if weak != (max >= 1.0) {
                return Err(format!(
                    "trial {trial}: weak={weak} but max mass point {max:.3} (betas {betas:?})"
                ));
            }
            let status = result.strong_status[player][strong];
            let want = if min >= 1.0 {
                StrongStatus::CertifiedStrong
            } else {
                StrongStatus::RefutedStrong
            };
            if status != want {
                return Err(format!(
                    "trial {trial}: status {status:?}, want {want:?} (betas {betas:?})"
                ));
            }
        }
    }

    // Strictness margin of the strict action at a point mass equals the
    // mass point minus 1.
    let mut margin_info = String::from("strictness margins:");
    for beta in [1.5, 2.0, 3.0] {
        let limit = lib(bx.point(vec![beta]).and_then(|p| Belief::point_mass(bx.clone(), p)))?;
        let margin = lib(solver::delta_inf(&game, &limit, 0, strong))?;
        if (margin.value - (beta - 1.0)).abs() > 1e-6 {
            return Err(format!(
                "margin at beta={beta} is {}, want {} within 1e-6",
                margin.value,
                beta - 1.0
            ));
        }
        margin_info.push_str(&format!(" {beta}->{:.6}", margin.value));
    }

    // Random small games: enlarging the belief set can only grow the weak
    // sets and shrink the certified sets, and certification implies weak
    // membership.
    let unit = lib(ParameterBox::new(vec![0.0], vec![1.0]))?;
    for trial in 0..500 {
        let (game, counts) = random_small_game(&mut rng, &unit)?;
        let b1 = random_belief(&mut rng, &unit, 4)?;
        let b2 = random_belief(&mut rng, &unit, 4)?;
        let small = lib(BeliefSet::new(vec![b1.clone()]))?;
        let big = lib(BeliefSet::new(vec![b1, b2]))?;
        let r_small = lib(strong_rationalizable(&game, &small))?;
        let r_big = lib(strong_rationalizable(&game, &big))?;
        for player in 0..counts.len() {
            for a in &r_small.weak_sets[player] {
                if !r_big.weak_sets[player].contains(a) {
                    return Err(format!("trial {trial}: weak set shrank for player {player}"));
                }
            }
            for (a, s) in r_big.strong_status[player].iter().enumerate() {
                if *s == StrongStatus::CertifiedStrong {
                    if !r_big.weak_sets[player].contains(&a) {
                        return Err(format!("trial {trial}: certified action {a} not weak"));
                    }
                    if r_small.strong_status[player][a] != StrongStatus::CertifiedStrong {
                        return Err(format!("trial {trial}: certification appeared on enlargement"));
                    }
                }
            }
        }
    }
    Ok(vec![
        "100 point-mass belief sets matched the threshold characterization exactly".into(),
        margin_info,
        "500 random games held elimination monotonicity and certified ⊆ weak".into(),
    ])
}

/// A random 2- or 3-player game with 2 or 3 actions per player; payoffs
/// interpolate linearly between two corner tables on a 1-d parameter box.
fn random_small_game(
    rng: &mut ChaCha12Rng,
    bx: &ParameterBox,
) -> Result<(FiniteGame, Vec<usize>), String> {
    let players = 2 + (rand_core::RngCore::next_u32(rng) % 2) as usize;
    let counts: Vec<usize> = (0..players)
        .map(|_| 2 + (rand_core::RngCore::next_u32(rng) % 2) as usize)
        .collect();
    let profiles: usize = counts.iter().product();
    let mut corner0 = vec![0.0f64; players * profiles];
    let mut corner1 = vec![0.0f64; players * profiles];
    for v in corner0.iter_mut().chain(corner1.iter_mut()) {
        *v = 4.0 * gauss::uniform01(rng) - 2.0;
    }
    let actions: Vec<Vec<String>> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (0..c).map(|a| format!("p{i}a{a}")).collect())
        .collect();
    let idx_counts = counts.clone();
    let payoff: Arc<PayoffFn> = Arc::new(move |player, profile, theta| {
        let t = theta.coords()[0];
        let mut idx = 0usize;
        for (c, &a) in idx_counts.iter().zip(profile) {
            idx = idx * c + a;
        }
        let flat = player * profiles + idx;
        (1.0 - t) * corner0[flat] + t * corner1[flat]
    });
    let game = lib(FiniteGame::new(actions, payoff, 8.0, bx.clone()))?;
    Ok((game, counts))
}

fn random_belief(
    rng: &mut ChaCha12Rng,
    bx: &ParameterBox,
    max_atoms: usize,
) -> Result<Belief, String> {
    let count = 1 + (rand_core::RngCore::next_u32(rng) as usize % max_atoms);
    let raw: Vec<(f64, f64)> = (0..count)
        .map(|_| {
            (
                bx.diameter() * gauss::uniform01(rng),
                gauss::uniform01(rng) + 0.05,
            )
        })
        .collect();
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    let atoms: Result<Vec<_>, String> = raw
        .into_iter()
        .map(|(x, w)| lib(bx.point(vec![bx.lower()[0] + x])).map(|p| (p, w / total)))
        .collect();
    lib(Belief::new(bx.clone(), atoms?))
}

// --- criterion 7 -----------------------------------------------------------

/// Largest subset mass violation `max_A [a(A) - b(A^eps)]` at a given `eps`,
/// in both directions.
fn subset_violation(d: &[Vec<f64>], wa: &[f64], wb: &[f64], eps: f64) -> f64 {
    let (na, nb) = (wa.len(), wb.len());
    let mut worst = 0.0f64;
    for mask in 0u32..(1 << na) {
        let mass_a: f64 = (0..na).filter(|i| mask >> i & 1 == 1).map(|i| wa[i]).sum();
        let nbhd: f64 = (0..nb)
            .filter(|&j| (0..na).any(|i| mask >> i & 1 == 1 && d[i][j] <= eps))
            .map(|j| wb[j])
            .sum();
        worst = worst.max(mass_a - nbhd);
    }
    for mask in 0u32..(1 << nb) {
        let mass_b: f64 = (0..nb).filter(|j| mask >> j & 1 == 1).map(|j| wb[j]).sum();
        let nbhd: f64 = (0..na)
            .filter(|&i| (0..nb).any(|j| mask >> j & 1 == 1 && d[i][j] <= eps))
            .map(|i| wa[i])
            .sum();
        worst = worst.max(mass_b - nbhd);
    }
    worst
}

/// Prokhorov distance by subset enumeration: the violation is piecewise
/// constant between sorted pairwise distances, so scan the segments.
fn prokhorov_oracle(a: &Belief, b: &Belief) -> f64 {
    let wa: Vec<f64> = a.atoms().iter().map(|(_, w)| *w).collect();
    let wb: Vec<f64> = b.atoms().iter().map(|(_, w)| *w).collect();
    let d: Vec<Vec<f64>> = a
        .atoms()
        .iter()
        .map(|(p, _)| {
            b.atoms()
                .iter()
                .map(|(q, _)| (p.coords()[0] - q.coords()[0]).abs())
                .collect()
        })
        .collect();
    let mut breaks: Vec<f64> = d.iter().flatten().copied().collect();
    breaks.push(0.0);
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    breaks.dedup();
    let mut best = f64::INFINITY;
    for (k, &start) in breaks.iter().enumerate() {
        let end = breaks.get(k + 1).copied().unwrap_or(f64::INFINITY);
        let violation = subset_violation(&d, &wa, &wb, start);
        if violation < end {
            best = best.min(start.max(violation));
        }
    }
    best
}

/// One-dimensional Wasserstein distance as the area between the CDFs.
fn wasserstein_cdf_oracle(a: &Belief, b: &Belief) -> f64 {
    let mut xs: Vec<f64> = a
        .atoms()
        .iter()
        .chain(b.atoms())
        .map(|(p, _)| p.coords()[0])
        .collect();
    xs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    xs.dedup();
    let cdf = |belief: &Belief, x: f64| -> f64 {
        belief
            .atoms()
            .iter()
            .filter(|(p, _)| p.coords()[0] <= x)
            .map(|(_, w)| w)
            .sum()
    };
    xs.windows(2)
        .map(|w| (cdf(a, w[0]) - cdf(b, w[0])).abs() * (w[1] - w[0]))
        .sum()
}

fn c7_metric_spot_checks() -> Result<Vec<String>, String> {
    let bx = lib(ParameterBox::new(vec![0.0], vec![2.0]))?;
    let xi = bx.diameter();
    let mut rng = ChaCha12Rng::seed_from_u64(700);
    let mut max_ratio = 0.0f64;
    let mut max_p_err = 0.0f64;
    let mut max_w_err = 0.0f64;
    for trial in 0..100 {
        let a = random_belief(&mut rng, &bx, 3)?;
        let b = random_belief(&mut rng, &bx, 3)?;
        let dp = lib(prokhorov_distance(&a, &b))?;
        let dw = lib(wasserstein_distance(&a, &b))?;
        if dw > xi * dp + 1e-9 {
            return Err(format!(
                "trial {trial}: transport distance {dw} exceeds {xi} * coupling distance {dp}"
            ));
        }
        if dp > 1e-9 {
            max_ratio = max_ratio.max(dw / dp);
        }
        let p_err = (dp - prokhorov_oracle(&a, &b)).abs();
        let w_err = (dw - wasserstein_cdf_oracle(&a, &b)).abs();
        if p_err > 1e-6 {
            return Err(format!("trial {trial}: coupling distance off oracle by {p_err:.2e}"));
        }
        if w_err > 1e-6 {
            return Err(format!("trial {trial}: transport distance off oracle by {w_err:.2e}"));
        }
        max_p_err = max_p_err.max(p_err);
        max_w_err = max_w_err.max(w_err);
    }
    Ok(vec![
        format!("largest transport/coupling ratio {max_ratio:.3} (cap {xi})"),
        format!("worst oracle deviations: coupling {max_p_err:.1e}, transport {max_w_err:.1e}"),
    ])
}

// --- criterion 8 -----------------------------------------------------------

fn c8_limit_trends() -> Result<Vec<String>, String> {
    let pair = lib(closedforms::coord_closed_form(2000, 2.0, 10.0, 0.05))?;
    if pair.p_lower <= 0.999 || pair.p_upper <= 0.999 {
        return Err(format!(
            "coordination pair at n=2000 is [{}, {}], want both > 0.999",
            pair.p_lower, pair.p_upper
        ));
    }
    let wide = lib(RichPriorsScenario::new(
        0.75,
        1,
        0.75,
        vec![0.001, 0.999],
        vec![0.501, 0.999],
    ))?;
    let mc = RichPriorsMc { scenario: wide };
    let est = lib(estimate_confidence_set(&mc, 200, 2000, SEED, EvalMode::FastOnly))?;
    if est.p_upper_hat < 0.9 {
        return Err(format!(
            "wide-grid market upper estimate at n=200 is {}, want >= 0.9",
            est.p_upper_hat
        ));
    }
    Ok(vec![
        format!("coordination pair at n=2000: [{:.6}, {:.6}]", pair.p_lower, pair.p_upper),
        format!("wide-grid market upper estimate at n=200: {:.4}", est.p_upper_hat),
    ])
}

// --- criterion 9 -----------------------------------------------------------

fn c9_cli_reproducibility() -> Result<Vec<String>, String> {
    let config = format!(
        "{}/tests/fixtures/coordination_small.toml",
        env!("CARGO_MANIFEST_DIR")
    );
    let run = |extra: &[&str]| -> Result<Vec<u8>, String> {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_ratconf"));
        cmd.args(["run", "--config", &config]).args(extra);
        let out = cmd.output().map_err(|e| format!("spawn failed: {e}"))?;
        if !out.status.success() {
            return Err(format!("run failed: {}", String::from_utf8_lossy(&out.stderr)));
        }
        Ok(out.stdout)
    };
    let first = run(&[])?;
    let second = run(&[])?;
    if first != second {
        return Err("two identical runs differed".into());
    }
    let one = run(&["--threads", "1"])?;
    let four = run(&["--threads", "4"])?;
    if one != four {
        return Err("outputs differ between --threads 1 and --threads 4".into());
    }
    if first != one {
        return Err("threaded output differs from default".into());
    }
    Ok(vec![format!("4 runs, {} bytes each, byte-identical", first.len())])
}

// --- runner ----------------------------------------------------------------

#[test]
fn acceptance() {
    let criteria: [(usize, &str, Criterion); 9] = [
        (1, "coordination estimates match the exact pair", c1_coordination_consistency),
        (2, "trade estimates match the exact upper, lower is 0", c2_trade_consistency),
        (3, "anchor values hold and the 0.08 figure stays refuted", c3_narrative_anchors),
        (4, "closed forms are monotone in m, n, and sigma", c4_closed_form_monotonicity),
        (5, "analytic bounds bracket the estimates", c5_bound_validation),
        (6, "solver matches thresholds, margins, and monotonicity", c6_solver_characterization),
        (7, "metrics match oracles and the comparison constant", c7_metric_spot_checks),
        (8, "large-n trends appear at finite n", c8_limit_trends),
        (9, "CLI output is byte-identical across runs and threads", c9_cli_reproducibility),
    ];
    let mut failures = Vec::new();
    for (num, name, run) in criteria {
        match run() {
            Ok(info) => {
                println!("criterion {num}: PASS ({name})");
                for line in info {
                    println!("    {line}");
                }
            }
            Err(msg) => {
                println!("criterion {num}: FAIL ({name})");
                println!("    {msg}");
                failures.push(format!("criterion {num} ({name}): {msg}"));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "{} acceptance criteria failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}
