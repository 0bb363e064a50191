//! Experiment execution: expand a validated config into result rows.

use serde::Serialize;

use ratconf::closedforms;
use ratconf::confidence::estimate_confidence_set;

use crate::config::{CellKind, ExperimentConfig, OutputKind};
use crate::{CliError, CliResult};

/// One emitted row: a cell at one dataset size, with whichever output
/// columns the config requested filled in.  Field order here fixes the CSV
/// column order and the JSON key order.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    /// Cell identifier, including any sweep suffix.
    pub scenario_id: String,
    /// Dataset size.
    pub n: u32,
    /// Monte Carlo estimate of the strong-rationalizability probability.
    pub p_lower_hat: Option<f64>,
    /// Monte Carlo estimate of the weak-rationalizability probability.
    pub p_upper_hat: Option<f64>,
    /// Binomial standard error of `p_lower_hat`.
    pub se_lower: Option<f64>,
    /// Binomial standard error of `p_upper_hat`.
    pub se_upper: Option<f64>,
    /// Closed-form lower probability.
    pub p_lower_cf: Option<f64>,
    /// Closed-form upper probability.
    pub p_upper_cf: Option<f64>,
    /// Analytic lower bound before clamping.
    pub bound_lower_raw: Option<f64>,
    /// Analytic lower bound clamped into [0, 1].
    pub bound_lower_value: Option<f64>,
    /// Whether clamping changed the lower bound.
    pub bound_lower_clamped: Option<bool>,
    /// Analytic upper bound before clamping.
    pub bound_upper_raw: Option<f64>,
    /// Analytic upper bound clamped into [0, 1].
    pub bound_upper_value: Option<f64>,
    /// Whether clamping changed the upper bound.
    pub bound_upper_clamped: Option<bool>,
    /// Fraction of replications with no certificate either way.
    pub indeterminate_rate: Option<f64>,
    /// Replications behind the Monte Carlo columns.
    pub replications: u32,
    /// Master seed the replication streams derive from.
    pub master_seed: u64,
}

impl ResultRow {
    fn empty(scenario_id: &str, n: u32, replications: u32, master_seed: u64) -> ResultRow {
        ResultRow {
            scenario_id: scenario_id.to_string(),
            n,
            p_lower_hat: None,
            p_upper_hat: None,
            se_lower: None,
            se_upper: None,
            p_lower_cf: None,
            p_upper_cf: None,
            bound_lower_raw: None,
            bound_lower_value: None,
            bound_lower_clamped: None,
            bound_upper_raw: None,
            bound_upper_value: None,
            bound_upper_clamped: None,
            indeterminate_rate: None,
            replications,
            master_seed,
        }
    }
}

fn numeric(e: ratconf::Error) -> CliError {
    CliError::Numeric(e)
}

/// Run every cell of the config over the n-grid, in config order.
///
/// # Errors
/// Returns [`CliError::Numeric`] when a sampler, solver, or closed form
/// rejects its inputs at runtime, including cross-check disagreements.
pub fn run_config(config: &ExperimentConfig) -> CliResult<Vec<ResultRow>> {
    let mut rows = Vec::with_capacity(config.cells.len() * config.n_grid.len());
    for cell in &config.cells {
        for &n in &config.n_grid {
            let mut row = ResultRow::empty(&cell.id, n, config.replications, config.master_seed);
            for output in &config.outputs {
                match output {
                    OutputKind::Mc => {
                        let est = estimate_confidence_set(
                            cell.kind.adapter(),
                            n,
                            config.replications,
                            config.master_seed,
                            config.mode,
                        )
                        .map_err(numeric)?;
                        row.p_lower_hat = Some(est.p_lower_hat);
                        row.p_upper_hat = Some(est.p_upper_hat);
                        row.se_lower = Some(est.se_lower);
                        row.se_upper = Some(est.se_upper);
                        row.indeterminate_rate = Some(est.indeterminate_rate);
                    }
                    OutputKind::ClosedForm => {
                        let (lo, hi) = closed_form_pair(&cell.kind, n)?;
                        row.p_lower_cf = Some(lo);
                        row.p_upper_cf = Some(hi);
                    }
                    OutputKind::Bounds => fill_bounds(&mut row, &cell.kind, n)?,
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// The closed-form pair for one cell.  The trade environments admit no
/// strong rationalization of entry, so their lower probability is exactly 0.
fn closed_form_pair(kind: &CellKind, n: u32) -> CliResult<(f64, f64)> {
    match kind {
        CellKind::Trade(mc) => Ok((0.0, mc.scenario.closed_form_pbar(n).map_err(numeric)?)),
        CellKind::Coordination(mc) => {
            let pair = mc.scenario.closed_form(n).map_err(numeric)?;
            Ok((pair.p_lower, pair.p_upper))
        }
        CellKind::RichPriors(mc) => Ok((0.0, mc.scenario.exact_pbar(n).map_err(numeric)?)),
        CellKind::Location(_) => Err(CliError::Config(
            "closed_form output is not available for gaussian_location".into(),
        )),
    }
}

fn fill_bounds(row: &mut ResultRow, kind: &CellKind, n: u32) -> CliResult<()> {
    match kind {
        CellKind::Location(mc) => {
            let b = closedforms::gaussian_corollary_bound(n, mc.scenario.beta(), mc.scenario.eta())
                .map_err(numeric)?;
            row.bound_lower_raw = Some(b.raw);
            row.bound_lower_value = Some(b.value);
            row.bound_lower_clamped = Some(b.clamped);
            Ok(())
        }
        CellKind::RichPriors(mc) => {
            let rate = mc.scenario.sanov_bound(n).map_err(numeric)?;
            row.bound_upper_raw = Some(rate.bound.raw);
            row.bound_upper_value = Some(rate.bound.value);
            row.bound_upper_clamped = Some(rate.bound.clamped);
            Ok(())
        }
        _ => Err(CliError::Config(
            "bounds output is not available for this scenario".into(),
        )),
    }
}
