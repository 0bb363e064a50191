//! Declarative experiment configuration.
//!
//! A config file has two tables.  `[experiment]` fixes the run plan: id,
//! master seed, replication count, ascending n-grid, requested outputs, and
//! the evaluation mode.  `[scenario]` picks one environment by `kind` and
//! supplies its parameters; `m_grid` (trade) or `sigma_grid` (coordination)
//! expands the config into one cell per grid value.  Everything the run
//! produces is a pure function of these bytes plus an optional seed
//! override.

use serde::Deserialize;

use ratconf::confidence::{
    CoordinationMc, EvalMode, LocationMc, MonteCarloScenario, RichPriorsMc, TradeMc,
};
use ratconf::scenarios::{
    CoordinationScenario, DisagreementChecker, GaussianLocationScenario, RichPriorsScenario,
    TradeScenario,
};

use crate::{CliError, CliResult};

/// Which result columns a run fills in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    /// Monte Carlo estimates with standard errors.
    Mc,
    /// Closed-form confidence pair.
    ClosedForm,
    /// Analytic lower or upper bound, whichever the scenario admits.
    Bounds,
}

/// One scenario parameterization to run over the n-grid.
#[derive(Debug)]
pub struct Cell {
    /// Identifier emitted in the scenario_id column.
    pub id: String,
    /// The environment bound to its target action and rule set.
    pub kind: CellKind,
}

/// Scenario dispatch for a cell.
#[derive(Debug)]
pub enum CellKind {
    /// Rectangle-classification market, entry action.
    Trade(TradeMc),
    /// Lockdown coordination game, strict action.
    Coordination(CoordinationMc),
    /// Binary-signal market with a prior grid, entry action.
    RichPriors(RichPriorsMc),
    /// Gaussian location learning, strict action.
    Location(LocationMc),
}

impl CellKind {
    /// The Monte Carlo adapter for this cell.
    #[must_use]
    pub fn adapter(&self) -> &dyn MonteCarloScenario {
        match self {
            CellKind::Trade(mc) => mc,
            CellKind::Coordination(mc) => mc,
            CellKind::RichPriors(mc) => mc,
            CellKind::Location(mc) => mc,
        }
    }
}

/// A validated experiment plan.
#[derive(Debug)]
pub struct ExperimentConfig {
    /// Base identifier for emitted rows.
    pub id: String,
    /// Master seed all replication streams derive from.
    pub master_seed: u64,
    /// Replications per cell and sample size.
    pub replications: u32,
    /// Ascending dataset sizes.
    pub n_grid: Vec<u32>,
    /// Requested outputs, in config order.
    pub outputs: Vec<OutputKind>,
    /// Evaluation route for the Monte Carlo engine.
    pub mode: EvalMode,
    /// Expanded scenario cells, in sweep order.
    pub cells: Vec<Cell>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: RawExperiment,
    scenario: RawScenario,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    id: String,
    master_seed: u64,
    replications: u32,
    n_grid: Vec<u32>,
    outputs: Vec<String>,
    mode: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    kind: String,
    action: Option<String>,
    // trade
    m: Option<u32>,
    m_grid: Option<Vec<u32>>,
    a: Option<f64>,
    rlo: Option<Vec<f64>>,
    rhi: Option<Vec<f64>>,
    price: Option<f64>,
    cost: Option<f64>,
    checker: Option<String>,
    // coordination and gaussian location
    beta: Option<f64>,
    sigma: Option<f64>,
    sigma_grid: Option<Vec<f64>>,
    alpha: Option<f64>,
    eta: Option<f64>,
    grid_count: Option<u32>,
    // rich priors
    q_star: Option<f64>,
    v: Option<u8>,
    pi_grid: Option<Vec<f64>>,
    q_grid: Option<Vec<f64>>,
}

fn cfg_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn require<T: Copy>(field: Option<T>, kind: &str, name: &str) -> CliResult<T> {
    field.ok_or_else(|| cfg_err(format!("scenario kind '{kind}' requires field '{name}'")))
}

fn require_vec<T: Clone>(field: &Option<Vec<T>>, kind: &str, name: &str) -> CliResult<Vec<T>> {
    field
        .clone()
        .ok_or_else(|| cfg_err(format!("scenario kind '{kind}' requires field '{name}'")))
}

fn reject_fields(kind: &str, present: &[(&str, bool)]) -> CliResult<()> {
    for (name, is_set) in present {
        if *is_set {
            return Err(cfg_err(format!(
                "field '{name}' does not apply to scenario kind '{kind}'"
            )));
        }
    }
    Ok(())
}

fn check_action(given: &Option<String>, kind: &str, canonical: &str) -> CliResult<()> {
    if let Some(a) = given {
        if a != canonical {
            return Err(cfg_err(format!(
                "scenario kind '{kind}' supports only action '{canonical}', got '{a}'"
            )));
        }
    }
    Ok(())
}

fn numeric_to_config(context: &str, e: ratconf::Error) -> CliError {
    cfg_err(format!("{context}: {e}"))
}

impl ExperimentConfig {
    /// Parse and validate a TOML config string.
    ///
    /// # Errors
    /// Returns [`CliError::Config`] with a field or line diagnostic for any
    /// parse or validation failure.
    pub fn from_toml_str(text: &str) -> CliResult<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| cfg_err(e.to_string().trim().to_string()))?;
        let exp = raw.experiment;
        if exp.replications == 0 {
            return Err(cfg_err("experiment.replications must be >= 1"));
        }
        if exp.n_grid.is_empty() {
            return Err(cfg_err("experiment.n_grid must be nonempty"));
        }
        if exp.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(cfg_err("experiment.n_grid must be strictly ascending"));
        }
        if exp.outputs.is_empty() {
            return Err(cfg_err("experiment.outputs must request at least one output"));
        }
        let mut outputs = Vec::with_capacity(exp.outputs.len());
        for o in &exp.outputs {
            outputs.push(match o.as_str() {
                "mc" => OutputKind::Mc,
                "closed_form" => OutputKind::ClosedForm,
                "bounds" => OutputKind::Bounds,
                other => {
                    return Err(cfg_err(format!(
                        "unknown output '{other}' (expected mc, closed_form, or bounds)"
                    )))
                }
            });
        }
        let mode = match exp.mode.as_deref() {
            None | Some("fast") => EvalMode::FastOnly,
            Some("generic") => EvalMode::GenericOnly,
            Some("cross_check") => EvalMode::CrossCheck,
            Some(other) => {
                return Err(cfg_err(format!(
                    "unknown mode '{other}' (expected fast, generic, or cross_check)"
                )))
            }
        };
        let cells = build_cells(&exp.id, &raw.scenario)?;
        let config = ExperimentConfig {
            id: exp.id,
            master_seed: exp.master_seed,
            replications: exp.replications,
            n_grid: exp.n_grid,
            outputs,
            mode,
            cells,
        };
        config.check_outputs_supported()?;
        config.check_n_grid()?;
        Ok(config)
    }

    fn check_outputs_supported(&self) -> CliResult<()> {
        for cell in &self.cells {
            for o in &self.outputs {
                let ok = match (o, &cell.kind) {
                    (OutputKind::Mc, _) => true,
                    (OutputKind::ClosedForm, CellKind::Location(_)) => false,
                    (OutputKind::ClosedForm, _) => true,
                    (OutputKind::Bounds, CellKind::RichPriors(_) | CellKind::Location(_)) => true,
                    (OutputKind::Bounds, _) => false,
                };
                if !ok {
                    return Err(cfg_err(format!(
                        "output '{}' is not available for cell '{}'",
                        match o {
                            OutputKind::Mc => "mc",
                            OutputKind::ClosedForm => "closed_form",
                            OutputKind::Bounds => "bounds",
                        },
                        cell.id
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_n_grid(&self) -> CliResult<()> {
        for cell in &self.cells {
            let min = cell.kind.adapter().min_n();
            if let Some(&n) = self.n_grid.iter().find(|&&n| n < min) {
                return Err(cfg_err(format!(
                    "n = {n} is below the minimum {min} for cell '{}'",
                    cell.id
                )));
            }
        }
        Ok(())
    }
}

fn build_cells(base_id: &str, s: &RawScenario) -> CliResult<Vec<Cell>> {
    match s.kind.as_str() {
        "trade" => build_trade_cells(base_id, s),
        "coordination" => build_coordination_cells(base_id, s),
        "rich_priors" => build_richpriors_cell(base_id, s),
        "gaussian_location" => build_location_cell(base_id, s),
        other => Err(cfg_err(format!(
            "unknown scenario kind '{other}' (expected trade, coordination, rich_priors, or gaussian_location)"
        ))),
    }
}

fn build_trade_cells(base_id: &str, s: &RawScenario) -> CliResult<Vec<Cell>> {
    let kind = "trade";
    check_action(&s.action, kind, "enter")?;
    reject_fields(
        kind,
        &[
            ("beta", s.beta.is_some()),
            ("sigma", s.sigma.is_some()),
            ("sigma_grid", s.sigma_grid.is_some()),
            ("alpha", s.alpha.is_some()),
            ("eta", s.eta.is_some()),
            ("grid_count", s.grid_count.is_some()),
            ("q_star", s.q_star.is_some()),
            ("v", s.v.is_some()),
            ("pi_grid", s.pi_grid.is_some()),
            ("q_grid", s.q_grid.is_some()),
        ],
    )?;
    let price = require(s.price, kind, "price")?;
    let cost = s.cost.unwrap_or(price * (1.0 - price));
    let checker = match s.checker.as_deref() {
        None | Some("per_dimension") => DisagreementChecker::PerDimension,
        Some("bounding_box") => DisagreementChecker::BoundingBox,
        Some(other) => {
            return Err(cfg_err(format!(
                "unknown checker '{other}' (expected per_dimension or bounding_box)"
            )))
        }
    };
    let rect_given = s.rlo.is_some() || s.rhi.is_some();
    let symmetric_given = s.a.is_some();
    if rect_given && (symmetric_given || s.m.is_some() || s.m_grid.is_some()) {
        return Err(cfg_err(
            "trade scenario takes either rlo/rhi or a with m/m_grid, not both",
        ));
    }
    if rect_given {
        let rlo = require_vec(&s.rlo, kind, "rlo")?;
        let rhi = require_vec(&s.rhi, kind, "rhi")?;
        let scenario = TradeScenario::new(rlo, rhi, price, cost)
            .map_err(|e| numeric_to_config("trade scenario", e))?;
        return Ok(vec![Cell {
            id: base_id.to_string(),
            kind: CellKind::Trade(TradeMc { scenario, checker }),
        }]);
    }
    let a = require(s.a, kind, "a")?;
    let ms: Vec<u32> = match (&s.m_grid, s.m) {
        (Some(grid), None) => {
            if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(cfg_err("m_grid must be nonempty and strictly ascending"));
            }
            grid.clone()
        }
        (None, Some(m)) => vec![m],
        (None, None) => return Err(cfg_err("trade scenario requires m or m_grid")),
        (Some(_), Some(_)) => return Err(cfg_err("give m or m_grid, not both")),
    };
    let sweep = ms.len() > 1;
    ms.into_iter()
        .map(|m| {
            let scenario = TradeScenario::symmetric(m, a, price, cost)
                .map_err(|e| numeric_to_config("trade scenario", e))?;
            Ok(Cell {
                id: if sweep {
                    format!("{base_id}[m={m}]")
                } else {
                    base_id.to_string()
                },
                kind: CellKind::Trade(TradeMc { scenario, checker }),
            })
        })
        .collect()
}

fn build_coordination_cells(base_id: &str, s: &RawScenario) -> CliResult<Vec<Cell>> {
    let kind = "coordination";
    check_action(&s.action, kind, "strong")?;
    reject_fields(
        kind,
        &[
            ("m", s.m.is_some()),
            ("m_grid", s.m_grid.is_some()),
            ("a", s.a.is_some()),
            ("rlo", s.rlo.is_some()),
            ("rhi", s.rhi.is_some()),
            ("price", s.price.is_some()),
            ("cost", s.cost.is_some()),
            ("checker", s.checker.is_some()),
            ("eta", s.eta.is_some()),
            ("grid_count", s.grid_count.is_some()),
            ("q_star", s.q_star.is_some()),
            ("v", s.v.is_some()),
            ("pi_grid", s.pi_grid.is_some()),
            ("q_grid", s.q_grid.is_some()),
        ],
    )?;
    let beta = require(s.beta, kind, "beta")?;
    let alpha = require(s.alpha, kind, "alpha")?;
    let sigmas: Vec<f64> = match (&s.sigma_grid, s.sigma) {
        (Some(grid), None) => {
            if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(cfg_err("sigma_grid must be nonempty and strictly ascending"));
            }
            grid.clone()
        }
        (None, Some(sigma)) => vec![sigma],
        (None, None) => return Err(cfg_err("coordination scenario requires sigma or sigma_grid")),
        (Some(_), Some(_)) => return Err(cfg_err("give sigma or sigma_grid, not both")),
    };
    let sweep = sigmas.len() > 1;
    sigmas
        .into_iter()
        .map(|sigma| {
            let scenario = CoordinationScenario::new(beta, sigma, alpha)
                .map_err(|e| numeric_to_config("coordination scenario", e))?;
            Ok(Cell {
                id: if sweep {
                    format!("{base_id}[sigma={sigma}]")
                } else {
                    base_id.to_string()
                },
                kind: CellKind::Coordination(CoordinationMc { scenario }),
            })
        })
        .collect()
}

fn build_richpriors_cell(base_id: &str, s: &RawScenario) -> CliResult<Vec<Cell>> {
    let kind = "rich_priors";
    check_action(&s.action, kind, "enter")?;
    reject_fields(
        kind,
        &[
            ("m", s.m.is_some()),
            ("m_grid", s.m_grid.is_some()),
            ("a", s.a.is_some()),
            ("rlo", s.rlo.is_some()),
            ("rhi", s.rhi.is_some()),
            ("cost", s.cost.is_some()),
            ("checker", s.checker.is_some()),
            ("beta", s.beta.is_some()),
            ("sigma", s.sigma.is_some()),
            ("sigma_grid", s.sigma_grid.is_some()),
            ("alpha", s.alpha.is_some()),
            ("eta", s.eta.is_some()),
            ("grid_count", s.grid_count.is_some()),
        ],
    )?;
    let scenario = RichPriorsScenario::new(
        require(s.q_star, kind, "q_star")?,
        require(s.v, kind, "v")?,
        require(s.price, kind, "price")?,
        require_vec(&s.pi_grid, kind, "pi_grid")?,
        require_vec(&s.q_grid, kind, "q_grid")?,
    )
    .map_err(|e| numeric_to_config("rich_priors scenario", e))?;
    Ok(vec![Cell {
        id: base_id.to_string(),
        kind: CellKind::RichPriors(RichPriorsMc { scenario }),
    }])
}

fn build_location_cell(base_id: &str, s: &RawScenario) -> CliResult<Vec<Cell>> {
    let kind = "gaussian_location";
    check_action(&s.action, kind, "strong")?;
    reject_fields(
        kind,
        &[
            ("m", s.m.is_some()),
            ("m_grid", s.m_grid.is_some()),
            ("a", s.a.is_some()),
            ("rlo", s.rlo.is_some()),
            ("rhi", s.rhi.is_some()),
            ("price", s.price.is_some()),
            ("cost", s.cost.is_some()),
            ("checker", s.checker.is_some()),
            ("sigma", s.sigma.is_some()),
            ("sigma_grid", s.sigma_grid.is_some()),
            ("alpha", s.alpha.is_some()),
            ("q_star", s.q_star.is_some()),
            ("v", s.v.is_some()),
            ("pi_grid", s.pi_grid.is_some()),
            ("q_grid", s.q_grid.is_some()),
        ],
    )?;
    let scenario = GaussianLocationScenario::new(
        require(s.beta, kind, "beta")?,
        require(s.eta, kind, "eta")?,
        require(s.grid_count, kind, "grid_count")?,
    )
    .map_err(|e| numeric_to_config("gaussian_location scenario", e))?;
    Ok(vec![Cell {
        id: base_id.to_string(),
        kind: CellKind::Location(LocationMc { scenario }),
    }])
}
