//! Result serialization.
//!
//! CSV output starts with a `# ratconf <version>` comment line, then a
//! header, then one record per row.  Floats are printed with 17 significant
//! digits so parsing them back reproduces the exact bit pattern; empty
//! fields mean the column was not requested.  JSON output is a plain array
//! of row objects with `null` for absent columns.

use std::io;

use crate::run::ResultRow;
use crate::CliResult;

/// Column names, in `ResultRow` field order.
pub const COLUMNS: [&str; 17] = [
    "scenario_id",
    "n",
    "p_lower_hat",
    "p_upper_hat",
    "se_lower",
    "se_upper",
    "p_lower_cf",
    "p_upper_cf",
    "bound_lower_raw",
    "bound_lower_value",
    "bound_lower_clamped",
    "bound_upper_raw",
    "bound_upper_value",
    "bound_upper_clamped",
    "indeterminate_rate",
    "replications",
    "master_seed",
];

/// Output format for the `run` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Comma-separated values with a version comment and header.
    Csv,
    /// A JSON array of row objects.
    Json,
}

fn float_field(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.16e}"))
}

fn bool_field(v: Option<bool>) -> String {
    v.map_or_else(String::new, |b| b.to_string())
}

/// Quote a field when it contains a comma, quote, or newline.
fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn row_fields(row: &ResultRow) -> Vec<String> {
    vec![
        row.scenario_id.clone(),
        row.n.to_string(),
        float_field(row.p_lower_hat),
        float_field(row.p_upper_hat),
        float_field(row.se_lower),
        float_field(row.se_upper),
        float_field(row.p_lower_cf),
        float_field(row.p_upper_cf),
        float_field(row.bound_lower_raw),
        float_field(row.bound_lower_value),
        bool_field(row.bound_lower_clamped),
        float_field(row.bound_upper_raw),
        float_field(row.bound_upper_value),
        bool_field(row.bound_upper_clamped),
        float_field(row.indeterminate_rate),
        row.replications.to_string(),
        row.master_seed.to_string(),
    ]
}

/// Write rows as CSV.
///
/// # Errors
/// Propagates write failures.
pub fn write_csv<W: io::Write>(out: &mut W, rows: &[ResultRow]) -> CliResult<()> {
    writeln!(out, "# ratconf {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "{}", COLUMNS.join(","))?;
    for row in rows {
        let fields: Vec<String> = row_fields(row).iter().map(|f| csv_escape(f)).collect();
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Write rows as a pretty-printed JSON array.
///
/// # Errors
/// Propagates write and serialization failures.
pub fn write_json<W: io::Write>(out: &mut W, rows: &[ResultRow]) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, rows)
        .map_err(|e| crate::CliError::Io(io::Error::other(e)))?;
    writeln!(out)?;
    Ok(())
}
