//! Versioned experiment reports and their CSV and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write;

use ginprod_core::stats::BinomialInterval;
use ginprod_core::EnsembleSpec;
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "report_v1";
pub const SIDECAR_SCHEMA: &str = "sidecar_v1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// What an estimate is compared with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reference {
    Exact { value: f64 },
    /// Asymptotic or statistical acceptance band.
    Band { lower: f64, upper: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub estimate: f64,
    pub reference: Reference,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<BinomialInterval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl Quantity {
    pub fn exact(estimate: f64, value: f64) -> Self {
        Self {
            estimate,
            reference: Reference::Exact { value },
            statistic: None,
            p_value: None,
            interval: None,
            pass: None,
        }
    }

    pub fn banded(estimate: f64, lower: f64, upper: f64) -> Self {
        Self {
            pass: Some((lower..=upper).contains(&estimate)),
            ..Self::exact(estimate, 0.0)
        }
        .with_reference(Reference::Band { lower, upper })
    }

    fn with_reference(mut self, reference: Reference) -> Self {
        self.reference = reference;
        self
    }

    /// Passes when the relative deviation from the exact reference is within `tol`.
    pub fn within(estimate: f64, value: f64, tol: f64) -> Self {
        let scale = value.abs().max(f64::MIN_POSITIVE);
        Self { pass: Some((estimate - value).abs() <= tol * scale), ..Self::exact(estimate, value) }
    }
}

/// Plot-ready table; `None` cells are written as `NA` in CSV and `null` in JSON.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| format_cell(*c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip decimal form; always '.' as separator.
pub fn format_cell(cell: Option<f64>) -> String {
    match cell {
        None => "NA".into(),
        Some(v) if v.is_nan() => "NaN".into(),
        Some(v) if v == f64::INFINITY => "inf".into(),
        Some(v) if v == f64::NEG_INFINITY => "-inf".into(),
        Some(v) => format!("{v:?}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub master_seed: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub experiment_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<EnsembleSpec>,
    pub quantities: BTreeMap<String, Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub seeds: Seeds,
    /// Wall time, recorded only on request so that reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    pub tool_version: String,
}

impl ExperimentReport {
    pub fn new(experiment_id: impl Into<String>, spec: Option<EnsembleSpec>, seeds: Seeds) -> Self {
        Self {
            schema: REPORT_SCHEMA.into(),
            experiment_id: experiment_id.into(),
            spec,
            quantities: BTreeMap::new(),
            table: None,
            seeds,
            runtime_ms: None,
            tool_version: TOOL_VERSION.into(),
        }
    }

    pub fn insert(&mut self, name: impl Into<String>, q: Quantity) {
        self.quantities.insert(name.into(), q);
    }

    /// False if any quantity carries a failed check.
    pub fn passed(&self) -> bool {
        self.quantities.values().all(|q| q.pass != Some(false))
    }

    pub fn failures(&self) -> Vec<&str> {
        self.quantities.iter().filter(|(_, q)| q.pass == Some(false)).map(|(k, _)| k.as_str()).collect()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// The table if present, else one row per quantity.
    pub fn to_csv(&self) -> String {
        if let Some(t) = &self.table {
            return t.to_csv();
        }
        let mut out = String::from("quantity,estimate,reference,lower,upper,statistic,p_value,pass\n");
        for (name, q) in &self.quantities {
            let (exact, lower, upper) = match q.reference {
                Reference::Exact { value } => (Some(value), None, None),
                Reference::Band { lower, upper } => (None, Some(lower), Some(upper)),
            };
            let pass = match q.pass {
                Some(true) => "true",
                Some(false) => "false",
                None => "NA",
            };
            let _ = writeln!(
                out,
                "{name},{},{},{},{},{},{},{pass}",
                format_cell(Some(q.estimate)),
                format_cell(exact),
                format_cell(lower),
                format_cell(upper),
                format_cell(q.statistic),
                format_cell(q.p_value),
            );
        }
        out
    }
}

/// Everything needed to repeat a CLI run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSidecar {
    pub schema: String,
    pub command: String,
    pub argv: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<EnsembleSpec>,
    pub seed: u64,
    pub workers: usize,
    pub tol: f64,
    pub tool_version: String,
}
