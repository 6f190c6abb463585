use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use guesslab::{LogBase, OrderParam};
use serde::Serialize;
use serde_json::Value;

use crate::args::{Format, GlobalArgs};
use crate::error::CliError;

/// Everything that determines a report; embedded verbatim in JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    pub log_base: LogBase,
    pub tol: f64,
    pub seed: u64,
    pub inputs: BTreeMap<&'static str, PathBuf>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<&'static str, Value>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(g: &GlobalArgs, command: &'static str, subcommand: Option<&'static str>) -> Self {
        RunConfig {
            command,
            subcommand,
            alpha: g.alpha,
            rho: g.rho,
            log_base: g.log_base,
            tol: g.tol,
            seed: g.seed,
            inputs: BTreeMap::new(),
            params: BTreeMap::new(),
            output: g.output.clone(),
            format: g.format,
        }
    }

    pub fn input(&mut self, name: &'static str, path: &Path) -> &mut Self {
        self.inputs.insert(name, path.to_path_buf());
        self
    }

    pub fn param(&mut self, name: &'static str, value: impl Serialize) -> &mut Self {
        self.params.insert(name, serde_json::to_value(value).expect("plain data serializes"));
        self
    }

    pub fn order(&self) -> Result<OrderParam, CliError> {
        let op = match (self.alpha, self.rho) {
            (Some(a), None) => OrderParam::from_alpha(a)?,
            (None, Some(r)) => OrderParam::from_rho(r)?,
            _ => return Err(CliError::Usage("exactly one of --alpha or --rho is required".into())),
        };
        Ok(op)
    }

    /// A value computed in bits, expressed in the configured base.
    pub fn log_value(&self, bits: f64) -> Value {
        number(self.log_base.from_bits(bits))
    }
}

/// JSON number, or `"inf"` / `"-inf"` / `"nan"` for non-finite values.
pub fn number(v: f64) -> Value {
    if v.is_finite() {
        Value::from(v)
    } else if v.is_nan() {
        Value::from("nan")
    } else if v > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}
