use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values of `α` closer than this to 1 are rejected as ill-conditioned.
pub const ALPHA_ONE_GUARD: f64 = 1e-6;

/// The order pair `(α, ρ)` with `α = 1/(1+ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParam {
    alpha: f64,
    rho: f64,
}

impl OrderParam {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidOrder(format!("alpha must be positive and finite, got {alpha}")));
        }
        if (alpha - 1.0).abs() < ALPHA_ONE_GUARD {
            return Err(Error::InvalidOrder(format!(
                "alpha = {alpha} is within {ALPHA_ONE_GUARD:e} of 1; use the KL limit instead"
            )));
        }
        Ok(OrderParam { alpha, rho: (1.0 - alpha) / alpha })
    }

    pub fn from_rho(rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > -1.0 && rho != 0.0) {
            return Err(Error::InvalidOrder(format!("rho must lie in (-1, inf) minus 0, got {rho}")));
        }
        let op = OrderParam::from_alpha(1.0 / (1.0 + rho))?;
        Ok(OrderParam { rho, ..op })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `sign(ρ)`, equal to `sign(1 − α)`.
    pub fn sign(&self) -> f64 {
        if self.rho > 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Guessing-only operations need `ρ > 0`.
    pub fn require_positive_rho(&self) -> Result<()> {
        if self.rho > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidOrder(format!("rho > 0 required, got {}", self.rho)))
        }
    }
}

/// Logarithm base for reported values. Library functions report bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Bits,
    #[serde(rename = "e")]
    Nats,
}

impl LogBase {
    /// Converts a value expressed in bits into this base.
    pub fn from_bits(self, bits: f64) -> f64 {
        match self {
            LogBase::Bits => bits,
            LogBase::Nats => bits * std::f64::consts::LN_2,
        }
    }

    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Bits => x.log2(),
            LogBase::Nats => x.ln(),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" | "bits" => Ok(LogBase::Bits),
            "e" | "nats" => Ok(LogBase::Nats),
            other => Err(Error::InvalidArgument(format!("unknown log base {other:?}"))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Bits => "2",
            LogBase::Nats => "e",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_rho_round_trip() {
        for alpha in [0.1, 0.25, 0.5, 0.9, 1.5, 2.0, 7.0] {
            let op = OrderParam::from_alpha(alpha).unwrap();
            let back = OrderParam::from_rho(op.rho()).unwrap();
            assert!((back.alpha() - alpha).abs() <= 1e-15 * alpha.max(1.0));
            assert_eq!(op.sign() > 0.0, alpha < 1.0);
        }
    }

    #[test]
    fn rejects_invalid_orders() {
        assert!(OrderParam::from_alpha(0.0).is_err());
        assert!(OrderParam::from_alpha(1.0).is_err());
        assert!(OrderParam::from_alpha(1.0 + 1e-7).is_err());
        assert!(OrderParam::from_alpha(1.0 + 1e-3).is_ok());
        assert!(OrderParam::from_rho(-1.0).is_err());
        assert!(OrderParam::from_rho(0.0).is_err());
    }

    #[test]
    fn base_change_scales_by_ln2() {
        let bits = 3.0;
        assert!((LogBase::Nats.from_bits(bits) - 3.0 * 2f64.ln()).abs() < 1e-15);
        assert_eq!("e".parse::<LogBase>().unwrap(), LogBase::Nats);
    }
}
