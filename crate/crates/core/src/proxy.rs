//! Proxy-adjusted intelligence.
//!
//! A proxy is any support external to the agent — tools, collectives,
//! environmental engineering. It cuts both ways: it reduces measured
//! difficulty (the `h·P` term widening the ability denominator) while
//! boosting realized performance (the `1 + γ·P` factor). Which effect wins
//! decides whether the adjusted index rises or falls.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Proxy strength and its two coupling coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProxyModel {
    /// Support strength `P`, in bits-equivalent units. ≥ 0.
    pub strength_p: f64,
    /// Difficulty-reduction coefficient `h`. ≥ 0.
    pub h_coeff: f64,
    /// Performance-boost rate `γ`. ≥ 0.
    pub boost_gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProxyError {
    #[error("invalid proxy parameter `{field}`: {message}")]
    InvalidParameter { field: &'static str, message: String },
}

impl ProxyModel {
    pub fn check(&self) -> Result<(), ProxyError> {
        for (field, value) in [
            ("strength_p", self.strength_p),
            ("h_coeff", self.h_coeff),
            ("boost_gamma", self.boost_gamma),
        ] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(ProxyError::InvalidParameter {
                    field,
                    message: format!("{value} must be non-negative and finite"),
                });
            }
        }
        Ok(())
    }
}

/// Intelligence with the proxy's performance boost applied: `I · (1 + γ·P)`.
/// The linear form is the minimal monotone choice and is never below the raw
/// index.
pub fn proxy_boosted_intelligence(i_raw: f64, proxy: &ProxyModel) -> f64 {
    i_raw * (1.0 + proxy.boost_gamma * proxy.strength_p)
}

/// Proxy-adjusted difficulty-scaled intelligence:
/// `[C / (h·P + Q)] · [I·(1+γ·P) / Q]`. With the proxy inert (`h·P` and
/// `γ·P` both zero) this reduces to the plain difficulty-scaled index.
pub fn proxy_intelligence(
    complexity_c: f64,
    ability_q: f64,
    i_raw: f64,
    proxy: &ProxyModel,
) -> Result<f64, ProxyError> {
    proxy.check()?;
    if !(ability_q > 0.0) {
        return Err(ProxyError::InvalidParameter {
            field: "ability_q",
            message: format!("{ability_q} must be positive"),
        });
    }
    let denominator = proxy.h_coeff * proxy.strength_p + ability_q;
    if !(denominator > 0.0) {
        return Err(ProxyError::InvalidParameter {
            field: "h_coeff",
            message: "h·P + Q must be positive".into(),
        });
    }
    Ok((complexity_c / denominator) * (proxy_boosted_intelligence(i_raw, proxy) / ability_q))
}

/// Where the proxy-adjusted index crosses the unadjusted one as strength
/// sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BreakEven {
    /// `γ·Q = h`: the boost and the difficulty reduction cancel at every
    /// strength.
    Identical,
    /// The indices only touch at this strength; beyond it the sign of the
    /// difference is fixed by `sign(γ·Q − h)`.
    At(f64),
}

/// Solves `(1 + γ·P) · Q / (h·P + Q) = 1` for `P`. Under the linear boost the
/// condition collapses to `P·(γ·Q − h) = 0`, so the crossing sits at zero
/// strength unless the couplings cancel exactly.
pub fn break_even_strength(ability_q: f64, h_coeff: f64, boost_gamma: f64) -> BreakEven {
    if (boost_gamma * ability_q - h_coeff).abs() <= 1e-15 {
        BreakEven::Identical
    } else {
        BreakEven::At(0.0)
    }
}
