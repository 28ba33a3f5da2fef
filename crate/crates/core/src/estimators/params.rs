//! Theoretical parameter settings, as base-10 logarithms with all hidden
//! constants set to 1. They are far outside anything runnable and are only
//! reported for reference.

use serde::Serialize;

use super::EstimatorError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoryParams {
    pub log10_tau: f64,
    pub log10_s: f64,
}

fn check_small(name: &str, x: f64) -> Result<(), EstimatorError> {
    if x > 0.0 && x <= 0.5 {
        Ok(())
    } else {
        Err(EstimatorError::InvalidParams(format!("{name} = {x} not in (0, 1/2]")))
    }
}

/// Component counting: `τ = (4/ε)^(−6/ε² − 3) · ρ` and
/// `s = (4/ε)^(15/ε³) · (1/ρ)^(2/ε + 1)`.
pub fn theory_params(epsilon: f64, rho: f64) -> Result<TheoryParams, EstimatorError> {
    check_small("epsilon", epsilon)?;
    check_small("rho", rho)?;
    let base = (4.0 / epsilon).log10();
    Ok(TheoryParams {
        log10_tau: (-6.0 / (epsilon * epsilon) - 3.0) * base + rho.log10(),
        log10_s: 15.0 / epsilon.powi(3) * base + (2.0 / epsilon + 1.0) * (1.0 / rho).log10(),
    })
}

/// Disc frequencies: `log10` of `τ = ρδ/J · (2d)^(−4k(d+1)^(2k))` for `J`
/// disc types.
pub fn disc_theory_params(rho: f64, delta: f64, types: f64, k: u32, d: u32) -> Result<f64, EstimatorError> {
    check_small("rho", rho)?;
    check_small("delta", delta)?;
    if types < 1.0 || d == 0 {
        return Err(EstimatorError::InvalidParams("need J >= 1 and d >= 1".into()));
    }
    let exponent = 4.0 * k as f64 * ((d + 1) as f64).powi(2 * k as i32);
    Ok((rho * delta / types).log10() - exponent * (2.0 * d as f64).log10())
}
