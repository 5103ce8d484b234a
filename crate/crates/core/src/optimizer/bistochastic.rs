//! Closed form for Bell-diagonal states decoded by spins about the plane normal.

use std::f64::consts::PI;

use super::elliptic::elliptic_e;
use crate::bloch::{bell_diagonal, TwoQubitState};
use crate::error::Result;

/// `G = (2|t₂|/π) E(√(1 − t₁²/t₂²))` where `|t₁| ≤ |t₂|` are the two smallest
/// of `|t₁|, |t₂|, |t₃|`. Equal to `(1/π) ∫₀^π √(t₁² cos²φ + t₂² sin²φ) dφ`.
///
/// Inputs are not checked for positivity; see
/// [`optimize_bistochastic_bell_diagonal`].
pub fn bistochastic_g(t1: f64, t2: f64, t3: f64) -> Result<f64> {
    let mut m = [t1.abs(), t2.abs(), t3.abs()];
    m.sort_by(f64::total_cmp);
    let (lo, hi) = (m[0], m[1]);
    if hi == 0.0 {
        return Ok(0.0);
    }
    let ratio = lo / hi;
    let k = (1.0 - ratio * ratio).max(0.0).sqrt();
    Ok(2.0 * hi / PI * elliptic_e(k)?)
}

/// Averaged fidelity `½(1 + G)` for the Bell-diagonal state `diag(t₁, t₂, t₃)`
/// under spin decodings, minimised over the plane.
pub fn optimize_bistochastic_bell_diagonal(t1: f64, t2: f64, t3: f64) -> Result<f64> {
    bell_diagonal(t1, t2, t3)?;
    Ok(0.5 * (1.0 + bistochastic_g(t1, t2, t3)?))
}

/// `diag(−⅓ − 2ε, −⅓ + ε/2, −⅓ + ε/2)`: entangled for `ε > 0`, yet its
/// spin-decoded fidelity `⅔ − ε/4` falls below the separable `ε = 0` state.
pub fn perturbed_isotropic(eps: f64) -> Result<TwoQubitState> {
    let third = 1.0 / 3.0;
    bell_diagonal(-third - 2.0 * eps, -third + 0.5 * eps, -third + 0.5 * eps)
}
