use std::f64::consts::FRAC_PI_2;

use crate::error::{Result, RspError};

const AGM_REL_TOL: f64 = 1e-15;

/// Complete elliptic integral of the second kind, `E(k) = ∫₀^{π/2} √(1 − k² sin²φ) dφ`,
/// with modulus `k`.
///
/// Uses the arithmetic-geometric mean: `E = K (1 − Σ 2^{n−1} c_n²)` with
/// `K = π / (2 a_N)` and `c₀ = k`.
pub fn elliptic_e(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(RspError::OutOfRange(format!("elliptic modulus {k} outside [0, 1]")));
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - k * k).sqrt();
    let mut sum = 0.5 * k * k;
    let mut pow2 = 0.5;
    for _ in 0..64 {
        if (a - b).abs() <= AGM_REL_TOL * a {
            break;
        }
        let c = 0.5 * (a - b);
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    Ok(FRAC_PI_2 / a * (1.0 - sum))
}
