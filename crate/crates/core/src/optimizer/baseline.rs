//! Reference protocols with known fidelity.

use std::f64::consts::PI;

use crate::bloch::{Frame, Vec3};
use crate::error::Result;
use crate::protocol::{rotation_about, DecodingChannel, DecodingPair, Encoding};

/// `½(1 + 2/π)`: the best averaged fidelity reachable with separable states,
/// attained without using the shared state at all.
pub fn separable_optimal_fidelity() -> f64 {
    0.5 * (1.0 + 2.0 / PI)
}

/// Alice skips the measurement and sends the sign of `ê·ŝ`; Bob prepares `±ê`.
pub fn bob_alone_protocol(frame: &Frame) -> Result<(impl Fn(&Vec3) -> Result<Encoding>, DecodingPair)> {
    let e = frame.e1;
    let dec = DecodingPair::new(DecodingChannel::constant(&e)?, DecodingChannel::constant(&-e)?)?;
    let strategy = move |s: &Vec3| {
        Ok(if e.dot(s) >= 0.0 { Encoding::always_plus() } else { Encoding::always_minus() })
    };
    Ok((strategy, dec))
}

/// Alice measures along `ŝ`; Bob flips the plane on `+` and idles on `-`.
/// Gives `G = λ` on `ρ(x, y, -λI)`.
pub fn werner_invariant_protocol(frame: &Frame) -> Result<(impl Fn(&Vec3) -> Result<Encoding>, DecodingPair)> {
    let flip = DecodingChannel::rotation(&rotation_about(&frame.beta, PI))?;
    let dec = DecodingPair::new(flip, DecodingChannel::identity())?;
    Ok((Encoding::von_neumann, dec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{make_frame, Mat3, TwoQubitState};
    use crate::protocol::{average_g, fidelity_from_g};

    #[test]
    fn baseline_value() {
        assert!((separable_optimal_fidelity() - 0.818_309_886_183_790_7).abs() < 1e-15);
        let frame = make_frame(&Vec3::new(0.5, 0.5, 0.1)).unwrap();
        let (strat, dec) = bob_alone_protocol(&frame).unwrap();
        let g = average_g(&TwoQubitState::werner(0.4), &frame, &strat, &dec, 2048).unwrap();
        assert!((fidelity_from_g(g) - separable_optimal_fidelity()).abs() < 1e-6);
    }

    #[test]
    fn werner_protocol_gives_lambda() {
        let frame = make_frame(&Vec3::y()).unwrap();
        let (strat, dec) = werner_invariant_protocol(&frame).unwrap();
        let st = TwoQubitState::new(Vec3::new(0.1, 0.0, 0.2), Vec3::new(-0.2, 0.1, 0.0), Mat3::identity() * -0.3);
        let g = average_g(&st, &frame, &strat, &dec, 128).unwrap();
        assert!((g - 0.3).abs() < 1e-14);
    }
}
