//! The one-bit protocol: Alice measures a binary POVM, sends the outcome, Bob
//! applies the matching decoding channel. Fidelities are averaged over the
//! target circle with the composite trapezoid rule.

pub mod channel;
pub mod encoding;

pub use channel::{
    apply_channel, choi_matrix, euler_zyz, extremal_channel, rotation_about, validate_channel_cptp,
    ChannelClass, ChoiReport, DecodingChannel, DecodingPair, ExtremalChannelParams, CPTP_TOL,
};
pub use encoding::{povm_elements, Encoding, EncodingStrategy, FixedEncoding};

use crate::bloch::{Frame, TwoQubitState, Vec3};
use crate::error::{Result, RspError};

pub const DEFAULT_NODES: usize = 2048;

/// Below this an outcome probability is treated as zero.
const PROB_EPS: f64 = 1e-15;

/// `p± = a± ± a·x`.
pub fn outcome_probabilities(state: &TwoQubitState, enc: &Encoding) -> (f64, f64) {
    let ax = enc.a().dot(&state.x);
    (enc.a_plus() + ax, enc.a_minus() - ax)
}

/// Bob's conditional states. A branch with zero probability has no state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostMeasurement {
    pub p_plus: f64,
    pub p_minus: f64,
    pub n_plus: Option<Vec3>,
    pub n_minus: Option<Vec3>,
}

/// Unnormalised Bloch part `p_r n_r = a_r y + r Tᵀ a` of Bob's conditional
/// state. `T` is indexed (Alice, Bob), so Alice's vector enters through `Tᵀ`.
#[inline]
pub fn unnormalized_bloch(state: &TwoQubitState, enc: &Encoding, sign: f64) -> Vec3 {
    state.y * enc.weight(sign) + state.t.tr_mul(&enc.a()) * sign
}

pub fn post_measurement_bloch(state: &TwoQubitState, enc: &Encoding) -> PostMeasurement {
    let (p_plus, p_minus) = outcome_probabilities(state, enc);
    let norm = |p: f64, sign: f64| (p > PROB_EPS).then(|| unnormalized_bloch(state, enc, sign) / p);
    PostMeasurement { p_plus, p_minus, n_plus: norm(p_plus, 1.0), n_minus: norm(p_minus, -1.0) }
}

/// One term of the final Bloch vector:
/// `T_r (a_r y + r Tᵀ a) + (a_r + r a·x) v_r`.
#[inline]
pub fn branch_bloch(state: &TwoQubitState, enc: &Encoding, ch: &DecodingChannel, sign: f64) -> Vec3 {
    let weight = enc.weight(sign) + sign * enc.a().dot(&state.x);
    ch.t() * unnormalized_bloch(state, enc, sign) + ch.v() * weight
}

/// Bob's Bloch vector after decoding, averaged over Alice's outcomes.
pub fn final_bloch(state: &TwoQubitState, enc: &Encoding, dec: &DecodingPair) -> Vec3 {
    branch_bloch(state, enc, &dec.plus, 1.0) + branch_bloch(state, enc, &dec.minus, -1.0)
}

/// `½(1 + r·ŝ)`.
pub fn pointwise_fidelity(r: &Vec3, s: &Vec3) -> f64 {
    0.5 * (1.0 + r.dot(s))
}

/// Decoding as seen from a target direction. A fixed pair ignores it.
pub trait DecodingSchedule {
    fn decoding(&self, target: &Vec3) -> Result<DecodingPair>;
}

impl DecodingSchedule for DecodingPair {
    fn decoding(&self, _target: &Vec3) -> Result<DecodingPair> {
        Ok(*self)
    }
}

/// A decoding chosen per target direction.
pub struct PerTarget<F>(pub F);

impl<F> DecodingSchedule for PerTarget<F>
where
    F: Fn(&Vec3) -> Result<DecodingPair>,
{
    fn decoding(&self, target: &Vec3) -> Result<DecodingPair> {
        (self.0)(target)
    }
}

/// Quadrature nodes `ŝ_k = cos φ_k ê + sin φ_k ê′`, `φ_k = 2πk/n`.
pub fn circle_nodes(frame: &Frame, n: usize) -> Vec<Vec3> {
    (0..n)
        .map(|k| frame.target(2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

fn check_nodes(n: usize) -> Result<()> {
    if n < 4 {
        return Err(RspError::OutOfRange(format!("need at least 4 quadrature nodes, got {n}")));
    }
    Ok(())
}

/// Circle mean of `f(ŝ, r(ŝ))` under the normalised measure `dφ/2π`.
fn circle_mean<S, D>(
    state: &TwoQubitState,
    frame: &Frame,
    strat: &S,
    dec: &D,
    n_nodes: usize,
    f: impl Fn(&Vec3, &Vec3) -> f64,
) -> Result<f64>
where
    S: EncodingStrategy + ?Sized,
    D: DecodingSchedule + ?Sized,
{
    check_nodes(n_nodes)?;
    let mut sum = 0.0;
    for s in circle_nodes(frame, n_nodes) {
        let enc = strat.encoding(&s)?;
        let pair = dec.decoding(&s)?;
        sum += f(&s, &final_bloch(state, &enc, &pair));
    }
    Ok(sum / n_nodes as f64)
}

/// Fidelity parameter `G = ∫ dŝ r(ŝ)·ŝ`; the averaged fidelity is `½(1 + G)`.
pub fn average_g<S, D>(
    state: &TwoQubitState,
    frame: &Frame,
    strat: &S,
    dec: &D,
    n_nodes: usize,
) -> Result<f64>
where
    S: EncodingStrategy + ?Sized,
    D: DecodingSchedule + ?Sized,
{
    circle_mean(state, frame, strat, dec, n_nodes, |s, r| r.dot(s))
}

/// `∫ dŝ (ŝ·r)²`. Reported for comparison only.
pub fn quadratic_fidelity<S, D>(
    state: &TwoQubitState,
    frame: &Frame,
    strat: &S,
    dec: &D,
    n_nodes: usize,
) -> Result<f64>
where
    S: EncodingStrategy + ?Sized,
    D: DecodingSchedule + ?Sized,
{
    circle_mean(state, frame, strat, dec, n_nodes, |s, r| r.dot(s).powi(2))
}

pub fn fidelity_from_g(g: f64) -> f64 {
    0.5 * (1.0 + g)
}
