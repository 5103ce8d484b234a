//! Decodings invariant under rotations in the target plane.
//!
//! For targets in the plane only the in-plane blocks `B± = c I + d J` enter
//! the fidelity, and the CPTP condition confines `(c, d)` to the unit disc.
//! The objective is convex in `(B₊, B₋)`, so the optimum sits on the boundary
//! circles, i.e. on spin pairs `B± = R(θ±)`.

use std::f64::consts::PI;

use super::plane::PlaneProblem;
use super::search::{nelder_mead, NelderMeadOptions};
use crate::bloch::{make_frame, validate_state, Frame, Mat3, TwoQubitState, Vec3, PSD_TOL};
use crate::error::{Result, RspError};
use crate::protocol::{ChannelClass, DecodingChannel};

/// `diag[t_β, c I₂ + d J]` in frame coordinates with `J` the quarter turn,
/// plus a shift `shift_beta · β̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantChannel {
    pub t_beta: f64,
    pub c: f64,
    pub d: f64,
    pub shift_beta: f64,
}

impl InvariantChannel {
    /// Frame-coordinate matrix.
    pub fn local_matrix(&self) -> Mat3 {
        Mat3::new(self.c, -self.d, 0.0, self.d, self.c, 0.0, 0.0, 0.0, self.t_beta)
    }

    pub fn to_channel(&self, frame: &Frame) -> Result<DecodingChannel> {
        DecodingChannel::new(
            frame.to_lab(&self.local_matrix()),
            frame.beta * self.shift_beta,
            ChannelClass::Invariant,
        )
    }
}

/// Average of `O(φ) Λ O(φ)ᵀ` over rotations `O(φ)` about `β̂`.
pub fn twirl_channel(ch: &DecodingChannel, frame: &Frame) -> InvariantChannel {
    let t = frame.to_local(ch.t());
    InvariantChannel {
        t_beta: t[(2, 2)],
        c: 0.5 * (t[(0, 0)] + t[(1, 1)]),
        d: 0.5 * (t[(1, 0)] - t[(0, 1)]),
        shift_beta: ch.v().dot(&frame.beta),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOptimum {
    pub g: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
}

const SPIN_GRID: usize = 16;

/// Best spin pair: a 16×16 grid over `(θ₊, θ₋)` followed by simplex polishing
/// from the two best cells.
pub(crate) fn max_over_spin_pairs(prob: &PlaneProblem, diameter_tol: f64) -> SpinOptimum {
    let step = 2.0 * PI / SPIN_GRID as f64;
    let mut cells: Vec<(f64, f64, f64)> = (0..SPIN_GRID * SPIN_GRID)
        .map(|k| {
            let (tp, tm) = ((k / SPIN_GRID) as f64 * step, (k % SPIN_GRID) as f64 * step);
            (prob.spin_pair_g(tp, tm), tp, tm)
        })
        .collect();
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let opts = NelderMeadOptions { step: 0.5 * step, diameter_tol, max_evals: 600 };
    let mut best = SpinOptimum { g: cells[0].0, theta_plus: cells[0].1, theta_minus: cells[0].2 };
    for &(_, tp, tm) in cells.iter().take(2) {
        let m = nelder_mead(|x| -prob.spin_pair_g(x[0], x[1]), &[tp, tm], &opts);
        if -m.value > best.g {
            best = SpinOptimum { g: -m.value, theta_plus: m.x[0], theta_minus: m.x[1] };
        }
    }
    best
}

/// Best invariant decoding for a fixed plane.
pub fn max_invariant_g(state: &TwoQubitState, frame: &Frame, n_nodes: usize) -> Result<SpinOptimum> {
    check_state(state)?;
    if n_nodes < 4 {
        return Err(RspError::OutOfRange(format!("need at least 4 quadrature nodes, got {n_nodes}")));
    }
    Ok(max_over_spin_pairs(&PlaneProblem::new(state, frame, n_nodes), 1e-9))
}

pub(crate) fn check_state(state: &TwoQubitState) -> Result<()> {
    if !state.is_finite() {
        return Err(RspError::OutOfRange("state has non-finite entries".into()));
    }
    let report = validate_state(state, PSD_TOL);
    if !report.valid {
        return Err(RspError::InvalidState { min_eigenvalue: report.min_eigenvalue });
    }
    Ok(())
}

/// `ρ(0, y, -λI)` with `y = ‖y‖(α x̂ + √(1 − α²) ẑ)`, probed on the plane
/// normal to `ẑ`. Only the in-plane part `α‖y‖` matters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fact1Family {
    pub lambda: f64,
    pub y_norm: f64,
}

impl Fact1Family {
    pub fn state(&self, alpha: f64) -> Result<TwoQubitState> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(RspError::OutOfRange(format!("alpha = {alpha} outside [0, 1]")));
        }
        let y = Vec3::new(alpha, 0.0, (1.0 - alpha * alpha).sqrt()) * self.y_norm;
        let st = TwoQubitState::new(Vec3::zeros(), y, -self.lambda * Mat3::identity());
        check_state(&st)?;
        Ok(st)
    }
}

/// Optimal invariant-class `G` on the plane normal to `ẑ` for each `α`.
pub fn fact1_monotonicity_scan(family: &Fact1Family, alphas: &[f64], n_nodes: usize) -> Result<Vec<f64>> {
    let frame = make_frame(&Vec3::z())?;
    alphas
        .iter()
        .map(|&a| Ok(max_invariant_g(&family.state(a)?, &frame, n_nodes)?.g))
        .collect()
}
