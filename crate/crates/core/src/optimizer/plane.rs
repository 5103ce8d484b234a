//! The state seen from a frame: `ê → x̂`, `ê′ → ŷ`, `β̂ → ẑ`.
//!
//! Rotating both parties by the same frame change leaves every fidelity
//! unchanged, so searches run in these coordinates and map results back.

use std::f64::consts::PI;

use crate::bloch::{Frame, Mat3, TwoQubitState, Vec3};
use crate::protocol::channel::extremal_parts;
use crate::protocol::euler_zyz;

pub(crate) struct PlaneProblem {
    pub x: Vec3,
    pub y: Vec3,
    pub t: Mat3,
    cos: Vec<f64>,
    sin: Vec<f64>,
    /// Gram matrix of the first two columns of `T`.
    g00: f64,
    g01: f64,
    g11: f64,
}

impl PlaneProblem {
    pub fn new(state: &TwoQubitState, frame: &Frame, n_nodes: usize) -> Self {
        let b = frame.basis();
        let t = b.transpose() * state.t * b;
        let (cos, sin) = (0..n_nodes)
            .map(|k| (2.0 * PI * k as f64 / n_nodes as f64).sin_cos())
            .map(|(s, c)| (c, s))
            .unzip();
        let r0 = t.column(0);
        let r1 = t.column(1);
        Self {
            x: b.transpose() * state.x,
            y: b.transpose() * state.y,
            t,
            cos,
            sin,
            g00: r0.dot(&r0),
            g01: r0.dot(&r1),
            g11: r1.dot(&r1),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.cos.len()
    }

    /// `G` for the spins `R_β(θ₊)`, `R_β(θ₋)` about the plane normal.
    pub fn spin_pair_g(&self, theta_plus: f64, theta_minus: f64) -> f64 {
        let (sp, cp) = theta_plus.sin_cos();
        let (sm, cm) = theta_minus.sin_cos();
        let (y1, y2) = (self.y[0], self.y[1]);
        let mut sum = 0.0;
        for (&c, &s) in self.cos.iter().zip(&self.sin) {
            // R(-θ) ŝ = (cos(φ-θ), sin(φ-θ))
            let (ap, bp) = (c * cp + s * sp, s * cp - c * sp);
            let (am, bm) = (c * cm + s * sm, s * cm - c * sm);
            let (w1, w2) = (ap - am, bp - bm);
            let norm = (self.g00 * w1 * w1 + 2.0 * self.g01 * w1 * w2 + self.g11 * w2 * w2).max(0.0).sqrt();
            let vp = ap * y1 + bp * y2;
            let vm = am * y1 + bm * y2;
            sum += (0.5 * (norm + vp + vm)).max(vp).max(vm);
        }
        sum / self.n_nodes() as f64
    }

    /// `G` for a pair of extremal channels given as
    /// `(u, w, O₁ Euler zyz, O₂ Euler zyz)` per branch, in frame coordinates.
    pub fn extremal_pair_g(&self, p: &[f64]) -> f64 {
        let (tp, vp) = extremal_from_slice(&p[..8]);
        let (tm, vm) = extremal_from_slice(&p[8..16]);
        let m = (tp - tm) * self.t.transpose() + (vp - vm) * self.x.transpose();
        let big_vp = tp * self.y + vp;
        let big_vm = tm * self.y + vm;
        let (r0, r1) = (m.row(0), m.row(1));
        let (h00, h01, h11) = (r0.dot(&r0), r0.dot(&r1), r1.dot(&r1));
        let mut sum = 0.0;
        for (&c, &s) in self.cos.iter().zip(&self.sin) {
            let norm = (h00 * c * c + 2.0 * h01 * c * s + h11 * s * s).max(0.0).sqrt();
            let a = big_vp[0] * c + big_vp[1] * s;
            let b = big_vm[0] * c + big_vm[1] * s;
            sum += (0.5 * (norm + a + b)).max(a).max(b);
        }
        sum / self.n_nodes() as f64
    }
}

pub(crate) fn extremal_from_slice(p: &[f64]) -> (Mat3, Vec3) {
    let o1 = euler_zyz(p[2], p[3], p[4]);
    let o2 = euler_zyz(p[5], p[6], p[7]);
    extremal_parts(p[0], p[1], &o1, &o2)
}
