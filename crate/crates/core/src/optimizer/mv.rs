//! Optimisation over Alice's POVM for a fixed decoding pair.

use serde::{Deserialize, Serialize};

use crate::bloch::{Frame, Mat3, TwoQubitState, Vec3};
use crate::error::Result;
use crate::protocol::{circle_nodes, DecodingPair, Encoding};

/// For an encoding `(a₊, a₋, a)` the final Bloch vector is
/// `r = M a + a₊ V₊ + a₋ V₋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MVQuantities {
    pub m: Mat3,
    pub v_plus: Vec3,
    pub v_minus: Vec3,
}

/// `M = (T₊ − T₋) Tᵀ + (v₊ − v₋) xᵀ`, `V± = T± y + v±`.
pub fn mv_quantities(state: &TwoQubitState, dec: &DecodingPair) -> MVQuantities {
    let (p, m) = (&dec.plus, &dec.minus);
    MVQuantities {
        m: (p.t() - m.t()) * state.t.transpose() + (p.v() - m.v()) * state.x.transpose(),
        v_plus: p.t() * state.y + p.v(),
        v_minus: m.t() * state.y + m.v(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaClass {
    /// Alice measures; both messages carry information.
    Omega0,
    /// Alice always sends `+`.
    OmegaPlus,
    /// Alice always sends `-`.
    OmegaMinus,
}

impl std::fmt::Display for OmegaClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OmegaClass::Omega0 => "omega0",
            OmegaClass::OmegaPlus => "omega+",
            OmegaClass::OmegaMinus => "omega-",
        })
    }
}

/// Ties `‖Mᵀŝ‖ = |(V₊ − V₋)·ŝ|` belong to `Ω₀`.
pub fn classify_omega(mv: &MVQuantities, s: &Vec3) -> OmegaClass {
    let norm = (mv.m.transpose() * s).norm();
    let diff = (mv.v_plus - mv.v_minus).dot(s);
    if norm >= diff.abs() {
        OmegaClass::Omega0
    } else if diff > 0.0 {
        OmegaClass::OmegaPlus
    } else {
        OmegaClass::OmegaMinus
    }
}

/// The encoding attaining the pointwise optimum at `ŝ`.
pub fn optimal_povm_at(mv: &MVQuantities, s: &Vec3) -> Encoding {
    match classify_omega(mv, s) {
        OmegaClass::Omega0 => {
            let dir = mv.m.transpose() * s;
            Encoding::von_neumann(&dir).unwrap_or_else(|_| Encoding::unbiased())
        }
        OmegaClass::OmegaPlus => Encoding::always_plus(),
        OmegaClass::OmegaMinus => Encoding::always_minus(),
    }
}

/// `max_A r·ŝ = max(½[‖Mᵀŝ‖ + (V₊ + V₋)·ŝ], V₊·ŝ, V₋·ŝ)`.
#[inline]
pub fn pointwise_max(mv: &MVQuantities, s: &Vec3) -> f64 {
    let vp = mv.v_plus.dot(s);
    let vm = mv.v_minus.dot(s);
    let measured = 0.5 * ((mv.m.transpose() * s).norm() + vp + vm);
    measured.max(vp).max(vm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeOptimum {
    pub phi: f64,
    pub target: Vec3,
    pub class: OmegaClass,
    pub encoding: Encoding,
    /// `r·ŝ` at the optimum.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PovmOptimum {
    pub g: f64,
    pub nodes: Vec<NodeOptimum>,
}

/// Mean of [`pointwise_max`] over `nodes`.
pub fn g_from_mv(mv: &MVQuantities, nodes: &[Vec3]) -> f64 {
    nodes.iter().map(|s| pointwise_max(mv, s)).sum::<f64>() / nodes.len() as f64
}

/// `G` maximised over all encoding strategies for a fixed decoding pair.
pub fn optimal_g_over_povm(
    state: &TwoQubitState,
    frame: &Frame,
    dec: &DecodingPair,
    n_nodes: usize,
) -> Result<PovmOptimum> {
    if n_nodes < 4 {
        return Err(crate::error::RspError::OutOfRange(format!(
            "need at least 4 quadrature nodes, got {n_nodes}"
        )));
    }
    let mv = mv_quantities(state, dec);
    let nodes: Vec<NodeOptimum> = circle_nodes(frame, n_nodes)
        .into_iter()
        .enumerate()
        .map(|(k, s)| NodeOptimum {
            phi: 2.0 * std::f64::consts::PI * k as f64 / n_nodes as f64,
            target: s,
            class: classify_omega(&mv, &s),
            encoding: optimal_povm_at(&mv, &s),
            value: pointwise_max(&mv, &s),
        })
        .collect();
    let g = nodes.iter().map(|n| n.value).sum::<f64>() / n_nodes as f64;
    Ok(PovmOptimum { g, nodes })
}
