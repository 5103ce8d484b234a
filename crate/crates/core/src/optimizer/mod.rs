//! Maximising the averaged fidelity over Alice's POVMs and Bob's decodings,
//! then minimising over the plane of targets.

pub mod baseline;
pub mod bistochastic;
pub mod elliptic;
mod general;
pub mod invariant;
pub mod mv;
mod plane;
pub mod search;

pub use baseline::{bob_alone_protocol, separable_optimal_fidelity, werner_invariant_protocol};
pub use bistochastic::{bistochastic_g, optimize_bistochastic_bell_diagonal, perturbed_isotropic};
pub use elliptic::elliptic_e;
pub use invariant::{fact1_monotonicity_scan, max_invariant_g, twirl_channel, Fact1Family, InvariantChannel, SpinOptimum};
pub use mv::{
    classify_omega, mv_quantities, optimal_g_over_povm, optimal_povm_at, pointwise_max, MVQuantities, NodeOptimum,
    OmegaClass, PovmOptimum,
};
pub use search::{fibonacci_half_sphere, nelder_mead, Minimum, NelderMeadOptions};

use rayon::prelude::*;

use crate::bloch::{make_frame, Frame, TwoQubitState, Vec3};
use crate::error::{Result, RspError};
use crate::protocol::{
    extremal_channel, fidelity_from_g, rotation_about, ChannelClass, DecodingChannel, DecodingPair,
    ExtremalChannelParams,
};
use general::{max_over_extremal_pairs, GeneralOptions, PairParams};
use invariant::{check_state, max_over_spin_pairs};
use plane::{extremal_from_slice, PlaneProblem};
use search::{spherical, to_spherical};

/// Default sphere grid size for the plane minimisation.
pub const DEFAULT_BETA_GRID: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecodingParams {
    /// Spins about `β̂*` by `θ₊` and `θ₋`.
    Spins { theta_plus: f64, theta_minus: f64 },
    Extremal { plus: ExtremalChannelParams, minus: ExtremalChannelParams },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub class: ChannelClass,
    pub g_star: f64,
    pub f_star: f64,
    pub beta_star: Vec3,
    pub frame: Frame,
    pub node_classes: Vec<OmegaClass>,
    pub decoding_params: DecodingParams,
    pub decoding: DecodingPair,
    /// Number of planes whose inner optimum was evaluated.
    pub planes_evaluated: usize,
}

/// Controls for [`minimize_over_beta_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSearch {
    pub n_beta: usize,
    /// Nodes for the final evaluation at `β̂*`.
    pub n_nodes: usize,
    /// Nodes used while scanning and refining planes.
    pub search_nodes: usize,
    /// Cap on plane evaluations during simplex refinement.
    pub refine_evals: usize,
    /// Seeds the random starts of the General-class search.
    pub seed: u64,
}

impl BetaSearch {
    /// Defaults for `class`: the General search is much costlier per plane,
    /// so it scans with fewer nodes and a shorter refinement.
    pub fn new(class: ChannelClass, n_beta: usize, n_nodes: usize) -> Self {
        let (search, refine) = match class {
            ChannelClass::General => (128, 60),
            _ => (256, 200),
        };
        Self { n_beta, n_nodes, search_nodes: n_nodes.min(search), refine_evals: refine, seed: 0 }
    }
}

enum Inner {
    Spin(SpinOptimum),
    Extremal(f64, PairParams),
}

impl Inner {
    fn g(&self) -> f64 {
        match self {
            Inner::Spin(s) => s.g,
            Inner::Extremal(g, _) => *g,
        }
    }
}

fn inner_max(state: &TwoQubitState, frame: &Frame, class: ChannelClass, search: usize, score: usize, seed: u64) -> Inner {
    let prob = PlaneProblem::new(state, frame, search);
    let spin = max_over_spin_pairs(&prob, 1e-7);
    match class {
        ChannelClass::Invariant | ChannelClass::Bistochastic => {
            if score == search {
                Inner::Spin(spin)
            } else {
                Inner::Spin(max_over_spin_pairs(&PlaneProblem::new(state, frame, score), 1e-9))
            }
        }
        ChannelClass::General => {
            let opts = GeneralOptions { seed, ..Default::default() };
            let hint = (spin.theta_plus, spin.theta_minus);
            let (g, p) = if score == search {
                max_over_extremal_pairs(&prob, &prob, hint, &opts)
            } else {
                max_over_extremal_pairs(&prob, &PlaneProblem::new(state, frame, score), hint, &opts)
            };
            Inner::Extremal(g, p)
        }
    }
}

fn plane_value(state: &TwoQubitState, beta: &Vec3, class: ChannelClass, cfg: &BetaSearch) -> f64 {
    match make_frame(beta) {
        Ok(frame) => inner_max(state, &frame, class, cfg.search_nodes, cfg.search_nodes, cfg.seed).g(),
        Err(_) => f64::INFINITY,
    }
}

fn lab_decoding(frame: &Frame, class: ChannelClass, inner: &Inner) -> Result<(DecodingParams, DecodingPair)> {
    match inner {
        Inner::Spin(s) => {
            let spin = |theta: f64| -> Result<DecodingChannel> {
                DecodingChannel::rotation(&rotation_about(&frame.beta, theta))?.with_class(class)
            };
            Ok((
                DecodingParams::Spins { theta_plus: s.theta_plus, theta_minus: s.theta_minus },
                DecodingPair::new(spin(s.theta_plus)?, spin(s.theta_minus)?)?,
            ))
        }
        Inner::Extremal(_, p) => {
            let b = frame.basis();
            let lab = |q: &[f64]| -> Result<ExtremalChannelParams> {
                let o1 = crate::protocol::euler_zyz(q[2], q[3], q[4]);
                let o2 = crate::protocol::euler_zyz(q[5], q[6], q[7]);
                ExtremalChannelParams::new(q[0], q[1], b * o1, b * o2)
            };
            let (plus, minus) = (lab(&p[..8])?, lab(&p[8..])?);
            debug_assert!({
                let (t, _) = extremal_from_slice(&p[..8]);
                (frame.to_lab(&t) - extremal_channel(&plus).t()).norm() < 1e-9
            });
            Ok((
                DecodingParams::Extremal { plus, minus },
                DecodingPair::new(extremal_channel(&plus), extremal_channel(&minus))?,
            ))
        }
    }
}

/// Fidelity optimised over encodings and decodings of `class`, then
/// minimised over the plane normal `β̂`: a sphere grid (antipodes identified)
/// followed by simplex refinement from the best grid point.
pub fn minimize_over_beta(
    state: &TwoQubitState,
    class: ChannelClass,
    n_beta: usize,
    n_nodes: usize,
) -> Result<OptimizationResult> {
    minimize_over_beta_with(state, class, &BetaSearch::new(class, n_beta, n_nodes))
}

pub fn minimize_over_beta_with(state: &TwoQubitState, class: ChannelClass, cfg: &BetaSearch) -> Result<OptimizationResult> {
    check_state(state)?;
    if cfg.n_beta < 32 {
        return Err(RspError::InvalidConfig(format!("beta grid needs at least 32 points, got {}", cfg.n_beta)));
    }
    if cfg.n_nodes < 4 || cfg.search_nodes < 4 {
        return Err(RspError::InvalidConfig("need at least 4 quadrature nodes".into()));
    }

    let grid = fibonacci_half_sphere(cfg.n_beta);
    let values: Vec<f64> = grid.par_iter().map(|b| plane_value(state, b, class, cfg)).collect();
    let mut best_idx = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best_idx] {
            best_idx = i;
        }
    }
    let mut beta_star = grid[best_idx];
    let mut evaluated = grid.len();

    let (theta0, phi0) = to_spherical(&beta_star);
    let opts = NelderMeadOptions {
        step: (2.0 * std::f64::consts::PI / cfg.n_beta as f64).sqrt(),
        diameter_tol: 1e-6,
        max_evals: cfg.refine_evals,
    };
    let refined = nelder_mead(|x| plane_value(state, &spherical(x[0], x[1]), class, cfg), &[theta0, phi0], &opts);
    evaluated += refined.evals;
    if refined.value < values[best_idx] {
        beta_star = spherical(refined.x[0], refined.x[1]);
    }

    let frame = make_frame(&beta_star)?;
    let inner = inner_max(state, &frame, class, cfg.search_nodes, cfg.n_nodes, cfg.seed);
    let (decoding_params, decoding) = lab_decoding(&frame, class, &inner)?;
    let povm = optimal_g_over_povm(state, &frame, &decoding, cfg.n_nodes)?;
    Ok(OptimizationResult {
        class,
        g_star: povm.g,
        f_star: fidelity_from_g(povm.g),
        beta_star: frame.beta,
        frame,
        node_classes: povm.nodes.iter().map(|n| n.class).collect(),
        decoding_params,
        decoding,
        planes_evaluated: evaluated,
    })
}

/// [`minimize_over_beta`] restricted to plane-invariant decodings.
pub fn optimize_invariant(state: &TwoQubitState, n_nodes: usize, beta_grid: usize) -> Result<OptimizationResult> {
    minimize_over_beta(state, ChannelClass::Invariant, beta_grid, n_nodes)
}
