//! Samplers and a reference integrator shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use rand_distr::StandardNormal;
use rsp_core::bloch::{bell_diagonal, from_density_matrix, CMat4, C64};
use rsp_core::TwoQubitState;

/// `G G† / tr(G G†)` with `G` complex Ginibre; always a valid state.
pub fn random_state<R: Rng>(rng: &mut R) -> TwoQubitState {
    let g = CMat4::from_fn(|_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let rho = g * g.adjoint();
    let tr = rho.trace();
    from_density_matrix(&(rho / tr))
}

/// Uniform mixture weights over the four Bell states.
pub fn random_bell_correlations<R: Rng>(rng: &mut R) -> [f64; 3] {
    let w: [f64; 4] = std::array::from_fn(|_| -rng.gen::<f64>().max(1e-300).ln());
    let sum: f64 = w.iter().sum();
    let p = w.map(|x| x / sum);
    // Φ+, Φ−, Ψ+, Ψ−
    let bells = [[1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, -1.0]];
    let mut t = [0.0; 3];
    for (pi, b) in p.iter().zip(bells) {
        for k in 0..3 {
            t[k] += pi * b[k];
        }
    }
    t
}

pub fn random_bell_state<R: Rng>(rng: &mut R) -> (TwoQubitState, [f64; 3]) {
    let t = random_bell_correlations(rng);
    (bell_diagonal(t[0], t[1], t[2]).expect("Bell mixture"), t)
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 50)
}
