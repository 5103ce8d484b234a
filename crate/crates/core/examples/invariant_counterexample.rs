//! Plane-invariant decodings: a separable Werner state beats an entangled
//! state with local marginals.

use rsp_core::optimizer::{fact1_monotonicity_scan, optimize_invariant, Fact1Family};
use rsp_core::bloch::is_entangled;
use rsp_core::{Result, TwoQubitState};

fn main() -> Result<()> {
    let separable = TwoQubitState::werner(1.0 / 3.0);
    let entangled = TwoQubitState::werner_with_marginals(0.2, 0.4);
    for (name, st) in [("werner λ=1/3", &separable), ("λ=1/5, t=2/5", &entangled)] {
        let r = optimize_invariant(st, 2048, 300)?;
        println!(
            "{name:<14} entangled {:<5} F = {:.9}  β* = [{:.3}, {:.3}, {:.3}]",
            is_entangled(st)?,
            r.f_star,
            r.beta_star[0],
            r.beta_star[1],
            r.beta_star[2]
        );
    }

    // in-plane marginals only help
    let alphas: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let g = fact1_monotonicity_scan(&Fact1Family { lambda: 0.2, y_norm: 0.3 }, &alphas, 2048)?;
    for (a, v) in alphas.iter().zip(&g) {
        println!("α = {a:.1}  G = {v:.9}");
    }
    Ok(())
}
