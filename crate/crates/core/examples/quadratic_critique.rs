//! The quadratic figure `∫ (ŝ·r)²` rewards a fixed guess over protocols that
//! use the shared state.

use rsp_core::optimizer::werner_invariant_protocol;
use rsp_core::oracle::{restricted_quadratic_oracle, SearchConfig};
use rsp_core::protocol::{average_g, fidelity_from_g, quadratic_fidelity, DecodingChannel, DecodingPair, Encoding};
use rsp_core::{make_frame, Result, TwoQubitState, Vec3};

fn main() -> Result<()> {
    let frame = make_frame(&Vec3::z())?;
    let guess = DecodingChannel::constant(&frame.e1)?;
    let guess = DecodingPair::new(guess, guess)?;
    let unbiased = |_: &Vec3| Ok(Encoding::unbiased());
    let st = TwoQubitState::werner(1.0 / 3.0);
    println!(
        "fixed guess        P = {:.9}  F = {:.9}",
        quadratic_fidelity(&st, &frame, &unbiased, &guess, 2048)?,
        fidelity_from_g(average_g(&st, &frame, &unbiased, &guess, 2048)?)
    );
    let (vn, dec) = werner_invariant_protocol(&frame)?;
    for (name, st) in [
        ("werner λ=1/3", TwoQubitState::werner(1.0 / 3.0)),
        ("λ=1/5, t=2/5", TwoQubitState::werner_with_marginals(0.2, 0.4)),
    ] {
        println!(
            "{name:<18} P = {:.9}  F = {:.9}  oracle P = {:.6}",
            quadratic_fidelity(&st, &frame, &vn, &dec, 2048)?,
            fidelity_from_g(average_g(&st, &frame, &vn, &dec, 2048)?),
            restricted_quadratic_oracle(&st, &SearchConfig::default())?
        );
    }
    Ok(())
}
