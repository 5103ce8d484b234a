//! Bob prepares `±ê` from Alice's bit alone; the shared state is unused.

use rsp_core::optimizer::{bob_alone_protocol, separable_optimal_fidelity};
use rsp_core::protocol::{average_g, fidelity_from_g};
use rsp_core::{make_frame, Result, TwoQubitState, Vec3};

fn main() -> Result<()> {
    println!("closed form   {:.9}", separable_optimal_fidelity());
    let frame = make_frame(&Vec3::new(0.3, -0.1, 1.0))?;
    let (strategy, dec) = bob_alone_protocol(&frame)?;
    for n in [64, 512, 2048, 8192] {
        let g = average_g(&TwoQubitState::maximally_mixed(), &frame, &strategy, &dec, n)?;
        println!("{n:>5} nodes   {:.9}", fidelity_from_g(g));
    }
    Ok(())
}
