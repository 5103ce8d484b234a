//! Unrestricted decodings: the optimiser never drops below the separable
//! baseline, entangled or not.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsp_core::bloch::{is_entangled, validate_state, PSD_TOL};
use rsp_core::optimizer::{minimize_over_beta, separable_optimal_fidelity, OmegaClass};
use rsp_core::protocol::ChannelClass;
use rsp_core::{Mat3, Result, TwoQubitState, Vec3};

fn main() -> Result<()> {
    println!("baseline {:.9}", separable_optimal_fidelity());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 3 {
        let st = TwoQubitState::new(
            Vec3::from_fn(|_, _| rng.gen_range(-0.3..0.3)),
            Vec3::from_fn(|_, _| rng.gen_range(-0.3..0.3)),
            Mat3::from_fn(|_, _| rng.gen_range(-0.6..0.6)),
        );
        if !validate_state(&st, PSD_TOL).valid {
            continue;
        }
        done += 1;
        let r = minimize_over_beta(&st, ChannelClass::General, 32, 2048)?;
        let measured = r.node_classes.iter().filter(|c| **c == OmegaClass::Omega0).count();
        println!(
            "entangled {:<5} F* = {:.9}  measured on {measured}/{} nodes",
            is_entangled(&st)?,
            r.f_star,
            r.node_classes.len()
        );
    }
    Ok(())
}
