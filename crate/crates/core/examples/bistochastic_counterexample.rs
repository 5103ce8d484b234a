//! Spin decodings on Bell-diagonal states: the elliptic-integral closed form
//! against the numerical optimiser.

use rsp_core::bloch::is_entangled;
use rsp_core::optimizer::elliptic::elliptic_e;
use rsp_core::optimizer::{minimize_over_beta, optimize_bistochastic_bell_diagonal, perturbed_isotropic};
use rsp_core::protocol::ChannelClass;
use rsp_core::Result;

fn main() -> Result<()> {
    println!("E(0) = {:.12}, E(1) = {:.12}", elliptic_e(0.0)?, elliptic_e(1.0)?);
    let third = -1.0 / 3.0;
    println!("T1: F = {:.9}", optimize_bistochastic_bell_diagonal(third, third, third)?);
    for eps in [0.01, 0.04, 0.1] {
        let st = perturbed_isotropic(eps)?;
        let closed = optimize_bistochastic_bell_diagonal(st.t[(0, 0)], st.t[(1, 1)], st.t[(2, 2)])?;
        let numeric = minimize_over_beta(&st, ChannelClass::Bistochastic, 200, 2048)?.f_star;
        println!(
            "T2 ε={eps:<4} entangled {}  closed {closed:.9}  optimiser {numeric:.9}",
            is_entangled(&st)?
        );
    }
    let anisotropic = rsp_core::bloch::bell_diagonal(-0.1, -0.4, -0.5)?;
    let s = anisotropic.correlation_singular_values();
    println!(
        "diag(−0.1, −0.4, −0.5): closed {:.9}",
        optimize_bistochastic_bell_diagonal(-s[0], -s[1], -s[2])?
    );
    Ok(())
}
