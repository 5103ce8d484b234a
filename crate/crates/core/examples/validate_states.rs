//! State diagnostics: positivity, PPT, Bell-diagonal separability, discord,
//! and the entanglement threshold of `ρ(t ẑ, t ẑ, −λI)`.

use rsp_core::bloch::{
    bell_diagonal, entanglement_threshold, geometric_discord, is_entangled, is_separable_bell_diagonal,
    validate_state, PSD_TOL,
};
use rsp_core::{Result, TwoQubitState};

fn main() -> Result<()> {
    for lambda in [0.2, 1.0 / 3.0, 0.5, 1.0] {
        let st = TwoQubitState::werner(lambda);
        let rep = validate_state(&st, PSD_TOL);
        println!(
            "werner λ={lambda:.4}: psd margin {:.4}, entangled {}, discord {:.5}",
            rep.min_eigenvalue,
            is_entangled(&st)?,
            geometric_discord(&st)?
        );
    }

    let dakic = TwoQubitState::werner_with_marginals(0.2, 0.4);
    println!("ρ(0.4ẑ, 0.4ẑ, −I/5): entangled {}", is_entangled(&dakic)?);
    println!("threshold |t| at λ=1/5: {:.6}", entanglement_threshold(0.2)?);

    let (t1, t2, t3) = (-0.5, -0.3, -0.2);
    bell_diagonal(t1, t2, t3)?;
    println!("diag({t1}, {t2}, {t3}): separable {}", is_separable_bell_diagonal(t1, t2, t3));

    let bad = validate_state(&TwoQubitState::werner(1.2), PSD_TOL);
    println!("werner λ=1.2: valid {}, min eigenvalue {:.3}", bad.valid, bad.min_eigenvalue);
    Ok(())
}
