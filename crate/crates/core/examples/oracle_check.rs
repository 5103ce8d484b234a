//! Brute-force search against the closed forms, on a doubling ladder.

use rsp_core::optimizer::perturbed_isotropic;
use rsp_core::oracle::{refinement_ladder, SearchConfig};
use rsp_core::protocol::ChannelClass;
use rsp_core::{Result, TwoQubitState};

fn main() -> Result<()> {
    let cases = [
        ("werner 1/3", TwoQubitState::werner(1.0 / 3.0), ChannelClass::Invariant),
        ("T2 ε=0.04", perturbed_isotropic(0.04)?, ChannelClass::Bistochastic),
        ("werner 1/3", TwoQubitState::werner(1.0 / 3.0), ChannelClass::General),
    ];
    for (name, st, class) in cases {
        for r in refinement_ladder(&st, class, &SearchConfig::default(), 2)? {
            println!(
                "{name:<11} {class:<12} oracle {:.6}  closed {:.6}  gap {:.2e}  one-sided {}",
                r.oracle_g, r.closed_form_g, r.gap, r.one_sided
            );
        }
    }
    Ok(())
}
