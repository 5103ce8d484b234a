//! One run of the protocol by hand: Alice measures, sends the outcome, Bob
//! applies the matching channel. Then the averaged fidelity over the circle.

use std::f64::consts::PI;

use rsp_core::protocol::{
    average_g, final_bloch, fidelity_from_g, outcome_probabilities, post_measurement_bloch, rotation_about,
    validate_channel_cptp, DecodingChannel, DecodingPair, Encoding, CPTP_TOL,
};
use rsp_core::{make_frame, Result, TwoQubitState, Vec3};

fn main() -> Result<()> {
    let state = TwoQubitState::werner(0.5);
    let frame = make_frame(&Vec3::z())?;
    let target = frame.target(PI / 3.0);

    let enc = Encoding::von_neumann(&target)?;
    let (p_plus, p_minus) = outcome_probabilities(&state, &enc);
    let post = post_measurement_bloch(&state, &enc);
    println!("p± = ({p_plus:.3}, {p_minus:.3})");
    println!("Bob after +: {:?}", post.n_plus.map(|v| v.data.0));

    let flip = DecodingChannel::rotation(&rotation_about(&frame.beta, PI))?;
    println!("flip is CPTP: {}", validate_channel_cptp(&flip, CPTP_TOL).valid);
    let dec = DecodingPair::new(flip, DecodingChannel::identity())?;

    let r = final_bloch(&state, &enc, &dec);
    println!("r·ŝ = {:.6}", r.dot(&target));

    let g = average_g(&state, &frame, &Encoding::von_neumann, &dec, 2048)?;
    println!("averaged fidelity {:.9}", fidelity_from_g(g));
    Ok(())
}
