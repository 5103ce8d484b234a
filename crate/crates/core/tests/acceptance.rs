//! Acceptance gate: ten criteria, one PASS/FAIL line each, with wall-clock
//! budgets. Runs without the libtest harness so the lines always show.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsp_core::bloch::{
    entanglement_threshold, is_entangled, is_separable_bell_diagonal, validate_state, PSD_TOL,
};
use rsp_core::optimizer::elliptic::elliptic_e;
use rsp_core::optimizer::{
    bistochastic_g, bob_alone_protocol, fact1_monotonicity_scan, minimize_over_beta,
    optimize_bistochastic_bell_diagonal, optimize_invariant, perturbed_isotropic, separable_optimal_fidelity,
    werner_invariant_protocol, Fact1Family,
};
use rsp_core::oracle::{random_channel, random_encoding, refinement_ladder, restricted_quadratic_oracle, SearchConfig};
use rsp_core::protocol::{
    average_g, fidelity_from_g, final_bloch, quadratic_fidelity, ChannelClass, DecodingChannel, DecodingPair, Encoding,
};
use rsp_core::{make_frame, TwoQubitState, Vec3};

use common::{adaptive_simpson, random_bell_correlations, random_bell_state, random_state};

type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1_baseline() -> Check {
    let closed = 0.5 * (1.0 + 2.0 / PI);
    let f = separable_optimal_fidelity();
    ensure((f - closed).abs() <= 1e-9, || format!("closed form {f} vs {closed}"))?;
    ensure((f - 0.818309886).abs() <= 1e-9, || format!("closed form {f} vs 0.818309886"))?;
    let mut worst: f64 = 0.0;
    for beta in [Vec3::z(), Vec3::new(0.3, -0.8, 0.2), Vec3::x()] {
        let frame = make_frame(&beta).map_err(err)?;
        let (strat, dec) = bob_alone_protocol(&frame).map_err(err)?;
        for st in [TwoQubitState::werner(0.3), TwoQubitState::werner_with_marginals(0.2, 0.4)] {
            let g = average_g(&st, &frame, &strat, &dec, 2048).map_err(err)?;
            worst = worst.max((fidelity_from_g(g) - closed).abs());
        }
    }
    ensure(worst <= 1e-6, || format!("constructive protocol off by {worst:.3e}"))?;
    Ok(format!("F = {f:.9}, constructive within {worst:.2e}"))
}

fn c2_invariant() -> Check {
    let mut parts = Vec::new();
    for lambda in [0.1, 0.2, 1.0 / 3.0] {
        let r = optimize_invariant(&TwoQubitState::werner(lambda), 2048, 1000).map_err(err)?;
        let expected = 0.5 * (1.0 + lambda);
        ensure((r.f_star - expected).abs() <= 1e-5, || format!("λ={lambda}: {} vs {expected}", r.f_star))?;
        parts.push(format!("{:.6}", r.f_star));
    }
    let dakic = TwoQubitState::werner_with_marginals(0.2, 0.4);
    ensure(is_entangled(&dakic).map_err(err)?, || "λ=1/5, t=2/5 should be entangled".into())?;
    let ent = optimize_invariant(&dakic, 2048, 1000).map_err(err)?.f_star;
    ensure((ent - 0.6).abs() <= 1e-5, || format!("entangled state: {ent} vs 0.6"))?;
    let sep_state = TwoQubitState::werner(1.0 / 3.0);
    ensure(!is_entangled(&sep_state).map_err(err)?, || "Werner 1/3 should be separable".into())?;
    let sep = optimize_invariant(&sep_state, 2048, 1000).map_err(err)?.f_star;
    ensure(sep > ent, || format!("separable {sep} not above entangled {ent}"))?;
    Ok(format!("Werner F = [{}], entangled {ent:.6} < separable {sep:.6}", parts.join(", ")))
}

fn c3_bistochastic() -> Check {
    let third = -1.0 / 3.0;
    let t1 = optimize_bistochastic_bell_diagonal(third, third, third).map_err(err)?;
    ensure((t1 - 2.0 / 3.0).abs() <= 1e-9, || format!("T1: {t1}"))?;
    for eps in [0.01, 0.04, 0.1] {
        let st = perturbed_isotropic(eps).map_err(err)?;
        let f = optimize_bistochastic_bell_diagonal(st.t[(0, 0)], st.t[(1, 1)], st.t[(2, 2)]).map_err(err)?;
        let expected = 2.0 / 3.0 - eps / 4.0;
        ensure((f - expected).abs() <= 1e-9, || format!("T2 ε={eps}: {f} vs {expected}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t = random_bell_correlations(&mut rng);
        let mut m = t.map(f64::abs);
        m.sort_by(f64::total_cmp);
        let (a, b) = (m[0], m[1]);
        let integrand = move |phi: f64| (a * a * phi.cos().powi(2) + b * b * phi.sin().powi(2)).sqrt();
        let quad = adaptive_simpson(&integrand, 0.0, PI, 1e-13) / PI;
        let closed = bistochastic_g(t[0], t[1], t[2]).map_err(err)?;
        worst = worst.max((closed - quad).abs());
    }
    ensure(worst <= 1e-9, || format!("closed form vs quadrature off by {worst:.3e}"))?;
    Ok(format!("T1 = {t1:.9}, T2 rows exact, quadrature within {worst:.2e}"))
}

fn c4_elliptic() -> Check {
    let e0 = elliptic_e(0.0).map_err(err)?;
    let e1 = elliptic_e(1.0).map_err(err)?;
    ensure((e0 - PI / 2.0).abs() <= 1e-12, || format!("E(0) = {e0}"))?;
    ensure((e1 - 1.0).abs() <= 1e-12, || format!("E(1) = {e1}"))?;
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let k = i as f64 / 999.0;
        let integrand = move |th: f64| (1.0 - k * k * th.sin().powi(2)).max(0.0).sqrt();
        let quad = adaptive_simpson(&integrand, 0.0, PI / 2.0, 1e-15);
        worst = worst.max((elliptic_e(k).map_err(err)? - quad).abs());
    }
    ensure(worst <= 1e-12, || format!("AGM vs quadrature off by {worst:.3e}"))?;
    Ok(format!("E(0), E(1) exact, AGM within {worst:.2e}"))
}

fn c5_oracle() -> Check {
    let cases = [
        ("Werner 1/3, invariant", TwoQubitState::werner(1.0 / 3.0), ChannelClass::Invariant),
        ("T1, bistochastic", TwoQubitState::werner(1.0 / 3.0), ChannelClass::Bistochastic),
        ("separable baseline, general", TwoQubitState::werner(1.0 / 3.0), ChannelClass::General),
    ];
    let mut parts = Vec::new();
    for (name, st, class) in cases {
        let ladder = refinement_ladder(&st, class, &SearchConfig::default(), 2).map_err(err)?;
        let (coarse, fine) = (&ladder[0], &ladder[1]);
        for r in &ladder {
            ensure(r.oracle_g <= r.closed_form_g + 1e-9, || format!("{name}: oracle {} above {}", r.oracle_g, r.closed_form_g))?;
        }
        ensure(coarse.gap <= 2e-2, || format!("{name}: coarse gap {}", coarse.gap))?;
        ensure(fine.gap <= coarse.gap + 1e-12, || format!("{name}: gap grew {} -> {}", coarse.gap, fine.gap))?;
        parts.push(format!("{name} gap {:.1e}->{:.1e}", coarse.gap, fine.gap));
    }
    Ok(parts.join("; "))
}

fn c6_dominance() -> Check {
    let threshold = 0.8183099 - 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::INFINITY;
    let mut entangled = 0;
    for i in 0..50 {
        let st = random_state(&mut rng);
        if is_entangled(&st).map_err(err)? {
            entangled += 1;
        }
        let f = minimize_over_beta(&st, ChannelClass::General, 32, 2048).map_err(err)?.f_star;
        ensure(f >= threshold, || format!("state {i}: F = {f}"))?;
        worst = worst.min(f);
    }
    Ok(format!("min F = {worst:.9} over 50 states ({entangled} entangled)"))
}

fn c7_separability() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let (st, t) = random_bell_state(&mut rng);
        let ppt = !is_entangled(&st).map_err(err)?;
        ensure(ppt == is_separable_bell_diagonal(t[0], t[1], t[2]), || format!("disagreement at {t:?}"))?;
    }
    let mut checked = 0;
    for lambda in [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 1.0 / 3.0] {
        let thr = entanglement_threshold(lambda).map_err(err)?;
        for k in -10_000..=10_000 {
            let t = k as f64 / 10_000.0;
            let st = TwoQubitState::werner_with_marginals(lambda, t);
            if !validate_state(&st, PSD_TOL).valid {
                continue;
            }
            // points on the boundary itself may go either way
            if (t.abs() - thr).abs() < 1e-9 {
                continue;
            }
            checked += 1;
            let ent = is_entangled(&st).map_err(err)?;
            ensure(ent == (t.abs() > thr), || format!("λ={lambda}, t={t}: entangled {ent}, threshold {thr}"))?;
        }
    }
    Ok(format!("10^4 Bell-diagonal states agree; {checked} family points agree"))
}

fn c8_fact1() -> Check {
    let alphas: Vec<f64> = (0..21).map(|k| k as f64 / 20.0).collect();
    let g = fact1_monotonicity_scan(&Fact1Family { lambda: 0.2, y_norm: 0.3 }, &alphas, 2048).map_err(err)?;
    let worst = g.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    ensure(worst >= -1e-8, || format!("decrease of {worst:.3e}"))?;
    Ok(format!("smallest step {worst:.2e}, G from {:.6} to {:.6}", g[0], g[20]))
}

fn c9_quadratic() -> Check {
    let frame = make_frame(&Vec3::z()).map_err(err)?;
    let guess = DecodingChannel::constant(&frame.e1).map_err(err)?;
    let pair = DecodingPair::new(guess, guess).map_err(err)?;
    let unbiased = |_: &Vec3| Ok(Encoding::unbiased());
    let p = quadratic_fidelity(&TwoQubitState::werner(0.3), &frame, &unbiased, &pair, 2048).map_err(err)?;
    ensure((p - 0.5).abs() <= 1e-9, || format!("fixed guess P = {p}"))?;
    let (vn, dec) = werner_invariant_protocol(&frame).map_err(err)?;
    let sep = TwoQubitState::werner(1.0 / 3.0);
    let ent = TwoQubitState::werner_with_marginals(0.2, 0.4);
    let p_sep = quadratic_fidelity(&sep, &frame, &vn, &dec, 2048).map_err(err)?;
    let p_ent = quadratic_fidelity(&ent, &frame, &vn, &dec, 2048).map_err(err)?;
    let cfg = SearchConfig::default();
    let o_sep = restricted_quadratic_oracle(&sep, &cfg).map_err(err)?;
    let o_ent = restricted_quadratic_oracle(&ent, &cfg).map_err(err)?;
    Ok(format!(
        "guess P = {p:.9}; reported: separable P = {p_sep:.6} (oracle {o_sep:.6}), entangled P = {p_ent:.6} (oracle {o_ent:.6})"
    ))
}

fn c10_physicality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let classes = [ChannelClass::General, ChannelClass::Invariant, ChannelClass::Bistochastic];
    let mut max_norm: f64 = 0.0;
    for i in 0..10_000 {
        let st = random_state(&mut rng);
        let beta = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let Ok(frame) = make_frame(&beta) else { continue };
        let class = classes[i % 3];
        let dec = DecodingPair::new(random_channel(&mut rng, class, &frame), random_channel(&mut rng, class, &frame))
            .map_err(err)?;
        let enc = random_encoding(&mut rng);
        let s = frame.target(rng.gen_range(0.0..2.0 * PI));
        let r = final_bloch(&st, &enc, &dec);
        let f = fidelity_from_g(r.dot(&s));
        max_norm = max_norm.max(r.norm());
        ensure(r.norm() <= 1.0 + 1e-9, || format!("triple {i}: ‖r‖ = {}", r.norm()))?;
        ensure((-1e-9..=1.0 + 1e-9).contains(&f), || format!("triple {i}: F = {f}"))?;
    }
    Ok(format!("max ‖r‖ = {max_norm:.12}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 baseline", 1, c1_baseline),
        ("2 invariant class", 60, c2_invariant),
        ("3 bistochastic closed form", 10, c3_bistochastic),
        ("4 elliptic integral", 5, c4_elliptic),
        ("5 oracle equivalence", 120, c5_oracle),
        ("6 entanglement dominance", 300, c6_dominance),
        ("7 separability consistency", 30, c7_separability),
        ("8 monotonicity scan", 60, c8_fact1),
        ("9 quadratic critique", 10, c9_quadratic),
        ("10 physicality", 30, c10_physicality),
    ];
    let mut failures = 0;
    for (name, budget, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} criterion {name} ({:.2} s): {detail}", elapsed.as_secs_f64());
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
