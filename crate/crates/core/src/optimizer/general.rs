//! Search over pairs of extremal channels. Results are lower bounds on the
//! true optimum.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::plane::PlaneProblem;
use super::search::{nelder_mead, NelderMeadOptions};

/// Parameter vectors per branch: `(u, w, O₁ zyz, O₂ zyz)`.
pub(crate) type PairParams = [f64; 16];

/// Both branches constant, preparing `±ê`.
pub(crate) const BASELINE: PairParams = [
    FRAC_PI_2, FRAC_PI_2, 0.0, FRAC_PI_2, 0.0, 0.0, 0.0, 0.0, //
    3.0 * FRAC_PI_2, FRAC_PI_2, 0.0, FRAC_PI_2, 0.0, 0.0, 0.0, 0.0,
];

fn spin_pair(theta_plus: f64, theta_minus: f64) -> PairParams {
    let mut p = [0.0; 16];
    p[2] = theta_plus;
    p[10] = theta_minus;
    p
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct GeneralOptions {
    pub random_starts: usize,
    pub max_evals: usize,
    pub seed: u64,
}

impl Default for GeneralOptions {
    fn default() -> Self {
        Self { random_starts: 2, max_evals: 1500, seed: 0 }
    }
}

/// Multi-start simplex search on `search`, with every candidate re-scored on
/// `score` (typically the same plane with more nodes). The baseline is always
/// a candidate, so the result never falls below it.
pub(crate) fn max_over_extremal_pairs(
    search: &PlaneProblem,
    score: &PlaneProblem,
    spin_hint: (f64, f64),
    opts: &GeneralOptions,
) -> (f64, PairParams) {
    let mut starts = vec![BASELINE, spin_pair(PI, 0.0), spin_pair(0.0, PI), spin_pair(spin_hint.0, spin_hint.1)];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_starts {
        let mut p = [0.0; 16];
        p.iter_mut().for_each(|x| *x = rng.gen_range(0.0..2.0 * PI));
        starts.push(p);
    }

    let nm = NelderMeadOptions { step: 0.4, diameter_tol: 1e-7, max_evals: opts.max_evals };
    let mut candidates: Vec<PairParams> = vec![BASELINE, spin_pair(spin_hint.0, spin_hint.1)];
    for start in &starts {
        let m = nelder_mead(|x| -search.extremal_pair_g(x), start, &nm);
        let restart = nelder_mead(
            |x| -search.extremal_pair_g(x),
            &m.x,
            &NelderMeadOptions { step: 0.1, ..nm },
        );
        let mut p = [0.0; 16];
        p.copy_from_slice(&restart.x);
        candidates.push(p);
    }

    let mut best = (f64::NEG_INFINITY, BASELINE);
    for p in candidates {
        let g = score.extremal_pair_g(&p);
        if g > best.0 {
            best = (g, p);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{make_frame, TwoQubitState, Vec3};

    #[test]
    fn baseline_params_give_abs_cos() {
        let frame = make_frame(&Vec3::new(0.3, 0.1, 0.9)).unwrap();
        let prob = PlaneProblem::new(&TwoQubitState::werner(0.2), &frame, 1024);
        let g = prob.extremal_pair_g(&BASELINE);
        let expected: f64 =
            (0..1024).map(|k| (2.0 * PI * k as f64 / 1024.0).cos().abs()).sum::<f64>() / 1024.0;
        assert!((g - expected).abs() < 1e-14);
    }

    #[test]
    fn beats_baseline_for_singlet() {
        let frame = make_frame(&Vec3::z()).unwrap();
        let st = TwoQubitState::werner(1.0);
        let search = PlaneProblem::new(&st, &frame, 64);
        let score = PlaneProblem::new(&st, &frame, 256);
        let (g, _) = max_over_extremal_pairs(&search, &score, (PI, 0.0), &GeneralOptions::default());
        assert!((g - 1.0).abs() < 1e-12);
    }
}
