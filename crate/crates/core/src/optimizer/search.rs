//! Derivative-free minimisation and sphere grids.

use crate::bloch::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Initial simplex edge along each coordinate.
    pub step: f64,
    /// Stop once every vertex is within this distance of the best one.
    pub diameter_tol: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { step: 0.1, diameter_tol: 1e-6, max_evals: 2000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½)
/// minimising `f` from `x0`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(best).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            converged = true;
            break;
        }
        if evals >= opts.max_evals {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let along = |coef: f64, out: &mut Vec<f64>| {
            for i in 0..n {
                out[i] = centroid[i] + coef * (worst.0[i] - centroid[i]);
            }
        };

        along(-1.0, &mut trial);
        let fr = eval(&trial, &mut evals);
        if fr < simplex[0].1 {
            let reflected = trial.clone();
            along(-2.0, &mut trial);
            let fe = eval(&trial, &mut evals);
            simplex[n] = if fe < fr { (trial.clone(), fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (trial.clone(), fr);
        } else {
            let coef = if fr < worst.1 { -0.5 } else { 0.5 };
            along(coef, &mut trial);
            let fc = eval(&trial, &mut evals);
            if fc < worst.1.min(fr) {
                simplex[n] = (trial.clone(), fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&best) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *v = eval(x, &mut evals);
                }
            }
        }
    }
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evals, converged }
}

/// `n` quasi-uniform unit vectors on the upper half sphere (`z > 0`), one per
/// antipodal pair, followed by the three coordinate axes.
pub fn fibonacci_half_sphere(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut pts: Vec<Vec3> = (0..n)
        .map(|i| {
            let z = 1.0 - (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect();
    pts.extend([Vec3::x(), Vec3::y(), Vec3::z()]);
    pts
}

/// Unit vector with polar angle `theta` and azimuth `phi`.
pub fn spherical(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vec3::new(st * cp, st * sp, ct)
}

/// Inverse of [`spherical`].
pub fn to_spherical(v: &Vec3) -> (f64, f64) {
    let v = v.normalize();
    (v.z.clamp(-1.0, 1.0).acos(), v.y.atan2(v.x))
}
