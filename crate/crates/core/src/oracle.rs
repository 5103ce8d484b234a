//! Brute-force maximisation over gridded encodings and decodings.
//!
//! This is a check on the optimiser, not a replacement: decodings come from a
//! finite grid of the requested class and encodings from a finite grid of POVM
//! parameters, so the result is a lower bound on the class optimum. Every
//! grid dimension is nested under [`SearchConfig::doubled`], which makes the
//! search value non-decreasing along a refinement ladder.

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{make_frame, ppt_min_eigenvalue, Frame, Mat3, TwoQubitState, Vec3, PPT_TOL};
use crate::error::{Result, RspError};
use crate::optimizer::invariant::check_state;
use crate::optimizer::{bistochastic_g, InvariantChannel};
use crate::protocol::channel::extremal_parts;
use crate::protocol::{
    rotation_about, ChannelClass, DecodingChannel, DecodingPair, Encoding, EncodingStrategy, ExtremalChannelParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Polar divisions of the `â` direction grid.
    pub povm_angle_steps: usize,
    /// Divisions of `‖a‖` on `[0, min(a₊, a₋)]`; also sets the `a₊` grid in naive mode.
    pub povm_norm_steps: usize,
    /// Divisions of `u` (General) or of `(c, d)` (Invariant) or of the spin angle (Bistochastic).
    pub channel_u_steps: usize,
    /// Divisions of `w` (General only).
    pub channel_w_steps: usize,
    /// Number of rotations used for each of `O₁`, `O₂`.
    pub rotation_steps: usize,
    /// Resolution of the plane grid in [`compare_with_closed_form`].
    pub beta_steps: usize,
    pub n_nodes: usize,
    pub seed: u64,
    /// Dense `a₊` grid instead of `{0, ½, 1}`.
    pub naive: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            povm_angle_steps: 16,
            povm_norm_steps: 2,
            channel_u_steps: 8,
            channel_w_steps: 8,
            rotation_steps: 2,
            beta_steps: 2,
            n_nodes: 64,
            seed: 0,
            naive: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let steps = [
            ("povm_angle_steps", self.povm_angle_steps),
            ("povm_norm_steps", self.povm_norm_steps),
            ("channel_u_steps", self.channel_u_steps),
            ("channel_w_steps", self.channel_w_steps),
            ("rotation_steps", self.rotation_steps),
            ("beta_steps", self.beta_steps),
        ];
        for (name, v) in steps {
            if v < 2 {
                return Err(RspError::InvalidConfig(format!("{name} must be at least 2, got {v}")));
            }
        }
        if self.n_nodes < 4 {
            return Err(RspError::InvalidConfig(format!("n_nodes must be at least 4, got {}", self.n_nodes)));
        }
        Ok(())
    }

    /// Every grid twice as fine. Quadrature nodes are left alone so values
    /// stay comparable.
    pub fn doubled(&self) -> Self {
        Self {
            povm_angle_steps: 2 * self.povm_angle_steps,
            povm_norm_steps: 2 * self.povm_norm_steps,
            channel_u_steps: 2 * self.channel_u_steps,
            channel_w_steps: 2 * self.channel_w_steps,
            rotation_steps: 2 * self.rotation_steps,
            beta_steps: 2 * self.beta_steps,
            ..*self
        }
    }
}

/// Grid point a decoding channel came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelLabel {
    Extremal { u: f64, w: f64, o1: usize, o2: usize },
    Invariant { t_beta: f64, c: f64, d: f64 },
    Spin { theta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub g_best: f64,
    pub decoding: DecodingPair,
    pub labels: (ChannelLabel, ChannelLabel),
    pub channels: usize,
    pub pairs_evaluated: usize,
}

/// Channels in frame coordinates.
struct LocalChannel {
    t: Mat3,
    v: Vec3,
    label: ChannelLabel,
}

/// Prefix-stable rotation list: six fixed quarter and half turns, then
/// seeded Haar-random rotations.
fn rotation_set(n: usize, seed: u64) -> Vec<Mat3> {
    let h = PI / 2.0;
    let mut out = vec![
        Mat3::identity(),
        rotation_about(&Vec3::y(), h),
        rotation_about(&Vec3::x(), -h),
        rotation_about(&Vec3::y(), -h),
        rotation_about(&Vec3::x(), h),
        rotation_about(&Vec3::z(), PI),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f0a);
    while out.len() < n {
        out.push(haar_rotation(&mut rng));
    }
    out.truncate(n);
    out
}

fn haar_rotation<R: Rng>(rng: &mut R) -> Mat3 {
    let q = nalgebra::Quaternion::new(
        rng.sample::<f64, _>(StandardNormal),
        rng.sample::<f64, _>(StandardNormal),
        rng.sample::<f64, _>(StandardNormal),
        rng.sample::<f64, _>(StandardNormal),
    );
    nalgebra::UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

fn channel_key(t: &Mat3, v: &Vec3) -> [u64; 12] {
    let mut k = [0u64; 12];
    for (slot, x) in k.iter_mut().zip(t.iter().chain(v.iter())) {
        *slot = (x + 0.0).to_bits();
    }
    k
}

fn decoding_grid(class: ChannelClass, cfg: &SearchConfig) -> Vec<LocalChannel> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |t: Mat3, v: Vec3, label: ChannelLabel| {
        if seen.insert(channel_key(&t, &v)) {
            out.push(LocalChannel { t, v, label });
        }
    };
    match class {
        ChannelClass::General => {
            let rots = rotation_set(cfg.rotation_steps, cfg.seed);
            for ku in 0..cfg.channel_u_steps {
                let u = 2.0 * PI * ku as f64 / cfg.channel_u_steps as f64;
                for kw in 0..cfg.channel_w_steps {
                    let w = PI * kw as f64 / cfg.channel_w_steps as f64;
                    for (i1, o1) in rots.iter().enumerate() {
                        for (i2, o2) in rots.iter().enumerate() {
                            let (t, v) = extremal_parts(u, w, o1, o2);
                            push(t, v, ChannelLabel::Extremal { u, w, o1: i1, o2: i2 });
                        }
                    }
                }
            }
        }
        ChannelClass::Invariant => {
            // Only the in-plane block c I + d J reaches targets in the plane.
            // With t_β = 1 the channel is CPTP exactly when c² + d² ≤ 1.
            let n = cfg.channel_u_steps;
            let grid = |k: usize| -1.0 + 2.0 * k as f64 / n as f64;
            for kc in 0..=n {
                for kd in 0..=n {
                    let (c, d) = (grid(kc), grid(kd));
                    if c * c + d * d <= 1.0 + 1e-12 {
                        let inv = InvariantChannel { t_beta: 1.0, c, d, shift_beta: 0.0 };
                        push(inv.local_matrix(), Vec3::zeros(), ChannelLabel::Invariant { t_beta: 1.0, c, d });
                    }
                }
            }
        }
        ChannelClass::Bistochastic => {
            for k in 0..cfg.channel_u_steps {
                let theta = 2.0 * PI * k as f64 / cfg.channel_u_steps as f64;
                push(rotation_about(&Vec3::z(), theta), Vec3::zeros(), ChannelLabel::Spin { theta });
            }
        }
    }
    out
}

/// Unit vectors `θ = πi/A`, `φ = 2πj/A`; the poles appear once.
fn direction_grid(steps: usize) -> Vec<Vec3> {
    let mut dirs = vec![Vec3::z()];
    for i in 1..steps {
        let theta = PI * i as f64 / steps as f64;
        for j in 0..steps {
            let phi = 2.0 * PI * j as f64 / steps as f64;
            dirs.push(Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()));
        }
    }
    dirs.push(-Vec3::z());
    dirs
}

struct EncodingGrid {
    dirs: Vec<Vec3>,
    norms: Vec<f64>,
    a_plus: Vec<f64>,
}

impl EncodingGrid {
    fn new(cfg: &SearchConfig) -> Self {
        let n = cfg.povm_norm_steps;
        let a_plus = if cfg.naive {
            (0..=2 * n).map(|j| j as f64 / (2 * n) as f64).collect()
        } else {
            vec![0.0, 0.5, 1.0]
        };
        Self {
            dirs: direction_grid(cfg.povm_angle_steps),
            norms: (0..=n).map(|k| k as f64 / n as f64).collect(),
            a_plus,
        }
    }

    /// Best `r·ŝ` over the grid given `h± = V±·ŝ` and `q = Mᵀŝ`.
    fn best(&self, h_plus: f64, h_minus: f64, q: &Vec3) -> f64 {
        let along = self.dirs.iter().map(|d| d.dot(q)).fold(f64::NEG_INFINITY, f64::max);
        let mut best = f64::NEG_INFINITY;
        for &ap in &self.a_plus {
            let amax = ap.min(1.0 - ap);
            let base = ap * h_plus + (1.0 - ap) * h_minus;
            for &k in &self.norms {
                best = best.max(base + k * amax * along);
            }
        }
        best
    }
}

/// Per-channel node data: `Tᵀ(T_cᵀ ŝ) + x (v_c·ŝ)` and `V_c·ŝ`.
struct ChannelNodes {
    q: Vec<Vec3>,
    h: Vec<f64>,
    /// Bound on any single branch's average contribution.
    upper: f64,
}

struct Problem {
    grid: EncodingGrid,
    nodes: Vec<Vec3>,
    x: Vec3,
    y: Vec3,
    t: Mat3,
}

impl Problem {
    fn new(state: &TwoQubitState, frame: &Frame, cfg: &SearchConfig) -> Self {
        let b = frame.basis();
        Self {
            grid: EncodingGrid::new(cfg),
            nodes: (0..cfg.n_nodes)
                .map(|k| {
                    let (s, c) = (2.0 * PI * k as f64 / cfg.n_nodes as f64).sin_cos();
                    Vec3::new(c, s, 0.0)
                })
                .collect(),
            x: b.transpose() * state.x,
            y: b.transpose() * state.y,
            t: b.transpose() * state.t * b,
        }
    }

    fn channel_nodes(&self, t_c: &Mat3, v_c: &Vec3) -> ChannelNodes {
        let mut q = Vec::with_capacity(self.nodes.len());
        let mut h = Vec::with_capacity(self.nodes.len());
        let mut upper = 0.0;
        for s in &self.nodes {
            let ts = t_c.tr_mul(s);
            let z = v_c.dot(s);
            let qk = self.t * ts + self.x * z;
            let hk = self.y.dot(&ts) + z;
            // the pair value is piecewise linear in a₊ with kinks at 0, ½, 1,
            // and ‖q₊ − q₋‖ ≤ ‖q₊‖ + ‖q₋‖ splits it into per-branch terms
            upper += 0.0f64.max(hk).max(0.5 * (hk + qk.norm()));
            q.push(qk);
            h.push(hk);
        }
        ChannelNodes { q, h, upper: upper / self.nodes.len() as f64 }
    }

    fn pair_g(&self, plus: &ChannelNodes, minus: &ChannelNodes) -> f64 {
        let mut sum = 0.0;
        for k in 0..self.nodes.len() {
            let q = plus.q[k] - minus.q[k];
            sum += self.grid.best(plus.h[k], minus.h[k], &q);
        }
        sum / self.nodes.len() as f64
    }
}

fn to_lab(frame: &Frame, t: &Mat3, v: &Vec3, class: ChannelClass) -> DecodingChannel {
    DecodingChannel::from_parts_unchecked(frame.to_lab(t), frame.basis() * v, class)
}

/// Largest grid value of `G` over decoding pairs of `class` and per-node
/// encodings, on the plane of `frame`.
///
/// Pairs are visited in decreasing order of a per-branch upper bound and
/// skipped once the bound cannot beat the incumbent, so the value is the
/// exact grid maximum.
pub fn brute_force_max_g(
    state: &TwoQubitState,
    frame: &Frame,
    class: ChannelClass,
    cfg: &SearchConfig,
) -> Result<OracleResult> {
    cfg.validate()?;
    check_state(state)?;
    let prob = Problem::new(state, frame, cfg);
    let channels = decoding_grid(class, cfg);
    let data: Vec<ChannelNodes> = channels.iter().map(|c| prob.channel_nodes(&c.t, &c.v)).collect();
    let mut order: Vec<usize> = (0..channels.len()).collect();
    order.sort_by(|&a, &b| data[b].upper.total_cmp(&data[a].upper));

    let mut best = (f64::NEG_INFINITY, 0, 0);
    let mut evaluated = 0;
    for (pos, &i) in order.iter().enumerate() {
        if data[i].upper + data[order[0]].upper <= best.0 {
            break;
        }
        for &j in &order[pos..] {
            if data[i].upper + data[j].upper <= best.0 {
                break;
            }
            for (p, m) in [(i, j), (j, i)] {
                evaluated += 1;
                let g = prob.pair_g(&data[p], &data[m]);
                if g > best.0 {
                    best = (g, p, m);
                }
                if i == j {
                    break;
                }
            }
        }
    }
    let (g_best, p, m) = best;
    let (cp, cm) = (&channels[p], &channels[m]);
    Ok(OracleResult {
        g_best,
        decoding: DecodingPair::new(to_lab(frame, &cp.t, &cp.v, class), to_lab(frame, &cm.t, &cm.v, class))?,
        labels: (cp.label, cm.label),
        channels: channels.len(),
        pairs_evaluated: evaluated,
    })
}

/// Grid maximum over encodings for a fixed decoding pair.
pub fn brute_force_g_for_pair(
    state: &TwoQubitState,
    frame: &Frame,
    dec: &DecodingPair,
    cfg: &SearchConfig,
) -> Result<f64> {
    cfg.validate()?;
    let prob = Problem::new(state, frame, cfg);
    let local = |c: &DecodingChannel| prob.channel_nodes(&frame.to_local(c.t()), &(frame.basis().transpose() * c.v()));
    Ok(prob.pair_g(&local(&dec.plus), &local(&dec.minus)))
}

/// Encodings drawn independently per target; reproducible for a given seed.
#[derive(Debug, Clone, Copy)]
pub struct RandomEncoding {
    pub seed: u64,
}

impl RandomEncoding {
    pub fn sample(&self, target: &Vec3) -> Encoding {
        let mut h = self.seed;
        for c in target.iter() {
            h = (h ^ (c + 0.0).to_bits()).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(29);
        }
        random_encoding(&mut ChaCha8Rng::seed_from_u64(h))
    }
}

impl EncodingStrategy for RandomEncoding {
    fn encoding(&self, target: &Vec3) -> Result<Encoding> {
        Ok(self.sample(target))
    }
}

fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// `a₊` uniform, `a` uniform in the ball of radius `min(a₊, a₋)`.
pub fn random_encoding<R: Rng>(rng: &mut R) -> Encoding {
    let a_plus: f64 = rng.gen();
    let radius = a_plus.min(1.0 - a_plus) * rng.gen::<f64>().cbrt();
    let a = random_unit(rng) * radius;
    Encoding::new(a_plus, a).expect("sampled inside the constraint")
}

/// A random channel of `class`; Invariant and Bistochastic ones are built
/// around `frame`.
pub fn random_channel<R: Rng>(rng: &mut R, class: ChannelClass, frame: &Frame) -> DecodingChannel {
    match class {
        ChannelClass::General => {
            let params = ExtremalChannelParams::new(
                rng.gen_range(0.0..2.0 * PI),
                rng.gen_range(0.0..PI),
                haar_rotation(rng),
                haar_rotation(rng),
            )
            .expect("Haar rotations are proper");
            crate::protocol::extremal_channel(&params)
        }
        ChannelClass::Invariant => loop {
            let inv = InvariantChannel {
                t_beta: rng.gen_range(-1.0..1.0),
                c: rng.gen_range(-1.0..1.0),
                d: rng.gen_range(-1.0..1.0),
                shift_beta: 0.0,
            };
            if let Ok(ch) = inv.to_channel(frame) {
                return ch;
            }
        },
        ChannelClass::Bistochastic => {
            let theta = rng.gen_range(0.0..2.0 * PI);
            DecodingChannel::rotation(&rotation_about(&frame.beta, theta)).expect("rotation")
        }
    }
}

/// A reproducible random protocol: per-target random encodings and a random
/// decoding pair of `class`.
pub fn random_strategy_sample(seed: u64, class: ChannelClass, frame: &Frame) -> (RandomEncoding, DecodingPair) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plus = random_channel(&mut rng, class, frame);
    let minus = random_channel(&mut rng, class, frame);
    (
        RandomEncoding { seed: seed.wrapping_add(0x0dd_ba11) },
        DecodingPair::new(plus, minus).expect("same class"),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormKind {
    /// The class optimum after minimising over planes.
    Optimum,
    /// Only known to be attainable; the optimum may be higher.
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub class: ChannelClass,
    pub oracle_g: f64,
    pub closed_form_g: f64,
    pub kind: ClosedFormKind,
    /// `closed_form_g - oracle_g`.
    pub gap: f64,
    /// `oracle_g ≤ closed_form_g + 1e-9`; always true for lower bounds.
    pub one_sided: bool,
    pub planes: usize,
    pub config: SearchConfig,
}

/// The closed-form `G` for `(state, class)` where one is known.
pub fn closed_form_g(state: &TwoQubitState, class: ChannelClass) -> Result<(f64, ClosedFormKind)> {
    let tol = 1e-12;
    match class {
        ChannelClass::Invariant => {
            let lambda = -state.t[(0, 0)];
            if (state.t + lambda * Mat3::identity()).norm() <= tol && lambda >= 0.0 {
                Ok((lambda, ClosedFormKind::Optimum))
            } else {
                Err(RspError::NoClosedForm("invariant class needs T = -λI".into()))
            }
        }
        ChannelClass::Bistochastic => {
            if state.is_bell_diagonal(tol) {
                let s = state.correlation_singular_values();
                Ok((bistochastic_g(s[0], s[1], s[2])?, ClosedFormKind::Optimum))
            } else {
                Err(RspError::NoClosedForm("bistochastic class needs vanishing marginals".into()))
            }
        }
        ChannelClass::General => {
            let kind = if ppt_min_eigenvalue(state)? >= -PPT_TOL {
                ClosedFormKind::Optimum
            } else {
                ClosedFormKind::LowerBound
            };
            Ok((2.0 / PI, kind))
        }
    }
}

/// Plane normals: principal axes of `TᵀT`, coordinate axes, and a nested
/// polar grid over the half sphere with `steps` divisions of a quarter turn.
pub fn beta_candidates(state: &TwoQubitState, steps: usize) -> Vec<Vec3> {
    let eig = SymmetricEigen::new(state.t.transpose() * state.t);
    let mut out: Vec<Vec3> = (0..3).map(|k| eig.eigenvectors.column(k).into_owned()).collect();
    out.extend([Vec3::x(), Vec3::y(), Vec3::z()]);
    for i in 1..=steps {
        let theta = 0.5 * PI * i as f64 / steps as f64;
        for j in 0..2 * steps {
            let phi = PI * j as f64 / steps as f64;
            out.push(Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()));
        }
    }
    out
}

/// Oracle `G` minimised over [`beta_candidates`], against the closed form.
pub fn compare_with_closed_form(
    state: &TwoQubitState,
    class: ChannelClass,
    cfg: &SearchConfig,
) -> Result<ClosedFormReport> {
    let (closed, kind) = closed_form_g(state, class)?;
    let planes = beta_candidates(state, cfg.beta_steps);
    let values = planes
        .par_iter()
        .map(|beta| Ok(brute_force_max_g(state, &make_frame(beta)?, class, cfg)?.g_best))
        .collect::<Result<Vec<f64>>>()?;
    let oracle = values.into_iter().fold(f64::INFINITY, f64::min);
    Ok(ClosedFormReport {
        class,
        oracle_g: oracle,
        closed_form_g: closed,
        kind,
        gap: closed - oracle,
        one_sided: kind == ClosedFormKind::LowerBound || oracle <= closed + 1e-9,
        planes: planes.len(),
        config: *cfg,
    })
}

/// Reports for `cfg`, `cfg.doubled()`, … (`levels` entries).
pub fn refinement_ladder(
    state: &TwoQubitState,
    class: ChannelClass,
    cfg: &SearchConfig,
    levels: usize,
) -> Result<Vec<ClosedFormReport>> {
    let mut out = Vec::with_capacity(levels);
    let mut c = *cfg;
    for _ in 0..levels {
        out.push(compare_with_closed_form(state, class, &c)?);
        c = c.doubled();
    }
    Ok(out)
}

/// Quadratic figure `∫ dŝ (ŝ·r)²` maximised over von Neumann directions on
/// the grid, with Bob flipping the plane on one outcome and idling on the
/// other (either assignment), then minimised over [`beta_candidates`].
pub fn restricted_quadratic_oracle(state: &TwoQubitState, cfg: &SearchConfig) -> Result<f64> {
    cfg.validate()?;
    check_state(state)?;
    let dirs = direction_grid(cfg.povm_angle_steps);
    let values = beta_candidates(state, cfg.beta_steps)
        .par_iter()
        .map(|beta| {
            let frame = make_frame(beta)?;
            let flip = DecodingChannel::rotation(&rotation_about(&frame.beta, PI))?;
            let id = DecodingChannel::identity();
            let pairs = [DecodingPair::new(flip, id)?, DecodingPair::new(id, flip)?];
            let mut best = f64::NEG_INFINITY;
            for dec in &pairs {
                let mut sum = 0.0;
                for s in crate::protocol::circle_nodes(&frame, cfg.n_nodes) {
                    let mut node = f64::NEG_INFINITY;
                    for d in &dirs {
                        let r = crate::protocol::final_bloch(state, &Encoding::von_neumann(d)?, dec);
                        node = node.max(r.dot(&s).powi(2));
                    }
                    sum += node;
                }
                best = best.max(sum / cfg.n_nodes as f64);
            }
            Ok(best)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::optimal_g_over_povm;
    use crate::protocol::{validate_channel_cptp, CPTP_TOL};

    #[test]
    fn config_rules() {
        assert!(SearchConfig::default().validate().is_ok());
        assert!(SearchConfig { rotation_steps: 1, ..Default::default() }.validate().is_err());
        assert!(SearchConfig { n_nodes: 3, ..Default::default() }.validate().is_err());
        let d = SearchConfig::default().doubled();
        assert_eq!((d.povm_angle_steps, d.channel_u_steps, d.n_nodes), (32, 16, 64));
    }

    #[test]
    fn grids_are_nested() {
        let cfg = SearchConfig::default();
        let coarse = direction_grid(cfg.povm_angle_steps);
        let fine = direction_grid(2 * cfg.povm_angle_steps);
        assert!(coarse.iter().all(|d| fine.iter().any(|f| f == d)));
        assert_eq!(coarse.len(), 15 * 16 + 2);
        for class in [ChannelClass::General, ChannelClass::Invariant, ChannelClass::Bistochastic] {
            let a = decoding_grid(class, &cfg);
            let b = decoding_grid(class, &cfg.doubled());
            let keys: HashSet<_> = b.iter().map(|c| channel_key(&c.t, &c.v)).collect();
            assert!(a.iter().all(|c| keys.contains(&channel_key(&c.t, &c.v))), "{class}");
        }
        let r2 = rotation_set(2, 7);
        assert_eq!(&rotation_set(9, 7)[..2], &r2[..]);
    }

    #[test]
    fn grid_channels_are_cptp() {
        let cfg = SearchConfig::default().doubled();
        for class in [ChannelClass::General, ChannelClass::Invariant, ChannelClass::Bistochastic] {
            for c in decoding_grid(class, &cfg) {
                let ch = DecodingChannel::from_parts_unchecked(c.t, c.v, class);
                assert!(validate_channel_cptp(&ch, CPTP_TOL).valid, "{:?}", c.label);
            }
        }
    }

    #[test]
    fn zero_state_gives_zero() {
        let frame = make_frame(&Vec3::new(0.2, 0.3, 0.9)).unwrap();
        let cfg = SearchConfig::default();
        for class in [ChannelClass::Invariant, ChannelClass::Bistochastic] {
            let r = brute_force_max_g(&TwoQubitState::maximally_mixed(), &frame, class, &cfg).unwrap();
            assert_eq!(r.g_best, 0.0);
        }
    }

    #[test]
    fn never_beats_pointwise_optimum() {
        let st = TwoQubitState::new(Vec3::new(0.1, 0.0, -0.2), Vec3::new(0.0, 0.2, 0.1), Mat3::identity() * -0.3);
        let frame = make_frame(&Vec3::new(1.0, 0.5, 0.2)).unwrap();
        let cfg = SearchConfig::default();
        for seed in 0..20 {
            let (_, dec) = random_strategy_sample(seed, ChannelClass::General, &frame);
            let oracle = brute_force_g_for_pair(&st, &frame, &dec, &cfg).unwrap();
            let exact = optimal_g_over_povm(&st, &frame, &dec, cfg.n_nodes).unwrap().g;
            assert!(oracle <= exact + 1e-12);
            assert!(exact - oracle < 2e-2, "{exact} vs {oracle}");
        }
    }

    #[test]
    fn werner_invariant_is_close() {
        let frame = make_frame(&Vec3::z()).unwrap();
        let r = brute_force_max_g(&TwoQubitState::werner(1.0 / 3.0), &frame, ChannelClass::Invariant, &SearchConfig::default())
            .unwrap();
        assert!((r.g_best - 1.0 / 3.0).abs() < 2e-2);
        assert!(r.g_best <= 1.0 / 3.0 + 1e-9);
    }

    #[test]
    fn random_samples_are_reproducible_and_valid() {
        let frame = make_frame(&Vec3::new(0.0, 1.0, 0.3)).unwrap();
        for class in [ChannelClass::General, ChannelClass::Invariant, ChannelClass::Bistochastic] {
            let (e1, d1) = random_strategy_sample(5, class, &frame);
            let (e2, d2) = random_strategy_sample(5, class, &frame);
            assert_eq!(d1, d2);
            let s = frame.target(0.4);
            assert_eq!(e1.sample(&s), e2.sample(&s));
            assert_eq!(d1.class(), class);
        }
    }

    #[test]
    fn restricted_quadratic_values() {
        let cfg = SearchConfig::default();
        let sep = restricted_quadratic_oracle(&TwoQubitState::werner(1.0 / 3.0), &cfg).unwrap();
        let ent = restricted_quadratic_oracle(&TwoQubitState::werner_with_marginals(0.2, 0.4), &cfg).unwrap();
        // grid values are lower bounds on λ²
        for (v, exact) in [(sep, 1.0 / 9.0), (ent, 1.0 / 25.0)] {
            assert!(v <= exact + 1e-12 && exact - v < 5e-3, "{v} vs {exact}");
        }
    }

    #[test]
    fn closed_form_availability() {
        assert!(closed_form_g(&TwoQubitState::werner(0.2), ChannelClass::Invariant).is_ok());
        let dakic = TwoQubitState::werner_with_marginals(0.2, 0.4);
        assert_eq!(closed_form_g(&dakic, ChannelClass::Invariant).unwrap().0, 0.2);
        assert!(closed_form_g(&dakic, ChannelClass::Bistochastic).is_err());
        assert_eq!(closed_form_g(&dakic, ChannelClass::General).unwrap().1, ClosedFormKind::LowerBound);
        assert_eq!(
            closed_form_g(&TwoQubitState::werner(1.0 / 3.0), ChannelClass::General).unwrap().1,
            ClosedFormKind::Optimum
        );
    }
}
