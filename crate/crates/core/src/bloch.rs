//! Two-qubit states in Bloch form `ρ(x, y, T)` and the diagnostics built on them.
//!
//! A state is stored as Alice's local Bloch vector `x`, Bob's local Bloch vector
//! `y` and the correlation tensor `T` with `T[(i, j)] = ⟨σᵢ ⊗ σⱼ⟩`. The density
//! matrix is only materialised for spectral checks (positivity and the partial
//! transpose test).

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Result, RspError};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;
pub type C64 = Complex<f64>;
pub type CMat2 = Matrix2<C64>;
pub type CMat4 = Matrix4<C64>;

/// Eigenvalues down to `-PSD_TOL` are accepted as positive.
pub const PSD_TOL: f64 = 1e-9;

/// A partial transpose with minimum eigenvalue below `-PPT_TOL` flags entanglement.
pub const PPT_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The identity followed by the three Pauli matrices.
pub fn pauli() -> [CMat2; 4] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        CMat2::new(l, o, o, l),
        CMat2::new(o, l, l, o),
        CMat2::new(o, -i, i, o),
        CMat2::new(l, o, o, -l),
    ]
}

/// Eigenvalues of a Hermitian 4×4 matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMat4) -> [f64; 4] {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = h.symmetric_eigenvalues();
    let mut out = [eig[0], eig[1], eig[2], eig[3]];
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// Shared resource state `ρ(x, y, T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    pub x: Vec3,
    pub y: Vec3,
    pub t: Mat3,
}

impl TwoQubitState {
    pub fn new(x: Vec3, y: Vec3, t: Mat3) -> Self {
        Self { x, y, t }
    }

    /// `ρ(0, 0, -λI)`.
    pub fn werner(lambda: f64) -> Self {
        Self::new(Vec3::zeros(), Vec3::zeros(), -lambda * Mat3::identity())
    }

    /// `ρ(t ẑ, t ẑ, -λI)`: isotropic correlations with equal marginals along z.
    pub fn werner_with_marginals(lambda: f64, t: f64) -> Self {
        let z = Vec3::z() * t;
        Self::new(z, z, -lambda * Mat3::identity())
    }

    pub fn maximally_mixed() -> Self {
        Self::new(Vec3::zeros(), Vec3::zeros(), Mat3::zeros())
    }

    /// True when both marginals vanish, i.e. a local-unitary image of a
    /// state diagonal in the Bell basis.
    pub fn is_bell_diagonal(&self, tol: f64) -> bool {
        self.x.norm() <= tol && self.y.norm() <= tol
    }

    /// Singular values of `T` in ascending order of magnitude.
    pub fn correlation_singular_values(&self) -> [f64; 3] {
        let sv = self.t.svd(false, false).singular_values;
        let mut s = [sv[0], sv[1], sv[2]];
        s.sort_by(|a, b| a.total_cmp(b));
        s
    }

    pub fn to_density_matrix(&self) -> CMat4 {
        to_density_matrix(self)
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(self.y.iter()).chain(self.t.iter()).all(|v| v.is_finite())
    }
}

/// Bloch coordinates `xᵢ = tr ρ(σᵢ⊗I)`, `yⱼ = tr ρ(I⊗σⱼ)`, `Tᵢⱼ = tr ρ(σᵢ⊗σⱼ)`.
pub fn from_density_matrix(rho: &CMat4) -> TwoQubitState {
    let p = pauli();
    let coeff = |a: usize, b: usize| (rho * p[a].kronecker(&p[b])).trace().re;
    TwoQubitState::new(
        Vec3::from_fn(|i, _| coeff(i + 1, 0)),
        Vec3::from_fn(|j, _| coeff(0, j + 1)),
        Mat3::from_fn(|i, j| coeff(i + 1, j + 1)),
    )
}

/// `¼[I⊗I + x·σ⊗I + I⊗y·σ + Σᵢⱼ Tᵢⱼ σᵢ⊗σⱼ]`.
pub fn to_density_matrix(state: &TwoQubitState) -> CMat4 {
    let p = pauli();
    let mut rho = p[0].kronecker(&p[0]);
    for i in 0..3 {
        rho += p[i + 1].kronecker(&p[0]) * c(state.x[i], 0.0);
        rho += p[0].kronecker(&p[i + 1]) * c(state.y[i], 0.0);
        for j in 0..3 {
            rho += p[i + 1].kronecker(&p[j + 1]) * c(state.t[(i, j)], 0.0);
        }
    }
    rho * c(0.25, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateReport {
    pub min_eigenvalue: f64,
    pub trace: f64,
    pub valid: bool,
}

pub fn validate_state(state: &TwoQubitState, tol: f64) -> StateReport {
    if !state.is_finite() {
        return StateReport { min_eigenvalue: f64::NAN, trace: f64::NAN, valid: false };
    }
    let rho = to_density_matrix(state);
    let min_eigenvalue = hermitian_eigenvalues(&rho)[0];
    StateReport { min_eigenvalue, trace: rho.trace().re, valid: min_eigenvalue >= -tol }
}

fn ensure_valid(state: &TwoQubitState) -> Result<()> {
    let report = validate_state(state, PSD_TOL);
    if report.valid {
        Ok(())
    } else {
        Err(RspError::InvalidState { min_eigenvalue: report.min_eigenvalue })
    }
}

/// Partial transpose on Bob's qubit: `(ρ^{T_B})_{(a b),(a' b')} = ρ_{(a b'),(a' b)}`.
pub fn partial_transpose_b(rho: &CMat4) -> CMat4 {
    CMat4::from_fn(|r, col| {
        let (a, b) = (r / 2, r % 2);
        let (a2, b2) = (col / 2, col % 2);
        rho[(2 * a + b2, 2 * a2 + b)]
    })
}

/// Minimum eigenvalue of the partial transpose. For two qubits a negative
/// value is equivalent to entanglement.
pub fn ppt_min_eigenvalue(state: &TwoQubitState) -> Result<f64> {
    ensure_valid(state)?;
    let pt = partial_transpose_b(&to_density_matrix(state));
    Ok(hermitian_eigenvalues(&pt)[0])
}

pub fn is_entangled(state: &TwoQubitState) -> Result<bool> {
    Ok(ppt_min_eigenvalue(state)? < -PPT_TOL)
}

/// `ρ(0, 0, diag(t1, t2, t3))`.
pub fn bell_diagonal(t1: f64, t2: f64, t3: f64) -> Result<TwoQubitState> {
    let state = TwoQubitState::new(
        Vec3::zeros(),
        Vec3::zeros(),
        Mat3::from_diagonal(&Vec3::new(t1, t2, t3)),
    );
    ensure_valid(&state)?;
    Ok(state)
}

pub fn is_separable_bell_diagonal(t1: f64, t2: f64, t3: f64) -> bool {
    t1.abs() + t2.abs() + t3.abs() <= 1.0
}

/// Largest `|t|` for which `ρ(t ẑ, t ẑ, -λI)` is still separable.
pub fn entanglement_threshold(lambda: f64) -> Result<f64> {
    let radicand = 1.0 - 2.0 * lambda - 3.0 * lambda * lambda;
    if !(lambda >= 0.0) || radicand < -1e-12 {
        return Err(RspError::OutOfRange(format!(
            "entanglement threshold needs 0 <= lambda <= 1/3, got {lambda}"
        )));
    }
    Ok(0.5 * radicand.max(0.0).sqrt())
}

/// Geometric discord of `ρ(0, 0, diag(t1, t2, t3))`: a quarter of the sum of
/// the two smallest squared correlations.
pub fn geometric_discord_bell_diagonal(t1: f64, t2: f64, t3: f64) -> Result<f64> {
    bell_diagonal(t1, t2, t3)?;
    let mut sq = [t1 * t1, t2 * t2, t3 * t3];
    sq.sort_by(|a, b| a.total_cmp(b));
    Ok(0.25 * (sq[0] + sq[1]))
}

/// Geometric discord of a state with vanishing marginals: a quarter of the
/// two smallest eigenvalues of `TᵀT`.
pub fn geometric_discord(state: &TwoQubitState) -> Result<f64> {
    ensure_valid(state)?;
    if !state.is_bell_diagonal(1e-12) {
        return Err(RspError::OutOfRange("discord formula needs vanishing marginals".into()));
    }
    let s = state.correlation_singular_values();
    Ok(0.25 * (s[0] * s[0] + s[1] * s[1]))
}

/// Orthonormal right-handed frame `{β̂, ê, ê′}` with `β̂ × ê = ê′`.
///
/// The target circle is `ŝ(φ) = cos φ ê + sin φ ê′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub beta: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
}

impl Frame {
    pub fn target(&self, phi: f64) -> Vec3 {
        self.e1 * phi.cos() + self.e2 * phi.sin()
    }

    /// Columns `(ê, ê′, β̂)`: maps frame coordinates to lab coordinates.
    pub fn basis(&self) -> Mat3 {
        Mat3::from_columns(&[self.e1, self.e2, self.beta])
    }

    /// Expresses a lab-frame linear map in frame coordinates.
    pub fn to_local(&self, m: &Mat3) -> Mat3 {
        let b = self.basis();
        b.transpose() * m * b
    }

    /// Inverse of [`Frame::to_local`].
    pub fn to_lab(&self, m: &Mat3) -> Mat3 {
        let b = self.basis();
        b * m * b.transpose()
    }
}

/// Builds the frame around `beta` by Gram–Schmidt against the coordinate
/// axis least aligned with it (lowest index on ties).
pub fn make_frame(beta: &Vec3) -> Result<Frame> {
    let n = beta.norm();
    if !(n > 1e-300) || !n.is_finite() {
        return Err(RspError::ZeroVector);
    }
    let beta = beta / n;
    let mut axis = 0;
    for k in 1..3 {
        if beta[k].abs() < beta[axis].abs() {
            axis = k;
        }
    }
    let mut e = Vec3::zeros();
    e[axis] = 1.0;
    let e1 = (e - beta * beta.dot(&e)).normalize();
    let e2 = beta.cross(&e1);
    Ok(Frame { beta, e1, e2 })
}

/// JSON layout `{"x": [..3], "y": [..3], "T": [[..3]; 3]}` with `T` row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub x: [f64; 3],
    pub y: [f64; 3],
    #[serde(rename = "T")]
    pub t: [[f64; 3]; 3],
}

impl From<StateFile> for TwoQubitState {
    fn from(f: StateFile) -> Self {
        Self::new(
            Vec3::from(f.x),
            Vec3::from(f.y),
            Mat3::from_fn(|i, j| f.t[i][j]),
        )
    }
}

impl From<&TwoQubitState> for StateFile {
    fn from(s: &TwoQubitState) -> Self {
        Self {
            x: [s.x[0], s.x[1], s.x[2]],
            y: [s.y[0], s.y[1], s.y[2]],
            t: [0, 1, 2].map(|i| [0, 1, 2].map(|j| s.t[(i, j)])),
        }
    }
}

impl TwoQubitState {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        Ok(file.into())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&StateFile::from(self)).expect("plain numeric struct")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eigen_close(m: &CMat4, expected: [f64; 4]) {
        let ev = hermitian_eigenvalues(m);
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{ev:?} vs {expected:?}");
        }
    }

    #[test]
    fn density_matrix_round_trip() {
        let st = TwoQubitState::new(
            Vec3::new(0.1, -0.2, 0.05),
            Vec3::new(0.0, 0.15, -0.1),
            Mat3::new(-0.3, 0.02, 0.0, 0.1, -0.25, 0.05, 0.0, -0.04, -0.2),
        );
        let back = from_density_matrix(&to_density_matrix(&st));
        assert!((back.x - st.x).norm() < 1e-15);
        assert!((back.y - st.y).norm() < 1e-15);
        assert!((back.t - st.t).norm() < 1e-15);
    }

    #[test]
    fn maximally_mixed_is_quarter_identity() {
        let rho = to_density_matrix(&TwoQubitState::maximally_mixed());
        assert!((rho - CMat4::identity() * c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singlet_is_rank_one() {
        let rho = to_density_matrix(&TwoQubitState::werner(1.0));
        eigen_close(&rho, [0.0, 0.0, 0.0, 1.0]);
        // (|01⟩ - |10⟩)/√2
        let s = 0.5f64.sqrt();
        let psi = nalgebra::Vector4::new(c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0));
        let overlap = (psi.adjoint() * rho * psi)[(0, 0)].re;
        assert!((overlap - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_of_up_states() {
        let st = TwoQubitState::new(Vec3::z(), Vec3::z(), Mat3::from_diagonal(&Vec3::new(0.0, 0.0, 1.0)));
        let rho = to_density_matrix(&st);
        assert!((rho[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((rho.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn positivity_edge_of_marginal_family() {
        let w = TwoQubitState::werner(1.0 / 3.0);
        assert!(validate_state(&w, PSD_TOL).valid);
        let over = TwoQubitState::werner_with_marginals(0.2, 0.41);
        assert!(!validate_state(&over, PSD_TOL).valid);
        let edge = TwoQubitState::werner_with_marginals(0.2, 0.4);
        let rep = validate_state(&edge, PSD_TOL);
        assert!(rep.valid);
        assert!(rep.min_eigenvalue.abs() < 1e-12);
    }

    #[test]
    fn ppt_flags() {
        assert!(ppt_min_eigenvalue(&TwoQubitState::werner(1.0 / 3.0)).unwrap() >= -PPT_TOL);
        assert!(ppt_min_eigenvalue(&TwoQubitState::werner(0.5)).unwrap() < 0.0);
        // Werner partial transpose spectrum: (1 - 3λ)/4 once, (1 + λ)/4 three times.
        let pt = partial_transpose_b(&to_density_matrix(&TwoQubitState::werner(0.5)));
        eigen_close(&pt, [-0.125, 0.375, 0.375, 0.375]);
        let product = TwoQubitState::new(Vec3::z(), Vec3::z(), Vec3::z() * Vec3::z().transpose());
        assert!(ppt_min_eigenvalue(&product).unwrap() >= -PPT_TOL);
        assert!(ppt_min_eigenvalue(&TwoQubitState::werner(1.2)).is_err());
    }

    #[test]
    fn bell_diagonal_examples() {
        let third = -1.0 / 3.0;
        let s = bell_diagonal(third, third, third).unwrap();
        assert!(!is_entangled(&s).unwrap());
        assert!(is_separable_bell_diagonal(third, third, third));

        let eps = 0.04;
        let (a, b) = (third - 2.0 * eps, third + eps / 2.0);
        let s2 = bell_diagonal(a, b, b).unwrap();
        assert!(is_entangled(&s2).unwrap());
        assert!(!is_separable_bell_diagonal(a, b, b));

        assert_eq!(bell_diagonal(0.0, 0.0, 0.0).unwrap(), TwoQubitState::maximally_mixed());
        assert!(is_separable_bell_diagonal(1.0, 0.0, 0.0));
        assert!(bell_diagonal(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn threshold_values() {
        assert!((entanglement_threshold(0.2).unwrap() - 0.5 * 0.48f64.sqrt()).abs() < 1e-15);
        assert!(entanglement_threshold(1.0 / 3.0).unwrap().abs() < 1e-7);
        assert_eq!(entanglement_threshold(0.0).unwrap(), 0.5);
        assert!(entanglement_threshold(0.5).is_err());
        assert!(entanglement_threshold(-0.1).is_err());
        assert!(is_entangled(&TwoQubitState::werner_with_marginals(0.2, 0.35)).unwrap());
        assert!(!is_entangled(&TwoQubitState::werner_with_marginals(0.2, 0.34)).unwrap());
    }

    #[test]
    fn discord_examples() {
        let third = -1.0 / 3.0;
        let d = geometric_discord_bell_diagonal(third, third, third).unwrap();
        assert!((d - 1.0 / 18.0).abs() < 1e-15);
        assert_eq!(geometric_discord_bell_diagonal(0.0, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(geometric_discord_bell_diagonal(-1.0, 0.0, 0.0).unwrap(), 0.0);
        assert!(geometric_discord_bell_diagonal(1.0, 1.0, 1.0).is_err());
        let rotated = TwoQubitState::new(Vec3::zeros(), Vec3::zeros(), crate::protocol::rotation_about(&Vec3::x(), 0.4) * Mat3::from_diagonal(&Vec3::new(-0.5, -0.2, -0.1)));
        let direct = geometric_discord_bell_diagonal(-0.5, -0.2, -0.1).unwrap();
        assert!((geometric_discord(&rotated).unwrap() - direct).abs() < 1e-15);
        assert!(geometric_discord(&TwoQubitState::werner_with_marginals(0.2, 0.1)).is_err());
    }

    #[test]
    fn frames() {
        let f = make_frame(&Vec3::z()).unwrap();
        assert_eq!((f.beta, f.e1, f.e2), (Vec3::z(), Vec3::x(), Vec3::y()));
        let g = make_frame(&(Vec3::x() * 3.0)).unwrap();
        assert_eq!(g.beta, Vec3::x());
        assert!((g.beta.cross(&g.e1) - g.e2).norm() < 1e-15);
        assert!(g.e1.dot(&g.beta).abs() < 1e-15);
        assert!(matches!(make_frame(&Vec3::zeros()), Err(RspError::ZeroVector)));
        let b = f.basis();
        assert!((b.determinant() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let s = TwoQubitState::werner_with_marginals(0.2, 0.4);
        let back = TwoQubitState::from_json(&s.to_json()).unwrap();
        assert_eq!(s, back);
        assert!(TwoQubitState::from_json("{\"x\": [0, 0]}").is_err());
        let raw = r#"{"x":[0,0,0],"y":[0,0,0],"T":[[1,2,3],[4,5,6],[7,8,9]]}"#;
        let parsed = TwoQubitState::from_json(raw).unwrap();
        assert_eq!(parsed.t[(0, 2)], 3.0);
        assert_eq!(parsed.t[(2, 0)], 7.0);
    }
}
