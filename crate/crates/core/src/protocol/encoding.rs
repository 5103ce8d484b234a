use crate::bloch::{pauli, CMat2, Vec3, C64};
use crate::error::{Result, RspError};

const ENC_TOL: f64 = 1e-12;

/// Alice's binary POVM `M± = a± I ± a·σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Encoding {
    a_plus: f64,
    a_minus: f64,
    a: Vec3,
}

impl Encoding {
    /// Requires `0 ≤ a₊ ≤ 1` and `‖a‖ ≤ min(a₊, 1 - a₊)`.
    pub fn new(a_plus: f64, a: Vec3) -> Result<Self> {
        if !(0.0..=1.0).contains(&a_plus) {
            return Err(RspError::InvalidEncoding(format!("a+ = {a_plus} outside [0, 1]")));
        }
        let a_minus = 1.0 - a_plus;
        let bound = a_plus.min(a_minus);
        let norm = a.norm();
        if !norm.is_finite() || norm > bound + ENC_TOL {
            return Err(RspError::InvalidEncoding(format!(
                "|a| = {norm} exceeds min(a+, a-) = {bound}"
            )));
        }
        Ok(Self { a_plus, a_minus, a })
    }

    /// Projective measurement `P±â = ½(I ± â·σ)`.
    pub fn von_neumann(direction: &Vec3) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0) {
            return Err(RspError::ZeroVector);
        }
        Ok(Self { a_plus: 0.5, a_minus: 0.5, a: direction * (0.5 / n) })
    }

    /// No measurement; outcome `+` with certainty.
    pub fn always_plus() -> Self {
        Self { a_plus: 1.0, a_minus: 0.0, a: Vec3::zeros() }
    }

    /// No measurement; outcome `-` with certainty.
    pub fn always_minus() -> Self {
        Self { a_plus: 0.0, a_minus: 1.0, a: Vec3::zeros() }
    }

    /// Fair coin, independent of the state.
    pub fn unbiased() -> Self {
        Self { a_plus: 0.5, a_minus: 0.5, a: Vec3::zeros() }
    }

    /// Decomposes the `+` element of a two-outcome POVM.
    pub fn from_povm(m_plus: &CMat2) -> Result<Self> {
        let p = pauli();
        let a_plus = 0.5 * m_plus.trace().re;
        let a = Vec3::from_fn(|k, _| 0.5 * (m_plus * p[k + 1]).trace().re);
        Self::new(a_plus.clamp(0.0, 1.0), a)
    }

    pub fn a_plus(&self) -> f64 {
        self.a_plus
    }

    pub fn a_minus(&self) -> f64 {
        self.a_minus
    }

    pub fn a(&self) -> Vec3 {
        self.a
    }

    /// `a_r` for `r = ±1`.
    pub fn weight(&self, sign: f64) -> f64 {
        if sign > 0.0 {
            self.a_plus
        } else {
            self.a_minus
        }
    }
}

/// `(M₊, M₋)`.
pub fn povm_elements(enc: &Encoding) -> (CMat2, CMat2) {
    let p = pauli();
    let mut sigma_a = CMat2::zeros();
    for k in 0..3 {
        sigma_a += p[k + 1] * C64::new(enc.a[k], 0.0);
    }
    let plus = p[0] * C64::new(enc.a_plus, 0.0) + sigma_a;
    let minus = p[0] * C64::new(enc.a_minus, 0.0) - sigma_a;
    (plus, minus)
}

/// Assigns an encoding to every target direction on the circle.
pub trait EncodingStrategy {
    fn encoding(&self, target: &Vec3) -> Result<Encoding>;
}

impl<F> EncodingStrategy for F
where
    F: Fn(&Vec3) -> Result<Encoding>,
{
    fn encoding(&self, target: &Vec3) -> Result<Encoding> {
        self(target)
    }
}

/// The same encoding for every target.
#[derive(Debug, Clone, Copy)]
pub struct FixedEncoding(pub Encoding);

impl EncodingStrategy for FixedEncoding {
    fn encoding(&self, _target: &Vec3) -> Result<Encoding> {
        Ok(self.0)
    }
}
