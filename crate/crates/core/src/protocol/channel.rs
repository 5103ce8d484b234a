//! Bob's decoding channels in affine form `u ↦ T u + v`.

use nalgebra::{Rotation3, Unit};
use serde::{Deserialize, Serialize};

use crate::bloch::{hermitian_eigenvalues, pauli, CMat2, CMat4, Mat3, Vec3, C64};
use crate::error::{Result, RspError};

/// Choi eigenvalues down to `-CPTP_TOL` are accepted.
pub const CPTP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelClass {
    General,
    /// Twirled over rotations in the target plane.
    Invariant,
    /// Unital decodings that commute with rotations about `β̂`, i.e. spins
    /// about the plane normal. This is the family over which the
    /// elliptic-integral optimum for Bell-diagonal states is attained.
    Bistochastic,
}

impl std::fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChannelClass::General => "general",
            ChannelClass::Invariant => "invariant",
            ChannelClass::Bistochastic => "bistochastic",
        })
    }
}

impl std::str::FromStr for ChannelClass {
    type Err = RspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Self::General),
            "invariant" => Ok(Self::Invariant),
            "bistochastic" => Ok(Self::Bistochastic),
            other => Err(RspError::OutOfRange(format!("unknown decoding class {other:?}"))),
        }
    }
}

/// A qubit channel `Λ[½(I + u·σ)] = ½(I + (T u + v)·σ)`.
///
/// Values of this type are CPTP: the checked constructor validates the Choi
/// matrix and the internal constructors only build maps known to be CPTP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodingChannel {
    t: Mat3,
    v: Vec3,
    class: ChannelClass,
}

impl DecodingChannel {
    pub fn new(t: Mat3, v: Vec3, class: ChannelClass) -> Result<Self> {
        if class == ChannelClass::Bistochastic && v.norm() > 1e-12 {
            return Err(RspError::OutOfRange("bistochastic channel must have zero shift".into()));
        }
        let ch = Self { t, v, class };
        let report = validate_channel_cptp(&ch, CPTP_TOL);
        if !report.valid {
            return Err(RspError::InvalidChannel { min_eigenvalue: report.min_eigenvalue });
        }
        Ok(ch)
    }

    pub(crate) fn from_parts_unchecked(t: Mat3, v: Vec3, class: ChannelClass) -> Self {
        Self { t, v, class }
    }

    pub fn identity() -> Self {
        Self::from_parts_unchecked(Mat3::identity(), Vec3::zeros(), ChannelClass::Bistochastic)
    }

    /// Replaces any input by the pure state with Bloch vector `target`.
    pub fn constant(target: &Vec3) -> Result<Self> {
        Self::new(Mat3::zeros(), *target, ChannelClass::General)
    }

    /// Unitary channel rotating Bloch vectors by `rotation`.
    pub fn rotation(rotation: &Mat3) -> Result<Self> {
        check_rotation(rotation)?;
        Ok(Self::from_parts_unchecked(*rotation, Vec3::zeros(), ChannelClass::Bistochastic))
    }

    pub fn t(&self) -> &Mat3 {
        &self.t
    }

    pub fn v(&self) -> &Vec3 {
        &self.v
    }

    pub fn class(&self) -> ChannelClass {
        self.class
    }

    pub fn with_class(mut self, class: ChannelClass) -> Result<Self> {
        if class == ChannelClass::Bistochastic && self.v.norm() > 1e-12 {
            return Err(RspError::OutOfRange("bistochastic channel must have zero shift".into()));
        }
        self.class = class;
        Ok(self)
    }

    #[inline]
    pub(crate) fn map(&self, u: &Vec3) -> Vec3 {
        self.t * u + self.v
    }
}

pub(crate) fn check_rotation(m: &Mat3) -> Result<()> {
    let orth = (m.transpose() * m - Mat3::identity()).norm();
    let det = m.determinant();
    if orth > 1e-9 || (det - 1.0).abs() > 1e-9 {
        return Err(RspError::OutOfRange(format!(
            "matrix is not a proper rotation (|OᵀO - I| = {orth:.2e}, det = {det})"
        )));
    }
    Ok(())
}

/// Rotation by `angle` about `axis` (right-hand rule).
pub fn rotation_about(axis: &Vec3, angle: f64) -> Mat3 {
    Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle).into_inner()
}

/// `R_z(a) R_y(b) R_z(c)`.
pub fn euler_zyz(a: f64, b: f64, c: f64) -> Mat3 {
    rotation_about(&Vec3::z(), a) * rotation_about(&Vec3::y(), b) * rotation_about(&Vec3::z(), c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChoiReport {
    pub min_eigenvalue: f64,
    pub trace_preserving: bool,
    pub valid: bool,
}

/// Choi matrix `Σᵢⱼ |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)` of the affine map.
pub fn choi_matrix(ch: &DecodingChannel) -> CMat4 {
    let p = pauli();
    let mut choi = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let mut e = CMat2::zeros();
            e[(i, j)] = C64::new(1.0, 0.0);
            // e = ½(c₀ I + Σ c_k σ_k)
            let c0 = e.trace();
            let ck: [C64; 3] = [0, 1, 2].map(|k| (e * p[k + 1]).trace());
            let mut out = p[0] * c0;
            for a in 0..3 {
                let mut coeff = c0 * ch.v[a];
                for k in 0..3 {
                    coeff += ck[k] * ch.t[(a, k)];
                }
                out += p[a + 1] * coeff;
            }
            out *= C64::new(0.5, 0.0);
            for r in 0..2 {
                for s in 0..2 {
                    choi[(2 * i + r, 2 * j + s)] = out[(r, s)];
                }
            }
        }
    }
    choi
}

pub fn validate_channel_cptp(ch: &DecodingChannel, tol: f64) -> ChoiReport {
    if !(ch.t.iter().chain(ch.v.iter()).all(|x| x.is_finite())) {
        return ChoiReport { min_eigenvalue: f64::NAN, trace_preserving: false, valid: false };
    }
    let choi = choi_matrix(ch);
    let min_eigenvalue = hermitian_eigenvalues(&choi)[0];
    // Tr_out J must equal the input identity.
    let mut tp_err = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let tr = choi[(2 * i, 2 * j)] + choi[(2 * i + 1, 2 * j + 1)];
            let target = if i == j { 1.0 } else { 0.0 };
            tp_err = tp_err.max((tr - C64::new(target, 0.0)).norm());
        }
    }
    let trace_preserving = tp_err < tol;
    ChoiReport { min_eigenvalue, trace_preserving, valid: min_eigenvalue >= -tol && trace_preserving }
}

/// `T u + v`. The input must be a Bloch vector.
pub fn apply_channel(ch: &DecodingChannel, u: &Vec3) -> Result<Vec3> {
    if !(u.norm() <= 1.0 + 1e-12) {
        return Err(RspError::OutOfRange(format!("input Bloch vector has norm {}", u.norm())));
    }
    Ok(ch.map(u))
}

/// Parameters of a channel in the closure of the extreme points:
/// `T = O₁ diag(cos u, cos w, cos u cos w) O₂ᵀ`, `v = O₁ (0, 0, sin u sin w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalChannelParams {
    pub u: f64,
    pub w: f64,
    pub o1: Mat3,
    pub o2: Mat3,
}

impl ExtremalChannelParams {
    /// Wraps `u` into `[0, 2π)` and `w` into `[0, π)`; shifting `w` by `π`
    /// is absorbed into `O₁` as a `π` rotation about the x axis.
    pub fn new(u: f64, w: f64, o1: Mat3, o2: Mat3) -> Result<Self> {
        check_rotation(&o1)?;
        check_rotation(&o2)?;
        if !(u.is_finite() && w.is_finite()) {
            return Err(RspError::OutOfRange("non-finite channel angle".into()));
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        let u = u.rem_euclid(two_pi);
        let mut w = w.rem_euclid(two_pi);
        let mut o1 = o1;
        if w >= std::f64::consts::PI {
            w -= std::f64::consts::PI;
            o1 *= Mat3::from_diagonal(&Vec3::new(1.0, -1.0, -1.0));
        }
        Ok(Self { u, w, o1, o2 })
    }
}

pub fn extremal_channel(params: &ExtremalChannelParams) -> DecodingChannel {
    let (t, v) = extremal_parts(params.u, params.w, &params.o1, &params.o2);
    DecodingChannel::from_parts_unchecked(t, v, ChannelClass::General)
}

#[inline]
pub(crate) fn extremal_parts(u: f64, w: f64, o1: &Mat3, o2: &Mat3) -> (Mat3, Vec3) {
    let (su, cu) = u.sin_cos();
    let (sw, cw) = w.sin_cos();
    let t0 = Mat3::from_diagonal(&Vec3::new(cu, cw, cu * cw));
    let v0 = Vec3::new(0.0, 0.0, su * sw);
    (o1 * t0 * o2.transpose(), o1 * v0)
}

/// Decodings applied after outcomes `+` and `-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodingPair {
    pub plus: DecodingChannel,
    pub minus: DecodingChannel,
}

impl DecodingPair {
    pub fn new(plus: DecodingChannel, minus: DecodingChannel) -> Result<Self> {
        if plus.class != minus.class {
            return Err(RspError::OutOfRange(format!(
                "decoding classes differ: {} vs {}",
                plus.class, minus.class
            )));
        }
        Ok(Self { plus, minus })
    }

    pub fn class(&self) -> ChannelClass {
        self.plus.class
    }

    pub fn branch(&self, sign: f64) -> &DecodingChannel {
        if sign > 0.0 {
            &self.plus
        } else {
            &self.minus
        }
    }
}
