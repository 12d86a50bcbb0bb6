//! From the `ℝ³` state of one proposition to a qubit.
//!
//! A single proposition's `(T, F, U)` masses are the squares of the unit
//! vector `(sinθ cosφ, sinθ sinφ, cosθ)`. Relative probability is `cos²φ`,
//! which the rotation `R` exposes as a projection in `ℝ³` and the
//! complexification `(θ, φ) ↦ (cosφ, e^{iθ} sinφ)` turns into a plain Born
//! expectation with `P = diag(1, 0)` on `ℂ²`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Vector2, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::PropositionId;
use crate::tfu::{relative_probability, RelEvent, TfuJoint};

/// Tolerance for unit norm, unitarity and projector checks.
pub const QUBIT_TOL: f64 = 1e-12;

const ANGLE_SLACK: f64 = 1e-12;

/// Amplitudes below this are treated as zero when fixing the global phase.
const NEGLIGIBLE: f64 = 1e-15;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Polar coordinates of a single proposition's `ℝ³` state, restricted to the
/// nonnegative octant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarState {
    /// Angle from the `U` axis, in `[0, π]`.
    pub theta: f64,
    /// Angle from the `T` axis within the `TF` plane, in `[0, π/2]`.
    pub phi: f64,
}

impl PolarState {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(-ANGLE_SLACK..=PI + ANGLE_SLACK).contains(&theta) {
            return Err(Error::AngleOutOfRange("theta must lie in [0, π]"));
        }
        if !(-ANGLE_SLACK..=FRAC_PI_2 + ANGLE_SLACK).contains(&phi) {
            return Err(Error::AngleOutOfRange("phi must lie in [0, π/2]"));
        }
        Ok(Self {
            theta: theta.clamp(0.0, PI),
            phi: phi.clamp(0.0, FRAC_PI_2),
        })
    }

    /// `θ = arccos √U`, `φ = atan2(√F, √T)`.
    pub fn from_masses(t: f64, f: f64, u: f64) -> Result<Self> {
        for (index, value) in [t, f, u].into_iter().enumerate() {
            if value.is_nan() || value < 0.0 {
                return Err(Error::NegativeWeight { index, value });
            }
        }
        let sum = t + f + u;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { sum });
        }
        let (t, f, u) = (t / sum, f / sum, u / sum);
        Ok(Self {
            theta: u.sqrt().min(1.0).acos(),
            phi: f.sqrt().atan2(t.sqrt()),
        })
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)` on the `(T, F, U)` axes.
    pub fn vector(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// `(T, F, U)` masses.
    pub fn masses(&self) -> [f64; 3] {
        let v = self.vector();
        [v.x * v.x, v.y * v.y, v.z * v.z]
    }

    /// Whether the `T`/`T+F` ratio is defined (some observable mass).
    pub fn in_ratio_domain(&self) -> bool {
        self.theta.sin() != 0.0
    }
}

/// Polar form of a one-proposition joint.
pub fn polar_from_tfu(joint: &TfuJoint) -> Result<PolarState> {
    if joint.n() != 1 {
        return Err(Error::DimensionMismatch {
            left: 1,
            right: joint.n(),
        });
    }
    let [t, f, u] = joint.marginal(PropositionId(0))?;
    PolarState::from_masses(t, f, u)
}

/// `R_φ`, `R_θ` and `R = R_φᵀ R_θ R_φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotations {
    pub r_phi: Matrix3<f64>,
    pub r_theta: Matrix3<f64>,
    pub r: Matrix3<f64>,
}

/// The rotation that carries `|s⟩` onto the `TF` plane.
///
/// `R_φ` turns `|s⟩` into `(0, sinθ, cosθ)`, `R_θ` rotates that onto the `F`
/// axis and `R_φᵀ` turns it back, giving `R|s⟩ = (cosφ, sinφ, 0)`.
pub fn rotation_matrices(theta: f64, phi: f64) -> Rotations {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    #[rustfmt::skip]
    let r_phi = Matrix3::new(
        sp, -cp, 0.0,
        cp,  sp, 0.0,
        0.0, 0.0, 1.0,
    );
    #[rustfmt::skip]
    let r_theta = Matrix3::new(
        1.0, 0.0, 0.0,
        0.0,  st,  ct,
        0.0, -ct,  st,
    );
    Rotations {
        r_phi,
        r_theta,
        r: r_phi.transpose() * r_theta * r_phi,
    }
}

/// `P* = diag(1, 0, 0)`.
pub fn plane_projector() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(1.0, 0.0, 0.0))
}

impl Rotations {
    /// `Rᵀ P* R`.
    pub fn in_basis_projector(&self) -> Matrix3<f64> {
        self.r.transpose() * plane_projector() * self.r
    }

    /// `R_φᵀ R_θᵀ R_φ P* R_φᵀ R_θ R_φ`, the same operator written as the
    /// sandwich of its factors.
    pub fn in_basis_projector_factored(&self) -> Matrix3<f64> {
        let (rp, rt) = (self.r_phi, self.r_theta);
        rp.transpose() * rt.transpose() * rp * plane_projector() * rp.transpose() * rt * rp
    }
}

/// Normalized vector in `ℂ²`, compared modulo global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    a: Complex64,
    b: Complex64,
}

impl QubitState {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm_sq = a.norm_sqr() + b.norm_sqr();
        if (norm_sq - 1.0).abs() > QUBIT_TOL {
            return Err(Error::NotUnitNorm { norm_sq });
        }
        Ok(Self { a, b })
    }

    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnitNorm {
                norm_sq: norm * norm,
            });
        }
        Ok(Self {
            a: a / norm,
            b: b / norm,
        })
    }

    pub fn zero() -> Self {
        Self {
            a: c(1.0, 0.0),
            b: c(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        Self {
            a: c(0.0, 0.0),
            b: c(1.0, 0.0),
        }
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    pub fn vector(&self) -> Vector2<Complex64> {
        Vector2::new(self.a, self.b)
    }

    pub fn norm_sq(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    /// Representative with `a` real and nonnegative (or `b`, when `a ≈ 0`).
    pub fn canonical(&self) -> Self {
        let on_a = self.a.norm() > NEGLIGIBLE;
        let pivot = if on_a { self.a } else { self.b };
        if pivot.norm() == 0.0 {
            return *self;
        }
        let phase = (pivot / pivot.norm()).conj();
        let out = Self {
            a: self.a * phase,
            b: self.b * phase,
        };
        // Pin the pivot to the real axis exactly.
        if on_a {
            Self {
                a: c(out.a.norm(), 0.0),
                ..out
            }
        } else {
            Self {
                b: c(out.b.norm(), 0.0),
                ..out
            }
        }
    }

    /// `|⟨self|other⟩|² ≥ 1 − tol`.
    pub fn eq_mod_phase(&self, other: &Self, tol: f64) -> bool {
        let overlap = self.a.conj() * other.a + self.b.conj() * other.b;
        overlap.norm_sqr() >= 1.0 - tol
    }
}

/// `(θ, φ) ↦ (cosφ, e^{iθ} sinφ)`.
pub fn complexify(p: &PolarState) -> QubitState {
    let (sp, cp) = p.phi.sin_cos();
    QubitState {
        a: c(cp, 0.0),
        b: Complex64::from_polar(sp, p.theta),
    }
}

/// Angles read back from a qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveredAngles {
    pub phi: f64,
    /// `None` when one amplitude vanishes and the phase carries no
    /// information (`φ ∈ {0, π/2}`).
    pub theta: Option<f64>,
}

/// Inverse of [`complexify`] on its image.
pub fn decomplexify(s: &QubitState) -> RecoveredAngles {
    let s = s.canonical();
    let (a, b) = (s.a.norm(), s.b.norm());
    let phi = b.atan2(a);
    let theta = (a > NEGLIGIBLE && b > NEGLIGIBLE).then(|| s.b.arg().rem_euclid(2.0 * PI));
    RecoveredAngles { phi, theta }
}

/// Hermitian idempotent `2×2` complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitProjector(Matrix2<Complex64>);

impl QubitProjector {
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let hermitian = (m - m.adjoint()).norm();
        let idempotent = (m * m - m).norm();
        let deviation = hermitian.max(idempotent);
        if deviation > QUBIT_TOL {
            return Err(Error::NotProjector { deviation });
        }
        Ok(Self(m))
    }

    /// `diag(1, 0)`: "`p` is true".
    pub fn truth() -> Self {
        Self(Matrix2::new(
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    /// `I − P`.
    pub fn complement(&self) -> Self {
        Self(Matrix2::identity() - self.0)
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Frobenius norm of `PQ − QP`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        (self.0 * other.0 - other.0 * self.0).norm()
    }
}

/// `⟨s|P|s⟩`.
pub fn qubit_born(s: &QubitState, p: &QubitProjector) -> f64 {
    let v = s.vector();
    (v.adjoint() * p.0 * v)[(0, 0)].re
}

/// `U† diag(1,0) U`: truth of `p` under measurement context `U`.
pub fn contextual_projector(u: &Matrix2<Complex64>) -> Result<QubitProjector> {
    let deviation = (u.adjoint() * u - Matrix2::identity()).norm();
    if deviation > QUBIT_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    QubitProjector::new(u.adjoint() * QubitProjector::truth().0 * u)
}

pub fn hadamard() -> Matrix2<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Matrix2::new(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0))
}

/// General single-qubit unitary
/// `[[cos(θ/2), −e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+λ)} cos(θ/2)]]`.
pub fn unitary(theta: f64, phi: f64, lambda: f64) -> Matrix2<Complex64> {
    let (s, co) = (theta / 2.0).sin_cos();
    Matrix2::new(
        c(co, 0.0),
        -Complex64::from_polar(s, lambda),
        Complex64::from_polar(s, phi),
        Complex64::from_polar(co, phi + lambda),
    )
}

/// Relative probability read off the qubit, with a flag for states outside
/// the domain of the real ratio formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitValue {
    pub value: f64,
    /// `false` when the proposition is never observable: the ratio is 0/0 and
    /// `value` is the qubit map's continuation.
    pub in_ratio_domain: bool,
}

/// `⟨s'|diag(1,0)|s'⟩` for the complexified image of a one-proposition joint.
pub fn qubit_relative_probability(joint: &TfuJoint) -> Result<QubitValue> {
    let polar = polar_from_tfu(joint)?;
    let value = qubit_born(&complexify(&polar), &QubitProjector::truth());
    let in_ratio_domain = match relative_probability(joint, &RelEvent::is_true(0)) {
        Ok(_) => true,
        Err(Error::UndefinedRelativeProbability) => false,
        Err(e) => return Err(e),
    };
    Ok(QubitValue {
        value,
        in_ratio_domain,
    })
}

/// Deviations at one `(θ, φ)` between the real picture and its qubit image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BridgeResiduals {
    /// `|⟨s'|diag(1,0)|s'⟩ − ⟨s|P̂|s⟩/⟨s|P̄|s⟩|`
    pub born_vs_ratio: f64,
    /// Largest entry of `RᵀR − I`.
    pub orthogonality: f64,
    /// Largest component of `R|s⟩ − (cosφ, sinφ, 0)`.
    pub plane_image: f64,
}

impl BridgeResiduals {
    pub fn max(&self) -> f64 {
        self.born_vs_ratio
            .max(self.orthogonality)
            .max(self.plane_image)
    }
}

pub fn bridge_residuals(polar: &PolarState) -> Result<BridgeResiduals> {
    if !polar.in_ratio_domain() {
        return Err(Error::UndefinedRelativeProbability);
    }
    let v = polar.vector();
    let ratio = v.x * v.x / (v.x * v.x + v.y * v.y);
    let born = qubit_born(&complexify(polar), &QubitProjector::truth());
    let rot = rotation_matrices(polar.theta, polar.phi);
    let (sp, cp) = polar.phi.sin_cos();
    Ok(BridgeResiduals {
        born_vs_ratio: (born - ratio).abs(),
        orthogonality: (rot.r.transpose() * rot.r - Matrix3::identity()).amax(),
        plane_image: (rot.r * v - Vector3::new(cp, sp, 0.0)).amax(),
    })
}

/// `p(N_α, S_β) = ½ sin²((β − α)/2)`, angles in radians.
pub fn sg_probability(alpha: f64, beta: f64) -> f64 {
    0.5 * ((beta - alpha) / 2.0).sin().powi(2)
}

/// Quantum side of the Wigner–d'Espagnat inequality for analyzers at 0°,
/// 45° and 90°.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeQuantumTable {
    pub n0_s45: f64,
    pub n45_s90: f64,
    /// `p(N_0,S_45) + p(N_45,S_90)`
    pub lhs: f64,
    /// `p(N_0,S_90)`
    pub rhs: f64,
}

impl WeQuantumTable {
    pub fn compute() -> Self {
        let d = f64::to_radians;
        let n0_s45 = sg_probability(d(0.0), d(45.0));
        let n45_s90 = sg_probability(d(45.0), d(90.0));
        Self {
            n0_s45,
            n45_s90,
            lhs: n0_s45 + n45_s90,
            rhs: sg_probability(d(0.0), d(90.0)),
        }
    }

    /// The classical inequality `lhs ≥ rhs` fails.
    pub fn violated(&self) -> bool {
        self.lhs < self.rhs
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,alpha_deg,beta_deg,value\n");
        for (name, a, b, v) in [
            ("p(N_0,S_45)", "0", "45", self.n0_s45),
            ("p(N_45,S_90)", "45", "90", self.n45_s90),
            ("lhs", "", "", self.lhs),
            ("p(N_0,S_90)", "0", "90", self.rhs),
        ] {
            out.push_str(&format!("{name},{a},{b},{v}\n"));
        }
        out.push_str(&format!("violated,,,{}\n", self.violated()));
        out
    }
}

/// Tensor product of single-proposition qubits, first factor most
/// significant.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<QubitState>,
    amplitudes: DVector<Complex64>,
}

pub fn product_state(states: &[QubitState]) -> Result<ProductState> {
    let (first, rest) = states
        .split_first()
        .ok_or(Error::DimensionMismatch { left: 1, right: 0 })?;
    for s in states {
        if (s.norm_sq() - 1.0).abs() > QUBIT_TOL {
            return Err(Error::NotUnitNorm {
                norm_sq: s.norm_sq(),
            });
        }
    }
    let to_dvec = |s: &QubitState| DVector::from_vec(vec![s.a, s.b]);
    let amplitudes = rest
        .iter()
        .fold(to_dvec(first), |acc, s| acc.kronecker(&to_dvec(s)));
    Ok(ProductState {
        factors: states.to_vec(),
        amplitudes,
    })
}

impl ProductState {
    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[QubitState] {
        &self.factors
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `⟨ψ|A|ψ⟩` (real part).
    pub fn expectation(&self, op: &DMatrix<Complex64>) -> Result<f64> {
        if op.nrows() != self.amplitudes.len() || op.ncols() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                left: self.amplitudes.len(),
                right: op.nrows(),
            });
        }
        Ok((self.amplitudes.adjoint() * op * &self.amplitudes)[(0, 0)].re)
    }
}

/// `I ⊗ … ⊗ P ⊗ … ⊗ I` with `P` on `factor` of `n`.
pub fn lift_projector(p: &QubitProjector, factor: usize, n: usize) -> Result<DMatrix<Complex64>> {
    if factor >= n {
        return Err(Error::UnknownProposition { index: factor, n });
    }
    let id = DMatrix::<Complex64>::identity(2, 2);
    let local = DMatrix::from_iterator(2, 2, p.0.iter().copied());
    Ok((0..n).fold(DMatrix::identity(1, 1), |acc, k| {
        acc.kronecker(if k == factor { &local } else { &id })
    }))
}
