//! Real geometrization of finite probability.
//!
//! A joint becomes a unit vector of signed square-root amplitudes, events
//! become diagonal 0/1 projectors and probabilities come back through the
//! Born rule `⟨s|P|s⟩`. Over `ℝ^{3^n}` relative probability is the ratio
//! `⟨s|P̂|s⟩ / ⟨s|P̄|s⟩`, which no single projector reproduces.

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::prob::{assignment_label, ClassicalJoint, Event, PropositionId};
use crate::tfu::{tfu_label, tfu_state, TfuJoint, TfuState};

/// Basis a state vector or projector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `{T,F}^n`, dimension `2^n`.
    Classical { n: usize },
    /// `{T,F,U}^n`, dimension `3^n`.
    Tfu { n: usize },
}

impl Basis {
    pub fn dim(self) -> usize {
        match self {
            Basis::Classical { n } => 1 << n,
            Basis::Tfu { n } => 3usize.pow(n as u32),
        }
    }

    pub fn label(self, index: usize) -> String {
        match self {
            Basis::Classical { n } => assignment_label(index, n),
            Basis::Tfu { n } => tfu_label(index, n),
        }
    }
}

/// Per-component signs; `true` flips a component negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signs(Vec<bool>);

impl Signs {
    pub fn positive(dim: usize) -> Self {
        Signs(vec![false; dim])
    }

    /// Bit `i` of `bits` sets the sign of component `i`.
    pub fn from_bits(dim: usize, bits: u64) -> Self {
        Signs((0..dim).map(|i| i < 64 && bits >> i & 1 == 1).collect())
    }

    pub fn negative(&self, i: usize) -> bool {
        self.0[i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: Basis,
    components: Vec<f64>,
}

impl StateVector {
    pub fn new(basis: Basis, components: Vec<f64>) -> Result<Self> {
        if components.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                left: basis.dim(),
                right: components.len(),
            });
        }
        let norm_sq: f64 = components.iter().map(|c| c * c).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnitNorm { norm_sq });
        }
        Ok(Self { basis, components })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum()
    }

    /// Squared components: the distribution the state was lifted from.
    pub fn distribution(&self) -> Vec<f64> {
        self.components.iter().map(|c| c * c).collect()
    }
}

fn signed_roots(weights: &[f64], signs: Option<&Signs>) -> Result<Vec<f64>> {
    if let Some(s) = signs {
        if s.0.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                left: weights.len(),
                right: s.0.len(),
            });
        }
    }
    Ok(weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let r = w.sqrt();
            if signs.is_some_and(|s| s.negative(i)) {
                -r
            } else {
                r
            }
        })
        .collect())
}

/// `|s⟩ = (±√|TT|, ±√|TF|, …)` over `ℝ^{2^n}`. Signs default to positive.
pub fn lift_classical(joint: &ClassicalJoint<f64>, signs: Option<&Signs>) -> Result<StateVector> {
    Ok(StateVector {
        basis: Basis::Classical { n: joint.n() },
        components: signed_roots(joint.weights(), signs)?,
    })
}

/// Square-root lift over `ℝ^{3^n}` in `TT, TF, TU, FT, …` order.
pub fn lift_tfu(joint: &TfuJoint, signs: Option<&Signs>) -> Result<StateVector> {
    Ok(StateVector {
        basis: Basis::Tfu { n: joint.n() },
        components: signed_roots(joint.weights(), signs)?,
    })
}

/// Diagonal projector with integer 0/1 entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalProjector {
    diag: Vec<i64>,
}

impl DiagonalProjector {
    pub fn from_mask(mask: &[bool]) -> Self {
        Self {
            diag: mask.iter().map(|&m| m as i64).collect(),
        }
    }

    pub fn from_indices(dim: usize, indices: &[usize]) -> Self {
        let mut diag = vec![0; dim];
        for &i in indices {
            diag[i] = 1;
        }
        Self { diag }
    }

    /// Checks that every entry is 0 or 1.
    pub fn from_diagonal(diag: Vec<i64>) -> Result<Self> {
        let p = Self { diag };
        if !p.is_idempotent() {
            return Err(Error::NotProjector { deviation: 1.0 });
        }
        Ok(p)
    }

    pub fn identity(dim: usize) -> Self {
        Self { diag: vec![1; dim] }
    }

    pub fn zero(dim: usize) -> Self {
        Self { diag: vec![0; dim] }
    }

    /// Projector onto the assignments satisfying `e` in `ℝ^{2^n}`.
    pub fn from_event(n: usize, e: &Event) -> Result<Self> {
        Ok(Self::from_mask(&e.mask(n)?))
    }

    fn tfu_where(n: usize, prop: PropositionId, keep: impl Fn(TfuState) -> bool) -> Result<Self> {
        if prop.0 >= n {
            return Err(Error::UnknownProposition { index: prop.0, n });
        }
        let dim = 3usize.pow(n as u32);
        Ok(Self {
            diag: (0..dim)
                .map(|i| keep(tfu_state(i, n, prop.0)) as i64)
                .collect(),
        })
    }

    /// `P̂`: `prop` is true and observable.
    pub fn tfu_true(n: usize, prop: PropositionId) -> Result<Self> {
        Self::tfu_where(n, prop, |s| s == TfuState::T)
    }

    pub fn tfu_false(n: usize, prop: PropositionId) -> Result<Self> {
        Self::tfu_where(n, prop, |s| s == TfuState::F)
    }

    /// `P̄`: `prop` is observable.
    pub fn tfu_observable(n: usize, prop: PropositionId) -> Result<Self> {
        Self::tfu_where(n, prop, TfuState::is_observable)
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[i64] {
        &self.diag
    }

    /// `P² = P`, checked entrywise in integers.
    pub fn is_idempotent(&self) -> bool {
        self.diag.iter().all(|&d| d * d == d)
    }

    /// `P ≤ Q` entrywise.
    pub fn is_below(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.diag.iter().zip(&other.diag).all(|(a, b)| a <= b)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// `I − P`
    pub fn complement(&self) -> Self {
        Self {
            diag: self.diag.iter().map(|d| 1 - d).collect(),
        }
    }

    /// `PQ`
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// `P + Q − PQ`
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(a, b)| a + b - a * b)
                .collect(),
        })
    }

    /// `PQ − QP`, always zero for diagonal operators but computed honestly.
    pub fn commutator(&self, other: &Self) -> Result<Vec<i64>> {
        let pq = self.product(other)?;
        let qp = other.product(self)?;
        Ok(pq.diag.iter().zip(&qp.diag).map(|(a, b)| a - b).collect())
    }
}

/// `(¬P, P∧Q, P∨Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanOps {
    pub not_p: DiagonalProjector,
    pub p_and_q: DiagonalProjector,
    pub p_or_q: DiagonalProjector,
}

pub fn boolean_ops(p: &DiagonalProjector, q: &DiagonalProjector) -> Result<BooleanOps> {
    Ok(BooleanOps {
        not_p: p.complement(),
        p_and_q: p.product(q)?,
        p_or_q: p.join(q)?,
    })
}

/// `⟨s|P|s⟩`.
pub fn born_rule(s: &StateVector, p: &DiagonalProjector) -> Result<f64> {
    if s.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            left: s.dim(),
            right: p.dim(),
        });
    }
    Ok(s.components
        .iter()
        .zip(&p.diag)
        .map(|(c, &d)| d as f64 * c * c)
        .sum())
}

/// `⟨s|P̂|s⟩ / ⟨s|P̄|s⟩`.
pub fn relative_born_ratio(
    s: &StateVector,
    p_hat: &DiagonalProjector,
    p_bar: &DiagonalProjector,
) -> Result<f64> {
    if !p_hat.is_below(p_bar) {
        return Err(Error::ProjectorNotDominated { what: "P̂" });
    }
    let denominator = born_rule(s, p_bar)?;
    if denominator == 0.0 {
        return Err(Error::UndefinedRelativeProbability);
    }
    Ok(born_rule(s, p_hat)? / denominator)
}

/// A state together with the value the ratio functional assigns to it.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioConstraint {
    pub label: &'static str,
    /// Squared amplitudes `|s_i|²`, exact.
    pub weights: Vec<Rational64>,
    pub ratio: Rational64,
}

/// Outcome of testing whether one diagonal operator can stand in for the
/// ratio functional of proposition 0 over `ℝ⁹`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearityWitness {
    pub constraints: Vec<RatioConstraint>,
    /// 0/1 diagonal projectors of dimension 9 that match every constraint.
    pub matching_projectors: usize,
    pub projectors_checked: usize,
    /// The constraints force contradictory values on the `UU` entry for any
    /// real diagonal operator, not only projectors.
    pub real_diagonal_contradiction: bool,
}

impl NonlinearityWitness {
    pub fn holds(&self) -> bool {
        self.matching_projectors == 0 && self.real_diagonal_contradiction
    }
}

/// Exhibits states on which no diagonal operator reproduces
/// `⟨s|P̂|s⟩ / ⟨s|P̄|s⟩` for proposition 0 of two.
///
/// The states are the point masses on `TT` and `FT` and the even mixtures
/// `{TT, UU}` and `{FT, UU}`. Their ratios are 1, 0, 1, 0. All arithmetic is
/// exact.
pub fn nonlinearity_witness() -> NonlinearityWitness {
    let idx = |key: &str| crate::tfu::parse_tfu_key(key, 2).expect("valid key");
    let half = Rational64::new(1, 2);
    let state = |cells: &[(&str, Rational64)]| {
        let mut w = vec![Rational64::zero(); 9];
        for &(k, v) in cells {
            w[idx(k)] = v;
        }
        w
    };
    let p_hat = DiagonalProjector::tfu_true(2, PropositionId(0)).expect("n = 2");
    let p_bar = DiagonalProjector::tfu_observable(2, PropositionId(0)).expect("n = 2");
    let expect = |w: &[Rational64], p: &DiagonalProjector| -> Rational64 {
        w.iter()
            .zip(p.diagonal())
            .map(|(w, &d)| *w * Rational64::from_integer(d))
            .sum()
    };
    let constraints: Vec<RatioConstraint> = [
        ("TT", state(&[("TT", Rational64::one())])),
        ("FT", state(&[("FT", Rational64::one())])),
        ("TT+UU", state(&[("TT", half), ("UU", half)])),
        ("FT+UU", state(&[("FT", half), ("UU", half)])),
    ]
    .into_iter()
    .map(|(label, weights)| {
        let ratio = expect(&weights, &p_hat) / expect(&weights, &p_bar);
        RatioConstraint {
            label,
            weights,
            ratio,
        }
    })
    .collect();

    let matching_projectors = (0u32..1 << 9)
        .map(|bits| {
            DiagonalProjector::from_mask(&(0..9).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())
        })
        .filter(|p| constraints.iter().all(|c| expect(&c.weights, p) == c.ratio))
        .count();

    // A real diagonal D must satisfy D_TT = 1 and D_FT = 0 from the point
    // masses, then D_UU = 2·1 − D_TT and D_UU = 2·0 − D_FT from the mixtures.
    let d_tt = constraints[0].ratio;
    let d_ft = constraints[1].ratio;
    let uu_from_t = (constraints[2].ratio - half * d_tt) / half;
    let uu_from_f = (constraints[3].ratio - half * d_ft) / half;

    NonlinearityWitness {
        constraints,
        matching_projectors,
        projectors_checked: 1 << 9,
        real_diagonal_contradiction: uu_from_t != uu_from_f,
    }
}
