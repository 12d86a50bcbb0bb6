//! Joint states over `{T, F, U}^n` and relative probability.
//!
//! `T` is "true and observable", `F` "false and observable" and `U`
//! "unobservable". A relative probability conditions on observability of
//! exactly the propositions an event mentions; unmentioned propositions are
//! marginalized over, whatever their observability.

mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{
    assignment_label, check_n, renormalize, ClassicalJoint, JointWire, OrderedJoint, PropositionId,
    NORMALIZATION_TOL,
};

pub use search::{search_we_violation, SearchSupport, ViolationSearch, Witness, WitnessSource};

/// Observability-qualified truth value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TfuState {
    T,
    F,
    U,
}

impl TfuState {
    pub const ALL: [TfuState; 3] = [TfuState::T, TfuState::F, TfuState::U];

    pub fn digit(self) -> usize {
        self as usize
    }

    pub fn from_digit(d: usize) -> Self {
        Self::ALL[d]
    }

    pub fn symbol(self) -> char {
        match self {
            TfuState::T => 'T',
            TfuState::F => 'F',
            TfuState::U => 'U',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'T' => Some(TfuState::T),
            'F' => Some(TfuState::F),
            'U' => Some(TfuState::U),
            _ => None,
        }
    }

    pub fn is_observable(self) -> bool {
        self != TfuState::U
    }
}

/// State of `prop` in joint-state index `index` (base 3, first proposition
/// most significant).
#[inline]
pub fn tfu_state(index: usize, n: usize, prop: usize) -> TfuState {
    TfuState::from_digit(index / 3usize.pow((n - 1 - prop) as u32) % 3)
}

pub fn tfu_label(index: usize, n: usize) -> String {
    (0..n).map(|k| tfu_state(index, n, k).symbol()).collect()
}

pub(crate) fn parse_tfu_key(key: &str, n: usize) -> Result<usize> {
    if key.chars().count() != n {
        return Err(Error::InvalidKey {
            key: key.to_string(),
            reason: "length differs from n",
        });
    }
    key.chars().try_fold(0usize, |acc, c| {
        TfuState::from_symbol(c)
            .map(|s| acc * 3 + s.digit())
            .ok_or(Error::InvalidKey {
                key: key.to_string(),
                reason: "symbols must be T, F or U",
            })
    })
}

/// Probability distribution over `{T,F,U}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TfuJoint {
    n: usize,
    weights: Vec<f64>,
}

impl TfuJoint {
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        let dim = 3usize.pow(n as u32);
        if weights.len() != dim {
            return Err(Error::WrongLength {
                expected: dim,
                found: weights.len(),
            });
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| w.is_nan() || **w < 0.0)
        {
            return Err(Error::NegativeWeight { index, value });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { n, weights })
    }

    pub fn from_pairs<'a, I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        check_n(n)?;
        let mut weights = vec![0.0; 3usize.pow(n as u32)];
        for (key, w) in pairs {
            weights[parse_tfu_key(key, n)?] += w;
        }
        Self::new(n, weights)
    }

    /// Like [`TfuJoint::from_pairs`] but accepts any mass within the load
    /// tolerance and renormalizes.
    pub fn from_pairs_lenient<'a, I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        check_n(n)?;
        let mut weights = vec![0.0; 3usize.pow(n as u32)];
        for (key, w) in pairs {
            weights[parse_tfu_key(key, n)?] += w;
        }
        Self::new(n, renormalize(weights)?)
    }

    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        check_n(n)?;
        let dim = 3usize.pow(n as u32);
        let mut weights = vec![0.0; dim];
        *weights.get_mut(index).ok_or(Error::WrongLength {
            expected: dim,
            found: index,
        })? = 1.0;
        Self::new(n, weights)
    }

    /// Parses `{"n": 2, "weights": {"TT": 0.2, "TU": 0.1, ...}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: JointWire = serde_json::from_str(text)?;
        Self::from_pairs_lenient(wire.n, wire.weights.iter().map(|(k, w)| (k.as_str(), *w)))
    }

    /// Serializes nonzero cells in canonical order.
    pub fn to_json(&self) -> String {
        let cells = (0..self.dim())
            .filter(|&i| self.weights[i] != 0.0)
            .map(|i| (tfu_label(i, self.n), self.weights[i]))
            .collect();
        serde_json::to_string(&OrderedJoint { n: self.n, cells }).expect("serializable")
    }

    /// Embeds a classical joint as a joint with no `U` mass.
    pub fn from_classical(joint: &ClassicalJoint<f64>) -> Self {
        let n = joint.n();
        let mut weights = vec![0.0; 3usize.pow(n as u32)];
        for (i, w) in joint.weights().iter().enumerate() {
            let label = assignment_label(i, n);
            weights[parse_tfu_key(&label, n).expect("T/F labels are valid")] = *w;
        }
        Self { n, weights }
    }

    /// The classical joint of a `U`-free joint; `None` if any `U` mass exists.
    pub fn to_classical(&self) -> Option<ClassicalJoint<f64>> {
        if !self.is_u_free() {
            return None;
        }
        let pairs: Vec<(String, f64)> = (0..self.dim())
            .filter(|&i| self.weights[i] > 0.0)
            .map(|i| (tfu_label(i, self.n), self.weights[i]))
            .collect();
        ClassicalJoint::from_pairs(self.n, pairs.iter().map(|(k, w)| (k.as_str(), *w))).ok()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, key: &str) -> Result<f64> {
        Ok(self.weights[parse_tfu_key(key, self.n)?])
    }

    pub fn state(&self, index: usize, prop: usize) -> TfuState {
        tfu_state(index, self.n, prop)
    }

    /// Total mass of joint states in which some proposition is `U`.
    pub fn u_mass(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| (0..self.n).any(|k| tfu_state(*i, self.n, k) == TfuState::U))
            .map(|(_, w)| w)
            .sum()
    }

    pub fn is_u_free(&self) -> bool {
        self.weights
            .iter()
            .enumerate()
            .all(|(i, w)| *w == 0.0 || (0..self.n).all(|k| tfu_state(i, self.n, k).is_observable()))
    }

    /// `(T, F, U)` masses of one proposition.
    pub fn marginal(&self, prop: PropositionId) -> Result<[f64; 3]> {
        self.check_prop(prop)?;
        let mut m = [0.0; 3];
        for (i, w) in self.weights.iter().enumerate() {
            m[tfu_state(i, self.n, prop.0).digit()] += w;
        }
        Ok(m)
    }

    fn check_prop(&self, prop: PropositionId) -> Result<()> {
        if prop.0 >= self.n {
            return Err(Error::UnknownProposition {
                index: prop.0,
                n: self.n,
            });
        }
        Ok(())
    }
}

/// `(proposition, asserted value)`; `true` asserts `T`, `false` asserts `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub prop: PropositionId,
    pub value: bool,
}

/// Conjunction of literals, at most one per proposition. It holds in a joint
/// state when every literal is matched by an observable value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RelEvent {
    literals: Vec<Literal>,
}

impl RelEvent {
    pub fn new<I: IntoIterator<Item = Literal>>(literals: I) -> Result<Self> {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort();
        if let Some(w) = literals.windows(2).find(|w| w[0].prop == w[1].prop) {
            return Err(Error::DuplicateLiteral(w[0].prop.0));
        }
        Ok(Self { literals })
    }

    /// The single-literal event "`prop` is true (and observable)".
    pub fn is_true(prop: usize) -> Self {
        Self {
            literals: vec![Literal {
                prop: PropositionId(prop),
                value: true,
            }],
        }
    }

    pub fn is_false(prop: usize) -> Self {
        Self {
            literals: vec![Literal {
                prop: PropositionId(prop),
                value: false,
            }],
        }
    }

    pub fn and(&self, other: &RelEvent) -> Result<Self> {
        Self::new(self.literals.iter().chain(&other.literals).copied())
    }

    /// Negation of a single-literal event.
    pub fn negated_literal(&self) -> Option<Self> {
        match self.literals.as_slice() {
            [l] => Some(Self {
                literals: vec![Literal {
                    prop: l.prop,
                    value: !l.value,
                }],
            }),
            _ => None,
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self.literals.iter().find(|l| l.prop.0 >= n) {
            Some(l) => Err(Error::UnknownProposition { index: l.prop.0, n }),
            None => Ok(()),
        }
    }

    pub fn holds(&self, index: usize, n: usize) -> bool {
        self.literals.iter().all(|l| {
            let want = if l.value { TfuState::T } else { TfuState::F };
            tfu_state(index, n, l.prop.0) == want
        })
    }

    /// Whether every mentioned proposition is observable in `index`.
    pub fn observable(&self, index: usize, n: usize) -> bool {
        self.literals
            .iter()
            .all(|l| tfu_state(index, n, l.prop.0).is_observable())
    }
}

impl fmt::Display for RelEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .literals
            .iter()
            .map(|l| format!("{}{}", if l.value { "" } else { "!" }, l.prop))
            .collect();
        f.write_str(&parts.join(" & "))
    }
}

/// Parses conjunctions such as `0 & !2`.
impl FromStr for RelEvent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut offset = 0;
        let mut literals = Vec::new();
        for part in s.split('&') {
            let trimmed = part.trim();
            let (value, body) = match trimmed.strip_prefix(['!', '~']) {
                Some(rest) => (false, rest.trim()),
                None => (true, trimmed),
            };
            let prop = match body {
                "p" => 0,
                "q" => 1,
                "r" => 2,
                _ => body.parse().map_err(|_| Error::Parse {
                    offset,
                    message: format!("expected a literal, found {trimmed:?}"),
                })?,
            };
            literals.push(Literal {
                prop: PropositionId(prop),
                value,
            });
            offset += part.len() + 1;
        }
        Self::new(literals)
    }
}

/// `[e]`: mass where every literal holds over mass where every mentioned
/// proposition is observable.
pub fn relative_probability(joint: &TfuJoint, e: &RelEvent) -> Result<f64> {
    e.validate(joint.n)?;
    let (mut numerator, mut denominator) = (0.0, 0.0);
    for (i, &w) in joint.weights.iter().enumerate() {
        if e.observable(i, joint.n) {
            denominator += w;
            if e.holds(i, joint.n) {
                numerator += w;
            }
        }
    }
    if denominator == 0.0 {
        return Err(Error::UndefinedRelativeProbability);
    }
    Ok(numerator / denominator)
}

/// `[e]_given`: relative probability of `e` restricted to the joint states
/// in which `given` holds.
pub fn relative_conditional(joint: &TfuJoint, e: &RelEvent, given: &RelEvent) -> Result<f64> {
    e.validate(joint.n)?;
    given.validate(joint.n)?;
    let (mut numerator, mut denominator) = (0.0, 0.0);
    for (i, &w) in joint.weights.iter().enumerate() {
        if given.holds(i, joint.n) && e.observable(i, joint.n) {
            denominator += w;
            if e.holds(i, joint.n) {
                numerator += w;
            }
        }
    }
    if denominator == 0.0 {
        return Err(Error::ConditioningOnNull);
    }
    Ok(numerator / denominator)
}

/// The two products `[p][q]_p` and `[q][p]_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutationGap {
    pub left: f64,
    pub right: f64,
}

impl CommutationGap {
    pub fn gap(&self) -> f64 {
        self.left - self.right
    }
}

pub fn commutation_gap(joint: &TfuJoint, p: &RelEvent, q: &RelEvent) -> Result<CommutationGap> {
    let left = relative_probability(joint, p)? * relative_conditional(joint, q, p)?;
    let right = relative_probability(joint, q)? * relative_conditional(joint, p, q)?;
    Ok(CommutationGap { left, right })
}

/// The three bracketed terms of the observability-conditioned
/// Wigner–d'Espagnat inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeTerms {
    pub ab: f64,
    pub not_b_c: f64,
    pub ac: f64,
}

impl WeTerms {
    /// `[a∧b] + [¬b∧c] − [a∧c]`.
    pub fn slack(&self) -> f64 {
        self.ab + self.not_b_c - self.ac
    }
}

pub fn strengthened_we_slack(
    joint: &TfuJoint,
    a: PropositionId,
    b: PropositionId,
    c: PropositionId,
) -> Result<WeTerms> {
    let lit = |prop: PropositionId, value| Literal { prop, value };
    let pair = |x, y| RelEvent::new([x, y]);
    Ok(WeTerms {
        ab: relative_probability(joint, &pair(lit(a, true), lit(b, true))?)?,
        not_b_c: relative_probability(joint, &pair(lit(b, false), lit(c, true))?)?,
        ac: relative_probability(joint, &pair(lit(a, true), lit(c, true))?)?,
    })
}

/// Two shielded entities X, Y with colour white (`T`) or black (`F`). Only
/// the configuration "X white, Y white but hidden" carries invisible mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhiteBlack {
    /// `|WW|`
    pub pi: f64,
    /// `|Ww|`
    pub eps: f64,
    pub wb: f64,
    pub bw: f64,
    pub bb: f64,
}

impl WhiteBlack {
    pub const EXAMPLE: WhiteBlack = WhiteBlack {
        pi: 0.2,
        eps: 0.1,
        wb: 0.3,
        bw: 0.2,
        bb: 0.2,
    };

    /// Observer-relative joint: `p` = "X is white", `q` = "Y is white".
    pub fn joint(&self) -> Result<TfuJoint> {
        TfuJoint::from_pairs(
            2,
            [
                ("TT", self.pi),
                ("TU", self.eps),
                ("TF", self.wb),
                ("FT", self.bw),
                ("FF", self.bb),
            ],
        )
    }

    /// Objective colour joint, with the hidden `Ww` mass counted as `WW`.
    pub fn classical(&self) -> Result<ClassicalJoint<f64>> {
        ClassicalJoint::from_pairs(
            2,
            [
                ("TT", self.pi + self.eps),
                ("TF", self.wb),
                ("FT", self.bw),
                ("FF", self.bb),
            ],
        )
    }

    /// `|p| = |WW| + |Ww| + |WB|`.
    pub fn p_mass(&self) -> f64 {
        self.pi + self.eps + self.wb
    }

    /// `|p|·Π/(|p| − ε)`
    pub fn closed_left(&self) -> f64 {
        self.p_mass() * self.pi / (self.p_mass() - self.eps)
    }

    /// `Π/(1 − ε)`
    pub fn closed_right(&self) -> f64 {
        self.pi / (1.0 - self.eps)
    }

    /// `|p||q|_p = Π + ε`
    pub fn classical_product(&self) -> f64 {
        self.pi + self.eps
    }
}
