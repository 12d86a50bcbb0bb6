//! Exact finite classical probability over truth assignments of `n`
//! propositions.
//!
//! Assignments are indexed densely in `0..2^n`, first proposition most
//! significant, with `T` before `F`: for two propositions the order is
//! `TT, TF, FT, FF`. Weights are generic over [`Weight`] so the same code runs
//! in `f64` and in exact rational arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, BitAnd, BitOr, Div, Mul, Not, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on the number of propositions in a dense joint.
pub const MAX_PROPOSITIONS: usize = 20;

/// Construction-time normalization tolerance for floating-point joints.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Normalization tolerance accepted when loading joints from JSON.
pub const LOAD_TOL: f64 = 1e-9;

/// Index of one atomic proposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PropositionId(pub usize);

impl PropositionId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for PropositionId {
    fn from(i: usize) -> Self {
        PropositionId(i)
    }
}

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Scalar type a joint distribution can be stored in.
pub trait Weight:
    Clone
    + PartialOrd
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_ratio(num: u64, den: u64) -> Self;
    /// Whether `sum` counts as a total mass of one.
    fn is_unit_sum(sum: &Self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Weight for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn is_unit_sum(sum: &Self) -> bool {
        (sum - 1.0).abs() <= NORMALIZATION_TOL
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Weight for Rational64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        Rational64::new(num as i64, den as i64)
    }

    fn is_unit_sum(sum: &Self) -> bool {
        sum.is_one()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Truth value of `prop` in assignment `index` of an `n`-proposition space.
#[inline]
pub fn truth(index: usize, n: usize, prop: usize) -> bool {
    (index >> (n - 1 - prop)) & 1 == 0
}

/// `"TF…"` label of an assignment index.
pub fn assignment_label(index: usize, n: usize) -> String {
    (0..n)
        .map(|k| if truth(index, n, k) { 'T' } else { 'F' })
        .collect()
}

fn parse_assignment(key: &str, n: usize) -> Result<usize> {
    if key.chars().count() != n {
        return Err(Error::InvalidKey {
            key: key.to_string(),
            reason: "length differs from n",
        });
    }
    key.chars().try_fold(0usize, |acc, c| match c {
        'T' => Ok(acc << 1),
        'F' => Ok((acc << 1) | 1),
        _ => Err(Error::InvalidKey {
            key: key.to_string(),
            reason: "symbols must be T or F",
        }),
    })
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PROPOSITIONS {
        return Err(Error::TooManyPropositions {
            n,
            cap: MAX_PROPOSITIONS,
        });
    }
    Ok(())
}

/// Probability distribution over `{T,F}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalJoint<W = f64> {
    n: usize,
    weights: Vec<W>,
}

impl<W: Weight> ClassicalJoint<W> {
    /// Builds a joint from dense weights in canonical assignment order.
    pub fn new(n: usize, weights: Vec<W>) -> Result<Self> {
        check_n(n)?;
        let dim = 1usize << n;
        if weights.len() != dim {
            return Err(Error::WrongLength {
                expected: dim,
                found: weights.len(),
            });
        }
        let mut sum = W::zero();
        for (index, w) in weights.iter().enumerate() {
            if *w < W::zero() {
                return Err(Error::NegativeWeight {
                    index,
                    value: w.to_f64(),
                });
            }
            sum = sum + w.clone();
        }
        if !W::is_unit_sum(&sum) {
            return Err(Error::NotNormalized { sum: sum.to_f64() });
        }
        Ok(Self { n, weights })
    }

    /// Builds a joint from `("TF", w)` pairs; missing assignments get zero.
    pub fn from_pairs<'a, I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, W)>,
    {
        check_n(n)?;
        let mut weights = vec![W::zero(); 1 << n];
        for (key, w) in pairs {
            let i = parse_assignment(key, n)?;
            weights[i] = weights[i].clone() + w;
        }
        Self::new(n, weights)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_n(n)?;
        let dim = 1u64 << n;
        Self::new(n, vec![W::from_ratio(1, dim); dim as usize])
    }

    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        check_n(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::WrongLength {
                expected: dim,
                found: index,
            });
        }
        let mut weights = vec![W::zero(); dim];
        weights[index] = W::one();
        Self::new(n, weights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> &W {
        &self.weights[index]
    }

    pub fn total(&self) -> W {
        self.weights
            .iter()
            .cloned()
            .fold(W::zero(), |acc, w| acc + w)
    }
}

impl ClassicalJoint<f64> {
    /// Parses the `{"n": .., "weights": {"TT": ..}}` wire format. The
    /// weights must sum to one within [`LOAD_TOL`] and are renormalized.
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: JointWire = serde_json::from_str(text)?;
        check_n(wire.n)?;
        let mut weights = vec![0.0; 1 << wire.n];
        for (key, w) in &wire.weights {
            weights[parse_assignment(key, wire.n)?] += w;
        }
        Self::new(wire.n, renormalize(weights)?)
    }

    pub fn to_json(&self) -> String {
        let cells = (0..self.dim())
            .filter(|&i| self.weights[i] != 0.0)
            .map(|i| (assignment_label(i, self.n), self.weights[i]))
            .collect();
        serde_json::to_string(&OrderedJoint { n: self.n, cells }).expect("serializable")
    }
}

impl ClassicalJoint<Rational64> {
    pub fn to_f64(&self) -> ClassicalJoint<f64> {
        ClassicalJoint {
            n: self.n,
            weights: self.weights.iter().map(Weight::to_f64).collect(),
        }
    }
}

/// Checks mass against [`LOAD_TOL`] and divides it out.
pub(crate) fn renormalize(mut weights: Vec<f64>) -> Result<Vec<f64>> {
    if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| **w < 0.0) {
        return Err(Error::NegativeWeight { index, value });
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > LOAD_TOL {
        return Err(Error::NotNormalized { sum });
    }
    weights.iter_mut().for_each(|w| *w /= sum);
    Ok(weights)
}

#[derive(Deserialize)]
pub(crate) struct JointWire {
    pub n: usize,
    pub weights: BTreeMap<String, f64>,
}

/// Serializes a joint with keys in canonical basis order.
pub(crate) struct OrderedJoint {
    pub n: usize,
    pub cells: Vec<(String, f64)>,
}

impl Serialize for OrderedJoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        struct Cells<'a>(&'a [(String, f64)]);
        impl Serialize for Cells<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                serializer.collect_map(self.0.iter().map(|(k, v)| (k, v)))
            }
        }
        let mut st = serializer.serialize_struct("Joint", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("weights", &Cells(&self.cells))?;
        st.end()
    }
}

/// Boolean formula over propositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Event {
    Atom(PropositionId),
    Not(Box<Event>),
    And(Box<Event>, Box<Event>),
    Or(Box<Event>, Box<Event>),
}

impl Event {
    pub fn atom(index: usize) -> Self {
        Event::Atom(PropositionId(index))
    }

    /// Evaluates against assignment `index` of an `n`-proposition space.
    /// Atoms must already be validated against `n`.
    pub fn eval(&self, index: usize, n: usize) -> bool {
        match self {
            Event::Atom(p) => truth(index, n, p.0),
            Event::Not(e) => !e.eval(index, n),
            Event::And(a, b) => a.eval(index, n) && b.eval(index, n),
            Event::Or(a, b) => a.eval(index, n) || b.eval(index, n),
        }
    }

    pub fn max_proposition(&self) -> usize {
        match self {
            Event::Atom(p) => p.0,
            Event::Not(e) => e.max_proposition(),
            Event::And(a, b) | Event::Or(a, b) => a.max_proposition().max(b.max_proposition()),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let max = self.max_proposition();
        if max >= n {
            return Err(Error::UnknownProposition { index: max, n });
        }
        Ok(())
    }

    /// Indicator of the event over the `2^n` assignments.
    pub fn mask(&self, n: usize) -> Result<Vec<bool>> {
        self.validate(n)?;
        Ok((0..1usize << n).map(|i| self.eval(i, n)).collect())
    }

    /// Disjunction of the minterms selected by `mask` (length `2^n`). An
    /// all-false mask yields the contradiction `0 & !0`.
    pub fn from_mask(n: usize, mask: &[bool]) -> Result<Self> {
        check_n(n)?;
        if mask.len() != 1 << n {
            return Err(Error::WrongLength {
                expected: 1 << n,
                found: mask.len(),
            });
        }
        let minterm = |index: usize| {
            (0..n)
                .map(|k| {
                    let atom = Event::atom(k);
                    if truth(index, n, k) {
                        atom
                    } else {
                        !atom
                    }
                })
                .reduce(|a, b| a & b)
                .expect("n >= 1")
        };
        Ok(mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| minterm(i))
            .reduce(|a, b| a | b)
            .unwrap_or_else(|| Event::atom(0) & !Event::atom(0)))
    }
}

impl Not for Event {
    type Output = Event;
    fn not(self) -> Event {
        Event::Not(Box::new(self))
    }
}

impl BitAnd for Event {
    type Output = Event;
    fn bitand(self, rhs: Event) -> Event {
        Event::And(Box::new(self), Box::new(rhs))
    }
}

impl BitOr for Event {
    type Output = Event;
    fn bitor(self, rhs: Event) -> Event {
        Event::Or(Box::new(self), Box::new(rhs))
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Atom(p) => write!(f, "{p}"),
            Event::Not(e) => match **e {
                Event::Atom(_) | Event::Not(_) => write!(f, "!{e}"),
                _ => write!(f, "!({e})"),
            },
            Event::And(a, b) => write!(f, "({a} & {b})"),
            Event::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

/// Parses formulas such as `0 & !(1 | 2)`. Atoms are proposition indices or
/// the letters `p`, `q`, `r` (0, 1, 2). `!`/`~` negate, `&` binds tighter than `|`.
impl FromStr for Event {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let e = parser.disjunction()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn disjunction(&mut self) -> Result<Event> {
        let mut e = self.conjunction()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            e = e | self.conjunction()?;
        }
        Ok(e)
    }

    fn conjunction(&mut self) -> Result<Event> {
        let mut e = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            e = e & self.unary()?;
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Event> {
        match self.peek() {
            Some(b'!') | Some(b'~') => {
                self.pos += 1;
                Ok(!self.unary()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.disjunction()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'p') => self.letter(0),
            Some(b'q') => self.letter(1),
            Some(b'r') => self.letter(2),
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                digits
                    .parse()
                    .map(Event::atom)
                    .map_err(|_| self.error("proposition index too large"))
            }
            Some(_) => Err(self.error("expected a proposition, '!' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn letter(&mut self, index: usize) -> Result<Event> {
        self.pos += 1;
        Ok(Event::atom(index))
    }
}

/// Sum of the weights of assignments satisfying `e`.
pub fn probability<W: Weight>(joint: &ClassicalJoint<W>, e: &Event) -> Result<W> {
    e.validate(joint.n)?;
    Ok(joint
        .weights
        .iter()
        .enumerate()
        .filter(|(i, _)| e.eval(*i, joint.n))
        .fold(W::zero(), |acc, (_, w)| acc + w.clone()))
}

/// `P(e | given) = P(e ∧ given) / P(given)`.
pub fn conditional<W: Weight>(joint: &ClassicalJoint<W>, e: &Event, given: &Event) -> Result<W> {
    e.validate(joint.n)?;
    let denominator = probability(joint, given)?;
    if denominator.is_zero() {
        return Err(Error::ConditioningOnNull);
    }
    let numerator = probability(joint, &(e.clone() & given.clone()))?;
    Ok(numerator / denominator)
}

/// `p(a∧b) + p(¬b∧c) − p(a∧c)`; nonnegative for every classical joint.
pub fn we_inequality_slack<W: Weight>(
    joint: &ClassicalJoint<W>,
    a: &Event,
    b: &Event,
    c: &Event,
) -> Result<W> {
    let ab = probability(joint, &(a.clone() & b.clone()))?;
    let not_b_c = probability(joint, &(!b.clone() & c.clone()))?;
    let ac = probability(joint, &(a.clone() & c.clone()))?;
    Ok(ab + not_b_c - ac)
}

/// Subset of a universe of at most 64 elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SmallSet(pub u64);

impl SmallSet {
    pub const EMPTY: SmallSet = SmallSet(0);

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Self {
        SmallSet(elements.into_iter().fold(0, |acc, e| acc | (1u64 << e)))
    }

    pub fn universe(size: u32) -> Self {
        if size >= 64 {
            SmallSet(u64::MAX)
        } else {
            SmallSet((1u64 << size) - 1)
        }
    }

    pub fn intersection(self, other: Self) -> Self {
        SmallSet(self.0 & other.0)
    }

    pub fn union(self, other: Self) -> Self {
        SmallSet(self.0 | other.0)
    }

    pub fn complement(self, universe_size: u32) -> Self {
        SmallSet(!self.0 & Self::universe(universe_size).0)
    }

    pub fn is_superset_of(self, other: Self) -> bool {
        other.0 & !self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

/// `(A∩B) ∪ (Bᶜ∩C) ⊇ A∩C` over `{0..universe_size−1}`. Elements outside the
/// universe are ignored.
pub fn we_set_inclusion_check(universe_size: u32, a: SmallSet, b: SmallSet, c: SmallSet) -> bool {
    let u = SmallSet::universe(universe_size);
    let (a, b, c) = (a.intersection(u), b.intersection(u), c.intersection(u));
    let lhs = a
        .intersection(b)
        .union(b.complement(universe_size).intersection(c));
    lhs.is_superset_of(a.intersection(c))
}

/// Outcome of an exhaustive sweep of the set-theoretic inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetSweep {
    pub triples_checked: u64,
    pub failures: u64,
}

/// Checks every subset triple of every universe of size `0..=max_universe`.
pub fn exhaustive_set_inclusion(max_universe: u32) -> SetSweep {
    assert!(
        max_universe <= 10,
        "8^size triples; keep the universe small"
    );
    let mut sweep = SetSweep {
        triples_checked: 0,
        failures: 0,
    };
    for size in 0..=max_universe {
        let count = 1u64 << size;
        for a in 0..count {
            for b in 0..count {
                for c in 0..count {
                    sweep.triples_checked += 1;
                    if !we_set_inclusion_check(size, SmallSet(a), SmallSet(b), SmallSet(c)) {
                        sweep.failures += 1;
                    }
                }
            }
        }
    }
    sweep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ClassicalJoint {
        ClassicalJoint::from_pairs(2, [("TT", 0.2), ("TF", 0.4), ("FT", 0.1), ("FF", 0.3)]).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn canonical_order() {
        let labels: Vec<_> = (0..4).map(|i| assignment_label(i, 2)).collect();
        assert_eq!(labels, ["TT", "TF", "FT", "FF"]);
        assert_eq!(parse_assignment("FT", 2).unwrap(), 2);
    }

    #[test]
    fn probability_examples() {
        let u = ClassicalJoint::<f64>::uniform(2).unwrap();
        assert_eq!(probability(&u, &Event::atom(0)).unwrap(), 0.5);
        let j = sample();
        assert!((probability(&j, &Event::atom(0)).unwrap() - 0.6).abs() < 1e-15);
        let taut = Event::atom(0) | !Event::atom(0);
        assert!((probability(&j, &taut).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_proposition_is_an_error() {
        let j = sample();
        assert_eq!(
            probability(&j, &Event::atom(2)),
            Err(Error::UnknownProposition { index: 2, n: 2 })
        );
    }

    #[test]
    fn conditional_examples() {
        let u = ClassicalJoint::<f64>::uniform(2).unwrap();
        assert_eq!(
            conditional(&u, &Event::atom(0), &Event::atom(1)).unwrap(),
            0.5
        );
        let exact = ClassicalJoint::from_pairs(
            2,
            [
                ("TT", r(1, 5)),
                ("TF", r(2, 5)),
                ("FT", r(1, 10)),
                ("FF", r(3, 10)),
            ],
        )
        .unwrap();
        assert_eq!(
            conditional(&exact, &Event::atom(1), &Event::atom(0)).unwrap(),
            r(1, 3)
        );
        assert_eq!(
            conditional(&exact, &Event::atom(0), &Event::atom(0)).unwrap(),
            r(1, 1)
        );
    }

    #[test]
    fn conditioning_on_null_is_an_error() {
        let j = ClassicalJoint::<f64>::point_mass(2, 0).unwrap();
        assert_eq!(
            conditional(&j, &Event::atom(0), &!Event::atom(1)),
            Err(Error::ConditioningOnNull)
        );
    }

    #[test]
    fn joint_probability_theorem_exact() {
        let j = ClassicalJoint::from_pairs(
            2,
            [
                ("TT", r(1, 7)),
                ("TF", r(2, 7)),
                ("FT", r(3, 7)),
                ("FF", r(1, 7)),
            ],
        )
        .unwrap();
        let (p, q) = (Event::atom(0), Event::atom(1));
        let pq = probability(&j, &(p.clone() & q.clone())).unwrap();
        let left = probability(&j, &p).unwrap() * conditional(&j, &q, &p).unwrap();
        let right = probability(&j, &q).unwrap() * conditional(&j, &p, &q).unwrap();
        assert_eq!(left, pq);
        assert_eq!(right, pq);
    }

    #[test]
    fn we_slack_examples() {
        let (a, b, c) = (Event::atom(0), Event::atom(1), Event::atom(2));
        let u = ClassicalJoint::<Rational64>::uniform(3).unwrap();
        assert_eq!(we_inequality_slack(&u, &a, &b, &c).unwrap(), r(1, 4));
        let point = ClassicalJoint::<Rational64>::point_mass(3, 0).unwrap();
        assert_eq!(we_inequality_slack(&point, &a, &b, &c).unwrap(), r(0, 1));
    }

    #[test]
    fn construction_rejects_bad_weights() {
        assert!(matches!(
            ClassicalJoint::new(1, vec![0.5, 0.4]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            ClassicalJoint::new(1, vec![1.5, -0.5]),
            Err(Error::NegativeWeight { index: 1, .. })
        ));
        assert!(matches!(
            ClassicalJoint::new(2, vec![1.0, 0.0]),
            Err(Error::WrongLength { .. })
        ));
        assert!(ClassicalJoint::<f64>::uniform(MAX_PROPOSITIONS + 1).is_err());
        assert!(ClassicalJoint::from_pairs(2, [("TU", 1.0)]).is_err());
    }

    #[test]
    fn json_round_trip_and_load_tolerance() {
        let j = ClassicalJoint::from_json(
            r#"{"n": 2, "weights": {"TT": 0.2, "TF": 0.4, "FT": 0.1, "FF": 0.3}}"#,
        )
        .unwrap();
        assert!((j.total() - 1.0).abs() <= NORMALIZATION_TOL);
        assert_eq!(
            j.to_json(),
            r#"{"n":2,"weights":{"TT":0.2,"TF":0.4,"FT":0.1,"FF":0.3}}"#
        );
        let slightly_off = r#"{"n": 1, "weights": {"T": 0.5, "F": 0.5000000001}}"#;
        assert!(ClassicalJoint::from_json(slightly_off).is_ok());
        let off = r#"{"n": 1, "weights": {"T": 0.5, "F": 0.51}}"#;
        assert!(ClassicalJoint::from_json(off).is_err());
    }

    #[test]
    fn parser() {
        let e: Event = "p & !(q | 2)".parse().unwrap();
        assert_eq!(e, Event::atom(0) & !(Event::atom(1) | Event::atom(2)));
        let e: Event = "0 | 1 & 2".parse().unwrap();
        assert_eq!(e, Event::atom(0) | (Event::atom(1) & Event::atom(2)));
        assert_eq!("~~3".parse::<Event>().unwrap(), !!Event::atom(3));
        assert!("0 &".parse::<Event>().is_err());
        assert!("(0".parse::<Event>().is_err());
        assert!("0 1".parse::<Event>().is_err());
        let shown = (Event::atom(0) & !Event::atom(1)).to_string();
        assert_eq!(
            shown.parse::<Event>().unwrap(),
            Event::atom(0) & !Event::atom(1)
        );
    }

    #[test]
    fn from_mask_matches_mask() {
        for bits in 0u32..16 {
            let mask: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
            let e = Event::from_mask(2, &mask).unwrap();
            assert_eq!(e.mask(2).unwrap(), mask);
        }
    }

    #[test]
    fn set_inclusion_examples() {
        let a = SmallSet::from_elements([0, 1]);
        let b = SmallSet::from_elements([0]);
        let c = SmallSet::from_elements([1, 2]);
        assert!(we_set_inclusion_check(4, a, b, c));
        assert!(we_set_inclusion_check(
            0,
            SmallSet::EMPTY,
            SmallSet::EMPTY,
            SmallSet::EMPTY
        ));
        let sweep = exhaustive_set_inclusion(4);
        assert_eq!(sweep.failures, 0);
        assert_eq!(
            sweep.triples_checked,
            (0..=4).map(|s| 8u64.pow(s)).sum::<u64>()
        );
    }
}
