//! Ordered pairs of disjoint bases, symmetric exchanges, and sequence
//! verification.
//!
//! A pair `(R, B)` is ordered: `(R, B)` and `(B, R)` are distinct states.
//! An exchange moves one element out of `R` and one in; it is feasible when
//! both resulting classes are bases.

use crate::error::{Error, Result};
use crate::ground::{ElemSet, Element, Relabel};
use crate::matroid::MatroidOracle;
use crate::weight::{Weight, WeightFn};

/// Ordered pair of disjoint bases. The red class is the first component.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BasisPair {
    pub r: ElemSet,
    pub b: ElemSet,
}

impl BasisPair {
    pub fn new(r: ElemSet, b: ElemSet) -> Self {
        BasisPair { r, b }
    }

    /// Check disjointness and that both classes are bases of `m`.
    pub fn validate<M: MatroidOracle + ?Sized>(&self, m: &M) -> Result<()> {
        if !(self.r & self.b).is_empty() {
            return Err(Error::InvalidPair("classes are not disjoint".into()));
        }
        if !self.r.is_subset_of(m.ground()) || !self.b.is_subset_of(m.ground()) {
            return Err(Error::InvalidPair("elements outside the ground set".into()));
        }
        if !m.is_basis(self.r) {
            return Err(Error::InvalidPair("red class is not a basis".into()));
        }
        if !m.is_basis(self.b) {
            return Err(Error::InvalidPair("blue class is not a basis".into()));
        }
        Ok(())
    }

    pub fn union(&self) -> ElemSet {
        self.r | self.b
    }

    pub fn compatible_with(&self, other: &BasisPair) -> bool {
        self.union() == other.union()
    }

    /// The color-swapped pair `(B, R)`.
    pub fn swapped(&self) -> BasisPair {
        BasisPair {
            r: self.b,
            b: self.r,
        }
    }

    pub fn relabeled(&self, rel: &Relabel) -> BasisPair {
        BasisPair {
            r: rel.apply_set(self.r),
            b: rel.apply_set(self.b),
        }
    }
}

/// A symmetric exchange: `red` leaves the red class, `blue` enters it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Exchange {
    pub red: Element,
    pub blue: Element,
}

impl Exchange {
    pub fn new(red: Element, blue: Element) -> Self {
        Exchange { red, blue }
    }

    /// The reverse exchange, undoing `self`.
    pub fn reversed(self) -> Exchange {
        Exchange {
            red: self.blue,
            blue: self.red,
        }
    }
}

/// An ordered list of exchanges.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ExchangeSequence {
    pub steps: Vec<Exchange>,
}

impl ExchangeSequence {
    pub fn new(steps: Vec<Exchange>) -> Self {
        ExchangeSequence { steps }
    }

    pub fn empty() -> Self {
        ExchangeSequence { steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Valid from `P2` back to `P1` when `self` is valid from `P1` to `P2`:
    /// steps reversed, each exchange undone.
    pub fn reversed(&self) -> ExchangeSequence {
        ExchangeSequence {
            steps: self.steps.iter().rev().map(|x| x.reversed()).collect(),
        }
    }

    /// Valid for the color-swapped pairs: same order, roles of the two
    /// exchanged elements swapped.
    pub fn swapped_colors(&self) -> ExchangeSequence {
        ExchangeSequence {
            steps: self.steps.iter().map(|x| x.reversed()).collect(),
        }
    }

    pub fn relabeled(&self, rel: &Relabel) -> ExchangeSequence {
        ExchangeSequence {
            steps: self
                .steps
                .iter()
                .map(|x| Exchange::new(rel.apply(x.red), rel.apply(x.blue)))
                .collect(),
        }
    }

    /// Total weight, counting `w(red) + w(blue)` per step.
    pub fn weight(&self, w: &WeightFn) -> Weight {
        self.steps
            .iter()
            .map(|x| w.get(x.red) + w.get(x.blue))
            .sum()
    }

    /// Per-element usage counts over a ground set of size `n`.
    pub fn usage_counts(&self, n: usize) -> Vec<u32> {
        let mut usage = vec![0u32; n];
        for x in &self.steps {
            usage[x.red.id()] += 1;
            usage[x.blue.id()] += 1;
        }
        usage
    }

    pub fn max_usage(&self, n: usize) -> u32 {
        self.usage_counts(n).into_iter().max().unwrap_or(0)
    }

    pub fn concat(mut self, other: ExchangeSequence) -> ExchangeSequence {
        self.steps.extend(other.steps);
        self
    }
}

/// True iff `x.red` is red, `x.blue` is blue, and both classes remain bases
/// after the swap. Out-of-place elements make the exchange infeasible rather
/// than an error.
pub fn is_feasible_exchange<M: MatroidOracle + ?Sized>(m: &M, p: &BasisPair, x: Exchange) -> bool {
    if !p.r.contains(x.red) || !p.b.contains(x.blue) {
        return false;
    }
    let r2 = p.r.without(x.red).with(x.blue);
    let b2 = p.b.with(x.red).without(x.blue);
    m.is_basis(r2) && m.is_basis(b2)
}

/// Apply a feasible exchange, returning the new pair.
pub fn apply_exchange<M: MatroidOracle + ?Sized>(
    m: &M,
    p: &BasisPair,
    x: Exchange,
) -> Result<BasisPair> {
    if !is_feasible_exchange(m, p, x) {
        return Err(Error::InfeasibleExchange(x.red, x.blue));
    }
    Ok(BasisPair {
        r: p.r.without(x.red).with(x.blue),
        b: p.b.with(x.red).without(x.blue),
    })
}

/// Where a replayed sequence went wrong.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerifyFailure {
    /// The step at this index is not feasible.
    InfeasibleStep(usize),
    /// All steps are feasible but the final pair differs from the target.
    FinalMismatch,
}

/// Outcome of replaying a sequence between two pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SequenceReport {
    pub valid: bool,
    pub failure: Option<VerifyFailure>,
    pub length: usize,
    pub weight: Weight,
    pub usage: Vec<u32>,
    pub max_usage: u32,
    /// Valid, each element used at most once, and all exchanged elements lie
    /// in `(R1 \cap B2) \cup (B1 \cap R2)`.
    pub monotone: bool,
}

impl SequenceReport {
    pub fn failure_step(&self) -> Option<usize> {
        match self.failure {
            Some(VerifyFailure::InfeasibleStep(i)) => Some(i),
            _ => None,
        }
    }
}

/// Replay `seq` from `p1` and check that it reaches exactly `p2`.
///
/// Length, weight, and usage statistics are computed from the listed steps
/// whether or not the replay succeeds.
pub fn verify_sequence<M: MatroidOracle + ?Sized>(
    m: &M,
    p1: &BasisPair,
    p2: &BasisPair,
    seq: &ExchangeSequence,
    w: &WeightFn,
) -> Result<SequenceReport> {
    p1.validate(m)?;
    p2.validate(m)?;
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }

    let n = w.len();
    let usage = seq.usage_counts(n);
    let max_usage = usage.iter().copied().max().unwrap_or(0);
    let weight = seq.weight(w);

    let mut cur = *p1;
    let mut failure = None;
    for (i, &x) in seq.steps.iter().enumerate() {
        match apply_exchange(m, &cur, x) {
            Ok(next) => cur = next,
            Err(_) => {
                failure = Some(VerifyFailure::InfeasibleStep(i));
                break;
            }
        }
    }
    if failure.is_none() && cur != *p2 {
        failure = Some(VerifyFailure::FinalMismatch);
    }
    let valid = failure.is_none();

    let allowed = (p1.r & p2.b) | (p1.b & p2.r);
    let in_allowed = seq
        .steps
        .iter()
        .all(|x| allowed.contains(x.red) && allowed.contains(x.blue));
    let monotone = valid && in_allowed && max_usage <= 1;

    Ok(SequenceReport {
        valid,
        failure,
        length: seq.len(),
        weight,
        usage,
        max_usage,
        monotone,
    })
}

/// The trivial bounds `(r - |R1 \cap R2|, w(R1 \triangle R2))`, attained
/// exactly by strictly monotone sequences.
pub fn lower_bounds(p1: &BasisPair, p2: &BasisPair, w: &WeightFn) -> Result<(usize, Weight)> {
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    let length = p1.r.len() - (p1.r & p2.r).len();
    let weight = w.total(p1.r ^ p2.r);
    Ok((length, weight))
}

/// Helper that builds a sequence step by step, checking feasibility against
/// the oracle at every push.
pub struct Replayer<'a, M: ?Sized> {
    m: &'a M,
    pub cur: BasisPair,
    pub steps: Vec<Exchange>,
}

impl<'a, M: MatroidOracle + ?Sized> Replayer<'a, M> {
    pub fn new(m: &'a M, start: BasisPair) -> Self {
        Replayer {
            m,
            cur: start,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, x: Exchange) -> Result<()> {
        self.cur = apply_exchange(self.m, &self.cur, x)?;
        self.steps.push(x);
        Ok(())
    }

    /// Push the swap of `a` and `b`, whichever currently sits in which class.
    pub fn push_swap(&mut self, a: Element, b: Element) -> Result<()> {
        let x = if self.cur.r.contains(a) && self.cur.b.contains(b) {
            Exchange::new(a, b)
        } else if self.cur.r.contains(b) && self.cur.b.contains(a) {
            Exchange::new(b, a)
        } else {
            return Err(Error::InfeasibleExchange(a, b));
        };
        self.push(x)
    }

    pub fn into_sequence(self) -> ExchangeSequence {
        ExchangeSequence::new(self.steps)
    }
}
