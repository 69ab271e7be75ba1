//! Exchange sequences for split matroids: per-component dispatch, strictly
//! monotone sequences for uniform components, and a longest-monotone-prefix
//! plus single-reused-element completion for the elementary component.
//!
//! The completion is realized by a usage-constrained search rather than the
//! explicit construction of the underlying theory: a candidate reused
//! element `z` is tried in increasing weight order, and the search looks
//! for a sequence that uses `z` exactly twice, each remaining misplaced
//! element exactly once, and nothing else.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ground::{ElemSet, Element};
use crate::instances::{ElementarySplitInstance, SplitDirectSum};
use crate::matroid::MatroidOracle;
use crate::pairs::{
    is_feasible_exchange, verify_sequence, BasisPair, Exchange, ExchangeSequence, Replayer,
};
use crate::weight::WeightFn;

/// Strictly monotone sequence between compatible bases pairs of a uniform
/// matroid on the given ground elements: misplaced red elements are paired
/// with misplaced blue elements in ascending index order.
pub fn solve_uniform_monotone(
    rank: usize,
    ground: ElemSet,
    p1: &BasisPair,
    p2: &BasisPair,
) -> Result<ExchangeSequence> {
    let m = ElementarySplitInstance::on_ground(ground, rank, Vec::new(), Vec::new())
        .map_err(|_| Error::Domain("invalid uniform component".into()))?;
    p1.validate(&m)?;
    p2.validate(&m)?;
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    let outs: Vec<Element> = (p1.r & p2.b).iter().collect();
    let ins: Vec<Element> = (p1.b & p2.r).iter().collect();
    debug_assert_eq!(outs.len(), ins.len());
    let mut rep = Replayer::new(&m, *p1);
    for (e, f) in outs.into_iter().zip(ins) {
        rep.push(Exchange::new(e, f))?;
    }
    debug_assert_eq!(rep.cur, *p2);
    Ok(rep.into_sequence())
}

/// A longest strictly monotone sequence from `p1` toward `p2`, found by
/// memoized search (greedy maximality is not enough). Returns the sequence
/// and the pair it reaches.
pub fn longest_monotone_prefix<M: MatroidOracle + ?Sized>(
    m: &M,
    p1: &BasisPair,
    p2: &BasisPair,
) -> Result<(ExchangeSequence, BasisPair)> {
    p1.validate(m)?;
    p2.validate(m)?;
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    let union = p1.union();
    let mut memo: HashMap<ElemSet, (usize, Option<Exchange>)> = HashMap::new();

    fn best<M: MatroidOracle + ?Sized>(
        m: &M,
        cur: ElemSet,
        union: ElemSet,
        target: &BasisPair,
        memo: &mut HashMap<ElemSet, (usize, Option<Exchange>)>,
    ) -> (usize, Option<Exchange>) {
        if let Some(&v) = memo.get(&cur) {
            return v;
        }
        let mut best_here = (0usize, None);
        let p = BasisPair::new(cur, union - cur);
        for e in cur & target.b {
            for f in (union - cur) & target.r {
                let x = Exchange::new(e, f);
                if is_feasible_exchange(m, &p, x) {
                    let sub = best(m, cur.without(e).with(f), union, target, memo);
                    if sub.0 + 1 > best_here.0 {
                        best_here = (sub.0 + 1, Some(x));
                    }
                }
            }
        }
        memo.insert(cur, best_here);
        best_here
    }

    best(m, p1.r, union, p2, &mut memo);
    let mut rep = Replayer::new(m, *p1);
    while let Some(&(len, Some(x))) = memo.get(&rep.cur.r) {
        if len == 0 {
            break;
        }
        rep.push(x)?;
    }
    let reached = rep.cur;
    Ok((rep.into_sequence(), reached))
}

/// Complete a stalled pair to the target by reusing one element twice.
///
/// Candidates are the elements aligned on both sides, tried in increasing
/// weight (ties by index). For each candidate the search wants a sequence
/// of length `|R'1 ∩ B2| + 1` using the candidate exactly twice, each
/// misplaced element exactly once, and nothing else.
pub fn completion_with_reuse(
    inst: &ElementarySplitInstance,
    p1_prime: &BasisPair,
    p2: &BasisPair,
    w: &WeightFn,
) -> Result<ExchangeSequence> {
    p1_prime.validate(inst)?;
    p2.validate(inst)?;
    if !p1_prime.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    if p1_prime == p2 {
        return Err(Error::Precondition("pairs already agree".into()));
    }
    let moving = (p1_prime.r & p2.b) | (p1_prime.b & p2.r);
    let pool = (p1_prime.r & p2.r) | (p1_prime.b & p2.b);
    let depth = (p1_prime.r & p2.b).len() + 1;

    let mut candidates: Vec<Element> = pool.iter().collect();
    candidates.sort_by_key(|&z| (w.get(z), z.id()));

    for z in candidates {
        let mut budget = [0u8; crate::ground::MAX_GROUND];
        for e in moving {
            budget[e.id()] = 1;
        }
        budget[z.id()] = 2;
        if let Some(steps) = search(inst, p1_prime.r, p1_prime.union(), p2, depth, &mut budget) {
            let seq = ExchangeSequence::new(steps);
            debug_assert!(verify_sequence(inst, p1_prime, p2, &seq, w)
                .map(|r| r.valid)
                .unwrap_or(false));
            return Ok(seq);
        }
    }
    Err(Error::CompletionNotFound)
}

fn search<M: MatroidOracle + ?Sized>(
    m: &M,
    cur: ElemSet,
    union: ElemSet,
    target: &BasisPair,
    depth: usize,
    budget: &mut [u8; crate::ground::MAX_GROUND],
) -> Option<Vec<Exchange>> {
    if depth == 0 {
        return (cur == target.r).then(Vec::new);
    }
    let p = BasisPair::new(cur, union - cur);
    for e in cur {
        if budget[e.id()] == 0 {
            continue;
        }
        for f in union - cur {
            if budget[f.id()] == 0 {
                continue;
            }
            let x = Exchange::new(e, f);
            if !is_feasible_exchange(m, &p, x) {
                continue;
            }
            budget[e.id()] -= 1;
            budget[f.id()] -= 1;
            if let Some(mut rest) =
                search(m, cur.without(e).with(f), union, target, depth - 1, budget)
            {
                rest.insert(0, x);
                budget[e.id()] += 1;
                budget[f.id()] += 1;
                return Some(rest);
            }
            budget[e.id()] += 1;
            budget[f.id()] += 1;
        }
    }
    None
}

/// Exchange sequence for a split matroid: length at most
/// `min(r, r - |R1 ∩ R2| + 1)`, weight at most `w(R1 ∪ B1)`, each element
/// used at most twice. Uniform components always go monotonically; the
/// elementary component takes its longest monotone prefix and completes
/// with one reused element when it stalls.
pub fn solve_split(
    sum: &SplitDirectSum,
    p1: &BasisPair,
    p2: &BasisPair,
    w: &WeightFn,
) -> Result<ExchangeSequence> {
    p1.validate(sum)?;
    p2.validate(sum)?;
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }

    let mut seq = ExchangeSequence::empty();
    if let Some(inst) = sum.elementary() {
        let ground = inst.ground();
        let s1 = BasisPair::new(p1.r & ground, p1.b & ground);
        let s2 = BasisPair::new(p2.r & ground, p2.b & ground);
        if s1 != s2 {
            let (prefix, reached) = longest_monotone_prefix(inst, &s1, &s2)?;
            seq = seq.concat(prefix);
            if reached != s2 {
                seq = seq.concat(completion_with_reuse(inst, &reached, &s2, w)?);
            }
        }
    }
    for comp in sum.uniforms() {
        let s1 = BasisPair::new(p1.r & comp.elements, p1.b & comp.elements);
        let s2 = BasisPair::new(p2.r & comp.elements, p2.b & comp.elements);
        seq = seq.concat(solve_uniform_monotone(comp.rank, comp.elements, &s1, &s2)?);
    }

    let report = verify_sequence(sum, p1, p2, &seq, w)?;
    let bound = sum.rank().min(sum.rank() - (p1.r & p2.r).len() + 1);
    if !report.valid
        || report.length > bound
        || report.weight > w.total(p1.union())
        || report.max_usage > 2
    {
        return Err(Error::InternalBound(format!(
            "split sequence out of bounds: length {} (bound {bound}), usage {}",
            report.length, report.max_usage
        )));
    }
    Ok(seq)
}

/// Convenience entry for a bare elementary split instance.
pub fn solve_split_elementary(
    inst: &ElementarySplitInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    w: &WeightFn,
) -> Result<ExchangeSequence> {
    solve_split(&SplitDirectSum::elementary_only(inst.clone()), p1, p2, w)
}
