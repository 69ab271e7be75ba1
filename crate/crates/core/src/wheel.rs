//! Exchange sequences between colorings of a wheel.
//!
//! A coloring splits the spokes into maximal same-colored runs (intervals).
//! Boundary rim edges all follow their interval on the same side, which
//! gives the coloring an orientation. Same-orientation pairs admit strictly
//! monotone sequences; opposite orientations are handled by collapsing
//! intervals until two remain, reversing with one cheap exchange (or a
//! three-step detour), and finishing monotonically.

use crate::error::{Error, Result};
use crate::ground::{ElemSet, Element, Relabel};
use crate::instances::WheelInstance;
use crate::matroid::MatroidOracle;
use crate::pairs::{verify_sequence, BasisPair, ExchangeSequence, Replayer};
use crate::weight::{Weight, WeightFn};

/// Global direction in which every interval is followed by a same-colored
/// boundary edge: positive means index-increasing.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn reversed(self) -> Orientation {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Color {
    Red,
    Blue,
}

/// A maximal run of consecutive same-colored spokes, in positive order.
#[derive(Clone, Debug)]
pub struct Interval {
    pub color: Color,
    pub spokes: Vec<usize>,
}

#[allow(clippy::len_without_is_empty)]
impl Interval {
    pub fn len(&self) -> usize {
        self.spokes.len()
    }
}

/// Interval structure of a coloring. Intervals are listed in positive
/// cyclic order starting from a red interval, so odd positions (1-based)
/// are red and even positions are blue.
#[derive(Clone, Debug)]
pub struct IntervalDecomposition {
    pub orientation: Orientation,
    pub intervals: Vec<Interval>,
    /// Red class of the decomposed coloring.
    pub red: ElemSet,
}

impl IntervalDecomposition {
    pub fn num_intervals(&self) -> usize {
        self.intervals.len()
    }

    /// Interval at a cyclic 0-based offset from 0-based index `base`.
    pub fn cyclic(&self, base: usize, offset: usize) -> &Interval {
        &self.intervals[(base + offset) % self.intervals.len()]
    }
}

/// Per-interval weights split by agreement with the target coloring:
/// `xs[i]` sums the weights of elements of `I_i ∪ φ₋(I_i)` colored the same
/// in both colorings, `ys[i]` those colored differently.
#[derive(Clone, Debug)]
pub struct IntervalWeights {
    pub xs: Vec<Weight>,
    pub ys: Vec<Weight>,
}

/// Decompose a coloring into intervals and determine its orientation.
pub fn decompose(w: &WheelInstance, p: &BasisPair) -> Result<IntervalDecomposition> {
    p.validate(w).map_err(|_| Error::NotAColoring)?;
    let m = w.num_spokes();
    let spoke_red: Vec<bool> = (1..=m).map(|i| p.r.contains(w.spoke(i))).collect();
    // A valid coloring has spokes of both colors.
    let start = (1..=m)
        .find(|&i| spoke_red[i - 1] && !spoke_red[w.prev_idx(i) - 1])
        .ok_or(Error::NotAColoring)?;

    let mut intervals = Vec::new();
    let mut idx = start;
    let mut consumed = 0;
    while consumed < m {
        let red = spoke_red[idx - 1];
        let mut spokes = Vec::new();
        while consumed < m && spoke_red[idx - 1] == red {
            spokes.push(idx);
            idx = w.next_idx(idx);
            consumed += 1;
        }
        intervals.push(Interval {
            color: if red { Color::Red } else { Color::Blue },
            spokes,
        });
    }

    // Any boundary edge determines the orientation; in debug, check they
    // all agree.
    let orient_from = |iv: &Interval| {
        let last = *iv.spokes.last().unwrap();
        let boundary_red = p.r.contains(w.rim(last));
        if (iv.color == Color::Red) == boundary_red {
            Orientation::Positive
        } else {
            Orientation::Negative
        }
    };
    let orientation = orient_from(&intervals[0]);
    debug_assert!(intervals.iter().all(|iv| orient_from(iv) == orientation));

    Ok(IntervalDecomposition {
        orientation,
        intervals,
        red: p.r,
    })
}

/// x/y weights of each interval with respect to a target coloring.
pub fn interval_weights(
    w: &WheelInstance,
    d: &IntervalDecomposition,
    p2: &BasisPair,
    wf: &WeightFn,
) -> IntervalWeights {
    let mut xs = Vec::with_capacity(d.intervals.len());
    let mut ys = Vec::with_capacity(d.intervals.len());
    for iv in &d.intervals {
        let mut x = Weight::from_integer(0);
        let mut y = Weight::from_integer(0);
        for &i in &iv.spokes {
            for e in [w.spoke(i), w.rim(w.phi_minus(d.orientation, i))] {
                if d.red.contains(e) == p2.r.contains(e) {
                    x += wf.get(e);
                } else {
                    y += wf.get(e);
                }
            }
        }
        xs.push(x);
        ys.push(y);
    }
    IntervalWeights { xs, ys }
}

fn cyclic_x(xs: &[Weight], j: usize, offset: usize) -> Weight {
    xs[(j - 1 + offset) % xs.len()]
}

/// Inequality deciding whether collapsing at index `j` keeps the weight of
/// the sequence within `w(E)` when the interval count is `4k + 2`.
pub fn check_ineq_a(xs: &[Weight], j: usize, k: usize) -> Result<bool> {
    if xs.len() != 4 * k + 2 || k == 0 {
        return Err(Error::Domain(format!(
            "inequality A needs 4k + 2 intervals, got {} with k = {k}",
            xs.len()
        )));
    }
    let lhs: Weight = (1..=k).map(|i| cyclic_x(xs, j, 2 * i - 1)).sum::<Weight>()
        + (k + 1..=2 * k)
            .map(|i| cyclic_x(xs, j, 2 * i))
            .sum::<Weight>();
    let rhs: Weight = (0..=k).map(|i| cyclic_x(xs, j, 2 * i)).sum::<Weight>()
        + (k..=2 * k)
            .map(|i| cyclic_x(xs, j, 2 * i + 1))
            .sum::<Weight>();
    Ok(lhs <= rhs)
}

/// Companion inequality for interval count `4k`.
pub fn check_ineq_b(xs: &[Weight], j: usize, k: usize) -> Result<bool> {
    if xs.len() != 4 * k || k < 2 {
        return Err(Error::Domain(format!(
            "inequality B needs 4k intervals with k >= 2, got {} with k = {k}",
            xs.len()
        )));
    }
    let lhs: Weight = (1..=k - 1)
        .map(|i| cyclic_x(xs, j, 2 * i - 1))
        .sum::<Weight>()
        + (k..=2 * k - 1)
            .map(|i| cyclic_x(xs, j, 2 * i))
            .sum::<Weight>();
    let rhs: Weight = (0..=k - 1).map(|i| cyclic_x(xs, j, 2 * i)).sum::<Weight>()
        + (k - 1..=2 * k - 1)
            .map(|i| cyclic_x(xs, j, 2 * i + 1))
            .sum::<Weight>();
    Ok(lhs <= rhs)
}

/// Swap spoke `i` with its rim partner against the orientation.
fn push_spoke_phi_swap<M: MatroidOracle + ?Sized>(
    rep: &mut Replayer<M>,
    w: &WheelInstance,
    o: Orientation,
    i: usize,
) -> Result<()> {
    rep.push_swap(w.spoke(i), w.rim(w.phi_minus(o, i)))
}

/// Strictly monotone sequence between two colorings of the same orientation:
/// each differing spoke is exchanged with its rim partner against the
/// orientation, deferring any step that would empty a spoke color class.
pub fn monotone_same_orientation(
    w: &WheelInstance,
    p1: &BasisPair,
    p2: &BasisPair,
) -> Result<ExchangeSequence> {
    let d1 = decompose(w, p1)?;
    let d2 = decompose(w, p2)?;
    if d1.orientation != d2.orientation {
        return Err(Error::OrientationMismatch);
    }
    let m = w.num_spokes();
    let mut queue: std::collections::VecDeque<usize> = (1..=m)
        .filter(|&i| p1.r.contains(w.spoke(i)) != p2.r.contains(w.spoke(i)))
        .collect();
    let mut rep = Replayer::new(w, *p1);
    let mut stall = 0;
    while let Some(i) = queue.pop_front() {
        let spoke = w.spoke(i);
        let red_spokes = (1..=m).filter(|&j| rep.cur.r.contains(w.spoke(j))).count();
        let would_empty = if rep.cur.r.contains(spoke) {
            red_spokes == 1
        } else {
            m - red_spokes == 1
        };
        if would_empty {
            stall += 1;
            if stall > queue.len() + 1 {
                return Err(Error::InternalBound(
                    "monotone spoke ordering stalled".into(),
                ));
            }
            queue.push_back(i);
            continue;
        }
        stall = 0;
        push_spoke_phi_swap(&mut rep, w, d1.orientation, i)?;
    }
    if rep.cur != *p2 {
        return Err(Error::InternalBound(
            "monotone sequence did not reach the target".into(),
        ));
    }
    Ok(rep.into_sequence())
}

/// Reflection of the cyclic indexing (`v_i -> v_{m+1-i}`), a graph
/// automorphism that reverses the orientation of every coloring.
fn reflect_relabel(w: &WheelInstance) -> Relabel {
    let m = w.num_spokes();
    let mut map = vec![0u32; 2 * m];
    for i in 1..=m {
        map[w.spoke(i).id()] = w.spoke(m + 1 - i).id() as u32;
        let target = if i == m { m } else { m - i };
        map[w.rim(i).id()] = w.rim(target).id() as u32;
    }
    Relabel::from_map(map)
}

/// The four structural edges around a length-one interval `{c}`:
/// `a` is the spoke before `c`, `b` the rim between them, `d` the rim after
/// `c`. For singletons of either color the same shapes apply with colors
/// mirrored.
struct SingletonQuad {
    a: Element,
    b: Element,
    c: Element,
    d: Element,
    c_idx: usize,
    c_red: bool,
}

fn diff_of(p: &BasisPair, p2: &BasisPair, elems: &[Element]) -> ElemSet {
    elems
        .iter()
        .copied()
        .filter(|&e| p.r.contains(e) != p2.r.contains(e))
        .collect()
}

/// Finish from a positively oriented two-interval coloring to a negatively
/// oriented target: one reversing exchange (or a three-step detour around a
/// length-one interval) followed by a strictly monotone completion.
fn finish_two_intervals(
    w: &WheelInstance,
    cur: BasisPair,
    p2: &BasisPair,
    wf: &WeightFn,
    allow_three_step: bool,
) -> Result<ExchangeSequence> {
    let d = decompose(w, &cur)?;
    if d.num_intervals() != 2 || d.orientation != Orientation::Positive {
        return Err(Error::InternalBound(
            "two-interval finish entered with the wrong shape".into(),
        ));
    }
    let mut rep = Replayer::new(w, cur);

    let singleton = d.intervals.iter().find(|iv| iv.len() == 1);
    if let Some(iv) = singleton {
        let q = singleton_quad(w, iv);
        let diff = diff_of(&cur, p2, &[q.a, q.b, q.c, q.d]);
        let bad: ElemSet = [q.b, q.c].into_iter().collect();
        if diff == bad {
            if !allow_three_step {
                return Err(Error::InternalBound(
                    "three-step reversal needed where none is allowed".into(),
                ));
            }
            three_step(w, &mut rep, p2, wf, &q)?;
        } else {
            reversing_swap(&mut rep, diff)?;
        }
    } else {
        // Both intervals have length at least two: the last spokes of the
        // red and blue intervals and their forward rims give the reversing
        // exchange directly.
        let mut probe = Vec::new();
        for iv in &d.intervals {
            let last = *iv.spokes.last().unwrap();
            probe.push(w.spoke(last));
            probe.push(w.rim(w.phi_plus(Orientation::Positive, last)));
        }
        let diff = diff_of(&cur, p2, &probe);
        reversing_swap(&mut rep, diff)?;
    }

    let tail = monotone_same_orientation(w, &rep.cur, p2)?;
    Ok(rep.into_sequence().concat(tail))
}

fn singleton_quad(w: &WheelInstance, iv: &Interval) -> SingletonQuad {
    let c_idx = iv.spokes[0];
    let a_idx = w.prev_idx(c_idx);
    SingletonQuad {
        a: w.spoke(a_idx),
        b: w.rim(w.phi_minus(Orientation::Positive, c_idx)),
        c: w.spoke(c_idx),
        d: w.rim(w.phi_plus(Orientation::Positive, c_idx)),
        c_idx,
        c_red: iv.color == Color::Red,
    }
}

/// Swap the unique differing red/blue pair, reversing the orientation.
fn reversing_swap<M: MatroidOracle + ?Sized>(rep: &mut Replayer<M>, diff: ElemSet) -> Result<()> {
    if diff.len() != 2 {
        return Err(Error::InternalBound(format!(
            "expected a two-element recolor set, got {diff:?}"
        )));
    }
    let mut it = diff.iter();
    let (u, v) = (it.next().unwrap(), it.next().unwrap());
    rep.push_swap(u, v)
}

/// The three-step orientation reversal around a length-one interval whose
/// recolor set is `{b, c}`: the cheaper of `a` and `d` is reused twice, the
/// other is never touched.
fn three_step(
    w: &WheelInstance,
    rep: &mut Replayer<impl MatroidOracle + ?Sized>,
    p2: &BasisPair,
    wf: &WeightFn,
    q: &SingletonQuad,
) -> Result<()> {
    let m = w.num_spokes();
    // A spoke with the singleton's color in the target; it is on the other
    // side in the current coloring and differs on its forward rim.
    let s_idx = (1..=m)
        .find(|&i| p2.r.contains(w.spoke(i)) == q.c_red && i != q.c_idx)
        .ok_or_else(|| Error::InternalBound("no reversal pivot spoke".into()))?;
    let s = w.spoke(s_idx);
    let s_rim = w.rim(w.phi_plus(Orientation::Positive, s_idx));
    debug_assert!(s != q.a && s != q.c);
    if wf.get(q.a) >= wf.get(q.d) {
        rep.push_swap(q.b, q.d)?;
        rep.push_swap(s, s_rim)?;
        rep.push_swap(q.c, q.d)?;
    } else {
        rep.push_swap(q.a, q.c)?;
        rep.push_swap(s, s_rim)?;
        rep.push_swap(q.a, q.b)?;
    }
    Ok(())
}

/// Opposite orientations, at most four intervals in the source coloring.
pub fn solve_le4(
    w: &WheelInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    wf: &WeightFn,
) -> Result<ExchangeSequence> {
    let d1 = decompose(w, p1)?;
    let d2 = decompose(w, p2)?;
    if d1.orientation == d2.orientation {
        return Err(Error::Precondition("orientations match".into()));
    }
    if d1.num_intervals() > 4 {
        return Err(Error::Precondition(format!(
            "{} intervals, expected at most four",
            d1.num_intervals()
        )));
    }
    let seq = if d1.orientation == Orientation::Negative {
        let refl = reflect_relabel(w);
        let seq = solve_le4_positive(
            w,
            &p1.relabeled(&refl),
            &p2.relabeled(&refl),
            &wf.relabeled(&refl),
        )?;
        seq.relabeled(&refl)
    } else {
        solve_le4_positive(w, p1, p2, wf)?
    };
    check_bounds(w, p1, p2, &seq, wf, w.num_spokes())?;
    Ok(seq)
}

fn solve_le4_positive(
    w: &WheelInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    wf: &WeightFn,
) -> Result<ExchangeSequence> {
    let d1 = decompose(w, p1)?;
    match d1.num_intervals() {
        2 => finish_two_intervals(w, *p1, p2, wf, true),
        4 => solve_four_intervals(w, p1, p2, wf),
        n => Err(Error::Precondition(format!(
            "{n} intervals, expected two or four"
        ))),
    }
}

fn red_spoke_count(w: &WheelInstance, p: &BasisPair) -> usize {
    (1..=w.num_spokes())
        .filter(|&i| p.r.contains(w.spoke(i)))
        .count()
}

fn collapse_interval(
    w: &WheelInstance,
    rep: &mut Replayer<impl MatroidOracle + ?Sized>,
    iv: &Interval,
) -> Result<()> {
    for &i in &iv.spokes {
        push_spoke_phi_swap(rep, w, Orientation::Positive, i)?;
    }
    Ok(())
}

fn solve_four_intervals(
    w: &WheelInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    wf: &WeightFn,
) -> Result<ExchangeSequence> {
    let m = w.num_spokes();
    let r1 = red_spoke_count(w, p1);
    let r2 = red_spoke_count(w, p2);
    // Make the red side the smaller one; the swapped problem is solved on
    // the swapped pairs and mapped back.
    if r1 + r2 > m {
        let seq = solve_four_intervals(w, &p1.swapped(), &p2.swapped(), wf)?;
        return Ok(seq.swapped_colors());
    }

    let d1 = decompose(w, p1)?;
    let weights = interval_weights(w, &d1, p2, wf);
    // Red intervals sit at 0-based positions 0 and 2; collapse the cheaper.
    let j = if weights.xs[2] <= weights.xs[0] { 2 } else { 0 };
    let mut rep = Replayer::new(w, *p1);
    collapse_interval(w, &mut rep, &d1.intervals[j])?;

    let remaining_red = &d1.intervals[2 - j];
    if remaining_red.len() == 1 {
        // The reversal site is a lone red spoke. If its recolor set is the
        // blocked one and the two colorings use exactly half the spokes in
        // red, the three-step detour would be one exchange too long, so the
        // collapse restarts on the cheaper blue interval instead.
        let cur_d = decompose(w, &rep.cur)?;
        let iv = cur_d
            .intervals
            .iter()
            .find(|iv| iv.color == Color::Red)
            .unwrap();
        let q = singleton_quad(w, iv);
        let diff = diff_of(&rep.cur, p2, &[q.a, q.b, q.c, q.d]);
        let bad: ElemSet = [q.b, q.c].into_iter().collect();
        if diff == bad && r1 + r2 == m {
            let jb = if weights.xs[3] <= weights.xs[1] { 3 } else { 1 };
            let mut rep2 = Replayer::new(w, *p1);
            collapse_interval(w, &mut rep2, &d1.intervals[jb])?;
            let cur = rep2.cur;
            let tail = finish_two_intervals(w, cur, p2, wf, false)?;
            return Ok(rep2.into_sequence().concat(tail));
        }
    }

    let cur = rep.cur;
    let tail = finish_two_intervals(w, cur, p2, wf, r1 + r2 < m)?;
    Ok(rep.into_sequence().concat(tail))
}

/// Opposite orientations, at least six intervals: pick a collapse index that
/// is simultaneously cheap for both weight functions, reduce to two
/// intervals of length at least two, then reverse and finish monotonically.
pub fn solve_ge6(
    w: &WheelInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    w1: &WeightFn,
    w2: &WeightFn,
) -> Result<ExchangeSequence> {
    let d1 = decompose(w, p1)?;
    let d2 = decompose(w, p2)?;
    if d1.orientation == d2.orientation {
        return Err(Error::Precondition("orientations match".into()));
    }
    if d1.num_intervals() < 6 {
        return Err(Error::Precondition(format!(
            "{} intervals, expected at least six",
            d1.num_intervals()
        )));
    }
    let seq = if d1.orientation == Orientation::Negative {
        let refl = reflect_relabel(w);
        let seq = solve_ge6_positive(
            w,
            &p1.relabeled(&refl),
            &p2.relabeled(&refl),
            &w1.relabeled(&refl),
            &w2.relabeled(&refl),
        )?;
        seq.relabeled(&refl)
    } else {
        solve_ge6_positive(w, p1, p2, w1, w2)?
    };

    for (wf, name) in [(w1, "first"), (w2, "second")] {
        let report = verify_sequence(w, p1, p2, &seq, wf)?;
        if !report.valid || report.max_usage > 2 || report.weight > wf.total(w.ground()) {
            return Err(Error::InternalBound(format!(
                "six-interval sequence breaks the {name} weight bound"
            )));
        }
    }
    Ok(seq)
}

fn solve_ge6_positive(
    w: &WheelInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    w1: &WeightFn,
    w2: &WeightFn,
) -> Result<ExchangeSequence> {
    let d1 = decompose(w, p1)?;
    let n_iv = d1.num_intervals();
    let xs1 = interval_weights(w, &d1, p2, w1).xs;
    let xs2 = interval_weights(w, &d1, p2, w2).xs;
    let q = n_iv / 2;

    // Offsets (from the chosen index) of the intervals to collapse, and the
    // admissibility test for a candidate index.
    type IneqCheck = Box<dyn Fn(&[Weight], usize) -> Result<bool>>;
    let (offsets, admissible): (Vec<usize>, IneqCheck) = if q % 2 == 1 {
        let k = (q - 1) / 2;
        let offs: Vec<usize> = (1..=k)
            .map(|i| 2 * i - 1)
            .chain((k + 1..=2 * k).map(|i| 2 * i))
            .collect();
        (offs, Box::new(move |xs, j| check_ineq_a(xs, j, k)))
    } else {
        let k = q / 2;
        let offs: Vec<usize> = (1..=k - 1)
            .map(|i| 2 * i - 1)
            .chain((k..=2 * k - 1).map(|i| 2 * i))
            .collect();
        (offs, Box::new(move |xs, j| check_ineq_b(xs, j, k)))
    };

    let j = (1..=n_iv)
        .find(|&j| admissible(&xs1, j).unwrap_or(false) && admissible(&xs2, j).unwrap_or(false))
        .ok_or_else(|| Error::InternalBound("no admissible collapse index".into()))?;

    let mut rep = Replayer::new(w, *p1);
    for &off in &offsets {
        collapse_interval(w, &mut rep, d1.cyclic(j - 1, off))?;
    }
    debug_assert_eq!(decompose(w, &rep.cur)?.num_intervals(), 2);
    let cur = rep.cur;
    let tail = finish_two_intervals(w, cur, p2, w1, false)?;
    Ok(rep.into_sequence().concat(tail))
}

/// Exchange sequence between any two colorings: length at most `n - 1`,
/// weight at most `w(E)`, each edge used at most twice.
pub fn solve_wheel(
    w: &WheelInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    wf: &WeightFn,
) -> Result<ExchangeSequence> {
    let d1 = decompose(w, p1)?;
    let d2 = decompose(w, p2)?;
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    let seq = if d1.orientation == d2.orientation {
        monotone_same_orientation(w, p1, p2)?
    } else if d1.num_intervals() <= 4 {
        solve_le4(w, p1, p2, wf)?
    } else {
        solve_ge6(w, p1, p2, wf, &WeightFn::unit(2 * w.num_spokes()))?
    };
    check_bounds(w, p1, p2, &seq, wf, w.num_spokes())?;
    Ok(seq)
}

fn check_bounds(
    w: &WheelInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    seq: &ExchangeSequence,
    wf: &WeightFn,
    max_len: usize,
) -> Result<()> {
    let report = verify_sequence(w, p1, p2, seq, wf)?;
    if !report.valid {
        return Err(Error::InternalBound(
            "wheel sequence does not replay".into(),
        ));
    }
    if report.length > max_len {
        return Err(Error::InternalBound(format!(
            "wheel sequence length {} exceeds {max_len}",
            report.length
        )));
    }
    if report.weight > wf.total(w.ground()) {
        return Err(Error::InternalBound("wheel sequence exceeds w(E)".into()));
    }
    if report.max_usage > 2 {
        return Err(Error::InternalBound(
            "wheel sequence uses an edge more than twice".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::wheel;
    use crate::pairs::Exchange;

    fn pair(w: &WheelInstance, reds: &[(char, usize)]) -> BasisPair {
        let r: ElemSet = reds
            .iter()
            .map(|&(kind, i)| if kind == 's' { w.spoke(i) } else { w.rim(i) })
            .collect();
        BasisPair::new(r, w.ground() - r)
    }

    #[test]
    fn decompose_examples() {
        let w = wheel(5).unwrap();
        let a = pair(&w, &[('s', 1), ('s', 2), ('r', 2), ('r', 3)]);
        let d = decompose(&w, &a).unwrap();
        assert_eq!(d.orientation, Orientation::Positive);
        assert_eq!(d.num_intervals(), 2);
        assert_eq!(d.intervals[0].spokes, vec![1, 2]);
        assert_eq!(d.intervals[1].spokes, vec![3, 4]);

        let neg = pair(&w, &[('s', 1), ('s', 2), ('r', 3), ('r', 4)]);
        let d = decompose(&w, &neg).unwrap();
        assert_eq!(d.orientation, Orientation::Negative);
        assert_eq!(d.num_intervals(), 2);

        // All spokes in one class cannot form a coloring.
        let all_spokes: ElemSet = (1..=4).map(|i| w.spoke(i)).collect();
        let p = BasisPair::new(all_spokes, w.ground() - all_spokes);
        assert!(matches!(decompose(&w, &p), Err(Error::NotAColoring)));
    }

    #[test]
    fn coloring_roundtrips_through_decompose() {
        let w = wheel(6).unwrap();
        for (i, p) in w.colorings().into_iter().enumerate() {
            let d = decompose(&w, &p).unwrap();
            let expected = if i % 2 == 0 {
                Orientation::Positive
            } else {
                Orientation::Negative
            };
            assert_eq!(d.orientation, expected);
        }
    }

    #[test]
    fn phi_maps_are_bijections() {
        let w = wheel(7).unwrap();
        for o in [Orientation::Positive, Orientation::Negative] {
            for phi in [WheelInstance::phi_minus, WheelInstance::phi_plus] {
                let mut seen = std::collections::BTreeSet::new();
                for i in 1..=w.num_spokes() {
                    seen.insert(phi(&w, o, i));
                }
                assert_eq!(seen.len(), w.num_spokes());
            }
        }
    }

    #[test]
    fn monotone_examples() {
        let w = wheel(5).unwrap();
        let unit = WeightFn::unit(8);
        let a = pair(&w, &[('s', 1), ('s', 2), ('r', 2), ('r', 3)]);
        let c = pair(&w, &[('s', 2), ('s', 3), ('r', 3), ('r', 4)]);
        let seq = monotone_same_orientation(&w, &a, &c).unwrap();
        assert_eq!(
            seq.steps,
            vec![
                Exchange::new(w.spoke(1), w.rim(4)),
                Exchange::new(w.rim(2), w.spoke(3)),
            ]
        );
        let rep = verify_sequence(&w, &a, &c, &seq, &unit).unwrap();
        assert!(rep.valid && rep.monotone);

        assert!(monotone_same_orientation(&w, &a, &a).unwrap().is_empty());

        // Mid-interval single spoke difference on wheel(6).
        let w6 = wheel(6).unwrap();
        let p1 = w6.coloring(0b00111, Orientation::Positive).unwrap();
        let p2 = w6.coloring(0b00101, Orientation::Positive).unwrap();
        let seq = monotone_same_orientation(&w6, &p1, &p2).unwrap();
        assert_eq!(seq.len(), 1);
    }

    #[test]
    fn le4_two_interval_example() {
        let w = wheel(5).unwrap();
        let unit = WeightFn::unit(8);
        let a = pair(&w, &[('s', 1), ('s', 2), ('r', 2), ('r', 3)]);
        let b = pair(&w, &[('s', 1), ('s', 2), ('r', 4), ('r', 3)]);
        let seq = solve_le4(&w, &a, &b, &unit).unwrap();
        assert_eq!(seq.steps, vec![Exchange::new(w.rim(2), w.rim(4))]);
    }

    #[test]
    fn le4_blocked_singleton_uses_three_steps() {
        let w = wheel(4).unwrap();
        let unit = WeightFn::unit(6);
        // Positive coloring with the single red spoke s1; the target flips
        // s1 and its backward rim r3 only among the four edges around s1.
        let p1 = w.coloring(0b001, Orientation::Positive).unwrap();
        let p2 = w.coloring(0b010, Orientation::Negative).unwrap();
        assert_eq!(p1.r, pair(&w, &[('s', 1), ('r', 1), ('r', 2)]).r);
        assert_eq!(p2.r, pair(&w, &[('s', 2), ('r', 1), ('r', 3)]).r);
        let seq = solve_le4(&w, &p1, &p2, &unit).unwrap();
        // With w(a) = w(d) the sequence starts (b, d), (s, phi_plus(s)), (c, d).
        assert_eq!(
            seq.steps,
            vec![
                Exchange::new(w.rim(1), w.rim(3)),
                Exchange::new(w.rim(2), w.spoke(2)),
                Exchange::new(w.spoke(1), w.rim(1)),
            ]
        );
    }

    #[test]
    fn le4_rejects_same_orientation() {
        let w = wheel(5).unwrap();
        let unit = WeightFn::unit(8);
        let a = pair(&w, &[('s', 1), ('s', 2), ('r', 2), ('r', 3)]);
        let c = pair(&w, &[('s', 2), ('s', 3), ('r', 3), ('r', 4)]);
        assert!(matches!(
            solve_le4(&w, &a, &c, &unit),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ineq_a_examples() {
        let one = Weight::from_integer(1);
        let zero = Weight::from_integer(0);
        let xs = vec![one; 6];
        assert!(check_ineq_a(&xs, 1, 1).unwrap());
        let xs = vec![one, zero, zero, zero, zero, zero];
        assert!(check_ineq_a(&xs, 1, 1).unwrap());
        assert!(check_ineq_a(&xs, 2, 2).is_err());
    }

    #[test]
    fn ge6_six_interval_example() {
        let w = wheel(8).unwrap();
        let unit = WeightFn::unit(14);
        // Six intervals over seven spokes.
        let mask = 0b0010101u32;
        let p1 = w.coloring(mask, Orientation::Positive).unwrap();
        let p2 = w.coloring(mask, Orientation::Negative).unwrap();
        let seq = solve_ge6(&w, &p1, &p2, &unit, &unit).unwrap();
        let rep = verify_sequence(&w, &p1, &p2, &seq, &unit).unwrap();
        assert!(rep.valid);
        assert!(rep.weight <= unit.total(w.ground()));
        assert!(rep.max_usage <= 2);

        assert!(matches!(
            solve_ge6(
                &wheel(5).unwrap(),
                &pair(
                    &wheel(5).unwrap(),
                    &[('s', 1), ('s', 2), ('r', 2), ('r', 3)]
                ),
                &pair(
                    &wheel(5).unwrap(),
                    &[('s', 1), ('s', 2), ('r', 3), ('r', 4)]
                ),
                &WeightFn::unit(8),
                &WeightFn::unit(8)
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn solve_wheel_smoke() {
        let w = wheel(5).unwrap();
        let unit = WeightFn::unit(8);
        let a = pair(&w, &[('s', 1), ('s', 2), ('r', 2), ('r', 3)]);
        assert!(solve_wheel(&w, &a, &a, &unit).unwrap().is_empty());
        let c = pair(&w, &[('s', 2), ('s', 3), ('r', 3), ('r', 4)]);
        let seq = solve_wheel(&w, &a, &c, &unit).unwrap();
        assert_eq!(seq.len(), 2);
    }

    #[test]
    fn four_singleton_intervals_restart_on_the_blue_side() {
        // wheel(5) with alternating spokes: zero weights steer the collapse
        // onto the red interval around s3, stranding the singleton s1 whose
        // recolor set is the blocked {phi_minus(s1), s1}. Both colorings use
        // exactly half the spokes in red, so the three-step detour is one
        // exchange too long and the solver restarts on the blue side.
        let w = wheel(5).unwrap();
        let mut wf = WeightFn::unit(8);
        wf.set(w.spoke(3), Weight::from_integer(0)).unwrap();
        wf.set(w.rim(2), Weight::from_integer(0)).unwrap();
        let p1 = w.coloring(0b0101, Orientation::Positive).unwrap();
        let p2 = w.coloring(0b0110, Orientation::Negative).unwrap();
        let seq = solve_le4(&w, &p1, &p2, &wf).unwrap();
        assert_eq!(seq.steps[0], Exchange::new(w.rim(3), w.spoke(4)));
        let rep = verify_sequence(&w, &p1, &p2, &seq, &wf).unwrap();
        assert!(rep.valid);
        assert!(rep.length <= 4);
    }

    #[test]
    fn interval_weights_partition_the_edge_weight() {
        let w = wheel(7).unwrap();
        let wf = WeightFn::new((0..12).map(|i| Weight::new(i + 1, 3)).collect()).unwrap();
        let colorings = w.colorings();
        for p1 in colorings.iter().step_by(9) {
            let d = decompose(&w, p1).unwrap();
            for p2 in colorings.iter().step_by(11) {
                let iw = interval_weights(&w, &d, p2, &wf);
                let total: Weight = iw.xs.iter().chain(iw.ys.iter()).sum();
                assert_eq!(total, wf.total(w.ground()));
                for (i, iv) in d.intervals.iter().enumerate() {
                    let elems: ElemSet = iv
                        .spokes
                        .iter()
                        .flat_map(|&s| [w.spoke(s), w.rim(w.phi_minus(d.orientation, s))])
                        .collect();
                    assert_eq!(iw.xs[i] + iw.ys[i], wf.total(elems));
                }
            }
        }
    }

    #[test]
    fn spoke_phi_minus_exchange_preserves_orientation() {
        let w = wheel(6).unwrap();
        for p in w.colorings() {
            let d = decompose(&w, &p).unwrap();
            for i in 1..=w.num_spokes() {
                let mut rep = Replayer::new(&w, p);
                if push_spoke_phi_swap(&mut rep, &w, d.orientation, i).is_ok() {
                    let d2 = decompose(&w, &rep.cur).unwrap();
                    assert_eq!(d2.orientation, d.orientation);
                }
            }
        }
    }
}
