//! Exact nonnegative rational weights.
//!
//! All bound checks in this crate are equalities or inequalities between
//! sums of element weights, so weights are rationals rather than floats.

use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::ground::{ElemSet, Element, Relabel};

/// Exact rational weight. Desk-scale sums stay far below the `i64` range.
pub type Weight = Ratio<i64>;

/// A nonnegative weight per ground-set element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFn {
    values: Vec<Weight>,
}

#[allow(clippy::len_without_is_empty)]
impl WeightFn {
    pub fn new(values: Vec<Weight>) -> Result<Self> {
        if values.iter().any(|v| v < &Weight::zero()) {
            return Err(Error::Domain("weights must be nonnegative".into()));
        }
        Ok(WeightFn { values })
    }

    /// All-ones weight function on `n` elements.
    pub fn unit(n: usize) -> Self {
        WeightFn {
            values: vec![Weight::one(); n],
        }
    }

    /// Indicator weight of a single element.
    pub fn indicator(n: usize, e: Element) -> Self {
        let mut values = vec![Weight::zero(); n];
        values[e.id()] = Weight::one();
        WeightFn { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, e: Element) -> Weight {
        self.values[e.id()]
    }

    pub fn set(&mut self, e: Element, w: Weight) -> Result<()> {
        if w < Weight::zero() {
            return Err(Error::Domain("weights must be nonnegative".into()));
        }
        self.values[e.id()] = w;
        Ok(())
    }

    pub fn total(&self, s: ElemSet) -> Weight {
        s.iter().map(|e| self.get(e)).sum()
    }

    /// The weight function seen through a relabeling: `out(r(e)) = self(e)`.
    pub fn relabeled(&self, r: &Relabel) -> WeightFn {
        let mut values = vec![Weight::zero(); self.values.len()];
        for (id, &v) in self.values.iter().enumerate() {
            values[r.apply(Element::new(id)).id()] = v;
        }
        WeightFn { values }
    }

    /// Random weights `p/q` with `p <= max_num`, `1 <= q <= max_den`.
    pub fn sample<R: Rng>(rng: &mut R, n: usize, max_num: u32, max_den: u32) -> Self {
        let values = (0..n)
            .map(|_| {
                let p = rng.gen_range(0..=max_num) as i64;
                let q = rng.gen_range(1..=max_den) as i64;
                Ratio::new(p, q)
            })
            .collect();
        WeightFn { values }
    }
}

/// Parse a rational from `"p/q"` or plain integer `"p"` form.
pub fn parse_weight(s: &str) -> Result<Weight> {
    let bad = || Error::Domain(format!("invalid rational '{s}'"));
    let w = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ratio::new(p, q)
        }
        None => Ratio::from_integer(s.trim().parse().map_err(|_| bad())?),
    };
    if w < Weight::zero() {
        return Err(Error::Domain(format!("negative weight '{s}'")));
    }
    Ok(w)
}

/// Render a rational in the `"p/q"` form used by the file formats.
pub fn format_weight(w: Weight) -> String {
    format!("{}/{}", w.numer(), w.denom())
}
