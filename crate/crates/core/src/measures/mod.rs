//! Exact probability measures on `{0,1}^n`.
//!
//! Everything here is rational arithmetic; nothing is ever rounded. The
//! scan kernels in [`scaled`] reuse the same values rescaled to a common
//! integer denominator.

mod file;
pub mod scaled;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::cube::{Event, Point};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use file::{AnyMeasure, MeasureJson};

/// Largest dimension of a measure.
pub const MAX_MEASURE_DIM: usize = 16;

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_MEASURE_DIM {
        return Err(Error::DimensionOutOfRange { n, min: 0, max: MAX_MEASURE_DIM });
    }
    Ok(())
}

/// A law on `{0,1}^n` with exactly computable atoms.
pub trait Measure: Sync {
    fn dim(&self) -> usize;

    fn atom(&self, x: Point) -> Rational;

    fn prob(&self, e: &Event) -> Result<Rational> {
        if e.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: e.dim() });
        }
        Ok(e.points().map(|x| self.atom(x)).sum())
    }

    fn to_table(&self) -> TableMeasure {
        let n = self.dim();
        TableMeasure { n, w: (0..1u32 << n).map(|x| self.atom(Point(x))).collect() }
    }
}

/// Independent coordinates with `P(X_i = 1) = p[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductMeasure {
    p: Vec<Rational>,
}

impl ProductMeasure {
    pub fn new(p: Vec<Rational>) -> Result<ProductMeasure> {
        check_dim(p.len())?;
        if let Some(bad) = p.iter().find(|r| !rational::is_probability(r)) {
            return Err(Error::InvalidProbability(rational::format(bad)));
        }
        Ok(ProductMeasure { p })
    }

    pub fn uniform(n: usize) -> Result<ProductMeasure> {
        ProductMeasure::new(vec![rational::ratio(1, 2); n])
    }

    pub fn params(&self) -> &[Rational] {
        &self.p
    }
}

impl Measure for ProductMeasure {
    fn dim(&self) -> usize {
        self.p.len()
    }

    fn atom(&self, x: Point) -> Rational {
        self.p.iter().enumerate().fold(Rational::one(), |acc, (i, p)| {
            if x.0 >> i & 1 == 1 {
                acc * p
            } else {
                acc * (Rational::one() - p)
            }
        })
    }
}

/// A law given atom by atom, indexed by point encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMeasure {
    n: usize,
    w: Vec<Rational>,
}

impl TableMeasure {
    pub fn new(n: usize, w: Vec<Rational>) -> Result<TableMeasure> {
        check_dim(n)?;
        if w.len() != 1 << n {
            return Err(Error::DimensionMismatch { left: 1 << n, right: w.len() });
        }
        if let Some(bad) = w.iter().find(|r| !rational::is_probability(r)) {
            return Err(Error::InvalidProbability(rational::format(bad)));
        }
        let total: Rational = w.iter().sum();
        if !total.is_one() {
            return Err(Error::NotNormalized(rational::format(&total)));
        }
        Ok(TableMeasure { n, w })
    }

    /// Builds a table from nonnegative integer masses, normalizing by their sum.
    pub fn from_counts(n: usize, counts: &[u64]) -> Result<TableMeasure> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::NotNormalized("0/1".into()));
        }
        let total = BigInt::from(total);
        let w = counts.iter().map(|&c| Rational::new(BigInt::from(c), total.clone())).collect();
        TableMeasure::new(n, w)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.w
    }

    pub fn weight(&self, x: Point) -> &Rational {
        &self.w[x.0 as usize]
    }

    /// Positive lattice condition over all incomparable point pairs; returns
    /// the first violation with pairs ordered by `(a, b)` encodings, `a < b`.
    pub fn check_fkg(&self) -> Option<FkgViolation> {
        let (_, counts) = self.integer_counts();
        let size = 1u32 << self.n;
        for a in 0..size {
            if counts[a as usize].is_zero() {
                continue;
            }
            for b in a + 1..size {
                let (pa, pb) = (Point(a), Point(b));
                if pa.comparable(pb) || counts[b as usize].is_zero() {
                    continue;
                }
                let lhs = &counts[a as usize] * &counts[b as usize];
                let rhs = &counts[(a & b) as usize] * &counts[(a | b) as usize];
                if lhs > rhs {
                    return Some(FkgViolation {
                        a: pa,
                        b: pb,
                        lhs: self.weight(pa) * self.weight(pb),
                        rhs: self.weight(pa.meet(pb)) * self.weight(pa.join(pb)),
                    });
                }
            }
        }
        None
    }

    /// Law of the remaining coordinates given `X_c = v` for every `(c, v)` in
    /// `assignment` (coordinates 1-based). Remaining coordinates keep their
    /// relative order.
    pub fn condition(&self, assignment: &[(usize, bool)]) -> Result<TableMeasure> {
        let mut fixed_mask = 0u32;
        let mut fixed_vals = 0u32;
        for &(c, v) in assignment {
            if c == 0 || c > self.n {
                return Err(Error::Parse(format!("coordinate {c} outside 1..={}", self.n)));
            }
            let bit = 1 << (c - 1);
            if fixed_mask & bit != 0 && (fixed_vals & bit != 0) != v {
                return Err(Error::ZeroProbabilityCondition);
            }
            fixed_mask |= bit;
            if v {
                fixed_vals |= bit;
            }
        }
        let free: Vec<usize> = (0..self.n).filter(|i| fixed_mask >> i & 1 == 0).collect();
        let mut w = vec![Rational::zero(); 1 << free.len()];
        for (x, wx) in self.w.iter().enumerate() {
            let x = x as u32;
            if x & fixed_mask != fixed_vals {
                continue;
            }
            let y = free.iter().enumerate().fold(0usize, |acc, (j, &i)| acc | ((x as usize >> i & 1) << j));
            w[y] += wx;
        }
        let total: Rational = w.iter().sum();
        if total.is_zero() {
            return Err(Error::ZeroProbabilityCondition);
        }
        w.iter_mut().for_each(|v| *v /= &total);
        TableMeasure::new(free.len(), w)
    }

    /// Common denominator and the atoms rescaled to integers over it.
    pub fn integer_counts(&self) -> (BigUint, Vec<BigUint>) {
        let denom = rational::common_denominator(&self.w);
        let d = BigInt::from(denom.clone());
        let counts = self
            .w
            .iter()
            .map(|r| {
                let c = r.numer() * (&d / r.denom());
                c.to_biguint().expect("weights are nonnegative")
            })
            .collect();
        (denom, counts)
    }
}

impl Measure for TableMeasure {
    fn dim(&self) -> usize {
        self.n
    }

    fn atom(&self, x: Point) -> Rational {
        self.w[x.0 as usize].clone()
    }

    fn to_table(&self) -> TableMeasure {
        self.clone()
    }
}

/// A point pair `(a, b)` with `μ(a)μ(b) > μ(a∧b)μ(a∨b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FkgViolation {
    pub a: Point,
    pub b: Point,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl std::fmt::Display for FkgViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "A={:?} B={:?}: {} > {}",
            self.a.coords(),
            self.b.coords(),
            rational::format(&self.lhs),
            rational::format(&self.rhs)
        )
    }
}

pub fn is_independent(m: &impl Measure, a: &Event, b: &Event) -> Result<bool> {
    let ab = a.intersect(b)?;
    Ok(m.prob(&ab)? == m.prob(a)? * m.prob(b)?)
}

pub fn is_positively_correlated(m: &impl Measure, a: &Event, b: &Event) -> Result<bool> {
    let ab = a.intersect(b)?;
    Ok(m.prob(&ab)? >= m.prob(a)? * m.prob(b)?)
}

pub const MAX_FIXED_POINT_DIM: usize = 8;

/// Number of fixed-point-free permutations of `k` elements.
pub fn derangements(k: usize) -> BigUint {
    let (mut prev, mut cur) = (BigUint::one(), BigUint::zero());
    if k == 0 {
        return prev;
    }
    for j in 2..=k {
        let next = BigUint::from(j - 1) * (&prev + &cur);
        prev = cur;
        cur = next;
    }
    cur
}

/// Law of the fixed-point set of a uniform permutation of `[n]`:
/// the atom at `S` is `D_{n-|S|} / n!`.
pub fn fixed_point_measure(n: usize) -> Result<TableMeasure> {
    if !(1..=MAX_FIXED_POINT_DIM).contains(&n) {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: MAX_FIXED_POINT_DIM });
    }
    let factorial: BigUint = (1..=n).map(BigUint::from).product();
    let by_size: Vec<Rational> = (0..=n)
        .map(|s| Rational::new(derangements(n - s).into(), factorial.clone().into()))
        .collect();
    let w = (0..1u32 << n).map(|x| by_size[x.count_ones() as usize].clone()).collect();
    TableMeasure::new(n, w)
}
