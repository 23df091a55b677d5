//! The three-event correlation expression
//!
//! `2P(ABC) - [P(AB)P(C) + P(AC)P(B) + P(BC)P(A)] + P(A)P(B)P(C)`,
//!
//! conjectured nonnegative for product measures, with exact evaluation, its
//! polynomial form in the product parameters, and an exhaustive grid scan.

use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{require_nonempty, require_same_dim, Polynomial};
use crate::cube::IncreasingEvent;
use crate::error::{Error, Result};
use crate::measures::scaled::MaskSums;
use crate::measures::{Measure, ProductMeasure};
use crate::monotone::nonempty_masks;
use crate::rational::{self, Rational};

pub const MAX_SAHI_SCAN_DIM: usize = 3;

/// Exact value of the expression under any measure.
pub fn sahi_value(
    m: &impl Measure,
    a: &IncreasingEvent,
    b: &IncreasingEvent,
    c: &IncreasingEvent,
) -> Result<Rational> {
    require_same_dim(m.dim(), &[a, b, c])?;
    require_nonempty(&[a, b, c])?;
    let ab = a.intersect(b)?;
    let ac = a.intersect(c)?;
    let bc = b.intersect(c)?;
    let abc = ab.intersect(c)?;
    let (pa, pb, pc) = (m.prob(a)?, m.prob(b)?, m.prob(c)?);
    let two = rational::from_int(2);
    Ok(two * m.prob(&abc)? - (m.prob(&ab)? * &pc + m.prob(&ac)? * &pb + m.prob(&bc)? * &pa) + pa * pb * pc)
}

/// The expression under the product measure with parameters `p_1..p_n`, as a
/// polynomial. Each probability is multilinear; the products raise
/// individual degrees up to 3.
pub fn sahi_polynomial(a: &IncreasingEvent, b: &IncreasingEvent, c: &IncreasingEvent) -> Result<Polynomial> {
    let n = a.dim();
    require_same_dim(n, &[b, c])?;
    require_nonempty(&[a, b, c])?;
    let prob = |e: &IncreasingEvent| Polynomial::event_probability(e);
    let (pa, pb, pc) = (prob(a), prob(b), prob(c));
    let ab = a.intersect(b)?;
    let ac = a.intersect(c)?;
    let bc = b.intersect(c)?;
    let abc = ab.intersect(c)?;
    let pairs = &(&(&prob(&ab) * &pc) + &(&prob(&ac) * &pb)) + &(&prob(&bc) * &pa);
    let triple = &(&pa * &pb) * &pc;
    Ok(&(&prob(&abc).scale(&BigInt::from(2)) - &pairs) + &triple)
}

/// One evaluation of the expression at a product measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SahiReport {
    pub a: IncreasingEvent,
    pub b: IncreasingEvent,
    pub c: IncreasingEvent,
    pub p_star: Vec<Rational>,
    pub value: Rational,
    pub grid: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SahiScan {
    /// First minimizer in canonical (triple, grid point) order.
    pub minimum: SahiReport,
    /// Strictly negative instances, each confirmed through the polynomial form.
    pub negatives: Vec<SahiReport>,
    pub triples: u64,
    pub grid_points: u64,
}

impl SahiScan {
    pub fn evaluations(&self) -> u64 {
        self.triples * self.grid_points
    }
}

/// Signed integers for the scaled expression.
trait Signed: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Send + Sync {
    fn from_biguint(v: &BigUint) -> Self;
    fn into_bigint(self) -> BigInt;
}

impl Signed for i128 {
    fn from_biguint(v: &BigUint) -> Self {
        v.to_i128().expect("scaled masses fit the fast path")
    }

    fn into_bigint(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Signed for BigInt {
    fn from_biguint(v: &BigUint) -> Self {
        BigInt::from(v.clone())
    }

    fn into_bigint(self) -> BigInt {
        self
    }
}

/// `(value · D³, triple index, grid index)` for the minimum, plus the
/// negative hits, where `D = d^n` and `d` is the grid's common denominator.
type ScanHits<T> = ((T, usize, usize), Vec<(usize, usize)>);

fn scan_kernel<T: Signed>(
    denom: &BigUint,
    point_atoms: &[Vec<BigUint>],
    masks: &[u64],
    triples: &[(usize, usize, usize)],
) -> ScanHits<T> {
    let big_d = T::from_biguint(denom);
    let d2 = big_d.clone() * big_d.clone();
    let two_d2 = d2.clone() + d2;
    let tables: Vec<MaskSums<T>> = point_atoms
        .iter()
        .map(|atoms| MaskSums::new(&atoms.iter().map(T::from_biguint).collect::<Vec<_>>()))
        .collect();
    let per_triple: Vec<ScanHits<T>> = triples
        .par_iter()
        .enumerate()
        .map(|(t, &(ia, ib, ic))| {
            let (a, b, c) = (masks[ia], masks[ib], masks[ic]);
            let mut best: Option<(T, usize, usize)> = None;
            let mut negatives = Vec::new();
            for (g, sums) in tables.iter().enumerate() {
                let (sa, sb, sc) = (sums.sum(a), sums.sum(b), sums.sum(c));
                let pairs = sums.sum(a & b) * sc.clone() + sums.sum(a & c) * sb.clone() + sums.sum(b & c) * sa.clone();
                let value = two_d2.clone() * sums.sum(a & b & c) - big_d.clone() * pairs + sa * sb * sc;
                if value < T::zero() {
                    negatives.push((t, g));
                }
                if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
                    best = Some((value, t, g));
                }
            }
            (best.expect("grid is nonempty"), negatives)
        })
        .collect();
    let mut negatives = Vec::new();
    let mut best: Option<(T, usize, usize)> = None;
    for (cand, neg) in per_triple {
        negatives.extend(neg);
        if best.as_ref().is_none_or(|(v, _, _)| cand.0 < *v) {
            best = Some(cand);
        }
    }
    (best.expect("at least one triple"), negatives)
}

/// Evaluates the expression for every unordered triple (with repetition) of
/// nonempty increasing events on `n` coordinates and every product measure
/// whose parameters all lie in `grid`.
pub fn sahi_scan(n: usize, grid: &[Rational]) -> Result<SahiScan> {
    if !(1..=MAX_SAHI_SCAN_DIM).contains(&n) {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: MAX_SAHI_SCAN_DIM });
    }
    if grid.is_empty() {
        return Err(Error::Parse("empty grid".into()));
    }
    if let Some(bad) = grid.iter().find(|g| !rational::is_interior(g)) {
        return Err(Error::InvalidProbability(rational::format(bad)));
    }
    let masks = nonempty_masks(n);
    let mut triples = Vec::new();
    for i in 0..masks.len() {
        for j in i..masks.len() {
            for k in j..masks.len() {
                triples.push((i, j, k));
            }
        }
    }

    // Grid points in lexicographic order, coordinate 1 slowest. Over the
    // common denominator d, p_i = num_i / d and every atom is an integer over
    // D = d^n.
    let d = rational::common_denominator(grid);
    let d_int = BigInt::from(d.clone());
    let nums: Vec<BigUint> = grid
        .iter()
        .map(|g| (g.numer() * (&d_int / g.denom())).to_biguint().expect("grid values are positive"))
        .collect();
    let gsize = grid.len();
    let point_count = gsize.pow(n as u32);
    let digits = |g: usize| -> Vec<usize> { (0..n).map(|i| g / gsize.pow((n - 1 - i) as u32) % gsize).collect() };
    let point_atoms: Vec<Vec<BigUint>> = (0..point_count)
        .map(|g| {
            let dg = digits(g);
            (0..1usize << n)
                .map(|x| {
                    (0..n).fold(BigUint::from(1u32), |acc, i| {
                        let num = &nums[dg[i]];
                        if x >> i & 1 == 1 {
                            acc * num
                        } else {
                            acc * (&d - num)
                        }
                    })
                })
                .collect()
        })
        .collect();
    let big_d = d.pow(n as u32);

    // |value · D³| <= 6 D³, so i128 is exact while D < 2^40.
    let ((_, t_min, g_min), negative_hits) = if big_d.bits() < 40 {
        let ((v, t, g), neg) = scan_kernel::<i128>(&big_d, &point_atoms, masks, &triples);
        ((v.into_bigint(), t, g), neg)
    } else {
        scan_kernel::<BigInt>(&big_d, &point_atoms, masks, &triples)
    };

    let report = |t: usize, g: usize| -> Result<(SahiReport, Polynomial)> {
        let (ia, ib, ic) = triples[t];
        let (a, b, c) = (
            IncreasingEvent::from_mask(n, masks[ia])?,
            IncreasingEvent::from_mask(n, masks[ib])?,
            IncreasingEvent::from_mask(n, masks[ic])?,
        );
        let p_star: Vec<Rational> = digits(g).into_iter().map(|k| grid[k].clone()).collect();
        let value = sahi_value(&ProductMeasure::new(p_star.clone())?, &a, &b, &c)?;
        let poly = sahi_polynomial(&a, &b, &c)?;
        Ok((SahiReport { a, b, c, p_star, value, grid: grid.to_vec() }, poly))
    };

    let (minimum, _) = report(t_min, g_min)?;
    let mut negatives = Vec::new();
    for (t, g) in negative_hits {
        let (r, poly) = report(t, g)?;
        let symbolic = poly.eval(&r.p_star);
        assert!(
            symbolic == r.value && symbolic < Rational::zero(),
            "grid hit failed symbolic re-verification"
        );
        negatives.push(r);
    }
    Ok(SahiScan { minimum, negatives, triples: triples.len() as u64, grid_points: point_count as u64 })
}
