//! Search for triples `(A, B, C)` of nonempty increasing events with
//! `AB ⟂ C`, `AC ⟂ B`, `P(A) > 0` but `B` and `C` dependent. Such a triple
//! cannot exist when the measure is a law of increasing functions of finitely
//! many independent variables.

use rayon::prelude::*;

use crate::cube::IncreasingEvent;
use crate::error::{Error, Result};
use crate::measures::scaled::{Mass, Scaled, ScaledMeasure};
use crate::measures::{Measure, TableMeasure};
use crate::monotone::nonempty_masks;
use crate::rational::Rational;
use crate::with_scaled;

/// Full ordered-triple scans are affordable up to 168³ triples.
pub const MAX_ABC_DIM: usize = 4;

/// The seven exact probabilities of a triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcProbs {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub ab: Rational,
    pub ac: Rational,
    pub bc: Rational,
    pub abc: Rational,
}

impl AbcProbs {
    pub fn as_array(&self) -> [&Rational; 7] {
        [&self.a, &self.b, &self.c, &self.ab, &self.ac, &self.bc, &self.abc]
    }

    /// Hypotheses hold and the conclusion fails.
    pub fn is_witness(&self) -> bool {
        use num_traits::Zero;
        !self.a.is_zero()
            && self.abc == &self.ab * &self.c
            && self.abc == &self.ac * &self.b
            && self.bc != &self.b * &self.c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcWitness {
    pub a: IncreasingEvent,
    pub b: IncreasingEvent,
    pub c: IncreasingEvent,
    pub probs: AbcProbs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcReport {
    /// Witnesses in canonical `(A, B, C)` order, at most `limit` of them.
    pub witnesses: Vec<AbcWitness>,
    /// All witnesses found, including those beyond the limit.
    pub total_witnesses: u64,
    pub triples_scanned: u64,
}

/// Indices `(a, b, c)` of witnesses for a fixed `A`, at most `limit`, plus the
/// full count.
fn scan_row<T: Mass>(
    s: &Scaled<T>,
    masks: &[u64],
    mass: &[T],
    dependent: &[Vec<bool>],
    ia: usize,
    limit: usize,
) -> (Vec<(usize, usize, usize)>, u64) {
    let a = masks[ia];
    if mass[ia].is_zero() {
        return (Vec::new(), 0);
    }
    let mass_ac: Vec<T> = masks.iter().map(|&c| s.mass(a & c)).collect();
    let mut found = Vec::new();
    let mut count = 0u64;
    for (ib, &b) in masks.iter().enumerate() {
        let ab = a & b;
        let mass_ab = s.mass(ab);
        for (ic, &c) in masks.iter().enumerate() {
            if !dependent[ib][ic] {
                continue;
            }
            let scaled_abc = s.denom.mul_ref(&s.mass(ab & c));
            if scaled_abc == mass_ab.mul_ref(&mass[ic]) && scaled_abc == mass_ac[ic].mul_ref(&mass[ib]) {
                count += 1;
                if found.len() < limit {
                    found.push((ia, ib, ic));
                }
            }
        }
    }
    (found, count)
}

fn scan<T: Mass>(s: &Scaled<T>, masks: &[u64], limit: usize) -> (Vec<(usize, usize, usize)>, u64) {
    let mass: Vec<T> = masks.iter().map(|&m| s.mass(m)).collect();
    let dependent: Vec<Vec<bool>> = masks
        .iter()
        .enumerate()
        .map(|(ib, &b)| {
            masks
                .iter()
                .enumerate()
                .map(|(ic, &c)| s.denom.mul_ref(&s.mass(b & c)) != mass[ib].mul_ref(&mass[ic]))
                .collect()
        })
        .collect();
    let rows: Vec<_> = (0..masks.len())
        .into_par_iter()
        .map(|ia| scan_row(s, masks, &mass, &dependent, ia, limit))
        .collect();
    let total = rows.iter().map(|(_, c)| c).sum();
    let found = rows.into_iter().flat_map(|(f, _)| f).take(limit).collect();
    (found, total)
}

/// Every ordered triple of nonempty increasing events satisfying the
/// hypotheses with a failing conclusion, in canonical order; at most `limit`
/// are materialized.
pub fn abc_scan(m: &TableMeasure, limit: Option<usize>) -> Result<AbcReport> {
    let n = m.dim();
    if n > MAX_ABC_DIM {
        return Err(Error::DimensionOutOfRange { n, min: 0, max: MAX_ABC_DIM });
    }
    let masks = nonempty_masks(n);
    let limit = limit.unwrap_or(usize::MAX);
    let scaled = ScaledMeasure::new(m);
    let (found, total) = with_scaled!(&scaled, s => scan(s, masks, limit));
    let witnesses = with_scaled!(&scaled, s => found
        .into_iter()
        .map(|(ia, ib, ic)| {
            let (a, b, c) = (masks[ia], masks[ib], masks[ic]);
            let probs = AbcProbs {
                a: s.prob(a),
                b: s.prob(b),
                c: s.prob(c),
                ab: s.prob(a & b),
                ac: s.prob(a & c),
                bc: s.prob(b & c),
                abc: s.prob(a & b & c),
            };
            debug_assert!(probs.is_witness());
            Ok(AbcWitness {
                a: IncreasingEvent::from_mask(n, a)?,
                b: IncreasingEvent::from_mask(n, b)?,
                c: IncreasingEvent::from_mask(n, c)?,
                probs,
            })
        })
        .collect::<Result<Vec<_>>>())?;
    let len = masks.len() as u64;
    Ok(AbcReport { witnesses, total_witnesses: total, triples_scanned: len * len * len })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{fixed_point_measure, ProductMeasure};
    use crate::rational::ratio;

    fn up(n: usize, g: &[&str]) -> IncreasingEvent {
        IncreasingEvent::generated_by(n, g).unwrap()
    }

    /// Re-derives the seven probabilities from the table measure directly.
    fn recompute(m: &TableMeasure, w: &AbcWitness) -> AbcProbs {
        let ab = w.a.intersect(&w.b).unwrap();
        let ac = w.a.intersect(&w.c).unwrap();
        let bc = w.b.intersect(&w.c).unwrap();
        let abc = ab.intersect(&w.c).unwrap();
        AbcProbs {
            a: m.prob(&w.a).unwrap(),
            b: m.prob(&w.b).unwrap(),
            c: m.prob(&w.c).unwrap(),
            ab: m.prob(&ab).unwrap(),
            ac: m.prob(&ac).unwrap(),
            bc: m.prob(&bc).unwrap(),
            abc: m.prob(&abc).unwrap(),
        }
    }

    #[test]
    fn fixed_point_law_has_the_pairwise_union_witness() {
        let mu3 = fixed_point_measure(3).unwrap();
        let r = abc_scan(&mu3, None).unwrap();
        assert!(!r.witnesses.is_empty());
        assert_eq!(r.total_witnesses as usize, r.witnesses.len());
        let (a12, a13, a23) = (up(3, &["100", "010"]), up(3, &["100", "001"]), up(3, &["010", "001"]));
        let w = r
            .witnesses
            .iter()
            .find(|w| w.a == a12 && w.b == a13 && w.c == a23)
            .expect("the (A12, A13, A23) triple is a witness");
        let half = ratio(1, 2);
        let third = ratio(1, 3);
        let expected = AbcProbs {
            a: half.clone(),
            b: half.clone(),
            c: half,
            ab: third.clone(),
            ac: third.clone(),
            bc: third,
            abc: ratio(1, 6),
        };
        assert_eq!(w.probs, expected);
    }

    #[test]
    fn every_witness_reverifies() {
        for m in [fixed_point_measure(3).unwrap(), fixed_point_measure(4).unwrap()] {
            let r = abc_scan(&m, Some(500)).unwrap();
            for w in &r.witnesses {
                let probs = recompute(&m, w);
                assert_eq!(probs, w.probs);
                assert!(probs.is_witness());
            }
            let mut keys: Vec<_> = r.witnesses.iter().map(|w| (w.a.clone(), w.b.clone(), w.c.clone())).collect();
            let sorted = {
                let mut k = keys.clone();
                k.sort();
                k
            };
            assert_eq!(keys, sorted);
            keys.dedup();
            assert_eq!(keys.len(), r.witnesses.len());
        }
    }

    #[test]
    fn four_point_fixed_point_law_has_no_witness() {
        let mu4 = fixed_point_measure(4).unwrap();
        let r = abc_scan(&mu4, None).unwrap();
        assert_eq!(r.total_witnesses, 0);
        assert_eq!(r.triples_scanned, 167 * 167 * 167);
    }

    #[test]
    fn limit_truncates_but_counts_everything() {
        let mu3 = fixed_point_measure(3).unwrap();
        let full = abc_scan(&mu3, None).unwrap();
        let cut = abc_scan(&mu3, Some(2)).unwrap();
        assert_eq!(cut.witnesses.as_slice(), &full.witnesses[..2]);
        assert_eq!(cut.total_witnesses, full.total_witnesses);
        assert_eq!(cut.triples_scanned, 19 * 19 * 19);
    }

    #[test]
    fn product_measures_have_no_witness() {
        let uni = ProductMeasure::uniform(3).unwrap().to_table();
        assert!(abc_scan(&uni, None).unwrap().witnesses.is_empty());
        let skew = ProductMeasure::new(vec![ratio(1, 5), ratio(2, 3), ratio(3, 4)]).unwrap().to_table();
        assert_eq!(abc_scan(&skew, None).unwrap().total_witnesses, 0);
    }

    #[test]
    fn dimension_cap() {
        let mu5 = fixed_point_measure(5).unwrap();
        assert!(matches!(abc_scan(&mu5, None), Err(Error::DimensionOutOfRange { .. })));
    }
}
