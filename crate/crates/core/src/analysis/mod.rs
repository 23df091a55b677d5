//! Exhaustive scanners for correlation properties of increasing events.

mod abc;
pub mod poly;
mod sahi;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cube::IncreasingEvent;
use crate::error::{Error, Result};
use crate::measures::scaled::{Mass, Scaled, ScaledMeasure};
use crate::measures::{Measure, ProductMeasure, TableMeasure};
use crate::monotone::{increasing_masks, MAX_LISTED_DIM};
use crate::rational::{self, Rational};
use crate::with_scaled;

pub use abc::{abc_scan, AbcProbs, AbcReport, AbcWitness, MAX_ABC_DIM};
pub use poly::{Monomial, Polynomial};
pub use sahi::{sahi_polynomial, sahi_scan, sahi_value, SahiReport, SahiScan, MAX_SAHI_SCAN_DIM};

fn require_nonempty(events: &[&IncreasingEvent]) -> Result<()> {
    if events.iter().any(|e| e.is_empty()) {
        return Err(Error::EmptyEvent);
    }
    Ok(())
}

fn require_same_dim(n: usize, events: &[&IncreasingEvent]) -> Result<()> {
    match events.iter().find(|e| e.dim() != n) {
        Some(e) => Err(Error::DimensionMismatch { left: n, right: e.dim() }),
        None => Ok(()),
    }
}

/// Both sides of the product-measure independence criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HarrisOutcome {
    /// `P(AB) = P(A)P(B)` exactly.
    pub independent: bool,
    /// No coordinate affects both events.
    pub z_disjoint: bool,
}

impl HarrisOutcome {
    pub fn agrees(&self) -> bool {
        self.independent == self.z_disjoint
    }
}

/// For a product measure with every `p_i` strictly inside `(0,1)`, two
/// nonempty increasing events are independent iff their affecting
/// coordinate sets are disjoint. Computes both sides.
pub fn harris_criterion(m: &ProductMeasure, a: &IncreasingEvent, b: &IncreasingEvent) -> Result<HarrisOutcome> {
    require_same_dim(m.dim(), &[a, b])?;
    require_nonempty(&[a, b])?;
    if let Some((i, p)) = m.params().iter().enumerate().find(|(_, p)| p.is_zero() || p.is_one()) {
        return Err(Error::DegenerateParameter { index: i + 1, value: rational::format(p) });
    }
    let ab = a.intersect(b)?;
    let independent = m.prob(&ab)? == m.prob(a)? * m.prob(b)?;
    Ok(HarrisOutcome { independent, z_disjoint: a.z_set().is_disjoint(b.z_set()) })
}

/// A pair of increasing events with `P(AB) < P(A)P(B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaViolation {
    pub a: IncreasingEvent,
    pub b: IncreasingEvent,
    pub p_a: Rational,
    pub p_b: Rational,
    pub p_ab: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaReport {
    pub violation: Option<PaViolation>,
    /// Pairs examined in canonical order up to and including the first
    /// violation (all pairs on a pass).
    pub pairs_scanned: u64,
}

fn pa_kernel<T: Mass>(s: &Scaled<T>, masks: &[u64]) -> Option<(usize, usize)> {
    let mass: Vec<T> = masks.iter().map(|&m| s.mass(m)).collect();
    (0..masks.len()).into_par_iter().find_map_first(|i| {
        let (a, sa) = (masks[i], &mass[i]);
        (i..masks.len()).find(|&j| {
            let lhs = s.denom.mul_ref(&s.mass(a & masks[j]));
            lhs < sa.mul_ref(&mass[j])
        })
        .map(|j| (i, j))
    })
}

pub const MAX_PA_DIM: usize = MAX_LISTED_DIM;

/// Tests every unordered pair of increasing events (∅ and Ω included) for
/// positive correlation; reports the first failure in canonical order.
pub fn pa_check(m: &TableMeasure) -> Result<PaReport> {
    let n = m.dim();
    if n > MAX_PA_DIM {
        return Err(Error::DimensionOutOfRange { n, min: 0, max: MAX_PA_DIM });
    }
    let masks = increasing_masks(n);
    let len = masks.len() as u64;
    let scaled = ScaledMeasure::new(m);
    let hit = with_scaled!(&scaled, s => pa_kernel(s, masks));
    let Some((i, j)) = hit else {
        return Ok(PaReport { violation: None, pairs_scanned: len * (len + 1) / 2 });
    };
    let (i64_, j64) = (i as u64, j as u64);
    let before_row: u64 = i64_ * len - i64_ * (i64_.saturating_sub(1)) / 2;
    let pairs_scanned = before_row + (j64 - i64_) + 1;
    let a = IncreasingEvent::from_mask(n, masks[i])?;
    let b = IncreasingEvent::from_mask(n, masks[j])?;
    let ab = a.intersect(&b)?;
    let violation = PaViolation { p_a: m.prob(&a)?, p_b: m.prob(&b)?, p_ab: m.prob(&ab)?, a, b };
    Ok(PaReport { violation: Some(violation), pairs_scanned })
}
