//! Integer-rescaled measures for the exhaustive scanners.
//!
//! With all atoms written over a common denominator `D`, the probability of
//! an event is `S(E)/D` for an integer mass `S(E)`, and every comparison the
//! scanners need becomes an integer comparison: `P(AB) >= P(A)P(B)` iff
//! `D·S(AB) >= S(A)·S(B)`. When `D < 2^64` all such products fit in `u128`;
//! otherwise the same code runs on `BigUint`.

use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use super::{Measure, TableMeasure};
use crate::rational::Rational;

/// Integer type usable by the scan kernels.
pub trait Mass:
    Clone + Ord + Zero + Add<Output = Self> + Mul<Output = Self> + Into<BigInt> + Send + Sync + 'static
{
    fn mul_ref(&self, other: &Self) -> Self;
}

impl Mass for u128 {
    #[inline]
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

impl Mass for BigUint {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

/// Byte-chunked lookup tables: the mass of an event mask is the sum of one
/// lookup per 8 points. Only for `n <= 6`.
#[derive(Clone, Debug)]
pub struct MaskSums<T> {
    tables: Vec<Vec<T>>,
}

impl<T: Clone + Zero + Add<Output = T>> MaskSums<T> {
    pub fn new(atoms: &[T]) -> MaskSums<T> {
        assert!(atoms.len() <= 64, "mask sums support at most 6 coordinates");
        let tables = atoms
            .chunks(8)
            .map(|chunk| {
                let mut table = vec![T::zero(); 256];
                for byte in 1..256usize {
                    let low = byte.trailing_zeros() as usize;
                    let rest = byte & (byte - 1);
                    let atom = chunk.get(low).cloned().unwrap_or_else(T::zero);
                    table[byte] = table[rest].clone() + atom;
                }
                table
            })
            .collect();
        MaskSums { tables }
    }

    #[inline]
    pub fn sum(&self, mask: u64) -> T {
        let mut acc = self.tables[0][(mask & 0xff) as usize].clone();
        for (c, table) in self.tables.iter().enumerate().skip(1) {
            acc = acc + table[(mask >> (8 * c) & 0xff) as usize].clone();
        }
        acc
    }
}

/// A table measure rescaled to integer masses over a common denominator.
#[derive(Clone, Debug)]
pub struct Scaled<T> {
    pub n: usize,
    pub denom: T,
    pub sums: MaskSums<T>,
}

impl<T: Mass> Scaled<T> {
    #[inline]
    pub fn mass(&self, mask: u64) -> T {
        self.sums.sum(mask)
    }

    pub fn to_rational(&self, mass: T) -> Rational {
        Rational::new(mass.into(), self.denom.clone().into())
    }

    pub fn prob(&self, mask: u64) -> Rational {
        self.to_rational(self.mass(mask))
    }
}

pub enum ScaledMeasure {
    Small(Scaled<u128>),
    Big(Scaled<BigUint>),
}

impl ScaledMeasure {
    pub fn new(m: &TableMeasure) -> ScaledMeasure {
        assert!(m.dim() <= 6, "scan kernels support at most 6 coordinates");
        let (denom, counts) = m.integer_counts();
        let n = m.dim();
        match denom.to_u64() {
            Some(d) => {
                let counts: Vec<u128> = counts.iter().map(|c| c.to_u128().expect("count <= denom")).collect();
                ScaledMeasure::Small(Scaled { n, denom: d as u128, sums: MaskSums::new(&counts) })
            }
            None => ScaledMeasure::Big(Scaled { n, denom, sums: MaskSums::new(&counts) }),
        }
    }
}

impl From<&TableMeasure> for ScaledMeasure {
    fn from(m: &TableMeasure) -> ScaledMeasure {
        ScaledMeasure::new(m)
    }
}

/// Runs `$body` with `$s` bound to whichever integer backend `$scaled` uses.
#[macro_export]
#[doc(hidden)]
macro_rules! with_scaled {
    ($scaled:expr, $s:ident => $body:expr) => {
        match $scaled {
            $crate::measures::scaled::ScaledMeasure::Small($s) => $body,
            $crate::measures::scaled::ScaledMeasure::Big($s) => $body,
        }
    };
}
