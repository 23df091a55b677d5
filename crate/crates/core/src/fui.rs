//! Laws realized as increasing functions of finitely many independent
//! Bernoulli variables.
//!
//! A measure satisfying the positive lattice condition is realized in two
//! steps. First, with `Z_1..Z_n` independent uniforms on `[0,1]`, coordinate
//! `i` is set to 1 iff `Z_i > α_{i,ω}` where `α_{i,ω} = P(X_i = 0 | history ω)`
//! and `ω` is the already-drawn prefix `X_1..X_{i-1}`. The thresholds are
//! nonincreasing in `ω`, which makes each `X_i` nondecreasing in the `Z`'s.
//! Second, each `Z_i` is only compared with finitely many thresholds
//! `α_(1) > … > α_(k)`, and the nested indicators `{Z_i > α_(j)}` are
//! realized jointly as `Y_{i,1} ∨ … ∨ Y_{i,j}` with independent
//! `Y_{i,1} ~ Ber(1 - α_(1))`, `Y_{i,j} ~ Ber(1 - α_(j)/α_(j-1))`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{Event, EventJson, IncreasingEvent, Point};
use crate::error::{Error, Result};
use crate::measures::{Measure, TableMeasure};
use crate::rational::{self, Rational};

/// Pushforwards enumerate `{0,1}^m`; beyond this they stop being cheap.
pub const MAX_UNDERLYING: usize = 20;
pub const MAX_RANDOM_UNDERLYING: usize = 12;
/// Largest number of realized coordinates.
pub const MAX_REALIZED_DIM: usize = 16;

/// `X_i = 1` iff `(Y_1..Y_m) ∈ f_i`, with `Y_j ~ Ber(q_j)` independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuiRealization {
    q: Vec<Rational>,
    f: Vec<IncreasingEvent>,
}

impl FuiRealization {
    pub fn new(q: Vec<Rational>, f: Vec<IncreasingEvent>) -> Result<FuiRealization> {
        let m = q.len();
        if m > MAX_UNDERLYING {
            return Err(Error::TooManyUnderlying { m, max: MAX_UNDERLYING });
        }
        if f.len() > MAX_REALIZED_DIM {
            return Err(Error::DimensionOutOfRange { n: f.len(), min: 0, max: MAX_REALIZED_DIM });
        }
        if let Some(bad) = q.iter().find(|r| !rational::is_probability(r)) {
            return Err(Error::InvalidProbability(rational::format(bad)));
        }
        if let Some(e) = f.iter().find(|e| e.dim() != m) {
            return Err(Error::DimensionMismatch { left: m, right: e.dim() });
        }
        Ok(FuiRealization { q, f })
    }

    /// Number of underlying Bernoullis.
    pub fn m(&self) -> usize {
        self.q.len()
    }

    /// Number of realized coordinates.
    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn params(&self) -> &[Rational] {
        &self.q
    }

    pub fn structure(&self) -> &[IncreasingEvent] {
        &self.f
    }

    /// The realized point for an underlying outcome `y`.
    pub fn image(&self, y: Point) -> Point {
        Point(self.f.iter().enumerate().fold(0, |acc, (i, fi)| acc | u32::from(fi.contains(y)) << i))
    }

    /// Exact law of `(X_1..X_n)`.
    pub fn pushforward(&self) -> Result<TableMeasure> {
        let (m, n) = (self.m(), self.n());
        // over the common denominator Π b_j, the atom of y has numerator
        // Π (a_j if y_j = 1 else b_j - a_j)
        let nums: Vec<(BigUint, BigUint)> = self
            .q
            .iter()
            .map(|r| {
                let a = r.numer().to_biguint().expect("q_j >= 0");
                let b = r.denom().to_biguint().expect("denominator > 0");
                let rest = &b - &a;
                (a, rest)
            })
            .collect();
        let denom: BigUint = self.q.iter().map(|r| r.denom().to_biguint().expect("denominator > 0")).product();

        let low_bits = m.min(10);
        let low_weights = outcome_weights(&nums[..low_bits]);
        let high_weights = outcome_weights(&nums[low_bits..]);
        let partials: Vec<Vec<BigUint>> = high_weights
            .par_iter()
            .enumerate()
            .map(|(hi, wh)| {
                let mut acc = vec![BigUint::zero(); 1 << n];
                if wh.is_zero() {
                    return acc;
                }
                for (lo, wl) in low_weights.iter().enumerate() {
                    if wl.is_zero() {
                        continue;
                    }
                    let y = Point(((hi << low_bits) | lo) as u32);
                    acc[self.image(y).0 as usize] += wl * wh;
                }
                acc
            })
            .collect();
        let mut counts = vec![BigUint::zero(); 1 << n];
        for part in partials {
            for (c, p) in counts.iter_mut().zip(part) {
                *c += p;
            }
        }
        let d = BigInt::from(denom);
        let w = counts.into_iter().map(|c| Rational::new(BigInt::from(c), d.clone())).collect();
        TableMeasure::new(n, w)
    }

    pub fn to_json(&self) -> RealizationJson {
        RealizationJson {
            m: self.m(),
            q: self.q.iter().map(rational::format).collect(),
            f: self.f.iter().map(|e| e.to_json()).collect(),
        }
    }

    pub fn from_json(j: &RealizationJson) -> Result<FuiRealization> {
        if j.q.len() != j.m {
            return Err(Error::DimensionMismatch { left: j.m, right: j.q.len() });
        }
        let q = j.q.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>()?;
        let f = j.f.iter().map(IncreasingEvent::from_json).collect::<Result<Vec<_>>>()?;
        FuiRealization::new(q, f)
    }
}

/// Numerators of `P(Y = y)` for every outcome `y` of the given variables.
fn outcome_weights(nums: &[(BigUint, BigUint)]) -> Vec<BigUint> {
    let mut w = vec![BigUint::one()];
    for (one, zero) in nums {
        let mut next = Vec::with_capacity(w.len() * 2);
        next.extend(w.iter().map(|v| v * zero));
        next.extend(w.iter().map(|v| v * one));
        w = next;
    }
    w
}

/// Wire form: `{"m": .., "q": ["1/2", ..], "f": [event, ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationJson {
    pub m: usize,
    pub q: Vec<String>,
    pub f: Vec<EventJson>,
}

/// Conditional thresholds `α_{i,ω}` for every coordinate and history.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdTable {
    n: usize,
    /// `alphas[i][ω]` for coordinate `i + 1`; bit `j` of `ω` is `X_{j+1}`.
    alphas: Vec<Vec<Rational>>,
    /// Whether the history has positive probability.
    observed: Vec<Vec<bool>>,
}

impl ThresholdTable {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Threshold for coordinate `coord` (1-based) after history `history`.
    pub fn alpha(&self, coord: usize, history: u32) -> &Rational {
        &self.alphas[coord - 1][history as usize]
    }

    pub fn is_observed(&self, coord: usize, history: u32) -> bool {
        self.observed[coord - 1][history as usize]
    }

    /// Distinct thresholds strictly inside `(0,1)`, descending.
    pub fn interior_thresholds(&self, coord: usize) -> Vec<Rational> {
        let mut v: Vec<Rational> =
            self.alphas[coord - 1].iter().filter(|a| rational::is_interior(a)).cloned().collect();
        v.sort_by(|a, b| b.cmp(a));
        v.dedup();
        v
    }

    /// Whether every threshold is nonincreasing along single-coordinate steps.
    fn first_non_monotone(&self) -> Option<usize> {
        (0..self.n).find(|&i| {
            let a = &self.alphas[i];
            (0..a.len()).any(|h| (0..i).any(|j| h >> j & 1 == 0 && a[h] < a[h | 1 << j]))
        })
    }
}

/// Thresholds of the sequential uniform construction for an FKG measure.
/// Zero-probability histories get the largest threshold among the observed
/// histories above them (0 if there are none).
pub fn build_thresholds(m: &TableMeasure) -> Result<ThresholdTable> {
    if let Some(v) = m.check_fkg() {
        return Err(Error::NotFkg(Box::new(v)));
    }
    let n = m.dim();
    let w = m.weights();
    let mut alphas = Vec::with_capacity(n);
    let mut observed = Vec::with_capacity(n);
    for i in 0..n {
        let prefix = (1usize << i) - 1;
        let mut total = vec![Rational::zero(); 1 << i];
        let mut zero = vec![Rational::zero(); 1 << i];
        for (x, wx) in w.iter().enumerate() {
            let h = x & prefix;
            total[h] += wx;
            if x >> i & 1 == 0 {
                zero[h] += wx;
            }
        }
        let seen: Vec<bool> = total.iter().map(|t| !t.is_zero()).collect();
        let mut alpha: Vec<Rational> = (0..1usize << i)
            .map(|h| if seen[h] { &zero[h] / &total[h] } else { Rational::zero() })
            .collect();
        for h in 0..1usize << i {
            if !seen[h] {
                alpha[h] = (0..1usize << i)
                    .filter(|&g| seen[g] && g & h == h)
                    .map(|g| alpha[g].clone())
                    .max()
                    .unwrap_or_else(Rational::zero);
            }
        }
        alphas.push(alpha);
        observed.push(seen);
    }
    let table = ThresholdTable { n, alphas, observed };
    match table.first_non_monotone() {
        Some(i) => Err(Error::MonotoneCompletionFailed { coordinate: i + 1 }),
        None => Ok(table),
    }
}

/// How coordinate `i` reacts to a history.
#[derive(Clone, Copy)]
enum Level {
    Never,
    Always,
    /// `Y_{i,1} ∨ … ∨ Y_{i,j}` over the chain's first `j` variables.
    Chain(usize),
}

/// Replaces the uniforms by chains of Bernoullis.
pub fn discretize(t: &ThresholdTable) -> Result<FuiRealization> {
    let n = t.n;
    let chains: Vec<Vec<Rational>> = (1..=n).map(|c| t.interior_thresholds(c)).collect();
    let m: usize = chains.iter().map(Vec::len).sum();
    if m > MAX_UNDERLYING {
        return Err(Error::TooManyUnderlying { m, max: MAX_UNDERLYING });
    }
    let mut q = Vec::with_capacity(m);
    let mut offsets = Vec::with_capacity(n);
    for chain in &chains {
        offsets.push(q.len());
        for (j, alpha) in chain.iter().enumerate() {
            let p = if j == 0 { Rational::one() - alpha } else { Rational::one() - alpha / &chain[j - 1] };
            q.push(p);
        }
    }
    let levels: Vec<Vec<Level>> = (0..n)
        .map(|i| {
            t.alphas[i]
                .iter()
                .map(|a| {
                    if a.is_zero() {
                        Level::Always
                    } else if a.is_one() {
                        Level::Never
                    } else {
                        Level::Chain(chains[i].iter().position(|c| c == a).expect("interior threshold") + 1)
                    }
                })
                .collect()
        })
        .collect();

    let mut f: Vec<Event> = (0..n).map(|_| Event::empty(m)).collect::<Result<_>>()?;
    for y in 0..1u32 << m {
        let mut x = 0u32;
        for i in 0..n {
            let on = match levels[i][x as usize] {
                Level::Never => false,
                Level::Always => true,
                Level::Chain(j) => (y >> offsets[i]) & ((1 << j) - 1) != 0,
            };
            if on {
                x |= 1 << i;
                f[i].insert(Point(y))?;
            }
        }
    }
    let f = f.into_iter().map(IncreasingEvent::try_from).collect::<Result<Vec<_>>>()?;
    FuiRealization::new(q, f)
}

/// `X_1 = Y_1 Y_2`, `X_2 = Y_1 Y_3`, `X_3 = Y_2 Y_3`. Its law charges no
/// weight-2 string, so it fails the lattice condition while being a law of
/// increasing functions of independents.
pub fn footnote2_fixture(q1: Rational, q2: Rational, q3: Rational) -> Result<FuiRealization> {
    let f = [0b011, 0b101, 0b110]
        .iter()
        .map(|&g| IncreasingEvent::principal(3, Point(g)))
        .collect::<Result<Vec<_>>>()?;
    FuiRealization::new(vec![q1, q2, q3], f)
}

/// SplitMix64: state advances by the golden-ratio increment and the output
/// is the standard 64-bit finalizer.
#[derive(Clone, Debug)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// `next_u64() mod bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

/// Random realization, a pure function of `(n, m, seed)`. Draw order:
/// for each `q_j` a denominator `2 + r mod 15` then a numerator
/// `1 + r mod (den - 1)`; then for each `f_i` a generator count
/// `1 + r mod 3` followed by that many generators `r mod 2^m`.
pub fn random_fui(n: usize, m: usize, seed: u64) -> Result<FuiRealization> {
    if !(1..=MAX_RANDOM_UNDERLYING).contains(&m) {
        return Err(Error::TooManyUnderlying { m, max: MAX_RANDOM_UNDERLYING });
    }
    if !(1..=MAX_REALIZED_DIM).contains(&n) {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: MAX_REALIZED_DIM });
    }
    let mut rng = SplitMix64::new(seed);
    let q = (0..m)
        .map(|_| {
            let den = 2 + rng.below(15);
            let num = 1 + rng.below(den - 1);
            Rational::new(BigInt::from(num), BigInt::from(den))
        })
        .collect();
    let f = (0..n)
        .map(|_| {
            let k = 1 + rng.below(3);
            let gens: Vec<Point> = (0..k).map(|_| Point(rng.below(1 << m) as u32)).collect();
            Event::from_points(m, gens).map(|e| IncreasingEvent::up_closure(&e))
        })
        .collect::<Result<Vec<_>>>()?;
    FuiRealization::new(q, f)
}

/// Checks the telescoping identity of a coordinate's chain:
/// `P(Y_1 ∨ … ∨ Y_j) = 1 - α_(j)` for every `j`.
pub fn chain_law_holds(thresholds: &[Rational], params: &[Rational]) -> bool {
    let mut none = Rational::one();
    thresholds.len() == params.len()
        && thresholds.iter().zip(params).all(|(alpha, q)| {
            none *= Rational::one() - q;
            Rational::one() - &none == Rational::one() - alpha
        })
}

impl ThresholdTable {
    /// Total interior thresholds across coordinates, i.e. the `m` of the
    /// discretized realization.
    pub fn underlying_count(&self) -> usize {
        (1..=self.n).map(|c| self.interior_thresholds(c).len()).sum()
    }
}
