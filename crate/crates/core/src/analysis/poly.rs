//! Polynomials with integer coefficients in `p_1..p_n`.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cube::Event;
use crate::rational::Rational;

/// Exponent vector; ordered by total degree, then with higher powers of
/// earlier variables first (`p1 < p2 < p1^2 < p1 p2 < p2^2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Polynomial {
        Polynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: BigInt) -> Polynomial {
        let mut p = Polynomial::zero(n);
        p.add_term(Monomial(vec![0; n]), c);
        p
    }

    /// `P(E)` under the product measure with parameters `p`, as a multilinear
    /// polynomial. The coefficient of `Π_{i∈S} p_i` is the Möbius transform
    /// `Σ_{T⊆S} (-1)^{|S\T|} 1_E(T)`.
    pub fn event_probability(e: &Event) -> Polynomial {
        let n = e.dim();
        let mut f: Vec<i64> = (0..1u32 << n).map(|x| i64::from(e.contains(crate::cube::Point(x)))).collect();
        for i in 0..n {
            let bit = 1usize << i;
            for x in 0..f.len() {
                if x & bit != 0 {
                    f[x] -= f[x ^ bit];
                }
            }
        }
        let mut p = Polynomial::zero(n);
        for (x, c) in f.into_iter().enumerate() {
            if c != 0 {
                let exps = (0..n).map(|i| (x >> i & 1) as u8).collect();
                p.add_term(Monomial(exps), BigInt::from(c));
            }
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u8]) -> BigInt {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn eval(&self, p: &[Rational]) -> Rational {
        assert_eq!(p.len(), self.n, "evaluation point has the wrong dimension");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(p)
                    .fold(Rational::from_integer(c.clone()), |acc, (&e, pi)| acc * pi.pow(e as i32))
            })
            .sum()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(&-BigInt::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n, rhs.n);
        let mut out = Polynomial::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("p{}", i + 1) } else { format!("p{}^{}", i + 1, e) })
                .collect();
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}
