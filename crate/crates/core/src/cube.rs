//! Set algebra for increasing events on `{0,1}^n`.
//!
//! A point of the cube is stored as an integer whose bit `i` holds coordinate
//! `i + 1`. An event is a dense bit-vector with one bit per point, so the
//! event on `n` coordinates occupies `2^n` bits. Up-closure, minimal elements
//! and the affecting set are all computed word-parallel.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension supported by the set algebra. Measures stop at
/// [`crate::measures::MAX_MEASURE_DIM`]; the extra room hosts the structure
/// functions of realizations.
pub const MAX_DIM: usize = 20;

/// Points with coordinate `i` equal to 0, for coordinates living inside a word.
const LOW: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n, min: 0, max: MAX_DIM });
    }
    Ok(())
}

fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

/// Mask of the valid bits of the (single) word when `n <= 6`.
pub(crate) fn cube_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

/// A point of `{0,1}^n`, i.e. a subset of `[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point(pub u32);

impl Point {
    pub fn from_coords(coords: impl IntoIterator<Item = usize>) -> Point {
        Point(coords.into_iter().fold(0, |acc, c| {
            debug_assert!(c >= 1);
            acc | 1 << (c - 1)
        }))
    }

    /// Parses a bitstring with coordinate 1 leftmost, e.g. `"101"` is `{1,3}`.
    pub fn from_bitstring(s: &str) -> Result<Point> {
        let mut enc = 0u32;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => enc |= 1 << i,
                _ => return Err(Error::Parse(format!("bad bitstring {s:?}"))),
            }
        }
        Ok(Point(enc))
    }

    pub fn to_bitstring(self, n: usize) -> String {
        (0..n).map(|i| if self.0 >> i & 1 == 1 { '1' } else { '0' }).collect()
    }

    /// 1-based coordinates, ascending.
    pub fn coords(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Point) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn comparable(self, other: Point) -> bool {
        self.is_subset(other) || other.is_subset(self)
    }

    pub fn meet(self, other: Point) -> Point {
        Point(self.0 & other.0)
    }

    pub fn join(self, other: Point) -> Point {
        Point(self.0 | other.0)
    }

    fn canonical_key(self) -> (u32, u32) {
        (self.len(), self.0)
    }
}

/// A set of coordinates, e.g. the coordinates affecting an event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct CoordSet(pub u32);

impl CoordSet {
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, coord: usize) -> bool {
        coord >= 1 && self.0 >> (coord - 1) & 1 == 1
    }

    pub fn is_disjoint(self, other: CoordSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: CoordSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 | other.0)
    }

    pub fn coords(self) -> Vec<usize> {
        Point(self.0).coords()
    }
}

/// An arbitrary subset of `{0,1}^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Event {
    n: usize,
    words: Vec<u64>,
}

impl Event {
    pub fn empty(n: usize) -> Result<Event> {
        check_dim(n)?;
        Ok(Event { n, words: vec![0; word_count(n)] })
    }

    pub fn full(n: usize) -> Result<Event> {
        let mut e = Event::empty(n)?;
        e.words.iter_mut().for_each(|w| *w = u64::MAX);
        e.words[0] &= cube_mask(n);
        Ok(e)
    }

    pub fn from_points(n: usize, points: impl IntoIterator<Item = Point>) -> Result<Event> {
        let mut e = Event::empty(n)?;
        for p in points {
            e.insert(p)?;
        }
        Ok(e)
    }

    /// Builds an event from its membership bits; only for `n <= 6`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Event> {
        if n > 6 {
            return Err(Error::DimensionOutOfRange { n, min: 0, max: 6 });
        }
        if mask & !cube_mask(n) != 0 {
            return Err(Error::Parse(format!("mask {mask:#x} has bits outside the {n}-cube")));
        }
        Ok(Event { n, words: vec![mask] })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Membership bits as a single word; only meaningful for `n <= 6`.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.n <= 6);
        self.words[0]
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn check_point(&self, p: Point) -> Result<()> {
        if (p.0 as u64) >> self.n != 0 {
            return Err(Error::PointOutOfRange { point: p.0, n: self.n });
        }
        Ok(())
    }

    pub fn insert(&mut self, p: Point) -> Result<()> {
        self.check_point(p)?;
        let x = p.0 as usize;
        self.words[x >> 6] |= 1 << (x & 63);
        Ok(())
    }

    pub fn contains(&self, p: Point) -> bool {
        let x = p.0 as usize;
        (x >> self.n) == 0 && self.words[x >> 6] >> (x & 63) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(Point((wi * 64 + b) as u32))
            })
        })
    }

    /// The points obtained from members by adding one coordinate `i`
    /// (0-based) that was absent.
    fn shifted_up(&self, i: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.words.len()];
        if i < 6 {
            for (o, &w) in out.iter_mut().zip(&self.words) {
                *o = (w & LOW[i]) << (1 << i);
            }
        } else {
            let stride = 1 << (i - 6);
            for w in 0..self.words.len() {
                if w & stride == 0 {
                    out[w | stride] = self.words[w];
                }
            }
        }
        out
    }

    fn is_up_closed(&self) -> bool {
        (0..self.n).all(|i| {
            self.shifted_up(i)
                .iter()
                .zip(&self.words)
                .all(|(s, w)| s & !w == 0)
        })
    }

    fn zip_with(&self, other: &Event, f: impl Fn(u64, u64) -> u64) -> Result<Event> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        Ok(Event { n: self.n, words })
    }

    pub fn intersect(&self, other: &Event) -> Result<Event> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Event) -> Result<Event> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points().map(|p| p.to_bitstring(self.n)).collect();
        write!(f, "Event(n={}, {{{}}})", self.n, pts.join(","))
    }
}

/// Ascending by bit-vector value.
fn cmp_words(a: &[u64], b: &[u64]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// An up-closed event. Only obtainable through closure, an antichain, or a
/// checked conversion, so holders never need to re-validate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IncreasingEvent(Event);

impl IncreasingEvent {
    pub fn empty(n: usize) -> Result<IncreasingEvent> {
        Event::empty(n).map(IncreasingEvent)
    }

    pub fn full(n: usize) -> Result<IncreasingEvent> {
        Event::full(n).map(IncreasingEvent)
    }

    /// Smallest up-closed superset of `e`.
    pub fn up_closure(e: &Event) -> IncreasingEvent {
        let mut out = e.clone();
        for i in 0..out.n {
            let up = out.shifted_up(i);
            out.words.iter_mut().zip(up).for_each(|(w, u)| *w |= u);
        }
        IncreasingEvent(out)
    }

    pub fn from_antichain(a: &Antichain) -> IncreasingEvent {
        let e = Event::from_points(a.n, a.sets.iter().copied())
            .expect("antichain points are range-checked");
        IncreasingEvent::up_closure(&e)
    }

    /// `up({x})` for a single generator.
    pub fn principal(n: usize, p: Point) -> Result<IncreasingEvent> {
        Ok(IncreasingEvent::up_closure(&Event::from_points(n, [p])?))
    }

    /// Up-closure of generators written as bitstrings, e.g. `["110", "101"]`.
    pub fn generated_by(n: usize, gens: &[&str]) -> Result<IncreasingEvent> {
        let pts = gens.iter().map(|g| Point::from_bitstring(g)).collect::<Result<Vec<_>>>()?;
        Ok(IncreasingEvent::up_closure(&Event::from_points(n, pts)?))
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<IncreasingEvent> {
        IncreasingEvent::try_from(Event::from_mask(n, mask)?)
    }

    pub fn as_event(&self) -> &Event {
        &self.0
    }

    pub fn into_event(self) -> Event {
        self.0
    }

    pub fn is_full(&self) -> bool {
        self.0.contains(Point(0))
    }

    /// The ⊆-minimal members, canonically ordered.
    pub fn minimal_elements(&self) -> Antichain {
        let mut covered = vec![0u64; self.0.words.len()];
        for i in 0..self.0.n {
            covered.iter_mut().zip(self.0.shifted_up(i)).for_each(|(c, u)| *c |= u);
        }
        let mins = Event {
            n: self.0.n,
            words: self.0.words.iter().zip(covered).map(|(w, c)| w & !c).collect(),
        };
        let mut sets: Vec<Point> = mins.points().collect();
        sets.sort_by_key(|p| p.canonical_key());
        Antichain { n: self.0.n, sets }
    }

    /// Coordinates affecting the event: the union of its minimal elements.
    pub fn z_set(&self) -> CoordSet {
        CoordSet(self.minimal_elements().sets.iter().fold(0, |acc, p| acc | p.0))
    }

    pub fn intersect(&self, other: &IncreasingEvent) -> Result<IncreasingEvent> {
        self.0.intersect(&other.0).map(IncreasingEvent)
    }

    pub fn union(&self, other: &IncreasingEvent) -> Result<IncreasingEvent> {
        self.0.union(&other.0).map(IncreasingEvent)
    }

    pub fn to_json(&self) -> EventJson {
        let min = self.minimal_elements();
        EventJson { n: self.0.n, min: min.sets.iter().map(|p| p.coords()).collect() }
    }

    pub fn from_json(j: &EventJson) -> Result<IncreasingEvent> {
        check_dim(j.n)?;
        let mut sets = Vec::with_capacity(j.min.len());
        for coords in &j.min {
            if let Some(&c) = coords.iter().find(|&&c| c == 0 || c > j.n) {
                return Err(Error::Parse(format!("coordinate {c} outside 1..={}", j.n)));
            }
            sets.push(Point::from_coords(coords.iter().copied()));
        }
        let a = Antichain::new(j.n, sets)?;
        Ok(IncreasingEvent::from_antichain(&a))
    }
}

impl TryFrom<Event> for IncreasingEvent {
    type Error = Error;

    fn try_from(e: Event) -> Result<IncreasingEvent> {
        if e.is_up_closed() {
            Ok(IncreasingEvent(e))
        } else {
            Err(Error::NotIncreasing)
        }
    }
}

impl Deref for IncreasingEvent {
    type Target = Event;

    fn deref(&self) -> &Event {
        &self.0
    }
}

impl PartialOrd for IncreasingEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IncreasingEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.n.cmp(&other.0.n).then_with(|| cmp_words(&self.0.words, &other.0.words))
    }
}

impl fmt::Debug for IncreasingEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mins: Vec<String> =
            self.minimal_elements().sets.iter().map(|p| p.to_bitstring(self.0.n)).collect();
        write!(f, "up(n={}, {{{}}})", self.0.n, mins.join(","))
    }
}

/// Pairwise ⊆-incomparable subsets of `[n]`, ordered by cardinality and
/// then by encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Antichain {
    n: usize,
    sets: Vec<Point>,
}

impl Antichain {
    pub fn new(n: usize, sets: impl IntoIterator<Item = Point>) -> Result<Antichain> {
        check_dim(n)?;
        let mut sets: Vec<Point> = sets.into_iter().collect();
        for p in &sets {
            if (p.0 as u64) >> n != 0 {
                return Err(Error::PointOutOfRange { point: p.0, n });
            }
        }
        sets.sort_by_key(|p| p.canonical_key());
        sets.dedup();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                if a.comparable(*b) {
                    return Err(Error::NotAntichain(a.coords(), b.coords()));
                }
            }
        }
        Ok(Antichain { n, sets })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[Point] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Wire form of an increasing event: its minimal elements as sorted 1-based
/// coordinate lists, in canonical antichain order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventJson {
    pub n: usize,
    pub min: Vec<Vec<usize>>,
}
