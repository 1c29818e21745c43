//! Ground-truth evaluation of words via the faithful representation of
//! Thompson's group F by piecewise-linear homeomorphisms of [0,1] with
//! dyadic breakpoints and power-of-2 slopes.
//!
//! This module is the oracle the rewriting machinery is checked against:
//! it decides neutrality (evaluation to the identity) by exact dyadic
//! arithmetic, with no floating point anywhere.
//!
//! The composition convention (whether the leftmost letter of a word acts
//! first or last) is not taken on faith: `verify_relations` checks the
//! defining relations g_n g_k = g_k g_{n+1} for the chosen charts, and the
//! test suite runs it before anything else is trusted.

use std::cmp::Ordering;

use num::bigint::{BigInt, Sign as BigSign};
use num::{BigUint, Integer, Zero};

use crate::word::{Index, Letter, Sign, Word};

/// An exact dyadic rational num / 2^exp, stored in lowest terms: num is
/// odd or zero, and exp is 0 when num is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    /// Builds num / 2^exp, reducing to lowest terms.
    pub fn new(num: impl Into<BigInt>, exp: u64) -> Dyadic {
        let mut num: BigInt = num.into();
        let mut exp = exp;
        if num.is_zero() {
            return Dyadic {
                num,
                exp: 0,
            };
        }
        while exp > 0 && num.is_even() {
            num >>= 1;
            exp -= 1;
        }
        Dyadic { num, exp }
    }

    pub fn zero() -> Dyadic {
        Dyadic::new(0, 0)
    }

    pub fn one() -> Dyadic {
        Dyadic::new(1, 0)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        Dyadic::new(a + b, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        Dyadic::new(a - b, exp)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &other.num, self.exp + other.exp)
    }

    /// Multiplies by 2^k; exact for any integer k.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.num.is_zero() {
            return Dyadic::zero();
        }
        if k >= 0 {
            let k = k as u64;
            if k >= self.exp {
                Dyadic {
                    num: &self.num << (k - self.exp),
                    exp: 0,
                }
            } else {
                Dyadic {
                    num: self.num.clone(),
                    exp: self.exp - k,
                }
            }
        } else {
            Dyadic {
                num: self.num.clone(),
                exp: self.exp + (-k) as u64,
            }
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp);
        let b = &other.num << (exp - other.exp);
        a.cmp(&b)
    }
}

/// A piecewise-linear homeomorphism of [0,1]: strictly increasing
/// breakpoints from (0,0) to (1,1), every slope a power of 2, and no
/// breakpoint at which the slope does not change. Canonical form makes
/// structural equality coincide with equality of group elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    points: Vec<(Dyadic, Dyadic)>,
}

impl PLMap {
    /// Builds a map from breakpoint pairs, dropping redundant collinear
    /// points. Panics if the data is not a valid power-of-2-slope
    /// homeomorphism fixing 0 and 1; callers only construct maps from
    /// generator charts and closed operations, so a violation is a bug.
    fn from_points(points: Vec<(Dyadic, Dyadic)>) -> PLMap {
        assert!(points.len() >= 2, "a PL map needs at least two points");
        assert!(
            points[0].0.is_zero() && points[0].1.is_zero(),
            "a PL map must start at (0,0)"
        );
        let last = points.last().unwrap();
        assert!(
            last.0 == Dyadic::one() && last.1 == Dyadic::one(),
            "a PL map must end at (1,1)"
        );
        for pair in points.windows(2) {
            assert!(
                pair[0].0 < pair[1].0 && pair[0].1 < pair[1].1,
                "breakpoints must strictly increase in both coordinates"
            );
        }
        let slopes: Vec<i64> = points
            .windows(2)
            .map(|pair| slope_exponent(&pair[0], &pair[1]))
            .collect();
        let mut kept = Vec::with_capacity(points.len());
        for (i, point) in points.into_iter().enumerate() {
            let interior = i > 0 && i < slopes.len();
            if interior && slopes[i - 1] == slopes[i] {
                continue;
            }
            kept.push(point);
        }
        PLMap { points: kept }
    }

    pub fn identity() -> PLMap {
        PLMap::from_points(vec![
            (Dyadic::zero(), Dyadic::zero()),
            (Dyadic::one(), Dyadic::one()),
        ])
    }

    pub fn is_identity(&self) -> bool {
        self.points.len() == 2
    }

    pub fn points(&self) -> &[(Dyadic, Dyadic)] {
        &self.points
    }

    /// Slope exponents of the linear pieces, in order.
    pub fn slope_exponents(&self) -> Vec<i64> {
        self.points
            .windows(2)
            .map(|pair| slope_exponent(&pair[0], &pair[1]))
            .collect()
    }

    /// Evaluates the map at x in [0,1].
    pub fn evaluate(&self, x: &Dyadic) -> Dyadic {
        let i = piece_at(&self.points, x, |p| &p.0);
        let (x0, y0) = &self.points[i];
        let e = slope_exponent(&self.points[i], &self.points[i + 1]);
        y0.add(&x.sub(x0).mul_pow2(e))
    }

    /// Evaluates the inverse map at y in [0,1].
    pub fn preimage(&self, y: &Dyadic) -> Dyadic {
        let i = piece_at(&self.points, y, |p| &p.1);
        let (x0, y0) = &self.points[i];
        let e = slope_exponent(&self.points[i], &self.points[i + 1]);
        x0.add(&y.sub(y0).mul_pow2(-e))
    }

    /// The inverse homeomorphism.
    pub fn inverse(&self) -> PLMap {
        PLMap::from_points(self.points.iter().map(|(x, y)| (y.clone(), x.clone())).collect())
    }
}

/// Index of the linear piece containing t, by the chosen coordinate.
fn piece_at<'a>(
    points: &'a [(Dyadic, Dyadic)],
    t: &Dyadic,
    coord: impl Fn(&'a (Dyadic, Dyadic)) -> &'a Dyadic,
) -> usize {
    assert!(
        t >= coord(&points[0]) && t <= coord(points.last().unwrap()),
        "argument outside [0,1]"
    );
    let mut lo = 0;
    let mut hi = points.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if coord(&points[mid]) <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// The exponent e with y2 - y1 = 2^e (x2 - x1). Panics when the slope is
/// not a power of 2 (lowest-terms numerators must then agree).
fn slope_exponent(p1: &(Dyadic, Dyadic), p2: &(Dyadic, Dyadic)) -> i64 {
    let dx = p2.0.sub(&p1.0);
    let dy = p2.1.sub(&p1.1);
    assert!(
        dy.numerator() == dx.numerator(),
        "slope {:?}/{:?} is not a power of 2",
        dy,
        dx
    );
    dx.exponent() as i64 - dy.exponent() as i64
}

/// The chart for g_0: slopes (1/2, 1, 2) over three pieces.
fn g0_chart() -> Vec<(Dyadic, Dyadic)> {
    vec![
        (Dyadic::zero(), Dyadic::zero()),
        (Dyadic::new(1, 1), Dyadic::new(1, 2)),
        (Dyadic::new(3, 2), Dyadic::new(1, 1)),
        (Dyadic::one(), Dyadic::one()),
    ]
}

/// The PL map representing g_k. For k >= 1 the map is the identity on
/// [0, 1 - 2^-k] and carries a copy of g_0 rescaled onto [1 - 2^-k, 1].
pub fn generator_map(k: Index) -> PLMap {
    if k == 0 {
        return PLMap::from_points(g0_chart());
    }
    let a = Dyadic::one().sub(&Dyadic::new(1, k));
    let mut points = vec![(Dyadic::zero(), Dyadic::zero())];
    for (x, y) in g0_chart() {
        let sx = a.add(&x.mul_pow2(-(k as i64)));
        let sy = a.add(&y.mul_pow2(-(k as i64)));
        points.push((sx, sy));
    }
    PLMap::from_points(points)
}

/// The composition x -> f(g(x)); g acts first.
pub fn compose(f: &PLMap, g: &PLMap) -> PLMap {
    let mut xs: Vec<Dyadic> = g.points().iter().map(|(x, _)| x.clone()).collect();
    for (fx, _) in f.points() {
        xs.push(g.preimage(fx));
    }
    xs.sort();
    xs.dedup();
    let points = xs
        .into_iter()
        .map(|x| {
            let y = f.evaluate(&g.evaluate(&x));
            (x, y)
        })
        .collect();
    PLMap::from_points(points)
}

/// The PL map of a single letter.
pub fn letter_map(letter: &Letter) -> PLMap {
    let map = generator_map(letter.index);
    match letter.sign {
        Sign::Plus => map,
        Sign::Minus => map.inverse(),
    }
}

/// Evaluates a word to its group element: the left-to-right product of
/// letter maps; the empty word gives the identity. The product g_n g_k
/// composes with the right factor acting first, the convention pinned by
/// `verify_relations`.
pub fn eval_word(w: &Word) -> PLMap {
    let mut acc = PLMap::identity();
    for letter in w.iter() {
        acc = compose(&acc, &letter_map(letter));
    }
    acc
}

/// True iff the word evaluates to the identity element.
pub fn is_neutral(w: &Word) -> bool {
    eval_word(w).is_identity()
}

fn push_leb128(bytes: &mut Vec<u8>, mut n: BigUint) {
    let mask = BigUint::from(0x7fu8);
    loop {
        let low = (&n & &mask).to_u32_digits().first().copied().unwrap_or(0) as u8;
        n >>= 7;
        if n.is_zero() {
            bytes.push(low);
            break;
        }
        bytes.push(low | 0x80);
    }
}

fn push_dyadic(bytes: &mut Vec<u8>, d: &Dyadic) {
    bytes.push(match d.numerator().sign() {
        BigSign::Minus => 1,
        _ => 0,
    });
    push_leb128(bytes, d.numerator().magnitude().clone());
    push_leb128(bytes, BigUint::from(d.exponent()));
}

/// A stable injective byte key for a canonical map: equal keys iff equal
/// group elements. Layout (version 1): a little-endian u32 breakpoint
/// count, then for each breakpoint the x then y coordinate, each encoded
/// as a sign byte (0 nonnegative, 1 negative) followed by the LEB128
/// numerator magnitude and LEB128 exponent of the lowest-terms dyadic.
pub fn canonical_key(f: &PLMap) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(4 + 8 * f.points().len());
    bytes.extend_from_slice(&(f.points().len() as u32).to_le_bytes());
    for (x, y) in f.points() {
        push_dyadic(&mut bytes, x);
        push_dyadic(&mut bytes, y);
    }
    bytes
}

/// Outcome of checking one defining relation g_n g_k = g_k g_{n+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub n: Index,
    pub k: Index,
    pub ok: bool,
}

/// Report of checking all relations with 0 <= k < n <= max_index.
#[derive(Debug, Clone)]
pub struct RelationReport {
    pub max_index: Index,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&RelationCheck> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }
}

/// Checks every defining relation up to max_index under the module's
/// composition convention. A failure means the convention or the charts
/// are wrong; nothing else in the crate is trustworthy until this passes.
pub fn verify_relations(max_index: Index) -> RelationReport {
    let mut checks = Vec::new();
    for n in 1..=max_index {
        for k in 0..n {
            let lhs = eval_word(&Word::new(vec![Letter::gen(n), Letter::gen(k)]));
            let rhs = eval_word(&Word::new(vec![Letter::gen(k), Letter::gen(n + 1)]));
            checks.push(RelationCheck {
                n,
                k,
                ok: lhs == rhs,
            });
        }
    }
    if max_index == 0 {
        checks.clear();
    }
    RelationReport { max_index, checks }
}
