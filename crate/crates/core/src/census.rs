//! Exact counting of neutral words and the moment sequence they drive.
//!
//! `enumerate_naive` scans every word of length d over the indices
//! {0..n-1} and keeps the ones the evaluation oracle maps to the
//! identity. `enumerate_mitm` reaches the same counts by meeting in the
//! middle: it tabulates the (2n)^(d/2) half-words by a hash of the
//! canonical key of their evaluation, joins left halves against right
//! halves whose evaluations are mutually inverse, and confirms every
//! joined candidate by normalizing it, so hash collisions cannot inflate
//! the counts. Totals, per-permutation counts, and per-partition counts
//! land in a [`CensusTable`].
//!
//! On top of the censuses sit the closed-form pieces: binomial sandwich
//! bounds for the per-permutation counts, the exact rational moment
//! |W0(d,n)| / (2n)^(d/2) with its limiting value (d-1)!!, and the two
//! double-factorial counting identities for pair partitions.

use std::collections::BTreeMap;
use std::ops::Range;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Zero};

use crate::binning::{PairPartition, Permutation};
use crate::frep::{self, PLMap};
use crate::rewrite::{self, TaggedLetter};
use crate::word::{Letter, Sign, Word};
use crate::{Error, Result};

/// Candidate ceiling for the full scan; (2n)^d beyond this is refused.
pub const DEFAULT_CANDIDATE_BUDGET: u64 = 100_000_000;
/// Half-word ceiling for the meet-in-the-middle table.
pub const DEFAULT_HALFWORD_BUDGET: u64 = 20_000_000;

/// Exact counts of the neutral words of length d over indices {0..n-1},
/// in total and grouped by permutation and by pair partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    pub d: usize,
    pub n: u64,
    pub total: BigUint,
    pub by_tau: BTreeMap<Permutation, BigUint>,
    pub by_partition: BTreeMap<PairPartition, BigUint>,
}

impl CensusTable {
    fn empty(d: usize, n: u64) -> CensusTable {
        CensusTable {
            d,
            n,
            total: BigUint::zero(),
            by_tau: BTreeMap::new(),
            by_partition: BTreeMap::new(),
        }
    }

    fn from_counts(d: usize, n: u64, counts: &TallyMaps) -> CensusTable {
        CensusTable {
            d,
            n,
            total: counts.total.into(),
            by_tau: counts
                .by_tau
                .iter()
                .map(|(t, &c)| (t.clone(), c.into()))
                .collect(),
            by_partition: counts
                .by_partition
                .iter()
                .map(|(p, &c)| (p.clone(), c.into()))
                .collect(),
        }
    }

    /// Verifies the internal identities: the total equals the sum over
    /// permutations and the sum over partitions, and the per-partition
    /// counts are exactly the per-permutation counts regrouped by the
    /// partition each permutation induces.
    pub fn check_invariants(&self) -> Result<()> {
        let sum_tau: BigUint = self.by_tau.values().sum();
        let sum_partition: BigUint = self.by_partition.values().sum();
        if sum_tau != self.total || sum_partition != self.total {
            return Err(Error::InternalContradiction {
                message: format!(
                    "census totals disagree: total {}, by permutation {sum_tau}, by partition {sum_partition}",
                    self.total
                ),
            });
        }
        let mut regrouped: BTreeMap<PairPartition, BigUint> = BTreeMap::new();
        for (tau, count) in &self.by_tau {
            let tinv = tau.inverse();
            let d = self.d;
            let pi = PairPartition::from_pairs(
                (1..=d / 2).map(|k| (tinv.apply(k), tinv.apply(d - k + 1))),
            )?;
            *regrouped.entry(pi).or_insert_with(BigUint::zero) += count;
        }
        if regrouped != self.by_partition {
            return Err(Error::InternalContradiction {
                message: "per-partition counts are not the per-permutation counts regrouped".into(),
            });
        }
        Ok(())
    }
}

/// Per-worker tallies; merging is summation, so the merged table is the
/// same for every partition of the work.
#[derive(Default)]
struct TallyMaps {
    total: u64,
    by_tau: BTreeMap<Permutation, u64>,
    by_partition: BTreeMap<PairPartition, u64>,
}

impl TallyMaps {
    fn absorb(&mut self, other: TallyMaps) {
        self.total += other.total;
        for (t, c) in other.by_tau {
            *self.by_tau.entry(t).or_insert(0) += c;
        }
        for (p, c) in other.by_partition {
            *self.by_partition.entry(p).or_insert(0) += c;
        }
    }

    /// Normalizes the candidate and, if its normal form has the neutral
    /// shape, records its permutation and partition. Returns whether it
    /// was recorded. The rewriting normal form is the second neutrality
    /// witness here; callers joining on hashed evaluations rely on it to
    /// discard collisions.
    fn record(&mut self, letters: &[Letter], scratch: &mut Vec<TaggedLetter>) -> Result<bool> {
        let d = letters.len();
        scratch.clear();
        scratch.extend(letters.iter().enumerate().map(|(k, &letter)| TaggedLetter {
            letter,
            origin: k + 1,
        }));
        rewrite::normalize_in_place(scratch)?;
        let mirrored = d % 2 == 0
            && (0..d / 2).all(|k| {
                let a = scratch[k].letter;
                let b = scratch[d - 1 - k].letter;
                a.sign == Sign::Plus && b.sign == Sign::Minus && a.index == b.index
            });
        if !mirrored {
            return Ok(false);
        }
        let mut images = vec![0usize; d];
        for (pos, t) in scratch.iter().enumerate() {
            images[t.origin - 1] = pos + 1;
        }
        let tau = Permutation::from_images(images)?;
        let pi = PairPartition::from_pairs(
            (1..=d / 2).map(|k| (scratch[k - 1].origin, scratch[d - k].origin)),
        )?;
        self.total += 1;
        *self.by_tau.entry(tau).or_insert(0) += 1;
        *self.by_partition.entry(pi).or_insert(0) += 1;
        Ok(true)
    }
}

fn letter_of_code(code: u64) -> Letter {
    Letter {
        index: code / 2,
        sign: if code % 2 == 0 { Sign::Plus } else { Sign::Minus },
    }
}

/// Walks every word of the given length whose first letter code lies in
/// `codes`, in lexicographic order, carrying the evaluation of the
/// prefix. The visitor receives the word's global rank (its position in
/// the full lexicographic enumeration), its letters, and its evaluation.
fn walk_words<F>(len: usize, n: u64, codes: Range<u64>, visit: &mut F)
where
    F: FnMut(u64, &[Letter], &PLMap),
{
    if len == 0 {
        visit(0, &[], &PLMap::identity());
        return;
    }
    let m = 2 * n;
    let subtree = m.pow(len as u32 - 1);
    let mut letters = Vec::with_capacity(len);
    for code in codes {
        let letter = letter_of_code(code);
        let acc = frep::letter_map(&letter);
        let mut rank = code * subtree;
        letters.push(letter);
        walk_rest(len, m, &acc, &mut letters, &mut rank, visit);
        letters.pop();
    }
}

fn walk_rest<F>(len: usize, m: u64, acc: &PLMap, letters: &mut Vec<Letter>, rank: &mut u64, visit: &mut F)
where
    F: FnMut(u64, &[Letter], &PLMap),
{
    if letters.len() == len {
        visit(*rank, letters, acc);
        *rank += 1;
        return;
    }
    for code in 0..m {
        let letter = letter_of_code(code);
        let next = frep::compose(acc, &frep::letter_map(&letter));
        letters.push(letter);
        walk_rest(len, m, &next, letters, rank, visit);
        letters.pop();
    }
}

fn candidate_count(d: usize, n: u64) -> u128 {
    u128::from(2 * n)
        .checked_pow(d as u32)
        .unwrap_or(u128::MAX)
}

/// All neutral words of length d over indices {0..n-1}, in lexicographic
/// order, with neutrality decided by the evaluation oracle. Refuses runs
/// beyond the default candidate budget.
pub fn enumerate_naive(d: usize, n: u64) -> Result<Vec<Word>> {
    enumerate_naive_with_budget(d, n, DEFAULT_CANDIDATE_BUDGET)
}

pub fn enumerate_naive_with_budget(d: usize, n: u64, budget: u64) -> Result<Vec<Word>> {
    let required = candidate_count(d, n);
    if required > u128::from(budget) {
        return Err(Error::CandidateBudget { required, budget });
    }
    let mut words = Vec::new();
    walk_words(d, n, 0..2 * n, &mut |_, letters, acc| {
        if acc.is_identity() {
            words.push(Word::new(letters.to_vec()));
        }
    });
    Ok(words)
}

/// Builds a census table from an explicit list of neutral words (for
/// example the output of [`enumerate_naive`]).
pub fn census_from_words(d: usize, n: u64, words: &[Word]) -> Result<CensusTable> {
    let mut tally = TallyMaps::default();
    let mut scratch = Vec::new();
    for w in words {
        if w.len() != d {
            return Err(Error::SizeMismatch {
                expected: d,
                got: w.len(),
            });
        }
        if !tally.record(w.letters(), &mut scratch)? {
            return Err(Error::NotNeutral);
        }
    }
    Ok(CensusTable::from_counts(d, n, &tally))
}

/// 128-bit FNV-1a over the canonical key bytes; collisions are harmless
/// because every join candidate is re-verified by normalization.
fn fnv128(bytes: &[u8]) -> u128 {
    const OFFSET: u128 = 0x6c62272e07bb014262b821756295c58d;
    const PRIME: u128 = 0x0000000001000000000000000000013b;
    let mut h = OFFSET;
    for &b in bytes {
        h ^= u128::from(b);
        h = h.wrapping_mul(PRIME);
    }
    h
}

fn decode_rank(mut rank: u64, len: usize, m: u64, into: &mut Vec<Letter>) {
    into.clear();
    into.resize(len, Letter::gen(0));
    for k in (0..len).rev() {
        into[k] = letter_of_code(rank % m);
        rank /= m;
    }
}

fn worker_count_from_env() -> usize {
    let hardware = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1);
    std::env::var("THOMPSON_CLT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(hardware)
}

fn first_letter_chunks(m: u64, workers: usize) -> Vec<Range<u64>> {
    let workers = workers.clamp(1, m.max(1) as usize) as u64;
    (0..workers)
        .map(|t| (t * m / workers)..((t + 1) * m / workers))
        .filter(|r| !r.is_empty())
        .collect()
}

/// Census by meet-in-the-middle with the default half-word budget and a
/// worker count taken from THOMPSON_CLT_THREADS (default: the machine's
/// parallelism). The table is identical for every worker count.
pub fn enumerate_mitm(d: usize, n: u64) -> Result<CensusTable> {
    enumerate_mitm_with_budget(d, n, DEFAULT_HALFWORD_BUDGET)
}

pub fn enumerate_mitm_with_budget(d: usize, n: u64, budget: u64) -> Result<CensusTable> {
    enumerate_mitm_configured(d, n, budget, worker_count_from_env())
}

/// Words of odd length are never neutral, so the census short-circuits
/// to an empty table for odd d; `enumerate_naive` performs the honest
/// scan when verification of that fact is wanted.
pub fn enumerate_mitm_configured(
    d: usize,
    n: u64,
    budget: u64,
    workers: usize,
) -> Result<CensusTable> {
    if d % 2 != 0 {
        return Ok(CensusTable::empty(d, n));
    }
    if d == 0 {
        let mut tally = TallyMaps::default();
        let mut scratch = Vec::new();
        tally.record(&[], &mut scratch)?;
        return Ok(CensusTable::from_counts(d, n, &tally));
    }
    if n == 0 {
        return Ok(CensusTable::empty(d, n));
    }
    let half = d / 2;
    let m = 2 * n;
    let required = candidate_count(half, n);
    if required > u128::from(budget) {
        return Err(Error::HalfWordBudget { required, budget });
    }

    let chunks = first_letter_chunks(m, workers);

    // Pass 1: hash every half-word's evaluation, keyed back to its rank.
    let mut left: Vec<(u128, u32)> = Vec::with_capacity(required as usize);
    let parts = run_chunked(&chunks, |codes| {
        let mut part: Vec<(u128, u32)> = Vec::new();
        walk_words(half, n, codes, &mut |rank, _, acc| {
            part.push((fnv128(&frep::canonical_key(acc)), rank as u32));
        });
        Ok(part)
    })?;
    for part in parts {
        left.extend(part);
    }
    left.sort_unstable();

    // Pass 2: for each right half, find the left halves whose evaluation
    // inverts it; every joined candidate is confirmed by normalization.
    let left = &left;
    let parts = run_chunked(&chunks, |codes| {
        let mut tally = TallyMaps::default();
        let mut first = Vec::new();
        let mut joined = Vec::new();
        let mut scratch = Vec::new();
        let mut error = None;
        walk_words(half, n, codes, &mut |_, letters, acc| {
            if error.is_some() {
                return;
            }
            let target = fnv128(&frep::canonical_key(&acc.inverse()));
            let lo = left.partition_point(|&(h, _)| h < target);
            let hi = lo + left[lo..].partition_point(|&(h, _)| h == target);
            for &(_, rank) in &left[lo..hi] {
                decode_rank(u64::from(rank), half, m, &mut first);
                joined.clear();
                joined.extend_from_slice(&first);
                joined.extend_from_slice(letters);
                if let Err(e) = tally.record(&joined, &mut scratch) {
                    error = Some(e);
                    return;
                }
            }
        });
        match error {
            Some(e) => Err(e),
            None => Ok(tally),
        }
    })?;
    let mut tally = TallyMaps::default();
    for part in parts {
        tally.absorb(part);
    }
    Ok(CensusTable::from_counts(d, n, &tally))
}

/// Runs the per-chunk job on scoped threads (or inline for one chunk)
/// and returns the results in chunk order.
fn run_chunked<T, F>(chunks: &[Range<u64>], job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Range<u64>) -> Result<T> + Sync,
{
    if chunks.len() <= 1 {
        return chunks.iter().cloned().map(&job).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .cloned()
            .map(|codes| scope.spawn(|| job(codes)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .collect()
    })
}

/// Exact binomial coefficient with C(a, b) = 0 whenever a < b, which
/// covers negative upper arguments.
pub fn binomial(a: i128, b: u64) -> BigUint {
    if a < b as i128 {
        return BigUint::zero();
    }
    let mut result = BigUint::one();
    for k in 0..b {
        result *= BigUint::try_from(a - k as i128).expect("a - k is nonnegative");
        result /= BigUint::from(k + 1);
    }
    result
}

/// k!! for k >= 1; by convention 0!! = (-1)!! = 1 (and any smaller k
/// also maps to the empty product).
pub fn double_factorial(k: i64) -> BigUint {
    let mut result = BigUint::one();
    let mut k = k;
    while k > 1 {
        result *= BigUint::try_from(k).expect("k is positive");
        k -= 2;
    }
    result
}

/// The binomial sandwich for the per-permutation counts N(d,n,tau):
/// returns (C(n + 2d - 3d²/2, d/2), C(n + d²/2 - 2, d/2)). The lower
/// bound is only meaningful for n > 3d(d-1)/2; the values are returned
/// unconditionally.
pub fn sandwich_bounds(d: usize, n: u64) -> Result<(BigUint, BigUint)> {
    if d % 2 != 0 {
        return Err(Error::Domain {
            message: format!("sandwich bounds need even d, got {d}"),
        });
    }
    let d = d as i128;
    let n = n as i128;
    let lower_arg = n + 2 * d - 3 * d * d / 2;
    let upper_arg = n + d * d / 2 - 2;
    let b = (d / 2) as u64;
    Ok((binomial(lower_arg, b), binomial(upper_arg, b)))
}

/// The exact moment |W0(d,n)| / (2n)^(d/2), its limiting value, and the
/// sandwich envelopes (d-1)!! · d!! · bound / (2n)^(d/2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub d: usize,
    pub n: u64,
    pub moment: BigRational,
    pub limit: BigUint,
    pub lower_envelope: BigRational,
    pub upper_envelope: BigRational,
}

impl MomentReport {
    /// True when the hypothesis of the lower bound, n > 3d(d-1)/2, holds,
    /// so that lower_envelope <= moment <= upper_envelope is asserted.
    pub fn lower_bound_applies(&self) -> bool {
        2 * u128::from(self.n) > 3 * (self.d as u128) * (self.d as u128).saturating_sub(1)
    }
}

pub fn moment(d: usize, n: u64) -> Result<MomentReport> {
    moment_with_budget(d, n, DEFAULT_HALFWORD_BUDGET)
}

pub fn moment_with_budget(d: usize, n: u64, budget: u64) -> Result<MomentReport> {
    let table = enumerate_mitm_with_budget(d, n, budget)?;
    moment_from_table(&table)
}

/// Derives the moment report from an already-computed census table, so a
/// table built once can feed both the invariant checks and the moment.
pub fn moment_from_table(table: &CensusTable) -> Result<MomentReport> {
    let (d, n) = (table.d, table.n);
    if n == 0 {
        return Err(Error::Domain {
            message: "the moment needs at least one generator index".into(),
        });
    }
    if d % 2 != 0 {
        // Odd moments vanish identically: there are no odd-length
        // neutral words.
        return Ok(MomentReport {
            d,
            n,
            moment: BigRational::zero(),
            limit: BigUint::zero(),
            lower_envelope: BigRational::zero(),
            upper_envelope: BigRational::zero(),
        });
    }
    let denominator = BigInt::from(BigUint::from(2 * n).pow(d as u32 / 2));
    let moment = BigRational::new(BigInt::from(table.total.clone()), denominator.clone());
    let (lower, upper) = sandwich_bounds(d, n)?;
    let scale = double_factorial(d as i64 - 1) * double_factorial(d as i64);
    let envelope = |bound: BigUint| {
        BigRational::new(BigInt::from(scale.clone() * bound), denominator.clone())
    };
    Ok(MomentReport {
        d,
        n,
        moment,
        limit: double_factorial(d as i64 - 1),
        lower_envelope: envelope(lower),
        upper_envelope: envelope(upper),
    })
}

/// Exhaustively counts the permutations carrying p to the rainbow; only
/// feasible for d <= 8, beyond which the count is known to be d!!.
pub fn count_taus_to_rainbow(p: &PairPartition) -> Result<BigUint> {
    use itertools::Itertools;

    let d = p.d();
    if d == 0 {
        return Ok(BigUint::one());
    }
    if d > 8 {
        return Err(Error::TooLarge { d, max: 8 });
    }
    let rain = crate::binning::rainbow(d)?;
    let mut count = BigUint::zero();
    for images in (1..=d).permutations(d) {
        let tau = Permutation::from_images(images)?;
        if crate::binning::apply_to_partition(&tau, p)? == rain {
            count += 1u32;
        }
    }
    Ok(count)
}

/// All pair partitions of {1..d}; there are (d-1)!! of them.
pub fn all_pair_partitions(d: usize) -> Result<Vec<PairPartition>> {
    if d % 2 != 0 {
        return Err(Error::Domain {
            message: format!("pair partitions need even d, got {d}"),
        });
    }
    let mut out = Vec::new();
    let mut used = vec![false; d + 1];
    let mut pairs = Vec::with_capacity(d / 2);
    build_partitions(d, &mut used, &mut pairs, &mut out)?;
    Ok(out)
}

fn build_partitions(
    d: usize,
    used: &mut Vec<bool>,
    pairs: &mut Vec<(usize, usize)>,
    out: &mut Vec<PairPartition>,
) -> Result<()> {
    let Some(a) = (1..=d).find(|&x| !used[x]) else {
        out.push(PairPartition::from_pairs(pairs.iter().copied())?);
        return Ok(());
    };
    used[a] = true;
    for b in a + 1..=d {
        if used[b] {
            continue;
        }
        used[b] = true;
        pairs.push((a, b));
        build_partitions(d, used, pairs, out)?;
        pairs.pop();
        used[b] = false;
    }
    used[a] = false;
    Ok(())
}
