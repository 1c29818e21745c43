//! Rewriting of words over the generators of F.
//!
//! Three length-preserving pair-rewriting relations, each an instance of
//! the defining relations g_n g_k = g_k g_{n+1} (so every step preserves
//! the evaluated group element):
//!
//! - separate ([`ReductionKind::Separate`]): an inverse letter directly
//!   left of a generator letter swaps past it; the larger index gains 1,
//!   equal indices swap unchanged.
//! - order ([`ReductionKind::Order`]): two adjacent generators (or two
//!   adjacent inverses) whose indices are out of order by more than 1
//!   swap; the larger index loses 1.
//! - push-smallest ([`ReductionKind::PushSmallest`]): letters carrying
//!   the minimal index of the word travel outward (generators left,
//!   inverses right); every letter they pass gains 1.
//!
//! [`normalize`] applies separate to exhaustion and then order to
//! exhaustion, always at the leftmost applicable pair, producing the
//! unique normal form: all generators precede all inverses, with the
//! generator indices descending up to +1 jumps and the mirrored condition
//! on the inverses. Uniqueness is proved via termination plus local
//! confluence; [`check_local_confluence`] and [`check_unique_normal_form`]
//! re-verify both empirically on bounded word spaces.

use std::collections::BTreeSet;
use std::fmt;

use crate::word::{Index, Letter, Sign, Word};
use crate::{Error, Result};

/// Which rewriting relation a step belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    Separate,
    Order,
    PushSmallest,
    /// Separate to exhaustion, then order to exhaustion.
    Composed,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ReductionKind::Separate => "separate",
            ReductionKind::Order => "order",
            ReductionKind::PushSmallest => "push-smallest",
            ReductionKind::Composed => "composed",
        };
        f.write_str(name)
    }
}

/// A letter tagged with its 1-based position in the original word. Tags
/// travel with letters through every rewrite; signs never change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedLetter {
    pub letter: Letter,
    pub origin: usize,
}

/// A word whose letters remember where they started.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedWord {
    letters: Vec<TaggedLetter>,
}

impl TaggedWord {
    pub fn from_word(w: &Word) -> TaggedWord {
        TaggedWord {
            letters: w
                .iter()
                .enumerate()
                .map(|(k, &letter)| TaggedLetter {
                    letter,
                    origin: k + 1,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[TaggedLetter] {
        &self.letters
    }

    /// Drops the tags.
    pub fn strip(&self) -> Word {
        Word::new(self.letters.iter().map(|t| t.letter).collect())
    }

    /// images[l-1] = current 1-based position of the letter with origin l.
    pub fn origin_positions(&self) -> Vec<usize> {
        let mut images = vec![0; self.letters.len()];
        for (pos, t) in self.letters.iter().enumerate() {
            images[t.origin - 1] = pos + 1;
        }
        images
    }
}

fn bump(letter: Letter) -> Letter {
    Letter {
        index: letter.index.checked_add(1).expect("generator index overflow"),
        sign: letter.sign,
    }
}

fn drop_one(letter: Letter) -> Letter {
    Letter {
        index: letter.index - 1,
        sign: letter.sign,
    }
}

/// Applies the kind's rule to the adjacent pair (l, r) if it is a redex.
/// Every rule swaps the two letters (possibly changing an index), so the
/// returned pair is (new left, new right) with origins exchanged by the
/// caller. `i0` is the word's minimal index, used only by push-smallest.
fn rewrite_pair(kind: ReductionKind, l: Letter, r: Letter, i0: Index) -> Option<(Letter, Letter)> {
    match kind {
        ReductionKind::Separate => {
            if l.sign == Sign::Minus && r.sign == Sign::Plus {
                let (a, b) = (l.index, r.index);
                Some(if a == b {
                    (r, l)
                } else if a > b {
                    (r, bump(l))
                } else {
                    (bump(r), l)
                })
            } else {
                None
            }
        }
        ReductionKind::Order => {
            if l.sign == Sign::Plus && r.sign == Sign::Plus && r.index > l.index + 1 {
                Some((drop_one(r), l))
            } else if l.sign == Sign::Minus && r.sign == Sign::Minus && l.index > r.index + 1 {
                Some((r, drop_one(l)))
            } else {
                None
            }
        }
        ReductionKind::PushSmallest => {
            if r == Letter::gen(i0) && l.index > i0 {
                Some((r, bump(l)))
            } else if l == Letter::inv(i0) && r.index > i0 {
                Some((bump(r), l))
            } else if l == Letter::inv(i0) && r == Letter::gen(i0) {
                Some((r, l))
            } else {
                None
            }
        }
        ReductionKind::Composed => panic!("the composed reduction has no single-pair rule"),
    }
}

fn min_index(letters: &[TaggedLetter]) -> Index {
    letters.iter().map(|t| t.letter.index).min().unwrap_or(0)
}

/// 1-based positions p such that the pair (p, p+1) is a redex.
pub fn redexes(w: &TaggedWord, kind: ReductionKind) -> Vec<usize> {
    assert!(
        kind != ReductionKind::Composed,
        "redexes of the composed reduction are not pairwise"
    );
    let i0 = min_index(w.letters());
    (1..w.len())
        .filter(|&p| {
            rewrite_pair(kind, w.letters[p - 1].letter, w.letters[p].letter, i0).is_some()
        })
        .collect()
}

/// Contracts the redex at 1-based position p. Origins travel with their
/// letters; the evaluated group element is unchanged.
pub fn step(w: &TaggedWord, kind: ReductionKind, position: usize) -> Result<TaggedWord> {
    assert!(
        kind != ReductionKind::Composed,
        "the composed reduction has no single step"
    );
    let bad = Error::NotARedex { kind, position };
    if position == 0 || position >= w.len() {
        return Err(bad);
    }
    let i0 = min_index(w.letters());
    let l = w.letters[position - 1];
    let r = w.letters[position];
    match rewrite_pair(kind, l.letter, r.letter, i0) {
        Some((nl, nr)) => {
            let mut letters = w.letters.clone();
            letters[position - 1] = TaggedLetter {
                letter: nl,
                origin: r.origin,
            };
            letters[position] = TaggedLetter {
                letter: nr,
                origin: l.origin,
            };
            Ok(TaggedWord { letters })
        }
        None => Err(bad),
    }
}

/// One rewriting step as recorded by [`normalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub kind: ReductionKind,
    /// 1-based position of the contracted pair at the time of the step.
    pub position: usize,
    pub before: (Letter, Letter),
    pub after: (Letter, Letter),
}

/// The full step sequence of a normalization run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepTrace {
    pub steps: Vec<StepRecord>,
}

impl StepTrace {
    /// Replays the trace from `from`; reproduces the normalization output
    /// or reports the first mismatching record.
    pub fn replay(&self, from: &Word) -> Result<Word> {
        let mut letters: Vec<Letter> = from.letters().to_vec();
        for (k, rec) in self.steps.iter().enumerate() {
            let p = rec.position;
            if p == 0 || p >= letters.len() + 1 || p + 1 > letters.len() {
                return Err(Error::Inconsistent {
                    message: format!("trace step {}: position {} out of range", k + 1, p),
                });
            }
            if (letters[p - 1], letters[p]) != rec.before {
                return Err(Error::Inconsistent {
                    message: format!("trace step {}: word does not match the before-pair", k + 1),
                });
            }
            letters[p - 1] = rec.after.0;
            letters[p] = rec.after.1;
        }
        Ok(Word::new(letters))
    }
}

/// Step budget for normalizing a word of length d. The reduction is
/// proved to finish well within this; exceeding it is a bug.
pub fn step_budget(d: usize) -> usize {
    3 * d * d
}

/// Driver shared by the tracing and quiet normalizers: separate phase to
/// exhaustion, then order phase, always contracting the leftmost redex.
fn normalize_driver(
    letters: &mut [TaggedLetter],
    mut on_step: impl FnMut(ReductionKind, usize, (Letter, Letter), (Letter, Letter)),
) -> Result<()> {
    let d = letters.len();
    let budget = step_budget(d);
    let mut used = 0usize;
    for kind in [ReductionKind::Separate, ReductionKind::Order] {
        // A step at pair p only touches pairs p-1, p, p+1, so the next
        // leftmost redex is at p-1 or later; scanning resumes there.
        let mut p = 1;
        while p < d.max(1) {
            let l = letters[p - 1];
            let r = letters[p];
            match rewrite_pair(kind, l.letter, r.letter, 0) {
                Some((nl, nr)) => {
                    if used == budget {
                        return Err(Error::StepBudget { budget, length: d });
                    }
                    used += 1;
                    letters[p - 1] = TaggedLetter {
                        letter: nl,
                        origin: r.origin,
                    };
                    letters[p] = TaggedLetter {
                        letter: nr,
                        origin: l.origin,
                    };
                    on_step(kind, p, (l.letter, r.letter), (nl, nr));
                    p = p.max(2) - 1;
                }
                None => p += 1,
            }
        }
    }
    Ok(())
}

/// Rewrites w to its unique normal form with the fixed deterministic
/// strategy (leftmost redex, separate phase then order phase), returning
/// the tagged result and the full step trace.
pub fn normalize(w: &Word) -> Result<(TaggedWord, StepTrace)> {
    let mut tagged = TaggedWord::from_word(w);
    let mut trace = StepTrace::default();
    normalize_driver(&mut tagged.letters, |kind, position, before, after| {
        trace.steps.push(StepRecord {
            kind,
            position,
            before,
            after,
        });
    })?;
    debug_assert!(is_normal_form(&tagged.strip()));
    Ok((tagged, trace))
}

/// As [`normalize`] but without recording a trace; used by bulk callers.
/// The letter buffer is rewritten in place.
pub fn normalize_in_place(letters: &mut [TaggedLetter]) -> Result<()> {
    normalize_driver(letters, |_, _, _, _| {})
}

/// True iff the word is irreducible for both separate and order: all
/// generators precede all inverses, consecutive generator indices rise by
/// at most 1, and consecutive inverse indices fall by at most 1.
pub fn is_normal_form(w: &Word) -> bool {
    let letters = w.letters();
    let r = letters.partition_point(|l| l.sign == Sign::Plus);
    if letters[r..].iter().any(|l| l.sign == Sign::Plus) {
        return false;
    }
    let gens_ok = letters[..r]
        .windows(2)
        .all(|p| p[1].index <= p[0].index + 1);
    let invs_ok = letters[r..]
        .windows(2)
        .all(|p| p[0].index <= p[1].index + 1);
    gens_ok && invs_ok
}

/// True iff a word in normal form witnesses neutrality: even length d,
/// sign pattern of d/2 generators followed by d/2 inverses, and mirrored
/// indices j(k) = j(d-k+1).
pub fn neutral_normal_form(nf: &Word) -> bool {
    let d = nf.len();
    if d % 2 != 0 {
        return false;
    }
    let letters = nf.letters();
    let half = d / 2;
    letters[..half].iter().all(|l| l.sign == Sign::Plus)
        && letters[half..].iter().all(|l| l.sign == Sign::Minus)
        && (0..half).all(|k| letters[k].index == letters[d - 1 - k].index)
}

/// Neutrality decided by rewriting alone: normalize and check the mirror
/// shape. Agrees with the piecewise-linear oracle; the census uses this
/// as a cheap second witness on every joined word.
pub fn is_neutral_by_rewriting(w: &Word) -> Result<bool> {
    let (nf, _) = normalize(w)?;
    Ok(neutral_normal_form(&nf.strip()))
}

/// Report of an exhaustive local-confluence check.
#[derive(Debug, Clone)]
pub struct ConfluenceReport {
    pub kind: ReductionKind,
    pub max_len: usize,
    pub max_index: Index,
    pub words_checked: u64,
    pub divergent_pairs: u64,
    /// Words with a non-joinable pair of one-step successors; sorted.
    pub counterexamples: Vec<Word>,
}

/// Every word reachable from w by zero or more steps of the kind.
fn reachable(w: &TaggedWord, kind: ReductionKind) -> BTreeSet<Word> {
    let mut seen: BTreeSet<TaggedWord> = BTreeSet::new();
    let mut queue = vec![w.clone()];
    seen.insert(w.clone());
    while let Some(u) = queue.pop() {
        for p in redexes(&u, kind) {
            let v = step(&u, kind, p).expect("redex positions are steppable");
            if seen.insert(v.clone()) {
                queue.push(v);
            }
        }
        assert!(seen.len() < 1_000_000, "reachability exploded; rewriting should terminate");
    }
    seen.into_iter().map(|t| t.strip()).collect()
}

/// Enumerates every word with the given length over indices 0..=max_index
/// and calls f on each.
fn for_each_word(len: usize, max_index: Index, f: &mut impl FnMut(&Word)) {
    let alphabet: Vec<Letter> = (0..=max_index)
        .flat_map(|i| [Letter::gen(i), Letter::inv(i)])
        .collect();
    let mut letters = vec![alphabet[0]; len];
    let m = alphabet.len();
    let mut odometer = vec![0usize; len];
    loop {
        for (slot, &digit) in odometer.iter().enumerate() {
            letters[slot] = alphabet[digit];
        }
        f(&Word::new(letters.clone()));
        let mut carry = len;
        while carry > 0 {
            odometer[carry - 1] += 1;
            if odometer[carry - 1] < m {
                break;
            }
            odometer[carry - 1] = 0;
            carry -= 1;
        }
        if carry == 0 {
            break;
        }
    }
}

/// Checks local confluence of one relation exhaustively over all words of
/// length <= max_len with indices <= max_index: for every word and every
/// pair of one-step successors, a common reduct must exist. The bounds
/// are the honest cap of the search, reported verbatim.
pub fn check_local_confluence(
    kind: ReductionKind,
    max_len: usize,
    max_index: Index,
) -> ConfluenceReport {
    assert!(
        kind != ReductionKind::Composed,
        "local confluence applies to the elementary reductions"
    );
    let mut report = ConfluenceReport {
        kind,
        max_len,
        max_index,
        words_checked: 0,
        divergent_pairs: 0,
        counterexamples: Vec::new(),
    };
    for len in 0..=max_len {
        for_each_word(len, max_index, &mut |w| {
            report.words_checked += 1;
            let tagged = TaggedWord::from_word(w);
            let positions = redexes(&tagged, kind);
            for (a, &p) in positions.iter().enumerate() {
                for &q in &positions[a + 1..] {
                    report.divergent_pairs += 1;
                    let t1 = step(&tagged, kind, p).expect("redex");
                    let t2 = step(&tagged, kind, q).expect("redex");
                    if t1.strip() == t2.strip() {
                        continue;
                    }
                    let r1 = reachable(&t1, kind);
                    let r2 = reachable(&t2, kind);
                    if r1.intersection(&r2).next().is_none() {
                        report.counterexamples.push(w.clone());
                    }
                }
            }
        });
    }
    report.counterexamples.sort();
    report.counterexamples.dedup();
    report
}

/// Report of the all-orders unique-normal-form check.
#[derive(Debug, Clone)]
pub struct UniqueNormalFormReport {
    pub max_len: usize,
    pub max_index: Index,
    pub words_checked: u64,
    /// Words with more than one terminal word across all reduction
    /// orders; sorted. Expected empty.
    pub counterexamples: Vec<Word>,
    /// Words whose unique terminal differs from the leftmost-strategy
    /// result. Expected empty.
    pub leftmost_mismatches: Vec<Word>,
    /// Words where different reduction orders park some origin at a
    /// different final position even though the terminal word is unique.
    /// Tracked to confirm the position assignment is order-independent.
    pub tagged_ambiguous: Vec<Word>,
}

/// All separate-irreducible tagged words reachable by separate steps in
/// any order, or all order-irreducible ones for the order phase.
fn phase_terminals(start: TaggedWord, kind: ReductionKind) -> BTreeSet<TaggedWord> {
    let mut seen: BTreeSet<TaggedWord> = BTreeSet::new();
    let mut terminals = BTreeSet::new();
    let mut queue = vec![start.clone()];
    seen.insert(start);
    while let Some(u) = queue.pop() {
        let positions = redexes(&u, kind);
        if positions.is_empty() {
            terminals.insert(u);
            continue;
        }
        for p in positions {
            let v = step(&u, kind, p).expect("redex positions are steppable");
            if seen.insert(v.clone()) {
                queue.push(v);
            }
        }
    }
    terminals
}

/// Every terminal tagged word of the composed reduction: separate to
/// exhaustion in every order, then order to exhaustion in every order.
pub fn all_terminals(w: &Word) -> BTreeSet<TaggedWord> {
    let mut result = BTreeSet::new();
    for mid in phase_terminals(TaggedWord::from_word(w), ReductionKind::Separate) {
        result.extend(phase_terminals(mid, ReductionKind::Order));
    }
    result
}

/// Exhaustively verifies over all words within the bounds that every
/// reduction order reaches a single terminal word equal to the leftmost
/// strategy's result.
pub fn check_unique_normal_form(max_len: usize, max_index: Index) -> UniqueNormalFormReport {
    let mut report = UniqueNormalFormReport {
        max_len,
        max_index,
        words_checked: 0,
        counterexamples: Vec::new(),
        leftmost_mismatches: Vec::new(),
        tagged_ambiguous: Vec::new(),
    };
    for len in 0..=max_len {
        for_each_word(len, max_index, &mut |w| {
            report.words_checked += 1;
            let terminals = all_terminals(w);
            let stripped: BTreeSet<Word> = terminals.iter().map(|t| t.strip()).collect();
            if stripped.len() != 1 {
                report.counterexamples.push(w.clone());
                return;
            }
            let (leftmost, _) = normalize(w).expect("within step budget");
            if &leftmost.strip() != stripped.iter().next().unwrap() {
                report.leftmost_mismatches.push(w.clone());
            }
            if terminals.len() != 1 {
                report.tagged_ambiguous.push(w.clone());
            }
        });
    }
    report.counterexamples.sort();
    report.leftmost_mismatches.sort();
    report.tagged_ambiguous.sort();
    report
}

/// Index of a letter in a partially known word: a concrete value, or an
/// unknown base plus the offset accumulated as pushed letters passed it.
/// An unknown base is strictly greater than the current minimal index
/// (its paired generator is, and minima pair up), so comparisons against
/// the minimum resolve without knowing the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymIndex {
    Known(Index),
    Unknown { slot: usize, offset: u64 },
}

/// A letter of a partially known word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymLetter {
    pub index: SymIndex,
    pub sign: Sign,
    pub origin: usize,
}

impl SymLetter {
    fn bump(self) -> SymLetter {
        let index = match self.index {
            SymIndex::Known(v) => SymIndex::Known(v.checked_add(1).expect("index overflow")),
            SymIndex::Unknown { slot, offset } => SymIndex::Unknown {
                slot,
                offset: offset + 1,
            },
        };
        SymLetter { index, ..self }
    }

    fn is_known(&self, value: Index, sign: Sign) -> bool {
        self.index == SymIndex::Known(value) && self.sign == sign
    }

    /// Greater than i0? Unknowns always are; a known value below i0 is a
    /// caller bug surfaced as an error by the push loop.
    fn above(&self, i0: Index) -> Option<bool> {
        match self.index {
            SymIndex::Known(v) if v < i0 => None,
            SymIndex::Known(v) => Some(v > i0),
            SymIndex::Unknown { .. } => Some(true),
        }
    }
}

/// Pushes every letter of minimal index i0 outward until minimal
/// generators form a prefix and minimal inverses a suffix: a minimal
/// generator swaps leftward past any higher letter, a minimal inverse
/// swaps rightward, each passed letter gains 1, and the adjacent pair
/// (minimal inverse, minimal generator) swaps unchanged. Leftmost
/// applicable pair first; returns the number of steps.
pub fn push_to_boundary(letters: &mut [SymLetter], i0: Index) -> Result<usize> {
    let d = letters.len();
    let budget = step_budget(d);
    let mut used = 0usize;
    let mut p = 1;
    let contradiction = |pos: usize| Error::InternalContradiction {
        message: format!(
            "letter at position {pos} has a known index below the minimal index {i0}"
        ),
    };
    while p < d.max(1) {
        let l = letters[p - 1];
        let r = letters[p];
        let l_above = l.above(i0).ok_or_else(|| contradiction(p))?;
        let r_above = r.above(i0).ok_or_else(|| contradiction(p + 1))?;
        let next = if r.is_known(i0, Sign::Plus) && l_above {
            Some((r, l.bump()))
        } else if l.is_known(i0, Sign::Minus) && r_above {
            Some((r.bump(), l))
        } else if l.is_known(i0, Sign::Minus) && r.is_known(i0, Sign::Plus) {
            Some((r, l))
        } else {
            None
        };
        match next {
            Some((nl, nr)) => {
                if used == budget {
                    return Err(Error::StepBudget { budget, length: d });
                }
                used += 1;
                letters[p - 1] = nl;
                letters[p] = nr;
                p = p.max(2) - 1;
            }
            None => p += 1,
        }
    }
    Ok(used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frep;
    use crate::word::parse_word;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn w(text: &str) -> Word {
        parse_word(text).unwrap()
    }

    fn tagged(text: &str) -> TaggedWord {
        TaggedWord::from_word(&w(text))
    }

    fn nf(text: &str) -> Word {
        normalize(&w(text)).unwrap().0.strip()
    }

    #[test]
    fn redex_positions() {
        assert_eq!(
            redexes(&tagged("g7 g3 g3^-1 g0^-1 g4^-1"), ReductionKind::Order),
            vec![3]
        );
        let irreducible = tagged("g5 g2 g2^-1 g5^-1");
        assert!(redexes(&irreducible, ReductionKind::Separate).is_empty());
        assert!(redexes(&irreducible, ReductionKind::Order).is_empty());
        assert_eq!(
            redexes(&tagged("g3^-1 g6 g0^-1 g2 g4^-1"), ReductionKind::Separate),
            vec![1, 3]
        );
    }

    #[test]
    fn separate_steps() {
        // Larger index gains one; the generator ends up on the left.
        let t = step(&tagged("g3^-1 g6"), ReductionKind::Separate, 1).unwrap();
        assert_eq!(t.strip(), w("g7 g3^-1"));
        assert_eq!(t.origin_positions(), vec![2, 1]);

        let t = step(&tagged("g5^-1 g5"), ReductionKind::Separate, 1).unwrap();
        assert_eq!(t.strip(), w("g5 g5^-1"));
        assert_eq!(t.origin_positions(), vec![2, 1]);

        let t = step(&tagged("g6^-1 g3"), ReductionKind::Separate, 1).unwrap();
        assert_eq!(t.strip(), w("g3 g7^-1"));
    }

    #[test]
    fn order_steps() {
        let t = step(&tagged("g7 g3 g3^-1 g0^-1 g4^-1"), ReductionKind::Order, 3).unwrap();
        assert_eq!(t.strip(), w("g7 g3 g0^-1 g2^-1 g4^-1"));
        let t = step(&tagged("g2 g7"), ReductionKind::Order, 1).unwrap();
        assert_eq!(t.strip(), w("g6 g2"));
    }

    #[test]
    fn push_smallest_steps() {
        let t = tagged("g4 g1");
        assert_eq!(redexes(&t, ReductionKind::PushSmallest), vec![1]);
        assert_eq!(
            step(&t, ReductionKind::PushSmallest, 1).unwrap().strip(),
            w("g1 g5")
        );
        let t = tagged("g1^-1 g4");
        assert_eq!(
            step(&t, ReductionKind::PushSmallest, 1).unwrap().strip(),
            w("g5 g1^-1")
        );
        let t = tagged("g1^-1 g1");
        assert_eq!(
            step(&t, ReductionKind::PushSmallest, 1).unwrap().strip(),
            w("g1 g1^-1")
        );
        // The minimal generator to the left of a higher letter is parked.
        assert!(redexes(&tagged("g1 g4"), ReductionKind::PushSmallest).is_empty());
    }

    #[test]
    fn not_a_redex_is_an_error() {
        let t = tagged("g0 g1");
        for kind in [
            ReductionKind::Separate,
            ReductionKind::Order,
            ReductionKind::PushSmallest,
        ] {
            assert!(matches!(
                step(&t, kind, 1),
                Err(Error::NotARedex { .. })
            ));
        }
        assert!(step(&t, ReductionKind::Separate, 0).is_err());
        assert!(step(&t, ReductionKind::Separate, 2).is_err());
    }

    #[test]
    fn normalizes_the_five_letter_example() {
        assert_eq!(nf("g3^-1 g6 g0^-1 g2 g4^-1"), w("g7 g3 g0^-1 g2^-1 g4^-1"));
    }

    #[test]
    fn normalizes_the_eight_letter_example() {
        let (t, trace) = normalize(&w("g2 g0 g18^-1 g4^-1 g0^-1 g16 g3 g2^-1")).unwrap();
        assert_eq!(t.strip(), w("g16 g2 g3 g0 g0^-1 g3^-1 g2^-1 g16^-1"));
        assert_eq!(t.origin_positions(), vec![2, 4, 8, 6, 5, 1, 3, 7]);
        assert_eq!(
            trace.replay(&w("g2 g0 g18^-1 g4^-1 g0^-1 g16 g3 g2^-1")).unwrap(),
            t.strip()
        );
    }

    #[test]
    fn irreducible_words_are_fixed_with_empty_trace() {
        for text in ["g5 g2 g2^-1 g5^-1", "", "g3", "g7 g3 g0^-1 g2^-1 g4^-1"] {
            let (t, trace) = normalize(&w(text)).unwrap();
            assert_eq!(t.strip(), w(text));
            assert!(trace.steps.is_empty());
        }
    }

    #[test]
    fn normal_form_shape() {
        assert!(is_normal_form(&w("g7 g3 g0^-1 g2^-1 g4^-1")));
        assert!(is_normal_form(&w("")));
        assert!(!is_normal_form(&w("g3^-1 g6")));
        assert!(!is_normal_form(&w("g0 g2")));
        assert!(!is_normal_form(&w("g2^-1 g0^-1")));
        assert!(is_normal_form(&w("g5 g6 g2^-1 g3^-1")));
    }

    #[test]
    fn neutral_mirror_shape() {
        assert!(neutral_normal_form(&w("g16 g2 g3 g0 g0^-1 g3^-1 g2^-1 g16^-1")));
        assert!(!neutral_normal_form(&w("g7 g3 g0^-1 g2^-1 g4^-1")));
        assert!(neutral_normal_form(&w("")));
        assert!(!neutral_normal_form(&w("g1 g2^-1")));
    }

    #[test]
    fn rewriting_neutrality_agrees_with_the_oracle() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..400 {
            let len = rng.gen_range(0..=6);
            let letters = (0..len)
                .map(|_| Letter {
                    index: rng.gen_range(0..5),
                    sign: if rng.gen() { Sign::Plus } else { Sign::Minus },
                })
                .collect();
            let word = Word::new(letters);
            assert_eq!(
                is_neutral_by_rewriting(&word).unwrap(),
                frep::is_neutral(&word),
                "disagreement on {word}"
            );
        }
    }

    #[test]
    fn random_steps_preserve_evaluation() {
        let kinds = [
            ReductionKind::Separate,
            ReductionKind::Order,
            ReductionKind::PushSmallest,
        ];
        let mut rng = StdRng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 300 {
            let len = rng.gen_range(2..=6);
            let letters: Vec<Letter> = (0..len)
                .map(|_| Letter {
                    index: rng.gen_range(0..8),
                    sign: if rng.gen() { Sign::Plus } else { Sign::Minus },
                })
                .collect();
            let word = Word::new(letters);
            let t = TaggedWord::from_word(&word);
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let positions = redexes(&t, kind);
            if positions.is_empty() {
                continue;
            }
            let p = positions[rng.gen_range(0..positions.len())];
            let after = step(&t, kind, p).unwrap();
            assert_eq!(
                frep::eval_word(&word),
                frep::eval_word(&after.strip()),
                "{kind} step at {p} changed the element of {word}"
            );
            checked += 1;
        }
    }

    #[test]
    fn local_confluence_small() {
        let report = check_local_confluence(ReductionKind::Separate, 3, 4);
        assert_eq!(report.words_checked, 1 + 10 + 100 + 1000);
        assert!(report.counterexamples.is_empty());
        let report = check_local_confluence(ReductionKind::Order, 3, 4);
        assert!(report.counterexamples.is_empty());
        // Length 1 admits no pairs at all.
        let report = check_local_confluence(ReductionKind::Separate, 1, 6);
        assert_eq!(report.divergent_pairs, 0);
    }

    #[test]
    fn unique_normal_forms_small() {
        let report = check_unique_normal_form(3, 3);
        assert_eq!(report.words_checked, 1 + 8 + 64 + 512);
        assert!(report.counterexamples.is_empty());
        assert!(report.leftmost_mismatches.is_empty());
        assert!(report.tagged_ambiguous.is_empty());
    }

    #[test]
    fn all_orders_reach_the_published_normal_form() {
        let terminals = all_terminals(&w("g3^-1 g6 g0^-1 g2 g4^-1"));
        let stripped: BTreeSet<Word> = terminals.iter().map(|t| t.strip()).collect();
        assert_eq!(stripped.len(), 1);
        assert!(stripped.contains(&w("g7 g3 g0^-1 g2^-1 g4^-1")));
    }

    #[test]
    fn push_to_boundary_concrete() {
        // (g2, x, g0^-1, y, g1, g0) with unknowns x, y assumed above the
        // minimum: the zeros travel to the ends, passing letters gain 1.
        let mut letters = vec![
            SymLetter {
                index: SymIndex::Known(2),
                sign: Sign::Plus,
                origin: 1,
            },
            SymLetter {
                index: SymIndex::Unknown { slot: 0, offset: 0 },
                sign: Sign::Minus,
                origin: 2,
            },
            SymLetter {
                index: SymIndex::Known(0),
                sign: Sign::Minus,
                origin: 3,
            },
            SymLetter {
                index: SymIndex::Unknown { slot: 1, offset: 0 },
                sign: Sign::Minus,
                origin: 4,
            },
            SymLetter {
                index: SymIndex::Known(1),
                sign: Sign::Plus,
                origin: 5,
            },
            SymLetter {
                index: SymIndex::Known(0),
                sign: Sign::Plus,
                origin: 6,
            },
        ];
        push_to_boundary(&mut letters, 0).unwrap();
        assert!(letters[0].is_known(0, Sign::Plus));
        assert_eq!(letters[0].origin, 6);
        assert!(letters[5].is_known(0, Sign::Minus));
        assert_eq!(letters[5].origin, 3);
        assert_eq!(letters[1].index, SymIndex::Known(3));
        assert_eq!(letters[1].origin, 1);
        assert_eq!(letters[2].index, SymIndex::Unknown { slot: 0, offset: 1 });
        assert_eq!(letters[3].index, SymIndex::Unknown { slot: 1, offset: 2 });
        assert_eq!(letters[4].index, SymIndex::Known(3));
        assert_eq!(letters[4].origin, 5);
    }

    #[test]
    fn push_rejects_known_index_below_minimum() {
        let mut letters = vec![
            SymLetter {
                index: SymIndex::Known(1),
                sign: Sign::Plus,
                origin: 1,
            },
            SymLetter {
                index: SymIndex::Known(3),
                sign: Sign::Plus,
                origin: 2,
            },
        ];
        assert!(matches!(
            push_to_boundary(&mut letters, 2),
            Err(Error::InternalContradiction { .. })
        ));
    }

    proptest! {
        #[test]
        fn steps_preserve_length_and_sign_multiset(
            letters in proptest::collection::vec((0u64..10, proptest::bool::ANY), 0..8)
        ) {
            let word = Word::new(
                letters
                    .iter()
                    .map(|&(index, plus)| Letter {
                        index,
                        sign: if plus { Sign::Plus } else { Sign::Minus },
                    })
                    .collect(),
            );
            let (t, trace) = normalize(&word).unwrap();
            prop_assert_eq!(t.len(), word.len());
            prop_assert_eq!(t.strip().sign_sum(), word.sign_sum());
            let mut before: Vec<Sign> = word.iter().map(|l| l.sign).collect();
            let mut after: Vec<Sign> = t.strip().iter().map(|l| l.sign).collect();
            before.sort();
            after.sort();
            prop_assert_eq!(before, after);
            prop_assert!(trace.steps.len() <= step_budget(word.len()));
            prop_assert!(is_normal_form(&t.strip()));
            // Origins stay a permutation of 1..=d.
            let mut origins: Vec<usize> = t.letters().iter().map(|l| l.origin).collect();
            origins.sort();
            prop_assert_eq!(origins, (1..=word.len()).collect::<Vec<_>>());
            prop_assert_eq!(trace.replay(&word).unwrap(), t.strip());
        }

        #[test]
        fn order_steps_never_raise_the_index_sum(
            letters in proptest::collection::vec((0u64..10, proptest::bool::ANY), 2..8)
        ) {
            let word = Word::new(
                letters
                    .iter()
                    .map(|&(index, plus)| Letter {
                        index,
                        sign: if plus { Sign::Plus } else { Sign::Minus },
                    })
                    .collect(),
            );
            let t = TaggedWord::from_word(&word);
            for p in redexes(&t, ReductionKind::Order) {
                let after = step(&t, ReductionKind::Order, p).unwrap();
                prop_assert!(after.strip().index_sum() <= word.index_sum());
            }
        }
    }
}
