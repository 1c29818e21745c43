//! The permutation and pair partition a word induces, and the
//! reconstruction of neutral words from partial data.
//!
//! Normalizing a word moves each letter to a final position; the map
//! tau sending original positions to final positions is the word's
//! permutation. For a neutral word of length d the normal form pairs
//! position k with position d-k+1 (the mirrored indices cancel), so
//! pulling the rainbow partition {{k, d-k+1}} back through tau records
//! which generator letter cancels which inverse letter.
//!
//! Two reconstruction routines invert this data: [`complete_from_partition`]
//! recovers a neutral word from its sign pattern, its pair partition, and
//! the generator indices, by repeatedly peeling minimal-index letters;
//! [`complete_from_spaced`] recovers a neutral word from its permutation
//! alone when the given generator indices are spaced more than 3d apart,
//! by replaying the normalization symbolically and solving the mirror
//! equations.

use std::collections::{BTreeMap, BTreeSet};

use crate::frep;
use crate::rewrite::{self, SymIndex, SymLetter};
use crate::word::{Index, Letter, Sign, Word};
use crate::{Error, Result};

/// A permutation of {1..d}, stored as its one-line image array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(d: usize) -> Permutation {
        Permutation {
            images: (1..=d).collect(),
        }
    }

    /// Validates that images is a bijection on {1..d}.
    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &v in &images {
            if v == 0 || v > d || seen[v - 1] {
                return Err(Error::Domain {
                    message: format!("images {images:?} are not a bijection on 1..={d}"),
                });
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn d(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of the 1-based point l.
    pub fn apply(&self, l: usize) -> usize {
        self.images[l - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (l, &v) in self.images.iter().enumerate() {
            images[v - 1] = l + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// Nontrivial cycles, each rotated to start at its smallest element,
    /// listed in increasing order of those elements.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.d();
        let mut seen = vec![false; d];
        let mut cycles = Vec::new();
        for start in 1..=d {
            if seen[start - 1] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut next = self.apply(start);
            while next != start {
                seen[next - 1] = true;
                cycle.push(next);
                next = self.apply(next);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Canonical cycle notation, fixed points omitted; "id" when trivial.
    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "id".into();
        }
        cycles
            .iter()
            .map(|c| {
                let inner = c
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                format!("({inner})")
            })
            .collect()
    }
}

/// A partition of {1..d} into d/2 unordered pairs, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairPartition {
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    /// Validates that the pairs cover {1..d} disjointly.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<PairPartition> {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort();
        let d = pairs.len() * 2;
        let mut seen = vec![false; d];
        for &(a, b) in &pairs {
            if a == b || a == 0 || b > d || seen[a - 1] || seen[b - 1] {
                return Err(Error::Domain {
                    message: format!("pairs {pairs:?} do not partition 1..={d} into 2-blocks"),
                });
            }
            seen[a - 1] = true;
            seen[b - 1] = true;
        }
        Ok(PairPartition { pairs })
    }

    pub fn d(&self) -> usize {
        self.pairs.len() * 2
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The element paired with x.
    pub fn partner(&self, x: usize) -> usize {
        for &(a, b) in &self.pairs {
            if a == x {
                return b;
            }
            if b == x {
                return a;
            }
        }
        panic!("{x} is not a point of the partition");
    }
}

/// The rainbow partition {{1,d},{2,d-1},...,{d/2,d/2+1}}.
pub fn rainbow(d: usize) -> Result<PairPartition> {
    if d == 0 || d % 2 != 0 {
        return Err(Error::Domain {
            message: format!("the rainbow partition needs even d >= 2, got {d}"),
        });
    }
    PairPartition::from_pairs((1..=d / 2).map(|k| (k, d - k + 1)))
}

/// The partition with blocks {t(a), t(b)} for blocks {a,b} of p.
pub fn apply_to_partition(t: &Permutation, p: &PairPartition) -> Result<PairPartition> {
    if t.d() != p.d() {
        return Err(Error::SizeMismatch {
            expected: p.d(),
            got: t.d(),
        });
    }
    PairPartition::from_pairs(p.pairs().iter().map(|&(a, b)| (t.apply(a), t.apply(b))))
}

/// The permutation of the word: tau(l) is the final position of the
/// letter that started at position l, under the fixed leftmost
/// normalization strategy.
pub fn tau_of(w: &Word) -> Result<Permutation> {
    let (nf, _) = rewrite::normalize(w)?;
    Permutation::from_images(nf.origin_positions())
}

/// The pair partition of a neutral word: the rainbow pulled back through
/// tau, with blocks {tau^-1(k), tau^-1(d-k+1)}. Errors on odd length and
/// on words the evaluation oracle rejects as non-neutral.
pub fn partition_of(w: &Word) -> Result<PairPartition> {
    let d = w.len();
    if d % 2 != 0 {
        return Err(Error::OddLength { length: d });
    }
    if !frep::is_neutral(w) {
        return Err(Error::NotNeutral);
    }
    let tinv = tau_of(w)?.inverse();
    PairPartition::from_pairs((1..=d / 2).map(|k| (tinv.apply(k), tinv.apply(d - k + 1))))
}

/// A word with all signs known but only some indices: the completion
/// routines fill in the missing inverse indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialWord {
    signs: Vec<Sign>,
    indices: Vec<Option<Index>>,
}

impl PartialWord {
    pub fn new(signs: Vec<Sign>, indices: Vec<Option<Index>>) -> Result<PartialWord> {
        if signs.len() != indices.len() {
            return Err(Error::SizeMismatch {
                expected: signs.len(),
                got: indices.len(),
            });
        }
        Ok(PartialWord { signs, indices })
    }

    pub fn d(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn indices(&self) -> &[Option<Index>] {
        &self.indices
    }
}

/// Recovers the unique neutral word with the given pair partition from
/// its sign pattern and its generator indices.
///
/// Every block of pi must pair a generator position with a known index
/// against an inverse position with an unknown one. The minimal index of
/// a neutral word occurs in both halves of each block that carries it,
/// so the partners of minimal-index generators are filled with the
/// minimal index, every minimal letter is pushed to the boundary (letters
/// passed on the way gain 1, tracked as offsets on the unknowns), the
/// boundary letters are peeled off, and the strictly shorter core is
/// processed the same way. The result is validated against the
/// evaluation oracle and `partition_of` before being returned.
pub fn complete_from_partition(p: &PartialWord, pi: &PairPartition) -> Result<Word> {
    let d = p.d();
    if pi.d() != d {
        return Err(Error::SizeMismatch {
            expected: d,
            got: pi.d(),
        });
    }
    for &(a, b) in pi.pairs() {
        let (plus, minus) = match (p.signs[a - 1], p.signs[b - 1]) {
            (Sign::Plus, Sign::Minus) => (a, b),
            (Sign::Minus, Sign::Plus) => (b, a),
            _ => {
                return Err(Error::Inconsistent {
                    message: format!("block {{{a},{b}}} does not pair a generator with an inverse"),
                });
            }
        };
        if p.indices[plus - 1].is_none() {
            return Err(Error::Inconsistent {
                message: format!("generator position {plus} has no index"),
            });
        }
        if p.indices[minus - 1].is_some() {
            return Err(Error::Inconsistent {
                message: format!("inverse position {minus} already has an index"),
            });
        }
    }

    let mut solution: Vec<Option<Index>> = p.indices.clone();
    let mut work: Vec<SymLetter> = (1..=d)
        .map(|pos| SymLetter {
            index: match p.indices[pos - 1] {
                Some(v) => SymIndex::Known(v),
                None => SymIndex::Unknown {
                    slot: pos - 1,
                    offset: 0,
                },
            },
            sign: p.signs[pos - 1],
            origin: pos,
        })
        .collect();

    while !work.is_empty() {
        let i0 = work
            .iter()
            .filter(|l| l.sign == Sign::Plus)
            .map(|l| match l.index {
                SymIndex::Known(v) => v,
                SymIndex::Unknown { .. } => unreachable!("generator indices are always known"),
            })
            .min()
            .ok_or_else(|| Error::Inconsistent {
                message: "letters remain but no generator does".into(),
            })?;

        // Fill the partner of every minimal-index generator: its current
        // value equals i0, so its original value is i0 less the offset it
        // accumulated.
        let minimal_gens: Vec<usize> = work
            .iter()
            .enumerate()
            .filter(|(_, l)| l.sign == Sign::Plus && l.index == SymIndex::Known(i0))
            .map(|(j, _)| j)
            .collect();
        for j in minimal_gens {
            let partner_origin = pi.partner(work[j].origin);
            let k = work
                .iter()
                .position(|l| l.origin == partner_origin)
                .ok_or_else(|| Error::Inconsistent {
                    message: format!("the partner of position {} was peeled earlier", work[j].origin),
                })?;
            let SymIndex::Unknown { slot, offset } = work[k].index else {
                return Err(Error::Inconsistent {
                    message: format!("position {partner_origin} is paired with two generators"),
                });
            };
            if i0 < offset {
                return Err(Error::Inconsistent {
                    message: format!(
                        "position {partner_origin} would need the negative index {i0} - {offset}"
                    ),
                });
            }
            solution[slot] = Some(i0 - offset);
            work[k].index = SymIndex::Known(i0);
        }

        rewrite::push_to_boundary(&mut work, i0)?;

        let prefix = work
            .iter()
            .take_while(|l| l.index == SymIndex::Known(i0) && l.sign == Sign::Plus)
            .count();
        let suffix = work
            .iter()
            .rev()
            .take_while(|l| l.index == SymIndex::Known(i0) && l.sign == Sign::Minus)
            .count();
        if prefix == 0 || prefix != suffix || prefix + suffix > work.len() {
            return Err(Error::Inconsistent {
                message: format!(
                    "minimal-index letters do not balance: {prefix} generators vs {suffix} inverses"
                ),
            });
        }
        let stripped_gens: BTreeSet<usize> =
            work[..prefix].iter().map(|l| l.origin).collect();
        let stripped_invs: BTreeSet<usize> =
            work[work.len() - suffix..].iter().map(|l| l.origin).collect();
        for &origin in &stripped_gens {
            if !stripped_invs.contains(&pi.partner(origin)) {
                return Err(Error::Inconsistent {
                    message: format!(
                        "the partner of position {origin} did not reach the boundary with it"
                    ),
                });
            }
        }
        work.drain(work.len() - suffix..);
        work.drain(..prefix);
        if work
            .iter()
            .any(|l| matches!(l.index, SymIndex::Known(v) if v <= i0))
        {
            return Err(Error::Inconsistent {
                message: "a minimal-index letter survived the peel".into(),
            });
        }
    }

    let letters: Vec<Letter> = (0..d)
        .map(|k| {
            solution[k]
                .map(|index| Letter {
                    index,
                    sign: p.signs[k],
                })
                .ok_or_else(|| Error::Inconsistent {
                    message: format!("position {} was never determined", k + 1),
                })
        })
        .collect::<Result<_>>()?;
    let word = Word::new(letters);

    if !frep::is_neutral(&word) {
        return Err(Error::Inconsistent {
            message: format!(
                "completed word {word} is not neutral; the data does not come from a neutral word"
            ),
        });
    }
    if &partition_of(&word)? != pi {
        return Err(Error::Inconsistent {
            message: format!("completed word {word} pairs its letters differently"),
        });
    }
    Ok(word)
}

/// A letter during the symbolic normalization of a spaced word: its value
/// is the (possibly unknown) base of its rank plus a bookkept offset.
/// With ranks spaced more than 3d apart, every comparison between
/// distinct ranks is decided by rank alone (smaller rank = larger value),
/// and a rank can only tie with itself.
#[derive(Debug, Clone, Copy)]
struct RankLetter {
    rank: usize,
    offset: i64,
    sign: Sign,
}

/// Recovers the unique neutral word with permutation t from the indices
/// of its generator letters, which sit at positions t^-1(1)..t^-1(d/2)
/// and must decrease by more than 3d per rank. The normalization is
/// replayed symbolically, rank by rank; the mirror equations of the
/// resulting normal form determine the inverse indices. The result is
/// validated with `tau_of` and the evaluation oracle.
pub fn complete_from_spaced(t: &Permutation, generators: &BTreeMap<usize, Index>) -> Result<Word> {
    let d = t.d();
    if d % 2 != 0 {
        return Err(Error::OddLength { length: d });
    }
    if d == 0 {
        return Ok(Word::empty());
    }
    let half = d / 2;
    let tinv = t.inverse();
    let gen_pos: Vec<usize> = (1..=half).map(|l| tinv.apply(l)).collect();
    let inv_pos: Vec<usize> = (1..=half).map(|l| tinv.apply(d - l + 1)).collect();

    let expected: BTreeSet<usize> = gen_pos.iter().copied().collect();
    let got: BTreeSet<usize> = generators.keys().copied().collect();
    if expected != got {
        return Err(Error::Inconsistent {
            message: format!(
                "generator indices must be given exactly at positions {expected:?}, got {got:?}"
            ),
        });
    }
    let base: Vec<Index> = gen_pos.iter().map(|pos| generators[pos]).collect();
    for l in 1..half {
        if u128::from(base[l]) + 3 * d as u128 >= u128::from(base[l - 1]) {
            return Err(Error::SpacingViolated {
                message: format!(
                    "rank {} index {} must be below rank {} index {} by more than 3d = {}",
                    l + 1,
                    base[l],
                    l,
                    base[l - 1],
                    3 * d
                ),
            });
        }
    }

    let mut letters = vec![None; d];
    for l in 1..=half {
        letters[gen_pos[l - 1] - 1] = Some(RankLetter {
            rank: l,
            offset: 0,
            sign: Sign::Plus,
        });
        letters[inv_pos[l - 1] - 1] = Some(RankLetter {
            rank: l,
            offset: 0,
            sign: Sign::Minus,
        });
    }
    let mut letters: Vec<RankLetter> = letters
        .into_iter()
        .map(|l| l.expect("every position holds a rank letter"))
        .collect();

    // Symbolic composed reduction, leftmost redex first. Rules mirror the
    // concrete ones with "greater index" decided by "smaller rank"; equal
    // ranks only meet as an inverse directly left of its own generator,
    // whose indices agree at that moment, the unchanged swap.
    let budget = rewrite::step_budget(d);
    let mut used = 0;
    let max_offset = d as i64;
    for phase in [ReductionPhase::Separate, ReductionPhase::Order] {
        let mut p = 1;
        while p < d {
            let l = letters[p - 1];
            let r = letters[p];
            let next: Option<(RankLetter, RankLetter)> = match phase {
                ReductionPhase::Separate => {
                    if l.sign == Sign::Minus && r.sign == Sign::Plus {
                        Some(if l.rank == r.rank {
                            (r, l)
                        } else if l.rank < r.rank {
                            // The inverse carries the larger value.
                            (r, bump_rank(l, 1))
                        } else {
                            (bump_rank(r, 1), l)
                        })
                    } else {
                        None
                    }
                }
                ReductionPhase::Order => match (l.sign, r.sign) {
                    // A generator pair rewrites when the right value is
                    // larger; it loses one crossing left.
                    (Sign::Plus, Sign::Plus) if r.rank < l.rank => {
                        Some((bump_rank(r, -1), l))
                    }
                    // An inverse pair rewrites when the left value is
                    // larger; it loses one crossing right.
                    (Sign::Minus, Sign::Minus) if l.rank < r.rank => {
                        Some((r, bump_rank(l, -1)))
                    }
                    _ => None,
                },
            };
            match next {
                Some((nl, nr)) => {
                    if used == budget {
                        return Err(Error::StepBudget { budget, length: d });
                    }
                    used += 1;
                    if nl.offset.abs() > max_offset || nr.offset.abs() > max_offset {
                        return Err(Error::InternalContradiction {
                            message: "a symbolic offset left [-d, d] during normalization".into(),
                        });
                    }
                    letters[p - 1] = nl;
                    letters[p] = nr;
                    p = p.max(2) - 1;
                }
                None => p += 1,
            }
        }
    }

    // Normal form: generators of ranks 1..=half in order, then inverses
    // of ranks half..=1; mirror positions carry equal indices.
    let mut gen_offset = vec![0i64; half + 1];
    let mut inv_offset = vec![0i64; half + 1];
    for (k, letter) in letters.iter().enumerate() {
        let (expected_rank, expected_sign) = if k < half {
            (k + 1, Sign::Plus)
        } else {
            (d - k, Sign::Minus)
        };
        if letter.rank != expected_rank || letter.sign != expected_sign {
            return Err(Error::InternalContradiction {
                message: format!("symbolic normal form is misordered at position {}", k + 1),
            });
        }
        if letter.offset.abs() > (half as i64) {
            return Err(Error::InternalContradiction {
                message: format!(
                    "final offset {} at position {} leaves [-d/2, d/2]",
                    letter.offset,
                    k + 1
                ),
            });
        }
        match letter.sign {
            Sign::Plus => gen_offset[letter.rank] = letter.offset,
            Sign::Minus => inv_offset[letter.rank] = letter.offset,
        }
    }

    let mut word_letters = vec![Letter::gen(0); d];
    for l in 1..=half {
        // j(l) = base + gen offset = inverse base + inverse offset.
        let j = base[l - 1]
            .checked_add_signed(gen_offset[l])
            .ok_or_else(|| Error::InternalContradiction {
                message: format!("normal-form index of rank {l} is negative"),
            })?;
        let inv_base = j.checked_add_signed(-inv_offset[l]).ok_or_else(|| {
            Error::InternalContradiction {
                message: format!("inverse index of rank {l} is negative"),
            }
        })?;
        word_letters[gen_pos[l - 1] - 1] = Letter::gen(base[l - 1]);
        word_letters[inv_pos[l - 1] - 1] = Letter::inv(inv_base);
    }
    let word = Word::new(word_letters);

    if !frep::is_neutral(&word) {
        return Err(Error::InternalContradiction {
            message: format!("completed word {word} is not neutral"),
        });
    }
    let achieved = tau_of(&word)?;
    if &achieved != t {
        return Err(Error::InternalContradiction {
            message: format!("completed word {word} has permutation {achieved:?}"),
        });
    }
    Ok(word)
}

#[derive(Clone, Copy, PartialEq)]
enum ReductionPhase {
    Separate,
    Order,
}

fn bump_rank(letter: RankLetter, delta: i64) -> RankLetter {
    RankLetter {
        offset: letter.offset + delta,
        ..letter
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn w(text: &str) -> Word {
        parse_word(text).unwrap()
    }

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    fn pp(pairs: &[(usize, usize)]) -> PairPartition {
        PairPartition::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn rainbow_partitions() {
        assert_eq!(rainbow(2).unwrap(), pp(&[(1, 2)]));
        assert_eq!(rainbow(4).unwrap(), pp(&[(1, 4), (2, 3)]));
        assert_eq!(rainbow(8).unwrap(), pp(&[(1, 8), (2, 7), (3, 6), (4, 5)]));
        assert!(rainbow(0).is_err());
        assert!(rainbow(5).is_err());
    }

    #[test]
    fn permutation_basics() {
        let t = perm(&[2, 4, 8, 6, 5, 1, 3, 7]);
        assert_eq!(t.cycle_string(), "(1,2,4,6)(3,8,7)");
        assert_eq!(t.inverse().apply(2), 1);
        assert!(Permutation::identity(5).is_identity());
        assert_eq!(Permutation::identity(5).cycle_string(), "id");
        assert!(Permutation::from_images(vec![1, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
    }

    #[test]
    fn tau_of_the_eight_letter_example() {
        let t = tau_of(&w("g2 g0 g18^-1 g4^-1 g0^-1 g16 g3 g2^-1")).unwrap();
        assert_eq!(t.images(), &[2, 4, 8, 6, 5, 1, 3, 7]);
        assert_eq!(t.cycle_string(), "(1,2,4,6)(3,8,7)");
    }

    #[test]
    fn tau_of_fixed_points_and_swaps() {
        assert!(tau_of(&w("g7 g3 g0^-1 g2^-1 g4^-1")).unwrap().is_identity());
        assert_eq!(tau_of(&w("g5^-1 g5")).unwrap().images(), &[2, 1]);
        assert!(tau_of(&Word::empty()).unwrap().is_identity());
    }

    #[test]
    fn applying_permutations_to_partitions() {
        let p = pp(&[(1, 8), (2, 5), (3, 6), (4, 7)]);
        let t = perm(&[2, 4, 8, 6, 5, 1, 3, 7]);
        assert_eq!(apply_to_partition(&t, &p).unwrap(), rainbow(8).unwrap());
        assert_eq!(
            apply_to_partition(&Permutation::identity(8), &p).unwrap(),
            p
        );
        let swap = perm(&[2, 1]);
        assert_eq!(
            apply_to_partition(&swap, &pp(&[(1, 2)])).unwrap(),
            pp(&[(1, 2)])
        );
        assert!(apply_to_partition(&swap, &p).is_err());
    }

    #[test]
    fn partition_of_examples() {
        assert_eq!(
            partition_of(&w("g2 g0 g18^-1 g4^-1 g0^-1 g16 g3 g2^-1")).unwrap(),
            pp(&[(1, 8), (2, 5), (3, 6), (4, 7)])
        );
        assert_eq!(partition_of(&w("g5 g5^-1")).unwrap(), pp(&[(1, 2)]));
        assert_eq!(
            partition_of(&w("g0 g75 g25^-1 g49^-1 g73^-1 g25 g50 g0^-1")).unwrap(),
            pp(&[(1, 8), (2, 5), (3, 6), (4, 7)])
        );
    }

    #[test]
    fn partition_of_rejects_bad_words() {
        assert!(matches!(
            partition_of(&w("g1 g2 g3")),
            Err(Error::OddLength { length: 3 })
        ));
        assert!(matches!(partition_of(&w("g0 g1")), Err(Error::NotNeutral)));
    }

    #[test]
    fn completes_the_six_letter_example() {
        let p = PartialWord::new(
            vec![
                Sign::Plus,
                Sign::Minus,
                Sign::Minus,
                Sign::Minus,
                Sign::Plus,
                Sign::Plus,
            ],
            vec![Some(2), None, None, None, Some(1), Some(0)],
        )
        .unwrap();
        let pi = pp(&[(1, 4), (2, 5), (3, 6)]);
        assert_eq!(
            complete_from_partition(&p, &pi).unwrap(),
            w("g2 g2^-1 g0^-1 g1^-1 g1 g0")
        );
    }

    #[test]
    fn completes_inverse_pairs() {
        for k in [0, 7] {
            let p = PartialWord::new(vec![Sign::Plus, Sign::Minus], vec![Some(k), None]).unwrap();
            let word = complete_from_partition(&p, &pp(&[(1, 2)])).unwrap();
            assert_eq!(word, Word::new(vec![Letter::gen(k), Letter::inv(k)]));
        }
    }

    #[test]
    fn completion_round_trips_the_eight_letter_example() {
        let original = w("g2 g0 g18^-1 g4^-1 g0^-1 g16 g3 g2^-1");
        let pi = partition_of(&original).unwrap();
        let partial = PartialWord::new(
            original.iter().map(|l| l.sign).collect(),
            original
                .iter()
                .map(|l| (l.sign == Sign::Plus).then_some(l.index))
                .collect(),
        )
        .unwrap();
        assert_eq!(complete_from_partition(&partial, &pi).unwrap(), original);
    }

    #[test]
    fn completion_rejects_inconsistent_data() {
        // Two generators in one block.
        let p = PartialWord::new(
            vec![Sign::Plus, Sign::Plus, Sign::Minus, Sign::Minus],
            vec![Some(0), Some(1), None, None],
        )
        .unwrap();
        assert!(matches!(
            complete_from_partition(&p, &pp(&[(1, 2), (3, 4)])),
            Err(Error::Inconsistent { .. })
        ));
        // Shape-valid data no neutral word realizes: the only candidate,
        // g0 g0 g0^-1 g0^-1, pairs its letters nested, not crossing.
        let p = PartialWord::new(
            vec![Sign::Plus, Sign::Plus, Sign::Minus, Sign::Minus],
            vec![Some(0), Some(0), None, None],
        )
        .unwrap();
        assert!(matches!(
            complete_from_partition(&p, &pp(&[(1, 3), (2, 4)])),
            Err(Error::Inconsistent { .. })
        ));
    }

    #[test]
    fn spaced_completion_of_the_published_example() {
        let t = perm(&[4, 1, 6, 7, 8, 3, 2, 5]);
        assert_eq!(t.cycle_string(), "(1,4,7,2)(3,6)(5,8)");
        let generators = BTreeMap::from([(1, 0), (2, 75), (6, 25), (7, 50)]);
        assert_eq!(
            complete_from_spaced(&t, &generators).unwrap(),
            w("g0 g75 g25^-1 g49^-1 g73^-1 g25 g50 g0^-1")
        );
    }

    #[test]
    fn spaced_completion_length_two() {
        let word =
            complete_from_spaced(&Permutation::identity(2), &BTreeMap::from([(1, 9)])).unwrap();
        assert_eq!(word, w("g9 g9^-1"));
        let word = complete_from_spaced(&perm(&[2, 1]), &BTreeMap::from([(2, 9)])).unwrap();
        assert_eq!(word, w("g9^-1 g9"));
    }

    #[test]
    fn spaced_completion_rejects_bad_input() {
        let t = perm(&[4, 1, 6, 7, 8, 3, 2, 5]);
        // Too close together: rank gaps must exceed 3d = 24.
        let generators = BTreeMap::from([(1, 0), (2, 72), (6, 24), (7, 48)]);
        assert!(matches!(
            complete_from_spaced(&t, &generators),
            Err(Error::SpacingViolated { .. })
        ));
        // Wrong positions.
        let generators = BTreeMap::from([(1, 0), (2, 75), (6, 25), (8, 50)]);
        assert!(matches!(
            complete_from_spaced(&t, &generators),
            Err(Error::Inconsistent { .. })
        ));
    }

    #[test]
    fn spaced_completion_agrees_with_tau() {
        // All six permutations of S_3 doubled into S_6 shapes is overkill
        // here; spot-check a couple of d = 4 permutations with wide bases.
        for images in [[1, 2, 3, 4], [2, 1, 4, 3], [3, 1, 2, 4], [1, 3, 2, 4]] {
            let t = perm(&images);
            let tinv = t.inverse();
            let generators =
                BTreeMap::from([(tinv.apply(1), 100), (tinv.apply(2), 50)]);
            let word = complete_from_spaced(&t, &generators).unwrap();
            assert_eq!(tau_of(&word).unwrap(), t);
            assert!(frep::is_neutral(&word));
        }
    }
}
