//! Position types, their induced order, and monotonicity of substitutions.
//!
//! Writing the fixed point as u = φ(u), every position n of u lies inside
//! the image of exactly one earlier letter: u[n] = φ(a)[p] for a parent
//! letter a and a 1-based offset p. The pair τ(n) = (a, p) is the
//! *position type* of n, and there are k = Σ_a |φ(a)| types in total.
//!
//! For well-behaved substitutions, the lexicographic order of the shifted
//! sequences T^n u depends only on τ(n); [`type_order`] probes that claim on
//! sampled occurrences and reports either the induced total order on types,
//! a counterexample chain (two occurrences of one type strictly separated
//! by an occurrence of another), or an honest "sample depth too small".
//!
//! The monotonicity machinery decides whether u < v implies φ(u) < φ(v)
//! exactly, by comparing ultimately periodic extremal extensions: the
//! supremum and infimum of {φ(w) : w infinite} are attained by single-letter
//! periodic words φ(c)^ω, so all the comparisons reduce to finite checks
//! with explicit agreement bounds.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::word::{compare_shifts, Morphism, ShiftOrder, WordStream};

/// How many earliest occurrences of each type the order scan samples.
pub const SAMPLES_PER_TYPE: usize = 8;

/// The pair (parent letter, 1-based offset) locating a position inside the
/// image that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionType {
    /// Parent letter a whose image covers the position.
    pub letter: u8,
    /// Offset p within φ(a), starting at 1.
    pub index: usize,
}

impl std::fmt::Display for PositionType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.letter, self.index)
    }
}

/// Every position type of `m`, in (letter, index) order.
pub fn all_types(m: &Morphism) -> Vec<PositionType> {
    let mut out = Vec::new();
    for letter in 0..m.alphabet_size() as u8 {
        for index in 1..=m.image(letter).len() {
            out.push(PositionType { letter, index });
        }
    }
    out
}

/// Types of the first `count` positions of the fixed point.
///
/// Walks u = φ(u): the images of u's own letters tile u, so position n
/// falls at offset p inside φ(u[k]) for the unique k with
/// Σ_{l<k} |φ(u[l])| ≤ n.
pub fn position_types(stream: &mut WordStream, count: usize) -> Vec<PositionType> {
    let mut out = Vec::with_capacity(count);
    let mut parent = 0usize;
    while out.len() < count {
        let letter = stream.letter(parent);
        let image_len = stream.morphism().image(letter).len();
        for index in 1..=image_len {
            if out.len() == count {
                break;
            }
            out.push(PositionType { letter, index });
        }
        parent += 1;
    }
    out
}

/// Occurrence positions of each type within the first `prefix_len`
/// positions, keyed in canonical (letter, index) order.
pub fn type_occurrences(
    stream: &mut WordStream,
    prefix_len: usize,
) -> Vec<(PositionType, Vec<usize>)> {
    let types = position_types(stream, prefix_len);
    let mut map: HashMap<PositionType, Vec<usize>> = HashMap::new();
    for (n, t) in types.into_iter().enumerate() {
        map.entry(t).or_default().push(n);
    }
    all_types(stream.morphism())
        .into_iter()
        .map(|t| {
            let occ = map.remove(&t).unwrap_or_default();
            (t, occ)
        })
        .collect()
}

/// A chain T^x < T^y < T^z whose outer positions share a type that differs
/// from the middle one — direct evidence that shift order does not factor
/// through position types.
pub type WitnessChain = (usize, usize, usize);

/// Outcome of probing whether shift order factors through position types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separability {
    /// All sampled comparisons are consistent with a total order on types.
    Separable,
    /// A witness chain contradicts any such order.
    Inseparable {
        /// Chain (x, y, z) with T^x < T^y < T^z, τ(x) = τ(z) ≠ τ(y),
        /// minimal by sorted index triple among all sampled witnesses.
        witness: WitnessChain,
    },
    /// Some sampled pair could not be ordered within the comparison depth.
    UnknownAtDepth {
        /// The two types whose relation stayed unresolved.
        left: PositionType,
        right: PositionType,
    },
}

/// The (attempted) order of position types under the shift order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeTable {
    /// All types: in increasing shift order if separable, otherwise in
    /// canonical (letter, index) order.
    pub types: Vec<PositionType>,
    /// What the sampled comparisons established.
    pub verdict: Separability,
    /// Prefix length the occurrence samples were drawn from.
    pub prefix_len: usize,
    /// Letter-comparison depth used for each shift comparison.
    pub depth: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PairRelation {
    Less,
    Greater,
    Mixed,
    Unknown,
}

fn sample_relation(
    stream: &mut WordStream,
    xs: &[usize],
    ys: &[usize],
    depth: usize,
) -> Result<PairRelation> {
    let mut seen_less = false;
    let mut seen_greater = false;
    let mut seen_unresolved = false;
    for &x in xs {
        for &y in ys {
            match compare_shifts(stream, x, y, depth)? {
                ShiftOrder::Less => seen_less = true,
                ShiftOrder::Greater => seen_greater = true,
                ShiftOrder::Unresolved { .. } => seen_unresolved = true,
            }
            if seen_less && seen_greater {
                return Ok(PairRelation::Mixed);
            }
        }
    }
    Ok(match (seen_less, seen_greater, seen_unresolved) {
        (_, _, true) => PairRelation::Unknown,
        (true, false, false) => PairRelation::Less,
        (false, true, false) => PairRelation::Greater,
        _ => unreachable!("nonempty samples yield at least one outcome"),
    })
}

/// Collects all witness chains for a contradictory type pair and returns
/// the one minimal by sorted index triple.
fn best_witness(
    stream: &mut WordStream,
    occ_s: &[usize],
    occ_t: &[usize],
    depth: usize,
) -> Result<Option<WitnessChain>> {
    let mut lt = |a: usize, b: usize| -> Result<bool> {
        Ok(matches!(compare_shifts(stream, a, b, depth)?, ShiftOrder::Less))
    };
    let mut best: Option<([usize; 3], WitnessChain)> = None;
    let consider = |chain: WitnessChain, best: &mut Option<([usize; 3], WitnessChain)>| {
        let mut key = [chain.0, chain.1, chain.2];
        key.sort_unstable();
        if best.as_ref().is_none_or(|(k, c)| (key, chain) < (*k, *c)) {
            *best = Some((key, chain));
        }
    };
    // Outer positions from one type, middle from the other, both ways round.
    for (outer, middle) in [(occ_s, occ_t), (occ_t, occ_s)] {
        for &x in outer {
            for &z in outer {
                if x == z {
                    continue;
                }
                for &y in middle {
                    if lt(x, y)? && lt(y, z)? {
                        consider((x, y, z), &mut best);
                    }
                }
            }
        }
    }
    Ok(best.map(|(_, chain)| chain))
}

/// Probes the order of position types on sampled occurrences.
///
/// Each type contributes its [`SAMPLES_PER_TYPE`] earliest occurrences in
/// the first `prefix_len` positions; every cross-type pair of samples is
/// compared to `depth` letters. A consistent outcome yields the total order;
/// a contradiction yields a canonical witness chain; an unresolved pair
/// (with no contradiction elsewhere) yields [`Separability::UnknownAtDepth`].
///
/// # Errors
///
/// [`Error::TypeMissing`] if some type never occurs in the prefix (for a
/// primitive substitution this means `prefix_len` is too small).
pub fn type_order(
    stream: &mut WordStream,
    prefix_len: usize,
    depth: usize,
) -> Result<TypeTable> {
    let occurrences = type_occurrences(stream, prefix_len);
    let mut samples: Vec<(PositionType, Vec<usize>)> = Vec::with_capacity(occurrences.len());
    for (t, mut occ) in occurrences {
        if occ.is_empty() {
            return Err(Error::TypeMissing { letter: t.letter, index: t.index });
        }
        occ.truncate(SAMPLES_PER_TYPE);
        samples.push((t, occ));
    }

    let k = samples.len();
    let mut relations = vec![vec![PairRelation::Unknown; k]; k];
    let mut contradictions: Vec<(usize, usize)> = Vec::new();
    let mut unknown_pair: Option<(usize, usize)> = None;
    for i in 0..k {
        for j in i + 1..k {
            let rel = sample_relation(stream, &samples[i].1, &samples[j].1, depth)?;
            match rel {
                PairRelation::Mixed => contradictions.push((i, j)),
                PairRelation::Unknown => {
                    if unknown_pair.is_none() {
                        unknown_pair = Some((i, j));
                    }
                }
                _ => {}
            }
            relations[i][j] = rel;
            relations[j][i] = match rel {
                PairRelation::Less => PairRelation::Greater,
                PairRelation::Greater => PairRelation::Less,
                other => other,
            };
        }
    }

    let canonical: Vec<PositionType> = samples.iter().map(|(t, _)| *t).collect();
    if !contradictions.is_empty() {
        let mut best: Option<([usize; 3], WitnessChain)> = None;
        for &(i, j) in &contradictions {
            if let Some(chain) = best_witness(stream, &samples[i].1, &samples[j].1, depth)? {
                let mut key = [chain.0, chain.1, chain.2];
                key.sort_unstable();
                if best.as_ref().is_none_or(|(k2, c2)| (key, chain) < (*k2, *c2)) {
                    best = Some((key, chain));
                }
            }
        }
        let verdict = match best {
            Some((_, witness)) => Separability::Inseparable { witness },
            // A mixed pair without a definite chain can only arise from
            // unresolved middle comparisons: report the depth exhaustion.
            None => {
                let (i, j) = contradictions[0];
                Separability::UnknownAtDepth { left: canonical[i], right: canonical[j] }
            }
        };
        return Ok(TypeTable { types: canonical, verdict, prefix_len, depth });
    }
    if let Some((i, j)) = unknown_pair {
        return Ok(TypeTable {
            types: canonical.clone(),
            verdict: Separability::UnknownAtDepth { left: canonical[i], right: canonical[j] },
            prefix_len,
            depth,
        });
    }

    // Every pair resolved consistently: sort by the relation and verify
    // that the result is transitive across all pairs.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| match relations[i][j] {
        PairRelation::Less => Ordering::Less,
        PairRelation::Greater => Ordering::Greater,
        _ => unreachable!("all pairs resolved"),
    });
    for a in 0..k {
        for b in a + 1..k {
            if relations[order[a]][order[b]] != PairRelation::Less {
                // A cycle among individually-consistent pairs: the samples
                // are not jointly orderable; more depth or more samples
                // would be needed to extract a canonical witness.
                return Ok(TypeTable {
                    types: canonical.clone(),
                    verdict: Separability::UnknownAtDepth {
                        left: canonical[order[a]],
                        right: canonical[order[b]],
                    },
                    prefix_len,
                    depth,
                });
            }
        }
    }
    let types: Vec<PositionType> = order.into_iter().map(|i| canonical[i]).collect();
    Ok(TypeTable { types, verdict: Separability::Separable, prefix_len, depth })
}

/// Which end of the image set {φ(w) : w infinite} to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    /// Lexicographically least image.
    Min,
    /// Lexicographically greatest image.
    Max,
}

/// The least or greatest element of {φ(w) : w infinite}, with its
/// eventual-period certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalWord {
    /// The first letters of the extremal image.
    pub prefix: Vec<u8>,
    /// The letter c whose periodic image φ(c)^ω attains the extremum.
    pub cycle_letter: u8,
    /// Length of the non-periodic head (always 0: the extremum is attained
    /// by a purely periodic word, because any extremal image x satisfies
    /// x = φ(c)·x for the letter c starting its preimage).
    pub preperiod: usize,
    /// Period length |φ(c)|.
    pub period: usize,
}

fn periodic_letter(block: &[u8], i: usize) -> u8 {
    block[i % block.len()]
}

/// Compares φ(c)^ω with φ(c')^ω; equality is certified by agreement up to
/// the sum of the periods.
fn compare_periodic(m: &Morphism, c: u8, c2: u8) -> Ordering {
    let a = m.image(c);
    let b = m.image(c2);
    let bound = a.len() + b.len();
    for i in 0..bound {
        match periodic_letter(a, i).cmp(&periodic_letter(b, i)) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

fn extremal_letter(m: &Morphism, which: Extremum) -> u8 {
    let mut best = 0u8;
    for c in 1..m.alphabet_size() as u8 {
        let cmp = compare_periodic(m, c, best);
        let improves = match which {
            Extremum::Min => cmp == Ordering::Less,
            Extremum::Max => cmp == Ordering::Greater,
        };
        if improves {
            best = c;
        }
    }
    best
}

/// Computes the extremal image word to `depth` letters.
///
/// The infimum and supremum of {φ(w) : w infinite} are always of the form
/// φ(c)^ω: an extremal image x must satisfy x = φ(c₁)·x′ with x′ again
/// extremal, and the exchange of any two distinct leading letters shows
/// c₁ can be chosen constant. So the search reduces to comparing the q
/// periodic candidates, each pair to the sum of their periods.
pub fn extremal_image_word(m: &Morphism, which: Extremum, depth: usize) -> ExtremalWord {
    let c = extremal_letter(m, which);
    let block = m.image(c);
    let prefix = (0..depth).map(|i| periodic_letter(block, i)).collect();
    ExtremalWord { prefix, cycle_letter: c, preperiod: 0, period: block.len() }
}

/// A counterexample to monotonicity: two finite words in definite
/// lexicographic order whose images compare the wrong way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityWitness {
    /// The smaller word u (differs from v at some index, so every infinite
    /// extension of u stays below every extension of v).
    pub smaller: Vec<u8>,
    /// The larger word v.
    pub larger: Vec<u8>,
    /// How φ(u) relates to φ(v): `Greater` for a strict reversal, `Equal`
    /// when the images coincide (which already refutes *strict* order
    /// preservation).
    pub image_cmp: Ordering,
}

/// Whether the substitution preserves strict lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Monotonicity {
    /// u < v implies φ(u) < φ(v) for all infinite words — certified
    /// exactly via extremal extensions.
    Monotone,
    /// Order is not strictly preserved; see the witness.
    NotMonotone {
        /// A minimal concrete counterexample.
        witness: MonotonicityWitness,
    },
    /// The caller's depth was below the certified agreement bound.
    UnknownAtDepth {
        /// The insufficient depth.
        depth: usize,
    },
}

/// Letter of the ultimately periodic word `prefix · block^ω` at index i.
fn up_letter(prefix: &[u8], block: &[u8], i: usize) -> u8 {
    if i < prefix.len() {
        prefix[i]
    } else {
        periodic_letter(block, i - prefix.len())
    }
}

/// Definite lexicographic comparison of finite words: `Some(ordering)` when
/// they differ at an index both contain, `None` when one is a prefix of the
/// other (so extensions could still go either way).
fn definite_cmp(a: &[u8], b: &[u8]) -> Option<Ordering> {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            Ordering::Equal => {}
            other => return Some(other),
        }
    }
    if a.len() == b.len() {
        Some(Ordering::Equal)
    } else {
        None
    }
}

/// Enumerates suffix extensions (x, y) in order of total length, then |x|,
/// then lexicographically, and returns the first witness pair
/// (u, v) = (a·x, b·y) whose images are definitely `target`-related.
fn minimal_witness(
    m: &Morphism,
    a: u8,
    b: u8,
    target: Ordering,
    max_total: usize,
) -> Option<MonotonicityWitness> {
    let q = m.alphabet_size() as u8;
    // All words over the alphabet of the given length, lexicographic.
    fn words(q: u8, len: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * usize::from(q));
            for w in &out {
                for c in 0..q {
                    let mut ext = w.clone();
                    ext.push(c);
                    next.push(ext);
                }
            }
            out = next;
        }
        out
    }
    for total in 0..=max_total {
        for xl in 0..=total {
            let yl = total - xl;
            for x in words(q, xl) {
                let mut u = vec![a];
                u.extend_from_slice(&x);
                let fu = m.apply(&u);
                for y in words(q, yl) {
                    let mut v = vec![b];
                    v.extend_from_slice(&y);
                    let fv = m.apply(&v);
                    if definite_cmp(&fu, &fv) == Some(target) {
                        return Some(MonotonicityWitness {
                            smaller: u.clone(),
                            larger: v,
                            image_cmp: target,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Decides strict order preservation exactly.
///
/// For each letter pair a < b, the worst case over infinite words is
/// φ(a)·S_max against φ(b)·S_min, where S_max and S_min are the extremal
/// image words (single-letter periodic). Both sides are ultimately periodic
/// with explicit preperiods and periods, so comparing them to
/// `max(preperiods) + period₁ + period₂` letters is conclusive. `depth`
/// below that bound yields [`Monotonicity::UnknownAtDepth`].
pub fn monotonicity_verdict(m: &Morphism, depth: usize) -> Monotonicity {
    let q = m.alphabet_size() as u8;
    let c_max = extremal_letter(m, Extremum::Max);
    let c_min = extremal_letter(m, Extremum::Min);
    let block_max = m.image(c_max).to_vec();
    let block_min = m.image(c_min).to_vec();

    for a in 0..q {
        for b in a + 1..q {
            let pre_a = m.image(a).to_vec();
            let pre_b = m.image(b).to_vec();
            let needed =
                pre_a.len().max(pre_b.len()) + block_max.len() + block_min.len();
            if depth < needed {
                return Monotonicity::UnknownAtDepth { depth };
            }
            let mut verdict = Ordering::Equal;
            for i in 0..needed {
                let x = up_letter(&pre_a, &block_max, i);
                let y = up_letter(&pre_b, &block_min, i);
                match x.cmp(&y) {
                    Ordering::Equal => {}
                    other => {
                        verdict = other;
                        break;
                    }
                }
            }
            if verdict == Ordering::Less {
                continue; // sup φ(a·…) < inf φ(b·…): this pair is safe.
            }
            // Violation found; extract the minimal definite witness. The
            // enumeration bound is generous — the violating index is below
            // `needed`, and covering it takes at most that many extension
            // letters on each side.
            let target = if verdict == Ordering::Greater {
                Ordering::Greater
            } else {
                Ordering::Equal
            };
            if let Some(witness) = minimal_witness(m, a, b, target, 4) {
                return Monotonicity::NotMonotone { witness };
            }
            let fallback = minimal_witness(m, a, b, target, needed * 2);
            if let Some(witness) = fallback {
                return Monotonicity::NotMonotone { witness };
            }
            // Equality of the infinite extremal extensions without any
            // finite equal-image pair (length lattices never align): report
            // the periodic words themselves, compared over one full cycle.
            let lcm_len = {
                let (mut x, mut y) = (block_max.len(), block_min.len());
                while y != 0 {
                    let t = x % y;
                    x = y;
                    y = t;
                }
                block_max.len() / x * block_min.len()
            };
            let mut u = vec![a];
            for _ in 0..lcm_len / block_max.len() {
                u.push(c_max);
            }
            let mut v = vec![b];
            for _ in 0..lcm_len / block_min.len() {
                v.push(c_min);
            }
            return Monotonicity::NotMonotone {
                witness: MonotonicityWitness { smaller: u, larger: v, image_cmp: target },
            };
        }
    }
    Monotonicity::Monotone
}

/// Verdicts for φ, φ², …, stopping at the first monotone power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerScan {
    /// The least k ≤ max_power with φ^k monotone, if any.
    pub monotone_power: Option<usize>,
    /// Verdicts for k = 1, 2, …, up to and including the hit (or max_power).
    pub verdicts: Vec<Monotonicity>,
}

/// Scans powers of the substitution for monotonicity.
///
/// # Errors
///
/// [`Error::InvalidMorphism`] if `max_power` is 0.
pub fn monotone_power(m: &Morphism, max_power: usize, depth: usize) -> Result<PowerScan> {
    if max_power == 0 {
        return Err(Error::InvalidMorphism("power scan needs max_power ≥ 1".to_string()));
    }
    let mut verdicts = Vec::new();
    let mut found = None;
    for k in 1..=max_power {
        let mk = m.power(k)?;
        let verdict = monotonicity_verdict(&mk, depth);
        let hit = verdict == Monotonicity::Monotone;
        verdicts.push(verdict);
        if hit {
            found = Some(k);
            break;
        }
    }
    Ok(PowerScan { monotone_power: found, verdicts })
}
