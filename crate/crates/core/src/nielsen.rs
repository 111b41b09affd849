//! Nielsen transformations on tuples of group elements.
//!
//! A transcript is an ordered list of elementary moves: (T1) invert an
//! element, (T2) right-multiply one element by another, (T3) delete a
//! trivial element. Regular transcripts contain no deletes and are the only
//! kind the protocols use. The module also provides the Nielsen-reduced
//! predicate (conditions N0-N2 over all ordered triples of tuple elements
//! and their inverses) and a transcript-emitting reduction procedure.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::Word;

/// Element type a transcript can act on. Words and SL(2,Q) matrices both
/// implement this, which is what makes the simultaneous ("mirrored")
/// application of one transcript to both tuples possible.
pub trait GroupElem: Clone {
    fn op(&self, other: &Self) -> Self;
    fn invert(&self) -> Self;
    fn is_trivial(&self) -> bool;
}

impl GroupElem for Word {
    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn invert(&self) -> Self {
        self.inv()
    }
    fn is_trivial(&self) -> bool {
        self.is_empty()
    }
}

/// One elementary Nielsen move. Indices are 1-based positions into the
/// current tuple, matching the external format.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementaryMove {
    /// (T1)_i: u_i <- u_i^-1
    Invert { i: usize },
    /// (T2)_ij: u_i <- u_i u_j, i != j
    MultiplyRight { i: usize, j: usize },
    /// (T3): delete u_i, only legal when u_i is trivial
    Delete { i: usize },
}

impl ElementaryMove {
    pub fn invert(i: usize) -> ElementaryMove {
        ElementaryMove::Invert { i }
    }

    pub fn multiply_right(i: usize, j: usize) -> Result<ElementaryMove> {
        if i == j {
            return Err(Error::InvalidMove(format!("(T2) requires i != j, got i = j = {i}")));
        }
        if i == 0 || j == 0 {
            return Err(Error::InvalidMove("indices are 1-based".into()));
        }
        Ok(ElementaryMove::MultiplyRight { i, j })
    }

    pub fn delete(i: usize) -> ElementaryMove {
        ElementaryMove::Delete { i }
    }

    fn is_delete(&self) -> bool {
        matches!(self, ElementaryMove::Delete { .. })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op")]
enum MoveRecord {
    T1 {
        i: usize,
    },
    T2 {
        i: usize,
        j: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pow: Option<u64>,
    },
    T3 {
        i: usize,
    },
}

/// A finite product of elementary Nielsen moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    moves: Vec<ElementaryMove>,
    declared_regular: bool,
}

impl Transcript {
    /// A regular transcript: rejects any (T3) move.
    pub fn regular(moves: Vec<ElementaryMove>) -> Result<Transcript> {
        if moves.iter().any(ElementaryMove::is_delete) {
            return Err(Error::SingularTranscript);
        }
        Ok(Transcript { moves, declared_regular: true })
    }

    /// A possibly singular transcript; regular iff it happens to contain no
    /// deletes.
    pub fn general(moves: Vec<ElementaryMove>) -> Transcript {
        let declared_regular = !moves.iter().any(ElementaryMove::is_delete);
        Transcript { moves, declared_regular }
    }

    pub fn empty() -> Transcript {
        Transcript { moves: Vec::new(), declared_regular: true }
    }

    pub fn moves(&self) -> &[ElementaryMove] {
        &self.moves
    }

    pub fn is_regular(&self) -> bool {
        self.declared_regular
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Concatenation: `self` then `other`.
    pub fn then(&self, other: &Transcript) -> Transcript {
        let mut moves = self.moves.clone();
        moves.extend(other.moves.iter().cloned());
        Transcript::general(moves)
    }
}

impl Serialize for Transcript {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<MoveRecord> = self
            .moves
            .iter()
            .map(|m| match *m {
                ElementaryMove::Invert { i } => MoveRecord::T1 { i },
                ElementaryMove::MultiplyRight { i, j } => MoveRecord::T2 { i, j, pow: None },
                ElementaryMove::Delete { i } => MoveRecord::T3 { i },
            })
            .collect();
        records.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Transcript {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let records = Vec::<MoveRecord>::deserialize(deserializer)?;
        let mut moves = Vec::with_capacity(records.len());
        for r in records {
            match r {
                MoveRecord::T1 { i } => moves.push(ElementaryMove::invert(i)),
                MoveRecord::T2 { i, j, pow } => {
                    let m = ElementaryMove::multiply_right(i, j)
                        .map_err(|e| D::Error::custom(e.to_string()))?;
                    // shorthand [(T2)_ij]^t expands on parse
                    for _ in 0..pow.unwrap_or(1) {
                        moves.push(m.clone());
                    }
                }
                MoveRecord::T3 { i } => moves.push(ElementaryMove::delete(i)),
            }
        }
        Ok(Transcript::general(moves))
    }
}

/// Applies a transcript move-by-move to a tuple.
pub fn apply_transcript<T: GroupElem>(tuple: &[T], t: &Transcript) -> Result<Vec<T>> {
    let mut cur: Vec<T> = tuple.to_vec();
    for mv in &t.moves {
        match *mv {
            ElementaryMove::Invert { i } => {
                let idx = checked_index(i, cur.len())?;
                cur[idx] = cur[idx].invert();
            }
            ElementaryMove::MultiplyRight { i, j } => {
                let ii = checked_index(i, cur.len())?;
                let jj = checked_index(j, cur.len())?;
                cur[ii] = cur[ii].op(&cur[jj]);
            }
            ElementaryMove::Delete { i } => {
                if t.declared_regular {
                    return Err(Error::SingularTranscript);
                }
                let idx = checked_index(i, cur.len())?;
                if !cur[idx].is_trivial() {
                    return Err(Error::DeleteNonTrivial { index: i });
                }
                cur.remove(idx);
            }
        }
    }
    Ok(cur)
}

fn checked_index(i: usize, arity: usize) -> Result<usize> {
    if i == 0 || i > arity {
        return Err(Error::IndexOutOfBounds { index: i, arity });
    }
    Ok(i - 1)
}

/// Inverts a regular transcript. `(T1)_i` is self-inverse; `(T2)_ij` inverts
/// as `(T1)_j, (T2)_ij, (T1)_j` since `u_i u_j u_j^-1 = u_i`.
pub fn invert_transcript(t: &Transcript) -> Result<Transcript> {
    if !t.declared_regular {
        return Err(Error::SingularTranscript);
    }
    let mut moves = Vec::new();
    for mv in t.moves.iter().rev() {
        match *mv {
            ElementaryMove::Invert { i } => moves.push(ElementaryMove::invert(i)),
            ElementaryMove::MultiplyRight { i, j } => {
                moves.push(ElementaryMove::invert(j));
                moves.push(ElementaryMove::MultiplyRight { i, j });
                moves.push(ElementaryMove::invert(j));
            }
            ElementaryMove::Delete { .. } => unreachable!(),
        }
    }
    Transcript::regular(moves)
}

/// First N0/N1/N2 violation found, for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NielsenViolation {
    N0 { index: usize },
    N1 { v1: Word, v2: Word },
    N2 { v1: Word, v2: Word, v3: Word },
}

/// Exhaustive N0-N2 scan over all ordered pairs and triples of elements
/// `v` in `{u_i, u_i^-1}`. Returns `None` when the tuple is Nielsen reduced.
pub fn is_nielsen_reduced(tuple: &[Word]) -> Option<NielsenViolation> {
    for (i, u) in tuple.iter().enumerate() {
        if u.is_empty() {
            return Some(NielsenViolation::N0 { index: i + 1 });
        }
    }
    let mut variants: Vec<Word> = Vec::with_capacity(tuple.len() * 2);
    for u in tuple {
        variants.push(u.clone());
        variants.push(u.inv());
    }
    for v1 in &variants {
        for v2 in &variants {
            let p = v1.mul(v2);
            if p.is_empty() {
                continue;
            }
            if p.len() < v1.len() || p.len() < v2.len() {
                return Some(NielsenViolation::N1 { v1: v1.clone(), v2: v2.clone() });
            }
        }
    }
    for v1 in &variants {
        for v2 in &variants {
            if v1.mul(v2).is_empty() {
                continue;
            }
            let v1v2 = v1.mul(v2);
            for v3 in &variants {
                if v2.mul(v3).is_empty() {
                    continue;
                }
                let len = v1v2.mul(v3).len() as i64;
                if len <= v1.len() as i64 - v2.len() as i64 + v3.len() as i64 {
                    return Some(NielsenViolation::N2 {
                        v1: v1.clone(),
                        v2: v2.clone(),
                        v3: v3.clone(),
                    });
                }
            }
        }
    }
    None
}

/// Outcome of [`nielsen_reduce`]: the reduced tuple plus the regular
/// transcript that replays the input onto it.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub reduced: Vec<Word>,
    pub transcript: Transcript,
}

// The four composite replacements the reducer searches over. Each compiles
// to a short sequence of elementary T1/T2 moves on position i.
const VARIANT_COUNT: u8 = 4;

fn composite_word(tuple: &[Word], i: usize, j: usize, variant: u8) -> Word {
    match variant {
        0 => tuple[i].mul(&tuple[j]),        // u_i u_j
        1 => tuple[i].mul(&tuple[j].inv()),  // u_i u_j^-1
        2 => tuple[j].mul(&tuple[i]),        // u_j u_i
        3 => tuple[j].inv().mul(&tuple[i]),  // u_j^-1 u_i
        _ => unreachable!(),
    }
}

fn composite_moves(i: usize, j: usize, variant: u8) -> Vec<ElementaryMove> {
    // 1-based elementary moves realizing the composite replacement
    let (i, j) = (i + 1, j + 1);
    let t2 = ElementaryMove::MultiplyRight { i, j };
    match variant {
        0 => vec![t2],
        1 => vec![ElementaryMove::invert(j), t2, ElementaryMove::invert(j)],
        2 => vec![
            ElementaryMove::invert(i),
            ElementaryMove::invert(j),
            t2,
            ElementaryMove::invert(j),
            ElementaryMove::invert(i),
        ],
        3 => vec![ElementaryMove::invert(i), t2, ElementaryMove::invert(i)],
        _ => unreachable!(),
    }
}

/// Multiset key for the length-preserving phase: the sorted list of
/// symmetrized words, compared elementwise in shortlex order.
fn tuple_key(tuple: &[Word]) -> Vec<Word> {
    let mut key: Vec<Word> = tuple.iter().map(Word::symmetrized).collect();
    key.sort_by(|a, b| a.shortlex_cmp(b));
    key
}

fn key_cmp(a: &[Word], b: &[Word]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.shortlex_cmp(y);
        if c != Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}

/// Outcome of the bounded equal-length search behind the reducer's third
/// phase.
enum Phase3 {
    /// a node from which a strict length drop is available
    Progress { tuple: Vec<Word>, path: Vec<ElementaryMove> },
    /// a node passing the full N0-N2 scan
    Reduced { tuple: Vec<Word>, path: Vec<ElementaryMove> },
    Exhausted,
}

const PHASE3_NODE_CAP: usize = 20_000;

/// Breadth-first search through length-preserving composite moves. Some N2
/// violations (exact half-cancellations on both sides of an element) cannot
/// be cured by any single greedy move; a short chain of equal-length moves
/// always can, so we search the equal-total-length class for either a tuple
/// passing the scan or one from which the total length strictly drops.
fn phase3_search(start: &[Word]) -> Phase3 {
    use std::collections::{HashSet, VecDeque};
    let m = start.len();
    let mut visited: HashSet<Vec<Word>> = HashSet::new();
    let mut queue: VecDeque<(Vec<Word>, Vec<ElementaryMove>)> = VecDeque::new();
    visited.insert(start.to_vec());
    queue.push_back((start.to_vec(), Vec::new()));
    while let Some((tuple, path)) = queue.pop_front() {
        // the caller only gets here when the start tuple fails the scan
        if !path.is_empty() && is_nielsen_reduced(&tuple).is_none() {
            return Phase3::Reduced { tuple, path };
        }
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                for v in 0..VARIANT_COUNT {
                    let w = composite_word(&tuple, i, j, v);
                    if w.len() < tuple[i].len() && !path.is_empty() {
                        return Phase3::Progress { tuple, path };
                    }
                    if w.len() != tuple[i].len() {
                        continue;
                    }
                    let mut cand = tuple.clone();
                    cand[i] = w;
                    if visited.len() < PHASE3_NODE_CAP && visited.insert(cand.clone()) {
                        let mut p = path.clone();
                        p.extend(composite_moves(i, j, v));
                        queue.push_back((cand, p));
                    }
                }
            }
        }
        if visited.len() >= PHASE3_NODE_CAP {
            return Phase3::Exhausted;
        }
    }
    Phase3::Exhausted
}

/// Carries a tuple to a Nielsen-reduced one using only regular moves,
/// emitting the transcript of elementary moves applied.
///
/// Phase 1 greedily applies the composite replacement with the largest
/// strict drop in total length. Phase 2 applies length-preserving
/// replacements that strictly decrease the shortlex multiset key. When
/// neither applies but the N0-N2 scan still fails, a bounded breadth-first
/// search over equal-length moves (phase 3) looks for an escape; only an
/// exhausted search is reported as a stall, and a tuple failing the scan is
/// never returned as reduced.
pub fn nielsen_reduce(tuple: &[Word]) -> Result<ReductionResult> {
    if tuple.iter().any(Word::is_empty) {
        return Err(Error::ReductionStall(
            "input tuple contains the trivial word; regular moves cannot remove it".into(),
        ));
    }
    let m = tuple.len();
    let mut cur: Vec<Word> = tuple.to_vec();
    let mut moves: Vec<ElementaryMove> = Vec::new();
    loop {
        // Phase 1: strict total-length descent.
        let mut best: Option<(usize, usize, usize, u8, Word)> = None;
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                for v in 0..VARIANT_COUNT {
                    let w = composite_word(&cur, i, j, v);
                    if w.len() >= cur[i].len() {
                        continue;
                    }
                    let drop = cur[i].len() - w.len();
                    let better = match &best {
                        None => true,
                        Some((d, bi, bj, bv, _)) => {
                            drop > *d || (drop == *d && (i, j, v) < (*bi, *bj, *bv))
                        }
                    };
                    if better {
                        best = Some((drop, i, j, v, w));
                    }
                }
            }
        }
        if let Some((_, i, j, v, w)) = best {
            cur[i] = w;
            moves.extend(composite_moves(i, j, v));
            continue;
        }

        // Phase 2: length-preserving descent in the shortlex multiset key.
        let cur_key = tuple_key(&cur);
        let mut best2: Option<(Vec<Word>, usize, usize, u8, Word)> = None;
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                for v in 0..VARIANT_COUNT {
                    let w = composite_word(&cur, i, j, v);
                    if w.len() != cur[i].len() {
                        continue;
                    }
                    let mut cand = cur.clone();
                    cand[i] = w.clone();
                    let cand_key = tuple_key(&cand);
                    if key_cmp(&cand_key, &cur_key) != Ordering::Less {
                        continue;
                    }
                    let better = match &best2 {
                        None => true,
                        Some((bk, bi, bj, bv, _)) => match key_cmp(&cand_key, bk) {
                            Ordering::Less => true,
                            Ordering::Equal => (i, j, v) < (*bi, *bj, *bv),
                            Ordering::Greater => false,
                        },
                    };
                    if better {
                        best2 = Some((cand_key, i, j, v, w));
                    }
                }
            }
        }
        if let Some((_, i, j, v, w)) = best2 {
            cur[i] = w;
            moves.extend(composite_moves(i, j, v));
            continue;
        }

        // Phase 3: bounded search through the equal-length class.
        if is_nielsen_reduced(&cur).is_none() {
            break;
        }
        match phase3_search(&cur) {
            Phase3::Progress { tuple, path } => {
                cur = tuple;
                moves.extend(path);
                // phase 1 takes the strict drop next iteration
            }
            Phase3::Reduced { tuple, path } => {
                cur = tuple;
                moves.extend(path);
                break;
            }
            Phase3::Exhausted => break,
        }
    }
    match is_nielsen_reduced(&cur) {
        None => Ok(ReductionResult {
            reduced: cur,
            transcript: Transcript::regular(moves)?,
        }),
        Some(violation) => Err(Error::ReductionStall(format!(
            "no applicable move but the tuple violates {violation:?}"
        ))),
    }
}

/// Uniformly random regular transcript with `n_moves` elementary moves on a
/// tuple of the given arity.
pub fn random_regular_transcript<R: Rng + ?Sized>(
    rng: &mut R,
    arity: usize,
    n_moves: usize,
) -> Transcript {
    assert!(arity >= 1);
    let mut moves = Vec::with_capacity(n_moves);
    for _ in 0..n_moves {
        if arity == 1 || rng.gen_ratio(1, 4) {
            moves.push(ElementaryMove::invert(rng.gen_range(1..=arity)));
        } else {
            let i = rng.gen_range(1..=arity);
            let mut j = rng.gen_range(1..=arity);
            while j == i {
                j = rng.gen_range(1..=arity);
            }
            moves.push(ElementaryMove::MultiplyRight { i, j });
        }
    }
    Transcript::regular(moves).expect("only T1/T2 generated")
}


#[cfg(test)]
pub(crate) use tests::dealer_example_transcript;
