//! Freely reduced words over an abstract free generating set.
//!
//! A letter is a nonzero integer: `i > 0` is the generator `x_i`, `i < 0` is
//! `x_{|i|}^-1`. Generator indices are 1-based in all external formats. Words
//! are kept freely reduced at all times; every constructor reduces.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A freely reduced word in a free group.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    /// The empty word (group identity).
    pub fn identity() -> Word {
        Word { letters: Vec::new() }
    }

    /// The single generator `x_i` (1-based).
    pub fn generator(i: u32) -> Word {
        assert!(i > 0, "generator index must be positive");
        Word { letters: vec![i as i32] }
    }

    /// Free reduction of a raw letter list. Rejects zero entries.
    pub fn reduce(raw: &[i32]) -> Result<Word> {
        let mut letters: Vec<i32> = Vec::with_capacity(raw.len());
        for &l in raw {
            if l == 0 {
                return Err(Error::MalformedWord("zero letter".into()));
            }
            match letters.last() {
                Some(&top) if top == -l => {
                    letters.pop();
                }
                _ => letters.push(l),
            }
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Free length.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Group product, freely reduced.
    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            match letters.last() {
                Some(&top) if top == -l => {
                    letters.pop();
                }
                _ => letters.push(l),
            }
        }
        Word { letters }
    }

    /// Group inverse: reversed letters with signs flipped.
    pub fn inv(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Largest generator index used (0 for the empty word).
    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0)
    }

    /// Checks every letter fits inside ambient rank `rank`.
    pub fn check_rank(&self, rank: usize) -> Result<()> {
        let found = self.max_generator();
        if found as usize > rank {
            return Err(Error::RankMismatch { found, rank });
        }
        Ok(())
    }

    /// Shortlex comparison: length first, then letterwise with
    /// `x_1 < x_1^-1 < x_2 < x_2^-1 < ...`.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        fn letter_key(l: i32) -> (u32, bool) {
            (l.unsigned_abs(), l < 0)
        }
        self.len().cmp(&other.len()).then_with(|| {
            for (&a, &b) in self.letters.iter().zip(&other.letters) {
                let c = letter_key(a).cmp(&letter_key(b));
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }

    /// The shortlex-smaller of the word and its inverse.
    pub fn symmetrized(&self) -> Word {
        let inv = self.inv();
        if inv.shortlex_cmp(self) == Ordering::Less {
            inv
        } else {
            self.clone()
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, &l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if l > 0 {
                write!(f, "x{}", l)?;
            } else {
                write!(f, "x{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<i32>::deserialize(deserializer)?;
        Word::reduce(&raw).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// An endomorphism of the free group of rank `q`, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Endomorphism {
    images: Vec<Word>,
}

impl Endomorphism {
    /// Builds an endomorphism from the images of `x_1..x_q`. Each image must
    /// itself be a word over rank `q`.
    pub fn new(images: Vec<Word>) -> Result<Endomorphism> {
        let q = images.len();
        for img in &images {
            img.check_rank(q)?;
        }
        Ok(Endomorphism { images })
    }

    /// The identity endomorphism of rank `q`.
    pub fn identity(q: usize) -> Endomorphism {
        Endomorphism {
            images: (1..=q as u32).map(Word::generator).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, w)| w.letters() == [(k + 1) as i32])
    }

    /// Applies the substitution homomorphism to `w`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.check_rank(self.rank())?;
        let mut out = Word::identity();
        for &l in w.letters() {
            let img = &self.images[(l.unsigned_abs() - 1) as usize];
            if l > 0 {
                out = out.mul(img);
            } else {
                out = out.mul(&img.inv());
            }
        }
        Ok(out)
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                found: other.rank() as u32,
                rank: self.rank(),
            });
        }
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Endomorphism { images })
    }

    /// `n`-fold composition by repeated squaring; `power(0)` is the identity.
    pub fn power(&self, n: u64) -> Result<Endomorphism> {
        let mut acc = Endomorphism::identity(self.rank());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = base.compose(&acc)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(raw: &[i32]) -> Word {
        Word::reduce(raw).unwrap()
    }

    /// Naive oracle: scan for an adjacent cancelling pair until fixpoint.
    fn reduce_oracle(raw: &[i32]) -> Vec<i32> {
        let mut v: Vec<i32> = raw.to_vec();
        loop {
            let mut cancelled = false;
            for k in 0..v.len().saturating_sub(1) {
                if v[k] == -v[k + 1] {
                    v.drain(k..k + 2);
                    cancelled = true;
                    break;
                }
            }
            if !cancelled {
                return v;
            }
        }
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w(&[1, 2, -2, 3]).letters(), &[1, 3]);
        assert_eq!(w(&[]).letters(), &[] as &[i32]);
        // repeated cancellation, expected value frozen from the scan oracle
        assert_eq!(reduce_oracle(&[1, -1, 1, -1]), Vec::<i32>::new());
        assert_eq!(w(&[1, -1, 1, -1]).letters(), &[] as &[i32]);
    }

    #[test]
    fn reduce_rejects_zero() {
        assert!(Word::reduce(&[1, 0]).is_err());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(w(&[1, -2]).mul(&w(&[2])).letters(), &[1]);
        // u1 of the worked reduction example, built from its two factors
        let u = w(&[2, -1]).mul(&w(&[-2, 3, -2, -2, -2]));
        assert_eq!(u.letters(), &[2, -1, -2, 3, -2, -2, -2]);
        assert_eq!(u.len(), 7);
        let v = w(&[1, 2, -1, 3]);
        assert!(v.mul(&v.inv()).is_empty());
    }

    #[test]
    fn inv_examples() {
        assert_eq!(w(&[1, -2]).inv().letters(), &[2, -1]);
        assert_eq!(w(&[]).inv().letters(), &[] as &[i32]);
        assert_eq!(w(&[2, -1, -2, 3, -2, -2, -2]).inv().len(), 7);
    }

    #[test]
    fn endo_apply_and_power() {
        // f: x1 -> x1 x2, x2 -> x2
        let f = Endomorphism::new(vec![w(&[1, 2]), w(&[2])]).unwrap();
        let f2 = f.power(2).unwrap();
        // hand substitution: f^2(x1) = f(x1 x2) = x1 x2 x2
        assert_eq!(f2.apply(&w(&[1])).unwrap().letters(), &[1, 2, 2]);
        assert_eq!(f2.images()[0].letters(), &[1, 2, 2]);
        assert_eq!(f2.images()[1].letters(), &[2]);

        let id = Endomorphism::identity(3);
        let u = w(&[3, -1, 2]);
        assert_eq!(id.apply(&u).unwrap(), u);
        assert!(f.apply(&Word::identity()).unwrap().is_empty());
        assert_eq!(f.power(0).unwrap(), Endomorphism::identity(2));
    }

    #[test]
    fn endo_rank_mismatch() {
        let f = Endomorphism::identity(2);
        assert!(f.apply(&w(&[3])).is_err());
        assert!(Endomorphism::new(vec![w(&[2]), w(&[3])]).is_err());
    }

    fn raw_word_strategy(rank: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec((1..=rank, prop::bool::ANY).prop_map(|(g, s)| if s { -g } else { g }), 0..max_len)
    }

    fn endo_strategy(rank: i32) -> impl Strategy<Value = Endomorphism> {
        prop::collection::vec(raw_word_strategy(rank, 5), rank as usize)
            .prop_map(|ws| {
                Endomorphism::new(ws.iter().map(|r| Word::reduce(r).unwrap()).collect()).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reduce_matches_oracle_and_is_idempotent(raw in raw_word_strategy(3, 20)) {
            let reduced = Word::reduce(&raw).unwrap();
            let expected = reduce_oracle(&raw);
            prop_assert_eq!(reduced.letters(), expected.as_slice());
            prop_assert_eq!(Word::reduce(reduced.letters()).unwrap(), reduced.clone());
            prop_assert_eq!(reduced.len(), reduce_oracle(&raw).len());
        }

        #[test]
        fn mul_length_bounds(a in raw_word_strategy(3, 12), b in raw_word_strategy(3, 12)) {
            let u = Word::reduce(&a).unwrap();
            let v = Word::reduce(&b).unwrap();
            let p = u.mul(&v);
            prop_assert!(p.len() <= u.len() + v.len());
            prop_assert_eq!(p.len() % 2, (u.len() + v.len()) % 2);
        }

        #[test]
        fn inv_is_involutive_antihomomorphism(a in raw_word_strategy(3, 12), b in raw_word_strategy(3, 12)) {
            let u = Word::reduce(&a).unwrap();
            let v = Word::reduce(&b).unwrap();
            prop_assert_eq!(u.inv().inv(), u.clone());
            prop_assert_eq!(u.mul(&v).inv(), v.inv().mul(&u.inv()));
        }

        #[test]
        fn endo_distributes_over_mul(f in endo_strategy(3), a in raw_word_strategy(3, 8), b in raw_word_strategy(3, 8)) {
            let u = Word::reduce(&a).unwrap();
            let v = Word::reduce(&b).unwrap();
            prop_assert_eq!(
                f.apply(&u.mul(&v)).unwrap(),
                f.apply(&u).unwrap().mul(&f.apply(&v).unwrap())
            );
            prop_assert_eq!(f.apply(&u.inv()).unwrap(), f.apply(&u).unwrap().inv());
        }

        #[test]
        fn endo_power_adds(f in endo_strategy(2), a in 0u64..4, b in 0u64..4) {
            let lhs = f.power(a + b).unwrap();
            let rhs = f.power(a).unwrap().compose(&f.power(b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
