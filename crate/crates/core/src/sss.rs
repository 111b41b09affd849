//! The three secret-sharing protocols.
//!
//! * combinatorial: the secret is the sum of reciprocals of m chosen
//!   naturals, distributed by slot;
//! * Nielsen: an abstract basis and a matrix basis are scrambled by one
//!   regular transcript applied simultaneously; the secret is derived from
//!   the traces of the original matrices, which survive reduction because
//!   traces are invariant under inversion;
//! * length-based: a Nielsen-reduced word tuple is scrambled; the secret is
//!   the sum of reciprocal lengths, recoverable because Nielsen-reduced
//!   tuples in one equivalence class share their total length.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nielsen::{apply_transcript, is_nielsen_reduced, nielsen_reduce, Transcript};
use crate::ratmat::{apply_transcript_mat, lehner_generators, RatMatrix, Rational};
use crate::shares::{build_distribution, reconstruct};
use crate::word::Word;

/// Secret-derivation function tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecretFn {
    /// sum of 1/|tr(M_j)| (the default matrix-scheme secret)
    SumInvAbsTrace,
    /// sum of 1/a_j over plain naturals (combinatorial scheme)
    SumInv,
    /// product of |tr(M_j)|
    ProdAbsTrace,
    /// sum of |tr(M_j)|
    SumAbsTrace,
    /// product of tr(M_j)^2
    ProdTraceSq,
    /// sum of tr(M_j)^2
    SumTraceSq,
    /// product of tr([M_{2i-1}, M_{2i}]), m even; order-sensitive
    ProdCommutatorTrace,
    /// sum of tr(M_j^2)
    SumTraceOfSquares,
    /// sum of 1/|u_i| over word lengths (length-based scheme)
    SumInvLength,
}

impl Default for SecretFn {
    fn default() -> Self {
        SecretFn::SumInvAbsTrace
    }
}

/// Evaluates a matrix-based secret function on a tuple of matrices.
pub fn eval_matrix_secret(tag: SecretFn, mats: &[RatMatrix]) -> Result<Rational> {
    let traces: Vec<Rational> = mats.iter().map(RatMatrix::trace).collect();
    match tag {
        SecretFn::SumInvAbsTrace => {
            let mut acc = Rational::zero();
            for tr in &traces {
                acc = &acc + &tr.abs().recip().map_err(|_| {
                    Error::DivisionByZero("trace zero under inverse-trace secret".into())
                })?;
            }
            Ok(acc)
        }
        SecretFn::ProdAbsTrace => Ok(traces.iter().fold(Rational::one(), |acc, t| &acc * &t.abs())),
        SecretFn::SumAbsTrace => Ok(traces.iter().fold(Rational::zero(), |acc, t| &acc + &t.abs())),
        SecretFn::ProdTraceSq => Ok(traces.iter().fold(Rational::one(), |acc, t| &acc * &t.square())),
        SecretFn::SumTraceSq => Ok(traces.iter().fold(Rational::zero(), |acc, t| &acc + &t.square())),
        SecretFn::ProdCommutatorTrace => {
            if mats.len() % 2 != 0 {
                return Err(Error::InvalidParams(
                    "commutator-product secret requires an even number of matrices".into(),
                ));
            }
            let mut acc = Rational::one();
            for pair in mats.chunks_exact(2) {
                acc = &acc * &pair[0].commutator(&pair[1]).trace();
            }
            Ok(acc)
        }
        SecretFn::SumTraceOfSquares => Ok(mats
            .iter()
            .fold(Rational::zero(), |acc, m| &acc + &m.mul(m).trace())),
        SecretFn::SumInv | SecretFn::SumInvLength => Err(Error::InvalidParams(format!(
            "{tag:?} is not a matrix secret function"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Combinatorial scheme
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombShare {
    pub participant: usize,
    /// (slot index j, a_j) pairs
    pub items: Vec<(usize, u64)>,
    /// the special-secret multiplier x = S~/S, when the dealer configured one
    pub special_factor: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct CombDeal {
    pub n: usize,
    pub t: usize,
    pub shares: Vec<CombShare>,
    /// the effective secret (already multiplied by x when special is set)
    pub secret: Rational,
}

/// Deals the combinatorial scheme from m = C(n, t-1) positive naturals.
/// With a special target secret, each share additionally carries x = S~/S.
pub fn deal_combinatorial(
    n: usize,
    t: usize,
    values: &[u64],
    special: Option<&Rational>,
) -> Result<CombDeal> {
    let dist = build_distribution(n, t)?;
    let m = dist.item_count();
    if values.len() != m {
        return Err(Error::InvalidParams(format!(
            "expected {m} values for (n,t) = ({n},{t}), got {}",
            values.len()
        )));
    }
    if let Some(k) = values.iter().position(|&v| v == 0) {
        return Err(Error::InvalidParams(format!("value a_{} must be >= 1", k + 1)));
    }
    let base = values.iter().fold(Rational::zero(), |acc, &v| {
        &acc + &Rational::from_int(v as i64).recip().expect("nonzero")
    });
    let factor = special
        .map(|target| Ok::<_, Error>(target / &base))
        .transpose()?;
    let secret = match &factor {
        Some(x) => &base * x,
        None => base,
    };
    let shares = (1..=n)
        .map(|i| CombShare {
            participant: i,
            items: dist
                .r_set(i)
                .iter()
                .map(|&j| (j, values[j - 1]))
                .collect(),
            special_factor: factor.clone(),
        })
        .collect();
    Ok(CombDeal { n, t, shares, secret })
}

/// Recovers the combinatorial secret from at least t shares.
pub fn reconstruct_combinatorial(n: usize, t: usize, shares: &[CombShare]) -> Result<Rational> {
    let dist = build_distribution(n, t)?;
    let provided: Vec<(usize, Vec<(usize, u64)>)> = shares
        .iter()
        .map(|s| (s.participant, s.items.clone()))
        .collect();
    let values = reconstruct(dist.item_count(), &provided)?;
    let mut secret = values.iter().fold(Rational::zero(), |acc, &v| {
        &acc + &Rational::from_int(v as i64)
            .recip()
            .expect("values validated nonzero at deal time")
    });
    let mut factor: Option<&Rational> = None;
    for s in shares {
        match (&s.special_factor, factor) {
            (Some(x), None) => factor = Some(x),
            (Some(x), Some(prev)) if x != prev => {
                return Err(Error::InvalidParams(
                    "shares disagree on the special-secret factor".into(),
                ))
            }
            _ => {}
        }
    }
    if let Some(x) = factor {
        secret = &secret * x;
    }
    Ok(secret)
}

// ---------------------------------------------------------------------------
// Simultaneous Nielsen-transformation scheme
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NielsenShare {
    pub participant: usize,
    /// (slot, word) pairs: this participant's R_i subset of U
    pub word_items: Vec<(usize, Word)>,
    /// which S_j matrix set this share carries; j = (i mod n) + 1
    pub matrix_set: usize,
    /// (slot, matrix) pairs: the S_j subset of N
    pub matrix_items: Vec<(usize, RatMatrix)>,
}

#[derive(Clone, Debug)]
pub struct NielsenDeal {
    pub n: usize,
    pub t: usize,
    pub shares: Vec<NielsenShare>,
    pub secret: Rational,
    /// U: the scrambled word tuple (dealer record only, never in shares)
    pub scrambled_words: Vec<Word>,
    /// N: the scrambled matrix tuple
    pub scrambled_matrices: Vec<RatMatrix>,
    /// set when the deal is degenerate (empty transcript)
    pub warning: Option<String>,
}

/// Deals the simultaneous-Nielsen scheme. Requires m = C(n, t-1) Lehner
/// parameters; the transcript scrambles the abstract basis and the Lehner
/// matrices in lockstep.
pub fn deal_nielsen(
    n: usize,
    t: usize,
    params: &[Rational],
    transcript: &Transcript,
    secret_fn: SecretFn,
) -> Result<NielsenDeal> {
    if !transcript.is_regular() {
        return Err(Error::SingularTranscript);
    }
    let dist = build_distribution(n, t)?;
    let m = dist.item_count();
    if params.len() != m {
        return Err(Error::InvalidParams(format!(
            "expected {m} Lehner parameters for (n,t) = ({n},{t}), got {}",
            params.len()
        )));
    }
    let matrices = lehner_generators(params)?;
    let secret = eval_matrix_secret(secret_fn, &matrices)?;
    let basis: Vec<Word> = (1..=m as u32).map(Word::generator).collect();
    let scrambled_words = apply_transcript(&basis, transcript)?;
    let scrambled_matrices = apply_transcript_mat(&matrices, transcript)?;
    let warning = transcript
        .is_empty()
        .then(|| "empty transcript: shares expose the generating sets directly".to_string());
    let shares = (1..=n)
        .map(|i| {
            let j = (i % n) + 1;
            NielsenShare {
                participant: i,
                word_items: dist
                    .r_set(i)
                    .iter()
                    .map(|&slot| (slot, scrambled_words[slot - 1].clone()))
                    .collect(),
                matrix_set: j,
                matrix_items: dist
                    .r_set(j)
                    .iter()
                    .map(|&slot| (slot, scrambled_matrices[slot - 1].clone()))
                    .collect(),
            }
        })
        .collect();
    Ok(NielsenDeal {
        n,
        t,
        shares,
        secret,
        scrambled_words,
        scrambled_matrices,
        warning,
    })
}

#[derive(Clone, Debug)]
pub struct NielsenRecovery {
    pub secret: Rational,
    /// the recovered matrix tuple, equal to the dealer's M up to permutation
    /// and elementwise inversion
    pub matrices: Vec<RatMatrix>,
}

/// Recovers the secret from at least t shares: assemble U and N, Nielsen
/// reduce U while mirroring the emitted transcript onto N, then evaluate the
/// secret function on the recovered matrices.
pub fn reconstruct_nielsen(
    n: usize,
    t: usize,
    shares: &[NielsenShare],
    secret_fn: SecretFn,
) -> Result<NielsenRecovery> {
    if secret_fn == SecretFn::ProdCommutatorTrace {
        return Err(Error::InvalidParams(
            "commutator-product secret is pairing-dependent and only defined at deal time".into(),
        ));
    }
    let dist = build_distribution(n, t)?;
    let m = dist.item_count();
    let word_provided: Vec<(usize, Vec<(usize, Word)>)> = shares
        .iter()
        .map(|s| (s.participant, s.word_items.clone()))
        .collect();
    let scrambled_words = reconstruct(m, &word_provided)?;
    let matrix_provided: Vec<(usize, Vec<(usize, RatMatrix)>)> = shares
        .iter()
        .map(|s| (s.matrix_set, s.matrix_items.clone()))
        .collect();
    let scrambled_matrices = reconstruct(m, &matrix_provided)?;

    let reduction = nielsen_reduce(&scrambled_words)?;
    let matrices = apply_transcript_mat(&scrambled_matrices, &reduction.transcript)?;
    let secret = eval_matrix_secret(secret_fn, &matrices)?;
    Ok(NielsenRecovery { secret, matrices })
}

/// Set comparison up to permutation and elementwise inversion, the exact
/// ambiguity the reconstruction leaves.
pub fn same_up_to_perm_and_inv(recovered: &[RatMatrix], original: &[RatMatrix]) -> bool {
    if recovered.len() != original.len() {
        return false;
    }
    let mut used = vec![false; original.len()];
    'outer: for r in recovered {
        for (k, o) in original.iter().enumerate() {
            if !used[k] && (r == o || *r == o.inv()) {
                used[k] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Length-based scheme
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthShare {
    pub participant: usize,
    /// (slot, word) pairs: this participant's subset of V
    pub items: Vec<(usize, Word)>,
}

#[derive(Clone, Debug)]
pub struct LengthDeal {
    pub n: usize,
    pub t: usize,
    pub shares: Vec<LengthShare>,
    pub secret: Rational,
    /// V: the scrambled tuple (dealer record only)
    pub scrambled: Vec<Word>,
}

/// Deals the length-based scheme: the dealer's tuple must already be Nielsen
/// reduced (checked by the exhaustive scan); the secret is the sum of
/// reciprocal word lengths.
pub fn deal_length(
    n: usize,
    t: usize,
    rank: usize,
    tuple: &[Word],
    transcript: &Transcript,
) -> Result<LengthDeal> {
    if !transcript.is_regular() {
        return Err(Error::SingularTranscript);
    }
    let dist = build_distribution(n, t)?;
    let m = dist.item_count();
    if tuple.len() != m {
        return Err(Error::InvalidParams(format!(
            "expected a tuple of {m} words for (n,t) = ({n},{t}), got {}",
            tuple.len()
        )));
    }
    for u in tuple {
        u.check_rank(rank)?;
    }
    if let Some(v) = is_nielsen_reduced(tuple) {
        return Err(Error::InvalidParams(format!(
            "dealer tuple is not Nielsen reduced: {v:?}"
        )));
    }
    let secret = length_secret(tuple)?;
    let scrambled = apply_transcript(tuple, transcript)?;
    let shares = (1..=n)
        .map(|i| LengthShare {
            participant: i,
            items: dist
                .r_set(i)
                .iter()
                .map(|&slot| (slot, scrambled[slot - 1].clone()))
                .collect(),
        })
        .collect();
    Ok(LengthDeal { n, t, shares, secret, scrambled })
}

fn length_secret(tuple: &[Word]) -> Result<Rational> {
    let mut acc = Rational::zero();
    for u in tuple {
        if u.is_empty() {
            return Err(Error::DivisionByZero("word of length zero in length secret".into()));
        }
        acc = &acc + &Rational::from_int(u.len() as i64).recip()?;
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct LengthRecovery {
    pub secret: Rational,
    pub reduced: Vec<Word>,
}

/// Recovers the length-based secret: assemble V, Nielsen reduce, sum
/// reciprocal lengths of the reduced tuple.
pub fn reconstruct_length(n: usize, t: usize, shares: &[LengthShare]) -> Result<LengthRecovery> {
    let dist = build_distribution(n, t)?;
    let provided: Vec<(usize, Vec<(usize, Word)>)> = shares
        .iter()
        .map(|s| (s.participant, s.items.clone()))
        .collect();
    let scrambled = reconstruct(dist.item_count(), &provided)?;
    let reduction = nielsen_reduce(&scrambled)?;
    let secret = length_secret(&reduction.reduced)?;
    Ok(LengthRecovery { secret, reduced: reduction.reduced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::nielsen::{dealer_example_transcript, random_regular_transcript};
    use crate::ratmat::example_params;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn w(raw: &[i32]) -> Word {
        Word::reduce(raw).unwrap()
    }

    #[test]
    fn combinatorial_worked_example() {
        let deal = deal_combinatorial(4, 3, &[2, 1, 2, 8, 4, 2], None).unwrap();
        assert_eq!(deal.secret, q("23/8"));
        assert_eq!(deal.shares[0].items, vec![(4, 8), (5, 4), (6, 2)]);

        let s = reconstruct_combinatorial(4, 3, &deal.shares[0..3]).unwrap();
        assert_eq!(s, q("23/8"));
        let s = reconstruct_combinatorial(4, 3, &deal.shares).unwrap();
        assert_eq!(s, q("23/8"));
        assert!(matches!(
            reconstruct_combinatorial(4, 3, &deal.shares[0..2]),
            Err(Error::CoverageFailure { .. })
        ));
    }

    #[test]
    fn combinatorial_all_ones() {
        let deal = deal_combinatorial(3, 2, &[1, 1, 1], None).unwrap();
        assert_eq!(deal.secret, q("3"));
    }

    #[test]
    fn combinatorial_special_secret() {
        let deal = deal_combinatorial(4, 3, &[2, 1, 2, 8, 4, 2], Some(&q("1"))).unwrap();
        // x = (1) / (23/8) = 8/23, exact division oracle
        assert_eq!(deal.shares[0].special_factor, Some(q("8/23")));
        assert_eq!(deal.secret, q("1"));
        let s = reconstruct_combinatorial(4, 3, &deal.shares[1..4]).unwrap();
        assert_eq!(s, q("1"));
    }

    #[test]
    fn combinatorial_rejects_bad_inputs() {
        assert!(deal_combinatorial(4, 3, &[1, 2, 3], None).is_err());
        assert!(deal_combinatorial(4, 3, &[2, 1, 2, 8, 4, 0], None).is_err());
    }

    #[test]
    fn nielsen_worked_example_deal() {
        let deal = deal_nielsen(
            3,
            2,
            &example_params(),
            &dealer_example_transcript(),
            SecretFn::SumInvAbsTrace,
        )
        .unwrap();
        assert_eq!(deal.secret, q("589/2310"));
        assert_eq!(deal.scrambled_words[0], w(&[2, -1, -2, 3, -2, -2, -2]));
        // P1 gets (R_1, S_2): word slots {2,3}, matrix slots {1,3}
        assert_eq!(deal.shares[0].word_items[0].0, 2);
        assert_eq!(deal.shares[0].word_items[1].0, 3);
        assert_eq!(deal.shares[0].matrix_set, 2);
        assert_eq!(deal.shares[0].matrix_items[0].0, 1);
        assert_eq!(deal.shares[0].matrix_items[1].0, 3);
        // P2 gets (R_2, S_3), P3 gets (R_3, S_1)
        assert_eq!(deal.shares[1].matrix_set, 3);
        assert_eq!(deal.shares[2].matrix_set, 1);
        assert!(deal.warning.is_none());
    }

    #[test]
    fn nielsen_worked_example_reconstruct() {
        let deal = deal_nielsen(
            3,
            2,
            &example_params(),
            &dealer_example_transcript(),
            SecretFn::SumInvAbsTrace,
        )
        .unwrap();
        let original = lehner_generators(&example_params()).unwrap();

        // participants P1 and P2
        let rec = reconstruct_nielsen(3, 2, &deal.shares[0..2], SecretFn::SumInvAbsTrace).unwrap();
        assert_eq!(rec.secret, q("589/2310"));
        assert!(same_up_to_perm_and_inv(&rec.matrices, &original));

        // a single participant fails coverage
        assert!(matches!(
            reconstruct_nielsen(3, 2, &deal.shares[0..1], SecretFn::SumInvAbsTrace),
            Err(Error::CoverageFailure { .. })
        ));

        // all three participants are a superset of any two
        let rec = reconstruct_nielsen(3, 2, &deal.shares, SecretFn::SumInvAbsTrace).unwrap();
        assert_eq!(rec.secret, q("589/2310"));
    }

    #[test]
    fn nielsen_alternative_secrets() {
        let mats = lehner_generators(&example_params()).unwrap();
        // published traces are -7, -15, -22
        assert_eq!(eval_matrix_secret(SecretFn::SumTraceSq, &mats).unwrap(), q("758"));
        assert_eq!(eval_matrix_secret(SecretFn::SumAbsTrace, &mats).unwrap(), q("44"));
        assert_eq!(eval_matrix_secret(SecretFn::ProdAbsTrace, &mats).unwrap(), q("2310"));
        assert_eq!(
            eval_matrix_secret(SecretFn::ProdTraceSq, &mats).unwrap(),
            q("5336100")
        );
        // order-sensitive variant needs even arity
        assert!(eval_matrix_secret(SecretFn::ProdCommutatorTrace, &mats).is_err());
        assert!(eval_matrix_secret(SecretFn::SumInv, &mats).is_err());
    }

    #[test]
    fn nielsen_empty_transcript_warns() {
        let deal = deal_nielsen(
            3,
            2,
            &example_params(),
            &Transcript::empty(),
            SecretFn::SumInvAbsTrace,
        )
        .unwrap();
        assert!(deal.warning.is_some());
    }

    #[test]
    fn nielsen_rejects_bad_params() {
        assert!(deal_nielsen(
            3,
            2,
            &[q("2"), q("4"), q("7")],
            &Transcript::empty(),
            SecretFn::SumInvAbsTrace
        )
        .is_err());
        assert!(deal_nielsen(
            3,
            2,
            &example_params()[0..2],
            &Transcript::empty(),
            SecretFn::SumInvAbsTrace
        )
        .is_err());
    }

    #[test]
    fn nielsen_end_to_end_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let n = rng.gen_range(2..=4usize);
            let t = rng.gen_range(2..=n);
            let m = crate::shares::build_distribution(n, t).unwrap().item_count();
            let params = crate::ratmat::default_lehner_params(m);
            let n_moves = rng.gen_range(1..=20);
            let transcript = random_regular_transcript(&mut rng, m, n_moves);
            let deal = deal_nielsen(n, t, &params, &transcript, SecretFn::SumInvAbsTrace).unwrap();
            let original = lehner_generators(&params).unwrap();

            // a random t-subset reconstructs exactly
            let mut idx: Vec<usize> = (0..n).collect();
            for k in 0..t {
                let pick = rng.gen_range(k..n);
                idx.swap(k, pick);
            }
            let subset: Vec<NielsenShare> =
                idx[0..t].iter().map(|&k| deal.shares[k].clone()).collect();
            let rec = reconstruct_nielsen(n, t, &subset, SecretFn::SumInvAbsTrace).unwrap();
            assert_eq!(rec.secret, deal.secret);
            assert!(same_up_to_perm_and_inv(&rec.matrices, &original));

            // any (t-1)-subset fails coverage
            let small: Vec<NielsenShare> =
                idx[0..t - 1].iter().map(|&k| deal.shares[k].clone()).collect();
            assert!(matches!(
                reconstruct_nielsen(n, t, &small, SecretFn::SumInvAbsTrace),
                Err(Error::CoverageFailure { .. })
            ));
        }
    }

    #[test]
    fn length_scheme_examples() {
        // basis tuple: all lengths 1
        let basis: Vec<Word> = (1..=3u32).map(Word::generator).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_regular_transcript(&mut rng, 3, 12);
        let deal = deal_length(3, 2, 3, &basis, &t).unwrap();
        assert_eq!(deal.secret, q("3"));
        let rec = reconstruct_length(3, 2, &deal.shares[1..3]).unwrap();
        assert_eq!(rec.secret, q("3"));

        // lengths 2 and 3 (plus a length-1 filler to meet arity 3):
        // certified reduced by the scan before dealing
        let tuple = vec![w(&[1, 2]), w(&[2, -3, 2]), w(&[3])];
        assert!(is_nielsen_reduced(&[w(&[1, 2]), w(&[2, -3, 2])]).is_none());
        let sum_of_two = &q("1/2") + &q("1/3");
        assert_eq!(sum_of_two, q("5/6"));
        let deal = deal_length(3, 2, 3, &tuple, &t).unwrap();
        assert_eq!(deal.secret, &q("5/6") + &q("1"));
        let rec = reconstruct_length(3, 2, &deal.shares[0..2]).unwrap();
        assert_eq!(rec.secret, deal.secret);
        let total: usize = rec.reduced.iter().map(Word::len).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn length_scheme_rejects_unreduced_or_singular() {
        let bad = vec![w(&[1, 2]), w(&[2]), w(&[3])];
        assert!(deal_length(3, 2, 3, &bad, &Transcript::empty()).is_err());

        let basis: Vec<Word> = (1..=3u32).map(Word::generator).collect();
        let singular = Transcript::general(vec![crate::nielsen::ElementaryMove::delete(1)]);
        assert!(matches!(
            deal_length(3, 2, 3, &basis, &singular),
            Err(Error::SingularTranscript)
        ));
    }
}
