//! Polyalphabetic symmetric cryptosystem over SL(2,Q).
//!
//! Letters map to the matrix images of a rank-N free subgroup basis. A block
//! sequence P = p_1..p_k selects, per plaintext position, which of k
//! Nielsen-transformed copies of the basis supplies the ciphertext matrix,
//! so the same letter encrypts differently in different blocks. Both
//! endpoints rebuild the same tables from the shared key; decryption is
//! exact-matrix lookup.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nielsen::{nielsen_reduce, random_regular_transcript, Transcript};
use crate::ratmat::{apply_transcript_mat, default_lehner_params, RatMatrix, Rational, Representation};
use crate::word::Word;

/// Key evolution state: a fixed transcript `f` and the message counter. At
/// counter c the effective per-block transcript is `f_i` followed by c
/// copies of `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evolution {
    pub transcript: Transcript,
    pub counter: u64,
}

/// Shared symmetric key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CipherKeyRepr", into = "CipherKeyRepr")]
pub struct CipherKey {
    alphabet_size: usize,
    rank: usize,
    lehner_params: Vec<Rational>,
    basis: Vec<Word>,
    block_seq: Vec<usize>,
    transcripts: Vec<Transcript>,
    sigma: Option<Vec<usize>>,
    evolution: Option<Evolution>,
}

#[derive(Serialize, Deserialize)]
struct CipherKeyRepr {
    #[serde(rename = "N")]
    alphabet_size: usize,
    #[serde(rename = "q")]
    rank: usize,
    lehner_r: Vec<Rational>,
    basis_words: Vec<Word>,
    #[serde(rename = "P")]
    block_seq: Vec<usize>,
    transcripts: Vec<Transcript>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    evolution: Option<Evolution>,
}

impl From<CipherKey> for CipherKeyRepr {
    fn from(k: CipherKey) -> CipherKeyRepr {
        CipherKeyRepr {
            alphabet_size: k.alphabet_size,
            rank: k.rank,
            lehner_r: k.lehner_params,
            basis_words: k.basis,
            block_seq: k.block_seq,
            transcripts: k.transcripts,
            sigma: k.sigma,
            evolution: k.evolution,
        }
    }
}

impl TryFrom<CipherKeyRepr> for CipherKey {
    type Error = Error;

    fn try_from(r: CipherKeyRepr) -> Result<CipherKey> {
        CipherKey::from_parts(
            r.alphabet_size,
            r.rank,
            r.lehner_r,
            r.basis_words,
            r.block_seq,
            r.transcripts,
            r.sigma,
            r.evolution,
        )
    }
}

/// Ciphertext: the transmitted matrix sequence plus the segmentation shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ciphertext {
    pub matrices: Vec<RatMatrix>,
    /// number of full-length segments (0 when the message fits one cycle)
    pub segments: usize,
    /// whether the key's segment permutation was applied
    pub sigma_applied: bool,
}

/// Where the per-block transcripts come from.
pub enum TranscriptSource {
    /// deterministic generation from a seed
    Seed(u64),
    /// explicit transcripts, one per block
    Explicit(Vec<Transcript>),
}

/// Optional keygen inputs; `Default` gives the standard construction.
#[derive(Default)]
pub struct KeygenOptions {
    /// segment permutation (1-based images), enables the segmented mode
    pub sigma: Option<Vec<usize>>,
    /// key-evolution transcript
    pub evolution: Option<Transcript>,
    /// custom subgroup basis; default is u_j = x1^j x2 x1^-j
    pub basis: Option<Vec<Word>>,
    /// custom Lehner parameters; default is r_j = 3j - 1
    pub lehner_params: Option<Vec<Rational>>,
}

/// The default rank-N free subgroup basis u_j = x1^j x2 x1^-j of F(x1,x2).
pub fn conjugate_basis(alphabet_size: usize) -> Vec<Word> {
    (1..=alphabet_size as i32)
        .map(|j| {
            let mut raw = vec![1; j as usize];
            raw.push(2);
            raw.extend(std::iter::repeat(-1).take(j as usize));
            Word::reduce(&raw).expect("no zero letters")
        })
        .collect()
}

impl CipherKey {
    /// Validates every key constraint and assembles the key. Used by both
    /// keygen and deserialization, so a tampered key file cannot bypass the
    /// checks.
    #[allow(clippy::too_many_arguments)]
    fn from_parts(
        alphabet_size: usize,
        rank: usize,
        lehner_params: Vec<Rational>,
        basis: Vec<Word>,
        block_seq: Vec<usize>,
        transcripts: Vec<Transcript>,
        sigma: Option<Vec<usize>>,
        evolution: Option<Evolution>,
    ) -> Result<CipherKey> {
        if alphabet_size < 5 {
            return Err(Error::InvalidParams(format!(
                "alphabet size must be at least 5, got {alphabet_size}"
            )));
        }
        if rank < 2 {
            return Err(Error::InvalidParams("ambient rank must be at least 2".into()));
        }
        if lehner_params.len() != rank {
            return Err(Error::InvalidParams(format!(
                "need {rank} Lehner parameters, got {}",
                lehner_params.len()
            )));
        }
        if basis.len() != alphabet_size {
            return Err(Error::InvalidParams(format!(
                "need {alphabet_size} basis words, got {}",
                basis.len()
            )));
        }
        for u in &basis {
            u.check_rank(rank)?;
        }
        if block_seq.len() < 2 {
            return Err(Error::InvalidParams("block sequence needs k >= 2 entries".into()));
        }
        if let Some(&p) = block_seq.iter().find(|&&p| p == 0 || p > 4) {
            return Err(Error::InvalidParams(format!(
                "block lengths must lie in 1..=4, got {p}"
            )));
        }
        if transcripts.len() != block_seq.len() {
            return Err(Error::InvalidParams(format!(
                "need one transcript per block: {} blocks, {} transcripts",
                block_seq.len(),
                transcripts.len()
            )));
        }
        for t in &transcripts {
            if !t.is_regular() {
                return Err(Error::SingularTranscript);
            }
        }
        for a in 0..transcripts.len() {
            for b in a + 1..transcripts.len() {
                if transcripts[a].moves() == transcripts[b].moves() {
                    return Err(Error::InvalidParams(format!(
                        "transcripts {} and {} are identical move lists",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        if let Some(perm) = &sigma {
            let mut seen = vec![false; perm.len()];
            for &v in perm {
                if v == 0 || v > perm.len() || seen[v - 1] {
                    return Err(Error::InvalidParams(format!("sigma is not a permutation: {perm:?}")));
                }
                seen[v - 1] = true;
            }
        }
        if let Some(ev) = &evolution {
            if !ev.transcript.is_regular() {
                return Err(Error::SingularTranscript);
            }
        }
        // freeness certificate for the subgroup basis: Nielsen-reducing the
        // tuple must succeed and pass the N0-N2 scan, which pins its rank
        // at exactly alphabet_size
        nielsen_reduce(&basis).map_err(|e| {
            Error::NotABasis(format!("cipher basis failed the reduction certificate: {e}"))
        })?;
        let key = CipherKey {
            alphabet_size,
            rank,
            lehner_params,
            basis,
            block_seq,
            transcripts,
            sigma,
            evolution,
        };
        // lookup-based decryption needs pairwise distinct row entries
        let tables = key.build_tables()?;
        for (i, row) in tables.iter().enumerate() {
            for a in 0..row.len() {
                for b in a + 1..row.len() {
                    if row[a] == row[b] {
                        return Err(Error::InvalidParams(format!(
                            "table row {} has duplicate matrices at letters {} and {}",
                            i + 1,
                            a + 1,
                            b + 1
                        )));
                    }
                }
            }
        }
        Ok(key)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn block_seq(&self) -> &[usize] {
        &self.block_seq
    }

    pub fn cycle_len(&self) -> usize {
        self.block_seq.iter().sum()
    }

    pub fn sigma(&self) -> Option<&[usize]> {
        self.sigma.as_deref()
    }

    pub fn evolution_counter(&self) -> Option<u64> {
        self.evolution.as_ref().map(|e| e.counter)
    }

    fn effective_transcript(&self, block: usize) -> Transcript {
        let mut t = self.transcripts[block].clone();
        if let Some(ev) = &self.evolution {
            for _ in 0..ev.counter {
                t = t.then(&ev.transcript);
            }
        }
        t
    }

    /// The k x N assignment table: row i holds the matrix images of the
    /// basis after transcript f_i (with any evolution applied). Both
    /// endpoints compute this independently from the shared key.
    pub fn build_tables(&self) -> Result<Vec<Vec<RatMatrix>>> {
        let rep = Representation::lehner(&self.lehner_params)?;
        let images = rep.eval_tuple(&self.basis)?;
        (0..self.block_seq.len())
            .map(|i| apply_transcript_mat(&images, &self.effective_transcript(i)))
            .collect()
    }
}

/// Generates a key. With a seed, per-block transcripts are drawn
/// deterministically; explicit transcripts are validated as-is.
pub fn keygen(
    alphabet_size: usize,
    rank: usize,
    block_seq: Vec<usize>,
    source: TranscriptSource,
    opts: KeygenOptions,
) -> Result<CipherKey> {
    let lehner_params = opts
        .lehner_params
        .unwrap_or_else(|| default_lehner_params(rank));
    let basis = opts.basis.unwrap_or_else(|| conjugate_basis(alphabet_size));
    let evolution = opts.evolution.map(|transcript| Evolution { transcript, counter: 0 });
    let transcripts = match source {
        TranscriptSource::Explicit(ts) => ts,
        TranscriptSource::Seed(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = block_seq.len();
            let mut ts: Vec<Transcript> = Vec::with_capacity(k);
            while ts.len() < k {
                let moves = rng.gen_range(4..=8);
                let t = random_regular_transcript(&mut rng, alphabet_size, moves);
                if ts.iter().all(|prev| prev.moves() != t.moves()) {
                    ts.push(t);
                }
            }
            ts
        }
    };
    CipherKey::from_parts(
        alphabet_size,
        rank,
        lehner_params,
        basis,
        block_seq,
        transcripts,
        opts.sigma,
        evolution,
    )
}

fn letter_to_index(c: char, alphabet_size: usize) -> Result<usize> {
    let idx = (c as u32).wrapping_sub('A' as u32).wrapping_add(1) as usize;
    if !c.is_ascii_uppercase() || idx > alphabet_size {
        return Err(Error::InvalidParams(format!(
            "letter {c:?} outside alphabet of size {alphabet_size}"
        )));
    }
    Ok(idx)
}

fn index_to_letter(idx: usize) -> char {
    (b'A' + (idx - 1) as u8) as char
}

/// Block row index for each position inside one cycle of P.
fn block_of_position(block_seq: &[usize]) -> Vec<usize> {
    let mut map = Vec::with_capacity(block_seq.iter().sum());
    for (i, &p) in block_seq.iter().enumerate() {
        map.extend(std::iter::repeat(i).take(p));
    }
    map
}

/// Encrypts an uppercase message. Messages longer than one block cycle are
/// cut into full-cycle segments; when the key carries a permutation the full
/// segments are reordered by it before encryption and a trailing partial
/// segment, if any, follows unpermuted.
pub fn encrypt(key: &CipherKey, message: &str) -> Result<Ciphertext> {
    let letters: Vec<usize> = message
        .chars()
        .map(|c| letter_to_index(c, key.alphabet_size))
        .collect::<Result<_>>()?;
    let tables = key.build_tables()?;
    let cycle = key.cycle_len();
    let pos_block = block_of_position(&key.block_seq);

    let encode_segment = |seg: &[usize], out: &mut Vec<RatMatrix>| {
        for (pos, &letter) in seg.iter().enumerate() {
            out.push(tables[pos_block[pos]][letter - 1].clone());
        }
    };

    let mut matrices = Vec::with_capacity(letters.len());
    if letters.len() <= cycle {
        encode_segment(&letters, &mut matrices);
        return Ok(Ciphertext { matrices, segments: 0, sigma_applied: false });
    }

    let full = letters.len() / cycle;
    let segments: Vec<&[usize]> = letters.chunks(cycle).take(full).collect();
    let remainder = &letters[full * cycle..];
    let sigma_applied = match key.sigma() {
        Some(perm) => {
            if perm.len() != full {
                return Err(Error::InvalidParams(format!(
                    "sigma permutes {} segments but the message has {full} full segments",
                    perm.len()
                )));
            }
            for &src in perm {
                encode_segment(segments[src - 1], &mut matrices);
            }
            true
        }
        None => {
            for seg in &segments {
                encode_segment(seg, &mut matrices);
            }
            false
        }
    };
    encode_segment(remainder, &mut matrices);
    Ok(Ciphertext { matrices, segments: full, sigma_applied })
}

/// Decrypts by exact-matrix lookup in the block tables, undoing the segment
/// permutation first when it was applied.
pub fn decrypt(key: &CipherKey, ct: &Ciphertext) -> Result<String> {
    let tables = key.build_tables()?;
    let cycle = key.cycle_len();
    let pos_block = block_of_position(&key.block_seq);

    let decode_segment = |seg: &[RatMatrix], offset: usize| -> Result<Vec<usize>> {
        seg.iter()
            .enumerate()
            .map(|(pos, m)| {
                let row = &tables[pos_block[pos]];
                row.iter().position(|cand| cand == m).map(|i| i + 1).ok_or(
                    Error::DecryptionFailure {
                        position: offset + pos,
                        reason: format!("matrix not found in table row {}", pos_block[pos] + 1),
                    },
                )
            })
            .collect()
    };

    let letters: Vec<usize> = if ct.segments == 0 {
        if ct.matrices.len() > cycle {
            return Err(Error::InvalidParams(
                "unsegmented ciphertext longer than one block cycle".into(),
            ));
        }
        decode_segment(&ct.matrices, 0)?
    } else {
        if ct.matrices.len() < ct.segments * cycle {
            return Err(Error::InvalidParams("ciphertext shorter than its segment count".into()));
        }
        let mut transmitted: Vec<Vec<usize>> = Vec::with_capacity(ct.segments);
        for k in 0..ct.segments {
            transmitted.push(decode_segment(&ct.matrices[k * cycle..(k + 1) * cycle], k * cycle)?);
        }
        let remainder = decode_segment(&ct.matrices[ct.segments * cycle..], ct.segments * cycle)?;
        if remainder.len() > cycle {
            return Err(Error::InvalidParams("trailing segment longer than one cycle".into()));
        }
        let mut ordered: Vec<Vec<usize>> = vec![Vec::new(); ct.segments];
        if ct.sigma_applied {
            let perm = key.sigma().ok_or_else(|| {
                Error::InvalidParams("ciphertext used sigma but the key has none".into())
            })?;
            if perm.len() != ct.segments {
                return Err(Error::InvalidParams(format!(
                    "sigma permutes {} segments, ciphertext has {}",
                    perm.len(),
                    ct.segments
                )));
            }
            for (k, seg) in transmitted.into_iter().enumerate() {
                ordered[perm[k] - 1] = seg;
            }
        } else {
            ordered = transmitted;
        }
        ordered.into_iter().flatten().chain(remainder).collect()
    };
    Ok(letters.into_iter().map(index_to_letter).collect())
}

/// Advances the key-evolution counter by one; at counter c every block
/// transcript acts as f_i followed by c copies of the evolution transcript.
pub fn evolve_key(key: &CipherKey) -> Result<CipherKey> {
    let mut key = key.clone();
    match &mut key.evolution {
        Some(ev) => {
            ev.counter += 1;
            Ok(key)
        }
        None => Err(Error::InvalidParams("no evolution transcript configured".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nielsen::ElementaryMove;
    use rand::Rng;

    fn small_key(seed: u64) -> CipherKey {
        keygen(5, 2, vec![1, 2], TranscriptSource::Seed(seed), KeygenOptions::default()).unwrap()
    }

    #[test]
    fn conjugate_basis_shape() {
        let basis = conjugate_basis(5);
        assert_eq!(basis[0].letters(), &[1, 2, -1]);
        assert_eq!(basis[4].letters(), &[1, 1, 1, 1, 1, 2, -1, -1, -1, -1, -1]);
    }

    #[test]
    fn keygen_is_deterministic_per_seed() {
        assert_eq!(small_key(7), small_key(7));
        assert_ne!(small_key(7), small_key(8));
    }

    #[test]
    fn keygen_rejects_duplicate_transcripts() {
        let t = Transcript::regular(vec![ElementaryMove::invert(1)]).unwrap();
        let err = keygen(
            5,
            2,
            vec![1, 1],
            TranscriptSource::Explicit(vec![t.clone(), t]),
            KeygenOptions::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn keygen_constraint_checks() {
        assert!(keygen(4, 2, vec![1, 2], TranscriptSource::Seed(0), KeygenOptions::default()).is_err());
        assert!(keygen(5, 2, vec![1], TranscriptSource::Seed(0), KeygenOptions::default()).is_err());
        assert!(keygen(5, 2, vec![1, 5], TranscriptSource::Seed(0), KeygenOptions::default()).is_err());
        assert!(keygen(5, 1, vec![1, 2], TranscriptSource::Seed(0), KeygenOptions::default()).is_err());
    }

    #[test]
    fn identity_transcript_rows_equal_base_images() {
        let empty = Transcript::empty();
        let one_move = Transcript::regular(vec![ElementaryMove::invert(1)]).unwrap();
        let key = keygen(
            5,
            2,
            vec![1, 2],
            TranscriptSource::Explicit(vec![empty, one_move]),
            KeygenOptions::default(),
        )
        .unwrap();
        let rep = Representation::lehner(&default_lehner_params(2)).unwrap();
        let images = rep.eval_tuple(&conjugate_basis(5)).unwrap();
        let tables = key.build_tables().unwrap();
        assert_eq!(tables[0], images);
        assert_ne!(tables[1], images);

        // with an identity row, "A" then "B" in blocks of the first row
        // encrypt straight to the base images
        let ct = encrypt(&key, "AB").unwrap();
        assert_eq!(ct.matrices[0], images[0]);
        assert_eq!(ct.matrices[1], images[1]);
    }

    #[test]
    fn roundtrip_short_equal_and_long() {
        let key = small_key(99);
        let cycle = key.cycle_len();
        assert_eq!(cycle, 3);
        for msg in ["", "A", "ABC", "ABCDEABCD", "EDCBAEDCBAED"] {
            let ct = encrypt(&key, msg).unwrap();
            assert_eq!(decrypt(&key, &ct).unwrap(), msg, "msg = {msg}");
            assert_eq!(ct.matrices.len(), msg.len());
        }
    }

    #[test]
    fn roundtrip_with_sigma() {
        let opts = KeygenOptions { sigma: Some(vec![3, 1, 2]), ..Default::default() };
        let key = keygen(5, 2, vec![1, 2], TranscriptSource::Seed(4), opts).unwrap();
        // 3 full segments of cycle length 3
        let msg = "ABCDEABCE";
        let ct = encrypt(&key, msg).unwrap();
        assert!(ct.sigma_applied);
        assert_eq!(ct.segments, 3);
        assert_eq!(decrypt(&key, &ct).unwrap(), msg);

        // trailing partial segment follows the permuted full segments
        let msg = "ABCDEABCEDA";
        let ct = encrypt(&key, msg).unwrap();
        assert_eq!(decrypt(&key, &ct).unwrap(), msg);

        // wrong number of full segments for sigma
        assert!(encrypt(&key, "ABCDEABCDEAB").is_err());
    }

    #[test]
    fn letter_outside_alphabet() {
        let key = small_key(1);
        assert!(encrypt(&key, "F").is_err());
        assert!(encrypt(&key, "a").is_err());
    }

    #[test]
    fn tampered_matrix_fails_lookup() {
        let key = small_key(5);
        let mut ct = encrypt(&key, "ABCDE").unwrap();
        ct.matrices[2] = RatMatrix::identity();
        match decrypt(&key, &ct) {
            Err(Error::DecryptionFailure { position: 2, .. }) => {}
            other => panic!("expected lookup failure at position 2, got {other:?}"),
        }
    }

    #[test]
    fn polyalphabetic_witness() {
        // find a key where the same letter encrypts differently per block
        let key = small_key(2);
        let tables = key.build_tables().unwrap();
        assert!(
            (0..key.alphabet_size()).any(|t| tables[0][t] != tables[1][t]),
            "rows identical; expected a polyalphabetic witness"
        );
    }

    #[test]
    fn evolution_matches_manual_concatenation() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let f = random_regular_transcript(&mut rng, 5, 5);
        let opts = KeygenOptions { evolution: Some(f.clone()), ..Default::default() };
        let key0 = keygen(5, 2, vec![2, 1], TranscriptSource::Seed(31), opts).unwrap();
        assert_eq!(key0.evolution_counter(), Some(0));

        let key1 = evolve_key(&key0).unwrap();
        assert_eq!(key1.evolution_counter(), Some(1));
        // counter 1 equals manually appending f to each block transcript
        let manual: Vec<Transcript> = key0.transcripts.iter().map(|t| t.then(&f)).collect();
        let manual_key = CipherKey::from_parts(
            5,
            2,
            key0.lehner_params.clone(),
            key0.basis.clone(),
            key0.block_seq.clone(),
            manual,
            None,
            None,
        )
        .unwrap();
        assert_eq!(key1.build_tables().unwrap(), manual_key.build_tables().unwrap());

        // two single evolutions equal one double step
        let key2 = evolve_key(&key1).unwrap();
        let mut jumped = key0.clone();
        jumped.evolution.as_mut().unwrap().counter = 2;
        assert_eq!(key2.build_tables().unwrap(), jumped.build_tables().unwrap());

        // endpoints in lockstep: evolved encrypt / evolved decrypt round-trips
        let ct = encrypt(&key2, "EDCBA").unwrap();
        assert_eq!(decrypt(&key2, &ct).unwrap(), "EDCBA");
        assert!(decrypt(&key0, &ct).is_err() || decrypt(&key0, &ct).unwrap() != "EDCBA");
    }

    #[test]
    fn evolve_without_config_is_error() {
        assert!(evolve_key(&small_key(3)).is_err());
    }

    #[test]
    fn key_serde_roundtrip_revalidates() {
        let key = small_key(17);
        let json = serde_json::to_string(&key).unwrap();
        let back: CipherKey = serde_json::from_str(&json).unwrap();
        assert_eq!(back, key);

        // corrupt N below the minimum; deserialization must reject it
        let bad = json.replace("\"N\":5", "\"N\":4");
        assert!(serde_json::from_str::<CipherKey>(&bad).is_err());
    }

    #[test]
    fn random_roundtrips() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for case in 0..30 {
            let key = small_key(1000 + case);
            let len = rng.gen_range(0..20);
            let msg: String = (0..len)
                .map(|_| index_to_letter(rng.gen_range(1..=5)))
                .collect();
            let ct = encrypt(&key, &msg).unwrap();
            assert_eq!(decrypt(&key, &ct).unwrap(), msg);
            for m in &ct.matrices {
                assert_eq!(m.det(), Rational::one());
            }
        }
    }
}
