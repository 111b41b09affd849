//! Public-key scheme over free-group automorphisms.
//!
//! The public key publishes a base word `a`, an automorphism `f` given by
//! generator images, and `c = f^n(a)`; the private key is the exponent `n`.
//! Encryption picks a session exponent `t` and sends
//! `(m * f^t(c), f^t(a))`; decryption uses `f^t(c) = f^n(f^t(a))` to strip
//! the mask. In matrix mode the first component is pushed through a faithful
//! SL(2,Q) representation and the (single-letter) message is recovered by
//! lookup among the generator images.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nielsen::nielsen_reduce;
use crate::ratmat::{lehner_generators, RatMatrix, Rational, Representation};
use crate::word::{Endomorphism, Word};

/// Cap on key and session exponents; word length under iterated
/// automorphisms can grow exponentially in the exponent.
pub const DEFAULT_POWER_CAP: u64 = 64;

/// Which form the masked message component takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PkMode {
    Word,
    Matrix,
}

/// Public key: everything an encryptor needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PkPublicRepr", into = "PkPublicRepr")]
pub struct PkPublic {
    rank: usize,
    base: Word,
    automorphism: Endomorphism,
    published: Word,
    mode: PkMode,
    lehner_params: Option<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct PkPublicRepr {
    #[serde(rename = "q")]
    rank: usize,
    a: Word,
    f_images: Vec<Word>,
    c: Word,
    mode: PkMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lehner_r: Option<Vec<Rational>>,
}

impl From<PkPublic> for PkPublicRepr {
    fn from(p: PkPublic) -> PkPublicRepr {
        PkPublicRepr {
            rank: p.rank,
            a: p.base,
            f_images: p.automorphism.images().to_vec(),
            c: p.published,
            mode: p.mode,
            lehner_r: p.lehner_params,
        }
    }
}

impl TryFrom<PkPublicRepr> for PkPublic {
    type Error = Error;

    fn try_from(r: PkPublicRepr) -> Result<PkPublic> {
        PkPublic::from_parts(r.rank, r.a, r.f_images, r.c, r.mode, r.lehner_r)
    }
}

/// Private key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PkPrivate {
    #[serde(rename = "n")]
    pub exponent: u64,
}

/// Keygen output; warnings flag degenerate but not invalid keys.
#[derive(Clone, Debug)]
pub struct PkKeygenOutcome {
    pub public: PkPublic,
    pub private: PkPrivate,
    pub warnings: Vec<String>,
}

/// Ciphertext pair. The first component is a word, or its matrix image in
/// matrix mode; the second is always the word `f^t(a)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PkCiphertext {
    pub c1: PkPayload,
    pub c2: Word,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PkPayload {
    Matrix(RatMatrix),
    Word(Word),
}

impl PkPublic {
    fn from_parts(
        rank: usize,
        base: Word,
        images: Vec<Word>,
        published: Word,
        mode: PkMode,
        lehner_params: Option<Vec<Rational>>,
    ) -> Result<PkPublic> {
        if rank < 2 {
            return Err(Error::InvalidParams("rank must be at least 2".into()));
        }
        if base.is_empty() {
            return Err(Error::InvalidParams("base word must be non-trivial".into()));
        }
        base.check_rank(rank)?;
        published.check_rank(rank)?;
        if images.len() != rank {
            return Err(Error::InvalidParams(format!(
                "need {rank} generator images, got {}",
                images.len()
            )));
        }
        let automorphism = Endomorphism::new(images)?;
        certify_automorphism(&automorphism)?;
        match (mode, &lehner_params) {
            (PkMode::Matrix, None) => {
                return Err(Error::InvalidParams(
                    "matrix mode requires Lehner parameters".into(),
                ))
            }
            (PkMode::Matrix, Some(params)) => {
                if params.len() != rank {
                    return Err(Error::InvalidParams(format!(
                        "need {rank} Lehner parameters, got {}",
                        params.len()
                    )));
                }
                // validity of the spacing constraints
                lehner_generators(params)?;
            }
            (PkMode::Word, _) => {}
        }
        Ok(PkPublic {
            rank,
            base,
            automorphism,
            published,
            mode,
            lehner_params,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base(&self) -> &Word {
        &self.base
    }

    pub fn automorphism(&self) -> &Endomorphism {
        &self.automorphism
    }

    pub fn published(&self) -> &Word {
        &self.published
    }

    pub fn mode(&self) -> PkMode {
        self.mode
    }

    fn representation(&self) -> Result<Representation> {
        let params = self
            .lehner_params
            .as_ref()
            .ok_or_else(|| Error::InvalidParams("matrix mode requires Lehner parameters".into()))?;
        Representation::lehner(params)
    }
}

/// Basis certificate: the images must Nielsen-reduce to the standard basis
/// (single letters with distinct indices covering 1..=rank), which is what
/// makes `f` an automorphism rather than just an endomorphism.
fn certify_automorphism(f: &Endomorphism) -> Result<()> {
    let reduction = nielsen_reduce(f.images())
        .map_err(|e| Error::NotABasis(format!("generator images failed reduction: {e}")))?;
    let mut indices: Vec<u32> = Vec::with_capacity(f.rank());
    for w in &reduction.reduced {
        if w.len() != 1 {
            return Err(Error::NotABasis(format!(
                "images reduce to {:?}, not single generators",
                reduction.reduced
            )));
        }
        indices.push(w.max_generator());
    }
    indices.sort_unstable();
    if indices != (1..=f.rank() as u32).collect::<Vec<_>>() {
        return Err(Error::NotABasis(format!(
            "reduced images cover generator indices {indices:?}, expected 1..={}",
            f.rank()
        )));
    }
    Ok(())
}

fn check_exponent(t: u64) -> Result<()> {
    if t == 0 || t > DEFAULT_POWER_CAP {
        return Err(Error::InvalidParams(format!(
            "exponent must lie in 1..={DEFAULT_POWER_CAP}, got {t}"
        )));
    }
    Ok(())
}

/// Generates a key pair from the automorphism images, base word, and secret
/// exponent. Fails if the images are not a basis; warns on degenerate keys
/// (finite-order `f`, or a base fixed by `f^n`).
pub fn keygen(
    rank: usize,
    base: Word,
    images: Vec<Word>,
    exponent: u64,
    mode: PkMode,
    lehner_params: Option<Vec<Rational>>,
) -> Result<PkKeygenOutcome> {
    check_exponent(exponent)?;
    let f = Endomorphism::new(images.clone())?;
    let published = f.power(exponent)?.apply(&base)?;
    let public = PkPublic::from_parts(rank, base.clone(), images, published.clone(), mode, lehner_params)?;

    let mut warnings = Vec::new();
    let mut power = Endomorphism::identity(rank);
    for k in 1..=12u64 {
        power = f.compose(&power)?;
        if power.is_identity() {
            warnings.push(format!(
                "automorphism has finite order {k}; masks repeat with period {k}"
            ));
            break;
        }
    }
    if published == base {
        warnings.push("f^n fixes the base word; the published word equals the base".into());
    }
    if mode == PkMode::Matrix {
        // matrix-mode decryption is lookup among {g(x_i)^+-1}; those 2q
        // matrices are pairwise distinct for valid Lehner parameters, but
        // verify rather than assume
        let rep = public.representation()?;
        let mut cands: Vec<RatMatrix> = Vec::new();
        for img in rep.images() {
            cands.push(img.clone());
            cands.push(img.inv());
        }
        for a in 0..cands.len() {
            for b in a + 1..cands.len() {
                if cands[a] == cands[b] {
                    return Err(Error::InvalidParams(
                        "generator matrix images are not pairwise distinct".into(),
                    ));
                }
            }
        }
    }
    Ok(PkKeygenOutcome {
        public,
        private: PkPrivate { exponent },
        warnings,
    })
}

/// Encrypts `m` under a fresh session exponent `t`.
pub fn encrypt(public: &PkPublic, m: &Word, t: u64) -> Result<PkCiphertext> {
    check_exponent(t)?;
    m.check_rank(public.rank)?;
    let ft = public.automorphism.power(t)?;
    let mask = ft.apply(&public.published)?;
    let c2 = ft.apply(&public.base)?;
    let c1 = match public.mode {
        PkMode::Word => PkPayload::Word(m.mul(&mask)),
        PkMode::Matrix => {
            if m.len() != 1 {
                return Err(Error::InvalidParams(format!(
                    "matrix mode carries single-letter messages, got length {}",
                    m.len()
                )));
            }
            let rep = public.representation()?;
            PkPayload::Matrix(rep.eval_word(m)?.mul(&rep.eval_word(&mask)?))
        }
    };
    Ok(PkCiphertext { c1, c2 })
}

/// Decrypts with the private exponent: the mask `f^t(c)` is recomputed as
/// `f^n(c2)` and stripped from the right.
pub fn decrypt(public: &PkPublic, private: &PkPrivate, ct: &PkCiphertext) -> Result<Word> {
    check_exponent(private.exponent)?;
    ct.c2.check_rank(public.rank)?;
    let mask = public.automorphism.power(private.exponent)?.apply(&ct.c2)?;
    match (&ct.c1, public.mode) {
        (PkPayload::Word(c1), PkMode::Word) => Ok(c1.mul(&mask.inv())),
        (PkPayload::Matrix(c1), PkMode::Matrix) => {
            let rep = public.representation()?;
            let target = c1.mul(&rep.eval_word(&mask)?.inv());
            for i in 1..=public.rank as u32 {
                let img = &rep.images()[(i - 1) as usize];
                if *img == target {
                    return Ok(Word::generator(i));
                }
                if img.inv() == target {
                    return Ok(Word::generator(i).inv());
                }
            }
            Err(Error::DecryptionFailure {
                position: 0,
                reason: "unmasked matrix is not a generator image or inverse".into(),
            })
        }
        _ => Err(Error::InvalidParams(
            "ciphertext payload does not match the key mode".into(),
        )),
    }
}
