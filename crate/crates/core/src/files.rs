//! On-disk document formats.
//!
//! Every document is canonical JSON (see [`crate::canon`]) carrying a
//! `schema` tag such as `"share/v1"`. Loading checks the tag before trusting
//! the rest of the payload; saving always stamps the right tag. Share files
//! never contain the secret or the full scrambled tuples, only the items the
//! participant is entitled to; the dealer record is the sensitive document.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::canon::{read_json, write_canonical};
use crate::cipher::{CipherKey, Ciphertext};
use crate::error::{Error, Result};
use crate::nielsen::Transcript;
use crate::pubkey::{PkCiphertext, PkPrivate, PkPublic};
use crate::ratmat::Rational;
use crate::sss::{CombShare, LengthShare, NielsenShare, SecretFn};
use crate::word::Word;

/// A document type with a fixed schema tag.
pub trait SchemaTagged {
    const SCHEMA: &'static str;
    fn schema(&self) -> &str;
}

/// Loads a document, rejecting a wrong or missing schema tag.
pub fn load<T: SchemaTagged + DeserializeOwned>(path: &Path) -> Result<T> {
    let doc: T = read_json(path)?;
    if doc.schema() != T::SCHEMA {
        return Err(Error::InvalidParams(format!(
            "{}: schema {:?}, expected {:?}",
            path.display(),
            doc.schema(),
            T::SCHEMA
        )));
    }
    Ok(doc)
}

/// Saves a document canonically and atomically.
pub fn save<T: SchemaTagged + Serialize>(path: &Path, doc: &T) -> Result<()> {
    debug_assert_eq!(doc.schema(), T::SCHEMA);
    write_canonical(path, doc)
}

macro_rules! schema_tagged {
    ($ty:ty, $tag:literal) => {
        impl SchemaTagged for $ty {
            const SCHEMA: &'static str = $tag;
            fn schema(&self) -> &str {
                &self.schema
            }
        }
    };
}

/// One participant's share of any of the three schemes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShareFile {
    pub schema: String,
    pub n: usize,
    pub t: usize,
    #[serde(flatten)]
    pub body: ShareBody,
}
schema_tagged!(ShareFile, "share/v1");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum ShareBody {
    Comb {
        #[serde(flatten)]
        share: CombShare,
    },
    Nielsen {
        #[serde(flatten)]
        share: NielsenShare,
        secret_fn: SecretFn,
    },
    Length {
        #[serde(flatten)]
        share: LengthShare,
        rank: usize,
    },
}

impl ShareFile {
    pub fn new(n: usize, t: usize, body: ShareBody) -> ShareFile {
        ShareFile { schema: Self::SCHEMA.into(), n, t, body }
    }

    pub fn participant(&self) -> usize {
        match &self.body {
            ShareBody::Comb { share } => share.participant,
            ShareBody::Nielsen { share, .. } => share.participant,
            ShareBody::Length { share, .. } => share.participant,
        }
    }

    pub fn scheme_name(&self) -> &'static str {
        match &self.body {
            ShareBody::Comb { .. } => "comb",
            ShareBody::Nielsen { .. } => "nielsen",
            ShareBody::Length { .. } => "length",
        }
    }
}

/// Dealer's private record of a deal: holds the secret, so it must never be
/// handed to participants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DealerRecordFile {
    pub schema: String,
    pub scheme: String,
    pub n: usize,
    pub t: usize,
    pub secret: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}
schema_tagged!(DealerRecordFile, "dealer-record/v1");

impl DealerRecordFile {
    pub fn new(scheme: &str, n: usize, t: usize, secret: Rational, warning: Option<String>) -> Self {
        DealerRecordFile {
            schema: Self::SCHEMA.into(),
            scheme: scheme.into(),
            n,
            t,
            secret,
            warning,
        }
    }
}

/// A plain word tuple, input and output of the reduction commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleFile {
    pub schema: String,
    pub rank: usize,
    pub words: Vec<Word>,
}
schema_tagged!(TupleFile, "tuple/v1");

impl TupleFile {
    pub fn new(rank: usize, words: Vec<Word>) -> TupleFile {
        TupleFile { schema: Self::SCHEMA.into(), rank, words }
    }
}

/// A standalone transcript document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptFile {
    pub schema: String,
    pub transcript: Transcript,
}
schema_tagged!(TranscriptFile, "transcript/v1");

impl TranscriptFile {
    pub fn new(transcript: Transcript) -> TranscriptFile {
        TranscriptFile { schema: Self::SCHEMA.into(), transcript }
    }
}

/// Output of `group reduce`: the reduced tuple plus the replayable move list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionFile {
    pub schema: String,
    pub rank: usize,
    pub reduced: Vec<Word>,
    pub transcript: Transcript,
}
schema_tagged!(ReductionFile, "reduction/v1");

impl ReductionFile {
    pub fn new(rank: usize, reduced: Vec<Word>, transcript: Transcript) -> ReductionFile {
        ReductionFile { schema: Self::SCHEMA.into(), rank, reduced, transcript }
    }
}

/// Symmetric key document. Deserializing re-runs every key validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CipherKeyFile {
    pub schema: String,
    #[serde(flatten)]
    pub key: CipherKey,
}
schema_tagged!(CipherKeyFile, "cipher-key/v1");

impl CipherKeyFile {
    pub fn new(key: CipherKey) -> CipherKeyFile {
        CipherKeyFile { schema: Self::SCHEMA.into(), key }
    }
}

/// Symmetric ciphertext document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CiphertextFile {
    pub schema: String,
    #[serde(flatten)]
    pub body: Ciphertext,
}
schema_tagged!(CiphertextFile, "ciphertext/v1");

impl CiphertextFile {
    pub fn new(body: Ciphertext) -> CiphertextFile {
        CiphertextFile { schema: Self::SCHEMA.into(), body }
    }
}

/// Public-key document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PkPublicFile {
    pub schema: String,
    #[serde(flatten)]
    pub key: PkPublic,
}
schema_tagged!(PkPublicFile, "pk-public/v1");

impl PkPublicFile {
    pub fn new(key: PkPublic) -> PkPublicFile {
        PkPublicFile { schema: Self::SCHEMA.into(), key }
    }
}

/// Private-key document (just the exponent).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PkPrivateFile {
    pub schema: String,
    #[serde(flatten)]
    pub key: PkPrivate,
}
schema_tagged!(PkPrivateFile, "pk-private/v1");

impl PkPrivateFile {
    pub fn new(key: PkPrivate) -> PkPrivateFile {
        PkPrivateFile { schema: Self::SCHEMA.into(), key }
    }
}

/// Public-key ciphertext document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PkCiphertextFile {
    pub schema: String,
    #[serde(flatten)]
    pub body: PkCiphertext,
}
schema_tagged!(PkCiphertextFile, "pk-ciphertext/v1");

impl PkCiphertextFile {
    pub fn new(body: PkCiphertext) -> PkCiphertextFile {
        PkCiphertextFile { schema: Self::SCHEMA.into(), body }
    }
}
