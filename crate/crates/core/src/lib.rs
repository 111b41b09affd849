//! Group-based cryptography toolkit: free-group word algebra, transcript-
//! emitting Nielsen reduction, exact SL(2,Q) matrices, three (n,t)
//! secret-sharing schemes, a polyalphabetic symmetric cipher, and a
//! public-key scheme built on free-group automorphisms.
//!
//! All arithmetic is exact (arbitrary-precision rationals); all external
//! formats are canonical JSON. Start with [`word::Word`] and
//! [`nielsen::Transcript`] for the algebra, or the `sss`, `cipher`, and
//! `pubkey` modules for the protocols.

pub mod canon;
pub mod cipher;
pub mod error;
pub mod files;
pub mod nielsen;
pub mod pubkey;
pub mod ratmat;
pub mod shares;
pub mod sss;
pub mod word;

pub use error::{Error, Result};
pub use nielsen::{
    apply_transcript, invert_transcript, is_nielsen_reduced, nielsen_reduce, ElementaryMove,
    Transcript,
};
pub use ratmat::{RatMatrix, Rational};
pub use word::{Endomorphism, Word};
