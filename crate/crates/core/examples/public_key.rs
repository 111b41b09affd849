//! The public-key scheme: the published word is f^n(a) for a secret
//! exponent n; a session exponent t masks the message, and the receiver
//! strips the mask via f^n(f^t(a)).

use fgcrypt::pubkey::{decrypt, encrypt, keygen, PkMode};
use fgcrypt::ratmat::default_lehner_params;
use fgcrypt::word::Word;

fn main() {
    // f: x1 -> x2, x2 -> x1 x2 (infinite order), base a = x1 x2, n = 5
    let images = vec![Word::reduce(&[2]).unwrap(), Word::reduce(&[1, 2]).unwrap()];
    let base = Word::reduce(&[1, 2]).unwrap();
    let keys = keygen(2, base, images.clone(), 5, PkMode::Word, None).unwrap();
    println!("published c = f^5(a) = {}", keys.public.published());

    let m = Word::reduce(&[1, -2, 1]).unwrap();
    let ct = encrypt(&keys.public, &m, 3).unwrap();
    println!("session t = 3 sends c2 = f^3(a) = {}", ct.c2);
    let back = decrypt(&keys.public, &keys.private, &ct).unwrap();
    println!("receiver recovers m = {back}");
    assert_eq!(back, m);

    // matrix mode: single-letter messages hide inside an SL(2,Q) product
    let keys = keygen(
        2,
        Word::reduce(&[1, 2]).unwrap(),
        images,
        4,
        PkMode::Matrix,
        Some(default_lehner_params(2)),
    )
    .unwrap();
    let m = Word::reduce(&[-2]).unwrap();
    let ct = encrypt(&keys.public, &m, 2).unwrap();
    println!("matrix mode recovers {}", decrypt(&keys.public, &keys.private, &ct).unwrap());
}
