//! The polyalphabetic symmetric cipher: letters become exact SL(2,Q)
//! matrices, with the block sequence switching tables mid-message, optional
//! segment permutation, and key evolution.

use fgcrypt::cipher::{decrypt, encrypt, evolve_key, keygen, KeygenOptions, TranscriptSource};
use fgcrypt::nielsen::{ElementaryMove, Transcript};

fn main() {
    // alphabet A..=H, blocks P = (1, 2): table row 1 covers one position,
    // row 2 the next two, repeating every 3 letters of a long message
    let evolution = Transcript::regular(vec![
        ElementaryMove::invert(1),
        ElementaryMove::multiply_right(2, 1).unwrap(),
    ])
    .unwrap();
    let opts = KeygenOptions {
        sigma: Some(vec![2, 3, 1]),
        evolution: Some(evolution),
        ..Default::default()
    };
    let key = keygen(8, 2, vec![1, 2], TranscriptSource::Seed(42), opts).unwrap();

    // same letter, different block: the hallmark of a polyalphabetic cipher
    let ct = encrypt(&key, "AA").unwrap();
    println!("'AA' encrypts to two different matrices: {}", ct.matrices[0] != ct.matrices[1]);

    // nine letters = three full segments; sigma reorders them on the wire
    let msg = "HABCDEFGH";
    let ct = encrypt(&key, msg).unwrap();
    println!(
        "{msg:?} -> {} matrices in {} permuted segments (sigma applied: {})",
        ct.matrices.len(),
        ct.segments,
        ct.sigma_applied
    );
    println!("decrypts back to {:?}", decrypt(&key, &ct).unwrap());

    // key evolution: both endpoints advance their counters in lockstep
    let key1 = evolve_key(&key).unwrap();
    let ct1 = encrypt(&key1, "DEADBEEFA").unwrap();
    println!("evolved key round-trips: {:?}", decrypt(&key1, &ct1).unwrap());
    println!(
        "stale key rejects the evolved ciphertext: {}",
        decrypt(&key, &ct1).is_err()
    );
}
