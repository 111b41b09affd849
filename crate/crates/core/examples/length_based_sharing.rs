//! The length-based secret-sharing scheme: the dealer's Nielsen-reduced
//! tuple is scrambled, and the secret (sum of reciprocal word lengths)
//! survives because reduction recovers the minimal total length.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fgcrypt::nielsen::random_regular_transcript;
use fgcrypt::sss::{deal_length, reconstruct_length};
use fgcrypt::word::Word;

fn main() {
    // a Nielsen-reduced dealer tuple with lengths 2, 3, 1
    let tuple = vec![
        Word::reduce(&[1, 2]).unwrap(),
        Word::reduce(&[2, -3, 2]).unwrap(),
        Word::reduce(&[3]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let scramble = random_regular_transcript(&mut rng, 3, 15);

    let deal = deal_length(3, 2, 3, &tuple, &scramble).unwrap();
    println!("secret S = 1/2 + 1/3 + 1/1 = {}", deal.secret);
    for share in &deal.shares {
        println!("  participant {}:", share.participant);
        for (slot, w) in &share.items {
            println!("    slot {slot}: {w}");
        }
    }

    let rec = reconstruct_length(3, 2, &deal.shares[1..3]).unwrap();
    println!("participants 2 and 3 recover S = {}", rec.secret);
    let total: usize = rec.reduced.iter().map(Word::len).sum();
    println!("their reduced tuple has the dealer's total length {total}");
}
