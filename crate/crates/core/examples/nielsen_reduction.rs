//! Scramble a free basis with random Nielsen moves, then reduce the result
//! back to a basis, printing the emitted transcript.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fgcrypt::nielsen::{
    apply_transcript, is_nielsen_reduced, nielsen_reduce, random_regular_transcript,
};
use fgcrypt::word::Word;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let basis: Vec<Word> = (1..=3).map(Word::generator).collect();
    let scramble = random_regular_transcript(&mut rng, 3, 12);
    let scrambled = apply_transcript(&basis, &scramble).unwrap();

    println!("scrambled tuple:");
    for w in &scrambled {
        println!("  {w}");
    }
    println!("Nielsen reduced? {}", is_nielsen_reduced(&scrambled).is_none());

    let res = nielsen_reduce(&scrambled).unwrap();
    println!("reduced tuple:");
    for w in &res.reduced {
        println!("  {w}");
    }
    println!(
        "recovered a free basis via {} elementary moves; transcript JSON:",
        res.transcript.len()
    );
    println!("{}", serde_json::to_string(&res.transcript).unwrap());

    // the transcript replays the scrambled tuple onto the reduced one
    assert_eq!(apply_transcript(&scrambled, &res.transcript).unwrap(), res.reduced);
    println!("replaying the transcript reproduces the reduced tuple");
}
