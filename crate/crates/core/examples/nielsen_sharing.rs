//! The simultaneous-Nielsen secret-sharing scheme on the worked (3,2)
//! instance: Lehner parameters (7/2, 15/2, 11), secret 589/2310.

use fgcrypt::nielsen::{ElementaryMove, Transcript};
use fgcrypt::ratmat::lehner_generators;
use fgcrypt::sss::{deal_nielsen, reconstruct_nielsen, same_up_to_perm_and_inv, SecretFn};

fn main() {
    let params: Vec<_> = ["7/2", "15/2", "11"].iter().map(|s| s.parse().unwrap()).collect();
    let t2 = |i, j| ElementaryMove::multiply_right(i, j).unwrap();
    // the dealer's scramble: 8 published rows, 10 elementary moves
    let transcript = Transcript::regular(vec![
        ElementaryMove::invert(2),
        t2(1, 2),
        t2(3, 2),
        t2(3, 2),
        t2(3, 2),
        t2(2, 3),
        ElementaryMove::invert(1),
        t2(1, 2),
        ElementaryMove::invert(3),
        t2(3, 2),
    ])
    .unwrap();

    let deal = deal_nielsen(3, 2, &params, &transcript, SecretFn::SumInvAbsTrace).unwrap();
    println!("secret S = sum of 1/|tr M_j| = {}", deal.secret);
    for share in &deal.shares {
        println!(
            "  participant {}: word slots {:?}, matrix set S_{}",
            share.participant,
            share.word_items.iter().map(|(j, _)| *j).collect::<Vec<_>>(),
            share.matrix_set
        );
    }

    let rec = reconstruct_nielsen(
        3,
        2,
        &[deal.shares[0].clone(), deal.shares[1].clone()],
        SecretFn::SumInvAbsTrace,
    )
    .unwrap();
    println!("participants 1 and 2 recover S = {}", rec.secret);

    let original = lehner_generators(&params).unwrap();
    println!(
        "recovered matrices match the dealer's generators up to order and inversion: {}",
        same_up_to_perm_and_inv(&rec.matrices, &original)
    );
}
