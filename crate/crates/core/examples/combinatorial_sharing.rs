//! The (4,3) combinatorial secret-sharing scheme: six naturals are spread
//! over four participants so any three recover the sum of reciprocals and
//! any two are left with uncovered slots.

use fgcrypt::sss::{deal_combinatorial, reconstruct_combinatorial};

fn main() {
    let values = [2u64, 1, 2, 8, 4, 2];
    let deal = deal_combinatorial(4, 3, &values, None).expect("valid parameters");
    println!("dealt items {values:?} with secret S = {}", deal.secret);
    for share in &deal.shares {
        println!("  participant {} holds slots {:?}", share.participant, share.items);
    }

    let recovered = reconstruct_combinatorial(4, 3, &deal.shares[0..3]).unwrap();
    println!("participants 1-3 reconstruct S = {recovered}");

    match reconstruct_combinatorial(4, 3, &deal.shares[0..2]) {
        Err(e) => println!("participants 1-2 alone fail: {e}"),
        Ok(_) => unreachable!("two shares cannot cover six slots"),
    }

    // with a target secret the same items work, plus a public factor x
    let target = "1".parse().unwrap();
    let special = deal_combinatorial(4, 3, &values, Some(&target)).unwrap();
    println!(
        "special secret {}: every share also carries x = {}",
        special.secret,
        special.shares[0].special_factor.as_ref().unwrap()
    );
}
