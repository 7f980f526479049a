//! Enumerates unital multiplications on a small set (up to 2-isomorphism,
//! bounded apex) and shows each one is the fold map.

use cospans::frobenius::classify_unital_multiplications;
use cospans::FinSet;

fn main() -> cospans::Result<()> {
    for n in 0..=2 {
        let a = FinSet::standard("a", n);
        let found = classify_unital_multiplications(&a, 3)?;
        for c in &found {
            println!(
                "|A| = {n}: multiplication with apex {} is the fold via {:?}",
                c.mult.apex().len(),
                c.to_fold.map().as_slice()
            );
        }
    }
    Ok(())
}
