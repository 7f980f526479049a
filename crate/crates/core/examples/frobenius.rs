//! The canonical commutative algebra on a finite set: multiplication is the
//! fold map, and it is rigid and Frobenius.

use cospans::frobenius::{canonical_algebra, verify_frobenius, verify_rigid};
use cospans::FinSet;

fn main() -> cospans::Result<()> {
    for n in 0..=3 {
        let a = FinSet::standard("x", n);
        let alg = canonical_algebra(&a);
        let rigid = verify_rigid(&alg);
        let frob = verify_frobenius(&alg)?;
        println!(
            "|A| = {n}: rigid {} (projection cell {:?}), counit apex {}, comult apex {}",
            rigid.is_rigid(),
            rigid
                .projection_formula
                .as_ref()
                .map(|c| c.map().as_slice().to_vec()),
            frob.counit.apex().len(),
            frob.comult.apex().len(),
        );
    }
    Ok(())
}
