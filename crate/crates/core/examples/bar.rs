//! Pushouts of commutative algebras computed by a truncated bar complex.

use cospans::bar::{
    bar_truncation, check_simplicial_identities, pushout_algebra, verify_bar_cocone,
};
use cospans::{FinFn, FinSet};

fn main() -> cospans::Result<()> {
    let a = FinSet::standard("a", 2);
    let b = FinSet::standard("b", 2);
    let c = FinSet::standard("c", 1);
    let f = FinFn::new(a.clone(), b, vec![0, 0])?;
    let g = FinFn::new(a, c, vec![0, 0])?;

    let t = bar_truncation(&f, &g, 3)?;
    for (k, level) in t.levels.iter().enumerate() {
        println!("level {k}: {} points", level.len());
    }
    println!(
        "simplicial identities checked: {}",
        check_simplicial_identities(&t)?
    );

    let p = pushout_algebra(&f, &g)?;
    println!("pushout carrier {:?}", p.algebra.carrier.elements());
    println!("pushout algebra rigid: {}", p.rigidity.is_rigid());
    let cocone = verify_bar_cocone(&t, &p)?;
    println!(
        "cocone squares {}, coequalizer {}",
        cocone.squares, cocone.coequalizer
    );
    Ok(())
}
