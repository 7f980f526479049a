//! Beck–Chevalley cells: invertible on pushout squares, not on a padded
//! commuting square.

use cospans::adjoint::{beck_chevalley_cell, CommutingSquare};
use cospans::finset::pushout;
use cospans::{FinFn, FinSet};

fn main() -> cospans::Result<()> {
    let a = FinSet::standard("a", 2);
    let b = FinSet::standard("b", 2);
    let c = FinSet::standard("c", 2);
    let f = FinFn::new(a.clone(), b.clone(), vec![0, 0])?;
    let g = FinFn::new(a, c.clone(), vec![0, 1])?;

    let square = CommutingSquare::pushout_of(&f, &g)?;
    let cell = beck_chevalley_cell(&square)?;
    println!(
        "pushout square: map {:?}, invertible {}",
        cell.map().as_slice(),
        cell.is_invertible()
    );

    // Same square with one extra point in the corner.
    let po = pushout(&f, &g)?;
    let mut labels = po.apex.elements().to_vec();
    labels.push("extra".into());
    let d = FinSet::new(labels)?;
    let widen = |h: &FinFn| FinFn::new(h.dom().clone(), d.clone(), h.as_slice().to_vec());
    let padded = CommutingSquare::new(f, g, widen(&po.p1)?, widen(&po.p2)?)?;
    let cell = beck_chevalley_cell(&padded)?;
    println!(
        "padded square: map {:?}, invertible {}",
        cell.map().as_slice(),
        cell.is_invertible()
    );
    Ok(())
}
