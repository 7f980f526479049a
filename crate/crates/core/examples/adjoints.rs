//! Left adjoints among cospans: a cospan has a right adjoint exactly when its
//! wrong-way leg is a bijection, and that adjoint is its mirror.

use cospans::adjoint::{
    construct_right_adjoint, is_left_adjoint, search_adjoint, verify_adjunction,
};
use cospans::{Cospan, FinFn, FinSet};

fn main() -> cospans::Result<()> {
    let a = FinSet::standard("a", 3);
    let b = FinSet::standard("b", 2);
    let f = FinFn::new(a.clone(), b.clone(), vec![0, 0, 1])?;

    let rw = Cospan::right_way(&f);
    let w = construct_right_adjoint(&rw)?;
    let report = verify_adjunction(&w)?;
    println!("right-way map is a left adjoint: {}", is_left_adjoint(&rw));
    println!("  right adjoint apex size {}", w.right.apex().len());
    println!("  unit map {:?}", w.unit.map().as_slice());
    println!("  counit map {:?}", w.counit.map().as_slice());
    println!("  zigzags hold: {}", report.holds());

    let ww = Cospan::wrong_way(&f);
    println!("wrong-way map is a left adjoint: {}", is_left_adjoint(&ww));
    let found = search_adjoint(&ww, 6);
    println!(
        "  brute-force search up to apex 6 finds one: {}",
        found.is_some()
    );
    Ok(())
}
