//! Every finite set is self-dual; transposing a cospan through the duality
//! data gives its mirror image.

use cospans::cospan::find_two_iso;
use cospans::frobenius::{self_duality, transpose, verify_adjoint_to_transpose};
use cospans::{Cospan, FinFn, FinSet};

fn main() -> cospans::Result<()> {
    let a = FinSet::standard("a", 2);
    let d = self_duality(&a)?;
    println!(
        "ev apex {}, coev apex {}",
        d.ev.apex().len(),
        d.coev.apex().len()
    );
    println!(
        "zigzag maps {:?} {:?}",
        d.left_zigzag.map().as_slice(),
        d.right_zigzag.map().as_slice()
    );

    let b = FinSet::standard("b", 3);
    let f = FinFn::new(a, b, vec![2, 2])?;
    let c = Cospan::right_way(&f);
    let t = transpose(&c)?;
    let iso = find_two_iso(&t, &c.mirror())?;
    println!(
        "transpose has apex {} and is the mirror: {}",
        t.apex().len(),
        iso.is_some()
    );
    println!(
        "right adjoint agrees with transpose: {}",
        verify_adjoint_to_transpose(&f)?
    );
    Ok(())
}
