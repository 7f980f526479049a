//! The envelope of the bimodule operad: objects are finite sets split into
//! left, middle and right parts. Prints hom-set sizes, the generators, and
//! their images under the bimodule data of a pair of functions.

use cospans::envbm::{
    canonical_objects, describe, envbm_generation_check, envbm_generators, envbm_hom,
    evaluate_bimodule, BimoduleData, GENERATOR_NAMES,
};
use cospans::{FinFn, FinSet};

fn main() -> cospans::Result<()> {
    let objects = canonical_objects(2);
    for x in &objects {
        let row: Vec<usize> = objects.iter().map(|y| envbm_hom(x, y).len()).collect();
        println!("{:?} -> {:?}", x.shape(), row);
    }

    let a = FinSet::standard("a", 2);
    let m = FinSet::standard("m", 2);
    let b = FinSet::standard("b", 1);
    let f = FinFn::new(a, m.clone(), vec![0, 1])?;
    let g = FinFn::new(b, m, vec![1])?;
    let data = BimoduleData::right_way(&f, &g)?;
    for (name, gen) in GENERATOR_NAMES.iter().zip(envbm_generators()) {
        let image = evaluate_bimodule(&data, &gen)?;
        println!("{name}: {} ~> apex {}", describe(&gen), image.apex().len());
    }

    println!(
        "morphisms generated up to size 3: {}",
        envbm_generation_check(3)?
    );
    Ok(())
}
