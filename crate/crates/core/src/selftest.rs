//! Desk-scale checks of the main structural facts, each over an exhaustive
//! tier of small instances and, where stated, a seeded random tier.

use std::time::Instant;

use rayon::prelude::*;

use crate::adjoint::{
    beck_chevalley_cell, is_left_adjoint, search_adjoint, verify_cobase_change, CommutingSquare,
};
use crate::bar::{
    bar_truncation, forgetful_cobase_change_check, pushout_algebra, verify_bar_cocone,
};
use crate::cospan::{enumerate_cells, find_two_iso, Cospan};
use crate::envbm::{
    canonical_objects, envbm_generation_check, envbm_generators, envbm_hom, envbm_hom_exhaustive,
};
use crate::error::Result;
use crate::finset::{coproduct, coproduct_fn, enumerate_functions, fold, pushout, FinFn, FinSet};
use crate::frobenius::{
    canonical_algebra, classify_unital_multiplications, self_duality, transpose_general,
    verify_adjoint_to_transpose, verify_frobenius, verify_rigid, DualityData,
};
use crate::json::{parse_value, Value};
use crate::rng::Lcg;

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Instance sizes for every check. [`SelftestConfig::default`] is the
/// reference configuration; [`SelftestConfig::for_max_size`] scales all sizes
/// from one bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Boundary and apex sizes of the cospans compared with the adjoint search.
    pub adjoint_size: usize,
    pub adjoint_apex_bound: usize,
    /// Carrier sizes for rigidity and Frobenius counitality.
    pub algebra_size: usize,
    /// Exhaustive tier for transposes and cells.
    pub exhaustive_size: usize,
    pub random_transposes: usize,
    pub random_size: usize,
    pub classify_size: usize,
    pub classify_apex_bound: usize,
    pub envbm_size: usize,
    pub squares: usize,
    pub square_size: usize,
    pub bar_level: usize,
    pub bar_size: usize,
    pub roundtrips: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self::for_max_size(3, DEFAULT_SEED)
    }
}

impl SelftestConfig {
    pub fn for_max_size(n: usize, seed: u64) -> Self {
        Self {
            seed,
            adjoint_size: n,
            adjoint_apex_bound: 2 * n,
            algebra_size: n + 1,
            exhaustive_size: n,
            random_transposes: 200,
            random_size: n + 2,
            classify_size: n.saturating_sub(1),
            classify_apex_bound: n,
            envbm_size: n,
            squares: 100,
            square_size: n + 1,
            bar_level: n,
            bar_size: n.saturating_sub(1),
            roundtrips: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Instances examined.
    pub instances: usize,
    pub detail: String,
    pub seconds: f64,
}

fn outcome(
    name: &'static str,
    start: Instant,
    result: Result<(usize, Vec<String>)>,
) -> CheckOutcome {
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok((instances, failures)) => CheckOutcome {
            name,
            passed: failures.is_empty(),
            instances,
            detail: failures.into_iter().take(5).collect::<Vec<_>>().join("; "),
            seconds,
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            instances: 0,
            detail: e.to_string(),
            seconds,
        },
    }
}

fn sets_up_to(n: usize) -> Vec<FinSet> {
    (0..=n).map(|k| FinSet::standard("s", k)).collect()
}

fn sets_with_prefix(prefix: &str, n: usize) -> Vec<FinSet> {
    (0..=n).map(|k| FinSet::standard(prefix, k)).collect()
}

/// Every cospan `A ↛ B` with `|A|, |B|, |apex| ≤ n` on the standard sets
/// `{a0, ..}`, `{b0, ..}`, `{x0, ..}`.
pub fn small_cospans(n: usize) -> Vec<Cospan> {
    let (srcs, tgts) = (sets_with_prefix("a", n), sets_with_prefix("b", n));
    let apexes = sets_with_prefix("x", n);
    let mut out = Vec::new();
    for a in &srcs {
        for b in &tgts {
            for x in &apexes {
                for left in enumerate_functions(a, x) {
                    for right in enumerate_functions(b, x) {
                        out.push(Cospan::new(left.clone(), right).expect("same apex"));
                    }
                }
            }
        }
    }
    out
}

pub fn random_fn(rng: &mut Lcg, dom: &FinSet, cod: &FinSet) -> FinFn {
    let map = (0..dom.len()).map(|_| rng.below(cod.len())).collect();
    FinFn::new(dom.clone(), cod.clone(), map).expect("in range")
}

/// A cospan with boundary and apex sizes at most `n`.
pub fn random_cospan(rng: &mut Lcg, n: usize) -> Cospan {
    let a = FinSet::standard("a", rng.range_inclusive(0, n));
    let b = FinSet::standard("b", rng.range_inclusive(0, n));
    let min_apex = usize::from(!a.is_empty() || !b.is_empty());
    let x = FinSet::standard("x", rng.range_inclusive(min_apex, n.max(min_apex)));
    Cospan::new(random_fn(rng, &a, &x), random_fn(rng, &b, &x)).expect("same apex")
}

/// Left-adjoint test against bounded search.
pub fn check_left_adjoints(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let cospans = small_cospans(cfg.adjoint_size);
    let failures: Vec<String> = cospans
        .par_iter()
        .filter_map(|c| {
            let decided = is_left_adjoint(c);
            let found = search_adjoint(c, cfg.adjoint_apex_bound).is_some();
            (decided != found).then(|| format!("{c:?}: decision {decided}, search {found}"))
        })
        .collect();
    outcome(
        "01-left-adjoint-characterization",
        start,
        Ok((cospans.len(), failures)),
    )
}

pub fn check_canonical_rigidity(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let result = (0..=cfg.algebra_size)
        .map(|n| {
            let report = verify_rigid(&canonical_algebra(&FinSet::standard("a", n)));
            (!report.is_rigid()).then(|| format!("|A| = {n}: {}", report.diagnostics.join(", ")))
        })
        .collect::<Vec<_>>();
    let failures = result.into_iter().flatten().collect();
    outcome(
        "02-canonical-rigidity",
        start,
        Ok((cfg.algebra_size + 1, failures)),
    )
}

pub fn check_frobenius_counitality(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let failures = (0..=cfg.algebra_size)
        .filter_map(|n| {
            let d = canonical_algebra(&FinSet::standard("a", n));
            verify_frobenius(&d)
                .err()
                .map(|e| format!("|A| = {n}: {e}"))
        })
        .collect();
    outcome(
        "03-frobenius-counitality",
        start,
        Ok((cfg.algebra_size + 1, failures)),
    )
}

fn transpose_failure(c: &Cospan, da: &DualityData, db: &DualityData) -> Result<Option<String>> {
    let t = transpose_general(c, da, db)?;
    Ok(find_two_iso(&t, &c.mirror())?
        .is_none()
        .then(|| format!("transpose of {c:?} is {t:?}")))
}

pub fn check_transpose_is_mirror(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let result = (|| {
        let max = cfg.exhaustive_size.max(cfg.random_size);
        let duals_a = (0..=max)
            .map(|n| self_duality(&FinSet::standard("a", n)))
            .collect::<Result<Vec<_>>>()?;
        let duals_b = (0..=max)
            .map(|n| self_duality(&FinSet::standard("b", n)))
            .collect::<Result<Vec<_>>>()?;
        let mut instances = small_cospans(cfg.exhaustive_size);
        let mut rng = Lcg::new(cfg.seed);
        instances
            .extend((0..cfg.random_transposes).map(|_| random_cospan(&mut rng, cfg.random_size)));
        let failures = instances
            .par_iter()
            .map(|c| transpose_failure(c, &duals_a[c.src().len()], &duals_b[c.tgt().len()]))
            .collect::<Result<Vec<_>>>()?;
        Ok((instances.len(), failures.into_iter().flatten().collect()))
    })();
    outcome("04-transpose-is-mirror", start, result)
}

pub fn check_adjoint_to_transpose(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let result = (|| {
        let mut count = 0;
        let mut failures = Vec::new();
        for a in sets_with_prefix("a", cfg.exhaustive_size) {
            for b in sets_with_prefix("b", cfg.exhaustive_size) {
                for f in enumerate_functions(&a, &b) {
                    count += 1;
                    if !verify_adjoint_to_transpose(&f)? {
                        failures.push(format!("{f:?}"));
                    }
                }
            }
        }
        Ok((count, failures))
    })();
    outcome("05-adjoint-to-transpose", start, result)
}

pub fn check_classification(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let result = (|| {
        let mut failures = Vec::new();
        let mut count = 0;
        for n in 0..=cfg.classify_size {
            let found = classify_unital_multiplications(
                &FinSet::standard("a", n),
                cfg.classify_apex_bound,
            )?;
            if found.is_empty() {
                failures.push(format!("|A| = {n}: no unital multiplication found"));
            }
            count += found.len();
        }
        Ok((count, failures))
    })();
    outcome("06-unital-classification", start, result)
}

pub fn check_cells_invertible(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let result = (|| {
        let mut count = 0;
        let mut failures = Vec::new();
        for a in sets_with_prefix("a", cfg.exhaustive_size) {
            for b in sets_with_prefix("b", cfg.exhaustive_size) {
                let fns: Vec<FinFn> = enumerate_functions(&a, &b).collect();
                for f in &fns {
                    for g in &fns {
                        for cell in enumerate_cells(&Cospan::right_way(f), &Cospan::right_way(g))? {
                            count += 1;
                            if !cell.is_invertible() {
                                failures.push(format!("{cell:?}"));
                            }
                        }
                    }
                }
            }
        }
        Ok((count, failures))
    })();
    outcome("07-cells-invertible", start, result)
}

pub fn check_envbm(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let result = (|| {
        let objects = canonical_objects(cfg.envbm_size);
        let pairs: Vec<_> = objects
            .iter()
            .flat_map(|x| objects.iter().map(move |y| (x, y)))
            .collect();
        let mut failures: Vec<String> = pairs
            .par_iter()
            .filter_map(|(x, y)| {
                let smart = envbm_hom(x, y);
                let oracle = envbm_hom_exhaustive(x, y);
                (smart.len() != oracle.len() || !smart.iter().all(|m| oracle.contains(m))).then(
                    || {
                        format!(
                            "hom({x}, {y}): {} enumerated, {} by oracle",
                            smart.len(),
                            oracle.len()
                        )
                    },
                )
            })
            .collect();
        let total = match envbm_generation_check(cfg.envbm_size) {
            Ok(total) => total,
            Err(e) => {
                failures.push(e.to_string());
                0
            }
        };
        let generators = envbm_generators();
        if generators
            .iter()
            .any(|g| !envbm_hom(g.dom(), g.cod()).contains(g))
        {
            failures.push("a generator is missing from its hom-set".into());
        }
        if envbm_hom(generators[0].dom(), generators[0].cod()).len() != 1 {
            failures.push("the action generator is not the unique map of its type".into());
        }
        Ok((total, failures))
    })();
    outcome("08-envelope-homs-and-generation", start, result)
}

/// A seeded span `B ← A → C` with sets of size at most `n`.
pub fn random_span(rng: &mut Lcg, n: usize) -> (FinFn, FinFn) {
    let a = FinSet::standard("a", rng.range_inclusive(0, n));
    let b = FinSet::standard("b", rng.range_inclusive(usize::from(!a.is_empty()), n));
    let c = FinSet::standard("c", rng.range_inclusive(usize::from(!a.is_empty()), n));
    (random_fn(rng, &a, &b), random_fn(rng, &a, &c))
}

/// The pushout square of `(f, g)` with an extra point added to the corner.
pub fn padded_square(f: &FinFn, g: &FinFn) -> Result<CommutingSquare> {
    let po = pushout(f, g)?;
    let junk = coproduct(&po.apex, &FinSet::new(["junk"])?);
    CommutingSquare::new(
        f.clone(),
        g.clone(),
        junk.inl.after(&po.p1)?,
        junk.inl.after(&po.p2)?,
    )
}

/// `∇ ⊔ ∇ : (A ⊔ A) ⊔ (A ⊔ A) → A ⊔ A` along itself.
pub fn fold_fold_square(a: &FinSet) -> (FinFn, FinFn) {
    let ff = coproduct_fn(&fold(a), &fold(a));
    (ff.clone(), ff)
}

pub fn check_cobase_change(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let result = (|| {
        let mut rng = Lcg::new(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
        let spans: Vec<(FinFn, FinFn)> = (0..cfg.squares)
            .map(|_| random_span(&mut rng, cfg.square_size))
            .collect();
        let mut failures = Vec::new();
        for (i, (f, g)) in spans.iter().enumerate() {
            let sq = CommutingSquare::pushout_of(f, g)?;
            if !beck_chevalley_cell(&sq)?.is_invertible() {
                failures.push(format!("square {i}: pushout cell not invertible"));
            }
            if verify_cobase_change(&padded_square(f, g)?)? {
                failures.push(format!("square {i}: padded control passed"));
            }
            if !forgetful_cobase_change_check(f, g)? {
                failures.push(format!("square {i}: forgetful check failed"));
            }
        }
        let (f, g) = fold_fold_square(&FinSet::standard("a", 2));
        if !forgetful_cobase_change_check(&f, &g)? {
            failures.push("fold square: forgetful check failed".into());
        }
        Ok((spans.len() + 1, failures))
    })();
    outcome("09-beck-chevalley", start, result)
}

pub fn check_bar(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let result = (|| {
        let sets = sets_up_to(cfg.bar_size);
        let mut spans = Vec::new();
        for a in &sets {
            for b in sets_with_prefix("b", cfg.bar_size) {
                for c in sets_with_prefix("c", cfg.bar_size) {
                    for f in enumerate_functions(a, &b) {
                        for g in enumerate_functions(a, &c) {
                            spans.push((f.clone(), g));
                        }
                    }
                }
            }
        }
        let failures = spans
            .par_iter()
            .map(|(f, g)| -> Result<Option<String>> {
                let t = match bar_truncation(f, g, cfg.bar_level) {
                    Ok(t) => t,
                    Err(e) => return Ok(Some(format!("{f:?}, {g:?}: {e}"))),
                };
                let p = pushout_algebra(f, g)?;
                if !p.rigidity.is_rigid() {
                    return Ok(Some(format!("{f:?}, {g:?}: pushout algebra not rigid")));
                }
                let cocone = verify_bar_cocone(&t, &p)?;
                Ok((!cocone.holds()).then(|| format!("{f:?}, {g:?}: {:?}", cocone.failures)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((spans.len(), failures.into_iter().flatten().collect()))
    })();
    outcome("10-bar-complex", start, result)
}

fn roundtrip_failure(v: Value) -> Option<String> {
    let text = serde_json::to_string(&v.to_json()).ok()?;
    let back = serde_json::from_str(&text)
        .ok()
        .and_then(|j| parse_value(&j).ok());
    (back.as_ref() != Some(&v)).then(|| format!("{} did not round-trip: {text}", v.kind()))
}

/// Serialization round trips for every kind of value, and repeatability of
/// the rendered output.
pub fn check_infrastructure(cfg: &SelftestConfig) -> CheckOutcome {
    let start = Instant::now();
    let mut rng = Lcg::new(cfg.seed.wrapping_add(11));
    let mut values = Vec::new();
    for _ in 0..cfg.roundtrips {
        let c = random_cospan(&mut rng, cfg.random_size);
        values.push(Value::Set(c.apex().clone()));
        values.push(Value::Fn(c.left().clone()));
        values.push(Value::Cell(crate::cospan::TwoCell::identity(&c)));
        values.push(Value::Cospan(c));
    }
    for n in 0..=cfg.exhaustive_size {
        values.push(Value::Algebra(canonical_algebra(&FinSet::standard("a", n))));
    }
    let objects = canonical_objects(cfg.envbm_size.min(2));
    for x in &objects {
        values.push(Value::EnvBMObject(x.clone()));
        for y in &objects {
            values.extend(envbm_hom(x, y).into_iter().map(Value::EnvBMMorphism));
        }
    }
    let mut failures: Vec<String> = values
        .iter()
        .cloned()
        .filter_map(roundtrip_failure)
        .collect();
    let render = |vs: &[Value]| {
        vs.iter()
            .map(|v| serde_json::to_string(&v.to_json()).expect("serializable"))
            .collect::<Vec<_>>()
    };
    if render(&values) != render(&values.clone()) {
        failures.push("rendering is not repeatable".into());
    }
    let count = values.len();
    outcome("11-infrastructure", start, Ok((count, failures)))
}

pub type Check = fn(&SelftestConfig) -> CheckOutcome;

/// All checks, in report order.
pub const CHECKS: [Check; 11] = [
    check_left_adjoints,
    check_canonical_rigidity,
    check_frobenius_counitality,
    check_transpose_is_mirror,
    check_adjoint_to_transpose,
    check_classification,
    check_cells_invertible,
    check_envbm,
    check_cobase_change,
    check_bar,
    check_infrastructure,
];

pub fn run_all(cfg: &SelftestConfig) -> Vec<CheckOutcome> {
    let mut out: Vec<CheckOutcome> = CHECKS.iter().map(|check| check(cfg)).collect();
    out.sort_by_key(|o| o.name);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_configuration_passes() {
        let cfg = SelftestConfig {
            random_transposes: 10,
            squares: 10,
            roundtrips: 10,
            ..SelftestConfig::for_max_size(2, 7)
        };
        for o in run_all(&cfg) {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }

    #[test]
    fn padded_square_fails_cobase_change() {
        let a = FinSet::standard("a", 1);
        let f = FinFn::identity(&a);
        assert!(!verify_cobase_change(&padded_square(&f, &f).unwrap()).unwrap());
    }
}
