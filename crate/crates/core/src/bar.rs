//! Truncated bar complexes `B ⊔ A^k ⊔ C` of canonical algebras, pushouts of
//! canonical algebras, and the cobase-change check for the forgetful functor.

use crate::adjoint::{verify_cobase_change, CommutingSquare};
use crate::cospan::{find_two_iso, hcompose, Cospan, TwoCell};
use crate::error::{Error, Result};
use crate::finset::{coproduct, pushout, tagged_union, FinFn, FinSet, Pushout};
use crate::frobenius::{canonical_algebra, verify_rigid, AlgebraDatum, RigidityReport};

/// Levels `0..=n` of the bar complex of `B ←f A →g C`, with faces and
/// degeneracies as right-way cospans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarComplexTruncation {
    pub f: FinFn,
    pub g: FinFn,
    pub levels: Vec<FinSet>,
    /// `face_maps[k][i] : level k → level k-1`, for `k ≥ 1` (index `k - 1`).
    pub face_maps: Vec<Vec<FinFn>>,
    /// `degeneracy_maps[k][j] : level k → level k+1`, for `k < n`.
    pub degeneracy_maps: Vec<Vec<FinFn>>,
}

/// Slot tags of level `k`: `b`, `a0 … a{k-1}`, `c`.
fn slot_tags(k: usize) -> Vec<String> {
    std::iter::once("b".to_string())
        .chain((0..k).map(|j| format!("a{j}")))
        .chain(std::iter::once("c".to_string()))
        .collect()
}

fn level(a: &FinSet, b: &FinSet, c: &FinSet, k: usize) -> Result<FinSet> {
    let tags = slot_tags(k);
    let parts: Vec<(&str, &FinSet)> = tags
        .iter()
        .enumerate()
        .map(|(p, t)| {
            let set = if p == 0 {
                b
            } else if p == k + 1 {
                c
            } else {
                a
            };
            (t.as_str(), set)
        })
        .collect();
    Ok(tagged_union(&parts)?.0)
}

fn slot_of(label: &str, k: usize) -> (usize, &str) {
    let (tag, x) = label.split_once('.').expect("level labels are tagged");
    let p = match tag {
        "b" => 0,
        "c" => k + 1,
        _ => 1 + tag[1..].parse::<usize>().expect("a-slot index"),
    };
    (p, x)
}

impl BarComplexTruncation {
    pub fn n(&self) -> usize {
        self.levels.len() - 1
    }

    /// `d_i` merges slots `i` and `i + 1` into slot `i`. The outer faces
    /// act through `f` and `g`; the inner ones multiply.
    fn face(&self, k: usize, i: usize) -> Result<FinFn> {
        let tags = slot_tags(k - 1);
        FinFn::from_label_fn(
            self.levels[k].clone(),
            self.levels[k - 1].clone(),
            |label| {
                let (p, x) = slot_of(label, k);
                let value = if i == 0 && p == 1 {
                    self.f.apply_label(x).expect("f defined")
                } else if i == k && p == k {
                    self.g.apply_label(x).expect("g defined")
                } else {
                    x
                };
                let target = if p <= i { p } else { p - 1 };
                format!("{}.{value}", tags[target])
            },
        )
    }

    /// `s_j` inserts an empty `A` slot after slot `j`.
    fn degeneracy(&self, k: usize, j: usize) -> Result<FinFn> {
        let tags = slot_tags(k + 1);
        FinFn::from_label_fn(
            self.levels[k].clone(),
            self.levels[k + 1].clone(),
            |label| {
                let (p, x) = slot_of(label, k);
                let target = if p <= j { p } else { p + 1 };
                format!("{}.{x}", tags[target])
            },
        )
    }

    pub fn face_cospan(&self, k: usize, i: usize) -> Cospan {
        Cospan::right_way(&self.face_maps[k - 1][i])
    }

    pub fn degeneracy_cospan(&self, k: usize, j: usize) -> Cospan {
        Cospan::right_way(&self.degeneracy_maps[k][j])
    }
}

/// Builds levels `0..=n` and checks every simplicial identity up to
/// 2-isomorphism.
pub fn bar_truncation(f: &FinFn, g: &FinFn, n: usize) -> Result<BarComplexTruncation> {
    if f.dom() != g.dom() {
        return Err(Error::TypeMismatch(
            "f and g must share their domain".into(),
        ));
    }
    let (a, b, c) = (f.dom(), f.cod(), g.cod());
    let levels = (0..=n)
        .map(|k| level(a, b, c, k))
        .collect::<Result<Vec<_>>>()?;
    let mut t = BarComplexTruncation {
        f: f.clone(),
        g: g.clone(),
        levels,
        face_maps: Vec::new(),
        degeneracy_maps: Vec::new(),
    };
    t.face_maps = (1..=n)
        .map(|k| (0..=k).map(|i| t.face(k, i)).collect())
        .collect::<Result<_>>()?;
    t.degeneracy_maps = (0..n)
        .map(|k| (0..=k).map(|j| t.degeneracy(k, j)).collect())
        .collect::<Result<_>>()?;
    check_simplicial_identities(&t)?;
    Ok(t)
}

fn same(lhs: &[Cospan], rhs: &[Cospan], what: String) -> Result<()> {
    let compose = |parts: &[Cospan]| crate::cospan::compose_chain(parts);
    let (l, r) = (compose(lhs)?, compose(rhs)?);
    match find_two_iso(&l, &r)? {
        Some(_) => Ok(()),
        None => Err(Error::SimplicialIdentityFailure(what)),
    }
}

/// The identities, read diagrammatically (first map first):
/// `d_j ; d_i = d_i ; d_{j-1}` for `i < j`, `s_j ; d_i = d_i ; s_{j-1}` for
/// `i < j`, `s_j ; d_j = s_j ; d_{j+1} = id`, `s_j ; d_i = d_{i-1} ; s_j` for
/// `i > j + 1`, and `s_j ; s_{i} = s_i ; s_{j+1}` for `i ≤ j`.
pub fn check_simplicial_identities(t: &BarComplexTruncation) -> Result<usize> {
    let n = t.n();
    let d = |k: usize, i: usize| t.face_cospan(k, i);
    let s = |k: usize, j: usize| t.degeneracy_cospan(k, j);
    let mut checked = 0;
    for k in 2..=n {
        for j in 0..=k {
            for i in 0..j {
                same(
                    &[d(k, j), d(k - 1, i)],
                    &[d(k, i), d(k - 1, j - 1)],
                    format!("d_{i} d_{j} at level {k}"),
                )?;
                checked += 1;
            }
        }
    }
    for k in 0..n {
        for j in 0..=k {
            let up = k + 1;
            for i in 0..=up {
                let lhs = [s(k, j), d(up, i)];
                if i < j {
                    same(
                        &lhs,
                        &[d(k, i), s(k - 1, j - 1)],
                        format!("d_{i} s_{j} at level {k}"),
                    )?;
                } else if i == j || i == j + 1 {
                    same(
                        &lhs,
                        &[Cospan::identity(&t.levels[k])],
                        format!("d_{i} s_{j} at level {k}"),
                    )?;
                } else {
                    same(
                        &lhs,
                        &[d(k, i - 1), s(k - 1, j)],
                        format!("d_{i} s_{j} at level {k}"),
                    )?;
                }
                checked += 1;
            }
            if k + 2 <= n {
                for i in 0..=j {
                    same(
                        &[s(k, j), s(up, i)],
                        &[s(k, i), s(up, j + 1)],
                        format!("s_{i} s_{j} at level {k}"),
                    )?;
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// The canonical algebra on `B ⊔_A C` with its cocone of right-way algebra
/// maps out of `B` and `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutAlgebra {
    pub pushout: Pushout,
    pub algebra: AlgebraDatum,
    pub from_b: Cospan,
    pub from_c: Cospan,
    /// `from_b ∘ f ⇒ from_c ∘ g`.
    pub square: TwoCell,
    pub rigidity: RigidityReport,
}

pub fn pushout_algebra(f: &FinFn, g: &FinFn) -> Result<PushoutAlgebra> {
    let po = pushout(f, g)?;
    let algebra = canonical_algebra(&po.apex);
    let from_b = Cospan::right_way(&po.p1);
    let from_c = Cospan::right_way(&po.p2);
    let square = find_two_iso(
        &hcompose(&from_b, &Cospan::right_way(f))?,
        &hcompose(&from_c, &Cospan::right_way(g))?,
    )?
    .ok_or_else(|| Error::NotACocone("pushout cocone does not commute".into()))?;
    let rigidity = verify_rigid(&algebra);
    Ok(PushoutAlgebra {
        pushout: po,
        algebra,
        from_b,
        from_c,
        square,
        rigidity,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoconeReport {
    /// Face and degeneracy squares checked.
    pub squares: usize,
    /// Failing squares, described.
    pub failures: Vec<String>,
    /// Level 0 → carrier exhibits the carrier as the coequalizer of
    /// `d_0, d_1`.
    pub coequalizer: bool,
}

impl CoconeReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.coequalizer
    }
}

/// The cocone leg out of level `k`: `B` and every `A` slot through `p1`
/// (the latter after `f`), `C` through `p2`.
pub fn cocone_map(t: &BarComplexTruncation, p: &PushoutAlgebra, k: usize) -> Result<FinFn> {
    let po = &p.pushout;
    FinFn::from_label_fn(t.levels[k].clone(), po.apex.clone(), |label| {
        let (slot, x) = slot_of(label, k);
        let image = if slot == 0 {
            po.p1.apply_label(x)
        } else if slot == k + 1 {
            po.p2.apply_label(x)
        } else {
            po.p1.apply_label(t.f.apply_label(x).expect("f defined"))
        };
        image.expect("pushout legs are total").to_string()
    })
}

pub fn verify_bar_cocone(t: &BarComplexTruncation, p: &PushoutAlgebra) -> Result<CoconeReport> {
    if t.f != p.pushout.f || t.g != p.pushout.g {
        return Err(Error::TypeMismatch(
            "bar complex and pushout come from different spans".into(),
        ));
    }
    let legs = (0..=t.n())
        .map(|k| cocone_map(t, p, k).map(|q| Cospan::right_way(&q)))
        .collect::<Result<Vec<_>>>()?;
    let mut squares = 0;
    let mut failures = Vec::new();
    let mut check = |via: Cospan, leg_to: &Cospan, leg_from: &Cospan, what: String| -> Result<()> {
        squares += 1;
        if find_two_iso(&hcompose(leg_to, &via)?, leg_from)?.is_none() {
            failures.push(what);
        }
        Ok(())
    };
    for k in 1..=t.n() {
        for i in 0..=k {
            check(
                t.face_cospan(k, i),
                &legs[k - 1],
                &legs[k],
                format!("face d_{i} at level {k}"),
            )?;
        }
    }
    for k in 0..t.n() {
        for j in 0..=k {
            check(
                t.degeneracy_cospan(k, j),
                &legs[k + 1],
                &legs[k],
                format!("degeneracy s_{j} at level {k}"),
            )?;
        }
    }
    let coequalizer = t.n() == 0
        || is_coequalizer(
            &t.face_maps[0][0],
            &t.face_maps[0][1],
            &cocone_map(t, p, 0)?,
        )?;
    Ok(CoconeReport {
        squares,
        failures,
        coequalizer,
    })
}

/// Whether `q : Y → Q` is a coequalizer of `u, v : X → Y`, by comparison
/// with the quotient `Y / (u(x) ~ v(x))` computed as a pushout of
/// `[u, id]` and `[v, id]` out of `X ⊔ Y`.
fn is_coequalizer(u: &FinFn, v: &FinFn, q: &FinFn) -> Result<bool> {
    if q.after(u)? != q.after(v)? {
        return Ok(false);
    }
    let sum = coproduct(u.dom(), u.cod());
    let id = FinFn::identity(u.cod());
    let quotient = pushout(&sum.copair(u, &id)?, &sum.copair(v, &id)?)?;
    Ok(quotient.mediate(q, q)?.is_bijection())
}

/// Right-way image of the pushout square of carriers, checked for cobase
/// change.
pub fn forgetful_cobase_change_check(f: &FinFn, g: &FinFn) -> Result<bool> {
    verify_cobase_change(&CommutingSquare::pushout_of(f, g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{coproduct_fn, enumerate_functions, fold};

    fn set(labels: &[&str]) -> FinSet {
        FinSet::new(labels.iter().copied()).unwrap()
    }

    #[test]
    fn level_counts_for_points() {
        let a = set(&["a"]);
        let id = FinFn::identity(&a);
        let t = bar_truncation(&id, &id, 1).unwrap();
        assert_eq!(t.levels[0].len(), 2);
        assert_eq!(t.levels[1].len(), 3);
        assert_eq!(t.face_maps[0].len(), 2);
        assert_eq!(t.degeneracy_maps[0].len(), 1);
    }

    #[test]
    fn faces_act_and_multiply() {
        let a = set(&["x"]);
        let b = set(&["p", "q"]);
        let c = set(&["z"]);
        let f = FinFn::from_pairs(a.clone(), b, [("x", "q")]).unwrap();
        let g = FinFn::from_pairs(a, c, [("x", "z")]).unwrap();
        let t = bar_truncation(&f, &g, 2).unwrap();
        let d0 = &t.face_maps[1][0];
        assert_eq!(d0.apply_label("a0.x"), Some("b.q"));
        assert_eq!(d0.apply_label("a1.x"), Some("a0.x"));
        let d1 = &t.face_maps[1][1];
        assert_eq!(d1.apply_label("a0.x"), Some("a0.x"));
        assert_eq!(d1.apply_label("a1.x"), Some("a0.x"));
        let d2 = &t.face_maps[1][2];
        assert_eq!(d2.apply_label("a1.x"), Some("c.z"));
        assert_eq!(d2.apply_label("a0.x"), Some("a0.x"));
        let s1 = &t.degeneracy_maps[1][1];
        assert_eq!(s1.apply_label("a0.x"), Some("a0.x"));
        assert_eq!(s1.apply_label("c.z"), Some("c.z"));
        assert!(!s1.is_surjective());
    }

    #[test]
    fn empty_base() {
        let b = set(&["b"]);
        let c = set(&["c0", "c1"]);
        let f = FinFn::initial(&b);
        let g = FinFn::initial(&c);
        let t = bar_truncation(&f, &g, 3).unwrap();
        assert_eq!(t.levels[3].len(), 3);
        let p = pushout_algebra(&f, &g).unwrap();
        assert_eq!(p.algebra.carrier.len(), 3);
        assert!(p.rigidity.is_rigid());
        assert!(verify_bar_cocone(&t, &p).unwrap().holds());
    }

    #[test]
    fn identity_legs() {
        let b = set(&["b0", "b1"]);
        let id = FinFn::identity(&b);
        let p = pushout_algebra(&id, &id).unwrap();
        assert_eq!(p.algebra.carrier.len(), b.len());
        let t = bar_truncation(&id, &id, 2).unwrap();
        assert!(verify_bar_cocone(&t, &p).unwrap().holds());
        assert!(forgetful_cobase_change_check(&id, &id).unwrap());
    }

    #[test]
    fn small_pushout_is_rigid() {
        let a = set(&["a"]);
        let f = FinFn::from_pairs(a.clone(), set(&["b0", "b1"]), [("a", "b0")]).unwrap();
        let g = FinFn::from_pairs(a, set(&["c0"]), [("a", "c0")]).unwrap();
        let p = pushout_algebra(&f, &g).unwrap();
        assert_eq!(p.algebra.carrier.len(), 2);
        assert!(p.rigidity.is_rigid());
    }

    #[test]
    fn all_small_spans() {
        let sets: Vec<FinSet> = (0..=2).map(|n| FinSet::standard("s", n)).collect();
        for a in &sets {
            for b in &sets {
                for c in &sets {
                    for f in enumerate_functions(a, b) {
                        for g in enumerate_functions(a, c) {
                            let t = bar_truncation(&f, &g, 2).unwrap();
                            let p = pushout_algebra(&f, &g).unwrap();
                            assert!(verify_bar_cocone(&t, &p).unwrap().holds());
                            assert!(forgetful_cobase_change_check(&f, &g).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_cocone_is_not_a_coequalizer() {
        let a = set(&["a"]);
        let f = FinFn::from_pairs(a.clone(), set(&["b0", "b1"]), [("a", "b0")]).unwrap();
        let g = FinFn::from_pairs(a, set(&["c0"]), [("a", "c0")]).unwrap();
        let t = bar_truncation(&f, &g, 1).unwrap();
        let level0 = &t.levels[0];
        let point = set(&["*"]);
        let collapse = FinFn::new(level0.clone(), point, vec![0; level0.len()]).unwrap();
        assert!(!is_coequalizer(&t.face_maps[0][0], &t.face_maps[0][1], &collapse).unwrap());
    }

    #[test]
    fn fold_square_satisfies_cobase_change() {
        let a = set(&["a0", "a1"]);
        let aa = coproduct(&a, &a).set;
        let ff = coproduct_fn(&fold(&a), &fold(&a));
        assert_eq!(ff.dom().len(), 2 * aa.len());
        assert!(forgetful_cobase_change_check(&ff, &ff).unwrap());
    }
}
