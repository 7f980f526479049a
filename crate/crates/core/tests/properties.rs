use cospans::adjoint::{
    beck_chevalley_cell, construct_right_adjoint, is_left_adjoint, search_adjoints, CommutingSquare,
};
use cospans::cospan::{find_two_iso, hcompose, tensor, CoherenceIso};
use cospans::finset::{pushout, verify_pushout_universal};
use cospans::json::{parse_value, Value};
use cospans::{Cospan, FinFn, FinSet};
use proptest::prelude::*;

fn set(prefix: &'static str, max: usize) -> impl Strategy<Value = FinSet> {
    (0..=max).prop_map(move |n| FinSet::standard(prefix, n))
}

/// A function into `cod`, or from an empty domain when `cod` is empty.
fn fn_into(dom: FinSet, cod: FinSet) -> impl Strategy<Value = FinFn> {
    let n = dom.len();
    let m = cod.len();
    let images = if m == 0 {
        Just(Vec::new()).boxed()
    } else {
        proptest::collection::vec(0..m, n).boxed()
    };
    images.prop_map(move |v| {
        let dom = if m == 0 { FinSet::empty() } else { dom.clone() };
        FinFn::new(dom, cod.clone(), v).unwrap()
    })
}

fn cospan_between(src: FinSet, tgt: FinSet, max_apex: usize) -> impl Strategy<Value = Cospan> {
    let min = usize::from(!src.is_empty() || !tgt.is_empty());
    (min..=max_apex.max(min)).prop_flat_map(move |k| {
        let x = FinSet::standard("x", k);
        (fn_into(src.clone(), x.clone()), fn_into(tgt.clone(), x))
            .prop_map(|(l, r)| Cospan::new(l, r).unwrap())
    })
}

fn cospan(max: usize) -> impl Strategy<Value = Cospan> {
    (set("a", max), set("b", max)).prop_flat_map(move |(a, b)| cospan_between(a, b, max))
}

/// Three composable cospans `c1 : A → B`, `c2 : B → C`, `c3 : C → D`.
fn chain3(max: usize) -> impl Strategy<Value = (Cospan, Cospan, Cospan)> {
    (set("a", max), set("b", max), set("c", max), set("d", max)).prop_flat_map(
        move |(a, b, c, d)| {
            (
                cospan_between(a, b.clone(), max),
                cospan_between(b, c.clone(), max),
                cospan_between(c, d, max),
            )
        },
    )
}

/// A span `B ← A → C` with nonempty codomains.
fn span(max: usize) -> impl Strategy<Value = (FinFn, FinFn)> {
    (0..=max, 1..=max, 1..=max).prop_flat_map(|(n, nb, nc)| {
        let a = FinSet::standard("a", n);
        (
            fn_into(a.clone(), FinSet::standard("b", nb)),
            fn_into(a, FinSet::standard("c", nc)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn json_round_trip(c in cospan(4)) {
        let v = Value::Cospan(c);
        prop_assert_eq!(parse_value(&v.to_json()).unwrap(), v);
    }

    #[test]
    fn composition_is_associative_up_to_the_associator((c1, c2, c3) in chain3(3)) {
        let iso = CoherenceIso::associator(&c3, &c2, &c1).unwrap();
        let cell = iso.cell();
        prop_assert!(cell.is_invertible());
        prop_assert_eq!(cell.from(), &hcompose(&hcompose(&c3, &c2).unwrap(), &c1).unwrap());
        prop_assert_eq!(cell.to(), &hcompose(&c3, &hcompose(&c2, &c1).unwrap()).unwrap());
    }

    #[test]
    fn identities_are_units_up_to_iso(c in cospan(3)) {
        let left = hcompose(&Cospan::identity(c.tgt()), &c).unwrap();
        let right = hcompose(&c, &Cospan::identity(c.src())).unwrap();
        prop_assert!(find_two_iso(&left, &c).unwrap().is_some());
        prop_assert!(find_two_iso(&right, &c).unwrap().is_some());
        prop_assert!(CoherenceIso::left_unitor(&c).unwrap().cell().is_invertible());
        prop_assert!(CoherenceIso::right_unitor(&c).unwrap().cell().is_invertible());
    }

    #[test]
    fn mirror_is_an_involution_reversing_composition((c1, c2, _) in chain3(3)) {
        prop_assert_eq!(c1.mirror().mirror(), c1.clone());
        let lhs = hcompose(&c2, &c1).unwrap().mirror();
        let rhs = hcompose(&c1.mirror(), &c2.mirror()).unwrap();
        prop_assert!(find_two_iso(&lhs, &rhs).unwrap().is_some());
    }

    #[test]
    fn tensor_sizes_add(c in cospan(3), d in cospan(3)) {
        let t = tensor(&c, &d);
        prop_assert_eq!(t.apex().len(), c.apex().len() + d.apex().len());
        prop_assert_eq!(t.src().len(), c.src().len() + d.src().len());
    }

    #[test]
    fn right_adjoints_are_unique_up_to_iso(c in cospan(2)) {
        let found = search_adjoints(&c, c.src().len() + c.tgt().len() + 2);
        prop_assert_eq!(!found.is_empty(), is_left_adjoint(&c));
        if let Ok(w) = construct_right_adjoint(&c) {
            for other in &found {
                prop_assert!(find_two_iso(&other.right, &w.right).unwrap().is_some());
            }
        }
    }

    #[test]
    fn beck_chevalley_agrees_with_the_pushout_property((f, g) in span(4), extra in 0usize..2) {
        let po = pushout(&f, &g).unwrap();
        let mut labels = po.apex.elements().to_vec();
        labels.extend((0..extra).map(|i| format!("pad{i}")));
        let d = FinSet::new(labels).unwrap();
        let widen = |h: &FinFn| FinFn::new(h.dom().clone(), d.clone(), h.as_slice().to_vec()).unwrap();
        let (gp, fp) = (widen(&po.p1), widen(&po.p2));
        let square = CommutingSquare::new(f.clone(), g.clone(), gp.clone(), fp.clone()).unwrap();
        let invertible = beck_chevalley_cell(&square).unwrap().is_invertible();
        let universal = verify_pushout_universal(&po, &gp, &fp)
            .map(|m| m.is_bijection())
            .unwrap_or(false);
        prop_assert_eq!(invertible, universal);
        prop_assert_eq!(invertible, extra == 0);
    }
}
