//! Commutative algebras on cospan objects: the canonical algebra, Frobenius
//! counitality, rigidity through the projection formula, self-duality and
//! transposes, and a bounded classification of unital multiplications.

use crate::adjoint::{construct_right_adjoint, is_left_adjoint, verify_adjunction};
use crate::cospan::{
    canonical_cospans, compose_chain, find_two_iso, hcompose, tensor, tensor_cells, vcompose_chain,
    whisker_left, whisker_right, CoherenceIso, Cospan, TwoCell,
};
use crate::error::{Error, Result, Side};
use crate::finset::{self, coproduct, FinFn, FinSet};

/// Cells relating the two sides of each algebra axiom, when found.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AxiomWitnesses {
    /// `μ ∘ (η ⊗ id) ⇒ λ`, with `λ : ∅ ⊔ A → A` taken right-way.
    pub left_unit: Option<TwoCell>,
    /// `μ ∘ (id ⊗ η) ⇒ ρ`.
    pub right_unit: Option<TwoCell>,
    /// `μ ∘ (μ ⊗ id) ⇒ μ ∘ (id ⊗ μ) ∘ α`.
    pub assoc: Option<TwoCell>,
    /// `μ ∘ σ ⇒ μ`.
    pub comm: Option<TwoCell>,
}

impl AxiomWitnesses {
    pub fn is_unital(&self) -> bool {
        self.left_unit.is_some() && self.right_unit.is_some()
    }

    pub fn is_complete(&self) -> bool {
        self.is_unital() && self.assoc.is_some() && self.comm.is_some()
    }

    /// Names of the axioms without a witness.
    pub fn missing(&self) -> Vec<&'static str> {
        [
            ("left unitality", self.left_unit.is_none()),
            ("right unitality", self.right_unit.is_none()),
            ("associativity", self.assoc.is_none()),
            ("commutativity", self.comm.is_none()),
        ]
        .into_iter()
        .filter_map(|(name, missing)| missing.then_some(name))
        .collect()
    }
}

/// A carrier with unit `η : ∅ ↛ A`, multiplication `μ : A ⊔ A ↛ A`, and the
/// axiom witnesses that could be found (up to 2-isomorphism only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDatum {
    pub carrier: FinSet,
    pub unit: Cospan,
    pub mult: Cospan,
    pub witnesses: AxiomWitnesses,
}

impl AlgebraDatum {
    pub fn new(carrier: FinSet, unit: Cospan, mult: Cospan) -> Result<Self> {
        let aa = coproduct(&carrier, &carrier).set;
        if !unit.src().is_empty() || *unit.tgt() != carrier {
            return Err(Error::TypeMismatch(format!(
                "unit must go from the empty set to {carrier}"
            )));
        }
        if *mult.src() != aa || *mult.tgt() != carrier {
            return Err(Error::TypeMismatch(format!(
                "multiplication must go from {aa} to {carrier}"
            )));
        }
        let witnesses = axiom_witnesses(&carrier, &unit, &mult)?;
        Ok(Self {
            carrier,
            unit,
            mult,
            witnesses,
        })
    }
}

fn unitality(
    a: &FinSet,
    unit: &Cospan,
    mult: &Cospan,
) -> Result<(Option<TwoCell>, Option<TwoCell>)> {
    let id = Cospan::identity(a);
    let left = hcompose(mult, &tensor(unit, &id))?;
    let right = hcompose(mult, &tensor(&id, unit))?;
    Ok((
        find_two_iso(&left, &Cospan::right_way(&finset::left_unitor(a)))?,
        find_two_iso(&right, &Cospan::right_way(&finset::right_unitor(a)))?,
    ))
}

fn axiom_witnesses(a: &FinSet, unit: &Cospan, mult: &Cospan) -> Result<AxiomWitnesses> {
    let id = Cospan::identity(a);
    let (left_unit, right_unit) = unitality(a, unit, mult)?;
    let lhs = hcompose(mult, &tensor(mult, &id))?;
    let rhs = compose_chain(&[
        Cospan::right_way(&finset::assoc(a, a, a)),
        tensor(&id, mult),
        mult.clone(),
    ])?;
    let assoc = find_two_iso(&lhs, &rhs)?;
    let swapped = hcompose(mult, &Cospan::right_way(&finset::swap(a, a)))?;
    let comm = find_two_iso(&swapped, mult)?;
    Ok(AxiomWitnesses {
        left_unit,
        right_unit,
        assoc,
        comm,
    })
}

/// Fold multiplication and initial unit, both right-way.
pub fn canonical_algebra(a: &FinSet) -> AlgebraDatum {
    let d = AlgebraDatum::new(
        a.clone(),
        Cospan::right_way(&FinFn::initial(a)),
        Cospan::right_way(&finset::fold(a)),
    )
    .expect("canonical boundaries are well typed");
    assert!(
        d.witnesses.is_complete(),
        "canonical algebra axioms must hold"
    );
    d
}

/// `ε`, the mirror of the unit.
pub fn counit_of(d: &AlgebraDatum) -> Result<Cospan> {
    if !is_left_adjoint(&d.unit) {
        return Err(Error::NotRigidCandidate(
            "unit is not a left adjoint".into(),
        ));
    }
    Ok(d.unit.mirror())
}

/// `δ`, the mirror of the multiplication.
pub fn comult_of(d: &AlgebraDatum) -> Result<Cospan> {
    if !is_left_adjoint(&d.mult) {
        return Err(Error::NotRigidCandidate(
            "multiplication is not a left adjoint".into(),
        ));
    }
    Ok(d.mult.mirror())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusDatum {
    pub algebra: AlgebraDatum,
    pub counit: Cospan,
    pub comult: Cospan,
    /// `λ ∘ (ε ⊗ id) ∘ δ ⇒ id`.
    pub left_counit: TwoCell,
    /// `ρ ∘ (id ⊗ ε) ∘ δ ⇒ id`.
    pub right_counit: TwoCell,
}

pub fn verify_frobenius(d: &AlgebraDatum) -> Result<FrobeniusDatum> {
    verify_frobenius_with(d, &counit_of(d)?, &comult_of(d)?)
}

/// Counitality of an explicitly supplied counit and comultiplication.
pub fn verify_frobenius_with(
    d: &AlgebraDatum,
    counit: &Cospan,
    comult: &Cospan,
) -> Result<FrobeniusDatum> {
    let a = &d.carrier;
    let id = Cospan::identity(a);
    let left = compose_chain(&[
        comult.clone(),
        tensor(counit, &id),
        Cospan::right_way(&finset::left_unitor(a)),
    ])?;
    let right = compose_chain(&[
        comult.clone(),
        tensor(&id, counit),
        Cospan::right_way(&finset::right_unitor(a)),
    ])?;
    let left_counit = find_two_iso(&left, &id)?.ok_or(Error::CounitalityFailed(Side::Left))?;
    let right_counit = find_two_iso(&right, &id)?.ok_or(Error::CounitalityFailed(Side::Right))?;
    Ok(FrobeniusDatum {
        algebra: d.clone(),
        counit: counit.clone(),
        comult: comult.clone(),
        left_counit,
        right_counit,
    })
}

/// `A` as its own dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityData {
    pub object: FinSet,
    pub dual: FinSet,
    /// `A ⊔ A ↛ ∅`.
    pub ev: Cospan,
    /// `∅ ↛ A ⊔ A`.
    pub coev: Cospan,
    /// `λ ∘ (ev ⊗ id) ∘ α⁻¹ ∘ (id ⊗ coev) ∘ ρ⁻¹ ⇒ id`.
    pub left_zigzag: TwoCell,
    /// `ρ ∘ (id ⊗ ev) ∘ α ∘ (coev ⊗ id) ∘ λ⁻¹ ⇒ id`.
    pub right_zigzag: TwoCell,
}

fn inverse_rw(f: &FinFn) -> Cospan {
    Cospan::right_way(&f.inverse().expect("structural maps are bijections"))
}

pub fn self_duality(a: &FinSet) -> Result<DualityData> {
    let ev = hcompose(
        &Cospan::right_way(&FinFn::initial(a)).mirror(),
        &Cospan::right_way(&finset::fold(a)),
    )?;
    let coev = ev.mirror();
    let id = Cospan::identity(a);
    let first = compose_chain(&[
        inverse_rw(&finset::right_unitor(a)),
        tensor(&id, &coev),
        inverse_rw(&finset::assoc(a, a, a)),
        tensor(&ev, &id),
        Cospan::right_way(&finset::left_unitor(a)),
    ])?;
    let second = compose_chain(&[
        inverse_rw(&finset::left_unitor(a)),
        tensor(&coev, &id),
        Cospan::right_way(&finset::assoc(a, a, a)),
        tensor(&id, &ev),
        Cospan::right_way(&finset::right_unitor(a)),
    ])?;
    let left_zigzag = find_two_iso(&first, &id)?
        .ok_or_else(|| Error::Coherence("first duality zigzag has no witness".into()))?;
    let right_zigzag = find_two_iso(&second, &id)?
        .ok_or_else(|| Error::Coherence("second duality zigzag has no witness".into()))?;
    Ok(DualityData {
        object: a.clone(),
        dual: a.clone(),
        ev,
        coev,
        left_zigzag,
        right_zigzag,
    })
}

/// `c^t : B^∨ ↛ A^∨` for `c : A ↛ B`, pasted from `coev_A`, `c` and `ev_B`.
pub fn transpose_general(c: &Cospan, da: &DualityData, db: &DualityData) -> Result<Cospan> {
    let (a, b) = (c.src(), c.tgt());
    if da.object != *a || db.object != *b {
        return Err(Error::TypeMismatch(
            "duality data does not match the cospan boundary".into(),
        ));
    }
    let id_a = Cospan::identity(a);
    let id_b = Cospan::identity(b);
    compose_chain(&[
        inverse_rw(&finset::right_unitor(b)),
        tensor(&id_b, &da.coev),
        tensor(&id_b, &tensor(c, &id_a)),
        inverse_rw(&finset::assoc(b, b, a)),
        tensor(&db.ev, &id_a),
        Cospan::right_way(&finset::left_unitor(a)),
    ])
}

/// Transpose using the self-duality of both boundary objects.
pub fn transpose(c: &Cospan) -> Result<Cospan> {
    transpose_general(c, &self_duality(c.src())?, &self_duality(c.tgt())?)
}

/// Checks that `right_way(f)` is left adjoint to its mirror, and that the
/// mirror is also its transpose.
pub fn verify_adjoint_to_transpose(f: &FinFn) -> Result<bool> {
    let left = Cospan::right_way(f);
    let w = construct_right_adjoint(&left)?;
    if w.right != left.mirror() || !verify_adjunction(&w)?.holds() {
        return Ok(false);
    }
    Ok(find_two_iso(&transpose(&left)?, &w.right)?.is_some())
}

/// The three-step mate cell
/// `β_M ∘ (id ⊗ δ ⊗ id) ⇒ δ ∘ μ ∘ β_M ∘ (id ⊗ δ ⊗ id) ≅ δ ∘ β_N ∘ (id ⊗ μδ ⊗ id) ⇒ δ ∘ β_N`
/// for the multiplication `μ : M = A ⊔ A → N = A` viewed as a map of
/// `A`-bimodules, with `δ` its right adjoint.
pub fn projection_formula_cell(d: &AlgebraDatum) -> Result<TwoCell> {
    let a = &d.carrier;
    let mu = &d.mult;
    let adj = construct_right_adjoint(mu)?;
    let delta = &adj.right;
    let id = Cospan::identity(a);
    let aa = coproduct(a, a).set;

    // β_N : (A ⊔ N) ⊔ A ↛ N.
    let beta_n = hcompose(mu, &tensor(mu, &id))?;
    // β_M : (A ⊔ M) ⊔ A ↛ M, the left action on the first factor of M and
    // the right action on the second.
    let ama = coproduct(&coproduct(a, &aa).set, a).set;
    let split = coproduct(&aa, &aa).set;
    let reassoc = FinFn::from_label_fn(ama, split, |x| {
        if let Some(rest) = x.strip_prefix("L.L.") {
            format!("L.L.{rest}")
        } else if let Some(rest) = x.strip_prefix("L.R.L.") {
            format!("L.R.{rest}")
        } else if let Some(rest) = x.strip_prefix("L.R.R.") {
            format!("R.L.{rest}")
        } else {
            format!("R.R.{}", &x[2..])
        }
    })?;
    let beta_m = hcompose(&tensor(mu, mu), &Cospan::right_way(&reassoc))?;

    let pad = |middle: &Cospan| tensor(&tensor(&id, middle), &id);
    let lhs = hcompose(&beta_m, &pad(delta))?;
    let rhs = hcompose(delta, &beta_n)?;
    let through = hcompose(&rhs, &pad(&hcompose(mu, delta)?))?;

    let to_unit = vcompose_chain(&[
        CoherenceIso::left_unitor(&lhs)?.inverse().into_cell(),
        whisker_right(&adj.unit, &lhs)?,
    ])?;
    let reshape = find_two_iso(to_unit.to(), &through)?.ok_or_else(|| {
        Error::Coherence("bimodule compatibility of the multiplication has no witness".into())
    })?;
    let counit_cell = tensor_cells(
        &tensor_cells(&TwoCell::identity(&id), &adj.counit),
        &TwoCell::identity(&id),
    );
    let counit_step = whisker_left(&rhs, &counit_cell)?;
    let flattened = CoherenceIso::right_unitor(&rhs)?.into_cell();
    vcompose_chain(&[to_unit, reshape, counit_step, flattened])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityReport {
    pub unit_left_adjoint: bool,
    pub mult_left_adjoint: bool,
    /// `None` when the multiplication has no right adjoint to paste with.
    pub projection_formula: Option<TwoCell>,
    pub diagnostics: Vec<String>,
}

impl RigidityReport {
    pub fn is_rigid(&self) -> bool {
        self.unit_left_adjoint
            && self.mult_left_adjoint
            && self
                .projection_formula
                .as_ref()
                .is_some_and(TwoCell::is_invertible)
    }
}

pub fn verify_rigid(d: &AlgebraDatum) -> RigidityReport {
    let unit_left_adjoint = is_left_adjoint(&d.unit);
    let mult_left_adjoint = is_left_adjoint(&d.mult);
    let mut diagnostics = Vec::new();
    if !unit_left_adjoint {
        diagnostics.push(format!(
            "unit wrong-way leg {:?} is not a bijection",
            d.unit.right()
        ));
    }
    let projection_formula = if mult_left_adjoint {
        match projection_formula_cell(d) {
            Ok(cell) => {
                if !cell.is_invertible() {
                    diagnostics.push(format!(
                        "projection formula cell {:?} is not a bijection",
                        cell.map()
                    ));
                }
                Some(cell)
            }
            Err(e) => {
                diagnostics.push(format!("projection formula: {e}"));
                None
            }
        }
    } else {
        diagnostics.push(format!(
            "multiplication wrong-way leg {:?} is not a bijection",
            d.mult.right()
        ));
        None
    };
    RigidityReport {
        unit_left_adjoint,
        mult_left_adjoint,
        projection_formula,
        diagnostics,
    }
}

/// A unital multiplication together with its comparison to the fold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classified {
    pub mult: Cospan,
    pub to_fold: TwoCell,
}

/// Every multiplication `A ⊔ A ↛ A` with apex size at most `apex_bound`
/// that is two-sided unital for the right-way unit, one per 2-isomorphism
/// class, each paired with a 2-isomorphism to the fold.
pub fn classify_unital_multiplications(a: &FinSet, apex_bound: usize) -> Result<Vec<Classified>> {
    let unit = Cospan::right_way(&FinFn::initial(a));
    let fold = Cospan::right_way(&finset::fold(a));
    let aa = coproduct(a, a).set;
    let mut out = Vec::new();
    for mult in canonical_cospans(&aa, a, apex_bound) {
        let (left, right) = unitality(a, &unit, &mult)?;
        if left.is_none() || right.is_none() {
            continue;
        }
        let to_fold = find_two_iso(&mult, &fold)?
            .ok_or_else(|| Error::ClassificationCounterexample(format!("{mult:?}")))?;
        out.push(Classified { mult, to_fold });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cospan::enumerate_cells;

    fn set(labels: &[&str]) -> FinSet {
        FinSet::new(labels.iter().copied()).unwrap()
    }

    fn pad_apex(c: &Cospan) -> Cospan {
        let apex = coproduct(c.apex(), &set(&["junk"]));
        Cospan::new(
            apex.inl.after(c.left()).unwrap(),
            apex.inl.after(c.right()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn empty_algebra_is_degenerate() {
        let d = canonical_algebra(&FinSet::empty());
        assert_eq!(d.unit, Cospan::identity(&FinSet::empty()));
        assert!(d.mult.apex().is_empty());
        assert_eq!(counit_of(&d).unwrap(), Cospan::identity(&FinSet::empty()));
        assert!(verify_frobenius(&d).is_ok());
        assert!(verify_rigid(&d).is_rigid());
        assert!(projection_formula_cell(&d).unwrap().is_identity());
    }

    #[test]
    fn point_algebra() {
        let a = set(&["a"]);
        let d = canonical_algebra(&a);
        assert_eq!(d.mult.apex().len(), 1);
        assert_eq!(
            d.witnesses.left_unit.as_ref().unwrap().map().as_slice(),
            &[0]
        );
        let eps = counit_of(&d).unwrap();
        assert_eq!(eps.left(), &FinFn::identity(&a));
        assert!(eps.tgt().is_empty());
        assert!(projection_formula_cell(&d).unwrap().is_invertible());
    }

    #[test]
    fn associativity_composites_match_ternary_fold() {
        let a = set(&["a0", "a1"]);
        let d = canonical_algebra(&a);
        let cell = d.witnesses.assoc.unwrap();
        assert_eq!(cell.from().apex().len(), 2);
        assert_eq!(cell.to().apex().len(), 2);
        let ternary = Cospan::right_way(&finset::fold_n(&a, 3));
        let bracketed = hcompose(
            &cell.to().clone(),
            &Cospan::right_way(&finset::assoc(&a, &a, &a)).mirror(),
        );
        assert!(find_two_iso(&bracketed.unwrap(), &ternary)
            .unwrap()
            .is_some());
    }

    #[test]
    fn comult_is_mirror_of_fold() {
        let a = set(&["a0", "a1"]);
        let d = canonical_algebra(&a);
        assert_eq!(comult_of(&d).unwrap(), Cospan::wrong_way(&finset::fold(&a)));
    }

    #[test]
    fn canonical_algebras_are_frobenius_and_rigid() {
        for n in 0..=4 {
            let a = FinSet::standard("a", n);
            let d = canonical_algebra(&a);
            verify_frobenius(&d).unwrap();
            let report = verify_rigid(&d);
            assert!(report.is_rigid(), "{:?}", report.diagnostics);
            self_duality(&a).unwrap();
        }
    }

    #[test]
    fn padded_comult_fails_counitality() {
        let a = set(&["a0", "a1"]);
        let d = canonical_algebra(&a);
        let padded = pad_apex(&comult_of(&d).unwrap());
        assert_eq!(
            verify_frobenius_with(&d, &counit_of(&d).unwrap(), &padded).unwrap_err(),
            Error::CounitalityFailed(Side::Left)
        );
    }

    #[test]
    fn padded_unit_is_not_rigid() {
        let a = set(&["a0", "a1"]);
        let good = canonical_algebra(&a);
        let d = AlgebraDatum::new(a.clone(), pad_apex(&good.unit), good.mult.clone()).unwrap();
        let report = verify_rigid(&d);
        assert!(!report.unit_left_adjoint);
        assert!(!report.is_rigid());
        assert!(!report.diagnostics.is_empty());
        assert!(matches!(counit_of(&d), Err(Error::NotRigidCandidate(_))));
    }

    #[test]
    fn self_duality_of_point() {
        let d = self_duality(&set(&["a"])).unwrap();
        assert_eq!(d.ev.apex().len(), 1);
        assert_eq!(d.left_zigzag.from().apex().len(), 1);
        assert_eq!(d.right_zigzag.from().apex().len(), 1);
        let empty = self_duality(&FinSet::empty()).unwrap();
        assert!(empty.left_zigzag.map().dom().is_empty());
    }

    #[test]
    fn transpose_is_mirror_and_involutive() {
        let a = set(&["a0", "a1"]);
        let b = set(&["b"]);
        let c = Cospan::new(
            FinFn::new(a.clone(), FinSet::standard("x", 3), vec![0, 0]).unwrap(),
            FinFn::new(b.clone(), FinSet::standard("x", 3), vec![1]).unwrap(),
        )
        .unwrap();
        let t = transpose(&c).unwrap();
        assert!(find_two_iso(&t, &c.mirror()).unwrap().is_some());
        let tt = transpose(&t).unwrap();
        assert!(find_two_iso(&tt, &c).unwrap().is_some());
        let id = Cospan::identity(&a);
        assert!(find_two_iso(&transpose(&id).unwrap(), &id)
            .unwrap()
            .is_some());
    }

    #[test]
    fn adjoint_to_transpose_examples() {
        let a = set(&["a0", "a1"]);
        assert!(verify_adjoint_to_transpose(&FinFn::identity(&a)).unwrap());
        assert!(verify_adjoint_to_transpose(&FinFn::initial(&a)).unwrap());
        assert!(verify_adjoint_to_transpose(&finset::fold(&a)).unwrap());
    }

    #[test]
    fn classification_small() {
        let empty = classify_unital_multiplications(&FinSet::empty(), 3).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].mult.apex().is_empty());
        let point = classify_unital_multiplications(&set(&["a"]), 2).unwrap();
        assert_eq!(point.len(), 1);
        let pair = classify_unital_multiplications(&set(&["a0", "a1"]), 3).unwrap();
        assert_eq!(pair.len(), 1);
        assert!(pair[0].to_fold.is_invertible());
    }

    #[test]
    fn cells_between_right_way_cospans_are_invertible() {
        let a = set(&["a0", "a1"]);
        let b = set(&["b0", "b1"]);
        for f in finset::enumerate_functions(&a, &b) {
            for g in finset::enumerate_functions(&a, &b) {
                let cells =
                    enumerate_cells(&Cospan::right_way(&f), &Cospan::right_way(&g)).unwrap();
                assert!(cells.iter().all(TwoCell::is_invertible));
                assert_eq!(cells.len(), usize::from(f == g));
            }
        }
    }
}
