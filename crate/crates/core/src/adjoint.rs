//! Adjunctions in cospans: the left-adjoint test, witness synthesis, zigzag
//! verification, a bounded brute-force adjoint search, and Beck–Chevalley
//! cells of commuting squares.

use crate::cospan::{
    canonical_cospans, enumerate_cells, hcompose, vcompose_chain, whisker_left, whisker_right,
    CoherenceIso, Cospan, TwoCell,
};
use crate::error::{Error, Result};
use crate::finset::{pushout, FinFn};

/// `left ⊣ right` with `unit : id ⇒ right ∘ left` and
/// `counit : left ∘ right ⇒ id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionWitness {
    pub left: Cospan,
    pub right: Cospan,
    pub unit: TwoCell,
    pub counit: TwoCell,
}

impl AdjunctionWitness {
    /// Checks that the cells have the boundaries of a unit and counit.
    pub fn new(left: Cospan, right: Cospan, unit: TwoCell, counit: TwoCell) -> Result<Self> {
        if left.src() != right.tgt() || left.tgt() != right.src() {
            return Err(Error::TypeMismatch("left and right are not opposed".into()));
        }
        if *unit.from() != Cospan::identity(left.src()) || *unit.to() != hcompose(&right, &left)? {
            return Err(Error::TypeMismatch("unit has the wrong boundary".into()));
        }
        if *counit.from() != hcompose(&left, &right)?
            || *counit.to() != Cospan::identity(left.tgt())
        {
            return Err(Error::TypeMismatch("counit has the wrong boundary".into()));
        }
        Ok(Self {
            left,
            right,
            unit,
            counit,
        })
    }
}

/// A cospan is a left adjoint exactly when its wrong-way leg is a bijection.
pub fn is_left_adjoint(c: &Cospan) -> bool {
    c.right().is_bijection()
}

/// Synthesizes `c ⊣ mirror(right_way(g⁻¹ ∘ f))` for `c = A →f X ←g B`
/// with `g` bijective.
///
/// The unit is the common leg `A → X ⊔_B B`; the counit is the fold-type map
/// out of `B ⊔_A X` induced by `id_B` and `g⁻¹`.
pub fn construct_right_adjoint(c: &Cospan) -> Result<AdjunctionWitness> {
    let g_inv = c.right().inverse().ok_or(Error::NotLeftAdjoint)?;
    let normal = g_inv.after(c.left())?;
    let right = Cospan::wrong_way(&normal);

    let right_after_left = hcompose(&right, c)?;
    let unit = TwoCell::new(
        Cospan::identity(c.src()),
        right_after_left.clone(),
        right_after_left.left().clone(),
    )?;

    // left ∘ right has apex B ⊔_A X, the pushout of `normal` and `c.left`.
    let po = pushout(right.right(), c.left())?;
    let counit_map = po.mediate(&FinFn::identity(c.tgt()), &g_inv)?;
    let counit = TwoCell::new(hcompose(c, &right)?, Cospan::identity(c.tgt()), counit_map)?;
    AdjunctionWitness::new(c.clone(), right, unit, counit)
}

/// Outcome of pasting both zigzag composites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagReport {
    /// `(counit ⋆ L) ∘ (L ⋆ unit)` is the identity on `L`.
    pub left_zigzag: bool,
    /// `(R ⋆ counit) ∘ (unit ⋆ R)` is the identity on `R`.
    pub right_zigzag: bool,
    pub diagnostics: Vec<String>,
}

impl ZigzagReport {
    pub fn holds(&self) -> bool {
        self.left_zigzag && self.right_zigzag
    }
}

/// The pasted composite `L ⇒ L∘id ⇒ L∘(R∘L) ⇒ (L∘R)∘L ⇒ id∘L ⇒ L`.
pub fn left_zigzag(w: &AdjunctionWitness) -> Result<TwoCell> {
    let l = &w.left;
    vcompose_chain(&[
        CoherenceIso::right_unitor(l)?.inverse().into_cell(),
        whisker_left(l, &w.unit)?,
        CoherenceIso::associator(l, &w.right, l)?
            .inverse()
            .into_cell(),
        whisker_right(&w.counit, l)?,
        CoherenceIso::left_unitor(l)?.into_cell(),
    ])
}

/// The pasted composite `R ⇒ id∘R ⇒ (R∘L)∘R ⇒ R∘(L∘R) ⇒ R∘id ⇒ R`.
pub fn right_zigzag(w: &AdjunctionWitness) -> Result<TwoCell> {
    let r = &w.right;
    vcompose_chain(&[
        CoherenceIso::left_unitor(r)?.inverse().into_cell(),
        whisker_right(&w.unit, r)?,
        CoherenceIso::associator(r, &w.left, r)?.into_cell(),
        whisker_left(r, &w.counit)?,
        CoherenceIso::right_unitor(r)?.into_cell(),
    ])
}

pub fn verify_adjunction(w: &AdjunctionWitness) -> Result<ZigzagReport> {
    let first = left_zigzag(w)?;
    let second = right_zigzag(w)?;
    let mut diagnostics = Vec::new();
    if !first.is_identity() {
        diagnostics.push(format!(
            "left zigzag on the left adjoint is {:?}, not the identity",
            first.map()
        ));
    }
    if !second.is_identity() {
        diagnostics.push(format!(
            "right zigzag on the right adjoint is {:?}, not the identity",
            second.map()
        ));
    }
    Ok(ZigzagReport {
        left_zigzag: first.is_identity(),
        right_zigzag: second.is_identity(),
        diagnostics,
    })
}

/// `|A| + |B| + 2` for a cospan `A ↛ B`.
pub fn default_apex_bound(c: &Cospan) -> usize {
    c.src().len() + c.tgt().len() + 2
}

/// Witnesses for every candidate right adjoint class with apex size at most
/// `apex_bound`. Candidates are enumerated one per 2-isomorphism class; for
/// each, the first unit/counit pair passing the zigzags is kept.
pub fn search_adjoints(c: &Cospan, apex_bound: usize) -> Vec<AdjunctionWitness> {
    search(c, apex_bound, false)
}

/// The first witness found with apex size at most `apex_bound`. `None` only
/// means that no witness exists within the bound.
pub fn search_adjoint(c: &Cospan, apex_bound: usize) -> Option<AdjunctionWitness> {
    search(c, apex_bound, true).into_iter().next()
}

fn search(c: &Cospan, apex_bound: usize, first_only: bool) -> Vec<AdjunctionWitness> {
    let mut found = Vec::new();
    let id_src = Cospan::identity(c.src());
    let id_tgt = Cospan::identity(c.tgt());
    for right in canonical_cospans(c.tgt(), c.src(), apex_bound) {
        let Ok(rl) = hcompose(&right, c) else {
            continue;
        };
        // The unit, if any, is unique: the identity's apex is hit by its legs.
        let units = enumerate_cells(&id_src, &rl).unwrap_or_default();
        if units.is_empty() {
            continue;
        }
        let Ok(lr) = hcompose(c, &right) else {
            continue;
        };
        let counits = enumerate_cells(&lr, &id_tgt).unwrap_or_default();
        let witness = units.iter().find_map(|unit| {
            counits.iter().find_map(|counit| {
                let w = AdjunctionWitness {
                    left: c.clone(),
                    right: right.clone(),
                    unit: unit.clone(),
                    counit: counit.clone(),
                };
                verify_adjunction(&w).ok()?.holds().then_some(w)
            })
        });
        if let Some(w) = witness {
            found.push(w);
            if first_only {
                break;
            }
        }
    }
    found
}

/// A square `g' ∘ f = f' ∘ g` of functions
///
/// ```text
///   A --f--> B
///   |        |
///   g        g'
///   v        v
///   C --f'-> P
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingSquare {
    pub f: FinFn,
    pub g: FinFn,
    pub g_prime: FinFn,
    pub f_prime: FinFn,
}

impl CommutingSquare {
    pub fn new(f: FinFn, g: FinFn, g_prime: FinFn, f_prime: FinFn) -> Result<Self> {
        let top = g_prime.after(&f)?;
        let bottom = f_prime.after(&g)?;
        if top != bottom {
            return Err(Error::NotCommuting);
        }
        Ok(Self {
            f,
            g,
            g_prime,
            f_prime,
        })
    }

    /// The pushout square of the span `(f, g)`.
    pub fn pushout_of(f: &FinFn, g: &FinFn) -> Result<Self> {
        let po = pushout(f, g)?;
        Self::new(f.clone(), g.clone(), po.p1, po.p2)
    }
}

/// The Beck–Chevalley cell `g_! f^R ⇒ f'^R g'_!` of the right-way image of
/// the square, where `(-)_!` is the right-way functor and `(-)^R` takes the
/// mirror. It is the mediating map `B ⊔_A C → P ⊔_P P` of the cocone
/// `(g', f')`.
pub fn beck_chevalley_cell(sq: &CommutingSquare) -> Result<TwoCell> {
    let from = hcompose(&Cospan::right_way(&sq.g), &Cospan::wrong_way(&sq.f))?;
    let to = hcompose(
        &Cospan::wrong_way(&sq.f_prime),
        &Cospan::right_way(&sq.g_prime),
    )?;
    let po = pushout(&sq.f, &sq.g)?;
    let map = po.mediate(to.left(), to.right()).map_err(|e| match e {
        Error::NotACocone(_) => Error::NotCommuting,
        other => other,
    })?;
    TwoCell::new(from, to, map)
}

pub fn verify_cobase_change(sq: &CommutingSquare) -> Result<bool> {
    Ok(beck_chevalley_cell(sq)?.is_invertible())
}
