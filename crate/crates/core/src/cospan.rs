//! The 2-category of cospans of finite sets.
//!
//! A 1-cell `A ↛ B` is a cospan `A → X ← B`; composition is by pushout and
//! the monoidal product is disjoint union. A 2-cell is a map of apexes that
//! commutes with both legs. Cospans compare on the nose; "isomorphic" always
//! means a bijective 2-cell found by [`find_two_iso`].
//!
//! The structural isomorphisms of pushout composition (associator, unitors,
//! interchange with `⊗`) are built explicitly as mediating maps in
//! [`CoherenceIso`], so pasted composites can be compared by literal equality.

use std::fmt;

use crate::error::{Error, Result};
use crate::finset::{self, coproduct_fn, pushout, FinFn, FinSet, Pushout};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cospan {
    left: FinFn,
    right: FinFn,
}

impl Cospan {
    /// `src →left apex ←right tgt`.
    pub fn new(left: FinFn, right: FinFn) -> Result<Self> {
        if left.cod() != right.cod() {
            return Err(Error::TypeMismatch(format!(
                "cospan legs land in {} and {}",
                left.cod(),
                right.cod()
            )));
        }
        Ok(Self { left, right })
    }

    pub fn identity(a: &FinSet) -> Self {
        Self {
            left: FinFn::identity(a),
            right: FinFn::identity(a),
        }
    }

    /// `A →f B = B`.
    pub fn right_way(f: &FinFn) -> Self {
        Self {
            left: f.clone(),
            right: FinFn::identity(f.cod()),
        }
    }

    /// `B = B ←f A`, a cospan from `B` to `A`.
    pub fn wrong_way(f: &FinFn) -> Self {
        Self::right_way(f).mirror()
    }

    pub fn mirror(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn src(&self) -> &FinSet {
        self.left.dom()
    }

    pub fn tgt(&self) -> &FinSet {
        self.right.dom()
    }

    pub fn apex(&self) -> &FinSet {
        self.left.cod()
    }

    pub fn left(&self) -> &FinFn {
        &self.left
    }

    pub fn right(&self) -> &FinFn {
        &self.right
    }

    pub fn is_parallel(&self, other: &Cospan) -> bool {
        self.src() == other.src() && self.tgt() == other.tgt()
    }

    /// Every apex point is hit by some leg.
    pub fn is_jointly_surjective(&self) -> bool {
        let mut hit = self.left.image_mask();
        for (h, r) in hit.iter_mut().zip(self.right.image_mask()) {
            *h |= r;
        }
        hit.into_iter().all(|b| b)
    }

    /// Diagrammatic composition: `self` first, then `next`.
    pub fn then(&self, next: &Cospan) -> Result<Cospan> {
        hcompose(next, self)
    }

    /// Precomposes the legs with `s : S' → src` and `t : T' → tgt`.
    pub fn precompose_legs(&self, s: &FinFn, t: &FinFn) -> Result<Cospan> {
        Cospan::new(self.left.after(s)?, self.right.after(t)?)
    }
}

impl fmt::Debug for Cospan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cospan({:?} ; {:?})", self.left, self.right)
    }
}

fn composite_pushout(c2: &Cospan, c1: &Cospan) -> Result<Pushout> {
    if c1.tgt() != c2.src() {
        return Err(Error::TypeMismatch(format!(
            "cannot compose: target {} is not source {}",
            c1.tgt(),
            c2.src()
        )));
    }
    pushout(&c1.right, &c2.left)
}

fn cospan_from_pushout(c2: &Cospan, c1: &Cospan, po: &Pushout) -> Result<Cospan> {
    Cospan::new(po.p1.after(&c1.left)?, po.p2.after(&c2.right)?)
}

/// `c2 ∘ c1`, apex `X ⊔_B Y`.
pub fn hcompose(c2: &Cospan, c1: &Cospan) -> Result<Cospan> {
    let po = composite_pushout(c2, c1)?;
    cospan_from_pushout(c2, c1, &po)
}

/// Componentwise disjoint union.
pub fn tensor(c1: &Cospan, c2: &Cospan) -> Cospan {
    Cospan {
        left: coproduct_fn(&c1.left, &c2.left),
        right: coproduct_fn(&c1.right, &c2.right),
    }
}

/// Composes a nonempty sequence diagrammatically (first element first).
pub fn compose_chain(parts: &[Cospan]) -> Result<Cospan> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::TypeMismatch("empty composition chain".into()))?;
    rest.iter().try_fold(first.clone(), |acc, c| acc.then(c))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwoCell {
    from: Cospan,
    to: Cospan,
    map: FinFn,
}

impl TwoCell {
    pub fn new(from: Cospan, to: Cospan, map: FinFn) -> Result<Self> {
        if !from.is_parallel(&to) {
            return Err(Error::NotParallel);
        }
        if map.dom() != from.apex() || map.cod() != to.apex() {
            return Err(Error::TypeMismatch(
                "cell map does not join the apexes".into(),
            ));
        }
        if map.after(&from.left)? != to.left {
            return Err(Error::NotACell(
                "map does not commute with the left legs".into(),
            ));
        }
        if map.after(&from.right)? != to.right {
            return Err(Error::NotACell(
                "map does not commute with the right legs".into(),
            ));
        }
        Ok(Self { from, to, map })
    }

    pub fn identity(c: &Cospan) -> Self {
        Self {
            from: c.clone(),
            to: c.clone(),
            map: FinFn::identity(c.apex()),
        }
    }

    pub fn from(&self) -> &Cospan {
        &self.from
    }

    pub fn to(&self) -> &Cospan {
        &self.to
    }

    pub fn map(&self) -> &FinFn {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.from == self.to && self.map == FinFn::identity(self.from.apex())
    }

    pub fn is_invertible(&self) -> bool {
        is_invertible_cell(self)
    }

    pub fn inverse(&self) -> Option<TwoCell> {
        let inv = self.map.inverse()?;
        Some(TwoCell {
            from: self.to.clone(),
            to: self.from.clone(),
            map: inv,
        })
    }
}

impl fmt::Debug for TwoCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoCell({:?})", self.map)
    }
}

pub fn is_invertible_cell(cell: &TwoCell) -> bool {
    cell.map.is_bijection()
}

/// `β ∘ α`: `α` first.
pub fn vcompose(beta: &TwoCell, alpha: &TwoCell) -> Result<TwoCell> {
    if alpha.to != beta.from {
        return Err(Error::TypeMismatch(
            "vertical composition: target of the first cell is not the source of the second".into(),
        ));
    }
    TwoCell::new(
        alpha.from.clone(),
        beta.to.clone(),
        beta.map.after(&alpha.map)?,
    )
}

/// Vertical composite of a sequence, first element first.
pub fn vcompose_chain(cells: &[TwoCell]) -> Result<TwoCell> {
    let (first, rest) = cells
        .split_first()
        .ok_or_else(|| Error::TypeMismatch("empty vertical chain".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, c| vcompose(c, &acc))
}

/// `β ⋆ α : d ∘ c ⇒ d' ∘ c'` for `α : c ⇒ c'` and `β : d ⇒ d'`.
pub fn hcompose_cells(beta: &TwoCell, alpha: &TwoCell) -> Result<TwoCell> {
    let po_from = composite_pushout(&beta.from, &alpha.from)?;
    let po_to = composite_pushout(&beta.to, &alpha.to)?;
    let from = cospan_from_pushout(&beta.from, &alpha.from, &po_from)?;
    let to = cospan_from_pushout(&beta.to, &alpha.to, &po_to)?;
    let map = po_from.mediate(&po_to.p1.after(&alpha.map)?, &po_to.p2.after(&beta.map)?)?;
    TwoCell::new(from, to, map)
}

/// `g ⋆ α : g ∘ c ⇒ g ∘ c'`.
pub fn whisker_left(g: &Cospan, alpha: &TwoCell) -> Result<TwoCell> {
    hcompose_cells(&TwoCell::identity(g), alpha)
}

/// `α ⋆ g : c ∘ g ⇒ c' ∘ g`.
pub fn whisker_right(alpha: &TwoCell, g: &Cospan) -> Result<TwoCell> {
    hcompose_cells(alpha, &TwoCell::identity(g))
}

/// `α ⊗ β`.
pub fn tensor_cells(alpha: &TwoCell, beta: &TwoCell) -> TwoCell {
    TwoCell {
        from: tensor(&alpha.from, &beta.from),
        to: tensor(&alpha.to, &beta.to),
        map: coproduct_fn(&alpha.map, &beta.map),
    }
}

/// Images of the legs pin an apex map down on the jointly-hit part. Returns
/// `None` when two leg elements demand different images.
fn forced_assignment(c: &Cospan, d: &Cospan) -> Option<Vec<Option<usize>>> {
    let mut assigned = vec![None; c.apex().len()];
    let pairs = (0..c.src().len())
        .map(|s| (c.left.apply(s), d.left.apply(s)))
        .chain((0..c.tgt().len()).map(|t| (c.right.apply(t), d.right.apply(t))));
    for (x, y) in pairs {
        match assigned[x] {
            None => assigned[x] = Some(y),
            Some(prev) if prev != y => return None,
            Some(_) => {}
        }
    }
    Some(assigned)
}

/// Searches for a bijective 2-cell `c ⇒ d`.
///
/// Commuting with the legs fixes the map on every apex point in the image of
/// a leg, so the search propagates those constraints fiber by fiber and fails
/// as soon as two constraints clash or injectivity breaks. Apex points outside
/// both images are unconstrained and interchangeable; they are matched in
/// order, which succeeds exactly when the two sides have equally many.
pub fn find_two_iso(c: &Cospan, d: &Cospan) -> Result<Option<TwoCell>> {
    if !c.is_parallel(d) {
        return Err(Error::NotParallel);
    }
    if c.apex().len() != d.apex().len() {
        return Ok(None);
    }
    let Some(assigned) = forced_assignment(c, d) else {
        return Ok(None);
    };
    let mut used = vec![false; d.apex().len()];
    for &y in assigned.iter().flatten() {
        if std::mem::replace(&mut used[y], true) {
            return Ok(None);
        }
    }
    let mut spare = (0..d.apex().len()).filter(|&y| !used[y]);
    let map: Vec<usize> = assigned
        .into_iter()
        .map(|y| y.or_else(|| spare.next()))
        .collect::<Option<_>>()
        .expect("equal sizes leave exactly enough spare points");
    let map = FinFn::new(c.apex().clone(), d.apex().clone(), map)?;
    TwoCell::new(c.clone(), d.clone(), map).map(Some)
}

/// Every 2-cell `c ⇒ d`, in lexicographic order of the free apex images.
pub fn enumerate_cells(c: &Cospan, d: &Cospan) -> Result<Vec<TwoCell>> {
    if !c.is_parallel(d) {
        return Err(Error::NotParallel);
    }
    let Some(assigned) = forced_assignment(c, d) else {
        return Ok(Vec::new());
    };
    let free: Vec<usize> = (0..assigned.len())
        .filter(|&x| assigned[x].is_none())
        .collect();
    let free_set = FinSet::standard("f", free.len());
    let mut out = Vec::new();
    for choice in finset::enumerate_functions(&free_set, d.apex()) {
        let mut map: Vec<usize> = assigned.iter().map(|y| y.unwrap_or(0)).collect();
        for (k, &x) in free.iter().enumerate() {
            map[x] = choice.apply(k);
        }
        let map = FinFn::new(c.apex().clone(), d.apex().clone(), map)?;
        out.push(TwoCell::new(c.clone(), d.clone(), map)?);
    }
    Ok(out)
}

/// A bijective 2-cell arising from a structural comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceIso(TwoCell);

impl CoherenceIso {
    fn checked(cell: TwoCell, what: &str) -> Result<Self> {
        if cell.is_invertible() {
            Ok(Self(cell))
        } else {
            Err(Error::Coherence(format!("{what} is not bijective")))
        }
    }

    pub fn cell(&self) -> &TwoCell {
        &self.0
    }

    pub fn into_cell(self) -> TwoCell {
        self.0
    }

    pub fn inverse(&self) -> CoherenceIso {
        Self(self.0.inverse().expect("coherence cells are bijective"))
    }

    /// `(c3 ∘ c2) ∘ c1 ⇒ c3 ∘ (c2 ∘ c1)`.
    pub fn associator(c3: &Cospan, c2: &Cospan, c1: &Cospan) -> Result<Self> {
        let inner_l = composite_pushout(c3, c2)?;
        let c32 = cospan_from_pushout(c3, c2, &inner_l)?;
        let outer_l = composite_pushout(&c32, c1)?;
        let from = cospan_from_pushout(&c32, c1, &outer_l)?;

        let inner_r = composite_pushout(c2, c1)?;
        let c21 = cospan_from_pushout(c2, c1, &inner_r)?;
        let outer_r = composite_pushout(c3, &c21)?;
        let to = cospan_from_pushout(c3, &c21, &outer_r)?;

        let from_c32 = inner_l.mediate(&outer_r.p1.after(&inner_r.p2)?, &outer_r.p2)?;
        let map = outer_l.mediate(&outer_r.p1.after(&inner_r.p1)?, &from_c32)?;
        Self::checked(TwoCell::new(from, to, map)?, "associator")
    }

    /// `id ∘ c ⇒ c`.
    pub fn left_unitor(c: &Cospan) -> Result<Self> {
        let id = Cospan::identity(c.tgt());
        let po = composite_pushout(&id, c)?;
        let from = cospan_from_pushout(&id, c, &po)?;
        let map = po.mediate(&FinFn::identity(c.apex()), &c.right)?;
        Self::checked(TwoCell::new(from, c.clone(), map)?, "left unitor")
    }

    /// `c ∘ id ⇒ c`.
    pub fn right_unitor(c: &Cospan) -> Result<Self> {
        let id = Cospan::identity(c.src());
        let po = composite_pushout(c, &id)?;
        let from = cospan_from_pushout(c, &id, &po)?;
        let map = po.mediate(&c.left, &FinFn::identity(c.apex()))?;
        Self::checked(TwoCell::new(from, c.clone(), map)?, "right unitor")
    }

    /// `(c1 ⊗ c2) ∘ (d1 ⊗ d2) ⇒ (c1 ∘ d1) ⊗ (c2 ∘ d2)`.
    pub fn interchange(c1: &Cospan, d1: &Cospan, c2: &Cospan, d2: &Cospan) -> Result<Self> {
        let c = tensor(c1, c2);
        let d = tensor(d1, d2);
        let po = composite_pushout(&c, &d)?;
        let from = cospan_from_pushout(&c, &d, &po)?;

        let po1 = composite_pushout(c1, d1)?;
        let po2 = composite_pushout(c2, d2)?;
        let to = tensor(
            &cospan_from_pushout(c1, d1, &po1)?,
            &cospan_from_pushout(c2, d2, &po2)?,
        );
        let map = po.mediate(
            &coproduct_fn(&po1.p1, &po2.p1),
            &coproduct_fn(&po1.p2, &po2.p2),
        )?;
        Self::checked(TwoCell::new(from, to, map)?, "interchange")
    }
}

/// All cospans `src ↛ tgt` with apex size at most `apex_bound`, one per
/// 2-isomorphism class.
///
/// A class is determined by the partition the legs induce on `src ⊔ tgt`
/// together with the number of apex points outside both images. Blocks are
/// numbered by first occurrence (src elements first, then tgt), hit apex
/// points are `x0..`, and the unhit ones follow.
pub fn canonical_cospans(src: &FinSet, tgt: &FinSet, apex_bound: usize) -> Vec<Cospan> {
    let n = src.len() + tgt.len();
    let mut out = Vec::new();
    let mut word = vec![0usize; n];
    fn growth(
        pos: usize,
        blocks: usize,
        bound: usize,
        word: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], usize),
    ) {
        if pos == word.len() {
            visit(word, blocks);
            return;
        }
        for v in 0..=blocks.min(bound.saturating_sub(1)) {
            if v == blocks && blocks >= bound {
                continue;
            }
            word[pos] = v;
            growth(pos + 1, blocks.max(v + 1), bound, word, visit);
        }
    }
    let mut visit = |w: &[usize], blocks: usize| {
        for size in blocks..=apex_bound {
            let apex = FinSet::standard("x", size);
            let left =
                FinFn::new(src.clone(), apex.clone(), w[..src.len()].to_vec()).expect("in range");
            let right = FinFn::new(tgt.clone(), apex, w[src.len()..].to_vec()).expect("in range");
            out.push(Cospan { left, right });
        }
    };
    growth(0, 0, apex_bound, &mut word, &mut visit);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::coproduct;

    fn set(labels: &[&str]) -> FinSet {
        FinSet::new(labels.iter().copied()).unwrap()
    }

    fn f_example() -> FinFn {
        FinFn::from_pairs(set(&["a"]), set(&["b0", "b1"]), [("a", "b0")]).unwrap()
    }

    #[test]
    fn right_way_of_identity_is_identity() {
        let a = set(&["a0", "a1"]);
        assert_eq!(
            Cospan::right_way(&FinFn::identity(&a)),
            Cospan::identity(&a)
        );
        assert_eq!(Cospan::identity(&a).mirror(), Cospan::identity(&a));
    }

    #[test]
    fn wrong_way_unfolds() {
        let f = f_example();
        let w = Cospan::wrong_way(&f);
        assert_eq!(w.src(), f.cod());
        assert_eq!(w.tgt(), f.dom());
        assert_eq!(w.left(), &FinFn::identity(f.cod()));
        assert_eq!(w.right(), &f);
        assert_eq!(Cospan::right_way(&f).mirror(), w);
        assert_eq!(w.mirror().mirror(), w);
    }

    #[test]
    fn unit_and_counit_composites() {
        let f = f_example();
        let rw = Cospan::right_way(&f);
        let ww = Cospan::wrong_way(&f);
        let unit_side = hcompose(&ww, &rw).unwrap();
        assert_eq!(unit_side.apex().len(), 2);
        assert_eq!(unit_side.left().as_slice(), unit_side.right().as_slice());
        let counit_side = hcompose(&rw, &ww).unwrap();
        assert_eq!(counit_side.apex().len(), 3);
    }

    #[test]
    fn identity_composites_are_isomorphic() {
        let f = f_example();
        let c = Cospan::right_way(&f);
        let lhs = hcompose(&c, &Cospan::identity(c.src())).unwrap();
        assert!(find_two_iso(&lhs, &c).unwrap().is_some());
        let r = CoherenceIso::right_unitor(&c).unwrap();
        assert_eq!(r.cell().from(), &lhs);
    }

    #[test]
    fn right_way_is_functorial_up_to_iso() {
        let f = f_example();
        let g =
            FinFn::from_pairs(set(&["b0", "b1"]), set(&["c"]), [("b0", "c"), ("b1", "c")]).unwrap();
        let lhs = hcompose(&Cospan::right_way(&g), &Cospan::right_way(&f)).unwrap();
        let rhs = Cospan::right_way(&g.after(&f).unwrap());
        assert!(find_two_iso(&lhs, &rhs).unwrap().is_some());
    }

    #[test]
    fn tensor_with_empty_and_of_right_way() {
        let f = f_example();
        let c = Cospan::right_way(&f);
        let t = tensor(&c, &Cospan::identity(&FinSet::empty()));
        assert_eq!(t.apex().len(), c.apex().len());
        let g = FinFn::identity(&set(&["z"]));
        assert_eq!(
            tensor(&Cospan::right_way(&f), &Cospan::right_way(&g)),
            Cospan::right_way(&coproduct_fn(&f, &g))
        );
    }

    #[test]
    fn find_two_iso_basics() {
        let c = Cospan::right_way(&f_example());
        let id = find_two_iso(&c, &c).unwrap().unwrap();
        assert!(id.is_identity());
        let a = set(&["a"]);
        let small = Cospan::identity(&a);
        let pad = Cospan::new(
            FinFn::new(a.clone(), set(&["p", "q"]), vec![0]).unwrap(),
            FinFn::new(a.clone(), set(&["p", "q"]), vec![0]).unwrap(),
        )
        .unwrap();
        assert_eq!(find_two_iso(&small, &pad).unwrap(), None);
        assert_eq!(find_two_iso(&small, &c).unwrap_err(), Error::NotParallel);
    }

    #[test]
    fn fold_cell_is_not_invertible() {
        let a = set(&["a"]);
        let sum = coproduct(&a, &a).set;
        // The cospan A ⊔ A → A ⊔ A ← ∅ maps onto A ⊔ A → A ← ∅ by the fold.
        let from = Cospan::new(FinFn::identity(&sum), FinFn::initial(&sum)).unwrap();
        let fold = finset::fold(&a);
        let to = Cospan::new(fold.clone(), FinFn::initial(&a)).unwrap();
        let cell = TwoCell::new(from, to, fold).unwrap();
        assert!(!cell.is_invertible());
        assert!(TwoCell::identity(&Cospan::identity(&a)).is_invertible());
    }

    #[test]
    fn identity_cells_are_units() {
        let c = Cospan::right_way(&f_example());
        let alpha = TwoCell::identity(&c);
        assert_eq!(vcompose(&alpha, &alpha).unwrap(), alpha);
        let w = whisker_left(&Cospan::identity(c.tgt()), &alpha).unwrap();
        assert!(w.is_identity());
        let w = whisker_right(&alpha, &Cospan::identity(c.src())).unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn canonical_cospans_counts() {
        // One element on each side, apex ≤ 2: partitions {a}{b} or {ab},
        // each with apex sizes from the block count up to 2.
        let a = set(&["a"]);
        let b = set(&["b"]);
        assert_eq!(canonical_cospans(&a, &b, 2).len(), 3);
        assert_eq!(
            canonical_cospans(&FinSet::empty(), &FinSet::empty(), 3).len(),
            4
        );
        assert_eq!(canonical_cospans(&a, &b, 0).len(), 0);
    }
}
