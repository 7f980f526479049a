//! Finite sets of string labels, functions between them, coproducts and
//! pushouts.
//!
//! A [`FinSet`] keeps its labels sorted, so two sets with the same labels are
//! equal and serialize identically. A [`FinFn`] stores its mapping as indices
//! into the sorted codomain.

use std::fmt;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet {
    elements: Arc<[String]>,
}

impl FinSet {
    /// Builds a set from labels in any order. Repeated labels are rejected.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut elements: Vec<String> = labels.into_iter().map(Into::into).collect();
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].clone()));
        }
        Ok(Self {
            elements: elements.into(),
        })
    }

    pub fn empty() -> Self {
        Self {
            elements: Vec::new().into(),
        }
    }

    /// `{prefix0, prefix1, ...}` with `n` elements.
    pub fn standard(prefix: &str, n: usize) -> Self {
        Self::new((0..n).map(|i| format!("{prefix}{i}"))).expect("distinct by construction")
    }

    fn from_sorted(elements: Vec<String>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self {
            elements: elements.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, index: usize) -> &str {
        &self.elements[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements
            .binary_search_by(|probe| probe.as_str().cmp(label))
            .ok()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index_of(label).is_some()
    }

    /// Same elements with every label prefixed by `prefix`.
    pub fn prefixed(&self, prefix: &str) -> Self {
        Self::from_sorted(
            self.elements
                .iter()
                .map(|x| format!("{prefix}{x}"))
                .collect(),
        )
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elements.join(", "))
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A total function between finite sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinFn {
    dom: FinSet,
    cod: FinSet,
    map: Vec<usize>,
}

impl FinFn {
    /// `map[i]` is the codomain index of the `i`-th domain element.
    pub fn new(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.len() {
            return Err(Error::TypeMismatch(format!(
                "mapping has {} entries but the domain has {} elements",
                map.len(),
                dom.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= cod.len()) {
            return Err(Error::TypeMismatch(format!(
                "codomain index {bad} out of range for {cod}"
            )));
        }
        Ok(Self { dom, cod, map })
    }

    /// Builds a function from `(source label, target label)` pairs. Every
    /// domain element must appear exactly once.
    pub fn from_pairs<'a, I>(dom: FinSet, cod: FinSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut map = vec![None; dom.len()];
        for (x, y) in pairs {
            let i = dom.index_of(x).ok_or_else(|| Error::UnknownLabel {
                label: x.to_string(),
                context: format!("domain {dom}"),
            })?;
            let j = cod.index_of(y).ok_or_else(|| Error::UnknownLabel {
                label: y.to_string(),
                context: format!("codomain {cod}"),
            })?;
            if map[i].replace(j).is_some() {
                return Err(Error::DuplicateLabel(x.to_string()));
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, y)| {
                y.ok_or_else(|| Error::TypeMismatch(format!("no image for `{}`", dom.label(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dom, cod, map })
    }

    /// Builds a function by computing each image label from the source label.
    pub fn from_label_fn(
        dom: FinSet,
        cod: FinSet,
        mut image: impl FnMut(&str) -> String,
    ) -> Result<Self> {
        let map = dom
            .elements()
            .iter()
            .map(|x| {
                let y = image(x);
                cod.index_of(&y).ok_or_else(|| Error::UnknownLabel {
                    label: y,
                    context: format!("codomain {cod}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dom, cod, map })
    }

    pub fn identity(set: &FinSet) -> Self {
        Self {
            dom: set.clone(),
            cod: set.clone(),
            map: (0..set.len()).collect(),
        }
    }

    /// The unique map out of the empty set.
    pub fn initial(set: &FinSet) -> Self {
        Self {
            dom: FinSet::empty(),
            cod: set.clone(),
            map: Vec::new(),
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn apply(&self, index: usize) -> usize {
        self.map[index]
    }

    pub fn apply_label(&self, label: &str) -> Option<&str> {
        self.dom
            .index_of(label)
            .map(|i| self.cod.label(self.map[i]))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &FinFn) -> Result<FinFn> {
        if first.cod != self.dom {
            return Err(Error::TypeMismatch(format!(
                "cannot compose: codomain {} is not domain {}",
                first.cod, self.dom
            )));
        }
        Ok(FinFn {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            map: first.map.iter().map(|&y| self.map[y]).collect(),
        })
    }

    pub fn image_mask(&self) -> Vec<bool> {
        let mut hit = vec![false; self.cod.len()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit
    }

    /// Domain indices mapping to `y`, in domain order.
    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&x| self.map[x] == y).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.map
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        self.image_mask().into_iter().all(|b| b)
    }

    pub fn is_bijection(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinFn> {
        if !self.is_bijection() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(FinFn {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            map: inv,
        })
    }
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} [", self.dom, self.cod)?;
        for (i, &y) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}↦{}", self.dom.label(i), self.cod.label(y))?;
        }
        f.write_str("]")
    }
}

/// Disjoint union with its two injections. Labels are tagged `L.x` and `R.y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coproduct {
    pub set: FinSet,
    pub inl: FinFn,
    pub inr: FinFn,
}

impl Coproduct {
    /// The copairing `[h1, h2]` out of the disjoint union.
    pub fn copair(&self, h1: &FinFn, h2: &FinFn) -> Result<FinFn> {
        if h1.dom != *self.inl.dom() || h2.dom != *self.inr.dom() || h1.cod != h2.cod {
            return Err(Error::TypeMismatch("copairing boundaries disagree".into()));
        }
        let mut map = h1.map.clone();
        map.extend_from_slice(&h2.map);
        FinFn::new(self.set.clone(), h1.cod.clone(), map)
    }
}

pub fn coproduct(a: &FinSet, b: &FinSet) -> Coproduct {
    // "L." sorts before "R." and a shared prefix keeps order, so the union is
    // already sorted: all of `a`, then all of `b`.
    let mut labels: Vec<String> = a.elements().iter().map(|x| format!("L.{x}")).collect();
    labels.extend(b.elements().iter().map(|y| format!("R.{y}")));
    let set = FinSet::from_sorted(labels);
    let inl = FinFn {
        dom: a.clone(),
        cod: set.clone(),
        map: (0..a.len()).collect(),
    };
    let inr = FinFn {
        dom: b.clone(),
        cod: set.clone(),
        map: (a.len()..a.len() + b.len()).collect(),
    };
    Coproduct { set, inl, inr }
}

/// `f ⊔ g : A ⊔ C → B ⊔ D`.
pub fn coproduct_fn(f: &FinFn, g: &FinFn) -> FinFn {
    let dom = coproduct(&f.dom, &g.dom).set;
    let cod = coproduct(&f.cod, &g.cod).set;
    let offset = f.cod.len();
    let mut map = f.map.clone();
    map.extend(g.map.iter().map(|&y| y + offset));
    FinFn { dom, cod, map }
}

/// The fold map `∇ : A ⊔ A → A`.
pub fn fold(a: &FinSet) -> FinFn {
    let sum = coproduct(a, a);
    sum.copair(&FinFn::identity(a), &FinFn::identity(a))
        .expect("identities copair")
}

/// `∇ₙ : A ⊔ (A ⊔ (… ⊔ A)) → A` for `n ≥ 1` copies, nested to the right.
pub fn fold_n(a: &FinSet, n: usize) -> FinFn {
    assert!(n >= 1, "fold_n needs at least one copy");
    let mut acc = FinFn::identity(a);
    for _ in 1..n {
        acc = coproduct(a, acc.dom())
            .copair(&FinFn::identity(a), &acc)
            .expect("fold copair");
    }
    acc
}

/// The symmetry `A ⊔ B → B ⊔ A`.
pub fn swap(a: &FinSet, b: &FinSet) -> FinFn {
    let target = coproduct(b, a);
    coproduct(a, b)
        .copair(&target.inr, &target.inl)
        .expect("swap copair")
}

/// The associator `(A ⊔ B) ⊔ C → A ⊔ (B ⊔ C)`.
pub fn assoc(a: &FinSet, b: &FinSet, c: &FinSet) -> FinFn {
    let bc = coproduct(b, c);
    let target = coproduct(a, &bc.set);
    let ab = coproduct(a, b);
    let from_ab = ab
        .copair(&target.inl, &target.inr.after(&bc.inl).expect("composable"))
        .expect("copair");
    coproduct(&ab.set, c)
        .copair(&from_ab, &target.inr.after(&bc.inr).expect("composable"))
        .expect("copair")
}

/// `∅ ⊔ A → A`.
pub fn left_unitor(a: &FinSet) -> FinFn {
    coproduct(&FinSet::empty(), a)
        .copair(&FinFn::initial(a), &FinFn::identity(a))
        .expect("copair")
}

/// `A ⊔ ∅ → A`.
pub fn right_unitor(a: &FinSet) -> FinFn {
    coproduct(a, &FinSet::empty())
        .copair(&FinFn::identity(a), &FinFn::initial(a))
        .expect("copair")
}

/// N-ary disjoint union with labels `tag.x`. Tags must be distinct and must
/// not make two labels coincide.
pub fn tagged_union(parts: &[(&str, &FinSet)]) -> Result<(FinSet, Vec<FinFn>)> {
    let set = FinSet::new(
        parts
            .iter()
            .flat_map(|(tag, s)| s.elements().iter().map(move |x| format!("{tag}.{x}"))),
    )?;
    let injections = parts
        .iter()
        .map(|(tag, s)| FinFn::from_label_fn((*s).clone(), set.clone(), |x| format!("{tag}.{x}")))
        .collect::<Result<Vec<_>>>()?;
    Ok((set, injections))
}

/// A pushout of a span `B ←f A →g C`, remembering the span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub f: FinFn,
    pub g: FinFn,
    pub apex: FinSet,
    pub p1: FinFn,
    pub p2: FinFn,
}

/// Quotient of `B ⊔ C` by the equivalence generated by `f(a) ~ g(a)`.
///
/// Each class is labelled by its first member in the order "all of B, then
/// all of C", tagged `L.` or `R.` like a coproduct. Consequently the apex is
/// ordered by first occurrence.
pub fn pushout(f: &FinFn, g: &FinFn) -> Result<Pushout> {
    if f.dom != g.dom {
        return Err(Error::TypeMismatch(format!(
            "pushout span has domains {} and {}",
            f.dom, g.dom
        )));
    }
    let nb = f.cod.len();
    let nc = g.cod.len();
    let mut classes = UnionFind::<usize>::new(nb + nc);
    for a in 0..f.dom.len() {
        classes.union(f.map[a], nb + g.map[a]);
    }
    let mut class_of_root = vec![usize::MAX; nb + nc];
    let mut class = Vec::with_capacity(nb + nc);
    let mut labels = Vec::new();
    for i in 0..nb + nc {
        let root = classes.find(i);
        if class_of_root[root] == usize::MAX {
            class_of_root[root] = labels.len();
            labels.push(if i < nb {
                format!("L.{}", f.cod.label(i))
            } else {
                format!("R.{}", g.cod.label(i - nb))
            });
        }
        class.push(class_of_root[root]);
    }
    let apex = FinSet::from_sorted(labels);
    let p1 = FinFn {
        dom: f.cod.clone(),
        cod: apex.clone(),
        map: class[..nb].to_vec(),
    };
    let p2 = FinFn {
        dom: g.cod.clone(),
        cod: apex.clone(),
        map: class[nb..].to_vec(),
    };
    Ok(Pushout {
        f: f.clone(),
        g: g.clone(),
        apex,
        p1,
        p2,
    })
}

impl Pushout {
    /// The mediating map out of the pushout for the cocone `(h1, h2)`.
    pub fn mediate(&self, h1: &FinFn, h2: &FinFn) -> Result<FinFn> {
        verify_pushout_universal(self, h1, h2)
    }
}

/// Returns the unique `u : P → Q` with `u ∘ p1 = h1` and `u ∘ p2 = h2`.
///
/// Fails with `NotACocone` unless `h1 ∘ f = h2 ∘ g`.
pub fn verify_pushout_universal(po: &Pushout, h1: &FinFn, h2: &FinFn) -> Result<FinFn> {
    if h1.dom != *po.p1.dom() || h2.dom != *po.p2.dom() || h1.cod != h2.cod {
        return Err(Error::TypeMismatch(
            "probe cocone has the wrong shape".into(),
        ));
    }
    if h1.after(&po.f)? != h2.after(&po.g)? {
        return Err(Error::NotACocone("h1 ∘ f differs from h2 ∘ g".into()));
    }
    let mut map = vec![None; po.apex.len()];
    let assignments = po
        .p1
        .map
        .iter()
        .zip(&h1.map)
        .chain(po.p2.map.iter().zip(&h2.map));
    for (&p, &q) in assignments {
        match map[p] {
            None => map[p] = Some(q),
            Some(prev) if prev != q => {
                return Err(Error::NotACocone(format!(
                    "class {} would map to two elements",
                    po.apex.label(p)
                )))
            }
            Some(_) => {}
        }
    }
    let map = map
        .into_iter()
        .map(|q| q.expect("pushout legs are jointly surjective"))
        .collect();
    FinFn::new(po.apex.clone(), h1.cod.clone(), map)
}

pub fn is_bijection(f: &FinFn) -> bool {
    f.is_bijection()
}

/// All functions `A → B` in lexicographic order of their index vectors
/// (first domain element most significant).
pub fn enumerate_functions(dom: &FinSet, cod: &FinSet) -> Functions {
    Functions {
        dom: dom.clone(),
        cod: cod.clone(),
        next: if dom.is_empty() || !cod.is_empty() {
            Some(vec![0; dom.len()])
        } else {
            None
        },
    }
}

pub struct Functions {
    dom: FinSet,
    cod: FinSet,
    next: Option<Vec<usize>>,
}

impl Iterator for Functions {
    type Item = FinFn;

    fn next(&mut self) -> Option<FinFn> {
        let current = self.next.take()?;
        let mut successor = current.clone();
        let radix = self.cod.len();
        let mut pos = successor.len();
        let mut carried_out = true;
        while pos > 0 {
            pos -= 1;
            successor[pos] += 1;
            if successor[pos] < radix {
                carried_out = false;
                break;
            }
            successor[pos] = 0;
        }
        if !carried_out {
            self.next = Some(successor);
        }
        Some(FinFn {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            map: current,
        })
    }
}

/// Canonical sets `{x0, …, x(n-1)}` for `n = 0..=max_size`.
pub fn enumerate_sets(max_size: usize) -> impl Iterator<Item = FinSet> {
    (0..=max_size).map(|n| FinSet::standard("x", n))
}
