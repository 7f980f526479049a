//! The symmetric monoidal envelope of the bimodule operad, presented
//! combinatorially: tripartitioned finite sets and maps with linearly ordered
//! fibers.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use itertools::Itertools;

use crate::cospan::Cospan;
use crate::error::{Error, Result};
use crate::finset::{enumerate_functions, FinFn, FinSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    L,
    M,
    R,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::L => "L",
            Part::M => "M",
            Part::R => "R",
        })
    }
}

/// A finite set split into left-algebra, module and right-algebra points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnvBMObject {
    l: FinSet,
    m: FinSet,
    r: FinSet,
    all: FinSet,
    parts: Vec<Part>,
}

impl EnvBMObject {
    pub fn new(l: FinSet, m: FinSet, r: FinSet) -> Result<Self> {
        let all = FinSet::new(
            l.elements()
                .iter()
                .chain(m.elements())
                .chain(r.elements())
                .cloned(),
        )?;
        let parts = all
            .elements()
            .iter()
            .map(|x| {
                if l.contains(x) {
                    Part::L
                } else if m.contains(x) {
                    Part::M
                } else {
                    Part::R
                }
            })
            .collect();
        Ok(Self {
            l,
            m,
            r,
            all,
            parts,
        })
    }

    pub fn empty() -> Self {
        Self::canonical(0, 0, 0)
    }

    /// `({l0..}, {m0..}, {r0..})`.
    pub fn canonical(nl: usize, nm: usize, nr: usize) -> Self {
        Self::new(
            FinSet::standard("l", nl),
            FinSet::standard("m", nm),
            FinSet::standard("r", nr),
        )
        .expect("distinct prefixes")
    }

    pub fn l(&self) -> &FinSet {
        &self.l
    }

    pub fn m(&self) -> &FinSet {
        &self.m
    }

    pub fn r(&self) -> &FinSet {
        &self.r
    }

    /// The underlying set, all three parts together.
    pub fn all(&self) -> &FinSet {
        &self.all
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    /// Part sizes `(|L|, |M|, |R|)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.l.len(), self.m.len(), self.r.len())
    }

    pub fn part(&self, index: usize) -> Part {
        self.parts[index]
    }

    fn part_set(&self, part: Part) -> &FinSet {
        match part {
            Part::L => &self.l,
            Part::M => &self.m,
            Part::R => &self.r,
        }
    }

    /// Indices of `all` in part order: L points, then M, then R, each in
    /// label order.
    fn part_order(&self) -> Vec<usize> {
        [Part::L, Part::M, Part::R]
            .into_iter()
            .flat_map(|p| {
                self.part_set(p)
                    .elements()
                    .iter()
                    .map(|x| self.all.index_of(x).expect("part of all"))
            })
            .collect()
    }
}

impl fmt::Display for EnvBMObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.l, self.m, self.r)
    }
}

/// Tensor of objects. Disjoint label sets are united as they are; otherwise
/// every label is tagged `L.` or `R.` by the side it came from. Also returns
/// the index embeddings of both factors into the result.
pub fn tensor_objects(a: &EnvBMObject, b: &EnvBMObject) -> (EnvBMObject, Vec<usize>, Vec<usize>) {
    let clash = a.all.elements().iter().any(|x| b.all.contains(x));
    let tag = |s: &FinSet, t: &str| if clash { s.prefixed(t) } else { s.clone() };
    let union = |x: &FinSet, y: &FinSet| {
        FinSet::new(x.elements().iter().chain(y.elements()).cloned()).expect("disjoint")
    };
    let obj = EnvBMObject::new(
        union(&tag(&a.l, "L."), &tag(&b.l, "R.")),
        union(&tag(&a.m, "L."), &tag(&b.m, "R.")),
        union(&tag(&a.r, "L."), &tag(&b.r, "R.")),
    )
    .expect("tagged parts are disjoint");
    let embed = |src: &EnvBMObject, t: &str| {
        src.all
            .elements()
            .iter()
            .map(|x| {
                let y = if clash { format!("{t}{x}") } else { x.clone() };
                obj.all.index_of(&y).expect("embedded")
            })
            .collect::<Vec<_>>()
    };
    let ia = embed(a, "L.");
    let ib = embed(b, "R.");
    (obj, ia, ib)
}

/// A map of underlying sets with a linear order on every fiber.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnvBMMorphism {
    dom: EnvBMObject,
    cod: EnvBMObject,
    map: Vec<usize>,
    orders: Vec<Vec<usize>>,
}

impl EnvBMMorphism {
    /// Validating constructor; indices refer to `dom.all()` and `cod.all()`.
    pub fn new(
        dom: EnvBMObject,
        cod: EnvBMObject,
        map: Vec<usize>,
        orders: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let m = Self::unchecked(dom, cod, map, orders);
        let violations = m.violations();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidMorphism(violations.join("; ")))
        }
    }

    /// Builds without checking; use [`EnvBMMorphism::violations`] afterwards.
    pub fn unchecked(
        dom: EnvBMObject,
        cod: EnvBMObject,
        map: Vec<usize>,
        orders: Vec<Vec<usize>>,
    ) -> Self {
        Self {
            dom,
            cod,
            map,
            orders,
        }
    }

    /// Builds from the map and fiber orders given by labels.
    pub fn from_labels(
        dom: EnvBMObject,
        cod: EnvBMObject,
        map: &BTreeMap<String, String>,
        orders: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self> {
        let lookup = |set: &FinSet, x: &str, what: &str| {
            set.index_of(x).ok_or_else(|| Error::UnknownLabel {
                label: x.to_string(),
                context: what.to_string(),
            })
        };
        let mut image = vec![usize::MAX; dom.len()];
        for (x, y) in map {
            image[lookup(&dom.all, x, "morphism domain")?] =
                lookup(&cod.all, y, "morphism codomain")?;
        }
        if let Some(i) = image.iter().position(|&y| y == usize::MAX) {
            return Err(Error::InvalidMorphism(format!(
                "no image for {}",
                dom.all.label(i)
            )));
        }
        let mut fiber_orders = vec![Vec::new(); cod.len()];
        for (y, xs) in orders {
            let yi = lookup(&cod.all, y, "fiber order key")?;
            fiber_orders[yi] = xs
                .iter()
                .map(|x| lookup(&dom.all, x, "fiber order entry"))
                .collect::<Result<_>>()?;
        }
        Self::new(dom, cod, image, fiber_orders)
    }

    pub fn identity(x: &EnvBMObject) -> Self {
        Self {
            dom: x.clone(),
            cod: x.clone(),
            map: (0..x.len()).collect(),
            orders: (0..x.len()).map(|i| vec![i]).collect(),
        }
    }

    pub fn dom(&self) -> &EnvBMObject {
        &self.dom
    }

    pub fn cod(&self) -> &EnvBMObject {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// The ordered fiber over each codomain point.
    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    /// The map as a function of underlying sets.
    pub fn underlying(&self) -> Result<FinFn> {
        FinFn::new(self.dom.all.clone(), self.cod.all.clone(), self.map.clone())
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Every violated constraint, described by labels.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (dom, cod) = (&self.dom, &self.cod);
        if self.map.len() != dom.len() || self.orders.len() != cod.len() {
            out.push("map or order list has the wrong length".into());
            return out;
        }
        if let Some(&y) = self.map.iter().find(|&&y| y >= cod.len()) {
            out.push(format!("image index {y} out of range"));
            return out;
        }
        let dl = |x: usize| dom.all.label(x).to_string();
        for y in 0..cod.len() {
            let yl = cod.all.label(y);
            let order = &self.orders[y];
            let mut fiber: Vec<usize> = (0..dom.len()).filter(|&x| self.map[x] == y).collect();
            let mut sorted = order.clone();
            sorted.sort_unstable();
            fiber.sort_unstable();
            if sorted != fiber {
                out.push(format!("order over {yl} is not a permutation of its fiber"));
                continue;
            }
            match cod.part(y) {
                Part::L | Part::R => {
                    let want = cod.part(y);
                    for &x in order {
                        if dom.part(x) != want {
                            out.push(format!(
                                "{} in the fiber over {want}-point {yl} lies in part {}",
                                dl(x),
                                dom.part(x)
                            ));
                        }
                    }
                }
                Part::M => {
                    let parts: Vec<Part> = order.iter().map(|&x| dom.part(x)).collect();
                    let count = parts.iter().filter(|&&p| p == Part::M).count();
                    if count != 1 {
                        out.push(format!(
                            "fiber over M-point {yl} has {count} M-points instead of 1"
                        ));
                    }
                    if !parts.windows(2).all(|w| w[0] <= w[1]) {
                        out.push(format!(
                            "order over M-point {yl} is not of the form L-points < M-point < R-points"
                        ));
                    }
                }
            }
        }
        out
    }

    /// Reindexes along label bijections of both ends.
    fn transport(
        &self,
        dom: &EnvBMObject,
        cod: &EnvBMObject,
        dmap: &[usize],
        cmap: &[usize],
    ) -> Self {
        let mut map = vec![0; dom.len()];
        for (x, &y) in self.map.iter().enumerate() {
            map[dmap[x]] = cmap[y];
        }
        let mut orders = vec![Vec::new(); cod.len()];
        for (y, order) in self.orders.iter().enumerate() {
            orders[cmap[y]] = order.iter().map(|&x| dmap[x]).collect();
        }
        Self {
            dom: dom.clone(),
            cod: cod.clone(),
            map,
            orders,
        }
    }
}

/// `g ∘ f`; the fiber over `z` lists, for each `y` in `g`'s order over `z`,
/// the fiber of `f` over `y` in `f`'s order.
pub fn envbm_compose(g: &EnvBMMorphism, f: &EnvBMMorphism) -> Result<EnvBMMorphism> {
    if f.cod != g.dom {
        return Err(Error::TypeMismatch(format!(
            "cannot compose: codomain {} is not domain {}",
            f.cod, g.dom
        )));
    }
    let map = f.map.iter().map(|&y| g.map[y]).collect();
    let orders = g
        .orders
        .iter()
        .map(|outer| {
            outer
                .iter()
                .flat_map(|&y| f.orders[y].iter().copied())
                .collect()
        })
        .collect();
    Ok(EnvBMMorphism {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        map,
        orders,
    })
}

pub fn envbm_tensor(f: &EnvBMMorphism, g: &EnvBMMorphism) -> EnvBMMorphism {
    let (dom, df, dg) = tensor_objects(&f.dom, &g.dom);
    let (cod, cf, cg) = tensor_objects(&f.cod, &g.cod);
    let mut map = vec![0; dom.len()];
    let mut orders = vec![Vec::new(); cod.len()];
    for (m, di, ci) in [(f, &df, &cf), (g, &dg, &cg)] {
        for (x, &y) in m.map.iter().enumerate() {
            map[di[x]] = ci[y];
        }
        for (y, order) in m.orders.iter().enumerate() {
            orders[ci[y]] = order.iter().map(|&x| di[x]).collect();
        }
    }
    EnvBMMorphism {
        dom,
        cod,
        map,
        orders,
    }
}

/// The symmetry `a ⊗ b → b ⊗ a`.
pub fn envbm_swap(a: &EnvBMObject, b: &EnvBMObject) -> EnvBMMorphism {
    let (ab, ia, ib) = tensor_objects(a, b);
    let (ba, ja, jb) = tensor_objects(b, a);
    let mut map = vec![0; ab.len()];
    for (x, &i) in ia.iter().enumerate() {
        map[i] = jb[x];
    }
    for (x, &i) in ib.iter().enumerate() {
        map[i] = ja[x];
    }
    let mut orders = vec![Vec::new(); ba.len()];
    for (x, &y) in map.iter().enumerate() {
        orders[y].push(x);
    }
    EnvBMMorphism {
        dom: ab,
        cod: ba,
        map,
        orders,
    }
}

/// All valid morphisms `x → y`: functions in lexicographic order of their
/// image lists, and for each, fiber orders in lexicographic order.
pub fn envbm_hom(x: &EnvBMObject, y: &EnvBMObject) -> Vec<EnvBMMorphism> {
    let targets: Vec<Vec<usize>> = (0..x.len())
        .map(|i| {
            (0..y.len())
                .filter(|&j| match (x.part(i), y.part(j)) {
                    (_, Part::M) => true,
                    (p, q) => p == q,
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for map in targets
        .iter()
        .map(|t| t.iter().copied())
        .multi_cartesian_product()
    {
        let fibers: Vec<Vec<usize>> = (0..y.len())
            .map(|j| (0..x.len()).filter(|&i| map[i] == j).collect())
            .collect();
        let m_ok = (0..y.len()).all(|j| {
            y.part(j) != Part::M || fibers[j].iter().filter(|&&i| x.part(i) == Part::M).count() == 1
        });
        if !m_ok {
            continue;
        }
        let choices: Vec<Vec<Vec<usize>>> = (0..y.len())
            .map(|j| fiber_orders(x, &fibers[j], y.part(j)))
            .collect();
        for orders in choices
            .iter()
            .map(|c| c.iter().cloned())
            .multi_cartesian_product()
        {
            out.push(EnvBMMorphism {
                dom: x.clone(),
                cod: y.clone(),
                map: map.clone(),
                orders,
            });
        }
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let n = items.len();
    items.iter().copied().permutations(n).collect()
}

fn fiber_orders(x: &EnvBMObject, fiber: &[usize], part: Part) -> Vec<Vec<usize>> {
    match part {
        Part::L | Part::R => permutations(fiber),
        Part::M => {
            let seg = |p: Part| {
                fiber
                    .iter()
                    .copied()
                    .filter(|&i| x.part(i) == p)
                    .collect_vec()
            };
            let mid = seg(Part::M);
            let rights = permutations(&seg(Part::R));
            permutations(&seg(Part::L))
                .into_iter()
                .cartesian_product(rights)
                .map(|(l, r)| l.into_iter().chain(mid.iter().copied()).chain(r).collect())
                .collect()
        }
    }
}

/// Every function with every ordering of every fiber, filtered by the
/// validity check. An independent oracle for [`envbm_hom`].
pub fn envbm_hom_exhaustive(x: &EnvBMObject, y: &EnvBMObject) -> HashSet<EnvBMMorphism> {
    let mut out = HashSet::new();
    for f in enumerate_functions(x.all(), y.all()) {
        let fibers: Vec<Vec<usize>> = (0..y.len()).map(|j| f.fiber(j)).collect();
        let perms: Vec<Vec<Vec<usize>>> = fibers.iter().map(|fb| permutations(fb)).collect();
        let mut idx = vec![0; y.len()];
        loop {
            let orders = (0..y.len()).map(|j| perms[j][idx[j]].clone()).collect();
            let m = EnvBMMorphism::unchecked(x.clone(), y.clone(), f.as_slice().to_vec(), orders);
            if m.is_valid() {
                out.insert(m);
            }
            let mut k = 0;
            while k < y.len() {
                idx[k] += 1;
                if idx[k] < perms[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == y.len() {
                break;
            }
        }
    }
    out
}

/// Names of the generating morphisms, in the order of [`envbm_generators`].
pub const GENERATOR_NAMES: [&str; 5] = ["act", "unit_l", "mult_l", "unit_r", "mult_r"];

/// `{l,m,r} → {m}`, `∅ → {l}`, `{l0,l1} → {l}`, `∅ → {r}`, `{r0,r1} → {r}`,
/// on canonical objects with fibers in label order.
pub fn envbm_generators() -> Vec<EnvBMMorphism> {
    let ordered = |dom: EnvBMObject, cod: EnvBMObject| {
        let map = vec![0; dom.len()];
        let orders = if cod.is_empty() {
            vec![]
        } else {
            vec![dom.part_order()]
        };
        EnvBMMorphism::new(dom, cod, map, orders).expect("generators are valid")
    };
    let c = EnvBMObject::canonical;
    vec![
        ordered(c(1, 1, 1), c(0, 1, 0)),
        ordered(c(0, 0, 0), c(1, 0, 0)),
        ordered(c(2, 0, 0), c(1, 0, 0)),
        ordered(c(0, 0, 0), c(0, 0, 1)),
        ordered(c(0, 0, 2), c(0, 0, 1)),
    ]
}

/// Canonical objects with total size at most `bound`.
pub fn canonical_objects(bound: usize) -> Vec<EnvBMObject> {
    let mut out = Vec::new();
    for n in 0..=bound {
        for nl in 0..=n {
            for nm in 0..=n - nl {
                out.push(EnvBMObject::canonical(nl, nm, n - nl - nm));
            }
        }
    }
    out
}

/// Relabels an object to the canonical one of the same shape, returning the
/// index map into it. Points keep their part order.
fn canonicalize(x: &EnvBMObject) -> (EnvBMObject, Vec<usize>) {
    let (nl, nm, nr) = x.shape();
    let c = EnvBMObject::canonical(nl, nm, nr);
    let mut map = vec![0; x.len()];
    for (i, j) in x.part_order().into_iter().zip(c.part_order()) {
        map[i] = j;
    }
    (c, map)
}

fn canonical_tensor(f: &EnvBMMorphism, g: &EnvBMMorphism) -> EnvBMMorphism {
    let t = envbm_tensor(f, g);
    let (dom, dmap) = canonicalize(&t.dom);
    let (cod, cmap) = canonicalize(&t.cod);
    t.transport(&dom, &cod, &dmap, &cmap)
}

/// Part-preserving bijections of a canonical object.
fn symmetries(x: &EnvBMObject) -> Vec<EnvBMMorphism> {
    envbm_hom(x, x)
        .into_iter()
        .filter(|m| {
            let mut seen = vec![false; x.len()];
            m.map
                .iter()
                .all(|&y| !std::mem::replace(&mut seen[y], true))
        })
        .collect()
}

/// Closes the generators, identities and symmetries under composition and
/// tensor, keeping only morphisms between canonical objects of total size at
/// most `bound`.
pub fn envbm_closure(bound: usize) -> HashSet<EnvBMMorphism> {
    let fits = |m: &EnvBMMorphism| m.dom.len() <= bound && m.cod.len() <= bound;
    let mut all: HashSet<EnvBMMorphism> = HashSet::new();
    let mut frontier: Vec<EnvBMMorphism> = Vec::new();
    let objects = canonical_objects(bound);
    let seeds = envbm_generators()
        .into_iter()
        .chain(objects.iter().flat_map(symmetries))
        .filter(fits);
    for m in seeds {
        if all.insert(m.clone()) {
            frontier.push(m);
        }
    }
    while !frontier.is_empty() {
        let known: Vec<EnvBMMorphism> = all.iter().cloned().collect();
        let mut next = Vec::new();
        for new in &frontier {
            for old in &known {
                let mut candidates = Vec::new();
                if new.cod == old.dom {
                    candidates.extend(envbm_compose(old, new).ok());
                }
                if old.cod == new.dom {
                    candidates.extend(envbm_compose(new, old).ok());
                }
                if new.dom.len() + old.dom.len() <= bound && new.cod.len() + old.cod.len() <= bound
                {
                    candidates.push(canonical_tensor(new, old));
                    candidates.push(canonical_tensor(old, new));
                }
                for c in candidates {
                    if fits(&c) && !all.contains(&c) {
                        all.insert(c.clone());
                        next.push(c);
                    }
                }
            }
        }
        frontier = next;
    }
    all
}

/// Compares the closure against the enumerated hom-sets between canonical
/// objects of total size at most `bound`. The closure itself may pass through
/// objects of size 3, the size of the action generator.
pub fn envbm_generation_check(bound: usize) -> Result<usize> {
    let closure = envbm_closure(bound.max(3));
    let objects = canonical_objects(bound);
    let mut total = 0;
    for x in &objects {
        for y in &objects {
            for m in envbm_hom(x, y) {
                if !closure.contains(&m) {
                    return Err(Error::GenerationGap(describe(&m)));
                }
                total += 1;
            }
        }
    }
    if let Some(extra) = closure.iter().find(|m| !m.is_valid()) {
        return Err(Error::GenerationGap(format!(
            "closure produced an invalid morphism {}",
            describe(extra)
        )));
    }
    Ok(total)
}

/// A readable rendering such as `(...) -> (...): m0 <- [l0, m0, r0]`.
pub fn describe(m: &EnvBMMorphism) -> String {
    let fibers = m
        .orders
        .iter()
        .enumerate()
        .map(|(y, o)| {
            format!(
                "{} <- [{}]",
                m.cod.all.label(y),
                o.iter().map(|&x| m.dom.all.label(x)).join(", ")
            )
        })
        .join("; ");
    format!("{} -> {}: {fibers}", m.dom, m.cod)
}

/// Cospans interpreting the generators: an algebra on `a` for the left part,
/// one on `b` for the right part, and an action on `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleData {
    pub a: FinSet,
    pub m: FinSet,
    pub b: FinSet,
    /// `(A ⊔ M) ⊔ B ↛ M`.
    pub act: Option<Cospan>,
    /// `∅ ↛ A`.
    pub unit_l: Option<Cospan>,
    /// `A ⊔ A ↛ A`.
    pub mult_l: Option<Cospan>,
    /// `∅ ↛ B`.
    pub unit_r: Option<Cospan>,
    /// `B ⊔ B ↛ B`.
    pub mult_r: Option<Cospan>,
}

impl BimoduleData {
    /// Canonical algebras on `a` and `b` acting on `m` through `f` and `g`,
    /// everything right-way.
    pub fn right_way(f: &FinFn, g: &FinFn) -> Result<Self> {
        use crate::finset::{coproduct, fold};
        if f.cod() != g.cod() {
            return Err(Error::TypeMismatch(
                "actions must land in one module".into(),
            ));
        }
        let (a, b, m) = (f.dom().clone(), g.dom().clone(), f.cod().clone());
        let am = coproduct(&a, &m);
        let left = am.copair(f, &FinFn::identity(&m))?;
        let act = coproduct(&am.set, &b).copair(&left, g)?;
        Ok(Self {
            act: Some(Cospan::right_way(&act)),
            unit_l: Some(Cospan::right_way(&FinFn::initial(&a))),
            mult_l: Some(Cospan::right_way(&fold(&a))),
            unit_r: Some(Cospan::right_way(&FinFn::initial(&b))),
            mult_r: Some(Cospan::right_way(&fold(&b))),
            a,
            m,
            b,
        })
    }

    fn carrier(&self, part: Part) -> &FinSet {
        match part {
            Part::L => &self.a,
            Part::M => &self.m,
            Part::R => &self.b,
        }
    }

    fn image(&self, name: &'static str) -> Result<&Cospan> {
        let slot = match name {
            "act" => &self.act,
            "unit_l" => &self.unit_l,
            "mult_l" => &self.mult_l,
            "unit_r" => &self.unit_r,
            _ => &self.mult_r,
        };
        slot.as_ref()
            .ok_or_else(|| Error::MissingGeneratorImage(name.to_string()))
    }

    /// The `k`-fold product on one side, with source `((X ⊔ X) ⊔ …) ⊔ X`.
    fn product(&self, part: Part, k: usize) -> Result<Cospan> {
        let (unit, mult) = match part {
            Part::L => ("unit_l", "mult_l"),
            _ => ("unit_r", "mult_r"),
        };
        let carrier = self.carrier(part);
        if k == 0 {
            return self.image(unit).cloned();
        }
        let mut acc = Cospan::identity(carrier);
        for _ in 1..k {
            let widened = crate::cospan::tensor(&acc, &Cospan::identity(carrier));
            acc = crate::cospan::hcompose(self.image(mult)?, &widened)?;
        }
        Ok(acc)
    }
}

/// The label prefix of position `i` in a left-nested `k`-fold coproduct.
fn nested_prefix(k: usize, i: usize) -> String {
    let mut s = "L.".repeat(k - 1 - i);
    if i > 0 {
        s.push_str("R.");
    }
    s
}

/// The underlying set of `A^X_L ⊔ M^X_M ⊔ B^X_R`, labelled `x.s`.
pub fn evaluate_object(data: &BimoduleData, x: &EnvBMObject) -> FinSet {
    FinSet::new((0..x.len()).flat_map(|i| {
        let xl = x.all.label(i).to_string();
        data.carrier(x.part(i))
            .elements()
            .iter()
            .map(move |s| format!("{xl}.{s}"))
            .collect::<Vec<_>>()
    }))
    .expect("distinct point labels")
}

/// Evaluates a morphism fiber by fiber: an `L`- or `R`-fiber becomes the
/// iterated product of its points in order, an `M`-fiber multiplies its left
/// and right segments and then acts. Singleton fibers evaluate to
/// identities.
pub fn evaluate_bimodule(data: &BimoduleData, mor: &EnvBMMorphism) -> Result<Cospan> {
    let dom = evaluate_object(data, &mor.dom);
    let cod = evaluate_object(data, &mor.cod);
    // For each codomain point: its operation and the source label of each
    // fiber position.
    let mut ops = Vec::with_capacity(mor.cod.len());
    for (y, order) in mor.orders.iter().enumerate() {
        let part = mor.cod.part(y);
        let (op, prefixes) = match part {
            Part::L | Part::R => {
                let k = order.len();
                let prefixes = (0..k).map(|i| nested_prefix(k, i)).collect_vec();
                (data.product(part, k)?, prefixes)
            }
            Part::M if order.len() == 1 => (Cospan::identity(&data.m), vec![String::new()]),
            Part::M => {
                let p = order
                    .iter()
                    .filter(|&&x| mor.dom.part(x) == Part::L)
                    .count();
                let q = order.len() - p - 1;
                let inner = crate::cospan::tensor(
                    &crate::cospan::tensor(&data.product(Part::L, p)?, &Cospan::identity(&data.m)),
                    &data.product(Part::R, q)?,
                );
                let op = crate::cospan::hcompose(data.image("act")?, &inner)?;
                let prefixes = (0..p)
                    .map(|i| format!("L.L.{}", nested_prefix(p, i)))
                    .chain(std::iter::once("L.R.".to_string()))
                    .chain((0..q).map(|j| format!("R.{}", nested_prefix(q, j))))
                    .collect_vec();
                (op, prefixes)
            }
        };
        ops.push((op, prefixes));
    }
    let apex = FinSet::new(ops.iter().enumerate().flat_map(|(y, (op, _))| {
        let yl = mor.cod.all.label(y).to_string();
        op.apex()
            .elements()
            .iter()
            .map(move |p| format!("{yl}.{p}"))
            .collect::<Vec<_>>()
    }))?;
    let mut position = vec![(0, 0); mor.dom.len()];
    for (y, order) in mor.orders.iter().enumerate() {
        for (i, &x) in order.iter().enumerate() {
            position[x] = (y, i);
        }
    }
    let split = |label: &str| -> (String, String) {
        let (point, rest) = label.split_once('.').expect("evaluated labels are tagged");
        (point.to_string(), rest.to_string())
    };
    let left = FinFn::from_label_fn(dom, apex.clone(), |label| {
        let (point, s) = split(label);
        let x = mor.dom.all.index_of(&point).expect("domain point");
        let (y, i) = position[x];
        let (op, prefixes) = &ops[y];
        let image = op
            .left()
            .apply_label(&format!("{}{s}", prefixes[i]))
            .expect("fiber position label");
        format!("{}.{image}", mor.cod.all.label(y))
    })?;
    let right = FinFn::from_label_fn(cod, apex, |label| {
        let (point, s) = split(label);
        let y = mor.cod.all.index_of(&point).expect("codomain point");
        let image = ops[y].0.right().apply_label(&s).expect("carrier label");
        format!("{point}.{image}")
    })?;
    Cospan::new(left, right)
}
