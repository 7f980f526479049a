//! JSON encoding of every domain value and named workspaces loaded from
//! files.
//!
//! Each value is a one-key object whose key names its kind:
//!
//! ```json
//! {"set": {"elements": ["a", "b"]}}
//! {"fn": {"dom": "A", "cod": {"set": {"elements": ["x"]}}, "map": {"a": "x", "b": "x"}}}
//! {"cospan": {"src": "A", "tgt": "B", "apex": "X", "left": {...}, "right": {...}}}
//! {"cell": {"from": "c", "to": "d", "map": {...}}}
//! {"algebra": {"carrier": "A", "unit": "eta", "mult": "mu"}}
//! {"envbm_obj": {"L": ["l"], "M": ["m"], "R": []}}
//! {"envbm_mor": {"dom": "X", "cod": "Y", "map": {...}, "orders": {"m": ["l", "m"]}}}
//! ```
//!
//! Wherever a value is expected, a string naming another binding of the
//! same workspace may stand in its place. A workspace file is an object from
//! names to values.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde_json::{json, Map, Value as Json};

use crate::cospan::{Cospan, TwoCell};
use crate::envbm::{EnvBMMorphism, EnvBMObject};
use crate::error::{Error, Result};
use crate::finset::{FinFn, FinSet};
use crate::frobenius::AlgebraDatum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Set(FinSet),
    Fn(FinFn),
    Cospan(Cospan),
    Cell(TwoCell),
    Algebra(AlgebraDatum),
    EnvBMObject(EnvBMObject),
    EnvBMMorphism(EnvBMMorphism),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Set(_) => "set",
            Value::Fn(_) => "fn",
            Value::Cospan(_) => "cospan",
            Value::Cell(_) => "cell",
            Value::Algebra(_) => "algebra",
            Value::EnvBMObject(_) => "envbm_obj",
            Value::EnvBMMorphism(_) => "envbm_mor",
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Set(s) => set_json(s),
            Value::Fn(f) => fn_json(f),
            Value::Cospan(c) => cospan_json(c),
            Value::Cell(c) => cell_json(c),
            Value::Algebra(a) => algebra_json(a),
            Value::EnvBMObject(x) => envbm_obj_json(x),
            Value::EnvBMMorphism(m) => envbm_mor_json(m),
        }
    }
}

fn tagged(kind: &str, body: Json) -> Json {
    let mut m = Map::new();
    m.insert(kind.to_string(), body);
    Json::Object(m)
}

fn mapping_json(f: &FinFn) -> Json {
    let m: Map<String, Json> = f
        .dom()
        .elements()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            (
                x.clone(),
                Json::String(f.cod().label(f.apply(i)).to_string()),
            )
        })
        .collect();
    Json::Object(m)
}

pub fn set_json(s: &FinSet) -> Json {
    tagged("set", json!({ "elements": s.elements() }))
}

pub fn fn_json(f: &FinFn) -> Json {
    tagged(
        "fn",
        json!({ "dom": set_json(f.dom()), "cod": set_json(f.cod()), "map": mapping_json(f) }),
    )
}

pub fn cospan_json(c: &Cospan) -> Json {
    tagged(
        "cospan",
        json!({
            "src": set_json(c.src()),
            "tgt": set_json(c.tgt()),
            "apex": set_json(c.apex()),
            "left": mapping_json(c.left()),
            "right": mapping_json(c.right()),
        }),
    )
}

pub fn cell_json(c: &TwoCell) -> Json {
    tagged(
        "cell",
        json!({ "from": cospan_json(c.from()), "to": cospan_json(c.to()), "map": mapping_json(c.map()) }),
    )
}

/// Carrier, unit and multiplication; the axiom witnesses are recomputed on
/// parsing and written out only for inspection.
pub fn algebra_json(a: &AlgebraDatum) -> Json {
    let w = &a.witnesses;
    let opt = |c: &Option<TwoCell>| c.as_ref().map_or(Json::Null, cell_json);
    tagged(
        "algebra",
        json!({
            "carrier": set_json(&a.carrier),
            "unit": cospan_json(&a.unit),
            "mult": cospan_json(&a.mult),
            "witnesses": {
                "left_unit": opt(&w.left_unit),
                "right_unit": opt(&w.right_unit),
                "assoc": opt(&w.assoc),
                "comm": opt(&w.comm),
            },
        }),
    )
}

pub fn envbm_obj_json(x: &EnvBMObject) -> Json {
    tagged(
        "envbm_obj",
        json!({ "L": x.l().elements(), "M": x.m().elements(), "R": x.r().elements() }),
    )
}

pub fn envbm_mor_json(m: &EnvBMMorphism) -> Json {
    let (dom, cod) = (m.dom().all(), m.cod().all());
    let map: Map<String, Json> = m
        .map()
        .iter()
        .enumerate()
        .map(|(x, &y)| {
            (
                dom.label(x).to_string(),
                Json::String(cod.label(y).to_string()),
            )
        })
        .collect();
    let orders: Map<String, Json> = m
        .orders()
        .iter()
        .enumerate()
        .map(|(y, o)| {
            let xs: Vec<&str> = o.iter().map(|&x| dom.label(x)).collect();
            (cod.label(y).to_string(), json!(xs))
        })
        .collect();
    tagged(
        "envbm_mor",
        json!({
            "dom": envbm_obj_json(m.dom()),
            "cod": envbm_obj_json(m.cod()),
            "map": map,
            "orders": orders,
        }),
    )
}

/// Named bindings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Workspace {
    bindings: BTreeMap<String, Value>,
    sources: Vec<String>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads and merges files in order. Names must be unique across files.
    pub fn load<P: AsRef<Path>>(paths: &[P]) -> Result<Self> {
        let mut ws = Self::new();
        for p in paths {
            let p = p.as_ref();
            let origin = p.display().to_string();
            let text = std::fs::read_to_string(p).map_err(|e| Error::Parse {
                origin: origin.clone(),
                message: e.to_string(),
            })?;
            ws.add_source(&text, &origin)?;
        }
        Ok(ws)
    }

    pub fn parse_str(text: &str, origin: &str) -> Result<Self> {
        let mut ws = Self::new();
        ws.add_source(text, origin)?;
        Ok(ws)
    }

    /// Parses one workspace document and adds its bindings.
    pub fn add_source(&mut self, text: &str, origin: &str) -> Result<()> {
        let doc: Json = serde_json::from_str(text).map_err(|e| Error::Parse {
            origin: format!("{origin}:{}:{}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        let Json::Object(raw) = doc else {
            return Err(Error::Parse {
                origin: origin.to_string(),
                message: "a workspace must be an object from names to values".into(),
            });
        };
        for name in raw.keys() {
            if self.bindings.contains_key(name) {
                return Err(Error::Parse {
                    origin: origin.to_string(),
                    message: format!("name `{name}` is bound twice"),
                });
            }
        }
        let mut resolver = Resolver {
            raw: &raw,
            done: &mut self.bindings,
            active: BTreeSet::new(),
            origin,
        };
        for name in raw.keys() {
            resolver.resolve(name)?;
        }
        self.sources.push(origin.to_string());
        Ok(())
    }

    pub fn insert(&mut self, name: impl Into<String>, value: Value) -> Result<()> {
        let name = name.into();
        if self.bindings.contains_key(&name) {
            return Err(Error::Parse {
                origin: "workspace".into(),
                message: format!("name `{name}` is bound twice"),
            });
        }
        self.bindings.insert(name, value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Value> {
        self.bindings
            .get(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn bindings(&self) -> &BTreeMap<String, Value> {
        &self.bindings
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn to_json(&self) -> Json {
        Json::Object(
            self.bindings
                .iter()
                .map(|(k, v)| (k.clone(), v.to_json()))
                .collect(),
        )
    }
}

macro_rules! getter {
    ($name:ident, $variant:ident, $ty:ty, $kind:literal) => {
        impl Workspace {
            pub fn $name(&self, name: &str) -> Result<&$ty> {
                match self.get(name)? {
                    Value::$variant(v) => Ok(v),
                    other => Err(Error::TypeMismatch(format!(
                        "`{name}` is a {}, expected a {}",
                        other.kind(),
                        $kind
                    ))),
                }
            }
        }
    };
}

getter!(set, Set, FinSet, "set");
getter!(function, Fn, FinFn, "fn");
getter!(cospan, Cospan, Cospan, "cospan");
getter!(cell, Cell, TwoCell, "cell");
getter!(algebra, Algebra, AlgebraDatum, "algebra");
getter!(envbm_obj, EnvBMObject, EnvBMObject, "envbm_obj");
getter!(envbm_mor, EnvBMMorphism, EnvBMMorphism, "envbm_mor");

struct Resolver<'a> {
    raw: &'a Map<String, Json>,
    done: &'a mut BTreeMap<String, Value>,
    active: BTreeSet<String>,
    origin: &'a str,
}

fn parse_err(origin: &str, at: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        origin: format!("{origin} at {at}"),
        message: message.into(),
    }
}

impl Resolver<'_> {
    fn err(&self, at: &str, message: impl Into<String>) -> Error {
        parse_err(self.origin, at, message)
    }

    fn resolve(&mut self, name: &str) -> Result<Value> {
        if let Some(v) = self.done.get(name) {
            return Ok(v.clone());
        }
        let Some(json) = self.raw.get(name) else {
            return Err(Error::UnknownName(name.to_string()));
        };
        if !self.active.insert(name.to_string()) {
            return Err(self.err(name, "cyclic reference"));
        }
        let v = self.value(json, name)?;
        self.active.remove(name);
        self.done.insert(name.to_string(), v.clone());
        Ok(v)
    }

    fn value(&mut self, json: &Json, at: &str) -> Result<Value> {
        if let Json::String(name) = json {
            return self.resolve(name);
        }
        let Some((kind, body)) = json
            .as_object()
            .filter(|m| m.len() == 1)
            .and_then(|m| m.iter().next())
        else {
            return Err(self.err(at, "expected a one-key object naming the kind, or a name"));
        };
        let at = format!("{at}.{kind}");
        let body = body
            .as_object()
            .ok_or_else(|| self.err(&at, "the body must be an object"))?;
        let origin = self.origin;
        let field = |key: &str| {
            body.get(key)
                .ok_or_else(|| parse_err(origin, &at, format!("missing key `{key}`")))
        };
        Ok(match kind.as_str() {
            "set" => Value::Set(
                self.label_list(field("elements")?, &format!("{at}.elements"))
                    .and_then(|xs| FinSet::new(xs).map_err(|e| self.err(&at, e.to_string())))?,
            ),
            "fn" => {
                let dom = self.set(field("dom")?, &format!("{at}.dom"))?;
                let cod = self.set(field("cod")?, &format!("{at}.cod"))?;
                Value::Fn(self.mapping(field("map")?, dom, cod, &format!("{at}.map"))?)
            }
            "cospan" => {
                let src = self.set(field("src")?, &format!("{at}.src"))?;
                let tgt = self.set(field("tgt")?, &format!("{at}.tgt"))?;
                let apex = self.set(field("apex")?, &format!("{at}.apex"))?;
                let left =
                    self.mapping(field("left")?, src, apex.clone(), &format!("{at}.left"))?;
                let right = self.mapping(field("right")?, tgt, apex, &format!("{at}.right"))?;
                Value::Cospan(Cospan::new(left, right).map_err(|e| self.err(&at, e.to_string()))?)
            }
            "cell" => {
                let from = self.cospan(field("from")?, &format!("{at}.from"))?;
                let to = self.cospan(field("to")?, &format!("{at}.to"))?;
                let map = self.mapping(
                    field("map")?,
                    from.apex().clone(),
                    to.apex().clone(),
                    &format!("{at}.map"),
                )?;
                Value::Cell(TwoCell::new(from, to, map).map_err(|e| self.err(&at, e.to_string()))?)
            }
            "algebra" => {
                let carrier = self.set(field("carrier")?, &format!("{at}.carrier"))?;
                let unit = self.cospan(field("unit")?, &format!("{at}.unit"))?;
                let mult = self.cospan(field("mult")?, &format!("{at}.mult"))?;
                Value::Algebra(
                    AlgebraDatum::new(carrier, unit, mult)
                        .map_err(|e| self.err(&at, e.to_string()))?,
                )
            }
            "envbm_obj" => {
                let part = |key: &str| -> Result<FinSet> {
                    let xs = self.label_list(field(key)?, &format!("{at}.{key}"))?;
                    FinSet::new(xs).map_err(|e| self.err(&at, e.to_string()))
                };
                let (l, m, r) = (part("L")?, part("M")?, part("R")?);
                Value::EnvBMObject(
                    EnvBMObject::new(l, m, r).map_err(|e| self.err(&at, e.to_string()))?,
                )
            }
            "envbm_mor" => {
                let dom = self.envbm_obj(field("dom")?, &format!("{at}.dom"))?;
                let cod = self.envbm_obj(field("cod")?, &format!("{at}.cod"))?;
                let map = self.string_map(field("map")?, &format!("{at}.map"))?;
                let orders_at = format!("{at}.orders");
                let orders = field("orders")?
                    .as_object()
                    .ok_or_else(|| self.err(&orders_at, "expected an object of lists"))?
                    .iter()
                    .map(|(y, xs)| {
                        self.label_list(xs, &format!("{orders_at}.{y}"))
                            .map(|xs| (y.clone(), xs))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Value::EnvBMMorphism(
                    EnvBMMorphism::from_labels(dom, cod, &map, &orders)
                        .map_err(|e| self.err(&orders_at, e.to_string()))?,
                )
            }
            other => return Err(self.err(&at, format!("unknown kind `{other}`"))),
        })
    }

    fn label_list(&self, json: &Json, at: &str) -> Result<Vec<String>> {
        json.as_array()
            .and_then(|xs| xs.iter().map(|x| x.as_str().map(str::to_string)).collect())
            .ok_or_else(|| self.err(at, "expected a list of labels"))
    }

    fn string_map(&self, json: &Json, at: &str) -> Result<BTreeMap<String, String>> {
        json.as_object()
            .and_then(|m| {
                m.iter()
                    .map(|(k, v)| v.as_str().map(|v| (k.clone(), v.to_string())))
                    .collect()
            })
            .ok_or_else(|| self.err(at, "expected an object from labels to labels"))
    }

    fn mapping(&self, json: &Json, dom: FinSet, cod: FinSet, at: &str) -> Result<FinFn> {
        let m = self.string_map(json, at)?;
        if let Some(extra) = m.keys().find(|k| !dom.contains(k)) {
            return Err(self.err(at, format!("`{extra}` is not in the domain {dom}")));
        }
        if let Some(missing) = dom.elements().iter().find(|x| !m.contains_key(*x)) {
            return Err(self.err(at, format!("no image for `{missing}`")));
        }
        FinFn::from_label_fn(dom, cod, |x| m.get(x).cloned().unwrap_or_default())
            .map_err(|e| self.err(at, e.to_string()))
    }

    fn set(&mut self, json: &Json, at: &str) -> Result<FinSet> {
        match self.value(json, at)? {
            Value::Set(s) => Ok(s),
            other => Err(self.err(at, format!("expected a set, found a {}", other.kind()))),
        }
    }

    fn cospan(&mut self, json: &Json, at: &str) -> Result<Cospan> {
        match self.value(json, at)? {
            Value::Cospan(c) => Ok(c),
            other => Err(self.err(at, format!("expected a cospan, found a {}", other.kind()))),
        }
    }

    fn envbm_obj(&mut self, json: &Json, at: &str) -> Result<EnvBMObject> {
        match self.value(json, at)? {
            Value::EnvBMObject(x) => Ok(x),
            other => Err(self.err(
                at,
                format!("expected an envbm_obj, found a {}", other.kind()),
            )),
        }
    }
}

/// Parses a single value that does not reference other bindings.
pub fn parse_value(json: &Json) -> Result<Value> {
    let raw = Map::new();
    let mut done = BTreeMap::new();
    let mut r = Resolver {
        raw: &raw,
        done: &mut done,
        active: BTreeSet::new(),
        origin: "value",
    };
    r.value(json, "value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envbm::{envbm_generators, EnvBMObject};
    use crate::frobenius::canonical_algebra;

    fn roundtrip(v: Value) {
        let text = serde_json::to_string(&v.to_json()).unwrap();
        let back = parse_value(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn empty_workspace() {
        let ws = Workspace::load::<&str>(&[]).unwrap();
        assert!(ws.is_empty());
        assert!(Workspace::parse_str("{}", "inline").unwrap().is_empty());
    }

    #[test]
    fn every_kind_roundtrips() {
        let a = FinSet::new(["a0", "a1"]).unwrap();
        let d = canonical_algebra(&a);
        roundtrip(Value::Set(a.clone()));
        roundtrip(Value::Fn(crate::finset::fold(&a)));
        roundtrip(Value::Cospan(d.mult.clone()));
        roundtrip(Value::Cell(d.witnesses.assoc.clone().unwrap()));
        roundtrip(Value::Algebra(d));
        roundtrip(Value::EnvBMObject(EnvBMObject::canonical(1, 1, 1)));
        for g in envbm_generators() {
            roundtrip(Value::EnvBMMorphism(g));
        }
    }

    #[test]
    fn names_resolve_across_bindings() {
        let text = r#"{
            "c": {"cospan": {"src": "A", "tgt": "B", "apex": "X",
                              "left": {"a": "x"}, "right": {"b": "x"}}},
            "A": {"set": {"elements": ["a"]}},
            "B": {"set": {"elements": ["b"]}},
            "X": {"set": {"elements": ["x"]}}
        }"#;
        let ws = Workspace::parse_str(text, "inline").unwrap();
        assert_eq!(ws.cospan("c").unwrap().apex().len(), 1);
        assert!(matches!(ws.set("c"), Err(Error::TypeMismatch(_))));
        assert!(matches!(ws.get("nope"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn malformed_fiber_order_names_its_key() {
        let text = r#"{
            "X": {"envbm_obj": {"L": ["l"], "M": ["m"], "R": []}},
            "Y": {"envbm_obj": {"L": [], "M": ["n"], "R": []}},
            "f": {"envbm_mor": {"dom": "X", "cod": "Y", "map": {"l": "n", "m": "n"},
                                 "orders": {"n": "l"}}}
        }"#;
        let err = Workspace::parse_str(text, "inline").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("orders.n"), "{msg}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = Workspace::parse_str("{\n  \"A\": }", "bad.json").unwrap_err();
        assert!(err.to_string().starts_with("bad.json:2:"), "{err}");
    }

    #[test]
    fn cycles_are_rejected() {
        let err = Workspace::parse_str(r#"{"A": "B", "B": "A"}"#, "inline").unwrap_err();
        assert!(err.to_string().contains("cyclic"));
    }
}
