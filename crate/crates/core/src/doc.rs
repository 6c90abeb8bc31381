//! Text documents for complexes and maps.
//!
//! A document is JSON with a fixed field order and canonical ordering of
//! entries, so serializing a parsed document reproduces it byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bicomplex::{Bicomplex, BicomplexMap, DH, DV};
use crate::bidegree::Bidegree;
use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::multi::{MultiMap, Multicomplex};
use crate::ring::RingSpec;
use crate::twisted::{TwistedComplex, TwistedMap};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Chain,
    Bicomplex,
    Twisted,
    Map,
}

/// Sparse matrix at one (bi)degree: `[row, col, "value"]` triplets.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct Block {
    pub at: Vec<i32>,
    pub entries: Vec<(usize, usize, String)>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum ObjectRef {
    /// Path relative to the referring file.
    Path(String),
    Inline(Box<Document>),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: u32,
    pub ring: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<i32>>,
    /// `[p, q, rank]`, or `[n, rank]` for chain complexes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differentials: Option<BTreeMap<String, Vec<Block>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<ObjectRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ObjectRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Block>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Object {
    Chain(ChainComplex),
    Bicomplex(Bicomplex),
    Twisted(TwistedComplex),
    ChainMap(ChainMap),
    BicomplexMap(BicomplexMap),
    TwistedMap(TwistedMap),
}

impl Object {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Object::Chain(_) => "chain complex",
            Object::Bicomplex(_) => "bicomplex",
            Object::Twisted(_) => "twisted complex",
            Object::ChainMap(_) => "chain map",
            Object::BicomplexMap(_) => "bicomplex map",
            Object::TwistedMap(_) => "twisted map",
        }
    }

    pub fn ring(&self) -> RingSpec {
        match self {
            Object::Chain(c) => c.ring(),
            Object::Bicomplex(x) => x.ring(),
            Object::Twisted(x) => x.ring(),
            Object::ChainMap(f) => f.source().ring(),
            Object::BicomplexMap(f) => f.source().ring(),
            Object::TwistedMap(f) => f.source().ring(),
        }
    }

    /// The underlying multicomplex of a bicomplex or twisted complex.
    pub fn as_multi(&self) -> Option<&Multicomplex> {
        match self {
            Object::Bicomplex(x) => Some(x.as_multi()),
            Object::Twisted(x) => Some(x.as_multi()),
            _ => None,
        }
    }

    pub fn as_multimap(&self) -> Option<&MultiMap> {
        match self {
            Object::BicomplexMap(f) => Some(f.as_multi()),
            Object::TwistedMap(f) => Some(f.as_multi()),
            _ => None,
        }
    }
}

impl From<ChainComplex> for Object {
    fn from(c: ChainComplex) -> Self {
        Object::Chain(c)
    }
}

impl From<Bicomplex> for Object {
    fn from(x: Bicomplex) -> Self {
        Object::Bicomplex(x)
    }
}

impl From<TwistedComplex> for Object {
    fn from(x: TwistedComplex) -> Self {
        Object::Twisted(x)
    }
}

impl From<BicomplexMap> for Object {
    fn from(f: BicomplexMap) -> Self {
        Object::BicomplexMap(f)
    }
}

impl From<TwistedMap> for Object {
    fn from(f: TwistedMap) -> Self {
        Object::TwistedMap(f)
    }
}

impl From<ChainMap> for Object {
    fn from(f: ChainMap) -> Self {
        Object::ChainMap(f)
    }
}

fn block(at: Vec<i32>, m: &ExactMatrix) -> Block {
    let mut entries: Vec<_> = m
        .nonzero_entries()
        .map(|(r, c, v)| (r, c, v.to_string()))
        .collect();
    entries.sort_by_key(|e| (e.0, e.1));
    Block { at, entries }
}

fn base(ring: RingSpec, kind: Kind) -> Document {
    Document {
        schema_version: SCHEMA_VERSION,
        ring: ring.to_string(),
        kind,
        support: None,
        ranks: None,
        differentials: None,
        source: None,
        target: None,
        components: None,
    }
}

fn chain_document(c: &ChainComplex) -> Document {
    let mut d = base(c.ring(), Kind::Chain);
    d.support = c.support().map(|(lo, hi)| vec![lo, hi]);
    d.ranks = Some(
        c.ranks()
            .iter()
            .map(|(&n, &r)| vec![n as i64, r as i64])
            .collect(),
    );
    let blocks: Vec<Block> = c
        .differentials()
        .iter()
        .map(|(&n, m)| block(vec![n], m))
        .collect();
    d.differentials = Some(if blocks.is_empty() {
        BTreeMap::new()
    } else {
        BTreeMap::from([("d".to_string(), blocks)])
    });
    d
}

fn multi_document(x: &Multicomplex, kind: Kind) -> Document {
    let mut d = base(x.ring(), kind);
    d.support = x.support().map(|s| vec![s.pmin, s.pmax, s.qmin, s.qmax]);
    d.ranks = Some(
        x.ranks()
            .iter()
            .map(|(b, &r)| vec![b.p as i64, b.q as i64, r as i64])
            .collect(),
    );
    let mut diffs: BTreeMap<String, Vec<Block>> = BTreeMap::new();
    for (&(i, b), m) in x.maps() {
        let key = match (kind, i) {
            (Kind::Bicomplex, DH) => "dh".to_string(),
            (Kind::Bicomplex, DV) => "dv".to_string(),
            _ => format!("d{i}"),
        };
        diffs.entry(key).or_default().push(block(vec![b.p, b.q], m));
    }
    d.differentials = Some(diffs);
    d
}

pub fn to_document(obj: &Object) -> Document {
    let map = |s: Document, t: Document, components: Vec<Block>| {
        let mut d = base(obj.ring(), Kind::Map);
        d.source = Some(ObjectRef::Inline(Box::new(s)));
        d.target = Some(ObjectRef::Inline(Box::new(t)));
        d.components = Some(components);
        d
    };
    match obj {
        Object::Chain(c) => chain_document(c),
        Object::Bicomplex(x) => multi_document(x.as_multi(), Kind::Bicomplex),
        Object::Twisted(x) => multi_document(x.as_multi(), Kind::Twisted),
        Object::ChainMap(f) => map(
            chain_document(f.source()),
            chain_document(f.target()),
            f.components().iter().map(|(&n, m)| block(vec![n], m)).collect(),
        ),
        Object::BicomplexMap(f) => map(
            multi_document(f.source().as_multi(), Kind::Bicomplex),
            multi_document(f.target().as_multi(), Kind::Bicomplex),
            f.as_multi()
                .components()
                .iter()
                .map(|(b, m)| block(vec![b.p, b.q], m))
                .collect(),
        ),
        Object::TwistedMap(f) => map(
            multi_document(f.source().as_multi(), Kind::Twisted),
            multi_document(f.target().as_multi(), Kind::Twisted),
            f.as_multi()
                .components()
                .iter()
                .map(|(b, m)| block(vec![b.p, b.q], m))
                .collect(),
        ),
    }
}

fn syntax(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn fill(ring: RingSpec, rows: usize, cols: usize, b: &Block) -> Result<ExactMatrix> {
    let mut m = ExactMatrix::zeros(ring, rows, cols);
    let mut seen = BTreeSet::new();
    for (r, c, v) in &b.entries {
        if *r >= rows || *c >= cols {
            return Err(syntax(format!(
                "entry ({r},{c}) at {:?} outside a {rows}x{cols} matrix",
                b.at
            )));
        }
        if !seen.insert((*r, *c)) {
            return Err(syntax(format!("duplicate entry ({r},{c}) at {:?}", b.at)));
        }
        m.set(*r, *c, ring.parse(v)?);
    }
    Ok(m)
}

fn at1(b: &Block) -> Result<i32> {
    match b.at.as_slice() {
        [n] => Ok(*n),
        _ => Err(syntax(format!("expected a degree [n], found {:?}", b.at))),
    }
}

fn at2(b: &Block) -> Result<Bidegree> {
    match b.at.as_slice() {
        [p, q] => Ok(Bidegree::new(*p, *q)),
        _ => Err(syntax(format!("expected a bidegree [p, q], found {:?}", b.at))),
    }
}

fn rank(v: i64) -> Result<usize> {
    usize::try_from(v).map_err(|_| syntax(format!("negative rank {v}")))
}

fn no_map_fields(d: &Document) -> Result<()> {
    if d.source.is_some() || d.target.is_some() || d.components.is_some() {
        return Err(syntax("source/target/components are only allowed on maps"));
    }
    Ok(())
}

fn check_support(d: &Document, degrees: impl Iterator<Item = Vec<i32>>) -> Result<()> {
    let Some(s) = &d.support else { return Ok(()) };
    let inside = |x: &[i32]| match (s.as_slice(), x) {
        ([lo, hi], [n]) => lo <= n && n <= hi,
        ([pl, ph, ql, qh], [p, q]) => pl <= p && p <= ph && ql <= q && q <= qh,
        _ => false,
    };
    for x in degrees {
        if !inside(&x) {
            return Err(syntax(format!(
                "rank at {x:?} lies outside the declared support {s:?}"
            )));
        }
    }
    Ok(())
}

fn chain_from(d: &Document, ring: RingSpec) -> Result<ChainComplex> {
    no_map_fields(d)?;
    let mut ranks = BTreeMap::new();
    for r in d.ranks.iter().flatten() {
        match r.as_slice() {
            [n, k] => {
                let n = i32::try_from(*n).map_err(|_| syntax("degree out of range"))?;
                if ranks.insert(n, rank(*k)?).is_some() {
                    return Err(syntax(format!("rank at {n} given twice")));
                }
            }
            _ => return Err(syntax(format!("chain ranks are [n, rank], found {r:?}"))),
        }
    }
    check_support(d, ranks.keys().map(|&n| vec![n]))?;
    let mut diffs = BTreeMap::new();
    for (key, blocks) in d.differentials.iter().flatten() {
        if key != "d" {
            return Err(syntax(format!("chain complexes only carry `d`, found `{key}`")));
        }
        for b in blocks {
            let n = at1(b)?;
            let r = |k: i32| ranks.get(&k).copied().unwrap_or(0);
            if diffs.insert(n, fill(ring, r(n - 1), r(n), b)?).is_some() {
                return Err(syntax(format!("d at {n} given twice")));
            }
        }
    }
    ChainComplex::new(ring, ranks, diffs)
}

fn multi_from(d: &Document, ring: RingSpec) -> Result<Multicomplex> {
    no_map_fields(d)?;
    let mut ranks = BTreeMap::new();
    for r in d.ranks.iter().flatten() {
        match r.as_slice() {
            [p, q, k] => {
                let b = Bidegree::new(
                    i32::try_from(*p).map_err(|_| syntax("degree out of range"))?,
                    i32::try_from(*q).map_err(|_| syntax("degree out of range"))?,
                );
                if ranks.insert(b, rank(*k)?).is_some() {
                    return Err(syntax(format!("rank at {b} given twice")));
                }
            }
            _ => return Err(syntax(format!("ranks are [p, q, rank], found {r:?}"))),
        }
    }
    check_support(d, ranks.keys().map(|b| vec![b.p, b.q]))?;
    let mut maps = BTreeMap::new();
    for (key, blocks) in d.differentials.iter().flatten() {
        let i = match (d.kind, key.as_str()) {
            (Kind::Bicomplex, "dh") => DH,
            (Kind::Bicomplex, "dv") => DV,
            (Kind::Twisted, k) => k
                .strip_prefix('d')
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| syntax(format!("unknown differential `{k}`")))?,
            (_, k) => return Err(syntax(format!("unknown differential `{k}` for a bicomplex"))),
        };
        for b in blocks {
            let src = at2(b)?;
            let r = |x: Bidegree| ranks.get(&x).copied().unwrap_or(0);
            if maps
                .insert((i, src), fill(ring, r(src.shift(i)), r(src), b)?)
                .is_some()
            {
                return Err(syntax(format!("{key} at {src} given twice")));
            }
        }
    }
    Ok(Multicomplex::from_raw(ring, ranks, maps))
}

fn resolve(
    r: &Option<ObjectRef>,
    what: &str,
    loader: &mut dyn FnMut(&str) -> Result<Document>,
) -> Result<Document> {
    match r {
        None => Err(syntax(format!("map without {what}"))),
        Some(ObjectRef::Inline(d)) => Ok((**d).clone()),
        Some(ObjectRef::Path(p)) => loader(p),
    }
}

/// Builds and validates the object a document describes. `loader` resolves
/// path references of maps.
pub fn from_document(d: &Document, loader: &mut dyn FnMut(&str) -> Result<Document>) -> Result<Object> {
    if d.schema_version != SCHEMA_VERSION {
        return Err(syntax(format!("unsupported schema_version {}", d.schema_version)));
    }
    let ring: RingSpec = d.ring.parse()?;
    match d.kind {
        Kind::Chain => Ok(Object::Chain(chain_from(d, ring)?)),
        Kind::Bicomplex => Ok(Object::Bicomplex(Bicomplex::from_multi(multi_from(d, ring)?)?)),
        Kind::Twisted => Ok(Object::Twisted(TwistedComplex::from_multi(multi_from(d, ring)?)?)),
        Kind::Map => {
            if d.ranks.is_some() || d.differentials.is_some() {
                return Err(syntax("maps carry source, target and components only"));
            }
            let s = from_document(&resolve(&d.source, "source", loader)?, loader)?;
            let t = from_document(&resolve(&d.target, "target", loader)?, loader)?;
            if s.ring() != ring || t.ring() != ring {
                return Err(syntax("source and target must share the map's ring"));
            }
            let blocks = d.components.clone().unwrap_or_default();
            match (s, t) {
                (Object::Chain(s), Object::Chain(t)) => {
                    let mut f = BTreeMap::new();
                    for b in &blocks {
                        let n = at1(b)?;
                        if f.insert(n, fill(ring, t.rank(n), s.rank(n), b)?).is_some() {
                            return Err(syntax(format!("component at {n} given twice")));
                        }
                    }
                    Ok(Object::ChainMap(ChainMap::new(s, t, f)?))
                }
                (Object::Bicomplex(s), Object::Bicomplex(t)) => {
                    let f = multi_components(&blocks, ring, s.as_multi(), t.as_multi())?;
                    Ok(Object::BicomplexMap(BicomplexMap::new(s, t, f)?))
                }
                (Object::Twisted(s), Object::Twisted(t)) => {
                    let f = multi_components(&blocks, ring, s.as_multi(), t.as_multi())?;
                    Ok(Object::TwistedMap(TwistedMap::new(s, t, f)?))
                }
                (s, t) => Err(syntax(format!(
                    "map from a {} to a {}",
                    s.kind_name(),
                    t.kind_name()
                ))),
            }
        }
    }
}

fn multi_components(
    blocks: &[Block],
    ring: RingSpec,
    s: &Multicomplex,
    t: &Multicomplex,
) -> Result<BTreeMap<Bidegree, ExactMatrix>> {
    let mut f = BTreeMap::new();
    for b in blocks {
        let at = at2(b)?;
        if f.insert(at, fill(ring, t.rank(at), s.rank(at), b)?).is_some() {
            return Err(syntax(format!("component at {at} given twice")));
        }
    }
    Ok(f)
}

/// Parses a self-contained document.
pub fn parse(text: &str) -> Result<Object> {
    parse_with(text, &mut |p: &str| {
        Err(syntax(format!(
            "cannot resolve reference `{p}` without a base directory"
        )))
    })
}

pub fn parse_with(text: &str, loader: &mut dyn FnMut(&str) -> Result<Document>) -> Result<Object> {
    let d: Document = serde_json::from_str(text).map_err(|e| syntax(e.to_string()))?;
    from_document(&d, loader)
}

/// Reads a document file; map references resolve relative to its directory.
pub fn load(path: &Path) -> Result<Object> {
    let text = read(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut loader = |p: &str| -> Result<Document> {
        let text = read(&dir.join(p))?;
        serde_json::from_str(&text).map_err(|e| syntax(format!("{p}: {e}")))
    };
    parse_with(&text, &mut loader)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| syntax(format!("{}: {e}", path.display())))
}

pub fn save(path: &Path, obj: &Object) -> Result<()> {
    std::fs::write(path, serialize(obj)).map_err(|e| syntax(format!("{}: {e}", path.display())))
}

pub fn serialize(obj: &Object) -> String {
    render_document(&to_document(obj))
}

pub fn render_document(d: &Document) -> String {
    let v = serde_json::to_value(d).expect("documents serialize");
    let mut out = String::new();
    render(&v, 0, &mut out);
    out.push('\n');
    out
}

const WIDTH: usize = 88;

/// Pretty printer that keeps short arrays and objects on one line.
fn render(v: &Value, indent: usize, out: &mut String) {
    let flat = serde_json::to_string(v).expect("json");
    if flat.len() + indent <= WIDTH || !matches!(v, Value::Array(_) | Value::Object(_)) {
        out.push_str(&flat);
        return;
    }
    let pad = " ".repeat(indent + 2);
    match v {
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad);
                render(item, indent + 2, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&serde_json::to_string(key).expect("json"));
                out.push_str(": ");
                render(item, indent + 2, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
        }
        _ => unreachable!(),
    }
    out.push_str(&" ".repeat(indent));
    out.push(if v.is_array() { ']' } else { '}' });
}
