//! Line-oriented graph description files.
//!
//! ```text
//! # comment
//! [family]
//! name = cycle
//! n = 9
//! ```
//!
//! `name` is one of `birth_death`, `line`, `cycle`, `periodic_line`,
//! `lattice`, `tree`, `explicit`, `product` or `cover`. Explicit graphs list
//! `v <id> <m>` under `[vertices]` and `e <id> <id> <b>` under `[edges]`; a
//! single `e` line declares a symmetric edge unless the reverse is listed
//! too. Products name child files as `factor = path` under `[product]`.
//! Coverings go under `[cover]` with `constructor = line_over_cycle | cyclic
//! | product`; product coverings list `cover = path` and `identity = path`
//! lines in factor order. Child paths are relative to the including file.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::covering::{
    cyclic_cover_weighted, line_over_cycle_weighted, product_cover, CoverError, CoverFactor, CoveringMap,
};
use crate::graph::{
    BirthDeath, Cycle, FiniteGraph, GraphError, GraphOracle, Lattice, Line, PeriodicLine, Product, ProductWeights,
    RegularTree, Sequence, VertexId,
};

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

fn invalid(msg: impl Into<String>) -> SpecError {
    SpecError::Invalid(msg.into())
}

/// A child spec together with the path it was referenced by.
#[derive(Debug, Clone, PartialEq)]
pub struct Child {
    pub path: String,
    pub spec: GraphSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Cover,
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoverSpec {
    LineOverCycle { k: usize, b: Vec<f64>, m: Vec<f64> },
    Cyclic { n: usize, k: usize, b: Vec<f64>, m: Vec<f64> },
    Product { weights: ProductWeights, factors: Vec<(FactorKind, Child)> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    BirthDeath { b: String, m: String },
    Line { b: String, m: String },
    Cycle { n: usize, b: Vec<f64>, m: Vec<f64> },
    PeriodicLine { b: Vec<f64>, m: Vec<f64> },
    Lattice { dims: usize },
    Tree { degree: usize },
    Explicit { vertices: Vec<(VertexId, f64)>, edges: Vec<(VertexId, VertexId, f64)> },
    Product { weights: ProductWeights, factors: Vec<Child> },
    Cover(CoverSpec),
}

#[derive(Debug, Default)]
struct Sections {
    family: Vec<(usize, String, String)>,
    vertices: Vec<(usize, String)>,
    edges: Vec<(usize, String)>,
    product: Vec<(usize, String, String)>,
    cover: Vec<(usize, String, String)>,
}

fn key_value(line: usize, text: &str) -> Result<(String, String), SpecError> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| SpecError::Syntax { line, message: format!("expected `key = value`, got `{text}`") })?;
    let v = v.trim();
    let v = v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v);
    Ok((k.trim().to_string(), v.to_string()))
}

fn split_sections(text: &str) -> Result<Sections, SpecError> {
    let mut s = Sections::default();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            current = Some(name.trim().to_string());
            continue;
        }
        match current.as_deref() {
            Some("family") => {
                let (k, v) = key_value(line, t)?;
                s.family.push((line, k, v));
            }
            Some("product") => {
                let (k, v) = key_value(line, t)?;
                s.product.push((line, k, v));
            }
            Some("cover") => {
                let (k, v) = key_value(line, t)?;
                s.cover.push((line, k, v));
            }
            Some("vertices") => s.vertices.push((line, t.to_string())),
            Some("edges") => s.edges.push((line, t.to_string())),
            Some(other) => return Err(SpecError::Syntax { line, message: format!("unknown section [{other}]") }),
            None => return Err(SpecError::Syntax { line, message: "content before the first section".into() }),
        }
    }
    Ok(s)
}

fn lookup<'a>(pairs: &'a [(usize, String, String)], key: &str) -> Option<&'a str> {
    pairs.iter().rev().find(|(_, k, _)| k == key).map(|(_, _, v)| v.as_str())
}

fn require<'a>(pairs: &'a [(usize, String, String)], key: &str, section: &str) -> Result<&'a str, SpecError> {
    lookup(pairs, key).ok_or_else(|| invalid(format!("[{section}] is missing `{key}`")))
}

fn parse_usize(v: &str, key: &str) -> Result<usize, SpecError> {
    v.trim().parse().map_err(|_| invalid(format!("`{key}` must be a nonnegative integer, got `{v}`")))
}

fn parse_f64(v: &str, what: &str, line: usize) -> Result<f64, SpecError> {
    v.trim().parse().map_err(|_| SpecError::Syntax { line, message: format!("bad {what} `{v}`") })
}

fn parse_pattern(v: Option<&str>, key: &str) -> Result<Vec<f64>, SpecError> {
    match v {
        None => Ok(vec![1.0]),
        Some(text) => text
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| invalid(format!("`{key}` must list numbers, got `{text}`"))))
            .collect(),
    }
}

fn parse_expr(v: Option<&str>, key: &str) -> Result<String, SpecError> {
    let text = v.unwrap_or("1").to_string();
    Sequence::parse(&text).map_err(|e| invalid(format!("`{key}`: {e}")))?;
    Ok(text)
}

fn parse_weights(v: Option<&str>) -> Result<ProductWeights, SpecError> {
    match v.unwrap_or("laplacian") {
        "laplacian" => Ok(ProductWeights::Laplacian),
        "plain" => Ok(ProductWeights::Plain),
        other => Err(invalid(format!("product weights must be `laplacian` or `plain`, got `{other}`"))),
    }
}

fn parse_vertex(v: &str, line: usize) -> Result<VertexId, SpecError> {
    v.parse().map_err(|e: crate::graph::ParseVertexError| SpecError::Syntax { line, message: e.to_string() })
}

impl GraphSpec {
    /// Parses spec text; `load` resolves child paths.
    pub fn parse_with(text: &str, load: &mut dyn FnMut(&str) -> Result<GraphSpec, SpecError>) -> Result<Self, SpecError> {
        let s = split_sections(text)?;
        let fam = &s.family;
        let name = require(fam, "name", "family")?;
        Ok(match name {
            "birth_death" => GraphSpec::BirthDeath { b: parse_expr(lookup(fam, "b"), "b")?, m: parse_expr(lookup(fam, "m"), "m")? },
            "line" => GraphSpec::Line { b: parse_expr(lookup(fam, "b"), "b")?, m: parse_expr(lookup(fam, "m"), "m")? },
            "cycle" => GraphSpec::Cycle {
                n: parse_usize(require(fam, "n", "family")?, "n")?,
                b: parse_pattern(lookup(fam, "b"), "b")?,
                m: parse_pattern(lookup(fam, "m"), "m")?,
            },
            "periodic_line" => {
                GraphSpec::PeriodicLine { b: parse_pattern(lookup(fam, "b"), "b")?, m: parse_pattern(lookup(fam, "m"), "m")? }
            }
            "lattice" => GraphSpec::Lattice { dims: parse_usize(require(fam, "dims", "family")?, "dims")? },
            "tree" => GraphSpec::Tree { degree: parse_usize(require(fam, "degree", "family")?, "degree")? },
            "explicit" => {
                let mut vertices = Vec::new();
                for (line, t) in &s.vertices {
                    match t.split_whitespace().collect::<Vec<_>>().as_slice() {
                        ["v", id, m] => vertices.push((parse_vertex(id, *line)?, parse_f64(m, "measure", *line)?)),
                        _ => return Err(SpecError::Syntax { line: *line, message: format!("expected `v <id> <m>`, got `{t}`") }),
                    }
                }
                let mut edges = Vec::new();
                for (line, t) in &s.edges {
                    match t.split_whitespace().collect::<Vec<_>>().as_slice() {
                        ["e", x, y, b] => edges.push((parse_vertex(x, *line)?, parse_vertex(y, *line)?, parse_f64(b, "weight", *line)?)),
                        _ => return Err(SpecError::Syntax { line: *line, message: format!("expected `e <id> <id> <b>`, got `{t}`") }),
                    }
                }
                GraphSpec::Explicit { vertices, edges }
            }
            "product" => {
                let mut factors = Vec::new();
                for (line, k, v) in &s.product {
                    if k != "factor" {
                        return Err(SpecError::Syntax { line: *line, message: format!("[product] expects `factor = path`, got `{k}`") });
                    }
                    factors.push(Child { path: v.clone(), spec: load(v)? });
                }
                if factors.is_empty() {
                    return Err(invalid("[product] lists no factors"));
                }
                GraphSpec::Product { weights: parse_weights(lookup(fam, "weights"))?, factors }
            }
            "cover" => GraphSpec::Cover(CoverSpec::parse(&s.cover, load)?),
            other => return Err(invalid(format!("unknown family `{other}`"))),
        })
    }

    /// Reads a spec file, resolving children relative to its directory.
    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| SpecError::Io { path: path.display().to_string(), source })?;
        let dir: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
        GraphSpec::parse_with(&text, &mut |child| GraphSpec::load(&dir.join(child)))
    }

    /// The graph described; for coverings, the covering graph.
    pub fn build(&self) -> Result<GraphOracle, SpecError> {
        Ok(match self {
            GraphSpec::BirthDeath { b, m } => Arc::new(BirthDeath::new(seq(b)?, seq(m)?)),
            GraphSpec::Line { b, m } => Arc::new(Line::new(seq(b)?, seq(m)?)),
            GraphSpec::Cycle { n, b, m } => Arc::new(Cycle::weighted(*n, b.clone(), m.clone())?),
            GraphSpec::PeriodicLine { b, m } => Arc::new(PeriodicLine::weighted(b.clone(), m.clone())?),
            GraphSpec::Lattice { dims } => Arc::new(Lattice::new(*dims)?),
            GraphSpec::Tree { degree } => Arc::new(RegularTree::new(*degree)?),
            GraphSpec::Explicit { vertices, edges } => {
                let mut builder = FiniteGraph::builder();
                for (x, m) in vertices {
                    builder = builder.vertex(x.clone(), *m);
                }
                for (x, y, b) in edges {
                    builder = builder.edge(x.clone(), y.clone(), *b);
                }
                Arc::new(builder.build()?)
            }
            GraphSpec::Product { weights, factors } => {
                let parts = factors.iter().map(|c| c.spec.build()).collect::<Result<Vec<_>, _>>()?;
                Arc::new(Product::new(parts, *weights)?)
            }
            GraphSpec::Cover(c) => c.build()?.cover,
        })
    }

    pub fn covering(&self) -> Result<CoveringMap, SpecError> {
        match self {
            GraphSpec::Cover(c) => c.build(),
            _ => Err(invalid("the spec does not describe a covering (family name must be `cover`)")),
        }
    }

    /// Birth-death chains expose their weight and measure sequences.
    pub fn birth_death(&self) -> Option<Result<BirthDeath, SpecError>> {
        match self {
            GraphSpec::BirthDeath { b, m } => Some(seq(b).and_then(|b| Ok(BirthDeath::new(b, seq(m)?)))),
            _ => None,
        }
    }
}

fn seq(text: &str) -> Result<Sequence, SpecError> {
    Sequence::parse(text).map_err(|e| invalid(e.to_string()))
}

impl CoverSpec {
    fn parse(
        pairs: &[(usize, String, String)],
        load: &mut dyn FnMut(&str) -> Result<GraphSpec, SpecError>,
    ) -> Result<Self, SpecError> {
        let constructor = require(pairs, "constructor", "cover")?;
        let int = |key: &str| require(pairs, key, "cover").and_then(|v| parse_usize(v, key));
        Ok(match constructor {
            "line_over_cycle" => CoverSpec::LineOverCycle {
                k: int("k")?,
                b: parse_pattern(lookup(pairs, "b"), "b")?,
                m: parse_pattern(lookup(pairs, "m"), "m")?,
            },
            "cyclic" => CoverSpec::Cyclic {
                n: int("n")?,
                k: int("k")?,
                b: parse_pattern(lookup(pairs, "b"), "b")?,
                m: parse_pattern(lookup(pairs, "m"), "m")?,
            },
            "product" => {
                let mut factors = Vec::new();
                for (line, k, v) in pairs {
                    let kind = match k.as_str() {
                        "cover" => FactorKind::Cover,
                        "identity" => FactorKind::Identity,
                        "constructor" | "weights" => continue,
                        other => {
                            return Err(SpecError::Syntax { line: *line, message: format!("unexpected key `{other}` in product cover") })
                        }
                    };
                    factors.push((kind, Child { path: v.clone(), spec: load(v)? }));
                }
                if factors.is_empty() {
                    return Err(invalid("product cover lists no factors"));
                }
                CoverSpec::Product { weights: parse_weights(lookup(pairs, "weights"))?, factors }
            }
            other => return Err(invalid(format!("unknown cover constructor `{other}`"))),
        })
    }

    pub fn build(&self) -> Result<CoveringMap, SpecError> {
        Ok(match self {
            CoverSpec::LineOverCycle { k, b, m } => line_over_cycle_weighted(*k, b.clone(), m.clone())?,
            CoverSpec::Cyclic { n, k, b, m } => cyclic_cover_weighted(*n, *k, b.clone(), m.clone())?,
            CoverSpec::Product { weights, factors } => {
                let parts = factors
                    .iter()
                    .map(|(kind, child)| match kind {
                        FactorKind::Cover => child.spec.covering().map(CoverFactor::Cover),
                        FactorKind::Identity => child.spec.build().map(CoverFactor::Identity),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                product_cover(parts, *weights)?
            }
        })
    }
}

fn pattern(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

fn weights_name(w: ProductWeights) -> &'static str {
    match w {
        ProductWeights::Laplacian => "laplacian",
        ProductWeights::Plain => "plain",
    }
}

/// Canonical text; parsing it back gives the same spec.
impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::from("[family]\n");
        match self {
            GraphSpec::BirthDeath { b, m } => write!(out, "name = birth_death\nb = \"{b}\"\nm = \"{m}\"\n")?,
            GraphSpec::Line { b, m } => write!(out, "name = line\nb = \"{b}\"\nm = \"{m}\"\n")?,
            GraphSpec::Cycle { n, b, m } => {
                write!(out, "name = cycle\nn = {n}\nb = \"{}\"\nm = \"{}\"\n", pattern(b), pattern(m))?
            }
            GraphSpec::PeriodicLine { b, m } => {
                write!(out, "name = periodic_line\nb = \"{}\"\nm = \"{}\"\n", pattern(b), pattern(m))?
            }
            GraphSpec::Lattice { dims } => write!(out, "name = lattice\ndims = {dims}\n")?,
            GraphSpec::Tree { degree } => write!(out, "name = tree\ndegree = {degree}\n")?,
            GraphSpec::Explicit { vertices, edges } => {
                out.push_str("name = explicit\n\n[vertices]\n");
                for (x, m) in vertices {
                    writeln!(out, "v {x} {m}")?;
                }
                out.push_str("\n[edges]\n");
                for (x, y, b) in edges {
                    writeln!(out, "e {x} {y} {b}")?;
                }
            }
            GraphSpec::Product { weights, factors } => {
                write!(out, "name = product\nweights = {}\n\n[product]\n", weights_name(*weights))?;
                for c in factors {
                    writeln!(out, "factor = {}", c.path)?;
                }
            }
            GraphSpec::Cover(c) => {
                out.push_str("name = cover\n\n[cover]\n");
                match c {
                    CoverSpec::LineOverCycle { k, b, m } => write!(
                        out,
                        "constructor = line_over_cycle\nk = {k}\nb = \"{}\"\nm = \"{}\"\n",
                        pattern(b),
                        pattern(m)
                    )?,
                    CoverSpec::Cyclic { n, k, b, m } => write!(
                        out,
                        "constructor = cyclic\nn = {n}\nk = {k}\nb = \"{}\"\nm = \"{}\"\n",
                        pattern(b),
                        pattern(m)
                    )?,
                    CoverSpec::Product { weights, factors } => {
                        write!(out, "constructor = product\nweights = {}\n", weights_name(*weights))?;
                        for (kind, child) in factors {
                            let key = match kind {
                                FactorKind::Cover => "cover",
                                FactorKind::Identity => "identity",
                            };
                            writeln!(out, "{key} = {}", child.path)?;
                        }
                    }
                }
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_children(path: &str) -> Result<GraphSpec, SpecError> {
        Err(invalid(format!("unexpected child {path}")))
    }

    fn parse(text: &str) -> Result<GraphSpec, SpecError> {
        GraphSpec::parse_with(text, &mut no_children)
    }

    fn round_trip(spec: &GraphSpec, children: &[(&str, GraphSpec)]) {
        let text = spec.to_string();
        let mut load = |p: &str| {
            children.iter().find(|(q, _)| *q == p).map(|(_, s)| s.clone()).ok_or_else(|| invalid(p.to_string()))
        };
        assert_eq!(&GraphSpec::parse_with(&text, &mut load).unwrap(), spec, "{text}");
    }

    #[test]
    fn parses_families() {
        let s = parse("# chain\n[family]\nname = birth_death\nb = \"r+1\"\nm = 1\n").unwrap();
        assert_eq!(s, GraphSpec::BirthDeath { b: "r+1".into(), m: "1".into() });
        let c = parse("[family]\nname = cycle\nn = 9\n").unwrap();
        assert_eq!(c, GraphSpec::Cycle { n: 9, b: vec![1.0], m: vec![1.0] });
        let g = c.build().unwrap();
        assert_eq!(g.describe(), "C_9");
        let w = parse("[family]\nname = cycle\nn = 6\nb = \"1, 2.5, 3\"\n").unwrap();
        assert_eq!(w, GraphSpec::Cycle { n: 6, b: vec![1.0, 2.5, 3.0], m: vec![1.0] });
    }

    #[test]
    fn explicit_graphs_keep_asymmetry() {
        let text = "[family]\nname = explicit\n[vertices]\nv 0 1\nv 1 2\n[edges]\ne 0 1 1\ne 1 0 2\n";
        let g = parse(text).unwrap().build().unwrap();
        let report = crate::graph::validate_graph(g.as_ref(), 2);
        assert!(!report.is_valid());
    }

    #[test]
    fn errors_name_the_problem() {
        assert!(matches!(parse("name = cycle"), Err(SpecError::Syntax { line: 1, .. })));
        assert!(parse("[family]\nname = moebius\n").unwrap_err().to_string().contains("moebius"));
        assert!(parse("[family]\nname = birth_death\nb = \"r+\"\n").is_err());
        assert!(parse("[family]\nname = explicit\n[vertices]\nv 0\n").is_err());
        assert!(parse("[family]\nname = cover\n[cover]\nconstructor = cyclic\nn = 6\nk = 4\n").unwrap().covering().is_err());
    }

    #[test]
    fn printer_round_trips() {
        let specs = [
            GraphSpec::BirthDeath { b: "r+1".into(), m: "2^(-r)".into() },
            GraphSpec::Line { b: "1".into(), m: "4^(-r)".into() },
            GraphSpec::Cycle { n: 12, b: vec![1.0, 0.1, 3.0], m: vec![0.3333333333333333] },
            GraphSpec::PeriodicLine { b: vec![2.0], m: vec![1.0, 5.0] },
            GraphSpec::Lattice { dims: 3 },
            GraphSpec::Tree { degree: 3 },
            GraphSpec::Explicit {
                vertices: vec![(VertexId::scalar(0), 1.5), (VertexId::scalar(1), 1e-300)],
                edges: vec![(VertexId::scalar(0), VertexId::scalar(1), 0.1 + 0.2)],
            },
            GraphSpec::Cover(CoverSpec::Cyclic { n: 9, k: 3, b: vec![1.0], m: vec![1.0] }),
            GraphSpec::Cover(CoverSpec::LineOverCycle { k: 4, b: vec![1.0, 2.0], m: vec![1.0] }),
        ];
        for s in &specs {
            round_trip(s, &[]);
        }
        let z = GraphSpec::Line { b: "1".into(), m: "1".into() };
        let cover = GraphSpec::Cover(CoverSpec::LineOverCycle { k: 3, b: vec![1.0], m: vec![1.0] });
        let product = GraphSpec::Product {
            weights: ProductWeights::Plain,
            factors: vec![Child { path: "z.hg".into(), spec: z.clone() }, Child { path: "z.hg".into(), spec: z.clone() }],
        };
        round_trip(&product, &[("z.hg", z.clone())]);
        let pc = GraphSpec::Cover(CoverSpec::Product {
            weights: ProductWeights::Laplacian,
            factors: vec![
                (FactorKind::Identity, Child { path: "z.hg".into(), spec: z.clone() }),
                (FactorKind::Cover, Child { path: "c.hg".into(), spec: cover.clone() }),
            ],
        });
        round_trip(&pc, &[("z.hg", z), ("c.hg", cover)]);
        let c = pc.covering().unwrap();
        assert_eq!(c.sheets(), crate::covering::Sheets::Infinite);
    }

    #[test]
    fn loads_children_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("c9.hg"), "[family]\nname = cover\n[cover]\nconstructor = cyclic\nn = 9\nk = 3\n").unwrap();
        std::fs::write(
            dir.path().join("sq.hg"),
            "[family]\nname = cover\n[cover]\nconstructor = product\ncover = c9.hg\ncover = c9.hg\n",
        )
        .unwrap();
        let spec = GraphSpec::load(&dir.path().join("sq.hg")).unwrap();
        assert_eq!(spec.covering().unwrap().sheets(), crate::covering::Sheets::Finite(9));
        assert!(matches!(GraphSpec::load(&dir.path().join("missing.hg")), Err(SpecError::Io { .. })));
    }
}
