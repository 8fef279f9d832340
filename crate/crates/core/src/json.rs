//! JSON formats for groups, representations, graphs, coalgebras and
//! realization bundles. Maps are ordered so output is byte-stable.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coalgebra::Coalgebra;
use crate::error::Result;
use crate::field::{Field, FieldElement};
use crate::graph::{BinarySystem, Digraph, SimpleGraph};
use crate::group::{FiniteGroup, Perm};
use crate::realization::{GadgetVertex, PermRep, RealizationBundle, RealizationReport};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("edge {edge} references unknown vertex {vertex:?}")]
    UnknownEdgeVertex { edge: String, vertex: String },
    #[error("basis element {0:?} is not declared")]
    UnknownBasis(String),
    #[error("{0}")]
    Invalid(String),
}

fn io_error(path: &Path, e: std::io::Error) -> FormatError {
    FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path).map_err(|e| io_error(path, e))?)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    Ok(fs::write(path, contents).map_err(|e| io_error(path, e))?)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    Ok(serde_json::from_str(text).map_err(FormatError::from)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl GroupJson {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupJson {
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
        }
    }

    pub fn build(&self, cap: usize) -> Result<FiniteGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| Perm::from_images(g.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroup::close(self.degree, gens, cap)?)
    }
}

pub fn parse_group(text: &str, cap: usize) -> Result<FiniteGroup> {
    parse::<GroupJson>(text)?.build(cap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermRepJson {
    pub group: GroupJson,
    pub v_size: usize,
    pub gen_images: Vec<Vec<usize>>,
}

impl PermRepJson {
    pub fn from_rep(rep: &PermRep) -> Self {
        PermRepJson {
            group: GroupJson::from_group(rep.group()),
            v_size: rep.v_size(),
            gen_images: rep
                .gen_images()
                .iter()
                .map(|p| p.images().to_vec())
                .collect(),
        }
    }

    pub fn build(&self, cap: usize) -> Result<PermRep> {
        let group = self.group.build(cap)?;
        let images = self
            .gen_images
            .iter()
            .map(|g| Perm::from_images(g.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PermRep::new(group, self.v_size, images)?)
    }
}

pub fn parse_perm_rep(text: &str, cap: usize) -> Result<PermRep> {
    parse::<PermRepJson>(text)?.build(cap)
}

/// `{"vertices": [...], "edges": [["u", "v"], ...]}`. For a simple graph each
/// undirected edge is listed once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl DigraphJson {
    pub fn from_digraph(g: &Digraph) -> Self {
        let names = g.system().vertex_names();
        DigraphJson {
            vertices: names.to_vec(),
            edges: g
                .edges()
                .map(|(u, w)| (names[u].clone(), names[w].clone()))
                .collect(),
        }
    }

    pub fn from_simple(g: &SimpleGraph) -> Self {
        let names = g.system().vertex_names();
        DigraphJson {
            vertices: names.to_vec(),
            edges: g
                .edges()
                .map(|(u, w)| (names[u].clone(), names[w].clone()))
                .collect(),
        }
    }

    fn check_edges(&self) -> Result<()> {
        for (u, w) in &self.edges {
            for x in [u, w] {
                if !self.vertices.contains(x) {
                    return Err(FormatError::UnknownEdgeVertex {
                        edge: format!("{u}->{w}"),
                        vertex: x.clone(),
                    }
                    .into());
                }
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Digraph> {
        self.check_edges()?;
        Ok(Digraph::from_named(self.vertices.clone(), &self.edges)?)
    }

    pub fn build_simple(&self) -> Result<SimpleGraph> {
        self.check_edges()?;
        let mut g = SimpleGraph::new(self.vertices.clone())?;
        for (u, w) in &self.edges {
            let a = g.system().vertex_index(u).expect("checked");
            let b = g.system().vertex_index(w).expect("checked");
            g.add_edge(a, b)?;
        }
        Ok(g)
    }
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    parse::<DigraphJson>(text)?.build()
}

/// `{"vertices", "labels", "relations": {label: [[u, w], ...]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemJson {
    pub vertices: Vec<String>,
    pub labels: Vec<String>,
    pub relations: BTreeMap<String, Vec<(String, String)>>,
}

impl SystemJson {
    pub fn from_system(sys: &BinarySystem) -> Self {
        let names = sys.vertex_names();
        let relations = sys
            .labels()
            .iter()
            .enumerate()
            .map(|(l, label)| {
                let pairs = sys
                    .relation(l)
                    .iter()
                    .map(|&(u, w)| (names[u].clone(), names[w].clone()))
                    .collect();
                (label.clone(), pairs)
            })
            .collect();
        SystemJson {
            vertices: names.to_vec(),
            labels: sys.labels().to_vec(),
            relations,
        }
    }

    pub fn build(&self) -> Result<BinarySystem> {
        let pairs: Vec<(String, String, String)> = self
            .relations
            .iter()
            .flat_map(|(l, ps)| {
                ps.iter()
                    .map(move |(u, w)| (l.clone(), u.clone(), w.clone()))
            })
            .collect();
        Ok(BinarySystem::from_named(
            self.vertices.clone(),
            self.labels.clone(),
            &pairs,
        )?)
    }
}

/// `{"field": "p^n", "basis": [...], "comult": {x: [[y, z, c], ...]}, "counit": {x: c}}`,
/// with each constant `c` given as its coefficient vector over the prime field,
/// constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraJson {
    pub field: String,
    pub basis: Vec<String>,
    pub comult: BTreeMap<String, Vec<(String, String, Vec<u32>)>>,
    pub counit: BTreeMap<String, Vec<u32>>,
}

impl CoalgebraJson {
    pub fn from_coalgebra(c: &Coalgebra) -> Self {
        let f = c.field();
        let b = c.basis();
        CoalgebraJson {
            field: f.to_string(),
            basis: b.to_vec(),
            comult: (0..c.dim())
                .map(|x| {
                    let terms = c
                        .comult(x)
                        .iter()
                        .map(|&(y, z, k)| (b[y].clone(), b[z].clone(), f.coeffs(k)))
                        .collect();
                    (b[x].clone(), terms)
                })
                .collect(),
            counit: (0..c.dim())
                .map(|x| (b[x].clone(), f.coeffs(c.counit()[x])))
                .collect(),
        }
    }

    pub fn build(&self, field_cap: u64) -> Result<Coalgebra> {
        let spec: crate::field::FieldSpec = self.field.parse()?;
        let field = spec.build(field_cap)?;
        let index: BTreeMap<&str, usize> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != self.basis.len() {
            return Err(FormatError::Invalid("duplicate basis element".into()).into());
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| FormatError::UnknownBasis(name.into()))
        };
        let constant =
            |field: &Field, c: &[u32]| -> Result<FieldElement> { Ok(field.from_coeffs(c)?) };
        let mut comult = vec![Vec::new(); self.basis.len()];
        for (x, terms) in &self.comult {
            let xi = lookup(x)?;
            for (y, z, c) in terms {
                comult[xi].push((lookup(y)?, lookup(z)?, constant(&field, c)?));
            }
        }
        let mut counit = vec![FieldElement::ZERO; self.basis.len()];
        for (x, c) in &self.counit {
            counit[lookup(x)?] = constant(&field, c)?;
        }
        Ok(Coalgebra::new(field, self.basis.clone(), comult, counit)?)
    }
}

pub fn parse_coalgebra(text: &str, field_cap: u64) -> Result<Coalgebra> {
    parse::<CoalgebraJson>(text)?.build(field_cap)
}

#[derive(Debug, Clone, Serialize)]
struct SimpleBundleJson {
    #[serde(flatten)]
    graph: DigraphJson,
    provenance: BTreeMap<String, GadgetVertex>,
}

#[derive(Debug, Clone, Serialize)]
struct ReportBundleJson<'a> {
    v_subset: Vec<&'a str>,
    g_subset: Vec<&'a str>,
    #[serde(flatten)]
    report: &'a RealizationReport,
}

/// Writes `system.json`, `simple.json`, `simple.dot`, `coalgebra.json` and
/// `report.json` into `dir`, creating it if needed.
pub fn write_bundle(
    dir: &Path,
    bundle: &RealizationBundle,
    report: &RealizationReport,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    write_file(
        &dir.join("system.json"),
        &to_pretty(&SystemJson::from_system(&bundle.system)),
    )?;
    let names = bundle.simple.system().vertex_names();
    let provenance = (0..bundle.simple.vertex_count())
        .filter_map(|x| bundle.provenance.origin(x).map(|o| (names[x].clone(), *o)))
        .collect();
    let simple = SimpleBundleJson {
        graph: DigraphJson::from_simple(&bundle.simple),
        provenance,
    };
    write_file(&dir.join("simple.json"), &to_pretty(&simple))?;
    write_file(&dir.join("simple.dot"), &bundle.simple.to_dot())?;
    write_file(
        &dir.join("coalgebra.json"),
        &to_pretty(&CoalgebraJson::from_coalgebra(bundle.coalgebra.coalgebra())),
    )?;
    let sys_names = bundle.system.vertex_names();
    let report = ReportBundleJson {
        v_subset: bundle
            .v_subset
            .iter()
            .map(|&v| sys_names[v].as_str())
            .collect(),
        g_subset: bundle
            .g_subset
            .iter()
            .map(|&g| sys_names[g].as_str())
            .collect(),
        report,
    };
    write_file(&dir.join("report.json"), &to_pretty(&report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ErrorKind;
    use crate::graph_coalgebra::GraphCoalgebra;

    #[test]
    fn digraph_round_trip() {
        let text = r#"{"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]}"#;
        let g = parse_digraph(text).unwrap();
        assert_eq!(g.edge_count(), 2);
        let back = to_pretty(&DigraphJson::from_digraph(&g));
        assert_eq!(parse_digraph(&back).unwrap(), g);
    }

    #[test]
    fn unknown_vertex_names_the_edge() {
        let err = parse_digraph(r#"{"vertices": ["a"], "edges": [["a", "z"]]}"#).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::Input);
        assert_eq!(err.to_string(), "edge a->z references unknown vertex \"z\"");
        assert!(parse_digraph("{").is_err());
        assert!(parse_digraph(r#"{"vertices": [], "edges": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn coalgebra_round_trip() {
        let field = Field::new(2, 2).unwrap();
        let g = Digraph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        let gc = GraphCoalgebra::build(g, &field).unwrap();
        let json = to_pretty(&CoalgebraJson::from_coalgebra(gc.coalgebra()));
        assert!(json.contains("\"field\": \"2^2\""));
        let back = parse_coalgebra(&json, 1 << 16).unwrap();
        assert_eq!(&back, gc.coalgebra());
        assert_eq!(to_pretty(&CoalgebraJson::from_coalgebra(&back)), json);
    }

    #[test]
    fn coalgebra_errors() {
        let bad = r#"{"field": "2^1", "basis": ["a"], "comult": {"a": [["a", "b", [1]]]}, "counit": {"a": [1]}}"#;
        assert!(matches!(
            parse_coalgebra(bad, 1 << 16),
            Err(crate::Error::Format(FormatError::UnknownBasis(_)))
        ));
        let big = r#"{"field": "2^20", "basis": [], "comult": {}, "counit": {}}"#;
        assert_eq!(
            parse_coalgebra(big, 1 << 16).unwrap_err().kind(),
            ErrorKind::CapExceeded
        );
    }

    #[test]
    fn group_and_rep() {
        let g = parse_group(
            r#"{"degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}"#,
            100,
        )
        .unwrap();
        assert_eq!(g.order(), 6);
        let rep = parse_perm_rep(
            r#"{"group": {"degree": 2, "generators": [[1, 0]]}, "v_size": 2, "gen_images": [[1, 0]]}"#,
            100,
        )
        .unwrap();
        assert_eq!(PermRepJson::from_rep(&rep).gen_images, vec![vec![1, 0]]);
        let err = parse_perm_rep(
            r#"{"group": {"degree": 3, "generators": [[1, 2, 0]]}, "v_size": 2, "gen_images": [[1, 0]]}"#,
            100,
        )
        .unwrap_err();
        assert!(err.to_string().starts_with("ρ not well-defined at word"));
        assert!(parse_group(r#"{"degree": 2, "generators": [[0, 0]]}"#, 100).is_err());
    }

    #[test]
    fn system_round_trip() {
        let sys = BinarySystem::from_named(
            vec!["a".into(), "b".into()],
            vec!["r".into(), "s".into()],
            &[
                ("r".into(), "a".into(), "b".into()),
                ("s".into(), "b".into(), "b".into()),
            ],
        )
        .unwrap();
        let json = SystemJson::from_system(&sys);
        assert_eq!(json.build().unwrap(), sys);
    }
}
