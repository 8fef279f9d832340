//! Realizing a finite permutation representation `ρ: G → Sym(V)` as the
//! restriction of coalgebra automorphisms to grouplike elements.
//!
//! The pipeline is: the labeled action system on `G ⊔ V`, whose automorphisms
//! are exactly the maps `Φ_g`; arrow replacement to a simple graph with the
//! same automorphism group; and the coalgebra of that graph with every edge
//! bidirected.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::caps::Caps;
use crate::coalgebra::{CoalgebraError, LinearMap};
use crate::error::ErrorKind;
use crate::field::Field;
use crate::graph::{automorphisms, is_invariant, BinarySystem, GraphError, SimpleGraph};
use crate::graph_coalgebra::{brute_space, order_formula, GraphCoalgebra, GraphCoalgebraError};
use crate::group::{FiniteGroup, GroupError, Perm};
use crate::report::{any_failed, Check, CheckStatus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error("generator {0} is the identity")]
    IdentityGenerator(usize),
    #[error("generators do not generate the group")]
    NotGenerating,
    #[error("{found} generator images given for {expected} generators")]
    GeneratorCountMismatch { expected: usize, found: usize },
    #[error("image of generator {generator} acts on {found} points, expected {expected}")]
    ImageDegreeMismatch {
        generator: usize,
        expected: usize,
        found: usize,
    },
    #[error("ρ not well-defined at word {word} (same element as {reached})")]
    NotWellDefined { word: String, reached: String },
    #[error("element {0} is not in the group")]
    UnknownElement(usize),
    #[error("verification failed: {item}: {detail}")]
    VerificationFailed { item: String, detail: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    GraphCoalgebra(#[from] GraphCoalgebraError),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
}

impl RealizationError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            RealizationError::VerificationFailed { .. } => ErrorKind::Verification,
            RealizationError::Group(e) => e.kind(),
            RealizationError::Graph(e) => e.kind(),
            RealizationError::GraphCoalgebra(e) => e.kind(),
            RealizationError::Coalgebra(e) => e.kind(),
            _ => ErrorKind::Input,
        }
    }
}

type Result<T, E = RealizationError> = std::result::Result<T, E>;

fn format_word(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter()
        .map(|j| format!("s{j}"))
        .collect::<Vec<_>>()
        .join("·")
}

/// A finite permutation group with chosen generators `S` and the images of
/// those generators in `Sym(V)`.
#[derive(Debug, Clone)]
pub struct PermRep {
    group: FiniteGroup,
    v_size: usize,
    gen_images: Vec<Perm>,
    rho: Vec<Perm>,
}

impl PermRep {
    /// Checks that the generator images extend to a homomorphism and tabulates it.
    pub fn new(group: FiniteGroup, v_size: usize, gen_images: Vec<Perm>) -> Result<Self> {
        let gens = group.generators();
        if gen_images.len() != gens.len() {
            return Err(RealizationError::GeneratorCountMismatch {
                expected: gens.len(),
                found: gen_images.len(),
            });
        }
        if let Some(j) = gens.iter().position(Perm::is_identity) {
            return Err(RealizationError::IdentityGenerator(j));
        }
        for (j, img) in gen_images.iter().enumerate() {
            if img.degree() != v_size {
                return Err(RealizationError::ImageDegreeMismatch {
                    generator: j,
                    expected: v_size,
                    found: img.degree(),
                });
            }
        }
        let mut rho = Vec::with_capacity(group.order());
        for i in 0..group.order() {
            let p = group
                .word(i)
                .iter()
                .fold(Perm::identity(v_size), |acc, &j| {
                    acc.compose(&gen_images[j])
                });
            rho.push(p);
        }
        let gen_idx = group.generator_indices();
        for i in 0..group.order() {
            for (j, &s) in gen_idx.iter().enumerate() {
                let k = group.mul(i, s);
                if rho[k] != rho[i].compose(&gen_images[j]) {
                    let mut word = group.word(i).to_vec();
                    word.push(j);
                    return Err(RealizationError::NotWellDefined {
                        word: format_word(&word),
                        reached: format_word(group.word(k)),
                    });
                }
            }
        }
        Ok(PermRep {
            group,
            v_size,
            gen_images,
            rho,
        })
    }

    pub fn from_generators(
        degree: usize,
        generators: Vec<Perm>,
        v_size: usize,
        gen_images: Vec<Perm>,
        cap: usize,
    ) -> Result<Self> {
        let group = FiniteGroup::close(degree, generators, cap)?;
        PermRep::new(group, v_size, gen_images)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn v_size(&self) -> usize {
        self.v_size
    }

    pub fn gen_images(&self) -> &[Perm] {
        &self.gen_images
    }

    /// `ρ(g)` for the element with index `g`.
    pub fn rho(&self, g: usize) -> Result<&Perm> {
        self.rho.get(g).ok_or(RealizationError::UnknownElement(g))
    }

    pub fn is_faithful(&self) -> bool {
        let mut seen: Vec<&Perm> = self.rho.iter().collect();
        seen.sort();
        seen.dedup();
        seen.len() == self.rho.len()
    }
}

/// The Cayley diagram: vertices are group elements, and label `j` relates
/// `g` to `g·s_j`.
pub fn cayley_diagram(
    group: &FiniteGroup,
    generators: &[Perm],
    cap: usize,
) -> Result<BinarySystem> {
    let mut idx = Vec::with_capacity(generators.len());
    for (j, s) in generators.iter().enumerate() {
        if s.is_identity() {
            return Err(RealizationError::IdentityGenerator(j));
        }
        idx.push(group.index_of(s).ok_or(RealizationError::NotGenerating)?);
    }
    if FiniteGroup::close(group.degree(), generators.to_vec(), cap)?.order() != group.order() {
        return Err(RealizationError::NotGenerating);
    }
    let mut sys = BinarySystem::new(
        (0..group.order()).map(|i| format!("g{i}")).collect(),
        (0..generators.len()).map(|j| format!("s{j}")).collect(),
    )?;
    add_cayley_pairs(&mut sys, group, &idx)?;
    Ok(sys)
}

fn add_cayley_pairs(
    sys: &mut BinarySystem,
    group: &FiniteGroup,
    gens: &[usize],
) -> Result<(), GraphError> {
    for (j, &s) in gens.iter().enumerate() {
        for g in 0..group.order() {
            sys.add_pair(j, g, group.mul(g, s))?;
        }
    }
    Ok(())
}

/// The labeled system on `G ⊔ V` (vertices `g0..`, then `v0..`) with Cayley
/// pairs under labels `s_j` and pairs `(g, ρ(g)(v))` under label `v`.
pub fn action_system(rep: &PermRep) -> Result<BinarySystem> {
    let group = rep.group();
    let n = group.order();
    let vertices = (0..n)
        .map(|i| format!("g{i}"))
        .chain((0..rep.v_size()).map(|k| format!("v{k}")))
        .collect();
    let s = group.generators().len();
    let labels = (0..s)
        .map(|j| format!("s{j}"))
        .chain((0..rep.v_size()).map(|k| format!("v{k}")))
        .collect();
    let mut sys = BinarySystem::new(vertices, labels)?;
    add_cayley_pairs(&mut sys, group, &group.generator_indices())?;
    for v in 0..rep.v_size() {
        for g in 0..n {
            sys.add_pair(s + v, g, n + rep.rho[g].apply(v))?;
        }
    }
    Ok(sys)
}

/// `Φ_g̃` on the vertices of [`action_system`]: `g ↦ g̃g` and `v ↦ ρ(g̃)(v)`.
pub fn phi(rep: &PermRep, g: usize) -> Result<Perm> {
    let group = rep.group();
    let rho = rep.rho(g)?;
    let n = group.order();
    let images = (0..n)
        .map(|h| group.mul(g, h))
        .chain((0..rep.v_size()).map(|v| n + rho.apply(v)))
        .collect();
    Ok(Perm::from_images(images)?)
}

/// Where a gadget vertex sits inside the gadget replacing one labeled pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetPosition {
    X,
    Y,
    /// Tail vertex at distance `k ≥ 1` from `x`.
    TailX(usize),
    TailY(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GadgetVertex {
    pub pair: usize,
    pub label: usize,
    pub position: GadgetPosition,
}

/// Bookkeeping for [`arrow_replace`]. Original vertices keep their indices
/// `0..original`; the gadget of pair `k` occupies a contiguous block.
#[derive(Debug, Clone)]
pub struct Provenance {
    original: usize,
    tail_offset: usize,
    pairs: Vec<(usize, usize, usize)>,
    pair_index: HashMap<(usize, usize, usize), usize>,
    starts: Vec<usize>,
    gadget: Vec<GadgetVertex>,
}

impl Provenance {
    pub fn original_count(&self) -> usize {
        self.original
    }

    /// `T = max original degree + 2`.
    pub fn tail_offset(&self) -> usize {
        self.tail_offset
    }

    /// The replaced pairs as `(label, u, w)`.
    pub fn pairs(&self) -> &[(usize, usize, usize)] {
        &self.pairs
    }

    /// Origin of simple-graph vertex `x`, or `None` for an original vertex.
    pub fn origin(&self, x: usize) -> Option<&GadgetVertex> {
        x.checked_sub(self.original)
            .and_then(|i| self.gadget.get(i))
    }

    /// Extends an automorphism of the system to the replaced graph by moving
    /// each gadget along with its pair. `None` if `psi` does not permute the pairs.
    pub fn extend(&self, psi: &Perm) -> Option<Perm> {
        if psi.degree() != self.original {
            return None;
        }
        let total = self.original + self.gadget.len();
        let mut images: Vec<usize> = (0..total).collect();
        for v in 0..self.original {
            images[v] = psi.apply(v);
        }
        for (k, &(l, u, w)) in self.pairs.iter().enumerate() {
            let target = *self.pair_index.get(&(l, psi.apply(u), psi.apply(w)))?;
            let len = self.gadget_len(k);
            for j in 0..len {
                images[self.starts[k] + j] = self.starts[target] + j;
            }
        }
        Perm::from_images(images).ok()
    }

    /// Restriction to the original vertices, if they are mapped among themselves.
    pub fn restrict(&self, psi: &Perm) -> Option<Perm> {
        let images: Vec<usize> = (0..self.original).map(|v| psi.apply(v)).collect();
        if images.iter().any(|&x| x >= self.original) {
            return None;
        }
        Perm::from_images(images).ok()
    }

    fn gadget_len(&self, k: usize) -> usize {
        let end = self
            .starts
            .get(k + 1)
            .copied()
            .unwrap_or(self.original + self.gadget.len());
        end - self.starts[k]
    }
}

/// Replaces every labeled pair `(u, w)` with label `i` by the path
/// `u - x - y - w`, with pendant paths of `T+2i+1` new vertices at `x` and
/// `T+2i+2` at `y`, where `T` is the maximum degree plus two.
pub fn arrow_replace(sys: &BinarySystem) -> Result<(SimpleGraph, Provenance)> {
    let original = sys.vertex_count();
    let t = sys.max_degree() + 2;
    let mut names: Vec<String> = sys.vertex_names().to_vec();
    let mut gadget = Vec::new();
    let mut starts = Vec::new();
    let mut edges = Vec::new();
    let pairs: Vec<(usize, usize, usize)> = sys.pairs().collect();
    for (k, &(l, u, w)) in pairs.iter().enumerate() {
        let start = names.len();
        starts.push(start);
        let (x, y) = (start, start + 1);
        names.push(format!("p{k}.x"));
        names.push(format!("p{k}.y"));
        gadget.push(GadgetVertex {
            pair: k,
            label: l,
            position: GadgetPosition::X,
        });
        gadget.push(GadgetVertex {
            pair: k,
            label: l,
            position: GadgetPosition::Y,
        });
        edges.extend([(u, x), (x, y), (y, w)]);
        for (anchor, len, tag) in [(x, t + 2 * l + 1, "x"), (y, t + 2 * l + 2, "y")] {
            let mut prev = anchor;
            for step in 1..=len {
                let id = names.len();
                names.push(format!("p{k}.{tag}{step}"));
                let position = if tag == "x" {
                    GadgetPosition::TailX(step)
                } else {
                    GadgetPosition::TailY(step)
                };
                gadget.push(GadgetVertex {
                    pair: k,
                    label: l,
                    position,
                });
                edges.push((prev, id));
                prev = id;
            }
        }
    }
    let mut simple = SimpleGraph::new(names)?;
    for (a, b) in edges {
        simple.add_edge(a, b)?;
    }
    let pair_index = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    Ok((
        simple,
        Provenance {
            original,
            tail_offset: t,
            pairs,
            pair_index,
            starts,
            gadget,
        },
    ))
}

/// Everything produced by the realization pipeline.
#[derive(Debug, Clone)]
pub struct RealizationBundle {
    pub system: BinarySystem,
    pub simple: SimpleGraph,
    pub coalgebra: GraphCoalgebra,
    /// Vertices of the system (and of the simple graph) coming from `V`.
    pub v_subset: Vec<usize>,
    /// Vertices coming from `G`.
    pub g_subset: Vec<usize>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct RealizationReport {
    pub field: String,
    pub group_order: usize,
    pub generators: usize,
    pub v_size: usize,
    pub faithful_rep: bool,
    pub system_vertices: usize,
    pub system_pairs: usize,
    pub simple_vertices: usize,
    pub simple_edges: usize,
    pub tail_offset: usize,
    pub coalgebra_dim: usize,
    pub simple_aut_order: usize,
    /// The four realization items.
    pub items: Vec<Check>,
    /// Supporting checks on the intermediate constructions.
    pub checks: Vec<Check>,
}

impl RealizationReport {
    pub fn failed(&self) -> bool {
        any_failed(&self.items) || any_failed(&self.checks)
    }

    pub fn has_skipped(&self) -> bool {
        self.items
            .iter()
            .chain(&self.checks)
            .any(|c| c.status == CheckStatus::Skipped)
    }

    /// First failing check as an error.
    pub fn ensure_verified(&self) -> Result<()> {
        match self
            .items
            .iter()
            .chain(&self.checks)
            .find(|c| c.status == CheckStatus::Fail)
        {
            Some(c) => Err(RealizationError::VerificationFailed {
                item: c.name.clone(),
                detail: c.detail.clone(),
            }),
            None => Ok(()),
        }
    }
}

/// Runs the pipeline and verifies it, returning the report even when a check fails.
pub fn build_realization(
    rep: &PermRep,
    field: &Field,
    caps: &Caps,
) -> Result<(RealizationBundle, RealizationReport)> {
    let group = rep.group();
    let n = group.order();
    let system = action_system(rep)?;
    let (simple, provenance) = arrow_replace(&system)?;
    let coalgebra = GraphCoalgebra::build(simple.as_digraph().clone(), field)?;
    let g_subset: Vec<usize> = (0..n).collect();
    let v_subset: Vec<usize> = (n..n + rep.v_size()).collect();
    let mut checks = Vec::new();

    let phis: Vec<Perm> = (0..n).map(|g| phi(rep, g)).collect::<Result<_>>()?;
    let mut sorted_phis = phis.clone();
    sorted_phis.sort();
    let system_auts = automorphisms(&system, caps.graph_search)?;
    checks.push(Check::from_bool(
        "system_automorphisms",
        system_auts == sorted_phis,
        format!("|Aut(system)| = {}, |{{Φ_g}}| = {}", system_auts.len(), n),
    ));

    let s = group.generators().len();
    let degrees = system.all_degrees();
    let g_deg = 2 * s + rep.v_size();
    let degree_ok = g_subset.iter().all(|&g| degrees[g].degree == g_deg)
        && v_subset.iter().all(|&v| degrees[v].degree == n);
    checks.push(Check::from_bool(
        "degree_formulas",
        degree_ok,
        format!(
            "deg(g) = 2·{s} + {} = {g_deg}, deg(v) = |G| = {n}",
            rep.v_size()
        ),
    ));

    let restrict_to_v = |p: &Perm| -> Option<Perm> {
        let images: Vec<usize> = v_subset
            .iter()
            .map(|&v| p.apply(v).checked_sub(n))
            .collect::<Option<_>>()?;
        Perm::from_images(images).ok()
    };
    let rho_ok = (0..n).all(|g| restrict_to_v(&phis[g]).as_ref() == Some(&rep.rho[g]));
    checks.push(Check::from_bool(
        "restriction_is_rho",
        rho_ok,
        format!("Φ_g restricted to V equals ρ(g) for all {n} elements"),
    ));

    let simple_auts = automorphisms(simple.system(), caps.graph_search)?;
    let extended: Option<Vec<Perm>> = phis.iter().map(|p| provenance.extend(p)).collect();
    let extended_ok = extended
        .as_ref()
        .is_some_and(|ext| ext.iter().all(|p| simple.system().is_automorphism(p)));
    let mut restricted: Vec<Option<Perm>> =
        simple_auts.iter().map(|p| provenance.restrict(p)).collect();
    restricted.sort();
    let replacement_ok = extended_ok
        && simple_auts.len() == system_auts.len()
        && restricted
            .iter()
            .map(Option::as_ref)
            .eq(system_auts.iter().map(Some));
    checks.push(Check::from_bool(
        "arrow_replacement",
        replacement_ok,
        format!(
            "|Aut(simple)| = {} on {} vertices, |Aut(system)| = {}",
            simple_auts.len(),
            simple.vertex_count(),
            system_auts.len()
        ),
    ));
    let Some(extended) = extended.filter(|_| extended_ok) else {
        return Err(RealizationError::VerificationFailed {
            item: "arrow_replacement".into(),
            detail: "Φ_g does not extend to the replaced graph".into(),
        });
    };

    let gc = &coalgebra;
    let axioms = gc.coalgebra().verify_axioms();
    checks.push(Check::from_bool(
        "coalgebra_axioms",
        axioms.passed(),
        format!("dim {}", gc.coalgebra().dim()),
    ));
    checks.push(gc.check_grouplikes(caps.grouplike_enum));

    // (1) g ↦ f^{Φ_g,0,1} is an injective homomorphism into Aut(C).
    let mats: Vec<LinearMap> = extended
        .iter()
        .map(|p| gc.structured_to_matrix(&gc.section(p.clone())))
        .collect::<Result<_, _>>()?;
    let c = gc.coalgebra();
    let morphisms = mats
        .iter()
        .map(|m| c.is_morphism(c, m))
        .collect::<Result<Vec<_>, _>>()?;
    let mut hom = true;
    for a in 0..n {
        for b in 0..n {
            hom &= mats[a].compose(field, &mats[b])? == mats[group.mul(a, b)];
        }
    }
    let identity = LinearMap::identity(c.dim());
    let invertible = (0..n).all(|a| {
        mats[a]
            .compose(field, &mats[group.inverse_index(a)])
            .ok()
            .as_ref()
            == Some(&identity)
    });
    let mut distinct = mats.clone();
    distinct.sort();
    distinct.dedup();
    let items_1 = Check::from_bool(
        "item1_faithful_g_coalgebra",
        morphisms.iter().all(|&m| m) && invertible && hom && distinct.len() == n,
        format!(
            "{n} coalgebra automorphisms f^(Φ_g,0,1), multiplicative on all {} pairs, pairwise distinct: {}",
            n * n,
            distinct.len() == n
        ),
    );

    // (2) restriction image equals Aut(simple) ≅ G.
    let mut sorted_ext = extended.clone();
    sorted_ext.sort();
    let restricts_to_sigma = mats.iter().zip(&extended).all(|(m, p)| {
        (0..gc.vertex_count())
            .all(|v| m.column(v) == [(p.apply(v), crate::field::FieldElement::ONE)])
    });
    let items_2 = Check::from_bool(
        "item2_restriction_image",
        restricts_to_sigma && sorted_ext == simple_auts && simple_auts.len() == n,
        format!(
            "restriction of f^(Φ_g,0,1) to G(C) is Φ_g; {{Φ_g}} = Aut(simple) of order {}",
            simple_auts.len()
        ),
    );

    // (3) V is invariant and the composed restriction to V is ρ.
    let invariant = is_invariant(&v_subset, &simple_auts);
    let generators_ok = group
        .generator_indices()
        .iter()
        .enumerate()
        .all(|(j, &s)| restrict_to_v(&extended[s]).as_ref() == Some(&rep.gen_images()[j]));
    let items_3 = Check::from_bool(
        "item3_restriction_to_v",
        invariant && generators_ok && rho_ok,
        format!("V invariant under Aut(simple): {invariant}; restriction equals ρ on every generator: {generators_ok}"),
    );

    // (4) faithful on the complement of V, witnessed by Φ_g(e_G) = g.
    let e = group.identity_index();
    let witnessed = (0..n).all(|g| extended[g].apply(e) == g);
    let mut complement: Vec<Vec<usize>> = extended
        .iter()
        .map(|p| {
            (0..p.degree())
                .filter(|x| !v_subset.contains(x))
                .map(|x| p.apply(x))
                .collect()
        })
        .collect();
    complement.sort();
    complement.dedup();
    let items_4 = Check::from_bool(
        "item4_faithful_on_complement",
        witnessed && complement.len() == n,
        format!("Φ_g(e_G) = g for all {n} elements"),
    );

    let space = brute_space(gc);
    if space <= caps.brute_oracle {
        let brute = c.automorphisms_brute(caps.brute_oracle)?;
        let expected = order_formula(field.order() as u64, gc.edge_count(), simple_auts.len());
        checks.push(Check::from_bool(
            "coalgebra_brute_count",
            expected == Some(brute.len() as u128),
            format!("brute {} vs formula {:?}", brute.len(), expected),
        ));
    } else {
        checks.push(Check::skipped(
            "coalgebra_brute_count",
            format!(
                "matrix space q^(dim²) for dim {} exceeds cap {}",
                c.dim(),
                caps.brute_oracle
            ),
        ));
    }

    let report = RealizationReport {
        field: field.to_string(),
        group_order: n,
        generators: s,
        v_size: rep.v_size(),
        faithful_rep: rep.is_faithful(),
        system_vertices: system.vertex_count(),
        system_pairs: system.pair_count(),
        simple_vertices: simple.vertex_count(),
        simple_edges: simple.edge_count(),
        tail_offset: provenance.tail_offset(),
        coalgebra_dim: c.dim(),
        simple_aut_order: simple_auts.len(),
        items: vec![items_1, items_2, items_3, items_4],
        checks,
    };
    let bundle = RealizationBundle {
        system,
        simple,
        coalgebra,
        v_subset,
        g_subset,
        provenance,
    };
    Ok((bundle, report))
}

/// Runs the pipeline and fails with the first violated item.
pub fn realize_representation(
    rep: &PermRep,
    field: &Field,
    caps: &Caps,
) -> Result<(RealizationBundle, RealizationReport)> {
    let (bundle, report) = build_realization(rep, field, caps)?;
    report.ensure_verified()?;
    Ok((bundle, report))
}
