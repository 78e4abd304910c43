//! Undirected graphs, their clique complexes, and the pairwise and local
//! Markov properties expressed as membership in factorisation spaces.
//!
//! For non-adjacent `i, j` the pairwise statement `X_i ⫫ X_j | X_rest` is
//! membership in the space of `[i,j] = {I∖{j}, I∖{i}}`; the local statement at
//! `i` is membership in the space of `[i] = {I∖{i}, {i}∪∂i}`. The meets of
//! these families saturate to the clique complex, so on strictly positive
//! tables both properties coincide with factorising over the cliques.

use serde::{Deserialize, Serialize};

use crate::covering::{Antichain, Covering, IndexSet, Subset};
use crate::error::{Error, Result};
use crate::factorize::pair_split;
use crate::loglin::{CylinderSubspace, Membership, PositiveTable};

/// Clique enumeration refuses larger graphs.
pub const MAX_CLIQUE_VERTICES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: IndexSet,
    // open neighbourhoods ∂i
    adjacency: Vec<Subset>,
}

impl Graph {
    pub fn new(vertices: &IndexSet, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Subset::EMPTY; vertices.len()];
        for &(i, j) in edges {
            for v in [i, j] {
                if v >= vertices.len() {
                    return Err(Error::UnknownVertex(v.to_string()));
                }
            }
            if i == j {
                return Err(Error::SelfLoop(vertices.label(i).to_string()));
            }
            adjacency[i] = adjacency[i].with(j);
            adjacency[j] = adjacency[j].with(i);
        }
        Ok(Graph {
            vertices: vertices.clone(),
            adjacency,
        })
    }

    pub fn from_labels<S: AsRef<str>>(vertices: &IndexSet, edges: &[(S, S)]) -> Result<Self> {
        let lookup = |l: &S| {
            vertices
                .position(l.as_ref())
                .map_err(|_| Error::UnknownVertex(l.as_ref().to_string()))
        };
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices, &edges)
    }

    pub fn empty(vertices: &IndexSet) -> Self {
        Graph {
            vertices: vertices.clone(),
            adjacency: vec![Subset::EMPTY; vertices.len()],
        }
    }

    pub fn complete(vertices: &IndexSet) -> Self {
        let full = vertices.full();
        Graph {
            vertices: vertices.clone(),
            adjacency: (0..vertices.len()).map(|i| full.without(i)).collect(),
        }
    }

    /// Graph whose edge set is the bitmask `code` over the pairs `i < j` in
    /// lexicographic order.
    pub fn from_code(vertices: &IndexSet, code: u64) -> Self {
        let n = vertices.len();
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .enumerate()
            .filter(|(k, _)| code & (1 << k) != 0)
            .map(|(_, e)| e)
            .collect();
        Self::new(vertices, &edges).expect("generated edges are valid")
    }

    /// Every graph on the vertex set, `2^(n(n-1)/2)` of them.
    pub fn all(vertices: &IndexSet) -> impl Iterator<Item = Graph> + '_ {
        let n = vertices.len();
        let pairs = n * n.saturating_sub(1) / 2;
        (0..1u64 << pairs).map(move |code| Self::from_code(vertices, code))
    }

    pub fn vertices(&self) -> &IndexSet {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn neighbours(&self, i: usize) -> Subset {
        self.adjacency[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| self.adjacency[i].iter().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    pub fn non_adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.adjacent(i, j))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.non_adjacent_pairs().is_empty()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = Subset::singleton(0);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = frontier
                .iter()
                .fold(Subset::EMPTY, |acc, i| acc.union(self.adjacency[i]));
            frontier = next.difference(seen);
            seen = seen.union(next);
        }
        seen == self.vertices.full()
    }

    fn vertex(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(i.to_string()))
        }
    }
}

/// `[i,j]` for a non-adjacent pair.
pub fn pair_cov(g: &Graph, i: usize, j: usize) -> Result<Covering> {
    g.vertex(i)?;
    g.vertex(j)?;
    if i == j {
        return Err(Error::SameVertex);
    }
    if g.adjacent(i, j) {
        return Err(Error::VerticesAdjacent);
    }
    Ok(pair_split(&g.vertices, i, j))
}

/// `[i] = {I∖{i}, {i}∪∂i}`.
pub fn local_cov(g: &Graph, i: usize) -> Result<Covering> {
    g.vertex(i)?;
    let full = g.vertices.full();
    Covering::new(&g.vertices, [full.without(i), g.neighbours(i).with(i)])
}

/// Meet of `[i,j]` over non-adjacent pairs; `{I}` for a complete graph.
pub fn pairwise_hull(g: &Graph) -> Covering {
    let family: Vec<Covering> = g
        .non_adjacent_pairs()
        .into_iter()
        .map(|(i, j)| pair_split(&g.vertices, i, j))
        .collect();
    Covering::family_meet(&family).unwrap_or_else(|_| Covering::top(&g.vertices))
}

/// Meet of `[i]` over all vertices.
pub fn local_hull(g: &Graph) -> Covering {
    let family: Vec<Covering> = (0..g.len())
        .map(|i| local_cov(g, i).expect("vertex in range"))
        .collect();
    Covering::family_meet(&family).unwrap_or_else(|_| Covering::top(&g.vertices))
}

/// The downward-closed set of cliques of a graph, `∅` included, held by its
/// maximal cliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueComplex {
    maximal: Antichain,
}

impl CliqueComplex {
    pub fn maximal(&self) -> &Antichain {
        &self.maximal
    }

    pub fn covering(&self) -> Covering {
        self.maximal.to_covering()
    }

    /// Every clique.
    pub fn saturation(&self) -> Covering {
        self.maximal.saturation()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.maximal.members().iter().any(|&m| s.is_subset_of(m))
    }
}

pub fn clique_complex(g: &Graph) -> Result<CliqueComplex> {
    if g.len() > MAX_CLIQUE_VERTICES {
        return Err(Error::TooManyVertices(g.len()));
    }
    let mut maximal = Vec::new();
    bron_kerbosch(g, Subset::EMPTY, g.vertices.full(), Subset::EMPTY, &mut maximal);
    Ok(CliqueComplex {
        maximal: Antichain::new(&g.vertices, maximal)?,
    })
}

// Bron–Kerbosch with Tomita pivoting on bitmasks.
fn bron_kerbosch(g: &Graph, r: Subset, mut p: Subset, mut x: Subset, out: &mut Vec<Subset>) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let pivot = p
        .union(x)
        .iter()
        .max_by_key(|&u| p.intersection(g.adjacency[u]).len())
        .expect("p ∪ x is non-empty");
    for v in p.difference(g.adjacency[pivot]).iter() {
        let nv = g.adjacency[v];
        bron_kerbosch(g, r.with(v), p.intersection(nv), x.intersection(nv), out);
        p = p.without(v);
        x = x.with(v);
    }
}

/// Whether the saturations of the pairwise hull, the local hull and the clique
/// complex coincide.
pub fn clique_lemma_check(g: &Graph) -> Result<bool> {
    let cliques = clique_complex(g)?.saturation();
    Ok(pairwise_hull(g).saturate() == cliques && local_hull(g).saturate() == cliques)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkovMode {
    Pairwise,
    Local,
}

/// One membership test of a Markov property.
#[derive(Clone, Debug)]
pub struct MarkovCheck {
    pub covering: Covering,
    pub membership: Membership,
}

#[derive(Clone, Debug)]
pub struct MarkovResult {
    pub holds: bool,
    pub worst_residual: f64,
    pub checks: Vec<MarkovCheck>,
}

fn run_checks(p: &PositiveTable, coverings: Vec<Covering>, tol: f64) -> Result<MarkovResult> {
    let v = p.log_values();
    let mut checks = Vec::with_capacity(coverings.len());
    for covering in coverings {
        let sub = CylinderSubspace::build(p.space(), &covering)?.with_tol(tol);
        checks.push(MarkovCheck {
            membership: sub.contains_vector(&v),
            covering,
        });
    }
    Ok(MarkovResult {
        holds: checks.iter().all(|c| c.membership.member),
        worst_residual: checks
            .iter()
            .map(|c| c.membership.residual)
            .fold(0.0, f64::max),
        checks,
    })
}

fn same_vertices(p: &PositiveTable, g: &Graph) -> Result<()> {
    if p.space().index_set() == &g.vertices {
        Ok(())
    } else {
        Err(Error::IndexSetMismatch)
    }
}

pub fn markov_test(p: &PositiveTable, g: &Graph, mode: MarkovMode, tol: f64) -> Result<MarkovResult> {
    same_vertices(p, g)?;
    let coverings = match mode {
        MarkovMode::Pairwise => g
            .non_adjacent_pairs()
            .into_iter()
            .map(|(i, j)| pair_split(&g.vertices, i, j))
            .collect(),
        MarkovMode::Local => (0..g.len()).map(|i| local_cov(g, i)).collect::<Result<_>>()?,
    };
    run_checks(p, coverings, tol)
}

#[derive(Clone, Debug)]
pub struct HcReport {
    pub pairwise: MarkovResult,
    pub local: MarkovResult,
    pub cliques: Membership,
    /// The three predicates give the same answer.
    pub agree: bool,
}

/// Pairwise Markov, local Markov and factorisation over the cliques.
pub fn hc_check(p: &PositiveTable, g: &Graph, tol: f64) -> Result<HcReport> {
    let pairwise = markov_test(p, g, MarkovMode::Pairwise, tol)?;
    let local = markov_test(p, g, MarkovMode::Local, tol)?;
    let complex = clique_complex(g)?.covering();
    let cliques = CylinderSubspace::build(p.space(), &complex)?
        .with_tol(tol)
        .contains_vector(&p.log_values());
    let agree = pairwise.holds == local.holds && local.holds == cliques.member;
    Ok(HcReport {
        pairwise,
        local,
        cliques,
        agree,
    })
}

/// JSON form: `{"vertices": ["1","2","3"], "edges": [["1","2"],["2","3"]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl GraphJson {
    pub fn into_graph(self) -> Result<Graph> {
        let vertices = IndexSet::new(self.vertices)?;
        Graph::from_labels(&vertices, &self.edges)
    }
}

impl Graph {
    pub fn from_json(text: &str) -> Result<Graph> {
        serde_json::from_str::<GraphJson>(text)?.into_graph()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges = self
            .edges()
            .into_iter()
            .map(|(i, j)| (self.vertices.label(i).to_string(), self.vertices.label(j).to_string()))
            .collect();
        serde_json::to_value(GraphJson {
            vertices: self.vertices.labels().to_vec(),
            edges,
        })
        .expect("graph serializes")
    }
}
