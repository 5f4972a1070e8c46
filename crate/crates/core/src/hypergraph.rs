//! Finite hypergraphs, edge maps, characteristic hypergraphs of functions,
//! and homomorphism checking.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// A finite hypergraph: a vertex alphabet and a list of distinct,
/// non-empty vertex sets.
///
/// Edges are stored as sorted index lists. Vertices in no edge are allowed
/// (isolated).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph", into = "RawHypergraph")]
pub struct Hypergraph {
    vertices: Alphabet,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
    disjoint: bool,
    partition: bool,
}

#[derive(Serialize, Deserialize)]
struct RawHypergraph {
    vertices: Alphabet,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;
    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.vertices, raw.edges)
    }
}

impl From<Hypergraph> for RawHypergraph {
    fn from(h: Hypergraph) -> Self {
        RawHypergraph {
            vertices: h.vertices,
            edges: h.edges,
        }
    }
}

impl Hypergraph {
    pub fn new(vertices: Alphabet, edges: Vec<Vec<usize>>) -> Result<Self> {
        let n = vertices.len();
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, mut e) in edges.into_iter().enumerate() {
            if e.is_empty() {
                return Err(Error::InvalidHypergraph(format!("edge {i} is empty")));
            }
            e.sort_unstable();
            e.dedup();
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} contains vertex {v}, but there are only {n} vertices"
                )));
            }
            if !seen.insert(e.clone()) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} duplicates an earlier edge"
                )));
            }
            normalized.push(e);
        }
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in normalized.iter().enumerate() {
            for &v in e {
                incidence[v].push(i);
            }
        }
        let disjoint = incidence.iter().all(|es| es.len() <= 1);
        let partition = incidence.iter().all(|es| es.len() == 1);
        Ok(Self {
            vertices,
            edges: normalized,
            incidence,
            disjoint,
            partition,
        })
    }

    /// Partition hypergraph from blocks that must cover every vertex exactly
    /// once. The error names the first offending vertex.
    pub fn partition(vertices: Alphabet, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = vertices.len();
        let mut count = vec![0usize; n];
        for (i, b) in blocks.iter().enumerate() {
            let mut b = b.clone();
            b.sort_unstable();
            b.dedup();
            for v in b {
                if v >= n {
                    return Err(Error::InvalidHypergraph(format!(
                        "block {i} contains vertex {v}, but there are only {n} vertices"
                    )));
                }
                count[v] += 1;
            }
        }
        if let Some(v) = (0..n).find(|&v| count[v] != 1) {
            return Err(Error::InvalidPartition {
                vertex: v,
                label: vertices.label(v).to_string(),
                count: count[v],
            });
        }
        Self::new(vertices, blocks)
    }

    /// Complete 1-uniform hypergraph: one singleton edge per vertex.
    pub fn complete_1_uniform(vertices: Alphabet) -> Self {
        let edges = (0..vertices.len()).map(|v| vec![v]).collect();
        Self::new(vertices, edges).expect("singletons form a valid hypergraph")
    }

    pub fn vertices(&self) -> &Alphabet {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &[usize] {
        &self.edges[i]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Indices of the edges containing `v`, ascending.
    pub fn edges_containing(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.incidence[v].is_empty()
    }

    /// Edges pairwise disjoint and covering every vertex.
    pub fn is_partition(&self) -> bool {
        self.partition
    }

    /// Edges pairwise disjoint; isolated vertices allowed.
    pub fn has_disjoint_edges(&self) -> bool {
        self.disjoint
    }

    /// The unique edge containing `v`, if edges are disjoint and `v` is
    /// covered.
    pub fn unique_edge_of(&self, v: usize) -> Option<usize> {
        match self.incidence[v].as_slice() {
            [e] if self.disjoint => Some(*e),
            _ => None,
        }
    }

    pub fn contains(&self, edge: usize, v: usize) -> bool {
        self.edges[edge].binary_search(&v).is_ok()
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn permute_vertices(&self, perm: &[usize]) -> Result<Self> {
        let n = self.vertex_count();
        check_permutation(perm, n)?;
        let mut labels = vec![String::new(); n];
        for (v, &p) in perm.iter().enumerate() {
            labels[p] = self.vertices.label(v).to_string();
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| perm[v]).collect())
            .collect();
        Self::new(Alphabet::new(labels)?, edges)
    }

    pub(crate) fn require_disjoint(&self, name: &str) -> Result<()> {
        if self.disjoint {
            Ok(())
        } else {
            Err(Error::RequiresPartition(format!(
                "{name} has overlapping edges"
            )))
        }
    }

    pub(crate) fn require_partition(&self, name: &str) -> Result<()> {
        if self.partition {
            Ok(())
        } else {
            Err(Error::RequiresPartition(format!(
                "{name} is not a partition hypergraph"
            )))
        }
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::Shape(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut hit = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut hit[p], true) {
            return Err(Error::Shape("not a permutation".into()));
        }
    }
    Ok(())
}

/// A total map from the edges of a source hypergraph to the edges of a
/// target hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawEdgeMap", into = "RawEdgeMap")]
pub struct EdgeMap {
    map: Vec<usize>,
    target_edge_count: usize,
}

#[derive(Serialize, Deserialize)]
struct RawEdgeMap {
    source_edge_count: usize,
    target_edge_count: usize,
    map: Vec<usize>,
}

impl TryFrom<RawEdgeMap> for EdgeMap {
    type Error = Error;
    fn try_from(raw: RawEdgeMap) -> Result<Self> {
        if raw.map.len() != raw.source_edge_count {
            return Err(Error::Shape(format!(
                "edge map has {} entries but source_edge_count is {}",
                raw.map.len(),
                raw.source_edge_count
            )));
        }
        EdgeMap::new(raw.map, raw.target_edge_count)
    }
}

impl From<EdgeMap> for RawEdgeMap {
    fn from(m: EdgeMap) -> Self {
        RawEdgeMap {
            source_edge_count: m.map.len(),
            target_edge_count: m.target_edge_count,
            map: m.map,
        }
    }
}

impl EdgeMap {
    pub fn new(map: Vec<usize>, target_edge_count: usize) -> Result<Self> {
        if let Some((i, &t)) = map
            .iter()
            .enumerate()
            .find(|(_, &t)| t >= target_edge_count)
        {
            return Err(Error::Shape(format!(
                "edge {i} maps to {t}, but the target has {target_edge_count} edges"
            )));
        }
        Ok(Self {
            map,
            target_edge_count,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
            target_edge_count: n,
        }
    }

    pub fn source_edge_count(&self) -> usize {
        self.map.len()
    }

    pub fn target_edge_count(&self) -> usize {
        self.target_edge_count
    }

    pub fn apply(&self, edge: usize) -> usize {
        self.map[edge]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target_edge_count];
        for &t in &self.map {
            hit[t] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target_edge_count];
        self.map
            .iter()
            .all(|&t| !std::mem::replace(&mut hit[t], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.map.len() == self.target_edge_count && self.is_injective()
    }

    pub fn inverse(&self) -> Result<EdgeMap> {
        if !self.is_bijective() {
            return Err(Error::RequiresBijective(format!("{:?}", self.map)));
        }
        let mut inv = vec![0; self.map.len()];
        for (s, &t) in self.map.iter().enumerate() {
            inv[t] = s;
        }
        Ok(EdgeMap {
            map: inv,
            target_edge_count: self.map.len(),
        })
    }

    /// `then ∘ self`: first apply `self`, then `then`.
    pub fn then(&self, then: &EdgeMap) -> Result<EdgeMap> {
        if self.target_edge_count != then.source_edge_count() {
            return Err(Error::Shape(format!(
                "cannot compose edge maps: {} target edges vs {} source edges",
                self.target_edge_count,
                then.source_edge_count()
            )));
        }
        Ok(EdgeMap {
            map: self.map.iter().map(|&t| then.map[t]).collect(),
            target_edge_count: then.target_edge_count,
        })
    }

    pub(crate) fn check_shape(&self, source: &Hypergraph, target: &Hypergraph) -> Result<()> {
        if self.source_edge_count() != source.edge_count()
            || self.target_edge_count != target.edge_count()
        {
            return Err(Error::Shape(format!(
                "edge map is {} -> {} edges, hypergraphs have {} -> {}",
                self.source_edge_count(),
                self.target_edge_count,
                source.edge_count(),
                target.edge_count()
            )));
        }
        Ok(())
    }
}

/// A total function between finite alphabets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFunction", into = "RawFunction")]
pub struct FunctionTable {
    domain: Alphabet,
    codomain: Alphabet,
    map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawFunction {
    domain: Alphabet,
    codomain: Alphabet,
    map: Vec<usize>,
}

impl TryFrom<RawFunction> for FunctionTable {
    type Error = Error;
    fn try_from(raw: RawFunction) -> Result<Self> {
        FunctionTable::new(raw.domain, raw.codomain, raw.map)
    }
}

impl From<FunctionTable> for RawFunction {
    fn from(f: FunctionTable) -> Self {
        RawFunction {
            domain: f.domain,
            codomain: f.codomain,
            map: f.map,
        }
    }
}

impl FunctionTable {
    pub fn new(domain: Alphabet, codomain: Alphabet, map: Vec<usize>) -> Result<Self> {
        if map.len() != domain.len() {
            return Err(Error::InvalidFunction(format!(
                "map has {} entries for a domain of size {}",
                map.len(),
                domain.len()
            )));
        }
        if let Some((a, &b)) = map.iter().enumerate().find(|(_, &b)| b >= codomain.len()) {
            return Err(Error::InvalidFunction(format!(
                "image of {a} is {b}, outside codomain of size {}",
                codomain.len()
            )));
        }
        Ok(Self {
            domain,
            codomain,
            map,
        })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let map = (0..alphabet.len()).collect();
        Self {
            domain: alphabet.clone(),
            codomain: alphabet,
            map,
        }
    }

    /// `f_ID(m, m') = 1{m = m'}` on `{1..m}²`, codomain `{0, 1}`.
    pub fn identification(messages: usize) -> Result<Self> {
        let msgs = Alphabet::messages(messages)?;
        let domain = msgs.product(&msgs)?;
        let map = (0..messages)
            .flat_map(|i| (0..messages).map(move |j| usize::from(i == j)))
            .collect();
        Self::new(domain, Alphabet::binary(), map)
    }

    /// `f_{K-ID}(m, S) = 1{m ∈ S}` for `S` ranging over the `K`-subsets of
    /// `{1..m}` in lexicographic order.
    pub fn k_identification(messages: usize, k: usize) -> Result<Self> {
        if k == 0 || k > messages {
            return Err(Error::Range(format!(
                "K = {k} must lie in 1..={messages}"
            )));
        }
        let subsets = k_subsets(messages, k);
        let labels = subsets.iter().map(|s| {
            let inner: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", inner.join(","))
        });
        let sets = Alphabet::new(labels)?;
        let domain = Alphabet::messages(messages)?.product(&sets)?;
        let map = (0..messages)
            .flat_map(|m| subsets.iter().map(move |s| usize::from(s.contains(&m))))
            .collect();
        Self::new(domain, Alphabet::binary(), map)
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn eval(&self, a: usize) -> usize {
        self.map[a]
    }

    /// Attained codomain indices, ascending. Edge `i` of the
    /// characteristic hypergraph is the preimage of `image()[i]`.
    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.codomain.len()];
        for &b in &self.map {
            hit[b] = true;
        }
        (0..hit.len()).filter(|&b| hit[b]).collect()
    }
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Characteristic hypergraph `H_f`: one edge per attained value, namely its
/// preimage, ordered by codomain index.
pub fn characteristic_hypergraph(f: &FunctionTable) -> Hypergraph {
    let image = f.image();
    let mut slot = vec![usize::MAX; f.codomain.len()];
    for (i, &b) in image.iter().enumerate() {
        slot[b] = i;
    }
    let mut edges = vec![Vec::new(); image.len()];
    for (a, &b) in f.map.iter().enumerate() {
        edges[slot[b]].push(a);
    }
    Hypergraph::new(f.domain.clone(), edges).expect("preimages partition the domain")
}

/// Hypergraph on `f`'s codomain whose edges are the singletons of the
/// attained values, in image order. Unattained values are isolated.
pub fn image_singletons(f: &FunctionTable) -> Hypergraph {
    let edges = f.image().into_iter().map(|b| vec![b]).collect();
    Hypergraph::new(f.codomain.clone(), edges).expect("distinct singletons")
}

/// Result of checking a candidate homomorphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomReport {
    pub vertex_map: Vec<usize>,
    pub edge_map: EdgeMap,
    pub is_hom: bool,
    pub edge_surjective: bool,
    pub edge_bijective: bool,
    /// First `(edge, vertex)` whose image leaves the mapped edge.
    pub witness: Option<(usize, usize)>,
}

pub fn check_homomorphism(
    vertex_map: &[usize],
    edge_map: &EdgeMap,
    g: &Hypergraph,
    h: &Hypergraph,
) -> Result<HomReport> {
    if vertex_map.len() != g.vertex_count() {
        return Err(Error::Shape(format!(
            "vertex map has {} entries for {} vertices",
            vertex_map.len(),
            g.vertex_count()
        )));
    }
    if let Some(&v) = vertex_map.iter().find(|&&v| v >= h.vertex_count()) {
        return Err(Error::Shape(format!(
            "vertex map hits {v}, target has {} vertices",
            h.vertex_count()
        )));
    }
    edge_map.check_shape(g, h)?;
    let witness = g.edges().iter().enumerate().find_map(|(e, verts)| {
        let target = edge_map.apply(e);
        verts
            .iter()
            .find(|&&v| !h.contains(target, vertex_map[v]))
            .map(|&v| (e, v))
    });
    Ok(HomReport {
        vertex_map: vertex_map.to_vec(),
        edge_map: edge_map.clone(),
        is_hom: witness.is_none(),
        edge_surjective: edge_map.is_surjective(),
        edge_bijective: edge_map.is_bijective(),
        witness,
    })
}

/// A vertex map realizing `edge_map` between partition hypergraphs: each
/// vertex goes to the lowest-index vertex of the image of its edge.
pub fn hom_from_edge_map(edge_map: &EdgeMap, g: &Hypergraph, h: &Hypergraph) -> Result<Vec<usize>> {
    g.require_partition("source")?;
    h.require_partition("target")?;
    edge_map.check_shape(g, h)?;
    Ok((0..g.vertex_count())
        .map(|v| {
            let e = g.unique_edge_of(v).expect("partition covers every vertex");
            h.edge(edge_map.apply(e))[0]
        })
        .collect())
}

/// Given edge maps `f_edge, h_edge : E(H) -> E(G)` with `h_edge` bijective,
/// builds the edge-bijective homomorphism `g : G -> G` with
/// `g_E = f_edge ∘ h_edge⁻¹`.
pub fn relabel_hom(
    f_edge: &EdgeMap,
    h_edge: &EdgeMap,
    g: &Hypergraph,
) -> Result<(Vec<usize>, EdgeMap)> {
    if f_edge.source_edge_count() != h_edge.source_edge_count() {
        return Err(Error::Shape("edge maps have different sources".into()));
    }
    let g_edge = h_edge.inverse()?.then(f_edge)?;
    let vertex_map = hom_from_edge_map(&g_edge, g, g)?;
    Ok((vertex_map, g_edge))
}
