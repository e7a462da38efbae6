//! Digraphs: structures with a single binary relation, indexed for
//! neighborhood intersection.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::structure::{Element, Relation, RelationalStructure};

/// A digraph on vertices `1..=n`. Loops are permitted.
///
/// Keeps the underlying [`RelationalStructure`] (for use as a solver target)
/// plus per-vertex out- and in-neighborhood bitsets. Bit `v` of a bitset
/// stands for vertex `v`; bit 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    structure: RelationalStructure,
    out: Vec<FixedBitSet>,
    inn: Vec<FixedBitSet>,
}

impl Digraph {
    pub fn from_edges<I>(n: u32, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Element, Element)>,
    {
        let relation = Relation::new(2, n, edges.into_iter().map(|(u, v)| vec![u, v]))?;
        Self::from_structure(RelationalStructure::new(n, vec![relation])?)
    }

    /// Wraps a structure whose signature is exactly one binary relation.
    pub fn from_structure(structure: RelationalStructure) -> Result<Self> {
        if structure.arities() != [2] {
            return Err(Error::SignatureMismatch {
                left: structure.arities(),
                right: vec![2],
            });
        }
        let slots = structure.domain_size() as usize + 1;
        let mut out = vec![FixedBitSet::with_capacity(slots); slots];
        let mut inn = out.clone();
        for t in structure.relation(0).tuples() {
            let (u, v) = (t[0] as usize, t[1] as usize);
            out[u].insert(v);
            inn[v].insert(u);
        }
        Ok(Self {
            structure,
            out,
            inn,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.structure.domain_size()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Element> {
        1..=self.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.structure.relation(0).len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Element, Element)> + '_ {
        self.structure
            .relation(0)
            .tuples()
            .iter()
            .map(|t| (t[0], t[1]))
    }

    pub fn has_edge(&self, u: Element, v: Element) -> bool {
        self.out
            .get(u as usize)
            .is_some_and(|row| row.contains(v as usize))
    }

    pub fn has_loop(&self, v: Element) -> bool {
        self.has_edge(v, v)
    }

    pub fn out_neighbors(&self, v: Element) -> &FixedBitSet {
        &self.out[v as usize]
    }

    pub fn in_neighbors(&self, v: Element) -> &FixedBitSet {
        &self.inn[v as usize]
    }

    pub fn as_structure(&self) -> &RelationalStructure {
        &self.structure
    }

    pub fn into_structure(self) -> RelationalStructure {
        self.structure
    }

    pub(crate) fn check_vertex(&self, v: Element, context: &str) -> Result<()> {
        if v == 0 || v > self.vertex_count() {
            return Err(Error::ElementOutOfRange {
                context: context.to_string(),
                element: v,
                domain: self.vertex_count(),
            });
        }
        Ok(())
    }

    /// An empty bitset sized for this digraph's vertices.
    pub(crate) fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.vertex_count() as usize + 1)
    }
}

/// Collects the vertices in a bitset, ascending.
pub fn set_members(set: &FixedBitSet) -> Vec<Element> {
    set.ones().map(|v| v as Element).collect()
}

/// The subdigraph induced on `vertices`, relabeled `1..=k` in increasing
/// vertex order. An empty vertex set gives an empty digraph, which is
/// returned as `None` since domains are non-empty.
pub fn induced_subdigraph(g: &Digraph, vertices: &[Element]) -> Result<Option<Digraph>> {
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &v in &sorted {
        g.check_vertex(v, "induced vertex set")?;
    }
    if sorted.is_empty() {
        return Ok(None);
    }
    let mut edges = Vec::new();
    for (i, &u) in sorted.iter().enumerate() {
        for (j, &v) in sorted.iter().enumerate() {
            if g.has_edge(u, v) {
                edges.push((i as Element + 1, j as Element + 1));
            }
        }
    }
    Digraph::from_edges(sorted.len() as u32, edges).map(Some)
}
