//! Triangle subalgebras of digraphs.
//!
//! The subalgebra forced by vertices `v1..vl` is their common
//! out-neighborhood. When that set is exactly a loopless triangle, pinning
//! fresh vertices to `v1..vl` confines an input graph to the triangle, which
//! is what the 3-coloring gadget in [`crate::reductions`] relies on.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::digraph::{set_members, Digraph};
use crate::error::{Error, Result};
use crate::structure::Element;

/// Forcing vertices together with the loopless triangle they force.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubalgebraWitness {
    pub forcing: Vec<Element>,
    pub image: [Element; 3],
}

impl SubalgebraWitness {
    /// Recomputes the forced set and the triangle predicate from scratch.
    pub fn verify(&self, g: &Digraph) -> Result<()> {
        let forced = forcing_image(g, &self.forcing)?;
        let mut image = self.image;
        image.sort_unstable();
        if forced != image {
            return Err(Error::InvalidWitness(format!(
                "forcing vertices {:?} force {:?}, not {:?}",
                self.forcing, forced, image
            )));
        }
        match triangle_defect(g, &image)? {
            None => Ok(()),
            Some(defect) => Err(Error::InvalidWitness(defect)),
        }
    }
}

fn forced_set(g: &Digraph, vs: &[Element]) -> Result<FixedBitSet> {
    let (&first, rest) = vs.split_first().ok_or(Error::EmptyForcingSet)?;
    g.check_vertex(first, "forcing vertex")?;
    let mut acc = g.out_neighbors(first).clone();
    for &v in rest {
        g.check_vertex(v, "forcing vertex")?;
        acc.intersect_with(g.out_neighbors(v));
    }
    Ok(acc)
}

/// `{u : (v, u) is an edge for every v in vs}`, ascending.
pub fn forcing_image(g: &Digraph, vs: &[Element]) -> Result<Vec<Element>> {
    forced_set(g, vs).map(|s| set_members(&s))
}

fn check_triple(g: &Digraph, c: &[Element]) -> Result<[Element; 3]> {
    let mut triple: [Element; 3] = c.try_into().map_err(|_| Error::NotATriple(c.len()))?;
    triple.sort_unstable();
    if triple[0] == triple[1] || triple[1] == triple[2] {
        return Err(Error::NotATriple(2));
    }
    for &v in &triple {
        g.check_vertex(v, "triangle vertex")?;
    }
    Ok(triple)
}

/// The first reason `c` fails to induce a loopless triangle, if any.
pub fn triangle_defect(g: &Digraph, c: &[Element]) -> Result<Option<String>> {
    let triple = check_triple(g, c)?;
    for &v in &triple {
        if g.has_loop(v) {
            return Ok(Some(format!("loop at {v}")));
        }
    }
    for &u in &triple {
        for &v in &triple {
            if u != v && !g.has_edge(u, v) {
                return Ok(Some(format!("missing edge ({u}, {v})")));
            }
        }
    }
    Ok(None)
}

/// All six non-loop edges among `c` present and none of its three loops.
pub fn is_loopless_triangle(g: &Digraph, c: &[Element]) -> Result<bool> {
    triangle_defect(g, c).map(|d| d.is_none())
}

/// The integer `l >= 0` with `n p^l >= 1 > n p^(l+1)`.
pub fn choose_l(n: u32, p: f64) -> usize {
    let n = f64::from(n);
    let mut l = 0;
    while n * p.powi(l as i32 + 1) >= 1.0 {
        l += 1;
    }
    l
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "reason", content = "size")]
pub enum Rejection {
    /// The forced set does not have exactly three elements.
    WrongSize(usize),
    /// Three elements, not all in the B half.
    OutsideB,
    /// Meets a previously accepted set.
    Overlaps,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    /// First forcing vertex; the chunk is `first..first + l`.
    pub first: Element,
    pub image: Vec<Element>,
    pub rejection: Option<Rejection>,
}

impl Step {
    /// The forced set is three vertices of B, ignoring earlier acceptances.
    pub fn is_fresh_candidate(&self) -> bool {
        !matches!(
            self.rejection,
            Some(Rejection::WrongSize(_) | Rejection::OutsideB)
        )
    }
}

/// Record of one run of [`paper_procedure_find`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProcedureTrace {
    pub l: usize,
    /// Chunks of `l` consecutive vertices available in the A half.
    pub chunk_capacity: usize,
    pub steps: Vec<Step>,
    /// Accepted sets, pairwise disjoint 3-subsets of B, in acceptance order.
    pub found: Vec<[Element; 3]>,
    /// Index into `found` of the first loopless triangle.
    pub triangle: Option<usize>,
}

impl ProcedureTrace {
    pub fn reached(&self, k: usize) -> bool {
        self.found.len() >= k
    }

    /// The certificate for the first accepted set inducing a triangle.
    pub fn witness(&self) -> Option<SubalgebraWitness> {
        let i = self.triangle?;
        let step = self.steps.iter().filter(|s| s.rejection.is_none()).nth(i)?;
        Some(SubalgebraWitness {
            forcing: (step.first..step.first + self.l as Element).collect(),
            image: self.found[i],
        })
    }
}

/// The A half `1..=⌊n/2⌋`; B is everything above it.
pub fn half_split(n: u32) -> u32 {
    n / 2
}

/// Chunked search for `k` disjoint three-element subalgebras inside B forced
/// by consecutive runs of `l` vertices from A.
///
/// `l` is `l_override` when given, else [`choose_l`]`(n, p)`. Stops after
/// `⌊|A|/l⌋` chunks or once `k` sets are accepted; `k = 0` never steps.
pub fn paper_procedure_find(
    g: &Digraph,
    k: usize,
    p: f64,
    l_override: Option<usize>,
) -> Result<ProcedureTrace> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2, got {n}")));
    }
    let l = match l_override {
        Some(l) => l,
        None if p > 0.0 && p < 1.0 => choose_l(n, p),
        None => {
            return Err(Error::InvalidModel(format!(
                "p must lie in (0, 1), got {p}"
            )))
        }
    };
    let a_size = half_split(n);
    let chunk_capacity = (a_size as usize).checked_div(l).unwrap_or(0);
    let mut trace = ProcedureTrace {
        l,
        chunk_capacity,
        steps: Vec::new(),
        found: Vec::new(),
        triangle: None,
    };
    let mut used = g.empty_set();
    for i in 0..chunk_capacity {
        if trace.found.len() >= k {
            break;
        }
        let first = (i * l) as Element + 1;
        let chunk: Vec<Element> = (first..first + l as Element).collect();
        let forced = forced_set(g, &chunk)?;
        let image = set_members(&forced);
        let rejection = if image.len() != 3 {
            Some(Rejection::WrongSize(image.len()))
        } else if image[0] <= a_size {
            Some(Rejection::OutsideB)
        } else if !forced.is_disjoint(&used) {
            Some(Rejection::Overlaps)
        } else {
            None
        };
        if rejection.is_none() {
            used.union_with(&forced);
            let set = [image[0], image[1], image[2]];
            if trace.triangle.is_none() && is_loopless_triangle(g, &set)? {
                trace.triangle = Some(trace.found.len());
            }
            trace.found.push(set);
        }
        trace.steps.push(Step {
            first,
            image,
            rejection,
        });
    }
    Ok(trace)
}

/// Result of [`closure_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSearch {
    pub witness: Option<SubalgebraWitness>,
    pub triangles_examined: usize,
}

/// Examines loopless triangles `{a < b < c}` in lexicographic order. For each,
/// the largest possible forcing set is the common in-neighborhood `W`; the
/// triangle is a subalgebra iff `W` is non-empty and forces exactly it.
pub fn closure_search(g: &Digraph) -> ClosureSearch {
    let mut examined = 0;
    let loopless = |v: usize| !g.has_loop(v as Element);
    let mutual = |v: usize| {
        let mut m = g.out_neighbors(v as Element).clone();
        m.intersect_with(g.in_neighbors(v as Element));
        m
    };
    for a in g.vertices().map(|v| v as usize).filter(|&a| loopless(a)) {
        let around_a = mutual(a);
        for b in around_a.ones().filter(|&b| b > a && loopless(b)) {
            let mut around_ab = mutual(b);
            around_ab.intersect_with(&around_a);
            for c in around_ab.ones().filter(|&c| c > b && loopless(c)) {
                examined += 1;
                let mut w = g.in_neighbors(a as Element).clone();
                w.intersect_with(g.in_neighbors(b as Element));
                w.intersect_with(g.in_neighbors(c as Element));
                let forcing = set_members(&w);
                if forcing.is_empty() {
                    continue;
                }
                let forced = forced_set(g, &forcing).expect("non-empty, in range");
                if forced.count_ones(..) == 3 {
                    return ClosureSearch {
                        witness: Some(SubalgebraWitness {
                            forcing,
                            image: [a as Element, b as Element, c as Element],
                        }),
                        triangles_examined: examined,
                    };
                }
            }
        }
    }
    ClosureSearch {
        witness: None,
        triangles_examined: examined,
    }
}

pub fn closure_find_triangle_subalgebra(g: &Digraph) -> Option<SubalgebraWitness> {
    closure_search(g).witness
}
