//! Solvability-preserving transformations between EXT instances.
//!
//! * [`three_col_to_ext`]: graph 3-coloring into EXT of a digraph that has a
//!   triangle subalgebra.
//! * [`slice_to_binary`] / [`lift_binary_instance`]: an `l`-ary target seen
//!   as a digraph by pinning coordinates `3..l` to a pivot, and binary
//!   instances lifted to match.
//! * [`pair_to_binary`] / [`split_binary_instance`]: a `k`-ary target seen
//!   as a digraph on `A^m` (`k = 2m` or `2m + 1`), and binary instances split
//!   coordinate-wise to match.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::solver::ExtInstance;
use crate::structure::{Element, PartialAssignment, Relation, RelationalStructure};
use crate::subalgebra::SubalgebraWitness;

/// A simple undirected graph on `1..=n` (no loops, no parallel edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    edges: Vec<(Element, Element)>,
}

impl Graph {
    /// Normalizes each edge to `(min, max)` and drops duplicates.
    pub fn new<I>(n: u32, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Element, Element)>,
    {
        let mut out = Vec::new();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(Error::ElementOutOfRange {
                        context: format!("edges[{i}]"),
                        element: x,
                        domain: n,
                    });
                }
            }
            if u == v {
                return Err(Error::Format(format!("edges[{i}]: loop at {u}")));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Self { n, edges: out })
    }

    /// Reads a structure with one binary relation as an undirected graph.
    pub fn from_structure(s: &RelationalStructure) -> Result<Self> {
        if s.arities() != [2] {
            return Err(Error::SignatureMismatch {
                left: s.arities(),
                right: vec![2],
            });
        }
        Self::new(
            s.domain_size(),
            s.relation(0).tuples().iter().map(|t| (t[0], t[1])),
        )
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[(Element, Element)] {
        &self.edges
    }
}

/// Builds `H'`: `h` as a symmetric digraph plus fresh vertices `w_1..w_l`
/// (numbered after `h`'s vertices) with an edge from each `w_i` to every
/// original vertex, and the partial map `w_i -> forcing[i]`. Solvable
/// against `g` iff `h` is 3-colorable.
pub fn three_col_to_ext(
    h: &Graph,
    g: &Digraph,
    witness: &SubalgebraWitness,
) -> Result<ExtInstance> {
    witness.verify(g)?;
    let n = h.vertex_count();
    let l = witness.forcing.len() as u32;
    let mut tuples: Vec<Vec<Element>> = h
        .edges()
        .iter()
        .flat_map(|&(u, v)| [vec![u, v], vec![v, u]])
        .collect();
    for i in 1..=l {
        tuples.extend((1..=n).map(|u| vec![n + i, u]));
    }
    let input = RelationalStructure::from_tuples(n + l, vec![(2, tuples)])?;
    let partial = PartialAssignment::from_pairs(
        witness
            .forcing
            .iter()
            .enumerate()
            .map(|(i, &v)| (n + i as u32 + 1, v)),
    )?;
    ExtInstance::new(input, g.as_structure().clone(), partial)
}

fn single_relation(s: &RelationalStructure, min_arity: usize) -> Result<usize> {
    match s.arities().as_slice() {
        &[k] if k >= min_arity => Ok(k),
        &[k] => Err(Error::ArityMismatch {
            context: format!("relation arity must be at least {min_arity}"),
            expected: min_arity,
            found: k,
        }),
        other => Err(Error::Precondition(format!(
            "expected exactly one relation, got signature {other:?}"
        ))),
    }
}

fn check_element(x: Element, domain: u32, context: &str) -> Result<()> {
    if x == 0 || x > domain {
        return Err(Error::ElementOutOfRange {
            context: context.to_string(),
            element: x,
            domain,
        });
    }
    Ok(())
}

/// Edge `(x, y)` iff `(x, y, pivot, ..., pivot)` is in the single relation.
pub fn slice_to_binary(a: &RelationalStructure, pivot: Element) -> Result<Digraph> {
    let l = single_relation(a, 2)?;
    check_element(pivot, a.domain_size(), "pivot")?;
    let edges = a
        .relation(0)
        .tuples()
        .iter()
        .filter(|t| t[2..l].iter().all(|&x| x == pivot))
        .map(|t| (t[0], t[1]));
    Digraph::from_edges(a.domain_size(), edges)
}

/// Lifts a binary instance `(c, f)` to the arity of `target`: adds a fresh
/// element `e = |C| + 1`, replaces each edge `(x, y)` by `(x, y, e, ..., e)`
/// and binds `e` to `pivot`. Solvable against `target` iff `(c, f)` is
/// solvable against [`slice_to_binary`]`(target, pivot)`.
pub fn lift_binary_instance(
    c: &RelationalStructure,
    f: &PartialAssignment,
    target: &RelationalStructure,
    pivot: Element,
) -> Result<ExtInstance> {
    if c.arities() != [2] {
        return Err(Error::SignatureMismatch {
            left: c.arities(),
            right: vec![2],
        });
    }
    let l = single_relation(target, 2)?;
    check_element(pivot, target.domain_size(), "pivot")?;
    f.check_domains(c.domain_size(), target.domain_size())?;
    let e = c.domain_size() + 1;
    let tuples: Vec<Vec<Element>> = c
        .relation(0)
        .tuples()
        .iter()
        .map(|t| {
            let mut u = vec![e; l];
            u[0] = t[0];
            u[1] = t[1];
            u
        })
        .collect();
    let input = RelationalStructure::from_tuples(e, vec![(l, tuples)])?;
    let mut g = f.clone();
    g.bind(e, pivot)?;
    ExtInstance::new(input, target.clone(), g)
}

/// Mixed-radix code of an `m`-tuple over `1..=base`, most significant first;
/// codes run `1..=base^m`.
pub fn encode_tuple(base: u32, tuple: &[Element]) -> Element {
    tuple.iter().fold(0, |acc, &a| acc * base + (a - 1)) + 1
}

/// Inverse of [`encode_tuple`].
pub fn decode_tuple(base: u32, m: usize, code: Element) -> Vec<Element> {
    let mut rest = code - 1;
    let mut out = vec![0; m];
    for slot in out.iter_mut().rev() {
        *slot = rest % base + 1;
        rest /= base;
    }
    out
}

fn paired_domain(base: u32, m: usize) -> Result<u32> {
    base.checked_pow(m as u32)
        .ok_or_else(|| Error::Precondition(format!("domain {base}^{m} does not fit in 32 bits")))
}

/// Groups the first `2m` coordinates of the single `k`-ary relation into a
/// binary relation on `A^m`. For odd `k = 2m + 1` only tuples ending in `e`
/// contribute.
pub fn pair_to_binary(a: &RelationalStructure, e: Element) -> Result<RelationalStructure> {
    let k = single_relation(a, 2)?;
    let m = k / 2;
    let base = a.domain_size();
    let odd = k % 2 == 1;
    if odd {
        check_element(e, base, "e")?;
    }
    let domain = paired_domain(base, m)?;
    let tuples: Vec<Vec<Element>> = a
        .relation(0)
        .tuples()
        .iter()
        .filter(|t| !odd || t[2 * m] == e)
        .map(|t| {
            vec![
                encode_tuple(base, &t[..m]),
                encode_tuple(base, &t[m..2 * m]),
            ]
        })
        .collect();
    RelationalStructure::new(domain, vec![Relation::new(2, domain, tuples)?])
}

/// Splits each element `c` of a binary instance into `(c, 1)..(c, m)`,
/// numbered `(c - 1) m + i`, where `m = k / 2` for the arity `k` of
/// `target`. Each edge `(c, d)` becomes
/// `((c,1), .., (c,m), (d,1), .., (d,m))`; for odd `k` a fresh element
/// `|C| m + 1` bound to `e` is appended to every tuple. A binding `c -> code`
/// in `f` (a code of an `m`-tuple, see [`encode_tuple`]) becomes
/// `(c, i) -> a_i`. Solvable against `target` iff `(c, f)` is solvable
/// against [`pair_to_binary`]`(target, e)`.
pub fn split_binary_instance(
    c: &RelationalStructure,
    f: &PartialAssignment,
    target: &RelationalStructure,
    e: Element,
) -> Result<ExtInstance> {
    if c.arities() != [2] {
        return Err(Error::SignatureMismatch {
            left: c.arities(),
            right: vec![2],
        });
    }
    let k = single_relation(target, 2)?;
    let m = k / 2;
    let odd = k % 2 == 1;
    let base = target.domain_size();
    let paired = paired_domain(base, m)?;
    f.check_domains(c.domain_size(), paired)?;
    if odd {
        check_element(e, base, "e")?;
    }
    let m32 = m as u32;
    let split = |x: Element, i: u32| (x - 1) * m32 + i;
    let hat = c.domain_size() * m32 + 1;
    let domain = if odd { hat } else { hat - 1 };

    let tuples = c
        .relation(0)
        .tuples()
        .iter()
        .map(|t| {
            let mut u: Vec<Element> = (1..=m32).map(|i| split(t[0], i)).collect();
            u.extend((1..=m32).map(|i| split(t[1], i)));
            if odd {
                u.push(hat);
            }
            u
        })
        .collect();
    let input = RelationalStructure::from_tuples(domain, vec![(k, tuples)])?;

    let mut g = PartialAssignment::new();
    for (x, code) in f.iter() {
        for (i, a) in decode_tuple(base, m, code).into_iter().enumerate() {
            g.bind(split(x, i as u32 + 1), a)?;
        }
    }
    if odd {
        g.bind(hat, e)?;
    }
    ExtInstance::new(input, target.clone(), g)
}
