//! Homomorphism extension (EXT) and CSP decision.
//!
//! [`solve_ext`] is a backtracking search with forward checking: unassigned
//! input elements are chosen by smallest remaining candidate set (ties to the
//! lowest element) and values are tried in increasing order, so the result is
//! a deterministic function of the instance. [`brute_force_ext`] enumerates
//! every extension and serves as the test oracle.

use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::structure::{Element, PartialAssignment, RelationalStructure, TotalMap};

/// Default bound on the number of maps [`brute_force_ext`] will enumerate.
pub const BRUTE_FORCE_CAP: u64 = 10_000_000;

/// An input structure, a target of the same signature, and a partial map
/// from the input into the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtInstance {
    input: RelationalStructure,
    target: RelationalStructure,
    partial: PartialAssignment,
}

impl ExtInstance {
    pub fn new(
        input: RelationalStructure,
        target: RelationalStructure,
        partial: PartialAssignment,
    ) -> Result<Self> {
        input.same_signature(&target)?;
        partial.check_domains(input.domain_size(), target.domain_size())?;
        Ok(Self {
            input,
            target,
            partial,
        })
    }

    pub fn input(&self) -> &RelationalStructure {
        &self.input
    }

    pub fn target(&self) -> &RelationalStructure {
        &self.target
    }

    pub fn partial(&self) -> &PartialAssignment {
        &self.partial
    }

    pub fn into_parts(self) -> (RelationalStructure, RelationalStructure, PartialAssignment) {
        (self.input, self.target, self.partial)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Search nodes expanded (value trials for [`solve_ext`], maps
    /// enumerated for [`brute_force_ext`]).
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub solvable: bool,
    pub witness: Option<TotalMap>,
    pub stats: SearchStats,
}

impl SolveOutcome {
    fn new(witness: Option<TotalMap>, nodes: u64, started: Instant) -> Self {
        Self {
            solvable: witness.is_some(),
            witness,
            stats: SearchStats {
                nodes,
                elapsed: started.elapsed(),
            },
        }
    }
}

/// Decides whether the partial map extends to a homomorphism, returning the
/// first extension in search order when it does.
pub fn solve_ext(instance: &ExtInstance) -> SolveOutcome {
    let started = Instant::now();
    let mut search = Search::new(instance);
    let witness = search.run();
    SolveOutcome::new(witness, search.nodes, started)
}

/// CSP is EXT with the empty partial map.
pub fn decide_csp(
    input: &RelationalStructure,
    target: &RelationalStructure,
) -> Result<SolveOutcome> {
    let instance = ExtInstance::new(input.clone(), target.clone(), PartialAssignment::new())?;
    Ok(solve_ext(&instance))
}

struct Search<'a> {
    instance: &'a ExtInstance,
    /// `(relation, tuple)` pairs mentioning each input element (0-based).
    incidence: Vec<Vec<(usize, usize)>>,
    /// 0 marks an unassigned element.
    assignment: Vec<Element>,
    nodes: u64,
    scratch: Vec<Element>,
}

enum Unassigned {
    None,
    One(Element),
    Many,
}

impl<'a> Search<'a> {
    fn new(instance: &'a ExtInstance) -> Self {
        let n = instance.input.domain_size() as usize;
        let mut incidence = vec![Vec::new(); n];
        for (r, rel) in instance.input.relations().iter().enumerate() {
            for (t, tuple) in rel.tuples().iter().enumerate() {
                let mut seen: Vec<Element> = tuple.to_vec();
                seen.sort_unstable();
                seen.dedup();
                for x in seen {
                    incidence[x as usize - 1].push((r, t));
                }
            }
        }
        Self {
            instance,
            incidence,
            assignment: vec![0; n],
            nodes: 0,
            scratch: Vec::new(),
        }
    }

    fn run(&mut self) -> Option<TotalMap> {
        let slots = self.instance.target.domain_size() as usize + 1;
        let mut full = FixedBitSet::with_capacity(slots);
        full.insert_range(1..slots);
        let mut domains = vec![full; self.assignment.len()];
        for (x, t) in self.instance.partial.iter() {
            self.assignment[x as usize - 1] = t;
            let d = &mut domains[x as usize - 1];
            d.clear();
            d.insert(t as usize);
        }
        for r in 0..self.instance.input.relations().len() {
            for t in 0..self.instance.input.relation(r).len() {
                if !self.check_tuple(r, t, &mut domains) {
                    return None;
                }
            }
        }
        if self.backtrack(&domains) {
            Some(TotalMap::new(self.assignment.clone()))
        } else {
            None
        }
    }

    fn unassigned_in(&self, r: usize, t: usize) -> Unassigned {
        let tuple = &self.instance.input.relation(r).tuples()[t];
        let mut found = Unassigned::None;
        for &x in tuple.iter() {
            if self.assignment[x as usize - 1] == 0 {
                match found {
                    Unassigned::None => found = Unassigned::One(x),
                    Unassigned::One(y) if y != x => return Unassigned::Many,
                    _ => {}
                }
            }
        }
        found
    }

    /// Image of tuple `(r, t)` with `free` (if any) sent to `value`.
    fn image_is_member(&mut self, r: usize, t: usize, free: Element, value: Element) -> bool {
        let tuple = &self.instance.input.relation(r).tuples()[t];
        self.scratch.clear();
        for &x in tuple.iter() {
            let image = if x == free {
                value
            } else {
                self.assignment[x as usize - 1]
            };
            self.scratch.push(image);
        }
        self.instance.target.relation(r).contains(&self.scratch)
    }

    /// Forward check of one input tuple: a fully assigned tuple must map into
    /// the target; a tuple with one unassigned element prunes its candidates.
    /// Returns false on a wipe-out.
    fn check_tuple(&mut self, r: usize, t: usize, domains: &mut [FixedBitSet]) -> bool {
        match self.unassigned_in(r, t) {
            Unassigned::None => self.image_is_member(r, t, 0, 0),
            Unassigned::One(y) => {
                let idx = y as usize - 1;
                let candidates: Vec<usize> = domains[idx].ones().collect();
                for v in candidates {
                    if !self.image_is_member(r, t, y, v as Element) {
                        domains[idx].remove(v);
                    }
                }
                !domains[idx].is_clear()
            }
            Unassigned::Many => true,
        }
    }

    fn select(&self, domains: &[FixedBitSet]) -> Option<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == 0)
            .min_by_key(|&i| (domains[i].count_ones(..), i))
    }

    fn backtrack(&mut self, domains: &[FixedBitSet]) -> bool {
        let Some(var) = self.select(domains) else {
            return true;
        };
        for value in domains[var].ones() {
            self.nodes += 1;
            self.assignment[var] = value as Element;
            let mut next = domains.to_vec();
            next[var].clear();
            next[var].insert(value);
            let mut consistent = true;
            for k in 0..self.incidence[var].len() {
                let (r, t) = self.incidence[var][k];
                if !self.check_tuple(r, t, &mut next) {
                    consistent = false;
                    break;
                }
            }
            if consistent && self.backtrack(&next) {
                return true;
            }
        }
        self.assignment[var] = 0;
        false
    }
}

/// Enumerates every total map extending the partial assignment, in
/// lexicographic order of the unbound elements' images. Refuses instances
/// with more than `cap` candidate maps.
pub fn brute_force_ext(instance: &ExtInstance, cap: u64) -> Result<SolveOutcome> {
    let started = Instant::now();
    let n = instance.input.domain_size();
    let m = instance.target.domain_size();
    let unbound: Vec<usize> = (1..=n)
        .filter(|&x| instance.partial.get(x).is_none())
        .map(|x| x as usize - 1)
        .collect();
    let space = u64::from(m)
        .checked_pow(unbound.len() as u32)
        .filter(|&s| s <= cap)
        .ok_or_else(|| Error::TooLarge {
            space: format!("{m}^{}", unbound.len()),
            cap,
        })?;

    let mut image = vec![1; n as usize];
    for (x, t) in instance.partial.iter() {
        image[x as usize - 1] = t;
    }
    let mut witness = None;
    let mut buf = Vec::new();
    for _ in 0..space {
        if witness.is_none() && maps_into(instance, &image, &mut buf) {
            witness = Some(TotalMap::new(image.clone()));
        }
        // Odometer step; the last unbound element varies fastest.
        for &slot in unbound.iter().rev() {
            if image[slot] < m {
                image[slot] += 1;
                break;
            }
            image[slot] = 1;
        }
    }
    Ok(SolveOutcome::new(witness, space, started))
}

fn maps_into(instance: &ExtInstance, image: &[Element], buf: &mut Vec<Element>) -> bool {
    instance
        .input
        .relations()
        .iter()
        .zip(instance.target.relations())
        .all(|(src, dst)| {
            src.tuples().iter().all(|tuple| {
                buf.clear();
                buf.extend(tuple.iter().map(|&x| image[x as usize - 1]));
                dst.contains(buf)
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{is_extension, is_homomorphism};

    fn symmetric(n: u32, edges: &[(u32, u32)]) -> RelationalStructure {
        let tuples = edges
            .iter()
            .flat_map(|&(a, b)| [vec![a, b], vec![b, a]])
            .collect();
        RelationalStructure::from_tuples(n, vec![(2, tuples)]).unwrap()
    }

    fn k(n: u32) -> RelationalStructure {
        let edges: Vec<_> = (1..=n)
            .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
            .collect();
        symmetric(n, &edges)
    }

    fn c5() -> RelationalStructure {
        symmetric(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])
    }

    fn check(instance: &ExtInstance) -> bool {
        let fast = solve_ext(instance);
        let slow = brute_force_ext(instance, BRUTE_FORCE_CAP).unwrap();
        assert_eq!(fast.solvable, slow.solvable);
        if let Some(w) = &fast.witness {
            assert!(is_homomorphism(w, &instance.input, &instance.target).unwrap());
            assert!(is_extension(w, &instance.partial).unwrap());
        }
        fast.solvable
    }

    #[test]
    fn five_cycle_is_three_colorable() {
        let inst = ExtInstance::new(c5(), k(3), PartialAssignment::new()).unwrap();
        assert!(check(&inst));
    }

    #[test]
    fn k4_is_not_three_colorable() {
        let inst = ExtInstance::new(k(4), k(3), PartialAssignment::new()).unwrap();
        assert!(!check(&inst));
        assert!(!decide_csp(&k(4), &k(3)).unwrap().solvable);
    }

    #[test]
    fn forced_binding_without_out_edge() {
        let input = RelationalStructure::from_tuples(2, vec![(2, vec![vec![1, 2]])]).unwrap();
        let target = RelationalStructure::from_tuples(2, vec![(2, vec![vec![1, 2]])]).unwrap();
        let partial = PartialAssignment::from_pairs([(1, 2)]).unwrap();
        let inst = ExtInstance::new(input, target, partial).unwrap();
        assert!(!check(&inst));
    }

    #[test]
    fn loop_admits_constant_map() {
        let target =
            RelationalStructure::from_tuples(3, vec![(2, vec![vec![2, 2], vec![1, 3]])]).unwrap();
        let out = decide_csp(&k(4), &target).unwrap();
        assert!(out.solvable);
        assert!(is_homomorphism(out.witness.as_ref().unwrap(), &k(4), &target).unwrap());
    }

    #[test]
    fn input_without_tuples() {
        let input = RelationalStructure::from_tuples(3, vec![(2, vec![])]).unwrap();
        let out = decide_csp(&input, &k(3)).unwrap();
        assert!(out.solvable);
        assert_eq!(out.witness.unwrap().image(), &[1, 1, 1]);
    }

    #[test]
    fn repeated_coordinates_constrain_one_element() {
        // (x, x) must land on a loop; the target's only loop is at 3.
        let input = RelationalStructure::from_tuples(1, vec![(2, vec![vec![1, 1]])]).unwrap();
        let target =
            RelationalStructure::from_tuples(3, vec![(2, vec![vec![1, 2], vec![3, 3]])]).unwrap();
        let out = decide_csp(&input, &target).unwrap();
        assert_eq!(out.witness.unwrap().image(), &[3]);
    }

    #[test]
    fn bound_element_violating_unary_constraint() {
        let input = RelationalStructure::from_tuples(2, vec![(1, vec![vec![1]])]).unwrap();
        let target = RelationalStructure::from_tuples(2, vec![(1, vec![vec![2]])]).unwrap();
        let partial = PartialAssignment::from_pairs([(1, 1)]).unwrap();
        let inst = ExtInstance::new(input, target, partial).unwrap();
        assert!(!check(&inst));
    }

    #[test]
    fn brute_force_counts_maps() {
        let input = RelationalStructure::from_tuples(1, vec![(1, vec![])]).unwrap();
        let target = RelationalStructure::from_tuples(2, vec![(1, vec![])]).unwrap();
        let inst = ExtInstance::new(input, target, PartialAssignment::new()).unwrap();
        let out = brute_force_ext(&inst, BRUTE_FORCE_CAP).unwrap();
        assert!(out.solvable);
        assert_eq!(out.stats.nodes, 2);
    }

    #[test]
    fn brute_force_cap() {
        let input = RelationalStructure::from_tuples(20, vec![(2, vec![])]).unwrap();
        let target = RelationalStructure::from_tuples(10, vec![(2, vec![])]).unwrap();
        let inst = ExtInstance::new(input, target, PartialAssignment::new()).unwrap();
        assert!(matches!(
            brute_force_ext(&inst, BRUTE_FORCE_CAP),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn instance_validation() {
        let unary = RelationalStructure::from_tuples(3, vec![(1, vec![])]).unwrap();
        assert!(matches!(
            ExtInstance::new(k(3), unary, PartialAssignment::new()),
            Err(Error::SignatureMismatch { .. })
        ));
        let bad = PartialAssignment::from_pairs([(1, 4)]).unwrap();
        assert!(ExtInstance::new(k(3), k(3), bad).is_err());
        let bad = PartialAssignment::from_pairs([(4, 1)]).unwrap();
        assert!(ExtInstance::new(k(3), k(3), bad).is_err());
    }

    #[test]
    fn deterministic_witness() {
        let inst = ExtInstance::new(c5(), k(3), PartialAssignment::new()).unwrap();
        let a = solve_ext(&inst);
        let b = solve_ext(&inst);
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.stats.nodes, b.stats.nodes);
    }
}
