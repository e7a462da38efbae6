//! Finite relational structures and maps between them.
//!
//! Domain elements are the integers `1..=n`. Relations are positional: the
//! `i`-th relation of a structure corresponds to the `i`-th slot of its
//! [`Signature`]. Tuples are kept sorted and deduplicated alongside a hash
//! index for membership queries.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// A domain element, 1-based.
pub type Element = u32;

/// The similarity type of a structure: one arity per relation symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature(Vec<usize>);

impl Signature {
    pub fn new(arities: Vec<usize>) -> Result<Self> {
        if arities.is_empty() || arities.contains(&0) {
            return Err(Error::InvalidSignature(arities));
        }
        Ok(Self(arities))
    }

    /// The signature of a digraph: a single binary relation.
    pub fn digraph() -> Self {
        Self(vec![2])
    }

    pub fn arities(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A set of tuples of a fixed arity over `1..=domain`.
#[derive(Clone)]
pub struct Relation {
    arity: usize,
    tuples: Vec<Box<[Element]>>,
    members: HashSet<Box<[Element]>>,
}

impl Relation {
    /// Builds a relation, validating every entry against `1..=domain`.
    /// Duplicate tuples are collapsed.
    pub fn new<I, T>(arity: usize, domain: u32, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<Box<[Element]>>,
    {
        if arity == 0 {
            return Err(Error::InvalidSignature(vec![0]));
        }
        let mut collected = Vec::new();
        for (i, tuple) in tuples.into_iter().enumerate() {
            let tuple: Box<[Element]> = tuple.into();
            if tuple.len() != arity {
                return Err(Error::ArityMismatch {
                    context: format!("tuples[{i}]"),
                    expected: arity,
                    found: tuple.len(),
                });
            }
            if let Some(&bad) = tuple.iter().find(|&&x| x == 0 || x > domain) {
                return Err(Error::ElementOutOfRange {
                    context: format!("tuples[{i}]"),
                    element: bad,
                    domain,
                });
            }
            collected.push(tuple);
        }
        Ok(Self::from_checked(arity, collected))
    }

    /// Skips validation; the caller guarantees arity and range.
    pub(crate) fn from_checked(arity: usize, mut tuples: Vec<Box<[Element]>>) -> Self {
        tuples.sort_unstable();
        tuples.dedup();
        let members = tuples.iter().cloned().collect();
        Self {
            arity,
            tuples,
            members,
        }
    }

    pub fn empty(arity: usize) -> Self {
        Self::from_checked(arity, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Tuples in lexicographic order.
    pub fn tuples(&self) -> &[Box<[Element]>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[Element]) -> bool {
        self.members.contains(tuple)
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.tuples == other.tuples
    }
}

impl Eq for Relation {}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("arity", &self.arity)
            .field("tuples", &self.tuples)
            .finish()
    }
}

/// A finite domain `1..=n` with an ordered family of relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalStructure {
    domain: u32,
    relations: Vec<Relation>,
}

impl RelationalStructure {
    pub fn new(domain: u32, relations: Vec<Relation>) -> Result<Self> {
        if domain == 0 {
            return Err(Error::EmptyDomain);
        }
        for (i, rel) in relations.iter().enumerate() {
            for tuple in rel.tuples() {
                if let Some(&bad) = tuple.iter().find(|&&x| x > domain) {
                    return Err(Error::ElementOutOfRange {
                        context: format!("relations[{i}]"),
                        element: bad,
                        domain,
                    });
                }
            }
        }
        Ok(Self { domain, relations })
    }

    /// Convenience constructor from `(arity, tuples)` pairs.
    pub fn from_tuples(domain: u32, relations: Vec<(usize, Vec<Vec<Element>>)>) -> Result<Self> {
        let relations = relations
            .into_iter()
            .enumerate()
            .map(|(i, (arity, tuples))| {
                Relation::new(arity, domain, tuples).map_err(|e| prefix_context(e, i))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, relations)
    }

    pub fn domain_size(&self) -> u32 {
        self.domain
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        1..=self.domain
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, index: usize) -> &Relation {
        &self.relations[index]
    }

    pub fn arities(&self) -> Vec<usize> {
        self.relations.iter().map(Relation::arity).collect()
    }

    /// The signature, or an error when the structure has no relations.
    pub fn signature(&self) -> Result<Signature> {
        Signature::new(self.arities())
    }

    pub fn same_signature(&self, other: &Self) -> Result<()> {
        let (left, right) = (self.arities(), other.arities());
        if left != right {
            return Err(Error::SignatureMismatch { left, right });
        }
        Ok(())
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(Relation::len).sum()
    }
}

fn prefix_context(err: Error, relation: usize) -> Error {
    match err {
        Error::ArityMismatch {
            context,
            expected,
            found,
        } => Error::ArityMismatch {
            context: format!("relations[{relation}].{context}"),
            expected,
            found,
        },
        Error::ElementOutOfRange {
            context,
            element,
            domain,
        } => Error::ElementOutOfRange {
            context: format!("relations[{relation}].{context}"),
            element,
            domain,
        },
        other => other,
    }
}

/// A partial map from input elements to target elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    bindings: BTreeMap<Element, Element>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from pairs, rejecting an element bound to two different targets.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Element, Element)>,
    {
        let mut out = Self::new();
        for (x, t) in pairs {
            out.bind(x, t)?;
        }
        Ok(out)
    }

    pub fn bind(&mut self, element: Element, target: Element) -> Result<()> {
        match self.bindings.insert(element, target) {
            Some(prev) if prev != target => {
                self.bindings.insert(element, prev);
                Err(Error::ConflictingBinding {
                    element,
                    first: prev,
                    second: target,
                })
            }
            _ => Ok(()),
        }
    }

    pub fn get(&self, element: Element) -> Option<Element> {
        self.bindings.get(&element).copied()
    }

    /// Bindings in increasing element order.
    pub fn iter(&self) -> impl Iterator<Item = (Element, Element)> + '_ {
        self.bindings.iter().map(|(&x, &t)| (x, t))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Checks every binding against the input and target domains.
    pub fn check_domains(&self, input_domain: u32, target_domain: u32) -> Result<()> {
        for (x, t) in self.iter() {
            if x == 0 || x > input_domain {
                return Err(Error::ElementOutOfRange {
                    context: "bindings (input side)".into(),
                    element: x,
                    domain: input_domain,
                });
            }
            if t == 0 || t > target_domain {
                return Err(Error::ElementOutOfRange {
                    context: format!("bindings ({x} -> target)"),
                    element: t,
                    domain: target_domain,
                });
            }
        }
        Ok(())
    }
}

/// A total map: `image[x - 1]` is the image of element `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TotalMap(Vec<Element>);

impl TotalMap {
    pub fn new(image: Vec<Element>) -> Self {
        Self(image)
    }

    pub fn identity(n: u32) -> Self {
        Self((1..=n).collect())
    }

    pub fn constant(n: u32, value: Element) -> Self {
        Self(vec![value; n as usize])
    }

    pub fn apply(&self, x: Element) -> Element {
        self.0[x as usize - 1]
    }

    pub fn image(&self) -> &[Element] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn then(&self, other: &TotalMap) -> TotalMap {
        TotalMap(self.0.iter().map(|&x| other.apply(x)).collect())
    }

    pub fn into_inner(self) -> Vec<Element> {
        self.0
    }
}

/// True iff `map` sends every tuple of every source relation into the
/// corresponding target relation.
pub fn is_homomorphism(
    map: &TotalMap,
    source: &RelationalStructure,
    target: &RelationalStructure,
) -> Result<bool> {
    source.same_signature(target)?;
    if map.len() != source.domain_size() as usize {
        return Err(Error::MapLength {
            expected: source.domain_size() as usize,
            found: map.len(),
        });
    }
    if let Some(&bad) = map
        .image()
        .iter()
        .find(|&&t| t == 0 || t > target.domain_size())
    {
        return Err(Error::ElementOutOfRange {
            context: "map image".into(),
            element: bad,
            domain: target.domain_size(),
        });
    }
    let mut buf = Vec::new();
    for (src, dst) in source.relations().iter().zip(target.relations()) {
        for tuple in src.tuples() {
            buf.clear();
            buf.extend(tuple.iter().map(|&x| map.apply(x)));
            if !dst.contains(&buf) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff `map` agrees with every binding of `partial`.
pub fn is_extension(map: &TotalMap, partial: &PartialAssignment) -> Result<bool> {
    for (x, t) in partial.iter() {
        if x == 0 || x as usize > map.len() {
            return Err(Error::ElementOutOfRange {
                context: "partial assignment".into(),
                element: x,
                domain: map.len() as u32,
            });
        }
        if map.apply(x) != t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Appends the constant relation `{(a)}` for every domain element `a`.
pub fn add_constant_relations(target: &RelationalStructure) -> RelationalStructure {
    let mut relations = target.relations.clone();
    relations.extend(
        target
            .elements()
            .map(|a| Relation::from_checked(1, vec![vec![a].into_boxed_slice()])),
    );
    RelationalStructure {
        domain: target.domain,
        relations,
    }
}
