//! Seeded random relations.
//!
//! Every tuple of `[n]^arity` has a lexicographic index. The inclusion
//! decision for tuple `i` is made from the `i`-th 64-bit output of a ChaCha8
//! stream keyed on the model seed, so a decision depends only on
//! `(seed, i)`: generating sequentially and seeking to an index agree.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::structure::{Element, Relation, RelationalStructure};

/// Upper bound on `n^arity` accepted by [`gen_random_relation`].
pub const TUPLE_SPACE_LIMIT: u64 = 1 << 32;

/// Parameters of a random relation: every tuple over `1..=n` of the given
/// arity is included independently with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomModel {
    pub n: u32,
    pub p: f64,
    pub arity: usize,
    /// Exclude the constant tuples `(a, ..., a)`.
    pub loopless: bool,
    pub seed: u64,
}

impl RandomModel {
    pub fn digraph(n: u32, p: f64, seed: u64) -> Self {
        Self {
            n,
            p,
            arity: 2,
            loopless: false,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidModel("n must be at least 1".into()));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidModel(format!(
                "p must lie strictly between 0 and 1, got {}",
                self.p
            )));
        }
        if self.arity == 0 {
            return Err(Error::InvalidModel("arity must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of tuples in `[n]^arity`, if within [`TUPLE_SPACE_LIMIT`].
    pub fn tuple_space(&self) -> Result<u64> {
        u64::from(self.n)
            .checked_pow(self.arity as u32)
            .filter(|&size| size <= TUPLE_SPACE_LIMIT)
            .ok_or(Error::TupleSpaceTooLarge {
                domain: self.n,
                arity: self.arity,
                limit: TUPLE_SPACE_LIMIT,
            })
    }
}

/// Maps a 64-bit word to a uniform variate in `[0, 1)` with 53 bits.
fn unit_interval(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The uniform variate deciding whether tuple `index` is included.
/// Random access into the same stream [`gen_random_relation`] consumes.
pub fn tuple_variate(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(index) * 2);
    unit_interval(rng.next_u64())
}

/// Decodes a lexicographic tuple index (first coordinate most significant).
pub fn tuple_at(n: u32, arity: usize, mut index: u64, out: &mut [Element]) {
    debug_assert_eq!(out.len(), arity);
    for slot in out.iter_mut().rev() {
        *slot = (index % u64::from(n)) as Element + 1;
        index /= u64::from(n);
    }
}

pub fn gen_random_relation(model: &RandomModel) -> Result<RelationalStructure> {
    model.validate()?;
    let space = model.tuple_space()?;
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let mut tuple = vec![1; model.arity];
    let mut tuples = Vec::new();
    for index in 0..space {
        let u = unit_interval(rng.next_u64());
        tuple_at(model.n, model.arity, index, &mut tuple);
        if model.loopless && tuple.iter().all(|&x| x == tuple[0]) {
            continue;
        }
        if u < model.p {
            tuples.push(tuple.clone().into_boxed_slice());
        }
    }
    RelationalStructure::new(model.n, vec![Relation::from_checked(model.arity, tuples)])
}

/// [`gen_random_relation`] with arity 2, wrapped as a digraph.
pub fn gen_random_digraph(n: u32, p: f64, seed: u64) -> Result<Digraph> {
    Digraph::from_structure(gen_random_relation(&RandomModel::digraph(n, p, seed))?)
}
