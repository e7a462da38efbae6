//! Fixed inputs shared by the benchmarks.

use randext_core::{
    gen_random_digraph, gen_random_relation, Digraph, ExtInstance, PartialAssignment, RandomModel,
};

/// Random digraph CSP: `input_n` vertices at density `input_p` into a
/// `target_n`-vertex loopless target at density `target_p`.
pub fn digraph_csp(
    input_n: u32,
    input_p: f64,
    target_n: u32,
    target_p: f64,
    seed: u64,
) -> ExtInstance {
    let input = gen_random_relation(&RandomModel {
        loopless: true,
        ..RandomModel::digraph(input_n, input_p, seed)
    })
    .unwrap();
    let target = gen_random_relation(&RandomModel {
        loopless: true,
        ..RandomModel::digraph(target_n, target_p, !seed)
    })
    .unwrap();
    ExtInstance::new(input, target, PartialAssignment::new()).unwrap()
}

pub fn digraph(n: u32, seed: u64) -> Digraph {
    gen_random_digraph(n, 0.5, seed).unwrap()
}
