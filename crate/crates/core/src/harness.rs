//! Monte Carlo estimates and closed-form probabilities for the triangle
//! subalgebra search on random digraphs.
//!
//! Every trial draws its digraph from a seed derived from
//! `(master seed, n, trial index)`, so results do not depend on how trials
//! are scheduled across workers.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::random::{gen_random_digraph, gen_random_relation, RandomModel};
use crate::subalgebra::{
    choose_l, closure_search, half_split, is_loopless_triangle, paper_procedure_find,
};

/// Probability that a fixed 3-set induces a loopless triangle: six edges
/// present, three loops absent.
pub fn analytic_triangle_probability(p: f64) -> f64 {
    p.powi(6) * (1.0 - p).powi(3)
}

/// `p^6 (1 - p^3)`: six non-loop edges present and at least one of the three
/// loops absent. Reported next to [`analytic_triangle_probability`] for
/// comparison; it is not the loopless-triangle probability.
pub fn weak_triangle_probability(p: f64) -> f64 {
    p.powi(6) * (1.0 - p.powi(3))
}

fn binomial3(x: u64) -> f64 {
    if x < 3 {
        return 0.0;
    }
    let x = x as f64;
    x * (x - 1.0) * (x - 2.0) / 6.0
}

/// Probability that a fresh chunk of `l` forcing vertices forces exactly
/// three vertices of B, none among the `3m` already used:
/// `C(|B| - 3m, 3) p^(3l) (1 - p^l)^(n - 3)` with `|B| = n - ⌊n/2⌋`.
pub fn per_step_probability(n: u32, m: u32, l: u32, p: f64) -> Result<f64> {
    let b = u64::from(n - half_split(n));
    if b < 3 * u64::from(m) + 3 {
        return Err(Error::Precondition(format!(
            "|B| = {b} must be at least 3m + 3 = {}",
            3 * m + 3
        )));
    }
    let pl = p.powi(l as i32);
    Ok(binomial3(b - 3 * u64::from(m)) * pl.powi(3) * (1.0 - pl).powi(n as i32 - 3))
}

/// `r n^3 p^(3l) (1 - p^l)^n` with `r = (1/2 - 3k/n)^3 / 6`; a lower bound
/// on [`per_step_probability`] for every `m < k`.
pub fn simplified_bound(n: u32, k: u32, l: u32, p: f64) -> Result<f64> {
    let nf = f64::from(n);
    let r = (0.5 - 3.0 * f64::from(k) / nf).powi(3) / 6.0;
    if r <= 0.0 {
        return Err(Error::Precondition(format!(
            "r = {r} is not positive; need n > 6k (n = {n}, k = {k})"
        )));
    }
    let pl = p.powi(l as i32);
    Ok(r * nf.powi(3) * pl.powi(3) * (1.0 - pl).powi(n as i32))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at size `n`.
pub fn derive_seed(master: u64, n: u32, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ u64::from(n)) ^ trial)
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "p must lie in (0, 1), got {p}"
        )))
    }
}

fn triangle_hits(p: f64, trials: u64, seed: u64) -> Result<u64> {
    check_probability(p)?;
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let model = RandomModel::digraph(3, p, derive_seed(seed, 3, t));
            let g = Digraph::from_structure(gen_random_relation(&model)?)?;
            Ok(u64::from(is_loopless_triangle(&g, &[1, 2, 3])?))
        })
        .sum()
}

/// Fraction of `trials` random 3-vertex digraphs (loops allowed) that are
/// loopless triangles.
pub fn estimate_triangle_frequency(p: f64, trials: u64, seed: u64) -> Result<f64> {
    Ok(triangle_hits(p, trials, seed)? as f64 / trials as f64)
}

/// Empirical triangle frequency set against both closed forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleReport {
    pub p: f64,
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub analytic: f64,
    pub weak: f64,
    /// Binomial standard error of the frequency under `analytic`.
    pub sigma: f64,
    pub z_analytic: f64,
    pub z_weak: f64,
}

impl TriangleReport {
    pub fn agrees_with_analytic(&self, sigmas: f64) -> bool {
        self.z_analytic.abs() <= sigmas
    }

    pub fn agrees_with_weak(&self, sigmas: f64) -> bool {
        self.z_weak.abs() <= sigmas
    }
}

impl fmt::Display for TriangleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "triangle frequency at p={}: {}/{} = {:.9}",
            self.p, self.hits, self.trials, self.frequency
        )?;
        writeln!(
            f,
            "  loopless p^6(1-p)^3 = {:.9}  (z = {:+.2})",
            self.analytic, self.z_analytic
        )?;
        writeln!(
            f,
            "  weak     p^6(1-p^3) = {:.9}  (z = {:+.2})",
            self.weak, self.z_weak
        )?;
        if self.agrees_with_analytic(3.0) && !self.agrees_with_weak(3.0) {
            write!(f, "  MISMATCH: data follow p^6(1-p)^3, not p^6(1-p^3)")
        } else {
            write!(f, "  no clear separation between the two expressions")
        }
    }
}

pub fn triangle_report(p: f64, trials: u64, seed: u64) -> Result<TriangleReport> {
    let hits = triangle_hits(p, trials, seed)?;
    let frequency = hits as f64 / trials as f64;
    let analytic = analytic_triangle_probability(p);
    let weak = weak_triangle_probability(p);
    let sigma = (analytic * (1.0 - analytic) / trials as f64).sqrt();
    let sigma_weak = (weak * (1.0 - weak) / trials as f64).sqrt();
    Ok(TriangleReport {
        p,
        trials,
        hits,
        frequency,
        analytic,
        weak,
        sigma,
        z_analytic: (frequency - analytic) / sigma,
        z_weak: (frequency - weak) / sigma_weak,
    })
}

/// Fresh-chunk acceptance counts from [`paper_procedure_find`] runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChunkEstimate {
    pub n: u32,
    pub p: f64,
    pub l: usize,
    pub graphs: u64,
    pub samples: u64,
    pub accepted: u64,
    pub frequency: f64,
    pub expected: f64,
    pub sigma: f64,
}

impl ChunkEstimate {
    pub fn z(&self) -> f64 {
        (self.frequency - self.expected) / self.sigma
    }
}

/// Runs the chunked procedure on `graphs` random digraphs without stopping
/// early and counts chunks whose forced set is three vertices of B (the
/// `m = 0` acceptance event). Chunks of one digraph read disjoint out-edge
/// sets, so every chunk is an independent sample.
pub fn estimate_chunk_acceptance(
    n: u32,
    p: f64,
    l: usize,
    graphs: u64,
    seed: u64,
) -> Result<ChunkEstimate> {
    check_probability(p)?;
    let expected = per_step_probability(n, 0, l as u32, p)?;
    let (samples, accepted) = (0..graphs)
        .into_par_iter()
        .map(|t| {
            let g = gen_random_digraph(n, p, derive_seed(seed, n, t))?;
            let trace = paper_procedure_find(&g, usize::MAX, p, Some(l))?;
            let fresh = trace
                .steps
                .iter()
                .filter(|s| s.is_fresh_candidate())
                .count();
            Ok((trace.steps.len() as u64, fresh as u64))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let frequency = accepted as f64 / samples as f64;
    Ok(ChunkEstimate {
        n,
        p,
        l,
        graphs,
        samples,
        accepted,
        frequency,
        expected,
        sigma: (expected * (1.0 - expected) / samples as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    PaperProcedure,
    Closure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ns: Vec<u32>,
    pub p: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub strategy: Strategy,
    /// Target count of disjoint subalgebras for the chunked procedure.
    pub k: usize,
    /// Chunk length override for the chunked procedure.
    pub l: Option<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be at least 1".into()));
        }
        if self.ns.is_empty() {
            return Err(Error::Precondition("at least one n is required".into()));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 2) {
            return Err(Error::Precondition(format!(
                "every n must be at least 2, got {n}"
            )));
        }
        if self.strategy == Strategy::PaperProcedure && self.k == 0 {
            return Err(Error::Precondition("k must be at least 1".into()));
        }
        Ok(())
    }

    fn chunk_length(&self, n: u32) -> usize {
        self.l.unwrap_or_else(|| choose_l(n, self.p))
    }
}

/// Execution knobs that must not change the report contents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub workers: usize,
    /// Fill the `ms` column with wall time. Off by default so that reports
    /// are byte-reproducible.
    pub record_timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            record_timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: u32,
    pub trial: u64,
    pub seed: u64,
    pub success: bool,
    /// Chunks examined (chunked procedure) or triangles examined (closure).
    pub steps: u64,
    #[serde(skip)]
    pub ms: f64,
}

/// One CSV row: `n,p,trials,successes,frequency,mean_steps,ms`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: u32,
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub frequency: f64,
    pub mean_steps: f64,
    pub ms: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rows: Vec<ReportRow>,
    /// Sorted by `(n, trial)`.
    pub records: Vec<TrialRecord>,
}

impl ExperimentReport {
    pub fn row(&self, n: u32) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    /// Config echo plus per-trial seeds and outcomes.
    pub fn sidecar_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Sidecar<'a> {
            format: u32,
            config: &'a ExperimentConfig,
            trials: &'a [TrialRecord],
        }
        serde_json::to_string_pretty(&Sidecar {
            format: 1,
            config: &self.config,
            trials: &self.records,
        })
        .map_err(|e| Error::Format(e.to_string()))
    }
}

/// Runs the configured finder on fresh random digraphs.
pub fn estimate_finder_success(
    config: &ExperimentConfig,
    options: RunOptions,
) -> Result<ExperimentReport> {
    let p = config.p;
    estimate_finder_success_with(config, options, |n, seed| gen_random_digraph(n, p, seed))
}

/// [`estimate_finder_success`] with a caller-supplied digraph source
/// `generate(n, seed)`.
pub fn estimate_finder_success_with<G>(
    config: &ExperimentConfig,
    options: RunOptions,
    generate: G,
) -> Result<ExperimentReport>
where
    G: Fn(u32, u64) -> Result<Digraph> + Sync,
{
    config.validate()?;
    let jobs: Vec<(u32, u64)> = config
        .ns
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |t| (n, t)))
        .collect();
    let run = |&(n, trial): &(u32, u64)| -> Result<TrialRecord> {
        let started = Instant::now();
        let seed = derive_seed(config.master_seed, n, trial);
        let g = generate(n, seed)?;
        let (success, steps) = match config.strategy {
            Strategy::Closure => {
                let search = closure_search(&g);
                (search.witness.is_some(), search.triangles_examined as u64)
            }
            Strategy::PaperProcedure => {
                let trace =
                    paper_procedure_find(&g, config.k, config.p, Some(config.chunk_length(n)))?;
                (trace.triangle.is_some(), trace.steps.len() as u64)
            }
        };
        Ok(TrialRecord {
            n,
            trial,
            seed,
            success,
            steps,
            ms: started.elapsed().as_secs_f64() * 1e3,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    let mut records = pool.install(|| jobs.par_iter().map(run).collect::<Result<Vec<_>>>())?;
    records.sort_by_key(|r| (r.n, r.trial));

    let rows = config
        .ns
        .iter()
        .map(|&n| {
            let of_n: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
            let successes = of_n.iter().filter(|r| r.success).count() as u64;
            let steps: u64 = of_n.iter().map(|r| r.steps).sum();
            let ms = if options.record_timing {
                of_n.iter().map(|r| r.ms).sum::<f64>().round() as u64
            } else {
                0
            };
            ReportRow {
                n,
                p: config.p,
                trials: config.trials,
                successes,
                frequency: successes as f64 / config.trials as f64,
                mean_steps: steps as f64 / config.trials as f64,
                ms,
            }
        })
        .collect();
    Ok(ExperimentReport {
        config: config.clone(),
        rows,
        records,
    })
}

/// A random digraph rewired so that the chunk `1..=l` forces exactly the
/// first three vertices of B, which form a loopless triangle.
pub fn planted_digraph(n: u32, p: f64, l: usize, seed: u64) -> Result<Digraph> {
    let a = half_split(n);
    if l == 0 || l as u32 > a || n - a < 3 {
        return Err(Error::Precondition(format!(
            "cannot plant a chunk of length {l} in a digraph on {n} vertices"
        )));
    }
    let base = gen_random_digraph(n, p, seed)?;
    let chunk = 1..=l as u32;
    let tri = [a + 1, a + 2, a + 3];
    let mut edges: Vec<(u32, u32)> = base
        .edges()
        .filter(|&(u, v)| !chunk.contains(&u) && !(u == v && tri.contains(&u)))
        .collect();
    for u in chunk {
        edges.extend(tri.map(|v| (u, v)));
    }
    for &u in &tri {
        edges.extend(tri.iter().filter(|&&v| v != u).map(|&v| (u, v)));
    }
    Digraph::from_edges(n, edges)
}
