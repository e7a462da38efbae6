use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use randext_core::format::{
    instance_from_json, instance_to_json, map_from_json, outcome_to_json, structure_from_json,
    structure_to_json, witness_from_json, witness_to_json,
};
use randext_core::harness::{
    estimate_chunk_acceptance, estimate_finder_success, estimate_finder_success_with,
    per_step_probability, planted_digraph, simplified_bound, triangle_report,
};
use randext_core::reductions::{
    lift_binary_instance, pair_to_binary, slice_to_binary, split_binary_instance, three_col_to_ext,
};
use randext_core::subalgebra::{choose_l, closure_find_triangle_subalgebra, paper_procedure_find};
use randext_core::{
    add_constant_relations, brute_force_ext, dimacs, gen_random_relation, is_extension,
    is_homomorphism, solve_ext, Digraph, ExperimentConfig, Graph, RandomModel, RelationalStructure,
    RunOptions, Strategy,
};

use crate::{
    Command, ExperimentKind, FindArgs, GenArgs, Output, ReducePass, SolveArgs, VerifyTarget,
};

const YES: u8 = 0;
const NO: u8 = 1;

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen(args) => gen(args),
        Command::Solve(args) => solve(args),
        Command::Find(args) => find(args),
        Command::Reduce { pass } => reduce(pass),
        Command::Experiment { kind } => experiment(kind),
        Command::Verify { what } => verify(what),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_structure(path: &Path) -> Result<RelationalStructure> {
    structure_from_json(&read(path)?).with_context(|| path.display().to_string())
}

fn load_digraph(path: &Path) -> Result<Digraph> {
    Digraph::from_structure(load_structure(path)?).with_context(|| path.display().to_string())
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = read(path)?;
    let graph = if text.trim_start().starts_with('{') {
        structure_from_json(&text).and_then(|s| Graph::from_structure(&s))
    } else {
        dimacs::parse(&text)
    };
    graph.with_context(|| path.display().to_string())
}

fn write(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(args: GenArgs) -> Result<ExitCode> {
    let model = RandomModel {
        n: args.n,
        p: args.p,
        arity: args.arity,
        loopless: args.loopless,
        seed: args.seed,
    };
    let mut s = gen_random_relation(&model)?;
    if args.constants {
        s = add_constant_relations(&s);
    }
    write(&args.output, &structure_to_json(&s))?;
    Ok(ExitCode::SUCCESS)
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let instance = instance_from_json(&read(&args.instance)?)
        .with_context(|| args.instance.display().to_string())?;
    let outcome = if args.brute_force {
        brute_force_ext(&instance, args.cap)?
    } else {
        solve_ext(&instance)
    };
    write(&args.output, &outcome_to_json(&outcome))?;
    Ok(ExitCode::from(if outcome.solvable { YES } else { NO }))
}

fn find(args: FindArgs) -> Result<ExitCode> {
    let g = load_digraph(&args.digraph)?;
    let witness = match args.strategy.into() {
        Strategy::Closure => closure_find_triangle_subalgebra(&g),
        Strategy::PaperProcedure => {
            let p = match (args.p, args.l) {
                (Some(p), _) => p,
                (None, Some(_)) => 0.5,
                (None, None) => bail!("--p or --l is required for the paper-procedure strategy"),
            };
            let trace = paper_procedure_find(&g, args.k, p, args.l)?;
            if let Some(path) = &args.trace {
                let json = serde_json_pretty(&trace)?;
                fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
            }
            trace.witness()
        }
    };
    match witness {
        Some(w) => {
            write(&args.output, &witness_to_json(&w))?;
            Ok(ExitCode::from(YES))
        }
        None => {
            write(&args.output, "none\n")?;
            Ok(ExitCode::from(NO))
        }
    }
}

fn serde_json_pretty<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn reduce(pass: ReducePass) -> Result<ExitCode> {
    let (text, output) = match pass {
        ReducePass::ThreeColToExt {
            graph,
            target,
            witness,
            output,
        } => {
            let h = load_graph(&graph)?;
            let g = load_digraph(&target)?;
            let w = witness_from_json(&read(&witness)?)
                .with_context(|| witness.display().to_string())?;
            (instance_to_json(&three_col_to_ext(&h, &g, &w)?), output)
        }
        ReducePass::Slice {
            structure,
            pivot,
            output,
        } => {
            let a = load_structure(&structure)?;
            (
                structure_to_json(slice_to_binary(&a, pivot)?.as_structure()),
                output,
            )
        }
        ReducePass::Lift {
            instance,
            target,
            pivot,
            output,
        } => {
            let (c, f) = load_binary_instance(&instance)?;
            let a = load_structure(&target)?;
            (
                instance_to_json(&lift_binary_instance(&c, &f, &a, pivot)?),
                output,
            )
        }
        ReducePass::Pair {
            structure,
            e,
            output,
        } => {
            let a = load_structure(&structure)?;
            (structure_to_json(&pair_to_binary(&a, e)?), output)
        }
        ReducePass::Split {
            instance,
            target,
            e,
            output,
        } => {
            let (c, f) = load_binary_instance(&instance)?;
            let a = load_structure(&target)?;
            (
                instance_to_json(&split_binary_instance(&c, &f, &a, e)?),
                output,
            )
        }
    };
    write(&output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn load_binary_instance(
    path: &Path,
) -> Result<(RelationalStructure, randext_core::PartialAssignment)> {
    let (input, _, partial) = instance_from_json(&read(path)?)
        .with_context(|| path.display().to_string())?
        .into_parts();
    Ok((input, partial))
}

fn experiment(kind: ExperimentKind) -> Result<ExitCode> {
    match kind {
        ExperimentKind::Finder {
            n,
            p,
            trials,
            seed,
            strategy,
            k,
            l,
            planted,
            workers,
            timing,
            out,
            sidecar,
        } => {
            let config = ExperimentConfig {
                ns: n,
                p,
                trials,
                master_seed: seed,
                strategy: strategy.into(),
                k,
                l,
            };
            let options = RunOptions {
                workers,
                record_timing: timing,
            };
            let report = if planted {
                estimate_finder_success_with(&config, options, |n, seed| {
                    planted_digraph(n, p, l.unwrap_or_else(|| choose_l(n, p)), seed)
                })?
            } else {
                estimate_finder_success(&config, options)?
            };
            let sidecar = sidecar.unwrap_or_else(|| {
                let mut name = out.clone().into_os_string();
                name.push(".config.json");
                PathBuf::from(name)
            });
            fs::write(&out, report.to_csv()?)
                .with_context(|| format!("writing {}", out.display()))?;
            fs::write(&sidecar, report.sidecar_json()? + "\n")
                .with_context(|| format!("writing {}", sidecar.display()))?;
            for row in &report.rows {
                eprintln!(
                    "n={} successes={}/{} frequency={}",
                    row.n, row.successes, row.trials, row.frequency
                );
            }
        }
        ExperimentKind::Triangle { p, trials, seed } => {
            let report = triangle_report(p, trials, seed)?;
            eprintln!("{report}");
            print!("{}", serde_json_pretty(&report)?);
        }
        ExperimentKind::Chunk {
            n,
            p,
            l,
            graphs,
            seed,
        } => {
            let l = l.unwrap_or_else(|| choose_l(n, p));
            let estimate = estimate_chunk_acceptance(n, p, l, graphs, seed)?;
            eprintln!(
                "accepted {}/{} fresh chunks = {:.6}, expected {:.6} (z = {:+.2})",
                estimate.accepted,
                estimate.samples,
                estimate.frequency,
                estimate.expected,
                estimate.z()
            );
            print!("{}", serde_json_pretty(&estimate)?);
        }
        ExperimentKind::Bounds { n, m, k, l, p } => {
            if !(p > 0.0 && p < 1.0) {
                bail!("--p must lie in (0, 1), got {p}");
            }
            let l = l.unwrap_or_else(|| choose_l(n, p) as u32);
            let q = per_step_probability(n, m, l, p)?;
            let bound = simplified_bound(n, k, l, p)?;
            print!(
                "{}",
                serde_json_pretty(&serde_json::json!({
                    "n": n, "m": m, "k": k, "l": l, "p": p,
                    "per_step_probability": q,
                    "simplified_bound": bound,
                }))?
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(what: VerifyTarget) -> Result<ExitCode> {
    match what {
        VerifyTarget::Witness { digraph, witness } => {
            let g = load_digraph(&digraph)?;
            let w = witness_from_json(&read(&witness)?)
                .with_context(|| witness.display().to_string())?;
            match w.verify(&g) {
                Ok(()) => {
                    println!("valid");
                    Ok(ExitCode::from(YES))
                }
                Err(randext_core::Error::InvalidWitness(why)) => {
                    eprintln!("invalid witness: {why}");
                    Ok(ExitCode::from(NO))
                }
                Err(other) => Err(anyhow!(other)),
            }
        }
        VerifyTarget::Map {
            source,
            target,
            map,
            partial,
        } => {
            let source = load_structure(&source)?;
            let target = load_structure(&target)?;
            let m = map_from_json(&read(&map)?).with_context(|| map.display().to_string())?;
            if !is_homomorphism(&m, &source, &target)? {
                eprintln!("not a homomorphism");
                return Ok(ExitCode::from(NO));
            }
            if let Some(path) = partial {
                let f = randext_core::format::partial_from_json(&read(&path)?)
                    .with_context(|| path.display().to_string())?;
                if !is_extension(&m, &f)? {
                    eprintln!("map does not extend the partial assignment");
                    return Ok(ExitCode::from(NO));
                }
            }
            println!("valid");
            Ok(ExitCode::from(YES))
        }
    }
}
