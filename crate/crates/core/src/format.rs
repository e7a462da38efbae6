//! Versioned JSON file formats. All element indices are 1-based.
//!
//! ```text
//! structure: {"format": 1, "domain": n, "relations": [{"arity": k, "tuples": [[..], ..]}]}
//! partial:   {"bindings": [[element, target], ..]}
//! instance:  {"format": 1, "input": <structure>, "target": <structure>, "partial": <partial>}
//! witness:   {"format": 1, "forcing": [..], "image": [a, b, c]}
//! map:       {"format": 1, "image": [..]}
//! outcome:   {"format": 1, "solvable": bool, "witness": [..] | null, "nodes": int}
//! ```
//!
//! `format` may be omitted on nested objects and on input files; when
//! present it must be 1. Every file this module writes carries it.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{ExtInstance, SolveOutcome};
use crate::structure::{Element, PartialAssignment, RelationalStructure, TotalMap};
use crate::subalgebra::SubalgebraWitness;

pub const FORMAT_VERSION: u32 = 1;

fn current() -> u32 {
    FORMAT_VERSION
}

fn check_version(version: u32, what: &str) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "{what}.format: unsupported version {version}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("{what}: {e}")))
}

fn emit<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationFile {
    arity: usize,
    tuples: Vec<Vec<Element>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureFile {
    #[serde(default = "current")]
    format: u32,
    domain: u32,
    relations: Vec<RelationFile>,
}

impl StructureFile {
    fn from_structure(s: &RelationalStructure) -> Self {
        Self {
            format: FORMAT_VERSION,
            domain: s.domain_size(),
            relations: s
                .relations()
                .iter()
                .map(|r| RelationFile {
                    arity: r.arity(),
                    tuples: r.tuples().iter().map(|t| t.to_vec()).collect(),
                })
                .collect(),
        }
    }

    fn into_structure(self, what: &str) -> Result<RelationalStructure> {
        check_version(self.format, what)?;
        if self.domain == 0 {
            return Err(Error::Format(format!("{what}.domain: must be at least 1")));
        }
        for (i, r) in self.relations.iter().enumerate() {
            if r.arity == 0 {
                return Err(Error::Format(format!(
                    "{what}.relations[{i}].arity: must be at least 1"
                )));
            }
        }
        RelationalStructure::from_tuples(
            self.domain,
            self.relations
                .into_iter()
                .map(|r| (r.arity, r.tuples))
                .collect(),
        )
        .map_err(|e| Error::Format(format!("{what}.{e}")))
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialFile {
    bindings: Vec<(Element, Element)>,
}

impl PartialFile {
    fn from_partial(p: &PartialAssignment) -> Self {
        Self {
            bindings: p.iter().collect(),
        }
    }

    fn into_partial(self, what: &str) -> Result<PartialAssignment> {
        PartialAssignment::from_pairs(self.bindings)
            .map_err(|e| Error::Format(format!("{what}.bindings: {e}")))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(default = "current")]
    format: u32,
    input: StructureFile,
    target: StructureFile,
    #[serde(default)]
    partial: PartialFile,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessFile {
    #[serde(default = "current")]
    format: u32,
    forcing: Vec<Element>,
    image: [Element; 3],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    #[serde(default = "current")]
    format: u32,
    image: Vec<Element>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutcomeFile {
    #[serde(default = "current")]
    format: u32,
    solvable: bool,
    witness: Option<Vec<Element>>,
    nodes: u64,
}

pub fn structure_to_json(s: &RelationalStructure) -> String {
    emit(&StructureFile::from_structure(s))
}

pub fn structure_from_json(text: &str) -> Result<RelationalStructure> {
    parse::<StructureFile>(text, "structure")?.into_structure("structure")
}

pub fn partial_to_json(p: &PartialAssignment) -> String {
    emit(&PartialFile::from_partial(p))
}

pub fn partial_from_json(text: &str) -> Result<PartialAssignment> {
    parse::<PartialFile>(text, "partial")?.into_partial("partial")
}

pub fn instance_to_json(instance: &ExtInstance) -> String {
    emit(&InstanceFile {
        format: FORMAT_VERSION,
        input: StructureFile::from_structure(instance.input()),
        target: StructureFile::from_structure(instance.target()),
        partial: PartialFile::from_partial(instance.partial()),
    })
}

pub fn instance_from_json(text: &str) -> Result<ExtInstance> {
    let file: InstanceFile = parse(text, "instance")?;
    check_version(file.format, "instance")?;
    let input = file.input.into_structure("input")?;
    let target = file.target.into_structure("target")?;
    let partial = file.partial.into_partial("partial")?;
    ExtInstance::new(input, target, partial).map_err(|e| Error::Format(format!("instance: {e}")))
}

pub fn witness_to_json(w: &SubalgebraWitness) -> String {
    emit(&WitnessFile {
        format: FORMAT_VERSION,
        forcing: w.forcing.clone(),
        image: w.image,
    })
}

pub fn witness_from_json(text: &str) -> Result<SubalgebraWitness> {
    let file: WitnessFile = parse(text, "witness")?;
    check_version(file.format, "witness")?;
    Ok(SubalgebraWitness {
        forcing: file.forcing,
        image: file.image,
    })
}

pub fn map_to_json(map: &TotalMap) -> String {
    emit(&MapFile {
        format: FORMAT_VERSION,
        image: map.image().to_vec(),
    })
}

pub fn map_from_json(text: &str) -> Result<TotalMap> {
    let file: MapFile = parse(text, "map")?;
    check_version(file.format, "map")?;
    Ok(TotalMap::new(file.image))
}

/// Solver outcome without timing, so output is reproducible.
pub fn outcome_to_json(outcome: &SolveOutcome) -> String {
    emit(&OutcomeFile {
        format: FORMAT_VERSION,
        solvable: outcome.solvable,
        witness: outcome.witness.as_ref().map(|w| w.image().to_vec()),
        nodes: outcome.stats.nodes,
    })
}
