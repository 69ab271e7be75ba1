//! JSON file formats: instances, pairs, weights, sequences, bijections.
//! Rationals cross the boundary as `"p/q"` strings to stay exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use mex_core::instances::{
    C3Spec, ElementarySplitInstance, GraphInstance, PartitionInstance, SpikeInstance,
    SplitDirectSum, UniformComponent, UniformInstance, WheelInstance,
};
use mex_core::matroid::MatroidOracle;
use mex_core::pairs::{BasisPair, ExchangeSequence, SequenceReport};
use mex_core::weight::{format_weight, parse_weight, WeightFn};
use mex_core::{ElemSet, Element};

use crate::CliError;

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InstanceFile {
    Graph {
        vertices: usize,
        edges: Vec<(u32, u32)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Wheel {
        n: usize,
    },
    Uniform {
        ground_size: usize,
        rank: usize,
    },
    Partition {
        parts: Vec<Vec<usize>>,
        capacities: Vec<usize>,
    },
    ElementarySplit {
        ground_size: usize,
        rank: usize,
        hyperedges: Vec<Vec<usize>>,
        bounds: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    SplitSum {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        elementary: Option<ElementaryPart>,
        uniforms: Vec<UniformPart>,
    },
    Spike {
        r: usize,
        c3: C3File,
    },
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ElementaryPart {
    pub elements: Vec<usize>,
    pub rank: usize,
    pub hyperedges: Vec<Vec<usize>>,
    pub bounds: Vec<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct UniformPart {
    pub elements: Vec<usize>,
    pub rank: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum C3File {
    Free,
    Binary,
    Explicit { members: Vec<Vec<String>> },
}

pub enum Instance {
    Graph(GraphInstance),
    Wheel(WheelInstance),
    Uniform(UniformInstance),
    Partition(PartitionInstance),
    ElementarySplit(ElementarySplitInstance),
    SplitSum(SplitDirectSum),
    Spike(SpikeInstance),
}

/// A loaded, validated instance with its resolved label table.
pub struct Loaded {
    pub instance: Instance,
    labels: Vec<String>,
}

impl Loaded {
    pub fn oracle(&self) -> &(dyn MatroidOracle + Sync) {
        match &self.instance {
            Instance::Graph(m) => m,
            Instance::Wheel(m) => m,
            Instance::Uniform(m) => m,
            Instance::Partition(m) => m,
            Instance::ElementarySplit(m) => m,
            Instance::SplitSum(m) => m,
            Instance::Spike(m) => m,
        }
    }

    pub fn kind(&self) -> &'static str {
        match &self.instance {
            Instance::Graph(_) => "graph",
            Instance::Wheel(_) => "wheel",
            Instance::Uniform(_) => "uniform",
            Instance::Partition(_) => "partition",
            Instance::ElementarySplit(_) => "elementary_split",
            Instance::SplitSum(_) => "split_sum",
            Instance::Spike(_) => "spike",
        }
    }

    pub fn label(&self, e: Element) -> &str {
        &self.labels[e.id()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_map(&self) -> BTreeMap<&str, Element> {
        self.oracle()
            .ground()
            .iter()
            .map(|e| (self.label(e), e))
            .collect()
    }

    pub fn names(&self, set: ElemSet) -> Vec<String> {
        set.iter().map(|e| self.label(e).to_string()).collect()
    }
}

fn ids_to_set(ids: &[usize]) -> Result<ElemSet, CliError> {
    ids.iter()
        .map(|&i| {
            if i >= mex_core::MAX_GROUND {
                Err(CliError::input(format!("element id {i} out of range")))
            } else {
                Ok(Element::new(i))
            }
        })
        .collect()
}

fn validate_instance(inst: &Instance) -> Vec<String> {
    match inst {
        Instance::Graph(m) => m.validate(),
        Instance::ElementarySplit(m) => m.validate(),
        Instance::SplitSum(m) => m.validate(),
        Instance::Spike(m) => m.validate(),
        _ => Vec::new(),
    }
}

pub fn build_instance(file: &InstanceFile) -> Result<Loaded, CliError> {
    let mut override_labels = None;
    let instance = match file {
        InstanceFile::Graph {
            vertices,
            edges,
            labels,
        } => {
            let g = match labels {
                Some(l) => GraphInstance::with_labels(*vertices, edges.clone(), l.clone()),
                None => GraphInstance::new(*vertices, edges.clone()),
            }
            .map_err(CliError::invalid)?;
            Instance::Graph(g)
        }
        InstanceFile::Wheel { n } => {
            Instance::Wheel(mex_core::instances::wheel(*n).map_err(CliError::invalid)?)
        }
        InstanceFile::Uniform { ground_size, rank } => {
            Instance::Uniform(UniformInstance::new(*ground_size, *rank).map_err(CliError::invalid)?)
        }
        InstanceFile::Partition { parts, capacities } => {
            let parts: Vec<ElemSet> = parts
                .iter()
                .map(|p| ids_to_set(p))
                .collect::<Result<_, _>>()?;
            Instance::Partition(
                PartitionInstance::new(parts, capacities.clone()).map_err(CliError::invalid)?,
            )
        }
        InstanceFile::ElementarySplit {
            ground_size,
            rank,
            hyperedges,
            bounds,
            labels,
        } => {
            override_labels = labels.clone();
            let hs: Vec<ElemSet> = hyperedges
                .iter()
                .map(|h| ids_to_set(h))
                .collect::<Result<_, _>>()?;
            Instance::ElementarySplit(
                ElementarySplitInstance::new(*ground_size, *rank, hs, bounds.clone())
                    .map_err(CliError::invalid)?,
            )
        }
        InstanceFile::SplitSum {
            elementary,
            uniforms,
        } => {
            let elem = match elementary {
                None => None,
                Some(e) => {
                    let hs: Vec<ElemSet> = e
                        .hyperedges
                        .iter()
                        .map(|h| ids_to_set(h))
                        .collect::<Result<_, _>>()?;
                    Some(
                        ElementarySplitInstance::on_ground(
                            ids_to_set(&e.elements)?,
                            e.rank,
                            hs,
                            e.bounds.clone(),
                        )
                        .map_err(CliError::invalid)?,
                    )
                }
            };
            let uniforms = uniforms
                .iter()
                .map(|u| {
                    Ok(UniformComponent {
                        elements: ids_to_set(&u.elements)?,
                        rank: u.rank,
                    })
                })
                .collect::<Result<_, CliError>>()?;
            Instance::SplitSum(SplitDirectSum::new(elem, uniforms).map_err(CliError::invalid)?)
        }
        InstanceFile::Spike { r, c3 } => {
            let spec = match c3 {
                C3File::Free => C3Spec::Explicit(Vec::new()),
                C3File::Binary => C3Spec::OddXParity,
                C3File::Explicit { members } => {
                    let probe = SpikeInstance::new(*r, C3Spec::Explicit(Vec::new()))
                        .map_err(CliError::invalid)?;
                    let map: BTreeMap<String, Element> =
                        probe.ground().iter().map(|e| (probe.label(e), e)).collect();
                    let mut sets = Vec::new();
                    for member in members {
                        let mut set = ElemSet::EMPTY;
                        for label in member {
                            let e = map.get(label).ok_or_else(|| {
                                CliError::input(format!("unknown spike element '{label}'"))
                            })?;
                            set = set.with(*e);
                        }
                        sets.push(set);
                    }
                    C3Spec::Explicit(sets)
                }
            };
            Instance::Spike(SpikeInstance::new(*r, spec).map_err(CliError::invalid)?)
        }
    };

    let violations = validate_instance(&instance);
    if !violations.is_empty() {
        return Err(CliError::input(format!(
            "instance fails validation: {}",
            violations.join("; ")
        )));
    }

    let loaded = {
        let oracle: &dyn MatroidOracle = match &instance {
            Instance::Graph(m) => m,
            Instance::Wheel(m) => m,
            Instance::Uniform(m) => m,
            Instance::Partition(m) => m,
            Instance::ElementarySplit(m) => m,
            Instance::SplitSum(m) => m,
            Instance::Spike(m) => m,
        };
        let n = oracle.ground().len();
        let labels = match override_labels {
            Some(l) => {
                if l.len() != n {
                    return Err(CliError::input(format!(
                        "expected {n} labels, got {}",
                        l.len()
                    )));
                }
                l
            }
            None => oracle.ground().iter().map(|e| oracle.label(e)).collect(),
        };
        let unique: std::collections::BTreeSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            return Err(CliError::input("duplicate element labels".into()));
        }
        Loaded { instance, labels }
    };
    Ok(loaded)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct PairFile {
    #[serde(rename = "R1")]
    pub r1: Vec<String>,
    #[serde(rename = "B1")]
    pub b1: Vec<String>,
    #[serde(rename = "R2")]
    pub r2: Vec<String>,
    #[serde(rename = "B2")]
    pub b2: Vec<String>,
}

impl PairFile {
    pub fn resolve(&self, inst: &Loaded) -> Result<(BasisPair, BasisPair), CliError> {
        let map = inst.label_map();
        let to_set = |labels: &[String]| -> Result<ElemSet, CliError> {
            let mut out = ElemSet::EMPTY;
            for l in labels {
                let e = map
                    .get(l.as_str())
                    .ok_or_else(|| CliError::input(format!("unknown element label '{l}'")))?;
                out = out.with(*e);
            }
            Ok(out)
        };
        Ok((
            BasisPair::new(to_set(&self.r1)?, to_set(&self.b1)?),
            BasisPair::new(to_set(&self.r2)?, to_set(&self.b2)?),
        ))
    }

    pub fn from_pairs(inst: &Loaded, p1: &BasisPair, p2: &BasisPair) -> PairFile {
        PairFile {
            r1: inst.names(p1.r),
            b1: inst.names(p1.b),
            r2: inst.names(p2.r),
            b2: inst.names(p2.b),
        }
    }
}

/// Weight files map element labels to `"p/q"` strings; every ground element
/// must be covered.
pub fn resolve_weights(
    raw: &BTreeMap<String, String>,
    inst: &Loaded,
) -> Result<WeightFn, CliError> {
    let map = inst.label_map();
    let m = inst.oracle();
    let mut wf = WeightFn::unit(m.ground().len());
    for e in m.ground() {
        let label = inst.label(e);
        let text = raw
            .get(label)
            .ok_or_else(|| CliError::input(format!("weight file misses element '{label}'")))?;
        let w = parse_weight(text).map_err(CliError::invalid)?;
        wf.set(e, w).map_err(CliError::invalid)?;
    }
    for key in raw.keys() {
        if !map.contains_key(key.as_str()) {
            return Err(CliError::input(format!(
                "weight file names unknown element '{key}'"
            )));
        }
    }
    Ok(wf)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SequenceFile {
    pub steps: Vec<(String, String)>,
    pub summary: SummaryBlock,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SummaryBlock {
    pub length: usize,
    pub weight: String,
    pub max_usage: u32,
    pub monotone: bool,
}

impl SequenceFile {
    pub fn from_sequence(
        inst: &Loaded,
        seq: &ExchangeSequence,
        report: &SequenceReport,
    ) -> SequenceFile {
        SequenceFile {
            steps: seq
                .steps
                .iter()
                .map(|x| {
                    (
                        inst.label(x.red).to_string(),
                        inst.label(x.blue).to_string(),
                    )
                })
                .collect(),
            summary: SummaryBlock {
                length: report.length,
                weight: format_weight(report.weight),
                max_usage: report.max_usage,
                monotone: report.monotone,
            },
        }
    }

    pub fn resolve(&self, inst: &Loaded) -> Result<ExchangeSequence, CliError> {
        let map = inst.label_map();
        let mut steps = Vec::new();
        for (red, blue) in &self.steps {
            let r = map
                .get(red.as_str())
                .ok_or_else(|| CliError::input(format!("unknown element label '{red}'")))?;
            let b = map
                .get(blue.as_str())
                .ok_or_else(|| CliError::input(format!("unknown element label '{blue}'")))?;
            steps.push(mex_core::Exchange::new(*r, *b));
        }
        Ok(ExchangeSequence::new(steps))
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct BijectionsFile {
    pub phi1: BTreeMap<String, String>,
    pub phi2: BTreeMap<String, String>,
}

impl BijectionsFile {
    pub fn resolve(&self, inst: &Loaded) -> Result<mex_core::sbo::SboBijections, CliError> {
        let map = inst.label_map();
        let resolve_map =
            |m: &BTreeMap<String, String>| -> Result<Vec<(Element, Element)>, CliError> {
                m.iter()
                    .map(|(from, to)| {
                        let f = map
                            .get(from.as_str())
                            .ok_or_else(|| CliError::input(format!("unknown element '{from}'")))?;
                        let t = map
                            .get(to.as_str())
                            .ok_or_else(|| CliError::input(format!("unknown element '{to}'")))?;
                        Ok((*f, *t))
                    })
                    .collect()
            };
        let n = inst.oracle().ground().len();
        Ok(mex_core::sbo::SboBijections::new(
            n,
            &resolve_map(&self.phi1)?,
            &resolve_map(&self.phi2)?,
        ))
    }
}

/// Wheel detection for graph files, returning the wheel and the relabeling
/// from graph edge ids to wheel edge ids.
pub fn as_wheel(inst: &Loaded) -> Option<(WheelInstance, mex_core::Relabel)> {
    match &inst.instance {
        Instance::Wheel(w) => {
            let n = 2 * w.num_spokes();
            Some((w.clone(), mex_core::Relabel::identity(n)))
        }
        Instance::Graph(g) => WheelInstance::match_graph(g),
        _ => None,
    }
}
