//! `mex`: construct, verify, and exactly measure symmetric basis-exchange
//! sequences between compatible basis pairs of matroids.
//!
//! Every invocation prints one JSON object to standard output. Exit codes:
//! 0 success, 2 invalid input, 3 solver precondition violation, 4 internal
//! bound violation, 5 witness not found.

mod files;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use serde_json::{json, Value};

use mex_core::instances::{k4_as_split, k4_graph, SplitDirectSum, UniformComponent};
use mex_core::matroid::MatroidOracle;
use mex_core::oracle::{
    conjecture_sweep, exchange_distance, exists_monotone_sequence, gap_search,
    two_weight_counterexample, weighted_exchange_distance, Limits, Reach,
};
use mex_core::pairs::{lower_bounds, verify_sequence, BasisPair, ExchangeSequence, VerifyFailure};
use mex_core::sbo::{partition_bijection, solve_sbo};
use mex_core::spike::solve_spike;
use mex_core::split::{solve_split, solve_split_elementary};
use mex_core::weight::{format_weight, WeightFn};
use mex_core::wheel::solve_wheel;

use files::{
    as_wheel, build_instance, BijectionsFile, C3File, Instance, InstanceFile, Loaded, PairFile,
    SequenceFile,
};

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError { code: 2, message }
    }

    pub fn precondition(message: String) -> Self {
        CliError { code: 3, message }
    }

    pub fn invalid(e: mex_core::Error) -> Self {
        use mex_core::Error::*;
        let code = match &e {
            InternalBound(_) | CompletionNotFound => 4,
            NotFound => 5,
            Precondition(_) | OrientationMismatch | InfeasibleExchange(..) | NotBipartite => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "mex",
    about = "Symmetric basis-exchange sequences between compatible basis pairs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum SolverArg {
    Auto,
    Wheel,
    Spike,
    Split,
    Sbo,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a verified exchange sequence between the two pairs.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
        solver: SolverArg,
        /// Exchange bijections (required for the sbo solver on non-partition
        /// instances).
        #[arg(long)]
        bijections: Option<PathBuf>,
        /// Write the sequence file here in addition to the stdout summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a sequence file and report its statistics.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Exact distances and monotone-route existence by exhaustive search.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Sweep all compatible pairs against the distance bounds.
    Check {
        #[arg(long)]
        instance: PathBuf,
        /// Number of sampled weight functions.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a built-in instance (and witness pair where applicable).
    ///
    /// Names: wheel N, free_spike R, binary_spike R, k4_graph, k4_as_split,
    /// gap_pair N, k4_pair.
    Gen {
        name: String,
        params: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        pair_out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(value) => println!("{value}"),
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("cannot parse {}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::input(format!("serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Loaded, CliError> {
    build_instance(&read_json::<InstanceFile>(path)?)
}

fn load_pair(path: &Path, inst: &Loaded) -> Result<(BasisPair, BasisPair), CliError> {
    let (p1, p2) = read_json::<PairFile>(path)?.resolve(inst)?;
    p1.validate(inst.oracle()).map_err(CliError::invalid)?;
    p2.validate(inst.oracle()).map_err(CliError::invalid)?;
    if !p1.compatible_with(&p2) {
        return Err(CliError::invalid(mex_core::Error::IncompatiblePairs));
    }
    Ok((p1, p2))
}

fn load_weights(path: &Option<PathBuf>, inst: &Loaded) -> Result<WeightFn, CliError> {
    match path {
        None => Ok(WeightFn::unit(inst.oracle().ground().len())),
        Some(p) => files::resolve_weights(&read_json::<BTreeMap<String, String>>(p)?, inst),
    }
}

fn run(command: Command) -> Result<Value, CliError> {
    match command {
        Command::Solve {
            instance,
            pair,
            weights,
            solver,
            bijections,
            out,
        } => cmd_solve(&instance, &pair, &weights, solver, &bijections, &out),
        Command::Verify {
            instance,
            pair,
            sequence,
            weights,
        } => cmd_verify(&instance, &pair, &sequence, &weights),
        Command::Oracle {
            instance,
            pair,
            weights,
        } => cmd_oracle(&instance, &pair, &weights),
        Command::Check {
            instance,
            samples,
            seed,
        } => cmd_check(&instance, samples, seed),
        Command::Gen {
            name,
            params,
            out,
            pair_out,
        } => cmd_gen(&name, &params, &out, &pair_out),
    }
}

fn pick_solver(arg: SolverArg, inst: &Loaded) -> Result<SolverArg, CliError> {
    if arg != SolverArg::Auto {
        return Ok(arg);
    }
    Ok(match &inst.instance {
        Instance::Wheel(_) | Instance::Graph(_) => SolverArg::Wheel,
        Instance::Spike(_) => SolverArg::Spike,
        Instance::Uniform(_) | Instance::ElementarySplit(_) | Instance::SplitSum(_) => {
            SolverArg::Split
        }
        Instance::Partition(_) => SolverArg::Sbo,
    })
}

fn run_solver(
    solver: SolverArg,
    inst: &Loaded,
    p1: &BasisPair,
    p2: &BasisPair,
    wf: &WeightFn,
    bijections: &Option<PathBuf>,
) -> Result<ExchangeSequence, CliError> {
    match (solver, &inst.instance) {
        (SolverArg::Wheel, Instance::Wheel(_) | Instance::Graph(_)) => {
            let (w, map) = as_wheel(inst)
                .ok_or_else(|| CliError::precondition("graph instance is not a wheel".into()))?;
            let seq = solve_wheel(
                &w,
                &p1.relabeled(&map),
                &p2.relabeled(&map),
                &wf.relabeled(&map),
            )
            .map_err(CliError::invalid)?;
            Ok(seq.relabeled(&map.inverse()))
        }
        (SolverArg::Spike, Instance::Spike(k)) => {
            solve_spike(k, p1, p2, wf).map_err(CliError::invalid)
        }
        (SolverArg::Split, Instance::ElementarySplit(e)) => {
            solve_split_elementary(e, p1, p2, wf).map_err(CliError::invalid)
        }
        (SolverArg::Split, Instance::SplitSum(s)) => {
            solve_split(s, p1, p2, wf).map_err(CliError::invalid)
        }
        (SolverArg::Split, Instance::Uniform(u)) => {
            let sum = SplitDirectSum::new(
                None,
                vec![UniformComponent {
                    elements: u.ground(),
                    rank: u.rank(),
                }],
            )
            .map_err(CliError::invalid)?;
            solve_split(&sum, p1, p2, wf).map_err(CliError::invalid)
        }
        (SolverArg::Sbo, _) => {
            let bij = match (bijections, &inst.instance) {
                (Some(path), _) => read_json::<BijectionsFile>(path)?.resolve(inst)?,
                (None, Instance::Partition(parts)) => {
                    partition_bijection(parts, p1, p2).map_err(CliError::invalid)?
                }
                (None, _) => {
                    return Err(CliError::precondition(
                        "sbo solver needs --bijections for this instance type".into(),
                    ))
                }
            };
            solve_sbo(inst.oracle(), p1, p2, &bij, wf).map_err(CliError::invalid)
        }
        _ => Err(CliError::precondition(format!(
            "solver {solver:?} does not apply to a {} instance",
            inst.kind()
        ))),
    }
}

fn cmd_solve(
    instance: &Path,
    pair: &Path,
    weights: &Option<PathBuf>,
    solver: SolverArg,
    bijections: &Option<PathBuf>,
    out: &Option<PathBuf>,
) -> Result<Value, CliError> {
    let inst = load_instance(instance)?;
    let (p1, p2) = load_pair(pair, &inst)?;
    let wf = load_weights(weights, &inst)?;
    let solver = pick_solver(solver, &inst)?;
    let seq = run_solver(solver, &inst, &p1, &p2, &wf, bijections)?;

    let report = verify_sequence(inst.oracle(), &p1, &p2, &seq, &wf).map_err(CliError::invalid)?;
    if !report.valid {
        return Err(CliError {
            code: 4,
            message: "solver output failed verification".into(),
        });
    }
    let rank = inst.oracle().rank();
    let weight_bound = wf.total(p1.union());
    let file = SequenceFile::from_sequence(&inst, &seq, &report);
    if let Some(path) = out {
        write_json(path, &file)?;
    }
    Ok(json!({
        "command": "solve",
        "solver": format!("{solver:?}").to_lowercase(),
        "valid": true,
        "length": report.length,
        "length_bound": rank,
        "weight": format_weight(report.weight),
        "weight_bound": format_weight(weight_bound),
        "max_usage": report.max_usage,
        "usage_bound": 2,
        "monotone": report.monotone,
        "steps": file.steps,
    }))
}

fn cmd_verify(
    instance: &Path,
    pair: &Path,
    sequence: &Path,
    weights: &Option<PathBuf>,
) -> Result<Value, CliError> {
    let inst = load_instance(instance)?;
    let (p1, p2) = load_pair(pair, &inst)?;
    let wf = load_weights(weights, &inst)?;
    let seq = read_json::<SequenceFile>(sequence)?.resolve(&inst)?;
    let report = verify_sequence(inst.oracle(), &p1, &p2, &seq, &wf).map_err(CliError::invalid)?;
    let failure = match report.failure {
        None => Value::Null,
        Some(VerifyFailure::InfeasibleStep(i)) => json!({"infeasible_step": i}),
        Some(VerifyFailure::FinalMismatch) => json!("final_mismatch"),
    };
    Ok(json!({
        "command": "verify",
        "valid": report.valid,
        "failure": failure,
        "length": report.length,
        "weight": format_weight(report.weight),
        "max_usage": report.max_usage,
        "monotone": report.monotone,
    }))
}

fn cmd_oracle(instance: &Path, pair: &Path, weights: &Option<PathBuf>) -> Result<Value, CliError> {
    let inst = load_instance(instance)?;
    let (p1, p2) = load_pair(pair, &inst)?;
    let wf = load_weights(weights, &inst)?;
    let limits = Limits::default();
    let m = inst.oracle();
    let distance = exchange_distance(m, &p1, &p2, &limits).map_err(CliError::invalid)?;
    let weighted =
        weighted_exchange_distance(m, &p1, &p2, &wf, &limits).map_err(CliError::invalid)?;
    let monotone = exists_monotone_sequence(m, &p1, &p2, &limits).map_err(CliError::invalid)?;
    let (lb_len, lb_weight) = lower_bounds(&p1, &p2, &wf).map_err(CliError::invalid)?;
    Ok(json!({
        "command": "oracle",
        "distance": match distance {
            Reach::Reached(d) => json!(d),
            Reach::Unreachable => json!("unreachable"),
        },
        "weighted_distance": match weighted {
            Reach::Reached(d) => json!(format_weight(d)),
            Reach::Unreachable => json!("unreachable"),
        },
        "lower_bound_length": lb_len,
        "lower_bound_weight": format_weight(lb_weight),
        "monotone_exists": monotone,
        "rank": m.rank(),
    }))
}

fn cmd_check(instance: &Path, samples: usize, seed: u64) -> Result<Value, CliError> {
    let inst = load_instance(instance)?;
    let m = inst.oracle();
    let n = m.ground().len();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<WeightFn> = (0..samples)
        .map(|_| WeightFn::sample(&mut rng, n, 10, 10))
        .collect();
    let report = conjecture_sweep(m, &weights, &Limits::default()).map_err(CliError::invalid)?;
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "R1": inst.names(v.p1.r),
                "R2": inst.names(v.p2.r),
                "detail": v.detail,
            })
        })
        .collect();
    Ok(json!({
        "command": "check",
        "instance": inst.kind(),
        "pairs_checked": report.pairs_checked,
        "samples": report.samples,
        "seed": seed,
        "violations": violations,
        "max_distance": report.max_distance,
        "rank": m.rank(),
        "max_weight_ratio": report.max_weight_ratio.map(format_weight),
    }))
}

fn k4_graph_file() -> InstanceFile {
    let g = k4_graph();
    InstanceFile::Graph {
        vertices: 4,
        edges: (0..6)
            .map(|i| g.endpoints(mex_core::Element::new(i)))
            .collect(),
        labels: Some(g.labels().to_vec()),
    }
}

fn cmd_gen(
    name: &str,
    params: &[usize],
    out: &Option<PathBuf>,
    pair_out: &Option<PathBuf>,
) -> Result<Value, CliError> {
    let need = |n: usize| -> Result<usize, CliError> {
        params
            .get(n)
            .copied()
            .ok_or_else(|| CliError::input(format!("gen {name} needs a size parameter")))
    };
    let mut pair_file: Option<PairFile> = None;
    let mut detail = serde_json::Map::new();

    let file = match name {
        "wheel" => InstanceFile::Wheel { n: need(0)? },
        "free_spike" => InstanceFile::Spike {
            r: need(0)?,
            c3: C3File::Free,
        },
        "binary_spike" => InstanceFile::Spike {
            r: need(0)?,
            c3: C3File::Binary,
        },
        "k4_graph" => k4_graph_file(),
        "k4_as_split" => {
            let k4 = k4_as_split();
            InstanceFile::ElementarySplit {
                ground_size: 6,
                rank: 3,
                hyperedges: k4
                    .hyperedges()
                    .iter()
                    .map(|h| h.iter().map(|e| e.id()).collect())
                    .collect(),
                bounds: k4.bounds().to_vec(),
                labels: Some(
                    ["a", "b", "c", "d", "e", "f"].iter().map(|s| s.to_string()).collect(),
                ),
            }
        }
        "gap_pair" => {
            let n = need(0)?;
            let w = mex_core::instances::wheel(n).map_err(CliError::invalid)?;
            let witness = gap_search(&w).map_err(CliError::invalid)?;
            let file = InstanceFile::Wheel { n };
            let loaded = build_instance(&file)?;
            pair_file = Some(PairFile::from_pairs(&loaded, &witness.p1, &witness.p2));
            detail.insert("lower_bound".into(), json!(witness.lower_bound));
            detail.insert("distance".into(), json!(witness.distance));
            file
        }
        "k4_pair" => {
            let g = k4_graph();
            let witness =
                two_weight_counterexample(&g, &Limits::default()).map_err(CliError::invalid)?;
            let file = k4_graph_file();
            let loaded = build_instance(&file)?;
            pair_file = Some(PairFile::from_pairs(&loaded, &witness.p1, &witness.p2));
            let (b, e) = witness.elements;
            detail.insert(
                "elements".into(),
                json!([loaded.label(b), loaded.label(e)]),
            );
            file
        }
        other => {
            return Err(CliError::input(format!(
                "unknown generator '{other}' (wheel, free_spike, binary_spike, k4_graph, k4_as_split, gap_pair, k4_pair)"
            )))
        }
    };

    let loaded = build_instance(&file)?;
    if let Some(path) = out {
        write_json(path, &file)?;
    }
    if let Some(pf) = &pair_file {
        if let Some(path) = pair_out {
            write_json(path, pf)?;
        }
    }
    let mut result = json!({
        "command": "gen",
        "name": name,
        "instance": serde_json::to_value(&file).map_err(|e| CliError::input(e.to_string()))?,
        "labels": loaded.labels(),
    });
    if let Some(pf) = &pair_file {
        result["pair"] = serde_json::to_value(pf).map_err(|e| CliError::input(e.to_string()))?;
    }
    for (k, v) in detail {
        result[k] = v;
    }
    Ok(result)
}
