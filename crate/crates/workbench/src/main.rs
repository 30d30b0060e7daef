//! `workbench` — command-line front end for the congruence-subgroup
//! cohomology computations.
//!
//! Exit codes: 0 success, 1 invariant failure (a computation
//! contradicted a structural check), 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use workbench::json::{self, to_json_string};
use workbench::render;
use workbench_core::assembly::{
    betti3_forms, betti3_lower_bound, betti4_forms, betti4_lower_bound, build_les, build_les_over,
    forced_h1_dimension,
};
use workbench_core::building::chain_decomposition;
use workbench_core::building::{build_sl3_building, build_sp4_building, graph_homology};
use workbench_core::cohomology::{
    sl3_parabolic_cohomology, sp4_parabolic_cohomology, SlParabolic, SpParabolic,
};
use workbench_core::congruence::congruence_generators;
use workbench_core::orders::{sl3_double_coset_counts, sp4_indices};
use workbench_core::{GroupKind, PrimeLevel};

#[derive(Parser)]
#[command(
    name = "workbench",
    version,
    about = "Integral cohomology of congruence-subgroup parabolics in SL3(Z) and Sp4(Z), \
             their mod-p Tits buildings, and the derived Betti lower bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    Sl3,
    Sp4,
}

impl Group {
    fn kind(self) -> GroupKind {
        match self {
            Group::Sl3 => GroupKind::Sl3,
            Group::Sp4 => GroupKind::Sp4,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Group::Sl3 => "sl3",
            Group::Sp4 => "sp4",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "UPPER")]
enum Which {
    B,
    P1,
    P2,
    G0,
    G1,
    G2,
}

impl Which {
    fn name(self) -> &'static str {
        match self {
            Which::B => "B",
            Which::P1 => "P1",
            Which::P2 => "P2",
            Which::G0 => "G0",
            Which::G1 => "G1",
            Which::G2 => "G2",
        }
    }
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let v: u64 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    PrimeLevel::new(v).map_err(|e| e.to_string())?;
    Ok(v)
}

#[derive(Subcommand)]
enum Command {
    /// Group orders, stabilizer orders and double-coset counts
    Orders {
        #[arg(long)]
        group: Group,
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        /// write the report as JSON to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Construct the mod-p building and compute its homology
    Building {
        #[arg(long)]
        group: Group,
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        /// write a plain-text edge list ("u v" per line) to this path
        #[arg(long = "edge-list")]
        edge_list: Option<PathBuf>,
    },
    /// Free generating set of the level-p congruence subgroup of SL2(Z)
    Generators {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Integral cohomology table of one parabolic intersection
    Parabolic {
        #[arg(long)]
        group: Group,
        #[arg(long, ignore_case = true)]
        which: Which,
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// The equivariant long exact sequence report and rank bounds
    Les {
        #[arg(long)]
        group: Group,
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        /// compute dimensions over F_q instead of Q (q prime, q != p)
        #[arg(long = "field-char", default_value_t = 0)]
        field_char: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Betti-number lower bound (degree 3 for sl3, degree 4 for sp4)
    Bounds {
        #[arg(long)]
        group: Group,
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the full cross-check battery for one level; CI entry point
    VerifyAll {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
    },
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Failure(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli.command);
    emit_manifest(&cli.command, start);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit_manifest(cmd: &Command, start: Instant) {
    let (name, p, group, output): (&str, Option<u64>, Option<&str>, Option<&Path>) = match cmd {
        Command::Orders { group, p, json } => {
            ("orders", Some(*p), Some(group.name()), json.as_deref())
        }
        Command::Building { group, p, json, .. } => {
            ("building", Some(*p), Some(group.name()), json.as_deref())
        }
        Command::Generators { p, json } => ("generators", Some(*p), None, json.as_deref()),
        Command::Parabolic { group, p, json, .. } => {
            ("parabolic", Some(*p), Some(group.name()), json.as_deref())
        }
        Command::Les { group, p, json, .. } => {
            ("les", Some(*p), Some(group.name()), json.as_deref())
        }
        Command::Bounds { group, p, json } => {
            ("bounds", Some(*p), Some(group.name()), json.as_deref())
        }
        Command::VerifyAll { p } => ("verify-all", Some(*p), None, None),
    };
    let manifest = json::ManifestDoc {
        schema: json::SCHEMA,
        kind: "manifest",
        command: name.to_string(),
        p: p.map(|v| v.to_string()),
        group: group.map(str::to_string),
        output_path: output.map(|p| p.display().to_string()),
        tool_version: env!("CARGO_PKG_VERSION"),
        wall_time_ms: start.elapsed().as_millis().to_string(),
    };
    eprintln!(
        "{}",
        serde_json::to_string(&manifest).expect("manifest serializes")
    );
}

fn write_json<T: serde::Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    std::fs::write(path, to_json_string(doc))
        .map_err(|e| CliError::Failure(format!("writing {}: {e}", path.display())))
}

fn level(p: u64) -> PrimeLevel {
    PrimeLevel::new(p).expect("validated by the argument parser")
}

/// Coset enumeration caps: the generator engine handles p <= 13, the
/// symplectic building stays desk-scale through p <= 7.
fn require_cap(p: u64, cap: u64, what: &str) -> Result<(), CliError> {
    if p > cap {
        return Err(usage(format!("{what} supports p <= {cap}, got {p}")));
    }
    Ok(())
}

fn run(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Orders { group, p, json } => {
            let report = match group {
                Group::Sl3 => sl3_double_coset_counts(&level(*p))?,
                Group::Sp4 => sp4_indices(&level(*p))?,
            };
            report.check()?;
            print!("{}", render::orders_text(&report));
            if let Some(path) = json {
                write_json(path, &json::OrdersDoc::from(&report))?;
            }
            Ok(())
        }
        Command::Building {
            group,
            p,
            json,
            edge_list,
        } => {
            let graph = match group {
                Group::Sl3 => {
                    require_cap(*p, 13, "the sl3 building")?;
                    build_sl3_building(&level(*p))
                }
                Group::Sp4 => {
                    require_cap(*p, 7, "the sp4 building")?;
                    build_sp4_building(&level(*p))
                }
            };
            graph.check_invariants()?;
            let homology = graph_homology(&graph)?;
            print!("{}", render::building_text(&graph, homology));
            if let Some(path) = edge_list {
                std::fs::write(path, render::edge_list_text(&graph))
                    .map_err(|e| CliError::Failure(e.to_string()))?;
            }
            if let Some(path) = json {
                write_json(path, &json::BuildingDoc::new(&graph, homology))?;
            }
            Ok(())
        }
        Command::Generators { p, json } => {
            require_cap(*p, 13, "coset enumeration")?;
            let g = congruence_generators(&level(*p))?;
            print!("{}", render::generators_text(&g));
            if let Some(path) = json {
                write_json(path, &json::GeneratorsDoc::from(&g))?;
            }
            Ok(())
        }
        Command::Parabolic {
            group,
            which,
            p,
            json,
        } => {
            require_cap(*p, 13, "the parabolic tables")?;
            let table = match (group, which) {
                (Group::Sl3, Which::B) => sl3_parabolic_cohomology(&level(*p), SlParabolic::Borel)?,
                (Group::Sl3, Which::P1) => sl3_parabolic_cohomology(&level(*p), SlParabolic::P1)?,
                (Group::Sl3, Which::P2) => sl3_parabolic_cohomology(&level(*p), SlParabolic::P2)?,
                (Group::Sp4, Which::G0) => sp4_parabolic_cohomology(&level(*p), SpParabolic::G0)?,
                (Group::Sp4, Which::G1) => sp4_parabolic_cohomology(&level(*p), SpParabolic::G1)?,
                (Group::Sp4, Which::G2) => sp4_parabolic_cohomology(&level(*p), SpParabolic::G2)?,
                _ => {
                    return Err(usage(format!(
                        "--which {} does not belong to --group {}",
                        which.name(),
                        group.name()
                    )))
                }
            };
            print!("{}", render::parabolic_text(&table));
            if let Some(path) = json {
                write_json(
                    path,
                    &json::ParabolicDoc::new(&table, group.name(), which.name()),
                )?;
            }
            Ok(())
        }
        Command::Les {
            group,
            p,
            field_char,
            json,
        } => {
            require_cap(*p, 13, "the sequence report")?;
            let report = build_les_over(&level(*p), group.kind(), *field_char)?;
            print!("{}", render::les_text(&report));
            if let Some(path) = json {
                write_json(path, &json::LesDoc::from(&report))?;
            }
            Ok(())
        }
        Command::Bounds { group, p, json } => {
            let (bound, degree) = match group {
                Group::Sl3 => (betti3_lower_bound(&level(*p))?, 3),
                Group::Sp4 => (betti4_lower_bound(&level(*p))?, 4),
            };
            println!("{bound}");
            if let Some(path) = json {
                write_json(
                    path,
                    &json::BoundsDoc {
                        schema: json::SCHEMA,
                        kind: "bounds",
                        group: group.name().to_string(),
                        p: p.to_string(),
                        degree: degree.to_string(),
                        bound: bound.to_string(),
                    },
                )?;
            }
            Ok(())
        }
        Command::VerifyAll { p } => verify_all(*p),
    }
}

/// The cross-check battery: every structural invariant the library can
/// test against itself at one level, one "ok" line per check.
fn verify_all(p: u64) -> Result<(), CliError> {
    require_cap(p, 13, "verify-all")?;
    let lvl = level(p);
    let check = |name: &str, result: Result<(), String>| -> Result<(), CliError> {
        match result {
            Ok(()) => {
                println!("ok {name}");
                Ok(())
            }
            Err(msg) => {
                println!("FAIL {name}: {msg}");
                Err(CliError::Failure(format!("{name}: {msg}")))
            }
        }
    };

    check(
        "orders-sl3",
        sl3_double_coset_counts(&lvl)
            .map_err(|e| e.to_string())
            .and_then(|r| r.check().map_err(|e| e.to_string())),
    )?;
    check(
        "orders-sp4",
        sp4_indices(&lvl)
            .map_err(|e| e.to_string())
            .and_then(|r| r.check().map_err(|e| e.to_string())),
    )?;

    check("building-sl3", {
        let g = build_sl3_building(&lvl);
        g.check_invariants()
            .map_err(|e| e.to_string())
            .and_then(|()| {
                let (h0, h1) = graph_homology(&g).map_err(|e| e.to_string())?;
                let want = (p as usize).pow(3);
                if (h0, h1) == (1, want) {
                    Ok(())
                } else {
                    Err(format!("homology ({h0}, {h1}), expected (1, {want})"))
                }
            })
    })?;
    if p <= 5 {
        check("building-sp4", {
            let g = build_sp4_building(&lvl);
            g.check_invariants()
                .map_err(|e| e.to_string())
                .and_then(|()| {
                    let (h0, h1) = graph_homology(&g).map_err(|e| e.to_string())?;
                    let want = (p as usize).pow(4);
                    if (h0, h1) == (1, want) {
                        Ok(())
                    } else {
                        Err(format!("homology ({h0}, {h1}), expected (1, {want})"))
                    }
                })
        })?;
    } else {
        println!("skip building-sp4 (runs at p <= 5 in the battery)");
    }

    check(
        "chain-decomposition",
        chain_decomposition(&lvl)
            .map(|_| ())
            .map_err(|e| e.to_string()),
    )?;

    check("generators", {
        congruence_generators(&lvl)
            .map_err(|e| e.to_string())
            .and_then(|g| {
                let again = congruence_generators(&lvl).map_err(|e| e.to_string())?;
                if g.generators == again.generators {
                    Ok(())
                } else {
                    Err("generator engine is not deterministic".to_string())
                }
            })
    })?;

    check("parabolic-tables", {
        (|| -> Result<(), String> {
            let b =
                sl3_parabolic_cohomology(&lvl, SlParabolic::Borel).map_err(|e| e.to_string())?;
            let expect_ranks = vec![1usize, 2, 2, 1];
            if b.free_ranks() != expect_ranks {
                return Err(format!("B table ranks {:?}", b.free_ranks()));
            }
            let rank = workbench_core::congruence::expected_rank(p);
            for which in [SlParabolic::P1, SlParabolic::P2] {
                let t = sl3_parabolic_cohomology(&lvl, which).map_err(|e| e.to_string())?;
                if t.groups[1].free_rank() != rank || t.groups[3].free_rank() != rank {
                    return Err("sl3 parabolic boundary degrees are not Z^rank".to_string());
                }
            }
            for which in [SpParabolic::G0, SpParabolic::G1, SpParabolic::G2] {
                let t = sp4_parabolic_cohomology(&lvl, which).map_err(|e| e.to_string())?;
                if t.groups.len() != 5 || t.groups[0].free_rank() != 1 {
                    return Err("sp4 parabolic table has the wrong shape".to_string());
                }
            }
            Ok(())
        })()
    })?;

    check("les-sl3", {
        build_les(&lvl, GroupKind::Sl3)
            .map_err(|e| e.to_string())
            .and_then(|r| {
                let bound = betti3_lower_bound(&lvl).map_err(|e| e.to_string())?;
                if r.derived_bounds[3] == bound {
                    Ok(())
                } else {
                    Err(format!(
                        "pipeline bound {} vs closed form {bound}",
                        r.derived_bounds[3]
                    ))
                }
            })
    })?;
    check("les-sp4", {
        build_les(&lvl, GroupKind::Sp4)
            .map_err(|e| e.to_string())
            .and_then(|r| {
                let bound = betti4_lower_bound(&lvl).map_err(|e| e.to_string())?;
                if r.derived_bounds[4] == bound {
                    Ok(())
                } else {
                    Err(format!(
                        "pipeline bound {} vs closed form {bound}",
                        r.derived_bounds[4]
                    ))
                }
            })
    })?;

    check("forced-dimension", {
        (|| -> Result<(), String> {
            for q in [0u64, 2, 3, 5, 7] {
                if q == p {
                    continue;
                }
                forced_h1_dimension(&lvl, q).map_err(|e| format!("char {q}: {e}"))?;
            }
            Ok(())
        })()
    })?;

    check("bound-forms", {
        (|| -> Result<(), String> {
            let mut q = 3u64;
            while q <= 49 {
                let (a3, c3) = betti3_forms(q);
                let (a4, c4) = betti4_forms(q);
                if a3 != c3 || a4 != c4 {
                    return Err(format!("forms disagree at p = {q}"));
                }
                q += 2;
            }
            Ok(())
        })()
    })?;

    println!("all checks passed at p = {p}");
    Ok(())
}
