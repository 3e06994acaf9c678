//! Command-line surface: facet enumeration, cell partitions, single
//! Kazhdan-Lusztig elements, and the semi-continuity checkers.
//!
//! Exit codes: 0 on success/PASS, 1 when a conjecture check fails, 2 on
//! usage or internal errors. Output is deterministic for fixed inputs,
//! independent of the thread count.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use klcells::arrangement::Arrangement;
use klcells::coxeter::CoxeterSystem;
use klcells::error::Error;
use klcells::hecke::{KlBasis, Side};
use klcells::io;
use klcells::lattice::LatticeBasis;
use klcells::semicontinuity::{check_b_minus, check_conjecture_a, essential_scan_rank2};
use klcells::weight::WeightFunction;

#[derive(Parser)]
#[command(name = "klcells", version, about = "Exact Kazhdan-Lusztig cells for unequal parameters")]
struct Cli {
    /// Worker threads for facet checks and scans (default: KLCELLS_THREADS
    /// or all cores). Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Built-in name (I2(5), A3, B4, F4) or a Coxeter JSON file path.
    #[arg(long)]
    coxeter: String,

    /// Enumeration cap; building fails if the group is larger.
    #[arg(long, default_value_t = 20_000)]
    cap: usize,
}

impl GroupArgs {
    fn load(&self) -> Result<CoxeterSystem, Error> {
        io::load_group(&self.coxeter, self.cap)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the facets of an arrangement, with dimensions, zero
    /// classes and the Hasse diagram of the face order.
    Facets {
        /// Arrangement JSON file, or `dihedral` / `f4` for the built-ins.
        #[arg(long)]
        arrangement: String,
    },
    /// Cell partition of a group at a weight function.
    Cells {
        #[command(flatten)]
        group: GroupArgs,
        /// Weight literal, e.g. `s=1,t=2` or `s=(1,0),t=(1,1)`.
        #[arg(long)]
        weight: String,
        #[arg(long, default_value = "L")]
        side: String,
    },
    /// Dump one Kazhdan-Lusztig basis element.
    Kl {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        weight: String,
        /// Element as a dot-joined word, e.g. `s.t.s` (or `e`).
        #[arg(long)]
        element: String,
    },
    /// Conjecture checks and reference tables.
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Print the dihedral left-cell table for I2(m) and diff it against
    /// the built-in reference table.
    Table {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 20_000)]
        cap: usize,
    },
    /// Facet-wise constancy and minimal-coarsening checks.
    #[command(name = "conja", alias = "conjA")]
    ConjA {
        #[command(flatten)]
        group: GroupArgs,
        /// Arrangement JSON file or `dihedral` / `f4`; defaults to the
        /// complete arrangement matching the group's class count.
        #[arg(long)]
        arrangement: Option<String>,
        /// Comma-separated sides to check.
        #[arg(long, default_value = "L,R,LR")]
        sides: String,
        /// Representative weights sampled per facet.
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Character-sum identities between each facet and the chambers above.
    Bminus {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        arrangement: Option<String>,
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// Rank-2 essential-slope scan over Farey slopes phi(t)/phi(s).
    Scan {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 8)]
        max_den: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("KLCELLS_THREADS").ok().and_then(|v| v.parse().ok()));
    let run = || match run_command(&cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    };
    match threads {
        Some(n) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                Ok(pool) => pool,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            pool.install(run)
        }
        None => run(),
    }
}

fn emit(cli: &Cli, text: String) -> Result<(), Error> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("writing `{path}`: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_arrangement(spec: &str, group: Option<&CoxeterSystem>) -> Result<Arrangement, Error> {
    let rank2_labels = |group: Option<&CoxeterSystem>| -> Result<LatticeBasis, Error> {
        let labels = match group {
            Some(g) if g.num_classes() == 2 => g.class_labels().to_vec(),
            _ => vec!["s".into(), "t".into()],
        };
        LatticeBasis::new(labels)
    };
    match spec {
        "dihedral" => Arrangement::complete_rank2(rank2_labels(group)?),
        "f4" => Arrangement::f4_essential(rank2_labels(group)?),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("reading `{path}`: {e}")))?;
            io::arrangement_from_json(&text)
        }
    }
}

fn default_arrangement(group: &CoxeterSystem) -> Result<Arrangement, Error> {
    match group.num_classes() {
        1 => Arrangement::complete_rank1(LatticeBasis::new(group.class_labels().to_vec())?),
        2 => Arrangement::complete_rank2(LatticeBasis::new(group.class_labels().to_vec())?),
        n => Err(Error::Precondition(format!(
            "no default arrangement for {n} classes; pass --arrangement"
        ))),
    }
}

fn parse_sides(text: &str) -> Result<Vec<Side>, Error> {
    text.split(',').map(|s| s.trim().parse()).collect()
}

fn run_command(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Facets { arrangement } => {
            let arr = load_arrangement(arrangement, None)?;
            let report = io::facets_report_json(&arr);
            emit(cli, format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))?;
            Ok(true)
        }
        Command::Cells { group, weight, side } => {
            let system = group.load()?;
            let weight = io::parse_weight_literal(&system, weight)?;
            let side: Side = side.parse()?;
            let partition = klcells::hecke::cells_for_weight(&system, &weight, side)?;
            let report = io::partition_json(&system, &weight, &partition);
            emit(cli, format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))?;
            Ok(true)
        }
        Command::Kl { group, weight, element } => {
            let system = group.load()?;
            let weight = io::parse_weight_literal(&system, weight)?;
            let w = system.parse_element(element)?;
            let basis = KlBasis::build(klcells::hecke::Algebra::new(&system, weight)?)?;
            let c = basis.element_checked(w)?;
            let report = io::kl_dump_json(&system, &c);
            emit(cli, format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))?;
            Ok(true)
        }
        Command::Check(check) => run_check(cli, check),
    }
}

fn run_check(cli: &Cli, check: &CheckCommand) -> Result<bool, Error> {
    match check {
        CheckCommand::Table { m, cap } => {
            let system = klcells::coxeter::builtin(&format!("I2({m})"), *cap)?;
            let mut out = String::new();
            let mut all_match = true;
            for regime in klcells::dihedral::regimes(&system) {
                let weight = if system.num_classes() == 2 {
                    WeightFunction::rank_one(vec![regime.0, regime.1])
                } else {
                    WeightFunction::rank_one(vec![regime.0])
                };
                let partition =
                    klcells::hecke::cells_for_weight(&system, &weight, Side::L)?;
                let golden = klcells::dihedral::golden_left_cells(&system, regime);
                let ok = partition.cells == golden;
                all_match &= ok;
                let cells = partition
                    .cells
                    .iter()
                    .map(|c| {
                        let inner =
                            c.iter().map(|&x| system.render(x)).collect::<Vec<_>>().join(", ");
                        format!("{{{inner}}}")
                    })
                    .collect::<Vec<_>>()
                    .join("  ");
                out.push_str(&format!(
                    "phi(s)={} phi(t)={} : {}{}\n",
                    regime.0,
                    regime.1,
                    cells,
                    if ok { "" } else { "   << mismatch" }
                ));
            }
            out.push_str(if all_match { "TABLE MATCH\n" } else { "TABLE MISMATCH\n" });
            emit(cli, out)?;
            Ok(all_match)
        }
        CheckCommand::ConjA { group, arrangement, sides, samples } => {
            let system = group.load()?;
            let arr = match arrangement {
                Some(spec) => load_arrangement(spec, Some(&system))?,
                None => default_arrangement(&system)?,
            };
            let sides = parse_sides(sides)?;
            let report = check_conjecture_a(&system, &arr, &sides, *samples)?;
            let mut value = serde_json::to_value(&report).unwrap();
            value["kind"] = "conjecture-a".into();
            value["verdict"] = if report.verdict { "PASS" } else { "FAIL" }.into();
            emit(cli, format!("{}\n", serde_json::to_string_pretty(&value).unwrap()))?;
            Ok(report.verdict)
        }
        CheckCommand::Bminus { group, arrangement, samples } => {
            let system = group.load()?;
            let arr = match arrangement {
                Some(spec) => load_arrangement(spec, Some(&system))?,
                None => default_arrangement(&system)?,
            };
            let report = check_b_minus(&system, &arr, *samples)?;
            let mut value = serde_json::to_value(&report).unwrap();
            value["kind"] = "b-minus".into();
            value["verdict"] = if report.verdict { "PASS" } else { "FAIL" }.into();
            emit(cli, format!("{}\n", serde_json::to_string_pretty(&value).unwrap()))?;
            Ok(report.verdict)
        }
        CheckCommand::Scan { group, max_den } => {
            let system = group.load()?;
            let report = essential_scan_rank2(&system, *max_den)?;
            let mut value = serde_json::to_value(&report).unwrap();
            value["kind"] = "scan".into();
            emit(cli, format!("{}\n", serde_json::to_string_pretty(&value).unwrap()))?;
            Ok(true)
        }
    }
}
