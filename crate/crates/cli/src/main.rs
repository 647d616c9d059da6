use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tropibound::io::{
    flag_doc, parse_input, to_json, CircuitDoc, CircuitsReport, ConeDoc, CrnReport, DecoratedDoc, FanReport, FlatDoc, FlatsReport,
    InputDocument, IntersectionDoc, SimplexDoc, SubdivisionReport, VerifyReport, WitnessDoc,
};
use tropibound::io::{BoundDoc, CellDoc};
use tropibound::numeric::{count_roots, CountOptions, NewtonOptions};
use tropibound::subdivision::{decorated_count, decorated_to_tropical, full_cells, is_triangulation};
use tropibound::{assemble_crn, bound, fine_fan, lower_bound, positive_fan, OrientedMatroid};

mod render;

#[derive(Parser, Debug)]
#[command(name = "tropibound", version, about = "Lower bounds on positive real solutions of vertically parametrized systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, env = "TROPIBOUND_THREADS", global = true)]
    threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Signed circuits of the oriented matroid of ker C.
    Circuits(Input),
    /// Flats and maximal flags of the matroid of ker C.
    Flats(Input),
    /// Maximal cones of the fine Bergman fan.
    Bergman(Input),
    /// Maximal cones of the positive Bergman fan.
    PositiveBergman(Input),
    /// Points of the tropical intersection.
    Intersect(Intersect),
    /// Full-dimensional cells of the regular subdivision.
    Subdivision(Input),
    /// Positively decorated simplices.
    Decorated(Input),
    /// Certified lower bound from both methods.
    Bound(Intersect),
    /// Assemble a reaction network and bound its steady states.
    Crn(Intersect),
    /// Floating-point root witnesses at a concrete t.
    Verify(Verify),
}

#[derive(Args, Debug)]
struct Input {
    /// JSON input document.
    input: PathBuf,
}

#[derive(Args, Debug)]
struct Intersect {
    #[command(flatten)]
    input: Input,

    /// Recompute the points by vertex enumeration and require agreement.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Args, Debug)]
struct Verify {
    #[command(flatten)]
    input: Input,

    /// Parameter value, in (0, 1).
    #[arg(long, default_value_t = 0.01)]
    t: f64,

    /// Relative residual required of a root.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Minimum distance between roots in log coordinates.
    #[arg(long, default_value_t = 1e-4)]
    separation: f64,

    #[arg(long, default_value_t = 100)]
    max_iter: usize,

    /// Random starts in addition to the tropical seeds.
    #[arg(long, default_value_t = 64)]
    multistarts: usize,

    #[arg(long, default_value_t = 20240601)]
    seed: u64,
}

const CERTIFIED: u8 = 0;
const UNCERTIFIED: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("configuring the thread pool")?;
    }
    let json = cli.format == Format::Json;
    let emit = |text: String, doc: String| {
        if json {
            println!("{doc}");
        } else {
            print!("{text}");
        }
    };
    let load = |input: &Input| parse_input(&input.input).map_err(anyhow::Error::from);

    match &cli.command {
        Command::Circuits(input) => {
            let om = OrientedMatroid::realize_from_kernel(&load(input)?.coefficient_matrix()?)?;
            let doc = CircuitsReport {
                ground_size: om.ground_size(),
                rank: om.rank(),
                circuits: om.circuits().iter().map(CircuitDoc::from).collect(),
            };
            emit(render::circuits(&om), to_json(&doc));
            Ok(CERTIFIED)
        }
        Command::Flats(input) => {
            let om = OrientedMatroid::realize_from_kernel(&load(input)?.coefficient_matrix()?)?;
            let flats = om.all_flats();
            let flags = om.maximal_flags();
            let doc = FlatsReport {
                ground_size: om.ground_size(),
                rank: om.rank(),
                flats: flats.iter().map(FlatDoc::from).collect(),
                maximal_flags: flags.iter().map(flag_doc).collect(),
            };
            emit(render::flats(&om, &flats, &flags), to_json(&doc));
            Ok(CERTIFIED)
        }
        Command::Bergman(input) | Command::PositiveBergman(input) => {
            let positive = matches!(cli.command, Command::PositiveBergman(_));
            let om = OrientedMatroid::realize_from_kernel(&load(input)?.coefficient_matrix()?)?;
            let cones = if positive { positive_fan(&om).cones } else { fine_fan(&om) };
            let doc = FanReport {
                ground_size: om.ground_size(),
                positive,
                free_matroid: om.is_free(),
                cones: cones.iter().map(ConeDoc::from).collect(),
            };
            emit(render::fan(&doc), to_json(&doc));
            Ok(CERTIFIED)
        }
        Command::Intersect(args) => {
            let system = load(&args.input)?.system()?;
            let report = lower_bound(&system.c, &system.a, &system.h, args.cross_check)?;
            let doc = IntersectionDoc::from(&report);
            emit(render::intersection(&doc), to_json(&doc));
            Ok(if report.transverse { CERTIFIED } else { UNCERTIFIED })
        }
        Command::Subdivision(input) => {
            let system = load(input)?.system()?;
            let cells = full_cells(&system.a, &system.h)?;
            let doc =
                SubdivisionReport { triangulation: is_triangulation(&cells, system.n()), cells: cells.iter().map(CellDoc::from).collect() };
            emit(render::subdivision(&doc), to_json(&doc));
            Ok(CERTIFIED)
        }
        Command::Decorated(input) => {
            let system = load(input)?.system()?;
            let reduced = system.rank_selected();
            if reduced.rows() != system.n() {
                bail!("coefficient matrix has rank {} but there are {} variables", reduced.rows(), system.n());
            }
            let (count, simplices) = decorated_count(&reduced, &system.a, &system.h)?;
            let om = OrientedMatroid::realize_from_kernel(&system.c)?;
            let simplices = simplices
                .iter()
                .map(|d| Ok(SimplexDoc::new(d, Some(&decorated_to_tropical(d, &system.a, &system.h, &om)?))))
                .collect::<Result<Vec<_>>>()?;
            let doc = DecoratedDoc { count, simplices };
            emit(render::decorated(&doc), to_json(&doc));
            Ok(CERTIFIED)
        }
        Command::Bound(args) => {
            let system = load(&args.input)?.system()?;
            let report = bound(&system, args.cross_check)?;
            let doc = BoundDoc::from(&report);
            emit(render::bound(&doc), to_json(&doc));
            Ok(bound_code(&doc))
        }
        Command::Crn(args) => {
            let tropibound::io::Input::Crn(model) = load(&args.input)? else {
                bail!("{}: expected a \"crn\" document", args.input.input.display());
            };
            let system = assemble_crn(&model)?;
            let report = bound(&system, args.cross_check)?;
            let doc = CrnReport { system: InputDocument::from_system(&system, None), bound: BoundDoc::from(&report) };
            emit(render::crn(&system, &doc.bound), to_json(&doc));
            Ok(bound_code(&doc.bound))
        }
        Command::Verify(args) => {
            let system = load(&args.input)?.system()?;
            let report = bound(&system, false)?;
            let options = CountOptions {
                newton: NewtonOptions { tol: args.tol, max_iter: args.max_iter },
                separation: args.separation,
                multistarts: args.multistarts,
                seed: args.seed,
            };
            let roots = count_roots(&system, args.t, &report.tropical, &options)?;
            let doc = VerifyReport {
                status: "empirical witness".into(),
                t: args.t,
                tol: args.tol,
                separation: args.separation,
                multistarts: args.multistarts,
                seed: args.seed,
                certified_bound: report.certified_bound,
                count: roots.len(),
                witnesses: roots.iter().map(WitnessDoc::from).collect(),
            };
            emit(render::verify(&doc), to_json(&doc));
            Ok(if doc.count >= doc.certified_bound { CERTIFIED } else { UNCERTIFIED })
        }
    }
}

fn bound_code(doc: &BoundDoc) -> u8 {
    if doc.tropical.transverse || doc.decorated.is_some() {
        CERTIFIED
    } else {
        UNCERTIFIED
    }
}
