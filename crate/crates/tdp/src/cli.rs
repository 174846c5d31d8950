//! Command-line surface over the library.
//!
//! Exit codes: 0 all checks pass, 1 usage or input error, 2 invariant
//! violation in the verification harness.

use crate::corpus::{self, CorpusConfig};
use crate::markov::{MarkovEquation, MarkovTriple};
use crate::qgdeform::{self, DeformCase, DeformationStep, SurfaceRecord};
use crate::quotsing::CyclicQuotSing;
use crate::toric::{wps_fan, Fan, LatticeVector, ToricSurface};
use crate::{arith, Error, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use std::ffi::OsString;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Parser)]
#[command(
    name = "tdp",
    about = "Exact calculus for del Pezzo surfaces with T-singularities",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolution data of the cyclic quotient germ 1/R(1, A)
    Resolve {
        r: BigInt,
        a: BigInt,
        #[arg(long)]
        json: bool,
    },
    /// T-singularity witness (d, n, a') of the germ 1/R(1, A)
    Tclass {
        r: BigInt,
        a: BigInt,
        #[arg(long)]
        json: bool,
    },
    /// Invariants of the toric surface of a complete fan
    Fan {
        /// Rays as "x,y;x,y;..."
        #[arg(long)]
        rays: String,
        #[arg(long)]
        json: bool,
    },
    /// Invariants of the weighted projective plane P(W0, W1, W2)
    Wps {
        w0: BigInt,
        w1: BigInt,
        w2: BigInt,
        #[arg(long)]
        json: bool,
    },
    /// Markov-type equation tooling
    Markov {
        #[command(subcommand)]
        command: MarkovCommand,
    },
    /// Apply one Q-Gorenstein deformation step to a record file
    Deform {
        /// Path of a surface record JSON file
        #[arg(long)]
        record: String,
        /// Index of the singular point to deform
        #[arg(long)]
        point: usize,
        /// Partition of the target's d, e.g. "4,1"
        #[arg(long)]
        partition: String,
        /// Case A (all Du Val pieces) or B (first piece keeps the type)
        #[arg(long, value_parser = parse_case)]
        case: DeformCase,
        #[arg(long)]
        json: bool,
    },
    /// Four partial smoothings of the third point of P(a^2, b^2, 5c^2)
    Example7 {
        /// Solution triple of x^2 + y^2 + 5z^2 = 5xyz, as "a,b,c"
        #[arg(long)]
        triple: String,
        #[arg(long)]
        json: bool,
    },
    /// Generate the fan corpus; with --verify run the formula checks
    Corpus(CorpusArgs),
}

#[derive(Subcommand)]
enum MarkovCommand {
    /// Solutions of x^2 + y^2 + K z^2 = M x y z up to a coordinate bound
    Enumerate {
        #[arg(long)]
        k: BigInt,
        #[arg(long)]
        m: BigInt,
        #[arg(long)]
        bound: BigInt,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 6)]
    max_rays: usize,
    #[arg(long, default_value_t = 8)]
    coord_bound: i64,
    /// Run the verification checks and print a report instead of records
    #[arg(long)]
    verify: bool,
    /// Deformation rounds appended to the fan records (0, 1, or 2)
    #[arg(long, default_value_t = 0)]
    depth: u8,
    /// Drop the ample-anticanonical filter
    #[arg(long)]
    no_del_pezzo: bool,
    /// Drop the all-T filter
    #[arg(long)]
    no_all_t: bool,
    /// Accept nef-and-big anticanonical classes instead of ample ones
    #[arg(long)]
    nef_big: bool,
}

fn parse_case(s: &str) -> std::result::Result<DeformCase, String> {
    match s {
        "A" | "a" => Ok(DeformCase::A),
        "B" | "b" => Ok(DeformCase::B),
        other => Err(format!("case must be A or B, got {other}")),
    }
}

/// Runs the CLI on the given argument list and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version on stdout with status 0
            if e.use_stderr() {
                eprint!("{e}");
                return EXIT_USAGE;
            }
            print!("{e}");
            return EXIT_OK;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Resolve { r, a, json } => cmd_resolve(r, a, json),
        Command::Tclass { r, a, json } => cmd_tclass(r, a, json),
        Command::Fan { rays, json } => cmd_fan(&rays, json),
        Command::Wps { w0, w1, w2, json } => cmd_wps(&w0, &w1, &w2, json),
        Command::Markov {
            command: MarkovCommand::Enumerate { k, m, bound, json },
        } => cmd_markov_enumerate(k, m, bound, json),
        Command::Deform {
            record,
            point,
            partition,
            case,
            json,
        } => cmd_deform(&record, point, &partition, case, json),
        Command::Example7 { triple, json } => cmd_example7(&triple, json),
        Command::Corpus(args) => cmd_corpus(args),
    }
}

fn cmd_resolve(r: BigInt, a: BigInt, json: bool) -> Result<i32> {
    let germ = CyclicQuotSing::new(r, a)?;
    let chain = germ.hj_expansion();
    let t = germ.t_data();
    if json {
        let payload = serde_json::json!({
            "germ": {"r": arith::int_json(germ.r()), "a": arith::int_json(germ.a())},
            "chain": chain.iter().map(arith::int_json).collect::<Vec<_>>(),
            "gorenstein_index": arith::int_json(&germ.gorenstein_index()),
            "du_val": germ.is_du_val(),
            "t": t.is_some(),
            "milnor": match germ.milnor_number() {
                Ok(m) => arith::int_json(&m),
                Err(_) => serde_json::Value::Null,
            },
        });
        println!("{payload}");
    } else {
        println!("germ 1/{}(1,{})  [{}]", germ.r(), germ.a(), germ);
        println!(
            "hj chain: [{}]",
            chain
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        println!("gorenstein index: {}", germ.gorenstein_index());
        match t {
            Some(t) => println!(
                "class T: d = {}, n = {}, a' = {}, milnor = {}",
                t.d(),
                t.n(),
                t.aprime(),
                t.milnor()
            ),
            None => println!("class T: no"),
        }
    }
    Ok(EXIT_OK)
}

fn cmd_tclass(r: BigInt, a: BigInt, json: bool) -> Result<i32> {
    let germ = CyclicQuotSing::new(r, a)?;
    let t = germ.t_data();
    if json {
        let payload = match &t {
            Some(t) => serde_json::json!({
                "t": true,
                "d": arith::int_json(t.d()),
                "n": arith::int_json(t.n()),
                "aprime": arith::int_json(t.aprime()),
                "milnor": arith::int_json(&t.milnor()),
            }),
            None => serde_json::json!({"t": false}),
        };
        println!("{payload}");
    } else {
        match &t {
            Some(t) => println!(
                "T-singularity: d = {}, n = {}, a' = {}, milnor = {}",
                t.d(),
                t.n(),
                t.aprime(),
                t.milnor()
            ),
            None => println!("not a T-singularity"),
        }
    }
    Ok(EXIT_OK)
}

fn parse_rays(spec: &str) -> Result<Vec<LatticeVector>> {
    let mut rays = Vec::new();
    for part in spec.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let coords: Vec<&str> = part.split(',').map(str::trim).collect();
        if coords.len() != 2 {
            return Err(Error::InvalidInput(format!(
                "ray \"{part}\" is not of the form x,y"
            )));
        }
        let parse = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|_| Error::InvalidInput(format!("bad integer \"{s}\"")))
        };
        rays.push(LatticeVector::new(parse(coords[0])?, parse(coords[1])?));
    }
    Ok(rays)
}

fn print_surface(surface: &ToricSurface, json: bool) {
    if json {
        println!("{}", surface.report_json());
        return;
    }
    println!(
        "rays: {}",
        surface
            .fan()
            .rays()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    let sings = surface
        .singularities()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>();
    println!(
        "singularities: {}",
        if sings.is_empty() {
            "none".to_string()
        } else {
            sings.join(", ")
        }
    );
    println!("rho: {}", surface.picard_rank());
    println!("K^2: {}", surface.k_squared());
    println!("del Pezzo: {}", surface.is_del_pezzo());
    println!("s (non-Du Val points): {}", surface.s_count());
    match surface.noether_defect() {
        Some(d) => println!("noether defect: {d}"),
        None => println!("noether defect: undefined (a point is not of class T)"),
    }
}

fn cmd_fan(spec: &str, json: bool) -> Result<i32> {
    let fan = Fan::from_rays(parse_rays(spec)?)?;
    print_surface(&ToricSurface::new(fan), json);
    Ok(EXIT_OK)
}

fn cmd_wps(w0: &BigInt, w1: &BigInt, w2: &BigInt, json: bool) -> Result<i32> {
    let fan = wps_fan(w0, w1, w2)?;
    print_surface(&ToricSurface::new(fan), json);
    Ok(EXIT_OK)
}

fn cmd_markov_enumerate(k: BigInt, m: BigInt, bound: BigInt, json: bool) -> Result<i32> {
    let eq = MarkovEquation::new(k, m)?;
    let triples = eq.enumerate(&bound);
    if json {
        let rows: Vec<serde_json::Value> = triples
            .iter()
            .map(|t| {
                let weights = eq.triple_to_weights(t).ok();
                serde_json::json!({
                    "a": arith::int_json(&t.a),
                    "b": arith::int_json(&t.b),
                    "c": arith::int_json(&t.c),
                    "weights": weights.map(|w| {
                        w.iter().map(arith::int_json).collect::<Vec<_>>()
                    }),
                })
            })
            .collect();
        println!("{}", serde_json::Value::Array(rows));
    } else {
        for t in &triples {
            match eq.triple_to_weights(t) {
                Ok(w) => println!("{t}  ->  P({}, {}, {})", w[0], w[1], w[2]),
                Err(_) => println!("{t}"),
            }
        }
        eprintln!("{} solutions up to bound {bound}", triples.len());
    }
    Ok(EXIT_OK)
}

fn parse_partition(spec: &str) -> Result<Vec<u64>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad partition part \"{s}\"")))
        })
        .collect()
}

fn cmd_deform(path: &str, point: usize, partition: &str, case: DeformCase, json: bool) -> Result<i32> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{path} is not JSON: {e}")))?;
    let record = SurfaceRecord::from_json(&value)?;
    let step = DeformationStep {
        point,
        partition: parse_partition(partition)?,
        case,
    };
    let out = qgdeform::deform(&record, &step)?;
    if json {
        println!("{}", out.to_json());
    } else {
        print_record(&out);
    }
    Ok(EXIT_OK)
}

fn print_record(r: &SurfaceRecord) {
    let sings = r
        .singularities()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>();
    let report = r.bound_report();
    println!(
        "rho {} | K^2 {} | sings [{}] | s {} | margin {} ({}) | {}",
        r.rho(),
        r.k_squared(),
        sings.join(", "),
        report.s,
        report.margin,
        report.class.as_str(),
        r.origin(),
    );
}

fn parse_triple(spec: &str) -> Result<MarkovTriple> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "triple \"{spec}\" is not of the form a,b,c"
        )));
    }
    let parse = |s: &str| {
        s.parse::<BigInt>()
            .map_err(|_| Error::InvalidInput(format!("bad integer \"{s}\"")))
    };
    MarkovTriple::new(parse(parts[0])?, parse(parts[1])?, parse(parts[2])?)
}

fn cmd_example7(spec: &str, json: bool) -> Result<i32> {
    let triple = parse_triple(spec)?;
    let out = qgdeform::example7(&triple)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    if json {
        let rows: Vec<serde_json::Value> = out.records.iter().map(|r| r.to_json()).collect();
        println!("{}", serde_json::Value::Array(rows));
    } else {
        println!("plane:");
        print_record(&out.plane);
        println!("deformations:");
        for r in &out.records {
            print_record(r);
        }
    }
    Ok(EXIT_OK)
}

fn cmd_corpus(args: CorpusArgs) -> Result<i32> {
    let cfg = CorpusConfig {
        max_rays: args.max_rays,
        coord_bound: args.coord_bound,
        require_del_pezzo: !args.no_del_pezzo,
        require_all_t: !args.no_all_t,
        nef_big: args.nef_big,
        depth: args.depth,
    };
    if args.verify {
        let report = corpus::verify_corpus(&cfg)?;
        println!("{}", report.to_json());
        for (name, counts) in [
            ("noether", &report.noether),
            ("riemann_roch", &report.riemann_roch),
            ("bound", &report.bound),
            ("varsigma", &report.varsigma),
        ] {
            eprintln!(
                "{}: {} passed, {} failed",
                name, counts.passed, counts.failed
            );
        }
        return Ok(if report.all_passed() {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        });
    }
    let entries = corpus::generate_corpus(&cfg)?;
    for entry in &entries {
        let line = match &entry.fan {
            Some(fan) => {
                let mut report = ToricSurface::new(fan.clone()).report_json();
                report["depth"] = serde_json::json!(entry.depth);
                report
            }
            None => {
                let mut report = entry.record.to_json();
                report["depth"] = serde_json::json!(entry.depth);
                report
            }
        };
        println!("{line}");
    }
    Ok(EXIT_OK)
}
