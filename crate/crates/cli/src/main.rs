//! `qgrass`: exact computation in quantum matrix algebras and quantum
//! grassmannians, plus the named-check verification harness.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgrass_cli::checks::{self, CheckOptions, DEFAULT_SEED, DEFAULT_SHAPES};
use qgrass_cli::parser::{parse_expr, parse_plucker_word, RingContext, RingValue};
use qgrass_cli::report::{CheckStatus, ReportDocument};
use qgrass_cli::wire;
use qgrass_core::dehom::DehomContext;
use qgrass_core::grassmann::{GrassAlgebra, StraightenOptions, Straightener};
use qgrass_core::qmatrix::MatrixAlgebra;

#[derive(Parser)]
#[command(
    name = "qgrass",
    about = "Exact symbolic computation in quantum matrix algebras and quantum grassmannians",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Ring {
    /// Quantum matrices O_q(M(m,n)).
    Qm,
    /// The localized quantum grassmannian of shape (k,n).
    Grass,
    /// The skew Laurent ring O_q(M(k,p))[y^{±1}].
    T,
}

#[derive(Args)]
struct ShapeArgs {
    /// Minor size k (grassmannian and Laurent rings).
    #[arg(long)]
    k: Option<usize>,
    /// Row count m (matrix ring).
    #[arg(long)]
    m: Option<usize>,
    /// Column count n.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of an expression in the selected ring.
    Nf {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value = "qm")]
        ring: Ring,
        #[arg(long)]
        expr: String,
        /// Also write the JSON form to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// The quantum determinant of the n x n algebra.
    Det {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// A quantum minor [rows | cols] of the m x n algebra.
    Minor {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Comma-separated row indices, e.g. 1,2.
        #[arg(long)]
        rows: String,
        /// Comma-separated column indices, e.g. 1,3.
        #[arg(long)]
        cols: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Standard-basis expansion of a product of Plucker brackets.
    Straighten {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// A word such as "[2,4][1,3]".
        #[arg(long)]
        expr: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Apply an automorphism descriptor to a grassmannian expression.
    ApplyAuto {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Inline JSON descriptor, or @path to read one from a file.
        #[arg(long)]
        auto: String,
        #[arg(long)]
        expr: String,
        /// Skip the degree-2 multiplicativity certification of the map.
        #[arg(long)]
        no_certify: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run one named check on one shape.
    Check {
        /// Check id from the catalog; see `qgrass check --list`.
        #[arg(long, required_unless_present = "list")]
        id: Option<String>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Corrupt one defining relation constant (harness self-test).
        #[arg(long)]
        mutate: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        /// List the catalog instead of running.
        #[arg(long)]
        list: bool,
    },
    /// Run the whole catalog over a list of shapes.
    CheckAll {
        /// Shapes as k,n pairs; repeatable. Default: 2,4 2,5 3,6.
        #[arg(long = "shape", value_parser = parse_shape)]
        shapes: Vec<(usize, usize)>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Corrupt one defining relation constant (harness self-test).
        #[arg(long)]
        mutate: bool,
        /// Write the JSON report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Write one output line; when the reader has gone away (e.g. piped into
/// `head`) stop quietly with the conventional SIGPIPE status.
fn emit(line: &str) {
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{line}").is_err() {
        std::process::exit(141);
    }
}

fn parse_shape(text: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err("expected k,n".to_string());
    }
    let k = parts[0].trim().parse().map_err(|_| "bad k")?;
    let n = parts[1].trim().parse().map_err(|_| "bad n")?;
    Ok((k, n))
}

fn parse_index_list(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("bad index '{s}'")))
        .collect()
}

fn straighten_cap_from_env() -> StraightenOptions {
    let mut opts = StraightenOptions::default();
    if let Ok(v) = std::env::var("QGRASS_MAX_DEGREE") {
        if let Ok(cap) = v.trim().parse::<usize>() {
            opts.max_degree = cap;
        }
    }
    opts
}

fn write_json(path: &PathBuf, value: &serde_json::Value) -> Result<(), String> {
    std::fs::write(
        path,
        serde_json::to_string_pretty(value).expect("serializable"),
    )
    .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Nf {
            shape,
            ring,
            expr,
            json,
        } => {
            let n = shape.n.ok_or("--n is required")?;
            match ring {
                Ring::Qm => {
                    let m = shape.m.or(shape.k).ok_or("--m is required for --ring qm")?;
                    let alg = MatrixAlgebra::new(m, n).map_err(|e| e.to_string())?;
                    let v =
                        parse_expr(&expr, &RingContext::Matrix(&alg)).map_err(|e| e.to_string())?;
                    let RingValue::Matrix(p) = &v else {
                        unreachable!()
                    };
                    emit(&p.render(alg.shape()));
                    if let Some(path) = json {
                        write_json(&path, &wire::ncpoly_to_json(p, &alg))?;
                    }
                }
                Ring::Grass => {
                    let k = shape.k.ok_or("--k is required for --ring grass")?;
                    let alg = GrassAlgebra::new(k, n).map_err(|e| e.to_string())?;
                    let v =
                        parse_expr(&expr, &RingContext::Grass(&alg)).map_err(|e| e.to_string())?;
                    let RingValue::Grass(l) = &v else {
                        unreachable!()
                    };
                    emit(&l.render());
                    if let Some(path) = json {
                        write_json(&path, &wire::localized_to_json(l, k, n))?;
                    }
                }
                Ring::T => {
                    let k = shape.k.ok_or("--k is required for --ring t")?;
                    let ctx = DehomContext::new(k, n).map_err(|e| e.to_string())?;
                    let v = parse_expr(&expr, &RingContext::T(&ctx)).map_err(|e| e.to_string())?;
                    let RingValue::T(t) = &v else { unreachable!() };
                    emit(&t.render(&ctx));
                    if let Some(path) = json {
                        write_json(&path, &wire::telement_to_json(t, &ctx))?;
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Det { n, json } => {
            let alg = MatrixAlgebra::new(n, n).map_err(|e| e.to_string())?;
            let d = alg.quantum_determinant().map_err(|e| e.to_string())?;
            emit(&d.render(alg.shape()));
            if let Some(path) = json {
                write_json(&path, &wire::ncpoly_to_json(&d, &alg))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Minor {
            m,
            n,
            rows,
            cols,
            json,
        } => {
            let alg = MatrixAlgebra::new(m, n).map_err(|e| e.to_string())?;
            let rows = parse_index_list(&rows)?;
            let cols = parse_index_list(&cols)?;
            let minor = alg.quantum_minor(&rows, &cols).map_err(|e| e.to_string())?;
            emit(&minor.render(alg.shape()));
            if let Some(path) = json {
                write_json(&path, &wire::ncpoly_to_json(&minor, &alg))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Straighten { k, n, expr, json } => {
            let alg = GrassAlgebra::new(k, n).map_err(|e| e.to_string())?;
            let word = parse_plucker_word(&expr, &alg).map_err(|e| e.to_string())?;
            let opts = straighten_cap_from_env();
            let table = Straightener::build(&alg, word.len(), &opts).map_err(|e| e.to_string())?;
            let expansion = table.straighten(&alg, &word).map_err(|e| e.to_string())?;
            for (c, w) in &expansion {
                emit(&qgrass_core::grassmann::render_expansion_term(c, w));
            }
            if let Some(path) = json {
                let terms: Vec<serde_json::Value> = expansion
                    .iter()
                    .map(|(c, w)| {
                        serde_json::json!({
                            "coeff": c.render_exact(),
                            "word": w.letters().iter().map(|l| l.cols().to_vec()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                write_json(&path, &serde_json::json!({ "terms": terms }))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ApplyAuto {
            k,
            n,
            auto,
            expr,
            no_certify,
            json,
        } => {
            let ctx = DehomContext::new(k, n).map_err(|e| e.to_string())?;
            let text = if let Some(path) = auto.strip_prefix('@') {
                std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?
            } else {
                auto
            };
            let descriptor: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| format!("bad descriptor JSON: {e}"))?;
            let spec = wire::auto_spec_from_json(&descriptor, &ctx)?;
            if !no_certify {
                let table = Straightener::build(ctx.grass(), 2, &StraightenOptions::default())
                    .map_err(|e| e.to_string())?;
                let map = spec.letter_map(&ctx).map_err(|e| e.to_string())?;
                let report =
                    qgrass_core::autos::certify_degree2(&map, ctx.grass(), ctx.grass(), &table)
                        .map_err(|e| e.to_string())?;
                if let Some(first) = report.failures.first() {
                    return Err(format!("descriptor failed certification: {first}"));
                }
            }
            let v =
                parse_expr(&expr, &RingContext::Grass(ctx.grass())).map_err(|e| e.to_string())?;
            let RingValue::Grass(l) = &v else {
                unreachable!()
            };
            let image = spec.apply(l, &ctx).map_err(|e| e.to_string())?;
            emit(&image.render());
            if let Some(path) = json {
                write_json(&path, &wire::localized_to_json(&image, k, n))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            id,
            k,
            n,
            seed,
            mutate,
            json,
            list,
        } => {
            if list {
                for def in checks::catalog() {
                    emit(&format!("{:<26} {}", def.id, def.description));
                }
                return Ok(ExitCode::SUCCESS);
            }
            let id = id.expect("clap enforces presence");
            let opts = CheckOptions { seed, mutate };
            let report = checks::run_check(&id, (k, n), &opts).map_err(|e| e.to_string())?;
            print_check_line(&report);
            let failed = report.is_fail();
            if let Some(path) = json {
                let doc = ReportDocument::new(seed, mutate, vec![(k, n)], vec![report]);
                write_json(
                    &path,
                    &serde_json::to_value(&doc).expect("report serializes"),
                )?;
            }
            Ok(if failed {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::CheckAll {
            shapes,
            seed,
            mutate,
            json,
        } => {
            let shapes = if shapes.is_empty() {
                DEFAULT_SHAPES.to_vec()
            } else {
                shapes
            };
            let opts = CheckOptions { seed, mutate };
            let reports = checks::run_all(&shapes, &opts).map_err(|e| e.to_string())?;
            let doc = ReportDocument::new(seed, mutate, shapes, reports);
            for report in &doc.checks {
                print_check_line(report);
            }
            emit(&format!(
                "pass {}  fail {}  skipped {}",
                doc.summary.pass, doc.summary.fail, doc.summary.skipped
            ));
            if let Some(path) = json {
                write_json(
                    &path,
                    &serde_json::to_value(&doc).expect("report serializes"),
                )?;
            }
            Ok(if doc.has_failures() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn print_check_line(report: &qgrass_cli::report::CheckReport) {
    let status = match report.status {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Skipped => "skip",
    };
    let mut line = format!(
        "{status} {:<26} ({},{})  {} ms",
        report.id, report.shape.0, report.shape.1, report.elapsed_ms
    );
    if let Some(reason) = &report.reason {
        line.push_str(&format!("  [{reason}]"));
    }
    emit(&line);
    for w in &report.witnesses {
        emit(&format!("      witness: {w}"));
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
