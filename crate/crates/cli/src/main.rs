use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qsphere::bridge::verify_isomorphism;
use qsphere::export::GroupoidExport;
use qsphere::literal::{parse_germ_representative, ElementLiteral};
use qsphere::oracle::{compare_all, sphere_relations_check, theta_generator_check, TruncationSpec};
use qsphere::semigroup::relations::{check_product_rules, LOWER_TIMES_HIGHER, TOP_LEVEL};
use qsphere::spectrum::{phi_eval, phi_eval_element, spectrum};
use qsphere::{germ_eq, Error, ExtendedIndex, Germ, Idempotent, SheuTriple, TElement};
use serde::Serialize;
use serde_json::{json, Value};

const RELATION_TOLERANCE: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "qsphere",
    version,
    about = "Inverse semigroup, germ groupoid and oracle tools"
)]
struct Cli {
    /// Rank; inferred from explicit literals when possible, otherwise 2.
    #[arg(long, global = true)]
    ell: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Deformation parameter for the relation suite.
    #[arg(long, global = true, default_value_t = 0.5)]
    q: f64,

    /// Truncation of the shift legs.
    #[arg(long = "trunc-n", global = true, default_value_t = 8)]
    trunc_n: u64,

    /// Truncation of the circle leg.
    #[arg(long = "trunc-z", global = true, default_value_t = 8)]
    trunc_z: i64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Products,
    Relations,
    Regular,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Germ,
    Sheu,
}

#[derive(Subcommand)]
enum Command {
    /// Product of two elements.
    Mul { a: String, b: String },
    /// Adjoint of an element.
    Star { a: String },
    /// Normal form of an element literal.
    Canon { a: String },
    /// Value of the tight character at K on a projection.
    CharEval { k: String, e: String },
    /// Canonical points of the spectrum with their supports.
    Spectrum {
        #[arg(long, default_value_t = 2)]
        bound: u64,
    },
    /// Product of two germs.
    GermCompose { g: String, h: String },
    /// Whether two germ representatives are equal.
    GermEq { g: String, h: String },
    /// Product of two Sheu triples.
    SheuCompose { g: String, h: String },
    /// Exhaustive isomorphism check over bounded triples.
    IsoCheck {
        /// z,x,w bounds.
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 2, 2])]
        bounds: Vec<u64>,
    },
    /// Compare the symbolic engine against truncated operators.
    OracleVerify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Index bound of the element enumeration for the product suite.
        #[arg(long, default_value_t = 1)]
        bound: u64,
    },
    /// Bounded piece of a groupoid as a graph.
    ExportGroupoid {
        /// One bound, or z,x,w bounds for Sheu triples.
        #[arg(long, value_delimiter = ',', default_values_t = [1u64])]
        bounds: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Kind::Germ)]
        groupoid: Kind,
    },
    /// Audit of the product rules over an enumeration.
    CheckRelations {
        #[arg(long, default_value_t = 2)]
        bound: u64,
    },
}

enum Failure {
    Input { error: Error, text: Option<String> },
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure::Input { error, text: None }
    }
}

type Outcome = Result<String, Failure>;

fn parse<T, F>(text: &str, f: F) -> Result<T, Failure>
where
    F: FnOnce(&str) -> qsphere::Result<T>,
{
    f(text).map_err(|error| Failure::Input {
        error,
        text: Some(text.to_string()),
    })
}

fn render<T: Serialize + ToString>(v: &T, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("plain data"),
        _ => v.to_string(),
    }
}

fn report<T: Serialize>(rep: &T, passed: bool, summary: String, format: Format) -> Outcome {
    let value = serde_json::to_value(rep).expect("plain data");
    if !passed {
        return Err(Failure::Verification(value));
    }
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&value).expect("plain data"),
        _ => summary,
    })
}

fn elements(cli: &Cli, texts: &[&str]) -> Result<Vec<TElement>, Failure> {
    let lits = texts
        .iter()
        .map(|t| parse(t, |s| s.parse::<ElementLiteral>()))
        .collect::<Result<Vec<_>, _>>()?;
    let ell = cli
        .ell
        .or_else(|| lits.iter().find_map(ElementLiteral::ell))
        .unwrap_or(2);
    texts
        .iter()
        .zip(&lits)
        .map(|(t, l)| parse(t, |_| l.resolve(ell)))
        .collect()
}

fn bounds_error(found: usize) -> Failure {
    Failure::Input {
        error: Error::Parse {
            position: 0,
            message: format!("expected 3 comma-separated bounds, found {found}"),
        },
        text: None,
    }
}

fn spec(cli: &Cli, ell: usize, q: f64) -> Result<TruncationSpec, Failure> {
    Ok(TruncationSpec::new(ell, cli.trunc_n, cli.trunc_z, q)?)
}

fn run(cli: &Cli) -> Outcome {
    let format = cli.format;
    if format == Format::Dot && !matches!(cli.command, Command::ExportGroupoid { .. }) {
        return Err(Failure::Input {
            error: Error::Parse {
                position: 0,
                message: "--format dot only applies to export-groupoid".into(),
            },
            text: None,
        });
    }
    let ell = cli.ell.unwrap_or(2);
    match &cli.command {
        Command::Mul { a, b } => {
            let v = elements(cli, &[a, b])?;
            Ok(render(&v[0].mul(&v[1])?, format))
        }
        Command::Star { a } => Ok(render(&elements(cli, &[a])?[0].star(), format)),
        Command::Canon { a } => Ok(render(&elements(cli, &[a])?[0], format)),
        Command::CharEval { k, e } => {
            let k: ExtendedIndex = parse(k, str::parse)?;
            let value = if e.trim_start().starts_with("p_") {
                let p: Idempotent = parse(e, str::parse)?;
                if p.ell() != k.ell() {
                    return Err(Error::DimensionMismatch {
                        expected: k.ell(),
                        found: p.ell(),
                    }
                    .into());
                }
                phi_eval(&k, &p)
            } else {
                let x = parse(e, |s| s.parse::<ElementLiteral>()?.resolve(k.ell()))?;
                if !x.is_zero() && !x.is_idempotent() {
                    return Err(Failure::Input {
                        error: Error::Parse {
                            position: 0,
                            message: format!("{x} is not a projection"),
                        },
                        text: Some(e.clone()),
                    });
                }
                phi_eval_element(&k, &x)
            };
            Ok(match format {
                Format::Json => json!({ "index": k.to_string(), "value": u8::from(value) }).to_string(),
                _ => u8::from(value).to_string(),
            })
        }
        Command::Spectrum { bound } => {
            let points = spectrum(ell, *bound);
            Ok(match format {
                Format::Json => serde_json::to_string_pretty(&points).expect("plain data"),
                _ => points
                    .iter()
                    .map(|p| format!("{}: {}", p.index, p.support.join(" ")))
                    .collect::<Vec<_>>()
                    .join("\n"),
            })
        }
        Command::GermCompose { g, h } => {
            let g: Germ = parse(g, str::parse)?;
            let h: Germ = parse(h, str::parse)?;
            Ok(render(&g.compose(&h)?, format))
        }
        Command::GermEq { g, h } => {
            let g = parse(g, parse_germ_representative)?;
            let h = parse(h, parse_germ_representative)?;
            let eq = germ_eq(&g, &h);
            Ok(match format {
                Format::Json => json!({ "equal": eq }).to_string(),
                _ => eq.to_string(),
            })
        }
        Command::SheuCompose { g, h } => {
            let g: SheuTriple = parse(g, str::parse)?;
            let h: SheuTriple = parse(h, str::parse)?;
            Ok(render(&g.compose(&h)?, format))
        }
        Command::IsoCheck { bounds } => {
            if bounds.len() != 3 {
                return Err(bounds_error(bounds.len()));
            }
            let rep = verify_isomorphism(ell, bounds[0], bounds[1], bounds[2]);
            let summary = format!(
                "ok: ell={ell} triples={} germs={} composable_pairs={} lifts={}",
                rep.triples, rep.germs, rep.composable_pairs, rep.lifts
            );
            report(&rep, rep.passed(), summary, format)
        }
        Command::OracleVerify { suite, bound } => {
            let mut out = serde_json::Map::new();
            let mut passed = true;
            let mut lines = Vec::new();
            if matches!(suite, Suite::Products | Suite::All) {
                let rep = compare_all(spec(cli, ell, 0.0)?, *bound)?;
                passed &= rep.failed == 0;
                lines.push(format!("products: checked={} failed={}", rep.checked, rep.failed));
                out.insert("products".into(), serde_json::to_value(&rep).expect("plain data"));
            }
            if matches!(suite, Suite::Relations | Suite::All) {
                let rep = sphere_relations_check(spec(cli, ell, cli.q)?);
                passed &= rep.max_residual <= RELATION_TOLERANCE;
                lines.push(format!(
                    "relations: q={} checked={} max_residual={:.3e}",
                    cli.q, rep.checked, rep.max_residual
                ));
                out.insert("relations".into(), serde_json::to_value(&rep).expect("plain data"));
            }
            if matches!(suite, Suite::Regular | Suite::All) {
                let checks = theta_generator_check(spec(cli, ell, 0.0)?)?;
                passed &= checks.iter().all(|c| c.comparison.exact());
                for c in &checks {
                    lines.push(format!(
                        "regular: k={} checked={} max_diff={}",
                        c.k, c.comparison.checked, c.comparison.max_residual
                    ));
                }
                out.insert("regular".into(), serde_json::to_value(&checks).expect("plain data"));
            }
            report(&Value::Object(out), passed, lines.join("\n"), format)
        }
        Command::ExportGroupoid { bounds, groupoid } => {
            let ex = match (groupoid, bounds.as_slice()) {
                (Kind::Germ, [b]) => GroupoidExport::germs(ell, *b),
                (Kind::Germ, bs) => GroupoidExport::germs(ell, bs.iter().copied().min().unwrap_or(1)),
                (Kind::Sheu, [bz, bx, bw]) => {
                    GroupoidExport::from_triples(ell, &SheuTriple::enumerate(ell, *bz as i64, *bx as i64, *bw))
                }
                (Kind::Sheu, [b]) => {
                    GroupoidExport::from_triples(ell, &SheuTriple::enumerate(ell, *b as i64, *b as i64, *b))
                }
                (Kind::Sheu, bs) => return Err(bounds_error(bs.len())),
            };
            Ok(match format {
                Format::Json => ex.to_json(),
                _ => ex.to_dot().trim_end().to_string(),
            })
        }
        Command::CheckRelations { bound } => {
            let audit = check_product_rules(ell, *bound);
            let find = |name: &str| audit.relations.iter().find(|r| r.name == name);
            let top_ok = find(TOP_LEVEL).is_some_and(|r| r.readings.iter().all(|x| x.holds()));
            let lower_ok = find(LOWER_TIMES_HIGHER)
                .and_then(|r| r.reading("output level k = j"))
                .is_some_and(|x| x.holds());
            let passed = top_ok && lower_ok && audit.consistent_same_level_readings.len() == 1;
            let summary = format!(
                "ok: ell={} bound={} elements={} same-level reading: {}",
                audit.ell,
                audit.bound,
                audit.elements,
                audit.consistent_same_level_readings.join("; ")
            );
            report(&audit, passed, summary, format)
        }
    }
}

// a closed pipe is not an error worth reporting
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(value)) => {
            emit(&serde_json::to_string_pretty(&value).expect("plain data"));
            ExitCode::from(1)
        }
        Err(Failure::Input { error, text }) => {
            eprintln!("error: {error}");
            if let (Error::Parse { position, .. }, Some(text)) = (&error, text) {
                let compact: String = text.chars().filter(|c| !c.is_ascii_whitespace()).collect();
                eprintln!("  {compact}");
                eprintln!("  {}^", " ".repeat(*position));
            }
            ExitCode::from(2)
        }
    }
}
