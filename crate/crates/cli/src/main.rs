mod suites;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use uctkit::abgroups::{ext_group, hom_group, tensor_group, tor_group, FgAbGroup};
use uctkit::catalog;
use uctkit::complexes::{g_dual, FreeComplex, Orientation};
use uctkit::extuct::{cocycle_space, pext_fg, uct_report, DEFAULT_BOUND};
use uctkit::proind::{pair_space_uct_report, parse_tower, polyhedron_uct_report, space_uct_report, TowerInput};
use uctkit::simplicial::SimplicialComplex;
use uctkit::Error;

const DEFAULT_SEED: u64 = 42;
const DEFAULT_DEPTH_LIMIT: usize = 16;

#[derive(Parser)]
#[command(name = "uct", version, about = "Homology, cohomology and universal coefficient sequences")]
struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Coeff {
    /// Coefficient group, e.g. `Z`, `Z/4`, `Z^2+Z/2`.
    #[arg(long, default_value = "Z")]
    coeff: String,
    #[arg(long, allow_negative_numbers = true)]
    degree: i64,
}

#[derive(Subcommand)]
enum Command {
    /// H_n of a complex (chain complexes and simplicial complexes) with coefficients.
    Homology {
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        c: Coeff,
    },
    /// H^n of a complex with coefficients.
    Cohomology {
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        c: Coeff,
    },
    /// The UCT sequence of a complex in one degree, with its verdicts.
    Uct {
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        c: Coeff,
    },
    /// Hom, Ext and PExt of two groups; Ext is checked against cocycles when the group is small and finite.
    Ext {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// UCT report for the limit of a tower of spaces (or pairs).
    SpaceReport {
        #[arg(long)]
        tower: PathBuf,
        #[command(flatten)]
        c: Coeff,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// UCT report for an increasing union of finite complexes.
    PolyhedronReport {
        #[arg(long)]
        cofiltration: PathBuf,
        #[command(flatten)]
        c: Coeff,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Run a seeded self-checking suite.
    Verify {
        #[arg(long, default_value = "uct-random")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Print or write a canned input document; lists the names without one.
    Examples {
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure that maps to exit code 2.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<(Value, bool), InputError>;

fn read_json(path: &Path) -> Result<Value, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("cannot read `{}`: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("`{}` is not valid JSON: {e}", path.display())))
}

fn read_complex(path: &Path) -> Result<FreeComplex, InputError> {
    let v = read_json(path)?;
    if v.get("facets").is_some() {
        Ok(SimplicialComplex::from_json(&v)?.chain_complex())
    } else {
        Ok(FreeComplex::from_json(&v)?)
    }
}

fn parse_coeff(s: &str) -> Result<FgAbGroup, InputError> {
    Ok(FgAbGroup::parse_keyed(s, "coeff")?)
}

fn depth_limit() -> Result<usize, InputError> {
    match std::env::var("UCTKIT_DEPTH_LIMIT") {
        Err(_) => Ok(DEFAULT_DEPTH_LIMIT),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|d| *d >= 1)
            .ok_or_else(|| InputError(format!("UCTKIT_DEPTH_LIMIT must be a positive integer, got {s:?}"))),
    }
}

fn checked_depth(depth: usize) -> Result<usize, InputError> {
    if depth < 1 {
        return Err(InputError("invalid input at `depth`: must be at least 1".into()));
    }
    Ok(depth.min(depth_limit()?))
}

/// `H_n(A; G)` for a chain complex, `H_n(Hom(A, G))` for a cochain complex.
fn homology(a: &FreeComplex, g: &FgAbGroup, n: i64) -> Outcome {
    let h = match a.orientation() {
        Orientation::Chain => a.with_coeff(g).homology(n).group,
        Orientation::Cochain => g_dual(a, g)?.homology(n).group,
    };
    let v = json!({ "degree": n, "coeff": g.to_string(), "homology": h.to_string() });
    Ok((v, true))
}

/// `H^n(Hom(A, G))` for a chain complex, `H^n(A; G)` for a cochain complex.
fn cohomology(a: &FreeComplex, g: &FgAbGroup, n: i64) -> Outcome {
    let h = match a.orientation() {
        Orientation::Chain => a.transpose().with_coeff(g).homology(n).group,
        Orientation::Cochain => a.with_coeff(g).homology(n).group,
    };
    let v = json!({ "degree": n, "coeff": g.to_string(), "cohomology": h.to_string() });
    Ok((v, true))
}

/// The sequence `Ext(H^{n+1}) → H_n(A*) → Hom(H^n)` of the cochain complex
/// (for a chain complex `C`, of `C^T`, so the middle is `H_n(C; G)`).
fn uct(a: &FreeComplex, g: &FgAbGroup, n: i64) -> Outcome {
    let a = match a.orientation() {
        Orientation::Chain => a.transpose(),
        Orientation::Cochain => a.clone(),
    };
    let r = uct_report(&a, g, n)?;
    let ok = r.verdicts.all() && r.middle_is_sum;
    let v = json!({
        "degree": n,
        "coeff": g.to_string(),
        "ext_part": r.ext_part.to_string(),
        "middle": r.middle.to_string(),
        "hom_part": r.hom_part.to_string(),
        "verdicts": {
            "exact_left": r.verdicts.exact_left,
            "exact_middle": r.verdicts.exact_middle,
            "exact_right": r.verdicts.exact_right,
            "split_ok": r.verdicts.split_ok,
        },
        "middle_is_sum": r.middle_is_sum,
    });
    Ok((v, ok))
}

fn ext(a: &str, g: &str, bound: usize) -> Outcome {
    let a = FgAbGroup::parse_keyed(a, "group")?;
    let g = parse_coeff(g)?;
    let e = ext_group(&a, &g);
    let mut v = json!({
        "group": a.to_string(),
        "coeff": g.to_string(),
        "hom": hom_group(&a, &g).to_string(),
        "ext": e.to_string(),
        "pext": pext_fg(&a, &g)?.to_string(),
        "tensor": tensor_group(&a, &g).to_string(),
        "tor": tor_group(&a, &g).to_string(),
    });
    let mut ok = true;
    let small = a.order().is_some_and(|o| o <= bound.into());
    if small {
        let cocycles = cocycle_space(&a, &g, bound)?.ext().clone();
        ok = cocycles == e;
        v["cocycle_ext"] = json!(cocycles.to_string());
        v["cocycles_match"] = json!(ok);
    }
    Ok((v, ok))
}

fn space_report(path: &Path, g: &FgAbGroup, n: i64, depth: usize) -> Outcome {
    let input = parse_tower(&read_json(path)?)?;
    let t = input.chain_tower()?;
    let r = space_uct_report(&t, g, n, depth)?;
    let mut ok = r.verdicts_hold();
    let mut v = r.to_json();
    if let TowerInput::Simplicial { tower, subs: Some(subs) } = &input {
        let p = pair_space_uct_report(tower, subs, g, n, depth)?;
        ok &= p.verdicts_hold();
        v["pair"] = p.to_json();
    }
    v["depth"] = json!(depth);
    Ok((v, ok))
}

fn parse_complex_list(v: &Value, key: &str) -> Result<Vec<SimplicialComplex>, InputError> {
    let arr = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| InputError(format!("invalid input at `{key}`: expected an array of complexes")))?;
    Ok(arr
        .iter()
        .enumerate()
        .map(|(i, k)| SimplicialComplex::from_json_keyed(k, &format!("{key}[{i}].facets")))
        .collect::<uctkit::Result<Vec<_>>>()?)
}

fn polyhedron_report(path: &Path, g: &FgAbGroup, n: i64, depth: usize) -> Outcome {
    let doc = read_json(path)?;
    let ks = parse_complex_list(&doc, "cofiltration")?;
    let subs = match doc.get("subcomplexes") {
        None | Some(Value::Null) => None,
        Some(_) => Some(parse_complex_list(&doc, "subcomplexes")?),
    };
    let r = polyhedron_uct_report(&ks, subs.as_deref(), g, n, depth)?;
    let mut v = r.to_json();
    v["depth"] = json!(depth);
    Ok((v, r.verdicts_hold()))
}

fn verify(suite: &str, seed: u64, count: usize) -> Outcome {
    if !suites::SUITES.contains(&suite) {
        return Err(InputError(format!(
            "invalid input at `suite`: unknown suite `{suite}`; known: {}",
            suites::SUITES.join(", ")
        )));
    }
    let v = suites::run(suite, seed, count)?;
    let ok = v["passed"] == v["count"];
    Ok((v, ok))
}

fn examples(name: Option<&str>, out: Option<&Path>) -> Outcome {
    let Some(name) = name else {
        return Ok((json!({ "examples": catalog::NAMES }), true));
    };
    let doc = catalog::document(name).map_err(|e| InputError(format!("invalid input at `name`: {e}")))?;
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
        fs::write(path, text).map_err(|e| InputError(format!("cannot write `{}`: {e}", path.display())))?;
        return Ok((json!({ "example": name, "written": path.display().to_string() }), true));
    }
    Ok((doc, true))
}

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::Homology { complex, c } => homology(&read_complex(complex)?, &parse_coeff(&c.coeff)?, c.degree),
        Command::Cohomology { complex, c } => cohomology(&read_complex(complex)?, &parse_coeff(&c.coeff)?, c.degree),
        Command::Uct { complex, c } => uct(&read_complex(complex)?, &parse_coeff(&c.coeff)?, c.degree),
        Command::Ext { group, coeff, bound } => ext(group, coeff, *bound),
        Command::SpaceReport { tower, c, depth } => {
            space_report(tower, &parse_coeff(&c.coeff)?, c.degree, checked_depth(*depth)?)
        }
        Command::PolyhedronReport { cofiltration, c, depth } => {
            polyhedron_report(cofiltration, &parse_coeff(&c.coeff)?, c.degree, checked_depth(*depth)?)
        }
        Command::Verify { suite, seed, count } => verify(suite, *seed, *count),
        Command::Examples { name, out } => examples(name.as_deref(), out.as_deref()),
    }
}

/// Text rendering of a report: a headline where one exists, then one
/// `path: value` line per leaf.
fn render(cmd: &Command, v: &Value) -> String {
    match cmd {
        Command::Homology { .. } => return format!("H_{} = {}", v["degree"], str_of(&v["homology"])),
        Command::Cohomology { .. } => return format!("H^{} = {}", v["degree"], str_of(&v["cohomology"])),
        Command::Verify { .. } => {
            return format!(
                "{}: {}/{} pass (seed {})",
                str_of(&v["suite"]),
                v["passed"],
                v["count"],
                v["seed"]
            )
        }
        Command::Examples { out: None, name: Some(_) } => {
            return serde_json::to_string_pretty(v).expect("serializable");
        }
        _ => {}
    }
    let mut lines = Vec::new();
    flatten("", v, &mut lines);
    lines.join("\n")
}

fn str_of(v: &Value) -> String {
    v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(xs) => out.push(format!(
            "{prefix}: [{}]",
            xs.iter().map(str_of).collect::<Vec<_>>().join(", ")
        )),
        other => out.push(format!("{prefix}: {}", str_of(other))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok((v, ok)) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&v).expect("serializable")
            } else {
                render(&cli.command, &v)
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
