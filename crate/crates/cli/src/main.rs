use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use pencil_core::calibrate::{calibrate, constants_report, observed_symdiag_signs};
use pencil_core::diagonalize::{diagonalize_with_order, is_diagonalizable_over_q};
use pencil_core::field::FieldElement;
use pencil_core::linalg::ExactMatrix;
use pencil_core::pencil::{cubicovariant, det_form, is_decomposable, pair_discriminant, quad_covariants, Pencil};
use pencil_core::quartic::{discriminant, f6, hessian, invariants_ij, syzygy_holds, CovariantConstants, Quartic};
use pencil_core::wood::{bridge_corrected, delta, embed, verify_disc_preserving, verify_mt, verify_mt2, verify_mt3, Mt3Outcome};
use pencil_core::Error;

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "pencil", version, about = "Covariants of binary quartics and pencils of quadratic forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// JSON input file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Sweep {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Coefficient range, e.g. `-20:20`.
    #[arg(long = "box", default_value = "-20:20", value_parser = parse_box, allow_hyphen_values = true)]
    range: (i64, i64),
    /// Entry bound for the MT3 equivalence search.
    #[arg(long, default_value_t = 3)]
    bound: i64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Mt,
    Mt2,
    Mt3,
    Disc,
    Syzygy,
}

#[derive(Subcommand)]
enum Command {
    /// Hessian, sextic covariant, invariants and discriminant of a quartic.
    Covariants(Io),
    /// Covariants of a pencil `{"n", "A", "B"}`.
    Pair(Io),
    /// The pencil attached to a quartic.
    Embed(Io),
    /// Seeded sweep of one identity.
    Verify {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Simultaneous diagonalization of a pencil.
    Diagonalize {
        #[command(flatten)]
        io: Io,
        /// Shuffle the roots with this seed before canonical ordering.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Whether a pencil diagonalizes over the rationals.
    Decide(Io),
    /// Re-derive the normalization constants from random samples.
    Calibrate {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_box(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    if lo > hi {
        return Err("LO exceeds HI".into());
    }
    Ok((lo, hi))
}

/// Result of a subcommand: a JSON document and an exit code.
struct Outcome {
    body: Json,
    code: u8,
}

impl Outcome {
    fn ok(schema: &str, mut body: Json) -> Self {
        body["schema"] = json!(schema);
        Outcome { body, code: 0 }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        let code = if e.is_input_error() { 2 } else { 3 };
        let mut body = json!({ "schema": "error/v1", "error": e.kind(), "message": e.to_string() });
        if let Error::Parse { position, .. } = e {
            body["position"] = json!(position);
        }
        Outcome { body, code }
    }
}

fn read_input(path: &str) -> Result<Json, Error> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse { position: 0, message: e.to_string() })?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse { position: 0, message: format!("{path}: {e}") })?
    };
    serde_json::from_str(&text).map_err(|e| {
        let position =
            text.lines().take(e.line().saturating_sub(1)).map(|l| l.len() + 1).sum::<usize>() + e.column().saturating_sub(1);
        Error::Parse { position, message: e.to_string() }
    })
}

fn matrix_json(m: &ExactMatrix) -> Json {
    m.to_rows().iter().map(|r| r.iter().map(FieldElement::to_json).collect::<Vec<_>>()).collect()
}

fn error_marker(e: &Error) -> Json {
    json!({ "error": e.kind(), "message": e.to_string() })
}

fn cmd_covariants(v: &Json) -> Result<Outcome, Error> {
    let f = Quartic::from_json(v)?;
    let (i, j) = invariants_ij(&f);
    Ok(Outcome::ok(
        "covariants/v1",
        json!({
            "quartic": f.to_json()["quartic"],
            "H": hessian(&f).to_json(),
            "F6": f6(&f).to_json(),
            "I": i.to_json(),
            "J": j.to_json(),
            "disc": discriminant(&f).to_json(),
        }),
    ))
}

fn cmd_pair(v: &Json) -> Result<Outcome, Error> {
    let p = Pencil::from_json(v)?;
    let (gb, ga) = quad_covariants(&p);
    let (c3, decomposable) = match cubicovariant(&p) {
        Ok(c) => (c.to_json(), json!(is_decomposable(&c))),
        Err(e) => (error_marker(&e), error_marker(&e)),
    };
    let disc = pair_discriminant(&p).map(|d| d.to_json()).unwrap_or_else(|e| error_marker(&e));
    Ok(Outcome::ok(
        "pair/v1",
        json!({
            "n": p.n(),
            "det_form": det_form(&p).to_json(),
            "g_A": matrix_json(&ga),
            "g_B": matrix_json(&gb),
            "C3": c3,
            "C3_decomposable": decomposable,
            "disc": disc,
        }),
    ))
}

fn cmd_embed(v: &Json) -> Result<Outcome, Error> {
    let f = Quartic::from_json(v)?;
    Ok(Outcome::ok("embed/v1", embed(&f).pencil.to_json()))
}

fn cmd_verify(kind: Kind, s: &Sweep) -> Result<Outcome, Error> {
    let (lo, hi) = s.range;
    if let Kind::Mt3 = kind {
        return verify_mt3_grid(lo, hi, s.bound);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let constants = CovariantConstants::gram();
    let check: Box<dyn Fn(&Quartic) -> bool> = match kind {
        Kind::Mt => Box::new(verify_mt),
        Kind::Mt2 => Box::new(verify_mt2),
        Kind::Disc => Box::new(verify_disc_preserving),
        Kind::Syzygy => Box::new(move |f| syzygy_holds(f, &constants.syzygy)),
        Kind::Mt3 => unreachable!(),
    };
    let samples: Vec<Quartic> = (0..s.count).map(|_| Quartic::random(&mut rng, lo, hi)).collect();
    let failures: Vec<Json> = samples.iter().filter(|f| !check(f)).map(|f| f.to_json()).collect();
    let name = match kind {
        Kind::Mt => "mt",
        Kind::Mt2 => "mt2",
        Kind::Disc => "disc",
        Kind::Syzygy => "syzygy",
        Kind::Mt3 => unreachable!(),
    };
    let code = if failures.is_empty() { 0 } else { 1 };
    let mut out = Outcome::ok(
        "verify/v1",
        json!({ "kind": name, "seed": s.seed, "box": [lo, hi], "checked": samples.len(), "failures": failures }),
    );
    out.code = code;
    Ok(out)
}

/// Bridge identity on every `(c₁, c₂)` in the box, then an equivalence search
/// for every nondegenerate `(a, b)` in the box.
fn verify_mt3_grid(lo: i64, hi: i64, bound: i64) -> Result<Outcome, Error> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for c1 in lo..=hi {
        for c2 in lo..=hi {
            checked += 1;
            if !bridge_corrected(c1, c2) {
                failures.push(json!({ "c1": c1, "c2": c2, "check": "bridge" }));
            }
        }
    }
    let mut witnesses = Vec::new();
    let mut unresolved = Vec::new();
    for a in lo..=hi {
        for b in lo..=hi {
            if delta(a, b) == 0 {
                continue;
            }
            checked += 1;
            match verify_mt3(a, b, bound)? {
                Mt3Outcome::Witness { t, scale } => witnesses.push(json!({
                    "a": a,
                    "b": b,
                    "T": matrix_json(&t),
                    "scale": FieldElement::rational(scale).to_json(),
                })),
                Mt3Outcome::Unresolved => unresolved.push(json!({ "a": a, "b": b })),
            }
        }
    }
    let code = if failures.is_empty() { 0 } else { 1 };
    let mut out = Outcome::ok(
        "verify/v1",
        json!({
            "kind": "mt3",
            "box": [lo, hi],
            "bound": bound,
            "checked": checked,
            "failures": failures,
            "witnesses": witnesses,
            "unresolved": unresolved,
        }),
    );
    out.code = code;
    Ok(out)
}

fn cmd_diagonalize(v: &Json, seed: Option<u64>) -> Result<Outcome, Error> {
    let p = Pencil::from_json(v)?;
    Ok(Outcome::ok("diagonalize/v1", diagonalize_with_order(&p, seed)?.to_json()))
}

fn cmd_decide(v: &Json) -> Result<Outcome, Error> {
    let p = Pencil::from_json(v)?;
    Ok(Outcome::ok("decide/v1", is_diagonalizable_over_q(&p)?.to_json()))
}

fn cmd_calibrate(seed: u64, count: usize) -> Result<Outcome, Error> {
    let c = calibrate(seed)?;
    let signs = observed_symdiag_signs(seed, count)?;
    let mut out = Outcome::ok("constants/v1", constants_report(&c, &signs));
    if c != CovariantConstants::gram() {
        out.body["matches_frozen"] = json!(false);
        out.code = 1;
    }
    Ok(out)
}

fn run(cli: Cli) -> (Outcome, Option<PathBuf>) {
    let with_input = |io: &Io, f: &dyn Fn(&Json) -> Result<Outcome, Error>| {
        let out = read_input(&io.input).and_then(|v| f(&v)).unwrap_or_else(Outcome::from);
        (out, io.output.clone())
    };
    match cli.command {
        Command::Covariants(io) => with_input(&io, &cmd_covariants),
        Command::Pair(io) => with_input(&io, &cmd_pair),
        Command::Embed(io) => with_input(&io, &cmd_embed),
        Command::Decide(io) => with_input(&io, &cmd_decide),
        Command::Diagonalize { io, seed } => with_input(&io, &|v| cmd_diagonalize(v, seed)),
        Command::Verify { kind, sweep } => (cmd_verify(kind, &sweep).unwrap_or_else(Outcome::from), sweep.output.clone()),
        Command::Calibrate { seed, count, output } => (cmd_calibrate(seed, count).unwrap_or_else(Outcome::from), output),
    }
}

fn main() -> ExitCode {
    let (out, path) = run(Cli::parse());
    let text = serde_json::to_string_pretty(&out.body).expect("serializable") + "\n";
    let written = match path {
        Some(p) => fs::write(&p, text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("pencil: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(out.code)
}
