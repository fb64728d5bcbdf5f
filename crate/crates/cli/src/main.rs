use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use lifted::codes::{build_code, point_from_index, write_generator_dump, CodeSpec, Encoder};
use lifted::counting::{
    base_ell, bruteforce_base_state, count_dstar_bad, exact_rate, iterate_recurrence,
    spectral_report,
};
use lifted::gf2e::FieldElement;
use lifted::monomials::{enumerate_good, DEFAULT_BUDGET};
use lifted::recovery::{
    simulate_batch, simulate_lcc, simulate_pir, trial_rng, LineReading, SimulationReport,
};
use lifted::verify::{all_passed, run_quick_checks};

/// Bumped whenever a JSON field is renamed or removed.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "lifted",
    version,
    about = "Lifted Reed-Solomon and multiplicity codes over GF(2^l)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dominant eigenvalue, gap and p_m of the transfer matrix for a range of m.
    Spectra {
        #[arg(long, default_value_t = 2)]
        m_min: usize,
        #[arg(long, default_value_t = 10)]
        m_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Bad-monomial counts s_j(l), by brute force and by the recurrence.
    Count {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 4)]
        ell_max: u32,
        /// Largest brute-force search, in vectors visited.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        out: Output,
    },
    /// Dimension, rate and distance bound of a code; with --ell-max, one row per q = 2^l.
    Rate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        ell_max: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Generator matrix dump of the good-monomial code.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Encodes a message (given, or drawn from --seed) and prints every symbol.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated field elements, one per basis monomial.
        #[arg(long)]
        message: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Reconstruction from every disjoint recovery set at random targets.
    PirSim {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Targets per codeword.
        #[arg(long, default_value_t = 10)]
        targets: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Greedy batch recovery of random request multisets.
    BatchSim {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Local self-correction against random corruption of fewer than alpha * Delta_min * q^m symbols.
    LccSim {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Reading::Punctured)]
        reading: Reading,
        #[command(flatten)]
        out: Output,
    },
    /// Runs the invariant suite; exits nonzero if any check fails.
    Verify {
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Clone, Copy)]
struct CodeArgs {
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long, default_value_t = 4)]
    q: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
}

impl CodeArgs {
    fn spec(self) -> Result<CodeSpec> {
        CodeSpec::new(self.m, self.s, self.q, self.r).context("invalid code parameters")
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reading {
    Punctured,
    Full,
}

/// A table rendered as CSV or as a JSON array of objects.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::String(x) => x.clone(),
                    Value::Null => String::new(),
                    other => other.to_string(),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: serde_json::Map<String, Value> = self
                        .header
                        .iter()
                        .cloned()
                        .zip(row.iter().cloned())
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

fn emit(out: &Output, command: &str, table: &Table, extra: Value) -> Result<()> {
    let text = match out.format {
        Format::Csv => table.csv(),
        Format::Json => {
            let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command, "rows": table.json_rows() });
            if let (Value::Object(doc), Value::Object(extra)) = (&mut doc, extra) {
                doc.extend(extra);
            }
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s
        }
    };
    write_text(out, &text)
}

fn write_text(out: &Output, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => {
            let mut f = BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            f.write_all(text.as_bytes())?;
            f.flush()?;
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Five significant digits: fixed point for moderate magnitudes, scientific otherwise.
fn sig5(x: f64) -> String {
    if x == 0.0 {
        return "0.0000".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-3..5).contains(&e) {
        format!("{:.*}", (4 - e) as usize, x)
    } else {
        format!("{x:.4e}")
    }
}

fn sig5_value(x: f64) -> Value {
    json!(sig5(x).parse::<f64>().expect("formatted float parses"))
}

fn cmd_spectra(m_min: usize, m_max: usize, out: &Output) -> Result<()> {
    if m_min < 2 || m_max > 16 || m_min > m_max {
        bail!("m range {m_min}..={m_max} must lie within 2..=16");
    }
    let mut t = Table::new(&["m", "lambda_m", "gap", "p_m"]);
    for m in m_min..=m_max {
        let rep = spectral_report(m).with_context(|| format!("spectrum for m={m}"))?;
        t.rows.push(match out.format {
            Format::Csv => vec![
                json!(m),
                json!(sig5(rep.lambda_m)),
                json!(sig5(rep.gap)),
                json!(sig5(rep.p_m)),
            ],
            Format::Json => vec![
                json!(m),
                sig5_value(rep.lambda_m),
                sig5_value(rep.gap),
                sig5_value(rep.p_m),
            ],
        });
    }
    emit(out, "spectra", &t, json!({}))
}

fn cmd_count(m: usize, r: u32, ell_max: u32, budget: u128, out: &Output) -> Result<()> {
    if r as usize > m || r == 0 {
        bail!("count needs 1 <= r <= m, got m={m}, r={r}");
    }
    let base = bruteforce_base_state(m, r, base_ell(r), budget)
        .with_context(|| format!("brute-force base case at l={}", base_ell(r)))?;
    let mut header = vec!["ell".to_string(), "method".to_string()];
    header.extend((0..m).map(|j| format!("s_{j}")));
    let mut t = Table {
        header,
        rows: Vec::new(),
    };
    for ell in base.ell..=ell_max {
        let rec = iterate_recurrence(&base, ell)?;
        // Decimal strings, since the counts outgrow 64 bits.
        let row = |method: &str, counts: Vec<String>| -> Vec<Value> {
            let mut row = vec![json!(ell), json!(method)];
            row.extend(counts.into_iter().map(Value::String));
            row
        };
        if let Ok(brute) = bruteforce_base_state(m, r, ell, budget) {
            t.rows.push(row(
                "brute",
                brute.counts.iter().map(ToString::to_string).collect(),
            ));
        }
        t.rows.push(row(
            "recurrence",
            rec.counts.iter().map(ToString::to_string).collect(),
        ));
    }
    emit(out, "count", &t, json!({ "m": m, "r": r }))
}

fn rate_row(spec: &CodeSpec) -> Result<Vec<Value>> {
    let rate = exact_rate(spec.m, spec.s, spec.q, spec.d())?;
    let dim = enumerate_good(spec.m, spec.s, spec.q, spec.d())?.len();
    let dist = if spec.m >= 2 {
        Some(spec.distance_bound()?)
    } else {
        None
    };
    let bad = if spec.s == 1 {
        Some(count_dstar_bad(spec.m, spec.q, spec.r)?)
    } else {
        None
    };
    Ok(vec![
        json!(spec.m),
        json!(spec.s),
        json!(spec.q),
        json!(spec.r),
        json!(spec.d()),
        json!(dim),
        json!(spec.length() * spec.symbol_len()),
        json!(format!("{}/{}", rate.numer(), rate.denom())),
        json!(*rate.numer() as f64 / *rate.denom() as f64),
        bad.map_or(Value::Null, |b| json!(b)),
        dist.as_ref().map_or(Value::Null, |d| json!(d.absolute)),
        dist.as_ref().map_or(Value::Null, |d| {
            json!(format!("{}/{}", d.relative.0, d.relative.1))
        }),
    ])
}

fn cmd_rate(code: CodeArgs, ell_max: Option<u32>, out: &Output) -> Result<()> {
    let mut t = Table::new(&[
        "m",
        "s",
        "q",
        "r",
        "d",
        "dimension",
        "length",
        "rate",
        "rate_float",
        "bad_count",
        "distance_bound",
        "relative_distance_bound",
    ]);
    match ell_max {
        None => t.rows.push(rate_row(&code.spec()?)?),
        Some(top) => {
            for ell in 1..=top {
                let q = 1u32 << ell;
                if let Ok(spec) = CodeSpec::new(code.m, code.s, q, code.r) {
                    t.rows.push(rate_row(&spec)?);
                }
            }
            if t.rows.is_empty() {
                bail!(
                    "no q = 2^l with l <= {top} admits s={} and r={}",
                    code.s,
                    code.r
                );
            }
        }
    }
    emit(out, "rate", &t, json!({}))
}

fn cmd_build(code: CodeArgs, out: &Output) -> Result<()> {
    let spec = code.spec()?;
    let enc = Encoder::new(build_code(&spec)?);
    match out.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_generator_dump(&enc, &mut buf)?;
            write_text(out, std::str::from_utf8(&buf)?)
        }
        Format::Json => {
            let rows: Vec<Vec<u32>> = enc
                .rows()
                .iter()
                .map(|r| r.iter().map(|e| e.value()).collect())
                .collect();
            let basis: Vec<&[u32]> = enc.basis.monomials.iter().map(|d| d.exps()).collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "build",
                "spec": spec,
                "basis": basis,
                "generator": rows,
            });
            write_text(out, &(serde_json::to_string(&doc)? + "\n"))
        }
    }
}

fn parse_message(text: &str, q: u32, k: usize) -> Result<Vec<FieldElement>> {
    let msg: Vec<FieldElement> = text
        .split(',')
        .map(|x| {
            let v: u32 = x
                .trim()
                .parse()
                .with_context(|| format!("message entry {x:?} is not a number"))?;
            if v >= q {
                bail!("message entry {v} is not in GF({q})");
            }
            Ok(FieldElement::from_raw(v))
        })
        .collect::<Result<_>>()?;
    if msg.len() != k {
        bail!(
            "message has {} entries, the code has dimension {k}",
            msg.len()
        );
    }
    Ok(msg)
}

fn cmd_encode(code: CodeArgs, message: Option<&str>, seed: u64, out: &Output) -> Result<()> {
    let spec = code.spec()?;
    let enc = Encoder::new(build_code(&spec)?);
    let msg = match message {
        Some(text) => parse_message(text, spec.q, enc.dimension())?,
        None => enc.random_message(&mut trial_rng(seed, 0)),
    };
    let word = enc.encode(&msg)?;
    let mut header = vec!["point".to_string()];
    header.extend((1..=spec.m).map(|j| format!("x{j}")));
    header.extend((0..spec.symbol_len()).map(|k| format!("e{k}")));
    let mut t = Table {
        header,
        rows: Vec::new(),
    };
    for p in 0..spec.length() {
        let mut row = vec![json!(p)];
        row.extend(
            point_from_index(spec.q, spec.m, p)
                .iter()
                .map(|x| json!(x.value())),
        );
        row.extend(word.symbol_at(p).iter().map(|x| json!(x.value())));
        t.rows.push(row);
    }
    let message: Vec<u32> = msg.iter().map(|x| x.value()).collect();
    emit(
        out,
        "encode",
        &t,
        json!({ "spec": spec, "message": message }),
    )
}

#[derive(Serialize)]
struct SimulationRecord<'a> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    report: &'a SimulationReport,
}

fn emit_simulation(out: &Output, command: &str, rep: &SimulationReport) -> Result<()> {
    let text = match out.format {
        Format::Csv => {
            let alpha = rep.alpha.map_or(String::new(), |a| a.to_string());
            format!(
                "m,s,q,r,trials,alpha,success_rate,mean_queries,seed\n{},{},{},{},{},{},{},{},{}\n",
                rep.spec.m,
                rep.spec.s,
                rep.spec.q,
                rep.spec.r,
                rep.trials,
                alpha,
                rep.success_rate,
                rep.mean_queries,
                rep.seed
            )
        }
        Format::Json => {
            serde_json::to_string_pretty(&SimulationRecord {
                schema_version: SCHEMA_VERSION,
                command,
                report: rep,
            })? + "\n"
        }
    };
    write_text(out, &text)
}

fn cmd_verify(out: &Output) -> Result<bool> {
    let checks = run_quick_checks();
    let mut t = Table::new(&["check", "passed", "detail"]);
    for c in &checks {
        // Commas would break the CSV columns.
        t.rows.push(vec![
            json!(c.name),
            json!(c.passed),
            json!(c.detail.replace(',', ";")),
        ]);
    }
    let ok = all_passed(&checks);
    emit(out, "verify", &t, json!({ "all_passed": ok }))?;
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Spectra { m_min, m_max, out } => cmd_spectra(m_min, m_max, &out)?,
        Command::Count {
            m,
            r,
            ell_max,
            budget,
            out,
        } => cmd_count(m, r, ell_max, budget, &out)?,
        Command::Rate { code, ell_max, out } => cmd_rate(code, ell_max, &out)?,
        Command::Build { code, out } => cmd_build(code, &out)?,
        Command::Encode {
            code,
            message,
            seed,
            out,
        } => cmd_encode(code, message.as_deref(), seed, &out)?,
        Command::PirSim {
            code,
            trials,
            targets,
            seed,
            out,
        } => {
            let rep = simulate_pir(&code.spec()?, trials, targets, seed)?;
            emit_simulation(&out, "pir-sim", &rep)?;
        }
        Command::BatchSim {
            code,
            trials,
            seed,
            out,
        } => {
            let rep = simulate_batch(&code.spec()?, trials, seed)?;
            emit_simulation(&out, "batch-sim", &rep)?;
        }
        Command::LccSim {
            code,
            alpha,
            trials,
            seed,
            reading,
            out,
        } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                bail!("alpha must lie in (0, 1), got {alpha}");
            }
            let reading = match reading {
                Reading::Punctured => LineReading::Punctured,
                Reading::Full => LineReading::FullLine,
            };
            let rep = simulate_lcc(&code.spec()?, alpha, trials, seed, reading)?;
            emit_simulation(&out, "lcc-sim", &rep)?;
        }
        Command::Verify { out } => return cmd_verify(&out),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
