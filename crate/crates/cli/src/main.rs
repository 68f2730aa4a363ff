//! `kmq`: q-analogs of weight multiplicity, root multiplicities, Brylinski
//! filtrations and the semi-infinite cocycle check from the command line.
//!
//! Exit status: 0 on success, 1 on bad input, 2 when an internal invariant
//! or a checked identity fails.

mod cache;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kmq_core::brylinski::{brylinski_report, verification_grid, BrylinskiReport};
use kmq_core::loop_algebra::LoopAlgebra;
use kmq_core::qanalog::{freudenthal_dims, positive_difference, q_multiplicity_with_table, KostantTable};
use kmq_core::rational::format as fmt_rational;
use kmq_core::semiinfinite::kahler_check;
use kmq_core::{Error, Gcm, QPolynomial, RootVector, Weight};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "kmq", version, about = "Exact q-analogs of weight multiplicity for Kac-Moody algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct Common {
    /// GCM file `{"matrix": [[..]], "symmetrizer": [..]}`; defaults to A_1^(1).
    #[arg(long)]
    gcm: Option<PathBuf>,
    /// Output format; `kahler-check` defaults to tsv, everything else to json.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Directory for cached root tables.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Root multiplicity of β.
    Mult {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beta: String,
    },
    /// Kostant q-partition function K(β; q).
    Kostant {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beta: String,
    },
    /// m^λ_μ(q) and dim L(λ)_μ for each μ.
    Qweight {
        #[command(flatten)]
        common: Common,
        /// Highest weight: JSON object, `(α,h,n)` on rank-2 affine matrices, or a file
        #[arg(long)]
        lambda: String,
        /// Weight below λ, same syntax; repeatable
        #[arg(long, required = true)]
        mu: Vec<String>,
        /// Box for the root table (defaults to λ - μ).
        #[arg(long = "box")]
        bound: Option<String>,
    },
    /// Both Brylinski filtrations of L(λ)_μ on A_1^(1).
    Brylinski {
        #[command(flatten)]
        common: Common,
        /// Highest weight: JSON object, `(α,h,n)` on rank-2 affine matrices, or a file
        #[arg(long)]
        lambda: String,
        /// Weight below λ, same syntax; repeatable
        #[arg(long, required = true)]
        mu: Vec<String>,
    },
    /// ^sP = m on every dominant pair of the A_1^(1) grid.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Largest level of λ.
        #[arg(long, default_value_t = 3)]
        level: i64,
        /// Largest α_0-coefficient of λ - μ.
        #[arg(long, default_value_t = 3)]
        depth: i64,
    },
    /// -γ(x, x̄) = 2⟨ρ, α⟩{x, x} on root vectors up to a principal degree.
    KahlerCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        depth: i64,
    },
}

/// A failure with the command-line field it concerns.
struct Failure {
    field: Option<&'static str>,
    error: Error,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        if self.error.is_input_error() { 1 } else { 2 }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { field: None, error }
    }
}

fn at(field: &'static str) -> impl Fn(Error) -> Failure {
    move |error| Failure { field: Some(field), error }
}

/// Outcome of a command: rendered output and whether every checked identity held.
struct Output {
    text: String,
    ok: bool,
}

#[derive(Serialize)]
struct WeightJson {
    coroot_values: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_value: Option<serde_json::Value>,
}

fn weight_json(w: &Weight) -> WeightJson {
    let d_value = match w.scaling_values.len() {
        0 => None,
        1 => Some(fmt_rational(&w.scaling_values[0]).into()),
        _ => Some(w.scaling_values.iter().map(|v| fmt_rational(v).into()).collect::<Vec<serde_json::Value>>().into()),
    };
    WeightJson {
        coroot_values: w.coroot_values.iter().map(fmt_rational).collect(),
        d_value,
    }
}

impl Common {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("output serializes") + "\n"
}

fn load_gcm(common: &Common) -> Result<Gcm, Failure> {
    match &common.gcm {
        Some(p) => input::read_gcm(p).map_err(at("--gcm")),
        None => Ok(Gcm::affine_a(1)),
    }
}

fn positive_root(text: &str, gcm: &Gcm, field: &'static str) -> Result<RootVector, Failure> {
    let beta = input::parse_root(text, gcm).map_err(at(field))?;
    if !beta.in_positive_cone() {
        return Err(at(field)(Error::NotInPositiveCone(beta.to_string())));
    }
    Ok(beta)
}

fn run_mult(common: &Common, beta: &str) -> Result<Output, Failure> {
    let gcm = load_gcm(common)?;
    let beta = positive_root(beta, &gcm, "--beta")?;
    if beta.is_zero() {
        return Err(at("--beta")(Error::NotInPositiveCone("0".into())));
    }
    let table = cache::table_for(common.cache.as_deref(), &gcm, &beta)?;
    let mult = table.mult(&beta).unwrap_or(0);
    #[derive(Serialize)]
    struct Out<'a> {
        beta: &'a RootVector,
        mult: String,
    }
    let text = match common.format_or(Format::Json) {
        Format::Json => json_line(&Out { beta: &beta, mult: mult.to_string() }),
        Format::Tsv => format!("beta\tmult\n{beta}\t{mult}\n"),
    };
    Ok(Output { text, ok: true })
}

fn run_kostant(common: &Common, beta: &str) -> Result<Output, Failure> {
    let gcm = load_gcm(common)?;
    let beta = positive_root(beta, &gcm, "--beta")?;
    let table = cache::table_for(common.cache.as_deref(), &gcm, &beta)?;
    let k = KostantTable::new(&table, &beta)?
        .get(&beta)
        .cloned()
        .expect("corner is in its box");
    #[derive(Serialize)]
    struct Out<'a> {
        beta: &'a RootVector,
        kostant: &'a QPolynomial,
    }
    let text = match common.format_or(Format::Json) {
        Format::Json => json_line(&Out { beta: &beta, kostant: &k }),
        Format::Tsv => format!("beta\tkostant\n{beta}\t{k}\n"),
    };
    Ok(Output { text, ok: true })
}

fn run_qweight(common: &Common, lambda: &str, mus: &[String], bound: Option<&str>) -> Result<Output, Failure> {
    let gcm = load_gcm(common)?;
    let lambda = input::parse_weight(lambda, &gcm).map_err(at("--lambda"))?;
    let mus = mus
        .iter()
        .map(|m| input::parse_weight(m, &gcm).map_err(at("--mu")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut corner = match bound {
        Some(b) => positive_root(b, &gcm, "--box")?,
        None => RootVector::zero(gcm.rank()),
    };
    let mut betas = Vec::new();
    for mu in &mus {
        let beta = positive_difference(&lambda, mu, &gcm).map_err(at("--mu"))?;
        if let Some(b) = &beta {
            if bound.is_some() && !b.is_below(&corner) {
                return Err(at("--box")(Error::BoxTooSmall {
                    table: corner.to_string(),
                    requested: b.to_string(),
                }));
            }
            corner = RootVector::new(corner.coeffs().iter().zip(b.coeffs()).map(|(x, y)| *x.max(y)).collect());
        }
        betas.push(beta);
    }
    let table = cache::table_for(common.cache.as_deref(), &gcm, &corner)?;
    let dims = freudenthal_dims(&lambda, &corner, &gcm, &table).map_err(at("--lambda"))?;

    #[derive(Serialize)]
    struct Out {
        lambda: WeightJson,
        mu: WeightJson,
        m: QPolynomial,
        dim: String,
    }
    let mut text = String::new();
    if common.format_or(Format::Json) == Format::Tsv {
        text.push_str("lambda\tmu\tm\tdim\n");
    }
    for (mu, beta) in mus.iter().zip(&betas) {
        let m = q_multiplicity_with_table(&lambda, mu, &gcm, &table).map_err(at("--mu"))?;
        let dim = beta.as_ref().map(|b| dims[b].to_string()).unwrap_or_else(|| "0".into());
        match common.format_or(Format::Json) {
            Format::Json => text.push_str(&json_line(&Out {
                lambda: weight_json(&lambda),
                mu: weight_json(mu),
                m,
                dim,
            })),
            Format::Tsv => text.push_str(&format!("{lambda}\t{mu}\t{m}\t{dim}\n")),
        }
    }
    Ok(Output { text, ok: true })
}

#[derive(Serialize)]
struct BrylinskiOut {
    lambda: WeightJson,
    mu: WeightJson,
    dim: usize,
    e_poincare: QPolynomial,
    s_poincare: QPolynomial,
    m: QPolynomial,
    theorem_holds: bool,
    s_contained_in_e: bool,
    exhaustive: bool,
    gram_psd: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    freudenthal_dim: Option<String>,
}

fn brylinski_out(lambda: &Weight, mu: &Weight, r: BrylinskiReport, freudenthal: Option<String>) -> BrylinskiOut {
    BrylinskiOut {
        lambda: weight_json(lambda),
        mu: weight_json(mu),
        dim: r.dim,
        e_poincare: r.e_profile.poincare,
        s_poincare: r.s_profile.poincare,
        m: r.m,
        theorem_holds: r.theorem_holds,
        s_contained_in_e: r.contained,
        exhaustive: r.exhaustive,
        gram_psd: r.gram_ok,
        freudenthal_dim: freudenthal,
    }
}

const BRYLINSKI_TSV_HEADER: &str = "lambda\tmu\tdim\te_poincare\ts_poincare\tm\ttheorem_holds\ts_contained_in_e\n";

fn brylinski_tsv(lambda: &Weight, mu: &Weight, o: &BrylinskiOut) -> String {
    format!(
        "{lambda}\t{mu}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        o.dim, o.e_poincare, o.s_poincare, o.m, o.theorem_holds, o.s_contained_in_e
    )
}

fn a11(common: &Common) -> Result<(Gcm, LoopAlgebra), Failure> {
    let gcm = load_gcm(common)?;
    let alg = LoopAlgebra::from_gcm(&gcm).map_err(at("--gcm"))?;
    if alg.n() != 2 {
        return Err(at("--gcm")(Error::Unsupported("Brylinski filtrations need A_1^(1)".into())));
    }
    Ok((gcm, alg))
}

fn run_brylinski(common: &Common, lambda: &str, mus: &[String]) -> Result<Output, Failure> {
    let (gcm, alg) = a11(common)?;
    let lambda = input::parse_weight(lambda, &gcm).map_err(at("--lambda"))?;
    let mut text = String::new();
    if common.format_or(Format::Json) == Format::Tsv {
        text.push_str(BRYLINSKI_TSV_HEADER);
    }
    let mut ok = true;
    for m in mus {
        let mu = input::parse_weight(m, &gcm).map_err(at("--mu"))?;
        let r = brylinski_report(&alg, &lambda, &mu).map_err(at("--mu"))?;
        let o = brylinski_out(&lambda, &mu, r, None);
        ok &= o.s_contained_in_e && o.exhaustive && o.gram_psd;
        if mu.is_dominant() {
            ok &= o.theorem_holds;
        }
        text.push_str(&match common.format_or(Format::Json) {
            Format::Json => json_line(&o),
            Format::Tsv => brylinski_tsv(&lambda, &mu, &o),
        });
    }
    Ok(Output { text, ok })
}

fn run_verify(common: &Common, level: i64, depth: i64) -> Result<Output, Failure> {
    if level < 0 {
        return Err(at("--level")(Error::Parse(format!("must be non-negative, got {level}"))));
    }
    if depth < 0 {
        return Err(at("--depth")(Error::Parse(format!("must be non-negative, got {depth}"))));
    }
    let (gcm, alg) = a11(common)?;
    let grid = verification_grid(level, depth)?;
    let results: Vec<Result<BrylinskiOut, Error>> = grid
        .par_iter()
        .map(|(lambda, mu)| {
            let r = brylinski_report(&alg, lambda, mu)?;
            let fd = kmq_core::qanalog::freudenthal_dim(lambda, mu, &gcm)?;
            Ok(brylinski_out(lambda, mu, r, Some(fd.to_string())))
        })
        .collect();
    let mut text = String::new();
    if common.format_or(Format::Json) == Format::Tsv {
        text.push_str(BRYLINSKI_TSV_HEADER.trim_end());
        text.push_str("\tfreudenthal_dim\n");
    }
    let mut ok = true;
    for ((lambda, mu), r) in grid.iter().zip(results) {
        let o = r?;
        let fd_matches = o.freudenthal_dim.as_deref() == Some(&o.dim.to_string())
            && o.m.eval_at_one().to_string() == o.dim.to_string();
        ok &= o.theorem_holds && o.s_contained_in_e && o.exhaustive && o.gram_psd && fd_matches;
        match common.format_or(Format::Json) {
            Format::Json => text.push_str(&json_line(&o)),
            Format::Tsv => {
                let line = brylinski_tsv(lambda, mu, &o);
                text.push_str(line.trim_end());
                text.push_str(&format!("\t{}\n", o.freudenthal_dim.as_deref().unwrap_or("")));
            }
        }
    }
    #[derive(Serialize)]
    struct Summary {
        pairs: usize,
        all_hold: bool,
    }
    match common.format_or(Format::Json) {
        Format::Json => text.push_str(&json_line(&serde_json::json!({
            "summary": Summary { pairs: grid.len(), all_hold: ok }
        }))),
        Format::Tsv => text.push_str(&format!("# pairs={} all_hold={ok}\n", grid.len())),
    }
    Ok(Output { text, ok })
}

fn run_kahler(common: &Common, depth: i64) -> Result<Output, Failure> {
    if depth < 1 {
        return Err(at("--depth")(Error::Parse(format!("must be at least 1, got {depth}"))));
    }
    let gcm = load_gcm(common)?;
    let alg = LoopAlgebra::from_gcm(&gcm).map_err(at("--gcm"))?;
    let report = kahler_check(&alg, depth)?;
    let text = match common.format_or(Format::Tsv) {
        Format::Tsv => report.to_tsv(),
        Format::Json => report.rows.iter().map(json_line).collect(),
    };
    Ok(Output { ok: report.all_hold(), text })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Mult { common, beta } => run_mult(common, beta),
        Command::Kostant { common, beta } => run_kostant(common, beta),
        Command::Qweight { common, lambda, mu, bound } => run_qweight(common, lambda, mu, bound.as_deref()),
        Command::Brylinski { common, lambda, mu } => run_brylinski(common, lambda, mu),
        Command::Verify { common, level, depth } => run_verify(common, *level, *depth),
        Command::KahlerCheck { common, depth } => run_kahler(common, *depth),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            let _ = stdout.flush();
            if out.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: a checked identity failed; see output");
                ExitCode::from(2)
            }
        }
        Err(f) => {
            match f.field {
                Some(field) => eprintln!("error: {field}: {}", f.error),
                None => eprintln!("error: {}", f.error),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
