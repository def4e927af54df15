use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gstrata::braid::{self, CosetEnumeration, RelatorKind, DEFAULT_MAX_COSETS};
use gstrata::census::{self, PartitionReport, DEFAULT_BUDGET};
use gstrata::duality::dualize_configuration;
use gstrata::io::{configuration_from_json, configuration_to_json};
use gstrata::sampler::{sample_in_stratum, SampleSpec};
use gstrata::snf::SmithForm;
use gstrata::strata::{dual_stratum_of, stratum_of};
use gstrata::{Error, FieldSpec, StratumDescriptor};

#[derive(Parser)]
#[command(name = "gstrata", version, about = "Strata of configurations of subspaces by the dimension of their sum")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of tuple visits an enumeration may make.
    #[arg(long, global = true, env = "GSTRATA_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension data of F_h^i(k,n), for one i or all of 0..=n.
    Dims { h: usize, k: usize, n: usize, i: Option<usize> },
    /// Stratum of a configuration read from a JSON file (`-` for stdin).
    Classify { file: String },
    /// Exact point counts of every stratum over F_q.
    Census {
        h: usize,
        k: usize,
        n: usize,
        q: u32,
        /// Fit count polynomials for the nonempty strata. Without a value,
        /// each stratum uses the first d+1 primes.
        #[arg(long, num_args = 0..=1, value_delimiter = ',')]
        fit: Option<Vec<u32>>,
    },
    /// Random configuration in F_h^i(k,n), printed as JSON.
    Sample {
        h: usize,
        k: usize,
        n: usize,
        i: usize,
        /// `rational` (or `q`) or a prime p.
        #[arg(long, default_value = "rational")]
        field: String,
        #[arg(long)]
        max_attempts: Option<usize>,
    },
    /// Annihilator configuration of a JSON file (`-` for stdin).
    Dual { file: String },
    /// Presentation of the pure braid group of the sphere on h strands.
    Braid {
        h: usize,
        #[arg(long)]
        abelianization: bool,
        /// Run coset enumeration with at most this many cosets (default 100000).
        #[arg(long, num_args = 0..=1)]
        todd_coxeter: Option<Option<usize>>,
        /// Print the presentation as text on stdout; the report goes to stderr.
        #[arg(long)]
        emit: bool,
    },
}

/// Failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Malformed(_) => 3,
            Error::BudgetExceeded { .. } => 5,
            Error::EmptyStratum { .. } => 6,
            Error::MaxAttemptsExceeded { .. } => 7,
            Error::InvalidDescriptor(_) | Error::NotEnoughSubspaces { .. } | Error::InsufficientPoints { .. } => 2,
            Error::NonPolynomialFit { .. } => 1,
            _ => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn verification_failed(what: &str) -> Failure {
    Failure { code: 1, message: format!("verification failed: {what}") }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Dims { h, k, n, i } => dims(cli.format, *h, *k, *n, *i),
        Command::Classify { file } => classify(cli.format, file),
        Command::Census { h, k, n, q, fit } => census(cli, *h, *k, *n, *q, fit.as_deref()),
        Command::Sample { h, k, n, i, field, max_attempts } => {
            sample(cli.seed, StratumDescriptor::new(*h, *k, *n, *i)?, field, *max_attempts)
        }
        Command::Dual { file } => dual(file),
        Command::Braid { h, abelianization, todd_coxeter, emit } => {
            braid_report(cli.format, *h, *abelianization, todd_coxeter.map(|m| m.unwrap_or(DEFAULT_MAX_COSETS)), *emit)
        }
    }
}

fn dash<T: ToString>(r: gstrata::Result<T>) -> String {
    r.map(|v| v.to_string()).unwrap_or_else(|_| "-".into())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn csv_out(header: &[&str], rows: &[Vec<String>]) -> Outcome {
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn print_table(header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        println!("{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
}

fn emit_rows(format: Format, header: &[&str], rows: Vec<Vec<String>>) -> Outcome {
    match format {
        Format::Plain => print_table(header, &rows),
        Format::Csv => csv_out(header, &rows)?,
        Format::Json => {
            let objs: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(header.iter().map(|h| h.to_string()).zip(r.iter().map(|c| json!(c))).collect()))
                .collect();
            print_json(&json!({ "rows": objs }));
        }
    }
    Ok(())
}

const DIMS_HEADER: [&str; 9] = ["h", "k", "n", "i", "nonempty", "dimension", "local_model", "codim_step", "pi1"];

fn dims(format: Format, h: usize, k: usize, n: usize, i: Option<usize>) -> Outcome {
    let base = StratumDescriptor::new(h, k, n, 0)?;
    let is: Vec<usize> = match i {
        Some(i) => vec![i],
        None => (0..=n).collect(),
    };
    let rows = is
        .into_iter()
        .map(|i| {
            let Ok(d) = base.with_i(i) else {
                // beyond the ambient dimension: empty, nothing else defined
                let mut row = vec![h.to_string(), k.to_string(), n.to_string(), i.to_string(), "false".into()];
                row.resize(DIMS_HEADER.len(), "-".into());
                return row;
            };
            vec![
                h.to_string(),
                k.to_string(),
                n.to_string(),
                i.to_string(),
                d.is_nonempty().to_string(),
                dash(d.dimension()),
                dash(d.local_model()),
                dash(d.codimension_step()),
                dash(d.fundamental_group()),
            ]
        })
        .collect();
    emit_rows(format, &DIMS_HEADER, rows)
}

fn read_input(file: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if file == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(file)?;
    }
    Ok(text)
}

fn classify(format: Format, file: &str) -> Outcome {
    let config = configuration_from_json(&read_input(file)?)?;
    let (h, k, n) = (config.h(), config.k(), config.n());
    let i = stratum_of(&config);
    let desc = StratumDescriptor::new(h, k, n, i)?;
    let row = vec![
        h.to_string(),
        k.to_string(),
        n.to_string(),
        config.field().to_string(),
        i.to_string(),
        dual_stratum_of(&config).to_string(),
        desc.dimension()?.to_string(),
    ];
    emit_rows(format, &["h", "k", "n", "field", "i", "intersection_dim", "dimension"], vec![row])
}

fn fit_json(fit: &census::CountFit) -> Value {
    json!({
        "i": fit.desc.i.to_string(),
        "coeffs": fit.polynomial.coefficients().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "degree": fit.degree,
        "dimension": fit.dimension.to_string(),
        "matches_dimension": fit.matches_dimension,
        "held_out": { "q": fit.held_out.0.to_string(), "count": fit.held_out.1.to_string() },
    })
}

fn fit_plain(fit: &census::CountFit) -> String {
    let coeffs: Vec<String> = fit.polynomial.coefficients().iter().map(ToString::to_string).collect();
    format!(
        "fit i={}: coeffs [{}] degree {} dimension {} {} held-out q={} count {}",
        fit.desc.i,
        coeffs.join(", "),
        fit.degree.map_or("-".into(), |d| d.to_string()),
        fit.dimension,
        if fit.matches_dimension { "MATCH" } else { "MISMATCH" },
        fit.held_out.0,
        fit.held_out.1
    )
}

fn census(cli: &Cli, h: usize, k: usize, n: usize, q: u32, fit: Option<&[u32]>) -> Outcome {
    StratumDescriptor::new(h, k, n, 0)?;
    FieldSpec::prime(q as u64).map_err(|e| Failure { code: 2, message: e.to_string() })?;
    let report = census::partition_check(h, k, n, q, cli.budget)?;

    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    if let Some(list) = fit {
        for r in report.rows.iter() {
            let desc = StratumDescriptor::new(h, k, n, r.i)?;
            if !desc.is_nonempty() {
                continue;
            }
            let qs =
                if list.is_empty() { census::default_q_list(desc.dimension()? as usize + 1) } else { list.to_vec() };
            match census::fit_count_polynomial(&desc, &qs, cli.budget) {
                Ok(f) => fits.push(f),
                Err(Error::InsufficientPoints { needed, got }) => skipped.push((r.i, needed, got)),
                Err(e) => return Err(e.into()),
            }
        }
    }

    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.h.to_string(),
                r.k.to_string(),
                r.n.to_string(),
                r.i.to_string(),
                r.q.to_string(),
                r.count.to_string(),
            ]
        })
        .collect();
    let verdict = partition_line(&report);
    match cli.format {
        Format::Csv => {
            csv_out(&["h", "k", "n", "i", "q", "count"], &rows)?;
            eprintln!("{verdict}");
            for f in &fits {
                eprintln!("{}", fit_plain(f));
            }
        }
        Format::Plain => {
            print_table(&["h", "k", "n", "i", "q", "count"], &rows);
            println!("{verdict}");
            for f in &fits {
                println!("{}", fit_plain(f));
            }
        }
        Format::Json => {
            let keys = ["h", "k", "n", "i", "q", "count"];
            let objs: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(keys.iter().map(|h| h.to_string()).zip(r.iter().map(|c| json!(c))).collect()))
                .collect();
            let mut doc = json!({
                "rows": objs,
                "partition": {
                    "total": report.total.to_string(),
                    "expected": report.expected.to_string(),
                    "unexpected_strata": report.unexpected_strata.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "pass": report.pass,
                },
            });
            if fit.is_some() {
                doc["fits"] = Value::Array(fits.iter().map(fit_json).collect());
                doc["skipped"] = Value::Array(
                    skipped
                        .iter()
                        .map(|(i, needed, got)| json!({"i": i.to_string(), "needed": needed.to_string(), "got": got.to_string()}))
                        .collect(),
                );
            }
            print_json(&doc);
        }
    }
    for (i, needed, got) in &skipped {
        eprintln!("fit i={i}: skipped, needs {needed} primes, got {got}");
    }
    if !report.pass {
        return Err(verification_failed("strata counts do not partition the configuration space"));
    }
    if let Some(f) = fits.iter().find(|f| !f.matches_dimension) {
        return Err(verification_failed(&format!("count degree differs from dimension at i={}", f.desc.i)));
    }
    Ok(())
}

fn partition_line(r: &PartitionReport) -> String {
    format!(
        "partition: {} (total {}, expected {}{})",
        if r.pass { "PASS" } else { "FAIL" },
        r.total,
        r.expected,
        if r.unexpected_strata.is_empty() {
            String::new()
        } else {
            format!(", counts in empty strata {:?}", r.unexpected_strata)
        }
    )
}

fn parse_field(s: &str) -> Result<FieldSpec, Failure> {
    match s {
        "rational" | "q" | "Q" => Ok(FieldSpec::Rational),
        _ => {
            let p: u64 = s.parse().map_err(|_| Failure { code: 2, message: format!("unknown field `{s}`") })?;
            FieldSpec::prime(p).map_err(|e| Failure { code: 2, message: e.to_string() })
        }
    }
}

fn sample(seed: u64, desc: StratumDescriptor, field: &str, max_attempts: Option<usize>) -> Outcome {
    let mut spec = SampleSpec::new(desc, parse_field(field)?, seed);
    if let Some(m) = max_attempts {
        spec.max_attempts = m;
    }
    let config = sample_in_stratum(&spec)?;
    println!("{}", configuration_to_json(&config));
    Ok(())
}

fn dual(file: &str) -> Outcome {
    let config = configuration_from_json(&read_input(file)?)?;
    let i = stratum_of(&config);
    let dual = dualize_configuration(&config);
    println!("{}", configuration_to_json(&dual));
    eprintln!("sum dimension {i}; dual intersection dimension {}", dual_stratum_of(&dual));
    Ok(())
}

fn abelian_group(s: &SmithForm) -> String {
    let mut parts = Vec::new();
    if s.free_rank > 0 {
        parts.push(if s.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", s.free_rank) });
    }
    parts.extend(s.divisors.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn braid_report(format: Format, h: usize, abelianization: bool, tc: Option<usize>, emit: bool) -> Outcome {
    if h < 2 {
        return Err(Failure { code: 2, message: format!("need at least 2 strands, got {h}") });
    }
    let p = braid::sphere_pure_braid_presentation(h)?;
    let ab = abelianization.then(|| braid::abelianization(&p));
    let order = tc.map(|max| braid::todd_coxeter(&p, max));

    let mut fields: Vec<(&str, Value)> = vec![
        ("h", json!(h.to_string())),
        ("generators", json!(p.generators().len().to_string())),
        ("relators", json!(p.relator_count().to_string())),
        ("yb3", json!(p.count_of(RelatorKind::YangBaxter3).to_string())),
        ("yb4", json!(p.count_of(RelatorKind::YangBaxter4).to_string())),
        ("d_squared", json!(p.count_of(RelatorKind::DSquared).to_string())),
    ];
    if let Some(s) = &ab {
        fields.push(("divisors", json!(s.divisors.iter().map(ToString::to_string).collect::<Vec<_>>())));
        fields.push(("free_rank", json!(s.free_rank.to_string())));
    }
    if let (Some(res), Some(max)) = (order, tc) {
        fields.push(("todd_coxeter", json!(coset_text(res, max))));
    }

    if emit {
        print!("{}", p.to_text());
        std::io::stdout().flush()?;
    }
    let mut out: Box<dyn Write> = if emit { Box::new(std::io::stderr()) } else { Box::new(std::io::stdout()) };
    match format {
        Format::Json => {
            let obj: serde_json::Map<String, Value> = fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&Value::Object(obj)).expect("json value"))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(fields.iter().map(|(k, _)| *k))?;
            w.write_record(fields.iter().map(|(_, v)| match v {
                Value::String(s) => s.clone(),
                Value::Array(a) => a.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(" "),
                other => other.to_string(),
            }))?;
            w.flush()?;
        }
        Format::Plain => {
            writeln!(out, "pure braid group of the sphere, h = {h}")?;
            writeln!(out, "generators: {}", p.generators().len())?;
            writeln!(
                out,
                "relators: {} (YB3 {}, YB4 {}, D^2 {})",
                p.relator_count(),
                p.count_of(RelatorKind::YangBaxter3),
                p.count_of(RelatorKind::YangBaxter4),
                p.count_of(RelatorKind::DSquared)
            )?;
            if let Some(s) = &ab {
                let divs: Vec<String> = s.divisors.iter().map(ToString::to_string).collect();
                writeln!(
                    out,
                    "abelianization: {} (divisors [{}], free rank {})",
                    abelian_group(s),
                    divs.join(", "),
                    s.free_rank
                )?;
            }
            if let (Some(res), Some(max)) = (order, tc) {
                writeln!(out, "todd-coxeter: {}", coset_text(res, max))?;
            }
        }
    }
    Ok(())
}

fn coset_text(res: CosetEnumeration, max: usize) -> String {
    match res {
        CosetEnumeration::FiniteOrder(n) => format!("FiniteOrder({n})"),
        CosetEnumeration::Exceeded => format!("Exceeded({max})"),
    }
}
