//! `tevs` — time-elastic products, distances, Gram matrices, orthogonal
//! bases, and elastic text ranking from dataset files.
//!
//! Input files are JSON datasets (or CSV for one-dimensional data; the format
//! is inferred from the extension). Reports go to standard output as
//! line-delimited JSON; scalars are printed with 17 significant digits so
//! they re-parse to the same double. Exit codes: 0 success, 2 usage error,
//! 3 data/validation error, 4 numeric or configuration failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tevs::io::{self, Format};
use tevs::kernel::{gram, KernelTag};
use tevs::ortho::{gram_schmidt, sincos_family, spike_family};
use tevs::tep::{distance, teip, twip1, twip2};
use tevs::textsim::{idf, rank, tokenize, IdfTable, Weighting};
use tevs::{Dataset, Error, TimeSeries, DEFAULT_EPSILON};

#[derive(Parser)]
#[command(name = "tevs", version, about = "Time-elastic vector space toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Replace exactly-zero coordinates by --eps while loading.
    #[arg(long, global = true)]
    sanitize: bool,

    /// Replacement value used with --sanitize (default: smallest positive double).
    #[arg(long, global = true, default_value_t = DEFAULT_EPSILON)]
    eps: f64,

    /// Output format for datasets and matrices.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Seed for randomized data generation; current generators are
    /// deterministic, so this is accepted and recorded for forward
    /// compatibility only.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Teip,
    Twip1,
    Twip2,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Teip,
    Gauss,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    Binary,
    Idf,
}

#[derive(Subcommand)]
enum Command {
    /// Inner product of the single series in two files.
    Ip {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        nu: NuArg,
        #[arg(long, value_enum, default_value_t = VariantArg::Teip)]
        variant: VariantArg,
    },
    /// Elastic distance between the single series in two files.
    Dist {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        nu: NuArg,
    },
    /// Gram matrix of a dataset, optionally with a definiteness report.
    Gram {
        data: PathBuf,
        #[command(flatten)]
        nu: NuArg,
        #[arg(long, value_enum, default_value_t = KernelArg::Teip)]
        kernel: KernelArg,
        /// Gaussian bandwidth (gauss kernel only).
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        gamma: f64,
        /// Also run the eigenvalue-based positive-semidefiniteness check.
        #[arg(long)]
        psd_check: bool,
        /// Tolerance of the check, scaled by the matrix norm.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Gram-Schmidt orthogonalization of a family of series.
    Gs {
        family: PathBuf,
        #[command(flatten)]
        nu: NuArg,
        /// Scale every kept basis element to unit norm.
        #[arg(long)]
        normalize: bool,
        /// Relative tolerance for dropping dependent members.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Generate a reference family of series.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Rank a corpus against a query by elastic cosine.
    Textsim {
        /// Directory of text files, or a JSONL file of {"id", "text"} records.
        #[arg(long)]
        corpus: PathBuf,
        /// Query text, or a path to a file containing it.
        #[arg(long)]
        query: String,
        #[command(flatten)]
        nu: NuArg,
        #[arg(long, value_enum, default_value_t = WeightsArg::Binary)]
        weights: WeightsArg,
    },
}

#[derive(Args)]
struct NuArg {
    /// Time stiffness of the exponential time kernel.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    nu: f64,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Increasing-length family: eps everywhere except a final unit spike.
    Spikes {
        #[arg(long, default_value_t = 11)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        /// Write to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discrete sine-cosine family, uniformly sampled on [0, 1).
    Sincos {
        #[arg(long, default_value_t = 128)]
        len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        // data and validation problems
        Error::NonMonotoneTimestamps { .. }
        | Error::ZeroSpatialValue { .. }
        | Error::NonFiniteTimestamp { .. }
        | Error::NonFiniteValue { .. }
        | Error::DimensionMismatch { .. }
        | Error::LabelCountMismatch { .. }
        | Error::UnsupportedCsvDimension { .. }
        | Error::EmptySeries
        | Error::EmptyFamily
        | Error::FamilyTooSmall { .. }
        | Error::Parse { .. }
        | Error::Io(_) => 3,
        // numeric and configuration failures
        _ => 4,
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let sanitize = cli.sanitize.then_some(cli.eps);
    match &cli.command {
        Command::Ip { a, b, nu, variant } => {
            let a = load_single_series(a, sanitize)?;
            let b = load_single_series(b, sanitize)?;
            let value = match variant {
                VariantArg::Teip => teip(&a, &b, nu.nu)?,
                VariantArg::Twip1 => warn_restriction(twip1(&a, &b, nu.nu)?),
                VariantArg::Twip2 => warn_restriction(twip2(&a, &b, nu.nu)?),
            };
            println!("{}", scalar(value));
        }
        Command::Dist { a, b, nu } => {
            let a = load_single_series(a, sanitize)?;
            let b = load_single_series(b, sanitize)?;
            println!("{}", scalar(distance(&a, &b, nu.nu)?));
        }
        Command::Gram {
            data,
            nu,
            kernel,
            gamma,
            psd_check,
            tol,
        } => {
            let dataset = io::load(data, Format::from_path(data), sanitize)?;
            let (tag, gamma) = match kernel {
                KernelArg::Teip => (KernelTag::Teip, None),
                KernelArg::Gauss => (KernelTag::GaussianDistance, Some(*gamma)),
            };
            let mut matrix = gram(&dataset, tag, nu.nu, gamma)?;
            print_matrix(&matrix, cli.format)?;
            if *psd_check {
                let report = matrix.psd_check(*tol)?;
                println!(
                    "{}",
                    json!({
                        "psd": report.psd,
                        "min_eigenvalue": report.min_eigenvalue,
                        "tol": report.tol,
                    })
                );
            }
        }
        Command::Gs {
            family,
            nu,
            normalize,
            tol,
        } => {
            let dataset = io::load(family, Format::from_path(family), sanitize)?;
            let result = gram_schmidt(dataset.series(), nu.nu, *tol, *normalize)?;
            let kept_labels = dataset.labels().map(|labels| {
                labels
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !result.dropped.contains(i))
                    .map(|(_, l)| l.clone())
                    .collect()
            });
            let basis = Dataset::with_dim(result.basis, kept_labels, dataset.dim())?;
            print_dataset(&basis, cli.format, None)?;
            println!(
                "{}",
                json!({
                    "gram_residual": result.gram_residual,
                    "dropped": result.dropped,
                })
            );
        }
        Command::Gen { what } => {
            let (family, labels, out) = match what {
                GenCommand::Spikes { n, eps, out } => {
                    let family = spike_family(*n, *eps)?;
                    let labels = (1..=*n).map(|k| format!("spike{k}")).collect();
                    (family, labels, out)
                }
                GenCommand::Sincos { len, out } => {
                    let family = sincos_family(*len)?;
                    let labels = sincos_labels(*len);
                    (family, labels, out)
                }
            };
            let dataset = Dataset::new(family, Some(labels))?;
            print_dataset(&dataset, cli.format, out.as_deref())?;
        }
        Command::Textsim {
            corpus,
            query,
            nu,
            weights,
        } => {
            let documents = load_corpus(corpus)?;
            let tokenized: Vec<_> = documents.iter().map(|(_, text)| tokenize(text)).collect();
            let query_tokens = tokenize(&load_query(query)?);
            let table: IdfTable;
            let weighting = match weights {
                WeightsArg::Binary => Weighting::Binary,
                WeightsArg::Idf => {
                    table = idf(&tokenized);
                    Weighting::Idf(&table)
                }
            };
            for (index, score) in rank(&query_tokens, &tokenized, nu.nu, &weighting)? {
                println!("{}", json!({ "doc": documents[index].0, "score": score }));
            }
        }
    }
    Ok(())
}

fn scalar(value: f64) -> String {
    format!("{value:.16e}")
}

fn warn_restriction(v: tevs::tep::TwipValue) -> f64 {
    if !v.restriction_met {
        eprintln!(
            "warning: inputs are not uniformly sampled equal-length series; \
             twip inner-product guarantees do not apply"
        );
    }
    v.value
}

fn load_single_series(path: &Path, sanitize: Option<f64>) -> Result<TimeSeries, Error> {
    let dataset = io::load(path, Format::from_path(path), sanitize)?;
    if dataset.len() != 1 {
        return Err(Error::Parse {
            location: path.display().to_string(),
            message: format!("expected exactly one series, found {}", dataset.len()),
        });
    }
    Ok(dataset.series()[0].clone())
}

fn print_dataset(dataset: &Dataset, format: FormatArg, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => io::store(dataset, path, format.into()),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            match format {
                FormatArg::Json => io::write_json(&mut lock, dataset),
                FormatArg::Csv => io::write_csv(&mut lock, dataset),
            }
        }
    }
}

fn print_matrix(matrix: &tevs::kernel::GramMatrix, format: FormatArg) -> Result<(), Error> {
    match format {
        FormatArg::Json => {
            let rows: Vec<Vec<f64>> = (0..matrix.n())
                .map(|i| (0..matrix.n()).map(|j| matrix.get(i, j)).collect())
                .collect();
            let mut object = json!({
                "labels": matrix.labels(),
                "kernel": matrix.kernel().name(),
                "nu": matrix.nu(),
                "values": rows,
            });
            if let Some(gamma) = matrix.gamma() {
                object["gamma"] = json!(gamma);
            }
            println!("{object}");
        }
        FormatArg::Csv => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            writeln!(lock, "{}", matrix.labels().join(","))?;
            for i in 0..matrix.n() {
                let row: Vec<String> =
                    (0..matrix.n()).map(|j| matrix.get(i, j).to_string()).collect();
                writeln!(lock, "{}", row.join(","))?;
            }
        }
    }
    Ok(())
}

fn sincos_labels(len: usize) -> Vec<String> {
    let mut labels = vec!["const".to_string()];
    for k in 1..=((len - 1) / 2) {
        labels.push(format!("sin{k}"));
        labels.push(format!("cos{k}"));
    }
    if len % 2 == 0 {
        labels.push(format!("cos{}", len / 2));
    }
    labels
}

fn load_query(query: &str) -> Result<String, Error> {
    let path = Path::new(query);
    if path.is_file() {
        Ok(std::fs::read_to_string(path)?)
    } else {
        Ok(query.to_string())
    }
}

/// Loads `(name, text)` documents: every regular file of a directory (sorted
/// by name), or the lines of a JSONL file (`{"id", "text"}` objects or plain
/// strings).
fn load_corpus(path: &Path) -> Result<Vec<(String, String)>, Error> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        entries.sort();
        let mut documents = Vec::with_capacity(entries.len());
        for entry in entries {
            let name = entry
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            documents.push((name, std::fs::read_to_string(&entry)?));
        }
        return Ok(documents);
    }
    let text = std::fs::read_to_string(path)?;
    let mut documents = Vec::new();
    for (number, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let location = format!("{}:{}", path.display(), number + 1);
        let value: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| Error::Parse {
                location: location.clone(),
                message: e.to_string(),
            })?;
        match value {
            serde_json::Value::String(text) => documents.push((number.to_string(), text)),
            serde_json::Value::Object(map) => {
                let text = map
                    .get("text")
                    .and_then(|v| v.as_str())
                    .ok_or_else(|| Error::Parse {
                        location: location.clone(),
                        message: "record needs a string `text` field".to_string(),
                    })?;
                let id = map
                    .get("id")
                    .and_then(|v| v.as_str())
                    .map(str::to_owned)
                    .unwrap_or_else(|| number.to_string());
                documents.push((id, text.to_string()));
            }
            _ => {
                return Err(Error::Parse {
                    location,
                    message: "expected a JSON string or object per line".to_string(),
                })
            }
        }
    }
    Ok(documents)
}
