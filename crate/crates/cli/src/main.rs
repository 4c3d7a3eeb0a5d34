//! Command-line driver.
//!
//! Tensor files hold `d n Δ` on the first line followed by the `n^d`
//! entries times `Δ`, row-major with the first index most significant,
//! `n` per line. Axis `k` in mathematical notation (1-based) is position
//! `k - 1` of an index here.
//!
//! Exit codes: 0 success or vertex, 1 not a vertex, 2 usage, 3 I/O or
//! parse errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use birkhoff::constructions::{
    block_substitution, construction1, dot_vertex, kronecker_vertex, ConstructionError, ConstructionReport,
};
use birkhoff::enumerate::generic::mask_of;
use birkhoff::enumerate::omega34::search_omega_3_4;
use birkhoff::enumerate::omega43::search_omega_4_3;
use birkhoff::enumerate::query::SupportQuery;
use birkhoff::enumerate::{
    algorithm1, ClassifiedVertex, EnumerateError, HyperplaneStack, Omega34Options, Omega43Options, VertexSet,
};
use birkhoff::io::{emit_archive, emit_tensor, format_permanent, parse_archive, parse_tensor, render_report, ArchiveError, ParseError};
use birkhoff::stochastic::{denominator_lcm, is_polystochastic};
use birkhoff::vertexcert::{certify_with, Route};
use birkhoff::{canonical_form, certify, permanent, support, Rational, Tensor};
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {source}")]
    Archive {
        path: PathBuf,
        #[source]
        source: ArchiveError,
    },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Enumerate(EnumerateError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Construction(_) => 2,
            CliError::Enumerate(EnumerateError::Unsupported { .. }) => 2,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Archive { .. } | CliError::Enumerate(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "birkhoff", version, about = "Vertices of polytopes of polystochastic tensors")]
struct Cli {
    /// Worker threads; overrides BIRKHOFF_THREADS.
    #[arg(long, global = true, env = "BIRKHOFF_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    Incidence,
    Corner,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Plane-by-plane search where available, the generic one otherwise.
    Auto,
    Generic,
    Specialized,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a tensor is a vertex of its polytope.
    Certify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        route: RouteArg,
    },
    /// Enumerate vertex classes and write a sorted archive.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// Resume from and append to per-unit logs here.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Support-size budget for the order-4 search.
        #[arg(long)]
        max_support: Option<usize>,
        /// Archive path; standard output if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a tensor from smaller ones and certify it.
    Construct {
        #[command(subcommand)]
        kind: Kind,
        /// Tensor file to write; standard output if absent.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Write the canonical representative of a tensor's class.
    Canon {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the permanent.
    Permanent { file: PathBuf },
    /// Regenerate class counts and distribution tables from an archive.
    Report {
        archive: PathBuf,
        /// Recompute every field and re-certify each record.
        #[arg(long)]
        verify: bool,
    },
    /// Decide whether a (0,1) pattern is the support of a polystochastic
    /// tensor, using the vertex classes in an archive.
    SupportCheck {
        pattern: PathBuf,
        #[arg(long)]
        archive: PathBuf,
    },
}

#[derive(Subcommand)]
enum Kind {
    /// Kronecker product of a permutation and a vertex.
    Kronecker { left: PathBuf, right: PathBuf },
    /// Dot product of a permutation and a vertex.
    Dot { left: PathBuf, right: PathBuf },
    /// One vertex block per one of a permutation, in row-major order of
    /// the ones.
    Blocks {
        pattern: PathBuf,
        #[arg(required = true)]
        blocks: Vec<PathBuf>,
    },
    /// The symmetric order-3 construction.
    Construction1 {
        #[arg(long)]
        dim: usize,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_tensor(path: &Path) -> Result<Tensor<Rational>, CliError> {
    parse_tensor(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn read_archive(path: &Path) -> Result<Vec<ClassifiedVertex>, CliError> {
    parse_archive(&read(path)?).map_err(|source| CliError::Archive {
        path: path.to_path_buf(),
        source,
    })
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_certify(file: &Path, route: RouteArg) -> Result<u8, CliError> {
    let t = read_tensor(file)?;
    if !is_polystochastic(&t) {
        println!("verdict: not polystochastic");
        return Ok(1);
    }
    let s = support(&t);
    let cert = match route {
        RouteArg::Auto => certify(&s),
        RouteArg::Incidence => certify_with(&s, Route::Incidence),
        RouteArg::Corner => certify_with(&s, Route::Corner),
    };
    let vertex = cert.tensor.as_ref() == Some(&t);
    let verdict = if vertex { "Vertex".to_string() } else { format!("{:?}", cert.verdict) };
    println!("verdict: {verdict}");
    println!("N: {}", s.len());
    println!("per: {}", format_permanent(&permanent(&t)));
    println!("delta: {}", denominator_lcm(&t));
    println!("symmetric: {}", birkhoff::equivalence::has_symmetric_representative(&t));
    Ok(if vertex { 0 } else { 1 })
}

fn cmd_enumerate(
    order: usize,
    dim: usize,
    method: Method,
    checkpoint: Option<PathBuf>,
    max_support: Option<usize>,
) -> Result<VertexSet, CliError> {
    let specialized = matches!((order, dim), (3, 4) | (4, 3));
    let use_specialized = match method {
        Method::Auto => specialized,
        Method::Specialized if !specialized => {
            return Err(CliError::Usage(format!("no specialized search for order {order}, dimension {dim}")))
        }
        Method::Specialized => true,
        Method::Generic => false,
    };
    if max_support.is_some() && (order, dim) != (4, 3) {
        return Err(CliError::Usage("--max-support applies to order 4, dimension 3".into()));
    }
    if checkpoint.is_some() && !(use_specialized && (order, dim) == (4, 3)) {
        return Err(CliError::Usage("--checkpoint applies to the order 4, dimension 3 search".into()));
    }
    if !use_specialized {
        let source = HyperplaneStack::polystochastic(dim, order).map_err(CliError::Enumerate)?;
        return Ok(algorithm1(&source).vertices);
    }
    if order == 3 {
        return Ok(search_omega_3_4(&Omega34Options::default()).vertices);
    }
    let mut opts = Omega43Options {
        checkpoint_dir: checkpoint,
        ..Default::default()
    };
    if let Some(m) = max_support {
        opts.max_support = m;
    }
    Ok(search_omega_4_3(&opts).map_err(CliError::Enumerate)?.vertices)
}

fn print_construction(r: &ConstructionReport) {
    eprintln!("construction: {}", r.construction);
    eprintln!("verdict: {:?}", r.certified.verdict);
    eprintln!("N: {} (predicted {})", r.support_size, r.claimed_support);
    eprintln!("predicted vertex: {}", r.predicted_vertex);
    eprintln!("per: {}", format_permanent(&permanent(&r.tensor)));
}

fn cmd_construct(kind: Kind) -> Result<ConstructionReport, CliError> {
    Ok(match kind {
        Kind::Kronecker { left, right } => kronecker_vertex(&read_tensor(&left)?, &read_tensor(&right)?)?,
        Kind::Dot { left, right } => dot_vertex(&read_tensor(&left)?, &read_tensor(&right)?)?,
        Kind::Blocks { pattern, blocks } => {
            let a = read_tensor(&pattern)?;
            let ones = support(&a).indices();
            if ones.len() != blocks.len() {
                return Err(CliError::Usage(format!("pattern has {} ones but {} blocks were given", ones.len(), blocks.len())));
            }
            let mut map = BTreeMap::new();
            for (key, path) in ones.into_iter().zip(&blocks) {
                map.insert(key, read_tensor(path)?);
            }
            block_substitution(&a, &map)?
        }
        Kind::Construction1 { dim } => construction1(dim)?,
    })
}

fn cmd_report(archive: &Path, verify: bool) -> Result<u8, CliError> {
    let classes = read_archive(archive)?;
    if verify {
        if let Some(i) = classes.iter().position(|c| !c.verify()) {
            eprintln!("record {} does not re-certify", i + 1);
            return Ok(1);
        }
    }
    print!("{}", render_report(&classes));
    Ok(0)
}

fn cmd_support_check(pattern: &Path, archive: &Path) -> Result<u8, CliError> {
    let p = read_tensor(pattern)?;
    let classes = read_archive(archive)?;
    let shape_ok = classes.iter().all(|c| c.tensor.dim() == p.dim() && c.tensor.order() == p.order());
    if !shape_ok {
        return Err(CliError::Usage("archive and pattern have different shapes".into()));
    }
    let query = SupportQuery::from_classes(p.dim(), p.order(), classes.iter().map(|c| &c.tensor))
        .map_err(CliError::Enumerate)?;
    let admitted = query.admits(mask_of(&support(&p)));
    println!("polystochastic support: {}", if admitted { "yes" } else { "no" });
    Ok(if admitted { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Certify { file, route } => cmd_certify(&file, route),
        Command::Enumerate {
            order,
            dim,
            method,
            checkpoint,
            max_support,
            output,
        } => {
            let classes = cmd_enumerate(order, dim, method, checkpoint, max_support)?.sorted();
            write_or_print(output.as_deref(), &emit_archive(&classes))?;
            eprint!("{}", render_report(&classes));
            Ok(0)
        }
        Command::Construct { kind, output } => {
            let r = cmd_construct(kind)?;
            print_construction(&r);
            write_or_print(output.as_deref(), &emit_tensor(&r.tensor))?;
            Ok(if r.is_vertex() { 0 } else { 1 })
        }
        Command::Canon { file, output } => {
            let t = read_tensor(&file)?;
            write_or_print(output.as_deref(), &emit_tensor(&canonical_form(&t)))?;
            Ok(0)
        }
        Command::Permanent { file } => {
            println!("{}", format_permanent(&permanent(&read_tensor(&file)?)));
            Ok(0)
        }
        Command::Report { archive, verify } => cmd_report(&archive, verify),
        Command::SupportCheck { pattern, archive } => cmd_support_check(&pattern, &archive),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
