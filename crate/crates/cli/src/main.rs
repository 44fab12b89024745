use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eqfib_cli::format::{parse, print, Document};
use eqfib_cli::pipeline::{run, Manifest, Subject};
use eqfib_cli::samples;

#[derive(Parser)]
#[command(
    name = "eqfib",
    version,
    about = "Check fibrations with equality, synthesize and verify their 2-categories of homotopies"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the pipeline on a file holding a fibration or a groupoid family.
    Run {
        file: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run the pipeline on a shipped or loaded instance.
    Instance {
        #[command(subcommand)]
        kind: InstanceCmd,
    },
    /// Parse a file and print it in canonical form.
    Print { file: PathBuf },
    /// Print a shipped example document.
    Sample {
        #[arg(value_enum)]
        which: SampleKind,
        /// Base category for `codomain`.
        #[arg(long, default_value = "walking_arrow")]
        base: String,
    },
}

#[derive(Subcommand)]
enum InstanceCmd {
    /// Codomain fibration over a named base or the category in a file.
    Codomain {
        /// One of terminal, walking_arrow, chain3, square_lattice, twin_top, cospan, finset2, finset3, or a path.
        base: String,
        /// Category to use when the file holds several.
        #[arg(long)]
        category: Option<String>,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Subobjects of finite sets of size at most k.
    Subobject {
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// A fibration given by explicit tables.
    Load {
        file: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// A family of finite groupoids; the standard family when no file is given.
    Groupoids {
        file: Option<PathBuf>,
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleKind {
    Codomain,
    Mutant,
    Frobenius,
    Family,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Report,
    Twocat,
    Dot,
}

#[derive(Args)]
struct RunOpts {
    /// `all`, a stage name (run up to it), or a comma-separated prefix.
    #[arg(long, default_value = "all")]
    stages: String,
    #[arg(long)]
    budget_morphisms: Option<usize>,
    #[arg(long, default_value_t = eqfib_cli::pipeline::DEFAULT_CELL_BUDGET)]
    budget_cells: usize,
    /// Also synthesize under a seeded choice order and transport.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "report")]
    emit: Emit,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add per-stage wall-clock times to the report.
    #[arg(long)]
    timing: bool,
    /// Run everything on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, thiserror::Error)]
enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: eqfib_cli::ParseError,
    },
    #[error(transparent)]
    Manifest(#[from] eqfib_cli::ManifestError),
    #[error("{0}")]
    Other(String),
}

fn read_doc(path: &Path) -> Result<Document, InputError> {
    let text = fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text).map_err(|source| InputError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn label(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

fn file_subject(path: &Path) -> Result<Subject, InputError> {
    let doc = read_doc(path)?;
    if doc.families().next().is_some() {
        Ok(Subject::Groupoids {
            label: label(path),
            doc,
        })
    } else if doc.functors().next().is_some() {
        Ok(Subject::Explicit {
            label: label(path),
            doc,
        })
    } else {
        Err(InputError::Other(format!(
            "{}: no functor or family to run",
            path.display()
        )))
    }
}

fn codomain_base(base: &str, category: Option<&str>) -> Result<Subject, InputError> {
    if let Some(c) = samples::named_base(base) {
        return Ok(Subject::Codomain { base: c });
    }
    let doc = read_doc(Path::new(base))?;
    let block = match category {
        Some(n) => doc.category(n),
        None => doc.categories().next(),
    }
    .ok_or_else(|| InputError::Other(format!("{base}: no such category")))?;
    let c = eqfib_core::fincat::validate_category(&block.raw)
        .map_err(|e| InputError::Other(format!("{base}: {e}")))?;
    Ok(Subject::Codomain { base: c })
}

fn execute(subject: Subject, opts: &RunOpts) -> Result<i32, InputError> {
    let manifest = Manifest {
        stages: Manifest::parse_stages(&opts.stages)?,
        budget_morphisms: opts.budget_morphisms,
        budget_cells: opts.budget_cells,
        seed: opts.seed,
    };
    eqfib_core::exec::set_sequential(opts.sequential);
    let out = run(&subject, &manifest);
    let code = out.report.exit_code();
    let text = match opts.emit {
        Emit::Report => Some(out.report.render(opts.timing)),
        Emit::Twocat => out.twocat,
        Emit::Dot => out.dot,
    };
    let Some(text) = text else {
        eprint!("{}", out.report.render(opts.timing));
        return Err(InputError::Other(
            "nothing to emit: the pipeline stopped before synthesis".into(),
        ));
    };
    match &opts.out {
        Some(p) => fs::write(p, text).map_err(|source| InputError::Io {
            path: p.display().to_string(),
            source,
        })?,
        None => print!("{text}"),
    }
    if opts.emit != Emit::Report && code != 0 {
        eprint!("{}", out.report.render(opts.timing));
    }
    Ok(code)
}

fn main_inner(cli: Cli) -> Result<i32, InputError> {
    match cli.cmd {
        Cmd::Run { file, opts }
        | Cmd::Instance {
            kind: InstanceCmd::Load { file, opts },
        } => execute(file_subject(&file)?, &opts),
        Cmd::Instance {
            kind:
                InstanceCmd::Codomain {
                    base,
                    category,
                    opts,
                },
        } => execute(codomain_base(&base, category.as_deref())?, &opts),
        Cmd::Instance {
            kind: InstanceCmd::Subobject { k, opts },
        } => execute(Subject::Subobject { k }, &opts),
        Cmd::Instance {
            kind: InstanceCmd::Groupoids { file, opts },
        } => {
            let subject = match file {
                Some(f) => file_subject(&f)?,
                None => Subject::Groupoids {
                    label: "standard".into(),
                    doc: samples::standard_family_document(),
                },
            };
            execute(subject, &opts)
        }
        Cmd::Print { file } => {
            print!("{}", print(&read_doc(&file)?));
            Ok(0)
        }
        Cmd::Sample { which, base } => {
            let doc = match which {
                SampleKind::Codomain => {
                    let c = samples::named_base(&base)
                        .ok_or_else(|| InputError::Other(format!("unknown base {base}")))?;
                    samples::codomain_document(&c, eqfib_core::instances::DEFAULT_ARROW_CAP)
                        .map_err(|e| InputError::Other(e.to_string()))?
                }
                SampleKind::Mutant => samples::mutant_document(),
                SampleKind::Frobenius => samples::frobenius_document(),
                SampleKind::Family => samples::standard_family_document(),
            };
            print!("{}", print(&doc));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
