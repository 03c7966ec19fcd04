//! `palitrie`: replay operation scripts, cross-check engines, benchmark and
//! export DOT drawings.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use palitrie::check;
use palitrie::script::{self, GenConfig, Op, Shape};
use palitrie::{EngineKind, Error, Session};

#[derive(Parser)]
#[command(
    name = "palitrie",
    version,
    about = "Online maximal and distinct palindromes in a dynamic trie"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay a script and print one JSON event per operation.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "eertree-quick")]
        engine: EngineKind,
        /// write the event log here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate random scripts and diff every engine against the oracle.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        ops: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[arg(long, default_value = "uniform")]
        shape: Shape,
        /// engines to test (repeatable); all but the oracle by default
        #[arg(long = "engine")]
        engines: Vec<EngineKind>,
        /// number of scripts, seeded `seed`, `seed+1`, ...
        #[arg(long, default_value_t = 1)]
        scripts: u64,
        #[arg(long, default_value_t = 0.2)]
        delete_ratio: f64,
        /// write the first generated script here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Time replays of growing scripts; CSV on stdout.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
        sizes: Vec<usize>,
        #[arg(long, default_value = "eertree-quick")]
        engine: EngineKind,
        #[arg(long, default_value = "adversarial")]
        shape: Shape,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a structure as DOT: trie, eertree, suffixtree or groups.
    Export {
        what: String,
        /// script to replay first; empty structures if omitted
        #[arg(long)]
        ops: Option<PathBuf>,
        /// engine used for `eertree`
        #[arg(long, default_value = "eertree-quick")]
        engine: EngineKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with a process exit code.
struct Fail {
    code: u8,
    msg: String,
}

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Self {
        Fail {
            code: 1,
            msg: format!("{e:#}"),
        }
    }
}

fn semantic(e: Error) -> Fail {
    Fail {
        code: 3,
        msg: e.to_string(),
    }
}

fn sink(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(path: &Path) -> Result<Vec<Op>, Fail> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    script::parse(&text).map_err(|e| Fail {
        code: 2,
        msg: format!("{}: parse error at {e}", path.display()),
    })
}

fn apply(s: &mut Session, op: Op) -> palitrie::Result<palitrie::Event> {
    match op {
        Op::Insert { parent, label } => s.insert(parent, label),
        Op::Delete { id } => s.delete(id),
    }
}

fn cmd_run(file: &Path, engine: EngineKind, out: &Option<PathBuf>) -> Result<(), Fail> {
    let ops = load(file)?;
    let mut w = sink(out)?;
    let mut s = Session::open(engine);
    for (i, op) in ops.into_iter().enumerate() {
        match apply(&mut s, op) {
            Ok(ev) => {
                serde_json::to_writer(&mut w, &ev).context("writing event")?;
                writeln!(w).context("writing event")?;
            }
            Err(e) => {
                w.flush().context("writing event")?;
                return Err(Fail {
                    code: 3,
                    msg: format!("{e} (operation {}: {op})", i + 1),
                });
            }
        }
    }
    w.flush().context("writing event")?;
    let d = s.distinct_count();
    eprintln!(
        "distinct palindromes: {d} nonempty, {} with the empty string; maximal: {}",
        d + 1,
        s.maximal_count()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    seed: u64,
    ops: usize,
    sigma: u32,
    shape: Shape,
    engines: Vec<EngineKind>,
    scripts: u64,
    delete_ratio: f64,
    out: &Option<PathBuf>,
    fault: bool,
) -> Result<(), Fail> {
    let engines: Vec<_> = if engines.is_empty() {
        EngineKind::ALL
            .into_iter()
            .filter(|&k| k != EngineKind::Oracle)
            .collect()
    } else {
        engines
    };
    let corpus: Vec<Vec<Op>> = (0..scripts)
        .map(|i| {
            script::generate(
                &GenConfig::new(seed + i, ops, sigma, shape).with_deletes(delete_ratio),
            )
        })
        .collect();
    if let (Some(p), Some(first)) = (out, corpus.first()) {
        fs::write(p, script::format(first)).with_context(|| format!("writing {}", p.display()))?;
    }
    let bad = check::check_all(&engines, &corpus, fault);
    if let Some(d) = bad.first() {
        println!("FAIL\n{}", d.report());
        return Err(Fail {
            code: 1,
            msg: format!("{} engine(s) diverged from the oracle", bad.len()),
        });
    }
    let names: Vec<_> = engines.iter().map(|k| k.name()).collect();
    println!(
        "PASS: {} script(s) of {ops} ops (seed {seed}, sigma {sigma}, {shape}) on {}",
        corpus.len(),
        names.join(", ")
    );
    Ok(())
}

fn cmd_bench(
    sizes: &[usize],
    engine: EngineKind,
    shape: Shape,
    sigma: u32,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<(), Fail> {
    let mut w = sink(out)?;
    writeln!(w, "size,ops,wall_ms,chain_steps,max_steps_per_insert").context("writing csv")?;
    for &size in sizes {
        let ops = match shape {
            Shape::Adversarial => script::adversarial(size, size),
            _ => script::generate(&GenConfig::new(seed, size, sigma, shape)),
        };
        let mut s = Session::open(engine);
        let mut max_step = 0;
        let start = Instant::now();
        for &op in &ops {
            apply(&mut s, op).map_err(semantic)?;
            max_step = max_step.max(s.last_chain_steps());
        }
        let ms = start.elapsed().as_secs_f64() * 1e3;
        writeln!(
            w,
            "{size},{},{ms:.3},{},{max_step}",
            ops.len(),
            s.chain_steps()
        )
        .context("writing csv")?;
    }
    w.flush().context("writing csv")?;
    Ok(())
}

fn cmd_export(
    what: &str,
    ops: &Option<PathBuf>,
    engine: EngineKind,
    out: &Option<PathBuf>,
) -> Result<(), Fail> {
    let kind = match what {
        "trie" | "groups" => EngineKind::EertreeQuick,
        "eertree" if engine.strategy().is_some() => engine,
        "eertree" => EngineKind::EertreeQuick,
        "suffixtree" => EngineKind::SuffixTree,
        other => return Err(semantic(Error::UnknownTarget(other.to_string()))),
    };
    let ops = match ops {
        Some(p) => load(p)?,
        None => Vec::new(),
    };
    let mut s = Session::open(kind);
    for op in ops {
        apply(&mut s, op).map_err(semantic)?;
    }
    let t = s.trie();
    let dot = match what {
        "trie" => t.to_dot(),
        "groups" => s.groups().expect("eertree session keeps groups").to_dot(t),
        "eertree" => s.eertree().expect("eertree session").to_dot(t),
        _ => s.suffix_tree().expect("suffix tree session").to_dot(t),
    };
    let mut w = sink(out)?;
    w.write_all(dot.as_bytes()).context("writing dot")?;
    w.flush().context("writing dot")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Run { file, engine, out } => cmd_run(&file, engine, &out),
        Cmd::Check {
            seed,
            ops,
            sigma,
            shape,
            engines,
            scripts,
            delete_ratio,
            out,
            inject_fault,
        } => cmd_check(
            seed,
            ops,
            sigma,
            shape,
            engines,
            scripts,
            delete_ratio,
            &out,
            inject_fault,
        ),
        Cmd::Bench {
            sizes,
            engine,
            shape,
            sigma,
            seed,
            out,
        } => cmd_bench(&sizes, engine, shape, sigma, seed, &out),
        Cmd::Export {
            what,
            ops,
            engine,
            out,
        } => cmd_export(&what, &ops, engine, &out),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
