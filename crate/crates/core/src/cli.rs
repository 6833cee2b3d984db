//! The `efg-lattice` command-line driver.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 negative verdict
//! (for example a non-distributive lattice), 3 internal invariant violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::batch::{check_game, GameFailure, PATH_SAMPLES};
use crate::bridge::{
    lattice_to_efg_with_sink, simplify_efg_with_sink, verify_isomorphism, BridgeError,
    ASCII_SINK_LABEL, SINK_LABEL,
};
use crate::dot::{emit_diagram, Diagram};
use crate::efg::{explore, fireable, verify_propp, EfgError, ExploreOptions, DEFAULT_MAX_EDGES};
use crate::format::{emit_efg, emit_poset, parse_efg, parse_poset, ParseError};
use crate::lattice::{check_lattice, Lattice};
use crate::poset::{Poset, DEFAULT_MAX_ELEMENTS};

#[derive(Debug, Parser)]
#[command(
    name = "efg-lattice",
    version,
    about = "Distributive lattices and Edge Firing Games"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Element cap for filter enumeration.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_MAX_ELEMENTS)]
    max_elements: usize,
    /// Edge cap for configuration-space exploration.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_MAX_EDGES)]
    max_edges: usize,
    /// Seed for randomised checks.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    seed: u64,
    /// Only print summaries.
    #[arg(long, global = true)]
    quiet: bool,
    /// Name constructed sinks `_bot` instead of `⊥`.
    #[arg(long, global = true)]
    ascii_sink: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Poset documents.
    #[command(subcommand)]
    Poset(PosetCommand),
    /// Lattices, given as poset documents.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Edge Firing Game documents.
    #[command(subcommand)]
    Efg(EfgCommand),
    /// Check that a game's configuration space is a distributive lattice.
    ProppCheck { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum PosetCommand {
    /// List every filter in canonical order.
    Filters { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum LatticeCommand {
    /// Check the lattice axioms and distributivity.
    Check { file: PathBuf },
    /// Print the order induced on join-irreducibles.
    Irreducibles { file: PathBuf },
    /// Build the simple game whose configuration space is the lattice.
    ToEfg {
        file: PathBuf,
        #[arg(short, long, value_name = "OUT")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum EfgCommand {
    /// Enumerate the configuration space.
    Explore {
        file: PathBuf,
        /// Write the configuration space as a DOT diagram.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// Replace the game by an equivalent simple one.
    Simplify {
        file: PathBuf,
        #[arg(short, long, value_name = "OUT")]
        output: Option<PathBuf>,
    },
    /// Certify that a game's configuration space is isomorphic to a lattice.
    Verify {
        lattice_file: PathBuf,
        efg_file: PathBuf,
    },
}

/// A failed run, by exit code.
#[derive(Debug)]
enum Failure {
    Input(String),
    Verdict(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Verdict(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Verdict(m) | Failure::Internal(m) => m,
        }
    }
}

fn efg_failure(e: EfgError) -> Failure {
    match e {
        EfgError::ShotSetConflict { .. } | EfgError::Cyclic => Failure::Internal(e.to_string()),
        e => Failure::Input(e.to_string()),
    }
}

fn bridge_failure(e: BridgeError) -> Failure {
    match e {
        BridgeError::Efg(e) => efg_failure(e),
        BridgeError::ProppViolation(_) => Failure::Internal(e.to_string()),
        BridgeError::Lattice(_) => Failure::Input(e.to_string()),
        e => Failure::Verdict(e.to_string()),
    }
}

fn parse_failure(path: &Path, e: ParseError) -> Failure {
    match e {
        ParseError::Efg(e @ (EfgError::ShotSetConflict { .. } | EfgError::Cyclic)) => {
            Failure::Internal(e.to_string())
        }
        e => Failure::Input(format!("{}: {e}", path.display())),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_poset(path: &Path) -> Result<Poset, Failure> {
    parse_poset(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn read_lattice(path: &Path) -> Result<Lattice, Failure> {
    check_lattice(&read_poset(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

struct Streams<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    quiet: bool,
}

impl Streams<'_> {
    fn line(&mut self, text: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", text.as_ref());
    }

    fn detail(&mut self, text: impl AsRef<str>) {
        if !self.quiet {
            self.line(text);
        }
    }

    fn note(&mut self, text: impl AsRef<str>) {
        if !self.quiet {
            let _ = writeln!(self.err, "{}", text.as_ref());
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let mut io = Streams {
        out,
        err,
        quiet: cli.global.quiet,
    };
    match dispatch(&cli.command, &cli.global, &mut io) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: &Command, g: &Global, io: &mut Streams<'_>) -> Result<(), Failure> {
    let opts = ExploreOptions {
        max_edges: g.max_edges,
    };
    let sink = if g.ascii_sink {
        ASCII_SINK_LABEL
    } else {
        SINK_LABEL
    };
    match command {
        Command::Poset(PosetCommand::Filters { file }) => {
            let p = read_poset(file)?;
            let filters = p
                .enumerate_filters(g.max_elements)
                .map_err(|e| Failure::Input(e.to_string()))?;
            io.line(format!("{} filters", filters.len()));
            for f in &filters {
                io.detail(f.display(&p));
            }
        }
        Command::Lattice(LatticeCommand::Check { file }) => {
            let l = read_lattice(file)?;
            match l.distributivity_violation() {
                None => io.line(format!("lattice: {} elements, distributive", l.len())),
                Some(v) => {
                    let name = |i: usize| l.base().label(i).to_owned();
                    io.line(format!("lattice: {} elements, not distributive", l.len()));
                    io.line(format!(
                        "witness: a={} b={} c={} violates {}: {} != {}",
                        name(v.a),
                        name(v.b),
                        name(v.c),
                        v.law,
                        name(v.lhs),
                        name(v.rhs)
                    ));
                    return Err(Failure::Verdict("lattice is not distributive".into()));
                }
            }
        }
        Command::Lattice(LatticeCommand::Irreducibles { file }) => {
            let l = read_lattice(file)?;
            let j = l.induced_order();
            io.line(format!("# {} join-irreducibles", j.len()));
            let _ = write!(io.out, "{}", emit_poset(&j));
        }
        Command::Lattice(LatticeCommand::ToEfg { file, output }) => {
            let l = read_lattice(file)?;
            let game = lattice_to_efg_with_sink(&l, sink).map_err(bridge_failure)?;
            let text = emit_efg(&game);
            match output {
                Some(path) => {
                    write_file(path, &text)?;
                    io.note(format!("wrote {}", path.display()));
                }
                None => {
                    let _ = write!(io.out, "{text}");
                }
            }
        }
        Command::Efg(EfgCommand::Explore { file, dot }) => {
            let e = parse_efg(&read(file)?).map_err(|err| parse_failure(file, err))?;
            let space = explore(&e, opts).map_err(efg_failure)?;
            verify_propp(&space).map_err(|f| Failure::Internal(f.to_string()))?;
            io.line(format!(
                "{} configurations, {}, distributive",
                space.len(),
                if space.is_simple() {
                    "simple"
                } else {
                    "not simple"
                }
            ));
            let graph = space.graph();
            for c in 0..space.len() {
                let steps: Vec<String> = space
                    .steps_from(c)
                    .map(|s| format!("{}->c{}", graph.vertex(s.vertex), s.to))
                    .collect();
                io.detail(format!(
                    "c{c} shot {} fires [{}]",
                    space.shot_display(c),
                    steps.join(" ")
                ));
            }
            if let Some(path) = dot {
                write_file(path, &emit_diagram(Diagram::Space(&space)))?;
                io.note(format!("wrote {}", path.display()));
            }
        }
        Command::Efg(EfgCommand::Simplify { file, output }) => {
            let e = parse_efg(&read(file)?).map_err(|err| parse_failure(file, err))?;
            let simplified = simplify_efg_with_sink(&e, opts, sink).map_err(bridge_failure)?;
            let text = emit_efg(&simplified.game);
            io.note(format!(
                "simplified: {} configurations, {} vertices, {} edges",
                simplified.lattice.len(),
                simplified.game.graph().vertices().len(),
                simplified.game.graph().edges().len()
            ));
            match output {
                Some(path) => {
                    write_file(path, &text)?;
                    io.note(format!("wrote {}", path.display()));
                }
                None => {
                    let _ = write!(io.out, "{text}");
                }
            }
        }
        Command::Efg(EfgCommand::Verify {
            lattice_file,
            efg_file,
        }) => {
            let l = read_lattice(lattice_file)?;
            let e = parse_efg(&read(efg_file)?).map_err(|err| parse_failure(efg_file, err))?;
            let space = explore(&e, opts).map_err(efg_failure)?;
            let cert = verify_isomorphism(&l, &space).map_err(bridge_failure)?;
            io.line(format!(
                "isomorphism verified: {} configurations, {} lattice elements",
                space.len(),
                l.len()
            ));
            for (c, &x) in cert.composed.iter().enumerate() {
                let fires: Vec<&str> = fireable(space.graph(), space.config(c))
                    .into_iter()
                    .map(|v| space.graph().vertex(v))
                    .collect();
                io.detail(format!(
                    "c{c} shot {} -> {} fires [{}]",
                    space.shot_display(c),
                    l.base().label(x),
                    fires.join(" ")
                ));
            }
        }
        Command::ProppCheck { file } => {
            let e = parse_efg(&read(file)?).map_err(|err| parse_failure(file, err))?;
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let report = check_game(&e, opts, PATH_SAMPLES, &mut rng).map_err(|f| match f {
                GameFailure::Efg(e) => efg_failure(e),
                f => Failure::Internal(f.to_string()),
            })?;
            io.line(format!(
                "propp: {} configurations form a distributive lattice",
                report.configs
            ));
            io.detail("acyclic: yes");
            io.detail("initial configuration is the unique maximum: yes");
            io.detail(format!(
                "path independence: {} configurations with several predecessors, {} sampled paths each (seed {})",
                report.multi_parent_configs, PATH_SAMPLES, g.seed
            ));
        }
    }
    Ok(())
}
