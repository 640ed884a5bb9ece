mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "molkit",
    version,
    about = "Exact computation in modular ortholattices"
)]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Append wall-clock timing to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finite ortholattices (file or built-in spec such as mo:3, prod:mo:2,bool:1).
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Subspaces of Q^n under a positive definite form.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Point geometries with collinearity and orthogonality.
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Frames and their coordinate rings.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// The A_k/B_k constructions and the doubling embedding.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Terms, identities and orthoimplications.
    #[command(subcommand)]
    Term(TermCmd),
    /// Write lattice files for built-in specs.
    Corpus {
        specs: Vec<String>,
        /// Directory to write `<spec>.lat` files into; prints to stdout otherwise.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Lattice, ortholattice, modular and orthomodular checks.
    Check { lattice: String },
    /// Factorization into Boolean and MO_n factors.
    Decompose { lattice: String },
    /// All congruences with their quotient sets re-checked.
    Congruences { lattice: String },
    /// Subdirect irreducibility by congruences and by perspectivity.
    Si { lattice: String },
}

#[derive(Args, Debug)]
pub struct FormArg {
    /// Form: identity:N, diag:d1,d2,... or a Gram matrix file (default identity).
    #[arg(long)]
    form: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum SpaceCmd {
    /// Orthogonal complement.
    Ortho {
        #[command(flatten)]
        form: FormArg,
        #[arg(long = "in")]
        input: String,
    },
    Meet {
        a: String,
        b: String,
    },
    Join {
        a: String,
        b: String,
    },
    /// Common complement of two subspaces, if any.
    Perspective {
        a: String,
        b: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum GeomCmd {
    /// Connected components of the collinearity graph.
    Components { geometry: String },
    /// Whether the orthogonality is a polarity.
    Polarity { geometry: String },
    /// Representation of a lattice (or a subalgebra given by element names) in its point geometry.
    Represent {
        lattice: String,
        /// Comma-separated element names of a subalgebra.
        #[arg(long)]
        sub: Option<String>,
    },
    /// Subgeometry generated by a set of points under the triangle rule.
    Closure {
        geometry: String,
        /// Comma-separated point names.
        #[arg(long)]
        points: String,
        /// Iteration cap (default: MOLKIT_CAP or 100000).
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Args, Debug)]
pub struct FrameArg {
    /// Canonical frame `N:M` (order N, block size M).
    #[arg(long, default_value = "3:1")]
    frame: String,
    #[command(flatten)]
    form: FormArg,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    Star,
}

#[derive(Subcommand, Debug)]
pub enum FrameCmd {
    /// Print and check a canonical frame.
    Canonical(FrameArg),
    /// Check the frame axioms for a frame file (`a I` / `a I J` headers, each followed by a subspace).
    Check {
        file: String,
        #[command(flatten)]
        form: FormArg,
    },
    /// Ring operation on elements given by matrices, checked against matrix arithmetic.
    RingOp {
        #[arg(long, value_enum)]
        op: RingOp,
        #[command(flatten)]
        frame: FrameArg,
        /// Coordinate domain `i,j` (1-based).
        #[arg(long, default_value = "1,2")]
        at: String,
        /// Operands as inline matrices, e.g. `2`, `1/2`, `1 2; 3 4`.
        #[arg(long, num_args = 1..=2, allow_hyphen_values = true)]
        args: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum WitnessCmd {
    /// A_k and B_k with positive definiteness checks.
    Ab {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value = "1")]
        b: String,
    },
    /// Generating orthogonal 3-frame on Q^{3n}.
    M2 {
        #[arg(long)]
        k: usize,
        /// List every identity check.
        #[arg(long)]
        verify: bool,
    },
    /// Replay of the 6-frame construction for seeds a, b (inline matrices).
    LemmaM {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Replay of one inductive generation step.
    M1 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Doubling embedding Q^m → Q^{2m}.
    Double {
        #[arg(long = "in")]
        input: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum TermCmd {
    /// Evaluate a term in a finite model under an assignment `x=a,y=b`.
    Eval {
        #[arg(long)]
        model: String,
        term: String,
        #[arg(long, default_value = "")]
        env: String,
    },
    /// Check an identity `(= g h)` or an orthoimplication in a model.
    Check {
        /// Lattice file or spec, or space:FORM for sampled subspace checks.
        #[arg(long)]
        model: String,
        statement: String,
        /// Samples for space models.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Translate an identity `(= g h)`, where g ≤ h holds in every ortholattice, into an orthoimplication; with a model, check both.
    Translate {
        statement: String,
        #[arg(long)]
        model: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let start = Instant::now();
    let mut report = Report::new(command);
    if let Err(e) = commands::run(&cli, &mut report) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if cli.timing {
        report.set_timing(start.elapsed());
    }
    if report.checks.is_empty() && report.output.is_empty() {
        return ExitCode::SUCCESS;
    }
    let text = if cli.json {
        report.render_json() + "\n"
    } else {
        report.render_text()
    };
    // A closed pipe (`| head`) is not an error.
    let _ = std::io::stdout().write_all(text.as_bytes());
    if report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
