//! `theta-epsa`: exact oracles, packings, covers and certificate checks for
//! θ_r minor models on edge-list multigraphs.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use theta_epsa::{BoundParams, Budget, Variant};

#[derive(Parser, Debug)]
#[command(name = "theta-epsa", version, about = "Certified packing and covering of theta_r minor models")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Vertex limit of the exact searches.
    #[arg(long, global = true)]
    pub budget_vertices: Option<usize>,
    /// Edge limit of the exact searches.
    #[arg(long, global = true)]
    pub budget_edges: Option<usize>,
    /// Default budget as "VERTICES,EDGES".
    #[arg(long = "budget", env = "THETA_EPSA_BUDGET", hide = true, global = true)]
    pub budget_env: Option<String>,
    /// Write the JSON or graph output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Bound {
    #[arg(long = "bound-A", default_value_t = 1.0)]
    pub a: f64,
    #[arg(long = "bound-alpha", default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long = "bound-c", default_value_t = 0.9)]
    pub c: f64,
    #[arg(long = "bound-k0", default_value_t = 1)]
    pub k0: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::QuadraticInK)]
    pub variant: VariantArg,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum VariantArg {
    QuadraticInK,
    QuarticInK,
}

impl Bound {
    pub fn params(&self) -> BoundParams {
        BoundParams {
            a: self.a,
            alpha: self.alpha,
            c: self.c,
            k0: self.k0,
            variant: match self.variant {
                VariantArg::QuadraticInK => Variant::QuadraticInK,
                VariantArg::QuarticInK => Variant::QuarticInK,
            },
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Method {
    Exact,
    Recursive,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Theta,
    Cycle,
    Clique,
    Wheel,
    Wall,
    RandomBiconnected,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pack k edge-disjoint models block by block.
    Pack {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        /// Use only the high-degree construction; the graph must be biconnected.
        #[arg(long)]
        high_degree: bool,
        graph: PathBuf,
    },
    /// Edge set meeting every model, derived from a vertex hitting set.
    Cover {
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        graph: PathBuf,
    },
    /// Either k edge-disjoint models or an edge hitting set.
    Pipeline {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        graph: PathBuf,
    },
    /// Re-check a certificate, packing, pipeline result or cover file.
    Verify {
        /// Needed for cover files that do not record r.
        #[arg(long)]
        r: Option<usize>,
        certificate: PathBuf,
        graph: PathBuf,
    },
    /// Exact nu, tau (vertex) and nu', tau' (edge) values.
    Oracle {
        #[arg(long)]
        r: usize,
        graph: PathBuf,
    },
    /// Compare the pipeline cover with the claimed edge gap, per graph.
    Gap {
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        bound: Bound,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
        #[arg(required = true)]
        graphs: Vec<PathBuf>,
    },
    /// Optimal tree decomposition, optionally in nice form.
    Decompose {
        #[arg(long)]
        nice: bool,
        graph: PathBuf,
    },
    /// Write a graph of the given family as an edge list.
    Generate {
        #[arg(value_enum)]
        family: Family,
        /// Vertex count (cycle, clique, random-biconnected) or rim size (wheel).
        #[arg(long)]
        n: Option<usize>,
        /// Number of parallel edges (theta).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        height: Option<usize>,
        #[arg(long)]
        width: Option<usize>,
        /// Extra random edges (random-biconnected); defaults to n / 2.
        #[arg(long)]
        chords: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Why a command failed, mapped to the exit status.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Budget(String),
    Invalid(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::Budget(_) => 3,
            Self::Invalid(_) => 4,
            Self::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Input(m) | Self::Budget(m) | Self::Invalid(m) | Self::Internal(m) => m,
        }
    }
}

impl From<theta_epsa::Error> for Failure {
    fn from(e: theta_epsa::Error) -> Self {
        use theta_epsa::Error as E;
        let m = e.to_string();
        match e {
            E::Scale(_) => Self::Budget(m),
            E::Invariant(_) => Self::Internal(m),
            E::NotHitting { .. } => Self::Invalid(m),
            _ => Self::Input(m),
        }
    }
}

impl Global {
    pub fn budget(&self) -> Result<Budget, Failure> {
        let mut b = Budget::default();
        if let Some(spec) = &self.budget_env {
            let parsed = spec
                .split_once(',')
                .and_then(|(v, e)| Some((v.trim().parse().ok()?, e.trim().parse().ok()?)));
            let (v, e) = parsed.ok_or_else(|| {
                Failure::Input(format!("budget {spec:?} is not of the form VERTICES,EDGES"))
            })?;
            b = Budget { max_vertices: v, max_edges: e };
        }
        if let Some(v) = self.budget_vertices {
            b.max_vertices = v;
        }
        if let Some(e) = self.budget_edges {
            b.max_edges = e;
        }
        Budget::new(b.max_vertices, b.max_edges).map_err(Failure::from)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.global, &cli.command) {
        Ok(out) => {
            if let Some(summary) = &out.summary {
                eprintln!("{summary}");
            }
            if let Err(e) = commands::emit(&cli.global, &out.body) {
                eprintln!("error: {}", e.message());
                return ExitCode::from(e.code());
            }
            ExitCode::SUCCESS
        }
        Err(Failed { failure, body }) => {
            if let Some(body) = body {
                if let Err(e) = commands::emit(&cli.global, &body) {
                    eprintln!("error: {}", e.message());
                }
            }
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

/// A failure, possibly with a JSON body explaining it.
pub struct Failed {
    pub failure: Failure,
    pub body: Option<String>,
}

impl From<Failure> for Failed {
    fn from(failure: Failure) -> Self {
        Self { failure, body: None }
    }
}

impl From<theta_epsa::Error> for Failed {
    fn from(e: theta_epsa::Error) -> Self {
        Failure::from(e).into()
    }
}
