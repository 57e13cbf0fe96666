//! `perrot`: command-line driver for the symmetry-adapted molecular rotor
//! toolkit. Exit codes: 0 success, 1 computation error or regression
//! mismatch, 2 usage error.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use perrot_cli::output::{Artifact, Format};
use perrot_cli::{commands, regress};

#[derive(Parser)]
#[command(name = "perrot", version, about = "Symmetry-adapted molecular rotor toolkit")]
struct Cli {
    /// Output format: json, csv, or markdown-table.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Write the artifact to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Reserved for forward compatibility; every computation is
    /// deterministic and ignores it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the admissible rotation-spin species of a molecule.
    Species {
        #[arg(long)]
        molecule: String,
    },
    /// Nuclear statistical weights per nuclear irrep.
    Weights {
        #[arg(long)]
        molecule: String,
    },
    /// Intrinsically entangled fraction at momentum cutoffs (inf = exact).
    Fraction {
        #[arg(long)]
        molecule: String,
        #[arg(long, default_value = "2,4,8,inf")]
        cutoffs: String,
    },
    /// Branching multiplicities of every irrep in D^l up to a cutoff.
    Multiplicities {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 10)]
        lmax: usize,
    },
    /// Gram residual of the generalized Fourier kernel over SO(3)/G.
    FourierCheck {
        #[arg(long)]
        group: String,
        #[arg(long)]
        species: String,
        #[arg(long, default_value_t = 8)]
        lmax: usize,
        /// Beta-quadrature order; defaults to lmax + 1.
        #[arg(long)]
        quad: Option<usize>,
    },
    /// Truncated position-state coefficients at a coset representative.
    Position {
        #[arg(long)]
        molecule: String,
        #[arg(long)]
        species: String,
        /// Euler angles alpha,beta,gamma in radians (z-y-z, active).
        #[arg(long, default_value = "0,0,0")]
        euler: String,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 8)]
        lmax: usize,
        /// Fiber index.
        #[arg(long, default_value_t = 0)]
        mu: usize,
    },
    /// Regularized Berry connection over a descending damping grid.
    Connection {
        #[arg(long)]
        group: String,
        #[arg(long)]
        irrep: String,
        #[arg(long, default_value = "0.5,0.2,0.1,0.05")]
        deltas: String,
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
    },
    /// Monodromy group G / ker Gamma per irrep.
    Monodromy {
        #[arg(long)]
        group: String,
        #[arg(long)]
        irrep: Option<String>,
    },
    /// Binary-cover flat-connection conjecture check.
    Conjecture {
        #[arg(long)]
        group: String,
        #[arg(long)]
        irrep: Option<String>,
    },
    /// Planar two-rotor toy model: pi-rotation phase per species.
    Toy2d {
        #[arg(long)]
        species: String,
    },
    /// Stroboscopic reorientation trace under tilted impulsive kicks.
    Strobe {
        #[arg(long, default_value_t = 3)]
        pulses: usize,
        /// Per-pulse tilt increment in degrees (xz plane).
        #[arg(long, default_value_t = 60.0)]
        tilt: f64,
        #[arg(long, default_value_t = 2.0)]
        eta: f64,
        #[arg(long, default_value_t = 24)]
        lmax: usize,
        /// Rotational constant.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Alignment samples per inter-pulse window.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 1e-3)]
        leak_tol: f64,
    },
    /// Interferometer fringe factor for an |l, m=0> reference state.
    Fringe {
        #[arg(long)]
        species: String,
        #[arg(long, default_value_t = 1)]
        l: usize,
        /// x, y, z, or an equatorial azimuth in degrees.
        #[arg(long, default_value = "y")]
        axis: String,
    },
    /// Compare library output against the bundled published-table fixtures.
    Regress {
        #[arg(long, default_value = "all")]
        table: String,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let format: Format = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let outcome: anyhow::Result<(Artifact, i32)> = match &cli.cmd {
        Cmd::Species { molecule } => commands::species(molecule).map(|a| (a, 0)),
        Cmd::Weights { molecule } => commands::weights(molecule).map(|a| (a, 0)),
        Cmd::Fraction { molecule, cutoffs } => {
            commands::fraction(molecule, cutoffs).map(|a| (a, 0))
        }
        Cmd::Multiplicities { group, lmax } => {
            commands::multiplicities(group, *lmax).map(|a| (a, 0))
        }
        Cmd::FourierCheck { group, species, lmax, quad } => {
            commands::fourier_check(group, species, *lmax, *quad).map(|a| (a, 0))
        }
        Cmd::Position { molecule, species, euler, delta, lmax, mu } => {
            commands::position(molecule, species, euler, *delta, *lmax, *mu).map(|a| (a, 0))
        }
        Cmd::Connection { group, irrep, deltas, threshold } => {
            commands::connection(group, irrep, deltas, *threshold).map(|a| (a, 0))
        }
        Cmd::Monodromy { group, irrep } => {
            commands::monodromy(group, irrep.as_deref()).map(|a| (a, 0))
        }
        Cmd::Conjecture { group, irrep } => {
            commands::conjecture(group, irrep.as_deref()).map(|a| (a, 0))
        }
        Cmd::Toy2d { species } => commands::toy2d(species).map(|a| (a, 0)),
        Cmd::Strobe { pulses, tilt, eta, lmax, b, samples, leak_tol } => {
            commands::strobe(*pulses, *tilt, *eta, *lmax, *b, *samples, *leak_tol)
                .map(|a| (a, 0))
        }
        Cmd::Fringe { species, l, axis } => commands::fringe(species, *l, axis).map(|a| (a, 0)),
        Cmd::Regress { table } => {
            regress::artifact(table).map(|(a, ok)| (a, if ok { 0 } else { 1 }))
        }
    };
    match outcome {
        Ok((artifact, code)) => {
            let rendered = artifact.render(format);
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 1;
                    }
                }
                None => print!("{rendered}"),
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
