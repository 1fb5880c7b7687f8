use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lsbec_core::bounds::{decade_grid, evaluate_bounds, scaling_diagnostics, BoundOptions, ScalingSpec};
use lsbec_core::disorder::{sample_realization, DisorderRealization, EnsembleSeed};
use lsbec_core::lab::{emit_report, run_ensemble, ExperimentConfig, ReportFormat};
use lsbec_core::spectrum::{build_converged_spectrum, build_spectrum};
use lsbec_core::thermo::{condensate_profile, ensure_feasible, grand_canonical_chemical_potential, saturation_density};
use lsbec_core::{fmt_real, Error, Result};

#[derive(Parser)]
#[command(name = "lsbec", version, about = "Luttinger–Sy disorder, spectra, canonical Bose statistics and bound checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Sample one Poisson realization and print it (header + one point per line).
    Sample {
        #[command(flatten)]
        realization: RealizationArgs,
    },
    /// Print the Dirichlet spectrum of one realization as CSV.
    Spectrum {
        #[command(flatten)]
        realization: RealizationArgs,
        /// Explicit energy cutoff; defaults to the converged cutoff for --beta.
        #[arg(long)]
        cutoff: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
    /// Canonical occupations of the ideal gas on one realization.
    ///
    /// The exact recursion is O(N²) in time; N is limited to 20000.
    Occupancy {
        #[command(flatten)]
        realization: RealizationArgs,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 8)]
        top_k: usize,
    },
    /// Single-realization bound checks as key=value records.
    Bounds {
        #[command(flatten)]
        realization: RealizationArgs,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 5.0)]
        alpha: f64,
        /// Hard-core radius a (enables the hard-core check).
        #[arg(long)]
        hard_core_radius: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        interaction_l1_norm: f64,
    },
    /// Full ensemble from a config file; flags override file values.
    ///
    /// The thermo check runs the O(N²) canonical recursion and refuses N > 20000.
    Scan {
        /// Flat `key = value` config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Extra `key=value` overrides, applied after the file and flags.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[command(flatten)]
        flags: ScanFlags,
        #[arg(long, value_enum, default_value_t = Emit::Both)]
        emit: Emit,
    },
    /// Scaling diagnostics of the interaction sequences; no sampling.
    Diag {
        #[command(flatten)]
        laws: LawArgs,
        /// Comma-separated N grid; defaults to decades 10^2 .. 10^12.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
    },
}

#[derive(Args)]
struct RealizationArgs {
    #[arg(long, default_value_t = 1.0)]
    intensity: f64,
    /// Box length L; takes precedence over --particles/--density.
    #[arg(long)]
    length: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    /// Particle number N; the box length is N / density.
    #[arg(long, default_value_t = 1000)]
    particles: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    index: u64,
}

impl RealizationArgs {
    fn box_length(&self) -> f64 {
        self.length.unwrap_or(self.particles as f64 / self.density)
    }

    fn particle_number(&self) -> u64 {
        match self.length {
            Some(l) => (l * self.density).round() as u64,
            None => self.particles,
        }
    }

    fn sample(&self) -> Result<DisorderRealization> {
        sample_realization(self.intensity, self.box_length(), EnsembleSeed::new(self.seed, self.index))
    }
}

#[derive(Args)]
struct LawArgs {
    /// a_N as `coefficient[,exponent[,log_exponent]]`.
    #[arg(long)]
    hard_core_radius: Option<String>,
    /// A_N as `coefficient[,exponent[,log_exponent]]`.
    #[arg(long)]
    interaction_range: Option<String>,
    /// b_N as `coefficient[,exponent[,log_exponent]]`.
    #[arg(long)]
    interaction_floor: Option<String>,
    /// ε_N as `coefficient[,exponent[,log_exponent]]`.
    #[arg(long)]
    contact_width: Option<String>,
}

impl LawArgs {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        [
            ("hard_core_radius", &self.hard_core_radius),
            ("interaction_range", &self.interaction_range),
            ("interaction_floor", &self.interaction_floor),
            ("contact_width", &self.contact_width),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }
}

#[derive(Args)]
struct ScanFlags {
    #[arg(long)]
    intensity: Option<String>,
    #[arg(long)]
    density: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    n_schedule: Option<String>,
    #[arg(long)]
    realizations_per_n: Option<String>,
    #[arg(long)]
    base_seed: Option<String>,
    /// Comma-separated subset of: longest_interval, long_intervals, thermo, hard_core, scaling, trial_energy.
    #[arg(long)]
    checks: Option<String>,
    #[arg(long)]
    output_dir: Option<String>,
    #[arg(long)]
    top_k: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    interaction_l1_norm: Option<String>,
    #[command(flatten)]
    laws: LawArgs,
}

impl ScanFlags {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        let plain = [
            ("intensity", &self.intensity),
            ("density", &self.density),
            ("beta", &self.beta),
            ("n_schedule", &self.n_schedule),
            ("realizations_per_n", &self.realizations_per_n),
            ("base_seed", &self.base_seed),
            ("checks", &self.checks),
            ("output_dir", &self.output_dir),
            ("top_k", &self.top_k),
            ("epsilon", &self.epsilon),
            ("alpha", &self.alpha),
            ("interaction_l1_norm", &self.interaction_l1_norm),
        ];
        for (k, v) in plain {
            if let Some(v) = v {
                cfg.set(k, v)?;
            }
        }
        for (k, v) in self.laws.pairs() {
            cfg.set(k, v)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Summary,
    Records,
    Both,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample { realization } => {
            print!("{}", realization.sample()?.to_text());
        }
        Command::Spectrum {
            realization,
            cutoff,
            beta,
        } => {
            let r = realization.sample()?;
            let spectrum = match cutoff {
                Some(c) => build_spectrum(&r, c)?,
                None => build_converged_spectrum(&r, beta)?,
            };
            print!("{}", spectrum.to_csv());
        }
        Command::Occupancy {
            realization,
            beta,
            top_k,
        } => {
            let n = realization.particle_number();
            ensure_feasible(n)?;
            let r = realization.sample()?;
            let spectrum = build_converged_spectrum(&r, beta)?;
            let sol = condensate_profile(&spectrum, beta, n, top_k.min(spectrum.len()))?;
            print!("{}", sol.to_record());
            let mu = grand_canonical_chemical_potential(spectrum.energies(), beta, n as f64)?;
            println!("grand_canonical_mu={}", fmt_real(mu));
            println!("saturation_density={}", fmt_real(saturation_density(&spectrum, beta)));
            println!("mode_count={}", spectrum.len());
        }
        Command::Bounds {
            realization,
            epsilon,
            alpha,
            hard_core_radius,
            interaction_l1_norm,
        } => {
            let r = realization.sample()?;
            let opts = BoundOptions {
                epsilon,
                alpha,
                hard_core_radius,
                interaction_l1_norm,
            };
            let density = realization.particle_number() as f64 / r.box_length();
            print!("{}", evaluate_bounds(&r, density, &opts)?.to_text());
        }
        Command::Scan {
            config,
            overrides,
            flags,
            emit,
        } => {
            let mut cfg = match &config {
                Some(path) => ExperimentConfig::from_file(path)?,
                None => ExperimentConfig::default(),
            };
            flags.apply(&mut cfg)?;
            for o in &overrides {
                let (k, v) = o
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidArgument(format!("override `{o}` is not KEY=VALUE")))?;
                cfg.set(k, v)?;
            }
            let report = run_ensemble(&cfg)?;
            let formats: &[ReportFormat] = match emit {
                Emit::Summary => &[ReportFormat::SummaryTable],
                Emit::Records => &[ReportFormat::FullRecords],
                Emit::Both => &[ReportFormat::SummaryTable, ReportFormat::FullRecords],
            };
            for f in formats {
                let path = emit_report(&report, *f, &cfg.output_dir)?;
                println!("{}", path.display());
            }
        }
        Command::Diag { laws, grid } => {
            let mut cfg = ExperimentConfig::default();
            for (k, v) in laws.pairs() {
                cfg.set(k, v)?;
            }
            let spec: ScalingSpec = cfg.scaling;
            spec.validate()?;
            let grid: Vec<u64> = if grid.is_empty() {
                decade_grid(2, 12)
            } else {
                grid.iter().map(|&x| x as u64).collect()
            };
            print!("{}", scaling_diagnostics(&spec, &grid)?.to_csv());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lsbec: {e}");
            ExitCode::FAILURE
        }
    }
}
