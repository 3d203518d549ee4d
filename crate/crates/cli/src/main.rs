use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod render;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "plifs", version, about = "Dimension estimates for continuous piecewise linear IFS on the line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type vector, injectivity, smallness, IOSC and regularity of breaks
    Check {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Cylinder depth of the regularity diagnostic
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Dimension estimates
    Dim {
        #[arg(value_enum)]
        method: DimMethod,
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Level range of the natural-dimension sequence, e.g. 6..11
        #[arg(long = "n", value_parser = parse_range)]
        levels: Option<(usize, usize)>,
        /// Cylinder level of the punctured graph
        #[arg(long)]
        level: Option<usize>,
        /// Trailing window for the natural-dimension estimate
        #[arg(long, default_value_t = 3)]
        window: usize,
        /// Depth used to certify breaking points off the attractor
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Chaos-game sample count for box counting
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        /// Write `method,param,value` rows to this file
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Lebesgue-measure evidence from cylinder unions
    Measure {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Levels of the bound sequence (only the upper end is used)
        #[arg(long = "n", value_parser = parse_range)]
        levels: Option<(usize, usize)>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Cylinder intervals as CSV rows or an SVG picture
    Render {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separation of the generated similarities at one level
    Esc {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        level: usize,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct Common {
    /// Relative geometric tolerance (scaled by |I^F|)
    #[arg(long, default_value_t = plifs_core::DEFAULT_REL_TOL)]
    tol: f64,
    /// Largest number of intervals one enumeration may produce
    #[arg(long)]
    budget: Option<u64>,
}

impl Common {
    fn budget(&self) -> plifs_core::Budget {
        self.budget.map(plifs_core::Budget).unwrap_or_else(plifs_core::Budget::from_env)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum DimMethod {
    Natural,
    Gdifs,
    Punctured,
    Determinant,
    Box,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Svg,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a == 0 || a > b {
        return Err(format!("need 1 <= A <= B, got {a}..{b}"));
    }
    Ok((a, b))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Check { file, common, depth } => {
            let f = commands::load(&file)?;
            commands::check(&f, depth, common.tol, common.budget())
        }
        Command::Dim {
            method,
            file,
            common,
            levels,
            level,
            window,
            depth,
            seed,
            samples,
            csv,
        } => {
            let f = commands::load(&file)?;
            let config = plifs_core::ReportConfig {
                levels,
                window,
                punctured_level: level,
                samples,
                seed,
                regularity_depth: depth,
                rel_tol: common.tol,
                budget: common.budget(),
                ..plifs_core::ReportConfig::default()
            };
            let rows = match method {
                DimMethod::Natural => commands::dim_natural(&f, &config)?,
                DimMethod::Gdifs => commands::dim_gdifs(&f, &config)?,
                DimMethod::Punctured => commands::dim_punctured(&f, &config)?,
                DimMethod::Determinant => commands::dim_determinant(&f, &config)?,
                DimMethod::Box => commands::dim_box(&f, &config)?,
                DimMethod::All => commands::dim_all(&f, &config)?,
            };
            if let Some(path) = csv {
                commands::write_rows(&path, &rows)?;
            }
            Ok(())
        }
        Command::Measure {
            file,
            common,
            levels,
            csv,
        } => {
            let f = commands::load(&file)?;
            let rows = commands::measure(&f, levels.map(|r| r.1), common.budget())?;
            if let Some(path) = csv {
                commands::write_rows(&path, &rows)?;
            }
            Ok(())
        }
        Command::Render {
            file,
            common,
            depth,
            format,
            out,
        } => {
            let f = commands::load(&file)?;
            let text = match format {
                Format::Csv => render::csv(&f, depth, common.budget())?,
                Format::Svg => render::svg(&f, depth, common.budget())?,
            };
            commands::emit(out.as_deref(), &text)
        }
        Command::Esc { file, common, level } => {
            let f = commands::load(&file)?;
            commands::esc(&f, level, common.budget())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
