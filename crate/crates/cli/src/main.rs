use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use udom_cli::{cmd_check, cmd_domdim, cmd_inspect, cmd_reproduce_paper, CliError, Format, Report, RunConfig};

#[derive(Parser)]
#[command(name = "udom", version, about = "U-dominant dimension of bimodules over quiver algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebra, bimodule and validation summary
    Inspect(Common),
    /// U-dominant dimension on both sides and U-resolution dimensions of E_0
    Domdim(Common),
    /// Run checkers (claim ids, or `all`)
    Check {
        #[command(flatten)]
        common: Common,
        /// Claim ids; empty or `all` runs every checker
        #[arg(long = "claim", value_delimiter = ',')]
        claims: Vec<String>,
    },
    /// Recompute the two worked examples with U = Λ
    ReproducePaper(Flags),
}

#[derive(Args)]
struct Common {
    /// Instance file, or a built-in fixture name
    instance: String,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Field characteristic (prime below 65536); overrides the instance
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = RunConfig::default().ext_bound)]
    ext_bound: usize,
    #[arg(long, default_value_t = RunConfig::default().d_max)]
    d_max: usize,
    /// Bound on projective dimensions of *E
    #[arg(long, default_value_t = RunConfig::default().resolution_length)]
    resolution_length: usize,
    #[arg(long, default_value_t = RunConfig::default().seed)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

impl Flags {
    fn config(&self, instance: &str) -> RunConfig {
        RunConfig {
            instance: instance.into(),
            p: self.p,
            ext_bound: self.ext_bound,
            d_max: self.d_max,
            resolution_length: self.resolution_length,
            seed: self.seed,
            format: match self.format {
                FormatArg::Json => Format::Json,
                FormatArg::Table => Format::Table,
            },
        }
    }
}

fn run(cli: Cli) -> Result<(Report, Format), CliError> {
    let (report, cfg) = match cli.command {
        Command::Inspect(c) => {
            let cfg = c.flags.config(&c.instance);
            (cmd_inspect(&cfg)?, cfg)
        }
        Command::Domdim(c) => {
            let cfg = c.flags.config(&c.instance);
            (cmd_domdim(&cfg)?, cfg)
        }
        Command::Check { common, claims } => {
            let cfg = common.flags.config(&common.instance);
            (cmd_check(&cfg, &claims)?, cfg)
        }
        Command::ReproducePaper(f) => {
            let cfg = f.config("paper-ex-1,paper-ex-2");
            (cmd_reproduce_paper(&cfg)?, cfg)
        }
    };
    Ok((report, cfg.format))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((report, format)) => {
            print!("{}", report.render(format));
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("udom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
