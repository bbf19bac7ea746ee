use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quasimap_cli::{
    cmd_chow, cmd_fan, cmd_intersect, cmd_jinv, cmd_mirror, cmd_verify, CommandResult,
};
use quasimap_core::intersection::E6Form;

#[derive(Parser)]
#[command(
    name = "quasimap",
    version,
    about = "Exact intersection numbers on quasi-map moduli spaces to P(1,1,1,3)"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for residue branches (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum E6Variant {
    Factorized,
    Printed,
}

#[derive(Subcommand)]
enum Command {
    /// Rays, primitive collections and ray relations of the fan.
    Fan {
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// Stanley-Reisner generators and divisor classes.
    Chow {
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// The intersection number w(O_{z^a} O_{z^b})_{0,d}.
    Intersect {
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, value_enum, default_value_t = E6Variant::Factorized, hide = true)]
        e6_variant: E6Variant,
    },
    /// Mirror-map coefficients w_1..w_N.
    Mirror {
        #[arg(long, allow_hyphen_values = true)]
        order: i64,
    },
    /// j-invariant coefficients j_1..j_N by both reconstruction routes.
    Jinv {
        #[arg(long, allow_hyphen_values = true)]
        order: i64,
    },
    /// Runs the verification ladder up to the given degree.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        degree_max: i64,
        #[arg(long, value_enum, default_value_t = E6Variant::Factorized, hide = true)]
        e6_variant: E6Variant,
    },
}

fn e6(v: E6Variant) -> E6Form {
    match v {
        E6Variant::Factorized => E6Form::Factorized,
        E6Variant::Printed => E6Form::Printed,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global pool is configured once");
    }
    let result: CommandResult = match cli.command {
        Command::Fan { degree } => cmd_fan(degree),
        Command::Chow { degree } => cmd_chow(degree),
        Command::Intersect {
            degree,
            a,
            b,
            e6_variant,
        } => match cmd_intersect(degree, a, b, e6(e6_variant)) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(3);
            }
        },
        Command::Mirror { order } => cmd_mirror(order),
        Command::Jinv { order } => cmd_jinv(order),
        Command::Verify {
            degree_max,
            e6_variant,
        } => cmd_verify(degree_max, e6(e6_variant)),
    };
    match cli.format {
        Format::Text => print!("{}", result.to_text()),
        Format::Json => println!("{}", result.to_json()),
    }
    ExitCode::from(result.status.exit_code())
}
