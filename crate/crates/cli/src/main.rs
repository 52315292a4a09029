use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{value_parser, Arg, ArgMatches};
use qwalk_cli::{parse_config, run_experiment, write_bundle, CliError, Command, ConfigFile, RunInfo};

fn cli() -> clap::Command {
    let mut app = clap::Command::new("qwalk")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Bloch-oscillating quantum walk experiments")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(Arg::new("config").long("config").global(true).value_name("PATH").help("JSON config file"))
        .arg(Arg::new("out").long("out").global(true).value_name("DIR").default_value("out").help("output directory"))
        .arg(
            Arg::new("threads")
                .long("threads")
                .global(true)
                .value_name("N")
                .value_parser(value_parser!(usize))
                .help("worker threads (default: all cores)"),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .global(true)
                .value_name("SEED")
                .value_parser(value_parser!(u64))
                .help("seed for randomized checks"),
        );
    for command in Command::ALL {
        let mut sub = clap::Command::new(command.name()).about(command.about());
        for key in command.keys() {
            sub = sub.arg(Arg::new(key.name).long(key.flag()).value_name("VALUE").help(key.help));
        }
        app = app.subcommand(sub);
    }
    app
}

fn execute(matches: &ArgMatches) -> Result<(), CliError> {
    let started = Instant::now();
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let command = Command::from_name(name)?;
    let flags: Vec<(String, String)> = command
        .keys()
        .iter()
        .filter_map(|k| sub.get_one::<String>(k.name).map(|v| (k.name.to_string(), v.clone())))
        .collect();
    let file = sub.get_one::<String>("config").map(|p| ConfigFile::load(p.as_ref())).transpose()?;
    let cfg = parse_config(name, &flags, file, sub.get_one::<u64>("seed").copied())?;

    let threads = sub.get_one::<usize>("threads").copied().unwrap_or(0);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Validation(format!("cannot start {threads} threads: {e}")))?;
    }
    let bundle = run_experiment(&cfg)?;
    let out = PathBuf::from(sub.get_one::<String>("out").expect("has a default"));
    let info = RunInfo {
        overrides: &cfg.overrides,
        threads: rayon::current_num_threads(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };
    for path in write_bundle(&bundle, &out, &info)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    match execute(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
