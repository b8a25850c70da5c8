use std::io;

use log::LevelFilter;

fn init_logging() {
    let level = match std::env::var("EXEC_HYPER_LOG").as_deref() {
        Ok("quiet") => LevelFilter::Off,
        Ok("debug") => LevelFilter::Debug,
        Ok("info") => LevelFilter::Info,
        _ => LevelFilter::Warn,
    };
    env_logger::Builder::new().filter_level(level).target(env_logger::Target::Stderr).init();
}

fn main() {
    init_logging();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = exec_hyper_cli::main_with_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
