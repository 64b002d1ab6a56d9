use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::init();
    ExitCode::from(hexmob::cli::run_main(std::env::args_os().skip(1)) as u8)
}
