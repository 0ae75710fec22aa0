use std::process::ExitCode;

fn main() -> ExitCode {
    match triconfig_cli::resolve(std::env::args_os()) {
        Ok((config, opts)) => ExitCode::from(triconfig_cli::execute(&config, &opts)),
        Err(triconfig_cli::CliError::Config(msg)) if msg.contains("Usage:") || msg.starts_with("triconfig") => {
            let help = msg.contains("Print help") && !msg.contains("error:");
            if help {
                print!("{msg}");
                ExitCode::SUCCESS
            } else {
                eprint!("{msg}");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
