use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let result = moran_cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    if let Err(e) = result {
        let mut err = stderr.lock();
        match &e {
            // clap already formats its own messages
            moran_cli::CliError::Usage(msg) if msg.starts_with("error:") => {
                let _ = write!(err, "{msg}");
            }
            _ => {
                let _ = writeln!(err, "error: {e}");
            }
        }
        std::process::exit(e.exit_code());
    }
}
