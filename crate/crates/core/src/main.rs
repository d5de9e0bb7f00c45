use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(message) = forest_spectra::cli::configure_threads() {
        eprintln!("warning: {message}");
    }
    let (code, text) = forest_spectra::cli::execute(std::env::args_os());
    print!("{text}");
    ExitCode::from(code as u8)
}
