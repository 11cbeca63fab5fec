use std::io::Write;

fn main() {
    let outcome = regime_cli::run(std::env::args_os());
    if let Some(text) = outcome.stdout {
        let mut stdout = std::io::stdout().lock();
        if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
            std::process::exit(2);
        }
    }
    std::process::exit(outcome.code);
}
