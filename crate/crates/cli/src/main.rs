use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = starspin_cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = io::stdout().flush();
    std::process::exit(code);
}
