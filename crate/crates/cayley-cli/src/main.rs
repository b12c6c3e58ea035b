use std::io::Write;

fn main() {
    let o = cayley_cli::run(std::env::args_os());
    print!("{}", o.output);
    let _ = std::io::stdout().flush();
    if let Some(m) = o.message {
        eprintln!("{m}");
    }
    std::process::exit(o.exit_code);
}
