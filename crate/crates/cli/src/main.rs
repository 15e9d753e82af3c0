use std::io::Write;

fn main() {
    cylfourier::init_thread_pool_from_env();
    let run = cylfourier_cli::run_from(std::env::args_os());
    let _ = std::io::stdout().write_all(run.stdout.as_bytes());
    let _ = std::io::stderr().write_all(run.stderr.as_bytes());
    std::process::exit(run.exit_code);
}
