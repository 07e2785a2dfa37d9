use i2gatp::cli::{run, Io, EPS_ENV};

fn main() {
    let mut stdin = std::io::stdin().lock();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let mut io = Io {
        stdin: &mut stdin,
        stdout: &mut stdout,
        stderr: &mut stderr,
        eps_env: std::env::var(EPS_ENV).ok(),
    };
    let code = run(std::env::args_os(), &mut io);
    drop(io);
    let _ = std::io::Write::flush(&mut stdout);
    std::process::exit(code);
}
