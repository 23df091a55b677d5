fn main() {
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    let code = posassoc::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
