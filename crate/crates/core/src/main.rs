fn main() {
    let stdout = std::io::stdout();
    let code = singlefold::cli::dispatch(std::env::args_os(), &mut stdout.lock());
    std::process::exit(code);
}
