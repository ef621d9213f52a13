fn main() {
    env_logger::init();
    let code = gabor_hrt_lab::cli::run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
