fn main() {
    let env_seed = gcplab_cli::env_seed();
    let code = gcplab_cli::run(
        std::env::args_os(),
        env_seed.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
