fn main() {
    std::process::exit(boussinesq_lab::cli::run_cli(std::env::args_os()));
}
