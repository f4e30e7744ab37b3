fn main() {
    std::process::exit(pareto_forge_cli::main_with_args(std::env::args_os()));
}
