fn main() {
    std::process::exit(pdm_gk_cli::run());
}
