fn main() {
    std::process::exit(nonlocal_rd::harness::cli_main(std::env::args_os()));
}
