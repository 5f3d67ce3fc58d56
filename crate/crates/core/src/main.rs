fn main() {
    std::process::exit(lnzfact::cli::run(std::env::args_os()));
}
