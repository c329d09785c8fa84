fn main() {
    std::process::exit(lemma2jolie::cli::run(std::env::args_os()));
}
