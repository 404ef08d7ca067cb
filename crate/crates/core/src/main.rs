fn main() {
    std::process::exit(cue_moment::cli::run(std::env::args_os()));
}
