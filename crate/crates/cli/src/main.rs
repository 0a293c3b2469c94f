fn main() {
    std::process::exit(tweetcone_cli::run(std::env::args_os()));
}
