fn main() {
    std::process::exit(seqspace::cli::main_entry());
}
