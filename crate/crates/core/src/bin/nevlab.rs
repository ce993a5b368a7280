use clap::Parser;

fn main() {
    let flags = nevlab::cli::Flags::parse();
    std::process::exit(nevlab::cli::run(&flags));
}
