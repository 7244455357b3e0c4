fn main() {
    std::process::exit(drillgauge::cli::run());
}
