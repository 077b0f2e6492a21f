//! Runs the acceptance criteria given on the command line (all by default).

fn main() {
    let ids: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if ids.is_empty() { (1..=11).collect() } else { ids };
    for id in ids {
        let o = torsor::suite::run(id);
        println!("{}", o.line());
        for f in o.failures.iter().skip(1).take(5) {
            println!("    {f}");
        }
    }
}
