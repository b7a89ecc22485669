fn main() {
    let t = std::time::Instant::now();
    let report = tiercert::corpus::run_corpus(0);
    print!("{}", report.table);
    println!("all passed: {} in {:?}", report.all_passed, t.elapsed());
}
