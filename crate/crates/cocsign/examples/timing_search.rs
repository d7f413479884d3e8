//! Searching for timing integers: the long wait 2 n2 tau2 has to imitate
//! 2 n1 tau1 + tau1/2, so sqrt(2) n2 must land near 2 n1 + 1/2. The
//! exhaustive scan ranks all pairs up to a bound; the continued fraction of
//! sqrt(8) singles out the systematically best ones.

fn main() {
    print!("{}", cocsign::cli::run_search(70, 10).unwrap());
    println!();
    print!("{}", cocsign::cli::run_search(250, 5).unwrap());
}
