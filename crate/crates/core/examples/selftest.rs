//! The self-test suites at reduced scale.

use infmat::selftest::{run, Scale};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    print!("{}", run(seed, Scale::QUICK, None).render());
}
