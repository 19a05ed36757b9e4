// Reduced words, their matrices and orbits of a basepoint.

use fuchsian::freegroup::{enumerate_reduced_words, gamma2, orbit, word_count};
use fuchsian::hyperbolic::{distance, Point};

pub fn run_example() {
    let spec = gamma2();
    for len in 0..=6 {
        println!("words of length <= {len}: {}", word_count(2, len).unwrap());
    }
    let words = enumerate_reduced_words(&spec, 3).unwrap();
    assert_eq!(words.len() as u64, word_count(2, 3).unwrap());
    for w in words.iter().take(6) {
        println!("{w}: {:?}", spec.word_matrix(w).unwrap().entries());
    }
    let pts = orbit(&spec, Point::I, 4).unwrap();
    let nearest = pts
        .iter()
        .skip(1)
        .map(|(_, p)| distance(Point::I, *p))
        .fold(f64::INFINITY, f64::min);
    println!("{} orbit points, nearest non-trivial at distance {nearest:.12}", pts.len());
    assert!((nearest - (3.0 + 2.0 * 2f64.sqrt()).ln()).abs() < 1e-12);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
