//! Surfaces of fundamental polygons, and their connected sums.
//!
//! Run with `cargo run --example classify_surfaces -- aa abab^-1 aba^-1b^-1`.

use sprouts::classify_polygon_word;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let words = if args.is_empty() { vec!["aa".into(), "aabb".into(), "aba^-1b^-1".into(), "abab^-1".into()] } else { args };
    let mut sum = None;
    for w in &words {
        match classify_polygon_word(w) {
            Ok(s) => {
                println!("{w:>16}  {s}  chi={}", s.euler_characteristic());
                sum = Some(sum.map_or(s, |acc: sprouts::Surface| acc.connected_sum(s)));
            }
            Err(e) => println!("{w:>16}  error: {e}"),
        }
    }
    if let Some(s) = sum {
        println!("connected sum: {s}");
    }
}
