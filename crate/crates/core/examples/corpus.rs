//! Check the shipped corpus and show one stored entry.

use cartensor::corpus::{check, default_path, load};

fn main() {
    let entries = load(&default_path()).expect("shipped corpus");
    let rep = check(&entries);
    println!("{rep}");
    for o in &rep.outcomes {
        println!("{:<4} max err {:.1e}", o.id, o.max_abs_err);
    }
    let a3 = entries.iter().find(|e| e.id == "A3").unwrap();
    println!("{} = {}", a3.expr, a3.expected["text"]);
}
