//! Exact 3j symbols and Clebsch-Gordan coefficients, with their floating
//! values.

use cartensor::wigner::{clebsch_gordan, three_j, ThreeJArgs};

fn main() {
    let cases = [
        ([1, 1, 2], [0, 0, 0]),
        ([2, 2, 2], [0, 0, 0]),
        ([2, 2, 1], [1, -1, 0]),
        ([3, 2, 1], [1, -1, 0]),
    ];
    for (l, m) in cases {
        let tj = three_j(ThreeJArgs::new(l, m));
        println!(
            "({} {} {}; {} {} {}) = {}  ~ {:.12}",
            l[0],
            l[1],
            l[2],
            m[0],
            m[1],
            m[2],
            tj,
            tj.to_f64().unwrap()
        );
    }

    // <1 m1 1 m2 | 1 0> for the rank-one coupling of two vectors
    for m1 in -1..=1 {
        println!("<1 {m1} 1 {} | 1 0> = {}", -m1, clebsch_gordan(1, m1, 1, -m1, 1, 0));
    }
}
