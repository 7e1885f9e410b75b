//! Identities relating the symbolic and numeric sides: same-vector
//! couplings, the raw coupling scales, and the normalizations.

use cartensor::reduce::{cartesian_rescale, q_factor, r_factor, s_factor};
use cartensor::tensor::{
    couple_raw_c, couple_raw_d, even_normalization, odd_normalization, same_vector_proportionality,
};
use cartensor::wigner::triangle;

fn main() {
    println!("l   {:<30} S(l)", "n_l");
    for l in 0..=4 {
        println!("{l}   {:<30} {}", cartesian_rescale(l).to_string(), s_factor(l));
    }

    println!("\n{:<10} {:<34} {:<13} raw", "triple", "q or r", "N");
    for l1 in 1..=3u32 {
        for l2 in l1..=3 {
            for l3 in l2 - l1..=l1 + l2 {
                if !triangle(l1 as i64, l2 as i64, l3 as i64) || l3 == 0 {
                    continue;
                }
                let row = if (l1 + l2 + l3) % 2 == 0 {
                    (
                        q_factor(l1, l2, l3),
                        even_normalization(l1, l2, l3).unwrap(),
                        couple_raw_c(l1, l2, l3).unwrap(),
                    )
                } else {
                    (
                        r_factor(l1, l2, l3),
                        odd_normalization(l1, l2, l3).unwrap(),
                        couple_raw_d(l1, l2, l3).unwrap(),
                    )
                };
                println!(
                    "{:<10} {:<34} {:<13} {}",
                    format!("({l1},{l2},{l3})"),
                    row.0.to_string(),
                    row.1.to_string(),
                    row.2
                );
            }
        }
    }

    // Q(a,a) is proportional to a^{l3}
    for (l1, l2, l3) in [(1, 1, 2), (2, 2, 2), (2, 2, 4), (1, 3, 2)] {
        println!(
            "Q{l1}{l2}{l3}(a,a) = {} a^{{{l3}}}",
            same_vector_proportionality(l1, l2, l3).unwrap()
        );
    }
}
