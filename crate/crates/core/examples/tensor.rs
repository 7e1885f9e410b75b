//! Symmetric traceless tensors and their even and odd couplings.

use cartensor::tensor::{couple_even, couple_odd, harmonic_tensor, vector_power, VectorSymbol};

fn main() {
    let (a, b) = (VectorSymbol::new("a"), VectorSymbol::new("b"));

    let a2 = harmonic_tensor(&a, 2);
    println!("a^{{2}}       = {a2}");
    println!("a^{{3}}       = {}", harmonic_tensor(&a, 3));

    // Contracting with a plain vector power gives a Legendre polynomial.
    for l in 0..=4 {
        let p = harmonic_tensor(&a, l).full_contract(&vector_power(&b, l)).unwrap();
        println!("a^{{{l}}} . bb.. = {p}");
    }

    let b2 = harmonic_tensor(&b, 2);
    let q = couple_even(&a2, &b2, 2).unwrap();
    println!("Q(a,b) rank 2 = {q}");
    println!("  symmetric {}  traceless {}", q.is_symmetric(), q.is_traceless());
    println!("R(a,b) rank 1 = {}", couple_odd(&a2, &b2, 1).unwrap());
}
