//! Check reductions against direct evaluation with explicit harmonics and
//! Clebsch-Gordan sums, including a tensor-valued and an odd result.

use cartensor::coeff::rat;
use cartensor::oracle::{verify, verify_result, DEFAULT_SEED};
use cartensor::parser::parse;
use cartensor::reduce::reduce;

fn main() {
    for src in [
        "[Y[1](a) x [Y[1](b) x Y[2](c)][1]][0]",
        "[[Y[1](a) x Y[1](b)][1] x Y[1](c)][0]",
        "[Y[2](a) x Y[2](b)][1]",
        "[Y[3](a) x [Y[2](b) x Y[1](c)][2]][3]",
    ] {
        let rep = verify(&parse(src).unwrap(), 200, 1e-10, DEFAULT_SEED).unwrap();
        println!("{:<42} max err {:.1e}  pass {}", src, rep.max_abs_err, rep.pass);
    }

    // A wrong coefficient is caught.
    let mut r = reduce(&parse("[Y[1](a) x Y[1](b)][0]").unwrap()).unwrap();
    r.prefactor = r.prefactor.scale(&rat(11, 10));
    let rep = verify_result(&r, 200, 1e-10, DEFAULT_SEED);
    println!("scaled by 11/10: max err {:.1e}  pass {}", rep.max_abs_err, rep.pass);
}
