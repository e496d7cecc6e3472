use torsionlab::series::*;
use std::f64::consts::PI;
fn main() {
    let s = hyper_sum(Kernel::Tanh, Parity::Odd, PI / 2.0).unwrap();
    println!("tanh odd pi/2: {:.17e} terms {} tail {:e}", s.value, s.terms_used, s.tail_bound);
    let s = hyper_sum(Kernel::Coth, Parity::Odd, PI / 2.0).unwrap();
    println!("coth odd pi/2: {:.17e} terms {} tail {:e}", s.value, s.terms_used, s.tail_bound);
    let s = hyper_sum(Kernel::Tanh, Parity::All, PI).unwrap();
    println!("tanh all pi  : {:.17e}", s.value);
    let s = hyper_sum(Kernel::Coth, Parity::All, PI).unwrap();
    println!("coth all pi  : {:.17e}", s.value);
    let s = hyper_sum(Kernel::Coth, Parity::Odd, 50.0).unwrap();
    println!("coth odd 50  : {:.17e}", s.value);
    println!("odd zeta5    : {:.17e}", (1.0 - 1.0/32.0) * 1.0369277551433699);
    let z = zeta_constants();
    println!("zeta5        : {:.17e}", z.zeta5);
    let l = lattice_sum_components();
    println!("s_a {:.17e}\ns_o {:.17e}\ns {:.17e}", l.s_a, l.s_o, l.s);
    let b = lattice_brute_force(2000, |_, _| true);
    println!("brute s_a {:.17e} tail {:e}", b.value, b.tail_bound);
}
