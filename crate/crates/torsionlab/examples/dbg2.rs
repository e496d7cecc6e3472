use torsionlab::torsion::torsion_rect_closed;
use torsionlab::series::*;
use std::f64::consts::PI;
fn main() {
    for aspect in [0.05_f64, 0.07, 0.1, 0.5, 19.9] {
        let a = torsion_rect_closed(aspect, 1.0).unwrap().value;
        let b = torsion_rect_closed(1.0, aspect).unwrap().value;
        println!("aspect {aspect}: {a:.17e} vs {b:.17e} rel {:.3e}", (a - b).abs() / a.abs());
    }
    // the two series involved at aspect 0.05
    let g1 = PI * 0.05 / 1.0; // gamma for (L=0.05,H=1) -> gamma = pi L / H = 0.157
    let s1 = hyper_sum(Kernel::Tanh, Parity::Odd, g1 / 2.0).unwrap();
    let g2 = PI / 0.05;
    let s2 = hyper_sum(Kernel::Tanh, Parity::Odd, g2 / 2.0).unwrap();
    println!("S(gamma/2={}) = {:.17e}", g1/2.0, s1.value);
    println!("S(gamma/2={}) = {:.17e}", g2/2.0, s2.value);
    let z_r = PI.powi(6) / 768.0;
    let beta1 = PI * 1.0 / 0.05;
    println!("inner1 (L=0.05): Zr - beta/4*S = {:.17e}", z_r - beta1/4.0*s1.value);
    let beta2 = PI * 0.05;
    println!("inner2 (L=1,H=0.05): {:.17e}", z_r - beta2/4.0*s2.value);
}
