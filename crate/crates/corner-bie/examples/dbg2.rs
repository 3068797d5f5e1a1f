use corner_bie::mellin::*;
use corner_bie::spectrum::*;
use corner_bie::{C64, CMat4, ElasticParams};
use std::f64::consts::PI;

fn main() {
    let p = ElasticParams::benchmark();
    let z = C64::new(1.0 + 1e-7, 0.0);
    let a = assemble_a(z, PI, &p).unwrap().entries;
    println!("A = ");
    for i in 0..4 {
        for j in 0..4 {
            print!("{:12.4e}{:+10.2e}i ", a[(i, j)].re, a[(i, j)].im);
        }
        println!();
    }
    // check A * (1,0,-1,0)
    let v = corner_bie::CVec4::new(C64::new(1.0,0.0), C64::new(0.0,0.0), C64::new(-1.0,0.0), C64::new(0.0,0.0));
    let av = a * v;
    println!("A v = {:?}", av.iter().map(|x| (x.re, x.im)).collect::<Vec<_>>());
    // nalgebra SVD comparison
    let svd = nalgebra::SVD::new(a, false, false);
    println!("nalgebra sv = {:?}", svd.singular_values.as_slice());
    // winding for H2 around 0.9085
    let f = |zz: C64| branch_residual(BranchId::H2, zz, PI/2.0, &p);
    println!("H2(0.9085) = {:?}", f(C64::new(0.9085, 0.0)));
    for bx in [BoxRegion::new(0.8, 0.96, -0.05, 0.05), BoxRegion::new(0.5, 1.2, -0.3, 0.3)] {
        let r = find_roots_in_box(BranchId::H2, PI/2.0, &p, bx, 8);
        println!("box {:?} -> {:?}", (bx.re0, bx.re1), r);
    }
}
