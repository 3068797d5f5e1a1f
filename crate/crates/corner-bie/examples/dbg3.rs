use corner_bie::spectrum::*;
use corner_bie::{C64, ElasticParams};
use std::f64::consts::PI;
fn main() {
    let p = ElasticParams::benchmark();
    let f = |zz: C64| branch_residual(BranchId::H2, zz, PI / 2.0, &p);
    for b in [
        BoxRegion::new(1e-3, 4.0, -4.0, 4.0),
        BoxRegion::new(1e-3, 2.0005, -4.0, 0.0744),
        BoxRegion::new(1e-3, 2.0005, -4.0, -0.01),
        BoxRegion::new(1e-3, 2.0005, -0.01, 0.0744),
    ] {
        let w = winding_number_dbg(&f, &b, 1e-9);
        println!("box re ({}, {}) im ({}, {}): w = {:?}", b.re0, b.re1, b.im0, b.im1, w);
    }
}
