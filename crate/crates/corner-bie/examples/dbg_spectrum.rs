use corner_bie::spectrum::*;
use corner_bie::{C64, ElasticParams};
use std::f64::consts::PI;

fn main() {
    let p = ElasticParams::benchmark();
    for branch in BranchId::ALL {
        let r = find_roots_in_box(branch, PI / 2.0, &p, BoxRegion::new(1e-3, 4.0, -4.0, 4.0), 64);
        println!("{:?}: {:?}", branch, r.map(|v| v.iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect::<Vec<_>>()));
    }
    let kv = corner_bie::mellin::kernel_vector(C64::new(1.0 + 1e-7, 0.0), PI, &p).unwrap();
    println!("sigma = {:?}, secondary = {}", kv.sigma, kv.secondary.is_some());
}
