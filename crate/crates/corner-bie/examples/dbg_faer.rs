use faer::linalg::solvers::{Solve, SolveCore};
fn main() {
    let a = faer::Mat::from_fn(3, 3, |i, j| if i == j { 3.0 } else { 0.5 * (i as f64 - j as f64) });
    let lu = a.partial_piv_lu();
    let b = faer::Mat::from_fn(3, 1, |_, _| 1.0);
    let x = lu.solve(&b);
    println!("x = {:?}", (x[(0,0)], x[(1,0)], x[(2,0)]));
    // transpose solve
    let mut y = b.clone();
    lu.solve_transpose_in_place_with_conj(faer::Conj::No, y.as_mut());
    println!("y = {:?}", (y[(0,0)], y[(1,0)], y[(2,0)]));
    // factors
    let l = lu.L();
    let u = lu.U();
    println!("u diag = {:?}", (u[(0,0)], u[(1,1)], u[(2,2)]));
    println!("l00 = {}", l[(0,0)]);
}
