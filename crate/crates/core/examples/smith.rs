//! Smith normal form of an integer matrix and the group it presents.

use coarse::cohomology::{smith_normal_form, IntegerMatrix};

fn main() {
    let m = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let s = smith_normal_form(&m);
    println!("M =\n{m}");
    println!("D =\n{}", s.d);
    println!("U M V == D: {}", s.u.mul(&m).mul(&s.v) == s.d);
    println!("det U = {}, det V = {}", s.u.determinant(), s.v.determinant());
    let divisors: Vec<String> = s.divisors.iter().map(ToString::to_string).collect();
    println!("elementary divisors {}, cokernel Z^{} + torsion {:?}", divisors.join(", "), m.rows() - s.rank(),
        s.torsion().map(ToString::to_string).collect::<Vec<_>>());
}
