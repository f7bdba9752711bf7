//! The two-particle spin-dot operator sx(1)sx(2) + sy(1)sy(2) + sz(1)sz(2):
//! its matrix, its spectrum {-3, +1, +1, +1}, and the singlet as the lone
//! ground state.
//!
//! ```text
//! cargo run --example spin_dot_spectrum
//! ```

use bellsim::linalg::hermitian_eigen;
use bellsim::spin::{singlet_state, spin_dot_operator};

fn main() {
    let op = spin_dot_operator();

    println!("matrix (real parts; imaginary parts are all zero here):");
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| format!("{:+.0}", op.get(i, j).re)).collect();
        println!("  [ {} ]", row.join("  "));
    }

    let system = hermitian_eigen(&op).expect("operator is Hermitian");
    println!();
    println!("eigenvalues:");
    for value in &system.eigenvalues {
        println!("  {value:+.12}");
    }
    println!("trace: {:+.12}", op.trace().re);

    let singlet = singlet_state();
    let ground_overlap = singlet.inner(&system.eigenvectors[0]).norm();
    println!("singlet overlap with the lowest eigenvector: {ground_overlap:.12}");

    // One isolated level at -3 carried by the singlet, a triple level at +1;
    // the trace pins the sum at zero.
    assert!((system.eigenvalues[0] + 3.0).abs() < 1e-10);
    for value in &system.eigenvalues[1..] {
        assert!((value - 1.0).abs() < 1e-10);
    }
    assert!(op.trace().re.abs() < 1e-12);
    assert!(ground_overlap >= 1.0 - 1e-10);
    println!("ok: spectrum and ground state verified");
}
