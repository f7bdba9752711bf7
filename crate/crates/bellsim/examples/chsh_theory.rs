//! Closed-form CHSH values: the correlation law, the quantum maximum at the
//! standard angles, and the sanity checks around it.
//!
//! ```text
//! cargo run --example chsh_theory
//! ```

use bellsim::born::{chsh_theory, correlation_theory, AngleSettings};

fn main() {
    println!("pair correlation E(x, y) = -cos(x - y)");
    println!("  gap [deg]    E");
    for gap_deg in [0.0f64, 45.0, 90.0, 135.0, 180.0, 225.0] {
        let e = correlation_theory(gap_deg.to_radians());
        println!("  {gap_deg:>9}  {e:+.6}");
    }

    let standard = AngleSettings::maximal_violation();
    let [a, ap, b, bp] = standard.as_degrees();
    let s_max = chsh_theory(&standard);
    println!();
    println!("standard settings [deg]: a={a} a'={ap} b={b} b'={bp}");
    println!("S = {s_max:.15}");
    println!("2*sqrt(2) = {:.15}", 2.0 * 2.0_f64.sqrt());

    let flat = AngleSettings::from_degrees(30.0, 30.0, 30.0, 30.08);
    println!();
    println!(
        "near-equal settings give S close to -2: S = {:+.6}",
        chsh_theory(&flat)
    );

    // The printed numbers are the contract: the standard settings attain the
    // quantum bound exactly, and equal settings pin S at -2.
    assert!((s_max - 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
    let equal = AngleSettings::from_degrees(30.0, 30.0, 30.0, 30.0);
    assert!((chsh_theory(&equal) + 2.0).abs() < 1e-12);
    assert!((correlation_theory(0.0) + 1.0).abs() < 1e-15);
    println!();
    println!("ok: closed-form values match");
}
