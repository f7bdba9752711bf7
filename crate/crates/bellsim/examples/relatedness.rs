//! Finite symmetry deciders at work: which of the four joint-outcome
//! variables of the bundled planar pair model are the same experiment in
//! disguise, a quarter-turn witness on the plain sign model, and a label
//! group induced by a permissible variable.
//!
//! ```text
//! cargo run --example relatedness
//! ```

use bellsim::groups::{
    are_related, chsh_pair_model, classify_pairs, induced_group, planar_sign_variable,
    FiniteAction, LabeledVariable, Perm,
};

fn main() {
    let model = chsh_pair_model();
    println!(
        "bundled pair model: {} grid directions, group order {}",
        model.action.n_points(),
        model.action.order()
    );
    for variable in &model.variables {
        let fibers: Vec<String> = variable
            .fiber_counts()
            .into_iter()
            .map(|(label, count)| format!("{}:{count}", model.label_name(label)))
            .collect();
        println!("  {} fibers {{{}}}", variable.name(), fibers.join(", "));
    }

    let matrix = classify_pairs(&model.variables, Some(&model.action));
    println!("relation matrix under the dihedral group (x = related):");
    let names: Vec<&str> = model.variables.iter().map(|v| v.name()).collect();
    println!("      {}", names.join(" "));
    for (i, row) in matrix.iter().enumerate() {
        let marks: Vec<&str> = row.iter().map(|&r| if r { "x" } else { "." }).collect();
        println!("  {:<3} {}", names[i], marks.join(" "));
    }
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let (_, witness) = are_related(&model.variables[i], &model.variables[j], Some(&model.action));
        println!(
            "  {} ~ {} via {}",
            names[i],
            names[j],
            witness.expect("related pair")
        );
    }

    // Plain sign model on 16 equally spaced directions: reading the sign
    // along the 90-degree axis is reading it along 0 degrees, rotated a
    // quarter turn.
    let m = 16;
    let rotations = FiniteAction::cyclic(m);
    let along_0 = planar_sign_variable("along0", m, false, 0);
    let along_90 = planar_sign_variable("along90", m, false, m as i64 / 2);
    let (turned, witness) = are_related(&along_90, &along_0, Some(&rotations));
    let witness = witness.expect("related");
    println!();
    println!("sign along 90 deg = sign along 0 deg turned by: {witness}");

    // Opposite corners of a square share labels; the quarter-turn rotation
    // then acts on the two labels as a swap.
    let square = FiniteAction::cyclic(4);
    let pairing = LabeledVariable::new("diagonals", vec![0, 1, 0, 1]);
    let induced = induced_group(&square, &pairing).expect("pairing is permissible");
    println!(
        "square diagonal pairing: induced label group order {} (a swap)",
        induced.order()
    );

    let expected = vec![
        vec![true, true, true, false],
        vec![true, true, true, false],
        vec![true, true, true, false],
        vec![false, false, false, true],
    ];
    assert_eq!(matrix, expected);
    assert!(turned);
    let quarter = Perm::new((0..m).map(|i| (i + m / 4) % m).collect()).expect("rotation");
    assert_eq!(witness, quarter);
    assert_eq!(induced.order(), 2);
    println!("ok: relatedness verdicts frozen");
}
