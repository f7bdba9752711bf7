//! Finite group actions, labeled variables, and the deciders connecting them.
//!
//! A [`FiniteAction`] is a set of named points together with the permutation
//! group generated by a list of permutations; the closure is computed eagerly
//! and capped (default [`DEFAULT_GROUP_CAP`]). A [`LabeledVariable`] assigns a
//! label to every point. On top of those sit three deciders:
//!
//! * [`is_permissible`] — may the action be read as acting on the labels?
//!   True exactly when no group element splits two points that share a label.
//! * [`induced_group`] — for a permissible variable, each group element
//!   induces a permutation of the labels; returns the full element-by-element
//!   table plus the deduplicated label group, with the composition law
//!   verified exhaustively.
//! * [`are_related`] — is `eta` a transformed copy of `theta`, i.e. does a
//!   bijection `k` of the points exist with `eta(p) = theta(k(p))`?
//!   Unrestricted mode decides via per-label fiber sizes and constructs a
//!   witness; restricted mode searches only the elements of a given action.
//!
//! The planar constructors at the bottom build the bundled CHSH pair model:
//! sixteen grid directions in the plane, their dihedral symmetry group, and
//! the four joint-outcome variables at the standard measurement angles, all
//! in exact integer arithmetic. [`parse_model`] and [`render_model`] move
//! such structures through a flat text format consumed by the `relate`
//! subcommand.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

/// Hard ceiling on the eagerly computed group closure.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// Label alphabet for variables. Equality of ids is equality of labels,
/// including across different variables.
pub type Label = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    /// Closure enumeration hit the cap before the group was exhausted.
    #[error("group closure exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    /// The variable is not permissible: points `phi1` and `phi2` share a
    /// label but are split apart by group element `element` (an index into
    /// [`FiniteAction::elements`]).
    #[error("variable not permissible: points {phi1} and {phi2} share a label but element #{element} separates them")]
    NotPermissible {
        phi1: usize,
        phi2: usize,
        element: usize,
    },
    /// A model file line that does not parse; line numbers are 1-based, with
    /// 0 standing for "the file as a whole".
    #[error("model file line {line}: {detail}")]
    ParseError { line: usize, detail: String },
}

// ---------------------------------------------------------------------------
// Permutations
// ---------------------------------------------------------------------------

/// A permutation of `{0, .., n-1}` in one-line notation: `images[i]` is the
/// image of point `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    /// The identity on `n` points.
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    /// Validates that `images` is a bijection of `{0, .., len-1}`.
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n || seen[img] {
                return None;
            }
            seen[img] = true;
        }
        Some(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// Function composition `self ∘ inner`: the result maps `i` to
    /// `self(inner(i))`.
    pub fn compose(&self, inner: &Perm) -> Perm {
        assert_eq!(self.degree(), inner.degree(), "degree mismatch in compose");
        Perm {
            images: inner.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Perm { images }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{img}")?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Finite actions
// ---------------------------------------------------------------------------

/// A finite point set with the permutation group generated by `generators`.
///
/// The closure is enumerated breadth-first at construction: `elements()[0]`
/// is the identity, generators appear before longer words, and the order is
/// deterministic. Construction fails with [`GroupError::GroupTooLarge`] if
/// the closure would exceed the cap.
#[derive(Debug, Clone)]
pub struct FiniteAction {
    point_names: Vec<String>,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl FiniteAction {
    /// Action on `n_points` anonymous points (named `"0"`, `"1"`, ...).
    pub fn new(n_points: usize, generators: Vec<Perm>) -> Result<Self, GroupError> {
        let names = (0..n_points).map(|i| i.to_string()).collect();
        Self::with_names_and_cap(names, generators, DEFAULT_GROUP_CAP)
    }

    /// Action on named points.
    pub fn with_names(point_names: Vec<String>, generators: Vec<Perm>) -> Result<Self, GroupError> {
        Self::with_names_and_cap(point_names, generators, DEFAULT_GROUP_CAP)
    }

    /// Like [`FiniteAction::new`] but with an explicit closure cap.
    pub fn with_cap(
        n_points: usize,
        generators: Vec<Perm>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        let names = (0..n_points).map(|i| i.to_string()).collect();
        Self::with_names_and_cap(names, generators, cap)
    }

    fn with_names_and_cap(
        point_names: Vec<String>,
        generators: Vec<Perm>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        let n = point_names.len();
        assert!(n >= 1, "an action needs at least one point");
        for g in &generators {
            assert_eq!(g.degree(), n, "generator degree must match the point count");
        }

        let mut elements = vec![Perm::identity(n)];
        let mut index = HashMap::new();
        index.insert(elements[0].clone(), 0usize);
        let mut cursor = 0;
        while cursor < elements.len() {
            let word = elements[cursor].clone();
            for g in &generators {
                let next = word.compose(g);
                if !index.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(GroupError::GroupTooLarge { cap });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            cursor += 1;
        }

        Ok(FiniteAction {
            point_names,
            generators,
            elements,
            index,
        })
    }

    /// The one-element group on `n` points.
    pub fn trivial(n_points: usize) -> Self {
        Self::new(n_points, Vec::new()).expect("trivial group is tiny")
    }

    /// Rotations of a cycle: generated by `i -> i+1 (mod n)`.
    pub fn cyclic(n_points: usize) -> Self {
        let shift = Perm::new((0..n_points).map(|i| (i + 1) % n_points).collect())
            .expect("shift is a bijection");
        Self::new(n_points, vec![shift]).expect("cyclic group has n elements")
    }

    /// Rotations and reflections of a cycle: the shift together with
    /// `i -> n-1-i`.
    pub fn dihedral(n_points: usize) -> Self {
        let shift = Perm::new((0..n_points).map(|i| (i + 1) % n_points).collect())
            .expect("shift is a bijection");
        let flip = Perm::new((0..n_points).map(|i| n_points - 1 - i).collect())
            .expect("flip is a bijection");
        Self::new(n_points, vec![shift, flip]).expect("dihedral group has 2n elements")
    }

    /// All permutations of the points (transposition plus full cycle).
    pub fn symmetric(n_points: usize) -> Result<Self, GroupError> {
        if n_points < 2 {
            return Ok(Self::trivial(n_points.max(1)));
        }
        let mut swap: Vec<usize> = (0..n_points).collect();
        swap.swap(0, 1);
        let swap = Perm::new(swap).expect("transposition is a bijection");
        let cycle = Perm::new((0..n_points).map(|i| (i + 1) % n_points).collect())
            .expect("cycle is a bijection");
        Self::new(n_points, vec![swap, cycle])
    }

    pub fn n_points(&self) -> usize {
        self.point_names.len()
    }

    pub fn point_names(&self) -> &[String] {
        &self.point_names
    }

    pub fn point_name(&self, point: usize) -> &str {
        &self.point_names[point]
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Every element of the generated group, identity first.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Index of `p` in [`FiniteAction::elements`], if it belongs to the group.
    pub fn element_index(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// True when a single orbit covers every point.
    pub fn is_transitive(&self) -> bool {
        let n = self.n_points();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(p) = stack.pop() {
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    count += 1;
                    stack.push(q);
                }
            }
        }
        count == n
    }
}

// ---------------------------------------------------------------------------
// Labeled variables
// ---------------------------------------------------------------------------

/// A total assignment of a label to every point of an action's point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledVariable {
    name: String,
    values: Vec<Label>,
}

impl LabeledVariable {
    pub fn new(name: &str, values: Vec<Label>) -> Self {
        assert!(!values.is_empty(), "a variable needs at least one point");
        LabeledVariable {
            name: name.to_string(),
            values,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, point: usize) -> Label {
        self.values[point]
    }

    pub fn values(&self) -> &[Label] {
        &self.values
    }

    /// Distinct labels in ascending order.
    pub fn labels(&self) -> Vec<Label> {
        let mut ls: Vec<Label> = self.values.clone();
        ls.sort_unstable();
        ls.dedup();
        ls
    }

    /// Points carrying each label, in ascending point order.
    pub fn fibers(&self) -> BTreeMap<Label, Vec<usize>> {
        let mut fibers: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
        for (point, &label) in self.values.iter().enumerate() {
            fibers.entry(label).or_default().push(point);
        }
        fibers
    }

    /// Number of points per label.
    pub fn fiber_counts(&self) -> BTreeMap<Label, usize> {
        self.fibers()
            .into_iter()
            .map(|(l, pts)| (l, pts.len()))
            .collect()
    }

    /// Every fiber a singleton — the variable separates all points.
    pub fn is_maximal(&self) -> bool {
        self.fibers().values().all(|pts| pts.len() == 1)
    }

    /// The composite `self ∘ k`: point `p` gets the label `self(k(p))`.
    pub fn pullback(&self, k: &Perm) -> LabeledVariable {
        assert_eq!(self.len(), k.degree(), "pullback degree mismatch");
        LabeledVariable {
            name: self.name.clone(),
            values: (0..self.len()).map(|p| self.values[k.apply(p)]).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Permissibility and the induced label group
// ---------------------------------------------------------------------------

/// Counterexample to permissibility: `theta(phi1) == theta(phi2)` but the
/// group element `elements()[element]` maps them to differently labeled
/// points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermissibilityWitness {
    pub phi1: usize,
    pub phi2: usize,
    pub element: usize,
}

/// Decides whether every group element respects the label classes of
/// `theta`: whenever two points share a label, their images under the
/// element share one too. Returns the first counterexample otherwise
/// (scanning elements in closure order and fibers in label order).
pub fn is_permissible(
    act: &FiniteAction,
    theta: &LabeledVariable,
) -> (bool, Option<PermissibilityWitness>) {
    assert_eq!(
        theta.len(),
        act.n_points(),
        "variable and action must share the point set"
    );
    let fibers = theta.fibers();
    for (ei, k) in act.elements().iter().enumerate() {
        for pts in fibers.values() {
            let first = pts[0];
            let moved = theta.value(k.apply(first));
            for &p in &pts[1..] {
                if theta.value(k.apply(p)) != moved {
                    return (
                        false,
                        Some(PermissibilityWitness {
                            phi1: first,
                            phi2: p,
                            element: ei,
                        }),
                    );
                }
            }
        }
    }
    (true, None)
}

/// The label-side shadow of a permissible variable's action: one label
/// permutation per group element, plus the deduplicated group they form.
#[derive(Debug, Clone)]
pub struct InducedGroup {
    labels: Vec<Label>,
    label_maps: Vec<Perm>,
    group: Vec<Perm>,
}

impl InducedGroup {
    /// Distinct labels in ascending order; label maps permute indices into
    /// this list.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// `table()[i]` is the label permutation induced by `elements()[i]` of
    /// the source action.
    pub fn table(&self) -> &[Perm] {
        &self.label_maps
    }

    /// The induced group with duplicates removed, in first-appearance order.
    pub fn group(&self) -> &[Perm] {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.len()
    }
}

/// Builds the induced label group of a permissible variable.
///
/// For group element `k` the induced map sends `theta(p)` to `theta(k(p))`;
/// permissibility makes that well defined, and the construction then checks,
/// exhaustively over all element pairs, that composition carries over
/// (`table[k1 ∘ k2] == table[k1] ∘ table[k2]`) and that the induced action
/// is transitive whenever the source action is.
pub fn induced_group(
    act: &FiniteAction,
    theta: &LabeledVariable,
) -> Result<InducedGroup, GroupError> {
    let (ok, witness) = is_permissible(act, theta);
    if !ok {
        let w = witness.expect("failure always carries a witness");
        return Err(GroupError::NotPermissible {
            phi1: w.phi1,
            phi2: w.phi2,
            element: w.element,
        });
    }

    let labels = theta.labels();
    let label_index: HashMap<Label, usize> =
        labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    // One representative point per label; any choice agrees by permissibility.
    let mut representative = vec![0usize; labels.len()];
    for (point, &label) in theta.values().iter().enumerate().rev() {
        representative[label_index[&label]] = point;
    }

    let label_maps: Vec<Perm> = act
        .elements()
        .iter()
        .map(|k| {
            let images = representative
                .iter()
                .map(|&rep| label_index[&theta.value(k.apply(rep))])
                .collect();
            Perm::new(images).expect("a permissible element permutes the labels")
        })
        .collect();

    for (i, ki) in act.elements().iter().enumerate() {
        for (j, kj) in act.elements().iter().enumerate() {
            let product = ki.compose(kj);
            let pi = act
                .element_index(&product)
                .expect("closure is closed under composition");
            assert_eq!(
                label_maps[pi],
                label_maps[i].compose(&label_maps[j]),
                "induced maps must respect composition"
            );
        }
    }

    let mut group = Vec::new();
    for m in &label_maps {
        if !group.contains(m) {
            group.push(m.clone());
        }
    }

    if act.is_transitive() {
        // Transitivity must carry over to the labels.
        let mut seen = vec![false; labels.len()];
        seen[0] = true;
        let mut count = 1;
        let mut stack = vec![0usize];
        while let Some(l) = stack.pop() {
            for g in &group {
                let m = g.apply(l);
                if !seen[m] {
                    seen[m] = true;
                    count += 1;
                    stack.push(m);
                }
            }
        }
        assert_eq!(
            count,
            labels.len(),
            "a transitive action must induce a transitive label group"
        );
    }

    Ok(InducedGroup {
        labels,
        label_maps,
        group,
    })
}

// ---------------------------------------------------------------------------
// Relatedness
// ---------------------------------------------------------------------------

/// Decides whether `eta` is a transformed copy of `theta`: a bijection `k`
/// of the points with `eta(p) = theta(k(p))` for every `p`.
///
/// With `within = None` the bijection may be arbitrary; such a `k` exists
/// exactly when every label has the same fiber size in both variables, and
/// in that case pairing the fibers label by label constructs a witness.
/// With `within = Some(action)` only the action's group elements are tried,
/// and the first match in closure order is returned.
pub fn are_related(
    theta: &LabeledVariable,
    eta: &LabeledVariable,
    within: Option<&FiniteAction>,
) -> (bool, Option<Perm>) {
    let n = theta.len();
    assert_eq!(n, eta.len(), "variables must share the point set");

    if let Some(act) = within {
        assert_eq!(
            act.n_points(),
            n,
            "action and variables must share the point set"
        );
        for k in act.elements() {
            if (0..n).all(|p| eta.value(p) == theta.value(k.apply(p))) {
                return (true, Some(k.clone()));
            }
        }
        return (false, None);
    }

    let theta_fibers = theta.fibers();
    let eta_fibers = eta.fibers();
    if theta_fibers.len() != eta_fibers.len()
        || theta_fibers
            .iter()
            .zip(eta_fibers.iter())
            .any(|((la, fa), (lb, fb))| la != lb || fa.len() != fb.len())
    {
        return (false, None);
    }

    let mut images = vec![0usize; n];
    for (label, eta_fiber) in &eta_fibers {
        let theta_fiber = &theta_fibers[label];
        for (&from, &to) in eta_fiber.iter().zip(theta_fiber.iter()) {
            images[from] = to;
        }
    }
    let witness = Perm::new(images).expect("fiber pairing is a bijection");
    (true, Some(witness))
}

/// Pairwise [`are_related`] verdicts for a list of variables (diagonal
/// true). The matrix is symmetric: witnesses invert, and a group is closed
/// under inverses.
pub fn classify_pairs(
    variables: &[LabeledVariable],
    within: Option<&FiniteAction>,
) -> Vec<Vec<bool>> {
    assert!(variables.len() >= 2, "need at least two variables");
    let n = variables.len();
    let mut matrix = vec![vec![false; n]; n];
    for i in 0..n {
        matrix[i][i] = true;
        for j in (i + 1)..n {
            let (related, _) = are_related(&variables[i], &variables[j], within);
            matrix[i][j] = related;
            matrix[j][i] = related;
        }
    }
    matrix
}

// ---------------------------------------------------------------------------
// Planar grid models
// ---------------------------------------------------------------------------

/// Sign pattern of `cos(angle(point) - axis)` on a planar grid, in exact
/// integer arithmetic.
///
/// The grid has `m` points (`m` even) at angles `(2k + offset)·π/m`; the
/// axis is given in the same half-step unit of `π/m`. `true` means the
/// cosine is positive or exactly zero (ties count as `+1`, matching
/// [`crate::lhv::sign_pm`]). With an odd grid offset and an even axis the
/// argument is never a right angle, so no ties occur at all.
pub fn planar_sign_plus(m: usize, offset: bool, axis_half_steps: i64) -> Vec<bool> {
    assert!(m >= 2 && m.is_multiple_of(2), "the grid needs an even point count");
    let two_m = 2 * m as i64;
    let o = i64::from(offset);
    (0..m as i64)
        .map(|k| {
            let u = (2 * k + o - axis_half_steps).rem_euclid(two_m);
            u <= m as i64 / 2 || u >= two_m - m as i64 / 2
        })
        .collect()
}

/// Binary variable on the planar grid: label 0 where the sign along the
/// axis is `+1`, label 1 where it is `-1`.
pub fn planar_sign_variable(
    name: &str,
    m: usize,
    offset: bool,
    axis_half_steps: i64,
) -> LabeledVariable {
    let values = planar_sign_plus(m, offset, axis_half_steps)
        .into_iter()
        .map(|plus| if plus { 0 } else { 1 })
        .collect();
    LabeledVariable::new(name, values)
}

/// Joint-outcome variable of an anti-parallel pair read along two axes.
///
/// The first outcome is the sign along `first_axis` at the grid point; the
/// second is the **negated** sign along `second_axis` (the partner points
/// the opposite way). Labels encode the ordered pair:
/// `(+,+) = 0`, `(+,-) = 1`, `(-,+) = 2`, `(-,-) = 3`.
pub fn planar_pair_variable(
    name: &str,
    m: usize,
    offset: bool,
    first_axis: i64,
    second_axis: i64,
) -> LabeledVariable {
    let first = planar_sign_plus(m, offset, first_axis);
    let second = planar_sign_plus(m, offset, second_axis);
    let values = first
        .into_iter()
        .zip(second)
        .map(|(a, b_raw)| {
            let b = !b_raw;
            match (a, b) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            }
        })
        .collect();
    LabeledVariable::new(name, values)
}

// ---------------------------------------------------------------------------
// Models and their file format
// ---------------------------------------------------------------------------

/// A finite action bundled with variables over its points and display names
/// for generators and labels.
#[derive(Debug, Clone)]
pub struct Model {
    pub action: FiniteAction,
    pub generator_names: Vec<String>,
    pub variables: Vec<LabeledVariable>,
    /// `label_names[l]` is the file token for label id `l`.
    pub label_names: Vec<String>,
}

impl Model {
    pub fn label_name(&self, label: Label) -> &str {
        &self.label_names[label as usize]
    }
}

/// The bundled planar pair model behind `models/chsh_pairs.model`.
///
/// Sixteen directions at `(2k+1)·11.25°`, the dihedral group generated by
/// the `22.5°` rotation (`rot`) and the reflection about the `0°` axis
/// (`mir`), and the four joint-outcome variables of an anti-parallel pair
/// at the standard CHSH angles: `C` reads along (0°, 225°), `D` along
/// (0°, 135°), `E` along (90°, 225°), `F` along (90°, 135°).
pub fn chsh_pair_model() -> Model {
    let m = 16usize;
    let names = (0..m).map(|k| format!("p{k}")).collect();
    let rot = Perm::new((0..m).map(|k| (k + 1) % m).collect()).expect("rotation");
    let mir = Perm::new((0..m).map(|k| m - 1 - k).collect()).expect("reflection");
    let action = FiniteAction::with_names(names, vec![rot, mir]).expect("dihedral group of 32");
    // Axes in half-steps of 11.25 degrees.
    let (a, a_prime, b, b_prime) = (0, 8, 20, 12);
    let variables = vec![
        planar_pair_variable("C", m, true, a, b),
        planar_pair_variable("D", m, true, a, b_prime),
        planar_pair_variable("E", m, true, a_prime, b),
        planar_pair_variable("F", m, true, a_prime, b_prime),
    ];
    Model {
        action,
        generator_names: vec!["rot".to_string(), "mir".to_string()],
        variables,
        label_names: ["++", "+-", "-+", "--"].map(String::from).to_vec(),
    }
}

/// Parses a model file.
///
/// Grammar, one directive per line (`#` starts a comment, blank lines are
/// skipped):
///
/// ```text
/// points <name> <name> ...           # first directive: the point set
/// gen <name> <image> <image> ...     # optional: a generator, one image per point
/// var <name> <point>=<label> ...     # at least one: every point exactly once
/// ```
///
/// Generator images are point names listed in `points` order. Label tokens
/// are free-form (no whitespace, no `=`) and shared across variables: two
/// variables carry equal label ids exactly when they use the same token.
pub fn parse_model(text: &str) -> Result<Model, GroupError> {
    let err = |line: usize, detail: &str| GroupError::ParseError {
        line,
        detail: detail.to_string(),
    };

    let mut point_names: Option<Vec<String>> = None;
    let mut point_index: HashMap<String, usize> = HashMap::new();
    let mut generator_names: Vec<String> = Vec::new();
    let mut generators: Vec<Perm> = Vec::new();
    let mut variables: Vec<LabeledVariable> = Vec::new();
    let mut label_names: Vec<String> = Vec::new();
    let mut label_ids: HashMap<String, Label> = HashMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "points" => {
                if point_names.is_some() {
                    return Err(err(line_no, "duplicate points directive"));
                }
                if tokens.len() < 2 {
                    return Err(err(line_no, "points directive needs at least one point"));
                }
                let names: Vec<String> = tokens[1..].iter().map(|s| s.to_string()).collect();
                for (idx, name) in names.iter().enumerate() {
                    if point_index.insert(name.clone(), idx).is_some() {
                        return Err(err(line_no, &format!("duplicate point name `{name}`")));
                    }
                }
                point_names = Some(names);
            }
            "gen" => {
                let names = point_names
                    .as_ref()
                    .ok_or_else(|| err(line_no, "gen before points"))?;
                if tokens.len() != 2 + names.len() {
                    return Err(err(
                        line_no,
                        &format!("gen needs a name plus {} images", names.len()),
                    ));
                }
                let mut images = Vec::with_capacity(names.len());
                for tok in &tokens[2..] {
                    match point_index.get(*tok) {
                        Some(&idx) => images.push(idx),
                        None => return Err(err(line_no, &format!("unknown point `{tok}`"))),
                    }
                }
                let perm = Perm::new(images)
                    .ok_or_else(|| err(line_no, "generator images are not a bijection"))?;
                generator_names.push(tokens[1].to_string());
                generators.push(perm);
            }
            "var" => {
                let names = point_names
                    .as_ref()
                    .ok_or_else(|| err(line_no, "var before points"))?;
                if tokens.len() < 2 {
                    return Err(err(line_no, "var needs a name"));
                }
                let var_name = tokens[1];
                if variables.iter().any(|v| v.name() == var_name) {
                    return Err(err(line_no, &format!("duplicate variable `{var_name}`")));
                }
                let mut values: Vec<Option<Label>> = vec![None; names.len()];
                for tok in &tokens[2..] {
                    let (point, label_tok) = tok
                        .split_once('=')
                        .ok_or_else(|| err(line_no, &format!("expected point=label, got `{tok}`")))?;
                    let &idx = point_index
                        .get(point)
                        .ok_or_else(|| err(line_no, &format!("unknown point `{point}`")))?;
                    if label_tok.is_empty() || label_tok.contains('=') {
                        return Err(err(line_no, &format!("bad label token `{label_tok}`")));
                    }
                    if values[idx].is_some() {
                        return Err(err(line_no, &format!("point `{point}` assigned twice")));
                    }
                    let next_id = label_names.len() as Label;
                    let id = *label_ids.entry(label_tok.to_string()).or_insert_with(|| {
                        label_names.push(label_tok.to_string());
                        next_id
                    });
                    values[idx] = Some(id);
                }
                let mut resolved = Vec::with_capacity(names.len());
                for (idx, v) in values.into_iter().enumerate() {
                    match v {
                        Some(l) => resolved.push(l),
                        None => {
                            return Err(err(
                                line_no,
                                &format!("point `{}` has no label", names[idx]),
                            ))
                        }
                    }
                }
                variables.push(LabeledVariable::new(var_name, resolved));
            }
            other => return Err(err(line_no, &format!("unknown directive `{other}`"))),
        }
    }

    let point_names = point_names.ok_or_else(|| err(0, "missing points directive"))?;
    if variables.is_empty() {
        return Err(err(0, "model defines no variables"));
    }
    let action = FiniteAction::with_names(point_names, generators)?;
    Ok(Model {
        action,
        generator_names,
        variables,
        label_names,
    })
}

/// Renders a model in the format [`parse_model`] reads. Round trips are
/// stable after one pass (label ids may be renumbered on the first parse,
/// names and verdicts never change).
pub fn render_model(model: &Model) -> String {
    let mut out = String::new();
    out.push_str("points");
    for name in model.action.point_names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    for (name, perm) in model
        .generator_names
        .iter()
        .zip(model.action.generators())
    {
        out.push_str("gen ");
        out.push_str(name);
        for p in perm.images() {
            out.push(' ');
            out.push_str(model.action.point_name(*p));
        }
        out.push('\n');
    }
    for var in &model.variables {
        out.push_str("var ");
        out.push_str(var.name());
        for (point, &label) in var.values().iter().enumerate() {
            out.push(' ');
            out.push_str(model.action.point_name(point));
            out.push('=');
            out.push_str(model.label_name(label));
        }
        out.push('\n');
    }
    out
}
