//! Small worked instances used by tests, examples and the CLI corpus.

use crate::rational::{int, Rational};
use crate::relation::{FiniteRelation, SelfMap};
use crate::space::FiniteDistanceSpace;
use crate::validator::Instance;

fn abc() -> Vec<String> {
    ["a", "b", "c"].map(String::from).to_vec()
}

fn table(rows: [[i64; 3]; 3]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| int(v)).collect())
        .collect()
}

/// Metric-like on `{a, b, c}` but not a partial metric: `σ(c, c) = 2`
/// exceeds `σ(a, c) = 1`.
pub fn example1_sigma() -> FiniteDistanceSpace {
    FiniteDistanceSpace::new(abc(), table([[0, 2, 1], [2, 0, 1], [1, 1, 2]]))
        .expect("fixture is well formed")
}

/// Partial metric on `{a, b, c}` that is not a metric: `p(b, b) = 1`.
pub fn example1_p() -> FiniteDistanceSpace {
    FiniteDistanceSpace::new(abc(), table([[0, 1, 1], [1, 1, 1], [1, 1, 1]]))
        .expect("fixture is well formed")
}

/// The space underlying [`example2`].
pub fn example2_space() -> FiniteDistanceSpace {
    FiniteDistanceSpace::new(abc(), table([[0, 1, 2], [1, 0, 2], [2, 2, 3]]))
        .expect("fixture is well formed")
}

/// `f = (a→b, b→b, c→a)`, `R = {(a,a), (b,b), (a,b)}`, `Y = {a, b}`: all
/// hypotheses hold and `b` is the unique fixed point.
pub fn example2() -> Instance {
    let relation = FiniteRelation::from_pairs(3, [(0, 0), (1, 1), (0, 1)]).expect("in range");
    let map = SelfMap::new(vec![1, 1, 0]).expect("in range");
    Instance::new(example2_space(), relation, map, vec![0, 1]).expect("f(X) lies in Y")
}

/// The swap `a ↔ b` (fixing `c`) under the universal relation: an isometry
/// on `{a, b}`, so no contraction constant below one exists.
pub fn two_cycle() -> Instance {
    let map = SelfMap::new(vec![1, 0, 2]).expect("in range");
    Instance::whole(example2_space(), FiniteRelation::universal(3), map).expect("Y = X")
}

/// The identity on the discrete `{0, 1}`-metric with the diagonal relation:
/// every point is fixed and no two are joined by a path.
pub fn identity_on_discrete(n: usize) -> Instance {
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    let space = FiniteDistanceSpace::from_fn(labels, |i, j| int(i64::from(i != j)))
        .expect("fixture is well formed");
    Instance::whole(space, FiniteRelation::diagonal(n), SelfMap::identity(n)).expect("Y = X")
}
