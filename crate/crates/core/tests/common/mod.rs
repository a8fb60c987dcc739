//! Independent oracles for the integration and acceptance tests. Nothing here
//! calls the library's decision procedures; only its data types are shared.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::path::PathBuf;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relcontract::document::InstanceDocument;
use relcontract::rational::{int, rat};
use relcontract::{FiniteDistanceSpace, FiniteRelation, Instance, Point, Rational, SelfMap};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(name)).expect("fixture exists")
}

pub fn load_fixture(name: &str) -> Instance {
    InstanceDocument::parse(&fixture_text(name))
        .and_then(|d| d.to_instance(false))
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every fixture file that loads as a complete instance.
pub fn instance_corpus() -> Vec<(String, Instance)> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
        .into_iter()
        .filter_map(|n| {
            let doc = InstanceDocument::parse(&fixture_text(&n)).ok()?;
            let inst = doc.to_instance(false).ok()?;
            Some((n, inst))
        })
        .collect()
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

pub fn d(space: &FiniteDistanceSpace, x: Point, y: Point) -> &Rational {
    space.dist(x, y)
}

// ---------------------------------------------------------------------------
// Axioms, straight from the definitions.

pub struct AxiomTruth {
    pub metric_like: bool,
    pub partial_metric: bool,
    pub metric: bool,
}

pub fn axiom_truth(s: &FiniteDistanceSpace) -> AxiomTruth {
    let n = s.len();
    let mut sigma1 = true;
    let mut sigma3 = true;
    let mut p1 = true;
    let mut p2 = true;
    let mut p4 = true;
    let mut zero_diag = true;
    for x in 0..n {
        if !d(s, x, x).is_zero() {
            zero_diag = false;
        }
        for y in 0..n {
            if d(s, x, y).is_zero() && x != y {
                sigma1 = false;
            }
            let all_equal = d(s, x, x) == d(s, x, y) && d(s, x, y) == d(s, y, y);
            if all_equal != (x == y) {
                p1 = false;
            }
            if d(s, x, x) > d(s, x, y) {
                p2 = false;
            }
            for z in 0..n {
                if *d(s, x, y) > d(s, x, z) + d(s, z, y) {
                    sigma3 = false;
                }
                if *d(s, x, y) > d(s, x, z) + d(s, z, y) - d(s, z, z) {
                    p4 = false;
                }
            }
        }
    }
    let partial = p1 && p2 && p4;
    AxiomTruth {
        metric_like: sigma1 && sigma3,
        partial_metric: partial,
        metric: partial && zero_diag,
    }
}

// ---------------------------------------------------------------------------
// Eventually periodic R-preserving sequences.
//
// An eventually periodic sequence `u (c_0 … c_{p-1})^∞` is R-preserving iff
// its prefix leads into the cycle along R and `c_0 → c_1 → … → c_{p-1} → c_0`
// is a closed walk. Its limit behaviour depends only on the cycle's support.
// Periods up to `n²` are enumerated.

pub type Mask = u64;

pub fn members(mask: Mask) -> Vec<Point> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn mask_of(points: &[Point]) -> Mask {
    points.iter().fold(0, |m, &p| m | 1 << p)
}

/// Supports of closed R-walks of length `1..=max_len` that stay in `within`.
pub fn closed_walk_supports(r: &FiniteRelation, within: Mask, max_len: usize) -> Vec<Mask> {
    let n = r.size();
    let mut found = std::collections::BTreeSet::new();
    fn dfs(
        r: &FiniteRelation,
        within: Mask,
        start: Point,
        cur: Point,
        len: usize,
        support: Mask,
        max_len: usize,
        found: &mut std::collections::BTreeSet<Mask>,
    ) {
        if r.contains(cur, start) {
            found.insert(support);
        }
        if len == max_len {
            return;
        }
        for next in 0..r.size() {
            if within >> next & 1 == 1 && r.contains(cur, next) {
                dfs(
                    r,
                    within,
                    start,
                    next,
                    len + 1,
                    support | 1 << next,
                    max_len,
                    found,
                );
            }
        }
    }
    for s in 0..n {
        if within >> s & 1 == 1 {
            dfs(r, within, s, s, 1, 1 << s, max_len, &mut found);
        }
    }
    found.into_iter().collect()
}

/// Memoised [`closed_walk_supports`] keyed by relation bits and subset.
#[derive(Default)]
pub struct SupportCache {
    map: HashMap<(Vec<bool>, Mask), Vec<Mask>>,
}

impl SupportCache {
    pub fn get(&mut self, r: &FiniteRelation, within: Mask) -> &[Mask] {
        let n = r.size();
        let key: Vec<bool> = (0..n * n).map(|i| r.contains(i / n, i % n)).collect();
        self.map
            .entry((key, within))
            .or_insert_with(|| closed_walk_supports(r, within, n * n))
    }
}

/// `lim d(x_n, x_m)` for a sequence cycling over `support`, if it exists.
pub fn cauchy_limit(s: &FiniteDistanceSpace, support: Mask) -> Option<Rational> {
    let pts = members(support);
    let v = d(s, pts[0], pts[0]).clone();
    pts.iter()
        .all(|&a| pts.iter().all(|&b| *d(s, a, b) == v))
        .then_some(v)
}

/// Points `x` with `lim d(x_n, x) = d(x, x)` for a sequence cycling over
/// `support`; the limit of `d(x_n, x)` exists only if it is constant there.
pub fn limits(s: &FiniteDistanceSpace, support: Mask, candidates: Mask) -> Vec<Point> {
    let pts = members(support);
    members(candidates)
        .into_iter()
        .filter(|&x| pts.iter().all(|&p| d(s, p, x) == d(s, x, x)))
        .collect()
}

pub fn oracle_r_complete(s: &FiniteDistanceSpace, supports: &[Mask], y: Mask) -> bool {
    supports.iter().all(|&sup| match cauchy_limit(s, sup) {
        None => true,
        Some(l) => limits(s, sup, y).iter().any(|&z| *d(s, z, z) == l),
    })
}

pub fn oracle_self_closed(
    s: &FiniteDistanceSpace,
    r: &FiniteRelation,
    supports: &[Mask],
    y: Mask,
) -> bool {
    supports.iter().all(|&sup| {
        limits(s, sup, y).iter().all(|&x| {
            members(sup)
                .iter()
                .any(|&p| r.contains(p, x) || r.contains(x, p))
        })
    })
}

pub fn oracle_continuity_like(s: &FiniteDistanceSpace, f: &SelfMap, supports: &[Mask]) -> bool {
    let all = (1u64 << s.len()) - 1;
    supports.iter().all(|&sup| {
        limits(s, sup, all).iter().all(|&x| {
            let fx = f.apply(x);
            members(sup)
                .iter()
                .all(|&p| d(s, f.apply(p), fx) == d(s, fx, fx))
        })
    })
}

// ---------------------------------------------------------------------------
// Paths.

/// Length of the shortest path of length >= 1 from `x` to `y` in `r`.
pub fn shortest_path_len(r: &FiniteRelation, x: Point, y: Point) -> Option<usize> {
    let n = r.size();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if r.contains(x, v) {
            if v == y {
                return Some(1);
            }
            if dist[v] == usize::MAX {
                dist[v] = 1;
                queue.push_back(v);
            }
        }
    }
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if r.contains(u, v) {
                if v == y {
                    return Some(dist[u] + 1);
                }
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    None
}

/// Exhaustive shortest path length by trying every intermediate sequence.
pub fn exhaustive_path_len(r: &FiniteRelation, x: Point, y: Point) -> Option<usize> {
    let n = r.size();
    for len in 1..=n {
        let inner = len - 1;
        let total = n.pow(inner as u32);
        for code in 0..total {
            let mut seq = vec![x];
            let mut c = code;
            for _ in 0..inner {
                seq.push(c % n);
                c /= n;
            }
            seq.push(y);
            if seq.windows(2).all(|w| r.contains(w[0], w[1])) {
                return Some(len);
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Random instances.

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random symmetric table over `{0, 1/2, 1, …, max/2}`.
pub fn random_table(rng: &mut ChaCha8Rng, n: usize, max_halves: i64) -> FiniteDistanceSpace {
    let mut t = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rat(rng.random_range(0..=max_halves), 2);
            t[i][j] = v.clone();
            t[j][i] = v;
        }
    }
    FiniteDistanceSpace::new(labels(n), t).expect("symmetric, non-negative")
}

/// `max(w_x, w_y)` off the diagonal and `w_x` on it, with distinct weights:
/// a partial metric. Equal weights would break p1.
pub fn random_max_partial_metric(rng: &mut ChaCha8Rng, n: usize) -> FiniteDistanceSpace {
    let mut pool: Vec<i64> = (0..12).collect();
    pool.shuffle(rng);
    let w: Vec<Rational> = pool[..n].iter().map(|&v| int(v)).collect();
    FiniteDistanceSpace::from_fn(labels(n), |i, j| w[i].clone().max(w[j].clone()))
        .expect("well formed")
}

/// Distances between distinct random integer points on a line: a metric.
pub fn random_line_metric(rng: &mut ChaCha8Rng, n: usize) -> FiniteDistanceSpace {
    let mut pool: Vec<i64> = (-20..20).collect();
    pool.shuffle(rng);
    let pos = &pool[..n];
    FiniteDistanceSpace::from_fn(labels(n), |i, j| int((pos[i] - pos[j]).abs()))
        .expect("well formed")
}

/// A metric plus arbitrary non-negative self-distances bounded by the
/// smallest off-diagonal value: metric-like, usually nothing more.
pub fn random_metric_like(rng: &mut ChaCha8Rng, n: usize) -> FiniteDistanceSpace {
    let mut pos: Vec<i64> = (0..n).map(|_| rng.random_range(0..40)).collect();
    pos.sort_unstable();
    pos.dedup();
    let n = pos.len();
    let min_gap = pos.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(1);
    let diag: Vec<i64> = (0..n).map(|_| rng.random_range(0..=2 * min_gap)).collect();
    FiniteDistanceSpace::from_fn(labels(n), |i, j| {
        if i == j {
            int(diag[i])
        } else {
            int((pos[i] - pos[j]).abs())
        }
    })
    .expect("well formed")
}

pub fn random_map(rng: &mut ChaCha8Rng, n: usize) -> SelfMap {
    SelfMap::new((0..n).map(|_| rng.random_range(0..n)).collect()).expect("in range")
}

/// Smallest `f`-closed relation containing `seed`.
pub fn f_closure(n: usize, f: &SelfMap, seed: &[(Point, Point)]) -> FiniteRelation {
    let mut r = FiniteRelation::empty(n);
    let mut stack: Vec<(Point, Point)> = seed.to_vec();
    while let Some((x, y)) = stack.pop() {
        if !r.contains(x, y) {
            r.insert(x, y);
            stack.push((f.apply(x), f.apply(y)));
        }
    }
    r
}
