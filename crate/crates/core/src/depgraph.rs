//! Variable dependency graph and exact minimum vertex cover.
//!
//! Vertices are state variables; an edge joins two variables whose product
//! occurs in some monomial of the system.  The complement of a minimum
//! vertex cover is the largest variable set eliminable by linear methods.

use std::collections::{BTreeMap, BTreeSet};

use crate::poly::MultiPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    pub vertices: Vec<String>,
    pub edges: BTreeSet<(String, String)>,
    /// Variables occurring squared somewhere.
    pub self_loops: BTreeSet<String>,
}

impl DependencyGraph {
    pub fn neighbors(&self, v: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter_map(|(a, b)| {
                if a == v {
                    Some(b.as_str())
                } else if b == v {
                    Some(a.as_str())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_cover(&self, cover: &BTreeSet<String>) -> bool {
        self.self_loops.iter().all(|v| cover.contains(v))
            && self
                .edges
                .iter()
                .all(|(a, b)| cover.contains(a) || cover.contains(b))
    }
}

/// Builds the graph for a system; `state_vars` restricts the vertex set
/// (parameters are excluded by listing only the state variables).
pub fn build_graph(system: &[MultiPoly], state_vars: &[String]) -> DependencyGraph {
    let mut edges = BTreeSet::new();
    let mut self_loops = BTreeSet::new();
    for eq in system {
        let idx: BTreeMap<usize, &String> = eq
            .vars()
            .iter()
            .enumerate()
            .filter(|(_, v)| state_vars.contains(v))
            .map(|(i, v)| (i, v))
            .collect();
        for (mono, _) in eq.terms() {
            let present: Vec<(&String, u32)> = idx
                .iter()
                .filter_map(|(i, v)| {
                    let e = mono.0[*i];
                    if e > 0 {
                        Some((*v, e))
                    } else {
                        None
                    }
                })
                .collect();
            for (v, e) in &present {
                if *e >= 2 {
                    self_loops.insert((*v).clone());
                }
            }
            for i in 0..present.len() {
                for j in i + 1..present.len() {
                    let (a, b) = (present[i].0, present[j].0);
                    let key = if a <= b {
                        (a.clone(), b.clone())
                    } else {
                        (b.clone(), a.clone())
                    };
                    edges.insert(key);
                }
            }
        }
    }
    DependencyGraph { vertices: state_vars.to_vec(), edges, self_loops }
}

/// Exact minimum vertex cover by branch and bound on uncovered edges;
/// self-loop vertices are forced in.  Among all minimum covers, the
/// lexicographically smallest variable-name set is returned.
pub fn min_vertex_cover(g: &DependencyGraph) -> BTreeSet<String> {
    let mut best: Option<BTreeSet<String>> = None;
    let mut current: BTreeSet<String> = g.self_loops.clone();
    let edges: Vec<(String, String)> = g
        .edges
        .iter()
        .filter(|(a, b)| !current.contains(a) && !current.contains(b) && a != b)
        .cloned()
        .collect();
    branch(&edges, &mut current, &mut best);
    best.unwrap_or_else(|| g.self_loops.clone())
}

fn branch(
    edges: &[(String, String)],
    current: &mut BTreeSet<String>,
    best: &mut Option<BTreeSet<String>>,
) {
    // prune on size, with lexicographic tie-break on equal size
    if let Some(b) = best {
        if current.len() > b.len() {
            return;
        }
    }
    let uncovered = edges
        .iter()
        .find(|(a, b)| !current.contains(a) && !current.contains(b));
    match uncovered {
        None => {
            let better = match best {
                None => true,
                Some(b) => {
                    current.len() < b.len()
                        || (current.len() == b.len()
                            && current.iter().lt(b.iter()))
                }
            };
            if better {
                *best = Some(current.clone());
            }
        }
        Some((a, b)) => {
            for pick in [a, b] {
                if current.insert(pick.clone()) {
                    branch(edges, current, best);
                    current.remove(pick);
                }
            }
        }
    }
}

/// Every vertex cover of minimum size, for minimality certificates.
pub fn all_min_covers(g: &DependencyGraph) -> Vec<BTreeSet<String>> {
    let k = min_vertex_cover(g).len();
    let mut out = Vec::new();
    let verts: Vec<&String> = g.vertices.iter().collect();
    let n = verts.len();
    // exhaustive subset scan; instances here stay tiny
    assert!(n <= 20, "exhaustive cover scan limited to small graphs");
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let cand: BTreeSet<String> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| verts[i].clone())
            .collect();
        if g.is_cover(&cand) {
            out.push(cand);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn edge(a: &str, b: &str) -> (String, String) {
        if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        }
    }

    #[test]
    fn model26_graph_and_cover() {
        let m = fixtures::model26();
        let system = m.steady_state_system();
        let g = build_graph(&system, &m.vars);
        let expected: BTreeSet<_> = [
            edge("x3", "x5"),
            edge("x1", "x5"),
            edge("x1", "x4"),
            edge("x2", "x4"),
            edge("x2", "x5"),
        ]
        .into_iter()
        .collect();
        assert_eq!(g.edges, expected);
        assert!(g.self_loops.is_empty());
        let cover = min_vertex_cover(&g);
        assert_eq!(cover, ["x4", "x5"].iter().map(|s| s.to_string()).collect());
        // brute-force minimality: no single vertex covers all edges
        assert!(all_min_covers(&g).contains(&cover));
        for v in &g.vertices {
            let single: BTreeSet<String> = [v.clone()].into_iter().collect();
            assert!(!g.is_cover(&single));
        }
    }

    #[test]
    fn model28_graph_and_cover() {
        let m = fixtures::model28();
        let system = m.steady_state_system();
        let g = build_graph(&system, &m.vars);
        let expected: BTreeSet<_> = [
            edge("x4", "x6"),
            edge("x1", "x6"),
            edge("x2", "x6"),
            edge("x3", "x6"),
            edge("x1", "x5"),
            edge("x2", "x5"),
            edge("x3", "x5"),
        ]
        .into_iter()
        .collect();
        assert_eq!(g.edges, expected);
        let cover = min_vertex_cover(&g);
        assert_eq!(cover, ["x5", "x6"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn linear_system_no_edges() {
        let vars = names(&["x", "y"]);
        let p = crate::textform::parse_poly("2*x - y + 1", &["x", "y"]).unwrap();
        let g = build_graph(&[p], &vars);
        assert!(g.edges.is_empty());
        assert!(min_vertex_cover(&g).is_empty());
    }

    #[test]
    fn triangle_cover_tie_break() {
        let vars = names(&["a", "b", "c"]);
        let p = crate::textform::parse_poly("a*b + b*c + c*a", &["a", "b", "c"]).unwrap();
        let g = build_graph(&[p], &vars);
        let cover = min_vertex_cover(&g);
        assert_eq!(cover.len(), 2);
        // lexicographically smallest pair
        assert_eq!(cover, ["a", "b"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn self_loops_forced() {
        let vars = names(&["a", "b"]);
        let p = crate::textform::parse_poly("a^2 + a*b", &["a", "b"]).unwrap();
        let g = build_graph(&[p], &vars);
        assert!(g.self_loops.contains("a"));
        let cover = min_vertex_cover(&g);
        assert!(cover.contains("a"));
        assert_eq!(cover.len(), 1);
    }

    #[test]
    fn brute_force_minimality_certificate() {
        // random small graphs: branch and bound matches exhaustive scan
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..30 {
            let n = rng.gen_range(2..8usize);
            let vars: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut edges = BTreeSet::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.insert((vars[i].clone(), vars[j].clone()));
                    }
                }
            }
            let g = DependencyGraph {
                vertices: vars.clone(),
                edges,
                self_loops: BTreeSet::new(),
            };
            let cover = min_vertex_cover(&g);
            assert!(g.is_cover(&cover));
            // exhaustive: no smaller cover exists
            for mask in 0u32..(1 << n) {
                if (mask.count_ones() as usize) < cover.len() {
                    let cand: BTreeSet<String> = (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| vars[i].clone())
                        .collect();
                    assert!(!g.is_cover(&cand), "smaller cover exists");
                }
            }
        }
    }
}
