//! The quiver with relations `(Q^A, I^A)` of a skew-gentle algebra, the
//! gentle pair `(Q^Γ, I^Γ)` with its involution, and structural probes on
//! the realised algebra.
//!
//! Generated names are ASCII:
//!
//! | object | name |
//! |---|---|
//! | split vertex `i+` / `i-` | `i__p` / `i__m` |
//! | split arrow `^sα^t` | `α__s_t`, with `s, t ∈ {p, m, o}` and `o` for an unsplit end |
//! | arrow between ordinary vertices | unchanged |
//! | `Γ` arrow `α^±` | `α__p` / `α__m` |
//! | `Γ` vertex of ordinary `i` | `i__p` / `i__m` |
//! | `Γ` vertex of special `i` | `i` |
//! | special loop `δ_i` | `delta__i` |

use serde::Serialize;

use crate::engine::PresentedAlgebra;
use crate::field::Field;
use crate::gentle::SkewGentleTriple;
use crate::quiver::{Arrow, QuiverSpec, RelationExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VertexKind {
    Ordinary,
    Plus,
    Minus,
}

/// The decoration of one end of a split arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
    Unsplit,
}

impl Sign {
    fn code(self) -> &'static str {
        match self {
            Sign::Plus => "p",
            Sign::Minus => "m",
            Sign::Unsplit => "o",
        }
    }

    fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Unsplit => Sign::Unsplit,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitQuiver {
    /// `(Q^A, I^A)`; its special set is empty.
    pub spec: QuiverSpec,
    pub vertex_kind: Vec<VertexKind>,
    /// Vertex of `Q` each split vertex comes from.
    pub vertex_origin: Vec<usize>,
    /// Arrow of `Q` each split arrow comes from.
    pub arrow_origin: Vec<usize>,
    /// Signs at the source and target of each split arrow.
    pub arrow_signs: Vec<(Sign, Sign)>,
    /// `Q_0^{Sp-}`, in vertex order.
    pub minus_idempotent_vertices: Vec<usize>,
}

impl SplitQuiver {
    pub fn kind(&self, v: usize) -> VertexKind {
        self.vertex_kind[v]
    }

    pub fn is_minus(&self, v: usize) -> bool {
        self.vertex_kind[v] == VertexKind::Minus
    }

    /// The split vertex of `v ∈ Q_0` with the given sign.
    pub fn lift_vertex(&self, v: usize, sign: Sign) -> Option<usize> {
        (0..self.vertex_kind.len()).find(|&x| {
            self.vertex_origin[x] == v
                && match (self.vertex_kind[x], sign) {
                    (VertexKind::Ordinary, Sign::Unsplit) => true,
                    (VertexKind::Plus, Sign::Plus) => true,
                    (VertexKind::Minus, Sign::Minus) => true,
                    _ => false,
                }
        })
    }

    /// The split arrow of `a ∈ Q_1` with the given end signs.
    pub fn lift_arrow(&self, a: usize, signs: (Sign, Sign)) -> Option<usize> {
        (0..self.arrow_origin.len()).find(|&x| self.arrow_origin[x] == a && self.arrow_signs[x] == signs)
    }
}

fn signs_of(triple: &SkewGentleTriple, v: usize) -> Vec<Sign> {
    if triple.is_special(v) {
        vec![Sign::Plus, Sign::Minus]
    } else {
        vec![Sign::Unsplit]
    }
}

fn split_arrow_name(name: &str, s: Sign, t: Sign) -> String {
    if s == Sign::Unsplit && t == Sign::Unsplit {
        name.to_string()
    } else {
        format!("{name}__{}_{}", s.code(), t.code())
    }
}

/// Builds `(Q^A, I^A)`. The first copy of each special vertex is `+`.
pub fn split_triple(triple: &SkewGentleTriple) -> SplitQuiver {
    split_with(triple, false)
}

/// The same construction with the roles of `+` and `-` exchanged. The two
/// results are isomorphic algebras.
pub fn split_triple_swapped(triple: &SkewGentleTriple) -> SplitQuiver {
    split_with(triple, true)
}

fn split_with(triple: &SkewGentleTriple, swap: bool) -> SplitQuiver {
    let q = &triple.base;
    let mut spec = QuiverSpec::default();
    let mut vertex_kind = Vec::new();
    let mut vertex_origin = Vec::new();
    for v in 0..q.vertices.len() {
        if triple.is_special(v) {
            for (suffix, kind) in [("p", VertexKind::Plus), ("m", VertexKind::Minus)] {
                spec.vertices.push(format!("{}__{suffix}", q.vertices[v]));
                vertex_kind.push(kind);
                vertex_origin.push(v);
            }
        } else {
            spec.vertices.push(q.vertices[v].clone());
            vertex_kind.push(VertexKind::Ordinary);
            vertex_origin.push(v);
        }
    }
    let vertex_of = |v: usize, s: Sign| -> usize {
        let first = vertex_origin.iter().position(|&o| o == v).expect("vertex is lifted");
        if s == Sign::Minus {
            first + 1
        } else {
            first
        }
    };

    let mut arrow_origin = Vec::new();
    let mut arrow_signs = Vec::new();
    for (a, arrow) in q.arrows.iter().enumerate() {
        // Target-minus variants first, so that deglex picks the path
        // through the plus vertex as the leading term of each square.
        for s in signs_of(triple, arrow.source) {
            for t in signs_of(triple, arrow.target).into_iter().rev() {
                spec.arrows.push(Arrow {
                    name: split_arrow_name(&arrow.name, s, t),
                    source: vertex_of(arrow.source, s),
                    target: vertex_of(arrow.target, t),
                });
                arrow_origin.push(a);
                arrow_signs.push((s, t));
            }
        }
    }
    let lift = |a: usize, s: Sign, t: Sign| -> usize {
        (0..arrow_origin.len())
            .find(|&x| arrow_origin[x] == a && arrow_signs[x] == (s, t))
            .expect("lifted arrow exists")
    };

    for r in &q.relations {
        let (a, b) = r.as_quadratic_monomial().expect("triples have monomial relations");
        let (i, mid, k) = (q.arrows[a].source, q.arrows[a].target, q.arrows[b].target);
        for s in signs_of(triple, i) {
            for t in signs_of(triple, k) {
                if triple.is_special(mid) {
                    spec.relations.push(RelationExpr::sum(
                        vec![lift(a, s, Sign::Plus), lift(b, Sign::Plus, t)],
                        vec![lift(a, s, Sign::Minus), lift(b, Sign::Minus, t)],
                    ));
                } else {
                    spec.relations.push(RelationExpr::monomial(vec![
                        lift(a, s, Sign::Unsplit),
                        lift(b, Sign::Unsplit, t),
                    ]));
                }
            }
        }
    }
    // The relations are symmetric in the two copies, so swapping only
    // changes which copy is called minus.
    if swap {
        for k in &mut vertex_kind {
            *k = match *k {
                VertexKind::Plus => VertexKind::Minus,
                VertexKind::Minus => VertexKind::Plus,
                VertexKind::Ordinary => VertexKind::Ordinary,
            };
        }
        for (s, t) in &mut arrow_signs {
            *s = s.flip();
            *t = t.flip();
        }
    }
    let minus_idempotent_vertices = (0..vertex_kind.len())
        .filter(|&v| vertex_kind[v] == VertexKind::Minus)
        .collect();
    SplitQuiver {
        spec,
        vertex_kind,
        vertex_origin,
        arrow_origin,
        arrow_signs,
        minus_idempotent_vertices,
    }
}

/// `(Q^Γ, I^Γ)` together with the involution `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaPair {
    pub spec: QuiverSpec,
    /// `g` on vertices, as a permutation of vertex indices.
    pub vertex_action: Vec<usize>,
    /// `g` on arrows, as a permutation of arrow indices.
    pub arrow_action: Vec<usize>,
}

impl GammaPair {
    /// Whether `g` is an involutive quiver automorphism that fixes special
    /// vertices and preserves `I^Γ`.
    pub fn action_is_valid(&self, triple: &SkewGentleTriple) -> bool {
        let q = &self.spec;
        let inv_v = (0..q.vertices.len()).all(|v| self.vertex_action[self.vertex_action[v]] == v);
        let inv_a = (0..q.arrows.len()).all(|a| self.arrow_action[self.arrow_action[a]] == a);
        let ends = q.arrows.iter().enumerate().all(|(a, arr)| {
            let g = &q.arrows[self.arrow_action[a]];
            g.source == self.vertex_action[arr.source] && g.target == self.vertex_action[arr.target]
        });
        let fixes = triple
            .special_vertices
            .iter()
            .all(|&v| q.vertex_index(&triple.base.vertices[v]).is_some_and(|x| self.vertex_action[x] == x));
        let rels = q.relations.iter().all(|r| {
            let (a, b) = r.as_quadratic_monomial().expect("Γ has monomial relations");
            q.has_zero_relation(self.arrow_action[a], self.arrow_action[b])
        });
        inv_v && inv_a && ends && fixes && rels
    }
}

pub fn build_gamma(triple: &SkewGentleTriple) -> GammaPair {
    let q = &triple.base;
    let mut spec = QuiverSpec::default();
    let mut plus = vec![0; q.vertices.len()];
    let mut minus = vec![0; q.vertices.len()];
    for v in 0..q.vertices.len() {
        if triple.is_special(v) {
            plus[v] = spec.vertices.len();
            minus[v] = plus[v];
            spec.vertices.push(q.vertices[v].clone());
        } else {
            plus[v] = spec.vertices.len();
            spec.vertices.push(format!("{}__p", q.vertices[v]));
            minus[v] = spec.vertices.len();
            spec.vertices.push(format!("{}__m", q.vertices[v]));
        }
    }
    let mut vertex_action: Vec<usize> = (0..spec.vertices.len()).collect();
    for v in 0..q.vertices.len() {
        vertex_action[plus[v]] = minus[v];
        vertex_action[minus[v]] = plus[v];
    }
    let mut arrow_action = Vec::new();
    for arrow in &q.arrows {
        let base = spec.arrows.len();
        spec.arrows.push(Arrow {
            name: format!("{}__p", arrow.name),
            source: plus[arrow.source],
            target: plus[arrow.target],
        });
        spec.arrows.push(Arrow {
            name: format!("{}__m", arrow.name),
            source: minus[arrow.source],
            target: minus[arrow.target],
        });
        arrow_action.push(base + 1);
        arrow_action.push(base);
    }
    for r in &q.relations {
        let (a, b) = r.as_quadratic_monomial().expect("triples have monomial relations");
        let (ap, am, bp, bm) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
        if triple.is_special(q.arrows[a].target) {
            spec.relations.push(RelationExpr::monomial(vec![ap, bm]));
            spec.relations.push(RelationExpr::monomial(vec![am, bp]));
        } else {
            spec.relations.push(RelationExpr::monomial(vec![ap, bp]));
            spec.relations.push(RelationExpr::monomial(vec![am, bm]));
        }
    }
    GammaPair {
        spec,
        vertex_action,
        arrow_action,
    }
}

/// Outcome of one structural probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub name: &'static str,
    /// Number of instances of the property that were examined.
    pub checked: usize,
    /// Witnesses of failure, as readable path descriptions.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub passed: bool,
    pub probes: Vec<Probe>,
}

/// Every path of `Q^A` that is nonzero in `A`, by length-first search.
fn nonzero_paths<F: Field>(sq: &SplitQuiver, alg: &PresentedAlgebra<F>) -> Vec<Vec<usize>> {
    let q = &sq.spec;
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..q.arrows.len()).map(|a| vec![a]).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in frontier {
            if alg.normal_form(&p).is_empty() {
                continue;
            }
            let t = q.arrows[*p.last().unwrap()].target;
            for b in q.out_arrows(t) {
                let mut e = p.clone();
                e.push(b);
                next.push(e);
            }
            out.push(p);
        }
        frontier = next;
    }
    out
}

fn interior(q: &QuiverSpec, p: &[usize]) -> Vec<usize> {
    p[..p.len() - 1].iter().map(|&a| q.arrows[a].target).collect()
}

/// The path obtained by moving every interior split vertex of `p` to its
/// other copy.
fn sign_twin(sq: &SplitQuiver, p: &[usize]) -> Option<Vec<usize>> {
    let n = p.len();
    p.iter()
        .enumerate()
        .map(|(i, &a)| {
            let (mut s, mut t) = sq.arrow_signs[a];
            if i > 0 {
                s = s.flip();
            }
            if i + 1 < n {
                t = t.flip();
            }
            sq.lift_arrow(sq.arrow_origin[a], (s, t))
        })
        .collect()
}

/// Checks, on the realised algebra, the structural properties of `Q^A`
/// around the minus vertices. Any failure indicates a construction bug.
pub fn structure_probes<F: Field>(sq: &SplitQuiver, alg: &PresentedAlgebra<F>) -> ProbeReport {
    let q = &sq.spec;
    let f = alg.field();
    let minus = |v: usize| sq.is_minus(v);
    let mut probes = Vec::new();

    // Arrow counts at minus vertices.
    let mut deg = Probe {
        name: "minus_degrees",
        checked: 0,
        failures: Vec::new(),
    };
    for &v in &sq.minus_idempotent_vertices {
        let outs = q.out_arrows(v);
        let ins = q.in_arrows(v);
        let groups = [
            ("out to minus", outs.iter().filter(|&&a| minus(q.arrows[a].target)).count()),
            ("in from minus", ins.iter().filter(|&&a| minus(q.arrows[a].source)).count()),
            ("out to non-minus", outs.iter().filter(|&&a| !minus(q.arrows[a].target)).count()),
            ("in from non-minus", ins.iter().filter(|&&a| !minus(q.arrows[a].source)).count()),
        ];
        for (what, n) in groups {
            deg.checked += 1;
            if n > 1 {
                deg.failures.push(format!("{}: {n} arrows {what}", q.vertices[v]));
            }
        }
    }
    probes.push(deg);

    // No nonzero cycle at a minus vertex.
    let mut cyc = Probe {
        name: "no_minus_cycles",
        checked: 0,
        failures: Vec::new(),
    };
    for w in alg.basis() {
        if !w.is_trivial() && minus(w.source) {
            cyc.checked += 1;
            if w.source == w.target {
                cyc.failures.push(q.path_name(&w.arrows));
            }
        }
    }
    probes.push(cyc);

    let paths = nonzero_paths(sq, alg);

    // Interior vertices all on one side, endpoints on
    // the other. The twin through the opposite copies agrees up to the sign
    // (-1)^(number of interior vertices).
    let mut sign = Probe {
        name: "sign_law",
        checked: 0,
        failures: Vec::new(),
    };
    for p in paths.iter().filter(|p| p.len() >= 2) {
        let s = q.arrows[p[0]].source;
        let t = q.arrows[*p.last().unwrap()].target;
        let inner = interior(q, p);
        let d2 = minus(s) && minus(t) && inner.iter().all(|&v| sq.kind(v) == VertexKind::Plus);
        let dual = !minus(s) && !minus(t) && inner.iter().all(|&v| minus(v));
        if !(d2 || dual) {
            continue;
        }
        sign.checked += 1;
        let Some(twin) = sign_twin(sq, p) else {
            sign.failures.push(format!("{}: no twin path", q.path_name(p)));
            continue;
        };
        let lhs = alg.normal_form(p);
        let rhs = alg.normal_form(&twin);
        let expected = if inner.len() % 2 == 0 {
            rhs
        } else {
            crate::linalg::scale(f, &f.neg(&f.one()), &rhs)
        };
        if lhs != expected {
            sign.failures.push(format!("{} vs {}", q.path_name(p), q.path_name(&twin)));
        }
    }
    probes.push(sign);

    // Between two minus vertices at most one nonzero path of length
    // at least 2 with every interior vertex ordinary.
    let mut uniq = Probe {
        name: "unique_ordinary_path",
        checked: 0,
        failures: Vec::new(),
    };
    let ordinary_paths: Vec<&Vec<usize>> = paths
        .iter()
        .filter(|p| {
            p.len() >= 2
                && minus(q.arrows[p[0]].source)
                && minus(q.arrows[*p.last().unwrap()].target)
                && interior(q, p).iter().all(|&v| sq.kind(v) == VertexKind::Ordinary)
        })
        .collect();
    for &i in &sq.minus_idempotent_vertices {
        for &j in &sq.minus_idempotent_vertices {
            let between: Vec<&&Vec<usize>> = ordinary_paths
                .iter()
                .filter(|p| q.arrows[p[0]].source == i && q.arrows[*p.last().unwrap()].target == j)
                .collect();
            uniq.checked += 1;
            if between.len() > 1 {
                let names: Vec<String> = between.iter().map(|p| q.path_name(p)).collect();
                uniq.failures.push(names.join(" | "));
            }
        }
    }
    probes.push(uniq);

    // Concatenating nonzero minus-to-minus paths that avoid minus
    // interiors stays nonzero.
    let mut conc = Probe {
        name: "concatenation_survives",
        checked: 0,
        failures: Vec::new(),
    };
    let avoiding: Vec<&Vec<usize>> = paths
        .iter()
        .filter(|p| {
            minus(q.arrows[p[0]].source)
                && minus(q.arrows[*p.last().unwrap()].target)
                && interior(q, p).iter().all(|&v| !minus(v))
        })
        .collect();
    for p1 in &avoiding {
        for p2 in &avoiding {
            if q.arrows[*p1.last().unwrap()].target != q.arrows[p2[0]].source {
                continue;
            }
            conc.checked += 1;
            let joined: Vec<usize> = p1.iter().chain(p2.iter()).copied().collect();
            if alg.normal_form(&joined).is_empty() {
                conc.failures.push(format!("{} * {}", q.path_name(p1), q.path_name(p2)));
            }
        }
    }
    probes.push(conc);

    ProbeReport {
        passed: probes.iter().all(|p| p.failures.is_empty()),
        probes,
    }
}
