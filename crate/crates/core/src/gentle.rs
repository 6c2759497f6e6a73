//! Gentle pairs and skew-gentle triples.

use serde::Serialize;

use crate::engine::{realize, DEFAULT_DEGREE_CAP};
use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::quiver::{dsl, Arrow, QuiverSpec, RelationExpr};

/// One failed axiom with the vertices and arrows that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: u8,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GentleVerdict {
    pub is_gentle: bool,
    pub violations: Vec<Violation>,
}

impl GentleVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdict serializes")
    }
}

/// Rejects relations that are not single paths of length 2.
pub fn require_quadratic_monomials(spec: &QuiverSpec) -> Result<()> {
    for r in &spec.relations {
        if r.as_quadratic_monomial().is_none() {
            return Err(Error::NotQuadraticMonomial {
                relation: dsl::render_relation(spec, r),
            });
        }
    }
    Ok(())
}

fn arrow_name(spec: &QuiverSpec, a: usize) -> String {
    spec.arrows[a].name.clone()
}

/// Checks the four gentle axioms on `(Q, I)`; special vertices are ignored.
pub fn check_gentle(spec: &QuiverSpec) -> Result<GentleVerdict> {
    check_gentle_with_cap(spec, DEFAULT_DEGREE_CAP)
}

pub fn check_gentle_with_cap(spec: &QuiverSpec, degree_cap: usize) -> Result<GentleVerdict> {
    require_quadratic_monomials(spec)?;
    let mut violations = Vec::new();
    for v in 0..spec.vertices.len() {
        for (dir, arrows) in [("out", spec.out_arrows(v)), ("in", spec.in_arrows(v))] {
            if arrows.len() > 2 {
                let mut witness = vec![spec.vertices[v].clone(), dir.to_string()];
                witness.extend(arrows.iter().map(|&a| arrow_name(spec, a)));
                violations.push(Violation { axiom: 1, witness });
            }
        }
    }
    for a in 0..spec.arrows.len() {
        let Arrow { source, target, .. } = spec.arrows[a];
        let succ = spec.out_arrows(target);
        let pred = spec.in_arrows(source);
        let free_succ: Vec<usize> = succ.iter().copied().filter(|&b| !spec.has_zero_relation(a, b)).collect();
        let free_pred: Vec<usize> = pred.iter().copied().filter(|&c| !spec.has_zero_relation(c, a)).collect();
        let rel_succ: Vec<usize> = succ.iter().copied().filter(|&b| spec.has_zero_relation(a, b)).collect();
        let rel_pred: Vec<usize> = pred.iter().copied().filter(|&c| spec.has_zero_relation(c, a)).collect();
        for (axiom, dir, list) in [
            (2, "successors", &free_succ),
            (2, "predecessors", &free_pred),
            (3, "successors", &rel_succ),
            (3, "predecessors", &rel_pred),
        ] {
            if list.len() > 1 {
                let mut witness = vec![arrow_name(spec, a), dir.to_string()];
                witness.extend(list.iter().map(|&b| arrow_name(spec, b)));
                violations.push(Violation { axiom, witness });
            }
        }
    }
    match realize(spec, &Rationals, degree_cap) {
        Ok(_) => {}
        Err(Error::CapExceeded { what, cap }) => violations.push(Violation {
            axiom: 4,
            witness: vec![format!("{what}: none within cap {cap}")],
        }),
        Err(e) => return Err(e),
    }
    Ok(GentleVerdict {
        is_gentle: violations.is_empty(),
        violations,
    })
}

/// A validated skew-gentle triple `(Q, I, Sp)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewGentleTriple {
    /// `(Q, I)` with `special` recording `Sp`.
    pub base: QuiverSpec,
    pub special_vertices: Vec<usize>,
    pub ordinary_vertices: Vec<usize>,
    /// `Q'` with one loop per special vertex and relations `I ∪ {δ²}`.
    pub augmented: QuiverSpec,
}

impl SkewGentleTriple {
    pub fn is_special(&self, v: usize) -> bool {
        self.special_vertices.contains(&v)
    }

    /// Whether the skew-gentle algebra has a single block. A special vertex
    /// without arrows splits off two copies of the field.
    pub fn is_indecomposable(&self) -> bool {
        let q = &self.base;
        q.connected_components().len() == 1 && !(q.vertices.len() == 1 && q.arrows.is_empty() && !self.special_vertices.is_empty())
    }
}

/// Result of [`check_skew_gentle`] for an input that is not a triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkewVerdict {
    pub is_gentle: bool,
    pub violations: Vec<Violation>,
    /// Special vertices whose loop takes part in a violation.
    pub offending_special: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkewCheck {
    Valid(SkewGentleTriple),
    Invalid(SkewVerdict),
}

impl SkewCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, SkewCheck::Valid(_))
    }

    pub fn triple(self) -> Option<SkewGentleTriple> {
        match self {
            SkewCheck::Valid(t) => Some(t),
            SkewCheck::Invalid(_) => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SkewCheck::Valid(t) => serde_json::json!({
                "is_gentle": true,
                "violations": [],
                "offending_special": [],
                "special": t.special_vertices.iter().map(|&v| t.base.vertices[v].clone()).collect::<Vec<_>>(),
            }),
            SkewCheck::Invalid(v) => serde_json::to_value(v).expect("verdict serializes"),
        }
    }
}

/// Name of the special loop at vertex `v`, made unique against existing
/// arrow names.
pub fn loop_name(spec: &QuiverSpec, v: usize) -> String {
    let mut name = format!("delta__{}", spec.vertices[v]);
    while spec.arrow_index(&name).is_some() {
        name.push('_');
    }
    name
}

/// `Q'`: the quiver with a loop `δ_v` and relation `δ_v δ_v` per special vertex.
pub fn augment(spec: &QuiverSpec) -> QuiverSpec {
    let mut q = spec.clone();
    for &v in &spec.special {
        let name = loop_name(&q, v);
        q.arrows.push(Arrow {
            name,
            source: v,
            target: v,
        });
        let l = q.arrows.len() - 1;
        q.relations.push(RelationExpr::monomial(vec![l, l]));
    }
    q.special.clear();
    q
}

/// Validates `(Q, I, Sp)` by checking that `(Q', I ∪ {δ²})` is gentle.
pub fn check_skew_gentle(spec: &QuiverSpec) -> Result<SkewCheck> {
    require_quadratic_monomials(spec)?;
    let augmented = augment(spec);
    let verdict = check_gentle(&augmented)?;
    if verdict.is_gentle {
        let ordinary = (0..spec.vertices.len()).filter(|v| !spec.is_special(*v)).collect();
        let base = spec.clone();
        let mut special = base.special.clone();
        special.sort_unstable();
        return Ok(SkewCheck::Valid(SkewGentleTriple {
            base,
            special_vertices: special,
            ordinary_vertices: ordinary,
            augmented,
        }));
    }
    let loops: Vec<(String, String)> = spec
        .special
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            (
                augmented.arrows[spec.arrows.len() + i].name.clone(),
                spec.vertices[v].clone(),
            )
        })
        .collect();
    let mut offending = Vec::new();
    for viol in &verdict.violations {
        for (l, v) in &loops {
            if viol.witness.contains(l) && !offending.contains(v) {
                offending.push(v.clone());
            }
        }
    }
    Ok(SkewCheck::Invalid(SkewVerdict {
        is_gentle: false,
        violations: verdict.violations,
        offending_special: offending,
    }))
}

/// Vertices that can carry a special loop on their own.
pub fn admissible_special(spec: &QuiverSpec) -> Result<Vec<usize>> {
    let mut base = spec.clone();
    base.special.clear();
    let mut out = Vec::new();
    for v in 0..spec.vertices.len() {
        base.special = vec![v];
        if check_skew_gentle(&base)?.is_valid() {
            out.push(v);
        }
    }
    Ok(out)
}

/// Splits `I` into relations whose middle vertex is ordinary (`I^or`) and
/// special (`I^Sp`).
pub fn split_relations(triple: &SkewGentleTriple) -> (Vec<RelationExpr>, Vec<RelationExpr>) {
    let q = &triple.base;
    q.relations.iter().cloned().partition(|r| {
        let (a, _) = r.as_quadratic_monomial().expect("triples have monomial relations");
        !triple.is_special(q.arrows[a].target)
    })
}

/// All cycles `α_0 … α_n` with every cyclically consecutive composition in
/// `I`, each given once, rotated to start at its smallest arrow index.
pub fn find_full_relation_cycles(spec: &QuiverSpec) -> Vec<Vec<usize>> {
    let n = spec.arrows.len();
    let next: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| spec.has_zero_relation(a, b)).collect())
        .collect();
    let mut cycles = Vec::new();
    for start in 0..n {
        let mut stack = vec![start];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        extend_cycles(&next, start, &mut stack, &mut on_path, &mut cycles);
    }
    cycles
}

fn extend_cycles(
    next: &[Vec<usize>],
    start: usize,
    stack: &mut Vec<usize>,
    on_path: &mut [bool],
    cycles: &mut Vec<Vec<usize>>,
) {
    let last = *stack.last().unwrap();
    for &b in &next[last] {
        if b == start {
            cycles.push(stack.clone());
        } else if b > start && !on_path[b] {
            on_path[b] = true;
            stack.push(b);
            extend_cycles(next, start, stack, on_path, cycles);
            stack.pop();
            on_path[b] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::dsl::parse;

    const EXAMPLE: &str = "vertices 1 2 3 4; arrow a: 1->2; arrow b: 2->3; arrow c: 3->4; rel a*b;";

    #[test]
    fn worked_example_is_gentle() {
        let v = check_gentle(&parse(EXAMPLE).unwrap()).unwrap();
        assert!(v.is_gentle, "{v:?}");
    }

    #[test]
    fn free_loop_fails_finite_dimension() {
        let v = check_gentle(&parse("vertices v; arrow l: v->v;").unwrap()).unwrap();
        assert!(!v.is_gentle);
        assert_eq!(v.violations.iter().map(|x| x.axiom).collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn three_outgoing_arrows() {
        let q = parse("vertices 0 1 2 3; arrow x: 0->1; arrow y: 0->2; arrow z: 0->3;").unwrap();
        let v = check_gentle(&q).unwrap();
        assert_eq!(v.violations[0], Violation {
            axiom: 1,
            witness: vec!["0".into(), "out".into(), "x".into(), "y".into(), "z".into()],
        });
    }

    #[test]
    fn non_monomial_relations_are_errors() {
        let q = parse("vertices 1 2 3 4; arrow a: 1->2; arrow b: 2->4; arrow c: 1->3; arrow d: 3->4; rel a*b + c*d;")
            .unwrap();
        assert!(matches!(check_gentle(&q), Err(Error::NotQuadraticMonomial { .. })));
    }

    #[test]
    fn special_three_is_rejected_and_named() {
        let mut q = parse(EXAMPLE).unwrap();
        q.special = vec![2];
        match check_skew_gentle(&q).unwrap() {
            SkewCheck::Invalid(v) => {
                assert_eq!(v.offending_special, vec!["3".to_string()]);
                assert!(v.violations.iter().any(|x| x.axiom == 2 && x.witness[0] == "b"));
            }
            SkewCheck::Valid(_) => panic!("vertex 3 cannot be special"),
        }
        q.special = vec![0, 1];
        assert!(check_skew_gentle(&q).unwrap().is_valid());
        assert_eq!(admissible_special(&q).unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn relation_routing() {
        let mut q = parse(EXAMPLE).unwrap();
        q.special = vec![0, 1];
        let t = check_skew_gentle(&q).unwrap().triple().unwrap();
        let (or, sp) = split_relations(&t);
        assert!(or.is_empty());
        assert_eq!(sp, vec![RelationExpr::monomial(vec![0, 1])]);

        let mut q = parse("vertices 1 2 3 4; arrow a: 1->2; arrow b: 2->3; arrow c: 3->4; rel b*c;").unwrap();
        q.special = vec![0];
        let t = check_skew_gentle(&q).unwrap().triple().unwrap();
        let (or, sp) = split_relations(&t);
        assert_eq!(or, vec![RelationExpr::monomial(vec![1, 2])]);
        assert!(sp.is_empty());
    }

    #[test]
    fn full_relation_cycles() {
        let two = parse("vertices 1 2; arrow a: 1->2; arrow b: 2->1; rel a*b; rel b*a;").unwrap();
        assert_eq!(find_full_relation_cycles(&two), vec![vec![0, 1]]);
        assert!(find_full_relation_cycles(&parse(EXAMPLE).unwrap()).is_empty());
        let three =
            parse("vertices 1 2 3; arrow a: 1->2; arrow b: 2->3; arrow c: 3->1; rel b*c; rel c*a; rel a*b;").unwrap();
        assert_eq!(find_full_relation_cycles(&three), vec![vec![0, 1, 2]]);
    }
}
