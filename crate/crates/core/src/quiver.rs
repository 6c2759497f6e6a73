//! Quivers, paths and relations.
//!
//! Paths compose left to right: the path `a*b` first traverses `a`, then
//! `b`, so it is only defined when `target(a) == source(b)`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub mod dsl;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coefficient: BigRational,
    /// Arrow indices, in traversal order. Never empty.
    pub path: Vec<usize>,
}

/// A linear combination of paths sharing source, target and length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationExpr {
    pub terms: Vec<Term>,
}

impl RelationExpr {
    /// A zero relation consisting of one path with coefficient 1.
    pub fn monomial(path: Vec<usize>) -> Self {
        RelationExpr {
            terms: vec![Term {
                coefficient: BigRational::one(),
                path,
            }],
        }
    }

    /// The relation `p + q`.
    pub fn sum(p: Vec<usize>, q: Vec<usize>) -> Self {
        RelationExpr {
            terms: vec![
                Term {
                    coefficient: BigRational::one(),
                    path: p,
                },
                Term {
                    coefficient: BigRational::one(),
                    path: q,
                },
            ],
        }
    }

    /// `Some((a, b))` when the relation is the single path `a*b` (with any
    /// nonzero coefficient).
    pub fn as_quadratic_monomial(&self) -> Option<(usize, usize)> {
        match self.terms.as_slice() {
            [t] if t.path.len() == 2 && !t.coefficient.is_zero() => Some((t.path[0], t.path[1])),
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.first().map_or(0, |t| t.path.len())
    }
}

/// A path in a quiver. The empty arrow sequence is the trivial path `e_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(spec: &QuiverSpec, a: usize) -> Self {
        let ar = &spec.arrows[a];
        Path {
            source: ar.source,
            target: ar.target,
            arrows: vec![a],
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Builds the path traversing `arrows`, or `None` if they do not compose.
    pub fn from_arrows(spec: &QuiverSpec, arrows: &[usize]) -> Option<Self> {
        let first = spec.arrows.get(*arrows.first()?)?;
        let mut target = first.target;
        for &a in &arrows[1..] {
            let ar = spec.arrows.get(a)?;
            if ar.source != target {
                return None;
            }
            target = ar.target;
        }
        Some(Path {
            source: first.source,
            target,
            arrows: arrows.to_vec(),
        })
    }
}

/// Concatenates `p` then `q`. Returns `None` (the zero path) when
/// `target(p) != source(q)`.
pub fn path_compose(p: &Path, q: &Path) -> Option<Path> {
    if p.target != q.source {
        return None;
    }
    let mut arrows = p.arrows.clone();
    arrows.extend_from_slice(&q.arrows);
    Some(Path {
        source: p.source,
        target: q.target,
        arrows,
    })
}

/// A finite quiver with relations and a set of special vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<RelationExpr>,
    /// Indices of special vertices, in declaration order.
    pub special: Vec<usize>,
}

impl QuiverSpec {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn out_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].source == v).collect()
    }

    pub fn in_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].target == v).collect()
    }

    pub fn is_special(&self, v: usize) -> bool {
        self.special.contains(&v)
    }

    /// Vertex sets of the connected components of the underlying graph,
    /// each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut label: Vec<usize> = (0..n).collect();
        fn root(label: &mut [usize], mut v: usize) -> usize {
            while label[v] != v {
                label[v] = label[label[v]];
                v = label[v];
            }
            v
        }
        for a in &self.arrows {
            let (x, y) = (root(&mut label, a.source), root(&mut label, a.target));
            label[x.max(y)] = x.min(y);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..n {
            let r = root(&mut label, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// Whether the quadratic monomial `a*b` is one of the relations.
    pub fn has_zero_relation(&self, a: usize, b: usize) -> bool {
        self.relations.iter().any(|r| r.as_quadratic_monomial() == Some((a, b)))
    }

    pub fn path_name(&self, arrows: &[usize]) -> String {
        arrows
            .iter()
            .map(|&a| self.arrows[a].name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// The same quiver with a different relation set.
    pub fn with_relations(&self, relations: Vec<RelationExpr>) -> QuiverSpec {
        QuiverSpec {
            relations,
            ..self.clone()
        }
    }

    /// Checks every structural invariant. Specs built through
    /// [`QuiverBuilder`] or the parser always pass.
    pub fn validate(&self) -> Result<()> {
        let mut b = QuiverBuilder::new();
        for v in &self.vertices {
            b.vertex(v)?;
        }
        for a in &self.arrows {
            let s = self.vertices.get(a.source).ok_or_else(|| dangling("vertex", &a.source.to_string()))?;
            let t = self.vertices.get(a.target).ok_or_else(|| dangling("vertex", &a.target.to_string()))?;
            b.arrow(&a.name, &s.clone(), &t.clone())?;
        }
        for r in &self.relations {
            b.relation(r.clone())?;
        }
        for &s in &self.special {
            let name = self.vertices.get(s).ok_or_else(|| dangling("vertex", &s.to_string()))?;
            b.special(&name.clone())?;
        }
        Ok(())
    }
}

fn dangling(kind: &'static str, name: &str) -> Error {
    Error::DanglingName {
        kind,
        name: name.to_string(),
        line: 0,
    }
}

/// Incremental, validating construction of a [`QuiverSpec`].
#[derive(Clone, Debug, Default)]
pub struct QuiverBuilder {
    spec: QuiverSpec,
    vertex_ids: HashMap<String, usize>,
    arrow_ids: HashMap<String, usize>,
    line: usize,
}

impl QuiverBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the source line attached to subsequent errors.
    pub(crate) fn at_line(&mut self, line: usize) {
        self.line = line;
    }

    pub fn vertex(&mut self, name: &str) -> Result<usize> {
        if self.vertex_ids.contains_key(name) {
            return Err(Error::DuplicateName {
                kind: "vertex",
                name: name.to_string(),
                line: self.line,
            });
        }
        let id = self.spec.vertices.len();
        self.spec.vertices.push(name.to_string());
        self.vertex_ids.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn vertex_id(&self, name: &str) -> Result<usize> {
        self.vertex_ids.get(name).copied().ok_or_else(|| Error::DanglingName {
            kind: "vertex",
            name: name.to_string(),
            line: self.line,
        })
    }

    pub fn arrow_id(&self, name: &str) -> Result<usize> {
        self.arrow_ids.get(name).copied().ok_or_else(|| Error::DanglingName {
            kind: "arrow",
            name: name.to_string(),
            line: self.line,
        })
    }

    pub fn arrow(&mut self, name: &str, source: &str, target: &str) -> Result<usize> {
        if self.arrow_ids.contains_key(name) {
            return Err(Error::DuplicateName {
                kind: "arrow",
                name: name.to_string(),
                line: self.line,
            });
        }
        if !name.is_empty() && name.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Syntax {
                line: self.line,
                column: 0,
                message: format!("arrow name `{name}` is numeric and would read as a coefficient"),
            });
        }
        let s = self.vertex_id(source)?;
        let t = self.vertex_id(target)?;
        let id = self.spec.arrows.len();
        self.spec.arrows.push(Arrow {
            name: name.to_string(),
            source: s,
            target: t,
        });
        self.arrow_ids.insert(name.to_string(), id);
        Ok(id)
    }

    /// Adds a relation given by arrow indices, checking composability,
    /// common endpoints and equal length.
    pub fn relation(&mut self, rel: RelationExpr) -> Result<()> {
        if rel.terms.is_empty() {
            return Err(Error::Syntax {
                line: self.line,
                column: 0,
                message: "empty relation".into(),
            });
        }
        let mut ends = None;
        for t in &rel.terms {
            if t.path.is_empty() {
                return Err(Error::Syntax {
                    line: self.line,
                    column: 0,
                    message: "relation term without arrows".into(),
                });
            }
            if let Some(&bad) = t.path.iter().find(|&&a| a >= self.spec.arrows.len()) {
                return Err(Error::DanglingName {
                    kind: "arrow",
                    name: bad.to_string(),
                    line: self.line,
                });
            }
            let p = Path::from_arrows(&self.spec, &t.path).ok_or_else(|| {
                let pair = t
                    .path
                    .windows(2)
                    .find(|w| self.spec.arrows[w[0]].target != self.spec.arrows[w[1]].source)
                    .expect("a non-composable path has a bad pair");
                let (x, y) = (&self.spec.arrows[pair[0]], &self.spec.arrows[pair[1]]);
                Error::NonComposable {
                    line: self.line,
                    detail: format!(
                        "target({}) = {} but source({}) = {}",
                        x.name, self.spec.vertices[x.target], y.name, self.spec.vertices[y.source]
                    ),
                }
            })?;
            match ends {
                None => ends = Some((p.source, p.target, p.len())),
                Some((s, e, l)) => {
                    if l != p.len() {
                        return Err(Error::MixedRelation {
                            line: self.line,
                            what: "lengths",
                        });
                    }
                    if (s, e) != (p.source, p.target) {
                        return Err(Error::MixedRelation {
                            line: self.line,
                            what: "endpoints",
                        });
                    }
                }
            }
        }
        self.spec.relations.push(rel);
        Ok(())
    }

    /// Adds the relation `a*b` by arrow names.
    pub fn zero_relation(&mut self, a: &str, b: &str) -> Result<()> {
        let (a, b) = (self.arrow_id(a)?, self.arrow_id(b)?);
        self.relation(RelationExpr::monomial(vec![a, b]))
    }

    pub fn special(&mut self, name: &str) -> Result<()> {
        let v = self.vertex_id(name)?;
        if self.spec.special.contains(&v) {
            return Err(Error::DuplicateName {
                kind: "special vertex",
                name: name.to_string(),
                line: self.line,
            });
        }
        self.spec.special.push(v);
        Ok(())
    }

    pub fn finish(self) -> Result<QuiverSpec> {
        if self.spec.vertices.is_empty() {
            return Err(Error::Syntax {
                line: self.line,
                column: 0,
                message: "a quiver needs at least one vertex".into(),
            });
        }
        Ok(self.spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> QuiverSpec {
        let mut b = QuiverBuilder::new();
        for v in ["1", "2", "3", "4"] {
            b.vertex(v).unwrap();
        }
        b.arrow("a", "1", "2").unwrap();
        b.arrow("b", "2", "3").unwrap();
        b.arrow("c", "3", "4").unwrap();
        b.finish().unwrap()
    }

    #[test]
    fn composable_paths_concatenate() {
        let q = chain();
        let ab = path_compose(&Path::arrow(&q, 0), &Path::arrow(&q, 1)).unwrap();
        assert_eq!((ab.source, ab.target, ab.arrows.clone()), (0, 2, vec![0, 1]));
        assert_eq!(path_compose(&Path::arrow(&q, 0), &Path::arrow(&q, 2)), None);
        assert_eq!(path_compose(&Path::trivial(1), &Path::arrow(&q, 1)), Some(Path::arrow(&q, 1)));
    }

    #[test]
    fn composition_is_associative_on_short_paths() {
        // A quiver with a loop and a 2-cycle gives plenty of composable triples.
        let mut b = QuiverBuilder::new();
        b.vertex("x").unwrap();
        b.vertex("y").unwrap();
        b.arrow("l", "x", "x").unwrap();
        b.arrow("u", "x", "y").unwrap();
        b.arrow("d", "y", "x").unwrap();
        let q = b.finish().unwrap();
        let mut paths: Vec<Path> = (0..2).map(Path::trivial).collect();
        let mut frontier = paths.clone();
        for _ in 0..4 {
            let mut next = Vec::new();
            for p in &frontier {
                for a in 0..q.arrows.len() {
                    if let Some(r) = path_compose(p, &Path::arrow(&q, a)) {
                        next.push(r);
                    }
                }
            }
            paths.extend(next.iter().cloned());
            frontier = next;
        }
        for x in &paths {
            assert_eq!(path_compose(&Path::trivial(x.source), x).as_ref(), Some(x));
            assert_eq!(path_compose(x, &Path::trivial(x.target)).as_ref(), Some(x));
        }
        let short: Vec<&Path> = paths.iter().filter(|p| p.len() <= 2).collect();
        for x in &short {
            for y in &short {
                for z in &short {
                    let left = path_compose(x, y).and_then(|xy| path_compose(&xy, z));
                    let right = path_compose(y, z).and_then(|yz| path_compose(x, &yz));
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn builder_rejects_bad_relations() {
        let mut b = QuiverBuilder::new();
        b.vertex("1").unwrap();
        b.vertex("2").unwrap();
        b.arrow("a", "1", "2").unwrap();
        assert!(matches!(b.zero_relation("a", "a"), Err(Error::NonComposable { .. })));
        assert!(matches!(b.arrow("a", "1", "2"), Err(Error::DuplicateName { .. })));
        assert!(matches!(b.arrow("z", "1", "9"), Err(Error::DanglingName { .. })));
    }
}
