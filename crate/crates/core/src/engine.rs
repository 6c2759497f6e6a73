//! Realisation of `kQ/<R>` for length-homogeneous relations.
//!
//! The quotient is built one path length at a time. In length `d` the
//! candidates are the words `n*b` with `n` a normal word of length `d-1`
//! and `b` an arrow; relations contribute `n'*r` for normal `n'`. Reducing
//! these with columns sorted from the deglex-largest word down makes every
//! pivot a leading monomial, so the non-pivot candidates are exactly the
//! normal words of a reduced Gröbner basis. The first length without normal
//! words certifies finite dimension, because normal words are closed under
//! taking subwords.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::linalg::{Accumulator, Echelon, SparseVec, Subspace};
use crate::quiver::QuiverSpec;

pub mod oracle;

pub const DEFAULT_DEGREE_CAP: usize = 64;
/// Largest number of candidate words tolerated in a single length.
pub const WORD_GUARD: usize = 200_000;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A normal word: a path that is not divisible by any leading monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisWord {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl BasisWord {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Clone, Debug)]
struct Layer<F: Field> {
    /// Global basis index of each normal word of this length.
    normal: Vec<usize>,
    /// Candidate column of `(prefix local index, arrow)`.
    columns: HashMap<(usize, usize), usize>,
    echelon: Echelon<F>,
    /// Local normal index of each non-pivot column.
    column_normal: Vec<Option<usize>>,
    /// Word of each candidate column.
    column_words: Vec<Vec<usize>>,
}

/// A rewrite rule `tip -> rhs` of the reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct Rule<E> {
    pub tip: Vec<usize>,
    pub rhs: SparseVec<E>,
}

/// A finite-dimensional quotient of a path algebra with its normal-word
/// basis and multiplication table.
#[derive(Clone, Debug)]
pub struct PresentedAlgebra<F: Field> {
    id: u64,
    quiver: QuiverSpec,
    field: F,
    basis: Vec<BasisWord>,
    /// Normal words grouped by length; `layers[0]` is unused (idempotents).
    layers: Vec<Layer<F>>,
    by_word: HashMap<Vec<usize>, usize>,
    products: HashMap<(usize, usize), SparseVec<F::Elem>>,
    certificate: usize,
    rules: Vec<Rule<F::Elem>>,
    arrow_basis: Vec<Option<usize>>,
    /// Index of each basis word inside its layer.
    local: Vec<usize>,
    generators: Vec<usize>,
}

/// An element of a [`PresentedAlgebra`], as a sparse vector over its basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement<E> {
    algebra: u64,
    pub coeffs: SparseVec<E>,
}

impl<E> AlgebraElement<E> {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Realises `A = kQ/<R>` over `field`, failing when no length up to
/// `degree_cap` is free of normal words.
pub fn realize<F: Field>(spec: &QuiverSpec, field: &F, degree_cap: usize) -> Result<PresentedAlgebra<F>> {
    let n = spec.vertices.len();
    let mut relations: Vec<(usize, usize, Vec<(F::Elem, Vec<usize>)>)> = Vec::new();
    for r in &spec.relations {
        let mut terms = Vec::new();
        for t in &r.terms {
            if t.path.is_empty() {
                return Err(Error::InconsistentRelation("relation with a trivial path".into()));
            }
            let c = field.from_rational(&t.coefficient)?;
            if !field.is_zero(&c) {
                terms.push((c, t.path.clone()));
            }
        }
        if let Some((_, p)) = terms.first() {
            let src = spec.arrows[p[0]].source;
            relations.push((r.degree(), src, terms));
        }
    }

    let mut basis: Vec<BasisWord> = (0..n)
        .map(|v| BasisWord {
            source: v,
            target: v,
            arrows: Vec::new(),
        })
        .collect();
    let mut layers: Vec<Layer<F>> = vec![Layer {
        normal: (0..n).collect(),
        columns: HashMap::new(),
        echelon: Echelon::new(field, 0),
        column_normal: Vec::new(),
        column_words: Vec::new(),
    }];

    let mut d = 1;
    loop {
        if d > degree_cap {
            return Err(Error::CapExceeded {
                what: "finite-dimensionality certificate".into(),
                cap: degree_cap,
            });
        }
        let prev = &layers[d - 1];
        let mut cands: Vec<(Vec<usize>, usize, usize)> = Vec::new();
        for (local, &g) in prev.normal.iter().enumerate() {
            let w = &basis[g];
            for a in 0..spec.arrows.len() {
                if spec.arrows[a].source == w.target {
                    let mut word = w.arrows.clone();
                    word.push(a);
                    cands.push((word, local, a));
                }
            }
        }
        if cands.len() > WORD_GUARD {
            return Err(Error::CapExceeded {
                what: format!("candidate words in length {d}"),
                cap: WORD_GUARD,
            });
        }
        cands.sort_by(|x, y| y.0.cmp(&x.0));
        let mut columns = HashMap::new();
        let mut column_words = Vec::with_capacity(cands.len());
        for (i, (word, local, a)) in cands.into_iter().enumerate() {
            columns.insert((local, a), i);
            column_words.push(word);
        }
        let mut layer = Layer {
            normal: Vec::new(),
            columns,
            echelon: Echelon::new(field, column_words.len()),
            column_normal: Vec::new(),
            column_words,
        };

        for (k, src, terms) in &relations {
            if *k > d {
                continue;
            }
            let base = &layers[d - k];
            for (lg, &g) in base.normal.iter().enumerate() {
                if basis[g].target != *src {
                    continue;
                }
                let mut acc = Accumulator::new();
                for (c, path) in terms {
                    let mut v: SparseVec<F::Elem> = vec![(lg, field.one())];
                    for (step, &a) in path[..path.len() - 1].iter().enumerate() {
                        v = step_forward(field, &layers[d - k + step + 1], &v, a);
                    }
                    let last = *path.last().unwrap();
                    for (m, x) in v {
                        let col = layer.columns[&(m, last)];
                        acc.add_term(field, col, &field.mul(c, &x));
                    }
                }
                let _ = layer.echelon.insert(&acc.finish(field));
            }
        }

        let mut free: Vec<usize> = (0..layer.column_words.len())
            .filter(|&c| !layer.echelon.is_pivot(c))
            .collect();
        free.sort_by(|&x, &y| layer.column_words[x].cmp(&layer.column_words[y]));
        layer.column_normal = vec![None; layer.column_words.len()];
        for (local, &c) in free.iter().enumerate() {
            layer.column_normal[c] = Some(local);
            let word = layer.column_words[c].clone();
            let source = spec.arrows[word[0]].source;
            let target = spec.arrows[*word.last().unwrap()].target;
            layer.normal.push(basis.len());
            basis.push(BasisWord {
                source,
                target,
                arrows: word,
            });
        }
        let empty = layer.normal.is_empty();
        layers.push(layer);
        if empty {
            break;
        }
        d += 1;
    }

    let by_word = basis
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_trivial())
        .map(|(i, w)| (w.arrows.clone(), i))
        .collect();
    let arrow_basis = (0..spec.arrows.len())
        .map(|a| layers[1].normal.iter().copied().find(|&g| basis[g].arrows == [a]))
        .collect();

    let generators: Vec<usize> = layers.get(1).map(|l| l.normal.clone()).unwrap_or_default();
    let mut local = vec![0; basis.len()];
    for layer in &layers {
        for (l, &g) in layer.normal.iter().enumerate() {
            local[g] = l;
        }
    }
    let mut alg = PresentedAlgebra {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        quiver: spec.clone(),
        field: field.clone(),
        basis,
        layers,
        by_word,
        products: HashMap::new(),
        certificate: d,
        rules: Vec::new(),
        generators,
        arrow_basis,
        local,
    };
    alg.rules = alg.compute_rules();
    alg.products = alg.compute_products();
    Ok(alg)
}

/// Multiplies a combination of normal words of length `d-1` (local indices)
/// on the right by arrow `a`, returning local indices in `layer` (length `d`).
fn step_forward<F: Field>(field: &F, layer: &Layer<F>, v: &[(usize, F::Elem)], a: usize) -> SparseVec<F::Elem> {
    let mut acc = Accumulator::new();
    for (m, x) in v {
        if let Some(&col) = layer.columns.get(&(*m, a)) {
            acc.add_term(field, col, x);
        }
    }
    let reduced = layer.echelon.reduce(&acc.finish(field));
    let mut out = Accumulator::new();
    for (col, x) in reduced {
        let local = layer.column_normal[col].expect("remainder lies on normal columns");
        out.add_term(field, local, &x);
    }
    out.finish(field)
}

impl<F: Field> PresentedAlgebra<F> {
    pub fn quiver(&self) -> &QuiverSpec {
        &self.quiver
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn field_spec(&self) -> FieldSpec {
        self.field.spec()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisWord] {
        &self.basis
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertices.len()
    }

    /// The first path length with no normal words.
    pub fn certificate_degree(&self) -> usize {
        self.certificate
    }

    /// Reduced Gröbner basis, one rule per minimal leading monomial.
    pub fn rules(&self) -> &[Rule<F::Elem>] {
        &self.rules
    }

    /// Number of normal words of each length, starting at length 0.
    pub fn graded_dimensions(&self) -> Vec<usize> {
        let mut dims: Vec<usize> = self.layers.iter().map(|l| l.normal.len()).collect();
        while dims.last() == Some(&0) {
            dims.pop();
        }
        dims
    }

    pub fn word_index(&self, arrows: &[usize]) -> Option<usize> {
        if arrows.is_empty() {
            None
        } else {
            self.by_word.get(arrows).copied()
        }
    }

    /// Basis index of the arrow `a`, unless `a` itself is not normal.
    pub fn arrow_index(&self, a: usize) -> Option<usize> {
        self.arrow_basis[a]
    }

    /// Basis indices of the arrows that are normal words.
    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    /// Position of arrow `a` in [`PresentedAlgebra::generator_indices`].
    pub fn generator_position(&self, a: usize) -> Option<usize> {
        self.arrow_basis[a].and_then(|b| self.generators.iter().position(|&g| g == b))
    }

    pub fn word_name(&self, b: usize) -> String {
        let w = &self.basis[b];
        if w.is_trivial() {
            format!("e_{}", self.quiver.vertices[w.source])
        } else {
            self.quiver.path_name(&w.arrows)
        }
    }

    fn layer_of(&self, b: usize) -> usize {
        self.basis[b].len()
    }

    /// Normal form of `coeff * path` as global coordinates. Non-composable
    /// paths give zero.
    pub fn normal_form(&self, path: &[usize]) -> SparseVec<F::Elem> {
        if path.is_empty() {
            return Vec::new();
        }
        let Some(p) = crate::quiver::Path::from_arrows(&self.quiver, path) else {
            return Vec::new();
        };
        self.extend(0, &[(p.source, self.field.one())], path)
    }

    /// Right-multiplies a combination of normal words of length `d`, given
    /// as local indices, by the letters of `path`. Returns global indices.
    fn extend(&self, d: usize, start: &[(usize, F::Elem)], path: &[usize]) -> SparseVec<F::Elem> {
        let mut v: SparseVec<F::Elem> = start.to_vec();
        let mut len = d;
        for &a in path {
            if len + 1 >= self.layers.len() {
                return Vec::new();
            }
            v = step_forward(&self.field, &self.layers[len + 1], &v, a);
            len += 1;
            if v.is_empty() {
                return v;
            }
        }
        let layer = &self.layers[len];
        let mut out: SparseVec<F::Elem> = v.into_iter().map(|(m, x)| (layer.normal[m], x)).collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    fn product_of_words(&self, i: usize, j: usize) -> SparseVec<F::Elem> {
        let (wi, wj) = (&self.basis[i], &self.basis[j]);
        if wi.target != wj.source {
            return Vec::new();
        }
        if wi.is_trivial() {
            return vec![(j, self.field.one())];
        }
        if wj.is_trivial() {
            return vec![(i, self.field.one())];
        }
        let d = self.layer_of(i);
        let local = self.local[i];
        self.extend(d, &[(local, self.field.one())], &wj.arrows)
    }

    fn compute_products(&self) -> HashMap<(usize, usize), SparseVec<F::Elem>> {
        let mut out = HashMap::new();
        for i in 0..self.basis.len() {
            for j in 0..self.basis.len() {
                if self.basis[i].target == self.basis[j].source {
                    let p = self.product_of_words(i, j);
                    if !p.is_empty() {
                        out.insert((i, j), p);
                    }
                }
            }
        }
        out
    }

    fn compute_rules(&self) -> Vec<Rule<F::Elem>> {
        let mut rules = Vec::new();
        for (d, layer) in self.layers.iter().enumerate().skip(1) {
            for (col, word) in layer.column_words.iter().enumerate() {
                if !layer.echelon.is_pivot(col) {
                    continue;
                }
                if d > 1 && !self.by_word.contains_key(&word[1..]) {
                    continue;
                }
                let rem = layer.echelon.reduce(&[(col, self.field.one())]);
                let rhs = rem
                    .into_iter()
                    .map(|(c, x)| (layer.normal[layer.column_normal[c].unwrap()], x))
                    .collect();
                rules.push(Rule {
                    tip: word.clone(),
                    rhs,
                });
            }
        }
        rules
    }

    /// Structure constants of the product of two basis elements.
    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, F::Elem)] {
        self.products.get(&(i, j)).map_or(&[], |v| v.as_slice())
    }

    /// Product of two sparse vectors over the basis.
    pub fn mul_vec(&self, x: &[(usize, F::Elem)], y: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut acc = Accumulator::new();
        for (i, a) in x {
            for (j, b) in y {
                let p = self.mul_basis(*i, *j);
                if !p.is_empty() {
                    acc.axpy(f, &f.mul(a, b), p);
                }
            }
        }
        acc.finish(f)
    }

    /// First basis triple `(i, j, k)` with `(ij)k != i(jk)`, checking all
    /// `dim^3` triples.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.dimension();
        let f = &self.field;
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul_basis(i, j);
                for k in 0..n {
                    let left = self.mul_vec(ij, &[(k, f.one())]);
                    let right = self.mul_vec(&[(i, f.one())], self.mul_basis(j, k));
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn element(&self, coeffs: SparseVec<F::Elem>) -> AlgebraElement<F::Elem> {
        AlgebraElement { algebra: self.id, coeffs }
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement<F::Elem> {
        self.element(vec![(i, self.field.one())])
    }

    pub fn path_element(&self, path: &[usize]) -> AlgebraElement<F::Elem> {
        self.element(self.normal_form(path))
    }

    pub fn one(&self) -> AlgebraElement<F::Elem> {
        self.element((0..self.vertex_count()).map(|v| (v, self.field.one())).collect())
    }

    pub fn multiply(&self, a: &AlgebraElement<F::Elem>, b: &AlgebraElement<F::Elem>) -> Result<AlgebraElement<F::Elem>> {
        if a.algebra != self.id || b.algebra != self.id {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self.element(self.mul_vec(&a.coeffs, &b.coeffs)))
    }

    pub fn render(&self, v: &[(usize, F::Elem)]) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter()
            .map(|(i, x)| format!("{}*{}", self.field.render(x), self.word_name(*i)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Powers of the radical, computed as products of the arrow ideal with
    /// itself: `rad^0 = A`, `rad^{j+1} = rad^j * rad`. The last entry is the
    /// first zero power.
    pub fn radical_filtration(&self) -> Vec<Vec<SparseVec<F::Elem>>> {
        let dim = self.dimension();
        let f = &self.field;
        let all: Vec<SparseVec<F::Elem>> = (0..dim).map(|i| vec![(i, f.one())]).collect();
        let rad: Vec<SparseVec<F::Elem>> = (self.vertex_count()..dim).map(|i| vec![(i, f.one())]).collect();
        let mut layers = vec![all, rad.clone()];
        while !layers.last().unwrap().is_empty() {
            let cur = layers.last().unwrap();
            let products = cur
                .iter()
                .flat_map(|x| rad.iter().map(move |y| (x, y)))
                .map(|(x, y)| self.mul_vec(x, y));
            let next = Subspace::spanned_by(f, dim, products);
            layers.push(next.basis().to_vec());
        }
        layers
    }

    pub fn radical_layer_dims(&self) -> Vec<usize> {
        self.radical_filtration().iter().map(|l| l.len()).collect()
    }

    /// JSON export: basis words as arrow-name arrays and nonzero structure
    /// constants with coefficients as strings.
    pub fn to_json(&self) -> serde_json::Value {
        let name = |a: &usize| self.quiver.arrows[*a].name.clone();
        let basis: Vec<serde_json::Value> = self
            .basis
            .iter()
            .map(|w| {
                serde_json::json!({
                    "source": self.quiver.vertices[w.source],
                    "target": self.quiver.vertices[w.target],
                    "word": w.arrows.iter().map(name).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut keys: Vec<&(usize, usize)> = self.products.keys().collect();
        keys.sort();
        let products: Vec<serde_json::Value> = keys
            .into_iter()
            .map(|k| {
                let terms: Vec<(usize, String)> =
                    self.products[k].iter().map(|(i, x)| (*i, self.field.render(x))).collect();
                serde_json::json!({"left": k.0, "right": k.1, "terms": terms})
            })
            .collect();
        let rules: Vec<serde_json::Value> = self
            .rules
            .iter()
            .map(|r| {
                let rhs: Vec<(usize, String)> = r.rhs.iter().map(|(i, x)| (*i, self.field.render(x))).collect();
                serde_json::json!({"tip": r.tip.iter().map(name).collect::<Vec<_>>(), "rhs": rhs})
            })
            .collect();
        serde_json::json!({
            "field": self.field.spec().label(),
            "dimension": self.dimension(),
            "certificate_degree": self.certificate,
            "basis": basis,
            "rules": rules,
            "products": products,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::quiver::dsl::parse;

    const GENTLE: &str = "vertices 1 2 3 4; arrow a: 1->2; arrow b: 2->3; arrow c: 3->4; rel a*b;";

    #[test]
    fn gentle_example_has_dimension_eight() {
        let alg = realize(&parse(GENTLE).unwrap(), &Rationals, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(alg.dimension(), 8);
        assert_eq!(alg.graded_dimensions(), vec![4, 3, 1]);
        assert_eq!(alg.certificate_degree(), 3);
        let names: Vec<String> = (0..8).map(|i| alg.word_name(i)).collect();
        assert!(names.contains(&"b*c".to_string()));
    }

    #[test]
    fn single_vertex() {
        let alg = realize(&parse("vertices v;").unwrap(), &Rationals, 4).unwrap();
        assert_eq!(alg.dimension(), 1);
        let e = alg.basis_element(0);
        assert_eq!(alg.multiply(&e, &e).unwrap(), e);
    }

    #[test]
    fn free_loop_exceeds_cap() {
        let q = parse("vertices v; arrow l: v->v;").unwrap();
        assert!(matches!(realize(&q, &Rationals, 10), Err(Error::CapExceeded { cap: 10, .. })));
    }

    #[test]
    fn anticommutative_square_rewrites_to_the_smaller_path() {
        let q = parse("vertices 1 2 3 4; arrow b: 1->3; arrow a: 1->2; arrow c: 2->4; arrow d: 3->4; rel a*c + b*d;")
            .unwrap();
        for alg in [realize(&q, &Rationals, 8).unwrap()] {
            assert_eq!(alg.dimension(), 4 + 4 + 1);
            let ac = alg.normal_form(&[1, 2]);
            let bd = alg.normal_form(&[0, 3]);
            assert_eq!(bd.len(), 1);
            assert_eq!(ac, vec![(bd[0].0, Rationals.from_i64(-1))]);
            assert_eq!(alg.rules().len(), 1);
            assert_eq!(alg.rules()[0].tip, vec![1, 2]);
        }
        let f2 = PrimeField::new(2).unwrap();
        let alg = realize(&q, &f2, 8).unwrap();
        assert_eq!(alg.normal_form(&[1, 2]), alg.normal_form(&[0, 3]));
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let q = parse("vertices v;").unwrap();
        let a = realize(&q, &Rationals, 4).unwrap();
        let b = realize(&q, &Rationals, 4).unwrap();
        assert_eq!(a.multiply(&a.one(), &b.one()), Err(Error::AlgebraMismatch));
    }

    #[test]
    fn radical_layers_of_gentle_example() {
        let alg = realize(&parse(GENTLE).unwrap(), &Rationals, 8).unwrap();
        assert_eq!(alg.radical_layer_dims(), vec![8, 4, 1, 0]);
    }
}
