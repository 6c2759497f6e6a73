//! A common interface for the finite-dimensional algebras that modules and
//! resolutions are built over.
//!
//! Every algebra here has a basis of elements `b = e_s b e_t`. The trivial
//! idempotents are basis elements, and every other basis element is a
//! scalar multiple of a product of generators lying in the radical.

use std::collections::HashMap;

use crate::engine::PresentedAlgebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Accumulator, Echelon, SparseVec};

pub trait FiniteAlgebra: Sync {
    type F: Field;

    fn field(&self) -> &Self::F;
    fn dim(&self) -> usize;
    fn vertex_count(&self) -> usize;
    /// Basis index of the idempotent `e_v`.
    fn idempotent(&self, v: usize) -> usize;
    /// `(s, t)` with `b = e_s b e_t`.
    fn ends(&self, b: usize) -> (usize, usize);
    fn mul(&self, a: usize, b: usize) -> SparseVec<<Self::F as Field>::Elem>;
    /// Basis indices of radical generators.
    fn generators(&self) -> &[usize];
    /// `b = c * g_1 * ... * g_k`, with `g_i` given as positions in
    /// [`FiniteAlgebra::generators`]. Empty for idempotents.
    fn factor(&self, b: usize) -> (<Self::F as Field>::Elem, Vec<usize>);

    fn is_idempotent(&self, b: usize) -> bool {
        let (s, t) = self.ends(b);
        s == t && self.idempotent(s) == b
    }

    /// Basis elements `b` with `b e_v = b`, i.e. a basis of `A e_v`.
    fn left_projective_basis(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.ends(b).1 == v).collect()
    }

    fn mul_vec(
        &self,
        x: &[(usize, <Self::F as Field>::Elem)],
        y: &[(usize, <Self::F as Field>::Elem)],
    ) -> SparseVec<<Self::F as Field>::Elem> {
        let f = self.field();
        let mut acc = Accumulator::new();
        for (i, a) in x {
            for (j, b) in y {
                if self.ends(*i).1 != self.ends(*j).0 {
                    continue;
                }
                let p = self.mul(*i, *j);
                acc.axpy(f, &f.mul(a, b), &p);
            }
        }
        acc.finish(f)
    }
}

impl<F: Field> FiniteAlgebra for PresentedAlgebra<F> {
    type F = F;

    fn field(&self) -> &F {
        PresentedAlgebra::field(self)
    }
    fn dim(&self) -> usize {
        self.dimension()
    }
    fn vertex_count(&self) -> usize {
        PresentedAlgebra::vertex_count(self)
    }
    fn idempotent(&self, v: usize) -> usize {
        v
    }
    fn ends(&self, b: usize) -> (usize, usize) {
        let w = &self.basis()[b];
        (w.source, w.target)
    }
    fn mul(&self, a: usize, b: usize) -> SparseVec<F::Elem> {
        self.mul_basis(a, b).to_vec()
    }
    fn generators(&self) -> &[usize] {
        self.generator_indices()
    }
    fn factor(&self, b: usize) -> (F::Elem, Vec<usize>) {
        let w = &self.basis()[b];
        let gens = w
            .arrows
            .iter()
            .map(|&a| self.generator_position(a).expect("letters of normal words are normal"))
            .collect();
        (PresentedAlgebra::field(self).one(), gens)
    }
}

/// The opposite algebra, sharing the basis of the wrapped one.
#[derive(Clone, Copy, Debug)]
pub struct Opposite<'a, A: ?Sized>(pub &'a A);

impl<A: FiniteAlgebra + ?Sized> FiniteAlgebra for Opposite<'_, A> {
    type F = A::F;

    fn field(&self) -> &A::F {
        self.0.field()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }
    fn idempotent(&self, v: usize) -> usize {
        self.0.idempotent(v)
    }
    fn ends(&self, b: usize) -> (usize, usize) {
        let (s, t) = self.0.ends(b);
        (t, s)
    }
    fn mul(&self, a: usize, b: usize) -> SparseVec<<A::F as Field>::Elem> {
        self.0.mul(b, a)
    }
    fn generators(&self) -> &[usize] {
        self.0.generators()
    }
    fn factor(&self, b: usize) -> (<A::F as Field>::Elem, Vec<usize>) {
        let (c, mut g) = self.0.factor(b);
        g.reverse();
        (c, g)
    }
}

/// `A ⊗ A^op`, with basis pairs `(i, j)` stored at `i * dim + j` and
/// product `(a ⊗ b)(a' ⊗ b') = aa' ⊗ b'b`. Vertex `(u, v)` is `u * n + v`.
#[derive(Debug)]
pub struct Enveloping<'a, A: FiniteAlgebra> {
    base: &'a A,
    gens: Vec<usize>,
    gen_pos: HashMap<usize, usize>,
}

impl<'a, A: FiniteAlgebra> Enveloping<'a, A> {
    pub fn new(base: &'a A) -> Self {
        let d = base.dim();
        let n = base.vertex_count();
        let mut gens = Vec::new();
        for &g in base.generators() {
            for v in 0..n {
                gens.push(g * d + base.idempotent(v));
            }
        }
        for &g in base.generators() {
            for u in 0..n {
                gens.push(base.idempotent(u) * d + g);
            }
        }
        let gen_pos = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        Enveloping { base, gens, gen_pos }
    }

    pub fn base(&self) -> &A {
        self.base
    }

    pub fn pair(&self, x: usize) -> (usize, usize) {
        (x / self.base.dim(), x % self.base.dim())
    }

    pub fn vertex_of_pair(&self, u: usize, v: usize) -> usize {
        u * self.base.vertex_count() + v
    }
}

impl<A: FiniteAlgebra> FiniteAlgebra for Enveloping<'_, A> {
    type F = A::F;

    fn field(&self) -> &A::F {
        self.base.field()
    }
    fn dim(&self) -> usize {
        self.base.dim() * self.base.dim()
    }
    fn vertex_count(&self) -> usize {
        self.base.vertex_count() * self.base.vertex_count()
    }
    fn idempotent(&self, v: usize) -> usize {
        let n = self.base.vertex_count();
        self.base.idempotent(v / n) * self.base.dim() + self.base.idempotent(v % n)
    }
    fn ends(&self, x: usize) -> (usize, usize) {
        let (i, j) = self.pair(x);
        let (si, ti) = self.base.ends(i);
        let (sj, tj) = self.base.ends(j);
        (self.vertex_of_pair(si, tj), self.vertex_of_pair(ti, sj))
    }
    fn mul(&self, x: usize, y: usize) -> SparseVec<<A::F as Field>::Elem> {
        let f = self.base.field();
        let d = self.base.dim();
        let (i, j) = self.pair(x);
        let (k, l) = self.pair(y);
        let left = self.base.mul(i, k);
        if left.is_empty() {
            return Vec::new();
        }
        let right = self.base.mul(l, j);
        let mut out = Vec::with_capacity(left.len() * right.len());
        for (a, p) in &left {
            for (b, q) in &right {
                out.push((a * d + b, f.mul(p, q)));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        out
    }
    fn generators(&self) -> &[usize] {
        &self.gens
    }
    fn factor(&self, x: usize) -> (<A::F as Field>::Elem, Vec<usize>) {
        let f = self.base.field();
        let d = self.base.dim();
        let (i, j) = self.pair(x);
        let (ci, gi) = self.base.factor(i);
        let (cj, gj) = self.base.factor(j);
        let v = self.base.idempotent(self.base.ends(j).1);
        let u = self.base.idempotent(self.base.ends(i).1);
        let mut out = Vec::with_capacity(gi.len() + gj.len());
        for g in gi {
            out.push(self.gen_pos[&(self.base.generators()[g] * d + v)]);
        }
        for g in gj.into_iter().rev() {
            out.push(self.gen_pos[&(u * d + self.base.generators()[g])]);
        }
        (f.mul(&ci, &cj), out)
    }
}

/// The corner `fAf` for `f` a sum of vertex idempotents, on the basis
/// elements of `A` whose ends both lie in the chosen vertex set.
#[derive(Debug)]
pub struct Corner<'a, A: FiniteAlgebra> {
    base: &'a A,
    /// Vertices of `A` kept, in order; corner vertex `k` is `vertices[k]`.
    pub vertices: Vec<usize>,
    vertex_pos: HashMap<usize, usize>,
    /// Ambient basis index of each corner basis element.
    pub basis: Vec<usize>,
    pos: HashMap<usize, usize>,
    gens: Vec<usize>,
    factors: Vec<(<A::F as Field>::Elem, Vec<usize>)>,
}

impl<'a, A: FiniteAlgebra> Corner<'a, A> {
    /// Builds the corner at `vertices`. Fails when some basis element is not
    /// a multiple of a product of radical generators.
    pub fn new(base: &'a A, vertices: &[usize]) -> Result<Self> {
        let f = base.field();
        let vertex_pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let basis: Vec<usize> = (0..base.dim())
            .filter(|&b| {
                let (s, t) = base.ends(b);
                vertex_pos.contains_key(&s) && vertex_pos.contains_key(&t)
            })
            .collect();
        let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let dim = basis.len();
        let rad: Vec<usize> = (0..dim).filter(|&k| !base.is_idempotent(basis[k])).collect();
        let to_local = |v: &SparseVec<<A::F as Field>::Elem>| -> SparseVec<<A::F as Field>::Elem> {
            let mut out: SparseVec<_> = v.iter().map(|(i, x)| (pos[i], x.clone())).collect();
            out.sort_by_key(|(i, _)| *i);
            out
        };
        let mut rad2 = Echelon::new(f, dim);
        for &x in &rad {
            for &y in &rad {
                if base.ends(basis[x]).1 == base.ends(basis[y]).0 {
                    let _ = rad2.insert(&to_local(&base.mul(basis[x], basis[y])));
                }
            }
        }
        let mut gens = Vec::new();
        for &x in &rad {
            if rad2.insert_if_independent(&[(x, f.one())]) {
                gens.push(basis[x]);
            }
        }
        // Factorise every radical basis element as c * g * w with w already
        // factorised, in rounds until nothing new is reached.
        let mut factors: Vec<Option<(<A::F as Field>::Elem, Vec<usize>)>> = vec![None; dim];
        for k in 0..dim {
            if base.is_idempotent(basis[k]) {
                factors[k] = Some((f.one(), Vec::new()));
            }
        }
        for (gp, &g) in gens.iter().enumerate() {
            factors[pos[&g]] = Some((f.one(), vec![gp]));
        }
        loop {
            let mut progress = false;
            for w in 0..dim {
                let Some((cw, fw)) = factors[w].clone() else { continue };
                if fw.is_empty() {
                    continue;
                }
                for (gp, &g) in gens.iter().enumerate() {
                    let p = base.mul(g, basis[w]);
                    if let [(b, c)] = p.as_slice() {
                        let k = pos[b];
                        if factors[k].is_none() {
                            let mut word = vec![gp];
                            word.extend(&fw);
                            factors[k] = Some((f.div(&cw, c), word));
                            progress = true;
                        }
                    }
                }
            }
            if !progress {
                break;
            }
        }
        let mut out = Vec::with_capacity(dim);
        for (k, fk) in factors.into_iter().enumerate() {
            match fk {
                Some(x) => out.push(x),
                None => {
                    return Err(Error::Witness {
                        check: "corner factorisation",
                        witness: format!("basis element {} is not a product of generators", basis[k]),
                    })
                }
            }
        }
        let gens = gens.iter().map(|g| pos[g]).collect();
        Ok(Corner {
            base,
            vertices: vertices.to_vec(),
            vertex_pos,
            basis,
            pos,
            gens,
            factors: out,
        })
    }

    pub fn base(&self) -> &A {
        self.base
    }

    pub fn local(&self, ambient: usize) -> Option<usize> {
        self.pos.get(&ambient).copied()
    }

    pub fn local_vertex(&self, ambient: usize) -> Option<usize> {
        self.vertex_pos.get(&ambient).copied()
    }

    /// Corner basis index to ambient basis index.
    pub fn ambient(&self, k: usize) -> usize {
        self.basis[k]
    }
}

impl<A: FiniteAlgebra> FiniteAlgebra for Corner<'_, A> {
    type F = A::F;

    fn field(&self) -> &A::F {
        self.base.field()
    }
    fn dim(&self) -> usize {
        self.basis.len()
    }
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    fn idempotent(&self, v: usize) -> usize {
        self.pos[&self.base.idempotent(self.vertices[v])]
    }
    fn ends(&self, b: usize) -> (usize, usize) {
        let (s, t) = self.base.ends(self.basis[b]);
        (self.vertex_pos[&s], self.vertex_pos[&t])
    }
    fn mul(&self, a: usize, b: usize) -> SparseVec<<A::F as Field>::Elem> {
        let mut out: SparseVec<_> = self
            .base
            .mul(self.basis[a], self.basis[b])
            .into_iter()
            .map(|(i, x)| (self.pos[&i], x))
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }
    fn generators(&self) -> &[usize] {
        &self.gens
    }
    fn factor(&self, b: usize) -> (<A::F as Field>::Elem, Vec<usize>) {
        self.factors[b].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::realize;
    use crate::field::Rationals;
    use crate::quiver::dsl::parse;

    fn check_factorisation<A: FiniteAlgebra>(alg: &A) {
        let f = alg.field();
        for b in 0..alg.dim() {
            let (c, gens) = alg.factor(b);
            if gens.is_empty() {
                assert!(alg.is_idempotent(b));
                continue;
            }
            let mut acc = vec![(alg.generators()[gens[0]], c)];
            for &g in &gens[1..] {
                acc = alg.mul_vec(&acc, &[(alg.generators()[g], f.one())]);
            }
            assert_eq!(acc, vec![(b, f.one())], "factor of {b}");
        }
    }

    fn check_associative<A: FiniteAlgebra>(alg: &A) {
        let f = alg.field();
        for x in 0..alg.dim() {
            for y in 0..alg.dim() {
                for z in 0..alg.dim() {
                    let xy = alg.mul_vec(&[(x, f.one())], &[(y, f.one())]);
                    let yz = alg.mul_vec(&[(y, f.one())], &[(z, f.one())]);
                    assert_eq!(
                        alg.mul_vec(&xy, &[(z, f.one())]),
                        alg.mul_vec(&[(x, f.one())], &yz)
                    );
                }
            }
        }
    }

    #[test]
    fn derived_algebras_factor_and_associate() {
        let q = parse("vertices 1 2 3; arrow a: 1->2; arrow b: 2->3; rel a*b;").unwrap();
        let alg = realize(&q, &Rationals, 8).unwrap();
        check_factorisation(&alg);
        check_factorisation(&Opposite(&alg));
        let env = Enveloping::new(&alg);
        assert_eq!(env.dim(), 25);
        check_factorisation(&env);
        check_associative(&env);
        let corner = Corner::new(&alg, &[0, 2]).unwrap();
        assert_eq!(corner.dim(), 2);
        assert!(corner.generators().is_empty());
    }

    #[test]
    fn corner_through_a_path() {
        let q = parse("vertices 1 2 3; arrow a: 1->2; arrow b: 2->3;").unwrap();
        let alg = realize(&q, &Rationals, 8).unwrap();
        let corner = Corner::new(&alg, &[0, 2]).unwrap();
        assert_eq!(corner.dim(), 3);
        assert_eq!(corner.generators().len(), 1);
        check_factorisation(&corner);
        check_associative(&corner);
    }
}
