//! Finite-dimensional left modules, stored as the action of each radical
//! generator on a vertex-graded basis.
//!
//! A module does not own its algebra. The same data can be read over any
//! algebra with the same generators, which is how a left `C`-module doubles
//! as a left `Opposite(Opposite(C))`-module.

use std::collections::HashMap;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Accumulator, Echelon, SparseVec, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module<E> {
    /// Vertex `v` with `e_v x = x`, for each basis vector `x`.
    pub vertex: Vec<usize>,
    /// `actions[g][j]` is generator `g` applied to basis vector `j`.
    pub actions: Vec<Vec<SparseVec<E>>>,
}

impl<E: Clone + PartialEq> Module<E> {
    pub fn dim(&self) -> usize {
        self.vertex.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vertex.is_empty()
    }

    pub fn zero(generator_count: usize) -> Self {
        Module { vertex: Vec::new(), actions: vec![Vec::new(); generator_count] }
    }

    /// Basis vectors grouped by vertex.
    pub fn by_vertex(&self, vertex_count: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); vertex_count];
        for (j, &v) in self.vertex.iter().enumerate() {
            out[v].push(j);
        }
        out
    }

    pub fn dimension_vector(&self, vertex_count: usize) -> Vec<usize> {
        self.by_vertex(vertex_count).iter().map(Vec::len).collect()
    }

    /// Builds a module on `dim` basis vectors from an action callback taking
    /// a generator position and a basis index.
    pub fn from_action<A, G>(alg: &A, vertex: Vec<usize>, mut act: G) -> Self
    where
        A: FiniteAlgebra<F: Field<Elem = E>>,
        G: FnMut(usize, usize) -> SparseVec<E>,
    {
        let actions = (0..alg.generators().len())
            .map(|g| (0..vertex.len()).map(|j| act(g, j)).collect())
            .collect();
        Module { vertex, actions }
    }

    pub fn simple<A: FiniteAlgebra<F: Field<Elem = E>>>(alg: &A, v: usize) -> Self {
        Module::from_action(alg, vec![v], |_, _| Vec::new())
    }

    /// The indecomposable projective `A e_v`, together with the algebra basis
    /// index of each of its basis vectors.
    pub fn projective<A: FiniteAlgebra<F: Field<Elem = E>>>(alg: &A, v: usize) -> (Self, Vec<usize>) {
        let basis = alg.left_projective_basis(v);
        let m = Module::on_subset(alg, &basis, |b| alg.ends(b).0, |g, b| alg.mul(g, b));
        (m, basis)
    }

    /// The left regular module.
    pub fn regular<A: FiniteAlgebra<F: Field<Elem = E>>>(alg: &A) -> Self {
        let basis: Vec<usize> = (0..alg.dim()).collect();
        Module::on_subset(alg, &basis, |b| alg.ends(b).0, |g, b| alg.mul(g, b))
    }

    /// A module whose basis is a subset of some ambient basis, closed under
    /// `act(generator, element)`. Panics if the action leaves the subset.
    pub fn on_subset<A, V, G>(alg: &A, subset: &[usize], vertex_of: V, mut act: G) -> Self
    where
        A: FiniteAlgebra<F: Field<Elem = E>>,
        V: Fn(usize) -> usize,
        G: FnMut(usize, usize) -> SparseVec<E>,
    {
        let pos: HashMap<usize, usize> = subset.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let gens = alg.generators().to_vec();
        let vertex = subset.iter().map(|&b| vertex_of(b)).collect();
        Module::from_action(alg, vertex, |g, j| {
            let mut out: SparseVec<E> = act(gens[g], subset[j])
                .into_iter()
                .map(|(i, x)| (*pos.get(&i).expect("action leaves the subset"), x))
                .collect();
            out.sort_by_key(|(i, _)| *i);
            out
        })
    }

    /// The dual `D(_A A)` of the left regular module. It is a right module,
    /// returned as a left module over `Opposite(alg)`: the dual basis vector
    /// `b*` sits at `s(b)` and `b* . g = sum_x (g x)_b x*`.
    pub fn dual_regular<A: FiniteAlgebra<F: Field<Elem = E>>>(alg: &A) -> Self {
        let d = alg.dim();
        let gens = alg.generators().to_vec();
        let mut actions = vec![vec![Vec::new(); d]; gens.len()];
        for (gp, &g) in gens.iter().enumerate() {
            for x in 0..d {
                if alg.ends(g).1 != alg.ends(x).0 {
                    continue;
                }
                for (b, c) in alg.mul(g, x) {
                    actions[gp][b].push((x, c));
                }
            }
            for col in &mut actions[gp] {
                col.sort_by_key(|(i, _)| *i);
            }
        }
        Module { vertex: (0..d).map(|b| alg.ends(b).0).collect(), actions }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let shift = self.dim();
        let vertex = self.vertex.iter().chain(&other.vertex).copied().collect();
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| {
                let mut cols = a.clone();
                cols.extend(b.iter().map(|col| col.iter().map(|(i, x)| (i + shift, x.clone())).collect()));
                cols
            })
            .collect();
        Module { vertex, actions }
    }

    /// Generator `g` applied to a vector.
    pub fn act_gen<F: Field<Elem = E>>(&self, f: &F, g: usize, x: &[(usize, E)]) -> SparseVec<E> {
        let mut acc = Accumulator::new();
        for (j, c) in x {
            acc.axpy(f, c, &self.actions[g][*j]);
        }
        acc.finish(f)
    }

    /// Basis element `b` of `alg` applied to a vector.
    pub fn act<A: FiniteAlgebra<F: Field<Elem = E>>>(&self, alg: &A, b: usize, x: &[(usize, E)]) -> SparseVec<E> {
        let f = alg.field();
        if alg.is_idempotent(b) {
            let (v, _) = alg.ends(b);
            return x.iter().filter(|(j, _)| self.vertex[*j] == v).cloned().collect();
        }
        let (c, word) = alg.factor(b);
        let mut y: SparseVec<E> = x.to_vec();
        for &g in word.iter().rev() {
            y = self.act_gen(f, g, &y);
            if y.is_empty() {
                return y;
            }
        }
        crate::linalg::scale(f, &c, &y)
    }

    /// Checks that the generator actions respect vertices and define a
    /// representation of `alg`: `g (b x) = (g b) x` for every generator `g`,
    /// basis element `b` and basis vector `x`.
    pub fn validate<A: FiniteAlgebra<F: Field<Elem = E>>>(&self, alg: &A) -> Result<()> {
        let f = alg.field();
        let gens = alg.generators();
        if self.actions.len() != gens.len() {
            return Err(Error::Witness {
                check: "module",
                witness: format!("{} action matrices for {} generators", self.actions.len(), gens.len()),
            });
        }
        for (gp, &g) in gens.iter().enumerate() {
            let (s, t) = alg.ends(g);
            for j in 0..self.dim() {
                let img = &self.actions[gp][j];
                let bad = if self.vertex[j] != t {
                    !img.is_empty()
                } else {
                    img.iter().any(|(i, _)| self.vertex[*i] != s)
                };
                if bad {
                    return Err(Error::Witness {
                        check: "module",
                        witness: format!("generator {gp} does not respect vertices at basis vector {j}"),
                    });
                }
            }
        }
        for (gp, &g) in gens.iter().enumerate() {
            for b in 0..alg.dim() {
                if alg.ends(g).1 != alg.ends(b).0 {
                    continue;
                }
                let gb = alg.mul(g, b);
                for j in 0..self.dim() {
                    let x = [(j, f.one())];
                    let lhs = self.act_gen(f, gp, &self.act(alg, b, &x));
                    let mut acc = Accumulator::new();
                    for (k, c) in &gb {
                        acc.axpy(f, c, &self.act(alg, *k, &x));
                    }
                    if lhs != acc.finish(f) {
                        return Err(Error::Witness {
                            check: "module",
                            witness: format!("generator {gp} times basis element {b} acts inconsistently on {j}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Spanning set of `rad M`, the images of all generators.
    pub fn radical_span(&self) -> Vec<SparseVec<E>> {
        self.actions.iter().flatten().filter(|v| !v.is_empty()).cloned().collect()
    }

    /// Basis vectors whose classes form a basis of the top `M / rad M`.
    pub fn top<F: Field<Elem = E>>(&self, f: &F) -> Vec<usize> {
        let mut e = Echelon::new(f, self.dim());
        for v in self.radical_span() {
            let _ = e.insert(&v);
        }
        (0..self.dim()).filter(|&j| e.insert_if_independent(&[(j, f.one())])).collect()
    }

    /// A spanning set of `rad^j M`.
    pub fn radical_power<F: Field<Elem = E>>(&self, f: &F, j: usize) -> Vec<SparseVec<E>> {
        let mut layer: Vec<SparseVec<E>> = (0..self.dim()).map(|i| vec![(i, f.one())]).collect();
        for _ in 0..j {
            let next = (0..self.actions.len())
                .flat_map(|g| layer.iter().map(move |v| (g, v)))
                .map(|(g, v)| self.act_gen(f, g, v))
                .filter(|v| !v.is_empty());
            layer = Subspace::spanned_by(f, self.dim(), next).basis().to_vec();
        }
        layer
    }

    /// The submodule with the given basis. Each vector must be supported on
    /// a single vertex and the span must be stable under the generators.
    pub fn submodule<F: Field<Elem = E>>(&self, f: &F, basis: Vec<SparseVec<E>>) -> Result<Self> {
        let space = Subspace::spanned_by(f, self.dim(), basis.iter().cloned());
        if space.dim() != basis.len() {
            return Err(Error::Witness { check: "submodule", witness: "basis is linearly dependent".into() });
        }
        let mut vertex = Vec::with_capacity(basis.len());
        for v in &basis {
            let vs = v.first().map(|(i, _)| self.vertex[*i]);
            match vs {
                Some(x) if v.iter().all(|(i, _)| self.vertex[*i] == x) => vertex.push(x),
                _ => {
                    return Err(Error::Witness {
                        check: "submodule",
                        witness: "basis vector is zero or not vertex-homogeneous".into(),
                    })
                }
            }
        }
        let mut actions = Vec::with_capacity(self.actions.len());
        for g in 0..self.actions.len() {
            let mut cols = Vec::with_capacity(basis.len());
            for v in &basis {
                let img = self.act_gen(f, g, v);
                let c = space.coordinates(&img).ok_or_else(|| Error::Witness {
                    check: "submodule",
                    witness: format!("span is not stable under generator {g}"),
                })?;
                cols.push(c);
            }
            actions.push(cols);
        }
        Ok(Module { vertex, actions })
    }

    /// `M / U` for a submodule `U` given by a spanning set. The quotient basis
    /// is the set of basis vectors of `M` that are not pivots of `U`.
    pub fn quotient<F: Field<Elem = E>>(&self, f: &F, sub: &[SparseVec<E>]) -> Self {
        let mut e = Echelon::new(f, self.dim());
        for v in sub {
            let _ = e.insert(v);
        }
        let keep: Vec<usize> = (0..self.dim()).filter(|&j| !e.is_pivot(j)).collect();
        let mut pos = vec![usize::MAX; self.dim()];
        for (k, &j) in keep.iter().enumerate() {
            pos[j] = k;
        }
        let vertex = keep.iter().map(|&j| self.vertex[j]).collect();
        let actions = self
            .actions
            .iter()
            .map(|cols| {
                keep.iter()
                    .map(|&j| e.reduce(&cols[j]).into_iter().map(|(i, x)| (pos[i], x)).collect())
                    .collect()
            })
            .collect();
        Module { vertex, actions }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Opposite;
    use crate::engine::realize;
    use crate::field::{PrimeField, Rationals};
    use crate::quiver::dsl::parse;

    const GENTLE: &str = "vertices 1 2 3 4;\narrow a: 1->2;\narrow b: 2->3;\narrow c: 3->4;\nrel a*b;\n";

    #[test]
    fn standard_modules_validate() {
        let alg = realize(&parse(GENTLE).unwrap(), &Rationals, 64).unwrap();
        let reg = Module::regular(&alg);
        reg.validate(&alg).unwrap();
        assert_eq!(reg.dim(), 8);
        for v in 0..4 {
            let (p, basis) = Module::projective(&alg, v);
            p.validate(&alg).unwrap();
            assert_eq!(p.dim(), basis.len());
            Module::simple(&alg, v).validate(&alg).unwrap();
        }
        let d = Module::dual_regular(&alg);
        d.validate(&Opposite(&alg)).unwrap();
        assert!(d.validate(&alg).is_err());
    }

    #[test]
    fn tops_and_quotients() {
        let alg = realize(&parse(GENTLE).unwrap(), &PrimeField::new(2).unwrap(), 64).unwrap();
        let f = alg.field().clone();
        let (p2, _) = Module::projective(&alg, 1);
        assert_eq!(p2.dim(), 2);
        assert_eq!(p2.top(&f).len(), 1);
        let rad = p2.radical_power(&f, 1);
        let q = p2.quotient(&f, &rad);
        assert_eq!(q.dim(), 1);
        q.validate(&alg).unwrap();
        let reg = Module::regular(&alg);
        assert_eq!(reg.top(&f).len(), 4);
        assert_eq!(reg.radical_power(&f, 2).len(), 1);
        assert!(reg.radical_power(&f, 3).is_empty());
        let rad_reg = reg.radical_power(&f, 1);
        let sub = reg.submodule(&f, rad_reg.clone()).unwrap();
        sub.validate(&alg).unwrap();
        assert_eq!(sub.dim(), 4);
        assert_eq!(reg.quotient(&f, &rad_reg).dim(), 4);
        assert!(reg.submodule(&f, vec![vec![(4, f.one())]]).is_ok());
        assert!(reg.submodule(&f, vec![vec![(3, f.one())]]).is_err());
    }

    #[test]
    fn bad_actions_are_rejected() {
        let alg = realize(&parse("vertices 1 2;\narrow a: 1->2;\n").unwrap(), &Rationals, 64).unwrap();
        let m = Module { vertex: vec![0, 0], actions: vec![vec![vec![(1, Rationals.one())], Vec::new()]] };
        assert!(m.validate(&alg).is_err());
        let ok = Module { vertex: vec![1, 0], actions: vec![vec![vec![(1, Rationals.one())], Vec::new()]] };
        ok.validate(&alg).unwrap();
    }
}
