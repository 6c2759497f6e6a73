//! Projective resolutions over a [`FiniteAlgebra`], with Ext and Tor read off
//! the Hom and tensor complexes.
//!
//! A projective `P = ⊕_k A e_{x_k}` has basis pairs `(k, b)` with `b` running
//! over the basis of `A e_{x_k}`. Each step of a resolution stores the image
//! of every summand generator `e_{x_k}` in the previous term.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{FiniteAlgebra, Opposite};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{kernel, rank, Accumulator, SparseVec, Subspace};
use crate::module::Module;

pub const DEFAULT_RESOLUTION_CAP: usize = 20;

type Elem<A> = <<A as FiniteAlgebra>::F as Field>::Elem;

/// Projective dimension, or a lower bound when the cap was reached first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ProjDim {
    Finite(usize),
    AtLeast(usize),
}

impl ProjDim {
    pub fn finite(self) -> Option<usize> {
        match self {
            ProjDim::Finite(n) => Some(n),
            ProjDim::AtLeast(_) => None,
        }
    }

    pub fn render(self) -> String {
        match self {
            ProjDim::Finite(n) => n.to_string(),
            ProjDim::AtLeast(n) => format!(">={n}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Step<E> {
    /// Vertex `x_k` of each summand `A e_{x_k}`.
    pub summands: Vec<usize>,
    /// Image of each summand generator, in coordinates of the previous term
    /// (of the resolved module for step 0).
    pub images: Vec<SparseVec<E>>,
    /// Basis of this term as `(summand, algebra basis index)`.
    pub basis: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct Resolution<E> {
    pub steps: Vec<Step<E>>,
    pub minimal: bool,
    /// True when the last kernel vanished, so the resolution is finite.
    pub complete: bool,
    /// Kernel of the last computed step.
    pub last_syzygy: Module<E>,
}

impl<E> Resolution<E> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Multiset of indecomposable projectives in each term, as vertex counts.
    pub fn multiplicities(&self, vertex_count: usize) -> Vec<Vec<usize>> {
        self.steps
            .iter()
            .map(|s| {
                let mut m = vec![0; vertex_count];
                for &x in &s.summands {
                    m[x] += 1;
                }
                m
            })
            .collect()
    }
}

/// Bases of the indecomposable projectives `A e_v` and positions within them.
struct Projectives {
    basis: Vec<Vec<usize>>,
    pos: Vec<HashMap<usize, usize>>,
}

impl Projectives {
    fn new<A: FiniteAlgebra + ?Sized>(alg: &A) -> Self {
        let basis: Vec<Vec<usize>> = (0..alg.vertex_count()).map(|v| alg.left_projective_basis(v)).collect();
        let pos = basis.iter().map(|b| b.iter().enumerate().map(|(i, &x)| (x, i)).collect()).collect();
        Projectives { basis, pos }
    }

    fn term_basis(&self, summands: &[usize]) -> (Vec<(usize, usize)>, Vec<usize>) {
        let mut basis = Vec::new();
        let mut offsets = Vec::with_capacity(summands.len());
        for (k, &x) in summands.iter().enumerate() {
            offsets.push(basis.len());
            basis.extend(self.basis[x].iter().map(|&b| (k, b)));
        }
        (basis, offsets)
    }
}

type Cover<E> = (Step<E>, Module<E>, Vec<SparseVec<E>>);

/// Covers `x` by the projective on the chosen generators. Returns the step,
/// the kernel as a module, and the kernel basis in coordinates of the new
/// term.
fn cover<A: FiniteAlgebra>(alg: &A, proj: &Projectives, x: &Module<Elem<A>>, generators: &[usize]) -> Cover<Elem<A>> {
    let f = alg.field();
    let summands: Vec<usize> = generators.iter().map(|&j| x.vertex[j]).collect();
    let images = generators.iter().map(|&j| vec![(j, f.one())]).collect();
    let (basis, offsets) = proj.term_basis(&summands);

    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); alg.vertex_count()];
    for (i, &(_, b)) in basis.iter().enumerate() {
        by_vertex[alg.ends(b).0].push(i);
    }
    let mut kernel_basis: Vec<SparseVec<Elem<A>>> = Vec::new();
    let mut kernel_vertex = Vec::new();
    for (v, idx) in by_vertex.iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        let imgs: Vec<_> = idx
            .iter()
            .map(|&i| {
                let (k, b) = basis[i];
                x.act(alg, b, &[(generators[k], f.one())])
            })
            .collect();
        for dep in kernel(f, x.dim(), &imgs) {
            let mut vec: SparseVec<_> = dep.into_iter().map(|(l, c)| (idx[l], c)).collect();
            vec.sort_by_key(|(i, _)| *i);
            kernel_basis.push(vec);
            kernel_vertex.push(v);
        }
    }

    let space = Subspace::spanned_by(f, basis.len(), kernel_basis.iter().cloned());
    debug_assert_eq!(space.dim(), kernel_basis.len());
    let mut actions = Vec::with_capacity(alg.generators().len());
    for &g in alg.generators() {
        let mut cols = Vec::with_capacity(kernel_basis.len());
        for vec in &kernel_basis {
            let mut acc = Accumulator::new();
            for (i, c) in vec {
                let (k, b) = basis[*i];
                if alg.ends(g).1 != alg.ends(b).0 {
                    continue;
                }
                for (b2, c2) in alg.mul(g, b) {
                    acc.add_term(f, offsets[k] + proj.pos[summands[k]][&b2], &f.mul(c, &c2));
                }
            }
            let img = acc.finish(f);
            cols.push(space.coordinates(&img).expect("kernel is a submodule"));
        }
        actions.push(cols);
    }
    let syzygy = Module { vertex: kernel_vertex, actions };
    (Step { summands, images, basis }, syzygy, kernel_basis)
}

/// Resolves `m` up to and including the term `P_max_len`, stopping early when
/// a kernel vanishes. A minimal resolution covers by the top at every step;
/// otherwise every basis vector is taken as a generator.
pub fn resolve<A: FiniteAlgebra>(alg: &A, m: &Module<Elem<A>>, max_len: usize, minimal: bool) -> Resolution<Elem<A>> {
    let f = alg.field();
    let proj = Projectives::new(alg);
    let mut steps: Vec<Step<Elem<A>>> = Vec::new();
    let mut x = m.clone();
    let mut prev_kernel: Option<Vec<SparseVec<Elem<A>>>> = None;
    for _ in 0..=max_len {
        if x.is_zero() {
            break;
        }
        let gens: Vec<usize> = if minimal { x.top(f) } else { (0..x.dim()).collect() };
        let (mut step, next, kb) = cover(alg, &proj, &x, &gens);
        if let Some(prev) = &prev_kernel {
            step.images = gens.iter().map(|&j| prev[j].clone()).collect();
        }
        steps.push(step);
        prev_kernel = Some(kb);
        x = next;
    }
    Resolution { steps, minimal, complete: x.is_zero(), last_syzygy: x }
}

/// Projective dimension from a minimal resolution with at most `cap + 1`
/// terms. The zero module has dimension 0 by convention.
pub fn projective_dimension<A: FiniteAlgebra>(alg: &A, m: &Module<Elem<A>>, cap: usize) -> ProjDim {
    let res = resolve(alg, m, cap, true);
    if !res.complete {
        ProjDim::AtLeast(cap + 1)
    } else {
        ProjDim::Finite(res.len().saturating_sub(1))
    }
}

/// The first syzygy, the kernel of a projective cover.
pub fn syzygy<A: FiniteAlgebra>(alg: &A, m: &Module<Elem<A>>) -> Module<Elem<A>> {
    if m.is_zero() {
        return m.clone();
    }
    resolve(alg, m, 0, true).last_syzygy
}

fn require_length<E>(res: &Resolution<E>, needed: usize) -> Result<()> {
    if res.complete || res.len() >= needed {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "resolution has {} terms, {needed} are needed",
            res.len()
        )))
    }
}

/// `e_{x_k} W` blocks for the summands of a term.
struct Blocks {
    offsets: Vec<usize>,
    dim: usize,
}

fn blocks<E>(step: Option<&Step<E>>, by_vertex: &[Vec<usize>]) -> Blocks {
    let mut offsets = Vec::new();
    let mut dim = 0;
    if let Some(step) = step {
        for &x in &step.summands {
            offsets.push(dim);
            dim += by_vertex[x].len();
        }
    }
    Blocks { offsets, dim }
}

/// Memoised action of algebra basis elements on basis vectors of a module.
struct ActionCache<'m, E> {
    module: &'m Module<E>,
    memo: HashMap<(usize, usize), SparseVec<E>>,
}

impl<'m, E: Clone + PartialEq> ActionCache<'m, E> {
    fn new(module: &'m Module<E>) -> Self {
        ActionCache { module, memo: HashMap::new() }
    }

    fn get<A: FiniteAlgebra<F: Field<Elem = E>>>(&mut self, alg: &A, b: usize, w: usize) -> &SparseVec<E> {
        let module = self.module;
        self.memo.entry((b, w)).or_insert_with(|| module.act(alg, b, &[(w, alg.field().one())]))
    }
}

/// `dim Ext^n(M, W)` for `n = 0..=upto`, from a resolution of `M`.
pub fn ext_dims<A: FiniteAlgebra>(
    alg: &A,
    res: &Resolution<Elem<A>>,
    w: &Module<Elem<A>>,
    upto: usize,
) -> Result<Vec<usize>> {
    require_length(res, upto + 2)?;
    let f = alg.field();
    let by_vertex = w.by_vertex(alg.vertex_count());
    let mut pos = vec![0; w.dim()];
    for list in &by_vertex {
        for (i, &j) in list.iter().enumerate() {
            pos[j] = i;
        }
    }
    let mut cache = ActionCache::new(w);
    let dims: Vec<Blocks> = (0..=upto + 1).map(|n| blocks(res.steps.get(n), &by_vertex)).collect();
    // rank of d^n : C^n -> C^{n+1}
    let mut ranks = Vec::with_capacity(upto + 1);
    for n in 0..=upto {
        let (Some(step), Some(next)) = (res.steps.get(n), res.steps.get(n + 1)) else {
            ranks.push(0);
            continue;
        };
        let mut cols: Vec<Accumulator<Elem<A>>> = (0..dims[n].dim).map(|_| Accumulator::new()).collect();
        for (k2, y) in next.images.iter().enumerate() {
            for (i, c) in y {
                let (k, b) = step.basis[*i];
                for &wv in &by_vertex[step.summands[k]] {
                    let col = dims[n].offsets[k] + pos[wv];
                    for (w2, c2) in cache.get(alg, b, wv).clone() {
                        cols[col].add_term(f, dims[n + 1].offsets[k2] + pos[w2], &f.mul(c, &c2));
                    }
                }
            }
        }
        let cols: Vec<_> = cols.into_iter().map(|a| a.finish(f)).collect();
        ranks.push(rank(f, dims[n + 1].dim, &cols));
    }
    Ok((0..=upto)
        .map(|n| dims[n].dim - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 })
        .collect())
}

/// `dim Tor_n(W, M)` for `n = 0..=upto`, where `W` is a right module given as
/// a left module over `Opposite(alg)` and `res` resolves the left module `M`.
pub fn tor_dims<A: FiniteAlgebra>(
    alg: &A,
    res: &Resolution<Elem<A>>,
    w: &Module<Elem<A>>,
    upto: usize,
) -> Result<Vec<usize>> {
    require_length(res, upto + 2)?;
    let f = alg.field();
    let op = Opposite(alg);
    let by_vertex = w.by_vertex(alg.vertex_count());
    let mut pos = vec![0; w.dim()];
    for list in &by_vertex {
        for (i, &j) in list.iter().enumerate() {
            pos[j] = i;
        }
    }
    let mut cache = ActionCache::new(w);
    let dims: Vec<Blocks> = (0..=upto + 1).map(|n| blocks(res.steps.get(n), &by_vertex)).collect();
    // ranks[n] = rank of d_n : C_n -> C_{n-1}, for n = 1..=upto+1
    let mut ranks = vec![0; upto + 2];
    for n in 1..=upto + 1 {
        let (Some(prev), Some(step)) = (res.steps.get(n - 1), res.steps.get(n)) else {
            continue;
        };
        let mut cols = Vec::with_capacity(dims[n].dim);
        for (k2, y) in step.images.iter().enumerate() {
            for &wv in &by_vertex[step.summands[k2]] {
                let mut acc = Accumulator::new();
                for (i, c) in y {
                    let (k, b) = prev.basis[*i];
                    for (w2, c2) in cache.get(&op, b, wv).clone() {
                        acc.add_term(f, dims[n - 1].offsets[k] + pos[w2], &f.mul(c, &c2));
                    }
                }
                cols.push(acc.finish(f));
            }
        }
        ranks[n] = rank(f, dims[n - 1].dim, &cols);
    }
    Ok((0..=upto).map(|n| dims[n].dim - ranks[n] - ranks[n + 1]).collect())
}

/// Checks that consecutive differentials compose to zero and, for a minimal
/// resolution, that every differential lands in the radical.
pub fn verify_resolution<A: FiniteAlgebra>(alg: &A, m: &Module<Elem<A>>, res: &Resolution<Elem<A>>) -> Result<()> {
    let f = alg.field();
    let proj = Projectives::new(alg);
    let witness = |s: String| Error::Witness { check: "resolution", witness: s };
    for n in 1..res.len() {
        let prev = &res.steps[n - 1];
        let step = &res.steps[n];
        if res.minimal
            && step
                .images
                .iter()
                .flatten()
                .any(|(i, _)| alg.is_idempotent(prev.basis[*i].1))
        {
            return Err(witness(format!("differential {n} is not radical")));
        }
        for (k2, y) in step.images.iter().enumerate() {
            let mut acc = Accumulator::new();
            for (i, c) in y {
                let (k, b) = prev.basis[*i];
                if n == 1 {
                    acc.axpy(f, c, &m.act(alg, b, &prev.images[k]));
                    continue;
                }
                let before = &res.steps[n - 2];
                let (_, offsets) = proj.term_basis(&before.summands);
                for (i2, c2) in &prev.images[k] {
                    let (k3, b3) = before.basis[*i2];
                    if alg.ends(b).1 != alg.ends(b3).0 {
                        continue;
                    }
                    for (b4, c4) in alg.mul(b, b3) {
                        let idx = offsets[k3] + proj.pos[before.summands[k3]][&b4];
                        acc.add_term(f, idx, &f.mul(c, &f.mul(c2, &c4)));
                    }
                }
            }
            if !acc.finish(f).is_empty() {
                return Err(witness(format!("d{} d{n} is nonzero on generator {k2}", n - 1)));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::realize;
    use crate::field::{PrimeField, Rationals};
    use crate::quiver::dsl::parse;

    const GENTLE: &str = "vertices 1 2 3 4;\narrow a: 1->2;\narrow b: 2->3;\narrow c: 3->4;\nrel a*b;\n";

    #[test]
    fn simples_over_the_chain_with_one_relation() {
        let alg = realize(&parse(GENTLE).unwrap(), &Rationals, 64).unwrap();
        let pds: Vec<_> = (0..4)
            .map(|v| projective_dimension(&alg, &Module::simple(&alg, v), 20))
            .collect();
        assert_eq!(pds, vec![ProjDim::Finite(0), ProjDim::Finite(1), ProjDim::Finite(2), ProjDim::Finite(1)]);
        for v in 0..4 {
            let s = Module::simple(&alg, v);
            let res = resolve(&alg, &s, 20, true);
            verify_resolution(&alg, &s, &res).unwrap();
            let (p, _) = Module::projective(&alg, v);
            assert_eq!(projective_dimension(&alg, &p, 20), ProjDim::Finite(0));
        }
    }

    #[test]
    fn ext_and_tor_do_not_depend_on_the_resolution() {
        for text in [GENTLE, "vertices 1 2;\narrow a: 1->2;\narrow b: 2->1;\nrel a*b;\nrel b*a;\n"] {
            let alg = realize(&parse(text).unwrap(), &PrimeField::new(3).unwrap(), 64).unwrap();
            let n = alg.vertex_count();
            let op = Opposite(&alg);
            let mut ms: Vec<Module<u32>> = (0..n).map(|v| Module::simple(&alg, v)).collect();
            ms.push(Module::regular(&alg));
            ms.push(syzygy(&alg, &Module::simple(&alg, n - 1)));
            for m in &ms {
                let min = resolve(&alg, m, 5, true);
                let big = resolve(&alg, m, 5, false);
                verify_resolution(&alg, m, &min).unwrap();
                verify_resolution(&alg, m, &big).unwrap();
                for w in &ms {
                    assert_eq!(ext_dims(&alg, &min, w, 3).unwrap(), ext_dims(&alg, &big, w, 3).unwrap());
                }
                for v in 0..n {
                    let right = Module::simple(&op, v);
                    let t_min = tor_dims(&alg, &min, &right, 3).unwrap();
                    assert_eq!(t_min, tor_dims(&alg, &big, &right, 3).unwrap());
                    let mult = min.multiplicities(n);
                    for (i, t) in t_min.iter().enumerate() {
                        assert_eq!(*t, mult.get(i).map_or(0, |m| m[v]));
                    }
                }
            }
        }
    }

    #[test]
    fn ext_of_simples_counts_summands() {
        let alg = realize(&parse(GENTLE).unwrap(), &Rationals, 64).unwrap();
        let s3 = Module::simple(&alg, 2);
        let res = resolve(&alg, &s3, 20, true);
        assert_eq!(res.multiplicities(4), vec![vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![1, 0, 0, 0]]);
        for v in 0..4 {
            let e = ext_dims(&alg, &res, &Module::simple(&alg, v), 3).unwrap();
            let expected: Vec<usize> = (0..4).map(|i| usize::from(i < 3 && [2, 1, 0][i] == v)).collect();
            assert_eq!(e, expected);
        }
        assert!(ext_dims(&alg, &resolve(&alg, &s3, 0, true), &s3, 2).is_err());
    }

    #[test]
    fn infinite_dimension_hits_the_cap() {
        let alg = realize(&parse("vertices 1;\narrow x: 1->1;\nrel x*x;\n").unwrap(), &Rationals, 64).unwrap();
        let s = Module::simple(&alg, 0);
        assert_eq!(projective_dimension(&alg, &s, 6), ProjDim::AtLeast(7));
        assert_eq!(syzygy(&alg, &s), s);
    }
}
