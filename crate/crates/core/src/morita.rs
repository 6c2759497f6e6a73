//! The Peirce decomposition of a skew-gentle algebra at the sum `e` of its
//! minus idempotents, and presentations of the corners
//!
//! ```text
//! A = | B  M |    B = (1-e)A(1-e)   M = (1-e)Ae
//!     | N  C |    N = eA(1-e)       C = eAe
//! ```

use serde::Serialize;

use crate::algebra::{Corner, Opposite};
use crate::engine::{realize, PresentedAlgebra, DEFAULT_DEGREE_CAP};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gentle::{check_gentle, split_relations, SkewGentleTriple};
use crate::linalg::{rank, Echelon, SparseVec, Subspace};
use crate::module::Module;
use crate::quiver::{Arrow, QuiverSpec, RelationExpr};
use crate::resolution::resolve;
use crate::split::{Probe, Sign, SplitQuiver, VertexKind};

fn witness(check: &'static str, witness: String) -> Error {
    Error::Witness { check, witness }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PeirceDims {
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "B")]
    pub b: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "C")]
    pub c: usize,
}

#[derive(Debug)]
pub struct PeirceData<'a, F: Field> {
    pub algebra: &'a PresentedAlgebra<F>,
    pub split: &'a SplitQuiver,
    /// Vertices of `Q^A` summed in `e`.
    pub minus: Vec<usize>,
    pub b: Vec<usize>,
    pub m: Vec<usize>,
    pub n: Vec<usize>,
    pub c: Vec<usize>,
    /// A basis of `f(M ⊗_C N)`, the span of all products `m n`.
    pub f_image: Vec<SparseVec<F::Elem>>,
}

/// Routes every basis word of `A` by whether its ends are minus vertices.
pub fn peirce<'a, F: Field>(alg: &'a PresentedAlgebra<F>, sq: &'a SplitQuiver) -> Result<PeirceData<'a, F>> {
    if sq.minus_idempotent_vertices.is_empty() {
        return Err(Error::InvalidConfig("no special vertices, so e = 0 and there is nothing to decompose".into()));
    }
    let (mut b, mut m, mut n, mut c) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (i, w) in alg.basis().iter().enumerate() {
        match (sq.is_minus(w.source), sq.is_minus(w.target)) {
            (false, false) => b.push(i),
            (false, true) => m.push(i),
            (true, false) => n.push(i),
            (true, true) => c.push(i),
        }
    }
    let f = alg.field();
    let products = m
        .iter()
        .flat_map(|&x| n.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| alg.basis()[x].target == alg.basis()[y].source)
        .map(|(x, y)| alg.mul_basis(x, y).to_vec())
        .filter(|v| !v.is_empty());
    let f_image = Subspace::spanned_by(f, alg.dimension(), products).basis().to_vec();
    Ok(PeirceData { algebra: alg, split: sq, minus: sq.minus_idempotent_vertices.clone(), b, m, n, c, f_image })
}

impl<'a, F: Field> PeirceData<'a, F> {
    pub fn dims(&self) -> PeirceDims {
        PeirceDims {
            a: self.algebra.dimension(),
            b: self.b.len(),
            m: self.m.len(),
            n: self.n.len(),
            c: self.c.len(),
        }
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    /// `C = eAe` as an algebra in its own right.
    pub fn corner_c(&self) -> Result<Corner<'a, PresentedAlgebra<F>>> {
        Corner::new(self.algebra, &self.minus)
    }

    /// A right `C`-module on the basis words of `A` ending at a minus vertex
    /// and lying in `subset`, as a left module over `Opposite(C)`.
    pub fn right_c_module(&self, corner: &Corner<'_, PresentedAlgebra<F>>, subset: &[usize]) -> Module<F::Elem> {
        let alg = self.algebra;
        Module::on_subset(
            &Opposite(corner),
            subset,
            |x| corner.local_vertex(alg.basis()[x].target).expect("ends at a minus vertex"),
            |g, x| right_mul(alg, x, corner.ambient(g)),
        )
    }

    /// A left `C`-module on the basis words of `A` starting at a minus
    /// vertex and lying in `subset`.
    pub fn left_c_module(&self, corner: &Corner<'_, PresentedAlgebra<F>>, subset: &[usize]) -> Module<F::Elem> {
        let alg = self.algebra;
        Module::on_subset(
            corner,
            subset,
            |x| corner.local_vertex(alg.basis()[x].source).expect("starts at a minus vertex"),
            |g, x| right_mul(alg, corner.ambient(g), x),
        )
    }

    /// Basis words of `Ae`, that is `M ∪ C`, in index order.
    pub fn ae(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.m.iter().chain(&self.c).copied().collect();
        v.sort_unstable();
        v
    }

    /// Basis words of `eA`, that is `N ∪ C`, in index order.
    pub fn ea(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.n.iter().chain(&self.c).copied().collect();
        v.sort_unstable();
        v
    }

    /// A vertex-homogeneous basis of the ideal `AeA`, from products
    /// `x e_v y` over basis words.
    pub fn ideal_aea(&self) -> Vec<SparseVec<F::Elem>> {
        let alg = self.algebra;
        let ae = self.ae();
        let ea = self.ea();
        let products = ae
            .iter()
            .flat_map(|&x| ea.iter().map(move |&y| (x, y)))
            .filter(|&(x, y)| alg.basis()[x].target == alg.basis()[y].source)
            .map(|(x, y)| alg.mul_basis(x, y).to_vec())
            .filter(|v| !v.is_empty());
        Subspace::spanned_by(alg.field(), alg.dimension(), products).basis().to_vec()
    }

    /// `M ⊕ N ⊕ C ⊕ f(M ⊗ N)`, the block form of `AE_{22}A`.
    pub fn recombined_ideal(&self) -> Vec<SparseVec<F::Elem>> {
        let f = self.field();
        let mut out: Vec<SparseVec<F::Elem>> =
            self.m.iter().chain(&self.n).chain(&self.c).map(|&i| vec![(i, f.one())]).collect();
        out.extend(self.f_image.iter().cloned());
        out
    }

    /// Structural invariants of the Morita context, checked exhaustively.
    pub fn compatibility(&self) -> Vec<Probe> {
        let alg = self.algebra;
        let f = self.field();
        let d = alg.dimension();
        let basis = alg.basis();
        let composable = |x: usize, y: usize| basis[x].target == basis[y].source;
        let mut probes = Vec::new();

        let dims = self.dims();
        probes.push(Probe {
            name: "peirce_identity",
            checked: 1,
            failures: if dims.a == dims.b + dims.m + dims.n + dims.c {
                Vec::new()
            } else {
                vec![format!("{dims:?}")]
            },
        });

        let mut closed = Probe { name: "blocks_closed", checked: 0, failures: Vec::new() };
        let blocks: [(&str, &[usize], &[usize], &[usize]); 6] = [
            ("B*B", &self.b, &self.b, &self.b),
            ("C*C", &self.c, &self.c, &self.c),
            ("B*M", &self.b, &self.m, &self.m),
            ("M*C", &self.m, &self.c, &self.m),
            ("C*N", &self.c, &self.n, &self.n),
            ("N*B", &self.n, &self.b, &self.n),
        ];
        for (label, left, right, into) in blocks {
            let mut inside = vec![false; d];
            for &i in into {
                inside[i] = true;
            }
            for &x in left {
                for &y in right {
                    if !composable(x, y) {
                        continue;
                    }
                    closed.checked += 1;
                    if alg.mul_basis(x, y).iter().any(|(i, _)| !inside[*i]) {
                        closed.failures.push(format!("{label}: {} * {}", alg.word_name(x), alg.word_name(y)));
                    }
                }
            }
        }
        probes.push(closed);

        let mut compat = Probe { name: "context_compatibility", checked: 0, failures: Vec::new() };
        for (outer, inner) in [(&self.m, &self.n), (&self.n, &self.m)] {
            for &x in outer.iter() {
                for &y in inner.iter() {
                    if !composable(x, y) {
                        continue;
                    }
                    let xy = alg.mul_basis(x, y).to_vec();
                    for &z in outer.iter() {
                        if !composable(y, z) {
                            continue;
                        }
                        compat.checked += 1;
                        let left = alg.mul_vec(&xy, &[(z, f.one())]);
                        let right = alg.mul_vec(&[(x, f.one())], alg.mul_basis(y, z));
                        if left != right {
                            compat.failures.push(format!(
                                "{} {} {}",
                                alg.word_name(x),
                                alg.word_name(y),
                                alg.word_name(z)
                            ));
                        }
                    }
                }
            }
        }
        probes.push(compat);

        let mut g_rad = Probe { name: "g_in_radical", checked: 0, failures: Vec::new() };
        for &x in &self.n {
            for &y in &self.m {
                if !composable(x, y) {
                    continue;
                }
                g_rad.checked += 1;
                if alg.mul_basis(x, y).iter().any(|(i, _)| basis[*i].is_trivial()) {
                    g_rad.failures.push(format!("{} * {}", alg.word_name(x), alg.word_name(y)));
                }
            }
        }
        probes.push(g_rad);

        let mut nil = Probe { name: "f_image_nilpotent", checked: 1, failures: Vec::new() };
        let mut power = self.f_image.clone();
        let mut steps = 0;
        while !power.is_empty() {
            steps += 1;
            if steps > d + 1 {
                nil.failures.push("powers of f(M ⊗ N) do not vanish".into());
                break;
            }
            let next = power
                .iter()
                .flat_map(|x| self.f_image.iter().map(move |y| (x, y)))
                .map(|(x, y)| alg.mul_vec(x, y))
                .filter(|v| !v.is_empty());
            power = Subspace::spanned_by(f, d, next).basis().to_vec();
        }
        probes.push(nil);

        let mut ideal = Probe { name: "recombined_ideal_is_aea", checked: 1, failures: Vec::new() };
        let aea = self.ideal_aea();
        let rec = self.recombined_ideal();
        let joint: Vec<_> = aea.iter().chain(&rec).cloned().collect();
        let (ra, rr, rj) = (aea.len(), rank(f, d, &rec), rank(f, d, &joint));
        if !(ra == rr && rr == rj) {
            ideal.failures.push(format!("dim AeA = {ra}, dim M+N+C+f(M⊗N) = {rr}, joint {rj}"));
        }
        probes.push(ideal);
        probes
    }
}

fn right_mul<F: Field>(alg: &PresentedAlgebra<F>, x: usize, y: usize) -> SparseVec<F::Elem> {
    if alg.basis()[x].target != alg.basis()[y].source {
        return Vec::new();
    }
    alg.mul_basis(x, y).to_vec()
}

/// A quiver with relations together with the images of its vertices and
/// arrows in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerPresentation {
    pub quiver: QuiverSpec,
    /// Vertex of `Q^A` each presentation vertex maps to.
    pub vertex_image: Vec<usize>,
    /// Path of `Q^A` each presentation arrow maps to.
    pub arrow_image: Vec<Vec<usize>>,
}

impl CornerPresentation {
    /// Image in `A` of every basis word of the realised presentation.
    fn images<F: Field>(&self, alg: &PresentedAlgebra<F>, pres: &PresentedAlgebra<F>) -> Vec<SparseVec<F::Elem>> {
        let f = alg.field();
        pres.basis()
            .iter()
            .map(|w| {
                if w.is_trivial() {
                    return vec![(self.vertex_image[w.source], f.one())];
                }
                let path: Vec<usize> = w.arrows.iter().flat_map(|&a| self.arrow_image[a].iter().copied()).collect();
                alg.normal_form(&path)
            })
            .collect()
    }

    /// Realises the presentation and checks that sending paths to paths is
    /// an algebra isomorphism onto a subquotient of `A`: the span of
    /// `target` modulo the span of `modulo`.
    pub fn verify_iso<F: Field>(
        &self,
        alg: &PresentedAlgebra<F>,
        target_dim: usize,
        modulo: &[SparseVec<F::Elem>],
        check: &'static str,
    ) -> Result<PresentedAlgebra<F>> {
        let f = alg.field();
        let pres = realize(&self.quiver, f, DEFAULT_DEGREE_CAP)?;
        let mut ideal = Echelon::new(f, alg.dimension());
        for v in modulo {
            let _ = ideal.insert(v);
        }
        let images: Vec<_> = self.images(alg, &pres).iter().map(|v| ideal.reduce(v)).collect();
        let r = rank(f, alg.dimension(), &images);
        if pres.dimension() != target_dim || r != target_dim {
            return Err(witness(
                check,
                format!("presentation has dimension {}, image rank {r}, target dimension {target_dim}", pres.dimension()),
            ));
        }
        for u in 0..pres.dimension() {
            for v in 0..pres.dimension() {
                if pres.basis()[u].target != pres.basis()[v].source {
                    continue;
                }
                let lhs = ideal.reduce(&alg.mul_vec(&images[u], &images[v]));
                let mut rhs = crate::linalg::Accumulator::new();
                for (w, c) in pres.mul_basis(u, v) {
                    rhs.axpy(f, c, &images[*w]);
                }
                if lhs != rhs.finish(f) {
                    return Err(witness(
                        check,
                        format!("structure constants differ on {} * {}", pres.word_name(u), pres.word_name(v)),
                    ));
                }
            }
        }
        Ok(pres)
    }
}

/// One indecomposable factor of `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CFactor {
    /// `k` or `A_n`.
    pub label: String,
    /// Vertices of `Q^A` in the factor, in path order.
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPresentation {
    pub presentation: CornerPresentation,
    pub factors: Vec<CFactor>,
    /// Vertex indices of `Q^C` in each factor.
    pub factor_vertices: Vec<Vec<usize>>,
}

/// Nonzero paths of `Q^A` between minus vertices with every interior vertex
/// ordinary.
fn minus_to_minus_paths<F: Field>(alg: &PresentedAlgebra<F>, sq: &SplitQuiver) -> Vec<Vec<usize>> {
    let q = &sq.spec;
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..q.arrows.len())
        .filter(|&a| sq.is_minus(q.arrows[a].source))
        .map(|a| vec![a])
        .collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in frontier {
            if alg.normal_form(&p).is_empty() {
                continue;
            }
            let t = q.arrows[*p.last().unwrap()].target;
            match sq.kind(t) {
                VertexKind::Minus => out.push(p),
                VertexKind::Ordinary => {
                    for b in q.out_arrows(t) {
                        let mut e = p.clone();
                        e.push(b);
                        next.push(e);
                    }
                }
                VertexKind::Plus => {}
            }
        }
        frontier = next;
    }
    out
}

/// `Q^C` and the classification of the factors of `C`.
pub fn present_c<F: Field>(pd: &PeirceData<'_, F>) -> Result<CPresentation> {
    let alg = pd.algebra;
    let sq = pd.split;
    let q = &sq.spec;
    let mut quiver = QuiverSpec::default();
    let mut local = vec![usize::MAX; q.vertices.len()];
    for &v in &pd.minus {
        local[v] = quiver.vertices.len();
        quiver.vertices.push(q.vertices[v].clone());
    }
    let mut arrow_image = Vec::new();
    for p in minus_to_minus_paths(alg, sq) {
        let mut name = p.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join("_x_");
        while quiver.arrow_index(&name).is_some() {
            name.push('_');
        }
        quiver.arrows.push(Arrow {
            name,
            source: local[q.arrows[p[0]].source],
            target: local[q.arrows[*p.last().unwrap()].target],
        });
        arrow_image.push(p);
    }
    let presentation = CornerPresentation { quiver, vertex_image: pd.minus.clone(), arrow_image };
    presentation.verify_iso(alg, pd.c.len(), &[], "C presentation")?;

    let qc = &presentation.quiver;
    let n = qc.vertices.len();
    let mut comp = vec![usize::MAX; n];
    let mut factor_vertices = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = factor_vertices.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for a in &qc.arrows {
                for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                    if x == v && comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                    }
                }
            }
        }
        factor_vertices.push(members);
    }
    let mut factors = Vec::new();
    for members in &mut factor_vertices {
        let arrows: Vec<&Arrow> = qc.arrows.iter().filter(|a| members.contains(&a.source)).collect();
        let outdeg = |v: usize| arrows.iter().filter(|a| a.source == v).count();
        let indeg = |v: usize| arrows.iter().filter(|a| a.target == v).count();
        let linear = arrows.len() + 1 == members.len() && members.iter().all(|&v| outdeg(v) <= 1 && indeg(v) <= 1);
        if !linear {
            return Err(witness(
                "C classification",
                format!(
                    "factor on {:?} is not a linearly oriented A_n",
                    members.iter().map(|&v| &qc.vertices[v]).collect::<Vec<_>>()
                ),
            ));
        }
        let mut order = Vec::with_capacity(members.len());
        let mut cur = members.iter().copied().find(|&v| indeg(v) == 0).expect("a path has a source");
        loop {
            order.push(cur);
            match arrows.iter().find(|a| a.source == cur) {
                Some(a) => cur = a.target,
                None => break,
            }
        }
        *members = order;
        factors.push(CFactor {
            label: if members.len() == 1 { "k".into() } else { format!("A_{}", members.len()) },
            vertices: members.iter().map(|&v| qc.vertices[v].clone()).collect(),
        });
    }
    Ok(CPresentation { presentation, factors, factor_vertices })
}

fn b_sign(triple: &SkewGentleTriple, v: usize) -> Sign {
    if triple.is_special(v) {
        Sign::Plus
    } else {
        Sign::Unsplit
    }
}

/// The lift of an arrow of `Q` with both ends in `Q^B`.
fn b_lift(sq: &SplitQuiver, triple: &SkewGentleTriple, a: usize) -> usize {
    let arrow = &triple.base.arrows[a];
    sq.lift_arrow(a, (b_sign(triple, arrow.source), b_sign(triple, arrow.target)))
        .expect("every arrow has a lift inside B")
}

fn b_vertex(sq: &SplitQuiver, triple: &SkewGentleTriple, v: usize) -> usize {
    sq.lift_vertex(v, b_sign(triple, v)).expect("every vertex has a lift inside B")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPresentation {
    pub presentation: CornerPresentation,
    /// `(Q, I^{or})`, the gentle pair `B` is isomorphic to.
    pub ordinary_pair: QuiverSpec,
    pub ordinary_pair_gentle: bool,
}

/// `(Q^B, I^B)`, verified against the corner `B`, against `A(Q, I^{or})`,
/// and with `(Q, I^{or})` checked to be gentle.
pub fn present_b<F: Field>(pd: &PeirceData<'_, F>, triple: &SkewGentleTriple) -> Result<BPresentation> {
    let alg = pd.algebra;
    let sq = pd.split;
    let q = &triple.base;
    let mut quiver = QuiverSpec::default();
    let vertex_image: Vec<usize> = (0..q.vertices.len()).map(|v| b_vertex(sq, triple, v)).collect();
    for &v in &vertex_image {
        quiver.vertices.push(sq.spec.vertices[v].clone());
    }
    let mut arrow_image = Vec::new();
    for (a, arrow) in q.arrows.iter().enumerate() {
        let lift = b_lift(sq, triple, a);
        quiver.arrows.push(Arrow { name: sq.spec.arrows[lift].name.clone(), source: arrow.source, target: arrow.target });
        arrow_image.push(vec![lift]);
    }
    let (ordinary, _) = split_relations(triple);
    quiver.relations = ordinary.clone();
    let presentation = CornerPresentation { quiver, vertex_image, arrow_image };
    let pres = presentation.verify_iso(alg, pd.b.len(), &[], "B presentation")?;

    let mut ordinary_pair = q.with_relations(ordinary);
    ordinary_pair.special.clear();
    let or_alg = realize(&ordinary_pair, alg.field(), DEFAULT_DEGREE_CAP)?;
    if or_alg.dimension() != pres.dimension() {
        return Err(witness(
            "B presentation",
            format!("A(Q^B, I^B) has dimension {} but A(Q, I^or) has {}", pres.dimension(), or_alg.dimension()),
        ));
    }
    let ordinary_pair_gentle = check_gentle(&ordinary_pair)?.is_gentle;
    Ok(BPresentation { presentation, ordinary_pair, ordinary_pair_gentle })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BimodulePart {
    /// Generating arrows of `Q^A` for this summand.
    pub arrows: Vec<String>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BimoduleDecomposition {
    pub m_parts: Vec<BimodulePart>,
    pub n_parts: Vec<BimodulePart>,
    /// The parts of `M` meet trivially and fill `M`.
    pub m_direct: bool,
    pub n_direct: bool,
}

/// Splits `M = ⊕_p B(Σα)C` and `N = ⊕_q C(Σβ)B` along the factors of `C`.
pub fn decompose_bimodules<F: Field>(pd: &PeirceData<'_, F>, c: &CPresentation) -> BimoduleDecomposition {
    let alg = pd.algebra;
    let sq = pd.split;
    let q = &sq.spec;
    let f = alg.field();
    let d = alg.dimension();
    let factor_of = |v: usize| -> Option<usize> {
        let local = pd.minus.iter().position(|&m| m == v)?;
        c.factor_vertices.iter().position(|fv| fv.contains(&local))
    };
    let generate = |arrows: &[usize], left: &[usize], right: &[usize]| -> Vec<SparseVec<F::Elem>> {
        let sigma: SparseVec<F::Elem> = {
            let mut s: SparseVec<F::Elem> = arrows
                .iter()
                .map(|&a| alg.arrow_index(a).map(|i| (i, f.one())))
                .collect::<Option<Vec<_>>>()
                .unwrap_or_default();
            s.sort_by_key(|(i, _)| *i);
            s
        };
        let products = left.iter().flat_map(|&x| {
            let xs = alg.mul_vec(&[(x, f.one())], &sigma);
            right.iter().map(move |&y| alg.mul_vec(&xs, &[(y, f.one())])).collect::<Vec<_>>()
        });
        Subspace::spanned_by(f, d, products.filter(|v| !v.is_empty())).basis().to_vec()
    };
    let mut m_parts = Vec::new();
    let mut n_parts = Vec::new();
    let mut m_all = Vec::new();
    let mut n_all = Vec::new();
    for p in 0..c.factor_vertices.len() {
        let m_arrows: Vec<usize> = (0..q.arrows.len())
            .filter(|&a| !sq.is_minus(q.arrows[a].source) && factor_of(q.arrows[a].target) == Some(p))
            .collect();
        let n_arrows: Vec<usize> = (0..q.arrows.len())
            .filter(|&a| factor_of(q.arrows[a].source) == Some(p) && !sq.is_minus(q.arrows[a].target))
            .collect();
        let mp = generate(&m_arrows, &pd.b, &pd.c);
        let np = generate(&n_arrows, &pd.c, &pd.b);
        m_parts.push(BimodulePart { arrows: m_arrows.iter().map(|&a| q.arrows[a].name.clone()).collect(), dim: mp.len() });
        n_parts.push(BimodulePart { arrows: n_arrows.iter().map(|&a| q.arrows[a].name.clone()).collect(), dim: np.len() });
        m_all.extend(mp);
        n_all.extend(np);
    }
    let m_direct = m_all.len() == pd.m.len() && rank(f, d, &m_all) == pd.m.len();
    let n_direct = n_all.len() == pd.n.len() && rank(f, d, &n_all) == pd.n.len();
    BimoduleDecomposition { m_parts, n_parts, m_direct, n_direct }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectivityVerdict {
    pub m_projective: bool,
    pub n_projective: bool,
    pub witness: Option<String>,
}

/// Whether `M_C` and `_C N` are projective, by checking that a minimal
/// projective cover over `C` has zero kernel.
pub fn check_one_sided_projectivity<F: Field>(pd: &PeirceData<'_, F>) -> Result<ProjectivityVerdict> {
    let corner = pd.corner_c()?;
    let m = pd.right_c_module(&corner, &pd.m);
    let n = pd.left_c_module(&corner, &pd.n);
    let rm = resolve(&Opposite(&corner), &m, 0, true);
    let rn = resolve(&corner, &n, 0, true);
    let m_projective = rm.complete;
    let n_projective = rn.complete;
    let witness = match (m_projective, n_projective) {
        (true, true) => None,
        _ => Some(format!(
            "syzygy dimensions: M {}, N {}",
            rm.last_syzygy.dim(),
            rn.last_syzygy.dim()
        )),
    };
    Ok(ProjectivityVerdict { m_projective, n_projective, witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientVerdict {
    pub quotient_dim: usize,
    pub base_dim: usize,
    pub iso: bool,
    /// `f(M ⊗ N)` equals the ideal of `B` generated by the lifted relations
    /// through special vertices.
    pub f_image_generated: bool,
    pub witness: Option<String>,
}

/// Checks `A / AE_{22}A ≅ A(Q, I)` by sending `e_i` and each arrow to its
/// lift inside `B`.
pub fn quotient_iso_check<F: Field>(pd: &PeirceData<'_, F>, triple: &SkewGentleTriple) -> Result<QuotientVerdict> {
    let alg = pd.algebra;
    let sq = pd.split;
    let f = alg.field();
    let d = alg.dimension();
    let q = &triple.base;
    let mut base = q.clone();
    base.special.clear();
    let ideal = pd.recombined_ideal();
    let ideal_dim = rank(f, d, &ideal);
    let presentation = CornerPresentation {
        quiver: base,
        vertex_image: (0..q.vertices.len()).map(|v| b_vertex(sq, triple, v)).collect(),
        arrow_image: (0..q.arrows.len()).map(|a| vec![b_lift(sq, triple, a)]).collect(),
    };
    let (iso, base_dim, witness_text) = match presentation.verify_iso(alg, d - ideal_dim, &ideal, "quotient") {
        Ok(pres) => (true, pres.dimension(), None),
        Err(Error::Witness { witness, .. }) => {
            let base_dim = realize(&presentation.quiver, f, DEFAULT_DEGREE_CAP)?.dimension();
            (false, base_dim, Some(witness))
        }
        Err(e) => return Err(e),
    };

    let (_, special) = split_relations(triple);
    let gens: Vec<SparseVec<F::Elem>> = special
        .iter()
        .map(|r| {
            let (a, b) = r.as_quadratic_monomial().expect("triples have monomial relations");
            let (j, i, k) = (q.arrows[a].source, q.arrows[a].target, q.arrows[b].target);
            let la = sq.lift_arrow(a, (b_sign(triple, j), Sign::Plus)).expect("lift exists");
            let lb = sq.lift_arrow(b, (Sign::Plus, b_sign(triple, k))).expect("lift exists");
            debug_assert!(triple.is_special(i));
            alg.normal_form(&[la, lb])
        })
        .collect();
    let generated: Vec<SparseVec<F::Elem>> = gens
        .iter()
        .flat_map(|g| {
            pd.b.iter().flat_map(move |&x| {
                let xg = alg.mul_vec(&[(x, f.one())], g);
                pd.b.iter().map(move |&y| alg.mul_vec(&xg, &[(y, f.one())])).collect::<Vec<_>>()
            })
        })
        .filter(|v| !v.is_empty())
        .collect();
    let joint: Vec<_> = generated.iter().chain(&pd.f_image).cloned().collect();
    let rg = rank(f, d, &generated);
    let f_image_generated = rg == pd.f_image.len() && rank(f, d, &joint) == rg;
    Ok(QuotientVerdict { quotient_dim: d - ideal_dim, base_dim, iso, f_image_generated, witness: witness_text })
}

/// Relation of `I^B` for a relation of `I^{or}`, as lifted arrows of `Q^A`.
pub fn lift_ordinary_relation(sq: &SplitQuiver, triple: &SkewGentleTriple, r: &RelationExpr) -> Vec<usize> {
    r.terms[0].path.iter().map(|&a| b_lift(sq, triple, a)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoritaVerdicts {
    #[serde(rename = "B_iso")]
    pub b_iso: bool,
    #[serde(rename = "C_iso")]
    pub c_iso: bool,
    #[serde(rename = "M_proj")]
    pub m_proj: bool,
    #[serde(rename = "N_proj")]
    pub n_proj: bool,
    pub quotient_iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoritaReport {
    pub dims: PeirceDims,
    #[serde(rename = "C_factors")]
    pub c_factors: Vec<String>,
    pub verdicts: MoritaVerdicts,
    pub bimodules: BimoduleDecomposition,
    pub probes: Vec<Probe>,
    pub witnesses: Vec<String>,
}

impl MoritaReport {
    pub fn all_hold(&self) -> bool {
        let v = &self.verdicts;
        v.b_iso
            && v.c_iso
            && v.m_proj
            && v.n_proj
            && v.quotient_iso
            && self.bimodules.m_direct
            && self.bimodules.n_direct
            && self.probes.iter().all(|p| p.failures.is_empty())
    }
}

/// Runs every check of this module on one triple.
pub fn morita_report<F: Field>(pd: &PeirceData<'_, F>, triple: &SkewGentleTriple) -> Result<MoritaReport> {
    let mut witnesses = Vec::new();
    let mut note = |r: &Error| witnesses.push(r.to_string());
    let c = present_c(pd);
    let b = present_b(pd, triple);
    if let Err(e) = &c {
        note(e);
    }
    let b_iso = match &b {
        Ok(b) => b.ordinary_pair_gentle,
        Err(e) => {
            note(e);
            false
        }
    };
    let proj = check_one_sided_projectivity(pd)?;
    if let Some(w) = &proj.witness {
        witnesses.push(w.clone());
    }
    let quot = quotient_iso_check(pd, triple)?;
    if let Some(w) = &quot.witness {
        witnesses.push(w.clone());
    }
    if !quot.f_image_generated {
        witnesses.push("f(M ⊗ N) differs from the ideal generated by the lifted relations".into());
    }
    let bimodules = match &c {
        Ok(c) => decompose_bimodules(pd, c),
        Err(_) => BimoduleDecomposition { m_parts: Vec::new(), n_parts: Vec::new(), m_direct: false, n_direct: false },
    };
    Ok(MoritaReport {
        dims: pd.dims(),
        c_factors: c.as_ref().map(|c| c.factors.iter().map(|f| f.label.clone()).collect()).unwrap_or_default(),
        verdicts: MoritaVerdicts {
            b_iso,
            c_iso: c.is_ok(),
            m_proj: proj.m_projective,
            n_proj: proj.n_projective,
            quotient_iso: quot.iso && quot.f_image_generated,
        },
        bimodules,
        probes: pd.compatibility(),
        witnesses,
    })
}
