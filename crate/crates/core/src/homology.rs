//! Homological verdicts: the stratifying-ideal test for `AeA`, injective
//! dimensions of the regular module, selfinjectivity, finitistic-dimension
//! reporting and an Ext vanishing spot check.

use serde::Serialize;

use crate::algebra::{Enveloping, FiniteAlgebra, Opposite};
use crate::engine::PresentedAlgebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gentle::{find_full_relation_cycles, SkewGentleTriple};
use crate::linalg::{rank, Accumulator, Echelon, SparseVec};
use crate::module::Module;
use crate::morita::PeirceData;
use crate::resolution::{ext_dims, projective_dimension, resolve, syzygy, tor_dims, ProjDim};

pub const DEFAULT_TOR_DEGREE: usize = 4;
pub const DEFAULT_EXT_DEGREE: usize = 8;
/// Largest `dim A` for which the enveloping algebra is built.
pub const ENVELOPING_LIMIT: usize = 30;

type Elem<A> = <<A as FiniteAlgebra>::F as Field>::Elem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorReport {
    /// `dim Tor_0`, the dimension of the tensor product.
    pub tor0: usize,
    /// `dim Tor_n` for `n = 1..=n_max`.
    pub dims: Vec<usize>,
    /// Resolving either side gave the same dimensions.
    pub balanced: bool,
}

impl TorReport {
    pub fn vanishes(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }
}

/// `Tor^C_n(X, Y)` for a right `C`-module `X` (a left `Opposite(C)`-module)
/// and a left `C`-module `Y`, computed from a resolution of `X` and checked
/// against a resolution of `Y`.
fn tor_between<A: FiniteAlgebra>(
    corner: &A,
    x: &Module<Elem<A>>,
    y: &Module<Elem<A>>,
    n_max: usize,
) -> Result<TorReport> {
    let op = Opposite(corner);
    let rx = resolve(&op, x, n_max + 1, true);
    let from_x = tor_dims(&op, &rx, y, n_max)?;
    let ry = resolve(corner, y, n_max + 1, true);
    let from_y = tor_dims(corner, &ry, x, n_max)?;
    Ok(TorReport { tor0: from_x[0], dims: from_x[1..].to_vec(), balanced: from_x == from_y })
}

/// `Tor^C_n(M, N)` for `n = 1..=n_max`.
pub fn tor_over_c<F: Field>(pd: &PeirceData<'_, F>, n_max: usize) -> Result<TorReport> {
    let corner = pd.corner_c()?;
    let m = pd.right_c_module(&corner, &pd.m);
    let n = pd.left_c_module(&corner, &pd.n);
    tor_between(&corner, &m, &n, n_max)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratifyingVerdict {
    /// `dim Ae ⊗_{eAe} eA`, from an explicit quotient of the pair space.
    pub tensor_dim: usize,
    /// Rank of multiplication on the tensor product.
    pub multiplication_rank: usize,
    pub aea_dim: usize,
    /// `Tor_0` from the resolution, which must equal `tensor_dim`.
    pub tor0_agrees: bool,
    /// `dim Tor^{eAe}_n(Ae, eA)` for `n = 1..=n_max`.
    pub higher_tor: Vec<usize>,
    pub balanced: bool,
    pub stratifying: bool,
}

/// Decides whether `AeA` is a stratifying ideal: multiplication
/// `Ae ⊗_{eAe} eA -> AeA` is bijective and the higher Tor vanish.
pub fn stratifying_check<F: Field>(pd: &PeirceData<'_, F>, n_max: usize) -> Result<StratifyingVerdict> {
    let alg = pd.algebra;
    let f = alg.field();
    let basis = alg.basis();
    let corner = pd.corner_c()?;
    let ae = pd.ae();
    let ea = pd.ea();

    let mut pair_index = std::collections::HashMap::new();
    let mut pairs = Vec::new();
    for &x in &ae {
        for &y in &ea {
            if basis[x].target == basis[y].source {
                pair_index.insert((x, y), pairs.len());
                pairs.push((x, y));
            }
        }
    }
    let mut relations = Echelon::new(f, pairs.len());
    for &cl in corner.generators() {
        let c = corner.ambient(cl);
        let (s, t) = (basis[c].source, basis[c].target);
        for &x in ae.iter().filter(|&&x| basis[x].target == s) {
            let xc = alg.mul_basis(x, c);
            for &y in ea.iter().filter(|&&y| basis[y].source == t) {
                let mut acc = Accumulator::new();
                for (x2, k) in xc {
                    acc.add_term(f, pair_index[&(*x2, y)], k);
                }
                for (y2, k) in alg.mul_basis(c, y) {
                    acc.add_term(f, pair_index[&(x, *y2)], &f.neg(k));
                }
                let _ = relations.insert(&acc.finish(f));
            }
        }
    }
    let tensor_dim = pairs.len() - relations.rank();
    let products: Vec<SparseVec<F::Elem>> = pairs.iter().map(|&(x, y)| alg.mul_basis(x, y).to_vec()).collect();
    let multiplication_rank = rank(f, alg.dimension(), &products);
    let aea_dim = pd.ideal_aea().len();

    let ae_mod = pd.right_c_module(&corner, &ae);
    let ea_mod = pd.left_c_module(&corner, &ea);
    let tor = tor_between(&corner, &ae_mod, &ea_mod, n_max)?;
    let degree0 = tensor_dim == multiplication_rank && multiplication_rank == aea_dim;
    Ok(StratifyingVerdict {
        tensor_dim,
        multiplication_rank,
        aea_dim,
        tor0_agrees: tor.tor0 == tensor_dim,
        stratifying: degree0 && tor.vanishes() && tor.tor0 == tensor_dim,
        higher_tor: tor.dims,
        balanced: tor.balanced,
    })
}

/// `pd` of `AE_{22}A` as a left module over `A ⊗ A^op`.
pub fn bimodule_pd_bound<F: Field>(pd: &PeirceData<'_, F>, cap: usize) -> Result<ProjDim> {
    bimodule_pd_with_limit(pd, cap, ENVELOPING_LIMIT)
}

pub fn bimodule_pd_with_limit<F: Field>(pd: &PeirceData<'_, F>, cap: usize, limit: usize) -> Result<ProjDim> {
    let alg = pd.algebra;
    let d = alg.dimension();
    if d > limit {
        return Err(Error::SizeGuard { dim: d, limit });
    }
    let f = alg.field();
    let env = Enveloping::new(alg);
    let all: Vec<usize> = (0..d).collect();
    let regular = Module::on_subset(
        &env,
        &all,
        |x| env.vertex_of_pair(alg.basis()[x].source, alg.basis()[x].target),
        |g, x| {
            let (i, j) = env.pair(g);
            let ix = FiniteAlgebra::mul_vec(alg, &[(i, f.one())], &[(x, f.one())]);
            FiniteAlgebra::mul_vec(alg, &ix, &[(j, f.one())])
        },
    );
    let ideal = regular.submodule(f, pd.ideal_aea())?;
    Ok(projective_dimension(&env, &ideal, cap))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectiveDimensions {
    /// `id` of `A` as a left module.
    pub id_left: ProjDim,
    /// `id` of `A` as a right module.
    pub id_right: ProjDim,
    /// For each finite side, the largest `i` with `Ext^i(S, A) ≠ 0` over the
    /// simples equals the dimension found from the dual.
    pub duality_agrees: bool,
}

/// Largest `i <= upto` with `Ext^i(S_v, A) ≠ 0` for some simple `S_v`.
fn last_nonvanishing_ext<A: FiniteAlgebra>(alg: &A, upto: usize) -> Result<Option<usize>> {
    let reg = Module::regular(alg);
    let mut best = None;
    for v in 0..alg.vertex_count() {
        let s = Module::simple(alg, v);
        let res = resolve(alg, &s, upto + 1, true);
        let e = ext_dims(alg, &res, &reg, upto)?;
        if let Some(i) = e.iter().rposition(|&x| x != 0) {
            best = best.max(Some(i));
        }
    }
    Ok(best)
}

/// Injective dimensions of `_A A` and `A_A`, as projective dimensions of the
/// duals over the opposite algebra.
pub fn injective_dimension_of_regular<A: FiniteAlgebra>(alg: &A, cap: usize) -> Result<InjectiveDimensions> {
    let op = Opposite(alg);
    let id_left = projective_dimension(&op, &Module::dual_regular(alg), cap);
    let id_right = projective_dimension(alg, &Module::dual_regular(&op), cap);
    let mut duality_agrees = true;
    if let Some(d) = id_left.finite() {
        duality_agrees &= last_nonvanishing_ext(alg, d + 1)? == Some(d);
    }
    if let Some(d) = id_right.finite() {
        duality_agrees &= last_nonvanishing_ext(&op, d + 1)? == Some(d);
    }
    Ok(InjectiveDimensions { id_left, id_right, duality_agrees })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GorensteinVerdict {
    pub dims: InjectiveDimensions,
    pub gorenstein: bool,
}

pub fn gorenstein_check<A: FiniteAlgebra>(alg: &A, cap: usize) -> Result<GorensteinVerdict> {
    let dims = injective_dimension_of_regular(alg, cap)?;
    let gorenstein = dims.id_left.finite().is_some() && dims.id_right.finite().is_some();
    Ok(GorensteinVerdict { dims, gorenstein })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfinjectiveVerdict {
    /// `D(_A A)` is projective and its top meets every vertex once.
    pub direct: bool,
    /// Block by block: a component of `Q` with a special vertex must be a
    /// lone vertex, and one without must be a vertex or a full cycle of
    /// relations. Absent when no triple is given.
    pub combinatorial: Option<bool>,
    pub agree: bool,
}

/// The combinatorial criterion for a skew-gentle triple, applied to each
/// connected component of `Q`. A lone special vertex contributes `k × k`;
/// any other component meeting `Sp` is an indecomposable skew-gentle algebra
/// with special loops and hence not selfinjective.
pub fn selfinjective_by_combinatorics(triple: &SkewGentleTriple) -> bool {
    let q = &triple.base;
    let cycles = find_full_relation_cycles(q);
    let mut on_cycle = vec![false; q.arrows.len()];
    for c in &cycles {
        for &a in c {
            on_cycle[a] = true;
        }
    }
    q.connected_components().iter().all(|comp| {
        let arrows: Vec<usize> = (0..q.arrows.len()).filter(|&a| comp.contains(&q.arrows[a].source)).collect();
        if comp.iter().any(|&v| triple.is_special(v)) {
            return comp.len() == 1 && arrows.is_empty();
        }
        comp.iter().all(|&v| q.in_arrows(v).len() == 1 && q.out_arrows(v).len() == 1 || comp.len() == 1 && arrows.is_empty())
            && arrows.iter().all(|&a| on_cycle[a])
    })
}

pub fn selfinjective_check<A: FiniteAlgebra>(alg: &A, triple: Option<&SkewGentleTriple>) -> SelfinjectiveVerdict {
    let op = Opposite(alg);
    let dual = Module::dual_regular(alg);
    let cover = resolve(&op, &dual, 0, true);
    let mut tops = vec![0usize; alg.vertex_count()];
    if let Some(step) = cover.steps.first() {
        for &x in &step.summands {
            tops[x] += 1;
        }
    }
    let direct = cover.complete && tops.iter().all(|&c| c == 1);
    let combinatorial = triple.map(selfinjective_by_combinatorics);
    SelfinjectiveVerdict { direct, combinatorial, agree: combinatorial.is_none_or(|c| c == direct) }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FindimReport {
    /// `id_A(A)`, the finitistic dimension of a Gorenstein algebra.
    pub witness: usize,
    /// Largest finite projective dimension among the probed modules.
    pub empirical_max: usize,
    pub probed: usize,
    /// Probed modules whose resolution reached the cap.
    pub unbounded: usize,
    pub within_bound: bool,
}

/// Probes simples and the quotients `P_v / rad^j P_v`.
pub fn findim_report<A: FiniteAlgebra>(alg: &A, cap: usize) -> Result<FindimReport> {
    let g = gorenstein_check(alg, cap)?;
    let witness = match (g.dims.id_left, g.dims.id_right) {
        (ProjDim::Finite(l), ProjDim::Finite(r)) if g.gorenstein => l.max(r),
        _ => {
            return Err(Error::InvalidConfig(
                "the finitistic dimension report needs a Gorenstein algebra within the cap".into(),
            ))
        }
    };
    let f = alg.field();
    let mut modules = Vec::new();
    for v in 0..alg.vertex_count() {
        modules.push(Module::simple(alg, v));
        let (p, _) = Module::projective(alg, v);
        for j in 1.. {
            let rad = p.radical_power(f, j);
            if rad.is_empty() {
                break;
            }
            modules.push(p.quotient(f, &rad));
        }
    }
    let mut empirical_max = 0;
    let mut unbounded = 0;
    for m in &modules {
        match projective_dimension(alg, m, cap) {
            ProjDim::Finite(d) => empirical_max = empirical_max.max(d),
            ProjDim::AtLeast(_) => unbounded += 1,
        }
    }
    Ok(FindimReport { witness, empirical_max, probed: modules.len(), unbounded, within_bound: empirical_max <= witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtSpotCheck {
    /// `dim Ext^i(M, M ⊕ A)` for `i = 1..=k_max`.
    pub ext: Vec<usize>,
    pub projective: bool,
    /// All computed Ext vanish although `M` is not projective.
    pub flagged: bool,
}

pub fn ext_vanishing_spot_check<A: FiniteAlgebra>(alg: &A, m: &Module<Elem<A>>, k_max: usize) -> Result<ExtSpotCheck> {
    let res = resolve(alg, m, k_max + 1, true);
    let projective = res.len() <= 1 && res.complete;
    let target = m.direct_sum(&Module::regular(alg));
    let ext = ext_dims(alg, &res, &target, k_max)?[1..].to_vec();
    let flagged = !projective && ext.iter().all(|&e| e == 0);
    Ok(ExtSpotCheck { ext, projective, flagged })
}

/// Spot checks on the syzygies of all simples; returns the number flagged.
pub fn ext_sweep<A: FiniteAlgebra>(alg: &A, k_max: usize) -> Result<Vec<ExtSpotCheck>> {
    (0..alg.vertex_count())
        .map(|v| {
            let omega = syzygy(alg, &Module::simple(alg, v));
            ext_vanishing_spot_check(alg, &omega, k_max)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub stratifying: Option<StratifyingVerdict>,
    pub tor_dims: Option<TorReport>,
    pub bimodule_pd: Option<ProjDim>,
    pub id_left: ProjDim,
    pub id_right: ProjDim,
    pub duality_agrees: bool,
    pub gorenstein: bool,
    pub selfinjective: SelfinjectiveVerdict,
    pub findim_witness: Option<usize>,
    pub findim: Option<FindimReport>,
    pub flags: Vec<String>,
}

/// Which of the costlier checks [`homology_report_with`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomologyOptions {
    pub bimodule_pd: bool,
    pub findim: bool,
    /// Degree of the Ext spot checks on syzygies of simples; 0 disables them.
    pub ext_degree: usize,
}

impl HomologyOptions {
    pub fn full(ext_degree: usize) -> Self {
        HomologyOptions { bimodule_pd: true, findim: true, ext_degree }
    }

    pub fn light() -> Self {
        HomologyOptions { bimodule_pd: false, findim: false, ext_degree: 0 }
    }
}

/// Every homological check on a skew-gentle algebra. Checks that need the
/// Peirce data are skipped when `Sp = ∅`.
pub fn homology_report<F: Field>(
    alg: &PresentedAlgebra<F>,
    pd: Option<&PeirceData<'_, F>>,
    triple: &SkewGentleTriple,
    cap: usize,
    ext_degree: usize,
) -> Result<HomologyReport> {
    homology_report_with(alg, pd, triple, cap, HomologyOptions::full(ext_degree))
}

pub fn homology_report_with<F: Field>(
    alg: &PresentedAlgebra<F>,
    pd: Option<&PeirceData<'_, F>>,
    triple: &SkewGentleTriple,
    cap: usize,
    options: HomologyOptions,
) -> Result<HomologyReport> {
    let mut flags = Vec::new();
    let ext_degree = options.ext_degree;
    let (stratifying, tor, bimodule_pd) = match pd {
        Some(pd) => {
            let computed = if options.bimodule_pd { Some(bimodule_pd_bound(pd, cap)) } else { None };
            let bimodule_pd = match computed {
                None => None,
                Some(Ok(p)) => Some(p),
                Some(Err(Error::SizeGuard { dim, limit })) => {
                    flags.push(format!("bimodule pd skipped: dim A = {dim} exceeds {limit}"));
                    None
                }
                Some(Err(e)) => return Err(e),
            };
            (
                Some(stratifying_check(pd, DEFAULT_TOR_DEGREE)?),
                Some(tor_over_c(pd, DEFAULT_TOR_DEGREE)?),
                bimodule_pd,
            )
        }
        None => (None, None, None),
    };
    let g = gorenstein_check(alg, cap)?;
    let selfinjective = selfinjective_check(alg, Some(triple));
    let findim = if g.gorenstein && options.findim { Some(findim_report(alg, cap)?) } else { None };
    let sweep = if ext_degree > 0 { ext_sweep(alg, ext_degree)? } else { Vec::new() };
    for (v, check) in sweep.iter().enumerate() {
        if check.flagged {
            flags.push(format!("Ext vanishes up to degree {ext_degree} on the non-projective syzygy of S_{v}"));
        }
    }
    Ok(HomologyReport {
        stratifying,
        tor_dims: tor,
        bimodule_pd,
        id_left: g.dims.id_left,
        id_right: g.dims.id_right,
        duality_agrees: g.dims.duality_agrees,
        gorenstein: g.gorenstein,
        selfinjective,
        findim_witness: findim.as_ref().map(|r| r.witness),
        findim,
        flags,
    })
}
