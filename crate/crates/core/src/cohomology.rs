//! Integral cohomology of the groups assembled from Γ₂(p).
//!
//! Four machines cover every parabolic intersection:
//!
//! * `free_h1` — for a free group F on matrices, crossed homomorphisms
//!   give `Z¹ ≅ M^rank` and `H¹ = coker` of the principal-cocycle map
//!   `v ↦ (ρ(g_i)v − v)_i`, read off a Smith form.
//! * `nilmanifold_cohomology` — the central extension
//!   `1 → Z → G → Z² → 1` with Euler number e, assembled from the Gysin
//!   sequence with `d₂ = multiplication by e`.
//! * `mapping_torus_cohomology` — `Zⁿ ⋊_φ Z`, degree k given by
//!   `ker(Λ^k(φ*) − I) ⊕ coker(Λ^{k−1}(φ*) − I)` on the exterior algebra
//!   of the dual.
//! * `semidirect_free_assembly` — `(fiber) ⋊ F` with F free: the
//!   spectral sequence of the extension is two columns wide and
//!   collapses, so `H^i(G) = H⁰(F, H^i(fiber)) ⊕ H¹(F, H^{i−1}(fiber))`.
//!
//! Action conventions are fixed once: the abelian fiber `E = Z²` of the
//! SL3 parabolics carries the transpose action of Γ₂(p), H¹(fiber) the
//! dual (inverse-transpose) of the fiber action, and H^q of a
//! free-abelian fiber the q-th exterior power of the H¹ action. The
//! `conventions_*` tests pin these choices.
//!
//! The collapse determines associated graded pieces, not group
//! extensions: a degree whose two pieces could extend nontrivially
//! (nonzero Ext from the invariant part into the H¹ part) is recorded in
//! `extension_ambiguous`, and the direct sum is reported.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::congruence::{self, FreeMatrixGroup};
use crate::linalg::{self, FinAb, IntMatrix};
use crate::orders::PrimeLevel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    /// actions.len() must equal the rank of the acting free group.
    DimensionMismatch {
        expected: usize,
        got: usize,
    },
    /// Euler number of the nilmanifold extension must be positive.
    BadEulerNumber,
    /// Mapping-torus monodromy must be invertible over Z.
    NotInvertible,
    /// Fiber degrees must be contiguous from 0 with trivial Z in degree 0.
    BadFiber(&'static str),
    Congruence(congruence::CongruenceError),
}

impl fmt::Display for CohomologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyError::DimensionMismatch { expected, got } => {
                write!(
                    f,
                    "module has {got} actions, acting group has rank {expected}"
                )
            }
            CohomologyError::BadEulerNumber => write!(f, "Euler number must be >= 1"),
            CohomologyError::NotInvertible => write!(f, "monodromy must have determinant ±1"),
            CohomologyError::BadFiber(msg) => write!(f, "bad fiber data: {msg}"),
            CohomologyError::Congruence(e) => write!(f, "{e}"),
        }
    }
}

impl From<congruence::CongruenceError> for CohomologyError {
    fn from(e: congruence::CongruenceError) -> Self {
        CohomologyError::Congruence(e)
    }
}

/// A Γ₂(p)-module presented by one invertible matrix per free generator.
/// `modulus` zero means coefficients Z, a positive modulus q means the
/// same matrices acting on (Z/q)^dim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixModule {
    dim: usize,
    actions: Vec<IntMatrix>,
    modulus: BigInt,
}

impl MatrixModule {
    pub fn new(actions: Vec<IntMatrix>, modulus: BigInt) -> Self {
        let dim = actions.first().map_or(0, IntMatrix::rows);
        for a in &actions {
            assert_eq!(
                (a.rows(), a.cols()),
                (dim, dim),
                "actions must be square, equal size"
            );
            debug_assert!(a.det().magnitude().is_one(), "actions must be unimodular");
        }
        assert!(!modulus.is_negative());
        MatrixModule {
            dim,
            actions,
            modulus,
        }
    }

    /// Trivial module Z^dim (or (Z/q)^dim) with `count` identity actions.
    pub fn trivial(count: usize, dim: usize, modulus: BigInt) -> Self {
        MatrixModule::new(vec![IntMatrix::identity(dim); count], modulus)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.actions
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Contragredient module: each action becomes inverse-transpose.
    pub fn dual(&self) -> Self {
        let actions = self
            .actions
            .iter()
            .map(|a| a.inverse_unimodular().transpose())
            .collect();
        MatrixModule {
            dim: self.dim,
            actions,
            modulus: self.modulus.clone(),
        }
    }

    pub fn exterior_power(&self, q: usize) -> Self {
        let actions: Vec<IntMatrix> = self
            .actions
            .iter()
            .map(|a| linalg::exterior_power(a, q).expect("q <= dim"))
            .collect();
        let dim = actions.first().map_or(0, IntMatrix::rows);
        MatrixModule {
            dim,
            actions,
            modulus: self.modulus.clone(),
        }
    }

    /// Block-diagonal direct sum; moduli must agree.
    pub fn direct_sum(&self, other: &MatrixModule) -> Self {
        assert_eq!(self.modulus, other.modulus, "direct sum needs equal moduli");
        assert_eq!(self.actions.len(), other.actions.len());
        let dim = self.dim + other.dim;
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| {
                IntMatrix::from_fn(dim, dim, |r, c| {
                    if r < self.dim && c < self.dim {
                        a.at(r, c).clone()
                    } else if r >= self.dim && c >= self.dim {
                        b.at(r - self.dim, c - self.dim).clone()
                    } else {
                        BigInt::zero()
                    }
                })
            })
            .collect();
        MatrixModule {
            dim,
            actions,
            modulus: self.modulus.clone(),
        }
    }

    /// Same actions over Z/q.
    pub fn reduce_mod(&self, q: BigInt) -> Self {
        assert!(q.is_positive());
        MatrixModule {
            dim: self.dim,
            actions: self.actions.clone(),
            modulus: q,
        }
    }

    /// The group underlying the module, forgetting the action.
    pub fn underlying_group(&self) -> FinAb {
        if self.modulus.is_zero() {
            FinAb::free(self.dim)
        } else {
            FinAb::new(0, vec![self.modulus.clone(); self.dim])
        }
    }

    /// Stacked principal-cocycle matrix `(ρ(g_i) − I)_i`, the joint
    /// presentation of both invariants and H¹.
    fn cocycle_stack(&self) -> IntMatrix {
        let id = IntMatrix::identity(self.dim);
        let mut stack = IntMatrix::zeros(0, self.dim);
        for a in &self.actions {
            stack = stack.vstack(&a.sub(&id));
        }
        stack
    }
}

/// Degree-indexed cohomology of one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedCohomology {
    pub label: String,
    pub p: u64,
    pub groups: Vec<FinAb>,
    /// Degrees where the reported direct sum is only the associated
    /// graded of the collapse filtration: a nontrivial extension of the
    /// invariant part by the H¹ part is possible there.
    pub extension_ambiguous: Vec<usize>,
}

impl GradedCohomology {
    fn new(label: String, p: u64, groups: Vec<FinAb>, extension_ambiguous: Vec<usize>) -> Self {
        assert_eq!(groups[0], FinAb::free(1), "H^0 of a connected group is Z");
        GradedCohomology {
            label,
            p,
            groups,
            extension_ambiguous,
        }
    }

    pub fn free_ranks(&self) -> Vec<usize> {
        self.groups.iter().map(FinAb::free_rank).collect()
    }

    /// Dimensions over F_q by universal coefficients:
    /// `dim H^i(F_q) = rank H^i + t_q(H^i) + t_q(H^{i+1})` where t_q
    /// counts invariant factors divisible by q. `q = 0` gives the free
    /// ranks (dimensions over Q).
    pub fn field_dims(&self, q: u64) -> Vec<usize> {
        if q == 0 {
            return self.free_ranks();
        }
        let qq = BigInt::from(q);
        let t = |i: usize| -> usize {
            self.groups.get(i).map_or(0, |g| {
                g.torsion().iter().filter(|f| (*f % &qq).is_zero()).count()
            })
        };
        (0..self.groups.len())
            .map(|i| self.groups[i].free_rank() + t(i) + t(i + 1))
            .collect()
    }
}

/// H¹ of a free group with matrix coefficients: the cokernel of the
/// principal-cocycle map `M → M^rank`. For torsion coefficients Z/q the
/// computation runs over Z with a `q·I` block adjoined, so one exact
/// code path serves both.
pub fn free_h1(g: &FreeMatrixGroup, m: &MatrixModule) -> Result<FinAb, CohomologyError> {
    if m.actions.len() != g.rank {
        return Err(CohomologyError::DimensionMismatch {
            expected: g.rank,
            got: m.actions.len(),
        });
    }
    if m.dim == 0 {
        return Ok(FinAb::zero());
    }
    let stack = m.cocycle_stack();
    let h1 = if m.modulus.is_zero() {
        linalg::cokernel(&stack)
    } else {
        let block = IntMatrix::scaled_identity(stack.rows(), &m.modulus);
        linalg::cokernel(&stack.hstack(&block))
    };
    #[cfg(debug_assertions)]
    if m.modulus.is_zero() {
        // free-rank identity: (rank − 1)·dim + rank of invariants
        let inv = linalg::invariant_subgroup(&m.actions)
            .expect("validated above")
            .0;
        debug_assert_eq!(h1.free_rank(), (g.rank - 1) * m.dim + inv);
    }
    Ok(h1)
}

/// H⁰, the invariants of the module. Over Z this is free of the joint
/// kernel rank; over Z/q it is the solution lattice of `Sv ≡ 0 (mod q)`
/// modulo `qZ^dim`, computed through two integer kernels.
pub fn module_invariants(m: &MatrixModule) -> FinAb {
    if m.dim == 0 {
        return FinAb::zero();
    }
    if m.actions.is_empty() {
        return m.underlying_group();
    }
    if m.modulus.is_zero() {
        let (rank, _) = linalg::invariant_subgroup(&m.actions).expect("square actions");
        return FinAb::free(rank);
    }
    let stack = m.cocycle_stack();
    // lattice L = { v : Sv ≡ 0 mod q }, as the projection of
    // ker [S | qI] to the first dim coordinates
    let aug = stack.hstack(&IntMatrix::scaled_identity(stack.rows(), &m.modulus));
    let ker = linalg::kernel_basis(&aug);
    let l = IntMatrix::from_fn(m.dim, ker.cols(), |r, c| ker.at(r, c).clone());
    // invariants = L / qZ^dim = Z^k / { x : Lx ≡ 0 mod q }
    let aug2 = l.hstack(&IntMatrix::scaled_identity(m.dim, &m.modulus));
    let ker2 = linalg::kernel_basis(&aug2);
    let relations = IntMatrix::from_fn(l.cols(), ker2.cols(), |r, c| ker2.at(r, c).clone());
    let inv = linalg::cokernel(&relations);
    debug_assert_eq!(inv.free_rank(), 0, "mod-q invariants are torsion");
    inv
}

/// Cohomology of the nilmanifold group `1 → Z → G → Z² → 1` with Euler
/// number e, assembled from its Gysin-type exact sequence: H¹ gains the
/// kernel of d₂ = e, H² the cokernel. For e = p this is the Borel
/// intersection `B ∩ Γ(p)` and the unipotent group U of the Sp4 story.
pub fn nilmanifold_cohomology(e: u64) -> Result<GradedCohomology, CohomologyError> {
    if e == 0 {
        return Err(CohomologyError::BadEulerNumber);
    }
    let d2 = IntMatrix::from_fn(1, 1, |_, _| BigInt::from(e));
    let h1 = FinAb::direct_sum(&[FinAb::free(2), FinAb::free(linalg::kernel_rank(&d2))]);
    let h2 = FinAb::direct_sum(&[FinAb::free(2), linalg::cokernel(&d2)]);
    let groups = vec![FinAb::free(1), h1, h2, FinAb::free(1)];
    Ok(GradedCohomology::new(
        format!("nilmanifold(e={e})"),
        e,
        groups,
        Vec::new(),
    ))
}

/// Cohomology of the mapping-torus group `Zⁿ ⋊_φ Z`:
/// `H^k = ker(Λ^k(φ*) − I) ⊕ coker(Λ^{k−1}(φ*) − I)` with φ* the dual
/// monodromy, degrees 0..=n+1.
pub fn mapping_torus_cohomology(phi: &IntMatrix) -> Result<GradedCohomology, CohomologyError> {
    if !phi.is_square() || !phi.det().magnitude().is_one() {
        return Err(CohomologyError::NotInvertible);
    }
    let n = phi.rows();
    let phi_star = phi.inverse_unimodular().transpose();
    let lambda: Vec<IntMatrix> = (0..=n)
        .map(|k| linalg::exterior_power(&phi_star, k).expect("k <= n"))
        .collect();
    let mut groups = Vec::with_capacity(n + 2);
    for k in 0..=n + 1 {
        let mut parts = Vec::new();
        if k <= n {
            let fixed = lambda[k].sub(&IntMatrix::identity(lambda[k].rows()));
            parts.push(FinAb::free(linalg::kernel_rank(&fixed)));
        }
        if k >= 1 && k - 1 <= n {
            let moved = lambda[k - 1].sub(&IntMatrix::identity(lambda[k - 1].rows()));
            parts.push(linalg::cokernel(&moved));
        }
        groups.push(FinAb::direct_sum(&parts));
    }
    Ok(GradedCohomology::new(
        format!("mapping torus (n={n})"),
        0,
        groups,
        Vec::new(),
    ))
}

/// Is Ext(quotient, sub) nonzero for f.g. abelian groups? Nonzero Ext is
/// what makes the collapse filtration extension-ambiguous.
fn ext_nonzero(quotient: &FinAb, sub: &FinAb) -> bool {
    quotient
        .torsion()
        .iter()
        .any(|n| sub.free_rank() > 0 || sub.torsion().iter().any(|t| !n.gcd(t).is_one()))
}

/// Cohomology of `(fiber) ⋊ F` with F free of rank = base.rank. Each
/// fiber degree is a formal direct sum of matrix modules (so mixed
/// free/torsion coefficients like `M* ⊕ Z/p` stay exact);
/// `H^i = H⁰(F, fiber[i]) ⊕ H¹(F, fiber[i−1])`.
pub fn semidirect_free_assembly(
    base: &FreeMatrixGroup,
    fiber: &[Vec<MatrixModule>],
    label: String,
) -> Result<GradedCohomology, CohomologyError> {
    let Some(first) = fiber.first() else {
        return Err(CohomologyError::BadFiber("fiber degrees are empty"));
    };
    let trivial_line = first.len() == 1
        && first[0].dim == 1
        && first[0].modulus.is_zero()
        && first[0].actions.iter().all(IntMatrix::is_identity);
    if !trivial_line {
        return Err(CohomologyError::BadFiber(
            "degree 0 must be the trivial module Z",
        ));
    }
    let top = fiber.len(); // the free base adds one to the fiber's top degree
    let mut groups = Vec::with_capacity(top + 1);
    let mut ambiguous = Vec::new();
    for i in 0..=top {
        let mut invariant_parts = Vec::new();
        if let Some(modules) = fiber.get(i) {
            for m in modules {
                invariant_parts.push(module_invariants(m));
            }
        }
        let mut h1_parts = Vec::new();
        if i >= 1 {
            if let Some(modules) = fiber.get(i - 1) {
                for m in modules {
                    h1_parts.push(free_h1(base, m)?);
                }
            }
        }
        let h0 = FinAb::direct_sum(&invariant_parts);
        let h1 = FinAb::direct_sum(&h1_parts);
        if ext_nonzero(&h0, &h1) {
            ambiguous.push(i);
        }
        groups.push(FinAb::direct_sum(&[h0, h1]));
    }
    Ok(GradedCohomology::new(label, base.p, groups, ambiguous))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlParabolic {
    Borel,
    P1,
    P2,
}

impl fmt::Display for SlParabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlParabolic::Borel => write!(f, "B"),
            SlParabolic::P1 => write!(f, "P1"),
            SlParabolic::P2 => write!(f, "P2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpParabolic {
    G0,
    G1,
    G2,
}

impl fmt::Display for SpParabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpParabolic::G0 => write!(f, "G0"),
            SpParabolic::G1 => write!(f, "G1"),
            SpParabolic::G2 => write!(f, "G2"),
        }
    }
}

/// The natural 2-dimensional module M of Γ₂(p): the dual of the
/// transpose action the parabolic fiber E carries.
pub fn module_m(g: &FreeMatrixGroup) -> MatrixModule {
    fiber_e_module(g).dual()
}

/// The dual module M*.
pub fn module_m_star(g: &FreeMatrixGroup) -> MatrixModule {
    module_m(g).dual()
}

/// The fiber E = Z² of the SL3 parabolics with its transpose action.
pub fn fiber_e_module(g: &FreeMatrixGroup) -> MatrixModule {
    MatrixModule::new(
        g.generators.iter().map(IntMatrix::transpose).collect(),
        BigInt::zero(),
    )
}

fn trivial_z(g: &FreeMatrixGroup) -> MatrixModule {
    MatrixModule::trivial(g.rank, 1, BigInt::zero())
}

/// Fiber degrees of a free-abelian fiber Z^n whose H¹ carries `h1`:
/// degree q gets Λ^q(h1).
fn torus_fiber(g: &FreeMatrixGroup, h1: &MatrixModule, n: usize) -> Vec<Vec<MatrixModule>> {
    let mut fiber = vec![vec![trivial_z(g)]];
    for q in 1..=n {
        fiber.push(vec![h1.exterior_power(q)]);
    }
    fiber
}

/// Full cohomology of `B ∩ Γ(p)`, `P1 ∩ Γ(p)` or `P2 ∩ Γ(p)`:
/// the Borel goes through the nilmanifold extension with e = p, the
/// parabolics through the two-column collapse with fiber a torus whose
/// H¹ is M (for P1) or M* (for P2).
pub fn sl3_parabolic_cohomology(
    p: &PrimeLevel,
    which: SlParabolic,
) -> Result<GradedCohomology, CohomologyError> {
    let label = format!("{which} ∩ Γ({p})");
    if which == SlParabolic::Borel {
        let mut table = nilmanifold_cohomology(p.get())?;
        table.label = label;
        table.p = p.get();
        return Ok(table);
    }
    let g = congruence_generators(p)?;
    let h1_module = match which {
        SlParabolic::P1 => module_m(&g),
        SlParabolic::P2 => module_m_star(&g),
        SlParabolic::Borel => unreachable!(),
    };
    let fiber = torus_fiber(&g, &h1_module, 2);
    let mut table = semidirect_free_assembly(&g, &fiber, label)?;
    table.p = p.get();
    Ok(table)
}

/// Full cohomology of `G0/G1/G2 ∩ Γ(p)` in `Sp4(Z)`:
/// G0 is the mapping torus of the symmetric square of `[[1,p],[0,1]]`;
/// G1 has fiber V = Z³ with the symmetric-square action; G2 has the
/// nilmanifold fiber U with H¹(U) = M* and H²(U) = M* ⊕ Z/p (trivial
/// action on the torsion).
pub fn sp4_parabolic_cohomology(
    p: &PrimeLevel,
    which: SpParabolic,
) -> Result<GradedCohomology, CohomologyError> {
    let label = format!("{which} ∩ Γ({p})");
    match which {
        SpParabolic::G0 => {
            let t = IntMatrix::from_fn(2, 2, |r, c| {
                BigInt::from(match (r, c) {
                    (0, 1) => p.get(),
                    _ => u64::from(r == c),
                })
            });
            let phi = congruence::sym2_hom(&t)?;
            let mut table = mapping_torus_cohomology(&phi)?;
            table.label = label;
            table.p = p.get();
            Ok(table)
        }
        SpParabolic::G1 => {
            let g = congruence_generators(p)?;
            let sym2_actions: Result<Vec<IntMatrix>, _> =
                g.generators.iter().map(congruence::sym2_hom).collect();
            let fiber_v = MatrixModule::new(sym2_actions?, BigInt::zero());
            let fiber = torus_fiber(&g, &fiber_v.dual(), 3);
            let mut table = semidirect_free_assembly(&g, &fiber, label)?;
            table.p = p.get();
            Ok(table)
        }
        SpParabolic::G2 => {
            let g = congruence_generators(p)?;
            let m_star = module_m_star(&g);
            let zp = MatrixModule::trivial(g.rank, 1, BigInt::from(p.get()));
            let fiber = vec![
                vec![trivial_z(&g)],
                vec![m_star.clone()],
                vec![m_star, zp],
                vec![trivial_z(&g)],
            ];
            // the fiber's underlying groups must reproduce the
            // nilmanifold table for U (Euler number p)
            let u = nilmanifold_cohomology(p.get())?;
            for (degree, modules) in fiber.iter().enumerate() {
                let got = FinAb::direct_sum(
                    &modules
                        .iter()
                        .map(MatrixModule::underlying_group)
                        .collect::<Vec<_>>(),
                );
                assert_eq!(got, u.groups[degree], "fiber modules disagree with H*(U)");
            }
            let mut table = semidirect_free_assembly(&g, &fiber, label)?;
            table.p = p.get();
            Ok(table)
        }
    }
}

fn congruence_generators(p: &PrimeLevel) -> Result<FreeMatrixGroup, CohomologyError> {
    Ok(congruence::congruence_generators(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> PrimeLevel {
        PrimeLevel::new(v).unwrap()
    }

    fn gens(v: u64) -> FreeMatrixGroup {
        congruence::congruence_generators(&p(v)).unwrap()
    }

    fn finab(free: usize, torsion: &[i64]) -> FinAb {
        FinAb::new(free, torsion.iter().map(|&t| BigInt::from(t)).collect())
    }

    #[test]
    fn conventions_are_pinned() {
        let g = gens(3);
        // fiber E carries the transpose action
        for (a, b) in fiber_e_module(&g).actions().iter().zip(&g.generators) {
            assert_eq!(*a, b.transpose());
        }
        // H¹(E) = dual of the fiber = inverse of the generator
        for (a, b) in module_m(&g).actions().iter().zip(&g.generators) {
            assert_eq!(*a, b.inverse_unimodular());
        }
        // M* = dual of M = transpose of the generator
        for (a, b) in module_m_star(&g).actions().iter().zip(&g.generators) {
            assert_eq!(*a, b.transpose());
        }
        // dual is an involution and Λ³ ∘ sym2 is trivial (det 1)
        assert_eq!(module_m(&g).dual().dual(), module_m(&g));
        for b in &g.generators {
            let s = congruence::sym2_hom(b).unwrap();
            assert!(linalg::exterior_power(&s, 3).unwrap().is_identity());
        }
    }

    #[test]
    fn h1_with_trivial_integral_coefficients_is_free_of_rank_r() {
        for q in [3u64, 5] {
            let g = gens(q);
            let h = free_h1(&g, &trivial_z(&g)).unwrap();
            assert_eq!(h, FinAb::free(g.rank));
        }
    }

    // The torsion of H¹(Γ₂(p), M ⊕ M*) is pinned by the Bockstein
    // sequence of 0 → M → M → M ⊗ Z/p² → 0: the integral invariants
    // vanish, so the mod-p² invariants are isomorphic to the p²-torsion
    // subgroup of H¹. Those invariants are exactly p·(Z/p²)⁴ ≅ (Z/p)⁴
    // (the action is trivial mod p but not mod p²), which forces four
    // cyclic factors of order exactly p. `h1_torsion_matches_bockstein`
    // checks this identity wholesale.

    #[test]
    fn h1_of_gamma2_3_with_m_plus_m_star() {
        let g = gens(3);
        let m = module_m(&g).direct_sum(&module_m_star(&g));
        let h = free_h1(&g, &m).unwrap();
        assert_eq!(h, finab(8, &[3, 3, 3, 3]));
    }

    #[test]
    fn h1_of_gamma2_5_with_m_plus_m_star() {
        let g = gens(5);
        let m = module_m(&g).direct_sum(&module_m_star(&g));
        let h = free_h1(&g, &m).unwrap();
        assert_eq!(h, finab(40, &[5, 5, 5, 5]));
    }

    /// Independent oracle for the torsion: for any module W that is free
    /// over Z with W^Γ = 0, the mod-q invariants equal the q-torsion of
    /// H¹(Γ, W). Checked for q = p and q = p².
    #[test]
    fn h1_torsion_matches_bockstein() {
        for pv in [3u64, 5] {
            let g = gens(pv);
            for w in [
                module_m(&g),
                module_m_star(&g),
                module_m(&g).direct_sum(&module_m_star(&g)),
            ] {
                assert_eq!(module_invariants(&w), FinAb::zero());
                let h1 = free_h1(&g, &w).unwrap();
                for q in [pv, pv * pv] {
                    let qq = BigInt::from(q);
                    let torsion_part =
                        FinAb::new(0, h1.torsion().iter().map(|t| t.gcd(&qq)).collect());
                    let inv = module_invariants(&w.reduce_mod(qq));
                    assert_eq!(torsion_part, inv, "q = {q}, p = {pv}");
                }
            }
        }
    }

    #[test]
    fn h1_with_trivial_mod_p_coefficients() {
        let g = gens(3);
        let zp = MatrixModule::trivial(g.rank, 1, BigInt::from(3));
        assert_eq!(free_h1(&g, &zp).unwrap(), finab(0, &[3, 3, 3]));
    }

    #[test]
    fn h1_direct_sum_additivity() {
        let g = gens(3);
        let a = free_h1(&g, &module_m(&g)).unwrap();
        let b = free_h1(&g, &module_m_star(&g)).unwrap();
        let combined = free_h1(&g, &module_m(&g).direct_sum(&module_m_star(&g))).unwrap();
        assert_eq!(FinAb::direct_sum(&[a.clone(), b.clone()]), combined);
        // the two halves split the torsion evenly (M and M* are
        // conjugate modules)
        assert_eq!(a, finab(4, &[3, 3]));
        assert_eq!(b, finab(4, &[3, 3]));
    }

    #[test]
    fn no_q_torsion_away_from_p() {
        for pv in [3u64, 5] {
            let g = gens(pv);
            let h = free_h1(&g, &module_m(&g).direct_sum(&module_m_star(&g))).unwrap();
            let pp = BigInt::from(pv);
            assert_eq!(
                h.torsion(),
                &[pp.clone(), pp.clone(), pp.clone(), pp.clone()]
            );
            for q in [2u64, 3, 5, 7] {
                if q == pv {
                    continue;
                }
                let qq = BigInt::from(q);
                assert!(h.torsion().iter().all(|t| !(t % &qq).is_zero()));
            }
        }
    }

    #[test]
    fn invariants_of_natural_and_exterior_actions() {
        let g = gens(3);
        let natural = MatrixModule::new(g.generators.clone(), BigInt::zero());
        assert_eq!(module_invariants(&natural), FinAb::zero());
        assert_eq!(module_invariants(&module_m(&g)), FinAb::zero());
        assert_eq!(
            module_invariants(&module_m(&g).exterior_power(2)),
            FinAb::free(1)
        );
    }

    #[test]
    fn invariants_of_m_sum_mstar_mod_p_squared() {
        for pv in [3u64, 5] {
            let g = gens(pv);
            let m = module_m(&g).direct_sum(&module_m_star(&g));
            let inv = module_invariants(&m.reduce_mod(BigInt::from(pv * pv)));
            let want = FinAb::new(0, vec![BigInt::from(pv); 4]);
            assert_eq!(inv, want, "invariants mod p² are (Z/p)⁴");
        }
    }

    #[test]
    fn invariants_of_trivial_torsion_module() {
        let g = gens(3);
        let zp = MatrixModule::trivial(g.rank, 1, BigInt::from(3));
        assert_eq!(module_invariants(&zp), finab(0, &[3]));
    }

    #[test]
    fn nilmanifold_tables() {
        let b3 = nilmanifold_cohomology(3).unwrap();
        assert_eq!(
            b3.groups,
            vec![finab(1, &[]), finab(2, &[]), finab(2, &[3]), finab(1, &[])]
        );
        let heisenberg = nilmanifold_cohomology(1).unwrap();
        assert_eq!(
            heisenberg.groups,
            vec![finab(1, &[]), finab(2, &[]), finab(2, &[]), finab(1, &[])]
        );
        for e in [3u64, 5, 7, 11] {
            let t = nilmanifold_cohomology(e).unwrap();
            assert_eq!(t.groups[2], finab(2, &[e as i64]));
            // Poincaré duality rank symmetry (1, 2, 2, 1)
            assert_eq!(t.free_ranks(), vec![1, 2, 2, 1]);
        }
        assert!(nilmanifold_cohomology(0).is_err());
    }

    #[test]
    fn mapping_torus_of_identity_is_a_four_torus() {
        let t = mapping_torus_cohomology(&IntMatrix::identity(3)).unwrap();
        assert_eq!(t.free_ranks(), vec![1, 4, 6, 4, 1]);
        assert!(t.groups.iter().all(|g| g.torsion().is_empty()));
    }

    #[test]
    fn mapping_torus_of_sym2_unipotent() {
        // φ = T(t) for p = 3
        let t = IntMatrix::from_i64_rows(&[&[1, 3], &[0, 1]]);
        let phi = congruence::sym2_hom(&t).unwrap();
        assert_eq!(
            phi,
            IntMatrix::from_i64_rows(&[&[1, 6, 9], &[0, 1, 3], &[0, 0, 1]])
        );
        let table = mapping_torus_cohomology(&phi).unwrap();
        assert_eq!(table.groups[0], finab(1, &[]));
        assert_eq!(table.groups[1], finab(2, &[]));
        assert_eq!(table.groups[2], finab(2, &[3, 6]));
        assert_eq!(table.groups[3], finab(2, &[3, 6]));
        assert_eq!(table.groups[4], finab(1, &[]));
        // independent cross-check for degree 1: the fixed space of the
        // monodromy on Z³ is the kernel of T(t) − I
        let fixed = phi.sub(&IntMatrix::identity(3));
        assert_eq!(linalg::kernel_rank(&fixed), 1);
        // β_k = β_{4-k} for the closed orientable 4-manifold group
        let ranks = table.free_ranks();
        for k in 0..ranks.len() {
            assert_eq!(ranks[k], ranks[4 - k]);
        }
    }

    #[test]
    fn mapping_torus_rejects_singular_monodromy() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
        assert!(matches!(
            mapping_torus_cohomology(&m),
            Err(CohomologyError::NotInvertible)
        ));
    }

    #[test]
    fn sl3_borel_table() {
        let t = sl3_parabolic_cohomology(&p(3), SlParabolic::Borel).unwrap();
        assert_eq!(
            t.groups,
            vec![finab(1, &[]), finab(2, &[]), finab(2, &[3]), finab(1, &[])]
        );
    }

    #[test]
    fn sl3_parabolic_tables_at_p3() {
        for which in [SlParabolic::P1, SlParabolic::P2] {
            let t = sl3_parabolic_cohomology(&p(3), which).unwrap();
            assert_eq!(t.groups.len(), 4);
            assert_eq!(t.groups[0], finab(1, &[]));
            assert_eq!(t.groups[1], finab(3, &[]), "H¹ = Z^rank");
            assert_eq!(t.groups[2], finab(5, &[3, 3]), "H² = H¹(Γ₂, M) ⊕ Z");
            assert_eq!(t.groups[3], finab(3, &[]), "H³ = Z^rank");
            assert!(t.extension_ambiguous.is_empty());
        }
    }

    #[test]
    fn sp4_g0_tables() {
        for (pv, tor) in [(3u64, [3i64, 6]), (5, [5, 10])] {
            let t = sp4_parabolic_cohomology(&p(pv), SpParabolic::G0).unwrap();
            assert_eq!(t.groups[0], finab(1, &[]));
            assert_eq!(t.groups[1], finab(2, &[]));
            assert_eq!(t.groups[2], finab(2, &tor));
            assert_eq!(t.groups[3], finab(2, &tor));
            assert_eq!(t.groups[4], finab(1, &[]));
        }
    }

    #[test]
    fn sp4_g1_table_at_p3() {
        let t = sp4_parabolic_cohomology(&p(3), SpParabolic::G1).unwrap();
        assert_eq!(t.groups.len(), 5);
        assert_eq!(t.groups[0], finab(1, &[]));
        // rank Γ₂(3) = 3 in degrees 1 and 4 (invariants of Sym² vanish)
        assert_eq!(t.groups[1], finab(3, &[]));
        assert_eq!(t.groups[4], finab(3, &[]));
        assert_eq!(t.groups[2].free_rank(), 6, "H¹(Γ₂, H¹(V)) has rank (r-1)·3");
        assert_eq!(t.groups[3].free_rank(), 7, "Z ⊕ H¹(Γ₂, H²(V))");
        // invariants of the dual symmetric square vanish
        let g = gens(3);
        let sym2: Vec<IntMatrix> = g
            .generators
            .iter()
            .map(|m| congruence::sym2_hom(m).unwrap())
            .collect();
        let v = MatrixModule::new(sym2, BigInt::zero());
        assert_eq!(module_invariants(&v.dual()), FinAb::zero());
        assert_eq!(
            module_invariants(&v.dual().exterior_power(2)),
            FinAb::zero()
        );
    }

    #[test]
    fn sp4_g2_table_at_p3() {
        let t = sp4_parabolic_cohomology(&p(3), SpParabolic::G2).unwrap();
        let g = gens(3);
        let h1_mstar = free_h1(&g, &module_m_star(&g)).unwrap();
        assert_eq!(t.groups[0], finab(1, &[]));
        assert_eq!(t.groups[1], finab(3, &[]));
        assert_eq!(
            t.groups[2],
            FinAb::direct_sum(&[h1_mstar.clone(), finab(0, &[3])]),
            "H² = H¹(Γ₂, M*) ⊕ Z/p"
        );
        assert_eq!(
            t.groups[3],
            FinAb::direct_sum(&[finab(1, &[3, 3, 3]), h1_mstar]),
            "H³ = Z ⊕ H¹(Γ₂, M*) ⊕ H¹(Γ₂, Z/p)"
        );
        assert_eq!(t.groups[4], finab(3, &[]));
        // degree 2 mixes the invariant Z/p with torsion in the H¹ part
        assert_eq!(t.extension_ambiguous, vec![2]);
    }

    /// The parabolic tables cannot depend on which free basis the
    /// generator engine happened to emit.
    #[test]
    fn tables_are_independent_of_the_free_basis() {
        let g = gens(3);
        // rotate the basis and invert two entries
        let mut generators = g.generators.clone();
        let mut words = g.schreier_words.clone();
        generators.rotate_left(1);
        words.rotate_left(1);
        for ix in [0usize, 2] {
            generators[ix] = generators[ix].inverse_unimodular();
            let w: Vec<_> = words[ix].iter().rev().map(|l| l.inverse()).collect();
            words[ix] = w;
        }
        let g2 = FreeMatrixGroup::from_parts(&p(3), generators, words).unwrap();

        for (m1, m2) in [
            (module_m(&g), module_m(&g2)),
            (module_m_star(&g), module_m_star(&g2)),
        ] {
            assert_eq!(free_h1(&g, &m1).unwrap(), free_h1(&g2, &m2).unwrap());
        }
        let t1 =
            semidirect_free_assembly(&g, &torus_fiber(&g, &module_m(&g), 2), "a".into()).unwrap();
        let t2 = semidirect_free_assembly(&g2, &torus_fiber(&g2, &module_m(&g2), 2), "b".into())
            .unwrap();
        assert_eq!(t1.groups, t2.groups);
    }

    #[test]
    fn field_dims_by_universal_coefficients() {
        let t = sp4_parabolic_cohomology(&p(3), SpParabolic::G0).unwrap();
        // over Q: free ranks
        assert_eq!(t.field_dims(0), vec![1, 2, 2, 2, 1]);
        // over F_3: each Z/3 and Z/6 feeds its own degree and one below;
        // the result keeps the Poincaré symmetry of the closed 4-manifold
        assert_eq!(t.field_dims(3), vec![1, 4, 6, 4, 1]);
        // over F_2: only the Z/6 factors carry 2-torsion
        assert_eq!(t.field_dims(2), vec![1, 3, 4, 3, 1]);
    }

    #[test]
    fn assembly_rejects_bad_fibers() {
        let g = gens(3);
        let bad = vec![vec![module_m(&g)]];
        assert!(matches!(
            semidirect_free_assembly(&g, &bad, "bad".into()),
            Err(CohomologyError::BadFiber(_))
        ));
        let wrong_rank = MatrixModule::trivial(2, 1, BigInt::zero());
        assert!(matches!(
            free_h1(&g, &wrong_rank),
            Err(CohomologyError::DimensionMismatch { .. })
        ));
    }

    /// Zero-dimensional modules act as the zero group so assembly loops
    /// stay uniform.
    #[test]
    fn zero_dimensional_modules_vanish() {
        let g = gens(3);
        let nothing = MatrixModule::trivial(g.rank, 0, BigInt::zero());
        assert_eq!(free_h1(&g, &nothing).unwrap(), FinAb::zero());
        assert_eq!(module_invariants(&nothing), FinAb::zero());
    }
}
