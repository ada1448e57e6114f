//! Finitely presented modules over a coefficient ring.
//!
//! A module is a cokernel presentation R^g / rowspan(relations). Isomorphism
//! classes over the supported rings are decided through invariant factors
//! (computed over Z by lifting modular presentations), which makes equality
//! of presentations independent of the chosen generators.

use crate::matrix::{MatrixError, RMatrix};
use crate::normal_form::{
    canonical_row_form, left_kernel, reduce_mod_span, smith_normal_form, solve_left, span_contains,
};
use crate::ring::{fmt_coeff, Coeff, CoeffRing};
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("ring mismatch between modules")]
    RingMismatch,
    #[error("map is not well defined: relation {relation} does not land in the target relations")]
    NotWellDefined { relation: usize },
    #[error("map is not injective")]
    NotInjective,
    #[error("matrix shape does not match generator counts")]
    BadShape,
    #[error("purity hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("purity witness search exhausted; candidates {0:?}")]
    WitnessSearchExhausted(Vec<BigInt>),
}

/// Iso invariants: torsion invariant-factor chain plus free rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleInvariants {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl fmt::Display for ModuleInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("C{d}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("free^{}", self.free_rank));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone)]
pub struct FPModule {
    ring: CoeffRing,
    generators: usize,
    relations: RMatrix,
    canon: RMatrix,
    invariants: ModuleInvariants,
}

impl PartialEq for FPModule {
    /// Presentations compare equal when they present isomorphic modules.
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.invariants == other.invariants
    }
}
impl Eq for FPModule {}

impl fmt::Display for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} gens)", self.invariants, self.generators)
    }
}

fn lift_to_int(m: &RMatrix) -> RMatrix {
    let z = CoeffRing::Integers;
    RMatrix::from_fn(&z, m.rows(), m.cols(), |i, j| m.at(i, j).clone())
}

fn compute_invariants(ring: &CoeffRing, generators: usize, relations: &RMatrix) -> ModuleInvariants {
    match ring {
        CoeffRing::Integers => {
            let snf = smith_normal_form(relations).expect("PID");
            let torsion: Vec<BigInt> = snf
                .diagonal()
                .iter()
                .filter(|d| !d.is_zero())
                .map(|d| d.numer().abs())
                .filter(|d| !d.is_one())
                .collect();
            let rank = snf.diagonal().iter().filter(|d| !d.is_zero()).count();
            ModuleInvariants { torsion, free_rank: generators - rank }
        }
        CoeffRing::Rationals | CoeffRing::PrimeField(_) => {
            let snf = smith_normal_form(relations).expect("field");
            let rank = snf.diagonal().iter().filter(|d| !d.is_zero()).count();
            ModuleInvariants { torsion: Vec::new(), free_rank: generators - rank }
        }
        CoeffRing::IntegersMod(n) => {
            let z = CoeffRing::Integers;
            let lifted = lift_to_int(relations);
            let ni = RMatrix::identity(&z, generators).scale(&z.from_int(n.clone()));
            let stacked = lifted.vstack(&ni).expect("same cols");
            let snf = smith_normal_form(&stacked).expect("PID");
            let torsion: Vec<BigInt> = snf
                .diagonal()
                .iter()
                .map(|d| d.numer().abs())
                .filter(|d| !d.is_one())
                .collect();
            ModuleInvariants { torsion, free_rank: 0 }
        }
    }
}

impl FPModule {
    pub fn new(ring: &CoeffRing, generators: usize, relations: RMatrix) -> Self {
        assert_eq!(relations.cols(), generators, "relations must have one column per generator");
        assert_eq!(relations.ring(), ring);
        let canon = canonical_row_form(&relations);
        let invariants = compute_invariants(ring, generators, &relations);
        FPModule { ring: ring.clone(), generators, relations, canon, invariants }
    }

    pub fn free(ring: &CoeffRing, rank: usize) -> Self {
        Self::new(ring, rank, RMatrix::zeros(ring, 0, rank))
    }

    pub fn zero(ring: &CoeffRing) -> Self {
        Self::free(ring, 0)
    }

    /// R/(d), presented on one generator.
    pub fn cyclic(ring: &CoeffRing, d: i64) -> Self {
        Self::new(ring, 1, RMatrix::from_i64_rows(ring, &[vec![d]]))
    }

    pub fn direct_sum(&self, other: &FPModule) -> FPModule {
        assert_eq!(self.ring, other.ring);
        let g = self.generators + other.generators;
        let top = self
            .relations
            .hstack(&RMatrix::zeros(&self.ring, self.relations.rows(), other.generators))
            .expect("shapes");
        let bottom = RMatrix::zeros(&self.ring, other.relations.rows(), self.generators)
            .hstack(&other.relations)
            .expect("shapes");
        FPModule::new(&self.ring, g, top.vstack(&bottom).expect("shapes"))
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &RMatrix {
        &self.relations
    }

    /// Canonical row form of the relation span.
    pub fn canonical_relations(&self) -> &RMatrix {
        &self.canon
    }

    pub fn invariants(&self) -> &ModuleInvariants {
        &self.invariants
    }

    pub fn is_zero_module(&self) -> bool {
        self.invariants.torsion.is_empty() && self.invariants.free_rank == 0
    }

    /// Free modules have a canonical relation span of zero.
    pub fn is_free_presentation(&self) -> bool {
        self.canon.rows() == 0
    }

    /// Canonical representative of an element's coset.
    pub fn reduce(&self, v: &[Coeff]) -> Vec<Coeff> {
        assert_eq!(v.len(), self.generators);
        reduce_mod_span(&self.canon, v)
    }

    pub fn is_zero_element(&self, v: &[Coeff]) -> bool {
        self.reduce(v).iter().all(Coeff::is_zero)
    }

    /// Additive order of the class of `v`.
    pub fn element_order(&self, v: &[Coeff]) -> Order {
        assert_eq!(v.len(), self.generators);
        match &self.ring {
            CoeffRing::Rationals => {
                if self.is_zero_element(v) {
                    Order::Finite(BigInt::one())
                } else {
                    Order::Infinite
                }
            }
            CoeffRing::PrimeField(p) => {
                if self.is_zero_element(v) {
                    Order::Finite(BigInt::one())
                } else {
                    Order::Finite(p.clone())
                }
            }
            CoeffRing::Integers | CoeffRing::IntegersMod(_) => {
                let z = CoeffRing::Integers;
                let mut rel = lift_to_int(&self.relations);
                if let CoeffRing::IntegersMod(n) = &self.ring {
                    let ni = RMatrix::identity(&z, self.generators).scale(&z.from_int(n.clone()));
                    rel = rel.vstack(&ni).expect("same cols");
                }
                let vrow = RMatrix::from_fn(&z, 1, self.generators, |_, j| v[j].clone());
                let stacked = vrow.vstack(&rel).expect("same cols");
                let ker = left_kernel(&stacked);
                let mut g = BigInt::zero();
                for i in 0..ker.rows() {
                    g = g.gcd(ker.at(i, 0).numer());
                }
                if g.is_zero() {
                    Order::Infinite
                } else {
                    Order::Finite(g.abs())
                }
            }
        }
    }

    /// All elements as canonical representatives; only for finite rings.
    pub fn enumerate_elements(&self) -> Option<Vec<Vec<Coeff>>> {
        let elems = self.ring.elements()?;
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.generators];
        loop {
            let v: Vec<Coeff> = idx.iter().map(|&i| elems[i].clone()).collect();
            let red = self.reduce(&v);
            let key: Vec<String> = red.iter().map(fmt_coeff).collect();
            if seen.insert(key) {
                out.push(red);
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    out.sort_by_key(|v| v.iter().map(fmt_coeff).collect::<Vec<_>>());
                    return Some(out);
                }
                idx[k] += 1;
                if idx[k] < elems.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// Additive order of a module element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A morphism of finitely presented modules, stored on generators.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: FPModule,
    pub target: FPModule,
    pub matrix: RMatrix,
}

impl ModuleMap {
    /// Validates that every source relation maps into the target relations.
    pub fn new(source: FPModule, target: FPModule, matrix: RMatrix) -> Result<Self, ModuleError> {
        if source.ring != target.ring {
            return Err(ModuleError::RingMismatch);
        }
        if matrix.rows() != source.generators || matrix.cols() != target.generators {
            return Err(ModuleError::BadShape);
        }
        let mapped = source.relations.mul(&matrix)?;
        for r in 0..mapped.rows() {
            if !span_contains(&target.canon, &mapped.row(r)) {
                return Err(ModuleError::NotWellDefined { relation: r });
            }
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(m: &FPModule) -> Self {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: RMatrix::identity(&m.ring, m.generators),
        }
    }

    pub fn apply(&self, v: &[Coeff]) -> Vec<Coeff> {
        let row = RMatrix::from_fn(&self.source.ring, 1, v.len(), |_, j| v[j].clone());
        self.target.reduce(&row.mul(&self.matrix).expect("shape checked").row(0))
    }

    /// Generators of the kernel submodule, as canonical coset representatives.
    pub fn kernel_elements(&self) -> Vec<Vec<Coeff>> {
        let stacked = self
            .matrix
            .vstack(&self.target.relations)
            .expect("same target width");
        let ker = left_kernel(&stacked);
        let mut out = Vec::new();
        for i in 0..ker.rows() {
            let x: Vec<Coeff> = (0..self.source.generators)
                .map(|j| ker.at(i, j).clone())
                .collect();
            let red = self.source.reduce(&x);
            if red.iter().any(|c| !c.is_zero()) {
                out.push(red);
            }
        }
        out
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_elements().is_empty()
    }

    pub fn compose(&self, then: &ModuleMap) -> Result<ModuleMap, ModuleError> {
        ModuleMap::new(
            self.source.clone(),
            then.target.clone(),
            self.matrix.mul(&then.matrix)?,
        )
    }
}

/// Presentation of m (x) n on generator pairs, left factor major.
pub fn tensor_module(m: &FPModule, n: &FPModule) -> Result<FPModule, ModuleError> {
    if m.ring != n.ring {
        return Err(ModuleError::RingMismatch);
    }
    let im = RMatrix::identity(&m.ring, m.generators);
    let in_ = RMatrix::identity(&n.ring, n.generators);
    let top = m.relations.kronecker(&in_)?;
    let bottom = im.kronecker(&n.relations)?;
    Ok(FPModule::new(&m.ring, m.generators * n.generators, top.vstack(&bottom)?))
}

/// The induced map f (x) id_x between tensor presentations.
pub fn tensor_map_with(f: &ModuleMap, x: &FPModule) -> Result<ModuleMap, ModuleError> {
    let src = tensor_module(&f.source, x)?;
    let tgt = tensor_module(&f.target, x)?;
    let ix = RMatrix::identity(x.ring(), x.generator_count());
    ModuleMap::new(src, tgt, f.matrix.kronecker(&ix)?)
}

/// Hom(m, R) presented on an explicit generating set of functionals.
///
/// Returns the dual module together with the functional matrix: row i holds
/// the values of the i-th dual generator on the primal generators.
pub fn dual_module_with_basis(m: &FPModule) -> (FPModule, RMatrix) {
    // Functionals are right-kernel vectors of the relation matrix; the
    // relations among the chosen generators are their own left kernel.
    let funcs = left_kernel(&m.relations.transpose());
    let rel = left_kernel(&funcs);
    let dual = FPModule::new(&m.ring, funcs.rows(), rel);
    (dual, funcs)
}

pub fn dual_module(m: &FPModule) -> FPModule {
    dual_module_with_basis(m).0
}

/// Quotient of `m` by the submodule generated by the given rows.
pub fn quotient_module(m: &FPModule, sub_rows: &RMatrix) -> FPModule {
    assert_eq!(sub_rows.cols(), m.generators);
    FPModule::new(&m.ring, m.generators, m.relations.vstack(sub_rows).expect("same width"))
}

/// Present the submodule of `m` generated by the given rows, with its
/// inclusion map.
pub fn submodule_from_generators(
    m: &FPModule,
    rows: &RMatrix,
) -> Result<(FPModule, ModuleMap), ModuleError> {
    assert_eq!(rows.cols(), m.generators);
    let stacked = rows.vstack(&m.relations)?;
    let ker = left_kernel(&stacked);
    let rel = ker.submatrix(0..ker.rows(), 0..rows.rows());
    let sub = FPModule::new(&m.ring, rows.rows(), rel);
    let map = ModuleMap::new(sub.clone(), m.clone(), rows.clone())?;
    Ok((sub, map))
}

/// X-purity: the inclusion stays injective after tensoring with `x`.
pub fn is_x_pure(incl: &ModuleMap, x: &FPModule) -> Result<bool, ModuleError> {
    if !incl.is_injective() {
        return Err(ModuleError::NotInjective);
    }
    Ok(tensor_map_with(incl, x)?.is_injective())
}

#[derive(Debug, Clone)]
pub enum PurityVerdict {
    Pure,
    NotPure {
        /// A finite witness module X with N (x) X -> M (x) X not injective.
        witness: FPModule,
        witness_label: String,
        /// Nonzero kernel element, on the generators of N (x) X.
        kernel_element: Vec<Coeff>,
    },
}

impl PurityVerdict {
    pub fn is_pure(&self) -> bool {
        matches!(self, PurityVerdict::Pure)
    }
}

/// Decide purity of a finitely generated submodule via the direct-summand
/// criterion; failures come with a cyclic witness module.
pub fn is_pure_submodule(incl: &ModuleMap) -> Result<PurityVerdict, ModuleError> {
    if !incl.is_injective() {
        return Err(ModuleError::NotInjective);
    }
    if splitting_exists(incl)? {
        return Ok(PurityVerdict::Pure);
    }
    // A non-split f.g. inclusion over these rings fails against some cyclic
    // module; candidates come from the invariant factors in sight.
    let ring = incl.source.ring.clone();
    let mut candidates: Vec<BigInt> = Vec::new();
    let mut push_divisors = |d: &BigInt| {
        let mut k = BigInt::from(2);
        while &k * &k <= *d {
            if d.is_multiple_of(&k) {
                candidates.push(k.clone());
                candidates.push(d / &k);
            }
            k += 1;
        }
        if d > &BigInt::one() {
            candidates.push(d.clone());
        }
    };
    let quotient = quotient_module(&incl.target, &incl.matrix);
    for inv in [&incl.source, &incl.target, &quotient] {
        for d in &inv.invariants().torsion {
            push_divisors(d);
        }
    }
    if let Some(n) = ring.modulus() {
        push_divisors(&n.clone());
    }
    candidates.sort();
    candidates.dedup();
    for d in &candidates {
        let x = FPModule::new(
            &ring,
            1,
            RMatrix::from_fn(&ring, 1, 1, |_, _| ring.from_int(d.clone())),
        );
        let tensored = tensor_map_with(incl, &x)?;
        if let Some(kernel_element) = tensored.kernel_elements().into_iter().next() {
            return Ok(PurityVerdict::NotPure {
                witness: x,
                witness_label: format!("R/({d})"),
                kernel_element,
            });
        }
    }
    Err(ModuleError::WitnessSearchExhausted(candidates))
}

/// Search for a retraction of the inclusion: P with incl * P = id on N.
fn splitting_exists(incl: &ModuleMap) -> Result<bool, ModuleError> {
    let ring = incl.source.ring.clone();
    let (gn, gm) = (incl.source.generators, incl.target.generators);
    let rel_m = &incl.target.relations;
    let rel_n = &incl.source.relations;
    let (rm, rn) = (rel_m.rows(), rel_n.rows());
    let f = &incl.matrix;

    // Unknown row vector: vec(P) | vec(Y) | vec(Z), with
    //   rel_m * P = Y * rel_n   and   F * P = I + Z * rel_n.
    let unknowns = gm * gn + rm * rn + gn * rn;
    let eqs = rm * gn + gn * gn;
    let mut big = RMatrix::zeros(&ring, unknowns, eqs);
    let mut rhs = RMatrix::zeros(&ring, 1, eqs);
    let p_idx = |m: usize, t: usize| m * gn + t;
    let y_idx = |a: usize, r: usize| gm * gn + a * rn + r;
    let z_idx = |s: usize, r: usize| gm * gn + rm * rn + s * rn + r;

    for a in 0..rm {
        for t in 0..gn {
            let col = a * gn + t;
            for m in 0..gm {
                big.set(p_idx(m, t), col, rel_m.at(a, m).clone());
            }
            for r in 0..rn {
                big.set(y_idx(a, r), col, ring.neg(rel_n.at(r, t)));
            }
        }
    }
    for s in 0..gn {
        for t in 0..gn {
            let col = rm * gn + s * gn + t;
            for m in 0..gm {
                big.set(p_idx(m, t), col, f.at(s, m).clone());
            }
            for r in 0..rn {
                big.set(z_idx(s, r), col, ring.neg(rel_n.at(r, t)));
            }
            if s == t {
                rhs.set(0, col, ring.one());
            }
        }
    }
    Ok(solve_left(&big, &rhs)?.is_some())
}

/// Both sides of the quotient-tensor comparison; true when the canonical
/// presentations agree. The purity hypotheses are checked first.
pub fn quotient_tensor_check(
    m: &FPModule,
    m_sub: &ModuleMap,
    n: &FPModule,
    n_sub: &ModuleMap,
) -> Result<bool, ModuleError> {
    if m_sub.target.generators != m.generators || n_sub.target.generators != n.generators {
        return Err(ModuleError::BadShape);
    }
    if !is_x_pure(m_sub, n)? {
        return Err(ModuleError::HypothesisFailed("M' is not N-pure".into()));
    }
    if !is_x_pure(n_sub, m)? {
        return Err(ModuleError::HypothesisFailed("N' is not M-pure".into()));
    }
    let mq = quotient_module(m, &m_sub.matrix);
    let nq = quotient_module(n, &n_sub.matrix);
    let lhs = tensor_module(&mq, &nq)?;

    let tensor = tensor_module(m, n)?;
    let im = RMatrix::identity(&m.ring, m.generators);
    let in_ = RMatrix::identity(&n.ring, n.generators);
    let sub1 = m_sub.matrix.kronecker(&in_)?;
    let sub2 = im.kronecker(&n_sub.matrix)?;
    let rhs = quotient_module(&tensor, &sub1.vstack(&sub2)?);
    Ok(lhs == rhs)
}

/// Hom(Q, X) as a finitely presented module, with explicit generator
/// matrices sending Q-generators to X-coordinates.
pub struct HomModule {
    pub module: FPModule,
    pub generator_maps: Vec<RMatrix>,
    null_span: RMatrix,
}

impl HomModule {
    pub fn compute(q: &FPModule, x: &FPModule) -> Result<HomModule, ModuleError> {
        if q.ring != x.ring {
            return Err(ModuleError::RingMismatch);
        }
        let ring = q.ring.clone();
        let (gq, gx) = (q.generators, x.generators);
        let (rq, rx) = (q.relations.rows(), x.relations.rows());

        // Valid hom matrices: rel_q * F = W * rel_x for some W.
        let unknowns = gq * gx + rq * rx;
        let eqs = rq * gx;
        let mut big = RMatrix::zeros(&ring, unknowns, eqs);
        for a in 0..rq {
            for t in 0..gx {
                let col = a * gx + t;
                for m in 0..gq {
                    big.set(m * gx + t, col, q.relations.at(a, m).clone());
                }
                for r in 0..rx {
                    big.set(gq * gx + a * rx + r, col, ring.neg(x.relations.at(r, t)));
                }
            }
        }
        let ker = left_kernel(&big);
        let mut gens: Vec<RMatrix> = Vec::new();
        let mut gen_rows: Vec<Vec<Coeff>> = Vec::new();
        for i in 0..ker.rows() {
            let flat: Vec<Coeff> = (0..gq * gx).map(|j| ker.at(i, j).clone()).collect();
            if flat.iter().all(Coeff::is_zero) {
                continue;
            }
            gens.push(RMatrix::from_fn(&ring, gq, gx, |m, t| flat[m * gx + t].clone()));
            gen_rows.push(flat);
        }
        // Null homs: every row lands in the relation span of X.
        let mut null_rows: Vec<Vec<Coeff>> = Vec::new();
        for m in 0..gq {
            for r in 0..rx {
                let mut flat = vec![ring.zero(); gq * gx];
                for t in 0..gx {
                    flat[m * gx + t] = x.relations.at(r, t).clone();
                }
                null_rows.push(flat);
            }
        }
        let null_span = RMatrix::from_rows(&ring, null_rows).pad_empty(gq * gx, &ring);
        let gen_mat = RMatrix::from_rows(&ring, gen_rows).pad_empty(gq * gx, &ring);
        let stacked = gen_mat.vstack(&null_span)?;
        let ker2 = left_kernel(&stacked);
        let rel = ker2.submatrix(0..ker2.rows(), 0..gens.len());
        let module = FPModule::new(&ring, gens.len(), rel);
        Ok(HomModule { module, generator_maps: gens, null_span })
    }

    /// Coordinates of a hom matrix in terms of the chosen generators.
    pub fn coordinates_of(&self, hom: &RMatrix) -> Option<Vec<Coeff>> {
        let ring = hom.ring().clone();
        let flat: Vec<Coeff> = (0..hom.rows())
            .flat_map(|r| hom.row(r))
            .collect();
        let mut rows: Vec<Vec<Coeff>> = Vec::new();
        for g in &self.generator_maps {
            rows.push((0..g.rows()).flat_map(|r| g.row(r)).collect());
        }
        for i in 0..self.null_span.rows() {
            rows.push(self.null_span.row(i));
        }
        let basis = RMatrix::from_rows(&ring, rows).pad_empty(flat.len(), &ring);
        let rhs = RMatrix::from_fn(&ring, 1, flat.len(), |_, j| flat[j].clone());
        let sol = solve_left(&basis, &rhs).ok()??;
        Some((0..self.generator_maps.len()).map(|j| sol.at(0, j).clone()).collect())
    }
}

impl RMatrix {
    fn pad_empty(self, cols: usize, ring: &CoeffRing) -> RMatrix {
        if self.rows() == 0 {
            RMatrix::zeros(ring, 0, cols)
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoeffRing {
        CoeffRing::integers()
    }

    fn z4() -> CoeffRing {
        CoeffRing::integers_mod(4).unwrap()
    }

    #[test]
    fn tensor_unit_and_torsion() {
        let ring = z();
        let r = FPModule::free(&ring, 1);
        let n = FPModule::new(&ring, 2, RMatrix::from_i64_rows(&ring, &[vec![2, 0]]));
        assert_eq!(tensor_module(&r, &n).unwrap(), n);

        let z2 = FPModule::cyclic(&ring, 2);
        let z3 = FPModule::cyclic(&ring, 3);
        assert!(tensor_module(&z2, &z3).unwrap().is_zero_module());

        let za = FPModule::cyclic(&ring, 4);
        let t = tensor_module(&za, &z2).unwrap();
        assert_eq!(t, z2);
    }

    #[test]
    fn tensor_is_associative_up_to_invariants() {
        let ring = z();
        let a = FPModule::cyclic(&ring, 4);
        let b = FPModule::free(&ring, 2);
        let c = FPModule::cyclic(&ring, 6);
        let left = tensor_module(&tensor_module(&a, &b).unwrap(), &c).unwrap();
        let right = tensor_module(&a, &tensor_module(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn duals() {
        let ring = z();
        let free2 = FPModule::free(&ring, 2);
        assert_eq!(dual_module(&free2), free2);
        assert!(dual_module(&FPModule::cyclic(&ring, 2)).is_zero_module());

        let ring4 = z4();
        let m = FPModule::cyclic(&ring4, 2);
        let d = dual_module(&m);
        assert_eq!(d.invariants().torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn double_dual_of_free_is_identity() {
        let ring = z();
        for rank in 0..4 {
            let m = FPModule::free(&ring, rank);
            assert_eq!(dual_module(&dual_module(&m)), m);
        }
    }

    #[test]
    fn purity_summand_and_two_z() {
        let ring = z();
        let m = FPModule::free(&ring, 2);
        let n = FPModule::free(&ring, 1);
        let incl = ModuleMap::new(n.clone(), m.clone(), RMatrix::from_i64_rows(&ring, &[vec![1, 0]]))
            .unwrap();
        assert!(is_pure_submodule(&incl).unwrap().is_pure());

        let zmod = FPModule::free(&ring, 1);
        let two = ModuleMap::new(n, zmod, RMatrix::from_i64_rows(&ring, &[vec![2]])).unwrap();
        match is_pure_submodule(&two).unwrap() {
            PurityVerdict::NotPure { witness_label, kernel_element, .. } => {
                assert_eq!(witness_label, "R/(2)");
                assert!(!kernel_element.iter().all(Coeff::is_zero));
            }
            PurityVerdict::Pure => panic!("2Z in Z must not be pure"),
        }
    }

    #[test]
    fn purity_2z4_in_z4() {
        let ring = z4();
        let m = FPModule::free(&ring, 1);
        let n = FPModule::cyclic(&ring, 2);
        let incl = ModuleMap::new(n, m, RMatrix::from_i64_rows(&ring, &[vec![2]])).unwrap();
        match is_pure_submodule(&incl).unwrap() {
            PurityVerdict::NotPure { witness_label, .. } => assert_eq!(witness_label, "R/(2)"),
            PurityVerdict::Pure => panic!("2Z4 in Z4 must not be pure"),
        }
    }

    #[test]
    fn x_purity_cases() {
        let ring = z();
        let zfree = FPModule::free(&ring, 1);
        let three = ModuleMap::new(
            zfree.clone(),
            zfree.clone(),
            RMatrix::from_i64_rows(&ring, &[vec![3]]),
        )
        .unwrap();
        let two = ModuleMap::new(
            zfree.clone(),
            zfree.clone(),
            RMatrix::from_i64_rows(&ring, &[vec![2]]),
        )
        .unwrap();
        let z2 = FPModule::cyclic(&ring, 2);
        assert!(is_x_pure(&three, &z2).unwrap());
        assert!(!is_x_pure(&two, &z2).unwrap());
        assert!(is_x_pure(&two, &zfree).unwrap());
    }

    #[test]
    fn orders() {
        let ring = z();
        let z4m = FPModule::cyclic(&ring, 4);
        assert_eq!(z4m.element_order(&[ring.from_i64(0)]), Order::Finite(BigInt::one()));
        assert_eq!(z4m.element_order(&[ring.from_i64(1)]), Order::Finite(BigInt::from(4)));
        assert_eq!(z4m.element_order(&[ring.from_i64(2)]), Order::Finite(BigInt::from(2)));
        let free = FPModule::free(&ring, 1);
        assert_eq!(free.element_order(&[ring.from_i64(3)]), Order::Infinite);
    }

    #[test]
    fn quotient_tensor_pushout_cases() {
        let ring = z();
        let m = FPModule::free(&ring, 1);
        let sub2 = ModuleMap::new(m.clone(), m.clone(), RMatrix::from_i64_rows(&ring, &[vec![2]]))
            .unwrap();
        let sub3 = ModuleMap::new(m.clone(), m.clone(), RMatrix::from_i64_rows(&ring, &[vec![3]]))
            .unwrap();
        // Hypothesis: 2Z is Z-pure (tensoring with free is fine).
        assert!(quotient_tensor_check(&m, &sub2, &m, &sub3).unwrap());

        let m2 = FPModule::free(&ring, 2);
        let left = ModuleMap::new(
            FPModule::free(&ring, 1),
            m2.clone(),
            RMatrix::from_i64_rows(&ring, &[vec![1, 0]]),
        )
        .unwrap();
        let right = ModuleMap::new(
            FPModule::free(&ring, 1),
            m2.clone(),
            RMatrix::from_i64_rows(&ring, &[vec![0, 1]]),
        )
        .unwrap();
        assert!(quotient_tensor_check(&m2, &left, &m2, &right).unwrap());
    }

    #[test]
    fn enumerate_finite_module() {
        let ring = z4();
        let m = FPModule::new(&ring, 2, RMatrix::from_i64_rows(&ring, &[vec![2, 0]]));
        let elems = m.enumerate_elements().unwrap();
        assert_eq!(elems.len(), 8); // Z2 + Z4
    }

    #[test]
    fn hom_module_z2_to_z4() {
        let ring = z4();
        let q = FPModule::cyclic(&ring, 2);
        let x = FPModule::free(&ring, 1);
        let hom = HomModule::compute(&q, &x).unwrap();
        // Hom(Z2, Z4) = Z2, generated by multiplication by 2.
        assert_eq!(hom.module.invariants().torsion, vec![BigInt::from(2)]);
    }
}
