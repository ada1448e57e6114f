//! The finite dual of a filtered algebra.
//!
//! A functional with cofinite kernel is stored as a coefficient vector on
//! the dual basis of a free truncation quotient A/I; refining the ideal
//! never changes evaluations, and equality is decided on a common
//! refinement (the product ideal). The dual structure maps land in ideals
//! manufactured from characteristic polynomials of multiplication
//! operators, which keeps every computation inside free quotients.

use crate::families::{
    is_reversible, p_ell_witness, truncate, BialgebraFlavor, FamilyError, FilteredAlgebra,
    IdealSpec, Truncation, VarKind,
};
use crate::matrix::RMatrix;
use crate::modules::{
    dual_module_with_basis, tensor_module, FPModule, HomModule, ModuleError, ModuleMap, Order,
};
use crate::normal_form::{char_poly, solve_left};
use crate::poly::MultiPoly;
use crate::ring::{Coeff, CoeffRing};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("functional vector must have one entry per truncation basis element")]
    BadFunctional,
    #[error("dual elements have different owners")]
    OwnerMismatch,
    #[error("ideal is not contained in the element's ideal")]
    NotContained,
    #[error("prefix of length {0} is too short for search bound {1}")]
    PrefixTooShort(usize, usize),
    #[error("family carries no bialgebra flavor")]
    NoBialgebraFlavor,
    #[error("no antipode on this family: {0}")]
    NoAntipode(String),
}

/// A functional on a filtered algebra whose kernel contains the given
/// cofinite ideal, represented on the dual basis of the free quotient.
#[derive(Debug, Clone)]
pub struct DualElement {
    owner: FilteredAlgebra,
    ideal: IdealSpec,
    functional: Vec<Coeff>,
    trunc: Truncation,
}

impl DualElement {
    pub fn new(
        owner: FilteredAlgebra,
        ideal: IdealSpec,
        functional: Vec<Coeff>,
    ) -> Result<Self, DualError> {
        if !matches!(owner, FilteredAlgebra::Free { .. }) {
            return Err(DualError::Family(FamilyError::Unsupported(
                "dual elements live over free families; finite algebras use the convolution dual"
                    .into(),
            )));
        }
        let trunc = truncate(&owner, &ideal)?;
        if functional.len() != trunc.rank() {
            return Err(DualError::BadFunctional);
        }
        let ring = owner.ring().clone();
        let functional = functional.into_iter().map(|c| ring.normalize(c)).collect();
        Ok(DualElement { owner, ideal, functional, trunc })
    }

    pub fn owner(&self) -> &FilteredAlgebra {
        &self.owner
    }

    pub fn ideal(&self) -> &IdealSpec {
        &self.ideal
    }

    pub fn functional(&self) -> &[Coeff] {
        &self.functional
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    /// The k-th dual basis vector of the truncation by `ideal`.
    pub fn dual_basis(
        owner: FilteredAlgebra,
        ideal: IdealSpec,
        k: usize,
    ) -> Result<Self, DualError> {
        let trunc = truncate(&owner, &ideal)?;
        let ring = owner.ring().clone();
        let mut functional = vec![ring.zero(); trunc.rank()];
        functional[k] = ring.one();
        Self::new(owner, ideal, functional)
    }

    /// Evaluation at one point: ev_a(x_v^k) = a_v^k for a single variable
    /// family is the ideal (x - a) with functional [1].
    pub fn evaluation_at(owner: FilteredAlgebra, point: &[Coeff]) -> Result<Self, DualError> {
        let ring = owner.ring().clone();
        let n = owner.nvars();
        assert_eq!(point.len(), n);
        let mut gens = Vec::new();
        for (v, a) in point.iter().enumerate() {
            let mut g = MultiPoly::var(&ring, n, v);
            g.add_term(vec![0; n], ring.neg(a));
            gens.push(g);
        }
        let ideal = IdealSpec::new(owner.clone(), gens)?;
        Self::new(owner, ideal, vec![ring.one()])
    }

    pub fn zero(owner: FilteredAlgebra, ideal: IdealSpec) -> Result<Self, DualError> {
        let trunc = truncate(&owner, &ideal)?;
        let ring = owner.ring().clone();
        Self::new(owner, ideal, vec![ring.zero(); trunc.rank()])
    }

    pub fn evaluate(&self, p: &MultiPoly) -> Coeff {
        let ring = self.owner.ring().clone();
        let row = self.trunc.project(p);
        let mut acc = ring.zero();
        for (j, c) in self.functional.iter().enumerate() {
            acc = ring.add(&acc, &ring.mul(row.at(0, j), c));
        }
        acc
    }

    /// Same functional represented on a finer truncation.
    pub fn refine(&self, finer_ideal: &IdealSpec) -> Result<DualElement, DualError> {
        if !self.ideal.contains(finer_ideal) {
            return Err(DualError::NotContained);
        }
        let finer = truncate(&self.owner, finer_ideal)?;
        let proj = self.trunc.projection_from(&finer)?;
        let ring = self.owner.ring().clone();
        let col = RMatrix::from_fn(&ring, self.functional.len(), 1, |i, _| {
            self.functional[i].clone()
        });
        let new = proj.mul(&col).expect("shapes");
        let functional = (0..finer.rank()).map(|i| new.at(i, 0).clone()).collect();
        DualElement::new(self.owner.clone(), finer_ideal.clone(), functional)
    }

    /// Representation-independent equality via the product refinement.
    pub fn dual_equal(&self, other: &DualElement) -> Result<bool, DualError> {
        if self.owner != other.owner {
            return Err(DualError::OwnerMismatch);
        }
        let common = self.ideal.product(&other.ideal)?;
        let a = self.refine(&common)?;
        let b = other.refine(&common)?;
        Ok(a.functional == b.functional)
    }

    pub fn scale(&self, k: &Coeff) -> DualElement {
        let ring = self.owner.ring().clone();
        let functional = self.functional.iter().map(|c| ring.mul(c, k)).collect();
        DualElement { functional, ..self.clone() }
    }

    /// Sum on the product refinement.
    pub fn add(&self, other: &DualElement) -> Result<DualElement, DualError> {
        if self.owner != other.owner {
            return Err(DualError::OwnerMismatch);
        }
        let common = self.ideal.product(&other.ideal)?;
        let a = self.refine(&common)?;
        let b = other.refine(&common)?;
        let ring = self.owner.ring().clone();
        let functional = a
            .functional
            .iter()
            .zip(&b.functional)
            .map(|(x, y)| ring.add(x, y))
            .collect();
        DualElement::new(self.owner.clone(), common, functional)
    }

    pub fn is_zero(&self) -> bool {
        self.functional.iter().all(Coeff::is_zero)
    }
}

/// Bimodule actions on the finite dual: (a -> f)(b) = f(b a) and
/// (f <- a)(b) = f(a b). Triangular ideals of our families are two-sided,
/// so the result stays on the same ideal.
pub fn bimodule_action(left: bool, a: &MultiPoly, f: &DualElement) -> DualElement {
    let ring = f.owner.ring().clone();
    let n = f.owner.nvars();
    let rank = f.trunc.rank();
    let mut functional = Vec::with_capacity(rank);
    for k in 0..rank {
        let mut mono = MultiPoly::zero(&ring, n);
        mono.add_term(f.trunc.basis_exponent(k), ring.one());
        let arg = if left { mono.mul(a) } else { a.mul(&mono) };
        functional.push(f.evaluate(&arg));
    }
    DualElement { functional, ..f.clone() }
}

/// Values of a functional on the powers of a single variable.
#[derive(Debug, Clone)]
pub struct SequenceFunctional {
    pub ring: CoeffRing,
    pub prefix: Vec<Coeff>,
}

impl SequenceFunctional {
    pub fn from_i64(ring: &CoeffRing, values: &[i64]) -> Self {
        SequenceFunctional {
            ring: ring.clone(),
            prefix: values.iter().map(|&v| ring.from_i64(v)).collect(),
        }
    }
}

/// Least-degree monic annihilating polynomial of the sequence, or None when
/// no recurrence of degree <= bound fits the whole prefix.
///
/// Returned coefficients are low-to-high with leading 1: q_0 s_k + ... +
/// q_{d-1} s_{k+d-1} + s_{k+d} = 0 for every window.
pub fn membership_annihilator(
    s: &SequenceFunctional,
    bound: usize,
) -> Result<Option<Vec<Coeff>>, DualError> {
    let n = s.prefix.len();
    if n < 2 * bound {
        return Err(DualError::PrefixTooShort(n, bound));
    }
    let ring = s.ring.clone();
    for d in 1..=bound {
        let windows = n - d;
        let h = RMatrix::from_fn(&ring, d, windows, |j, k| s.prefix[k + j].clone());
        let rhs = RMatrix::from_fn(&ring, 1, windows, |_, k| ring.neg(&s.prefix[k + d]));
        if let Some(q) = solve_left(&h, &rhs).map_err(ModuleError::from)? {
            let mut coeffs: Vec<Coeff> = (0..d).map(|j| q.at(0, j).clone()).collect();
            coeffs.push(ring.one());
            return Ok(Some(coeffs));
        }
    }
    Ok(None)
}

/// Decomposition of the dual comultiplication: pairs (g_i, h_i) with
/// sum g_i(a) h_i(b) = f(a b) for all a, b.
pub fn dual_comultiply(f: &DualElement) -> Result<Vec<(DualElement, DualElement)>, DualError> {
    let ring = f.owner.ring().clone();
    let rank = f.trunc.rank();
    let mult = f.trunc.algebra().mult();
    let mut out = Vec::new();
    for i in 0..rank {
        // h_i(e_j) = f(e_i e_j).
        let mut values = Vec::with_capacity(rank);
        for j in 0..rank {
            let row = mult.row(i * rank + j);
            let mut acc = ring.zero();
            for (k, c) in f.functional.iter().enumerate() {
                acc = ring.add(&acc, &ring.mul(&row[k], c));
            }
            values.push(acc);
        }
        if values.iter().all(Coeff::is_zero) {
            continue;
        }
        let g = DualElement::dual_basis(f.owner.clone(), f.ideal.clone(), i)?;
        let h = DualElement::new(f.owner.clone(), f.ideal.clone(), values)?;
        out.push((g, h));
    }
    Ok(out)
}

/// Comultiplication images of the variables for a flavored free family, in
/// the doubled variable set.
fn comult_images(family: &FilteredAlgebra) -> Result<Vec<MultiPoly>, DualError> {
    let flavor = family.flavor().ok_or(DualError::NoBialgebraFlavor)?;
    let ring = family.ring().clone();
    let n = family.nvars();
    Ok((0..n)
        .map(|v| {
            let l = MultiPoly::var(&ring, 2 * n, v);
            let r = MultiPoly::var(&ring, 2 * n, n + v);
            match flavor {
                BialgebraFlavor::GroupLike => l.mul(&r),
                BialgebraFlavor::Primitive => l.add(&r),
            }
        })
        .collect())
}

/// Convolution product on the finite dual: (f g)(a) = sum f(a_1) g(a_2).
///
/// The result lives on the ideal generated per variable by the
/// characteristic polynomial of multiplication by the comultiplication
/// image of that variable, which is monic by construction and annihilates
/// every evaluation.
pub fn dual_multiply(f: &DualElement, g: &DualElement) -> Result<DualElement, DualError> {
    if f.owner != g.owner {
        return Err(DualError::OwnerMismatch);
    }
    let family = &f.owner;
    let ring = family.ring().clone();
    let n = family.nvars();
    let images = comult_images(family)?;

    let tensor_family = family.tensor(family)?;
    let pair = IdealSpec::tensor_pair(&tensor_family, &f.ideal, &g.ideal)?;
    let tensor_trunc = truncate(&tensor_family, &pair)?;

    // Per-variable annihilator: char poly of multiplication by the image.
    let mut gens = Vec::with_capacity(n);
    for v in 0..n {
        let row = tensor_trunc.project(&images[v]);
        let op = tensor_trunc.algebra().mult_by(&row);
        let cp = char_poly(&op);
        let p = MultiPoly::from_univariate(&ring, n, v, &cp);
        if family.var_kind(v) == VarKind::Laurent && !is_reversible(&p, v)? {
            return Err(DualError::Family(FamilyError::NotReversible));
        }
        gens.push(p);
    }
    let ideal = IdealSpec::new(family.clone(), gens)?;
    let trunc = truncate(family, &ideal)?;

    // Values on the new basis: (f (x) g) applied to the reduced image.
    let fg: Vec<Coeff> = {
        let mut flat = Vec::with_capacity(f.functional.len() * g.functional.len());
        for a in &f.functional {
            for b in &g.functional {
                flat.push(ring.mul(a, b));
            }
        }
        flat
    };
    let mut functional = Vec::with_capacity(trunc.rank());
    for idx in 0..trunc.rank() {
        let exp = trunc.basis_exponent(idx);
        let mut mono = MultiPoly::zero(&ring, n);
        mono.add_term(exp, ring.one());
        let image = mono.substitute(2 * n, &images);
        let row = tensor_trunc.project(&image);
        let mut acc = ring.zero();
        for (j, c) in fg.iter().enumerate() {
            acc = ring.add(&acc, &ring.mul(row.at(0, j), c));
        }
        functional.push(acc);
    }
    DualElement::new(family.clone(), ideal, functional)
}

/// The unit of the dual algebra is the counit of the family.
pub fn dual_unit(family: &FilteredAlgebra) -> Result<DualElement, DualError> {
    let flavor = family.flavor().ok_or(DualError::NoBialgebraFlavor)?;
    let ring = family.ring().clone();
    let n = family.nvars();
    let point = match flavor {
        BialgebraFlavor::GroupLike => vec![ring.one(); n],
        BialgebraFlavor::Primitive => vec![ring.zero(); n],
    };
    DualElement::evaluation_at(family.clone(), &point)
}

/// The counit of the dual coalgebra: evaluation at 1.
pub fn dual_counit(f: &DualElement) -> Coeff {
    let ring = f.owner.ring().clone();
    f.evaluate(&MultiPoly::one(&ring, f.owner.nvars()))
}

/// The dual antipode f o S; needs an antipode on the family (primitive
/// polynomials or group-like Laurent variables).
pub fn dual_antipode(f: &DualElement) -> Result<DualElement, DualError> {
    let family = &f.owner;
    let flavor = family.flavor().ok_or(DualError::NoBialgebraFlavor)?;
    let ring = family.ring().clone();
    let n = family.nvars();
    let gens = f.ideal.generators();
    let mut new_gens = Vec::with_capacity(n);
    let mut var_images = Vec::with_capacity(n);
    for v in 0..n {
        match flavor {
            BialgebraFlavor::Primitive => {
                if family.var_kind(v) == VarKind::Laurent {
                    return Err(DualError::NoAntipode(
                        "primitive flavor on an invertible variable".into(),
                    ));
                }
                // S(x) = -x: mirror the generator and rescale monic.
                let mirrored = substitute_neg(&gens[v], v);
                let d = mirrored.max_exponent(v).unwrap_or(0);
                let lead = mirrored.coefficient(&unit_exp(n, v, d));
                let scale = ring.inv(&lead).expect("mirrored monic has unit lead");
                new_gens.push(mirrored.scale(&scale));
                var_images.push(MultiPoly::var(&ring, n, v).neg());
            }
            BialgebraFlavor::GroupLike => {
                if family.var_kind(v) != VarKind::Laurent {
                    return Err(DualError::NoAntipode(
                        "group-like polynomial variables are not invertible".into(),
                    ));
                }
                // S(x) = 1/x: reverse the generator's coefficients.
                let rev = gens[v].invert_variables_one(v);
                let d = -rev.min_exponent(v).unwrap_or(0);
                let shifted = rev.shift_var(v, d);
                let lead = shifted.coefficient(&unit_exp(n, v, d));
                let scale = ring.inv(&lead).expect("reversible generator");
                new_gens.push(shifted.scale(&scale));
                var_images.push(MultiPoly::monomial(&ring, n, v, -1, ring.one()));
            }
        }
    }
    let ideal = IdealSpec::new(family.clone(), new_gens)?;
    let trunc = truncate(family, &ideal)?;
    let mut functional = Vec::with_capacity(trunc.rank());
    for idx in 0..trunc.rank() {
        let exp = trunc.basis_exponent(idx);
        let mut image = MultiPoly::one(&ring, n);
        for (v, &k) in exp.iter().enumerate() {
            for _ in 0..k {
                image = image.mul(&var_images[v]);
            }
        }
        functional.push(f.evaluate(&image));
    }
    DualElement::new(family.clone(), ideal, functional)
}

fn unit_exp(n: usize, v: usize, k: i64) -> Vec<i64> {
    let mut e = vec![0i64; n];
    e[v] = k;
    e
}

fn substitute_neg(p: &MultiPoly, v: usize) -> MultiPoly {
    let ring = p.ring().clone();
    let mut out = MultiPoly::zero(&ring, p.nvars());
    for (e, c) in p.terms() {
        let sign = if e[v] % 2 == 0 { c.clone() } else { ring.neg(c) };
        out.add_term(e.clone(), sign);
    }
    out
}

impl MultiPoly {
    fn invert_variables_one(&self, v: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.ring(), self.nvars());
        for (e, c) in self.terms() {
            let mut e = e.clone();
            e[v] = -e[v];
            out.add_term(e, c.clone());
        }
        out
    }
}

/// Forward direction of the tensor identification: (f (x) g)(a (x) b) =
/// f(a) g(b), carried on the pair ideal of the tensor family.
pub fn tensor_dual_forward(
    f: &DualElement,
    g: &DualElement,
) -> Result<(FilteredAlgebra, DualElement), DualError> {
    let tensor_family = f.owner.tensor(&g.owner)?;
    let ideal = IdealSpec::tensor_pair(&tensor_family, &f.ideal, &g.ideal)?;
    let ring = tensor_family.ring().clone();
    let mut functional = Vec::with_capacity(f.functional.len() * g.functional.len());
    for a in &f.functional {
        for b in &g.functional {
            functional.push(ring.mul(a, b));
        }
    }
    let h = DualElement::new(tensor_family.clone(), ideal, functional)?;
    Ok((tensor_family, h))
}

/// Inverse direction: split a functional on a tensor family (triangular
/// ideal) into a finite sum of simple tensors, pairing the dual basis of
/// the left quotient with the sliced values on the right.
pub fn tensor_dual_split(
    h: &DualElement,
    left: &FilteredAlgebra,
    right: &FilteredAlgebra,
) -> Result<Vec<(DualElement, DualElement)>, DualError> {
    let nl = left.nvars();
    let nr = right.nvars();
    if nl + nr != h.owner.nvars() {
        return Err(DualError::OwnerMismatch);
    }
    let gens = h.ideal.generators();
    let left_gens: Vec<MultiPoly> = gens[..nl]
        .iter()
        .map(|g| restrict_vars(g, 0, nl))
        .collect();
    let right_gens: Vec<MultiPoly> = gens[nl..]
        .iter()
        .map(|g| restrict_vars(g, nl, nr))
        .collect();
    let left_ideal = IdealSpec::new(left.clone(), left_gens)?;
    let right_ideal = IdealSpec::new(right.clone(), right_gens)?;
    let lt = truncate(left, &left_ideal)?;
    let rt = truncate(right, &right_ideal)?;
    let (lr, rr) = (lt.rank(), rt.rank());
    assert_eq!(lr * rr, h.functional.len());
    let mut out = Vec::new();
    for i in 0..lr {
        let values: Vec<Coeff> = (0..rr).map(|j| h.functional[i * rr + j].clone()).collect();
        if values.iter().all(Coeff::is_zero) {
            continue;
        }
        let gi = DualElement::dual_basis(left.clone(), left_ideal.clone(), i)?;
        let hi = DualElement::new(right.clone(), right_ideal.clone(), values)?;
        out.push((gi, hi));
    }
    Ok(out)
}

/// Split a functional given on an arbitrary cofinite ideal of a tensor
/// family: first find a triangular witness ideal inside it.
pub fn tensor_dual_split_from_generators(
    tensor_family: &FilteredAlgebra,
    generators: &[MultiPoly],
    values_on_witness: impl FnOnce(&Truncation) -> Vec<Coeff>,
    left: &FilteredAlgebra,
    right: &FilteredAlgebra,
    bound: usize,
) -> Result<Vec<(DualElement, DualElement)>, DualError> {
    let witness = p_ell_witness(tensor_family, generators, bound)?;
    let trunc = truncate(tensor_family, &witness)?;
    let h = DualElement::new(tensor_family.clone(), witness, values_on_witness(&trunc))?;
    tensor_dual_split(&h, left, right)
}

fn restrict_vars(p: &MultiPoly, offset: usize, count: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(p.ring(), count);
    for (e, c) in p.terms() {
        let slice: Vec<i64> = e[offset..offset + count].to_vec();
        debug_assert!(e
            .iter()
            .enumerate()
            .all(|(w, &k)| (offset..offset + count).contains(&w) || k == 0));
        out.add_term(slice, c.clone());
    }
    out
}

/// Outcome of the truncation-scale purity probe.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub injective: bool,
    /// Nonzero kernel elements on the generators of dual(Q) (x) X.
    pub kernel: Vec<Vec<Coeff>>,
    pub note: String,
}

/// Injectivity of dual(Q) (x) X -> Hom(Q, X) for a truncation quotient Q.
///
/// This is a probe at one truncation; it cannot certify purity of the full
/// dual, only report exact kernel data at this level.
pub fn purity_probe_module(q: &FPModule, x: &FPModule) -> Result<ProbeReport, DualError> {
    let (dual, funcs) = dual_module_with_basis(q);
    let source = tensor_module(&dual, x)?;
    let hom = HomModule::compute(q, x)?;
    let ring = q.ring().clone();
    let (gd, gx) = (dual.generator_count(), x.generator_count());
    let mut rows = Vec::new();
    for i in 0..gd {
        for j in 0..gx {
            // phi_i (x) e_j as the hom sending q-generators m to phi_i[m] e_j.
            let f = RMatrix::from_fn(&ring, q.generator_count(), gx, |m, t| {
                if t == j {
                    funcs.at(i, m).clone()
                } else {
                    ring.zero()
                }
            });
            let coords = hom
                .coordinates_of(&f)
                .expect("functionals kill the relations, so the hom is valid");
            rows.push(coords);
        }
    }
    let matrix = RMatrix::from_rows(&ring, rows);
    let matrix = if gd * gx == 0 {
        RMatrix::zeros(&ring, 0, hom.module.generator_count())
    } else {
        matrix
    };
    let map = ModuleMap::new(source, hom.module.clone(), matrix)?;
    let kernel = map.kernel_elements();
    Ok(ProbeReport {
        injective: kernel.is_empty(),
        kernel,
        note: "probe at a single truncation; not a purity certificate".into(),
    })
}

/// Probe a free-family truncation: its quotient is free, so the module side
/// is the free module on the monomial basis.
pub fn purity_probe_family(
    family: &FilteredAlgebra,
    ideal: &IdealSpec,
    x: &FPModule,
) -> Result<ProbeReport, DualError> {
    let trunc = truncate(family, ideal)?;
    let q = FPModule::free(family.ring(), trunc.rank());
    purity_probe_module(&q, x)
}

/// A quotient of R[x] by an ideal that contains a monic polynomial but need
/// not be free as an R-module. This carries the counterexample fixtures.
#[derive(Debug, Clone)]
pub struct TruncatedQuotient {
    monic: MultiPoly,
    pub module: FPModule,
    /// Multiplication on monomial classes, rows indexed by basis pairs.
    pub mult: RMatrix,
}

/// Build R[x]/(generators) below the least monic generator degree.
///
/// Module relations are the reductions of the non-monic generators, closed
/// under multiplication by x.
pub fn truncated_quotient(
    ring: &CoeffRing,
    generators: &[MultiPoly],
) -> Result<TruncatedQuotient, DualError> {
    let monic = generators
        .iter()
        .filter(|g| g.is_monic_univariate(0))
        .min_by_key(|g| g.max_exponent(0))
        .cloned()
        .ok_or_else(|| FamilyError::NotCofinite("x".into()))?;
    let k = monic.max_exponent(0).unwrap_or(0) as usize;
    let reduce = |p: &MultiPoly| -> Vec<Coeff> {
        let (_, r) = crate::families::poly_divmod_univariate(p, &monic, 0);
        let mut out = vec![ring.zero(); k];
        for (e, c) in r.terms() {
            out[e[0] as usize] = c.clone();
        }
        out
    };
    // Close the relation span under multiplication by x.
    let mut rows: Vec<Vec<Coeff>> = Vec::new();
    for g in generators {
        if g == &monic {
            continue;
        }
        rows.push(reduce(g));
    }
    let x = MultiPoly::var(ring, 1, 0);
    let mut frontier: Vec<MultiPoly> = generators.iter().filter(|g| *g != &monic).cloned().collect();
    for _ in 0..k {
        frontier = frontier.iter().map(|p| p.mul(&x)).collect();
        for p in &frontier {
            rows.push(reduce(p));
        }
    }
    let relations = RMatrix::from_rows(ring, rows.clone());
    let relations = if rows.is_empty() {
        RMatrix::zeros(ring, 0, k)
    } else {
        relations
    };
    let module = FPModule::new(ring, k, relations);
    let mut mult = RMatrix::zeros(ring, k * k, k);
    for i in 0..k {
        for j in 0..k {
            let mut mono = MultiPoly::zero(ring, 1);
            mono.add_term(vec![(i + j) as i64], ring.one());
            let row = reduce(&mono);
            for (t, c) in row.into_iter().enumerate() {
                mult.set(i * k + j, t, c);
            }
        }
    }
    Ok(TruncatedQuotient { monic, module, mult })
}

impl TruncatedQuotient {
    pub fn monic_degree(&self) -> usize {
        self.monic.max_exponent(0).unwrap_or(0) as usize
    }

    /// Additive orders of every element of the dual module, as sorted
    /// (order, count) pairs. Finite rings only.
    pub fn dual_order_histogram(&self) -> Option<Vec<(Order, usize)>> {
        let (dual, _) = dual_module_with_basis(&self.module);
        let elems = dual.enumerate_elements()?;
        let mut hist: std::collections::BTreeMap<String, (Order, usize)> =
            std::collections::BTreeMap::new();
        for e in &elems {
            let ord = dual.element_order(e);
            let key = format!("{ord:>8}");
            hist.entry(key).or_insert((ord, 0)).1 += 1;
        }
        Some(hist.into_values().collect())
    }

    pub fn dual_module(&self) -> FPModule {
        dual_module_with_basis(&self.module).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::fmt_coeff;

    fn z() -> CoeffRing {
        CoeffRing::integers()
    }

    fn upoly(ring: &CoeffRing, coeffs: &[i64]) -> MultiPoly {
        let cs: Vec<Coeff> = coeffs.iter().map(|&c| ring.from_i64(c)).collect();
        MultiPoly::from_univariate(ring, 1, 0, &cs)
    }

    fn group_like_zx() -> FilteredAlgebra {
        FilteredAlgebra::polynomial(&z(), &["x"], Some(BialgebraFlavor::GroupLike))
    }

    fn primitive_zx() -> FilteredAlgebra {
        FilteredAlgebra::polynomial(&z(), &["x"], Some(BialgebraFlavor::Primitive))
    }

    #[test]
    fn evaluation_functional() {
        let ring = z();
        let f = DualElement::evaluation_at(group_like_zx(), &[ring.one()]).unwrap();
        let p = upoly(&ring, &[3, 0, 1]); // x^2 + 3
        assert_eq!(fmt_coeff(&f.evaluate(&p)), "4");
        let zero = DualElement::zero(group_like_zx(), f.ideal().clone()).unwrap();
        assert!(zero.evaluate(&p).is_zero());
    }

    #[test]
    fn dual_basis_mod_x2_minus_1_alternates() {
        let ring = z();
        let fam = group_like_zx();
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 0, 1])]).unwrap();
        let xstar = DualElement::dual_basis(fam, ideal, 1).unwrap();
        for k in 0..6u32 {
            let p = MultiPoly::monomial(&z(), 1, 0, k as i64, z().one());
            let expect = if k % 2 == 1 { "1" } else { "0" };
            assert_eq!(fmt_coeff(&xstar.evaluate(&p)), expect);
        }
    }

    #[test]
    fn refine_preserves_evaluation() {
        let ring = z();
        let fam = group_like_zx();
        let f = DualElement::evaluation_at(fam.clone(), &[ring.one()]).unwrap();
        for gen in [vec![-1, 0, 1], vec![1, -2, 1], vec![-1, -1, 1, 1]] {
            let finer = IdealSpec::new(fam.clone(), vec![upoly(&ring, &gen)]).unwrap();
            if !f.ideal().contains(&finer) {
                continue;
            }
            let rf = f.refine(&finer).unwrap();
            for p in [upoly(&ring, &[0, 1]), upoly(&ring, &[5, -2, 7, 1])] {
                assert_eq!(f.evaluate(&p), rf.evaluate(&p));
            }
        }
    }

    #[test]
    fn refine_requires_containment() {
        let ring = z();
        let fam = group_like_zx();
        let f = DualElement::evaluation_at(fam.clone(), &[ring.one()]).unwrap();
        let other = IdealSpec::new(fam, vec![upoly(&ring, &[1, 1])]).unwrap();
        assert!(matches!(f.refine(&other), Err(DualError::NotContained)));
    }

    #[test]
    fn equality_across_representations() {
        let ring = z();
        let fam = group_like_zx();
        let ev1 = DualElement::evaluation_at(fam.clone(), &[ring.one()]).unwrap();
        // The same functional on the coarser representation mod x^2 - 1:
        // values (1, 1) on the dual basis.
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 0, 1])]).unwrap();
        let alt = DualElement::new(fam.clone(), ideal, vec![ring.one(), ring.one()]).unwrap();
        assert!(ev1.dual_equal(&alt).unwrap());
        let evm1 = DualElement::evaluation_at(fam, &[ring.from_i64(-1)]).unwrap();
        assert!(!ev1.dual_equal(&evm1).unwrap());
    }

    #[test]
    fn fibonacci_annihilator() {
        let ring = z();
        let s = SequenceFunctional::from_i64(&ring, &[1, 1, 2, 3, 5, 8, 13, 21]);
        let q = membership_annihilator(&s, 3).unwrap().unwrap();
        let strs: Vec<String> = q.iter().map(fmt_coeff).collect();
        assert_eq!(strs, vec!["-1", "-1", "1"]); // x^2 - x - 1
    }

    #[test]
    fn constant_sequence_annihilator() {
        let ring = z();
        let s = SequenceFunctional::from_i64(&ring, &[1, 1, 1, 1, 1, 1]);
        let q = membership_annihilator(&s, 3).unwrap().unwrap();
        let strs: Vec<String> = q.iter().map(fmt_coeff).collect();
        assert_eq!(strs, vec!["-1", "1"]); // x - 1
    }

    #[test]
    fn factorials_are_not_recurrent_at_bound_two() {
        let ring = z();
        let s = SequenceFunctional::from_i64(&ring, &[1, 1, 2, 6, 24, 120]);
        assert!(membership_annihilator(&s, 2).unwrap().is_none());
        assert!(matches!(
            membership_annihilator(&s, 4),
            Err(DualError::PrefixTooShort(6, 4))
        ));
    }

    #[test]
    fn comultiply_group_like_evaluation() {
        let ring = z();
        let f = DualElement::evaluation_at(group_like_zx(), &[ring.from_i64(2)]).unwrap();
        let pairs = dual_comultiply(&f).unwrap();
        assert_eq!(pairs.len(), 1);
        // f(ab) = g(a)h(b) with both equal to f: group-like.
        let (g, h) = &pairs[0];
        assert!(g.dual_equal(&f).unwrap());
        assert!(h.dual_equal(&f).unwrap());
    }

    #[test]
    fn comultiply_matches_products() {
        let ring = z();
        let fam = group_like_zx();
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 0, 1])]).unwrap();
        let f = DualElement::dual_basis(fam, ideal, 1).unwrap();
        let pairs = dual_comultiply(&f).unwrap();
        // f(e_i e_j) over the basis {1, x} is the swap matrix.
        for i in 0..2i64 {
            for j in 0..2i64 {
                let a = MultiPoly::monomial(&ring, 1, 0, i, ring.one());
                let b = MultiPoly::monomial(&ring, 1, 0, j, ring.one());
                let mut acc = ring.zero();
                for (g, h) in &pairs {
                    acc = ring.add(&acc, &ring.mul(&g.evaluate(&a), &h.evaluate(&b)));
                }
                assert_eq!(acc, f.evaluate(&a.mul(&b)));
            }
        }
    }

    #[test]
    fn dual_product_of_evaluations() {
        let ring = z();
        let fam = group_like_zx();
        let ev2 = DualElement::evaluation_at(fam.clone(), &[ring.from_i64(2)]).unwrap();
        let ev3 = DualElement::evaluation_at(fam.clone(), &[ring.from_i64(3)]).unwrap();
        let prod = dual_multiply(&ev2, &ev3).unwrap();
        let ev6 = DualElement::evaluation_at(fam, &[ring.from_i64(6)]).unwrap();
        assert!(prod.dual_equal(&ev6).unwrap());
    }

    #[test]
    fn dual_unit_is_convolution_identity() {
        let ring = z();
        let fam = group_like_zx();
        let unit = dual_unit(&fam).unwrap();
        assert_eq!(fmt_coeff(&dual_counit(&unit)), "1");
        let ev5 = DualElement::evaluation_at(fam, &[ring.from_i64(5)]).unwrap();
        let prod = dual_multiply(&unit, &ev5).unwrap();
        assert!(prod.dual_equal(&ev5).unwrap());
    }

    #[test]
    fn primitive_dual_product_divided_powers() {
        let ring = z();
        let fam = primitive_zx();
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[0, 0, 1])]).unwrap();
        let xstar = DualElement::dual_basis(fam, ideal, 1).unwrap();
        let sq = dual_multiply(&xstar, &xstar).unwrap();
        // (x* x*)(x^k) = binomial(k,1) delta pattern: value 2 at x^2.
        let vals: Vec<String> = (0..4)
            .map(|k| fmt_coeff(&sq.evaluate(&MultiPoly::monomial(&ring, 1, 0, k, ring.one()))))
            .collect();
        assert_eq!(vals, vec!["0", "0", "2", "0"]);
    }

    #[test]
    fn laurent_antipode_inverts_evaluations() {
        let ring = z();
        let fam = FilteredAlgebra::laurent(&ring, &["x"], true);
        let evm1 = DualElement::evaluation_at(fam.clone(), &[ring.from_i64(-1)]).unwrap();
        let s = dual_antipode(&evm1).unwrap();
        // (-1)^{-1} = -1.
        assert!(s.dual_equal(&evm1).unwrap());
        // Antipode is f o S: on x it reads off x^{-1}.
        let x = MultiPoly::var(&ring, 1, 0);
        assert_eq!(s.evaluate(&x), evm1.evaluate(&x.invert_variables()));
    }

    #[test]
    fn primitive_antipode_signs() {
        let ring = z();
        let fam = primitive_zx();
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[0, 0, 1])]).unwrap();
        let xstar = DualElement::dual_basis(fam, ideal, 1).unwrap();
        let s = dual_antipode(&xstar).unwrap();
        let x = MultiPoly::var(&ring, 1, 0);
        assert_eq!(fmt_coeff(&s.evaluate(&x)), "-1");
    }

    #[test]
    fn bimodule_actions() {
        let ring = z();
        let fam = group_like_zx();
        let ev1 = DualElement::evaluation_at(fam.clone(), &[ring.one()]).unwrap();
        let x = MultiPoly::var(&ring, 1, 0);
        let acted = bimodule_action(true, &x, &ev1);
        assert!(acted.dual_equal(&ev1).unwrap());

        // Primitive: x acting on x* mod (x^2) gives 1*.
        let pfam = primitive_zx();
        let ideal = IdealSpec::new(pfam.clone(), vec![upoly(&ring, &[0, 0, 1])]).unwrap();
        let xstar = DualElement::dual_basis(pfam.clone(), ideal.clone(), 1).unwrap();
        let moved = bimodule_action(true, &x, &xstar);
        let onestar = DualElement::dual_basis(pfam, ideal, 0).unwrap();
        assert!(moved.dual_equal(&onestar).unwrap());
    }

    #[test]
    fn left_module_axiom_for_actions() {
        let ring = z();
        let fam = primitive_zx();
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[0, 0, 0, 1])]).unwrap();
        let f = DualElement::new(
            fam,
            ideal,
            vec![ring.from_i64(2), ring.from_i64(-1), ring.from_i64(3)],
        )
        .unwrap();
        let a = upoly(&ring, &[1, 2]);
        let b = upoly(&ring, &[0, 0, 1]);
        let ab = a.mul(&b);
        let lhs = bimodule_action(true, &a, &bimodule_action(true, &b, &f));
        let rhs = bimodule_action(true, &ab, &f);
        assert!(lhs.dual_equal(&rhs).unwrap());
    }

    #[test]
    fn tensor_round_trip() {
        let ring = z();
        let fam = group_like_zx();
        let ev1 = DualElement::evaluation_at(fam.clone(), &[ring.one()]).unwrap();
        let evm1 = DualElement::evaluation_at(fam.clone(), &[ring.from_i64(-1)]).unwrap();
        let (_tf, h) = tensor_dual_forward(&ev1, &evm1).unwrap();
        let pairs = tensor_dual_split(&h, &fam, &fam).unwrap();
        assert_eq!(pairs.len(), 1);
        assert!(pairs[0].0.dual_equal(&ev1).unwrap());
        assert!(pairs[0].1.dual_equal(&evm1).unwrap());
    }

    #[test]
    fn tensor_split_from_generator_list() {
        let ring = z();
        let a = FilteredAlgebra::polynomial(&ring, &["x"], Some(BialgebraFlavor::GroupLike));
        let b = FilteredAlgebra::polynomial(&ring, &["y"], Some(BialgebraFlavor::GroupLike));
        let t = a.tensor(&b).unwrap();
        // K = (x, y): h(1 (x) 1) = 1 splits as ev_0 (x) ev_0.
        let gens = vec![
            MultiPoly::var(&ring, 2, 0),
            MultiPoly::var(&ring, 2, 1),
        ];
        let pairs = tensor_dual_split_from_generators(
            &t,
            &gens,
            |trunc| {
                assert_eq!(trunc.rank(), 1);
                vec![ring.one()]
            },
            &a,
            &b,
            8,
        )
        .unwrap();
        assert_eq!(pairs.len(), 1);
        let ev0a = DualElement::evaluation_at(a, &[ring.zero()]).unwrap();
        let ev0b = DualElement::evaluation_at(b, &[ring.zero()]).unwrap();
        assert!(pairs[0].0.dual_equal(&ev0a).unwrap());
        assert!(pairs[0].1.dual_equal(&ev0b).unwrap());
    }

    #[test]
    fn purity_probe_free_case() {
        let ring = z();
        let fam = group_like_zx();
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 0, 1])]).unwrap();
        let x = FPModule::cyclic(&ring, 2);
        let report = purity_probe_family(&fam, &ideal, &x).unwrap();
        assert!(report.injective);
        // X = R is always injective.
        let r = FPModule::free(&ring, 1);
        let report = purity_probe_family(&fam, &ideal, &r).unwrap();
        assert!(report.injective);
    }

    #[test]
    fn z4_fixture_quotient() {
        let z4 = CoeffRing::integers_mod(4).unwrap();
        // H = Z4[x]/(2x), truncated below x^3.
        let gens = vec![
            MultiPoly::from_univariate(&z4, 1, 0, &[z4.zero(), z4.from_i64(2)]),
            MultiPoly::from_univariate(
                &z4,
                1,
                0,
                &[z4.zero(), z4.zero(), z4.zero(), z4.one()],
            ),
        ];
        let tq = truncated_quotient(&z4, &gens).unwrap();
        assert_eq!(tq.monic_degree(), 3);
        // Z4 + Z2 + Z2: 16 elements.
        assert_eq!(tq.module.enumerate_elements().unwrap().len(), 16);
        let hist = tq.dual_order_histogram().unwrap();
        let total: usize = hist.iter().map(|(_, c)| c).sum();
        assert_eq!(total, 16);
        // The counit-like functional 1* has additive order 4, so not every
        // dual element has order 2.
        assert!(hist
            .iter()
            .any(|(o, _)| matches!(o, Order::Finite(k) if k == &num::BigInt::from(4))));
    }
}
