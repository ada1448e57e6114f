//! Filtered algebras: infinite algebras described by a family descriptor
//! together with a cofinal set of cofinite ideals whose quotients are free
//! of finite rank.
//!
//! Free families cover multivariate polynomial and Laurent polynomial rings
//! (each variable independently plain or invertible); finite families wrap
//! group algebras and skew group algebras, where the zero ideal already has
//! a free quotient. Tensor products of free families concatenate variables.

use crate::algebra::{group_algebra, skew_group_algebra, AlgebraError, GroupTable, SCAlgebra};
use crate::matrix::{flatten_index, RMatrix};
use crate::normal_form::{canonical_row_form, solve_left, span_contains};
use crate::poly::MultiPoly;
use crate::ring::{Coeff, CoeffRing};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not reversible: constant term is not a unit")]
    NotReversible,
    #[error("no monic generator found for variable {0} within the search bound")]
    NotCofinite(String),
    #[error("operation not supported for this family: {0}")]
    Unsupported(String),
    #[error("ring mismatch")]
    RingMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Poly,
    Laurent,
}

/// The two canonical comultiplications carried by a free family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BialgebraFlavor {
    GroupLike,
    Primitive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilteredAlgebra {
    Free {
        ring: CoeffRing,
        vars: Vec<(String, VarKind)>,
        flavor: Option<BialgebraFlavor>,
    },
    GroupAlgebra {
        ring: CoeffRing,
        table: GroupTable,
    },
    SkewGroup {
        base: SCAlgebra,
        table: GroupTable,
        action: Vec<RMatrix>,
    },
}

impl FilteredAlgebra {
    pub fn polynomial(ring: &CoeffRing, vars: &[&str], flavor: Option<BialgebraFlavor>) -> Self {
        FilteredAlgebra::Free {
            ring: ring.clone(),
            vars: vars.iter().map(|v| (v.to_string(), VarKind::Poly)).collect(),
            flavor,
        }
    }

    /// Laurent polynomials only carry the group-like structure: the variable
    /// must stay invertible under comultiplication.
    pub fn laurent(ring: &CoeffRing, vars: &[&str], group_like: bool) -> Self {
        FilteredAlgebra::Free {
            ring: ring.clone(),
            vars: vars.iter().map(|v| (v.to_string(), VarKind::Laurent)).collect(),
            flavor: group_like.then_some(BialgebraFlavor::GroupLike),
        }
    }

    pub fn group(ring: &CoeffRing, table: GroupTable) -> Self {
        FilteredAlgebra::GroupAlgebra { ring: ring.clone(), table }
    }

    pub fn skew_group(
        base: SCAlgebra,
        table: GroupTable,
        action: Vec<RMatrix>,
    ) -> Result<Self, FamilyError> {
        // Validation happens by building the finite-rank algebra once.
        skew_group_algebra(&base, &table, &action)?;
        Ok(FilteredAlgebra::SkewGroup { base, table, action })
    }

    pub fn ring(&self) -> &CoeffRing {
        match self {
            FilteredAlgebra::Free { ring, .. } | FilteredAlgebra::GroupAlgebra { ring, .. } => ring,
            FilteredAlgebra::SkewGroup { base, .. } => base.ring(),
        }
    }

    pub fn flavor(&self) -> Option<BialgebraFlavor> {
        match self {
            FilteredAlgebra::Free { flavor, .. } => *flavor,
            // Finite group algebras are group-like on the group basis.
            FilteredAlgebra::GroupAlgebra { .. } => Some(BialgebraFlavor::GroupLike),
            FilteredAlgebra::SkewGroup { .. } => None,
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            FilteredAlgebra::Free { vars, .. } => vars.len(),
            _ => 0,
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        match self {
            FilteredAlgebra::Free { vars, .. } => vars.iter().map(|(n, _)| n.clone()).collect(),
            _ => Vec::new(),
        }
    }

    pub fn var_kind(&self, v: usize) -> VarKind {
        match self {
            FilteredAlgebra::Free { vars, .. } => vars[v].1,
            _ => panic!("finite family has no variables"),
        }
    }

    /// Tensor product of two free families: variables are concatenated and
    /// the flavor is kept only when both sides agree.
    pub fn tensor(&self, other: &FilteredAlgebra) -> Result<FilteredAlgebra, FamilyError> {
        match (self, other) {
            (
                FilteredAlgebra::Free { ring, vars, flavor },
                FilteredAlgebra::Free { ring: r2, vars: v2, flavor: f2 },
            ) => {
                if ring != r2 {
                    return Err(FamilyError::RingMismatch);
                }
                let mut vars = vars.clone();
                for (name, kind) in v2 {
                    let mut name = name.clone();
                    while vars.iter().any(|(n, _)| n == &name) {
                        name.push('\'');
                    }
                    vars.push((name, *kind));
                }
                Ok(FilteredAlgebra::Free {
                    ring: ring.clone(),
                    vars,
                    flavor: if flavor == f2 { *flavor } else { None },
                })
            }
            _ => Err(FamilyError::Unsupported(
                "tensor products are formed between free families".into(),
            )),
        }
    }

    /// Lift a polynomial of this family into the left leg of a tensor family.
    pub fn embed_left(&self, p: &MultiPoly, total_vars: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(p.ring(), total_vars);
        for (e, c) in p.terms() {
            let mut exp = vec![0i64; total_vars];
            exp[..e.len()].copy_from_slice(e);
            out.add_term(exp, c.clone());
        }
        out
    }

    pub fn embed_right(&self, p: &MultiPoly, total_vars: usize, offset: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(p.ring(), total_vars);
        for (e, c) in p.terms() {
            let mut exp = vec![0i64; total_vars];
            exp[offset..offset + e.len()].copy_from_slice(e);
            out.add_term(exp, c.clone());
        }
        out
    }
}

/// A cofinite ideal given in triangular form: one monic univariate generator
/// per variable (reversible on Laurent variables). Finite families only
/// admit the zero ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    owner: FilteredAlgebra,
    gens: Vec<MultiPoly>,
}

impl IdealSpec {
    pub fn new(owner: FilteredAlgebra, gens: Vec<MultiPoly>) -> Result<Self, FamilyError> {
        match &owner {
            FilteredAlgebra::Free { ring, vars, .. } => {
                if gens.len() != vars.len() {
                    return Err(FamilyError::InvalidIdeal(format!(
                        "need one generator per variable, got {} for {} variables",
                        gens.len(),
                        vars.len()
                    )));
                }
                for (v, g) in gens.iter().enumerate() {
                    if g.ring() != ring || g.nvars() != vars.len() {
                        return Err(FamilyError::InvalidIdeal("generator shape".into()));
                    }
                    if !g.is_monic_univariate(v) {
                        return Err(FamilyError::InvalidIdeal(format!(
                            "generator for {} must be monic and univariate in it",
                            vars[v].0
                        )));
                    }
                    if vars[v].1 == VarKind::Laurent && !is_reversible(g, v)? {
                        return Err(FamilyError::InvalidIdeal(format!(
                            "generator for invertible variable {} must be reversible",
                            vars[v].0
                        )));
                    }
                }
                Ok(IdealSpec { owner, gens })
            }
            _ => {
                if !gens.is_empty() {
                    return Err(FamilyError::InvalidIdeal(
                        "finite families only support the zero ideal".into(),
                    ));
                }
                Ok(IdealSpec { owner, gens })
            }
        }
    }

    pub fn zero(owner: FilteredAlgebra) -> Result<Self, FamilyError> {
        Self::new(owner, Vec::new())
    }

    pub fn owner(&self) -> &FilteredAlgebra {
        &self.owner
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn degree(&self, v: usize) -> usize {
        self.gens[v].max_exponent(v).unwrap_or(0) as usize
    }

    /// Product ideal: generated per variable by the products of generators.
    /// Always contained in both factors, so it refines both.
    pub fn product(&self, other: &IdealSpec) -> Result<IdealSpec, FamilyError> {
        if self.owner != other.owner {
            return Err(FamilyError::InvalidIdeal("owners differ".into()));
        }
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(f, g)| f.mul(g))
            .collect();
        IdealSpec::new(self.owner.clone(), gens)
    }

    /// True when `other` is contained in this ideal; in triangular form that
    /// is divisibility of the matching generators.
    pub fn contains(&self, other: &IdealSpec) -> bool {
        if self.owner != other.owner {
            return false;
        }
        self.gens.iter().enumerate().all(|(v, f)| {
            let (_, r) = poly_divmod_univariate(&other.gens[v], f, v);
            r.is_zero()
        })
    }

    /// Combine the per-factor ideals of a tensor family.
    pub fn tensor_pair(
        family: &FilteredAlgebra,
        left: &IdealSpec,
        right: &IdealSpec,
    ) -> Result<IdealSpec, FamilyError> {
        let nl = left.owner.nvars();
        let total = family.nvars();
        let mut gens = Vec::new();
        for g in &left.gens {
            gens.push(left.owner.embed_left(g, total));
        }
        for g in &right.gens {
            gens.push(right.owner.embed_right(g, total, nl));
        }
        IdealSpec::new(family.clone(), gens)
    }
}

/// Division of `p` by a monic univariate `f` in variable `v`, treating the
/// other variables as coefficients. Returns (quotient, remainder).
pub fn poly_divmod_univariate(p: &MultiPoly, f: &MultiPoly, v: usize) -> (MultiPoly, MultiPoly) {
    let ring = p.ring().clone();
    let d = f.max_exponent(v).unwrap_or(0);
    assert!(d > 0, "divisor must be nonconstant");
    let mut rem = p.clone();
    let mut quot = MultiPoly::zero(&ring, p.nvars());
    loop {
        let Some((exp, c)) = rem
            .terms()
            .find(|(e, _)| e[v] >= d)
            .map(|(e, c)| (e.clone(), c.clone()))
        else {
            return (quot, rem);
        };
        let mut shift = exp.clone();
        shift[v] -= d;
        let mut mono = MultiPoly::zero(&ring, p.nvars());
        mono.add_term(shift, c);
        quot = quot.add(&mono);
        rem = rem.sub(&mono.mul(f));
    }
}

/// True when the monic univariate polynomial has a unit constant term.
pub fn is_reversible(q: &MultiPoly, v: usize) -> Result<bool, FamilyError> {
    if !q.is_monic_univariate(v) {
        return Err(FamilyError::NotMonic);
    }
    let zero_exp = vec![0i64; q.nvars()];
    Ok(q.ring().is_unit(&q.coefficient(&zero_exp)))
}

/// The free quotient A/I of a filtered algebra by a triangular ideal,
/// carrying the monomial basis and the reduction map.
#[derive(Debug, Clone)]
pub struct Truncation {
    family: FilteredAlgebra,
    ideal: IdealSpec,
    algebra: SCAlgebra,
    dims: Vec<usize>,
    /// Per Laurent variable, the polynomial representing its inverse.
    inverses: Vec<Option<MultiPoly>>,
}

/// Build the free quotient and its projection data.
pub fn truncate(family: &FilteredAlgebra, ideal: &IdealSpec) -> Result<Truncation, FamilyError> {
    if ideal.owner() != family {
        return Err(FamilyError::InvalidIdeal("ideal belongs to another family".into()));
    }
    match family {
        FilteredAlgebra::Free { ring, vars, .. } => {
            let n = vars.len();
            let dims: Vec<usize> = (0..n).map(|v| ideal.degree(v)).collect();
            if dims.iter().any(|&d| d == 0) {
                return Err(FamilyError::InvalidIdeal("constant generator".into()));
            }
            let mut inverses = vec![None; n];
            for v in 0..n {
                if vars[v].1 == VarKind::Laurent {
                    inverses[v] = Some(inverse_image(&ideal.gens[v], v)?);
                }
            }
            let rank: usize = dims.iter().product();
            let reduce = |p: &MultiPoly| reduce_poly(ring, &dims, &ideal.gens, &inverses, p);
            let coords = |p: &MultiPoly| poly_coords(ring, &dims, p);

            let mut mult = RMatrix::zeros(ring, rank * rank, rank);
            for a in 0..rank {
                let ea = exp_of_index(&dims, a);
                for b in 0..rank {
                    let eb = exp_of_index(&dims, b);
                    let mut prod = MultiPoly::zero(ring, n);
                    let sum: Vec<i64> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                    prod.add_term(sum, ring.one());
                    let red = reduce(&prod);
                    let row = coords(&red);
                    for k in 0..rank {
                        mult.set(a * rank + b, k, row[k].clone());
                    }
                }
            }
            let unit = RMatrix::from_fn(ring, 1, rank, |_, j| {
                if j == 0 {
                    ring.one()
                } else {
                    ring.zero()
                }
            });
            let names = family.var_names();
            let labels = (0..rank)
                .map(|k| monomial_label(&names, &exp_of_index(&dims, k)))
                .collect();
            let algebra = SCAlgebra::new(ring, labels, mult, unit)?;
            Ok(Truncation {
                family: family.clone(),
                ideal: ideal.clone(),
                algebra,
                dims,
                inverses,
            })
        }
        FilteredAlgebra::GroupAlgebra { ring, table } => {
            let algebra = group_algebra(ring, table);
            Ok(Truncation {
                family: family.clone(),
                ideal: ideal.clone(),
                algebra,
                dims: Vec::new(),
                inverses: Vec::new(),
            })
        }
        FilteredAlgebra::SkewGroup { base, table, action } => {
            let algebra = skew_group_algebra(base, table, action)?;
            Ok(Truncation {
                family: family.clone(),
                ideal: ideal.clone(),
                algebra,
                dims: Vec::new(),
                inverses: Vec::new(),
            })
        }
    }
}

fn monomial_label(names: &[String], exp: &[i64]) -> String {
    let mut parts = Vec::new();
    for (v, &k) in exp.iter().enumerate() {
        if k == 1 {
            parts.push(names[v].clone());
        } else if k != 0 {
            parts.push(format!("{}^{}", names[v], k));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn exp_of_index(dims: &[usize], mut idx: usize) -> Vec<i64> {
    let mut exp = vec![0i64; dims.len()];
    for v in (0..dims.len()).rev() {
        exp[v] = (idx % dims[v]) as i64;
        idx /= dims[v];
    }
    exp
}

fn poly_coords(ring: &CoeffRing, dims: &[usize], p: &MultiPoly) -> Vec<Coeff> {
    let rank: usize = dims.iter().product();
    let mut out = vec![ring.zero(); rank];
    for (e, c) in p.terms() {
        let idx: Vec<usize> = e.iter().map(|&k| k as usize).collect();
        out[flatten_index(dims, &idx)] = c.clone();
    }
    out
}

/// Inverse of x_v modulo a reversible generator, from the closed form
/// y = -a0^{-1} (x^{n-1} + a_{n-1} x^{n-2} + ... + a_1).
pub fn inverse_image(q: &MultiPoly, v: usize) -> Result<MultiPoly, FamilyError> {
    if !is_reversible(q, v)? {
        return Err(FamilyError::NotReversible);
    }
    let ring = q.ring().clone();
    let coeffs = q.univariate_coeffs(v).expect("validated univariate");
    let n = coeffs.len() - 1;
    let a0_inv = ring.inv(&coeffs[0]).expect("reversible constant term");
    let neg = ring.neg(&a0_inv);
    let mut y = vec![ring.zero(); n];
    for j in 0..n {
        // Coefficient of x^j in the bracket is a_{j+1}, with a_n = 1.
        y[j] = ring.mul(&neg, &coeffs[j + 1]);
    }
    Ok(MultiPoly::from_univariate(&ring, q.nvars(), v, &y))
}

fn reduce_poly(
    ring: &CoeffRing,
    dims: &[usize],
    gens: &[MultiPoly],
    inverses: &[Option<MultiPoly>],
    p: &MultiPoly,
) -> MultiPoly {
    let n = dims.len();
    let mut p = p.clone();
    // Clear negative exponents variable by variable.
    for v in 0..n {
        loop {
            let Some((exp, c)) = p
                .terms()
                .find(|(e, _)| e[v] < 0)
                .map(|(e, c)| (e.clone(), c.clone()))
            else {
                break;
            };
            let k = (-exp[v]) as u32;
            let inv = inverses[v]
                .as_ref()
                .expect("negative exponent requires an invertible variable");
            let mut base_exp = exp.clone();
            base_exp[v] = 0;
            let mut mono = MultiPoly::zero(ring, n);
            mono.add_term(exp, c.clone());
            p = p.sub(&mono);
            let mut repl = MultiPoly::zero(ring, n);
            repl.add_term(base_exp, c);
            let inv_pow = univar_pow_mod(inv, k, &gens[v], v);
            p = p.add(&repl.mul(&inv_pow));
        }
    }
    // Monic reduction against each generator.
    for (v, g) in gens.iter().enumerate() {
        let (_, r) = poly_divmod_univariate(&p, g, v);
        p = r;
    }
    p
}

/// base^k reduced modulo a monic univariate generator at each step.
fn univar_pow_mod(base: &MultiPoly, k: u32, gen: &MultiPoly, v: usize) -> MultiPoly {
    let ring = base.ring().clone();
    let mut acc = MultiPoly::one(&ring, base.nvars());
    for _ in 0..k {
        acc = acc.mul(base);
        let (_, r) = poly_divmod_univariate(&acc, gen, v);
        acc = r;
    }
    acc
}

impl Truncation {
    pub fn family(&self) -> &FilteredAlgebra {
        &self.family
    }

    pub fn ideal(&self) -> &IdealSpec {
        &self.ideal
    }

    pub fn algebra(&self) -> &SCAlgebra {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.algebra.rank()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Exponent vector of a basis monomial.
    pub fn basis_exponent(&self, idx: usize) -> Vec<i64> {
        exp_of_index(&self.dims, idx)
    }

    /// Reduce an arbitrary element to its canonical representative.
    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        match &self.family {
            FilteredAlgebra::Free { ring, .. } => {
                reduce_poly(ring, &self.dims, &self.ideal.gens, &self.inverses, p)
            }
            _ => panic!("finite families carry coordinate elements, not polynomials"),
        }
    }

    /// Coordinates of an element in the quotient basis.
    pub fn project(&self, p: &MultiPoly) -> RMatrix {
        let ring = self.family.ring().clone();
        let red = self.reduce(p);
        RMatrix::row_vector(&ring, poly_coords(&ring, &self.dims, &red))
    }

    /// Coordinate row of the variable x_v.
    pub fn var_row(&self, v: usize) -> RMatrix {
        let ring = self.family.ring().clone();
        self.project(&MultiPoly::var(&ring, self.family.nvars(), v))
    }

    /// Matrix carrying the basis of a finer truncation (same family, smaller
    /// ideal) to coordinates in this truncation.
    pub fn projection_from(&self, finer: &Truncation) -> Result<RMatrix, FamilyError> {
        if finer.family != self.family {
            return Err(FamilyError::InvalidIdeal("family mismatch".into()));
        }
        if !self.ideal.contains(&finer.ideal) {
            return Err(FamilyError::InvalidIdeal(
                "projection requires the finer ideal to be contained in the coarser".into(),
            ));
        }
        let ring = self.family.ring().clone();
        let n = self.family.nvars();
        let mut rows = Vec::new();
        for idx in 0..finer.rank() {
            let exp = finer.basis_exponent(idx);
            let mut mono = MultiPoly::zero(&ring, n);
            mono.add_term(exp, ring.one());
            rows.push(self.project(&mono).row(0));
        }
        Ok(RMatrix::from_rows(&ring, rows))
    }
}

/// The closed-form Laurent inverse together with the verified isomorphism
/// between the polynomial and Laurent quotients by the same reversible
/// generator.
#[derive(Debug, Clone)]
pub struct LaurentIso {
    pub y_image: MultiPoly,
    pub polynomial_quotient: Truncation,
    pub laurent_quotient: Truncation,
    /// Basis-to-basis matrix of the isomorphism (the two quotients share the
    /// monomial basis, so this is the identity once verified).
    pub matrix: RMatrix,
}

/// Identify R[x]/(q) with R[x,1/x]/(q) for reversible q, returning the
/// polynomial that represents 1/x and the verified isomorphism.
pub fn laurent_poly_iso(ring: &CoeffRing, q_coeffs: &[Coeff]) -> Result<LaurentIso, FamilyError> {
    let q = MultiPoly::from_univariate(ring, 1, 0, q_coeffs);
    if !q.is_monic_univariate(0) {
        return Err(FamilyError::NotMonic);
    }
    if !is_reversible(&q, 0)? {
        return Err(FamilyError::NotReversible);
    }
    let y = inverse_image(&q, 0)?;

    let poly_fam = FilteredAlgebra::polynomial(ring, &["x"], None);
    let poly_ideal = IdealSpec::new(poly_fam.clone(), vec![q.clone()])?;
    let poly_trunc = truncate(&poly_fam, &poly_ideal)?;

    let laurent_fam = FilteredAlgebra::laurent(ring, &["x"], true);
    let laurent_ideal = IdealSpec::new(laurent_fam.clone(), vec![q.clone()])?;
    let laurent_trunc = truncate(&laurent_fam, &laurent_ideal)?;

    // x * y must reduce to 1 in the polynomial quotient.
    let x = MultiPoly::var(ring, 1, 0);
    let prod = poly_trunc.reduce(&x.mul(&y));
    if prod != MultiPoly::one(ring, 1) {
        return Err(FamilyError::InvalidIdeal("x * y_image is not 1 modulo q".into()));
    }
    // The identity on the shared monomial basis must be multiplicative: the
    // two reduction paths give the same structure constants.
    if poly_trunc.algebra().mult() != laurent_trunc.algebra().mult() {
        return Err(FamilyError::InvalidIdeal(
            "polynomial and Laurent reductions disagree".into(),
        ));
    }
    // And x^{-1} in the Laurent quotient matches the closed form.
    let xinv = MultiPoly::monomial(ring, 1, 0, -1, ring.one());
    if laurent_trunc.project(&xinv) != poly_trunc.project(&y) {
        return Err(FamilyError::InvalidIdeal("inverse images disagree".into()));
    }
    let matrix = RMatrix::identity(ring, poly_trunc.rank());
    Ok(LaurentIso {
        y_image: y,
        polynomial_quotient: poly_trunc,
        laurent_quotient: laurent_trunc,
        matrix,
    })
}

/// q(x) = x^m (f1(x) + f2(1/x)) for monic f1, f2: a reversible polynomial
/// of degree deg f1 + deg f2 with constant term 1.
pub fn find_reversible_generator(
    f1: &MultiPoly,
    f2: &MultiPoly,
    v: usize,
) -> Result<MultiPoly, FamilyError> {
    if !f1.is_monic_univariate(v) || !f2.is_monic_univariate(v) {
        return Err(FamilyError::NotMonic);
    }
    let m = f2.max_exponent(v).unwrap_or(0);
    let s2 = f2.invert_variables();
    let q = f1.add(&s2).shift_var(v, m);
    if !is_reversible(&q, v)? {
        return Err(FamilyError::NotReversible);
    }
    Ok(q)
}

/// Monic univariate polynomial in variable `v` lying in the ideal generated
/// by `gens`, found degree by degree up to `bound`.
fn monic_in_ideal(
    ring: &CoeffRing,
    nvars: usize,
    v: usize,
    gens: &[MultiPoly],
    bound: usize,
) -> Option<MultiPoly> {
    for d in 1..=bound {
        // Shift generators by all monomials within a degree cap.
        let max_deg: i64 = gens
            .iter()
            .filter_map(|g| (0..nvars).filter_map(|w| g.max_exponent(w)).max())
            .max()
            .unwrap_or(0);
        let cap = d as i64 + max_deg;
        let mut shifted: Vec<MultiPoly> = Vec::new();
        let mut shift_exp = vec![0i64; nvars];
        loop {
            for g in gens {
                let mut mono = MultiPoly::zero(ring, nvars);
                mono.add_term(shift_exp.clone(), ring.one());
                let s = g.mul(&mono);
                // Discard shifts that already exceed the window.
                if (0..nvars).all(|w| s.max_exponent(w).unwrap_or(0) <= cap) {
                    shifted.push(s);
                }
            }
            // Advance the shift exponent within the box [0, cap]^nvars.
            let mut w = 0;
            loop {
                if w == nvars {
                    break;
                }
                shift_exp[w] += 1;
                if shift_exp[w] <= cap {
                    break;
                }
                shift_exp[w] = 0;
                w += 1;
            }
            if w == nvars {
                break;
            }
        }
        // Collect the monomial support.
        let mut monomials: Vec<Vec<i64>> = Vec::new();
        for s in &shifted {
            for (e, _) in s.terms() {
                if !monomials.contains(e) {
                    monomials.push(e.clone());
                }
            }
        }
        for j in 0..=d {
            let mut e = vec![0i64; nvars];
            e[v] = j as i64;
            if !monomials.contains(&e) {
                monomials.push(e);
            }
        }
        monomials.sort();
        let col_of = |e: &Vec<i64>| monomials.binary_search(e).expect("collected");

        let mut rows: Vec<Vec<Coeff>> = Vec::new();
        for s in &shifted {
            let mut row = vec![ring.zero(); monomials.len()];
            for (e, c) in s.terms() {
                row[col_of(e)] = c.clone();
            }
            rows.push(row);
        }
        // Allow arbitrary lower coefficients in x_v.
        for j in 0..d {
            let mut e = vec![0i64; nvars];
            e[v] = j as i64;
            let mut row = vec![ring.zero(); monomials.len()];
            row[col_of(&e)] = ring.one();
            rows.push(row);
        }
        let span = RMatrix::from_rows(ring, rows.clone());
        let span = if span.rows() == 0 {
            continue;
        } else {
            span
        };
        let mut target = vec![ring.zero(); monomials.len()];
        let mut e = vec![0i64; nvars];
        e[v] = d as i64;
        target[col_of(&e)] = ring.one();
        let canon = canonical_row_form(&span);
        if !span_contains(&canon, &target) {
            continue;
        }
        let rhs = RMatrix::row_vector(ring, target);
        let Ok(Some(sol)) = solve_left(&span, &rhs) else {
            continue;
        };
        // Reassemble: x^d minus the unit-row contributions is in the ideal.
        let mut w = MultiPoly::monomial(ring, nvars, v, d as i64, ring.one());
        let unit_rows_start = shifted.len();
        for j in 0..d {
            let c = sol.at(0, unit_rows_start + j);
            if !c.is_zero() {
                w = w.sub(&MultiPoly::monomial(ring, nvars, v, j as i64, c.clone()));
            }
        }
        return Some(w);
    }
    None
}

/// A left ideal inside the given one whose quotient is free of finite rank:
/// a monic generator per plain variable, a reversible generator per
/// invertible variable, and the zero ideal for finite families.
pub fn p_ell_witness(
    family: &FilteredAlgebra,
    generators: &[MultiPoly],
    bound: usize,
) -> Result<IdealSpec, FamilyError> {
    match family {
        FilteredAlgebra::Free { ring, vars, .. } => {
            let n = vars.len();
            let mut out = Vec::new();
            for v in 0..n {
                match vars[v].1 {
                    VarKind::Poly => {
                        let norm: Vec<MultiPoly> =
                            generators.iter().map(nonneg_normalize).collect();
                        let f = monic_in_ideal(ring, n, v, &norm, bound)
                            .ok_or_else(|| FamilyError::NotCofinite(vars[v].0.clone()))?;
                        out.push(f);
                    }
                    VarKind::Laurent => {
                        let norm: Vec<MultiPoly> =
                            generators.iter().map(nonneg_normalize).collect();
                        let f1 = monic_in_ideal(ring, n, v, &norm, bound)
                            .ok_or_else(|| FamilyError::NotCofinite(vars[v].0.clone()))?;
                        let mirrored: Vec<MultiPoly> = generators
                            .iter()
                            .map(|g| nonneg_normalize(&invert_one_var(g, v)))
                            .collect();
                        let f2 = monic_in_ideal(ring, n, v, &mirrored, bound)
                            .ok_or_else(|| FamilyError::NotCofinite(vars[v].0.clone()))?;
                        out.push(find_reversible_generator(&f1, &f2, v)?);
                    }
                }
            }
            IdealSpec::new(family.clone(), out)
        }
        _ => IdealSpec::zero(family.clone()),
    }
}

/// Multiply by a monomial so all exponents become nonnegative.
fn nonneg_normalize(p: &MultiPoly) -> MultiPoly {
    let mut out = p.clone();
    for v in 0..p.nvars() {
        let m = out.min_exponent(v).unwrap_or(0);
        if m < 0 {
            out = out.shift_var(v, -m);
        }
    }
    out
}

fn invert_one_var(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(p.ring(), p.nvars());
    for (e, c) in p.terms() {
        let mut e = e.clone();
        e[v] = -e[v];
        out.add_term(e, c.clone());
    }
    out
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

    #[test]
    fn truncate_evaluation_ideal() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], None);
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 1])]).unwrap();
        let t = truncate(&fam, &ideal).unwrap();
        assert_eq!(t.rank(), 1);
        // proj(p) = p(1): x^2 + 3 evaluates to 4.
        let p = upoly(&ring, &[3, 0, 1]);
        assert_eq!(fmt_coeff(t.project(&p).at(0, 0)), "4");
    }

    #[test]
    fn truncate_rank_two() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], None);
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 0, 1])]).unwrap();
        let t = truncate(&fam, &ideal).unwrap();
        assert_eq!(t.rank(), 2);
        // x * x = 1 in the quotient by x^2 - 1.
        let alg = t.algebra();
        assert_eq!(alg.mul_rows(&alg.basis_row(1), &alg.basis_row(1)), alg.basis_row(0));
    }

    #[test]
    fn truncate_projection_is_multiplicative() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], None);
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[2, -1, 0, 1])]).unwrap();
        let t = truncate(&fam, &ideal).unwrap();
        let p = upoly(&ring, &[1, 2, 3, 4]);
        let q = upoly(&ring, &[-2, 0, 5]);
        let lhs = t.project(&p.mul(&q));
        let rhs = t.algebra().mul_rows(&t.project(&p), &t.project(&q));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn laurent_truncation_negative_powers() {
        let ring = z();
        let fam = FilteredAlgebra::laurent(&ring, &["x"], true);
        // (x - 1)^2 = x^2 - 2x + 1 is reversible.
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[1, -2, 1])]).unwrap();
        let t = truncate(&fam, &ideal).unwrap();
        assert_eq!(t.rank(), 2);
        // 1/x = 2 - x modulo (x-1)^2.
        let xinv = MultiPoly::monomial(&ring, 1, 0, -1, ring.one());
        let row = t.project(&xinv);
        assert_eq!(fmt_coeff(row.at(0, 0)), "2");
        assert_eq!(fmt_coeff(row.at(0, 1)), "-1");
    }

    #[test]
    fn reversibility() {
        let ring = z();
        assert!(is_reversible(&upoly(&ring, &[-1, 1]), 0).unwrap());
        assert!(!is_reversible(&upoly(&ring, &[-2, 1]), 0).unwrap());
        let z4 = CoeffRing::integers_mod(4).unwrap();
        let q = MultiPoly::from_univariate(
            &z4,
            1,
            0,
            &[z4.from_i64(1), z4.from_i64(1), z4.from_i64(1)],
        );
        assert!(is_reversible(&q, 0).unwrap());
        assert!(matches!(
            is_reversible(&upoly(&ring, &[1, 2]), 0),
            Err(FamilyError::NotMonic)
        ));
    }

    #[test]
    fn laurent_iso_closed_form() {
        let ring = z();
        // q = x - 1: y = 1.
        let iso = laurent_poly_iso(&ring, &[ring.from_i64(-1), ring.one()]).unwrap();
        assert_eq!(iso.y_image, MultiPoly::one(&ring, 1));
        // q = x^2 - 1: y = x.
        let iso =
            laurent_poly_iso(&ring, &[ring.from_i64(-1), ring.zero(), ring.one()]).unwrap();
        assert_eq!(iso.y_image, MultiPoly::var(&ring, 1, 0));
        // q = x^2 - 3x + 1: y = 3 - x.
        let iso = laurent_poly_iso(
            &ring,
            &[ring.one(), ring.from_i64(-3), ring.one()],
        )
        .unwrap();
        let expect = upoly(&ring, &[3, -1]);
        assert_eq!(iso.y_image, expect);
    }

    #[test]
    fn reversible_generator_construction() {
        let ring = z();
        let f = upoly(&ring, &[-1, 1]); // x - 1
        let q = find_reversible_generator(&f, &f, 0).unwrap();
        assert_eq!(q, upoly(&ring, &[1, -2, 1]));

        let x = upoly(&ring, &[0, 1]);
        let q = find_reversible_generator(&x, &x, 0).unwrap();
        assert_eq!(q, upoly(&ring, &[1, 0, 1]));

        let f = upoly(&ring, &[1, 1]); // x + 1
        let q = find_reversible_generator(&f, &f, 0).unwrap();
        assert_eq!(q, upoly(&ring, &[1, 2, 1]));
    }

    #[test]
    fn p_ell_polynomial_cases() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], None);
        // I = (x - 1, 3): the monic x - 1 is found at degree 1.
        let gens = vec![upoly(&ring, &[-1, 1]), upoly(&ring, &[3])];
        let w = p_ell_witness(&fam, &gens, 8).unwrap();
        assert_eq!(w.generators()[0], upoly(&ring, &[-1, 1]));

        // I = (x^2): already monic.
        let gens = vec![upoly(&ring, &[0, 0, 1])];
        let w = p_ell_witness(&fam, &gens, 8).unwrap();
        assert_eq!(w.generators()[0], upoly(&ring, &[0, 0, 1]));
    }

    #[test]
    fn p_ell_laurent_case() {
        let ring = z();
        let fam = FilteredAlgebra::laurent(&ring, &["x"], true);
        // I = (x - 1): the construction returns (x-1)^2 = x((x-1) + (1/x - 1)).
        let gens = vec![upoly(&ring, &[-1, 1])];
        let w = p_ell_witness(&fam, &gens, 8).unwrap();
        assert_eq!(w.generators()[0], upoly(&ring, &[1, -2, 1]));
        assert!(is_reversible(&w.generators()[0], 0).unwrap());
    }

    #[test]
    fn p_ell_not_cofinite() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], None);
        // I = (2): contains no monic polynomial.
        let gens = vec![upoly(&ring, &[2])];
        assert!(matches!(
            p_ell_witness(&fam, &gens, 6),
            Err(FamilyError::NotCofinite(_))
        ));
    }

    #[test]
    fn ideal_containment_and_product() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], None);
        let i1 = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 1])]).unwrap();
        let i2 = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[1, -2, 1])]).unwrap();
        assert!(i1.contains(&i2)); // (x-1)^2 inside (x-1)
        assert!(!i2.contains(&i1));
        let prod = i1.product(&i2).unwrap();
        assert_eq!(prod.degree(0), 3);
        assert!(i1.contains(&prod));
        assert!(i2.contains(&prod));
    }

    #[test]
    fn tensor_family_and_pair_ideal() {
        let ring = z();
        let a = FilteredAlgebra::polynomial(&ring, &["x"], None);
        let b = FilteredAlgebra::polynomial(&ring, &["y"], None);
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.nvars(), 2);
        let ia = IdealSpec::new(a.clone(), vec![upoly(&ring, &[-1, 1])]).unwrap();
        let ib = IdealSpec::new(b.clone(), vec![upoly(&ring, &[1, 1])]).unwrap();
        let pair = IdealSpec::tensor_pair(&t, &ia, &ib).unwrap();
        let trunc = truncate(&t, &pair).unwrap();
        assert_eq!(trunc.rank(), 1);
    }

    #[test]
    fn refinement_projection() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], None);
        let coarse = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 1])]).unwrap();
        let fine = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 0, 1])]).unwrap();
        let tc = truncate(&fam, &coarse).unwrap();
        let tf = truncate(&fam, &fine).unwrap();
        let p = tc.projection_from(&tf).unwrap();
        // Basis {1, x} of the finer quotient both map to 1 at x = 1.
        assert_eq!(p.rows(), 2);
        assert_eq!(fmt_coeff(p.at(0, 0)), "1");
        assert_eq!(fmt_coeff(p.at(1, 0)), "1");
    }
}
