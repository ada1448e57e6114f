//! Coalgebra, bialgebra, and Hopf-algebra structure data on free modules of
//! finite rank, with exhaustive axiom verification.
//!
//! Linear maps follow the row-vector convention: comultiplication is an
//! n x n^2 matrix, the counit an n x 1 column. Axiom checks compare whole
//! structure matrices and report the first offending basis tuple, so a
//! failed check always carries a witness.

use crate::algebra::{group_algebra, GroupTable, SCAlgebra};
use crate::families::{
    truncate, BialgebraFlavor, FamilyError, FilteredAlgebra, IdealSpec, Truncation, VarKind,
};
use crate::matrix::{tensor_shuffle, RMatrix};
use crate::poly::MultiPoly;
use crate::ring::{Coeff, CoeffRing};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("rank or ring mismatch between algebra and coalgebra data")]
    StructureMismatch,
    #[error("ideal is not a coideal for the {flavor:?} structure: {witness}")]
    NotACoideal { flavor: BialgebraFlavor, witness: String },
    #[error("shape mismatch: {0}")]
    BadShape(String),
}

/// One failed axiom with the basis tuple where it first breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub law: String,
    pub witness: Vec<usize>,
}

impl std::fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} fails at basis tuple {:?}", self.law, self.witness)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, law: &str, witness: Vec<usize>) {
        self.failures.push(AxiomFailure { law: law.into(), witness });
    }

    /// Compare two structure matrices row by row, decoding the row index
    /// into a basis tuple of the given arity.
    fn compare(&mut self, law: &str, lhs: &RMatrix, rhs: &RMatrix, dims: &[usize]) {
        if lhs == rhs {
            return;
        }
        for r in 0..lhs.rows() {
            if lhs.row(r) != rhs.row(r) {
                self.record(law, crate::matrix::unflatten_index(dims, r));
                return;
            }
        }
    }
}

/// Comultiplication and counit on a free module of finite rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalgebraData {
    ring: CoeffRing,
    rank: usize,
    labels: Vec<String>,
    comult: RMatrix,
    counit: RMatrix,
}

impl CoalgebraData {
    pub fn new_unchecked(
        ring: &CoeffRing,
        labels: Vec<String>,
        comult: RMatrix,
        counit: RMatrix,
    ) -> Result<Self, HopfError> {
        let rank = labels.len();
        if comult.rows() != rank || comult.cols() != rank * rank {
            return Err(HopfError::BadShape(format!(
                "comultiplication must be {rank}x{}",
                rank * rank
            )));
        }
        if counit.rows() != rank || counit.cols() != 1 {
            return Err(HopfError::BadShape("counit must be a rank x 1 column".into()));
        }
        if comult.ring() != ring || counit.ring() != ring {
            return Err(HopfError::StructureMismatch);
        }
        Ok(CoalgebraData { ring: ring.clone(), rank, labels, comult, counit })
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn comult(&self) -> &RMatrix {
        &self.comult
    }

    pub fn counit(&self) -> &RMatrix {
        &self.counit
    }

    /// Tensor coalgebra with interleaved legs.
    pub fn tensor(&self, other: &CoalgebraData) -> Result<CoalgebraData, HopfError> {
        if self.ring != other.ring {
            return Err(HopfError::StructureMismatch);
        }
        let (nc, nd) = (self.rank, other.rank);
        let shuffle = tensor_shuffle(&self.ring, &[nc, nc, nd, nd], &[0, 2, 1, 3]);
        let comult = self
            .comult
            .kronecker(&other.comult)
            .expect("same ring")
            .mul(&shuffle)
            .expect("shapes");
        let counit = self.counit.kronecker(&other.counit).expect("same ring");
        let labels = crate::algebra::tensor_labels(&self.labels, &other.labels);
        CoalgebraData::new_unchecked(&self.ring, labels, comult, counit)
    }
}

/// Coassociativity and both counit laws, exhaustively on the basis.
pub fn check_coalgebra(c: &CoalgebraData) -> AxiomReport {
    let mut report = AxiomReport::default();
    let n = c.rank;
    let id = RMatrix::identity(&c.ring, n);
    let lhs = c.comult.mul(&c.comult.kronecker(&id).expect("ring")).expect("shapes");
    let rhs = c.comult.mul(&id.kronecker(&c.comult).expect("ring")).expect("shapes");
    report.compare("coassociativity", &lhs, &rhs, &[n]);

    let left = c.comult.mul(&c.counit.kronecker(&id).expect("ring")).expect("shapes");
    let right = c.comult.mul(&id.kronecker(&c.counit).expect("ring")).expect("shapes");
    report.compare("left counit law", &left, &id, &[n]);
    report.compare("right counit law", &right, &id, &[n]);
    report
}

/// Algebra and coalgebra on the same free module, with an optional antipode.
/// Bialgebra-only data simply leaves the antipode out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfData {
    pub alg: SCAlgebra,
    pub coalg: CoalgebraData,
    pub antipode: Option<RMatrix>,
}

impl HopfData {
    pub fn new_unchecked(
        alg: SCAlgebra,
        coalg: CoalgebraData,
        antipode: Option<RMatrix>,
    ) -> Result<Self, HopfError> {
        if alg.rank() != coalg.rank() || alg.ring() != coalg.ring() {
            return Err(HopfError::StructureMismatch);
        }
        if let Some(s) = &antipode {
            if s.rows() != alg.rank() || s.cols() != alg.rank() {
                return Err(HopfError::BadShape("antipode must be rank x rank".into()));
            }
        }
        Ok(HopfData { alg, coalg, antipode })
    }

    pub fn ring(&self) -> &CoeffRing {
        self.alg.ring()
    }

    pub fn rank(&self) -> usize {
        self.alg.rank()
    }

    pub fn is_cocommutative(&self) -> bool {
        let n = self.rank();
        let flip = tensor_shuffle(self.ring(), &[n, n], &[1, 0]);
        self.coalg.comult().mul(&flip).expect("shapes") == *self.coalg.comult()
    }
}

/// Bialgebra compatibility plus the antipode identity when one is present.
/// The underlying algebra and coalgebra are revalidated as well.
pub fn check_hopf(h: &HopfData) -> AxiomReport {
    let mut report = check_coalgebra(&h.coalg);
    let ring = h.ring().clone();
    let n = h.rank();
    let m = h.alg.mult();
    let delta = h.coalg.comult();
    let eps = h.coalg.counit();
    let unit = h.alg.unit_row();
    let id = RMatrix::identity(&ring, n);

    // Comultiplication is multiplicative.
    let lhs = m.mul(delta).expect("shapes");
    let shuffle = tensor_shuffle(&ring, &[n, n, n, n], &[0, 2, 1, 3]);
    let rhs = delta
        .kronecker(delta)
        .expect("ring")
        .mul(&shuffle)
        .expect("shapes")
        .mul(&m.kronecker(m).expect("ring"))
        .expect("shapes");
    report.compare("comultiplication of a product", &lhs, &rhs, &[n, n]);

    // Delta(1) = 1 (x) 1 and eps is a multiplicative unit map.
    let d1 = unit.mul(delta).expect("shapes");
    let u2 = unit.kronecker(unit).expect("ring");
    report.compare("comultiplication of the unit", &d1, &u2, &[1]);

    let e_mult = m.mul(eps).expect("shapes");
    let e_pair = eps.kronecker(eps).expect("ring");
    report.compare("counit of a product", &e_mult, &e_pair, &[n, n]);

    let e1 = unit.mul(eps).expect("shapes");
    let one = RMatrix::identity(&ring, 1);
    report.compare("counit of the unit", &e1, &one, &[1]);

    if let Some(s) = &h.antipode {
        let target = eps.mul(unit).expect("shapes");
        let left = delta
            .mul(&s.kronecker(&id).expect("ring"))
            .expect("shapes")
            .mul(m)
            .expect("shapes");
        let right = delta
            .mul(&id.kronecker(s).expect("ring"))
            .expect("shapes")
            .mul(m)
            .expect("shapes");
        report.compare("left antipode identity", &left, &target, &[n]);
        report.compare("right antipode identity", &right, &target, &[n]);
    }
    report
}

/// Group algebra Hopf structure: group-likes, counit 1, inverse antipode.
pub fn group_hopf(ring: &CoeffRing, table: &GroupTable) -> HopfData {
    let alg = group_algebra(ring, table);
    let n = table.order();
    let mut comult = RMatrix::zeros(ring, n, n * n);
    let mut counit = RMatrix::zeros(ring, n, 1);
    let mut antipode = RMatrix::zeros(ring, n, n);
    for g in 0..n {
        comult.set(g, g * n + g, ring.one());
        counit.set(g, 0, ring.one());
        antipode.set(g, table.inverse(g), ring.one());
    }
    let coalg = CoalgebraData::new_unchecked(ring, table.labels().to_vec(), comult, counit)
        .expect("shapes");
    HopfData::new_unchecked(alg, coalg, Some(antipode)).expect("shapes")
}

/// Convolution product of two maps C -> A.
pub fn convolution_product(
    c: &CoalgebraData,
    a: &SCAlgebra,
    f: &RMatrix,
    g: &RMatrix,
) -> Result<RMatrix, HopfError> {
    if c.ring() != a.ring() {
        return Err(HopfError::StructureMismatch);
    }
    if f.rows() != c.rank() || f.cols() != a.rank() || g.rows() != c.rank() || g.cols() != a.rank()
    {
        return Err(HopfError::BadShape("convolution factors must map C to A".into()));
    }
    Ok(c
        .comult()
        .mul(&f.kronecker(g).expect("ring"))
        .expect("shapes")
        .mul(a.mult())
        .expect("shapes"))
}

/// Dual Hopf algebra on the dual basis of a free finite-rank Hopf algebra:
/// multiplication transposes the comultiplication and vice versa.
pub fn convolution_dual(h: &HopfData) -> Result<HopfData, HopfError> {
    let ring = h.ring().clone();
    let labels: Vec<String> = h.alg.labels().iter().map(|l| format!("{l}*")).collect();
    let alg = SCAlgebra::new(
        &ring,
        labels.clone(),
        h.coalg.comult().transpose(),
        h.coalg.counit().transpose(),
    )
    .map_err(FamilyError::from)?;
    let coalg = CoalgebraData::new_unchecked(
        &ring,
        labels,
        h.alg.mult().transpose(),
        h.alg.unit_row().transpose(),
    )?;
    let antipode = h.antipode.as_ref().map(|s| s.transpose());
    HopfData::new_unchecked(alg, coalg, antipode)
}

/// A free right comodule over a coalgebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comodule {
    pub coalg: CoalgebraData,
    pub rank: usize,
    /// Coaction matrix M -> M (x) C, shape rank x (rank * coalg rank).
    pub coaction: RMatrix,
}

pub fn check_comodule(m: &Comodule) -> AxiomReport {
    let mut report = AxiomReport::default();
    let nc = m.coalg.rank();
    let ring = m.coalg.ring().clone();
    let idm = RMatrix::identity(&ring, m.rank);
    let idc = RMatrix::identity(&ring, nc);
    let lhs = m
        .coaction
        .mul(&m.coaction.kronecker(&idc).expect("ring"))
        .expect("shapes");
    let rhs = m
        .coaction
        .mul(&idm.kronecker(m.coalg.comult()).expect("ring"))
        .expect("shapes");
    report.compare("coaction coassociativity", &lhs, &rhs, &[m.rank]);
    let cu = m
        .coaction
        .mul(&idm.kronecker(m.coalg.counit()).expect("ring"))
        .expect("shapes");
    report.compare("coaction counit law", &cu, &idm, &[m.rank]);
    report
}

/// The canonical bialgebra (group-like) or Hopf (primitive, or group-like
/// on invertible variables) structure on a free-family truncation.
///
/// The ideal must be a coideal for the chosen flavor; otherwise the reduced
/// image of an offending generator is reported.
pub fn polynomial_bialgebra(
    family: &FilteredAlgebra,
    ideal: &IdealSpec,
) -> Result<(Truncation, HopfData), HopfError> {
    let flavor = family
        .flavor()
        .ok_or_else(|| FamilyError::Unsupported("family carries no bialgebra flavor".into()))?;
    let FilteredAlgebra::Free { ring, vars, .. } = family else {
        return Err(HopfError::Family(FamilyError::Unsupported(
            "use group_hopf for finite group algebras".into(),
        )));
    };
    let trunc = truncate(family, ideal)?;
    let n = vars.len();
    let rank = trunc.rank();

    // Comultiplication images of the variables inside the tensor family.
    let tensor_family = family.tensor(family)?;
    let pair_ideal = IdealSpec::tensor_pair(&tensor_family, ideal, ideal)?;
    let tensor_trunc = truncate(&tensor_family, &pair_ideal)?;
    let images: Vec<MultiPoly> = (0..n)
        .map(|v| {
            let l = MultiPoly::var(ring, 2 * n, v);
            let r = MultiPoly::var(ring, 2 * n, n + v);
            match flavor {
                BialgebraFlavor::GroupLike => l.mul(&r),
                BialgebraFlavor::Primitive => l.add(&r),
            }
        })
        .collect();

    // Coideal check: generators must reduce to zero in the tensor quotient,
    // and the counit must kill them.
    for (v, g) in ideal.generators().iter().enumerate() {
        let dg = g.substitute(2 * n, &images);
        let reduced = tensor_trunc.reduce(&dg);
        if !reduced.is_zero() {
            return Err(HopfError::NotACoideal {
                flavor,
                witness: format!(
                    "comultiplication of generator {v} reduces to {}",
                    reduced.display(&tensor_family.var_names())
                ),
            });
        }
        let eps_val = match flavor {
            BialgebraFlavor::GroupLike => eval_at_all(ring, g, &ring.one()),
            BialgebraFlavor::Primitive => eval_at_all(ring, g, &ring.zero()),
        };
        if !eps_val.is_zero() {
            return Err(HopfError::NotACoideal {
                flavor,
                witness: format!("counit of generator {v} is {} instead of 0", eps_val),
            });
        }
    }

    let mut comult = RMatrix::zeros(ring, rank, rank * rank);
    let mut counit = RMatrix::zeros(ring, rank, 1);
    for idx in 0..rank {
        let exp = trunc.basis_exponent(idx);
        let mut mono = MultiPoly::zero(ring, n);
        mono.add_term(exp.clone(), ring.one());
        let image = mono.substitute(2 * n, &images);
        let row = tensor_trunc.project(&image);
        for j in 0..rank * rank {
            comult.set(idx, j, row.at(0, j).clone());
        }
        let e = match flavor {
            BialgebraFlavor::GroupLike => ring.one(),
            BialgebraFlavor::Primitive => {
                if exp.iter().all(|&k| k == 0) {
                    ring.one()
                } else {
                    ring.zero()
                }
            }
        };
        counit.set(idx, 0, e);
    }
    let labels = trunc.algebra().labels().to_vec();
    let coalg = CoalgebraData::new_unchecked(ring, labels, comult, counit)?;

    // Antipode candidate: x -> 1/x (group-like, needs reversibility) or
    // x -> -x (primitive). Kept only when the antipode identity verifies.
    let antipode = build_antipode_candidate(ring, vars, ideal, &trunc, flavor);
    let hopf = HopfData::new_unchecked(trunc.algebra().clone(), coalg, antipode)?;
    let hopf = if hopf.antipode.is_some() && !check_hopf(&hopf).passed() {
        HopfData { antipode: None, ..hopf }
    } else {
        hopf
    };
    Ok((trunc, hopf))
}

fn eval_at_all(ring: &CoeffRing, p: &MultiPoly, value: &Coeff) -> Coeff {
    let mut acc = ring.zero();
    for (e, c) in p.terms() {
        let mut term = c.clone();
        for &k in e {
            assert!(k >= 0, "counit evaluation needs nonnegative exponents");
            for _ in 0..k {
                term = ring.mul(&term, value);
            }
        }
        acc = ring.add(&acc, &term);
    }
    acc
}

fn build_antipode_candidate(
    ring: &CoeffRing,
    vars: &[(String, VarKind)],
    ideal: &IdealSpec,
    trunc: &Truncation,
    flavor: BialgebraFlavor,
) -> Option<RMatrix> {
    let n = vars.len();
    let mut var_images: Vec<MultiPoly> = Vec::new();
    for v in 0..n {
        match flavor {
            BialgebraFlavor::Primitive => {
                var_images.push(MultiPoly::var(ring, n, v).neg());
            }
            BialgebraFlavor::GroupLike => {
                let inv = crate::families::inverse_image(&ideal.generators()[v], v).ok()?;
                var_images.push(inv);
            }
        }
    }
    let rank = trunc.rank();
    let mut s = RMatrix::zeros(ring, rank, rank);
    for idx in 0..rank {
        let exp = trunc.basis_exponent(idx);
        let mut image = MultiPoly::one(ring, n);
        for (v, &k) in exp.iter().enumerate() {
            for _ in 0..k {
                image = trunc.reduce(&image.mul(&var_images[v]));
            }
        }
        let row = trunc.project(&image);
        for j in 0..rank {
            s.set(idx, j, row.at(0, j).clone());
        }
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoeffRing {
        CoeffRing::integers()
    }

    fn upoly(ring: &CoeffRing, coeffs: &[i64]) -> MultiPoly {
        let cs: Vec<Coeff> = coeffs.iter().map(|&c| ring.from_i64(c)).collect();
        MultiPoly::from_univariate(ring, 1, 0, &cs)
    }

    #[test]
    fn rank_one_coalgebra() {
        let ring = z();
        let c = CoalgebraData::new_unchecked(
            &ring,
            vec!["1".into()],
            RMatrix::identity(&ring, 1),
            RMatrix::identity(&ring, 1),
        )
        .unwrap();
        assert!(check_coalgebra(&c).passed());
    }

    #[test]
    fn group_hopf_fixtures_pass() {
        for ring in [z(), CoeffRing::prime_field(3).unwrap(), CoeffRing::integers_mod(4).unwrap()]
        {
            for table in [
                GroupTable::cyclic(2),
                GroupTable::cyclic(3),
                GroupTable::cyclic(2).product(&GroupTable::cyclic(2)),
                GroupTable::symmetric3(),
            ] {
                let h = group_hopf(&ring, &table);
                let report = check_hopf(&h);
                assert!(report.passed(), "{:?}: {:?}", table.labels(), report.failures);
            }
        }
    }

    #[test]
    fn perturbed_counit_caught() {
        let ring = z();
        let h = group_hopf(&ring, &GroupTable::cyclic(2));
        let mut counit = h.coalg.counit().clone();
        counit.set(1, 0, ring.from_i64(0));
        let bad = CoalgebraData::new_unchecked(
            &ring,
            h.coalg.labels().to_vec(),
            h.coalg.comult().clone(),
            counit,
        )
        .unwrap();
        let report = check_coalgebra(&bad);
        assert!(!report.passed());
        assert!(report.failures.iter().any(|f| f.law.contains("counit")));
    }

    #[test]
    fn convolution_dual_of_c2() {
        let ring = z();
        let h = group_hopf(&ring, &GroupTable::cyclic(2));
        let dual = convolution_dual(&h).unwrap();
        assert!(check_hopf(&dual).passed());
        // e* and g* are orthogonal idempotents.
        let e = dual.alg.basis_row(0);
        let g = dual.alg.basis_row(1);
        assert_eq!(dual.alg.mul_rows(&e, &e), e);
        assert_eq!(dual.alg.mul_rows(&g, &g), g);
        assert!(dual.alg.mul_rows(&e, &g).is_zero());
        // Comultiplication of e* is e*(x)e* + g*(x)g*.
        let row = dual.coalg.comult().row(0);
        let expect: Vec<Coeff> =
            vec![ring.one(), ring.zero(), ring.zero(), ring.one()];
        assert_eq!(row, expect);
        // Double dual returns the original structure.
        let dd = convolution_dual(&dual).unwrap();
        assert_eq!(dd.alg.mult(), h.alg.mult());
        assert_eq!(dd.coalg.comult(), h.coalg.comult());
    }

    #[test]
    fn convolution_unit_law() {
        let ring = z();
        let h = group_hopf(&ring, &GroupTable::cyclic(2));
        // u o eps convolved with any map g gives g back.
        let ue = h.coalg.counit().mul(h.alg.unit_row()).unwrap();
        let g = RMatrix::from_i64_rows(&ring, &[vec![3, 1], vec![0, 2]]);
        let conv = convolution_product(&h.coalg, &h.alg, &ue, &g).unwrap();
        assert_eq!(conv, g);
        // The antipode is the convolution inverse of the identity.
        let s = h.antipode.clone().unwrap();
        let id = RMatrix::identity(&ring, 2);
        let conv = convolution_product(&h.coalg, &h.alg, &s, &id).unwrap();
        assert_eq!(conv, ue);
    }

    #[test]
    fn primitive_truncation_over_f2() {
        let f2 = CoeffRing::prime_field(2).unwrap();
        let fam = FilteredAlgebra::polynomial(&f2, &["x"], Some(BialgebraFlavor::Primitive));
        let gen = MultiPoly::from_univariate(&f2, 1, 0, &[f2.zero(), f2.zero(), f2.one()]);
        let ideal = IdealSpec::new(fam.clone(), vec![gen]).unwrap();
        let (_t, h) = polynomial_bialgebra(&fam, &ideal).unwrap();
        assert!(h.antipode.is_some());
        assert!(check_hopf(&h).passed());
        // S(x) = -x = x over F2.
        assert_eq!(h.antipode.as_ref().unwrap(), &RMatrix::identity(&f2, 2));
    }

    #[test]
    fn primitive_x2_over_z_is_not_a_coideal() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], Some(BialgebraFlavor::Primitive));
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[0, 0, 1])]).unwrap();
        assert!(matches!(
            polynomial_bialgebra(&fam, &ideal),
            Err(HopfError::NotACoideal { .. })
        ));
    }

    #[test]
    fn group_like_x2_minus_1_is_zc2() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], Some(BialgebraFlavor::GroupLike));
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 0, 1])]).unwrap();
        let (_t, h) = polynomial_bialgebra(&fam, &ideal).unwrap();
        assert!(check_hopf(&h).passed());
        let zc2 = group_hopf(&ring, &GroupTable::cyclic(2));
        assert_eq!(h.alg.mult(), zc2.alg.mult());
        assert_eq!(h.coalg.comult(), zc2.coalg.comult());
        assert_eq!(h.antipode, zc2.antipode);
    }

    #[test]
    fn group_like_primitive_mixture_rejected() {
        // (x^2 - 1) is not a coideal for the primitive structure.
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], Some(BialgebraFlavor::Primitive));
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 0, 1])]).unwrap();
        assert!(matches!(
            polynomial_bialgebra(&fam, &ideal),
            Err(HopfError::NotACoideal { .. })
        ));
    }

    #[test]
    fn laurent_group_like_hopf() {
        let ring = z();
        let fam = FilteredAlgebra::laurent(&ring, &["x"], true);
        // (x^2 - 1) is a coideal: the quotient is the C2 group algebra with
        // S(x) = 1/x = x.
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[-1, 0, 1])]).unwrap();
        let (_t, h) = polynomial_bialgebra(&fam, &ideal).unwrap();
        assert!(h.antipode.is_some());
        assert!(check_hopf(&h).passed());

        // A reversible generator that is not a coideal is rejected: the
        // quotient by it is still used by the finite dual, just never as a
        // quotient bialgebra.
        let ideal = IdealSpec::new(fam.clone(), vec![upoly(&ring, &[1, -3, 1])]).unwrap();
        assert!(matches!(
            polynomial_bialgebra(&fam, &ideal),
            Err(HopfError::NotACoideal { .. })
        ));
    }

    #[test]
    fn comodule_check() {
        let ring = z();
        let h = group_hopf(&ring, &GroupTable::cyclic(2));
        // C as a comodule over itself via comultiplication.
        let m = Comodule { coalg: h.coalg.clone(), rank: 2, coaction: h.coalg.comult().clone() };
        assert!(check_comodule(&m).passed());
        let mut bad = m.clone();
        bad.coaction = RMatrix::zeros(&ring, 2, 4);
        assert!(!check_comodule(&bad).passed());
    }
}
