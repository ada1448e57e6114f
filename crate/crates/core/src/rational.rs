//! Rational pairings between a coalgebra and an algebra, rational elements
//! of modules, and the module/comodule correspondence.
//!
//! A finite pairing stores the Gram matrix of the bilinear form on bases.
//! Pairings against a finite dual are handled by passing to a truncation
//! whose quotient algebra carries the evaluation pairing with its own dual
//! coalgebra; for a single-variable action the right truncation comes from
//! the characteristic polynomial of the acting matrix.

use crate::algebra::SCAlgebra;
use crate::dual::{DualElement, DualError};
use crate::families::{truncate, FilteredAlgebra, IdealSpec};
use crate::hopf::{check_coalgebra, AxiomFailure, AxiomReport, CoalgebraData};
use crate::matrix::RMatrix;
use crate::modules::{
    submodule_from_generators, tensor_module, FPModule, ModuleError, ModuleMap,
};
use crate::normal_form::{canonical_row_form, char_poly, left_kernel, reduce_mod_span, solve_left,
    span_contains};
use crate::poly::MultiPoly;
use crate::ring::{Coeff, CoeffRing};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("shape mismatch: {0}")]
    BadShape(String),
    #[error("generator {0} is not rational for this pairing")]
    NotRational(usize),
    #[error("empty probe cannot witness mock-projectivity")]
    ProbeInsufficient,
    #[error("action data is invalid: {0}")]
    BadAction(String),
}

/// A bilinear form between a free finite-rank coalgebra and an algebra,
/// given by its Gram matrix gram[i][j] = <c_i | a_j>.
#[derive(Debug, Clone)]
pub struct Pairing {
    pub coalg: CoalgebraData,
    pub alg: SCAlgebra,
    pub gram: RMatrix,
}

impl Pairing {
    pub fn new(coalg: CoalgebraData, alg: SCAlgebra, gram: RMatrix) -> Result<Self, PairingError> {
        if coalg.ring() != alg.ring() {
            return Err(PairingError::RingMismatch);
        }
        if gram.rows() != coalg.rank() || gram.cols() != alg.rank() {
            return Err(PairingError::BadShape("Gram matrix must be rank(C) x rank(A)".into()));
        }
        Ok(Pairing { coalg, alg, gram })
    }

    pub fn ring(&self) -> &CoeffRing {
        self.alg.ring()
    }

    /// Evaluation pairing of a finite-rank algebra against its dual
    /// coalgebra (multiplication transposed), with the identity Gram matrix.
    pub fn evaluation(alg: &SCAlgebra) -> Pairing {
        let ring = alg.ring().clone();
        let labels: Vec<String> = alg.labels().iter().map(|l| format!("{l}*")).collect();
        let coalg = CoalgebraData::new_unchecked(
            &ring,
            labels,
            alg.mult().transpose(),
            alg.unit_row().transpose(),
        )
        .expect("transposed shapes");
        let gram = RMatrix::identity(&ring, alg.rank());
        Pairing { coalg, alg: alg.clone(), gram }
    }

    /// The evaluation pairing of a filtered algebra at a truncation.
    pub fn at_truncation(
        family: &FilteredAlgebra,
        ideal: &IdealSpec,
    ) -> Result<Pairing, PairingError> {
        let trunc = truncate(family, ideal).map_err(DualError::from)?;
        Ok(Pairing::evaluation(trunc.algebra()))
    }

    /// Tensor pairing: [p (x) q, a (x) b] = <p|a><q|b>.
    pub fn tensor(&self, other: &Pairing) -> Result<Pairing, PairingError> {
        if self.ring() != other.ring() {
            return Err(PairingError::RingMismatch);
        }
        let coalg = self
            .coalg
            .tensor(&other.coalg)
            .map_err(|_| PairingError::RingMismatch)?;
        let alg = self
            .alg
            .tensor(&other.alg)
            .map_err(|e| PairingError::BadShape(e.to_string()))?;
        let gram = self.gram.kronecker(&other.gram).expect("same ring");
        Pairing::new(coalg, alg, gram)
    }
}

/// The map alpha_M : M (x) C -> Hom(A, M) induced by a pairing, with exact
/// injectivity data.
pub struct AlphaMap {
    pub map: ModuleMap,
    /// Nonzero kernel elements on the generators of M (x) C.
    pub kernel: Vec<Vec<Coeff>>,
}

impl AlphaMap {
    pub fn injective(&self) -> bool {
        self.kernel.is_empty()
    }
}

pub fn alpha_map(m: &FPModule, p: &Pairing) -> Result<AlphaMap, PairingError> {
    if m.ring() != p.ring() {
        return Err(PairingError::RingMismatch);
    }
    let ring = p.ring().clone();
    let (nc, na) = (p.coalg.rank(), p.alg.rank());
    let gm = m.generator_count();
    let free_c = FPModule::free(&ring, nc);
    let source = tensor_module(m, &free_c)?;
    // Hom(A, M) for free A is a direct sum of na copies of M.
    let target = FPModule::new(
        &ring,
        na * gm,
        RMatrix::identity(&ring, na)
            .kronecker(m.relations())
            .expect("same ring"),
    );
    let mut matrix = RMatrix::zeros(&ring, gm * nc, na * gm);
    for s in 0..gm {
        for i in 0..nc {
            for j in 0..na {
                matrix.set(s * nc + i, j * gm + s, p.gram.at(i, j).clone());
            }
        }
    }
    let map = ModuleMap::new(source, target, matrix)?;
    let kernel = map.kernel_elements();
    Ok(AlphaMap { map, kernel })
}

/// Compatibility of the form with multiplication and unit, plus alpha
/// injectivity over a finite battery of test modules.
pub fn check_rational_pairing(p: &Pairing) -> Result<AxiomReport, PairingError> {
    let mut report = AxiomReport::default();
    let ring = p.ring().clone();
    let (nc, na) = (p.coalg.rank(), p.alg.rank());
    // <c | a b> = sum <c_1 | a> <c_2 | b>.
    let lhs = p.gram.mul(&p.alg.mult().transpose()).expect("shapes");
    let rhs = p
        .coalg
        .comult()
        .mul(&p.gram.kronecker(&p.gram).expect("ring"))
        .expect("shapes");
    if lhs != rhs {
        'outer: for i in 0..nc {
            for jk in 0..na * na {
                if lhs.at(i, jk) != rhs.at(i, jk) {
                    report.failures.push(AxiomFailure {
                        law: "form versus multiplication".into(),
                        witness: vec![i, jk / na, jk % na],
                    });
                    break 'outer;
                }
            }
        }
    }
    // <c | 1> = eps(c).
    let at_unit = p.gram.mul(&p.alg.unit_row().transpose()).expect("shapes");
    if &at_unit != p.coalg.counit() {
        let i = (0..nc)
            .find(|&i| at_unit.at(i, 0) != p.coalg.counit().at(i, 0))
            .unwrap_or(0);
        report.failures.push(AxiomFailure { law: "form at the unit".into(), witness: vec![i] });
    }
    // The coalgebra itself must be valid.
    for f in check_coalgebra(&p.coalg).failures {
        report.failures.push(f);
    }
    // Alpha injectivity battery.
    for (label, module) in test_module_battery(&ring) {
        let alpha = alpha_map(&module, p)?;
        if !alpha.injective() {
            report.failures.push(AxiomFailure {
                law: format!("alpha injectivity on {label}"),
                witness: vec![],
            });
        }
    }
    Ok(report)
}

/// Fixed battery of finitely presented test modules.
pub fn test_module_battery(ring: &CoeffRing) -> Vec<(String, FPModule)> {
    let mut out = vec![("R".to_string(), FPModule::free(ring, 1))];
    for d in [2i64, 4] {
        out.push((format!("R/({d})"), FPModule::cyclic(ring, d)));
    }
    out.push((
        "R/(2) + R/(3)".to_string(),
        FPModule::cyclic(ring, 2).direct_sum(&FPModule::cyclic(ring, 3)),
    ));
    out
}

/// Constructive mock-projectivity witness on a finite probe.
#[derive(Debug, Clone)]
pub struct MockWitness {
    /// Indices of the probe points whose value tuples generate the image.
    pub selected: Vec<usize>,
    /// g_values[j][l] = g_j(s_l) for each probe point l.
    pub g_values: RMatrix,
    /// True when the final probe point added no new generator, evidence
    /// that the image module had stopped growing inside the probe.
    pub stabilized: bool,
}

/// Expand functionals through their values: p_i = sum_l p_i(a_l) g_l with
/// the a_l drawn from the probe. `values[i][l]` is p_i evaluated at probe
/// point l.
pub fn mock_projective_witness(values: &RMatrix) -> Result<MockWitness, PairingError> {
    let ring = values.ring().clone();
    let (n, k) = (values.rows(), values.cols());
    if k == 0 && n > 0 {
        return Err(PairingError::ProbeInsufficient);
    }
    let mut selected: Vec<usize> = Vec::new();
    let mut sel_rows: Vec<Vec<Coeff>> = Vec::new();
    for l in 0..k {
        let col: Vec<Coeff> = (0..n).map(|i| values.at(i, l).clone()).collect();
        let canon = canonical_row_form(&rows_matrix(&ring, &sel_rows, n));
        if !span_contains(&canon, &col) {
            selected.push(l);
            sel_rows.push(col);
        }
    }
    let sel = rows_matrix(&ring, &sel_rows, n);
    let mut g = RMatrix::zeros(&ring, selected.len(), k);
    for l in 0..k {
        let col: Vec<Coeff> = (0..n).map(|i| values.at(i, l).clone()).collect();
        let rhs = RMatrix::row_vector(&ring, col);
        let sol = solve_left(&sel, &rhs)
            .map_err(ModuleError::from)?
            .expect("selected columns generate every probe column");
        for j in 0..selected.len() {
            g.set(j, l, sol.at(0, j).clone());
        }
    }
    let stabilized = selected.last().map_or(true, |&l| l + 1 < k) || k == 0;
    Ok(MockWitness { selected, g_values: g, stabilized })
}

fn rows_matrix(ring: &CoeffRing, rows: &[Vec<Coeff>], cols: usize) -> RMatrix {
    if rows.is_empty() {
        RMatrix::zeros(ring, 0, cols)
    } else {
        RMatrix::from_rows(ring, rows.to_vec())
    }
}

/// A left action of a finite-rank algebra on a finitely presented module:
/// one matrix per algebra basis element, rows acting on the right.
#[derive(Debug, Clone)]
pub struct AlgebraAction {
    pub algebra: SCAlgebra,
    pub module: FPModule,
    pub matrices: Vec<RMatrix>,
}

impl AlgebraAction {
    pub fn new(
        algebra: SCAlgebra,
        module: FPModule,
        matrices: Vec<RMatrix>,
    ) -> Result<Self, PairingError> {
        let ring = algebra.ring().clone();
        if module.ring() != &ring {
            return Err(PairingError::RingMismatch);
        }
        let na = algebra.rank();
        let g = module.generator_count();
        if matrices.len() != na {
            return Err(PairingError::BadAction("one matrix per algebra basis element".into()));
        }
        for (j, t) in matrices.iter().enumerate() {
            if t.rows() != g || t.cols() != g {
                return Err(PairingError::BadAction(format!("matrix {j} has the wrong shape")));
            }
            ModuleMap::new(module.clone(), module.clone(), t.clone())
                .map_err(|e| PairingError::BadAction(format!("basis element {j}: {e}")))?;
        }
        let action = AlgebraAction { algebra, module, matrices };
        action.check_axioms()?;
        Ok(action)
    }

    fn check_axioms(&self) -> Result<(), PairingError> {
        let ring = self.algebra.ring().clone();
        let g = self.module.generator_count();
        let canon = self.module.canonical_relations();
        // Unit acts as the identity.
        let unit = self.algebra.unit_row();
        let mut u = RMatrix::zeros(&ring, g, g);
        for j in 0..self.algebra.rank() {
            let c = unit.at(0, j);
            if !c.is_zero() {
                u = u.add(&self.matrices[j].scale(c)).expect("shapes");
            }
        }
        let id = RMatrix::identity(&ring, g);
        let diff = u.sub(&id).expect("shapes");
        for r in 0..g {
            if !span_contains(canon, &diff.row(r)) {
                return Err(PairingError::BadAction("unit does not act as the identity".into()));
            }
        }
        // (e_i e_j) m = e_i (e_j m): with rows acting on the right this is
        // T_j T_i compared against the structure-constant combination.
        for i in 0..self.algebra.rank() {
            for j in 0..self.algebra.rank() {
                let composed = self.matrices[j].mul(&self.matrices[i]).expect("shapes");
                let mut combo = RMatrix::zeros(&ring, g, g);
                for k in 0..self.algebra.rank() {
                    let c = self.algebra.structure_constant(i, j, k);
                    if !c.is_zero() {
                        combo = combo.add(&self.matrices[k].scale(c)).expect("shapes");
                    }
                }
                let diff = composed.sub(&combo).expect("shapes");
                for r in 0..g {
                    if !span_contains(canon, &diff.row(r)) {
                        return Err(PairingError::BadAction(format!(
                            "associativity of the action fails at ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Action of an algebra element given by its coordinate row.
    pub fn act(&self, a: &RMatrix, m: &[Coeff]) -> Vec<Coeff> {
        let ring = self.algebra.ring().clone();
        let g = self.module.generator_count();
        let mrow = RMatrix::from_fn(&ring, 1, g, |_, t| m[t].clone());
        let mut out = vec![ring.zero(); g];
        for j in 0..self.algebra.rank() {
            let c = a.at(0, j);
            if c.is_zero() {
                continue;
            }
            let moved = mrow.mul(&self.matrices[j]).expect("shapes");
            for t in 0..g {
                out[t] = ring.add(&out[t], &ring.mul(c, moved.at(0, t)));
            }
        }
        self.module.reduce(&out)
    }
}

/// A rational set of parameters for one element: a representative of an
/// element of M (x) C reproducing the action.
#[derive(Debug, Clone)]
pub struct RationalParameters {
    /// Coordinates on generator pairs (m-generator, coalgebra basis).
    pub tensor_coords: Vec<Coeff>,
}

impl RationalParameters {
    /// The parameter pairs (m_s, c_s row) with m_s the s-th generator.
    pub fn pairs(&self, gm: usize, nc: usize) -> Vec<(usize, Vec<Coeff>)> {
        (0..gm)
            .filter_map(|s| {
                let row: Vec<Coeff> = self.tensor_coords[s * nc..(s + 1) * nc].to_vec();
                row.iter().any(|c| !c.is_zero()).then_some((s, row))
            })
            .collect()
    }
}

/// Linear system shared by the rational-element operations: coefficients of
/// the unknown tensor z and relation slack y against a fixed module element.
fn rational_system(
    action: &AlgebraAction,
    p: &Pairing,
) -> (RMatrix, usize, usize) {
    let ring = p.ring().clone();
    let na = p.alg.rank();
    let nc = p.coalg.rank();
    let g = action.module.generator_count();
    let rm = action.module.relations().rows();
    // Unknowns: z (g * nc) then y (na * rm). Equations: (j, t).
    let unknowns = g * nc + na * rm;
    let eqs = na * g;
    let mut big = RMatrix::zeros(&ring, unknowns, eqs);
    for j in 0..na {
        for t in 0..g {
            let col = j * g + t;
            for i in 0..nc {
                big.set(t * nc + i, col, p.gram.at(i, j).clone());
            }
            for r in 0..rm {
                big.set(
                    g * nc + j * rm + r,
                    col,
                    action.module.relations().at(r, t).clone(),
                );
            }
        }
    }
    (big, g * nc, eqs)
}

/// Canonicalize a tensor coordinate vector modulo the tensor relations and
/// the kernel of the homogeneous system (which contains ker alpha_M).
fn canonical_tensor_rep(
    action: &AlgebraAction,
    p: &Pairing,
    big: &RMatrix,
    zlen: usize,
    z: Vec<Coeff>,
) -> Vec<Coeff> {
    let ring = p.ring().clone();
    let nc = p.coalg.rank();
    let hom            = left_kernel(big);
    let mut rows: Vec<Vec<Coeff>> = Vec::new();
    for i in 0..hom.rows() {
        let zz: Vec<Coeff> = (0..zlen).map(|j| hom.at(i, j).clone()).collect();
        if zz.iter().any(|c| !c.is_zero()) {
            rows.push(zz);
        }
    }
    let tensor_rel = action
        .module
        .relations()
        .kronecker(&RMatrix::identity(&ring, nc))
        .expect("ring");
    for i in 0..tensor_rel.rows() {
        rows.push(tensor_rel.row(i));
    }
    let canon = canonical_row_form(&rows_matrix(&ring, &rows, zlen));
    reduce_mod_span(&canon, &z)
}

/// Rational parameters for `m`, or None when the defining system has no
/// solution (the element is not rational for this pairing).
pub fn rational_parameters(
    action: &AlgebraAction,
    m: &[Coeff],
    p: &Pairing,
) -> Result<Option<RationalParameters>, PairingError> {
    if action.algebra.rank() != p.alg.rank() {
        return Err(PairingError::BadShape("action algebra differs from pairing algebra".into()));
    }
    let ring = p.ring().clone();
    let na = p.alg.rank();
    let g = action.module.generator_count();
    let (big, zlen, eqs) = rational_system(action, p);
    let mut rhs = RMatrix::zeros(&ring, 1, eqs);
    for j in 0..na {
        let moved = action.act(&p.alg.basis_row(j), m);
        for t in 0..g {
            rhs.set(0, j * g + t, moved[t].clone());
        }
    }
    let Some(sol) = solve_left(&big, &rhs).map_err(ModuleError::from)? else {
        return Ok(None);
    };
    let z: Vec<Coeff> = (0..zlen).map(|j| sol.at(0, j).clone()).collect();
    let z = canonical_tensor_rep(action, p, &big, zlen, z);
    Ok(Some(RationalParameters { tensor_coords: z }))
}

/// Generators of Rat(M): the largest submodule of rational elements,
/// computed as the projection of the homogeneous solvable subsystem.
pub fn rat_submodule(
    action: &AlgebraAction,
    p: &Pairing,
) -> Result<(FPModule, ModuleMap, RMatrix), PairingError> {
    let ring = p.ring().clone();
    let na = p.alg.rank();
    let nc = p.coalg.rank();
    let g = action.module.generator_count();
    let rm = action.module.relations().rows();
    // Unknowns: c (g) | z (g*nc) | y (na*rm); equations (j, t):
    // (c . act_j)[t] - sum_i z[t,i] gram[i][j] - (y_j rel)[t] = 0.
    let unknowns = g + g * nc + na * rm;
    let eqs = na * g;
    let mut big = RMatrix::zeros(&ring, unknowns, eqs);
    for j in 0..na {
        for t in 0..g {
            let col = j * g + t;
            for s in 0..g {
                big.set(s, col, action.matrices[j].at(s, t).clone());
            }
            for i in 0..nc {
                big.set(g + t * nc + i, col, ring.neg(p.gram.at(i, j)));
            }
            for r in 0..rm {
                big.set(
                    g + g * nc + j * rm + r,
                    col,
                    ring.neg(action.module.relations().at(r, t)),
                );
            }
        }
    }
    let ker = left_kernel(&big);
    let mut rows: Vec<Vec<Coeff>> = Vec::new();
    for i in 0..ker.rows() {
        let c: Vec<Coeff> = (0..g).map(|j| ker.at(i, j).clone()).collect();
        if c.iter().any(|x| !x.is_zero()) {
            rows.push(c);
        }
    }
    for i in 0..rm {
        rows.push(action.module.relations().row(i));
    }
    let gens = canonical_row_form(&rows_matrix(&ring, &rows, g));
    let (sub, incl) = submodule_from_generators(&action.module, &gens)?;
    Ok((sub, incl, gens))
}

/// A coaction on a finitely presented module over a free coalgebra.
#[derive(Debug, Clone)]
pub struct RationalComodule {
    pub module: FPModule,
    pub coalg: CoalgebraData,
    /// Coaction on generators: g x (g * rank C).
    pub coaction: RMatrix,
}

impl RationalComodule {
    /// Well-definedness modulo relations plus coassociativity and counit.
    pub fn validate(&self) -> Result<(), PairingError> {
        let ring = self.coalg.ring().clone();
        let nc = self.coalg.rank();
        let g = self.module.generator_count();
        if self.coaction.rows() != g || self.coaction.cols() != g * nc {
            return Err(PairingError::BadShape("coaction shape".into()));
        }
        let idc = RMatrix::identity(&ring, nc);
        let tensor_rel = self.module.relations().kronecker(&idc).expect("ring");
        let canon1 = canonical_row_form(&tensor_rel);
        let mapped = self.module.relations().mul(&self.coaction).expect("shapes");
        for r in 0..mapped.rows() {
            if !span_contains(&canon1, &mapped.row(r)) {
                return Err(PairingError::BadAction("coaction not well defined".into()));
            }
        }
        // Coassociativity modulo the doubled tensor relations.
        let lhs = self
            .coaction
            .mul(&self.coaction.kronecker(&idc).expect("ring"))
            .expect("shapes");
        let rhs = self
            .coaction
            .mul(&RMatrix::identity(&ring, g).kronecker(self.coalg.comult()).expect("ring"))
            .expect("shapes");
        let rel2 = self
            .module
            .relations()
            .kronecker(&RMatrix::identity(&ring, nc * nc))
            .expect("ring");
        let canon2 = canonical_row_form(&rel2);
        let diff = lhs.sub(&rhs).expect("shapes");
        for r in 0..g {
            if !span_contains(&canon2, &diff.row(r)) {
                return Err(PairingError::BadAction("coaction is not coassociative".into()));
            }
        }
        // Counit law.
        let cu = self
            .coaction
            .mul(&RMatrix::identity(&ring, g).kronecker(self.coalg.counit()).expect("ring"))
            .expect("shapes");
        let idg = RMatrix::identity(&ring, g);
        let canon = self.module.canonical_relations();
        let diff = cu.sub(&idg).expect("shapes");
        for r in 0..g {
            if !span_contains(canon, &diff.row(r)) {
                return Err(PairingError::BadAction("coaction counit law fails".into()));
            }
        }
        Ok(())
    }
}

/// Build the comodule structure of a rational module: one set of canonical
/// rational parameters per generator.
pub fn to_comodule(
    action: &AlgebraAction,
    p: &Pairing,
) -> Result<RationalComodule, PairingError> {
    let ring = p.ring().clone();
    let nc = p.coalg.rank();
    let g = action.module.generator_count();
    let mut coaction = RMatrix::zeros(&ring, g, g * nc);
    for s in 0..g {
        let mut m = vec![ring.zero(); g];
        m[s] = ring.one();
        let params = rational_parameters(action, &m, p)?.ok_or(PairingError::NotRational(s))?;
        for j in 0..g * nc {
            coaction.set(s, j, params.tensor_coords[j].clone());
        }
    }
    let com = RationalComodule {
        module: action.module.clone(),
        coalg: p.coalg.clone(),
        coaction,
    };
    com.validate()?;
    Ok(com)
}

/// Recover the module action from a coaction: a m = sum m_0 <m_1 | a>.
pub fn to_module(com: &RationalComodule, p: &Pairing) -> Result<AlgebraAction, PairingError> {
    let ring = p.ring().clone();
    let nc = p.coalg.rank();
    let g = com.module.generator_count();
    let mut matrices = Vec::with_capacity(p.alg.rank());
    for j in 0..p.alg.rank() {
        let mut t = RMatrix::zeros(&ring, g, g);
        for s in 0..g {
            for sp in 0..g {
                let mut acc = ring.zero();
                for i in 0..nc {
                    acc = ring.add(
                        &acc,
                        &ring.mul(com.coaction.at(s, sp * nc + i), p.gram.at(i, j)),
                    );
                }
                t.set(s, sp, acc);
            }
        }
        matrices.push(t);
    }
    AlgebraAction::new(p.alg.clone(), com.module.clone(), matrices)
}

/// Truncation pairing adequate for a single-variable polynomial action: the
/// characteristic polynomial of the acting matrix generates an annihilating
/// ideal, so the action factors through its quotient.
pub fn pairing_for_matrix_action(
    family: &FilteredAlgebra,
    module: FPModule,
    acting: &RMatrix,
) -> Result<(Pairing, AlgebraAction, IdealSpec), PairingError> {
    let ring = family.ring().clone();
    assert_eq!(family.nvars(), 1, "single-variable actions only");
    let cp = char_poly(acting);
    let gen = MultiPoly::from_univariate(&ring, 1, 0, &cp);
    let ideal = IdealSpec::new(family.clone(), vec![gen]).map_err(DualError::from)?;
    let trunc = truncate(family, &ideal).map_err(DualError::from)?;
    let pairing = Pairing::evaluation(trunc.algebra());
    // Action of the monomial basis: powers of the acting matrix.
    let mut matrices = Vec::with_capacity(trunc.rank());
    let mut power = RMatrix::identity(&ring, module.generator_count());
    for _ in 0..trunc.rank() {
        matrices.push(power.clone());
        power = power.mul(acting).expect("square");
    }
    let action = AlgebraAction::new(pairing.alg.clone(), module, matrices)?;
    Ok((pairing, action, ideal))
}

/// Read a coalgebra-side row of rational parameters as a finite-dual
/// element on the truncation ideal.
pub fn dual_element_from_row(
    family: &FilteredAlgebra,
    ideal: &IdealSpec,
    row: &[Coeff],
) -> Result<DualElement, PairingError> {
    Ok(DualElement::new(family.clone(), ideal.clone(), row.to_vec())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupTable;
    use crate::families::BialgebraFlavor;
    use crate::hopf::{convolution_dual, group_hopf};
    use crate::ring::fmt_coeff;

    fn z() -> CoeffRing {
        CoeffRing::integers()
    }

    /// The canonical pairing (C, C*) with C the dual coalgebra of Z[C2].
    fn zc2_pairing() -> Pairing {
        let ring = z();
        let h = group_hopf(&ring, &GroupTable::cyclic(2));
        Pairing::evaluation(&h.alg)
    }

    #[test]
    fn canonical_pairing_is_rational() {
        let p = zc2_pairing();
        let report = check_rational_pairing(&p).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn truncation_pairing_is_rational() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], Some(BialgebraFlavor::GroupLike));
        let gen = MultiPoly::from_univariate(&ring, 1, 0, &[ring.from_i64(-1), ring.zero(), ring.one()]);
        let ideal = IdealSpec::new(fam.clone(), vec![gen]).unwrap();
        let p = Pairing::at_truncation(&fam, &ideal).unwrap();
        assert!(check_rational_pairing(&p).unwrap().passed());
    }

    #[test]
    fn perturbed_gram_caught() {
        let ring = z();
        let mut p = zc2_pairing();
        p.gram = RMatrix::from_i64_rows(&ring, &[vec![0, 1], vec![1, 0]]);
        let report = check_rational_pairing(&p).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn alpha_map_identity_gram_is_injective() {
        let ring = z();
        let p = zc2_pairing();
        for (_, m) in test_module_battery(&ring) {
            let a = alpha_map(&m, &p).unwrap();
            assert!(a.injective());
        }
    }

    #[test]
    fn alpha_map_degenerate_form_has_kernel() {
        let ring = z();
        // Rank-1 "coalgebra" paired through multiplication by 2.
        let coalg = CoalgebraData::new_unchecked(
            &ring,
            vec!["c".into()],
            RMatrix::identity(&ring, 1),
            RMatrix::identity(&ring, 1),
        )
        .unwrap();
        let alg = SCAlgebra::base_ring(&ring);
        let gram = RMatrix::from_i64_rows(&ring, &[vec![2]]);
        let p = Pairing::new(coalg, alg, gram).unwrap();
        let m = FPModule::cyclic(&ring, 2);
        let a = alpha_map(&m, &p).unwrap();
        assert!(!a.injective());
        assert!(!a.kernel[0].iter().all(Coeff::is_zero));
        // The zero module is vacuously fine.
        let zero = FPModule::zero(&ring);
        assert!(alpha_map(&zero, &p).unwrap().injective());
    }

    #[test]
    fn mock_projective_witness_small() {
        let ring = z();
        // Single functional ev_1 on probe {1, x, x^2}: values (1, 1, 1).
        let v = RMatrix::from_i64_rows(&ring, &[vec![1, 1, 1]]);
        let w = mock_projective_witness(&v).unwrap();
        assert_eq!(w.selected, vec![0]);
        assert!(w.stabilized);
        // ev_1 and ev_{-1} on probe {1, x}.
        let v = RMatrix::from_i64_rows(&ring, &[vec![1, 1], vec![1, -1]]);
        let w = mock_projective_witness(&v).unwrap();
        assert_eq!(w.selected.len(), 2);
        // p_i(s_l) = sum_j p_i(a_j) g_j(s_l) reproduces the value table.
        let sel_cols = RMatrix::from_i64_rows(&ring, &[vec![1, 1], vec![1, -1]]);
        let recon = sel_cols.mul(&w.g_values).unwrap();
        assert_eq!(recon, v);

        let zero = RMatrix::zeros(&ring, 1, 2);
        let w = mock_projective_witness(&zero).unwrap();
        assert!(w.selected.is_empty());
    }

    #[test]
    fn regular_module_parameters() {
        let ring = z();
        let p = zc2_pairing();
        // M = Z[C2] acting on itself: e acts as identity, g as the swap.
        let m = FPModule::free(&ring, 2);
        let act = AlgebraAction::new(
            p.alg.clone(),
            m,
            vec![
                RMatrix::identity(&ring, 2),
                RMatrix::from_i64_rows(&ring, &[vec![0, 1], vec![1, 0]]),
            ],
        )
        .unwrap();
        let params = rational_parameters(&act, &[ring.one(), ring.zero()], &p)
            .unwrap()
            .unwrap();
        // a e = sum m_i <c_i | a>: expect e (x) e* + g (x) g*.
        let pairs = params.pairs(2, 2);
        assert_eq!(pairs.len(), 2);
        assert_eq!(fmt_coeff(&pairs[0].1[0]), "1");
        assert_eq!(fmt_coeff(&pairs[1].1[1]), "1");
    }

    #[test]
    fn eigenvalue_action_through_char_poly() {
        let ring = z();
        let fam = FilteredAlgebra::polynomial(&ring, &["x"], Some(BialgebraFlavor::GroupLike));
        let m = FPModule::free(&ring, 1);
        let t = RMatrix::from_i64_rows(&ring, &[vec![2]]);
        let (p, act, ideal) = pairing_for_matrix_action(&fam, m, &t).unwrap();
        let params = rational_parameters(&act, &[ring.one()], &p).unwrap().unwrap();
        // The single parameter row is the evaluation functional at 2.
        let row = &params.tensor_coords[..p.coalg.rank()];
        let de = dual_element_from_row(&fam, &ideal, row).unwrap();
        let ev2 = DualElement::evaluation_at(fam, &[ring.from_i64(2)]).unwrap();
        assert!(de.dual_equal(&ev2).unwrap());
    }

    #[test]
    fn rat_submodule_splits_by_eigencoordinate() {
        let ring = z();
        // x acts by diag(2, 3); the coalgebra side only sees ev_2.
        let quotient_fam =
            FilteredAlgebra::polynomial(&ring, &["x"], Some(BialgebraFlavor::GroupLike));
        let gen = MultiPoly::from_univariate(
            &ring,
            1,
            0,
            &[ring.from_i64(6), ring.from_i64(-5), ring.one()],
        ); // (x-2)(x-3)
        let ideal = IdealSpec::new(quotient_fam.clone(), vec![gen]).unwrap();
        let trunc = truncate(&quotient_fam, &ideal).unwrap();
        let alg = trunc.algebra().clone();
        // Rank-1 group-like coalgebra spanned by ev_2.
        let coalg = CoalgebraData::new_unchecked(
            &ring,
            vec!["ev2".into()],
            RMatrix::identity(&ring, 1),
            RMatrix::identity(&ring, 1),
        )
        .unwrap();
        let gram = RMatrix::from_i64_rows(&ring, &[vec![1, 2]]);
        let p = Pairing::new(coalg, alg.clone(), gram).unwrap();

        let m = FPModule::free(&ring, 2);
        let act = AlgebraAction::new(
            alg,
            m,
            vec![
                RMatrix::identity(&ring, 2),
                RMatrix::from_i64_rows(&ring, &[vec![2, 0], vec![0, 3]]),
            ],
        )
        .unwrap();
        let (sub, incl, gens) = rat_submodule(&act, &p).unwrap();
        assert_eq!(sub.invariants().free_rank, 1);
        assert!(incl.is_injective());
        assert_eq!(gens.rows(), 1);
        assert_eq!(fmt_coeff(gens.at(0, 0)), "1");
        assert_eq!(fmt_coeff(gens.at(0, 1)), "0");
    }

    #[test]
    fn comodule_round_trip_on_regular_module() {
        let ring = z();
        let p = zc2_pairing();
        let m = FPModule::free(&ring, 2);
        let act = AlgebraAction::new(
            p.alg.clone(),
            m,
            vec![
                RMatrix::identity(&ring, 2),
                RMatrix::from_i64_rows(&ring, &[vec![0, 1], vec![1, 0]]),
            ],
        )
        .unwrap();
        let com = to_comodule(&act, &p).unwrap();
        let back = to_module(&com, &p).unwrap();
        assert_eq!(back.matrices, act.matrices);
        let again = to_comodule(&back, &p).unwrap();
        assert_eq!(again.coaction, com.coaction);
    }

    #[test]
    fn comodule_from_dual_coalgebra_itself() {
        // C = dual of Z[C2] as a comodule over itself via its
        // comultiplication; to_module gives the dual algebra action.
        let ring = z();
        let h = group_hopf(&ring, &GroupTable::cyclic(2));
        let dual = convolution_dual(&h).unwrap();
        let p = Pairing::evaluation(&h.alg);
        let com = RationalComodule {
            module: FPModule::free(&ring, 2),
            coalg: p.coalg.clone(),
            coaction: dual.coalg.comult().clone(),
        };
        com.validate().unwrap();
        let act = to_module(&com, &p).unwrap();
        let again = to_comodule(&act, &p).unwrap();
        assert_eq!(again.coaction, com.coaction);
    }

    #[test]
    fn tensor_pairing_of_rational_is_rational() {
        let p = zc2_pairing();
        let t = p.tensor(&p).unwrap();
        assert!(check_rational_pairing(&t).unwrap().passed());
        assert_eq!(t.gram, p.gram.kronecker(&p.gram).unwrap());
    }

    #[test]
    fn zero_form_fails_alpha() {
        let ring = z();
        let coalg = CoalgebraData::new_unchecked(
            &ring,
            vec!["c".into()],
            RMatrix::identity(&ring, 1),
            RMatrix::identity(&ring, 1),
        )
        .unwrap();
        let alg = SCAlgebra::base_ring(&ring);
        let gram = RMatrix::zeros(&ring, 1, 1);
        let p = Pairing::new(coalg, alg, gram).unwrap();
        let report = check_rational_pairing(&p).unwrap();
        assert!(!report.passed());
    }
}
