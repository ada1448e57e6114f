//! Free finite-rank associative algebras given by structure constants.
//!
//! The multiplication tensor is stored as an (n^2 x n) matrix over the ring:
//! row i*n+j holds the coordinates of e_i * e_j. Associativity and the unit
//! laws are verified exhaustively at construction; ranks stay small enough
//! that this is instant.

use crate::matrix::{tensor_shuffle, MatrixError, RMatrix};
use crate::ring::{Coeff, CoeffRing};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("not associative at basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("unit law fails at basis element {i}")]
    UnitLawFails { i: usize },
    #[error("ring mismatch")]
    RingMismatch,
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("action matrix {0} is not an algebra automorphism")]
    NotAutomorphism(usize),
    #[error("action is not a homomorphism at pair ({0}, {1})")]
    NotAction(usize, usize),
    #[error("shape mismatch: {0}")]
    BadShape(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SCAlgebra {
    ring: CoeffRing,
    rank: usize,
    labels: Vec<String>,
    mult: RMatrix,
    unit: RMatrix,
}

impl SCAlgebra {
    /// Validated constructor; checks associativity and both unit laws.
    pub fn new(
        ring: &CoeffRing,
        labels: Vec<String>,
        mult: RMatrix,
        unit: RMatrix,
    ) -> Result<Self, AlgebraError> {
        let rank = labels.len();
        if mult.rows() != rank * rank || mult.cols() != rank {
            return Err(AlgebraError::BadShape(format!(
                "multiplication tensor must be {}x{}",
                rank * rank,
                rank
            )));
        }
        if unit.rows() != 1 || unit.cols() != rank {
            return Err(AlgebraError::BadShape("unit must be a row of length rank".into()));
        }
        if mult.ring() != ring || unit.ring() != ring {
            return Err(AlgebraError::RingMismatch);
        }
        let alg = SCAlgebra { ring: ring.clone(), rank, labels, mult, unit };
        alg.check_axioms()?;
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<(), AlgebraError> {
        let n = self.rank;
        let id = RMatrix::identity(&self.ring, n);
        let left = self.mult.kronecker(&id)?.mul(&self.mult)?;
        let right = id.kronecker(&self.mult)?.mul(&self.mult)?;
        if left != right {
            for flat in 0..n * n * n {
                if left.row(flat) != right.row(flat) {
                    let i = flat / (n * n);
                    let j = (flat / n) % n;
                    let k = flat % n;
                    return Err(AlgebraError::NotAssociative { i, j, k });
                }
            }
        }
        let lu = self.unit.kronecker(&id)?.mul(&self.mult)?;
        let ru = id.kronecker(&self.unit)?.mul(&self.mult)?;
        for i in 0..n {
            if lu.row(i) != id.row(i) || ru.row(i) != id.row(i) {
                return Err(AlgebraError::UnitLawFails { i });
            }
        }
        Ok(())
    }

    /// Rank-1 algebra R.
    pub fn base_ring(ring: &CoeffRing) -> SCAlgebra {
        SCAlgebra::new(
            ring,
            vec!["1".into()],
            RMatrix::identity(ring, 1),
            RMatrix::identity(ring, 1),
        )
        .expect("rank one is associative")
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

    /// Multiplication tensor, rows indexed by basis pairs.
    pub fn mult(&self) -> &RMatrix {
        &self.mult
    }

    pub fn unit_row(&self) -> &RMatrix {
        &self.unit
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Coeff {
        self.mult.at(i * self.rank + j, k)
    }

    pub fn basis_row(&self, i: usize) -> RMatrix {
        let mut m = RMatrix::zeros(&self.ring, 1, self.rank);
        m.set(0, i, self.ring.one());
        m
    }

    /// Product of two coordinate rows.
    pub fn mul_rows(&self, x: &RMatrix, y: &RMatrix) -> RMatrix {
        x.kronecker(y).expect("same ring").mul(&self.mult).expect("shapes")
    }

    /// Matrix of right multiplication by `x`: row j = e_j * x.
    pub fn mult_by(&self, x: &RMatrix) -> RMatrix {
        let id = RMatrix::identity(&self.ring, self.rank);
        id.kronecker(x).expect("same ring").mul(&self.mult).expect("shapes")
    }

    pub fn pow_row(&self, x: &RMatrix, k: u32) -> RMatrix {
        let mut acc = self.unit.clone();
        for _ in 0..k {
            acc = self.mul_rows(&acc, x);
        }
        acc
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.rank;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| self.structure_constant(i, j, k) == self.structure_constant(j, i, k))
            })
        })
    }

    /// Tensor product algebra with componentwise multiplication.
    pub fn tensor(&self, other: &SCAlgebra) -> Result<SCAlgebra, AlgebraError> {
        if self.ring != other.ring {
            return Err(AlgebraError::RingMismatch);
        }
        let (na, nb) = (self.rank, other.rank);
        // Rows of kron(Ma, Mb) are indexed (i, k, j, l); reorder to (i, j, k, l).
        let shuffle = tensor_shuffle(&self.ring, &[na, nb, na, nb], &[0, 2, 1, 3]);
        let mult = shuffle.mul(&self.mult.kronecker(&other.mult)?)?;
        let unit = self.unit.kronecker(&other.unit)?;
        let labels = tensor_labels(&self.labels, &other.labels);
        SCAlgebra::new(&self.ring, labels, mult, unit)
    }
}

pub fn tensor_labels(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for la in a {
        for lb in b {
            out.push(format!("{la}*{lb}"));
        }
    }
    out
}

/// Multiplication table of a finite group on indices 0..order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
}

impl GroupTable {
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        let order = labels.len();
        if table.len() != order || table.iter().any(|r| r.len() != order) {
            return Err(AlgebraError::NotAGroup("table shape".into()));
        }
        let mut mul = vec![0usize; order * order];
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(AlgebraError::NotAGroup(format!("entry out of range at ({i},{j})")));
                }
                mul[i * order + j] = v;
            }
        }
        // Identity.
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul[e * order + g] == g && mul[g * order + e] == g))
            .ok_or_else(|| AlgebraError::NotAGroup("no identity element".into()))?;
        // Inverses.
        for g in 0..order {
            if !(0..order).any(|h| mul[g * order + h] == identity && mul[h * order + g] == identity)
            {
                return Err(AlgebraError::NotAGroup(format!("no inverse for element {g}")));
            }
        }
        // Associativity.
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul[mul[a * order + b] * order + c] != mul[a * order + mul[b * order + c]] {
                        return Err(AlgebraError::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(GroupTable { order, mul, identity, labels })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order)
            .find(|&h| self.mul(g, h) == self.identity && self.mul(h, g) == self.identity)
            .expect("validated group")
    }

    pub fn trivial() -> GroupTable {
        GroupTable::new(vec!["e".into()], vec![vec![0]]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> GroupTable {
        assert!(n >= 1);
        let labels = (0..n)
            .map(|k| if k == 0 { "e".into() } else { format!("g{k}") })
            .collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        GroupTable::new(labels, table).expect("cyclic group")
    }

    pub fn product(&self, other: &GroupTable) -> GroupTable {
        let order = self.order * other.order;
        let labels = (0..order)
            .map(|k| format!("({},{})", self.labels[k / other.order], other.labels[k % other.order]))
            .collect();
        let table = (0..order)
            .map(|x| {
                (0..order)
                    .map(|y| {
                        let (a1, b1) = (x / other.order, x % other.order);
                        let (a2, b2) = (y / other.order, y % other.order);
                        self.mul(a1, a2) * other.order + other.mul(b1, b2)
                    })
                    .collect()
            })
            .collect();
        GroupTable::new(labels, table).expect("product group")
    }

    /// Symmetric group on three letters, as permutation composition.
    pub fn symmetric3() -> GroupTable {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let labels = vec!["e", "(12)", "(13)", "(23)", "(123)", "(132)"]
            .into_iter()
            .map(String::from)
            .collect();
        let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let r = compose(p, q);
                        perms.iter().position(|s| *s == r).unwrap()
                    })
                    .collect()
            })
            .collect();
        GroupTable::new(labels, table).expect("S3")
    }
}

/// Group algebra R[G] on the group basis.
pub fn group_algebra(ring: &CoeffRing, g: &GroupTable) -> SCAlgebra {
    let n = g.order();
    let mut mult = RMatrix::zeros(ring, n * n, n);
    for a in 0..n {
        for b in 0..n {
            mult.set(a * n + b, g.mul(a, b), ring.one());
        }
    }
    let mut unit = RMatrix::zeros(ring, 1, n);
    unit.set(0, g.identity(), ring.one());
    SCAlgebra::new(ring, g.labels().to_vec(), mult, unit).expect("group tables are associative")
}

/// Check that `t` is an algebra automorphism of `a` (row-vector action).
pub fn is_algebra_automorphism(a: &SCAlgebra, t: &RMatrix) -> bool {
    if t.rows() != a.rank() || t.cols() != a.rank() {
        return false;
    }
    if crate::normal_form::inverse(t).is_none() {
        return false;
    }
    if &a.unit_row().mul(t).expect("shapes") != a.unit_row() {
        return false;
    }
    // (x y)^t = x^t y^t on the basis.
    let lhs = a.mult().mul(t).expect("shapes");
    let rhs = t.kronecker(t).expect("same ring").mul(a.mult()).expect("shapes");
    lhs == rhs
}

/// Skew group algebra A * G for a G-action by algebra automorphisms.
///
/// Basis elements are pairs a_i u_s with (a u_s)(b u_t) = a s(b) u_{st};
/// the trivial action recovers A (x) R[G].
pub fn skew_group_algebra(
    a: &SCAlgebra,
    g: &GroupTable,
    action: &[RMatrix],
) -> Result<SCAlgebra, AlgebraError> {
    if action.len() != g.order() {
        return Err(AlgebraError::BadShape("one action matrix per group element".into()));
    }
    for (s, t) in action.iter().enumerate() {
        if !is_algebra_automorphism(a, t) {
            return Err(AlgebraError::NotAutomorphism(s));
        }
    }
    for s in 0..g.order() {
        for t in 0..g.order() {
            // Left action with row vectors composes through reversed products.
            let st = action[t].mul(&action[s])?;
            if st != action[g.mul(s, t)] {
                return Err(AlgebraError::NotAction(s, t));
            }
        }
    }
    let (na, ng) = (a.rank(), g.order());
    let ring = a.ring().clone();
    let rank = na * ng;
    let mut mult = RMatrix::zeros(&ring, rank * rank, rank);
    for i in 0..na {
        for s in 0..ng {
            for j in 0..na {
                for t in 0..ng {
                    let row = (i * ng + s) * rank + (j * ng + t);
                    let st = g.mul(s, t);
                    // e_i * s(e_j) expanded through the action matrix.
                    for p in 0..na {
                        let c = action[s].at(j, p);
                        if c.is_zero() {
                            continue;
                        }
                        for q in 0..na {
                            let sc = a.structure_constant(i, p, q);
                            if sc.is_zero() {
                                continue;
                            }
                            let cur = mult.at(row, q * ng + st).clone();
                            mult.set(row, q * ng + st, ring.add(&cur, &ring.mul(c, sc)));
                        }
                    }
                }
            }
        }
    }
    let mut unit = RMatrix::zeros(&ring, 1, rank);
    for p in 0..na {
        unit.set(0, p * ng + g.identity(), a.unit_row().at(0, p).clone());
    }
    let labels = (0..rank)
        .map(|k| format!("{}.u_{}", a.labels()[k / ng], g.labels()[k % ng]))
        .collect();
    SCAlgebra::new(&ring, labels, mult, unit)
}
