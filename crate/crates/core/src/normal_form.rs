//! Canonical-form linear algebra: Smith normal form over the PID rings,
//! Howell form over Z/n, canonical row forms, kernels, and linear solving.
//!
//! These kernels are exact and favor clarity over asymptotics; matrices at
//! desk scale stay well under a hundred rows.

use crate::matrix::{MatrixError, RMatrix};
use crate::ring::{Coeff, CoeffRing};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

/// Invertible transforms u, v with u * m * v = d, d diagonal with a
/// divisibility chain d1 | d2 | ...
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: RMatrix,
    pub d: RMatrix,
    pub v: RMatrix,
}

impl Snf {
    /// Diagonal entries, including any zeros inside the min(rows, cols) band.
    pub fn diagonal(&self) -> Vec<Coeff> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.at(i, i).clone()).collect()
    }
}

fn euclid_size(ring: &CoeffRing, x: &Coeff) -> BigInt {
    match ring {
        CoeffRing::Integers => x.numer().abs(),
        _ => BigInt::one(),
    }
}

/// Division with remainder suitable for the Euclidean elimination loop.
fn div_rem_step(ring: &CoeffRing, a: &Coeff, b: &Coeff) -> (Coeff, Coeff) {
    match ring {
        CoeffRing::Integers => {
            let (q, r) = a.numer().div_rem(b.numer());
            (BigRational::from(q), BigRational::from(r))
        }
        _ => {
            let q = ring
                .exact_div(a, b)
                .expect("field division by nonzero pivot");
            (q, ring.zero())
        }
    }
}

/// Smith normal form with transforms. Supported over Z, Q, F_p, and Z/p for
/// prime p; composite moduli are rejected (use `howell_form`).
pub fn smith_normal_form(m: &RMatrix) -> Result<Snf, MatrixError> {
    let ring = m.ring().clone();
    if !ring.is_pid() {
        return Err(MatrixError::UnsupportedRing(
            ring,
            "Smith form needs a PID; use howell_form over composite Z/n".into(),
        ));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = RMatrix::identity(&ring, rows);
    let mut v = RMatrix::identity(&ring, cols);

    let add_row = |mat: &mut RMatrix, dst: usize, src: usize, k: &Coeff| {
        for c in 0..mat.cols() {
            let val = ring.add(mat.at(dst, c), &ring.mul(k, mat.at(src, c)));
            mat.set(dst, c, val);
        }
    };
    let add_col = |mat: &mut RMatrix, dst: usize, src: usize, k: &Coeff| {
        for r in 0..mat.rows() {
            let val = ring.add(mat.at(r, dst), &ring.mul(k, mat.at(r, src)));
            mat.set(r, dst, val);
        }
    };
    let swap_rows = |mat: &mut RMatrix, i: usize, j: usize| {
        if i != j {
            for c in 0..mat.cols() {
                let x = mat.at(i, c).clone();
                let y = mat.at(j, c).clone();
                mat.set(i, c, y);
                mat.set(j, c, x);
            }
        }
    };
    let swap_cols = |mat: &mut RMatrix, i: usize, j: usize| {
        if i != j {
            for r in 0..mat.rows() {
                let x = mat.at(r, i).clone();
                let y = mat.at(r, j).clone();
                mat.set(r, i, y);
                mat.set(r, j, x);
            }
        }
    };

    for t in 0..rows.min(cols) {
        'outer: loop {
            // Minimal nonzero entry in the trailing block becomes the pivot.
            let mut pivot: Option<(usize, usize, BigInt)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a.at(i, j).is_zero() {
                        let s = euclid_size(&ring, a.at(i, j));
                        if pivot.as_ref().map_or(true, |p| s < p.2) {
                            pivot = Some((i, j, s));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else { break };
            swap_rows(&mut a, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if !a.at(i, t).is_zero() {
                    let (q, r) = div_rem_step(&ring, a.at(i, t), a.at(t, t));
                    let k = ring.neg(&q);
                    add_row(&mut a, i, t, &k);
                    add_row(&mut u, i, t, &k);
                    if !r.is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !a.at(t, j).is_zero() {
                    let (q, r) = div_rem_step(&ring, a.at(t, j), a.at(t, t));
                    let k = ring.neg(&q);
                    add_col(&mut a, j, t, &k);
                    add_col(&mut v, j, t, &k);
                    if !r.is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Pivot must divide the rest of the block for the chain to hold.
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !ring.divides(a.at(t, t), a.at(i, j)) {
                        add_row(&mut a, t, i, &ring.one());
                        add_row(&mut u, t, i, &ring.one());
                        continue 'outer;
                    }
                }
            }
            break;
        }
        // Normalize the pivot by a unit: positive over Z, 1 over fields.
        if !a.at(t, t).is_zero() {
            let unit = match &ring {
                CoeffRing::Integers => {
                    if a.at(t, t).numer().is_negative() {
                        Some(ring.from_i64(-1))
                    } else {
                        None
                    }
                }
                _ => ring.inv(a.at(t, t)),
            };
            if let Some(k) = unit {
                for c in 0..cols {
                    let val = ring.mul(a.at(t, c), &k);
                    a.set(t, c, val);
                }
                for c in 0..rows {
                    let val = ring.mul(u.at(t, c), &k);
                    u.set(t, c, val);
                }
            }
        }
    }
    Ok(Snf { u, d: a, v })
}

fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

fn leading(row: &[Coeff]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Echelonize rows by gcd transforms; works over Z and Z/n with lifted gcds.
/// Returns one row per occupied pivot column, ordered by pivot column.
fn gcd_echelon(ring: &CoeffRing, cols: usize, rows: Vec<Vec<Coeff>>) -> Vec<Vec<Coeff>> {
    let mut bins: Vec<Vec<Vec<Coeff>>> = vec![Vec::new(); cols];
    for r in rows {
        if let Some(c) = leading(&r) {
            bins[c].push(r);
        }
    }
    let mut out = Vec::new();
    for col in 0..cols {
        while bins[col].len() > 1 {
            let r2 = bins[col].pop().unwrap();
            let r1 = bins[col].pop().unwrap();
            let a = r1[col].numer().clone();
            let b = r2[col].numer().clone();
            let (g, s, t) = xgcd(&a, &b);
            let (s, t) = (ring.from_int(s), ring.from_int(t));
            let pivot: Vec<Coeff> = r1
                .iter()
                .zip(&r2)
                .map(|(x, y)| ring.normalize(x * &s + y * &t))
                .collect();
            let bq = ring.from_int(&b / &g);
            let aq = ring.from_int(-(&a / &g));
            let residual: Vec<Coeff> = r1
                .iter()
                .zip(&r2)
                .map(|(x, y)| ring.normalize(x * &bq + y * &aq))
                .collect();
            debug_assert!(!pivot[col].is_zero());
            bins[col].push(pivot);
            if let Some(c) = leading(&residual) {
                debug_assert!(c > col);
                bins[c].push(residual);
            }
        }
        if let Some(r) = bins[col].pop() {
            out.push(r);
        }
    }
    out
}

/// Reduce the entries above each pivot of an echelon set (sorted by pivot
/// column) into the canonical range for the ring.
fn reduce_above(ring: &CoeffRing, rows: &mut [Vec<Coeff>]) {
    for i in 0..rows.len() {
        let c = leading(&rows[i]).expect("echelon rows are nonzero");
        let pivot_row = rows[i].clone();
        let p = pivot_row[c].clone();
        for row in rows.iter_mut().take(i) {
            if row[c].is_zero() {
                continue;
            }
            let q = match ring {
                CoeffRing::Integers | CoeffRing::IntegersMod(_) => {
                    ring.from_int(row[c].numer().div_floor(p.numer()))
                }
                _ => ring.exact_div(&row[c], &p).expect("field pivot"),
            };
            if q.is_zero() {
                continue;
            }
            let nq = ring.neg(&q);
            for (d, x) in row.iter_mut().zip(&pivot_row) {
                *d = ring.normalize(&*d + x * &nq);
            }
        }
    }
}

/// Sequentially reduce `v` against echelon rows sorted by pivot column.
fn reduce_vec(ring: &CoeffRing, rows: &[Vec<Coeff>], v: &mut Vec<Coeff>) {
    for row in rows {
        let Some(c) = leading(row) else { continue };
        if v[c].is_zero() {
            continue;
        }
        let q = match ring {
            CoeffRing::Integers | CoeffRing::IntegersMod(_) => {
                ring.from_int(v[c].numer().div_floor(row[c].numer()))
            }
            _ => ring.exact_div(&v[c], &row[c]).expect("field pivot"),
        };
        if q.is_zero() {
            continue;
        }
        let nq = ring.neg(&q);
        for (d, x) in v.iter_mut().zip(row) {
            *d = ring.normalize(&*d + x * &nq);
        }
    }
}

/// Howell canonical form of the row span of `m` over Z/n.
pub fn howell_form(m: &RMatrix) -> Result<RMatrix, MatrixError> {
    let ring = m.ring().clone();
    let CoeffRing::IntegersMod(n) = &ring else {
        return Err(MatrixError::UnsupportedRing(
            ring,
            "Howell form is defined over Z/n".into(),
        ));
    };
    let n = n.clone();
    let cols = m.cols();
    let mut rows: Vec<Vec<Coeff>> = (0..m.rows()).map(|r| m.row(r)).collect();
    let max_passes = 4 * cols * (n.bits() as usize + 2) + 8;
    let mut passes = 0;
    loop {
        let mut ech = gcd_echelon(&ring, cols, rows);
        // Scale each pivot by a unit so it becomes its gcd with n.
        for row in ech.iter_mut() {
            let c = leading(row).unwrap();
            let a = row[c].numer().clone();
            let g = a.gcd(&n);
            if a != g {
                let u = ring.from_int(unit_scaling(&a, &g, &n));
                for x in row.iter_mut() {
                    *x = ring.mul(x, &u);
                }
            }
        }
        reduce_above(&ring, &mut ech);
        // Saturate: annihilator multiples of each row must lie in the span
        // generated by reduction; otherwise feed them back and repeat.
        let mut extra = Vec::new();
        for row in &ech {
            let c = leading(row).unwrap();
            let ann = &n / row[c].numer().gcd(&n);
            if ann.is_one() {
                continue;
            }
            let ann = ring.from_int(ann);
            let mut mult: Vec<Coeff> = row.iter().map(|x| ring.mul(x, &ann)).collect();
            reduce_vec(&ring, &ech, &mut mult);
            if leading(&mult).is_some() {
                extra.push(mult);
            }
        }
        if extra.is_empty() {
            return Ok(RMatrix::from_rows(&ring, ech).pad_cols(cols));
        }
        rows = ech;
        rows.extend(extra);
        passes += 1;
        assert!(passes <= max_passes, "Howell saturation failed to stabilize");
    }
}

/// Unit u mod n with u*a = g (mod n), where g = gcd(a, n).
fn unit_scaling(a: &BigInt, g: &BigInt, n: &BigInt) -> BigInt {
    let n1 = n / g;
    let a1 = (a / g).mod_floor(&n1);
    let (_, inv, _) = xgcd(&a1, &n1);
    let base = inv.mod_floor(&n1);
    let mut k = BigInt::zero();
    loop {
        let cand = (&base + &k * &n1).mod_floor(n);
        if cand.gcd(n).is_one() {
            return cand;
        }
        k += 1;
        assert!(&k <= g, "unit lifting exhausted");
    }
}

impl RMatrix {
    /// Keep the column count when a row set collapses to nothing.
    fn pad_cols(self, cols: usize) -> RMatrix {
        if self.rows() == 0 && self.cols() != cols {
            return RMatrix::zeros(self.ring(), 0, cols);
        }
        self
    }
}

/// Hermite row form over Z: echelon, positive pivots, entries above each
/// pivot reduced into [0, pivot). Canonical for the row lattice.
fn hermite_form(m: &RMatrix) -> RMatrix {
    let ring = m.ring().clone();
    let cols = m.cols();
    let rows: Vec<Vec<Coeff>> = (0..m.rows()).map(|r| m.row(r)).collect();
    let mut ech = gcd_echelon(&ring, cols, rows);
    for row in ech.iter_mut() {
        let c = leading(row).unwrap();
        if row[c].numer().is_negative() {
            for x in row.iter_mut() {
                *x = ring.neg(x);
            }
        }
    }
    reduce_above(&ring, &mut ech);
    RMatrix::from_rows(&ring, ech).pad_cols(cols)
}

/// Reduced row echelon form over a field.
fn rref(m: &RMatrix) -> RMatrix {
    let ring = m.ring().clone();
    let mut rows: Vec<Vec<Coeff>> = (0..m.rows()).map(|r| m.row(r)).collect();
    let cols = m.cols();
    let mut out: Vec<Vec<Coeff>> = Vec::new();
    for col in 0..cols {
        let Some(pos) = rows.iter().position(|r| leading(r) == Some(col)) else {
            continue;
        };
        let mut pivot = rows.swap_remove(pos);
        let inv = ring.inv(&pivot[col]).expect("nonzero field element");
        for x in pivot.iter_mut() {
            *x = ring.mul(x, &inv);
        }
        for r in rows.iter_mut().chain(out.iter_mut()) {
            if !r[col].is_zero() {
                let k = ring.neg(&r[col]);
                for (d, x) in r.iter_mut().zip(&pivot) {
                    *d = ring.add(d, &ring.mul(&k, x));
                }
            }
        }
        out.push(pivot);
    }
    out.retain(|r| leading(r).is_some());
    out.sort_by_key(|r| leading(r).unwrap());
    RMatrix::from_rows(&ring, out).pad_cols(cols)
}

/// Ring-appropriate canonical form of the row span: Hermite over Z, reduced
/// echelon over fields, Howell over Z/n.
pub fn canonical_row_form(m: &RMatrix) -> RMatrix {
    match m.ring() {
        CoeffRing::Integers => hermite_form(m),
        CoeffRing::Rationals | CoeffRing::PrimeField(_) => rref(m),
        CoeffRing::IntegersMod(_) => howell_form(m).expect("modular ring"),
    }
}

/// Canonical representative of `v + rowspan(canon)`; `canon` must come from
/// `canonical_row_form`. Reduces to zero exactly on span members.
pub fn reduce_mod_span(canon: &RMatrix, v: &[Coeff]) -> Vec<Coeff> {
    let ring = canon.ring().clone();
    let rows: Vec<Vec<Coeff>> = (0..canon.rows()).map(|r| canon.row(r)).collect();
    let mut v: Vec<Coeff> = v.iter().map(|x| ring.normalize(x.clone())).collect();
    reduce_vec(&ring, &rows, &mut v);
    v
}

/// True when `v` lies in the row span of `canon` (a canonical row form).
pub fn span_contains(canon: &RMatrix, v: &[Coeff]) -> bool {
    reduce_mod_span(canon, v).iter().all(Coeff::is_zero)
}

/// Generators of the left kernel {x : x * m = 0}. Over PID rings the rows
/// form a free basis; over Z/n they generate as a module.
pub fn left_kernel(m: &RMatrix) -> RMatrix {
    let ring = m.ring().clone();
    match &ring {
        CoeffRing::IntegersMod(n) => {
            let z = CoeffRing::Integers;
            let lift = RMatrix::from_fn(&z, m.rows(), m.cols(), |i, j| m.at(i, j).clone());
            let scaled = RMatrix::identity(&z, m.cols()).scale(&z.from_int(n.clone()));
            let stacked = lift.vstack(&scaled).expect("shapes agree");
            let ker = left_kernel(&stacked);
            let proj = RMatrix::from_fn(&ring, ker.rows(), m.rows(), |i, j| ker.at(i, j).clone());
            canonical_row_form(&proj)
        }
        _ => {
            let snf = smith_normal_form(m).expect("PID ring");
            let min = m.rows().min(m.cols());
            let mut rows = Vec::new();
            for i in 0..m.rows() {
                let in_diag = i < min && !snf.d.at(i, i).is_zero();
                if !in_diag {
                    rows.push(snf.u.row(i));
                }
            }
            RMatrix::from_rows(&ring, rows).pad_cols(m.rows())
        }
    }
}

/// Solve X * m = b for each row of b; None when any row is inconsistent.
pub fn solve_left(m: &RMatrix, b: &RMatrix) -> Result<Option<RMatrix>, MatrixError> {
    if m.ring() != b.ring() {
        return Err(MatrixError::RingMismatch(m.ring().clone(), b.ring().clone()));
    }
    if m.cols() != b.cols() {
        return Err(MatrixError::ShapeMismatch(format!(
            "solve: {}x{} against rhs {}x{}",
            m.rows(),
            m.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let ring = m.ring().clone();
    match &ring {
        CoeffRing::IntegersMod(n) => {
            let z = CoeffRing::Integers;
            let lift = RMatrix::from_fn(&z, m.rows(), m.cols(), |i, j| m.at(i, j).clone());
            let scaled = RMatrix::identity(&z, m.cols()).scale(&z.from_int(n.clone()));
            let stacked = lift.vstack(&scaled).expect("shapes agree");
            let blift = RMatrix::from_fn(&z, b.rows(), b.cols(), |i, j| b.at(i, j).clone());
            match solve_left(&stacked, &blift)? {
                None => Ok(None),
                Some(x) => Ok(Some(RMatrix::from_fn(&ring, b.rows(), m.rows(), |i, j| {
                    x.at(i, j).clone()
                }))),
            }
        }
        _ => {
            let snf = smith_normal_form(m)?;
            let min = m.rows().min(m.cols());
            let c = b.mul(&snf.v)?;
            let mut out = RMatrix::zeros(&ring, b.rows(), m.rows());
            for r in 0..b.rows() {
                for j in 0..m.cols() {
                    let cj = c.at(r, j);
                    if j < min && !snf.d.at(j, j).is_zero() {
                        match ring.exact_div(cj, snf.d.at(j, j)) {
                            Some(y) => out.set(r, j, y),
                            None => return Ok(None),
                        }
                    } else if !cj.is_zero() {
                        return Ok(None);
                    }
                }
            }
            Ok(Some(out.mul(&snf.u)?))
        }
    }
}

/// Two-sided inverse of a square matrix, if it exists over the ring.
pub fn inverse(m: &RMatrix) -> Option<RMatrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let id = RMatrix::identity(m.ring(), m.rows());
    let x = solve_left(m, &id).ok()??;
    let check = m.mul(&x).ok()?;
    (check == id).then_some(x)
}

pub fn is_invertible(m: &RMatrix) -> bool {
    inverse(m).is_some()
}

/// Characteristic polynomial det(tI - m) by the division-free Berkowitz
/// algorithm; coefficients returned lowest degree first, leading 1.
pub fn char_poly(m: &RMatrix) -> Vec<Coeff> {
    assert_eq!(m.rows(), m.cols(), "characteristic polynomial needs square input");
    let ring = m.ring().clone();
    let n = m.rows();
    // Highest-degree-first during the recurrence.
    let mut c = vec![ring.one()];
    for k in 1..=n {
        let a = m.at(k - 1, k - 1).clone();
        let sub = m.submatrix(0..k - 1, 0..k - 1);
        let row = m.submatrix(k - 1..k, 0..k - 1);
        let col = m.submatrix(0..k - 1, k - 1..k);
        // First column of the Toeplitz multiplier: 1, -a, -row*sub^i*col.
        let mut t = vec![ring.one(), ring.neg(&a)];
        let mut acc = col.clone();
        for _ in 0..k.saturating_sub(1) {
            let val = row.mul(&acc).expect("shapes agree");
            t.push(ring.neg(val.at(0, 0)));
            acc = sub.mul(&acc).expect("shapes agree");
        }
        let mut next = vec![ring.zero(); k + 1];
        for (i, ti) in t.iter().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                if i + j <= k {
                    next[i + j] = ring.add(&next[i + j], &ring.mul(ti, cj));
                }
            }
        }
        c = next;
    }
    c.reverse();
    c
}

/// Evaluate a polynomial (lowest degree first) at a square matrix.
pub fn eval_poly_at_matrix(coeffs: &[Coeff], m: &RMatrix) -> RMatrix {
    let ring = m.ring().clone();
    let n = m.rows();
    let mut acc = RMatrix::zeros(&ring, n, n);
    let mut power = RMatrix::identity(&ring, n);
    for c in coeffs {
        if !c.is_zero() {
            acc = acc.add(&power.scale(c)).expect("square shapes");
        }
        power = power.mul(m).expect("square shapes");
    }
    acc
}
