//! Gröbner bases, zero-dimensional quotient algebras and exact dense linear
//! algebra over a coefficient field.
//!
//! The Buchberger loop uses normal pair selection together with the coprimality
//! and chain criteria; bases are returned reduced and monic, so normal forms
//! are canonical for the chosen monomial order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::arith::{ArithError, Field, Rat};
use crate::poly::{same_ring, ExponentVector, MonomialOrder, PolyError, RingRc, SparsePolynomial};

#[derive(Debug, thiserror::Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("quotient algebra is not finite-dimensional: no leading monomial is a pure power of {witness}")]
    NotZeroDimensional { witness: String },
    #[error("the proposed elements do not form a basis of the quotient: {detail}")]
    NotABasis { detail: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

// ---------------------------------------------------------------------------
// Dense matrices over an exact field
// ---------------------------------------------------------------------------

/// Row-major dense matrix with exact field entries. All elimination is exact;
/// pivots are chosen as the first nonzero entry in a column (no numerical
/// pivoting is needed over an exact field).
#[derive(Clone, PartialEq, Debug)]
pub struct DenseMatrix<F: Field> {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<F>>,
}

impl<F: Field> DenseMatrix<F> {
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in matrix constructor"
        );
        DenseMatrix { nrows, ncols, rows }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix {
            nrows,
            ncols,
            rows: vec![vec![F::zero(); ncols]; nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = F::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.rows[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.rows[r][c] = v;
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.rows[r]
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> DenseMatrix<G> {
        DenseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for r in 0..self.nrows {
            for c in 0..self.ncols {
                t.rows[c][r] = self.rows[r][c].clone();
            }
        }
        t
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.ncols, "vstack: column count mismatch");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self {
            nrows: rows.len(),
            ncols: self.ncols,
            rows,
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.nrows, other.nrows, "hstack: row count mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().chain(b.iter()).cloned().collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|v| v.mul(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&F::one().neg()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "mul: inner dimension mismatch");
        let mut out = Self::zeros(self.nrows, other.ncols);
        for r in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self.rows[r][k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.ncols {
                    let b = &other.rows[k][c];
                    if b.is_zero() {
                        continue;
                    }
                    out.rows[r][c] = out.rows[r][c].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.ncols, v.len(), "mul_vec: dimension mismatch");
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for pc in 0..m.ncols {
            if pr >= m.nrows {
                break;
            }
            let Some(sel) = (pr..m.nrows).find(|&r| !m.rows[r][pc].is_zero()) else {
                continue;
            };
            m.rows.swap(pr, sel);
            let inv = m.rows[pr][pc]
                .inv()
                .expect("pivot is nonzero by construction");
            for c in pc..m.ncols {
                m.rows[pr][c] = m.rows[pr][c].mul(&inv);
            }
            for r in 0..m.nrows {
                if r == pr || m.rows[r][pc].is_zero() {
                    continue;
                }
                let factor = m.rows[r][pc].clone();
                for c in pc..m.ncols {
                    let delta = factor.mul(&m.rows[pr][c]);
                    m.rows[r][c] = m.rows[r][c].sub(&delta);
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// The nonzero rows of the reduced row echelon form: a canonical basis of
    /// the row space.
    pub fn row_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        DenseMatrix {
            nrows: pivots.len(),
            ncols: self.ncols,
            rows: r.rows.into_iter().take(pivots.len()).collect(),
        }
    }

    /// A basis of the null space `{ v : A v = 0 }`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![F::zero(); self.ncols];
            v[free] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = r.rows[row][free].neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant by exact Gaussian elimination.
    pub fn det(&self) -> F {
        assert_eq!(self.nrows, self.ncols, "det: matrix must be square");
        let mut m = self.rows.clone();
        let n = self.nrows;
        let mut det = F::one();
        for pc in 0..n {
            let Some(sel) = (pc..n).find(|&r| !m[r][pc].is_zero()) else {
                return F::zero();
            };
            if sel != pc {
                m.swap(pc, sel);
                det = det.neg();
            }
            det = det.mul(&m[pc][pc]);
            let inv = m[pc][pc].inv().expect("pivot is nonzero");
            for r in pc + 1..n {
                if m[r][pc].is_zero() {
                    continue;
                }
                let factor = m[r][pc].mul(&inv);
                for c in pc..n {
                    let delta = factor.mul(&m[pc][c]);
                    m[r][c] = m[r][c].sub(&delta);
                }
            }
        }
        det
    }

    /// One exact solution of `A x = b` (free variables set to zero), or `None`
    /// if the system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(
            self.nrows,
            b.len(),
            "solve: right-hand side length mismatch"
        );
        let rhs = DenseMatrix::from_rows(b.iter().map(|v| vec![v.clone()]).collect());
        let (r, pivots) = self.hstack(&rhs).rref();
        // A pivot in the appended column means the system is inconsistent.
        if pivots.iter().any(|&pc| pc == self.ncols) {
            return None;
        }
        let mut x = vec![F::zero(); self.ncols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.rows[row][self.ncols].clone();
        }
        Some(x)
    }
}

// ---------------------------------------------------------------------------
// Buchberger's algorithm
// ---------------------------------------------------------------------------

/// Fully reduce `p` modulo `basis`: no term of the result is divisible by any
/// leading monomial of `basis`. The map is F-linear in `p` when `basis` is
/// fixed.
pub fn normal_form<F: Field>(
    p: &SparsePolynomial<F>,
    basis: &[SparsePolynomial<F>],
    order: MonomialOrder,
) -> Result<SparsePolynomial<F>, GroebnerError> {
    let ring = p.ring().clone();
    for g in basis {
        same_ring(&ring, g.ring())?;
    }
    let active: Vec<&SparsePolynomial<F>> = basis.iter().filter(|g| !g.is_zero()).collect();
    let leads: Vec<(ExponentVector, F)> = active
        .iter()
        .map(|g| {
            let (e, c) = g.leading(order).expect("zero elements were filtered");
            (e.clone(), c.clone())
        })
        .collect();
    let mut work = p.clone();
    let mut remainder: BTreeMap<ExponentVector, F> = BTreeMap::new();
    while let Some((lead_exp, lead_coeff)) =
        work.leading(order).map(|(e, c)| (e.clone(), c.clone()))
    {
        match leads.iter().position(|(le, _)| le.divides(&lead_exp)) {
            Some(k) => {
                let (le, lc) = &leads[k];
                let shift = le.div_into(&lead_exp);
                let factor = lead_coeff.div(lc)?;
                let scaled = active[k].mul_monomial(&shift, &factor);
                work = work.sub(&scaled)?;
            }
            None => {
                let single =
                    SparsePolynomial::monomial(&ring, lead_exp.clone(), lead_coeff.clone());
                remainder.insert(lead_exp, lead_coeff);
                work = work.sub(&single)?;
            }
        }
    }
    Ok(SparsePolynomial::from_terms(
        &ring,
        remainder.into_iter().collect(),
    ))
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: ExponentVector,
}

/// A reduced, monic Gröbner basis for a fixed monomial order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    ring: RingRc,
    order: MonomialOrder,
    polys: Vec<SparsePolynomial<F>>,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn ring(&self) -> &RingRc {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn polys(&self) -> &[SparsePolynomial<F>] {
        &self.polys
    }

    pub fn leading_exponents(&self) -> Vec<ExponentVector> {
        self.polys
            .iter()
            .map(|g| {
                g.leading(self.order)
                    .expect("basis polys are nonzero")
                    .0
                    .clone()
            })
            .collect()
    }

    pub fn normal_form(
        &self,
        p: &SparsePolynomial<F>,
    ) -> Result<SparsePolynomial<F>, GroebnerError> {
        normal_form(p, &self.polys, self.order)
    }

    /// True when the ideal contains 1 (the basis is `{1}`).
    pub fn is_unit_ideal(&self) -> bool {
        self.polys.len() == 1
            && self.polys[0]
                .leading(self.order)
                .map_or(false, |(e, _)| e.is_constant())
    }
}

/// Compute a reduced monic Gröbner basis of the ideal generated by `gens`.
pub fn buchberger<F: Field>(
    gens: &[SparsePolynomial<F>],
    order: MonomialOrder,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    let ring = gens
        .iter()
        .find(|g| !g.is_zero())
        .map(|g| g.ring().clone())
        .or_else(|| gens.first().map(|g| g.ring().clone()))
        .unwrap_or_else(|| crate::poly::PolyRing::new::<String>(Vec::new()));
    for g in gens {
        same_ring(&ring, g.ring())?;
    }

    let mut basis: Vec<SparsePolynomial<F>> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.content_normalize(order));
        }
    }

    let mut pairs: Vec<Pair> = Vec::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    let lead = |p: &SparsePolynomial<F>| -> ExponentVector {
        p.leading(order).expect("nonzero").0.clone()
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push(Pair {
                i,
                j,
                lcm: lead(&basis[i]).lcm(&lead(&basis[j])),
            });
        }
    }

    while !pairs.is_empty() {
        // Normal selection: the pair whose lcm is smallest in the order.
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| order.cmp_exp(&a.lcm, &b.lcm))
            .map(|(k, _)| k)
            .expect("pairs nonempty");
        let pair = pairs.swap_remove(best);
        done.insert((pair.i, pair.j));

        let li = lead(&basis[pair.i]);
        let lj = lead(&basis[pair.j]);
        // First Buchberger criterion: coprime leading monomials.
        if li.coprime(&lj) {
            continue;
        }
        // Chain criterion: some k with LM(k) | lcm(i,j) and both side pairs
        // already treated.
        let chain = (0..basis.len()).any(|k| {
            if k == pair.i || k == pair.j {
                return false;
            }
            if !lead(&basis[k]).divides(&pair.lcm) {
                return false;
            }
            let key_ik = ordered(pair.i, k);
            let key_jk = ordered(pair.j, k);
            done.contains(&key_ik) && done.contains(&key_jk)
        });
        if chain {
            continue;
        }

        let s = s_polynomial(&basis[pair.i], &basis[pair.j], order)?;
        let reduced = reduce_loose(&s, &basis, order)?;
        if reduced.is_zero() {
            continue;
        }
        let new_index = basis.len();
        let new_lead = lead(&reduced);
        basis.push(reduced);
        for k in 0..new_index {
            pairs.push(Pair {
                i: k,
                j: new_index,
                lcm: lead(&basis[k]).lcm(&new_lead),
            });
        }
    }

    // Interreduce: drop elements whose leading monomial is divisible by
    // another's, then tail-reduce each survivor against the others.
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let li = lead(&basis[i]);
        let redundant = (0..basis.len()).any(|j| {
            if i == j {
                return false;
            }
            let lj = lead(&basis[j]);
            lj.divides(&li) && (lj != li || j < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let kept: Vec<SparsePolynomial<F>> = keep.iter().map(|&i| basis[i].clone()).collect();
    let mut reduced_basis = Vec::with_capacity(kept.len());
    for (i, g) in kept.iter().enumerate() {
        let others: Vec<SparsePolynomial<F>> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = if others.is_empty() {
            g.clone()
        } else {
            normal_form(g, &others, order)?
        };
        if !r.is_zero() {
            reduced_basis.push(r.monic(order));
        }
    }
    reduced_basis.sort_by(|a, b| {
        order.cmp_exp(
            a.leading(order).expect("nonzero").0,
            b.leading(order).expect("nonzero").0,
        )
    });

    Ok(GroebnerBasis {
        ring,
        order,
        polys: reduced_basis,
    })
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn s_polynomial<F: Field>(
    f: &SparsePolynomial<F>,
    g: &SparsePolynomial<F>,
    order: MonomialOrder,
) -> Result<SparsePolynomial<F>, GroebnerError> {
    let (lf, cf) = f.leading(order).expect("nonzero");
    let (lg, cg) = g.leading(order).expect("nonzero");
    let l = lf.lcm(lg);
    let a = f.mul_monomial(&lf.div_into(&l), &cf.inv()?);
    let b = g.mul_monomial(&lg.div_into(&l), &cg.inv()?);
    Ok(a.sub(&b)?)
}

/// Reduction used inside the Buchberger loop: like `normal_form` but the
/// intermediate polynomial is content-normalized periodically, which keeps
/// rational coefficients small. The result is only meaningful up to a nonzero
/// scalar, which is all the loop needs.
fn reduce_loose<F: Field>(
    p: &SparsePolynomial<F>,
    basis: &[SparsePolynomial<F>],
    order: MonomialOrder,
) -> Result<SparsePolynomial<F>, GroebnerError> {
    let ring = p.ring().clone();
    let leads: Vec<(ExponentVector, F)> = basis
        .iter()
        .map(|g| {
            let (e, c) = g.leading(order).expect("nonzero");
            (e.clone(), c.clone())
        })
        .collect();
    let mut work = p.clone();
    let mut remainder: BTreeMap<ExponentVector, F> = BTreeMap::new();
    let mut steps = 0usize;
    while let Some((lead_exp, lead_coeff)) =
        work.leading(order).map(|(e, c)| (e.clone(), c.clone()))
    {
        match leads.iter().position(|(le, _)| le.divides(&lead_exp)) {
            Some(k) => {
                let shift = leads[k].0.div_into(&lead_exp);
                let factor = lead_coeff.div(&leads[k].1)?;
                work = work.sub(&basis[k].mul_monomial(&shift, &factor))?;
                steps += 1;
                if steps % 8 == 0 && remainder.is_empty() {
                    work = work.content_normalize(order);
                }
            }
            None => {
                let single =
                    SparsePolynomial::monomial(&ring, lead_exp.clone(), lead_coeff.clone());
                remainder.insert(lead_exp, lead_coeff);
                work = work.sub(&single)?;
            }
        }
    }
    let out = SparsePolynomial::from_terms(&ring, remainder.into_iter().collect());
    Ok(out.content_normalize(order))
}

// ---------------------------------------------------------------------------
// Quotient algebras
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum Dimension {
    Finite(usize),
    Infinite { witness: String },
}

/// The finite-dimensional algebra `F[x]/I`, presented by the standard
/// monomials (monomials outside the leading-term ideal), listed in increasing
/// monomial order.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra<F: Field> {
    gb: GroebnerBasis<F>,
    standard: Vec<ExponentVector>,
    index: BTreeMap<ExponentVector, usize>,
}

impl<F: Field> QuotientAlgebra<F> {
    pub fn new(gb: GroebnerBasis<F>) -> Result<Self, GroebnerError> {
        let standard = match standard_monomials(&gb)? {
            Ok(s) => s,
            Err(witness) => return Err(GroebnerError::NotZeroDimensional { witness }),
        };
        let index = standard
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ok(QuotientAlgebra {
            gb,
            standard,
            index,
        })
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis<F> {
        &self.gb
    }

    pub fn ring(&self) -> &RingRc {
        self.gb.ring()
    }

    pub fn dimension(&self) -> usize {
        self.standard.len()
    }

    pub fn standard_monomials(&self) -> &[ExponentVector] {
        &self.standard
    }

    /// Coordinates of `p mod I` on the standard-monomial basis.
    pub fn coordinates(&self, p: &SparsePolynomial<F>) -> Result<Vec<F>, GroebnerError> {
        let nf = self.gb.normal_form(p)?;
        let mut v = vec![F::zero(); self.standard.len()];
        for (e, c) in nf.terms() {
            let idx = self
                .index
                .get(e)
                .expect("normal form lies in the span of the standard monomials");
            v[*idx] = c.clone();
        }
        Ok(v)
    }

    /// The matrix of multiplication by `g` on the standard-monomial basis:
    /// column `j` holds the coordinates of `g * b_j`.
    pub fn multiplication_matrix(
        &self,
        g: &SparsePolynomial<F>,
    ) -> Result<DenseMatrix<F>, GroebnerError> {
        let dim = self.standard.len();
        let mut cols = Vec::with_capacity(dim);
        for b in &self.standard {
            let prod = g.mul_monomial(b, &F::one());
            cols.push(self.coordinates(&prod)?);
        }
        let mut m = DenseMatrix::zeros(dim, dim);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Multiplication matrix of the coordinate variable `var`.
    pub fn variable_matrix(&self, var: usize) -> Result<DenseMatrix<F>, GroebnerError> {
        let x = SparsePolynomial::var(self.ring(), var);
        self.multiplication_matrix(&x)
    }

    /// Verify that `basis` is a vector-space basis of the quotient. On failure
    /// the error carries either a linear relation among the elements or the
    /// dimension mismatch.
    pub fn check_basis(&self, basis: &[SparsePolynomial<F>]) -> Result<(), GroebnerError> {
        let dim = self.dimension();
        if basis.len() != dim {
            return Err(GroebnerError::NotABasis {
                detail: format!(
                    "expected {} elements for a {}-dimensional quotient, got {}",
                    dim,
                    dim,
                    basis.len()
                ),
            });
        }
        let m = self.basis_matrix(basis)?;
        let kernel = m.kernel();
        if let Some(rel) = kernel.first() {
            let mut s = String::new();
            let mut first = true;
            for (j, c) in rel.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    s.push_str(" + ");
                }
                first = false;
                let _ = write!(s, "({}) * ({})", c, basis[j]);
            }
            s.push_str(" = 0 in the quotient");
            return Err(GroebnerError::NotABasis { detail: s });
        }
        Ok(())
    }

    /// Matrix whose column `j` holds the coordinates of `basis[j]`.
    pub fn basis_matrix(
        &self,
        basis: &[SparsePolynomial<F>],
    ) -> Result<DenseMatrix<F>, GroebnerError> {
        let dim = self.dimension();
        let mut m = DenseMatrix::zeros(dim, basis.len());
        for (j, b) in basis.iter().enumerate() {
            let col = self.coordinates(b)?;
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Express `p mod I` as a linear combination of `basis` (which must span
    /// at least the class of `p`). Returns the coefficient vector.
    pub fn express_in_basis(
        &self,
        p: &SparsePolynomial<F>,
        basis: &[SparsePolynomial<F>],
    ) -> Result<Vec<F>, GroebnerError> {
        let m = self.basis_matrix(basis)?;
        let rhs = self.coordinates(p)?;
        m.solve(&rhs).ok_or_else(|| GroebnerError::NotABasis {
            detail: format!(
                "the class of {} is outside the span of the proposed elements",
                p
            ),
        })
    }

    /// Multiplicity of the quotient at the single point `point`, that is the
    /// dimension of the joint generalized eigenspace of the multiplication
    /// matrices for the eigenvalue tuple `point`. Summed over all points of
    /// the variety this recovers `dimension()`.
    ///
    /// The space is grown as `U_1 = ∩ ker N_i`,
    /// `U_{k+1} = { v : N_i v ∈ U_k for all i }` with `N_i = M_i - point_i I`;
    /// each `U_k` is held as the kernel of a constraint matrix, so the update
    /// is a matrix product followed by a row-space compression.
    pub fn local_multiplicity(&self, point: &[F]) -> Result<usize, GroebnerError> {
        let n = self.ring().nvars();
        if point.len() != n {
            return Err(GroebnerError::Shape(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                n
            )));
        }
        let dim = self.dimension();
        if dim == 0 {
            return Ok(0);
        }
        let mut shifted = Vec::with_capacity(n);
        for i in 0..n {
            let mi = self.variable_matrix(i)?;
            let eye = DenseMatrix::identity(dim).scale(&point[i]);
            shifted.push(mi.sub(&eye));
        }
        // U_k = ker(C); start with C = stack of all N_i.
        let mut constraints = shifted[0].clone();
        for ni in &shifted[1..] {
            constraints = constraints.vstack(ni);
        }
        constraints = constraints.row_basis();
        let mut current_dim = dim - constraints.rank();
        loop {
            let mut next = constraints.mul(&shifted[0]);
            for ni in &shifted[1..] {
                next = next.vstack(&constraints.mul(ni));
            }
            next = next.row_basis();
            let next_dim = dim - next.rank();
            if next_dim == current_dim {
                return Ok(current_dim);
            }
            current_dim = next_dim;
            constraints = next;
        }
    }
}

/// Standard monomials of a zero-dimensional leading-term ideal, sorted
/// ascending in the basis order. Returns `Err(variable_name)` when some
/// variable has no pure leading power (the quotient is infinite-dimensional).
fn standard_monomials<F: Field>(
    gb: &GroebnerBasis<F>,
) -> Result<Result<Vec<ExponentVector>, String>, GroebnerError> {
    let ring = gb.ring();
    let n = ring.nvars();
    let leads = gb.leading_exponents();
    if gb.is_unit_ideal() {
        return Ok(Ok(Vec::new()));
    }
    if n == 0 {
        // No variables: the quotient is F itself unless the ideal is (1).
        return Ok(Ok(vec![ExponentVector::zero(0)]));
    }
    // Pure-power bound per variable.
    let mut bound = vec![None::<u32>; n];
    for le in &leads {
        for i in 0..n {
            let is_pure = (0..n).all(|j| j == i || le.0[j] == 0);
            if is_pure && le.0[i] > 0 {
                let b = bound[i].map_or(le.0[i], |cur: u32| cur.min(le.0[i]));
                bound[i] = Some(b);
            }
        }
    }
    for i in 0..n {
        if bound[i].is_none() {
            return Ok(Err(ring.var_name(i).to_string()));
        }
    }
    let bound: Vec<u32> = bound.into_iter().map(|b| b.unwrap()).collect();
    // Enumerate the box and keep monomials outside the leading-term ideal.
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    'outer: loop {
        let e = ExponentVector(current.clone());
        if !leads.iter().any(|le| le.divides(&e)) {
            out.push(e);
        }
        for i in 0..n {
            current[i] += 1;
            if current[i] < bound[i] {
                continue 'outer;
            }
            current[i] = 0;
        }
        break;
    }
    out.sort_by(|a, b| gb.order().cmp_exp(a, b));
    Ok(Ok(out))
}

/// Multiplicity of `point` as a solution of the system `gens = 0`. Builds the
/// quotient for the given order first; the ideal must be zero-dimensional.
pub fn local_multiplicity<F: Field>(
    gens: &[SparsePolynomial<F>],
    point: &[F],
    order: MonomialOrder,
) -> Result<usize, GroebnerError> {
    let gb = buchberger(gens, order)?;
    let q = QuotientAlgebra::new(gb)?;
    q.local_multiplicity(point)
}

/// Multiplicity of the origin as a point of `V(gens)`: the stabilized
/// colength of `I + m^N` over increasing `N` (`m` the maximal ideal at 0).
/// Equal consecutive colengths force `m^N ⊆ I` in the local ring at the
/// origin (Nakayama), so the stable value is the local multiplicity; it is 0
/// exactly when the origin lies outside `V(gens)`. Unlike the generalized
/// kernel of `local_multiplicity`, this never builds the global quotient, so
/// it stays fast when `V(gens)` has many other points.
///
/// Each truncated colength is a plain linear-algebra rank (no Groebner
/// basis): the image of the ideal in `k[x]/m^N` is spanned by the monomial
/// multiples of the generators, truncated at degree `N`. A fast modular
/// prescan locates the stabilization degree; the returned value is then
/// certified by two exact rational colengths.
pub fn origin_multiplicity(gens: &[SparsePolynomial<Rat>]) -> Result<usize, GroebnerError> {
    let gens: Vec<SparsePolynomial<Rat>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Err(GroebnerError::Shape(
            "origin_multiplicity needs nonzero generators".to_string(),
        ));
    }
    const CAP: u32 = 64;
    // Modular prescan: colength mod p bounds the exact colength from above
    // (ranks can only drop modulo p), so it can only delay the first
    // candidate, never produce a wrong final value.
    let mut candidate = None;
    let mut prev = None;
    for n in 1..=CAP {
        let c = truncated_colength_mod(&gens, n);
        if prev == Some(c) {
            candidate = Some(n - 1);
            break;
        }
        prev = Some(c);
    }
    let start = candidate.ok_or_else(|| {
        GroebnerError::Shape("origin colength did not stabilize below degree 64".to_string())
    })?;
    // Exact certification: two equal consecutive rational colengths.
    let mut prev = truncated_colength(&gens, start);
    for n in start + 1..=CAP {
        let cur = truncated_colength(&gens, n);
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(GroebnerError::Shape(
        "origin colength did not stabilize below degree 64".to_string(),
    ))
}

/// Coefficient operations needed by the sparse truncated-rank elimination.
trait ElimCoeff: Clone {
    fn from_rat(c: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    /// `self -= a * b`
    fn sub_mul(&mut self, a: &Self, b: &Self);
    /// `-(a * b)`
    fn neg_mul(a: &Self, b: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl ElimCoeff for Rat {
    fn from_rat(c: &Rat) -> Self {
        c.clone()
    }
    fn is_zero(&self) -> bool {
        Field::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn neg_mul(a: &Self, b: &Self) -> Self {
        -(a * b)
    }
    fn inv(&self) -> Self {
        Field::inv(self).expect("pivot is nonzero")
    }
}

/// Arithmetic modulo the Mersenne prime `2^61 - 1` for the prescan.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Fp(u64);

impl Fp {
    const P: u64 = (1 << 61) - 1;

    fn mulmod(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % Self::P as u128) as u64
    }

    fn powmod(mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mulmod(acc, b);
            }
            b = Self::mulmod(b, b);
            e >>= 1;
        }
        acc
    }
}

impl ElimCoeff for Fp {
    fn from_rat(c: &Rat) -> Self {
        use num_traits::Signed;
        let red = |x: &num_bigint::BigInt| -> u64 {
            let m: num_bigint::BigInt = x.abs() % Self::P;
            let m = m.to_string().parse::<u64>().unwrap_or(0);
            if x.sign() == num_bigint::Sign::Minus && m != 0 {
                Self::P - m
            } else {
                m
            }
        };
        Fp(Self::mulmod(
            red(c.numer()),
            Self::powmod(red(c.denom()), Self::P - 2),
        ))
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(Self::mulmod(self.0, other.0))
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        let prod = Self::mulmod(a.0, b.0);
        self.0 = (self.0 + Self::P - prod) % Self::P;
    }
    fn neg_mul(a: &Self, b: &Self) -> Self {
        let prod = Self::mulmod(a.0, b.0);
        Fp((Self::P - prod) % Self::P)
    }
    fn inv(&self) -> Self {
        Fp(Self::powmod(self.0, Self::P - 2))
    }
}

/// Exact colength of `I + m^N` in `k[x_1..x_k]`: the dimension of the space
/// of monomials of degree `< N` minus the rank of the truncated monomial
/// multiples of the generators.
pub fn truncated_colength(gens: &[SparsePolynomial<Rat>], n: u32) -> usize {
    colength_generic::<Rat>(gens, n)
}

/// Colength of `I + m^N` modulo a fixed 61-bit prime (prescan only).
fn truncated_colength_mod(gens: &[SparsePolynomial<Rat>], n: u32) -> usize {
    colength_generic::<Fp>(gens, n)
}

fn colength_generic<C: ElimCoeff>(gens: &[SparsePolynomial<Rat>], n: u32) -> usize {
    match truncation_rows::<C>(gens, n) {
        Some((dim, rows)) => dim - sparse_rank(rows),
        None => 0,
    }
}

/// Shared row construction for the truncated colength: returns the dimension
/// of the degree `< n` monomial space and the sparse rows (column-indexed
/// coefficients) spanning the image of the ideal there.
fn truncation_rows<C: ElimCoeff>(
    gens: &[SparsePolynomial<Rat>],
    n: u32,
) -> Option<(usize, Vec<std::collections::BTreeMap<usize, C>>)> {
    use std::collections::{BTreeMap, HashMap};
    let ring = gens.first()?.ring().clone();
    let nvars = ring.nvars();
    // Basis: all monomials of total degree < n, indexed consecutively.
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut basis: Vec<Vec<u32>> = Vec::new();
    for d in 0..n {
        for e in exponents_of_total_degree(nvars, d) {
            index.insert(e.clone(), basis.len());
            basis.push(e);
        }
    }
    let mut rows: Vec<BTreeMap<usize, C>> = Vec::new();
    for g in gens {
        let ord = g.terms().map(|(e, _)| e.total_degree()).min().unwrap_or(0);
        if ord >= n {
            continue;
        }
        let max_shift = n - 1 - ord;
        for d in 0..=max_shift {
            for shift in exponents_of_total_degree(nvars, d) {
                let mut row: BTreeMap<usize, C> = BTreeMap::new();
                for (e, c) in g.terms() {
                    let sum: Vec<u32> = e.0.iter().zip(&shift).map(|(a, b)| a + b).collect();
                    if let Some(&col) = index.get(&sum) {
                        row.insert(col, C::from_rat(c));
                    }
                }
                row.retain(|_, v| !v.is_zero());
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    Some((basis.len(), rows))
}

/// Rank of a set of sparse rows by structured Gaussian elimination; pivot
/// rows are kept monic at their leading column.
fn sparse_rank<C: ElimCoeff>(rows: Vec<std::collections::BTreeMap<usize, C>>) -> usize {
    use std::collections::BTreeMap;
    let mut pivots: BTreeMap<usize, BTreeMap<usize, C>> = BTreeMap::new();
    for mut row in rows {
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else {
                break;
            };
            match pivots.get(&lead) {
                None => {
                    let f = lead_val.inv();
                    let norm: BTreeMap<usize, C> =
                        row.iter().map(|(c, v)| (*c, v.mul(&f))).collect();
                    pivots.insert(lead, norm);
                    break;
                }
                Some(pivot) => {
                    // row -= row[lead] * pivot  (pivot is monic at `lead`).
                    let factor = lead_val.clone();
                    for (c, v) in pivot {
                        match row.get_mut(c) {
                            Some(entry) => entry.sub_mul(v, &factor),
                            None => {
                                row.insert(*c, C::neg_mul(v, &factor));
                            }
                        }
                    }
                    row.retain(|_, v| !v.is_zero());
                }
            }
        }
    }
    pivots.len()
}

/// All exponent vectors of the given total degree.
fn exponents_of_total_degree(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for d in 0..=left {
            cur.push(d);
            rec(left - d, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(degree, nvars, &mut Vec::new(), &mut out);
    out
}

/// Rank, determinant (square matrices only) and a kernel basis, mutually
/// consistent: `rank + kernel_basis.len() == ncols`.
#[derive(Clone, Debug)]
pub struct LinearAnalysis<F: Field> {
    pub rank: usize,
    pub det: Option<F>,
    pub kernel_basis: Vec<Vec<F>>,
}

pub fn exact_linear_algebra<F: Field>(m: &DenseMatrix<F>) -> LinearAnalysis<F> {
    LinearAnalysis {
        rank: m.rank(),
        det: (m.nrows() == m.ncols()).then(|| m.det()),
        kernel_basis: m.kernel(),
    }
}

/// Dimension of `F[x]/⟨gens⟩` for the given order, without building the full
/// quotient structure.
pub fn quotient_dimension<F: Field>(
    gens: &[SparsePolynomial<F>],
    order: MonomialOrder,
) -> Result<Dimension, GroebnerError> {
    let gb = buchberger(gens, order)?;
    match standard_monomials(&gb)? {
        Ok(s) => Ok(Dimension::Finite(s.len())),
        Err(witness) => Ok(Dimension::Infinite { witness }),
    }
}
