//! Discriminant matrices and transversality verdicts.
//!
//! For the deformation family `phi(z, s) = base(z) + sum_j s_j e_j(z)` the
//! multiplication structure of the Milnor algebra packs into the matrices
//! Sigma / Sigma-tilde; `det(s_1 I + C)` cuts out the discriminant as a monic
//! polynomial in `s_1`. Pulling Sigma back along the deformation map `iota`
//! and stacking the Jacobian of `iota` yields the transversality matrix `T`
//! whose rank decides whether the big wave front is a free divisor near the
//! chosen point; when the rank drops, an exact pencil of minors in
//! `(xi_1, .., xi_{n+1}, tau)` tests whether the degeneracy is isolated.

use std::collections::BTreeMap;

use crate::arith::{ArithError, Field, Rat, RatFunc, UniPoly};
use crate::groebner::{buchberger, DenseMatrix, GroebnerError, QuotientAlgebra};
use crate::poly::{ExponentVector, MonomialOrder, PolyError, PolyRing, RingRc, SparsePolynomial};
use crate::wavefront::DeformationFrame;

const ORDER: MonomialOrder = MonomialOrder::DegRevLex;

#[derive(Debug, thiserror::Error)]
pub enum DivisorError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("parameter point violates the stratum constraint {constraint}")]
    ConstraintViolated { constraint: String },
    #[error("basis assumption fails at the parameter point: {0}")]
    AssumptionII(String),
    #[error("quotient dimension {got} at the parameter point differs from mu = {mu}")]
    DimensionMismatch { got: usize, mu: usize },
    #[error("the quotient is infinite-dimensional at the parameter point (witness {0})")]
    InfiniteQuotient(String),
    #[error("entry ({row}, {col}) of T has a pole along the requested line")]
    PoleOnLine { row: usize, col: usize },
    #[error("minor selection {0:?} is out of range for {1} rows")]
    SelectionOutOfRange(Vec<usize>, usize),
    #[error("minor selection must name {expected} rows, got {got}")]
    SelectionArity { expected: usize, got: usize },
}

// ---------------------------------------------------------------------------
// Deformation families
// ---------------------------------------------------------------------------

/// The polynomial family `phi(z, s) = base + sum_{j=1}^m s_j e_j` with
/// `e_1 = 1`, together with the frame data needed to size Sigma.
#[derive(Clone, Debug)]
pub struct DeformationFamily {
    pub base: SparsePolynomial<Rat>,
    pub e_list: Vec<SparsePolynomial<Rat>>,
    pub mu: usize,
    pub nu: usize,
    pub u_constraints: Vec<SparsePolynomial<Rat>>,
}

impl DeformationFamily {
    pub fn from_frame(frame: &DeformationFrame, base: SparsePolynomial<Rat>) -> Self {
        DeformationFamily {
            base,
            e_list: frame.e_list.clone(),
            mu: frame.mu,
            nu: frame.nu,
            u_constraints: frame.u_constraints.clone(),
        }
    }

    pub fn m(&self) -> usize {
        self.e_list.len()
    }

    /// `phi(., s) - s_1` over the field F at the parameter tail `s_2..s_m`.
    /// `s_1` only shifts by a constant, so it never enters the Jacobian.
    fn fiber_polynomial<F: Field>(&self, tail: &[F]) -> Result<SparsePolynomial<F>, DivisorError> {
        assert_eq!(tail.len() + 1, self.m(), "tail covers s_2..s_m");
        let mut g = self.base.map_coeffs(F::from_rat);
        for (e, c) in self.e_list[1..].iter().zip(tail) {
            g = g.add(&e.map_coeffs(F::from_rat).mul_scalar(c))?;
        }
        Ok(g)
    }

    fn check_constraints<F: Field>(&self, tail: &[F]) -> Result<(), DivisorError> {
        let mut full = vec![F::zero()];
        full.extend(tail.iter().cloned());
        for con in &self.u_constraints {
            let v = con.map_coeffs(F::from_rat).eval(&full);
            if !v.is_zero() {
                return Err(DivisorError::ConstraintViolated {
                    constraint: con.to_string(),
                });
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Sigma matrices
// ---------------------------------------------------------------------------

/// The multiplication matrix `C` of `phi - s_1` on the `e`-basis plus the
/// relation rows expressing `e_i` (`mu < i <= nu`) back in the basis.
/// `sigma_tilde(s_1) = s_1 I + C`; the full `nu x m` Sigma follows the
/// block layout: relation rows carry `-1` on their own column.
#[derive(Clone, Debug)]
pub struct SigmaMatrices<F: Field> {
    pub c: DenseMatrix<F>,
    pub extra: DenseMatrix<F>,
    pub point_tail: Vec<F>,
    mu: usize,
    nu: usize,
    m: usize,
}

impl<F: Field> SigmaMatrices<F> {
    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn sigma_tilde_at(&self, s1: &F) -> DenseMatrix<F> {
        self.c.add(&DenseMatrix::identity(self.mu).scale(s1))
    }

    pub fn sigma_full_at(&self, s1: &F) -> DenseMatrix<F> {
        let mut out = DenseMatrix::zeros(self.nu, self.m);
        let tilde = self.sigma_tilde_at(s1);
        for r in 0..self.mu {
            for c in 0..self.mu {
                out.set(r, c, tilde.at(r, c).clone());
            }
        }
        for r in self.mu..self.nu {
            for c in 0..self.mu {
                out.set(r, c, self.extra.at(r - self.mu, c).clone());
            }
            out.set(r, r, F::one().neg());
        }
        out
    }
}

/// Compute the Sigma data of the family at the parameter tail `s_2..s_m`
/// over any coefficient field (rationals for points, univariate rational
/// functions for lines).
pub fn sigma_matrices<F: Field>(
    fam: &DeformationFamily,
    tail: &[F],
) -> Result<SigmaMatrices<F>, DivisorError> {
    fam.check_constraints(tail)?;
    let g = fam.fiber_polynomial(tail)?;
    let zr = g.ring().clone();
    let n = zr.nvars();
    let jac: Vec<SparsePolynomial<F>> = (0..n)
        .map(|j| g.partial_derivative(j))
        .collect::<Result<_, _>>()?;
    let gb = buchberger(&jac, ORDER)?;
    let q = QuotientAlgebra::new(gb).map_err(|e| match e {
        GroebnerError::NotZeroDimensional { witness } => DivisorError::InfiniteQuotient(witness),
        other => DivisorError::Groebner(other),
    })?;
    if q.dimension() != fam.mu {
        return Err(DivisorError::DimensionMismatch {
            got: q.dimension(),
            mu: fam.mu,
        });
    }
    let e_f: Vec<SparsePolynomial<F>> = fam
        .e_list
        .iter()
        .map(|e| e.map_coeffs(F::from_rat))
        .collect();
    let basis = &e_f[..fam.mu];
    q.check_basis(basis)
        .map_err(|e| DivisorError::AssumptionII(e.to_string()))?;

    let mut c = DenseMatrix::zeros(fam.mu, fam.mu);
    for i in 0..fam.mu {
        let prod = g.mul(&e_f[i])?;
        let row = q
            .express_in_basis(&prod, basis)
            .map_err(|e| DivisorError::AssumptionII(e.to_string()))?;
        for (j, v) in row.into_iter().enumerate() {
            c.set(i, j, v);
        }
    }
    let mut extra = DenseMatrix::zeros(fam.nu - fam.mu, fam.mu);
    for i in fam.mu..fam.nu {
        let row = q
            .express_in_basis(&e_f[i], basis)
            .map_err(|e| DivisorError::AssumptionII(e.to_string()))?;
        for (j, v) in row.into_iter().enumerate() {
            extra.set(i - fam.mu, j, v);
        }
    }
    Ok(SigmaMatrices {
        c,
        extra,
        point_tail: tail.to_vec(),
        mu: fam.mu,
        nu: fam.nu,
        m: fam.m(),
    })
}

/// Monic characteristic polynomial `det(s_1 I + C)` of the family at a
/// rational parameter tail: the defining equation of the discriminant as a
/// Weierstrass polynomial in `s_1` (ascending coefficients).
pub fn discriminant_poly(fam: &DeformationFamily, tail: &[Rat]) -> Result<UniPoly, DivisorError> {
    let sigma = sigma_matrices::<Rat>(fam, tail)?;
    Ok(char_poly_neg(&sigma.c))
}

/// Characteristic polynomial of `-A`, i.e. `det(x I + A)`, by the
/// Faddeev–LeVerrier recursion; exact over the rationals.
pub fn char_poly_neg(a: &DenseMatrix<Rat>) -> UniPoly {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "char_poly: square matrix required");
    // det(x I + A) = det(x I - B) with B = -A: the characteristic
    // polynomial x^n + c_1 x^{n-1} + ... + c_n of B via Faddeev-LeVerrier.
    let b = a.scale(&-Rat::one());
    let mut coeffs_desc = vec![Rat::one()];
    let mut m = DenseMatrix::<Rat>::identity(n);
    for k in 1..=n {
        let bm = b.mul(&m);
        let trace = (0..n).fold(Rat::zero(), |acc, i| acc + bm.at(i, i));
        let ck = -trace / Rat::from_integer(k.into());
        coeffs_desc.push(ck.clone());
        if k < n {
            m = bm.add(&DenseMatrix::identity(n).scale(&ck));
        }
    }
    coeffs_desc.reverse();
    UniPoly::new(coeffs_desc)
}

// ---------------------------------------------------------------------------
// The transversality matrix T
// ---------------------------------------------------------------------------

/// `(nu + n + 2) x m` matrix: Sigma evaluated at `iota(point)` stacked over
/// the Jacobian rows of iota (order `x_1..x_{n+1}, t`).
#[derive(Clone, Debug)]
pub struct TMatrix<F: Field> {
    pub entries: DenseMatrix<F>,
    pub nu: usize,
}

impl<F: Field> TMatrix<F> {
    pub fn rank(&self) -> usize {
        self.entries.rank()
    }

    pub fn sigma_block(&self) -> DenseMatrix<F> {
        DenseMatrix::from_rows(self.entries.rows()[..self.nu].to_vec())
    }
}

/// Evaluate a rational-coefficient polynomial at a point over F.
fn eval_over<F: Field>(p: &SparsePolynomial<Rat>, point: &[F]) -> F {
    p.map_coeffs(F::from_rat).eval(point)
}

pub fn build_t<F: Field>(
    fam: &DeformationFamily,
    frame: &DeformationFrame,
    point: &[F],
) -> Result<TMatrix<F>, DivisorError> {
    let m = fam.m();
    let s_values: Vec<F> = frame.iota.iter().map(|s| eval_over(s, point)).collect();
    let sigma = sigma_matrices(fam, &s_values[1..])?;
    let sigma_rows = sigma.sigma_full_at(&s_values[0]);
    let nvars = frame.xt_ring().nvars();
    let mut jac_rows = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let mut row = Vec::with_capacity(m);
        for s in &frame.iota {
            row.push(eval_over(&s.partial_derivative(v)?, point));
        }
        jac_rows.push(row);
    }
    let entries = sigma_rows.vstack(&DenseMatrix::from_rows(jac_rows));
    Ok(TMatrix {
        entries,
        nu: fam.nu,
    })
}

/// Rank of `T` restricted to the tangent directions of the constraint set
/// `U` at the parameter point: the columns of `T` are composed with a kernel
/// basis of the constraint Jacobian. With no constraints this is the plain
/// rank; with constraints it reproduces the rank of `T` written in local
/// coordinates on `U` instead of the ambient parameter space.
pub fn restricted_t_rank(
    fam: &DeformationFamily,
    t: &TMatrix<Rat>,
    s_point: &[Rat],
) -> Result<usize, DivisorError> {
    if fam.u_constraints.is_empty() {
        return Ok(t.rank());
    }
    let m = fam.m();
    assert_eq!(s_point.len(), m, "full s-point expected");
    let mut jac = DenseMatrix::zeros(fam.u_constraints.len(), m);
    for (i, con) in fam.u_constraints.iter().enumerate() {
        for v in 0..m {
            jac.set(i, v, con.partial_derivative(v)?.eval(s_point));
        }
    }
    let kernel = jac.kernel();
    let mut basis = DenseMatrix::zeros(m, kernel.len());
    for (c, vec) in kernel.iter().enumerate() {
        for (r, v) in vec.iter().enumerate() {
            basis.set(r, c, v.clone());
        }
    }
    Ok(t.entries.mul(&basis).rank())
}

/// Entrywise derivative of `T` along the line `base + h * direction`,
/// evaluated at `h = 0`, using exact rational-function arithmetic end to end.
pub fn directional_derivative_t(
    fam: &DeformationFamily,
    frame: &DeformationFrame,
    base_point: &[Rat],
    direction: &[Rat],
) -> Result<DenseMatrix<Rat>, DivisorError> {
    assert_eq!(base_point.len(), direction.len());
    let line: Vec<RatFunc> = base_point
        .iter()
        .zip(direction)
        .map(|(b, d)| RatFunc::from_poly(UniPoly::new(vec![b.clone(), d.clone()])))
        .collect();
    let t = build_t::<RatFunc>(fam, frame, &line)?;
    let mut out = DenseMatrix::zeros(t.entries.nrows(), t.entries.ncols());
    for r in 0..t.entries.nrows() {
        for c in 0..t.entries.ncols() {
            let v = t
                .entries
                .at(r, c)
                .derivative_at_zero()
                .map_err(|_| DivisorError::PoleOnLine { row: r, col: c })?;
            out.set(r, c, v);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Pencil minors and isolation
// ---------------------------------------------------------------------------

/// Ring of the pencil variables `xi_1..xi_k, tau` where `k = dT count - 1`.
pub fn pencil_ring(spatial: usize) -> RingRc {
    let mut names: Vec<String> = (1..=spatial).map(|j| format!("xi{j}")).collect();
    names.push("tau".to_string());
    PolyRing::new(names)
}

/// Determinants of the selected `nu`-row blocks of the affine pencil
/// `T0 + xi_1 dT_1 + ... + xi_k dT_k + tau dT_{k+1}` as exact polynomials.
/// `dt_list` is ordered `x_1..x_{n+1}, t`; selections are 1-based row lists.
/// When the pencil has more columns than `nu`, every `nu`-column subset of a
/// selected block contributes one minor.
pub fn pencil_minors(
    t0: &DenseMatrix<Rat>,
    dt_list: &[DenseMatrix<Rat>],
    nu: usize,
    selections: &[Vec<usize>],
) -> Result<Vec<SparsePolynomial<Rat>>, DivisorError> {
    let ring = pencil_ring(dt_list.len().saturating_sub(1));
    let nrows = t0.nrows();
    let ncols = t0.ncols();
    for dt in dt_list {
        assert_eq!((dt.nrows(), dt.ncols()), (nrows, ncols), "pencil shape");
    }
    // Entry (r, c): affine-linear polynomial in the pencil variables.
    let entry = |r: usize, c: usize| -> SparsePolynomial<Rat> {
        let mut p = SparsePolynomial::constant(&ring, t0.at(r, c).clone());
        for (k, dt) in dt_list.iter().enumerate() {
            let coeff = dt.at(r, c);
            if !Field::is_zero(coeff) {
                p = p
                    .add(&SparsePolynomial::monomial(
                        &ring,
                        ExponentVector::unit(ring.nvars(), k),
                        coeff.clone(),
                    ))
                    .expect("same ring");
            }
        }
        p
    };

    let mut blocks: Vec<Vec<Vec<SparsePolynomial<Rat>>>> = Vec::new();
    for sel in selections {
        if sel.len() != nu {
            return Err(DivisorError::SelectionArity {
                expected: nu,
                got: sel.len(),
            });
        }
        if sel.iter().any(|&r| r == 0 || r > nrows) {
            return Err(DivisorError::SelectionOutOfRange(sel.clone(), nrows));
        }
        for cols in column_subsets(ncols, nu) {
            let rows: Vec<Vec<SparsePolynomial<Rat>>> = sel
                .iter()
                .map(|&r| cols.iter().map(|&c| entry(r - 1, c)).collect())
                .collect();
            blocks.push(rows);
        }
    }

    let threads = thread_budget().min(blocks.len().max(1));
    if threads <= 1 || blocks.len() <= 1 {
        return blocks.iter().map(|b| poly_det(b)).collect();
    }
    let mut out: Vec<Option<SparsePolynomial<Rat>>> = vec![None; blocks.len()];
    let chunk = blocks.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (start, blk) in blocks.chunks(chunk).enumerate() {
            handles.push((
                start * chunk,
                scope.spawn(move || {
                    blk.iter()
                        .map(|b| poly_det(b))
                        .collect::<Result<Vec<_>, DivisorError>>()
                }),
            ));
        }
        for (offset, h) in handles {
            match h.join().expect("minor worker panicked") {
                Ok(list) => {
                    for (i, p) in list.into_iter().enumerate() {
                        out[offset + i] = Some(p);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok(())
    })?;
    Ok(out.into_iter().map(|p| p.expect("filled")).collect())
}

/// All k-element subsets of {0, .., m-1} in lexicographic order.
fn column_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let remaining = k - cur.len();
        for i in start..=m - remaining {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Optional cap on worker threads (environment variable FRONTKIT_THREADS).
fn thread_budget() -> usize {
    std::env::var("FRONTKIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(1)
}

/// Fraction-free Bareiss determinant over the polynomial ring; all interior
/// divisions are exact.
pub fn poly_det(
    rows: &[Vec<SparsePolynomial<Rat>>],
) -> Result<SparsePolynomial<Rat>, DivisorError> {
    let n = rows.len();
    let ring = rows
        .first()
        .and_then(|r| r.first())
        .map(|p| p.ring().clone())
        .expect("nonempty matrix");
    if n == 0 {
        return Ok(SparsePolynomial::one(&ring));
    }
    let mut a: Vec<Vec<SparsePolynomial<Rat>>> = rows.to_vec();
    let mut sign = false;
    let mut prev = SparsePolynomial::one(&ring);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(SparsePolynomial::zero(&ring)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k])?.sub(&a[i][k].mul(&a[k][j])?)?;
                a[i][j] = num
                    .div_exact(&prev, ORDER)
                    .expect("Bareiss division is exact");
            }
            a[i][k] = SparsePolynomial::zero(&ring);
        }
        prev = a[k][k].clone();
    }
    let mut det = a[n - 1][n - 1].clone();
    if sign {
        det = det.neg();
    }
    Ok(det)
}

/// Remove polynomial factors that are units at the origin: for each variable,
/// the gcd of the univariate coefficient slices is split into its monomial
/// part (kept: it vanishes at the origin) and a unit part with nonzero
/// constant term (divided out). Repeats until stable.
pub fn strip_units(p: &SparsePolynomial<Rat>) -> SparsePolynomial<Rat> {
    let ring = p.ring().clone();
    let nvars = ring.nvars();
    let mut cur = p.content_normalize(ORDER);
    if cur.is_zero() {
        return cur;
    }
    loop {
        let mut changed = false;
        for v in 0..nvars {
            // Slice the polynomial along variable v: terms sharing the other
            // exponents form one univariate polynomial in v.
            let mut groups: BTreeMap<ExponentVector, UniPoly> = BTreeMap::new();
            for (e, c) in cur.terms() {
                let mut key = e.clone();
                let deg = key.0[v] as usize;
                key.0[v] = 0;
                let poly = groups.entry(key).or_insert_with(UniPoly::zero);
                let mut coeffs = poly.coeffs().to_vec();
                if coeffs.len() <= deg {
                    coeffs.resize(deg + 1, Rat::zero());
                }
                coeffs[deg] = &coeffs[deg] + c;
                *poly = UniPoly::new(coeffs);
            }
            let mut gcd = UniPoly::zero();
            for g in groups.values() {
                gcd = gcd.gcd(g);
                if gcd.degree() == Some(0) {
                    break;
                }
            }
            // Split off the monomial (origin-vanishing) part of the gcd.
            let val = gcd
                .coeffs()
                .iter()
                .position(|c| !Field::is_zero(c))
                .unwrap_or(0);
            let unit = UniPoly::new(gcd.coeffs()[val..].to_vec()).monic();
            if unit.degree().unwrap_or(0) == 0 {
                continue;
            }
            // Lift the univariate unit into the ring and divide exactly.
            let lifted = SparsePolynomial::from_terms(
                &ring,
                unit.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !Field::is_zero(*c))
                    .map(|(k, c)| {
                        let mut e = vec![0u32; nvars];
                        e[v] = k as u32;
                        (ExponentVector(e), c.clone())
                    })
                    .collect(),
            );
            cur = cur
                .div_exact(&lifted, ORDER)
                .expect("slice gcd divides the polynomial")
                .content_normalize(ORDER);
            changed = true;
        }
        if !changed {
            return cur;
        }
    }
}

#[derive(Clone, Debug)]
pub struct IsolationResult {
    pub isolated: bool,
    pub multiplicity: usize,
    /// Variable witnessing a positive-dimensional solution set, if any.
    pub witness: Option<String>,
}

/// Strip units off the minors, pass the ideal through Buchberger, and decide
/// whether the origin is an isolated common zero; if so report its
/// multiplicity.
pub fn isolated_nontransversality_check(
    minors: &[SparsePolynomial<Rat>],
) -> Result<IsolationResult, DivisorError> {
    let stripped: Vec<SparsePolynomial<Rat>> = minors
        .iter()
        .map(strip_units)
        .filter(|p| !p.is_zero())
        .collect();
    if stripped.is_empty() {
        return Ok(IsolationResult {
            isolated: false,
            multiplicity: 0,
            witness: Some("all minors vanish identically".to_string()),
        });
    }
    let gb = buchberger(&stripped, ORDER)?;
    match QuotientAlgebra::new(gb) {
        Err(GroebnerError::NotZeroDimensional { witness }) => Ok(IsolationResult {
            isolated: false,
            multiplicity: 0,
            witness: Some(witness),
        }),
        Err(other) => Err(other.into()),
        Ok(_) => {
            // Zero-dimensional: every solution is isolated. The origin's
            // multiplicity comes from the truncated colength, which avoids
            // the (large) global quotient structure.
            let multiplicity = crate::groebner::origin_multiplicity(&stripped)?;
            Ok(IsolationResult {
                isolated: multiplicity >= 1,
                multiplicity,
                witness: None,
            })
        }
    }
}

/// Whether the column span of the stratum Jacobian meets the row span of the
/// iota Jacobian only in the zero vector (transversal stratum contact).
pub fn stratum_tangent_check(
    stratum_param: &[SparsePolynomial<Rat>],
    param_point: &[Rat],
    iota_jacobian: &DenseMatrix<Rat>,
) -> Result<bool, DivisorError> {
    let m = stratum_param.len();
    let p = stratum_param.first().map(|q| q.ring().nvars()).unwrap_or(0);
    let mut js = DenseMatrix::zeros(m, p);
    for (i, s) in stratum_param.iter().enumerate() {
        for v in 0..p {
            js.set(i, v, s.partial_derivative(v)?.eval(param_point));
        }
    }
    let ji = iota_jacobian.transpose(); // columns now span the iota image tangent
    assert_eq!(
        ji.nrows(),
        m,
        "iota Jacobian must have one column per parameter s_j"
    );
    let combined = js.hstack(&ji);
    Ok(combined.rank() == js.rank() + ji.rank())
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Free,
    AlmostFreeCandidate,
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct IsolationDetail {
    pub selections_used: Vec<Vec<usize>>,
    pub multiplicity: usize,
    pub isolated: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct TransversalityReport {
    pub rank_sigma: usize,
    pub rank_t: usize,
    pub nu: usize,
    pub verdict: Verdict,
    pub isolation: Option<IsolationDetail>,
}

/// Full verdict pipeline at a rational point: rank of T decides freeness;
/// on rank drop, the pencil of minors (explicit selections, or an automated
/// search over row subsets containing the Jacobian rows) decides isolation.
pub fn transversality_verdict(
    fam: &DeformationFamily,
    frame: &DeformationFrame,
    point: &[Rat],
    selections: Option<&[Vec<usize>]>,
) -> Result<TransversalityReport, DivisorError> {
    let t = build_t::<Rat>(fam, frame, point)?;
    let rank_t = restricted_t_rank(fam, &t, &frame.iota_at(point))?;
    let rank_sigma = t.sigma_block().rank();
    if rank_t >= fam.nu {
        return Ok(TransversalityReport {
            rank_sigma,
            rank_t,
            nu: fam.nu,
            verdict: Verdict::Free,
            isolation: None,
        });
    }
    let nvars = frame.xt_ring().nvars();
    let mut dts = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let mut dir = vec![Rat::zero(); nvars];
        dir[v] = Rat::one();
        dts.push(directional_derivative_t(fam, frame, point, &dir)?);
    }
    let chosen: Vec<Vec<usize>> = match selections {
        Some(s) => s.to_vec(),
        None => default_selections(&t.entries, fam.nu, nvars),
    };
    let minors = pencil_minors(&t.entries, &dts, fam.nu, &chosen)?;
    let origin = vec![Rat::zero(); nvars];
    let vanishing: Vec<SparsePolynomial<Rat>> = minors
        .into_iter()
        .filter(|p| Field::is_zero(&p.eval(&origin)))
        .collect();
    let isolation = isolated_nontransversality_check(&vanishing)?;
    let verdict = if isolation.isolated {
        Verdict::AlmostFreeCandidate
    } else {
        Verdict::Undetermined
    };
    Ok(TransversalityReport {
        rank_sigma,
        rank_t,
        nu: fam.nu,
        verdict,
        isolation: Some(IsolationDetail {
            selections_used: chosen,
            multiplicity: isolation.multiplicity,
            isolated: isolation.isolated,
            witness: isolation.witness,
        }),
    })
}

/// A small deterministic pool of row selections: each includes all Jacobian
/// rows (the bottom `extra` rows) plus a combination of Sigma rows.
fn default_selections(t: &DenseMatrix<Rat>, nu: usize, extra: usize) -> Vec<Vec<usize>> {
    let total = t.nrows();
    let from_sigma = nu.saturating_sub(extra);
    let sigma_rows: Vec<usize> = (1..=total - extra).collect();
    let mut out = Vec::new();
    for combo in column_subsets(sigma_rows.len(), from_sigma) {
        let mut sel: Vec<usize> = combo.iter().map(|&i| sigma_rows[i]).collect();
        sel.extend(total - extra + 1..=total);
        out.push(sel);
        if out.len() >= 12 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::poly::parse_polynomial;
    use crate::wavefront::{build_phase, default_e_list, extract_iota, phase_at, InitialFront};

    fn cubic_family() -> DeformationFamily {
        let ring = PolyRing::new(vec!["z"]);
        DeformationFamily {
            base: parse_polynomial(&ring, "z^3").unwrap(),
            e_list: vec![
                parse_polynomial(&ring, "1").unwrap(),
                parse_polynomial(&ring, "z").unwrap(),
            ],
            mu: 2,
            nu: 2,
            u_constraints: Vec::new(),
        }
    }

    fn example1(a: i64) -> (DeformationFamily, crate::wavefront::DeformationFrame) {
        let ring = PolyRing::new(vec!["z"]);
        let f = parse_polynomial(&ring, &format!("{a} z^2 + z^4")).unwrap();
        let phase = build_phase(&InitialFront::new(f)).unwrap();
        let focal = vec![rat_int(0), rat(-1, 2 * a), rat(1, 2 * a)];
        let e_list = default_e_list(&phase, &focal).unwrap();
        let frame = extract_iota(&phase, &focal, &e_list, None, None).unwrap();
        let base = phase_at(&phase, &focal).unwrap();
        (DeformationFamily::from_frame(&frame, base), frame)
    }

    fn example2() -> (DeformationFamily, crate::wavefront::DeformationFrame) {
        let ring = PolyRing::new(vec!["z1", "z2"]);
        let f = parse_polynomial(&ring, "-1/2 (1 z1^2 + 2 z2^2)").unwrap();
        let phase = build_phase(&InitialFront::new(f)).unwrap();
        let focal = vec![rat_int(0), rat_int(0), rat_int(1), rat_int(1)];
        let e_texts = [
            "1", "z1", "z1^2", "z2", "z2^2", "z1 z2", "z2^3", "z1^3", "z1^2 z2", "z1 z2^2",
        ];
        let e_list: Vec<_> = e_texts
            .iter()
            .map(|t| parse_polynomial(phase.z_ring(), t).unwrap())
            .collect();
        let s_ring = PolyRing::new((1..=10).map(|j| format!("s{j}")).collect::<Vec<_>>());
        let cons = vec![
            parse_polynomial(&s_ring, "1 s7 - 2 s9").unwrap(),
            parse_polynomial(&s_ring, "1 s10 - 2 s8").unwrap(),
        ];
        let frame = extract_iota(&phase, &focal, &e_list, Some(8), Some((&s_ring, &cons))).unwrap();
        let base = phase_at(&phase, &focal).unwrap();
        (DeformationFamily::from_frame(&frame, base), frame)
    }

    #[test]
    fn cubic_c_matrix_rational_and_symbolic() {
        let fam = cubic_family();
        // Rational point s2 = 5.
        let s = sigma_matrices::<Rat>(&fam, &[rat_int(5)]).unwrap();
        assert_eq!(s.c.at(0, 0), &rat_int(0));
        assert_eq!(s.c.at(0, 1), &rat(10, 3));
        assert_eq!(s.c.at(1, 0), &rat(-50, 9));
        assert_eq!(s.c.at(1, 1), &rat_int(0));
        // Symbolic line s2 = h.
        let s = sigma_matrices::<RatFunc>(&fam, &[RatFunc::var()]).unwrap();
        let h = UniPoly::var();
        let two_thirds_h = RatFunc::from_poly(h.scale(&rat(2, 3)));
        let msq = RatFunc::from_poly(h.mul(&h).scale(&rat(-2, 9)));
        assert_eq!(s.c.at(0, 1), &two_thirds_h);
        assert_eq!(s.c.at(1, 0), &msq);
        assert!(s.c.at(0, 0).is_zero() && s.c.at(1, 1).is_zero());
    }

    #[test]
    fn cubic_discriminant() {
        let fam = cubic_family();
        for p in [rat_int(5), rat(1, 2), rat_int(-3)] {
            let d = discriminant_poly(&fam, &[p.clone()]).unwrap();
            // s1^2 + 4 p^3 / 27
            let expected = UniPoly::new(vec![
                &(&(&p * &p) * &p) * &rat(4, 27),
                rat_int(0),
                rat_int(1),
            ]);
            assert_eq!(d, expected);
        }
    }

    #[test]
    fn trivial_quadratic_discriminant() {
        let ring = PolyRing::new(vec!["z"]);
        let fam = DeformationFamily {
            base: parse_polynomial(&ring, "z^2").unwrap(),
            e_list: vec![parse_polynomial(&ring, "1").unwrap()],
            mu: 1,
            nu: 1,
            u_constraints: Vec::new(),
        };
        let d = discriminant_poly(&fam, &[]).unwrap();
        assert_eq!(d, UniPoly::var());
    }

    /// The A-coefficients printed in the source computation, as functions
    /// of a.
    fn a_coeffs(a: &Rat) -> [Rat; 6] {
        let a3 = a * a * a;
        let a6 = &a3 * &a3;
        let a9 = &a6 * &a3;
        let a12 = &a6 * &a6;
        let a4 = &a3 * a;
        let a5 = &a4 * a;
        let a7 = &a6 * a;
        let a8 = &a4 * &a4;
        [
            -(&(rat_int(2) - &a3 * &rat_int(5)) + &a6 * &rat_int(3)) / (&a3 * &rat_int(36)),
            -(&(rat_int(4) - &a3 * &rat_int(6)) + &a6 * &rat_int(3)) / (&a4 * &rat_int(12)),
            (&(&(rat_int(-4) + &a3 * &rat_int(10)) - &a6 * &rat_int(9)) + &a9 * &rat_int(3))
                / (&a5 * &rat_int(216)),
            {
                let u = &a3 - &rat_int(2);
                &(&u * &u) * &(&(&a3 * &rat_int(3)) - &rat_int(2)) / (&a6 * &rat_int(72))
            },
            {
                let u = &a3 - &rat_int(2);
                -&(&u * &u) * &(&(rat_int(2) - &a3 * &rat_int(5)) + &a6 * &rat_int(3))
                    / (&a7 * &rat_int(1296))
            },
            -(&(&(&(rat_int(16) - &a3 * &rat_int(56)) + &a6 * &rat_int(68)) - &a9 * &rat_int(30))
                + &a12 * &rat_int(3))
                / (&a8 * &rat_int(432)),
        ]
    }

    #[test]
    fn example1_sigma_rows_match_printed_values() {
        for a_int in [2i64, 1] {
            let a = rat_int(a_int);
            let (fam, frame) = example1(a_int);
            let tail = vec![Rat::zero(); fam.m() - 1];
            let s = sigma_matrices::<Rat>(&fam, &tail).unwrap();
            let _ = &frame;
            let a3 = &(&a * &a) * &a;
            // Row 1: (0, 0, 0, 0, (a^3 - 1)/2a, 0, 3a/2 - 1/a^2).
            let r1c5 = &(&a3 - &rat_int(1)) / &(&a * &rat_int(2));
            let r1c7 = &(&a * &rat(3, 2)) - &(&rat_int(1) / &(&a * &a));
            let want1 = [
                rat_int(0),
                rat_int(0),
                rat_int(0),
                rat_int(0),
                r1c5,
                rat_int(0),
                r1c7,
            ];
            for (j, w) in want1.iter().enumerate() {
                assert_eq!(s.c.at(0, j), w, "a = {a_int}, row 1, col {}", j + 1);
            }
            let ac = a_coeffs(&a);
            // Rows 2..7 follow the staircase (A1, A2), (A3, A4), (A5, A6).
            for (r, pair) in [(1, 0), (3, 2), (5, 4)] {
                for j in 0..7 {
                    let want_even = match j {
                        3 => ac[pair].clone(),
                        5 => ac[pair + 1].clone(),
                        _ => rat_int(0),
                    };
                    let want_odd = match j {
                        4 => ac[pair].clone(),
                        6 => ac[pair + 1].clone(),
                        _ => rat_int(0),
                    };
                    assert_eq!(s.c.at(r, j), &want_even, "a = {a_int}, row {}", r + 1);
                    assert_eq!(s.c.at(r + 1, j), &want_odd, "a = {a_int}, row {}", r + 2);
                }
            }
            if a_int == 1 {
                assert!(Field::is_zero(&ac[0]) && Field::is_zero(&ac[2]) && Field::is_zero(&ac[4]));
            } else {
                assert_eq!(ac[1], rat(-37, 48), "A2 at a = 2");
            }
            // Relation row: the printed (0,0,0,4(a^3-1)/a,0,6(6a-4/a^2),0,72)
            // equals -72 times ours (which carries -1 in the trailing slot).
            let alpha = &(&a * &a) - &(&rat_int(1) / &a);
            let beta = &(&a * &rat_int(6)) - &(&rat_int(4) / &(&a * &a));
            assert_eq!(s.extra.at(0, 3), &(-&alpha / &rat_int(18)));
            assert_eq!(s.extra.at(0, 5), &(-&beta / &rat_int(12)));
            let full = s.sigma_full_at(&rat_int(0));
            assert_eq!(full.at(7, 7), &rat_int(-1));
        }
    }

    #[test]
    fn example1_discriminant_weierstrass_and_forced_singularity() {
        let (fam, _) = example1(2);
        // Monic of degree mu at a generic rational tail.
        let tail: Vec<Rat> = vec![
            rat_int(1),
            rat(1, 3),
            rat_int(-2),
            rat_int(0),
            rat(2, 5),
            rat_int(1),
            rat_int(-1),
        ];
        let d = discriminant_poly(&fam, &tail).unwrap();
        assert_eq!(d.degree(), Some(7));
        assert!(Field::is_one(&d.leading_coeff()));

        // Force phi = 9 z^6 (z - 1)^2: critical point z = 1 with value 0, so
        // the discriminant must vanish at the matching s1.
        let zr = fam.base.ring().clone();
        let target = parse_polynomial(&zr, "9 z^8 - 18 z^7 + 9 z^6").unwrap();
        let diff = target.sub(&fam.base).unwrap();
        let mut coeffs = vec![Rat::zero(); 8];
        for (e, c) in diff.terms() {
            coeffs[e.0[0] as usize] = c.clone();
        }
        let s1 = coeffs[0].clone();
        let tail = coeffs[1..].to_vec();
        let d = discriminant_poly(&fam, &tail).unwrap();
        assert!(Field::is_zero(&d.eval(&s1)));
    }

    /// Resultant of two univariate polynomials via the Sylvester matrix,
    /// coefficients ascending.
    fn sylvester_resultant(f: &[RatFunc], g: &[RatFunc]) -> RatFunc {
        let df = f.len() - 1;
        let dg = g.len() - 1;
        let n = df + dg;
        let mut m = DenseMatrix::<RatFunc>::zeros(n, n);
        for r in 0..dg {
            for (k, c) in f.iter().rev().enumerate() {
                m.set(r, r + k, c.clone());
            }
        }
        for r in 0..df {
            for (k, c) in g.iter().rev().enumerate() {
                m.set(dg + r, r + k, c.clone());
            }
        }
        m.det()
    }

    #[test]
    fn example1_resultant_oracle() {
        let (fam, _) = example1(2);
        let mut rng_state = 12345u64;
        let mut next = move || {
            // Small deterministic LCG; values only need to be varied.
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1);
            rat_int(((rng_state >> 33) % 7) as i64 - 3)
        };
        for _ in 0..3 {
            let tail: Vec<Rat> = (0..7).map(|_| next()).collect();
            let d = discriminant_poly(&fam, &tail).unwrap();
            // phi(z) = base + sum_{j>=2} s_j z^{j-1} + s1, as ascending
            // coefficients over Q(s1).
            let mut phi = vec![RatFunc::from_rat(&Rat::zero()); 9];
            for (e, c) in fam.base.terms() {
                phi[e.0[0] as usize] = RatFunc::from_rat(c);
            }
            for (j, c) in tail.iter().enumerate() {
                let k = j + 1;
                phi[k] = phi[k].add(&RatFunc::from_rat(c));
            }
            phi[0] = phi[0].add(&RatFunc::var());
            let dphi: Vec<RatFunc> = (1..phi.len())
                .map(|k| phi[k].mul(&RatFunc::from_rat(&rat_int(k as i64))))
                .collect();
            let res = sylvester_resultant(&dphi, &phi);
            // det SigmaTilde * lc(phi')^{deg phi} = Res(phi', phi).
            let lc = rat_int(72);
            let mut scale = Rat::one();
            for _ in 0..8 {
                scale = &scale * &lc;
            }
            let lhs = RatFunc::from_poly(d.scale(&scale));
            assert!(lhs == res || lhs == res.neg(), "oracle identity failed");
        }
    }

    #[test]
    fn example1_t_matrix_ranks_and_rows() {
        let (fam, frame) = example1(2);
        let t = build_t::<Rat>(&fam, &frame, &frame.focal).unwrap();
        assert_eq!(t.rank(), 8);
        // Jacobian block rows (x1, x2, t) follow the printed derivative data;
        // the x2 row is read off the second partials, which place its nonzero
        // entries on the odd columns.
        let row_x1: Vec<Rat> = [0, -2, 0, -18, 0, -40, 0, -24]
            .iter()
            .map(|&v| rat_int(v))
            .collect();
        let row_x2: Vec<Rat> = vec![
            rat(-1, 2),
            rat_int(0),
            rat_int(-4),
            rat_int(0),
            rat_int(-6),
            rat_int(0),
            rat_int(0),
            rat_int(0),
        ];
        let row_t: Vec<Rat> = vec![
            rat(-1, 2),
            rat_int(0),
            rat_int(-8),
            rat_int(0),
            rat_int(-16),
            rat_int(0),
            rat_int(-8),
            rat_int(0),
        ];
        assert_eq!(t.entries.row(8), &row_x1[..]);
        assert_eq!(t.entries.row(9), &row_x2[..]);
        assert_eq!(t.entries.row(10), &row_t[..]);

        let (fam, frame) = example1(1);
        let t = build_t::<Rat>(&fam, &frame, &frame.focal).unwrap();
        assert_eq!(t.rank(), 6);
        assert_eq!(t.sigma_block().rank(), 3);
    }

    #[test]
    fn example2_t_matrix() {
        let (fam, frame) = example2();
        let tail = vec![Rat::zero(); fam.m() - 1];
        let s = sigma_matrices::<Rat>(&fam, &tail).unwrap();
        // Focal Sigma rows 1, 4, 5 carry k2(k1-k2)/2k1^2 = -1 in column 5 and
        // -(k1-k2)^2/k1^4 = -1 on the diagonal (hand normal-form check:
        // nf(base) = -z2^2 with k1 = 1, k2 = 2); rows 2 and 3 vanish.
        assert_eq!(s.c.at(0, 4), &rat_int(-1));
        assert!((0..5).all(|j| Field::is_zero(s.c.at(1, j))));
        assert!((0..5).all(|j| Field::is_zero(s.c.at(2, j))));
        assert_eq!(s.c.at(3, 3), &rat_int(-1));
        assert_eq!(s.c.at(4, 4), &rat_int(-1));
        let t = build_t::<Rat>(&fam, &frame, &frame.focal).unwrap();
        // Over the ambient 10 parameter columns (the constrained pairs
        // s7/s9 and s8/s10 each counted separately) the rank exceeds nu;
        // restricted to the tangent directions of U it is exactly nu = 8.
        assert!(t.rank() >= 8);
        let restricted = restricted_t_rank(&fam, &t, &frame.iota_at(&frame.focal)).unwrap();
        assert_eq!(restricted, 8);
        // Rows 1 and 5 coincide at k1 = 1, k2 = 2 (both are -z2^2), so the
        // Sigma block contributes rank 2 + 3 relation rows.
        assert_eq!(t.sigma_block().rank(), 5);
    }

    #[test]
    fn directional_derivatives_example1() {
        let (fam, frame) = example1(1);
        let dir_t = vec![rat_int(0), rat_int(0), rat_int(1)];
        let dt = directional_derivative_t(&fam, &frame, &frame.focal, &dir_t).unwrap();
        // The t-derivative of the iota t-row is printed as
        // (-2, 0, -8, 0, -32, 0, -32, 0).
        let want: Vec<Rat> = [-2, 0, -8, 0, -32, 0, -32, 0]
            .iter()
            .map(|&v| rat_int(v))
            .collect();
        assert_eq!(dt.row(10), &want[..]);
        // x-rows of iota are t-independent.
        assert!(dt.row(8).iter().all(Field::is_zero));
        assert!(dt.row(9).iter().all(Field::is_zero));
    }

    #[test]
    fn derivative_matches_difference_quotients() {
        let (fam, frame) = example1(1);
        let dir = vec![rat_int(1), rat(1, 2), rat_int(-1)];
        let dt = directional_derivative_t(&fam, &frame, &frame.focal, &dir).unwrap();
        let t0 = build_t::<Rat>(&fam, &frame, &frame.focal).unwrap().entries;
        // Exact difference quotients at shrinking rational step sizes: the
        // max-entry error against the derivative must shrink at least
        // linearly (halving h halves the leading error term).
        use num_traits::Signed;
        let max_err = |h: &Rat| -> Rat {
            let point: Vec<Rat> = frame
                .focal
                .iter()
                .zip(&dir)
                .map(|(b, d)| b + &(d * h))
                .collect();
            let th = build_t::<Rat>(&fam, &frame, &point).unwrap().entries;
            let quotient = th.sub(&t0).scale(&h.recip());
            let mut worst = Rat::zero();
            for r in 0..t0.nrows() {
                for c in 0..t0.ncols() {
                    let err = (quotient.at(r, c) - dt.at(r, c)).abs();
                    if err > worst {
                        worst = err;
                    }
                }
            }
            worst
        };
        let e1 = max_err(&rat(1, 64));
        let e2 = max_err(&rat(1, 128));
        let e3 = max_err(&rat(1, 256));
        assert!(!Field::is_zero(&e1), "a transverse direction must move T");
        assert!(e2 <= &e1 * &rat(2, 3));
        assert!(e3 <= &e2 * &rat(2, 3));
    }

    #[test]
    fn strip_units_removes_origin_units() {
        let ring = pencil_ring(2);
        let p = parse_polynomial(&ring, "(1 + 2 tau)(xi1^2 + xi2 tau)").unwrap();
        assert_eq!(
            strip_units(&p),
            parse_polynomial(&ring, "xi1^2 + xi2 tau").unwrap()
        );
        let p = parse_polynomial(&ring, "xi1 (1 + 2 tau)(1 - xi2)(3)").unwrap();
        assert_eq!(strip_units(&p), parse_polynomial(&ring, "xi1").unwrap());
        let p = parse_polynomial(&ring, "xi1 xi2 + xi1^2").unwrap();
        assert_eq!(
            strip_units(&p),
            parse_polynomial(&ring, "xi1 xi2 + xi1^2").unwrap()
        );
    }

    #[test]
    fn example1_selected_minors_unit_factors() {
        let (fam, frame) = example1(1);
        let t0 = build_t::<Rat>(&fam, &frame, &frame.focal).unwrap().entries;
        let mut dts = Vec::new();
        for v in 0..3 {
            let mut dir = vec![rat_int(0); 3];
            dir[v] = rat_int(1);
            dts.push(directional_derivative_t(&fam, &frame, &frame.focal, &dir).unwrap());
        }
        let ring = pencil_ring(2);
        let unit = parse_polynomial(&ring, "1 + 2 tau").unwrap();
        let sel = vec![
            vec![2, 3, 4, 5, 6, 9, 10, 11],
            vec![1, 2, 3, 4, 7, 9, 10, 11],
        ];
        let minors = pencil_minors(&t0, &dts, 8, &sel).unwrap();
        assert_eq!(minors.len(), 2);
        assert!(minors[0].div_exact(&unit, ORDER).is_some());
        let xi1 = parse_polynomial(&ring, "xi1").unwrap();
        let second = minors[1].div_exact(&unit, ORDER).expect("1 + 2tau divides");
        assert!(second.div_exact(&xi1, ORDER).is_some());
        // All selected minors vanish at the origin.
        let origin = vec![rat_int(0); 3];
        for m in &minors {
            assert!(Field::is_zero(&m.eval(&origin)));
        }
    }

    #[test]
    fn isolation_trivial_cases() {
        let ring = pencil_ring(2);
        let gens = vec![
            parse_polynomial(&ring, "xi1").unwrap(),
            parse_polynomial(&ring, "xi2").unwrap(),
            parse_polynomial(&ring, "tau").unwrap(),
        ];
        let r = isolated_nontransversality_check(&gens).unwrap();
        assert!(r.isolated);
        assert_eq!(r.multiplicity, 1);

        let gens = vec![
            parse_polynomial(&ring, "xi1^2").unwrap(),
            parse_polynomial(&ring, "xi2").unwrap(),
            parse_polynomial(&ring, "tau").unwrap(),
        ];
        let r = isolated_nontransversality_check(&gens).unwrap();
        assert!(r.isolated);
        assert_eq!(r.multiplicity, 2);

        // Positive-dimensional: a line through the origin survives.
        let gens = vec![
            parse_polynomial(&ring, "xi1").unwrap(),
            parse_polynomial(&ring, "xi2").unwrap(),
        ];
        let r = isolated_nontransversality_check(&gens).unwrap();
        assert!(!r.isolated);
        assert!(r.witness.is_some());
    }

    #[test]
    fn stratum_tangent_trivial_cases() {
        // Complementary coordinate subspaces of C^4.
        let pr = PolyRing::new(vec!["u", "v"]);
        let params: Vec<SparsePolynomial<Rat>> = ["u", "v", "0", "0"]
            .iter()
            .map(|t| parse_polynomial(&pr, t).unwrap())
            .collect();
        let jac = DenseMatrix::from_rows(vec![
            vec![rat_int(0), rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(0), rat_int(1)],
        ]);
        assert!(stratum_tangent_check(&params, &[rat_int(0), rat_int(0)], &jac).unwrap());
        // Identical spans.
        let jac = DenseMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0), rat_int(0)],
        ]);
        assert!(!stratum_tangent_check(&params, &[rat_int(0), rat_int(0)], &jac).unwrap());
    }

    #[test]
    fn example1_stratum_tangent() {
        // A_{k>=4} stratum parametrization: coefficients of
        // (z + w1)^5 (q1 + q2 z + q3 z^2 + 9 z^3) at (w1,q1,q2,q3) = (0,0,2,0).
        let big = PolyRing::new(vec!["z", "w1", "q1", "q2", "q3"]);
        let prod = parse_polynomial(&big, "(z + w1)^5 (q1 + q2 z + q3 z^2 + 9 z^3)").unwrap();
        let pr = PolyRing::new(vec!["w1", "q1", "q2", "q3"]);
        let mut params = vec![SparsePolynomial::zero(&pr); 8];
        for (e, c) in prod.terms() {
            let k = e.0[0] as usize;
            if k >= 8 {
                continue; // z^8 coefficient is the constant 9, not deformed
            }
            let rest = ExponentVector(e.0[1..].to_vec());
            params[k] = params[k]
                .add(&SparsePolynomial::monomial(&pr, rest, c.clone()))
                .unwrap();
        }
        let point = vec![rat_int(0), rat_int(0), rat_int(2), rat_int(0)];
        let (_, frame) = example1(1);
        let jac = frame.iota_jacobian(&frame.focal).unwrap();
        assert!(stratum_tangent_check(&params, &point, &jac).unwrap());
    }

    #[test]
    fn verdict_free_cases() {
        let (fam, frame) = example1(2);
        let report = transversality_verdict(&fam, &frame, &frame.focal, None).unwrap();
        assert_eq!(report.verdict, Verdict::Free);
        assert_eq!(report.rank_t, 8);
        assert!(report.isolation.is_none());

        let (fam, frame) = example2();
        let report = transversality_verdict(&fam, &frame, &frame.focal, None).unwrap();
        assert_eq!(report.verdict, Verdict::Free);
        assert_eq!(report.rank_t, 8);
    }

    #[test]
    fn rank_invariance_under_row_scaling_and_basis_permutation() {
        let (fam, frame) = example1(1);
        let t = build_t::<Rat>(&fam, &frame, &frame.focal).unwrap();
        let base_rank = t.rank();
        // Scale Sigma rows by nonzero constants.
        let mut rows = t.entries.rows().to_vec();
        for (i, row) in rows.iter_mut().enumerate().take(fam.nu) {
            let c = rat_int([3, -7, 2, 5, -1, 11, 4, -9][i % 8]);
            for v in row.iter_mut() {
                *v = &*v * &c;
            }
        }
        assert_eq!(DenseMatrix::from_rows(rows).rank(), base_rank);
        // Permute columns (reordering the e-basis permutes columns of T).
        let perm: Vec<usize> = vec![3, 0, 7, 1, 5, 2, 6, 4];
        let permuted: Vec<Vec<Rat>> = t
            .entries
            .rows()
            .iter()
            .map(|r| perm.iter().map(|&j| r[j].clone()).collect())
            .collect();
        assert_eq!(DenseMatrix::from_rows(permuted).rank(), base_rank);
    }
}
