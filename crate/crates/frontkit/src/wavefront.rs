//! Phase functions of evolving wave fronts and their deformation data.
//!
//! Starting from an initial algebraic front `x_{n+1} = -F(z)` (graph of a
//! polynomial, z the chart variables), the squared-distance construction
//! produces the phase polynomial
//!
//! ```text
//! Psi(x, t, z) = (<x' - z, dF(z)> + x_{n+1} + F(z))^2 - t^2 (|dF(z)|^2 + 1)
//! ```
//!
//! whose zero set in z encodes the front through `(x, t)`. At a chosen focal
//! point `(x0, t0)` the difference `Psi - Psi(x0, t0, .)` decomposes as
//! `sum_j s_j(x, t) e_j(z)` for a finite list of z-polynomials `e_j`; the
//! coefficient map `iota = (s_1, ..., s_m)` is the bridge into the
//! discriminant analysis of the `divisor` module.

use std::collections::BTreeSet;

use crate::arith::{ArithError, Field, Rat};
use crate::groebner::{
    buchberger, quotient_dimension, DenseMatrix, Dimension, GroebnerError, QuotientAlgebra,
};
use crate::poly::{ExponentVector, MonomialOrder, PolyError, PolyRing, RingRc, SparsePolynomial};

const ORDER: MonomialOrder = MonomialOrder::DegRevLex;

#[derive(Debug, thiserror::Error)]
pub enum WavefrontError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("focal point must have {expected} coordinates (x_1..x_{{n+1}}, t), got {got}")]
    FocalArity { expected: usize, got: usize },
    #[error("e_list insufficient: uncovered z-monomials {0:?}")]
    EListInsufficient(Vec<String>),
    #[error("ambiguous decomposition: {0}")]
    Ambiguous(String),
    #[error("e_list violates the basis-shape condition: {0}")]
    BadEList(String),
    #[error(
        "the Milnor algebra at the focal point is infinite-dimensional (witness variable {0})"
    )]
    InfiniteMilnor(String),
}

// ---------------------------------------------------------------------------
// Initial fronts and phase functions
// ---------------------------------------------------------------------------

/// The initial front: the graph `x_{n+1} = -F(z)` of a polynomial in
/// `z_1..z_n`.
#[derive(Clone, Debug)]
pub struct InitialFront {
    f: SparsePolynomial<Rat>,
}

impl InitialFront {
    pub fn new(f: SparsePolynomial<Rat>) -> Self {
        InitialFront { f }
    }

    pub fn n(&self) -> usize {
        self.f.ring().nvars()
    }

    pub fn f(&self) -> &SparsePolynomial<Rat> {
        &self.f
    }

    pub fn z_ring(&self) -> &RingRc {
        self.f.ring()
    }
}

/// The phase polynomial in the combined ring `x_1..x_{n+1}, t, z_1..z_n`.
/// Only even powers of `t` occur.
#[derive(Clone, Debug)]
pub struct PhaseFunction {
    n: usize,
    ring: RingRc,
    z_ring: RingRc,
    psi: SparsePolynomial<Rat>,
}

impl PhaseFunction {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &RingRc {
        &self.ring
    }

    pub fn z_ring(&self) -> &RingRc {
        &self.z_ring
    }

    pub fn psi(&self) -> &SparsePolynomial<Rat> {
        &self.psi
    }

    /// Index of `x_{j+1}` (0-based `j` in `0..=n`) in the combined ring.
    pub fn x_index(&self, j: usize) -> usize {
        debug_assert!(j <= self.n);
        j
    }

    pub fn t_index(&self) -> usize {
        self.n + 1
    }

    /// Index of `z_{j+1}` (0-based `j` in `0..n`) in the combined ring.
    pub fn z_index(&self, j: usize) -> usize {
        self.n + 2 + j
    }
}

/// Expand the phase polynomial of an initial front.
pub fn build_phase(front: &InitialFront) -> Result<PhaseFunction, WavefrontError> {
    let n = front.n();
    let mut names: Vec<String> = (1..=n + 1).map(|j| format!("x{j}")).collect();
    names.push("t".to_string());
    names.extend(front.z_ring().vars().iter().cloned());
    let ring = PolyRing::new(names);
    let z_ring = front.z_ring().clone();

    // Lift a z-polynomial into the combined ring.
    let lift = |p: &SparsePolynomial<Rat>| -> Result<SparsePolynomial<Rat>, PolyError> {
        let map: Vec<Option<usize>> = (0..n).map(|j| Some(n + 2 + j)).collect();
        p.project(&ring, &map)
    };

    let f = lift(front.f())?;
    let mut pairing = SparsePolynomial::var(&ring, n); // x_{n+1}
    pairing = pairing.add(&f)?;
    let mut grad_norm = SparsePolynomial::one(&ring); // |dF|^2 + 1
    for j in 0..n {
        let df = lift(&front.f().partial_derivative(j)?)?;
        let xj = SparsePolynomial::var(&ring, j);
        let zj = SparsePolynomial::var(&ring, n + 2 + j);
        pairing = pairing.add(&xj.sub(&zj)?.mul(&df)?)?;
        grad_norm = grad_norm.add(&df.mul(&df)?)?;
    }
    let t2 = SparsePolynomial::var(&ring, n + 1).pow(2);
    let psi = pairing.mul(&pairing)?.sub(&t2.mul(&grad_norm)?)?;
    Ok(PhaseFunction {
        n,
        ring,
        z_ring,
        psi,
    })
}

/// Substitute a rational space-time point `(x_1..x_{n+1}, t)` into the phase
/// polynomial, leaving a polynomial in z alone.
pub fn phase_at(
    phase: &PhaseFunction,
    point: &[Rat],
) -> Result<SparsePolynomial<Rat>, WavefrontError> {
    let n = phase.n;
    if point.len() != n + 2 {
        return Err(WavefrontError::FocalArity {
            expected: n + 2,
            got: point.len(),
        });
    }
    let assignment: Vec<(usize, Rat)> = point
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.clone()))
        .collect();
    let restricted = phase.psi.eval_partial(&assignment);
    let mut map = vec![None; phase.ring.nvars()];
    for j in 0..n {
        map[phase.z_index(j)] = Some(j);
    }
    Ok(restricted.project(&phase.z_ring, &map)?)
}

// ---------------------------------------------------------------------------
// Deformation frames
// ---------------------------------------------------------------------------

/// The deformation data attached to a focal point: the basis monomials `e_j`
/// in z, the coefficient polynomials `iota = (s_1..s_m)` in `(x, t)`, the
/// Milnor number `mu` of the focal fiber, the matrix size `nu` used downstream
/// and the constraints cutting out the parameter stratum U.
#[derive(Clone, Debug)]
pub struct DeformationFrame {
    pub focal: Vec<Rat>,
    pub mu: usize,
    pub e_list: Vec<SparsePolynomial<Rat>>,
    pub iota: Vec<SparsePolynomial<Rat>>,
    pub nu: usize,
    pub u_constraints: Vec<SparsePolynomial<Rat>>,
    xt_ring: RingRc,
    s_ring: RingRc,
}

impl DeformationFrame {
    pub fn m(&self) -> usize {
        self.e_list.len()
    }

    /// Ring of the iota components: `x_1..x_{n+1}, t`.
    pub fn xt_ring(&self) -> &RingRc {
        &self.xt_ring
    }

    /// Ring of the deformation parameters `s_1..s_m`.
    pub fn s_ring(&self) -> &RingRc {
        &self.s_ring
    }

    /// `iota(point)` as a rational vector.
    pub fn iota_at(&self, point: &[Rat]) -> Vec<Rat> {
        self.iota.iter().map(|s| s.eval(point)).collect()
    }

    /// Exact Jacobian matrix of iota at `point`: `(n+2) x m`, row order
    /// `x_1, .., x_{n+1}, t`.
    pub fn iota_jacobian(&self, point: &[Rat]) -> Result<DenseMatrix<Rat>, WavefrontError> {
        let nvars = self.xt_ring.nvars();
        let mut rows = Vec::with_capacity(nvars);
        for v in 0..nvars {
            let mut row = Vec::with_capacity(self.iota.len());
            for s in &self.iota {
                row.push(s.partial_derivative(v)?.eval(point));
            }
            rows.push(row);
        }
        Ok(DenseMatrix::from_rows(rows))
    }
}

/// The default deformation basis: the standard monomials of the focal Milnor
/// algebra first (they form a basis and start with 1, z_1, ..), followed by
/// the remaining z-monomials supporting `Psi - Psi(x0, t0, .)`, in increasing
/// order.
pub fn default_e_list(
    phase: &PhaseFunction,
    focal: &[Rat],
) -> Result<Vec<SparsePolynomial<Rat>>, WavefrontError> {
    let base = phase_at(phase, focal)?;
    let quotient = milnor_quotient(&base)?;
    let z_ring = &phase.z_ring;
    let mut list: Vec<ExponentVector> = quotient.standard_monomials().to_vec();
    let seen: BTreeSet<ExponentVector> = list.iter().cloned().collect();
    let mut extra: Vec<ExponentVector> = diff_support(phase, focal)?
        .into_iter()
        .filter(|e| !seen.contains(e))
        .collect();
    extra.sort_by(|a, b| ORDER.cmp_exp(a, b));
    list.extend(extra);
    Ok(list
        .into_iter()
        .map(|e| SparsePolynomial::monomial(z_ring, e, Rat::one()))
        .collect())
}

/// Milnor algebra of a z-polynomial: quotient by its Jacobian ideal.
pub fn milnor_quotient(g: &SparsePolynomial<Rat>) -> Result<QuotientAlgebra<Rat>, WavefrontError> {
    let n = g.ring().nvars();
    let mut jac = Vec::with_capacity(n);
    for j in 0..n {
        jac.push(g.partial_derivative(j)?);
    }
    let gb = buchberger(&jac, ORDER)?;
    QuotientAlgebra::new(gb).map_err(|e| match e {
        GroebnerError::NotZeroDimensional { witness } => WavefrontError::InfiniteMilnor(witness),
        other => WavefrontError::Groebner(other),
    })
}

/// z-monomials appearing in `Psi - Psi(focal, .)` (with any (x,t) part).
fn diff_support(
    phase: &PhaseFunction,
    focal: &[Rat],
) -> Result<Vec<ExponentVector>, WavefrontError> {
    let diff = phase_difference(phase, focal)?;
    let n = phase.n;
    let mut set = BTreeSet::new();
    for (e, _) in diff.terms() {
        let z_part = ExponentVector(e.0[n + 2..].to_vec());
        set.insert(z_part);
    }
    Ok(set.into_iter().collect())
}

/// `Psi(x, t, z) - Psi(x0, t0, z)` in the combined ring.
fn phase_difference(
    phase: &PhaseFunction,
    focal: &[Rat],
) -> Result<SparsePolynomial<Rat>, WavefrontError> {
    let base = phase_at(phase, focal)?;
    let mut map = vec![0usize; phase.z_ring.nvars()];
    for j in 0..phase.n {
        map[j] = phase.z_index(j);
    }
    let lifted = base.project(
        &phase.ring,
        &map.iter().map(|&j| Some(j)).collect::<Vec<_>>(),
    )?;
    Ok(phase.psi.sub(&lifted)?)
}

/// Decompose `Psi - Psi(focal, .) = sum_j s_j(x, t) e_j(z)` and package the
/// deformation frame. `nu` defaults to `m`; `u_constraints` live in the
/// parameter ring `s_1..s_m` and are taken as-is.
pub fn extract_iota(
    phase: &PhaseFunction,
    focal: &[Rat],
    e_list: &[SparsePolynomial<Rat>],
    nu: Option<usize>,
    u_constraints_src: Option<(&RingRc, &[SparsePolynomial<Rat>])>,
) -> Result<DeformationFrame, WavefrontError> {
    let n = phase.n;
    if focal.len() != n + 2 {
        return Err(WavefrontError::FocalArity {
            expected: n + 2,
            got: focal.len(),
        });
    }
    let m = e_list.len();
    if m == 0 {
        return Err(WavefrontError::BadEList("e_list is empty".to_string()));
    }
    for e in e_list {
        crate::poly::same_ring(&phase.z_ring, e.ring())?;
    }
    if e_list[0] != SparsePolynomial::one(&phase.z_ring) {
        return Err(WavefrontError::BadEList(
            "e_1 must be the constant 1".to_string(),
        ));
    }

    let diff = phase_difference(phase, focal)?;

    // Row space: z-monomials of the union of supports. Column j: coefficients
    // of e_j on those monomials. The target vector attached to each row is a
    // polynomial in (x, t); solving column-by-column over each (x,t)-monomial
    // keeps everything rational and exact.
    let mut row_index: BTreeSet<ExponentVector> = BTreeSet::new();
    for e in e_list {
        for (exp, _) in e.terms() {
            row_index.insert(exp.clone());
        }
    }
    let mut uncovered = Vec::new();
    for sup in diff_support(phase, focal)? {
        if !row_index.contains(&sup) {
            uncovered.push(display_monomial(&phase.z_ring, &sup));
        }
    }
    if !uncovered.is_empty() {
        return Err(WavefrontError::EListInsufficient(uncovered));
    }
    let rows: Vec<ExponentVector> = row_index.into_iter().collect();
    let row_of = |e: &ExponentVector| rows.iter().position(|r| r == e).expect("indexed above");
    let mut a = DenseMatrix::zeros(rows.len(), m);
    for (j, e) in e_list.iter().enumerate() {
        for (exp, c) in e.terms() {
            a.set(row_of(exp), j, c.clone());
        }
    }
    if a.rank() < m {
        let kernel = a.kernel();
        let rel = kernel.first().expect("rank deficiency implies a kernel");
        let pretty: Vec<String> = rel
            .iter()
            .enumerate()
            .filter(|(_, c)| !Field::is_zero(*c))
            .map(|(j, c)| format!("({}) * ({})", c, e_list[j]))
            .collect();
        return Err(WavefrontError::Ambiguous(format!(
            "the e_list is linearly dependent: {} = 0",
            pretty.join(" + ")
        )));
    }

    // Group diff by its (x,t)-monomial; each group gives one rational solve.
    let xt_names: Vec<String> = phase.ring.vars()[..n + 2].to_vec();
    let xt_ring = PolyRing::new(xt_names);
    let mut groups: std::collections::BTreeMap<ExponentVector, Vec<Rat>> =
        std::collections::BTreeMap::new();
    for (exp, c) in diff.terms() {
        let xt_part = ExponentVector(exp.0[..n + 2].to_vec());
        let z_part = ExponentVector(exp.0[n + 2..].to_vec());
        let entry = groups
            .entry(xt_part)
            .or_insert_with(|| vec![Rat::zero(); rows.len()]);
        entry[row_of(&z_part)] = c.clone();
    }
    let mut iota: Vec<SparsePolynomial<Rat>> = vec![SparsePolynomial::zero(&xt_ring); m];
    for (xt_exp, target) in groups {
        let sol = a.solve(&target).ok_or_else(|| {
            WavefrontError::Ambiguous(
                "the difference is not in the module generated by the e_list".to_string(),
            )
        })?;
        for (j, c) in sol.into_iter().enumerate() {
            if !Field::is_zero(&c) {
                let term = SparsePolynomial::monomial(&xt_ring, xt_exp.clone(), c);
                iota[j] = iota[j].add(&term)?;
            }
        }
    }

    // Verify the decomposition by exact re-expansion.
    let mut rebuilt = SparsePolynomial::zero(&phase.ring);
    let lift_xt: Vec<Option<usize>> = (0..n + 2).map(Some).collect();
    let lift_z: Vec<Option<usize>> = (0..n).map(|j| Some(phase.z_index(j))).collect();
    for (s, e) in iota.iter().zip(e_list) {
        let s_l = s.project(&phase.ring, &lift_xt)?;
        let e_l = e.project(&phase.ring, &lift_z)?;
        rebuilt = rebuilt.add(&s_l.mul(&e_l)?)?;
    }
    assert!(
        rebuilt == diff,
        "internal error: iota re-expansion does not reproduce the phase difference"
    );

    let base = phase_at(phase, focal)?;
    let mu = milnor_quotient(&base)?.dimension();
    if m < mu {
        return Err(WavefrontError::BadEList(format!(
            "e_list has {m} elements but the Milnor number is {mu}"
        )));
    }
    let s_ring = PolyRing::new((1..=m).map(|j| format!("s{j}")).collect::<Vec<_>>());
    let u_constraints = match u_constraints_src {
        None => Vec::new(),
        Some((src_ring, polys)) => {
            let map: Vec<Option<usize>> = src_ring
                .vars()
                .iter()
                .map(|v| s_ring.var_index(v))
                .collect();
            let mut out = Vec::with_capacity(polys.len());
            for p in polys {
                out.push(p.project(&s_ring, &map)?);
            }
            out
        }
    };
    let nu = nu.unwrap_or(m);
    if nu < mu || nu > m {
        return Err(WavefrontError::BadEList(format!(
            "nu = {nu} must satisfy mu = {mu} <= nu <= m = {m}"
        )));
    }
    Ok(DeformationFrame {
        focal: focal.to_vec(),
        mu,
        e_list: e_list.to_vec(),
        iota,
        nu,
        u_constraints,
        xt_ring,
        s_ring,
    })
}

fn display_monomial(ring: &RingRc, e: &ExponentVector) -> String {
    SparsePolynomial::monomial(ring, e.clone(), Rat::one()).to_string()
}

// ---------------------------------------------------------------------------
// Assumption verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SampleCheck {
    /// The sampled parameter values `s_2..s_m` (s_1 never enters the Jacobian).
    pub point: Vec<Rat>,
    /// Quotient dimension of the full family at the sample.
    pub full_dimension: Dimension,
    /// Quotient dimension with only the first `mu` deformation terms.
    pub truncated_dimension: Dimension,
    /// Whether `e_1..e_mu` remain a basis of the quotient at the sample.
    pub basis_ok: bool,
    pub messages: Vec<String>,
}

impl SampleCheck {
    pub fn passed(&self, mu: usize) -> bool {
        matches!(self.full_dimension, Dimension::Finite(_))
            && self.truncated_dimension == Dimension::Finite(mu)
            && self.basis_ok
    }
}

#[derive(Clone, Debug)]
pub struct AssumptionReport {
    pub mu: usize,
    pub samples: Vec<SampleCheck>,
}

impl AssumptionReport {
    pub fn all_passed(&self) -> bool {
        self.samples.iter().all(|s| s.passed(self.mu))
    }
}

/// The deformed fiber polynomial `base + sum_{j>=2} s_j e_j` at rational
/// parameters. `s_1` shifts by a constant and is irrelevant to the Jacobian
/// ideal, so samples carry `s_2..s_m` only.
pub fn deformed_polynomial(
    base: &SparsePolynomial<Rat>,
    e_list: &[SparsePolynomial<Rat>],
    tail: &[Rat],
) -> Result<SparsePolynomial<Rat>, WavefrontError> {
    assert_eq!(tail.len() + 1, e_list.len(), "tail covers s_2..s_m");
    let mut g = base.clone();
    for (e, c) in e_list[1..].iter().zip(tail) {
        g = g.add(&e.mul_scalar(c))?;
    }
    Ok(g)
}

/// Check the finiteness and basis assumptions at finitely many parameter
/// samples (`s_2..s_m` per sample). Failures are recorded, not raised.
pub fn verify_assumptions(
    frame: &DeformationFrame,
    phase: &PhaseFunction,
    samples: &[Vec<Rat>],
) -> Result<AssumptionReport, WavefrontError> {
    let base = phase_at(phase, &frame.focal)?;
    let mu = frame.mu;
    let mut out = Vec::with_capacity(samples.len());
    for tail in samples {
        let mut messages = Vec::new();
        if tail.len() + 1 != frame.m() {
            messages.push(format!(
                "sample has {} values, expected {} (s_2..s_m)",
                tail.len(),
                frame.m() - 1
            ));
            out.push(SampleCheck {
                point: tail.clone(),
                full_dimension: Dimension::Infinite {
                    witness: "invalid sample".to_string(),
                },
                truncated_dimension: Dimension::Infinite {
                    witness: "invalid sample".to_string(),
                },
                basis_ok: false,
                messages,
            });
            continue;
        }
        for con in &frame.u_constraints {
            // Constraint rings use s_1..s_m; s_1 is irrelevant, set to 0.
            let mut full = vec![Rat::zero()];
            full.extend(tail.iter().cloned());
            let v = con.eval(&full);
            if !Field::is_zero(&v) {
                messages.push(format!(
                    "sample violates the stratum constraint {} (value {})",
                    con, v
                ));
            }
        }
        let g = deformed_polynomial(&base, &frame.e_list, tail)?;
        let jac: Vec<SparsePolynomial<Rat>> = (0..phase.n)
            .map(|j| g.partial_derivative(j))
            .collect::<Result<_, _>>()?;
        let full_dimension = quotient_dimension(&jac, ORDER)?;

        let mut trunc_tail = tail[..mu - 1].to_vec();
        trunc_tail.extend(std::iter::repeat(Rat::zero()).take(frame.m() - mu));
        let g_trunc = deformed_polynomial(&base, &frame.e_list, &trunc_tail)?;
        let jac_t: Vec<SparsePolynomial<Rat>> = (0..phase.n)
            .map(|j| g_trunc.partial_derivative(j))
            .collect::<Result<_, _>>()?;
        let truncated_dimension = quotient_dimension(&jac_t, ORDER)?;

        let basis_ok = match &full_dimension {
            Dimension::Finite(d) if *d == mu => {
                let gb = buchberger(&jac, ORDER)?;
                let q = QuotientAlgebra::new(gb)?;
                match q.check_basis(&frame.e_list[..mu]) {
                    Ok(()) => true,
                    Err(e) => {
                        messages.push(e.to_string());
                        false
                    }
                }
            }
            Dimension::Finite(d) => {
                messages.push(format!(
                    "quotient dimension {} differs from mu = {}; e_1..e_mu cannot be a basis",
                    d, mu
                ));
                false
            }
            Dimension::Infinite { witness } => {
                messages.push(format!(
                    "infinite-dimensional quotient (witness variable {witness})"
                ));
                false
            }
        };
        out.push(SampleCheck {
            point: tail.clone(),
            full_dimension,
            truncated_dimension,
            basis_ok,
            messages,
        });
    }
    Ok(AssumptionReport { mu, samples: out })
}

// ---------------------------------------------------------------------------
// Real front sampling (presentation layer; floating point)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct FrontPoint {
    /// +1 or -1: the two normal branches.
    pub branch: i8,
    pub z: Vec<f64>,
    /// `x_1..x_{n+1}`.
    pub x: Vec<f64>,
}

/// Evolve the initial front for time `t` along unit normals of the graph
/// `x_{n+1} = -F(z)`; one point per grid sample per branch.
pub fn sample_front(front: &InitialFront, t: f64, z_grid: &[Vec<f64>]) -> Vec<FrontPoint> {
    let n = front.n();
    let grads: Vec<SparsePolynomial<Rat>> = (0..n)
        .map(|j| front.f().partial_derivative(j).expect("valid variable"))
        .collect();
    let mut out = Vec::with_capacity(2 * z_grid.len());
    for z in z_grid {
        assert_eq!(z.len(), n, "grid point arity");
        let df: Vec<f64> = grads.iter().map(|g| g.eval_f64(z)).collect();
        let norm = (df.iter().map(|d| d * d).sum::<f64>() + 1.0).sqrt();
        let u = -front.f().eval_f64(z);
        for &sign in &[1.0f64, -1.0] {
            let mut x: Vec<f64> = (0..n).map(|j| z[j] + sign * t * df[j] / norm).collect();
            x.push(u + sign * t / norm);
            out.push(FrontPoint {
                branch: if sign > 0.0 { 1 } else { -1 },
                z: z.clone(),
                x,
            });
        }
    }
    out
}

/// Residual `Psi(x, t, z)` of a sampled point, for verification.
pub fn front_residual(phase: &PhaseFunction, t: f64, p: &FrontPoint) -> f64 {
    let mut values = p.x.clone();
    values.push(t);
    values.extend(p.z.iter().copied());
    phase.psi().eval_f64(&values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::poly::{parse_polynomial, PolyRing};

    fn front_example1(a: i64) -> InitialFront {
        let ring = PolyRing::new(vec!["z"]);
        let f = parse_polynomial(&ring, &format!("{a} z^2 + z^4")).unwrap();
        InitialFront::new(f)
    }

    fn front_example2(k1: i64, k2: i64) -> InitialFront {
        let ring = PolyRing::new(vec!["z1", "z2"]);
        let f = parse_polynomial(&ring, &format!("-1/2 ({k1} z1^2 + {k2} z2^2)")).unwrap();
        InitialFront::new(f)
    }

    fn focal_example1(a: i64) -> Vec<Rat> {
        vec![rat_int(0), rat(-1, 2 * a), rat(1, 2 * a)]
    }

    /// Coefficient of a pure z-power in the combined ring, as a polynomial in
    /// (x, t).
    fn z_coefficient(phase: &PhaseFunction, powers: &[u32]) -> SparsePolynomial<Rat> {
        let n = phase.n();
        let xt_ring = PolyRing::new(phase.ring().vars()[..n + 2].to_vec());
        let mut out = SparsePolynomial::zero(&xt_ring);
        for (e, c) in phase.psi().terms() {
            if &e.0[n + 2..] == powers {
                let xt = ExponentVector(e.0[..n + 2].to_vec());
                out = out
                    .add(&SparsePolynomial::monomial(&xt_ring, xt, c.clone()))
                    .unwrap();
            }
        }
        out
    }

    #[test]
    fn phase_of_flat_front() {
        let ring = PolyRing::new(vec!["z"]);
        let front = InitialFront::new(SparsePolynomial::zero(&ring));
        let phase = build_phase(&front).unwrap();
        let expected = parse_polynomial(phase.ring(), "x2^2 - t^2").unwrap();
        assert_eq!(phase.psi(), &expected);
    }

    #[test]
    fn phase_example1_coefficients() {
        let phase = build_phase(&front_example1(2)).unwrap();
        let xt = PolyRing::new(vec!["x1", "x2", "t"]);
        let check = |powers: u32, text: &str| {
            let got = z_coefficient(&phase, &[powers]);
            let want = parse_polynomial(&xt, text).unwrap();
            assert!(
                got == want,
                "z^{powers} coefficient: got {got}, want {want}"
            );
        };
        check(8, "9");
        check(7, "-24 x1");
        check(6, "12 - 16 t^2 + 16 x1^2");
        check(5, "-40 x1");
        check(0, "-t^2 + x2^2");
    }

    #[test]
    fn phase_example2_matches_square_form() {
        let phase = build_phase(&front_example2(1, 2)).unwrap();
        let inner = parse_polynomial(
            phase.ring(),
            "-x3 + 1 x1 z1 + 2 x2 z2 - 1/2 (1 z1^2 + 2 z2^2)",
        )
        .unwrap();
        let weight = parse_polynomial(phase.ring(), "1 + 1 z1^2 + 4 z2^2").unwrap();
        let t2 = parse_polynomial(phase.ring(), "t^2").unwrap();
        let expected = inner
            .mul(&inner)
            .unwrap()
            .sub(&t2.mul(&weight).unwrap())
            .unwrap();
        assert_eq!(phase.psi(), &expected);
    }

    #[test]
    fn phase_relabeling_invariant() {
        // Rename the z-variable; only names change, never coefficients.
        let ring_z = PolyRing::new(vec!["z"]);
        let ring_w = PolyRing::new(vec!["w"]);
        let fz = parse_polynomial(&ring_z, "2 z^2 + z^4").unwrap();
        let fw = parse_polynomial(&ring_w, "2 w^2 + w^4").unwrap();
        let pz = build_phase(&InitialFront::new(fz)).unwrap();
        let pw = build_phase(&InitialFront::new(fw)).unwrap();
        let map: Vec<Option<usize>> = (0..pw.ring().nvars()).map(Some).collect();
        assert_eq!(&pw.psi().project(pz.ring(), &map).unwrap(), pz.psi());
    }

    #[test]
    fn phase_at_example1() {
        let phase = build_phase(&front_example1(2)).unwrap();
        let g = phase_at(&phase, &focal_example1(2)).unwrap();
        let want = parse_polynomial(phase.z_ring(), "7/2 z^4 + 11 z^6 + 9 z^8").unwrap();
        assert_eq!(g, want);

        let phase = build_phase(&front_example1(1)).unwrap();
        let g = phase_at(&phase, &focal_example1(1)).unwrap();
        let want = parse_polynomial(phase.z_ring(), "2 z^6 + 9 z^8").unwrap();
        assert_eq!(g, want);
    }

    #[test]
    fn phase_at_flat_front_focal_zero() {
        let ring = PolyRing::new(vec!["z"]);
        let front = InitialFront::new(SparsePolynomial::zero(&ring));
        let phase = build_phase(&front).unwrap();
        let g = phase_at(&phase, &[rat_int(0), rat(3, 7), rat(3, 7)]).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn milnor_numbers_example1() {
        for (a, local) in [(2i64, 3usize), (1, 5)] {
            let phase = build_phase(&front_example1(a)).unwrap();
            let base = phase_at(&phase, &focal_example1(a)).unwrap();
            let q = milnor_quotient(&base).unwrap();
            assert_eq!(q.dimension(), 7, "global Milnor number, a = {a}");
            assert_eq!(
                q.local_multiplicity(&[rat_int(0)]).unwrap(),
                local,
                "local Milnor number at z = 0, a = {a}"
            );
        }
    }

    #[test]
    fn default_e_list_example1() {
        let phase = build_phase(&front_example1(2)).unwrap();
        let list = default_e_list(&phase, &focal_example1(2)).unwrap();
        let want: Vec<SparsePolynomial<Rat>> = (0..8)
            .map(|k| {
                SparsePolynomial::monomial(phase.z_ring(), ExponentVector(vec![k]), Rat::one())
            })
            .collect();
        assert_eq!(list, want);
    }

    #[test]
    fn iota_example1() {
        let phase = build_phase(&front_example1(2)).unwrap();
        let focal = focal_example1(2);
        let e_list = default_e_list(&phase, &focal).unwrap();
        let frame = extract_iota(&phase, &focal, &e_list, None, None).unwrap();
        assert_eq!(frame.mu, 7);
        assert_eq!(frame.m(), 8);
        assert_eq!(frame.nu, 8);
        let xt = frame.xt_ring().clone();
        let expect = |text: &str| parse_polynomial(&xt, text).unwrap();
        assert_eq!(frame.iota[1], expect("8 x1 x2"));
        assert_eq!(frame.iota[5], expect("-40 x1"));
        assert_eq!(frame.iota[6], expect("-16 t^2 + 16 x1^2 + 1"));
        assert_eq!(frame.iota[7], expect("-24 x1"));
        // The decomposition is pinned to the focal fiber: iota(focal) = 0.
        assert!(frame.iota_at(&focal).iter().all(|v| Field::is_zero(v)));
    }

    #[test]
    fn iota_errors() {
        let phase = build_phase(&front_example1(2)).unwrap();
        let focal = focal_example1(2);
        let mut e_list = default_e_list(&phase, &focal).unwrap();
        // Drop z^7: its -24 x1 coefficient has nowhere to go.
        e_list.pop();
        match extract_iota(&phase, &focal, &e_list, None, None) {
            Err(WavefrontError::EListInsufficient(mons)) => {
                assert_eq!(mons, vec!["z^7".to_string()]);
            }
            other => panic!("expected EListInsufficient, got {other:?}"),
        }
        // Dependent list: append z + z^2, a combination of earlier entries.
        let mut dep = default_e_list(&phase, &focal).unwrap();
        let extra = dep[1].add(&dep[2]).unwrap();
        dep.push(extra);
        match extract_iota(&phase, &focal, &dep, None, None) {
            Err(WavefrontError::Ambiguous(msg)) => {
                assert!(msg.contains("linearly dependent"), "{msg}");
            }
            other => panic!("expected Ambiguous, got {other:?}"),
        }
    }

    fn example2_e_list(z_ring: &RingRc) -> Vec<SparsePolynomial<Rat>> {
        [
            "1", "z1", "z1^2", "z2", "z2^2", "z1 z2", "z2^3", "z1^3", "z1^2 z2", "z1 z2^2",
        ]
        .iter()
        .map(|t| parse_polynomial(z_ring, t).unwrap())
        .collect()
    }

    #[test]
    fn iota_example2() {
        let phase = build_phase(&front_example2(1, 2)).unwrap();
        let focal = vec![rat_int(0), rat_int(0), rat_int(1), rat_int(1)];
        let e_list = example2_e_list(phase.z_ring());
        let frame = extract_iota(&phase, &focal, &e_list, Some(8), None).unwrap();
        assert_eq!(frame.mu, 5);
        assert_eq!(frame.m(), 10);
        assert_eq!(frame.nu, 8);
        let xt = frame.xt_ring().clone();
        let expect = |text: &str| parse_polynomial(&xt, text).unwrap();
        assert_eq!(frame.iota[6], expect("-4 x2"));
        assert_eq!(frame.iota[8], expect("-2 x2"));
        assert_eq!(frame.iota[7], expect("-1 x1"));
        assert_eq!(frame.iota[9], expect("-2 x1"));
        // Stratum identities hold as exact polynomials: k1 s7 - k2 s9 = 0 and
        // k1 s10 - k2 s8 = 0.
        let zero1 = frame.iota[6]
            .mul_scalar(&rat_int(1))
            .sub(&frame.iota[8].mul_scalar(&rat_int(2)))
            .unwrap();
        let zero2 = frame.iota[9]
            .mul_scalar(&rat_int(1))
            .sub(&frame.iota[7].mul_scalar(&rat_int(2)))
            .unwrap();
        assert!(zero1.is_zero());
        assert!(zero2.is_zero());
        assert!(frame.iota_at(&focal).iter().all(|v| Field::is_zero(v)));
    }

    #[test]
    fn assumptions_example2() {
        let phase = build_phase(&front_example2(1, 2)).unwrap();
        let focal = vec![rat_int(0), rat_int(0), rat_int(1), rat_int(1)];
        let e_list = example2_e_list(phase.z_ring());
        let s_ring = PolyRing::new((1..=10).map(|j| format!("s{j}")).collect::<Vec<_>>());
        let constraints = vec![
            parse_polynomial(&s_ring, "1 s7 - 2 s9").unwrap(),
            parse_polynomial(&s_ring, "1 s10 - 2 s8").unwrap(),
        ];
        let frame = extract_iota(
            &phase,
            &focal,
            &e_list,
            Some(8),
            Some((&s_ring, &constraints)),
        )
        .unwrap();
        // Sample on U: only s2..s6 nonzero.
        let on_u: Vec<Rat> = vec![
            rat_int(1),
            rat(2, 3),
            rat_int(-1),
            rat_int(2),
            rat_int(1),
            rat_int(0),
            rat_int(0),
            rat_int(0),
            rat_int(0),
        ];
        let report = verify_assumptions(&frame, &phase, &[on_u]).unwrap();
        assert!(report.all_passed(), "{:?}", report.samples[0]);
        assert_eq!(report.samples[0].full_dimension, Dimension::Finite(5));

        // Off U: turning on any of e7..e10 alone lifts the dimension to 7.
        for j in 6..10 {
            let mut tail = vec![Rat::zero(); 9];
            tail[0] = rat_int(1); // s2
            tail[j - 1] = rat_int(1); // s_{j+1}
            let report = verify_assumptions(&frame, &phase, &[tail]).unwrap();
            let sample = &report.samples[0];
            assert_eq!(
                sample.full_dimension,
                Dimension::Finite(7),
                "adding e{} should lift the dimension",
                j + 1
            );
            assert!(!sample.passed(frame.mu));
            assert!(!sample.messages.is_empty());
        }
    }

    #[test]
    fn assumptions_example1_generic_sample() {
        let phase = build_phase(&front_example1(2)).unwrap();
        let focal = focal_example1(2);
        let e_list = default_e_list(&phase, &focal).unwrap();
        let frame = extract_iota(&phase, &focal, &e_list, None, None).unwrap();
        let sample: Vec<Rat> = vec![
            rat_int(1),
            rat(1, 2),
            rat_int(-2),
            rat_int(3),
            rat(5, 3),
            rat_int(-1),
            rat_int(2),
        ];
        let report = verify_assumptions(&frame, &phase, &[sample]).unwrap();
        assert!(report.all_passed(), "{:?}", report.samples[0]);
        assert_eq!(report.samples[0].full_dimension, Dimension::Finite(7));
        assert_eq!(report.samples[0].truncated_dimension, Dimension::Finite(7));
    }

    #[test]
    fn front_samples_lie_on_phase_zero_set() {
        let front = front_example1(2);
        let phase = build_phase(&front).unwrap();
        // dF(0) = 0 and F(0) = 0: the center evolves straight up/down.
        let pts = sample_front(&front, 0.5, &[vec![0.0]]);
        assert_eq!(pts.len(), 2);
        assert!((pts[0].x[0] - 0.0).abs() < 1e-12);
        assert!((pts[0].x[1] - 0.5).abs() < 1e-12);
        assert!((pts[1].x[1] + 0.5).abs() < 1e-12);

        let grid: Vec<Vec<f64>> = (-20..=20).map(|k| vec![k as f64 / 10.0]).collect();
        for t in [2.0 / 3.0, 0.5, 0.55] {
            for p in sample_front(&front, t, &grid) {
                let r = front_residual(&phase, t, &p);
                assert!(r.abs() < 1e-9, "residual {r} at z = {:?}", p.z);
            }
        }
    }

    #[test]
    fn flat_front_translates() {
        let ring = PolyRing::new(vec!["z"]);
        let front = InitialFront::new(SparsePolynomial::zero(&ring));
        let pts = sample_front(&front, 1.0, &[vec![0.3]]);
        assert_eq!(pts[0].x, vec![0.3, 1.0]);
        assert_eq!(pts[1].x, vec![0.3, -1.0]);
    }
}
