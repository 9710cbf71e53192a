//! Exact finite-chain computations: transition probabilities, semigroup
//! action and its time integrals, invariant measure, variances, the sharp
//! Poincaré constant, and closed forms for jump probabilities.
//!
//! The matrix exponential is evaluated by uniformization. With
//! `L = max(max_u |Q[u][u]|, n*phi(m))` the kernel `P = I + Q/L` is
//! row-stochastic and
//!
//! ```text
//! exp(tQ) = sum_k  e^{-Lt} (Lt)^k / k!  *  P^k
//! ```
//!
//! so truncating the Poisson tail at mass `tol` gives entrywise error at
//! most `tol` while preserving non-negativity. Time integrals use the same
//! series:
//!
//! ```text
//! int_0^t exp(sQ) ds = (1/L) * sum_k  Pr[Poisson(Lt) >= k+1]  *  P^k
//! ```
//!
//! whose weights sum to `t` exactly. Beyond `Lt = 400` both evaluations
//! split the interval in half recursively to keep the Poisson weights inside
//! the floating-point range.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{coord_to_f64, NeuronModel, State};
use crate::space::{RateMatrix, StateSpace};

/// Default tail tolerance for matrix-exponential evaluations.
pub const DEFAULT_EXP_TOL: f64 = 1e-12;

/// Largest uniformized horizon evaluated in a single Poisson series.
const SPLIT_THRESHOLD: f64 = 400.0;

/// An observable: one value per enumerated state.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    values: Vec<f64>,
}

impl Observable {
    pub fn from_values(space: &StateSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::ObservableUndefined(format!(
                "expected {} values, found {}",
                space.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::ObservableUndefined(format!("non-finite value {bad}")));
        }
        Ok(Observable { values })
    }

    pub fn from_fn<F: Fn(&State) -> f64>(space: &StateSpace, f: F) -> Result<Self> {
        Self::from_values(space, space.states().iter().map(f).collect())
    }

    /// Projection onto the potential of neuron `k`.
    pub fn coordinate(space: &StateSpace, k: usize) -> Result<Self> {
        let n = space.state(0).len();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        Self::from_fn(space, |s| coord_to_f64(s.coords()[k]))
    }

    /// Indicator of a single state index.
    pub fn indicator(space: &StateSpace, index: usize) -> Result<Self> {
        if index >= space.len() {
            return Err(Error::IndexOutOfRange {
                index,
                n: space.len(),
            });
        }
        Self::from_values(space, (0..space.len()).map(|u| (u == index) as u8 as f64).collect())
    }

    /// Indicator of the recurrent domain.
    pub fn indicator_recurrent(space: &StateSpace) -> Result<Self> {
        Self::from_values(
            space,
            (0..space.len())
                .map(|u| space.is_recurrent(u) as u8 as f64)
                .collect(),
        )
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, u: usize) -> f64 {
        self.values[u]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A probability vector over the enumerated states.
#[derive(Debug, Clone)]
pub struct DistributionVector {
    probs: Vec<f64>,
}

impl DistributionVector {
    /// Clamp entries in `[-1e-12, 0)` to zero and validate normalization.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        for p in probs.iter_mut() {
            if *p < 0.0 {
                if *p < -1e-12 {
                    return Err(Error::NonPositiveProbability(format!(
                        "entry {p} below the clamp threshold"
                    )));
                }
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::NonPositiveProbability(format!(
                "total mass {sum} is not 1"
            )));
        }
        Ok(DistributionVector { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, u: usize) -> f64 {
        self.probs[u]
    }

    /// Expectation of an observable.
    pub fn mean(&self, f: &Observable) -> f64 {
        self.probs.iter().zip(f.values()).map(|(p, v)| p * v).sum()
    }

    /// Smallest probability over the support (entries > 0).
    pub fn min_support(&self) -> f64 {
        self.probs
            .iter()
            .copied()
            .filter(|&p| p > 0.0)
            .fold(f64::INFINITY, f64::min)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::NonFiniteTime(t));
    }
    Ok(())
}

fn check_tol(tol: f64) -> f64 {
    if tol.is_finite() && tol > 0.0 {
        tol.min(1e-6)
    } else {
        DEFAULT_EXP_TOL
    }
}

/// `row * P` for the uniformized kernel `P = I + Q/L`.
fn kernel_step_row(q: &RateMatrix, row: &[f64]) -> Vec<f64> {
    let lam = q.uniform_rate();
    let mut out = row.to_vec();
    for u in 0..q.n_states() {
        let r = row[u];
        if r == 0.0 {
            continue;
        }
        out[u] += r * q.diagonal(u) / lam;
        for &(v, rate) in q.off_diagonal(u) {
            out[v] += r * rate / lam;
        }
    }
    out
}

/// `P * f` for the uniformized kernel.
fn kernel_step_vec(q: &RateMatrix, f: &[f64]) -> Vec<f64> {
    let lam = q.uniform_rate();
    let mut out = f.to_vec();
    for u in 0..q.n_states() {
        let mut acc = q.diagonal(u) * f[u];
        for &(v, rate) in q.off_diagonal(u) {
            acc += rate * f[v];
        }
        out[u] += acc / lam;
    }
    out
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// `row * exp(tQ)` by the truncated Poisson series, splitting long horizons.
fn evolve_row(q: &RateMatrix, t: f64, row: Vec<f64>, tol: f64) -> Vec<f64> {
    let lam = q.uniform_rate();
    if t == 0.0 || max_abs(&row) == 0.0 {
        return row;
    }
    let lt = lam * t;
    if lt > SPLIT_THRESHOLD {
        let half = evolve_row(q, t / 2.0, row, tol / 2.0);
        return evolve_row(q, t / 2.0, half, tol / 2.0);
    }
    let scale = max_abs(&row).max(1.0);
    let mut weight = (-lt).exp();
    let mut cumulative = weight;
    let mut term = row;
    let mut acc: Vec<f64> = term.iter().map(|&x| x * weight).collect();
    let k_max = (lt + 12.0 * lt.sqrt() + 60.0) as usize;
    for k in 1..=k_max {
        if (1.0 - cumulative) * scale <= tol {
            break;
        }
        term = kernel_step_row(q, &term);
        weight *= lt / k as f64;
        cumulative += weight;
        for (a, &x) in acc.iter_mut().zip(term.iter()) {
            *a += weight * x;
        }
    }
    acc
}

/// `exp(tQ) * f` by the truncated Poisson series, splitting long horizons.
fn evolve_vec(q: &RateMatrix, t: f64, f: Vec<f64>, tol: f64) -> Vec<f64> {
    let lam = q.uniform_rate();
    if t == 0.0 || max_abs(&f) == 0.0 {
        return f;
    }
    let lt = lam * t;
    if lt > SPLIT_THRESHOLD {
        let half = evolve_vec(q, t / 2.0, f, tol / 2.0);
        return evolve_vec(q, t / 2.0, half, tol / 2.0);
    }
    let scale = max_abs(&f).max(1.0);
    let mut weight = (-lt).exp();
    let mut cumulative = weight;
    let mut term = f;
    let mut acc: Vec<f64> = term.iter().map(|&x| x * weight).collect();
    let k_max = (lt + 12.0 * lt.sqrt() + 60.0) as usize;
    for k in 1..=k_max {
        if (1.0 - cumulative) * scale <= tol {
            break;
        }
        term = kernel_step_vec(q, &term);
        weight *= lt / k as f64;
        cumulative += weight;
        for (a, &x) in acc.iter_mut().zip(term.iter()) {
            *a += weight * x;
        }
    }
    acc
}

/// One row of `exp(tQ)`: the distribution of the chain at time `t` started
/// from `from`. Entries are non-negative by construction; the row is
/// renormalized to unit mass.
pub fn transition_row(q: &RateMatrix, t: f64, from: usize, tol: f64) -> Result<Vec<f64>> {
    check_time(t)?;
    let tol = check_tol(tol);
    let mut row = vec![0.0; q.n_states()];
    row[from] = 1.0;
    let mut out = evolve_row(q, t, row, tol);
    let sum: f64 = out.iter().sum();
    if sum > 0.0 {
        for x in out.iter_mut() {
            *x /= sum;
        }
    }
    Ok(out)
}

/// Full transition matrix `exp(tQ)`, row-stochastic.
pub fn transition_probabilities(q: &RateMatrix, t: f64, tol: f64) -> Result<DMatrix<f64>> {
    check_time(t)?;
    let n = q.n_states();
    let mut mat = DMatrix::zeros(n, n);
    for u in 0..n {
        let row = transition_row(q, t, u, tol)?;
        for (v, &p) in row.iter().enumerate() {
            mat[(u, v)] = p;
        }
    }
    Ok(mat)
}

/// `P_t f(x)`: expectation of `f` at time `t` started from `x`.
pub fn semigroup_apply(q: &RateMatrix, t: f64, f: &Observable, x: usize, tol: f64) -> Result<f64> {
    let row = transition_row(q, t, x, tol)?;
    Ok(row.iter().zip(f.values()).map(|(p, v)| p * v).sum())
}

/// The vector `int_0^t exp(sQ) g ds`, one entry per starting state.
pub fn semigroup_time_integral_vec(
    q: &RateMatrix,
    t: f64,
    g: &Observable,
    tol: f64,
) -> Result<Vec<f64>> {
    check_time(t)?;
    let tol = check_tol(tol);
    Ok(integral_vec_inner(q, t, g.values().to_vec(), tol))
}

fn integral_vec_inner(q: &RateMatrix, t: f64, g: Vec<f64>, tol: f64) -> Vec<f64> {
    if t == 0.0 || max_abs(&g) == 0.0 {
        return vec![0.0; g.len()];
    }
    let lam = q.uniform_rate();
    let lt = lam * t;
    if lt > SPLIT_THRESHOLD {
        // int_0^{2T} = int_0^T + exp(TQ) * int_0^T
        let half = integral_vec_inner(q, t / 2.0, g, tol / 2.0);
        let moved = evolve_vec(q, t / 2.0, half.clone(), tol / (2.0 * t));
        return half.iter().zip(moved.iter()).map(|(a, b)| a + b).collect();
    }
    let scale = max_abs(&g).max(1.0);
    // Q_k = Pr[Poisson(Lt) >= k+1]; the weights Q_k / L sum to t exactly.
    let mut pmf = (-lt).exp();
    let mut upper_tail = 1.0 - pmf;
    let mut spent = upper_tail;
    let mut term = g;
    let mut acc: Vec<f64> = term.iter().map(|&x| x * upper_tail / lam).collect();
    let k_max = (lt + 12.0 * lt.sqrt() + 60.0) as usize;
    for k in 1..=k_max {
        // Remaining integral weight is (Lt - sum of used Q_j) / L.
        if (lt - spent) / lam * scale <= tol {
            break;
        }
        term = kernel_step_vec(q, &term);
        pmf *= lt / k as f64;
        upper_tail = (upper_tail - pmf).max(0.0);
        spent += upper_tail;
        if upper_tail == 0.0 {
            break;
        }
        for (a, &x) in acc.iter_mut().zip(term.iter()) {
            *a += upper_tail / lam * x;
        }
    }
    acc
}

/// `int_0^t P_s g(x) ds` via the closed-form series.
pub fn semigroup_time_integral(
    q: &RateMatrix,
    t: f64,
    g: &Observable,
    x: usize,
    tol: f64,
) -> Result<f64> {
    Ok(semigroup_time_integral_vec(q, t, g, tol)?[x])
}

/// Class size above which the engine switches from dense factorizations to
/// sparse iterative methods.
const DENSE_LIMIT: usize = 2_000;

/// Invariant measure supported on a closed class: solves `pi Q = 0`,
/// `sum pi = 1` on the class and zero elsewhere. Dense LU with one step of
/// iterative refinement up to [`DENSE_LIMIT`] states; damped power iteration
/// on the uniformized kernel beyond.
pub fn invariant_measure(q: &RateMatrix, class: &[usize]) -> Result<DistributionVector> {
    let k = class.len();
    if k == 0 {
        return Err(Error::SingularSystem("empty class".into()));
    }
    let n = q.n_states();
    let mut full = vec![0.0; n];
    if k == 1 {
        full[class[0]] = 1.0;
        return DistributionVector::new(full);
    }
    if k > DENSE_LIMIT {
        return invariant_measure_iterative(q, class);
    }
    let pos: std::collections::HashMap<usize, usize> =
        class.iter().enumerate().map(|(a, &u)| (u, a)).collect();
    // A = Q^T restricted to the class, with the last row replaced by ones
    // (normalization); b = e_last.
    let mut a = DMatrix::zeros(k, k);
    for (col, &u) in class.iter().enumerate() {
        a[(col, col)] += q.diagonal(u);
        for &(v, rate) in q.off_diagonal(u) {
            if let Some(&row) = pos.get(&v) {
                a[(row, col)] += rate;
            }
            // A closed class has no outgoing edges; anything else would be a
            // classification bug caught by the residual check below.
        }
    }
    for col in 0..k {
        a[(k - 1, col)] = 1.0;
    }
    let mut b = nalgebra::DVector::zeros(k);
    b[k - 1] = 1.0;
    let lu = a.clone().lu();
    let mut sol = lu
        .solve(&b)
        .ok_or_else(|| Error::SingularSystem("rate matrix restricted to the class".into()))?;
    // One step of iterative refinement tightens the residual to rounding.
    let resid = &b - &a * &sol;
    if let Some(corr) = lu.solve(&resid) {
        sol += corr;
    }
    for (aidx, &u) in class.iter().enumerate() {
        full[u] = sol[aidx];
    }
    let total: f64 = full.iter().sum();
    for p in full.iter_mut() {
        *p /= total;
    }
    DistributionVector::new(full)
}

/// Stationary vector by damped power iteration `pi <- pi (I + P)/2` with the
/// uniformized kernel `P = I + Q/L`; the damping removes periodicity.
fn invariant_measure_iterative(q: &RateMatrix, class: &[usize]) -> Result<DistributionVector> {
    let n = q.n_states();
    let k = class.len();
    let mut pi = vec![0.0; n];
    for &u in class {
        pi[u] = 1.0 / k as f64;
    }
    let mut last_change = f64::INFINITY;
    for _ in 0..2_000_000 {
        let stepped = kernel_step_row(q, &pi);
        let mut change = 0.0;
        for u in 0..n {
            let next = 0.5 * (pi[u] + stepped[u]);
            change += (next - pi[u]).abs();
            pi[u] = next;
        }
        let total: f64 = pi.iter().sum();
        for p in pi.iter_mut() {
            *p /= total;
        }
        if change < 1e-15 {
            last_change = change;
            break;
        }
        last_change = change;
    }
    if last_change >= 1e-12 {
        return Err(Error::SingularSystem(format!(
            "power iteration stalled at change {last_change}"
        )));
    }
    DistributionVector::new(pi)
}

/// Residual `max_v |(pi Q)(v)|` of a candidate invariant measure.
pub fn invariant_residual(q: &RateMatrix, pi: &DistributionVector) -> f64 {
    let n = q.n_states();
    let mut out = vec![0.0; n];
    for u in 0..n {
        let p = pi.prob(u);
        if p == 0.0 {
            continue;
        }
        out[u] += p * q.diagonal(u);
        for &(v, rate) in q.off_diagonal(u) {
            out[v] += p * rate;
        }
    }
    max_abs(&out)
}

/// `Var_x(f(X_t)) = P_t f^2(x) - (P_t f(x))^2`, clamped to be non-negative.
pub fn variance_semigroup(q: &RateMatrix, t: f64, f: &Observable, x: usize, tol: f64) -> Result<f64> {
    let row = transition_row(q, t, x, tol)?;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (p, &v) in row.iter().zip(f.values()) {
        m1 += p * v;
        m2 += p * v * v;
    }
    Ok((m2 - m1 * m1).max(0.0))
}

/// `Var_pi(f) = pi(f^2) - (pi f)^2`, clamped to be non-negative.
pub fn variance_invariant(pi: &DistributionVector, f: &Observable) -> f64 {
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (p, &v) in pi.probs().iter().zip(f.values()) {
        m1 += p * v;
        m2 += p * v * v;
    }
    (m2 - m1 * m1).max(0.0)
}

/// Sharp Poincaré constant and its extremal observable.
///
/// Returns `1 / lambda_1` where `lambda_1` is the smallest nonzero eigenvalue
/// of the symmetrized generator `-(Q + Q*)/2` in the `pi`-weighted inner
/// product (`Q*` the `pi`-adjoint), i.e. the smallest constant `C` with
/// `Var_pi(f) <= C * pi(Gamma(f,f))` over all observables. The extremal
/// observable attains the ratio. A single-state class has no non-constant
/// observables and yields constant `0`.
pub fn optimal_poincare_constant(
    q: &RateMatrix,
    pi: &DistributionVector,
    class: &[usize],
) -> Result<(f64, Vec<f64>)> {
    let k = class.len();
    let n = q.n_states();
    if k <= 1 {
        return Ok((0.0, vec![0.0; n]));
    }
    let sqrt_pi: Vec<f64> = class.iter().map(|&u| pi.prob(u).sqrt()).collect();
    if sqrt_pi.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::SingularSystem(
            "invariant measure vanishes on the class".into(),
        ));
    }
    if k > DENSE_LIMIT {
        return optimal_poincare_iterative(q, class, &sqrt_pi);
    }
    let pos: std::collections::HashMap<usize, usize> =
        class.iter().enumerate().map(|(a, &u)| (u, a)).collect();
    // C = D^{1/2} Q D^{-1/2}; B = -(C + C^T)/2 is symmetric with the same
    // spectrum as the pi-symmetrized generator.
    let mut c = DMatrix::zeros(k, k);
    for (a, &u) in class.iter().enumerate() {
        c[(a, a)] += q.diagonal(u);
        for &(v, rate) in q.off_diagonal(u) {
            if let Some(&b) = pos.get(&v) {
                c[(a, b)] += sqrt_pi[a] * rate / sqrt_pi[b];
            }
        }
    }
    let b: DMatrix<f64> = -0.5 * (&c + c.transpose());
    let eig = nalgebra::SymmetricEigen::new(b);
    // The constant mode maps to the sqrt(pi) direction; deflate it by
    // overlap rather than by magnitude.
    let mut best_overlap = -1.0;
    let mut const_mode = 0;
    for j in 0..k {
        let col = eig.eigenvectors.column(j);
        let overlap: f64 = col.iter().zip(sqrt_pi.iter()).map(|(a, b)| a * b).sum();
        if overlap.abs() > best_overlap {
            best_overlap = overlap.abs();
            const_mode = j;
        }
    }
    let mut lambda1 = f64::INFINITY;
    let mut arg = 0;
    for j in 0..k {
        if j != const_mode && eig.eigenvalues[j] < lambda1 {
            lambda1 = eig.eigenvalues[j];
            arg = j;
        }
    }
    if !(lambda1 > 0.0) {
        return Err(Error::SingularSystem(format!(
            "non-positive spectral gap {lambda1}; the class is not irreducible"
        )));
    }
    let mut f = vec![0.0; n];
    for (a, &u) in class.iter().enumerate() {
        f[u] = eig.eigenvectors[(a, arg)] / sqrt_pi[a];
    }
    Ok((1.0 / lambda1, f))
}

/// Smallest nonzero eigenvalue of the symmetrized generator by shifted power
/// iteration with sparse matrix actions, for classes too large to
/// factorize densely. The constant direction `sqrt(pi)` is deflated each
/// step.
fn optimal_poincare_iterative(
    q: &RateMatrix,
    class: &[usize],
    sqrt_pi: &[f64],
) -> Result<(f64, Vec<f64>)> {
    let n = q.n_states();
    let k = class.len();
    let pos: std::collections::HashMap<usize, usize> =
        class.iter().enumerate().map(|(a, &u)| (u, a)).collect();
    // B v = -1/2 (D^1/2 Q D^-1/2 v + D^-1/2 Q^T D^1/2 v) via row actions.
    let apply_b = |v: &[f64]| -> Vec<f64> {
        let mut forward = vec![0.0; k];
        let mut adjoint = vec![0.0; k];
        for (a, &u) in class.iter().enumerate() {
            let y = v[a] / sqrt_pi[a];
            forward[a] += q.diagonal(u) * y * sqrt_pi[a];
            let s = sqrt_pi[a] * v[a];
            adjoint[a] += q.diagonal(u) * s / sqrt_pi[a];
            for &(w, rate) in q.off_diagonal(u) {
                if let Some(&b) = pos.get(&w) {
                    forward[a] += sqrt_pi[a] * rate * v[b] / sqrt_pi[b];
                    adjoint[b] += rate * s / sqrt_pi[b];
                }
            }
        }
        (0..k).map(|a| -0.5 * (forward[a] + adjoint[a])).collect()
    };
    let sigma = 2.0 * q.uniform_rate() + 1.0;
    let deflate = |v: &mut Vec<f64>| {
        let overlap: f64 = v.iter().zip(sqrt_pi).map(|(a, b)| a * b).sum();
        for (x, &w) in v.iter_mut().zip(sqrt_pi) {
            *x -= overlap * w;
        }
    };
    let mut v: Vec<f64> = (0..k).map(|a| ((a * 2654435761) % 1009) as f64 - 504.0).collect();
    deflate(&mut v);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    let mut rho_last = f64::INFINITY;
    for iter in 0..500_000 {
        let bv = apply_b(&v);
        let mut mv: Vec<f64> = v
            .iter()
            .zip(bv.iter())
            .map(|(&a, &b)| sigma * a - b)
            .collect();
        deflate(&mut mv);
        let rho: f64 = v.iter().zip(mv.iter()).map(|(a, b)| a * b).sum();
        let norm = mv.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::SingularSystem("deflated space collapsed".into()));
        }
        for x in mv.iter_mut() {
            *x /= norm;
        }
        v = mv;
        if iter > 10 && (rho - rho_last).abs() <= 1e-13 * rho.abs().max(1.0) {
            rho_last = rho;
            break;
        }
        rho_last = rho;
    }
    let lambda1 = sigma - rho_last;
    if !(lambda1 > 0.0) {
        return Err(Error::SingularSystem(format!(
            "non-positive spectral gap {lambda1}; the class is not irreducible"
        )));
    }
    let mut f = vec![0.0; n];
    for (a, &u) in class.iter().enumerate() {
        f[u] = v[a] / sqrt_pi[a];
    }
    Ok((1.0 / lambda1, f))
}

/// `Lf` as an observable: the generator applied pointwise over the space.
pub fn generator_observable(space: &StateSpace, q: &RateMatrix, f: &Observable) -> Observable {
    Observable::from_values(space, q.apply_to(f.values())).expect("lengths match")
}

/// `Gamma(f,f)` as an observable over the space:
/// `0.5 * sum_i phi(x_i) (f(jump_i(x)) - f(x))^2` per state.
pub fn carre_observable(model: &NeuronModel, space: &StateSpace, f: &Observable) -> Observable {
    let mut values = Vec::with_capacity(space.len());
    for u in 0..space.len() {
        let rates = model.intensities(space.state(u));
        let fu = f.value(u);
        let mut acc = 0.0;
        for (i, &rate) in rates.iter().enumerate() {
            let d = f.value(space.jump_target(u, i)) - fu;
            acc += rate * d * d;
        }
        values.push(0.5 * acc);
    }
    Observable::from_values(space, values).expect("lengths match")
}

/// Probability of seeing no jump on `[0, s]` from `x`: `exp(-s * phibar(x))`.
pub fn no_jump_probability(model: &NeuronModel, s: f64, x: &State) -> Result<f64> {
    check_time(s)?;
    Ok((-s * model.total_intensity(x)).exp())
}

/// Relative threshold for the equal-total-rate branch of the one-jump
/// closed form; the two branches agree in the limit, so classification near
/// the boundary is harmless.
const EQUAL_RATE_REL_TOL: f64 = 1e-12;

/// Probability that exactly one jump happens on `[0, s]` from `x` and it is
/// neuron `i`:
///
/// ```text
/// p_s^i(x) = int_0^s phi(x_i) e^{-u r} e^{-(s-u) r'} du
///          = phi(x_i)/(r - r') * (e^{-s r'} - e^{-s r})   if r != r'
///          = s phi(x_i) e^{-s r}                          if r  = r'
/// ```
///
/// with `r = phibar(x)` and `r' = phibar(jump_i(x))`.
pub fn one_jump_probability(model: &NeuronModel, s: f64, x: &State, i: usize) -> Result<f64> {
    check_time(s)?;
    let r = model.total_intensity(x);
    let y = model.apply_jump(x, i)?;
    let rp = model.total_intensity(&y);
    let rate_i = model.intensities(x)[i];
    if (rp - r).abs() <= EQUAL_RATE_REL_TOL * r {
        Ok(s * rate_i * (-s * r).exp())
    } else {
        Ok((rate_i / (r - rp) * ((-s * rp).exp() - (-s * r).exp())).max(0.0))
    }
}

/// The unique maximizer of `s -> p_s^i(x)`:
///
/// ```text
/// t0(x, i) = (ln r - ln r') / (r - r')   if r != r',   1/r otherwise.
/// ```
pub fn peak_time_t0(model: &NeuronModel, x: &State, i: usize) -> Result<f64> {
    let r = model.total_intensity(x);
    let y = model.apply_jump(x, i)?;
    let rp = model.total_intensity(&y);
    if (rp - r).abs() <= EQUAL_RATE_REL_TOL * r {
        Ok(1.0 / r)
    } else {
        Ok((r.ln() - rp.ln()) / (r - rp))
    }
}
