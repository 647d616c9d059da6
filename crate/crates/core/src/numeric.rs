//! Floating-point witnesses at a concrete small `t`.
//!
//! Newton runs in log coordinates `y = log x`, seeded at `x = t^v` for each
//! tropical point `v` and at random log-uniform starts. The results are
//! empirical: no `t` is known to be small enough in general.

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{Rational, RationalVector};
use crate::error::{Error, Result};
use crate::intersect::IntersectionReport;
use crate::system::VerticalSystem;

/// `t` values tried, largest first, when a tropical seed fails to converge
/// directly; each root seeds the next value.
pub const T_SCHEDULE: [f64; 3] = [0.1, 0.05, 0.01];

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coefficient: f64,
    pub exponent: Vec<i64>,
}

/// Square system `Σ_j C̃_ij t^{h_j} x^{α_j} = 0`, one term list per equation.
#[derive(Clone, Debug, PartialEq)]
pub struct InstantiatedSystem {
    pub n: usize,
    pub t: f64,
    pub equations: Vec<Vec<Term>>,
}

impl InstantiatedSystem {
    /// Values of each term at `x = exp(y)`.
    fn term_values(&self, y: &[f64]) -> Vec<Vec<f64>> {
        self.equations
            .iter()
            .map(|eq| {
                eq.iter()
                    .map(|term| {
                        let e: f64 = term.exponent.iter().zip(y).map(|(&a, &b)| a as f64 * b).sum();
                        term.coefficient * e.exp()
                    })
                    .collect()
            })
            .collect()
    }

    /// Each equation divided by its largest term magnitude.
    fn scaled(&self, y: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let values = self.term_values(y);
        let mut f = DVector::zeros(self.n);
        let mut jac = DMatrix::zeros(self.n, self.n);
        for (i, (eq, vals)) in self.equations.iter().zip(&values).enumerate() {
            let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let scale = if scale > 0.0 && scale.is_finite() { scale } else { 1.0 };
            for (term, v) in eq.iter().zip(vals) {
                f[i] += v / scale;
                for (k, &a) in term.exponent.iter().enumerate() {
                    jac[(i, k)] += a as f64 * v / scale;
                }
            }
        }
        (f, jac)
    }

    /// Relative residual `max_i |f_i(x)| / max_j |term_ij(x)|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        self.scaled(&y).0.amax()
    }

    /// Plain values `f_i(x)`.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let y: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        self.term_values(&y).iter().map(|vals| vals.iter().sum()).collect()
    }
}

/// Evaluates the coefficients at `t` on independent rows of `C`.
pub fn instantiate(system: &VerticalSystem, t: f64) -> Result<InstantiatedSystem> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParameter(format!("t must lie in (0, 1), got {t}")));
    }
    let reduced = system.rank_selected();
    let n = system.n();
    if reduced.rows() != n {
        return Err(Error::InvalidParameter(format!(
            "coefficient matrix has rank {} but there are {n} variables; the system is not square",
            reduced.rows()
        )));
    }
    let powers: Vec<f64> = system.h.iter().map(|h| t.powf(to_f64(h))).collect();
    let equations = (0..n)
        .map(|i| {
            (0..system.a.cols())
                .filter(|&j| !num_traits::Zero::is_zero(reduced.get(i, j)))
                .map(|j| Term { coefficient: to_f64(reduced.get(i, j)) * powers[j], exponent: system.a.column(j) })
                .collect()
        })
        .collect();
    Ok(InstantiatedSystem { n, t, equations })
}

fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeedOrigin {
    /// Index into the report's points and the tropical point `v`.
    Tropical {
        index: usize,
        v: RationalVector,
    },
    Random {
        index: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootWitness {
    pub x: Vec<f64>,
    pub residual: f64,
    /// Jacobian condition number in log coordinates is below `1e12`.
    pub well_conditioned: bool,
    pub seed_origin: SeedOrigin,
    /// `t` values the run passed through before reaching the target.
    pub continuation: Vec<f64>,
}

impl RootWitness {
    pub fn log_x(&self) -> Vec<f64> {
        self.x.iter().map(|v| v.ln()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 100 }
    }
}

/// Damped Newton in log coordinates from the positive point `x0`.
pub fn newton(system: &InstantiatedSystem, x0: &[f64], options: &NewtonOptions) -> Option<(Vec<f64>, f64, bool)> {
    if x0.len() != system.n || x0.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return None;
    }
    let mut y = DVector::from_iterator(system.n, x0.iter().map(|v| v.ln()));
    let (mut f, mut jac) = system.scaled(y.as_slice());
    let mut norm = f.amax();
    for _ in 0..options.max_iter {
        if norm < options.tol {
            break;
        }
        let step = jac.clone().lu().solve(&(-&f))?;
        if !step.iter().all(|s| s.is_finite()) {
            return None;
        }
        // keep single steps moderate in log space
        let longest = step.amax();
        let mut lambda = if longest > 10.0 { 10.0 / longest } else { 1.0 };
        loop {
            let candidate = &y + &step * lambda;
            let (cf, cj) = system.scaled(candidate.as_slice());
            let cnorm = cf.amax();
            if cnorm.is_finite() && cnorm < norm {
                y = candidate;
                f = cf;
                jac = cj;
                norm = cnorm;
                break;
            }
            lambda /= 2.0;
            if lambda < 1e-6 {
                return None;
            }
        }
    }
    if norm.is_nan() || norm >= options.tol {
        return None;
    }
    let x: Vec<f64> = y.iter().map(|v| v.exp()).collect();
    if !x.iter().all(|&v| v > 0.0 && v.is_finite()) {
        return None;
    }
    let singular = jac.singular_values();
    let (max, min) = (singular.max(), singular.min());
    let well_conditioned = min > 0.0 && max / min < 1e12;
    Some((x, norm, well_conditioned))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountOptions {
    pub newton: NewtonOptions,
    /// Minimum max-norm distance between distinct roots in log coordinates.
    pub separation: f64,
    pub multistarts: usize,
    pub seed: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self { newton: NewtonOptions::default(), separation: 1e-4, multistarts: 64, seed: 20240601 }
    }
}

/// Runs tropical and random seeds at `t` and keeps separated roots.
pub fn count_roots(system: &VerticalSystem, t: f64, report: &IntersectionReport, options: &CountOptions) -> Result<Vec<RootWitness>> {
    let target = instantiate(system, t)?;
    let n = system.n();
    let schedule: Vec<f64> = T_SCHEDULE.iter().copied().filter(|&s| s > t).collect();
    let ladder: Vec<InstantiatedSystem> = schedule.iter().map(|&s| instantiate(system, s)).collect::<Result<_>>()?;

    let mut starts: Vec<(SeedOrigin, Vec<f64>)> = report
        .points
        .iter()
        .enumerate()
        .map(|(index, p)| (SeedOrigin::Tropical { index, v: p.v.clone() }, p.v.iter().map(to_f64).collect()))
        .collect();
    let spread = 2.0 + report.points.iter().flat_map(|p| p.v.iter().map(|x| to_f64(x).abs())).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for index in 0..options.multistarts {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-spread..=spread)).collect();
        starts.push((SeedOrigin::Random { index }, v));
    }

    let runs: Vec<Option<RootWitness>> = starts
        .into_par_iter()
        .map(|(origin, v)| {
            let at = |s: f64| -> Vec<f64> { v.iter().map(|vi| (vi * s.ln()).exp()).collect() };
            let x0 = at(t);
            if let Some((x, residual, well_conditioned)) = newton(&target, &x0, &options.newton) {
                return Some(RootWitness { x, residual, well_conditioned, seed_origin: origin, continuation: Vec::new() });
            }
            if !matches!(origin, SeedOrigin::Tropical { .. }) {
                return None;
            }
            // track from larger t down to the target
            for start in 0..ladder.len() {
                let mut x = at(schedule[start]);
                let mut path = Vec::new();
                let mut ok = true;
                for (s, sys) in schedule[start..].iter().zip(&ladder[start..]) {
                    match newton(sys, &x, &options.newton) {
                        Some((root, _, _)) => {
                            x = root;
                            path.push(*s);
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                if let Some((x, residual, well_conditioned)) = newton(&target, &x, &options.newton) {
                    return Some(RootWitness { x, residual, well_conditioned, seed_origin: origin, continuation: path });
                }
            }
            None
        })
        .collect();

    let mut accepted: Vec<RootWitness> = Vec::new();
    for witness in runs.into_iter().flatten() {
        if witness.residual > options.newton.tol || !witness.x.iter().all(|&v| v > 0.0) {
            continue;
        }
        let log = witness.log_x();
        let separated = accepted.iter().all(|other| {
            let d = other.log_x().iter().zip(&log).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            d > options.separation
        });
        if separated {
            accepted.push(witness);
        }
    }
    Ok(accepted)
}
