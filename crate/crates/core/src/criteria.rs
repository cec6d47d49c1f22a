//! Closed-form boundaries for the noisy family, behavior-level comparison
//! criteria, and the grid/bisection machinery that turns verdicts into
//! plot-ready datasets.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::behavior::{Behavior, Party, DEFAULT_TOL};
use crate::boxes::{noisy_family, FamilyPoint, SIMPLEX_TOL};
use crate::error::{Error, Result};
use crate::ndwu;

/// Guard above which a clamped arcsine argument is treated as out of range.
const ASIN_GUARD: f64 = 1e-9;

fn root(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

/// Signed margin of the closed-form family boundary (left side minus right
/// side), or `None` when the point is declared outside before evaluation.
pub fn ndwu_family_margin(point: FamilyPoint) -> Option<f64> {
    let FamilyPoint { alpha, beta, tau } = point;
    if tau >= 1.0 {
        return (alpha == 0.0 && beta == 0.0).then_some(0.0);
    }
    let sum = alpha + beta;
    let diff = (alpha - beta).abs();
    let x = sum / (1.0 - tau);
    let y = (sum + 2.0 * tau) / (1.0 + tau);
    if x > 1.0 + SIMPLEX_TOL || y > 1.0 + SIMPLEX_TOL {
        return None;
    }
    let z = (diff + 2.0 * tau) / (1.0 + tau);
    let w = diff / (1.0 - tau);
    let lhs =
        root(1.0 - x * x) * root(1.0 - w * w) - (alpha * alpha - beta * beta).abs() / (1.0 - tau).powi(2);
    let rhs = y * z - root(1.0 - y * y) * root(1.0 - z * z);
    Some(lhs - rhs)
}

pub fn ndwu_family_boundary(point: FamilyPoint) -> bool {
    ndwu_family_margin(point).is_some_and(|m| m >= -DEFAULT_TOL)
}

/// `α² + β² ≤ 1/2`.
pub fn boundary1(alpha: f64, beta: f64) -> bool {
    alpha * alpha + beta * beta <= 0.5 + DEFAULT_TOL
}

/// `(α+2τ)²/(1+τ)² + α²/(1−τ)² ≤ 1`.
pub fn boundary2(alpha: f64, tau: f64) -> bool {
    if tau >= 1.0 {
        return alpha == 0.0;
    }
    (alpha + 2.0 * tau).powi(2) / (1.0 + tau).powi(2) + alpha * alpha / (1.0 - tau).powi(2)
        <= 1.0 + DEFAULT_TOL
}

/// Correlators normalized by the marginals, `None` if a marginal is ±1.
fn normalized_correlators(behavior: &Behavior) -> Option<[[f64; 2]; 2]> {
    let a = [0, 1].map(|s| behavior.marginal_expectation(Party::Alice, s));
    let b = [0, 1].map(|s| behavior.marginal_expectation(Party::Bob, s));
    if a.iter().chain(&b).any(|m| m.abs() >= 1.0 - 1e-12) {
        return None;
    }
    let mut d = [[0.0; 2]; 2];
    for nu in 0..2 {
        for mu in 0..2 {
            let cov = behavior.correlator(nu, mu) - a[nu] * b[mu];
            d[nu][mu] = cov / ((1.0 - a[nu] * a[nu]) * (1.0 - b[mu] * b[mu])).sqrt();
        }
    }
    Some(d)
}

/// Largest `|Σ asin D − 2 asin D_flagged|` over the four sign placements.
pub fn npa_tlm_value(behavior: &Behavior) -> Option<f64> {
    let d = normalized_correlators(behavior)?;
    let asin = d.map(|row| row.map(|x| x.clamp(-1.0, 1.0).asin()));
    let total: f64 = asin.iter().flatten().sum();
    let mut worst = 0.0_f64;
    for nu in 0..2 {
        for mu in 0..2 {
            worst = worst.max((total - 2.0 * asin[nu][mu]).abs());
        }
    }
    Some(worst)
}

/// Analytic level-1 arcsine condition on marginal-normalized correlators.
/// Behaviors with a deterministic marginal are accepted.
pub fn npa_tlm(behavior: &Behavior) -> bool {
    npa_tlm_value(behavior).is_none_or(|v| v <= PI + DEFAULT_TOL)
}

/// Which algebraic form of the β = 0 arcsine boundary to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NpaFamilyForm {
    /// Both arguments over `1 − τ²`, second term `+asin((α − τ + τ²)/(1 − τ²))`.
    #[default]
    Derived,
    /// `|3 asin(α+τ−τ²) − asin((α−τ−τ²)/(1−τ²))| ≤ π`, the commonly quoted
    /// typeset form evaluated at β = 0.
    Printed,
}

pub fn npa_family_boundary2(alpha: f64, tau: f64, form: NpaFamilyForm) -> bool {
    let denom = 1.0 - tau * tau;
    if denom <= 0.0 {
        return alpha == 0.0;
    }
    let (first, second, sign) = match form {
        NpaFamilyForm::Derived => (
            (alpha + tau - tau * tau) / denom,
            (alpha - tau + tau * tau) / denom,
            1.0,
        ),
        NpaFamilyForm::Printed => (alpha + tau - tau * tau, (alpha - tau - tau * tau) / denom, -1.0),
    };
    if first.abs() > 1.0 + ASIN_GUARD || second.abs() > 1.0 + ASIN_GUARD {
        return false;
    }
    let v = 3.0 * first.clamp(-1.0, 1.0).asin() + sign * second.clamp(-1.0, 1.0).asin();
    v.abs() <= PI + DEFAULT_TOL
}

/// Which form of the β = 0 information-causality boundary to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IcFamilyForm {
    /// `(α+τ)² + α² ≤ 1`, the correlator bound evaluated on the family.
    #[default]
    Corrected,
    /// `(α+τ)² + τ² ≤ 1` as commonly quoted.
    Printed,
}

pub fn ic_family_boundary(alpha: f64, tau: f64, form: IcFamilyForm) -> bool {
    let second = match form {
        IcFamilyForm::Corrected => alpha,
        IcFamilyForm::Printed => tau,
    };
    (alpha + tau).powi(2) + second * second <= 1.0 + DEFAULT_TOL
}

/// Largest `((C_x + C_y)/2)² + ((C_z − C_w)/2)²` over the four ways of
/// pairing the correlators for the two-bit random-access protocol.
pub fn ic_correlation_value(behavior: &Behavior) -> f64 {
    let c = |n, m| behavior.correlator(n, m);
    let half_sq = |x: f64| (x / 2.0).powi(2);
    let mut worst = 0.0_f64;
    for k in 0..2 {
        let bob_sum = half_sq(c(0, k) + c(1, k)) + half_sq(c(0, 1 - k) - c(1, 1 - k));
        let alice_sum = half_sq(c(k, 0) + c(k, 1)) + half_sq(c(1 - k, 0) - c(1 - k, 1));
        worst = worst.max(bob_sum).max(alice_sum);
    }
    worst
}

/// Necessary condition from information causality on the correlators.
pub fn ic_correlation_bound(behavior: &Behavior) -> bool {
    ic_correlation_value(behavior) <= 1.0 + DEFAULT_TOL
}

/// `β + √2·α ≤ 1`.
pub fn mc_boundary_line(alpha: f64, beta: f64) -> bool {
    beta + SQRT_2 * alpha <= 1.0 + DEFAULT_TOL
}

/// `max{4α+2τ, 4β+2τ} ≤ 2√2`.
pub fn tsirelson_screen(point: FamilyPoint) -> bool {
    4.0 * point.alpha.max(point.beta) + 2.0 * point.tau <= 2.0 * SQRT_2 + DEFAULT_TOL
}

/// A verdict on a point of the noisy family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Closed-form NDWU boundary.
    Ndwu,
    /// NDWU criterion evaluated on the reconstructed behavior.
    NdwuGeneric,
    /// Arcsine condition on the reconstructed behavior.
    NpaTlm,
    /// Closed-form arcsine boundary on the β = 0 slice.
    NpaFamily(NpaFamilyForm),
    /// Closed-form IC boundary on the β = 0 slice.
    Ic(IcFamilyForm),
    /// IC correlator bound on the reconstructed behavior.
    IcCorrelator,
    Mc,
    Boundary1,
    Boundary2,
    Tsirelson,
}

impl Criterion {
    pub const ALL: [Criterion; 12] = [
        Criterion::Ndwu,
        Criterion::NdwuGeneric,
        Criterion::NpaTlm,
        Criterion::NpaFamily(NpaFamilyForm::Derived),
        Criterion::NpaFamily(NpaFamilyForm::Printed),
        Criterion::Ic(IcFamilyForm::Corrected),
        Criterion::Ic(IcFamilyForm::Printed),
        Criterion::IcCorrelator,
        Criterion::Mc,
        Criterion::Boundary1,
        Criterion::Boundary2,
        Criterion::Tsirelson,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Ndwu => "ndwu",
            Criterion::NdwuGeneric => "ndwu-generic",
            Criterion::NpaTlm => "npa",
            Criterion::NpaFamily(NpaFamilyForm::Derived) => "npa-family",
            Criterion::NpaFamily(NpaFamilyForm::Printed) => "npa-family-printed",
            Criterion::Ic(IcFamilyForm::Corrected) => "ic",
            Criterion::Ic(IcFamilyForm::Printed) => "ic-printed",
            Criterion::IcCorrelator => "ic-correlator",
            Criterion::Mc => "mc",
            Criterion::Boundary1 => "boundary1",
            Criterion::Boundary2 => "boundary2",
            Criterion::Tsirelson => "tsirelson",
        }
    }

    /// Slice formulas ignore the coordinate they are not defined on:
    /// β for the (α, τ) formulas and τ for the (α, β) ones.
    pub fn verdict(&self, point: FamilyPoint) -> bool {
        let FamilyPoint { alpha, beta, tau } = point;
        let on_behavior = |f: fn(&Behavior) -> bool| noisy_family(point).map(|b| f(&b)).unwrap_or(false);
        match self {
            Criterion::Ndwu => ndwu_family_boundary(point),
            Criterion::NdwuGeneric => on_behavior(|b| ndwu::criterion(b).overall),
            Criterion::NpaTlm => on_behavior(npa_tlm),
            Criterion::NpaFamily(form) => npa_family_boundary2(alpha, tau, *form),
            Criterion::Ic(form) => ic_family_boundary(alpha, tau, *form),
            Criterion::IcCorrelator => on_behavior(ic_correlation_bound),
            Criterion::Mc => mc_boundary_line(alpha, beta),
            Criterion::Boundary1 => boundary1(alpha, beta),
            Criterion::Boundary2 => boundary2(alpha, tau),
            Criterion::Tsirelson => tsirelson_screen(point),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown criterion \"{s}\"")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Fixed(f64),
    Range { lo: f64, hi: f64, n: usize },
}

impl Axis {
    pub fn unit(n: usize) -> Self {
        Axis::Range { lo: 0.0, hi: 1.0, n }
    }

    fn values(&self, name: &str) -> Result<Vec<f64>> {
        match *self {
            Axis::Fixed(v) if v.is_finite() => Ok(vec![v]),
            Axis::Range { lo, hi, n } if n >= 2 && lo.is_finite() && hi.is_finite() && lo < hi => Ok((0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect()),
            _ => Err(Error::InvalidGrid(format!("{name} axis {self:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub alpha: Axis,
    pub beta: Axis,
    pub tau: Axis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRow {
    pub point: FamilyPoint,
    pub verdicts: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDataset {
    pub criteria: Vec<Criterion>,
    pub rows: Vec<DatasetRow>,
}

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl BoundaryDataset {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "alpha,beta,tau")?;
        for c in &self.criteria {
            write!(out, ",{c}")?;
        }
        writeln!(out)?;
        for row in &self.rows {
            let p = row.point;
            write!(out, "{},{},{}", fmt_f64(p.alpha), fmt_f64(p.beta), fmt_f64(p.tau))?;
            for v in &row.verdicts {
                write!(out, ",{}", u8::from(*v))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn column(&self, criterion: Criterion) -> Option<usize> {
        self.criteria.iter().position(|c| *c == criterion)
    }
}

/// Evaluates every criterion at every grid point inside the family simplex.
/// Rows are ordered α-major, then β, then τ.
pub fn sweep_grid(criteria: &[Criterion], grid: &GridSpec) -> Result<BoundaryDataset> {
    if criteria.is_empty() {
        return Err(Error::InvalidGrid("no criteria requested".into()));
    }
    let alphas = grid.alpha.values("alpha")?;
    let betas = grid.beta.values("beta")?;
    let taus = grid.tau.values("tau")?;
    let rows: Vec<DatasetRow> = alphas
        .par_iter()
        .flat_map_iter(|&alpha| {
            let mut rows = Vec::new();
            for &beta in &betas {
                for &tau in &taus {
                    if let Ok(point) = FamilyPoint::new(alpha, beta, tau) {
                        let verdicts = criteria.iter().map(|c| c.verdict(point)).collect();
                        rows.push(DatasetRow { point, verdicts });
                    }
                }
            }
            rows
        })
        .collect();
    Ok(BoundaryDataset {
        criteria: criteria.to_vec(),
        rows,
    })
}

/// Largest `t` keeping `origin + t·direction` inside the family simplex.
pub fn ray_extent(origin: [f64; 3], direction: [f64; 3]) -> Result<f64> {
    if FamilyPoint::new(origin[0], origin[1], origin[2]).is_err() {
        return Err(Error::InvalidGrid(format!(
            "ray origin {origin:?} outside the simplex"
        )));
    }
    let mut t_max = f64::INFINITY;
    for k in 0..3 {
        if direction[k] < 0.0 {
            t_max = t_max.min(-origin[k] / direction[k]);
        }
    }
    let slope: f64 = direction.iter().sum();
    if slope > 0.0 {
        t_max = t_max.min((1.0 - origin.iter().sum::<f64>()) / slope);
    }
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "degenerate ray direction {direction:?}"
        )));
    }
    Ok(t_max.max(0.0))
}

/// Bisects the verdict change of `verdict` along a ray through the simplex.
/// Returns the ray parameter of the crossing, bracketed to width `tol`.
pub fn boundary_bisect<F>(verdict: F, origin: [f64; 3], direction: [f64; 3], tol: f64) -> Result<f64>
where
    F: Fn(FamilyPoint) -> bool,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!("bisection tolerance {tol}")));
    }
    let t_max = ray_extent(origin, direction)?;
    let at = |t: f64| {
        let p = [0, 1, 2].map(|k| origin[k] + t * direction[k]);
        FamilyPoint::new(p[0], p[1], p[2]).map(&verdict)
    };
    let (mut lo, mut hi) = (0.0, t_max);
    let v_lo = at(lo)?;
    if at(hi)? == v_lo {
        return Err(Error::NoSignChange);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if at(mid)? == v_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Writes bisection results as `ray_id,t_critical`.
pub fn write_bisection_csv<W: Write>(results: &[(usize, f64)], mut out: W) -> Result<()> {
    writeln!(out, "ray_id,t_critical")?;
    for (id, t) in results {
        writeln!(out, "{id},{}", fmt_f64(*t))?;
    }
    Ok(())
}
