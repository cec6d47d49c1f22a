//! The no-signaling box zoo: extremal boxes, the three-parameter noisy
//! family, convex mixtures, and an almost-quantum point.

use serde::{Deserialize, Serialize};

use crate::behavior::{Behavior, Table, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Nonlocal extremal box: `p = 1/2` iff `a ⊕ b = νμ ⊕ tν ⊕ sμ ⊕ l`.
pub fn nonlocal_box(t: u8, s: u8, l: u8) -> Behavior {
    let (t, s, l) = (t as usize & 1, s as usize & 1, l as usize & 1);
    let mut p: Table = Default::default();
    for nu in 0..2 {
        for mu in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    if a ^ b == (nu & mu) ^ (t & nu) ^ (s & mu) ^ l {
                        p[nu][mu][a][b] = 0.5;
                    }
                }
            }
        }
    }
    Behavior::from_table(p, DEFAULT_TOL).expect("extremal nonlocal box is valid")
}

/// Local deterministic box: `a = tν ⊕ s`, `b = lμ ⊕ v`.
pub fn local_box(t: u8, s: u8, l: u8, v: u8) -> Behavior {
    let (t, s, l, v) = (t as usize & 1, s as usize & 1, l as usize & 1, v as usize & 1);
    let mut p: Table = Default::default();
    for nu in 0..2 {
        for mu in 0..2 {
            p[nu][mu][(t & nu) ^ s][(l & mu) ^ v] = 1.0;
        }
    }
    Behavior::from_table(p, DEFAULT_TOL).expect("local deterministic box is valid")
}

pub fn uniform_box() -> Behavior {
    Behavior::from_table([[[[0.25; 2]; 2]; 2]; 2], DEFAULT_TOL).expect("uniform box is valid")
}

/// The PR box, `nonlocal_box(0, 0, 0)`.
pub fn pr_box() -> Behavior {
    nonlocal_box(0, 0, 0)
}

/// All 24 vertices of the no-signaling polytope: the 8 nonlocal boxes
/// followed by the 16 local deterministic ones.
pub fn extremal_boxes() -> Vec<Behavior> {
    let mut out = Vec::with_capacity(24);
    for i in 0..8u8 {
        out.push(nonlocal_box(i >> 2 & 1, i >> 1 & 1, i & 1));
    }
    for i in 0..16u8 {
        out.push(local_box(i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1));
    }
    out
}

/// Weights of the noisy family `αPR + βPR′ + τL + (1−α−β−τ)I/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
}

/// Slack allowed on the simplex constraints of a [`FamilyPoint`].
pub const SIMPLEX_TOL: f64 = 1e-12;

impl FamilyPoint {
    pub fn new(alpha: f64, beta: f64, tau: f64) -> Result<Self> {
        let ok = [alpha, beta, tau]
            .iter()
            .all(|x| x.is_finite() && *x >= -SIMPLEX_TOL)
            && alpha + beta + tau <= 1.0 + SIMPLEX_TOL;
        if !ok {
            return Err(Error::InvalidFamilyPoint { alpha, beta, tau });
        }
        Ok(FamilyPoint {
            alpha: alpha.max(0.0),
            beta: beta.max(0.0),
            tau: tau.max(0.0),
        })
    }

    pub fn noise(&self) -> f64 {
        1.0 - self.alpha - self.beta - self.tau
    }
}

/// Member of the noisy family, built as an entrywise mixture of its components.
pub fn noisy_family(point: FamilyPoint) -> Result<Behavior> {
    let point = FamilyPoint::new(point.alpha, point.beta, point.tau)?;
    let pr = nonlocal_box(0, 0, 0);
    let pr_prime = nonlocal_box(0, 1, 0);
    let l = local_box(0, 0, 0, 0);
    let noise = point.noise().max(0.0);
    let mut p: Table = Default::default();
    for nu in 0..2 {
        for mu in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    p[nu][mu][a][b] = point.alpha * pr.prob(nu, mu, a, b)
                        + point.beta * pr_prime.prob(nu, mu, a, b)
                        + point.tau * l.prob(nu, mu, a, b)
                        + noise * 0.25;
                }
            }
        }
    }
    Behavior::from_table(p, DEFAULT_TOL)
}

/// Entrywise convex combination.
pub fn mix(behaviors: &[Behavior], weights: &[f64]) -> Result<Behavior> {
    if behaviors.is_empty() || behaviors.len() != weights.len() {
        return Err(Error::BadWeights(format!(
            "{} behaviors but {} weights",
            behaviors.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::BadWeights(format!("weight {w} is negative")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::BadWeights(format!("weights sum to {total}")));
    }
    let mut p: Table = Default::default();
    for (b, &w) in behaviors.iter().zip(weights) {
        for nu in 0..2 {
            for mu in 0..2 {
                for a in 0..2 {
                    for bb in 0..2 {
                        p[nu][mu][a][bb] += w * b.prob(nu, mu, a, bb);
                    }
                }
            }
        }
    }
    let tol = behaviors.iter().map(Behavior::tol).fold(DEFAULT_TOL, f64::max);
    Behavior::from_table(p, tol)
}

/// Which settings pair receives √2/9 and which 37/700.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JointOrder {
    /// `(A₀B₀, A₁B₀, A₀B₁, A₁B₁)`: √2/9 at `(ν,μ) = (1,0)`.
    #[default]
    AsListed,
    /// `(1,0)` and `(0,1)` exchanged.
    Swapped,
}

/// Probabilities of outcome 1 for `A₀, A₁, B₀, B₁` and of joint outcome
/// `(1,1)` for `A₀B₀, A₁B₀, A₀B₁, A₁B₁`.
pub fn aqc_probabilities() -> [f64; 8] {
    [
        9.0 / 20.0,
        2.0 / 11.0,
        2.0 / 11.0,
        9.0 / 20.0,
        22.0 / 125.0,
        std::f64::consts::SQRT_2 / 9.0,
        37.0 / 700.0,
        22.0 / 125.0,
    ]
}

/// Almost-quantum behavior that satisfies the level-1 arcsine condition.
pub fn aqc_behavior() -> Behavior {
    aqc_behavior_with(JointOrder::AsListed)
}

pub fn aqc_behavior_with(order: JointOrder) -> Behavior {
    let q = aqc_probabilities();
    let pa = [q[0], q[1]];
    let pb = [q[2], q[3]];
    let mut joint = [[q[4], q[6]], [q[5], q[7]]];
    if order == JointOrder::Swapped {
        let t = joint[0][1];
        joint[0][1] = joint[1][0];
        joint[1][0] = t;
    }
    let alice = pa.map(|p| 1.0 - 2.0 * p);
    let bob = pb.map(|p| 1.0 - 2.0 * p);
    let mut corr = [[0.0; 2]; 2];
    for nu in 0..2 {
        for mu in 0..2 {
            corr[nu][mu] = 1.0 - 2.0 * pa[nu] - 2.0 * pb[mu] + 4.0 * joint[nu][mu];
        }
    }
    Behavior::from_expectations(alice, bob, corr, DEFAULT_TOL).expect("AQC point is valid")
}

/// Named members of the zoo, as accepted by the command line.
pub fn named_box(name: &str) -> Result<Behavior> {
    let bits = |s: &str, n: usize| -> Option<Vec<u8>> {
        (s.len() == n && s.bytes().all(|c| c == b'0' || c == b'1'))
            .then(|| s.bytes().map(|c| c - b'0').collect())
    };
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "pr" => return Ok(pr_box()),
        "pr-prime" | "pr'" => return Ok(nonlocal_box(0, 1, 0)),
        "anti-pr" => return Ok(nonlocal_box(0, 0, 1)),
        "uniform" => return Ok(uniform_box()),
        "aqc" => return Ok(aqc_behavior()),
        _ => {}
    }
    if let Some(rest) = lower.strip_prefix("nl") {
        if let Some(b) = bits(rest, 3) {
            return Ok(nonlocal_box(b[0], b[1], b[2]));
        }
    }
    if let Some(rest) = lower.strip_prefix("local") {
        if let Some(b) = bits(rest, 4) {
            return Ok(local_box(b[0], b[1], b[2], b[3]));
        }
    }
    Err(Error::InvalidConfig(format!(
        "unknown box \"{name}\" (expected pr, pr-prime, anti-pr, uniform, aqc, nlTSL or localTSLV)"
    )))
}
