//! Two-party, two-setting, two-outcome no-signaling behaviors.
//!
//! A [`Behavior`] stores the table `p(ab|νμ)` indexed `[ν][μ][a][b]`, where
//! `ν` and `a` are Alice's setting and outcome and `μ` and `b` are Bob's.
//! Construction always validates positivity, normalization and the
//! no-signaling conditions, so every other routine may assume them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Validation tolerance used when the caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Probability table indexed `[ν][μ][a][b]`.
pub type Table = [[[[f64; 2]; 2]; 2]; 2];

const SETTING_KEYS: [(usize, usize, &str); 4] = [(0, 0, "0,0"), (0, 1, "0,1"), (1, 0, "1,0"), (1, 1, "1,1")];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

#[inline]
fn sign(bit: usize) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A validated no-signaling behavior.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    p: Table,
    tol: f64,
}

/// The local state of one party after the other party measured `setting`
/// and obtained `outcome`. Only states with nonzero weight are built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalState {
    /// Whose state this is.
    pub side: Party,
    /// Setting of the other party's conditioning measurement.
    pub setting: u8,
    /// Outcome of the conditioning measurement.
    pub outcome: u8,
    /// Probability of the conditioning outcome.
    pub weight: f64,
}

impl Behavior {
    /// Validates 16 numbers in `ν, μ, a, b` order (index `8ν + 4μ + 2a + b`).
    pub fn validate(raw: &[f64], tol: f64) -> Result<Self> {
        if raw.len() != 16 {
            return Err(Error::WrongLength {
                expected: 16,
                found: raw.len(),
            });
        }
        let mut p: Table = Default::default();
        for (i, &v) in raw.iter().enumerate() {
            p[i >> 3][(i >> 2) & 1][(i >> 1) & 1][i & 1] = v;
        }
        Self::from_table(p, tol)
    }

    pub fn from_table(p: Table, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        for (i, v) in flatten(&p).into_iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
            if v < -tol {
                return Err(Error::NegativeProbability { index: i, value: v });
            }
            if v > 1.0 + tol {
                return Err(Error::ProbabilityAboveOne { index: i, value: v });
            }
        }
        for nu in 0..2 {
            for mu in 0..2 {
                let s: f64 = p[nu][mu].iter().flatten().sum();
                let residual = s - 1.0;
                if residual.abs() > tol {
                    return Err(Error::NotNormalized {
                        nu: nu as u8,
                        mu: mu as u8,
                        residual,
                    });
                }
            }
        }
        for x in 0..2 {
            for o in 0..2 {
                let alice = |mu: usize| p[x][mu][o][0] + p[x][mu][o][1];
                let residual = alice(0) - alice(1);
                if residual.abs() > tol {
                    return Err(Error::SignalingDetected {
                        party: Party::Alice,
                        outcome: o as u8,
                        setting: x as u8,
                        residual,
                    });
                }
            }
        }
        for y in 0..2 {
            for o in 0..2 {
                let bob = |nu: usize| p[nu][y][0][o] + p[nu][y][1][o];
                let residual = bob(0) - bob(1);
                if residual.abs() > tol {
                    return Err(Error::SignalingDetected {
                        party: Party::Bob,
                        outcome: o as u8,
                        setting: y as u8,
                        residual,
                    });
                }
            }
        }
        Ok(Behavior { p, tol })
    }

    /// Builds the table `p(ab|νμ) = [1 + (−1)^a⟨A_ν⟩ + (−1)^b⟨B_μ⟩ + (−1)^{a+b}C_{νμ}]/4`.
    pub fn from_expectations(alice: [f64; 2], bob: [f64; 2], corr: [[f64; 2]; 2], tol: f64) -> Result<Self> {
        let mut p: Table = Default::default();
        for nu in 0..2 {
            for mu in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        p[nu][mu][a][b] =
                            (1.0 + sign(a) * alice[nu] + sign(b) * bob[mu] + sign(a + b) * corr[nu][mu])
                                / 4.0;
                    }
                }
            }
        }
        Self::from_table(p, tol)
    }

    pub fn prob(&self, nu: usize, mu: usize, a: usize, b: usize) -> f64 {
        self.p[nu][mu][a][b]
    }

    pub fn table(&self) -> &Table {
        &self.p
    }

    pub fn to_raw(&self) -> [f64; 16] {
        flatten(&self.p)
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Marginal probability of `outcome` for `party` measuring `setting`,
    /// averaged over the two settings of the other party.
    pub fn marginal_prob(&self, party: Party, setting: usize, outcome: usize) -> f64 {
        let mut s = 0.0;
        for other in 0..2 {
            for o in 0..2 {
                s += match party {
                    Party::Alice => self.p[setting][other][outcome][o],
                    Party::Bob => self.p[other][setting][o][outcome],
                };
            }
        }
        s / 2.0
    }

    /// `⟨A_ν⟩` or `⟨B_μ⟩`.
    pub fn marginal_expectation(&self, party: Party, setting: usize) -> f64 {
        self.marginal_prob(party, setting, 0) - self.marginal_prob(party, setting, 1)
    }

    /// `C_{νμ} = Σ_{ab} (−1)^{a+b} p(ab|νμ)`.
    pub fn correlator(&self, nu: usize, mu: usize) -> f64 {
        let t = &self.p[nu][mu];
        t[0][0] - t[0][1] - t[1][0] + t[1][1]
    }

    /// Expectation of `measured`'s `setting` in the state prepared when the
    /// other party measured `cond_setting` and got `cond_outcome`.
    pub fn conditional_expectation(
        &self,
        measured: Party,
        setting: usize,
        cond_setting: usize,
        cond_outcome: usize,
    ) -> Result<f64> {
        let (p0, p1) = match measured {
            Party::Alice => (
                self.p[setting][cond_setting][0][cond_outcome],
                self.p[setting][cond_setting][1][cond_outcome],
            ),
            Party::Bob => (
                self.p[cond_setting][setting][cond_outcome][0],
                self.p[cond_setting][setting][cond_outcome][1],
            ),
        };
        let weight = self.marginal_prob(measured.other(), cond_setting, cond_outcome);
        let slice = p0 + p1;
        if weight <= self.tol || slice <= 0.0 {
            return Err(Error::ZeroWeightCondition {
                setting: cond_setting as u8,
                outcome: cond_outcome as u8,
                weight,
            });
        }
        Ok(((p0 - p1) / slice).clamp(-1.0, 1.0))
    }

    /// The CHSH functional `Σ (−1)^{a+b+νμ} p(ab|νμ)`.
    pub fn chsh(&self) -> f64 {
        self.chsh_variant(0, 0, 0)
    }

    /// CHSH functional after relabeling: coefficient `(−1)^{νμ ⊕ xν ⊕ yμ ⊕ z}`.
    pub fn chsh_variant(&self, x: usize, y: usize, z: usize) -> f64 {
        let mut s = 0.0;
        for nu in 0..2 {
            for mu in 0..2 {
                s += sign(nu * mu + x * nu + y * mu + z) * self.correlator(nu, mu);
            }
        }
        s
    }

    /// Largest CHSH value over the eight relabeled functionals.
    pub fn max_chsh_over_relabelings(&self) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    best = best.max(self.chsh_variant(x, y, z));
                }
            }
        }
        best
    }

    /// States of `side` prepared by the other party's four measurement
    /// outcomes. Zero-weight branches are omitted.
    pub fn conditional_states(&self, side: Party) -> Vec<ConditionalState> {
        let mut out = Vec::with_capacity(4);
        for setting in 0..2 {
            for outcome in 0..2 {
                let weight = self.marginal_prob(side.other(), setting, outcome);
                if weight > self.tol {
                    out.push(ConditionalState {
                        side,
                        setting: setting as u8,
                        outcome: outcome as u8,
                        weight,
                    });
                }
            }
        }
        out
    }

    /// Expectations of `state.side`'s two measurements in `state`.
    pub fn local_expectations(&self, state: &ConditionalState) -> Result<[f64; 2]> {
        let (s, o) = (state.setting as usize, state.outcome as usize);
        Ok([
            self.conditional_expectation(state.side, 0, s, o)?,
            self.conditional_expectation(state.side, 1, s, o)?,
        ])
    }

    pub fn from_json_str(text: &str, default_tol: f64) -> Result<Self> {
        let doc: BehaviorDoc = serde_json::from_str(text)?;
        let mut p: Table = Default::default();
        for (nu, mu, key) in SETTING_KEYS {
            let block = doc
                .p
                .get(key)
                .ok_or_else(|| Error::Malformed(format!("missing settings key \"{key}\"")))?;
            p[nu][mu] = *block;
        }
        if let Some(extra) = doc
            .p
            .keys()
            .find(|k| !SETTING_KEYS.iter().any(|s| s.2 == k.as_str()))
        {
            return Err(Error::Malformed(format!("unknown settings key \"{extra}\"")));
        }
        Self::from_table(p, doc.tol.unwrap_or(default_tol))
    }

    pub fn to_json_string(&self) -> String {
        let mut p = BTreeMap::new();
        for (nu, mu, key) in SETTING_KEYS {
            p.insert(key.to_string(), self.p[nu][mu]);
        }
        let doc = BehaviorDoc {
            p,
            tol: Some(self.tol),
        };
        serde_json::to_string_pretty(&doc).expect("behavior document serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BehaviorDoc {
    p: BTreeMap<String, [[f64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
}

fn flatten(p: &Table) -> [f64; 16] {
    let mut out = [0.0; 16];
    for (i, v) in out.iter_mut().enumerate() {
        *v = p[i >> 3][(i >> 2) & 1][(i >> 1) & 1][i & 1];
    }
    out
}
