//! JSON report documents. Field order follows struct declaration order, so
//! the key ordering of every document is fixed.

use caqwbh_core::stats::bands::{CollisionBands, DiffusionBands, UniformityBands};
use caqwbh_core::stats::{self, BirthdayBound, SensitivityReport, TrialSet};
use caqwbh_core::HashParams;
use serde::{Deserialize, Serialize};

use crate::config::{fingerprint, instance_name};
use crate::keyfile::{decode_amplitudes, encode_amplitudes};
use crate::{fmt_f64, parse_f64, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub instance: String,
    pub q: u32,
    pub k: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub digest_bits: usize,
    pub theta1: String,
    pub theta2: String,
    /// Present only for a non-default initial state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<[String; 2]>>,
    pub fingerprint: String,
}

impl ParamsDoc {
    pub fn new(params: &HashParams) -> Self {
        ParamsDoc {
            instance: instance_name(params).to_string(),
            q: params.q(),
            k: params.k(),
            n: params.positions(),
            digest_bits: params.digest_bits(),
            theta1: fmt_f64(params.theta1()),
            theta2: fmt_f64(params.theta2()),
            alpha: (!params.alpha_is_unit()).then(|| encode_amplitudes(params.alpha())),
            fingerprint: fingerprint(params),
        }
    }

    /// Rebuilds the parameters this document describes.
    pub fn to_params(&self) -> Result<HashParams> {
        let params = HashParams::new(self.q, self.k, parse_f64(&self.theta1)?, parse_f64(&self.theta2)?)?;
        match &self.alpha {
            Some(pairs) => Ok(params.with_alpha(decode_amplitudes(pairs)?)?),
            None => Ok(params),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AssertDoc {
    pub passed: bool,
    pub violations: Vec<String>,
}

impl AssertDoc {
    pub fn new(violations: Vec<String>) -> Self {
        AssertDoc { passed: violations.is_empty(), violations }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunDoc {
    pub seed: u64,
    #[serde(rename = "T")]
    pub trials: usize,
    pub msg_len: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionDoc {
    pub condition: &'static str,
    pub digest: String,
    pub changed_bits: Option<u32>,
    pub changed_percent: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SensitivityDoc {
    pub test: &'static str,
    pub params: ParamsDoc,
    pub seed: u64,
    pub msg_len: usize,
    pub conditions: Vec<ConditionDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message_hex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assert: Option<AssertDoc>,
}

/// Floor applied to each mutated digest's changed-bit fraction under `--assert`.
pub const SENSITIVITY_FLOOR: f64 = 0.25;

impl SensitivityDoc {
    pub fn new(
        params: &HashParams,
        seed: u64,
        message: &[bool],
        report: &SensitivityReport,
        verbose: bool,
    ) -> Self {
        let n_bits = params.digest_bits() as f64;
        let names = ["original", "flip", "delete", "insert"];
        let conditions = names
            .iter()
            .enumerate()
            .map(|(i, &condition)| {
                let changed = i.checked_sub(1).map(|j| report.distances[j]);
                ConditionDoc {
                    condition,
                    digest: report.digests[i].to_hex(),
                    changed_bits: changed,
                    changed_percent: changed.map(|b| b as f64 / n_bits * 100.0),
                }
            })
            .collect();
        SensitivityDoc {
            test: "sensitivity",
            params: ParamsDoc::new(params),
            seed,
            msg_len: message.len(),
            conditions,
            message_hex: verbose.then(|| crate::hex_encode(&caqwbh_core::bits::pack_msb(message))),
            assert: None,
        }
    }

    pub fn check(&mut self) -> &AssertDoc {
        let floor = SENSITIVITY_FLOOR * self.params.digest_bits as f64;
        let violations = self
            .conditions
            .iter()
            .filter_map(|c| match c.changed_bits {
                Some(b) if (b as f64) < floor => {
                    Some(format!("{}: {b} changed bits, below {floor}", c.condition))
                }
                _ => None,
            })
            .collect();
        self.assert.insert(AssertDoc::new(violations))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffusionDoc {
    pub test: &'static str,
    pub params: ParamsDoc,
    #[serde(flatten)]
    pub run: RunDoc,
    pub n_bits: usize,
    pub b_min: u32,
    pub b_max: u32,
    pub b_mean: f64,
    pub p_mean: f64,
    pub delta_b: f64,
    pub delta_p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub changed_bits: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assert: Option<AssertDoc>,
}

impl DiffusionDoc {
    pub fn new(params: &HashParams, run: RunDoc, set: &TrialSet, verbose: bool, assert: bool) -> Result<Self> {
        let r = set.diffusion()?;
        let assert = assert.then(|| AssertDoc::new(DiffusionBands::for_run(r.n_bits, r.trials).violations(&r)));
        Ok(DiffusionDoc {
            test: "diffusion",
            params: ParamsDoc::new(params),
            run,
            n_bits: r.n_bits,
            b_min: r.b_min,
            b_max: r.b_max,
            b_mean: r.b_mean,
            p_mean: r.p_mean,
            delta_b: r.delta_b,
            delta_p: r.delta_p,
            changed_bits: verbose.then_some(r.counts),
            assert,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UniformityDoc {
    pub test: &'static str,
    pub params: ParamsDoc,
    #[serde(flatten)]
    pub run: RunDoc,
    pub n_bits: usize,
    pub mean_count: f64,
    pub min_count: u64,
    pub max_count: u64,
    pub per_location: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assert: Option<AssertDoc>,
}

impl UniformityDoc {
    pub fn new(params: &HashParams, run: RunDoc, set: &TrialSet, assert: bool) -> Result<Self> {
        let r = set.uniformity()?;
        let n_bits = r.per_location.len();
        let assert = assert.then(|| AssertDoc::new(UniformityBands::for_run(n_bits, r.trials).violations(&r)));
        Ok(UniformityDoc {
            test: "uniformity",
            params: ParamsDoc::new(params),
            run,
            n_bits,
            mean_count: r.mean_count,
            min_count: r.per_location.iter().copied().min().unwrap_or(0),
            max_count: r.per_location.iter().copied().max().unwrap_or(0),
            per_location: r.per_location,
            assert,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaRow {
    pub omega: usize,
    pub observed: u64,
    pub theory: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BirthdayDoc {
    pub n_bits: u32,
    pub exponent: u32,
    pub approx: f64,
    pub exact: String,
    pub display: String,
}

impl From<BirthdayBound> for BirthdayDoc {
    fn from(b: BirthdayBound) -> Self {
        BirthdayDoc {
            display: b.to_string(),
            n_bits: b.n_bits,
            exponent: b.exponent,
            approx: b.approx,
            exact: b.exact,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CollisionDoc {
    pub test: &'static str,
    pub params: ParamsDoc,
    #[serde(flatten)]
    pub run: RunDoc,
    pub n_bytes: usize,
    pub rows: Vec<OmegaRow>,
    pub birthday: BirthdayDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omegas: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assert: Option<AssertDoc>,
}

impl CollisionDoc {
    pub fn new(params: &HashParams, run: RunDoc, set: &TrialSet, verbose: bool, assert: bool) -> Result<Self> {
        let r = set.collision()?;
        let assert = assert.then(|| AssertDoc::new(CollisionBands::for_run(r.n_bytes, r.trials).violations(&r)));
        let omegas = if verbose {
            Some(
                set.outcomes()
                    .iter()
                    .map(|o| stats::omega(&o.original, &o.mutated))
                    .collect::<caqwbh_core::Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        let rows = r
            .counts
            .iter()
            .zip(&r.theory)
            .enumerate()
            .map(|(omega, (&observed, &theory))| OmegaRow { omega, observed, theory })
            .collect();
        Ok(CollisionDoc {
            test: "collision",
            params: ParamsDoc::new(params),
            run,
            n_bytes: r.n_bytes,
            rows,
            birthday: stats::birthday_bound(params.digest_bits() as u32)?.into(),
            omegas,
            assert,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BirthdayReportDoc {
    pub test: &'static str,
    pub params: ParamsDoc,
    pub birthday: BirthdayDoc,
}

impl BirthdayReportDoc {
    pub fn new(params: &HashParams) -> Result<Self> {
        Ok(BirthdayReportDoc {
            test: "birthday",
            params: ParamsDoc::new(params),
            birthday: stats::birthday_bound(params.digest_bits() as u32)?.into(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HashDoc {
    pub params: ParamsDoc,
    pub message_bits: usize,
    pub digest: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrngDoc {
    pub params: ParamsDoc,
    pub init_block: String,
    pub bits: usize,
    pub output: String,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}
