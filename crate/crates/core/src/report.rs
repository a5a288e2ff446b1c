//! Plan files and the JSON/CSV envelope every report is written in.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::construct::{DensePlan, EllSequence, GrowthLemmaConstant, Scale};
use crate::error::Result;
use crate::numeric::{rational_to_text, NormValue, PRECISION};
use crate::polycalc::Polynomial;

#[derive(Clone, Debug, Serialize)]
pub struct PlanFileEntry {
    pub k: u64,
    #[serde(rename = "F_k")]
    pub f: Polynomial,
    pub m_k: u32,
    pub ell_k: u64,
    pub c_mk: NormValue,
    pub norm2: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "C")]
    pub c: String,
    pub mode: Scale,
    pub threshold: u64,
    /// `"default"` with its enumeration parameters, or `"explicit"`.
    pub dense_sequence: DenseSource,
    #[serde(rename = "K_G")]
    pub k_g: String,
    pub choice_sum: String,
    pub choice_limit: Option<String>,
    #[serde(rename = "C_prime")]
    pub c_prime: Option<GrowthLemmaConstant>,
    pub entries: Vec<PlanFileEntry>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DenseSource {
    Default { coefficient_height: u64, degree_cap: u32, generating_set_size: String },
    Explicit { generators: u64 },
}

impl PlanFile {
    pub fn new(plan: &DensePlan, ell: &EllSequence) -> Result<Self> {
        let dense_sequence = match plan.parameters() {
            Some((coefficient_height, degree_cap)) => DenseSource::Default {
                coefficient_height,
                degree_cap,
                generating_set_size: plan.generating_set_size().to_string(),
            },
            None => DenseSource::Explicit {
                generators: plan.generating_set_size().try_into().unwrap_or(u64::MAX),
            },
        };
        let k_max = plan.k_max().min(ell.k_max());
        let mut entries = Vec::with_capacity(k_max as usize);
        for k in 1..=k_max {
            let e = plan.entry(k)?;
            entries.push(PlanFileEntry {
                k,
                f: e.f.clone(),
                m_k: e.m_k,
                ell_k: ell.ell(k)?,
                c_mk: e.c_mk(),
                norm2: rational_to_text(&e.norm2),
            });
        }
        Ok(PlanFile {
            n: plan.dim(),
            c: rational_to_text(&ell.c),
            mode: ell.scale,
            threshold: ell.threshold,
            dense_sequence,
            k_g: rational_to_text(plan.tail_constant()),
            choice_sum: rational_to_text(&ell.choice_sum),
            choice_limit: ell.choice_limit.as_ref().map(rational_to_text),
            c_prime: ell.c_prime.clone(),
            entries,
        })
    }
}

/// Git blob id of `content`: SHA-256 over `"blob <len>\0" ‖ content`.
pub fn content_hash(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn to_json<T: Serialize>(value: &T, pretty: bool) -> Result<String> {
    let mut s = if pretty { serde_json::to_string_pretty(value)? } else { serde_json::to_string(value)? };
    s.push('\n');
    Ok(s)
}

/// Wrapper written around every report.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, T: Serialize> {
    pub mode: Scale,
    pub precision_bits: usize,
    pub plan_hash: Option<&'a str>,
    pub config: &'a C,
    pub passed: Option<bool>,
    pub data: &'a T,
}

impl<'a, C: Serialize, T: Serialize> Envelope<'a, C, T> {
    pub fn new(mode: Scale, config: &'a C, data: &'a T) -> Self {
        Envelope {
            mode,
            precision_bits: PRECISION,
            plan_hash: None,
            config,
            passed: None,
            data,
        }
    }

    pub fn with_plan_hash(mut self, hash: Option<&'a str>) -> Self {
        self.plan_hash = hash;
        self
    }

    pub fn with_verdict(mut self, passed: bool) -> Self {
        self.passed = Some(passed);
        self
    }
}

/// Rows as CSV, preceded by `# key: value` comment lines for the provenance.
pub fn write_csv<R: Serialize, W: Write>(header: &[(&str, String)], rows: &[R], mut out: W) -> Result<()> {
    for (k, v) in header {
        writeln!(out, "# {k}: {v}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{explicit_dense_sequence, select_ell_relaxed};

    #[test]
    fn hash_matches_git_object_format() {
        // sha256 of "blob 0\0", as `git hash-object --object-format=sha256`
        assert_eq!(
            content_hash(b""),
            "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
        assert_ne!(content_hash(b"a"), content_hash(b"b"));
    }

    #[test]
    fn plan_file_lists_every_entry() {
        let plan = explicit_dense_sequence(3, vec![Polynomial::one(3)], 3).unwrap();
        let ell = select_ell_relaxed(3);
        let pf = PlanFile::new(&plan, &ell).unwrap();
        assert_eq!(pf.entries.len(), 3);
        let json = to_json(&pf, false).unwrap();
        assert!(json.contains("\"mode\":\"relaxed\""));
        assert!(json.contains("\"ell_k\":5"));
    }

    #[test]
    fn csv_has_comment_header() {
        #[derive(Serialize)]
        struct Row {
            a: u32,
        }
        let mut buf = Vec::new();
        write_csv(&[("mode", "relaxed".into())], &[Row { a: 1 }], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# mode: relaxed\na\n1\n");
    }
}
