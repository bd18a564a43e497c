//! Evaluation reports as tab-separated text.

use std::fmt::Write;

use crate::error::{Error, Result};

use super::config::Attack;

#[derive(Clone, Debug, PartialEq)]
pub struct Scores {
    pub ssim: f64,
    /// Sub-block placement accuracy against the true pixel key.
    pub placement_accuracy: Option<f64>,
    /// Fraction of board cells holding the correct block.
    pub assembly_accuracy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageRecord {
    pub id: usize,
    pub label: Option<u8>,
    pub attack: Attack,
    pub outcome: std::result::Result<Scores, String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub attack: Attack,
    pub scored: usize,
    pub failed: usize,
    pub mean_ssim: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalReport {
    /// `key=value` lines describing the run.
    pub metadata: Vec<String>,
    pub records: Vec<ImageRecord>,
}

pub const HEADER: &str = "id\tlabel\tattack\tssim\tplacement_accuracy\tassembly_accuracy\tstatus";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl EvalReport {
    pub fn ssim_values(&self, attack: Attack) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.attack == attack)
            .filter_map(|r| r.outcome.as_ref().ok().map(|s| s.ssim))
            .collect()
    }

    /// Arithmetic mean in record order.
    pub fn mean_ssim(&self, attack: Attack) -> Option<f64> {
        let v = self.ssim_values(attack);
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }

    pub fn summaries(&self) -> Vec<Summary> {
        let mut attacks: Vec<Attack> = self.records.iter().map(|r| r.attack).collect();
        attacks.sort();
        attacks.dedup();
        attacks
            .into_iter()
            .map(|attack| {
                let (ok, failed): (Vec<_>, Vec<_>) =
                    self.records.iter().filter(|r| r.attack == attack).partition(|r| r.outcome.is_ok());
                Summary {
                    attack,
                    scored: ok.len(),
                    failed: failed.len(),
                    mean_ssim: self.mean_ssim(attack),
                }
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# blockbreak evaluation report\n");
        for m in &self.metadata {
            let _ = writeln!(out, "# {m}");
        }
        let _ = writeln!(out, "{HEADER}");
        for r in &self.records {
            let label = r.label.map_or_else(|| "-".to_string(), |l| l.to_string());
            let _ = match &r.outcome {
                Ok(s) => writeln!(
                    out,
                    "{}\t{label}\t{}\t{}\t{}\t{}\tok",
                    r.id,
                    r.attack.label(),
                    s.ssim,
                    opt(s.placement_accuracy),
                    opt(s.assembly_accuracy)
                ),
                Err(e) => writeln!(
                    out,
                    "{}\t{label}\t{}\t-\t-\t-\terror: {}",
                    r.id,
                    r.attack.label(),
                    e.replace(['\t', '\n'], " ")
                ),
            };
        }
        for s in self.summaries() {
            let _ = writeln!(
                out,
                "summary\t{}\tscored={}\tfailed={}\tmean_ssim={}",
                s.attack.label(),
                s.scored,
                s.failed,
                opt(s.mean_ssim)
            );
        }
        out
    }

    /// Parses the output of [`EvalReport::to_text`]. Summary rows are
    /// recomputed, not read.
    pub fn parse(text: &str) -> Result<Self> {
        let mut report = EvalReport::default();
        let mut offset = 0;
        let bad = |offset: usize, msg: &str| Error::format(offset, msg.to_string());
        for line in text.lines() {
            let here = offset;
            offset += line.len() + 1;
            if let Some(meta) = line.strip_prefix("# ") {
                if meta != "blockbreak evaluation report" {
                    report.metadata.push(meta.to_string());
                }
                continue;
            }
            if line == HEADER || line.starts_with("summary\t") || line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.splitn(7, '\t').collect();
            if f.len() != 7 {
                return Err(bad(here, "expected 7 tab-separated fields"));
            }
            let num = |s: &str| -> Result<Option<f64>> {
                if s == "-" {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| bad(here, "bad number"))
                }
            };
            let outcome = if f[6] == "ok" {
                Ok(Scores {
                    ssim: num(f[3])?.ok_or_else(|| bad(here, "missing ssim"))?,
                    placement_accuracy: num(f[4])?,
                    assembly_accuracy: num(f[5])?,
                })
            } else {
                Err(f[6].strip_prefix("error: ").unwrap_or(f[6]).to_string())
            };
            report.records.push(ImageRecord {
                id: f[0].parse().map_err(|_| bad(here, "bad id"))?,
                label: if f[1] == "-" {
                    None
                } else {
                    Some(f[1].parse().map_err(|_| bad(here, "bad label"))?)
                },
                attack: f[2].parse().map_err(|_| bad(here, "bad attack"))?,
                outcome,
            });
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: usize, attack: Attack, ssim: Option<f64>) -> ImageRecord {
        ImageRecord {
            id,
            label: Some(3),
            attack,
            outcome: ssim
                .map(|ssim| Scores {
                    ssim,
                    placement_accuracy: Some(1.0),
                    assembly_accuracy: None,
                })
                .ok_or_else(|| "boom\tbad".to_string()),
        }
    }

    #[test]
    fn text_round_trip_and_exact_mean() {
        let report = EvalReport {
            metadata: vec!["count=3".into()],
            records: vec![
                rec(0, Attack::Proposed, Some(0.1)),
                rec(0, Attack::Conventional, Some(1.0 / 3.0)),
                rec(1, Attack::Proposed, Some(0.7)),
                rec(2, Attack::Proposed, None),
            ],
        };
        let text = report.to_text();
        assert!(text.contains("summary\tproposed\tscored=2\tfailed=1\tmean_ssim=0.39999999999999997\n"));
        assert!(text.contains("error: boom bad"));
        let back = EvalReport::parse(&text).unwrap();
        assert_eq!(back.records.len(), 4);
        assert_eq!(back.metadata, report.metadata);
        for attack in [Attack::Proposed, Attack::Conventional] {
            assert_eq!(back.mean_ssim(attack).unwrap().to_bits(), report.mean_ssim(attack).unwrap().to_bits());
        }
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn empty_attack_has_no_mean() {
        let r = EvalReport {
            metadata: vec![],
            records: vec![rec(0, Attack::None, None)],
        };
        assert_eq!(r.mean_ssim(Attack::None), None);
        assert!(r.to_text().ends_with("summary\tnone\tscored=0\tfailed=1\tmean_ssim=-\n"));
    }
}
