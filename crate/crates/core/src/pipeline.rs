//! Candidate enumeration and the pass-based elimination driver.
//!
//! Each candidate `J` stands for the class `(Q_J x_n)^2` in
//! `H_*(Omega^l S^{n+l})`. Passes run in a fixed order and the first verdict
//! wins:
//!
//! | pass | test |
//! |------|------|
//! | P0 | empty `J`: `x_n^2` survives iff `n + 1` is a Hopf invariant one dimension |
//! | P1 | `dim Q_J x_n` must be odd |
//! | P2 | `Q_J x_n` must be A-annihilated |
//! | P3 | dimension gap against the James-Hopf target (length two or more) |
//! | P4 | cone detection on the stunted target (length one) |
//! | P5 | external facts |

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dl::{dim_lower, to_upper, Element, Word};
use crate::facts::{FactsError, FactsFile};
use crate::loopspace::{gap_report, GapReport};
use crate::nishida::{is_a_annihilated, Annihilation};
use crate::steenrod::{cone_detection_possible, ConeBase, ConeProblem, ConeStatus, ConeVerdict, StuntedComplex};

pub const MIN_LOOPS: u32 = 4;
pub const MAX_LOOPS: u32 = 9;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("loop bound {0} outside the supported range {MIN_LOOPS}..={MAX_LOOPS}")]
    LoopBound(u32),
    #[error("empty or invalid n range {0}..={1}")]
    Range(u32, u32),
    #[error(transparent)]
    Facts(#[from] FactsError),
}

/// Sequences printed in the reference candidate table at eight loops.
pub const REFERENCE_FAMILIES: &[&[u32]] = &[
    &[],
    &[1],
    &[3],
    &[5],
    &[7],
    &[1, 2],
    &[1, 4],
    &[1, 6],
    &[3, 4],
    &[3, 6],
    &[5, 6],
    &[1, 2, 3],
    &[1, 2, 5],
    &[1, 2, 7],
    &[1, 4, 5],
    &[1, 4, 7],
    &[1, 6, 7],
    &[3, 4, 5],
    &[3, 4, 7],
    &[3, 6, 7],
    &[5, 6, 7],
    &[1, 2, 3, 4],
    &[1, 2, 3, 6],
    &[1, 2, 5, 6],
    &[3, 4, 5, 6],
    &[1, 2, 3, 4, 5],
    &[1, 2, 3, 4, 7],
    &[3, 4, 5, 6, 7],
    &[1, 2, 3, 4, 5, 6],
    &[1, 2, 3, 4, 5, 6, 7],
];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Candidate {
    /// Lower indices, outermost first.
    pub j: Vec<u32>,
    pub l: u32,
    /// Allowed by the enumeration constraints but absent from the reference
    /// table.
    pub extra: bool,
}

impl Candidate {
    pub fn dim(&self, n: u32) -> u32 {
        dim_lower(&self.j, n)
    }

    pub fn upper(&self, n: u32) -> Word {
        to_upper(&self.j, n)
    }

    pub fn class(&self, n: u32) -> Element {
        Element::from_lower(n, &self.j)
    }

    /// Height of the square `(Q_J x_n)^2`.
    pub fn height(&self) -> u64 {
        2u64 << self.j.len()
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.j.iter().map(|j| j.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Strictly increasing sequences with entries in `(0, l)`, odd first entry
/// and odd consecutive sums, plus the empty sequence.
pub fn enumerate_candidates(l: u32) -> Result<Vec<Candidate>, PipelineError> {
    if !(MIN_LOOPS..=MAX_LOOPS).contains(&l) {
        return Err(PipelineError::LoopBound(l));
    }
    fn go(l: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        let start = match cur.last() {
            None => 1,
            Some(&last) => last + 1,
        };
        let mut j = start;
        while j < l {
            cur.push(j);
            go(l, cur, out);
            cur.pop();
            // The next entry must have the opposite parity of the last.
            j += 2;
        }
    }
    let mut seqs = Vec::new();
    go(l, &mut Vec::new(), &mut seqs);
    let mut out: Vec<Candidate> = seqs
        .into_iter()
        .map(|j| {
            let extra = !REFERENCE_FAMILIES.iter().any(|f| *f == j.as_slice());
            Candidate { j, l, extra }
        })
        .collect();
    out.sort_by(|a, b| (a.j.len(), &a.j).cmp(&(b.j.len(), &b.j)));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Status {
    SurvivorBottomCell,
    SurvivorHopf,
    Eliminated,
    External,
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pass {
    P0,
    P1,
    P2,
    P3,
    P4,
    P5,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    BottomCell,
    Hopf { problem: ConeProblem, verdict: ConeVerdict },
    Parity { dim: u32 },
    /// `Sq^r_*` on `Q_J x_n` is `image`; on the square, `Sq^{2r}_*` gives
    /// `image^2`.
    Steenrod { r: u32, image: Element },
    Gap(GapReport),
    Cone { problem: ConeProblem, verdict: ConeVerdict },
    External { fact: String, stem: u32 },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub pass: Option<Pass>,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub l: u32,
    pub n: u32,
    pub j: Vec<u32>,
    pub extra: bool,
    /// Dimension of the square, `2 dim Q_J x_n`; for the bottom cell, `n`.
    pub dim: u32,
    pub class: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub l: u32,
    pub n_from: u32,
    pub n_to: u32,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.verdict.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Target of the length-one cone test: `Sigma^{n+1} P_{n+j}^{n+l-1}` with
/// the bottom class in dimension `2n + j + 1`.
pub fn cone_target(j: u32, l: u32, n: u32) -> Option<StuntedComplex> {
    StuntedComplex::new(n + 1, n + j, n + l - 1).ok()
}

/// Runs the passes on one candidate at one `n`.
pub fn classify(c: &Candidate, n: u32, facts: &FactsFile) -> Result<Verdict, PipelineError> {
    let hopf = facts.hopf_dims()?;
    let eliminated = |pass, witness| Verdict { status: Status::Eliminated, pass: Some(pass), witness };

    if c.j.is_empty() {
        let problem = ConeProblem::new(ConeBase::Sphere { dim: n + 1 }, n + 1);
        let verdict = cone_detection_possible(&problem, &hopf).expect("sphere problem is consistent");
        let status = match verdict.status {
            ConeStatus::Possible => Status::SurvivorHopf,
            _ => Status::Eliminated,
        };
        return Ok(Verdict { status, pass: Some(Pass::P0), witness: Witness::Hopf { problem, verdict } });
    }

    let d = c.dim(n);
    if d % 2 == 0 {
        return Ok(eliminated(Pass::P1, Witness::Parity { dim: d }));
    }

    let xi = c.class(n);
    if let Ok(Annihilation::Witness { r, image }) = is_a_annihilated(&xi) {
        return Ok(eliminated(Pass::P2, Witness::Steenrod { r, image }));
    }

    if c.j.len() >= 2 {
        let gap = gap_report(&c.j, c.l, n);
        if gap.eliminated_by_gap {
            return Ok(eliminated(Pass::P3, Witness::Gap(gap)));
        }
    }

    if let [j] = c.j[..] {
        if let Some(x) = cone_target(j, c.l, n) {
            let problem = ConeProblem::new(ConeBase::Stunted(x), d + 1);
            if let Ok(verdict) = cone_detection_possible(&problem, &hopf) {
                if verdict.status == ConeStatus::Impossible {
                    return Ok(eliminated(Pass::P4, Witness::Cone { problem, verdict }));
                }
            }
        }
    }

    let stem = 2 * d - n;
    if let Some((_, id)) = facts.trivial_stems()?.into_iter().find(|(s, _)| *s == stem) {
        return Ok(Verdict {
            status: Status::External,
            pass: Some(Pass::P5),
            witness: Witness::External { fact: id, stem },
        });
    }

    Ok(Verdict { status: Status::Unresolved, pass: None, witness: Witness::None })
}

/// Classifies every candidate at loop bound `l` for each `n` in the range.
/// Work is spread over threads; row order is fixed by `(n, candidate)`.
pub fn run_elimination(l: u32, n_from: u32, n_to: u32, facts: &FactsFile) -> Result<Report, PipelineError> {
    if n_from == 0 || n_from > n_to {
        return Err(PipelineError::Range(n_from, n_to));
    }
    facts.hopf_dims()?;
    facts.trivial_stems()?;
    let candidates = enumerate_candidates(l)?;
    let jobs: Vec<(u32, &Candidate)> =
        (n_from..=n_to).flat_map(|n| candidates.iter().map(move |c| (n, c))).collect();
    let classified: Vec<ReportRow> = jobs
        .par_iter()
        .map(|&(n, c)| {
            let verdict = classify(c, n, facts)?;
            Ok(ReportRow {
                l,
                n,
                j: c.j.clone(),
                extra: c.extra,
                dim: 2 * c.dim(n),
                class: format!("({})^2", c.upper(n).display(n)),
                verdict,
            })
        })
        .collect::<Result<_, PipelineError>>()?;
    let mut rows = Vec::with_capacity(classified.len() + (n_to - n_from + 1) as usize);
    let mut it = classified.into_iter().peekable();
    for n in n_from..=n_to {
        rows.push(ReportRow {
            l,
            n,
            j: Vec::new(),
            extra: false,
            dim: n,
            class: format!("x_{n}"),
            verdict: Verdict { status: Status::SurvivorBottomCell, pass: Some(Pass::P0), witness: Witness::BottomCell },
        });
        while let Some(row) = it.next_if(|r| r.n == n) {
            rows.push(row);
        }
    }
    Ok(Report { l, n_from, n_to, rows })
}
