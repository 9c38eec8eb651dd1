//! Problem and result file schemas, plus conversion into the core types.
//!
//! Problems are JSON objects; polynomials travel as strings in the core
//! grammar so files stay diffable and results parse back exactly.

use std::fmt::Write as _;

use fsupport_core::chains::ChainConfig;
use fsupport_core::error::Error;
use fsupport_core::groebner::Engine;
use fsupport_core::ring::{parse_poly, MonomialOrder, Polynomial, RingSpec};
use fsupport_core::support::{DegreeSupport, ProblemSpec};
use serde::{Deserialize, Serialize};

/// Resource limits carried by a problem file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    /// Hard cap on chain length (Frobenius levels probed before giving up).
    #[serde(default = "default_e_max")]
    pub e_max: usize,
    /// Largest truncated-complex degree the run is willing to touch.
    #[serde(default = "default_j_max")]
    pub j_max: usize,
    /// Consecutive equal steps required before a chain counts as stable.
    #[serde(default = "default_stab_window")]
    pub stab_window: usize,
}

fn default_e_max() -> usize {
    12
}

fn default_j_max() -> usize {
    8
}

fn default_stab_window() -> usize {
    2
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            e_max: default_e_max(),
            j_max: default_j_max(),
            stab_window: default_stab_window(),
        }
    }
}

/// Requested cohomological degrees: an explicit list or the word `"all"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum DegreeSelector {
    /// Keyword form; only `"all"` is accepted.
    Word(String),
    /// Explicit degree list (out-of-range entries report empty with a note).
    List(Vec<i64>),
}

/// Input problem file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    /// Prime field characteristic.
    pub p: u32,
    /// Ring variables, in order.
    pub vars: Vec<String>,
    /// Generators of the support ideal.
    #[serde(rename = "I")]
    pub support_ideal: Vec<String>,
    /// The complete-intersection pair; exactly two entries.
    pub f: Vec<String>,
    /// Degrees to compute.
    pub degrees: DegreeSelector,
    /// Resource limits (defaults applied when absent).
    #[serde(default)]
    pub limits: Limits,
    /// Monomial order name (`grevlex`, `lex`, `grlex`); defaults to grevlex.
    #[serde(default)]
    pub order: Option<String>,
}

/// A parsed, validated problem ready to run.
pub struct LoadedProblem {
    pub spec: ProblemSpec,
    pub degrees: Vec<i64>,
    pub limits: Limits,
}

fn parse_order(name: Option<&str>) -> Result<MonomialOrder, Error> {
    match name {
        None | Some("grevlex") => Ok(MonomialOrder::GrevLex),
        Some("lex") => Ok(MonomialOrder::Lex),
        Some("grlex") => Ok(MonomialOrder::GrLex),
        Some(other) => Err(Error::Validation(format!(
            "unknown monomial order '{other}'"
        ))),
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl ProblemFile {
    /// Reads and schema-validates a problem file.
    pub fn read(path: &std::path::Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line().max(1),
            col: e.column().max(1),
            msg: format!("problem file {}: {e}", path.display()),
        })
    }

    /// Validates the contents and converts to core types.
    pub fn load(self) -> Result<LoadedProblem, Error> {
        if !is_prime(self.p) {
            return Err(Error::Validation("p must be prime".into()));
        }
        let var_refs: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let order = parse_order(self.order.as_deref())?;
        let ring = RingSpec::new(self.p, &var_refs, order)?;
        if self.f.len() != 2 {
            return Err(Error::Validation(format!(
                "f must list exactly 2 polynomials, got {}",
                self.f.len()
            )));
        }
        let parse = |s: &String| -> Result<Polynomial, Error> { parse_poly(s, &ring) };
        let gens: Vec<Polynomial> = self
            .support_ideal
            .iter()
            .map(parse)
            .collect::<Result<_, _>>()?;
        let f1 = parse(&self.f[0])?;
        let f2 = parse(&self.f[1])?;
        let cfg = ChainConfig {
            stab_window: self.limits.stab_window,
            hard_cap: self.limits.e_max,
        };
        let spec = ProblemSpec::new(ring, gens, f1, f2, cfg)?;
        let t = spec.t() as i64;
        let degrees = match &self.degrees {
            DegreeSelector::Word(w) if w == "all" => (0..=t).collect(),
            DegreeSelector::Word(w) => {
                return Err(Error::Validation(format!(
                    "degrees must be a list of integers or \"all\", got \"{w}\""
                )))
            }
            DegreeSelector::List(ks) => ks.clone(),
        };
        for &k in &degrees {
            if (0..=t).contains(&k) && (k + 2) as usize > self.limits.j_max {
                return Err(Error::Validation(format!(
                    "degree {k} needs truncated degree {} beyond j_max = {}",
                    k + 2,
                    self.limits.j_max
                )));
            }
        }
        Ok(LoadedProblem {
            spec,
            degrees,
            limits: self.limits,
        })
    }
}

/// Environment echo in every result file.
#[derive(Debug, Serialize)]
pub struct EnvBlock {
    pub version: String,
    pub seed: u64,
    pub limits: Limits,
    pub budget: u64,
    pub order: String,
}

/// Per-piece generator listing.
#[derive(Debug, Serialize)]
pub struct PieceRow {
    pub corner_kernel: Vec<String>,
    pub middle_row: Vec<String>,
    pub corner_cokernel: Vec<String>,
}

/// One computed degree.
#[derive(Debug, Serialize)]
pub struct DegreeRow {
    pub k: i64,
    pub support_generators: Vec<String>,
    pub empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pieces: Option<PieceRow>,
    pub certified: bool,
    pub wall_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Output result file.
#[derive(Debug, Serialize)]
pub struct ResultFile {
    pub environment: EnvBlock,
    pub degrees: Vec<DegreeRow>,
}

fn format_gens(ring: &RingSpec, gens: &[Polynomial]) -> Vec<String> {
    gens.iter().map(|g| ring.format(g)).collect()
}

/// Converts a computed degree into its serialized row.
pub fn degree_row(ring: &RingSpec, d: &DegreeSupport, wall_ms: u64) -> DegreeRow {
    let pieces = d.pieces.as_ref().map(|p| PieceRow {
        corner_kernel: format_gens(ring, p.corner_kernel.ideal.gens()),
        middle_row: format_gens(ring, p.middle_row.ideal.gens()),
        corner_cokernel: format_gens(ring, p.corner_cokernel.ideal.gens()),
    });
    DegreeRow {
        k: d.k,
        support_generators: format_gens(ring, d.ideal.gens()),
        empty: d.is_empty_support(),
        pieces,
        certified: d.certified,
        wall_ms,
        note: d.note.clone(),
    }
}

/// Assembles the environment block.
pub fn env_block(engine: &Engine, limits: &Limits, order: MonomialOrder) -> EnvBlock {
    EnvBlock {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: 0,
        limits: limits.clone(),
        budget: engine.budget(),
        order: order.name().to_string(),
    }
}

/// Renders a result file as a short human-readable report.
pub fn render_text(problem: &LoadedProblem, result: &ResultFile) -> String {
    let ring = &problem.spec.ring;
    let mut out = String::new();
    let vars = ring.vars().join(", ");
    let _ = writeln!(
        out,
        "ring: F_{}[{}]  (order {})",
        ring.modulus(),
        vars,
        result.environment.order
    );
    let gens = problem
        .spec
        .torsion_gens
        .iter()
        .map(|g| ring.format(g))
        .collect::<Vec<_>>()
        .join(", ");
    let (f1, f2) = &problem.spec.pair;
    let _ = writeln!(
        out,
        "I = ({gens});  f = ({}, {})",
        ring.format(f1),
        ring.format(f2)
    );
    for row in &result.degrees {
        let cert = if row.certified { "yes" } else { "no" };
        if row.empty {
            let _ = write!(out, "k = {}: empty support", row.k);
        } else {
            let _ = write!(
                out,
                "k = {}: V({})",
                row.k,
                row.support_generators.join(", ")
            );
        }
        let _ = write!(out, "  [certified: {cert}, {} ms]", row.wall_ms);
        match &row.note {
            Some(n) => {
                let _ = writeln!(out, "  ({n})");
            }
            None => {
                let _ = writeln!(out);
            }
        }
    }
    out
}
