//! Enumeration of weight systems, per-entry verification suites and the
//! flat-file catalog format (JSON with `"schema":"1"`, or CSV).

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{
    graded_T1, log_restricted, omega_top_minus, wedge_tangent_twisted, CohomologyError, GradedHypersurface,
};
use crate::rational::format_q64;
use crate::spectrum::{DiagonalSingularity, DEFAULT_MU_CAP};
use crate::weights::{
    classify, diagonal_exponents, numerology, quasismooth_candidate_check, Certification, Classification, Flag,
    Numerology, WeightError, WeightSystem,
};

pub const SCHEMA_VERSION: &str = "1";
pub const DEFAULT_NODE_CAP: u64 = 1_000_000;
pub const CAP_ENV_VAR: &str = "LIMINAL_CAP";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("search visited more than {cap} nodes; raise the cap to continue")]
    BoundsTooLarge { cap: u64 },
    #[error("unsupported catalog schema {0:?}")]
    UnsupportedSchema(String),
    #[error("invalid catalog: {0}")]
    Format(String),
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub max_n: usize,
    pub max_d: u64,
    pub require_liminal: Option<u64>,
    /// Restrict to `a_i < d`; otherwise `a_i <= d`.
    pub require_genuinely_singular: bool,
}

impl EnumerationBounds {
    pub fn new(max_n: usize, max_d: u64) -> Self {
        Self {
            max_n,
            max_d,
            require_liminal: None,
            require_genuinely_singular: true,
        }
    }

    pub fn liminal(mut self, k: u64) -> Self {
        self.require_liminal = Some(k);
        self
    }

    pub fn allow_full_weights(mut self) -> Self {
        self.require_genuinely_singular = false;
        self
    }

    fn validate(&self) -> Result<(), CatalogError> {
        if self.max_n < 3 {
            return Err(CatalogError::InvalidBounds(format!("max_n = {} < 3", self.max_n)));
        }
        if self.max_d < 2 {
            return Err(CatalogError::InvalidBounds(format!("max_d = {} < 2", self.max_d)));
        }
        Ok(())
    }
}

/// Node cap from `LIMINAL_CAP`, falling back to the default.
pub fn node_cap_from_env() -> u64 {
    std::env::var(CAP_ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub mu: u64,
    pub min: String,
    pub max: String,
    /// Multiplicity of the spectral number `k + 1`, when liminal.
    pub liminal_multiplicity: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub status: SuiteStatus,
    pub detail: String,
}

impl SuiteOutcome {
    fn pass(detail: impl Into<String>) -> Self {
        Self {
            status: SuiteStatus::Pass,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Self {
            status: SuiteStatus::Fail,
            detail: detail.into(),
        }
    }

    fn skipped(detail: impl Into<String>) -> Self {
        Self {
            status: SuiteStatus::Skipped,
            detail: detail.into(),
        }
    }

    fn check(ok: bool, pass: impl Into<String>, fail: impl Into<String>) -> Self {
        if ok {
            Self::pass(pass)
        } else {
            Self::fail(fail)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub ws: WeightSystem,
    pub classification: Classification,
    pub numerology: Option<Numerology>,
    pub certification: Certification,
    pub spectrum_summary: Option<SpectrumSummary>,
    pub verification: BTreeMap<String, SuiteOutcome>,
}

impl CatalogEntry {
    pub fn new(ws: WeightSystem) -> Self {
        let ws = ws.sorted();
        let classification = classify(&ws);
        let numerology = numerology(&ws).ok();
        let certification = quasismooth_candidate_check(&ws);
        let spectrum_summary = diagonal_exponents(&ws).and_then(|e| {
            let sing = DiagonalSingularity::new(e).ok()?;
            let spectrum = sing.spectrum(DEFAULT_MU_CAP).ok()?;
            let (min, _) = spectrum.min()?;
            let (max, _) = spectrum.max()?;
            Some(SpectrumSummary {
                mu: spectrum.total,
                min: format_q64(&min),
                max: format_q64(&max),
                liminal_multiplicity: classification
                    .liminal_k
                    .map(|k| spectrum.gr_f_link(ws.n() as i64 - k)),
            })
        });
        Self {
            ws,
            classification,
            numerology,
            certification,
            spectrum_summary,
            verification: BTreeMap::new(),
        }
    }

    fn sort_key(&self) -> (usize, u64, Vec<u64>) {
        (self.ws.n(), self.ws.degree(), self.ws.weights().to_vec())
    }
}

/// Sorted tuples in `[1, hi]^len` with a fixed sum (if any), depth-first.
struct CellSearch<'a> {
    len: usize,
    hi: u64,
    sum: Option<u64>,
    nodes: &'a AtomicU64,
    cap: u64,
}

impl CellSearch<'_> {
    fn run(&self, out: &mut Vec<Vec<u64>>) -> Result<(), CatalogError> {
        let mut cur = Vec::with_capacity(self.len);
        self.extend(&mut cur, 0, out)
    }

    fn extend(&self, cur: &mut Vec<u64>, total: u64, out: &mut Vec<Vec<u64>>) -> Result<(), CatalogError> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.cap {
            return Err(CatalogError::BoundsTooLarge { cap: self.cap });
        }
        if cur.len() == self.len {
            if self.sum.is_none_or(|s| s == total) {
                out.push(cur.clone());
            }
            return Ok(());
        }
        let start = cur.last().copied().unwrap_or(1);
        let remaining = (self.len - cur.len()) as u64;
        for v in start..=self.hi {
            if let Some(s) = self.sum {
                if total + v * remaining > s {
                    break;
                }
                if total + v + (remaining - 1) * self.hi < s {
                    continue;
                }
            }
            cur.push(v);
            self.extend(cur, total + v, out)?;
            cur.pop();
        }
        Ok(())
    }
}

/// `gcd(a) = 1`: otherwise no monomial has degree `d`, or `(a; d)` is a
/// multiple of a smaller system.
fn admissible(weights: &[u64]) -> bool {
    weights.iter().fold(0u64, |g, &a| g.gcd(&a)) == 1
}

/// All normalized weight systems within the bounds, sorted by `(n, d, weights)`.
pub fn enumerate(bounds: &EnumerationBounds) -> Result<Vec<CatalogEntry>, CatalogError> {
    enumerate_with_cap(bounds, node_cap_from_env())
}

pub fn enumerate_with_cap(bounds: &EnumerationBounds, cap: u64) -> Result<Vec<CatalogEntry>, CatalogError> {
    bounds.validate()?;
    let cells: Vec<(usize, u64)> = (3..=bounds.max_n)
        .flat_map(|n| (2..=bounds.max_d).map(move |d| (n, d)))
        .collect();
    let nodes = AtomicU64::new(0);
    let per_cell: Vec<Vec<CatalogEntry>> = cells
        .par_iter()
        .map(|&(n, d)| {
            let search = CellSearch {
                len: n + 1,
                hi: if bounds.require_genuinely_singular { d - 1 } else { d },
                sum: bounds.require_liminal.map(|k| d * (k + 1)),
                nodes: &nodes,
                cap,
            };
            let mut tuples = Vec::new();
            search.run(&mut tuples)?;
            tuples
                .into_iter()
                .filter(|w| admissible(w))
                .map(|w| Ok(CatalogEntry::new(WeightSystem::new(w, d)?)))
                .collect::<Result<Vec<_>, CatalogError>>()
        })
        .collect::<Result<_, _>>()?;
    let mut entries: Vec<CatalogEntry> = per_cell.into_iter().flatten().collect();
    entries.sort_by_key(CatalogEntry::sort_key);
    Ok(entries)
}

/// Entries for the diagonal family in each dimension and admissible level.
pub fn diagonal_family_catalog(min_n: u64, max_n: u64) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    for n in min_n.max(3)..=max_n {
        for k in 1..=(n - 1) / 2 {
            let e = crate::weights::diagonal_family(n, k)?;
            out.push(CatalogEntry::new(crate::weights::weight_system_from_exponents(&e)?));
        }
    }
    out.sort_by_key(CatalogEntry::sort_key);
    out.dedup();
    Ok(out)
}

pub const SUITES: [&str; 6] = [
    "liminal-diagonal",
    "link-piece",
    "twisted-forms",
    "log-restriction",
    "bott-chain",
    "t1-weights",
];

struct Context<'a> {
    entry: &'a CatalogEntry,
    k: Option<i64>,
    hyp: Option<Result<GradedHypersurface, CohomologyError>>,
}

impl Context<'_> {
    fn liminal(&self) -> Result<i64, SuiteOutcome> {
        self.k
            .ok_or_else(|| SuiteOutcome::skipped("requires a liminal weight system"))
    }

    fn level_two(&self) -> Result<i64, SuiteOutcome> {
        let k = self.liminal()?;
        if k < 2 {
            return Err(SuiteOutcome::skipped("requires liminal level k >= 2"));
        }
        if self.entry.ws.n() < 4 {
            return Err(SuiteOutcome::skipped("requires n >= 4"));
        }
        Ok(k)
    }

    fn hypersurface(&self) -> Result<&GradedHypersurface, SuiteOutcome> {
        match &self.hyp {
            Some(Ok(h)) => Ok(h),
            Some(Err(e)) => Err(SuiteOutcome::fail(e.to_string())),
            None => Err(SuiteOutcome::skipped("requires a certified (diagonal) member")),
        }
    }
}

fn run_suite(ctx: &Context, suite: &str) -> SuiteOutcome {
    let result = match suite {
        "liminal-diagonal" => suite_liminal_diagonal(ctx),
        "link-piece" => suite_link_piece(ctx),
        "twisted-forms" => suite_twisted_forms(ctx),
        "log-restriction" => suite_log_restriction(ctx),
        "bott-chain" => suite_bott_chain(ctx),
        "t1-weights" => suite_t1_weights(ctx),
        other => Err(SuiteOutcome::skipped(format!("unknown suite {other:?}"))),
    };
    result.unwrap_or_else(|o| o)
}

fn suite_liminal_diagonal(ctx: &Context) -> Result<SuiteOutcome, SuiteOutcome> {
    let k = ctx.liminal()?;
    let ws = &ctx.entry.ws;
    let e = diagonal_exponents(ws).ok_or_else(|| SuiteOutcome::skipped("requires a certified (diagonal) member"))?;
    let sum = e.iter().fold(crate::rational::Q64::from_integer(0), |acc, &x| {
        acc + crate::rational::Q64::new(1, x as i64)
    });
    Ok(SuiteOutcome::check(
        sum == crate::rational::Q64::from_integer(k + 1),
        format!("sum of 1/e_i = {}", format_q64(&sum)),
        format!("sum of 1/e_i = {} but k + 1 = {}", format_q64(&sum), k + 1),
    ))
}

fn suite_link_piece(ctx: &Context) -> Result<SuiteOutcome, SuiteOutcome> {
    ctx.liminal()?;
    let summary = ctx
        .entry
        .spectrum_summary
        .as_ref()
        .ok_or_else(|| SuiteOutcome::skipped("requires a diagonal member with Milnor number under the cap"))?;
    let m = summary.liminal_multiplicity.unwrap_or(0);
    Ok(SuiteOutcome::check(
        m == 1,
        "link piece has dimension 1",
        format!("link piece has dimension {m}"),
    ))
}

fn cohomology_failure(e: CohomologyError) -> SuiteOutcome {
    SuiteOutcome::fail(e.to_string())
}

fn suite_twisted_forms(ctx: &Context) -> Result<SuiteOutcome, SuiteOutcome> {
    let k = ctx.level_two()?;
    let hyp = ctx.hypersurface()?;
    let n = hyp.n();
    let a = hyp.degree() * (k - 1);
    for i in 1..a {
        for p in [n - 1, n - 2] {
            let t = omega_top_minus(hyp, p, i).map_err(cohomology_failure)?;
            if !t.vanishes_through(2) {
                return Ok(SuiteOutcome::fail(format!("h(Omega^{p}(i={i})) = {:?}", t.h)));
            }
        }
    }
    let top = omega_top_minus(hyp, n - 1, a).map_err(cohomology_failure)?;
    if !top.vanishes_through(2) {
        return Ok(SuiteOutcome::fail(format!("h(Omega^{}(a)) = {:?}", n - 1, top.h)));
    }
    let t = omega_top_minus(hyp, n - 2, a).map_err(cohomology_failure)?;
    Ok(SuiteOutcome::check(
        (t.get(0), t.get(1), t.get(2)) == (0, 1, 0),
        format!("vanishing for 1 <= i < {a}; h(Omega^{}(a)) = {:?}", n - 2, t.h),
        format!("h(Omega^{}(a)) = {:?}", n - 2, t.h),
    ))
}

fn suite_log_restriction(ctx: &Context) -> Result<SuiteOutcome, SuiteOutcome> {
    let k = ctx.level_two()?;
    let hyp = ctx.hypersurface()?;
    let a = hyp.degree() * (k - 1);
    for i in 1..a {
        let t = log_restricted(hyp, i).map_err(cohomology_failure)?;
        if !(t.exact && t.get(0) == 0 && t.get(1) == 0) {
            return Ok(SuiteOutcome::fail(format!("i = {i}: {:?}", t.h)));
        }
    }
    let t = log_restricted(hyp, a).map_err(cohomology_failure)?;
    Ok(SuiteOutcome::check(
        t.exact && (t.get(0), t.get(1)) == (0, 1),
        format!("(h0, h1) = (0, 0) for 1 <= i < {a} and (0, 1) at i = {a}"),
        format!("i = {a}: {:?}", t.h),
    ))
}

fn suite_bott_chain(ctx: &Context) -> Result<SuiteOutcome, SuiteOutcome> {
    let k = ctx.level_two()?;
    let hyp = ctx.hypersurface()?;
    for i in 1..k {
        let t = wedge_tangent_twisted(hyp, i as usize).map_err(cohomology_failure)?;
        if t.get(i as usize) != 0 {
            return Ok(SuiteOutcome::fail(format!("i = {i}: {:?}", t.h)));
        }
    }
    Ok(SuiteOutcome::pass(format!("H^i vanishes for 1 <= i <= {}", k - 1)))
}

fn suite_t1_weights(ctx: &Context) -> Result<SuiteOutcome, SuiteOutcome> {
    let k = ctx.liminal()?;
    let hyp = ctx.hypersurface()?;
    let t1 = graded_T1(hyp).map_err(cohomology_failure)?;
    let d = hyp.degree();
    if t1.min_weight() != Some((-d, 1)) {
        return Ok(SuiteOutcome::fail(format!("minimum weight piece {:?}", t1.min_weight())));
    }
    if k < 2 || hyp.n() < 4 {
        return Ok(SuiteOutcome::pass(format!("weight -{d} piece has dimension 1")));
    }
    let h1 = log_restricted(hyp, d * (k - 1)).map_err(cohomology_failure)?.get(1);
    Ok(SuiteOutcome::check(
        h1 == 1,
        format!("weight -{d} piece has dimension 1 = h1 of the restricted log forms"),
        format!("weight -{d} piece has dimension 1 but h1 = {h1}"),
    ))
}

/// Runs the named suites; unknown or inapplicable suites are recorded as skipped.
pub fn verify_all(entry: &CatalogEntry, suites: &[&str]) -> BTreeMap<String, SuiteOutcome> {
    let needs_poly = suites
        .iter()
        .any(|s| matches!(*s, "twisted-forms" | "log-restriction" | "bott-chain" | "t1-weights"));
    let ctx = Context {
        entry,
        k: entry.classification.liminal_k,
        hyp: (needs_poly && entry.certification == Certification::Certified)
            .then(|| GradedHypersurface::fermat(entry.ws.clone())),
    };
    suites
        .iter()
        .map(|s| (s.to_string(), run_suite(&ctx, s)))
        .collect()
}

/// Fills in `verification` for every entry, in parallel.
pub fn verify_catalog(entries: &mut [CatalogEntry], suites: &[&str]) {
    entries
        .par_iter_mut()
        .for_each(|e| e.verification = verify_all(e, suites));
}

#[derive(Serialize, Deserialize)]
struct Record {
    schema: String,
    weights: Vec<u64>,
    degree: u64,
    n: usize,
    classification: Classification,
    flags: Vec<Flag>,
    numerology: Option<Numerology>,
    certification: Certification,
    spectrum: Option<SpectrumSummary>,
    verification: BTreeMap<String, SuiteOutcome>,
}

impl From<&CatalogEntry> for Record {
    fn from(e: &CatalogEntry) -> Self {
        Record {
            schema: SCHEMA_VERSION.to_string(),
            weights: e.ws.weights().to_vec(),
            degree: e.ws.degree(),
            n: e.ws.n(),
            classification: e.classification.clone(),
            flags: e.ws.flags(),
            numerology: e.numerology.clone(),
            certification: e.certification,
            spectrum: e.spectrum_summary.clone(),
            verification: e.verification.clone(),
        }
    }
}

/// Pretty JSON array, keys sorted, LF newlines, no trailing newline.
pub fn export_json(entries: &[CatalogEntry]) -> Result<String, CatalogError> {
    let values: Vec<serde_json::Value> = entries
        .iter()
        .map(|e| serde_json::to_value(Record::from(e)))
        .collect::<Result<_, _>>()?;
    Ok(serde_json::to_string_pretty(&values)?)
}

pub fn import_json(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let records: Vec<Record> = serde_json::from_str(text)?;
    records
        .into_iter()
        .map(|r| {
            if r.schema != SCHEMA_VERSION {
                return Err(CatalogError::UnsupportedSchema(r.schema));
            }
            let ws = WeightSystem::new(r.weights, r.degree)?;
            if ws.n() != r.n {
                return Err(CatalogError::Format(format!("n = {} does not match {ws}", r.n)));
            }
            Ok(CatalogEntry {
                ws,
                classification: r.classification,
                numerology: r.numerology,
                certification: r.certification,
                spectrum_summary: r.spectrum,
                verification: r.verification,
            })
        })
        .collect()
}

const CSV_HEADER: [&str; 17] = [
    "n",
    "degree",
    "weights",
    "weight_sum",
    "max_du_bois",
    "max_rational",
    "liminal_k",
    "N",
    "a",
    "r",
    "kE_degree",
    "certification",
    "flags",
    "mu",
    "spectrum_min",
    "spectrum_max",
    "verification",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn export_csv(entries: &[CatalogEntry]) -> Result<String, CatalogError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for e in entries {
        let c = &e.classification;
        let num = e.numerology.as_ref();
        let summary = e.spectrum_summary.as_ref();
        let weights: Vec<String> = e.ws.weights().iter().map(u64::to_string).collect();
        let flags: Vec<&str> = e.ws.flags().iter().map(Flag::as_str).collect();
        let verification: Vec<String> = e
            .verification
            .iter()
            .map(|(k, v)| format!("{k}={}", serde_json::to_value(v.status).expect("status").as_str().unwrap_or("")))
            .collect();
        w.write_record([
            e.ws.n().to_string(),
            e.ws.degree().to_string(),
            weights.join(" "),
            format_q64(&c.weight_sum),
            opt(c.max_du_bois),
            opt(c.max_rational),
            opt(c.liminal_k),
            opt(num.map(|x| x.canonical_degree)),
            opt(num.map(|x| x.top_twist)),
            opt(num.map(|x| x.discrepancy)),
            opt(num.map(|x| x.ke_degree)),
            e.certification.as_str().to_string(),
            flags.join(" "),
            opt(summary.map(|s| s.mu)),
            opt(summary.map(|s| s.min.clone())),
            opt(summary.map(|s| s.max.clone())),
            verification.join(";"),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CatalogError::Format(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
}

/// Writes the catalog with a trailing newline.
pub fn export(entries: &[CatalogEntry], format: ExportFormat, path: &Path) -> Result<(), CatalogError> {
    let mut text = match format {
        ExportFormat::Json => export_json(entries)?,
        ExportFormat::Csv => export_csv(entries)?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

pub fn import(path: &Path) -> Result<Vec<CatalogEntry>, CatalogError> {
    import_json(&std::fs::read_to_string(path)?)
}
