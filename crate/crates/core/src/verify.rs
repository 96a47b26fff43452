//! The exhaustive check: build every candidate primitive action of `A_n` and
//! `S_n` in a degree range, take its orbital digraphs and confirm that none
//! is more than 2-arc transitive.

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use log::{debug, info, warn};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::actions::{
    family_specs, load_catalog, parse_catalog, ActionSpec, CatalogEntry, FamilyTag, GroupType, Instantiated,
    Rejection, BUNDLED_CATALOG,
};
use crate::digraph::{
    arc_orbit_counts, orbitals, s_max_criterion, vertex_stabilizer_order, Pairing, SMax, DEFAULT_ARC_BUDGET,
    DEFAULT_S_CAP,
};
use crate::error::{Error, Result};
use crate::grp::GroupAction;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// The claimed bound on s.
pub const S_BOUND: u32 = 2;

#[derive(Clone, Debug, Serialize)]
pub struct VerifyParams {
    pub n_min: usize,
    pub n_max: usize,
    pub groups: Vec<GroupType>,
    pub families: Vec<FamilyTag>,
    pub include_catalog: bool,
    pub degree_cap: usize,
    pub s_cap: u32,
    pub arc_budget: u64,
    /// `None` uses the catalog bundled with the library.
    pub catalog_path: Option<PathBuf>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            n_min: 5,
            n_max: 9,
            groups: vec![GroupType::Alt, GroupType::Sym],
            families: vec![FamilyTag::Intransitive, FamilyTag::Imprimitive, FamilyTag::Affine],
            include_catalog: true,
            degree_cap: 1000,
            s_cap: DEFAULT_S_CAP,
            arc_budget: DEFAULT_ARC_BUDGET,
            catalog_path: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    /// No digraph to check.
    Vacuous,
    /// Every checked digraph has s = 1.
    MetS1,
    /// Some checked digraph has s = 2.
    MetS2,
    Violated,
}

/// Comparison of the criterion with s-arc enumeration on the levels the
/// budget allows.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub levels_checked: u32,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitalSummary {
    pub id: usize,
    pub valency: usize,
    pub pairing: Pairing,
    /// Valency below 3: directed cycles and valency-2 digraphs.
    pub degenerate: bool,
    /// Computed for digraphs only.
    pub s_max: Option<SMax>,
    pub divisibility_cap: Option<u32>,
    pub witness_arc_path: Vec<usize>,
    pub oracle: Option<OracleCheck>,
}

impl OrbitalSummary {
    fn counts_toward_bound(&self) -> bool {
        self.pairing != Pairing::SelfPaired && !self.degenerate
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionRecord {
    pub n: usize,
    pub group_type: GroupType,
    pub family: FamilyTag,
    pub description: String,
    pub degree: usize,
    pub stabilizer_order: String,
    pub bound_status: BoundStatus,
    pub orbitals: Vec<OrbitalSummary>,
}

/// A candidate whose coset action is not primitive, or which is not a
/// proper subgroup. Orbitals of a built but imprimitive action are still
/// analysed for information and do not count toward the bound.
#[derive(Clone, Debug, Serialize)]
pub struct RejectionRecord {
    pub n: usize,
    pub group_type: GroupType,
    pub family: FamilyTag,
    pub description: String,
    pub reason: Rejection,
    pub degree: Option<usize>,
    pub orbitals: Vec<OrbitalSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Exclusion {
    pub n: usize,
    pub group_type: GroupType,
    pub family: FamilyTag,
    pub description: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub n: usize,
    pub group_type: GroupType,
    pub description: String,
    pub orbital: usize,
    pub s_max: SMax,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub actions_checked: usize,
    pub digraphs_checked: usize,
    pub degenerate_digraphs: usize,
    pub max_s_observed: Option<u32>,
    pub bound_status: BoundStatus,
    pub violations: Vec<Violation>,
    pub oracle_checks: usize,
    pub oracle_disagreements: Vec<String>,
    pub rejections: usize,
    pub exclusions: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool_version: String,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
    pub parameters: VerifyParams,
    pub catalog_sha256: Option<String>,
    pub records: Vec<ActionRecord>,
    pub rejections: Vec<RejectionRecord>,
    pub exclusions: Vec<Exclusion>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Orbital summaries of a transitive action: s_max by the criterion for
/// every digraph, cross-checked by enumeration within `arc_budget`.
pub fn analyze_action(action: &GroupAction, s_cap: u32, arc_budget: u64) -> Result<Vec<OrbitalSummary>> {
    let mut out = Vec::new();
    for d in orbitals(action)? {
        let degenerate = d.valency < 3;
        if d.pairing == Pairing::SelfPaired {
            out.push(OrbitalSummary {
                id: d.id,
                valency: d.valency,
                pairing: d.pairing,
                degenerate,
                s_max: None,
                divisibility_cap: None,
                witness_arc_path: vec![d.representative_arc.0, d.representative_arc.1],
                oracle: None,
            });
            continue;
        }
        let r = s_max_criterion(action, &d, s_cap)?;
        let probe = match r.s_max {
            SMax::Exact(s) => s + 1,
            SMax::AtLeast(s) => s,
        };
        let levels = arc_orbit_counts(action, &d, probe, arc_budget);
        let oracle = (!levels.is_empty()).then(|| OracleCheck {
            levels_checked: levels.len() as u32,
            agrees: levels
                .iter()
                .all(|l| r.s_max.transitive_at(l.s) == Some(l.orbits == 1)),
        });
        out.push(OrbitalSummary {
            id: d.id,
            valency: d.valency,
            pairing: d.pairing,
            degenerate,
            s_max: Some(r.s_max),
            divisibility_cap: r.divisibility_cap,
            witness_arc_path: r.witness_arc_path,
            oracle,
        });
    }
    Ok(out)
}

fn bound_status(orbitals: &[OrbitalSummary]) -> BoundStatus {
    let mut status = BoundStatus::Vacuous;
    for o in orbitals.iter().filter(|o| o.counts_toward_bound()) {
        let s = o.s_max.expect("digraphs carry s_max");
        let this = match s {
            SMax::Exact(v) if v <= 1 => BoundStatus::MetS1,
            SMax::Exact(v) if v <= S_BOUND => BoundStatus::MetS2,
            _ => BoundStatus::Violated,
        };
        status = match (status, this) {
            (BoundStatus::Violated, _) | (_, BoundStatus::Violated) => BoundStatus::Violated,
            (BoundStatus::MetS2, _) | (_, BoundStatus::MetS2) => BoundStatus::MetS2,
            _ => BoundStatus::MetS1,
        };
    }
    status
}

enum Outcome {
    Record(ActionRecord),
    Rejected(RejectionRecord),
    Excluded(Exclusion),
}

fn process(spec: &ActionSpec, params: &VerifyParams) -> Result<Outcome> {
    let (n, group_type, family, description) = (spec.n(), spec.group(), spec.family_tag(), spec.describe());
    let exclusion = |reason: String| {
        Outcome::Excluded(Exclusion {
            n,
            group_type,
            family,
            description: description.clone(),
            reason,
        })
    };
    let built = match spec.build(params.degree_cap) {
        Ok(b) => b,
        Err(e @ Error::Capacity { .. }) => {
            info!("n={n} {group_type} {description}: excluded ({e})");
            return Ok(exclusion(e.to_string()));
        }
        Err(e) => return Err(e),
    };
    match built {
        Instantiated::Accepted(action) => {
            debug!("n={n} {group_type} {description}: degree {}", action.degree());
            let orbitals = analyze_action(&action, params.s_cap, params.arc_budget)?;
            Ok(Outcome::Record(ActionRecord {
                n,
                group_type,
                family,
                description,
                degree: action.degree(),
                stabilizer_order: vertex_stabilizer_order(&action).to_string(),
                bound_status: bound_status(&orbitals),
                orbitals,
            }))
        }
        Instantiated::Rejected { action, reason } => {
            info!("n={n} {group_type} {description}: rejected ({reason})");
            let orbitals = match &action {
                Some(a) => analyze_action(a, params.s_cap, params.arc_budget)?,
                None => Vec::new(),
            };
            Ok(Outcome::Rejected(RejectionRecord {
                n,
                group_type,
                family,
                description,
                reason,
                degree: action.as_ref().map(GroupAction::degree),
                orbitals,
            }))
        }
    }
}

fn catalog_entries(params: &VerifyParams) -> Result<(Vec<CatalogEntry>, Option<String>)> {
    if !params.include_catalog {
        return Ok((Vec::new(), None));
    }
    match &params.catalog_path {
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
            Ok((load_catalog(path)?, Some(sha256_hex(&bytes))))
        }
        None => Ok((parse_catalog(BUNDLED_CATALOG)?, Some(sha256_hex(BUNDLED_CATALOG.as_bytes())))),
    }
}

/// Runs the full check. Per-action capacity failures become exclusions; any
/// other error aborts.
pub fn verify(params: &VerifyParams) -> Result<VerificationReport> {
    if params.n_min < 5 || params.n_min > params.n_max {
        return Err(Error::Parameter(format!(
            "degree range {}..={} must start at 5 or more",
            params.n_min, params.n_max
        )));
    }
    if params.degree_cap == 0 || params.s_cap == 0 {
        return Err(Error::Parameter("caps must be positive".into()));
    }
    let (catalog, catalog_sha256) = catalog_entries(params)?;
    let mut specs = Vec::new();
    for n in params.n_min..=params.n_max {
        for &g in &params.groups {
            specs.extend(family_specs(n, g, &params.families));
            specs.extend(
                catalog
                    .iter()
                    .filter(|e| e.n == n && e.group == g)
                    .cloned()
                    .map(ActionSpec::Catalog),
            );
        }
    }
    info!("{} candidate actions", specs.len());
    let outcomes = specs
        .par_iter()
        .map(|s| process(s, params))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::new();
    let mut rejections = Vec::new();
    let mut exclusions = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Record(r) => records.push(r),
            Outcome::Rejected(r) => rejections.push(r),
            Outcome::Excluded(e) => exclusions.push(e),
        }
    }
    let summary = summarize(&records, &rejections, &exclusions);
    if summary.actions_checked == 0 {
        warn!("no action was checked; the bound holds vacuously");
    }
    for d in &summary.oracle_disagreements {
        warn!("criterion and enumeration disagree: {d}");
    }
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        parameters: params.clone(),
        catalog_sha256,
        records,
        rejections,
        exclusions,
        summary,
    })
}

fn summarize(records: &[ActionRecord], rejections: &[RejectionRecord], exclusions: &[Exclusion]) -> Summary {
    let mut digraphs = 0;
    let mut degenerate = 0;
    let mut max_s = None;
    let mut violations = Vec::new();
    let mut oracle_checks = 0;
    let mut disagreements = Vec::new();
    for r in records {
        for o in &r.orbitals {
            if o.pairing == Pairing::SelfPaired {
                continue;
            }
            if o.degenerate {
                degenerate += 1;
                continue;
            }
            digraphs += 1;
            let s = o.s_max.expect("digraphs carry s_max");
            max_s = max_s.max(Some(s.value()));
            if !matches!(s, SMax::Exact(v) if v <= S_BOUND) {
                violations.push(Violation {
                    n: r.n,
                    group_type: r.group_type,
                    description: r.description.clone(),
                    orbital: o.id,
                    s_max: s,
                });
            }
        }
    }
    let all = records
        .iter()
        .map(|r| (r.n, r.group_type, &r.description, &r.orbitals))
        .chain(rejections.iter().map(|r| (r.n, r.group_type, &r.description, &r.orbitals)));
    for (n, g, desc, orbitals) in all {
        for o in orbitals {
            if let Some(check) = &o.oracle {
                oracle_checks += 1;
                if !check.agrees {
                    disagreements.push(format!("n={n} {g} {desc} orbital {}", o.id));
                }
            }
        }
    }
    let bound_status = if !violations.is_empty() {
        BoundStatus::Violated
    } else {
        match max_s {
            None => BoundStatus::Vacuous,
            Some(s) if s <= 1 => BoundStatus::MetS1,
            Some(_) => BoundStatus::MetS2,
        }
    };
    Summary {
        actions_checked: records.len(),
        digraphs_checked: digraphs,
        degenerate_digraphs: degenerate,
        max_s_observed: max_s,
        bound_status,
        violations,
        oracle_checks,
        oracle_disagreements: disagreements,
        rejections: rejections.len(),
        exclusions: exclusions.len(),
    }
}
