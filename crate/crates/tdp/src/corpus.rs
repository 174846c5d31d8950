//! Corpus generation and the verification harness.
//!
//! [`generate_corpus`] enumerates complete fans with at most `max_rays`
//! primitive rays inside a coordinate box, modulo orientation-preserving
//! unimodular equivalence (one canonical representative per class), with
//! optional del Pezzo / all-T filters and an optional extension by one or
//! two rounds of Q-Gorenstein deformation records.
//!
//! [`verify_corpus`] runs the formula checks over the corpus: the
//! Noether identity `K^2 + rho + sum mu = 10`, the section-count formula
//! `h^0(-nK) = n(n+1)/2 K^2 + 1`, the `s <= rho + 2` bound, and
//! `varsigma = 0`, plus exact Noether-defect conservation along every
//! deformation step.

use crate::arith;
use crate::qgdeform::{self, SurfaceRecord};
use crate::quotsing::SingularityClass;
use crate::toric::{Fan, ToricSurface};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "TDP_THREADS";

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub max_rays: usize,
    pub coord_bound: i64,
    pub require_del_pezzo: bool,
    pub require_all_t: bool,
    /// Accept nef-and-big (not necessarily ample) anticanonical classes
    /// in place of the ample test.
    pub nef_big: bool,
    /// Rounds of deformation records appended to the fan records (0..=2).
    pub depth: u8,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            max_rays: 6,
            coord_bound: 8,
            require_del_pezzo: true,
            require_all_t: true,
            nef_big: false,
            depth: 0,
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_rays < 3 {
            return Err(Error::InvalidInput(format!(
                "max_rays must be at least 3, got {}",
                self.max_rays
            )));
        }
        if self.coord_bound < 1 {
            return Err(Error::InvalidInput(format!(
                "coord_bound must be at least 1, got {}",
                self.coord_bound
            )));
        }
        if self.depth > 2 {
            return Err(Error::InvalidInput(format!(
                "deformation depth must be 0, 1, or 2, got {}",
                self.depth
            )));
        }
        Ok(())
    }
}

/// One corpus element: a fan with its record at depth 0, a bare record
/// at deformation depths 1 and 2.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub fan: Option<Fan>,
    pub record: SurfaceRecord,
    pub depth: u8,
}

/// Builds a rayon pool sized by `TDP_THREADS` (unset or 0 = default).
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Enumerates the corpus deterministically: fans in canonical-form order,
/// then deformation records in generation order, deduplicated by content.
pub fn generate_corpus(cfg: &CorpusConfig) -> Result<Vec<CorpusEntry>> {
    cfg.validate()?;
    let fans = enumerate_fans(cfg);
    let mut entries: Vec<CorpusEntry> = Vec::with_capacity(fans.len());
    for fan in fans {
        let record = qgdeform::record_from_fan(&fan, "fan");
        entries.push(CorpusEntry {
            fan: Some(fan),
            record,
            depth: 0,
        });
    }

    let mut frontier: Vec<SurfaceRecord> = entries.iter().map(|e| e.record.clone()).collect();
    let mut seen: BTreeSet<RecordKey> = frontier.iter().map(record_key).collect();
    for depth in 1..=cfg.depth {
        let mut next = Vec::new();
        for parent in &frontier {
            if !parent.all_t() {
                continue;
            }
            for child in qgdeform::enumerate_deformations(parent)? {
                if seen.insert(record_key(&child)) {
                    next.push(child);
                }
            }
        }
        for record in &next {
            entries.push(CorpusEntry {
                fan: None,
                record: record.clone(),
                depth,
            });
        }
        frontier = next;
    }
    Ok(entries)
}

type RecordKey = (u64, BigRational, Vec<SingularityClass>);

fn record_key(r: &SurfaceRecord) -> RecordKey {
    (r.rho(), r.k_squared().clone(), r.singularities().to_vec())
}

/// All complete fans in the box modulo unimodular equivalence and
/// rotation, one canonical representative each, in canonical order.
pub fn enumerate_fans(cfg: &CorpusConfig) -> Vec<Fan> {
    let candidates = primitive_vectors(cfg.coord_bound);
    let pool = thread_pool();
    let raw: Vec<Vec<Vec<usize>>> = pool.install(|| {
        (0..candidates.len())
            .into_par_iter()
            .map(|anchor| {
                let mut found = Vec::new();
                let mut path = vec![anchor];
                dfs(&candidates, cfg, anchor, &mut path, &mut found);
                found
            })
            .collect()
    });

    let mut classes: BTreeMap<Vec<(BigInt, BigInt)>, Fan> = BTreeMap::new();
    for index_list in raw.into_iter().flatten() {
        let rays = index_list
            .iter()
            .map(|&i| candidates[i].into())
            .collect::<Vec<_>>();
        let Ok(fan) = Fan::from_rays(rays) else {
            continue;
        };
        if cfg.require_all_t && !fan.singularity_content().iter().all(|c| c.is_t()) {
            continue;
        }
        if cfg.require_del_pezzo {
            let ok = if cfg.nef_big {
                fan.anticanonical_nef_big()
            } else {
                fan.is_del_pezzo()
            };
            if !ok {
                continue;
            }
        }
        let key = fan.canonical_rays();
        if !classes.contains_key(&key) {
            let canonical = Fan::from_rays(
                key.iter()
                    .map(|(x, y)| crate::toric::LatticeVector {
                        x: x.clone(),
                        y: y.clone(),
                    })
                    .collect(),
            )
            .expect("canonical rays form a valid fan");
            classes.insert(key, canonical);
        }
    }
    classes.into_values().collect()
}

/// Primitive vectors of the box, sorted counterclockwise from the
/// positive x-axis.
fn primitive_vectors(bound: i64) -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            if (x, y) != (0, 0) && gcd_i64(x, y) == 1 {
                v.push((x, y));
            }
        }
    }
    v.sort_by(|&a, &b| angle_cmp_i64(a, b));
    v
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

fn det_i64(v: (i64, i64), w: (i64, i64)) -> i64 {
    v.0 * w.1 - v.1 * w.0
}

fn angle_cmp_i64(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    let half = |v: (i64, i64)| u8::from(!(v.1 > 0 || (v.1 == 0 && v.0 > 0)));
    half(a).cmp(&half(b)).then_with(|| det_i64(b, a).cmp(&0))
}

/// Does the cone `(v, w)` (positive determinant) carry a T-germ?
fn cone_is_t_i64(v: (i64, i64), w: (i64, i64)) -> bool {
    let d = det_i64(v, w);
    debug_assert!(d > 0);
    if d == 1 {
        return true;
    }
    // v2 = a*v + d*u with det(v, u) = 1; germ is 1/d(1, -a mod d)
    let (g, s, t) = arith::egcd_i128(v.0 as i128, v.1 as i128);
    debug_assert_eq!(g, 1);
    let a = w.0 as i128 * s + w.1 as i128 * t;
    let weight = (-a).rem_euclid(d as i128) as u64;
    arith::t_data_u64(d as u64, weight).is_some()
}

/// Left-turn test at `b` for the polygon `a -> b -> c`; strictly convex
/// vertices are positive, straight angles zero.
fn turn_i64(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    det_i64((b.0 - a.0, b.1 - a.1), (c.0 - b.0, c.1 - b.1))
}

fn dfs(
    cand: &[(i64, i64)],
    cfg: &CorpusConfig,
    anchor: usize,
    path: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().expect("path is never empty");
    if path.len() >= 3 {
        // closing conditions: wrap cone, wrap convexity, wrap T-ness
        let wrap_det = det_i64(cand[last], cand[anchor]);
        if wrap_det > 0 {
            let mut ok = true;
            if cfg.require_all_t && !cone_is_t_i64(cand[last], cand[anchor]) {
                ok = false;
            }
            if ok && cfg.require_del_pezzo {
                let prev = path[path.len() - 2];
                let second = path[1];
                let t1 = turn_i64(cand[prev], cand[last], cand[anchor]);
                let t2 = turn_i64(cand[last], cand[anchor], cand[second]);
                let lo = if cfg.nef_big { 0 } else { 1 };
                if t1 < lo || t2 < lo {
                    ok = false;
                }
            }
            if ok {
                found.push(path.clone());
            }
        }
    }
    if path.len() == cfg.max_rays {
        return;
    }
    for next in (last + 1)..cand.len() {
        let d = det_i64(cand[last], cand[next]);
        if d <= 0 {
            // candidates are in angular order: every later ray is at
            // least half a turn away as well
            break;
        }
        if cfg.require_all_t && !cone_is_t_i64(cand[last], cand[next]) {
            continue;
        }
        if cfg.require_del_pezzo && path.len() >= 2 {
            let prev = path[path.len() - 2];
            let t = turn_i64(cand[prev], cand[last], cand[next]);
            let lo = if cfg.nef_big { 0 } else { 1 };
            if t < lo {
                continue;
            }
        }
        path.push(next);
        dfs(cand, cfg, anchor, path, found);
        path.pop();
    }
}

/// Per-check pass/fail counters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckCounts {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub fans: usize,
    pub records: usize,
    pub noether: CheckCounts,
    pub riemann_roch: CheckCounts,
    pub bound: CheckCounts,
    pub varsigma: CheckCounts,
    pub failures: Vec<serde_json::Value>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.noether.failed == 0
            && self.riemann_roch.failed == 0
            && self.bound.failed == 0
            && self.varsigma.failed == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts = |c: &CheckCounts| serde_json::json!({"passed": c.passed, "failed": c.failed});
        serde_json::json!({
            "fans": self.fans,
            "records": self.records,
            "checks": {
                "noether": counts(&self.noether),
                "riemann_roch": counts(&self.riemann_roch),
                "bound": counts(&self.bound),
                "varsigma": counts(&self.varsigma),
            },
            "failures": self.failures,
        })
    }
}

/// Generates the corpus and runs every check.
pub fn verify_corpus(cfg: &CorpusConfig) -> Result<VerificationReport> {
    let entries = generate_corpus(cfg)?;
    let mut report = VerificationReport {
        fans: entries.iter().filter(|e| e.fan.is_some()).count(),
        records: entries.len(),
        noether: CheckCounts::default(),
        riemann_roch: CheckCounts::default(),
        bound: CheckCounts::default(),
        varsigma: CheckCounts::default(),
        failures: Vec::new(),
    };
    let fail = |failures: &mut Vec<serde_json::Value>,
                    counts: &mut CheckCounts,
                    ok: bool,
                    check: &str,
                    record: &SurfaceRecord,
                    detail: String| {
        if ok {
            counts.passed += 1;
        } else {
            counts.failed += 1;
            failures.push(serde_json::json!({
                "check": check,
                "detail": detail,
                "record": record.to_json(),
            }));
        }
    };

    for entry in &entries {
        let record = &entry.record;
        if record.all_t() {
            let defect = record.noether_defect();
            let ok = defect == Some(BigRational::zero());
            fail(
                &mut report.failures,
                &mut report.noether,
                ok,
                "noether",
                record,
                format!("noether defect {:?}", defect.map(|d| d.to_string())),
            );
        }
        let margin = record.bound_report().margin;
        fail(
            &mut report.failures,
            &mut report.bound,
            margin >= 0,
            "bound",
            record,
            format!("margin {margin}"),
        );
        if let Some(fan) = &entry.fan {
            let ok = fan.varsigma() == 0;
            fail(
                &mut report.failures,
                &mut report.varsigma,
                ok,
                "varsigma",
                record,
                format!("varsigma {}", fan.varsigma()),
            );
            let surface = ToricSurface::new(fan.clone());
            if surface.all_t()
                && (surface.is_del_pezzo() || fan.anticanonical_nef_big())
            {
                let k2 = surface.k_squared().clone();
                let mut ok = true;
                let mut detail = String::new();
                for n in 1..=5u32 {
                    let count = fan.anticanonical_point_count(n);
                    let expect = BigRational::from_integer(BigInt::from(n) * (n + 1) / 2u32)
                        * &k2
                        + BigRational::one();
                    if BigRational::from_integer(count.clone()) != expect {
                        ok = false;
                        detail = format!("h^0(-{n}K) = {count}, formula gives {expect}");
                        break;
                    }
                }
                fail(
                    &mut report.failures,
                    &mut report.riemann_roch,
                    ok,
                    "riemann_roch",
                    record,
                    detail,
                );
            }
        }
    }

    // deformation steps conserve the Noether defect exactly
    if cfg.depth > 0 {
        let parents: Vec<&SurfaceRecord> = entries
            .iter()
            .filter(|e| e.depth < cfg.depth && e.record.all_t())
            .map(|e| &e.record)
            .collect();
        for parent in parents {
            let base = parent.noether_defect();
            for child in qgdeform::enumerate_deformations(parent)? {
                let ok = child.noether_defect() == base;
                fail(
                    &mut report.failures,
                    &mut report.noether,
                    ok,
                    "noether",
                    &child,
                    "deformation step changed the Noether defect".into(),
                );
            }
        }
    }
    Ok(report)
}
