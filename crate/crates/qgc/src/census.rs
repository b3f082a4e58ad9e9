//! Co-spectrality census over graph families and lead-attachment resolution.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::TrigForm;
use crate::charfun::{phi_dirichlet, phi_neumann};
use crate::error::{QgcError, Result};
use crate::graph::{enumerate_connected, enumerate_trees, fuzzy_ball, CombGraph, VertexSet};

/// One lead attachment: forms computed at an orbit representative.
#[derive(Clone, Debug, Serialize)]
pub struct Attachment {
    pub vertex: usize,
    pub phi_d: TrigForm,
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberResolution {
    pub member: usize,
    pub attachments: Vec<Attachment>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusClass {
    pub phi_n: TrigForm,
    /// indices into the family's graph list
    pub members: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Vec<MemberResolution>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    /// witness (member a, member b) of coinciding Dirichlet forms, if any
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub schema: String,
    pub family: String,
    pub graphs: Vec<serde_json::Value>,
    pub classes: Vec<CensusClass>,
    pub notes: Vec<String>,
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = std::env::var("QGC_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| QgcError::Numeric(format!("thread pool: {e}")))
}

/// Groups the family by scalar-free equality of the Neumann forms.
pub fn cospectral_classes(family: &[CombGraph], family_name: &str) -> Result<CensusReport> {
    let pool = thread_pool()?;
    let forms: Vec<TrigForm> = pool.install(|| {
        family
            .par_iter()
            .map(phi_neumann)
            .collect::<Result<Vec<_>>>()
    })?;
    let mut classes: Vec<CensusClass> = Vec::new();
    for (idx, f) in forms.iter().enumerate() {
        match classes.iter_mut().find(|c| c.phi_n.trig_equal(f)) {
            Some(c) => c.members.push(idx),
            None => classes.push(CensusClass {
                phi_n: f.clone(),
                members: vec![idx],
                resolution: None,
                verdict: None,
                witness: None,
            }),
        }
    }
    classes.sort_by_key(|a| a.phi_n.sort_key());
    Ok(CensusReport {
        schema: "qgc-census-1".into(),
        family: family_name.into(),
        graphs: family.iter().map(|g| g.to_json()).collect(),
        classes,
        notes: vec![],
    })
}

/// Computes the Dirichlet form at one representative per vertex orbit for
/// each class member and decides whether the attachments separate members:
/// resolved iff no form produced by one member equals a form of another.
pub fn resolve_by_lead(family: &[CombGraph], class: &mut CensusClass) -> Result<()> {
    let mut tables: Vec<MemberResolution> = Vec::new();
    for &idx in &class.members {
        let g = &family[idx];
        let orbits = g.vertex_orbits()?;
        let mut attachments = Vec::new();
        for &v in &orbits.representatives {
            let phi_d = phi_dirichlet(g, &VertexSet::from([v]))?;
            attachments.push(Attachment { vertex: v, phi_d });
        }
        tables.push(MemberResolution {
            member: idx,
            attachments,
        });
    }
    let mut witness = None;
    'outer: for (i, ti) in tables.iter().enumerate() {
        for tj in &tables[i + 1..] {
            for ai in &ti.attachments {
                for aj in &tj.attachments {
                    if ai.phi_d.trig_equal(&aj.phi_d) {
                        witness = Some((ti.member, tj.member));
                        break 'outer;
                    }
                }
            }
        }
    }
    class.verdict = Some(if witness.is_none() {
        "resolved".into()
    } else {
        "unresolved".into()
    });
    class.witness = witness;
    class.resolution = Some(tables);
    Ok(())
}

/// Full census over a family: classes plus resolution tables for every
/// multi-member class.
pub fn census(family: &[CombGraph], family_name: &str) -> Result<CensusReport> {
    let mut report = cospectral_classes(family, family_name)?;
    for class in &mut report.classes {
        if class.members.len() > 1 {
            resolve_by_lead(family, class)?;
        }
    }
    Ok(report)
}

/// All connected graphs on at most `max_n` vertices, one per class. The
/// single-vertex graph is omitted: with no edge there is no metric problem.
pub fn graph_family(max_n: usize) -> Result<Vec<CombGraph>> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        out.extend(enumerate_connected(n)?);
    }
    Ok(out)
}

/// All trees on at most `max_n` vertices, one per class; the single-vertex
/// tree is omitted for the same reason as in [`graph_family`].
pub fn tree_family(max_n: usize) -> Result<Vec<CombGraph>> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        out.extend(enumerate_trees(n)?);
    }
    Ok(out)
}

/// Fuzzy-ball census for bulk size n: members FB_(r, n-r) for r = 1..n/2.
/// Verifies the single co-spectral class, resolves by the two off-bulk
/// vertices, and reports (without asserting) whether bulk attachments
/// coincide across members.
pub fn fuzzy_ball_family(n: usize) -> Result<CensusReport> {
    if !(4..=8).contains(&n) {
        return Err(QgcError::InvalidInput(
            "fuzzy-ball census supports bulk sizes 4..=8".into(),
        ));
    }
    let members: Vec<(usize, CombGraph)> = (1..=n / 2)
        .map(|r| Ok((r, fuzzy_ball(r, n - r)?)))
        .collect::<Result<Vec<_>>>()?;
    let graphs: Vec<CombGraph> = members.iter().map(|(_, g)| g.clone()).collect();
    let mut report = cospectral_classes(&graphs, &format!("fuzzyballs-{n}"))?;
    // off-bulk resolution: vertices n (w1, r attachments) and n+1 (w2)
    for class in &mut report.classes {
        if class.members.len() <= 1 {
            class.verdict = Some("resolved".into());
            continue;
        }
        let mut tables = Vec::new();
        for &idx in &class.members {
            let g = &graphs[idx];
            let mut attachments = Vec::new();
            for v in [n, n + 1] {
                attachments.push(Attachment {
                    vertex: v,
                    phi_d: phi_dirichlet(g, &VertexSet::from([v]))?,
                });
            }
            tables.push(MemberResolution {
                member: idx,
                attachments,
            });
        }
        let mut witness = None;
        'outer: for (i, ti) in tables.iter().enumerate() {
            for tj in &tables[i + 1..] {
                for ai in &ti.attachments {
                    for aj in &tj.attachments {
                        if ai.phi_d.trig_equal(&aj.phi_d) {
                            witness = Some((ti.member, tj.member));
                            break 'outer;
                        }
                    }
                }
            }
        }
        class.verdict = Some(if witness.is_none() {
            "resolved".into()
        } else {
            "unresolved".into()
        });
        class.witness = witness;
        class.resolution = Some(tables);
    }
    // bulk-vertex attachments, reported without a verdict
    let bulk_forms: Vec<(usize, TrigForm)> = members
        .iter()
        .map(|(r, g)| Ok((*r, phi_dirichlet(g, &VertexSet::from([0usize]))?)))
        .collect::<Result<Vec<_>>>()?;
    let mut all_equal = true;
    for w in bulk_forms.windows(2) {
        if !w[0].1.trig_equal(&w[1].1) {
            all_equal = false;
        }
    }
    report.notes.push(format!(
        "bulk-vertex attachments across r values {}: {}",
        bulk_forms
            .iter()
            .map(|(r, _)| r.to_string())
            .collect::<Vec<_>>()
            .join(","),
        if all_equal {
            "coincide (observation only)"
        } else {
            "do not coincide (observation only)"
        }
    ));
    // the sine exponents actually realized, for comparison with the closed
    // form (n^2 - n - 4)/2 + r quoted elsewhere; computed ones are uniform
    let realized: Vec<String> = report
        .classes
        .iter()
        .flat_map(|c| c.resolution.iter().flatten())
        .flat_map(|t| t.attachments.iter())
        .map(|a| format!("a={} m={}", a.phi_d.a(), a.phi_d.m()))
        .collect();
    report.notes.push(format!(
        "off-bulk Dirichlet exponents realized: [{}]; these follow the uniform \
         E - V + 1 count and differ from the quadratic exponent formula \
         (n^2 - n - 4)/2 + r; surfaced here rather than silently reconciled",
        realized.join(", ")
    ));
    Ok(report)
}
