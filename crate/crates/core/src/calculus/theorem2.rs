use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::chevalley::Representation;
use crate::par::Exec;
use crate::ring::{localise_finite, Elem, FiniteRing, Ideal, RingError};
use crate::roots::RootData;
use crate::subgroups::{congruence_subgroup, enumerate_elementary, GroupDescriptor, SubgroupError, SubgroupLevel};

/// Outcome of the continuity check for one choice of `s, p, k`.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Report {
    pub system: String,
    pub ring: String,
    pub s: String,
    pub p: u32,
    pub k: u32,
    /// Largest `r` tried.
    pub r: u32,
    /// `R_s`, or `0` for the zero ring.
    pub localisation: String,
    /// `|E(Φ, F_s(s^p R))|` inside `G(Φ, R_s)`.
    pub target_order: usize,
    pub checked_pairs: u64,
    /// Smallest `r ≤ self.r` for which every commutator lands in the target.
    pub minimal_r: Option<u32>,
    pub degenerate: bool,
    pub notes: Vec<String>,
    pub runtime_ms: u64,
}

impl Theorem2Report {
    pub fn holds(&self) -> bool {
        self.minimal_r.is_some()
    }
}

/// Checks `[e, F_s(g)] ∈ E(Φ, F_s(s^p R))` for every generator
/// `e = x_α(ξ / s^k)` of `E(Φ, (1/s^k) R)` and every `g ∈ G(Φ, R, s^r R)`, for
/// `r = 0, 1, ...` up to the given bound, and reports the first `r` that
/// works.
///
/// Over a finite ring `F_s(s)` is a unit of `R_s`, so the target is the whole
/// local group and the check is degenerate; the report says so.
#[allow(clippy::too_many_arguments)]
pub fn theorem2_verify(
    system: &str,
    ring: &Arc<FiniteRing>,
    s: Elem,
    p: u32,
    k: u32,
    r: u32,
    cap: usize,
    exec: Exec,
) -> Result<Theorem2Report, SubgroupError> {
    let t0 = Instant::now();
    let data = RootData::parse(system)?;
    let desc = GroupDescriptor::new(Arc::new(Representation::default_for(data)?), ring.clone())?;
    let mut report = Theorem2Report {
        system: desc.system().name(),
        ring: ring.name().to_string(),
        s: ring.label(s).to_string(),
        p,
        k,
        r,
        localisation: String::new(),
        target_order: 1,
        checked_pairs: 0,
        minimal_r: None,
        degenerate: true,
        notes: Vec::new(),
        runtime_ms: 0,
    };
    let loc = match localise_finite(ring, s) {
        Ok(loc) => loc,
        Err(RingError::NilpotentDenominator(_)) => {
            report.localisation = "0".to_string();
            report.minimal_r = Some(0);
            report
                .notes
                .push("R_s is the zero ring, so every commutator is trivial there".to_string());
            report.runtime_ms = t0.elapsed().as_millis() as u64;
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    let rs = loc.target.clone();
    report.localisation = rs.name().to_string();
    let local = desc.over(rs.clone())?;
    let level = Ideal::generated(rs.clone(), &[loc.apply(ring.pow_e(s, p))]);
    let target = enumerate_elementary(&local, &SubgroupLevel::Ideal(level), cap, exec)?;
    report.target_order = target.order();
    let denominator = rs.pow_e(loc.image_of_s_inverse, k);
    let mut gens = Vec::new();
    for alpha in desc.system().ids() {
        for xi in ring.elements() {
            let param = rs.mul_e(loc.apply(xi), denominator);
            if param != rs.zero_e() {
                gens.push(local.unipotent(alpha, param));
            }
        }
    }
    for j in 0..=r {
        let ideal = Ideal::generated(ring.clone(), &[ring.pow_e(s, j)]);
        let kernel = congruence_subgroup(&desc, &ideal, cap, exec)?;
        let images: Vec<_> = kernel.elements().map(|g| g.reduce(&loc.projection)).collect();
        let ok = exec
            .map(&images, |fg| gens.iter().all(|e| target.contains(&local.commutator(e, fg))))
            .into_iter()
            .all(|b| b);
        report.checked_pairs += (images.len() * gens.len()) as u64;
        if ok {
            report.minimal_r = Some(j);
            break;
        }
    }
    report
        .notes
        .push("F_s(s) is a unit of R_s, so the target is all of E(R_s) = G(R_s)".to_string());
    report.runtime_ms = t0.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroups::DEFAULT_ORDER_CAP;

    #[test]
    fn degenerate_instances_hold_at_r_zero() {
        let z4 = Arc::new(FiniteRing::integers_mod(4).unwrap());
        let rep = theorem2_verify("A2", &z4, z4.int(2), 1, 1, 2, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
        assert_eq!((rep.minimal_r, rep.localisation.as_str()), (Some(0), "0"));
        let rep = theorem2_verify("A2", &z4, z4.int(3), 1, 1, 1, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
        assert_eq!(rep.minimal_r, Some(0));
        assert_eq!(rep.target_order, 43008);
        assert_eq!(rep.checked_pairs, 43008 * 18);
        let z9 = Arc::new(FiniteRing::integers_mod(9).unwrap());
        let rep = theorem2_verify("A2", &z9, z9.int(3), 1, 0, 1, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
        assert!(rep.holds() && rep.degenerate);
    }
}
