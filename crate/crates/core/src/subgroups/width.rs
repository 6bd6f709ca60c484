use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::table::{LengthBasis, SubgroupTable};
use super::SubgroupError;
use crate::par::Exec;
use crate::ring::Elem;

/// Pair count above which the width scan samples instead of exhausting.
pub const DEFAULT_PAIR_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WidthMode {
    Exhaustive,
    /// Stratified by the first argument: every stratum draws its second
    /// arguments from its own generator seeded with `seed` and the stratum
    /// index.
    Sampled { samples: u64, seed: u64 },
}

/// Lengths of the commutators `[x, y]` in the elementary generators of the
/// ambient group.
#[derive(Clone, Debug, Serialize)]
pub struct WidthReport {
    pub group: String,
    pub x: String,
    pub y: String,
    pub x_order: u64,
    pub y_order: u64,
    /// Largest length seen.
    pub n: u32,
    pub histogram: BTreeMap<u32, u64>,
    pub pairs: u64,
    pub mode: WidthMode,
    pub runtime_ms: u64,
}

/// Scans `[x, y]` for `x ∈ X`, `y ∈ Y`, looking up each commutator's
/// distance in `ambient`, which must be an enumeration of the whole group
/// over its elementary generators.
pub fn commutator_width(
    ambient: &SubgroupTable,
    x: &SubgroupTable,
    y: &SubgroupTable,
    pair_cap: u64,
    seed: u64,
    exec: Exec,
) -> Result<WidthReport, SubgroupError> {
    let t0 = Instant::now();
    let desc = ambient.descriptor();
    if ambient.length_basis() != LengthBasis::Generators
        || desc.label() != x.descriptor().label()
        || desc.label() != y.descriptor().label()
    {
        return Err(SubgroupError::AmbientMismatch);
    }
    let d2 = desc.dim() * desc.dim();
    let inverses = |t: &SubgroupTable| -> Vec<Elem> { t.elements().flat_map(|g| desc.inverse(&g).data).collect() };
    let x_inv = inverses(x);
    let y_inv = inverses(y);
    let (nx, ny) = (x.order(), y.order());
    let total = nx as u64 * ny as u64;

    // Strata: which x indices are scanned and which y indices each draws.
    let exhaustive = total <= pair_cap;
    let strata: Vec<usize> = if exhaustive || (nx as u64) <= pair_cap {
        (0..nx).collect()
    } else {
        (0..pair_cap as usize).map(|i| (i as u128 * nx as u128 / pair_cap as u128) as usize).collect()
    };
    let per_stratum = if exhaustive { ny as u64 } else { (pair_cap / strata.len() as u64).max(1) };

    let scan = |s: usize| -> Result<Vec<u64>, SubgroupError> {
        let i = strata[s];
        let xm = x.element_slice(i);
        let xi = &x_inv[i * d2..(i + 1) * d2];
        let mut hist = Vec::new();
        let (mut t1, mut t2, mut t3) = (vec![Elem(0); d2], vec![Elem(0); d2], vec![Elem(0); d2]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        for step in 0..per_stratum {
            let j = if exhaustive { step as usize } else { rng.gen_range(0..ny) };
            desc.mul_into(xm, y.element_slice(j), &mut t1);
            desc.mul_into(&t1, xi, &mut t2);
            desc.mul_into(&t2, &y_inv[j * d2..(j + 1) * d2], &mut t3);
            let len = ambient.length_of_key(desc.key(&t3)).ok_or(SubgroupError::AmbientMismatch)? as usize;
            if hist.len() <= len {
                hist.resize(len + 1, 0);
            }
            hist[len] += 1;
        }
        Ok(hist)
    };
    let parts = exec.map_range(strata.len(), scan);
    let mut histogram = BTreeMap::new();
    for part in parts {
        for (len, count) in part?.into_iter().enumerate() {
            if count > 0 {
                *histogram.entry(len as u32).or_insert(0) += count;
            }
        }
    }
    let pairs: u64 = histogram.values().sum();
    let n = histogram.keys().next_back().copied().unwrap_or(0);
    Ok(WidthReport {
        group: desc.label(),
        x: x.name().to_string(),
        y: y.name().to_string(),
        x_order: nx as u64,
        y_order: ny as u64,
        n,
        histogram,
        pairs,
        mode: if exhaustive { WidthMode::Exhaustive } else { WidthMode::Sampled { samples: pairs, seed } },
        runtime_ms: t0.elapsed().as_millis() as u64,
    })
}

/// `length,count` rows of the histogram.
pub fn width_csv(report: &WidthReport) -> String {
    let mut out = String::from("length,count\n");
    for (l, c) in &report.histogram {
        out.push_str(&format!("{l},{c}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ideal;
    use crate::subgroups::{ambient_table, enumerate_elementary, GroupDescriptor, SubgroupLevel, DEFAULT_ORDER_CAP};

    #[test]
    fn width_over_z2_and_trivial_second_argument() {
        let d = GroupDescriptor::parse("A2", "Z/2").unwrap();
        let g = ambient_table(&d, DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
        let one = enumerate_elementary(&d, &SubgroupLevel::Ideal(Ideal::zero(d.ring().clone())), DEFAULT_ORDER_CAP, Exec::Parallel).unwrap();
        let r = commutator_width(&g, &g, &one, DEFAULT_PAIR_CAP, 0, Exec::Parallel).unwrap();
        assert_eq!((r.n, r.pairs), (0, 168));
        let full = commutator_width(&g, &g, &g, DEFAULT_PAIR_CAP, 0, Exec::Parallel).unwrap();
        assert_eq!(full.mode, WidthMode::Exhaustive);
        assert_eq!(full.pairs, 168 * 168);
        assert!(full.n >= 1 && full.n <= g.max_length());
        let seq = commutator_width(&g, &g, &g, DEFAULT_PAIR_CAP, 0, Exec::Sequential).unwrap();
        assert_eq!(seq.histogram, full.histogram);
        let sampled = commutator_width(&g, &g, &g, 1000, 7, Exec::Parallel).unwrap();
        assert!(matches!(sampled.mode, WidthMode::Sampled { samples: 840, seed: 7 }));
        assert!(sampled.n <= full.n);
        assert!(width_csv(&full).starts_with("length,count\n0,"));
    }
}
