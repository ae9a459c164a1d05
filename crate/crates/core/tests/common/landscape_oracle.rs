//! Brute-force reference for the landscape's subgroup level.
//!
//! The reference rebuilds the single-linkage tree by repeatedly merging the
//! two closest clusters (minimum member distance, recomputed from scratch),
//! scores every cut with its own meta-contrast, and takes the maximum over
//! the intermediate cuts.

use std::collections::BTreeSet;

use proptest::prelude::*;

use socmind::landscape::{
    best_intermediate_cut, build_social_landscape, meta_contrast_ratio, AgentFeatureMatrix,
    AgenticStructure, LandscapeParams, LevelKind, MetaContrastScore,
};
use socmind::AgentId;

use super::{run_cases, Check};

pub const CASES: u32 = 200;

type Partition = Vec<BTreeSet<usize>>;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Every partition on the naive merge path, singletons first.
fn naive_tree_cuts(points: &[Vec<f64>]) -> Vec<Partition> {
    let mut clusters: Partition = (0..points.len()).map(|i| BTreeSet::from([i])).collect();
    let mut cuts = vec![clusters.clone()];
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        let d = dist(&points[i], &points[j]);
                        if d < best.0 {
                            best = (d, a, b);
                        }
                    }
                }
            }
        }
        let moved = clusters.remove(best.2);
        clusters[best.1].extend(moved);
        cuts.push(clusters.clone());
    }
    cuts
}

/// `None` stands for an unbounded ratio.
fn naive_meta_contrast(points: &[Vec<f64>], partition: &Partition) -> Option<f64> {
    let label = |i: usize| partition.iter().position(|c| c.contains(&i)).unwrap();
    let (mut w, mut nw, mut b, mut nb) = (0.0, 0, 0.0, 0);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = dist(&points[i], &points[j]);
            if label(i) == label(j) {
                w += d;
                nw += 1;
            } else {
                b += d;
                nb += 1;
            }
        }
    }
    if nw == 0 || nb == 0 {
        return Some(1.0);
    }
    let (w, b) = (w / nw as f64, b / nb as f64);
    match (w == 0.0, b == 0.0) {
        (true, true) => Some(1.0),
        (true, false) => None,
        _ => Some(b / w),
    }
}

fn as_partition(structures: &[AgenticStructure]) -> Partition {
    let mut p: Partition = structures
        .iter()
        .map(|s| s.members.iter().map(|a| a.0 as usize).collect())
        .collect();
    p.sort();
    p
}

fn matrix(points: &[Vec<f64>]) -> AgentFeatureMatrix {
    AgentFeatureMatrix::new(
        (0..points.len() as u32).map(AgentId).collect(),
        points.to_vec(),
    )
    .unwrap()
}

fn score_value(s: MetaContrastScore) -> Option<f64> {
    match s {
        MetaContrastScore::Finite(v) => Some(v),
        MetaContrastScore::Max => None,
    }
}

fn same_score(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= 1e-9 * x.abs().max(1.0),
        _ => false,
    }
}

/// Orders scores with `None` (unbounded) above every finite value.
fn greater(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (None, None) => false,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x > y + 1e-9 * y.abs().max(1.0),
    }
}

fn contexts() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..=6, 1usize..=3).prop_flat_map(|(n, dim)| {
        prop::collection::vec(prop::collection::vec(-5.0..5.0f64, dim), n)
    })
}

/// The selected cut is on the reference merge path and no other intermediate
/// cut on that path scores higher; the subgroup level exists exactly when
/// that best score beats the threshold.
pub fn selected_cut_is_maximal() -> Check {
    run_cases(CASES, contexts(), |points| {
        let features = matrix(&points);
        let cuts = naive_tree_cuts(&points);
        let intermediate = &cuts[1..cuts.len() - 1];
        let best = best_intermediate_cut(&features).unwrap();
        if intermediate.is_empty() {
            prop_assert!(best.is_none());
            return Ok(());
        }
        let (chosen, score) = best.expect("an intermediate cut exists");
        let chosen = as_partition(&chosen);
        prop_assert!(
            intermediate.iter().any(|c| {
                let mut c = c.clone();
                c.sort();
                c == chosen
            }),
            "chosen cut {chosen:?} is not on the reference merge path"
        );
        let reference: Vec<Option<f64>> = intermediate
            .iter()
            .map(|c| naive_meta_contrast(&points, c))
            .collect();
        let top = reference
            .iter()
            .copied()
            .reduce(|a, b| if greater(b, a) { b } else { a })
            .unwrap();
        prop_assert!(
            same_score(score_value(score), top),
            "chosen score {score:?}, reference maximum {top:?}"
        );
        prop_assert!(same_score(naive_meta_contrast(&points, &chosen), top));

        let params = LandscapeParams::default();
        let landscape = build_social_landscape(AgentId(0), &features, &params).unwrap();
        let sub = landscape.level(LevelKind::Subgroups);
        let beats = match top {
            None => true,
            Some(v) => v > params.fit_threshold,
        };
        prop_assert_eq!(sub.is_some(), beats);
        if let Some(level) = sub {
            prop_assert_eq!(as_partition(&level.structures), chosen);
        }
        Ok(())
    })
}

pub fn meta_contrast_is_scale_invariant() -> Check {
    run_cases(CASES, contexts(), |points| {
        let features = matrix(&points);
        let cuts = socmind::landscape::tree_cuts(&features, &socmind::landscape::single_linkage(&features));
        let base_best = best_intermediate_cut(&features).unwrap().map(|(c, _)| as_partition(&c));
        for k in [0.5, 2.0, 10.0] {
            let scaled = features.scaled(k);
            for cut in &cuts {
                let a = score_value(meta_contrast_ratio(cut, &features).unwrap());
                let b = score_value(meta_contrast_ratio(cut, &scaled).unwrap());
                prop_assert!(same_score(a, b), "k = {k}: {a:?} vs {b:?}");
            }
            let best = best_intermediate_cut(&scaled).unwrap().map(|(c, _)| as_partition(&c));
            prop_assert_eq!(&best, &base_best, "k = {}", k);
        }
        Ok(())
    })
}
