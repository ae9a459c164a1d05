use proptest::prelude::*;

use socmind::metrics::{
    aligned_ability, gsmi, gsmi_via_aligned_abilities, homogeneous_sr_approximation, ismi,
    ismi_via_aligned_abilities, social_resource, GoalAlignment, GroupContext, IndividualContext,
    SharedSocialIdentity, SociallyMindedAbility,
};

use super::{run_cases, Check};

pub const CASES: u32 = 1000;

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn signed() -> impl Strategy<Value = f64> {
    -1.0..=1.0f64
}

fn pairs(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((unit(), signed()), 0..=max)
}

fn triples(min: usize, max: usize) -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((unit(), unit(), signed()), min..=max)
}

fn ctx(sma: f64, pairs: &[(f64, f64)]) -> IndividualContext {
    IndividualContext::from_raw(sma, pairs).expect("generated in range")
}

fn group(members: &[(f64, f64, f64)]) -> GroupContext {
    GroupContext::from_raw(members).expect("generated in range")
}

/// Plain left-to-right evaluation of the defining sums.
fn naive_ismi(sma: f64, pairs: &[(f64, f64)]) -> f64 {
    sma * pairs.iter().map(|(s, g)| s * g).sum::<f64>()
}

fn naive_gsmi(members: &[(f64, f64, f64)]) -> f64 {
    members.iter().map(|(a, b, c)| a * b * c).sum::<f64>() / members.len() as f64
}

pub fn empty_context_is_zero() -> Check {
    run_cases(CASES, unit(), |sma| {
        let c = ctx(sma, &[]);
        prop_assert_eq!(ismi(&c), 0.0);
        prop_assert_eq!(social_resource(&c), 0.0);
        prop_assert_eq!(ismi_via_aligned_abilities(&c), 0.0);
        Ok(())
    })
}

pub fn null_contributor_is_neutral() -> Check {
    let strategy = (unit(), pairs(10), signed(), any::<prop::sample::Index>());
    run_cases(CASES, strategy, |(sma, pairs, ga, at)| {
        let mut extended = pairs.clone();
        extended.insert(at.index(pairs.len() + 1), (0.0, ga));
        let (a, b) = (ctx(sma, &pairs), ctx(sma, &extended));
        prop_assert_eq!(ismi(&a).to_bits(), ismi(&b).to_bits());
        prop_assert_eq!(social_resource(&a).to_bits(), social_resource(&b).to_bits());
        Ok(())
    })
}

pub fn ismi_is_bounded() -> Check {
    run_cases(CASES, (unit(), pairs(12)), |(sma, pairs)| {
        let v = ismi(&ctx(sma, &pairs));
        prop_assert!(v.abs() <= sma * pairs.len() as f64, "{v} exceeds {sma} x {}", pairs.len());
        Ok(())
    })
}

pub fn gsmi_in_unit_range() -> Check {
    run_cases(CASES, triples(1, 12), |members| {
        let v = gsmi(&group(&members));
        prop_assert!((-1.0..=1.0).contains(&v), "{v}");
        Ok(())
    })
}

/// ISMI = SMA x SR equals the sum of aligned abilities, and GSMI likewise,
/// bit for bit; both agree with naive evaluation to 1e-12.
pub fn aligned_ability_routes_agree() -> Check {
    run_cases(CASES, (unit(), pairs(12), triples(1, 12)), |(sma, pairs, members)| {
        let c = ctx(sma, &pairs);
        prop_assert_eq!(ismi(&c).to_bits(), ismi_via_aligned_abilities(&c).to_bits());
        prop_assert!((ismi(&c) - naive_ismi(sma, &pairs)).abs() <= 1e-12);
        let g = group(&members);
        prop_assert_eq!(gsmi(&g).to_bits(), gsmi_via_aligned_abilities(&g).to_bits());
        prop_assert!((gsmi(&g) - naive_gsmi(&members)).abs() <= 1e-12);
        Ok(())
    })
}

pub fn ismi_monotone_in_ga() -> Check {
    let strategy = (unit(), pairs(8), unit(), signed(), signed(), any::<prop::sample::Index>());
    run_cases(CASES, strategy, |(sma, pairs, ssi, ga1, ga2, at)| {
        let (lo, hi) = if ga1 <= ga2 { (ga1, ga2) } else { (ga2, ga1) };
        let i = at.index(pairs.len() + 1);
        let with = |ga: f64| {
            let mut p = pairs.clone();
            p.insert(i, (ssi, ga));
            ismi(&ctx(sma, &p))
        };
        let (a, b) = (with(lo), with(hi));
        prop_assert!(a <= b, "GA {lo} -> {hi} lowered ISMI {a} -> {b}");
        if ssi == 0.0 || sma == 0.0 {
            prop_assert_eq!(a, b);
        } else if sma * ssi * (hi - lo) > 1e-9 {
            prop_assert!(a < b, "not strictly increasing: {a} vs {b}");
        }
        Ok(())
    })
}

pub fn uniform_duplicate_invariance() -> Check {
    let strategy = (unit(), unit(), signed(), 1usize..=10, 1usize..=10);
    run_cases(CASES, strategy, |(a, b, c, n, extra)| {
        let base = vec![(a, b, c); n];
        let grown = vec![(a, b, c); n + extra];
        prop_assert_eq!(gsmi(&group(&base)).to_bits(), gsmi(&group(&grown)).to_bits());
        Ok(())
    })
}

pub fn below_average_dilution() -> Check {
    run_cases(CASES, (triples(1, 10), 0.001..=1.0f64), |(members, f)| {
        let before = gsmi(&group(&members));
        // A full-ability, fully identified newcomer whose SIGA sits a fraction
        // f of the way from the current mean down to -1.
        let aa = before - f * (before + 1.0);
        if before - aa <= 1e-9 {
            return Ok(());
        }
        let mut grown = members.clone();
        grown.push((1.0, 1.0, aa));
        let after = gsmi(&group(&grown));
        prop_assert!(after < before, "{before} -> {after} after adding AA {aa}");
        Ok(())
    })
}

pub fn homogeneous_approximation_exact() -> Check {
    let grid = (0u32..=(1 << 20)).prop_map(|k| k as f64 / (1u32 << 20) as f64);
    let strategy = (grid, signed(), 1usize..=12, unit());
    run_cases(CASES, strategy, |(ssi, ga, n, arbitrary_ssi)| {
        let exact = ctx(1.0, &vec![(ssi, ga); n]);
        let approx = homogeneous_sr_approximation(n as f64 * ssi, ga).unwrap();
        prop_assert_eq!(approx.to_bits(), social_resource(&exact).to_bits());

        let loose = ctx(1.0, &vec![(arbitrary_ssi, ga); n]);
        let sr = social_resource(&loose);
        let approx = homogeneous_sr_approximation(n as f64 * arbitrary_ssi, ga).unwrap();
        prop_assert!((approx - sr).abs() <= 2.0 * f64::EPSILON * sr.abs().max(f64::MIN_POSITIVE));
        Ok(())
    })
}

/// Each aligned ability lies in [-1, 1] and is the plain triple product.
pub fn aligned_ability_is_product() -> Check {
    run_cases(CASES, (unit(), unit(), signed()), |(a, s, g)| {
        let aa = aligned_ability(
            SociallyMindedAbility::new(a).unwrap(),
            SharedSocialIdentity::new(s).unwrap(),
            GoalAlignment::new(g).unwrap(),
        )
        .value();
        prop_assert!((aa - a * s * g).abs() <= 1e-15);
        Ok(())
    })
}

pub const ALL: [super::NamedCheck; 10] = [
    ("empty context is zero", empty_context_is_zero),
    ("SSI = 0 contributor is neutral", null_contributor_is_neutral),
    ("|ISMI| <= SMA x N", ismi_is_bounded),
    ("GSMI in [-1, 1]", gsmi_in_unit_range),
    ("aligned-ability routes agree exactly", aligned_ability_routes_agree),
    ("ISMI monotone in GA", ismi_monotone_in_ga),
    ("uniform duplicate member invariance", uniform_duplicate_invariance),
    ("below-average dilution", below_average_dilution),
    ("homogeneous SR approximation exact", homogeneous_approximation_exact),
    ("aligned ability is the triple product", aligned_ability_is_product),
];
