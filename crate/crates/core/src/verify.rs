//! The acceptance suite: eleven checks that tie every module to an exact
//! identity, an independent oracle or a closed form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num::{BigInt, BigRational, One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::charzeta::{choose_primes, dixon_mod_table, zeta_even, GroupTables};
use crate::liepipe::{bound_root, min_genus, run_pipeline, LieType, SimpleFactor};
use crate::localring::{LocalRingSpec, RingKind};
use crate::modgroup::{build_named, build_sl, NamedGroup, DEFAULT_ELEMENT_BUDGET};
use crate::padicpush::{analyze, standard_suite, Behavior, MonomialMapSpec};
use crate::polygraph::{replay_certificate, tree_edge_reduction, Graph};
use crate::varcount::{
    count_graph_variety, count_naive, count_with_order, finite_field, langweil_report,
    random_instance, GraphShape, GraphVarietyInstance, DEFAULT_BUDGET,
};
use crate::wordmap::{
    congruence_density_profile, cross_char_compare, fiber_counts_brute, fiber_distribution,
    frobenius_check_values, stabilization_series, zeta_from_fibers, BRUTE_FORCE_MAX_ORDER,
};

pub const CRITERIA: u8 = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(format!("unknown profile '{s}', expected quick or full")),
        }
    }
}

/// Deliberate bugs used to show that the suite notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Adds one to every fiber count before it is checked.
    FiberOffByOne,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub profile: Profile,
    pub seed: u64,
    pub fault: Option<Fault>,
    /// Where the pipeline criterion writes its DOT files, if anywhere.
    pub dot_dir: Option<PathBuf>,
}

impl VerifyOptions {
    pub fn quick(seed: u64) -> Self {
        VerifyOptions {
            profile: Profile::Quick,
            seed,
            fault: None,
            dot_dir: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} [{:>2}] {}: {}",
            self.id, self.name, self.detail
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub profile: Profile,
    pub seed: u64,
    pub fault: Option<Fault>,
    pub results: Vec<CriterionResult>,
    pub all_passed: bool,
}

pub fn criterion_name(id: u8) -> &'static str {
    match id {
        1 => "frobenius identity",
        2 => "zeta consistency",
        3 => "congruence density monotonicity",
        4 => "stabilization",
        5 => "cross-characteristic",
        6 => "lang-weil trend",
        7 => "pipeline verification",
        8 => "tree reduction budget",
        9 => "constants",
        10 => "monomial pushforward",
        11 => "point counts",
        _ => "unknown",
    }
}

/// Outcome of one check: verdict plus a one-line explanation.
type Check = Result<(bool, String), String>;

pub fn run_criterion(id: u8, opts: &VerifyOptions) -> CriterionResult {
    let start = Instant::now();
    let outcome: Check = match id {
        1 => frobenius(opts),
        2 => zeta_consistency(opts),
        3 => density(opts),
        4 => stabilization(opts),
        5 => cross_char(opts),
        6 => lang_weil(opts),
        7 => pipelines(opts),
        8 => tree_budget(opts),
        9 => constants(),
        10 => pushforward(),
        11 => point_counts(opts),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name: criterion_name(id),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

pub fn verify_all(opts: &VerifyOptions) -> VerifySummary {
    let results: Vec<CriterionResult> = (1..=CRITERIA).map(|id| run_criterion(id, opts)).collect();
    VerifySummary {
        profile: opts.profile,
        seed: opts.seed,
        fault: opts.fault,
        all_passed: results.iter().all(|r| r.passed),
        results,
    }
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

fn sl2(ring: &str) -> Result<GroupTables, String> {
    let spec: LocalRingSpec = ring.parse().map_err(err)?;
    Ok(GroupTables::new(
        build_sl(2, spec, DEFAULT_ELEMENT_BUDGET).map_err(err)?,
    ))
}

/// trivial, S_3, D_4, Q_8, SL_2(F_3), SL_2(F_5).
fn criterion_groups() -> Result<Vec<(String, GroupTables)>, String> {
    let mut out = Vec::new();
    for name in ["trivial", "s3", "d4", "q8"] {
        let g = build_named(name.parse::<NamedGroup>().map_err(err)?).map_err(err)?;
        out.push((name.to_string(), GroupTables::new(g)));
    }
    for ring in ["zmod:3^1", "zmod:5^1"] {
        out.push((format!("SL_2({ring})"), sl2(ring)?));
    }
    Ok(out)
}

fn frobenius(opts: &VerifyOptions) -> Check {
    let mut problems = Vec::new();
    let mut brute_checked = 0;
    for (name, t) in criterion_groups()? {
        let primes = choose_primes(t.conj.exponent, t.order(), 3);
        let tables = primes
            .iter()
            .map(|&ell| dixon_mod_table(&t, ell, opts.seed))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        for n in [1, 2] {
            let mut fibers = fiber_distribution(&t, n).map_err(err)?;
            if opts.fault == Some(Fault::FiberOffByOne) {
                fibers.0.iter_mut().for_each(|v| *v += 1);
            }
            if t.order() <= BRUTE_FORCE_MAX_ORDER {
                let brute = fiber_counts_brute(&t.group, n).map_err(err)?;
                let agree = brute
                    .iter()
                    .enumerate()
                    .all(|(g, &b)| fibers.0[t.conj.class_of[g] as usize] == BigInt::from(b));
                brute_checked += 1;
                if !agree {
                    problems.push(format!(
                        "{name} n={n}: convolution differs from enumeration"
                    ));
                }
            }
            let report = frobenius_check_values(&t, n, &fibers, &tables);
            if !report.holds() {
                problems.push(format!(
                    "{name} n={n}: {} congruence violations mod {:?}",
                    report.violations.len(),
                    report.primes
                ));
            }
        }
    }
    if problems.is_empty() {
        Ok((true, format!("6 groups x n=1,2 agree mod 3 primes; {brute_checked} brute-force comparisons exact")))
    } else {
        Ok((false, problems.join("; ")))
    }
}

fn zeta_consistency(opts: &VerifyOptions) -> Check {
    let mut problems = Vec::new();
    let mut named = Vec::new();
    for (name, t) in criterion_groups()? {
        for n in [2, 3] {
            let a = zeta_from_fibers(&t, n).map_err(err)?;
            let b = zeta_even(&t, 2 * n - 2, opts.seed).map_err(err)?;
            if a != b {
                problems.push(format!("{name} n={n}: fibers {a} vs degrees {b}"));
            }
            if n == 2 {
                named.push((name.clone(), b));
            }
        }
    }
    let expect = [
        ("s3", BigRational::new(9.into(), 4.into())),
        ("SL_2(zmod:3^1)", BigRational::new(139.into(), 36.into())),
    ];
    for (name, want) in expect {
        match named.iter().find(|(n, _)| n == name) {
            Some((_, got)) if *got == want => {}
            Some((_, got)) => problems.push(format!("{name}: zeta(2) = {got}, expected {want}")),
            None => problems.push(format!("{name} missing")),
        }
    }
    if problems.is_empty() {
        Ok((
            true,
            "fiber and degree paths agree for n=2,3; zeta_S3(2)=9/4, zeta_SL2(F3)(2)=139/36".into(),
        ))
    } else {
        Ok((false, problems.join("; ")))
    }
}

fn density(opts: &VerifyOptions) -> Check {
    let ring = LocalRingSpec::zmod(2, 4).map_err(err)?;
    let p =
        congruence_density_profile(2, ring, 2, DEFAULT_ELEMENT_BUDGET, opts.seed).map_err(err)?;
    let values: Vec<String> = p.levels.iter().map(|l| l.density.to_string()).collect();
    Ok((
        p.holds() && p.levels.len() == 5,
        format!("D_0..D_4 = [{}]", values.join(", ")),
    ))
}

fn stabilization(opts: &VerifyOptions) -> Check {
    let r_max = match opts.profile {
        Profile::Quick => 4,
        Profile::Full => 5,
    };
    let s = stabilization_series(
        RingKind::IntegerQuotient,
        2,
        2,
        r_max,
        2,
        DEFAULT_ELEMENT_BUDGET,
    )
    .map_err(err)?;
    if s.truncated || s.rows.len() != r_max as usize {
        return Ok((
            false,
            format!("series stopped after {} levels", s.rows.len()),
        ));
    }
    let inc = s.increments();
    let positive = inc.iter().all(|i| i.is_positive());
    let shrinks = inc.last().map(|l| l.0 < inc[0].0).unwrap_or(false);
    let shown: Vec<String> = inc.iter().map(|i| i.to_string()).collect();
    Ok((
        positive && shrinks,
        format!(
            "SL_2(Z/2^r), r=1..{r_max}: increments [{}]",
            shown.join(", ")
        ),
    ))
}

fn cross_char(opts: &VerifyOptions) -> Check {
    let primes: &[u32] = match opts.profile {
        Profile::Quick => &[5],
        Profile::Full => &[5, 7],
    };
    let mut parts = Vec::new();
    let mut equal = true;
    for &p in primes {
        let r = cross_char_compare(p, 2, 2, DEFAULT_ELEMENT_BUDGET).map_err(err)?;
        equal &= r.equal;
        if r.equal {
            parts.push(format!("p={p}: both {}", r.zeta_zmod));
        } else {
            parts.push(format!(
                "p={p}: FINDING Z/p^2 gives {} but F_p[t]/t^2 gives {}",
                r.zeta_zmod, r.zeta_tpoly
            ));
        }
    }
    Ok((equal, parts.join("; ")))
}

fn lang_weil(opts: &VerifyOptions) -> Check {
    let rep = langweil_report(&[5, 7, 9, 11, 13], 2, DEFAULT_ELEMENT_BUDGET, opts.seed);
    if let Some(e) = rep.entries.iter().find_map(|e| e.error.as_ref()) {
        return Err(e.clone());
    }
    let (v5, v13) = (
        rep.value(5).ok_or("q=5 missing")?,
        rep.value(13).ok_or("q=13 missing")?,
    );
    let agree = rep.entries.iter().all(|e| e.paths_agree == Some(true));
    let ok = rep.all_in_unit_band() && v13 < v5 && agree;
    let shown: Vec<String> = rep
        .entries
        .iter()
        .map(|e| format!("q={}: {:.4}", e.q, e.zeta.as_ref().unwrap().to_f64()))
        .collect();
    Ok((ok, shown.join(", ")))
}

fn pipelines(opts: &VerifyOptions) -> Check {
    let ranges = [
        (LieType::Sl, 2..=40u32, 8u32),
        (LieType::So, 4..=30, 8),
        (LieType::Sp, 2..=25, 7),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (ty, range, dot_rank) in ranges {
        let total = range.clone().count();
        let (mut unclean, mut bad_forest) = (Vec::new(), Vec::new());
        for d in range {
            let run = run_pipeline(ty, d).map_err(err)?;
            if !run.report.is_clean() {
                unclean.push(d);
            }
            if !run.report.forests_ok(3) {
                bad_forest.push(d);
            }
            if d == dot_rank {
                if run.dot.is_empty() {
                    ok = false;
                    parts.push(format!("{ty}{d}: no DOT output"));
                }
                if let Some(dir) = &opts.dot_dir {
                    std::fs::create_dir_all(dir).map_err(err)?;
                    for (name, doc) in &run.dot {
                        std::fs::write(dir.join(format!("{name}.dot")), doc).map_err(err)?;
                    }
                }
            }
        }
        ok &= unclean.is_empty() && bad_forest.is_empty();
        parts.push(format!(
            "{ty}: {}/{total} ranks with discrepancies, {}/{total} with non-forest or degree > 3",
            unclean.len(),
            bad_forest.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

/// A uniformly labelled random tree: vertex `i` hangs off a random earlier vertex.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Graph {
    let mut g = Graph::with_size(n);
    for i in 1..n as u32 {
        g.add_edge(rng.gen_range(0..i), i);
    }
    g
}

fn tree_budget(opts: &VerifyOptions) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut failures = Vec::new();
    let mut worst = 0usize;
    for k in 0..500 {
        let n = rng.gen_range(2..=40);
        let t = random_tree(&mut rng, n);
        // the root must not have maximal degree; leaves always qualify
        let degrees = t.degrees();
        let max = degrees.iter().copied().max().unwrap_or(0);
        let roots: Vec<u32> = (0..n as u32)
            .filter(|&v| n == 2 || degrees[v as usize] < max)
            .collect();
        let root = roots[rng.gen_range(0..roots.len())];
        let cert = tree_edge_reduction(&t, root).map_err(err)?;
        let bound = if n == 2 { 2 } else { 4 * (cert.max_degree - 1) };
        worst = worst.max(cert.dim_budget);
        if !replay_certificate(&cert).ok() || cert.dim_budget > bound {
            failures.push(k);
        }
    }
    let mut single = Graph::with_size(2);
    single.add_edge(0, 1);
    let single_budget = tree_edge_reduction(&single, 0).map_err(err)?.dim_budget;
    let ok = failures.is_empty() && single_budget == 2;
    Ok((
        ok,
        format!(
            "500 trees, {} failures, largest budget {worst}, single edge {single_budget}",
            failures.len()
        ),
    ))
}

fn constants() -> Check {
    let got = [
        bound_root(SimpleFactor::Sl(5)),
        bound_root(SimpleFactor::So(7)),
        bound_root(SimpleFactor::Sp(3)),
        bound_root(SimpleFactor::E8),
    ];
    let (g745, g22) = (min_genus(745), min_genus(22));
    let ok = got == [22, 22, 40, 745] && g745.headline == 374 && g22.headline == 12;
    Ok((
        ok,
        format!(
            "B = {got:?}; genus(745) = {}, genus(22) = {}",
            g745.headline, g22.headline
        ),
    ))
}

fn find_spec<'a>(
    suite: &'a [MonomialMapSpec],
    a: &[u32],
    b: &[u32],
) -> Result<&'a MonomialMapSpec, String> {
    suite
        .iter()
        .find(|s| s.a == a && s.b == b)
        .ok_or_else(|| format!("suite lacks A={a:?} B={b:?}"))
}

fn pushforward() -> Check {
    let suite = standard_suite();
    let reports: Vec<_> = suite.iter().map(|s| analyze(s, 60)).collect();
    let dp = reports.iter().filter(|r| r.dp_matches_enumeration).count();
    let agree = reports.iter().filter(|r| r.agrees).count();
    let mut problems = Vec::new();

    let identity = analyze(find_spec(&suite, &[1], &[0])?, 60);
    if !identity.series.iter().all(|p| p.average_density.0.is_one()) {
        problems.push("identity density is not constant 1".to_string());
    }
    let osc = analyze(find_spec(&suite, &[2], &[1])?, 60);
    if osc.continuity.guaranteed || osc.behavior != Behavior::Oscillating {
        problems.push(format!("A=(2),B=(1): {:?}", osc.behavior));
    }
    let conv = analyze(find_spec(&suite, &[1, 1], &[0, 1])?, 60);
    let limit = conv.limit.as_ref().map(|l| l.value.0.clone());
    let approaches = limit.as_ref().is_some_and(|l| {
        let gap = |r: usize| (&conv.series[r].average_density.0 - l).abs();
        gap(60) < gap(20)
    });
    if !conv.continuity.guaranteed || conv.behavior != Behavior::Convergent || !approaches {
        problems.push(format!(
            "A=(1,1),B=(0,1): {:?}, limit {:?}",
            conv.behavior,
            limit.map(|l| l.to_string())
        ));
    }
    let ok = dp == suite.len() && agree == suite.len() && problems.is_empty();
    let mut detail = format!(
        "{dp}/{} DP = enumeration, {agree}/{} criterion agrees with behavior",
        suite.len(),
        suite.len()
    );
    if !problems.is_empty() {
        detail.push_str("; ");
        detail.push_str(&problems.join("; "));
    }
    Ok((ok, detail))
}

fn point_counts(opts: &VerifyOptions) -> Check {
    let edge = "edge".parse::<GraphShape>().map_err(err)?.0;
    let mut counts = Vec::new();
    let mut ok = true;
    for (q, want) in [(2u64, 10u64), (3, 33)] {
        let inst = GraphVarietyInstance::uniform(edge.clone(), 2, finite_field(q).map_err(err)?)
            .map_err(err)?;
        let fast = count_graph_variety(&inst, DEFAULT_BUDGET)
            .map_err(err)?
            .count
            .0;
        let naive = count_naive(&inst).map_err(err)?;
        ok &= fast == naive && fast == BigInt::from(want);
        counts.push(fast.to_string());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut mismatches = 0;
    for _ in 0..50 {
        let inst = random_instance(&mut rng);
        let n = inst.graph.vertex_count();
        let forward: Vec<usize> = (0..n).collect();
        let backward: Vec<usize> = (0..n).rev().collect();
        let a = count_with_order(&inst, &forward, DEFAULT_BUDGET).map_err(err)?;
        let b = count_with_order(&inst, &backward, DEFAULT_BUDGET).map_err(err)?;
        mismatches += (a.count != b.count) as usize;
    }
    ok &= mismatches == 0;
    Ok((
        ok,
        format!(
            "single edge over F_2, F_3: {}; {mismatches}/50 order mismatches",
            counts.join(", ")
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        let opts = VerifyOptions::quick(1);
        for id in [8, 9, 10, 11] {
            let r = run_criterion(id, &opts);
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let mut opts = VerifyOptions::quick(1);
        assert!(run_criterion(1, &opts).passed);
        opts.fault = Some(Fault::FiberOffByOne);
        let r = run_criterion(1, &opts);
        assert!(!r.passed);
        assert!(r.detail.contains("congruence"), "{}", r.detail);
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..30 {
            let t = random_tree(&mut rng, n);
            assert_eq!(t.edge_count(), n.saturating_sub(1));
            assert!(crate::polygraph::forest_check(&t).is_forest);
        }
    }

    #[test]
    fn unknown_criterion() {
        assert!(!run_criterion(12, &VerifyOptions::quick(0)).passed);
        assert_eq!("full".parse::<Profile>().unwrap(), Profile::Full);
    }
}
