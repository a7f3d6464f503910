use rand::Rng;

use super::{run_cases, CaseRecord, SuiteConfig, SuiteReport};
use crate::completion::{check_join, complete_preorder, verify_embedding, JoinOracle};
use crate::extension::{audit_claims, extend_interpretation, random_instance, verify_extension, InstanceShape};
use crate::preorder::{closure_rt, FinPreorder};

/// Subsets of the star carrier are checked exhaustively up to this size,
/// sampled above it.
pub const EXHAUSTIVE_STAR: usize = 12;
pub const SAMPLED_SUBSETS: usize = 500;

fn random_preorder(rng: &mut impl Rng, n: usize) -> FinPreorder {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let density = rng.random_range(0.05..0.6);
    let mut rel = Vec::new();
    for a in &names {
        for b in &names {
            if a != b && rng.random_bool(density) {
                rel.push((a.as_str(), b.as_str()));
            }
        }
    }
    closure_rt(&names.iter().map(String::as_str).collect::<Vec<_>>(), &rel).expect("names are distinct")
}

/// Every preorder of size at most four, then `random5` random preorders
/// of size five. Counters: `preorders`, `subsets` joins checked.
pub fn run_completion_suite(cfg: &SuiteConfig, random5: usize) -> SuiteReport {
    let mut sources: Vec<(String, FinPreorder)> = Vec::new();
    for n in 0..=4 {
        for p in FinPreorder::enumerate_all(n) {
            sources.push((format!("all-{n}"), p));
        }
    }
    let exhaustive = sources.len();
    let note = format!(
        "exhaustive={exhaustive} random-5={random5} star-exhaustive<={EXHAUSTIVE_STAR} sampled={SAMPLED_SUBSETS}"
    );
    run_cases("completion", note, exhaustive + random5, |i| {
        let mut rng = cfg.case_rng(i);
        let (fixture, p) = match sources.get(i) {
            Some((f, p)) => (f.clone(), p.clone()),
            None => ("random-5".to_string(), random_preorder(&mut rng, 5)),
        };
        let mut rec = CaseRecord::new(i, cfg.case_seed(i), fixture);
        rec.bump("preorders", 1);
        let cr = match complete_preorder(&p) {
            Ok(cr) => cr,
            Err(e) => {
                rec.violate(e.to_string());
                return rec;
            }
        };
        for f in verify_embedding(&p, &cr) {
            rec.violate(format!("{f}"));
        }
        let n = cr.star.len();
        let check = |s: &[usize], rec: &mut CaseRecord| {
            rec.bump("subsets", 1);
            if let Some(f) = check_join(&cr, s) {
                rec.violate(format!("{f}"));
            }
        };
        if n <= EXHAUSTIVE_STAR {
            for mask in 0u32..(1 << n) {
                let s: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
                check(&s, &mut rec);
            }
        } else {
            check(&[], &mut rec);
            check(&(0..n).collect::<Vec<_>>(), &mut rec);
            for _ in 2..SAMPLED_SUBSETS {
                let density = rng.random_range(0.0..1.0);
                let s: Vec<usize> = (0..n).filter(|_| rng.random_bool(density)).collect();
                check(&s, &mut rec);
            }
        }
        // bottom and top
        let bot = cr.join(&[]);
        let top = cr.join(&(0..n).collect::<Vec<_>>());
        if (0..n).any(|x| !cr.star.leq(bot, x) || !cr.star.leq(x, top)) {
            rec.violate("empty join is not least or full join is not greatest");
        }
        rec
    })
}

/// Counters: `instances` valid instances checked, `cells` table cells.
pub fn run_extension_suite(cfg: &SuiteConfig) -> SuiteReport {
    let shape = InstanceShape::default();
    let note = format!(
        "|F|<={} |S|<={} |L|<={} M=completion of a preorder of size <={}",
        shape.max_f, shape.max_s, shape.max_l, shape.max_m
    );
    run_cases("extension", note, cfg.cases, |i| {
        let mut rng = cfg.case_rng(i);
        let mut rec = CaseRecord::new(i, cfg.case_seed(i), "random");
        let Some(inst) = random_instance(&mut rng, shape, 500) else {
            rec.inconclusive("no valid instance drawn");
            return rec;
        };
        let res = match extend_interpretation(&inst) {
            Ok(r) => r,
            Err(e) => {
                rec.violate(format!("valid instance rejected: {e}"));
                return rec;
            }
        };
        rec.bump("instances", 1);
        rec.bump("cells", (inst.f.len() * inst.l.len()) as u64);
        for f in verify_extension(&inst, &res)
            .into_iter()
            .chain(audit_claims(&inst, &res))
        {
            rec.violate(format!("{f}"));
        }
        rec
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completion_small() {
        let r = run_completion_suite(&SuiteConfig::default(), 3);
        assert!(r.passed(), "{}", r.violations()[0].fixture);
        assert_eq!(r.count("preorders"), 1 + 1 + 4 + 29 + 355 + 3);
    }

    #[test]
    fn extension_small() {
        let r = run_extension_suite(&SuiteConfig::default().with_cases(30));
        assert!(r.passed(), "{r}");
        assert_eq!(r.count("instances"), 30);
    }
}
