use std::fmt::Write;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use polord::completion::{check_join, complete_preorder, render_completion, verify_embedding};
use polord::extension::{audit_claims, extend_interpretation, verify_extension};
use polord::harness::{
    run_completion_suite, run_conservativity_suite, run_equational_suite, run_extension_suite, run_roundtrip_suite,
    run_soundness_suite, run_worked_examples, SuiteConfig, SuiteReport,
};
use polord::parser::{
    format_diagnostics, parse_instance, parse_model_with_budget, parse_preorder, parse_problem_named, parse_proof,
    render_extension, render_model, render_proof, DiagKind, Diagnostic, SourceProblem,
};
use polord::{
    check_proof, find_countermodel, prove, CalculusConfig, Countermodel, ModelFilter, Polarity, ProofTree,
    ProveOutcome, SearchBudget, SizeBounds, UniversePolicy, Verdict,
};

use crate::{Command, Format, Opts};

pub const ESTABLISHED: u8 = 0;
pub const REFUTED: u8 = 1;
pub const UNKNOWN: u8 = 2;
pub const INPUT_ERROR: u8 = 3;

const SUITES: [&str; 7] = [
    "fixtures",
    "soundness",
    "completion",
    "extension",
    "conservativity",
    "equational",
    "roundtrip",
];

/// Everything flag-derived, validated before any file is read.
struct Settings {
    calculus: CalculusConfig,
    universe: UniversePolicy,
    budget: SearchBudget,
    bounds: SizeBounds,
    filter: ModelFilter,
    machine: bool,
}

impl Settings {
    fn new(opts: &Opts, default_base: usize) -> Result<Self> {
        let calculus = CalculusConfig::parse(&opts.calculus).map_err(|e| anyhow!("--calculus: {e}"))?;
        let universe = opts.universe.parse().map_err(|e| anyhow!("--universe: {e}"))?;
        let max_base = opts.max_base.unwrap_or(default_base);
        if max_base == 0 {
            bail!("--max-base must be at least 1");
        }
        let mut bounds = SizeBounds::default().with_max_base(max_base);
        bounds.max_order = opts.max_order;
        bounds.cell_budget = opts.cell_budget;
        Ok(Settings {
            calculus,
            universe,
            budget: SearchBudget {
                max_universe: opts.max_universe,
                max_rounds: opts.max_depth,
                ..SearchBudget::default()
            },
            bounds,
            filter: ModelFilter {
                require_wc: opts.require_wc,
                require_poset: opts.require_poset,
            },
            machine: opts.format == Format::Machine,
        })
    }

    fn search_line(&self) -> String {
        format!(
            "calculus={} universe={} max-depth={} max-universe={}",
            self.calculus, self.universe, self.budget.max_rounds, self.budget.max_universe
        )
    }

    fn model_line(&self) -> String {
        format!(
            "max-base={} max-order={} cell-budget={} require-wc={} require-poset={}",
            self.bounds.max_base,
            self.bounds.max_order,
            self.bounds.cell_budget,
            self.filter.require_wc,
            self.filter.require_poset
        )
    }
}

pub fn run(cmd: &Command, opts: &Opts, out: &mut String) -> Result<u8> {
    let default_base = if matches!(cmd, Command::Suite { .. }) { 2 } else { 3 };
    let s = Settings::new(opts, default_base)?;
    match cmd {
        Command::Prove { problem, goal } => prove_cmd(&s, problem, *goal, out),
        Command::Check { problem, proof } => check_cmd(&s, problem, proof, out),
        Command::Countermodel { problem, goal } => countermodel_cmd(&s, problem, *goal, out),
        Command::Complete { preorder } => complete_cmd(&s, preorder, out),
        Command::Extend { instance } => extend_cmd(&s, instance, out),
        Command::Classify { problem, model } => classify_cmd(&s, problem, model, out),
        Command::Suite { names, cases } => suite_cmd(&s, opts.seed, names, *cases, out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn diagnostics(path: &Path, diags: &[Diagnostic]) -> anyhow::Error {
    anyhow!("{}", format_diagnostics(&path.display().to_string(), diags).trim_end())
}

fn load_problem(path: &Path) -> Result<SourceProblem> {
    let text = read(path)?;
    let sp = parse_problem_named(&text, &path.display().to_string()).map_err(|d| diagnostics(path, &d))?;
    for w in &sp.warnings {
        log::warn!("{}:{w}", path.display());
    }
    Ok(sp)
}

/// The selected goals, with their indices.
fn goals(sp: &SourceProblem, pick: Option<usize>) -> Result<Vec<(usize, &polord::Assertion)>> {
    if sp.goals.is_empty() {
        bail!("{}: the problem has no goal", sp.file_name);
    }
    match pick {
        None => Ok(sp.goals.iter().enumerate().collect()),
        Some(i) => match sp.goals.get(i) {
            Some(g) => Ok(vec![(i, g)]),
            None => bail!("--goal {i}: the problem has {} goal(s)", sp.goals.len()),
        },
    }
}

fn prove_cmd(s: &Settings, path: &Path, pick: Option<usize>, out: &mut String) -> Result<u8> {
    let sp = load_problem(path)?;
    let goals = goals(&sp, pick)?;
    writeln!(out, "# {}", s.search_line())?;
    let mut status = ESTABLISHED;
    for (i, g) in goals {
        match prove(&sp.theory, g, &s.calculus, s.universe, &s.budget) {
            ProveOutcome::Found(tree) => {
                let verdict = check_proof(&tree, &sp.theory, &s.calculus);
                if !verdict.is_accepted() {
                    bail!("internal error: search produced a proof the checker rejects ({verdict})");
                }
                if s.machine {
                    writeln!(
                        out,
                        "goal={i} status=proved rules={} nodes={}",
                        tree.rule_count(),
                        tree.node_count()
                    )?;
                } else {
                    writeln!(out, "# goal {i}: {g}")?;
                    writeln!(
                        out,
                        "# proved: {} rule applications, {} nodes",
                        tree.rule_count(),
                        tree.node_count()
                    )?;
                }
                out.push_str(&render_proof(&tree));
            }
            ProveOutcome::NotFound { complete } => {
                status = status.max(UNKNOWN);
                if s.machine {
                    writeln!(out, "goal={i} status=unknown complete={complete}")?;
                } else {
                    writeln!(out, "# goal {i}: {g}")?;
                    writeln!(out, "# not derivable within universe/budget (complete={complete})")?;
                }
            }
        }
    }
    Ok(status)
}

fn node_at<'a>(tree: &'a ProofTree, path: &[usize]) -> &'a ProofTree {
    path.iter().fold(tree, |t, &i| t.premises.get(i).unwrap_or(t))
}

fn check_cmd(s: &Settings, problem: &Path, proof: &Path, out: &mut String) -> Result<u8> {
    let sp = load_problem(problem)?;
    let text = read(proof)?;
    writeln!(out, "# calculus={}", s.calculus)?;
    let tree = match parse_proof(&text, &sp.theory, &s.calculus) {
        Ok(t) => t,
        Err(diags) => {
            // a well-formed leaf that cites something absent from Γ is a
            // rejection, not an input error
            let errors: Vec<&Diagnostic> = diags.iter().filter(|d| d.is_error()).collect();
            if !errors.is_empty()
                && errors
                    .iter()
                    .all(|d| matches!(d.kind, DiagKind::DanglingAxiom | DiagKind::FalseFact))
            {
                for d in errors {
                    if s.machine {
                        writeln!(out, "status=rejected at={} reason=\"{}\"", d.pos, d.message)?;
                    } else {
                        writeln!(out, "rejected at {}: {}", d.pos, d.message)?;
                    }
                }
                return Ok(REFUTED);
            }
            return Err(diagnostics(proof, &diags));
        }
    };
    match check_proof(&tree, &sp.theory, &s.calculus) {
        Verdict::Accepted => {
            if !sp.goals.is_empty() && !sp.goals.contains(&tree.conclusion) {
                writeln!(
                    out,
                    "rejected: the proof concludes `{}`, which is not a goal",
                    tree.conclusion
                )?;
                return Ok(REFUTED);
            }
            if s.machine {
                writeln!(
                    out,
                    "status=accepted nodes={} conclusion=\"{}\"",
                    tree.node_count(),
                    tree.conclusion
                )?;
            } else {
                writeln!(out, "accepted: `{}` ({} nodes)", tree.conclusion, tree.node_count())?;
            }
            Ok(ESTABLISHED)
        }
        v @ Verdict::Rejected { .. } => {
            let Verdict::Rejected { path, reason } = &v else {
                unreachable!()
            };
            let node = node_at(&tree, path);
            if s.machine {
                let p: Vec<String> = path.iter().map(|i| i.to_string()).collect();
                writeln!(out, "status=rejected path={} reason=\"{reason}\"", p.join("."))?;
            } else {
                writeln!(out, "{v}")?;
                writeln!(out, "  at `{}`", node.conclusion)?;
            }
            Ok(REFUTED)
        }
    }
}

fn countermodel_cmd(s: &Settings, path: &Path, pick: Option<usize>, out: &mut String) -> Result<u8> {
    let sp = load_problem(path)?;
    let goals = goals(&sp, pick)?;
    writeln!(out, "# {}", s.model_line())?;
    let mut status = ESTABLISHED;
    for (i, g) in goals {
        if !s.machine {
            writeln!(out, "# goal {i}: {g}")?;
        }
        if g.is_tautology() {
            status = status.max(UNKNOWN);
            if s.machine {
                writeln!(out, "goal={i} status=unknown tautology=true")?;
            } else {
                writeln!(out, "# tautology: holds in every model")?;
            }
            continue;
        }
        match find_countermodel(&sp.theory, g, &s.bounds, s.filter) {
            Countermodel::Found(m) => {
                // the dump is what the user gets, so verify the dump
                let dump = render_model(&m);
                let back = parse_model_with_budget(&dump, &sp.theory, s.bounds.cell_budget)
                    .map_err(|d| anyhow!("internal error: model dump does not reload: {:?}", d))?;
                if !back.is_model(&sp.theory) || back.satisfies(g).unwrap_or(true) {
                    bail!("internal error: reloaded model does not falsify goal {i}");
                }
                if s.machine {
                    writeln!(out, "goal={i} status=countermodel")?;
                } else {
                    writeln!(out, "# falsified by a model of the axioms:")?;
                }
                out.push_str(&dump);
            }
            Countermodel::NotFound { exhausted } => {
                status = status.max(UNKNOWN);
                if s.machine {
                    writeln!(out, "goal={i} status=unknown exhausted={exhausted}")?;
                } else if exhausted {
                    writeln!(out, "# no countermodel within the bounds (search exhausted)")?;
                } else {
                    writeln!(
                        out,
                        "# no countermodel found; search not exhaustive (skipped structures or constants above max-order)"
                    )?;
                }
            }
        }
    }
    Ok(status)
}

fn complete_cmd(s: &Settings, path: &Path, out: &mut String) -> Result<u8> {
    let text = read(path)?;
    let (name, p) = parse_preorder(&text).map_err(|d| diagnostics(path, &d))?;
    let cr = complete_preorder(&p).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let n = cr.star.len();
    writeln!(
        out,
        "# completion of {name}: {} elements, {n} in the completion",
        p.len()
    )?;
    out.push_str(&render_completion(&cr));
    let mut findings: Vec<String> = verify_embedding(&p, &cr).iter().map(|f| f.to_string()).collect();
    // every subset when small, else the empty set, singletons, pairs and
    // the whole carrier
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    if n <= 12 {
        subsets.extend((0u32..1 << n).map(|m| (0..n).filter(|k| m >> k & 1 == 1).collect()));
    } else {
        subsets.push(Vec::new());
        subsets.push((0..n).collect());
        for a in 0..n {
            for b in a..n {
                subsets.push(vec![a, b]);
            }
        }
    }
    findings.extend(
        subsets
            .iter()
            .filter_map(|sub| check_join(&cr, sub))
            .map(|f| f.to_string()),
    );
    report(s, out, &findings, &format!("embedding, {} joins", subsets.len()))
}

fn report(s: &Settings, out: &mut String, findings: &[String], what: &str) -> Result<u8> {
    if s.machine {
        writeln!(
            out,
            "verification={} findings={}",
            if findings.is_empty() { "clean" } else { "failed" },
            findings.len()
        )?;
    } else if findings.is_empty() {
        writeln!(out, "verification: clean ({what})")?;
    } else {
        writeln!(out, "verification: {} finding(s)", findings.len())?;
    }
    for f in findings {
        writeln!(out, "  {f}")?;
    }
    Ok(if findings.is_empty() { ESTABLISHED } else { REFUTED })
}

fn extend_cmd(s: &Settings, path: &Path, out: &mut String) -> Result<u8> {
    let text = read(path)?;
    let inst = parse_instance(&text).map_err(|d| diagnostics(path, &d))?;
    let violation = match (inst.check_hypotheses(), inst.check_special()) {
        (Err(e), _) => Some(e.to_string()),
        (Ok(()), Err(w)) => Some(format!("extension hypothesis violated: {w}")),
        (Ok(()), Ok(())) => None,
    };
    if let Some(why) = violation {
        writeln!(out, "{why}")?;
        return Ok(REFUTED);
    }
    let res = match extend_interpretation(&inst) {
        Ok(r) => r,
        Err(e) => {
            writeln!(out, "{e}")?;
            return Ok(REFUTED);
        }
    };
    out.push_str(&render_extension(&inst, &res));
    let findings: Vec<String> = verify_extension(&inst, &res)
        .into_iter()
        .chain(audit_claims(&inst, &res))
        .map(|f| f.to_string())
        .collect();
    report(s, out, &findings, "extension, monotonicity, tags, audit")
}

fn tag_set(tags: &[Polarity]) -> String {
    let t: Vec<String> = tags.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", t.join(","))
}

fn classify_cmd(s: &Settings, problem: &Path, model: &Path, out: &mut String) -> Result<u8> {
    let sp = load_problem(problem)?;
    let text = read(model)?;
    let m = parse_model_with_budget(&text, &sp.theory, s.bounds.cell_budget).map_err(|d| diagnostics(model, &d))?;
    let sig = &sp.theory.signature;
    for (name, ty) in sig.constants() {
        if !ty.is_arrow() {
            continue;
        }
        let tags = m.classify(name)?;
        let declared = sig.tags(name);
        if s.machine {
            writeln!(
                out,
                "const={name} tags={} declared={}",
                tag_set(&tags),
                tag_set(&declared)
            )?;
        } else {
            let note = if declared.iter().all(|d| tags.contains(d)) {
                ""
            } else {
                " (declared tags not met)"
            };
            writeln!(out, "{name}: {}{note}", tag_set(&tags))?;
        }
    }
    match m.violation(&sp.theory) {
        None => writeln!(out, "# model of the theory: yes")?,
        Some(v) => writeln!(out, "# model of the theory: no ({v})")?,
    }
    Ok(ESTABLISHED)
}

fn suite_cmd(s: &Settings, seed: u64, names: &[String], cases: Option<usize>, out: &mut String) -> Result<u8> {
    let names: Vec<&str> = if names.is_empty() || names.iter().any(|n| n == "all") {
        SUITES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
        bail!("unknown suite `{bad}` (expected one of {} or all)", SUITES.join(", "));
    }
    let mut cfg = SuiteConfig::default().with_seed(seed);
    if let Some(n) = cases {
        cfg = cfg.with_cases(n);
    }
    cfg.bounds.max_base = s.bounds.max_base;
    cfg.bounds.max_order = s.bounds.max_order;
    cfg.bounds.cell_budget = s.bounds.cell_budget;
    let mut status = ESTABLISHED;
    for name in names {
        let r: SuiteReport = match name {
            "fixtures" => run_worked_examples(),
            "soundness" => run_soundness_suite(&cfg),
            "completion" => run_completion_suite(&cfg, cfg.cases),
            "extension" => run_extension_suite(&cfg),
            "conservativity" => run_conservativity_suite(&cfg),
            "equational" => run_equational_suite(&cfg),
            "roundtrip" => run_roundtrip_suite(&cfg, cfg.cases, cfg.cases.div_ceil(5)),
            _ => unreachable!("checked above"),
        };
        if !r.passed() {
            status = REFUTED;
        }
        if s.machine {
            if let Some(last) = r.transcript().lines().last() {
                writeln!(out, "{last}")?;
            }
        } else {
            out.push_str(&r.transcript());
        }
    }
    Ok(status)
}
