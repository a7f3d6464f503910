use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use super::model::{EqMode, Model};
use super::order::{is_poset, is_weakly_complete};
use super::space::{FullStructure, Space, DEFAULT_CELL_BUDGET};
use crate::error::Result;
use crate::preorder::FinPreorder;
use crate::term::{Term, TermKind};
use crate::theory::{Assertion, Polarity, Theory};
use crate::types::SimpleType;

/// Limits on bounded model search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeBounds {
    /// Largest base carrier tried (carriers start at one element).
    pub max_base: usize,
    /// Constants of higher type make the search incomplete.
    pub max_order: usize,
    /// Arrow spaces with more table cells are skipped.
    pub cell_budget: u64,
    /// Stop after this many models (enumeration only).
    pub max_models: Option<usize>,
    /// Bases pinned to one preorder instead of being enumerated.
    pub fixed_bases: BTreeMap<String, FinPreorder>,
    pub eq_mode: EqMode,
}

impl Default for SizeBounds {
    fn default() -> Self {
        SizeBounds {
            max_base: 3,
            max_order: 2,
            cell_budget: DEFAULT_CELL_BUDGET,
            max_models: None,
            fixed_bases: BTreeMap::new(),
            eq_mode: EqMode::Identity,
        }
    }
}

impl SizeBounds {
    pub fn with_max_base(mut self, n: usize) -> Self {
        self.max_base = n;
        self
    }

    pub fn fix_base(mut self, name: &str, p: FinPreorder) -> Self {
        self.fixed_bases.insert(name.to_string(), p);
        self
    }

    pub fn summary(&self) -> String {
        format!(
            "max-base {}, max-order {}, cell-budget {}",
            self.max_base, self.max_order, self.cell_budget
        )
    }
}

/// Which base preorders are admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelFilter {
    pub require_wc: bool,
    pub require_poset: bool,
}

impl ModelFilter {
    pub fn wc() -> Self {
        ModelFilter {
            require_wc: true,
            require_poset: false,
        }
    }

    pub fn admits(&self, p: &FinPreorder) -> bool {
        (!self.require_wc || is_weakly_complete(p)) && (!self.require_poset || is_poset(p))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumReport {
    /// Base assignments examined.
    pub structures: usize,
    /// Base assignments skipped for exceeding the cell budget.
    pub skipped: usize,
    pub models: usize,
    /// True when every candidate within the bounds was examined.
    pub complete: bool,
}

#[derive(Debug, Clone)]
pub enum Countermodel {
    Found(Model),
    /// `exhausted` means the whole bounded space was searched; it is a
    /// bound-relative statement, never a proof of consequence.
    NotFound {
        exhausted: bool,
    },
}

impl Countermodel {
    pub fn model(&self) -> Option<&Model> {
        match self {
            Countermodel::Found(m) => Some(m),
            Countermodel::NotFound { .. } => None,
        }
    }
}

/// Candidate base assignments in search order: total carrier size first,
/// then per base (bases sorted by name) by size and lexicographic matrix.
fn base_combos(thy: &Theory, bounds: &SizeBounds, filter: ModelFilter) -> (Vec<String>, Vec<Vec<FinPreorder>>) {
    let names: Vec<String> = thy.signature.bases().iter().cloned().collect();
    let per_base: Vec<Vec<(usize, FinPreorder)>> = names
        .iter()
        .map(|b| match bounds.fixed_bases.get(b) {
            Some(p) => vec![(0, p.clone())],
            None => (1..=bounds.max_base)
                .flat_map(FinPreorder::enumerate_all)
                .enumerate()
                .collect(),
        })
        .map(|cands| cands.into_iter().filter(|(_, p)| filter.admits(p)).collect())
        .collect();
    let mut combos: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    for cands in &per_base {
        combos = combos
            .into_iter()
            .flat_map(|(sz, idx)| {
                cands.iter().enumerate().map(move |(k, (_, p))| {
                    let mut idx = idx.clone();
                    idx.push(k);
                    (sz + p.len(), idx)
                })
            })
            .collect();
    }
    combos.sort();
    let out = combos
        .into_iter()
        .map(|(_, idx)| idx.iter().enumerate().map(|(b, &k)| per_base[b][k].1.clone()).collect())
        .collect();
    (names, out)
}

enum CTerm {
    Const(usize),
    App(Box<CTerm>, Box<CTerm>, Arc<Space>),
}

impl CTerm {
    fn eval(&self, vals: &[usize]) -> usize {
        match self {
            CTerm::Const(i) => vals[*i],
            CTerm::App(f, a, sp) => sp.apply(f.eval(vals), a.eval(vals)),
        }
    }
}

enum Check {
    Leq(CTerm, CTerm, Arc<Space>),
    Eq(CTerm, CTerm, Arc<Space>, EqMode),
    Pol(usize, Polarity, Arc<Space>),
}

impl Check {
    fn holds(&self, vals: &[usize]) -> bool {
        match self {
            Check::Leq(l, r, sp) => sp.leq(l.eval(vals), r.eval(vals)),
            Check::Eq(l, r, sp, mode) => {
                let (x, y) = (l.eval(vals), r.eval(vals));
                match mode {
                    EqMode::Identity => x == y,
                    EqMode::OrderBoth => sp.leq(x, y) && sp.leq(y, x),
                }
            }
            Check::Pol(i, Polarity::Plus, sp) => sp.is_monotone(vals[*i]),
            Check::Pol(i, Polarity::Minus, sp) => sp.is_antitone(vals[*i]),
        }
    }
}

/// The search over interpretations for one structure: constants in
/// signature order, each with its tag-filtered candidates, and the checks
/// that become decidable once a given constant is assigned.
struct Plan {
    structure: Arc<FullStructure>,
    consts: Vec<(String, SimpleType)>,
    candidates: Vec<Vec<usize>>,
    /// `(check, must_hold)`; the goal is a check that must fail.
    checks: Vec<Vec<(Check, bool)>>,
}

impl Plan {
    fn new(thy: &Theory, goal: Option<&Assertion>, structure: Arc<FullStructure>, mode: EqMode) -> Result<Plan> {
        let sig = &thy.signature;
        let consts: Vec<(String, SimpleType)> = sig
            .constants()
            .into_iter()
            .map(|(n, t)| (n.to_string(), t.clone()))
            .collect();
        let pos: BTreeMap<&str, usize> = consts.iter().enumerate().map(|(i, (n, _))| (n.as_str(), i)).collect();
        let mut spaces = Vec::with_capacity(consts.len());
        for (_, ty) in &consts {
            spaces.push(structure.space(ty)?);
        }
        let mut checks: Vec<Vec<(Check, bool)>> = consts.iter().map(|_| Vec::new()).collect();
        let mut candidates = Vec::with_capacity(consts.len());
        for (i, (name, _)) in consts.iter().enumerate() {
            let sp = &spaces[i];
            let plus = sig.has_tag(name, Polarity::Plus);
            let minus = sig.has_tag(name, Polarity::Minus);
            candidates.push(
                (0..sp.len())
                    .filter(|&e| (!plus || sp.is_monotone(e)) && (!minus || sp.is_antitone(e)))
                    .collect::<Vec<_>>(),
            );
        }
        for (ty, fam) in sig.families() {
            let sp = structure.space(ty)?;
            for (i, j) in fam.base.strict_pairs() {
                let (a, b) = (pos[fam.base.name(i)], pos[fam.base.name(j)]);
                checks[a.max(b)].push((Check::Leq(CTerm::Const(a), CTerm::Const(b), sp.clone()), true));
            }
        }
        let compile = |t: &Term| -> Result<(CTerm, usize)> { compile(t, &pos, &structure) };
        let mut add = |a: &Assertion, must: bool| -> Result<()> {
            let (check, last) = match a {
                Assertion::Leq(l, r) | Assertion::Eq(l, r) => {
                    let (cl, ml) = compile(l)?;
                    let (cr, mr) = compile(r)?;
                    let sp = structure.space(l.ty())?;
                    let c = match a {
                        Assertion::Leq(..) => Check::Leq(cl, cr, sp),
                        _ => Check::Eq(cl, cr, sp, mode),
                    };
                    (c, ml.max(mr))
                }
                Assertion::Pol(f, p) => {
                    let i = pos[f.as_str()];
                    (Check::Pol(i, *p, structure.space(&consts[i].1)?), i)
                }
            };
            checks[last].push((check, must));
            Ok(())
        };
        for ax in &thy.axioms {
            add(ax, true)?;
        }
        if let Some(g) = goal {
            add(g, false)?;
        }
        Ok(Plan {
            structure,
            consts,
            candidates,
            checks,
        })
    }

    /// Depth-first over assignments in lexicographic order.
    fn run(&self, visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        if self.consts.is_empty() {
            return visit(&[]);
        }
        let mut vals = vec![0; self.consts.len()];
        self.dfs(0, &mut vals, visit)
    }

    fn dfs(
        &self,
        k: usize,
        vals: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        for &e in &self.candidates[k] {
            vals[k] = e;
            if !self.checks[k].iter().all(|(c, must)| c.holds(vals) == *must) {
                continue;
            }
            if k + 1 == self.consts.len() {
                visit(vals)?;
            } else {
                self.dfs(k + 1, vals, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn model(&self, vals: &[usize]) -> Model {
        let mut m = Model::new(self.structure.clone());
        for ((name, ty), &e) in self.consts.iter().zip(vals) {
            m.set(name, ty.clone(), e);
        }
        m
    }
}

fn compile(t: &Term, pos: &BTreeMap<&str, usize>, s: &FullStructure) -> Result<(CTerm, usize)> {
    Ok(match t.kind() {
        TermKind::Const(n) => {
            let i = *pos
                .get(n.as_str())
                .ok_or_else(|| crate::error::Error::UndeclaredConstant(n.clone()))?;
            (CTerm::Const(i), i)
        }
        TermKind::App(f, a) => {
            let (cf, mf) = compile(f, pos, s)?;
            let (ca, ma) = compile(a, pos, s)?;
            (CTerm::App(Box::new(cf), Box::new(ca), s.space(f.ty())?), mf.max(ma))
        }
    })
}

fn order_ok(thy: &Theory, goal: Option<&Assertion>, bounds: &SizeBounds) -> bool {
    let mut types: Vec<&SimpleType> = thy.signature.constants().into_iter().map(|(_, t)| t).collect();
    let goal_types: Vec<SimpleType> = goal
        .map(|g| g.terms().iter().map(|t| t.ty().clone()).collect())
        .unwrap_or_default();
    types.extend(goal_types.iter());
    match types.iter().find(|t| t.order() > bounds.max_order) {
        Some(t) => {
            log::info!(
                "type {t} has order {} above the cap {}; search is incomplete",
                t.order(),
                bounds.max_order
            );
            false
        }
        None => true,
    }
}

fn structure_for(names: &[String], bases: &[FinPreorder], bounds: &SizeBounds) -> Arc<FullStructure> {
    let map = names.iter().cloned().zip(bases.iter().cloned()).collect();
    Arc::new(FullStructure::with_budget(map, bounds.cell_budget))
}

/// Visits every model of `thy` within `bounds` in the documented order
/// until `visit` breaks or `max_models` is reached.
pub fn enumerate_models(
    thy: &Theory,
    bounds: &SizeBounds,
    filter: ModelFilter,
    mut visit: impl FnMut(&Model) -> ControlFlow<()>,
) -> EnumReport {
    let mut report = EnumReport::default();
    if !order_ok(thy, None, bounds) {
        return report;
    }
    let (names, combos) = base_combos(thy, bounds, filter);
    let mut stopped = false;
    for bases in &combos {
        report.structures += 1;
        let plan = match Plan::new(thy, None, structure_for(&names, bases, bounds), bounds.eq_mode) {
            Ok(p) => p,
            Err(e) => {
                log::info!("skipping structure: {e}");
                report.skipped += 1;
                continue;
            }
        };
        let flow = plan.run(&mut |vals| {
            report.models += 1;
            visit(&plan.model(vals))?;
            match bounds.max_models {
                Some(cap) if report.models >= cap => ControlFlow::Break(()),
                _ => ControlFlow::Continue(()),
            }
        });
        if flow.is_break() {
            stopped = true;
            break;
        }
    }
    report.complete = !stopped && report.skipped == 0;
    report
}

/// All models within `bounds` (subject to `max_models`).
pub fn collect_models(thy: &Theory, bounds: &SizeBounds, filter: ModelFilter) -> (Vec<Model>, EnumReport) {
    let mut out = Vec::new();
    let report = enumerate_models(thy, bounds, filter, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    (out, report)
}

/// The first model (in enumeration order) of `thy` that falsifies `goal`.
/// Structures are searched in parallel; the reported model is still the
/// least one in the sequential order.
pub fn find_countermodel(thy: &Theory, goal: &Assertion, bounds: &SizeBounds, filter: ModelFilter) -> Countermodel {
    if goal.is_tautology() {
        return Countermodel::NotFound { exhausted: true };
    }
    if !order_ok(thy, Some(goal), bounds) {
        return Countermodel::NotFound { exhausted: false };
    }
    let (names, combos) = base_combos(thy, bounds, filter);
    let skipped = AtomicBool::new(false);
    let found = combos.par_iter().find_map_first(|bases| {
        let plan = match Plan::new(thy, Some(goal), structure_for(&names, bases, bounds), bounds.eq_mode) {
            Ok(p) => p,
            Err(e) => {
                log::info!("skipping structure: {e}");
                skipped.store(true, Ordering::Relaxed);
                return None;
            }
        };
        let mut hit = None;
        let _ = plan.run(&mut |vals| {
            hit = Some(plan.model(vals));
            ControlFlow::Break(())
        });
        hit
    });
    match found {
        Some(m) => Countermodel::Found(m),
        None => Countermodel::NotFound {
            exhausted: !skipped.load(Ordering::Relaxed),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_problem;
    use crate::preorder::closure_rt;

    #[test]
    fn singleton() {
        let thy = parse_problem("base b { elems a; }").unwrap().theory;
        let (ms, rep) = collect_models(&thy, &SizeBounds::default().with_max_base(1), ModelFilter::default());
        assert_eq!(ms.len(), 1);
        assert!(rep.complete);
    }

    #[test]
    fn counts_match_brute_force() {
        // a <= c over all preorders up to size 2: sum over P of #{(x,y): x <= y}
        let thy = parse_problem("base b { elems a c; order a <= c; }").unwrap().theory;
        let (ms, _) = collect_models(&thy, &SizeBounds::default().with_max_base(2), ModelFilter::default());
        let expect: usize = (1..=2)
            .flat_map(FinPreorder::enumerate_all)
            .map(|p| p.matrix().iter().filter(|&&b| b).count())
            .sum();
        assert_eq!(ms.len(), expect);
        assert!(ms.iter().all(|m| m.is_model(&thy)));
    }

    const UP_DOWN_3: &str = "base p { elems a b c; } base q { }
        const f : p -> q [-]; const g : p -> q [+]; order f <= g;
        axiom a <= c; axiom b <= c; goal f a <= g b;";

    #[test]
    fn part3_countermodel() {
        let sp = parse_problem(UP_DOWN_3).unwrap();
        let goal = sp.goals[0].clone();
        let found = find_countermodel(&sp.theory, &goal, &SizeBounds::default(), ModelFilter::default());
        let m = found.model().expect("countermodel");
        assert!(m.is_model(&sp.theory));
        assert!(!m.satisfies(&goal).unwrap());
        // the fixture structure is among the enumerated models when pinned
        let p = closure_rt(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
        let bounds = SizeBounds::default()
            .fix_base("p", p)
            .fix_base("q", FinPreorder::chain(2));
        let mut seen = false;
        enumerate_models(&sp.theory, &bounds, ModelFilter::default(), |m| {
            let tab = |n| {
                let sp = m.structure.space(&m.types[n]).unwrap();
                sp.table(m.interp[n])
            };
            if (m.interp["a"], m.interp["b"], m.interp["c"]) == (0, 1, 2)
                && tab("f") == vec![1, 0, 0]
                && tab("g") == vec![1, 0, 1]
            {
                seen = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        assert!(seen);
        // flat 2-point base is filtered before interpretation search
        let flat = FinPreorder::discrete(vec!["x".into(), "y".into()]);
        let bounds = SizeBounds::default()
            .fix_base("p", flat)
            .fix_base("q", FinPreorder::chain(2));
        let rep = enumerate_models(&sp.theory, &bounds, ModelFilter::wc(), |_| ControlFlow::Continue(()));
        assert_eq!(rep.structures, 0);
    }

    #[test]
    fn tautology_short_circuit() {
        let sp = parse_problem("base b { elems a; } goal a <= a;").unwrap();
        assert!(matches!(
            find_countermodel(&sp.theory, &sp.goals[0], &SizeBounds::default(), ModelFilter::default()),
            Countermodel::NotFound { exhausted: true }
        ));
    }

    #[test]
    fn order_cap_makes_search_incomplete() {
        let sp = parse_problem("base b { elems a c; } const h : (b -> b) -> b; goal a <= c;").unwrap();
        let bounds = SizeBounds {
            max_order: 1,
            ..SizeBounds::default()
        };
        assert!(matches!(
            find_countermodel(&sp.theory, &sp.goals[0], &bounds, ModelFilter::default()),
            Countermodel::NotFound { exhausted: false }
        ));
    }

    #[test]
    fn least_countermodel_is_deterministic() {
        let sp = parse_problem(UP_DOWN_3).unwrap();
        let a = find_countermodel(&sp.theory, &sp.goals[0], &SizeBounds::default(), ModelFilter::default());
        let b = find_countermodel(&sp.theory, &sp.goals[0], &SizeBounds::default(), ModelFilter::default());
        assert_eq!(a.model().unwrap(), b.model().unwrap());
        // and it is the first one the sequential enumeration finds
        let mut first = None;
        enumerate_models(&sp.theory, &SizeBounds::default(), ModelFilter::default(), |m| {
            if !m.satisfies(&sp.goals[0]).unwrap() {
                first = Some(m.clone());
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        assert_eq!(first.as_ref(), a.model());
    }
}
