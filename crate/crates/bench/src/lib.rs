//! Workloads shared by the benchmarks.

use polord::harness::{part3_model, KEY_PROBLEM};
use polord::parser::parse_problem;
use polord::{Assertion, FinPreorder, Theory};

pub fn key_problem() -> (Theory, Assertion) {
    let sp = parse_problem(KEY_PROBLEM).expect("fixture parses");
    (sp.theory, sp.goals[0].clone())
}

/// Part 3 of the up/down example: provable only with the wc rules.
pub fn part3() -> (Theory, Assertion) {
    let (thy, goal, _) = part3_model();
    (thy, goal)
}

/// A chain `e0 < e1 < … < e{n-1}`.
pub fn chain(n: usize) -> FinPreorder {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let rel: Vec<(&str, &str)> = refs.windows(2).map(|w| (w[0], w[1])).collect();
    polord::closure_rt(&refs, &rel).expect("distinct names")
}

/// An antichain of `n` elements.
pub fn antichain(n: usize) -> FinPreorder {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    polord::closure_rt(&refs, &[]).expect("distinct names")
}
