//! Conclusion inference and exact side conditions for every rule schema.

use super::{CalculusConfig, Rule};
use crate::signature::Signature;
use crate::term::{type_of, Term};
use crate::theory::{Assertion, Polarity};

fn app(f: &Term, a: &Term) -> Result<Term, String> {
    Term::app(f.clone(), a.clone()).map_err(|e| e.to_string())
}

fn konst(sig: &Signature, name: &str) -> Result<Term, String> {
    sig.const_term(name).map_err(|e| e.to_string())
}

fn leq_parts(a: &Assertion, what: &str) -> Result<(Term, Term), String> {
    match a {
        Assertion::Leq(l, r) => Ok((l.clone(), r.clone())),
        other => Err(format!("{what}: expected an inequality premise, got `{other}`")),
    }
}

fn eq_parts(a: &Assertion, what: &str) -> Result<(Term, Term), String> {
    match a {
        Assertion::Eq(l, r) => Ok((l.clone(), r.clone())),
        other => Err(format!("{what}: expected an identity premise, got `{other}`")),
    }
}

fn pol_parts(a: &Assertion, what: &str) -> Result<(String, Polarity), String> {
    match a {
        Assertion::Pol(f, p) => Ok((f.clone(), *p)),
        other => Err(format!("{what}: expected a polarity premise, got `{other}`")),
    }
}

/// Computes the conclusion a rule yields from the given premises and term
/// payloads. Only the shape needed to build the conclusion is checked here;
/// [`side_conditions`] enforces the rest of the schema.
///
/// With `equational` set, `refl` concludes `t = t` instead of `t <= t`.
pub fn infer_conclusion(
    rule: Rule,
    premises: &[&Assertion],
    terms: &[Term],
    sig: &Signature,
    equational: bool,
) -> Result<Assertion, String> {
    let (np, nt) = rule.arity();
    if premises.len() != np || terms.len() != nt {
        return Err(format!(
            "{rule} takes {np} premise(s) and {nt} term(s), got {} and {}",
            premises.len(),
            terms.len()
        ));
    }
    let p = premises;
    let name = rule.name();
    Ok(match rule {
        Rule::Refl => {
            let t = terms[0].clone();
            if equational {
                Assertion::Eq(t.clone(), t)
            } else {
                Assertion::Leq(t.clone(), t)
            }
        }
        Rule::Trans => match (p[0], p[1]) {
            (Assertion::Leq(s, _), Assertion::Leq(_, u)) => Assertion::Leq(s.clone(), u.clone()),
            (Assertion::Eq(s, _), Assertion::Eq(_, u)) => Assertion::Eq(s.clone(), u.clone()),
            _ => return Err("trans: premises must both be inequalities or both identities".into()),
        },
        Rule::Point => {
            let (s, t) = leq_parts(p[0], name)?;
            Assertion::Leq(app(&s, &terms[0])?, app(&t, &terms[0])?)
        }
        Rule::Mono | Rule::Anti => {
            let (f, _) = pol_parts(p[0], name)?;
            let (t, u) = leq_parts(p[1], name)?;
            let f = konst(sig, &f)?;
            if rule == Rule::Mono {
                Assertion::Leq(app(&f, &t)?, app(&f, &u)?)
            } else {
                Assertion::Leq(app(&f, &u)?, app(&f, &t)?)
            }
        }
        Rule::Wc1 | Rule::Wc2 => {
            let (f, _) = pol_parts(p[0], name)?;
            let (g, _) = pol_parts(p[1], name)?;
            Assertion::Leq(app(&konst(sig, &f)?, &terms[0])?, app(&konst(sig, &g)?, &terms[1])?)
        }
        Rule::Wc3(_) => {
            let (g, _) = pol_parts(p[1], name)?;
            let (h, _) = pol_parts(p[2], name)?;
            Assertion::Leq(konst(sig, &g)?, konst(sig, &h)?)
        }
        Rule::Pos => {
            let (s, t) = leq_parts(p[0], name)?;
            Assertion::Leq(app(&terms[0], &s)?, app(&terms[0], &t)?)
        }
        Rule::Symm => {
            let (l, r) = eq_parts(p[0], name)?;
            Assertion::Eq(r, l)
        }
        Rule::Weak => {
            let (l, r) = eq_parts(p[0], name)?;
            Assertion::Leq(l, r)
        }
        Rule::PosPrime => {
            let (l, r) = leq_parts(p[0], name)?;
            Assertion::Eq(l, r)
        }
        Rule::Cong => {
            let (t, t2) = eq_parts(p[0], name)?;
            let (u, u2) = eq_parts(p[1], name)?;
            Assertion::Eq(app(&t, &u)?, app(&t2, &u2)?)
        }
        Rule::PolPlus | Rule::PolMinus => {
            let (_, g) = leq_parts(p[1], name)?;
            let g = g
                .const_name()
                .ok_or_else(|| format!("{name}: `{g}` is not a constant"))?
                .to_string();
            let pol = if rule == Rule::PolPlus {
                Polarity::Plus
            } else {
                Polarity::Minus
            };
            Assertion::Pol(g, pol)
        }
    })
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expect_pol(a: &Assertion, pol: Polarity, rule: Rule) -> Result<String, String> {
    match a {
        Assertion::Pol(f, p) if *p == pol => Ok(f.clone()),
        other => Err(format!("{rule}: expected a premise `_ {pol}`, got `{other}`")),
    }
}

fn const_leq(sig: &Signature, f: &str, g: &str) -> Result<Assertion, String> {
    Ok(Assertion::Leq(konst(sig, f)?, konst(sig, g)?))
}

/// Everything the schema demands beyond what [`infer_conclusion`] needs.
/// Assumes the premises themselves are well-formed.
pub(crate) fn side_conditions(
    rule: Rule,
    p: &[&Assertion],
    terms: &[Term],
    sig: &Signature,
    cfg: &CalculusConfig,
) -> Result<(), String> {
    for t in terms {
        type_of(t, sig).map_err(|e| format!("{rule}: term payload `{t}`: {e}"))?;
    }
    match rule {
        Rule::Refl | Rule::Cong | Rule::Symm | Rule::Weak => Ok(()),
        Rule::Trans => {
            let (mid_l, mid_r) = match (p[0], p[1]) {
                (Assertion::Leq(_, a), Assertion::Leq(b, _)) => {
                    expect(cfg.base_enabled(), || {
                        "trans over <= is disabled in equational mode".into()
                    })?;
                    (a, b)
                }
                (Assertion::Eq(_, a), Assertion::Eq(b, _)) => {
                    expect(cfg.equational, || "trans over = needs equational mode".into())?;
                    (a, b)
                }
                _ => unreachable!("checked by inference"),
            };
            expect(mid_l == mid_r, || {
                format!("trans: middle terms differ: `{mid_l}` vs `{mid_r}`")
            })
        }
        Rule::Point => Ok(()),
        Rule::Mono => expect_pol(p[0], Polarity::Plus, rule).map(drop),
        Rule::Anti => expect_pol(p[0], Polarity::Minus, rule).map(drop),
        Rule::Wc1 | Rule::Wc2 => {
            let (pf, pg) = if rule == Rule::Wc1 {
                (Polarity::Plus, Polarity::Minus)
            } else {
                (Polarity::Minus, Polarity::Plus)
            };
            let f = expect_pol(p[0], pf, rule)?;
            let g = expect_pol(p[1], pg, rule)?;
            let want = const_leq(sig, &f, &g)?;
            expect(*p[2] == want, || format!("{rule}: third premise must be `{want}`"))
        }
        Rule::Wc3(v) => {
            let [tf, tg, th, tk] = v.pattern();
            let f = expect_pol(p[0], tf, rule)?;
            let g = expect_pol(p[1], tg, rule)?;
            let h = expect_pol(p[2], th, rule)?;
            let k = expect_pol(p[3], tk, rule)?;
            expect(sig.const_type(&f) == sig.const_type(&k), || {
                format!("{rule}: `{f}` and `{k}` must have the same type")
            })?;
            let gf = const_leq(sig, &g, &f)?;
            expect(*p[4] == gf, || format!("{rule}: fifth premise must be `{gf}`"))?;
            let kh = const_leq(sig, &k, &h)?;
            expect(*p[5] == kh, || format!("{rule}: sixth premise must be `{kh}`"))?;
            let shaped = |t: &Term, head: &str| {
                t.as_app()
                    .and_then(|(fun, _)| fun.const_name())
                    .is_some_and(|n| n == head)
            };
            match p[6] {
                Assertion::Leq(l, r) if shaped(l, &f) && shaped(r, &k) => Ok(()),
                other => Err(format!("{rule}: last premise must be `{f} _ <= {k} _`, got `{other}`")),
            }
        }
        Rule::Pos => {
            let (s, t) = leq_parts(p[0], "pos")?;
            let back = Assertion::Leq(t, s);
            expect(*p[1] == back, || format!("pos: second premise must be `{back}`"))?;
            expect(terms[0].is_const(), || format!("pos: `{}` is not a constant", terms[0]))
        }
        Rule::PosPrime => {
            let (l, r) = leq_parts(p[0], "posp")?;
            let back = Assertion::Leq(r, l);
            expect(*p[1] == back, || format!("posp: second premise must be `{back}`"))
        }
        Rule::PolPlus | Rule::PolMinus => {
            let pol = if rule == Rule::PolPlus {
                Polarity::Plus
            } else {
                Polarity::Minus
            };
            let f = expect_pol(p[0], pol, rule)?;
            let (l, g) = leq_parts(p[1], rule.name())?;
            let fc = konst(sig, &f)?;
            expect(l == fc, || format!("{rule}: second premise must start at `{f}`"))?;
            expect(g.ty().is_arrow(), || {
                format!("{rule}: `{g}` is not a function constant")
            })?;
            let back = Assertion::Leq(g, fc);
            expect(*p[2] == back, || format!("{rule}: third premise must be `{back}`"))
        }
    }
}
