//! Simple types over named base types.

use std::fmt;
use std::sync::Arc;

/// A simple type: a named base type or an arrow `σ -> τ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Base(String),
    Arrow(Arc<SimpleType>, Arc<SimpleType>),
}

impl SimpleType {
    pub fn base(name: impl Into<String>) -> Self {
        SimpleType::Base(name.into())
    }

    pub fn arrow(domain: SimpleType, codomain: SimpleType) -> Self {
        SimpleType::Arrow(Arc::new(domain), Arc::new(codomain))
    }

    pub fn is_arrow(&self) -> bool {
        matches!(self, SimpleType::Arrow(..))
    }

    pub fn domain(&self) -> Option<&SimpleType> {
        match self {
            SimpleType::Arrow(d, _) => Some(d),
            SimpleType::Base(_) => None,
        }
    }

    pub fn codomain(&self) -> Option<&SimpleType> {
        match self {
            SimpleType::Arrow(_, c) => Some(c),
            SimpleType::Base(_) => None,
        }
    }

    /// Base types have order 0; `σ -> τ` has order `1 + max(order σ, order τ)`.
    pub fn order(&self) -> usize {
        match self {
            SimpleType::Base(_) => 0,
            SimpleType::Arrow(d, c) => 1 + d.order().max(c.order()),
        }
    }

    /// Every type occurring inside `self`, including `self`, in post-order.
    pub fn subtypes(&self) -> Vec<SimpleType> {
        let mut out = Vec::new();
        self.collect_subtypes(&mut out);
        out
    }

    fn collect_subtypes(&self, out: &mut Vec<SimpleType>) {
        if let SimpleType::Arrow(d, c) = self {
            d.collect_subtypes(out);
            c.collect_subtypes(out);
        }
        if !out.contains(self) {
            out.push(self.clone());
        }
    }

    /// Names of the base types mentioned by this type.
    pub fn base_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_bases(&mut out);
        out
    }

    fn collect_bases<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            SimpleType::Base(b) => {
                if !out.contains(&b.as_str()) {
                    out.push(b);
                }
            }
            SimpleType::Arrow(d, c) => {
                d.collect_bases(out);
                c.collect_bases(out);
            }
        }
    }
}

impl fmt::Display for SimpleType {
    /// Arrows associate to the right; only a domain arrow is parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base(b) => f.write_str(b),
            SimpleType::Arrow(d, c) => {
                if d.is_arrow() {
                    write!(f, "({d}) -> {c}")
                } else {
                    write!(f, "{d} -> {c}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_display() {
        let b = SimpleType::base("b");
        let t = SimpleType::base("t");
        let bt = SimpleType::arrow(b.clone(), t.clone());
        let phi = SimpleType::arrow(t.clone(), bt.clone());
        assert_eq!(b.order(), 0);
        assert_eq!(bt.order(), 1);
        assert_eq!(phi.order(), 2);
        assert_eq!(phi.to_string(), "t -> b -> t");
        let higher = SimpleType::arrow(bt.clone(), t.clone());
        assert_eq!(higher.to_string(), "(b -> t) -> t");
        assert_eq!(phi.subtypes(), vec![t.clone(), b.clone(), bt.clone(), phi.clone()]);
    }
}
