use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::preorder::FinPreorder;
use crate::types::SimpleType;

/// The carrier of one type in a full structure.
///
/// Arrow spaces are implicit: element `f` is the table whose entry at domain
/// element `x` is digit `x` of `f` written in base `|cod|`, most significant
/// digit first. The order is computed pointwise on demand, so large spaces
/// never materialize a matrix.
pub struct Space {
    ty: SimpleType,
    size: usize,
    kind: Kind,
}

enum Kind {
    Base(FinPreorder),
    Arrow {
        dom: Arc<Space>,
        cod: Arc<Space>,
        /// `pows[x] = |cod|^(|dom| - 1 - x)`
        pows: Vec<usize>,
    },
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space({}, {} elements)", self.ty, self.size)
    }
}

impl Space {
    pub fn ty(&self) -> &SimpleType {
        &self.ty
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn base_preorder(&self) -> Option<&FinPreorder> {
        match &self.kind {
            Kind::Base(p) => Some(p),
            Kind::Arrow { .. } => None,
        }
    }

    pub fn domain(&self) -> Option<&Arc<Space>> {
        match &self.kind {
            Kind::Arrow { dom, .. } => Some(dom),
            Kind::Base(_) => None,
        }
    }

    pub fn codomain(&self) -> Option<&Arc<Space>> {
        match &self.kind {
            Kind::Arrow { cod, .. } => Some(cod),
            Kind::Base(_) => None,
        }
    }

    /// Table lookup `f(x)`. Panics on base spaces.
    pub fn apply(&self, f: usize, x: usize) -> usize {
        match &self.kind {
            Kind::Arrow { cod, pows, .. } => (f / pows[x]) % cod.size,
            Kind::Base(_) => panic!("apply on base space {}", self.ty),
        }
    }

    pub fn table(&self, f: usize) -> Vec<usize> {
        let n = self.domain().map_or(0, |d| d.size);
        (0..n).map(|x| self.apply(f, x)).collect()
    }

    /// Inverse of [`Space::table`]; `None` if the table has the wrong length
    /// or an entry out of range.
    pub fn from_table(&self, table: &[usize]) -> Option<usize> {
        let Kind::Arrow { dom, cod, pows } = &self.kind else {
            return None;
        };
        if table.len() != dom.size || table.iter().any(|&v| v >= cod.size) {
            return None;
        }
        Some(table.iter().zip(pows).map(|(v, p)| v * p).sum())
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        match &self.kind {
            Kind::Base(p) => p.leq(a, b),
            Kind::Arrow { dom, cod, .. } => (0..dom.size).all(|x| cod.leq(self.apply(a, x), self.apply(b, x))),
        }
    }

    pub fn is_monotone(&self, f: usize) -> bool {
        self.respects(f, false)
    }

    pub fn is_antitone(&self, f: usize) -> bool {
        self.respects(f, true)
    }

    fn respects(&self, f: usize, flip: bool) -> bool {
        let Kind::Arrow { dom, cod, .. } = &self.kind else {
            return false;
        };
        for x in 0..dom.size {
            let fx = self.apply(f, x);
            for y in 0..dom.size {
                if x != y && dom.leq(x, y) {
                    let fy = self.apply(f, y);
                    let ok = if flip { cod.leq(fy, fx) } else { cod.leq(fx, fy) };
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Readable element name: base element names, tables as `[..]`.
    pub fn describe(&self, e: usize) -> String {
        match &self.kind {
            Kind::Base(p) => p.name(e).to_string(),
            Kind::Arrow { cod, .. } => {
                let cells: Vec<String> = self.table(e).into_iter().map(|v| cod.describe(v)).collect();
                format!("[{}]", cells.join(" "))
            }
        }
    }
}

/// A full type hierarchy over fixed base preorders. Spaces are built lazily
/// and memoized per type; concurrent readers share them.
pub struct FullStructure {
    bases: BTreeMap<String, FinPreorder>,
    cell_budget: u64,
    spaces: RwLock<HashMap<SimpleType, Arc<Space>>>,
}

impl fmt::Debug for FullStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FullStructure")
            .field("bases", &self.bases)
            .field("cell_budget", &self.cell_budget)
            .finish()
    }
}

impl Clone for FullStructure {
    fn clone(&self) -> Self {
        let spaces = self.spaces.read().expect("space cache poisoned").clone();
        FullStructure {
            bases: self.bases.clone(),
            cell_budget: self.cell_budget,
            spaces: RwLock::new(spaces),
        }
    }
}

impl PartialEq for FullStructure {
    fn eq(&self, other: &Self) -> bool {
        self.bases == other.bases
    }
}

impl Eq for FullStructure {}

pub const DEFAULT_CELL_BUDGET: u64 = 1_000_000;

impl FullStructure {
    pub fn new(bases: BTreeMap<String, FinPreorder>) -> Self {
        Self::with_budget(bases, DEFAULT_CELL_BUDGET)
    }

    pub fn with_budget(bases: BTreeMap<String, FinPreorder>, cell_budget: u64) -> Self {
        FullStructure {
            bases,
            cell_budget,
            spaces: RwLock::new(HashMap::new()),
        }
    }

    pub fn bases(&self) -> &BTreeMap<String, FinPreorder> {
        &self.bases
    }

    pub fn base(&self, name: &str) -> Option<&FinPreorder> {
        self.bases.get(name)
    }

    pub fn cell_budget(&self) -> u64 {
        self.cell_budget
    }

    /// The carrier at `ty`. Arrow spaces with more than `cell_budget` table
    /// cells (`|cod|^|dom| * |dom|`) are refused.
    pub fn space(&self, ty: &SimpleType) -> Result<Arc<Space>> {
        if let Some(s) = self.spaces.read().expect("space cache poisoned").get(ty) {
            return Ok(s.clone());
        }
        let built = match ty {
            SimpleType::Base(name) => {
                let p = self
                    .bases
                    .get(name)
                    .ok_or_else(|| Error::UndeclaredBase(name.clone()))?
                    .clone();
                Space {
                    ty: ty.clone(),
                    size: p.len(),
                    kind: Kind::Base(p),
                }
            }
            SimpleType::Arrow(d, c) => {
                let dom = self.space(d)?;
                let cod = self.space(c)?;
                let over = || Error::CellBudget {
                    ty: ty.clone(),
                    cells: u128::MAX,
                    budget: self.cell_budget,
                };
                let exp = u32::try_from(dom.size).map_err(|_| over())?;
                let size = (cod.size as u128).checked_pow(exp).ok_or_else(over)?;
                let cells = size.saturating_mul(dom.size.max(1) as u128);
                if cells > self.cell_budget as u128 {
                    return Err(Error::CellBudget {
                        ty: ty.clone(),
                        cells,
                        budget: self.cell_budget,
                    });
                }
                let size = size as usize;
                let mut pows = vec![1usize; dom.size];
                for x in (0..dom.size.saturating_sub(1)).rev() {
                    pows[x] = pows[x + 1] * cod.size;
                }
                Space {
                    ty: ty.clone(),
                    size,
                    kind: Kind::Arrow { dom, cod, pows },
                }
            }
        };
        let mut w = self.spaces.write().expect("space cache poisoned");
        Ok(w.entry(ty.clone()).or_insert_with(|| Arc::new(built)).clone())
    }
}
