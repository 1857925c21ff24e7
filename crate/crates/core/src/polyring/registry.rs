//! Variable registries: ordered variable names partitioned into named blocks.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

/// Index of a variable inside its registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// An ordered list of variable names partitioned into named blocks
/// (parameters, probability coordinates, multipliers, auxiliaries).
///
/// Registries are immutable once built and shared behind an [`Arc`]; two
/// polynomials interoperate only when they point at the same registry.
#[derive(Debug)]
pub struct VarRegistry {
    names: Vec<String>,
    by_name: HashMap<String, Var>,
    blocks: Vec<(String, Range<usize>)>,
}

impl VarRegistry {
    /// Build a registry from `(block name, variable names)` groups.
    ///
    /// Panics if a variable name repeats or the blocks are empty; those are
    /// construction bugs, not runtime conditions.
    pub fn new(blocks: &[(&str, &[&str])]) -> Arc<Self> {
        let mut names = Vec::new();
        let mut by_name = HashMap::new();
        let mut spans = Vec::new();
        for (block, vars) in blocks {
            let start = names.len();
            for v in *vars {
                let id = Var(names.len() as u32);
                assert!(
                    by_name.insert(v.to_string(), id).is_none(),
                    "duplicate variable `{v}`"
                );
                names.push(v.to_string());
            }
            spans.push((block.to_string(), start..names.len()));
        }
        assert!(!names.is_empty(), "registry must declare variables");
        Arc::new(VarRegistry {
            names,
            by_name,
            blocks: spans,
        })
    }

    /// Single unnamed block; convenient for tests and toy ideals.
    pub fn flat(vars: &[&str]) -> Arc<Self> {
        VarRegistry::new(&[("vars", vars)])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.idx()]
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.names.len() as u32).map(Var)
    }

    /// Variables of a named block, in declaration order.
    pub fn block(&self, block: &str) -> Vec<Var> {
        self.blocks
            .iter()
            .find(|(b, _)| b == block)
            .map(|(_, r)| r.clone().map(|i| Var(i as u32)).collect())
            .unwrap_or_default()
    }

    pub fn block_names(&self) -> impl Iterator<Item = &str> {
        self.blocks.iter().map(|(b, _)| b.as_str())
    }

    /// Which block a variable belongs to.
    pub fn block_of(&self, v: Var) -> &str {
        self.blocks
            .iter()
            .find(|(_, r)| r.contains(&v.idx()))
            .map(|(b, _)| b.as_str())
            .expect("blocks partition the index range")
    }
}

/// Registry identity: polynomials interoperate iff they share the same
/// allocation.
pub(crate) fn same_registry(a: &Arc<VarRegistry>, b: &Arc<VarRegistry>) -> bool {
    Arc::ptr_eq(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_partition_and_lookup_roundtrips() {
        let reg = VarRegistry::new(&[("u", &["u0", "u1"]), ("p", &["p0", "p1"]), ("aux", &["t"])]);
        assert_eq!(reg.len(), 5);
        for v in reg.vars() {
            assert_eq!(reg.var(reg.name(v)), Some(v));
        }
        assert_eq!(reg.block("p"), vec![Var(2), Var(3)]);
        assert_eq!(reg.block_of(Var(4)), "aux");
    }

    #[test]
    #[should_panic(expected = "duplicate variable")]
    fn duplicate_names_rejected() {
        VarRegistry::new(&[("a", &["x", "x"])]);
    }
}
