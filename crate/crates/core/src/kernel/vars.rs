//! Variable registry: the ordered, kind-tagged symbol table every polynomial
//! refers to.
//!
//! Registries are append-only. Extending a registry yields a new `Arc`; a
//! registry is compatible with another when one is a prefix of the other, and
//! polynomial operations pad exponent vectors to the longer of the two.

use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    /// Independent variable of the equation (x1..xn).
    Base,
    /// Generator of a radical-tower step (d1..dm).
    Radical,
    /// Transcendental constant (a, b, c).
    Param,
    /// Fresh parameter introduced while parametrizing (t's, z's).
    Fresh,
    /// Formal derivative symbol; only used in rendering contexts.
    Jet,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct VarInfo {
    name: String,
    kind: VarKind,
}

/// Ordered list of named variables. Order is fixed at creation; names unique.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VarRegistry {
    vars: Vec<VarInfo>,
}

impl VarRegistry {
    pub fn new() -> Arc<Self> {
        Arc::new(VarRegistry { vars: Vec::new() })
    }

    pub fn build(names: &[(&str, VarKind)]) -> Arc<Self> {
        let mut reg = VarRegistry { vars: Vec::new() };
        for (name, kind) in names {
            assert!(
                reg.lookup(name).is_none(),
                "duplicate variable name `{name}`"
            );
            reg.vars.push(VarInfo {
                name: (*name).to_owned(),
                kind: *kind,
            });
        }
        Arc::new(reg)
    }

    /// New registry with one more variable appended.
    pub fn with_var(self: &Arc<Self>, name: &str, kind: VarKind) -> (Arc<Self>, VarId) {
        assert!(
            self.lookup(name).is_none(),
            "duplicate variable name `{name}`"
        );
        let mut vars = self.vars.clone();
        vars.push(VarInfo {
            name: name.to_owned(),
            kind,
        });
        let id = VarId(vars.len() - 1);
        (Arc::new(VarRegistry { vars }), id)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.vars[v.0].name
    }

    pub fn kind(&self, v: VarId) -> VarKind {
        self.vars[v.0].kind
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|i| i.name == name).map(VarId)
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.vars.len()).map(VarId)
    }

    pub fn of_kind(&self, kind: VarKind) -> Vec<VarId> {
        self.ids().filter(|&v| self.kind(v) == kind).collect()
    }

    /// True when `self` is a prefix of `other` (or equal).
    pub fn is_prefix_of(&self, other: &VarRegistry) -> bool {
        self.vars.len() <= other.vars.len() && self.vars[..] == other.vars[..self.vars.len()]
    }

    /// Picks a variable name not already taken, trying `base` then
    /// `base1`, `base2`, ...
    pub fn fresh_name(&self, base: &str) -> String {
        if self.lookup(base).is_none() {
            return base.to_owned();
        }
        let mut i = 1usize;
        loop {
            let candidate = format!("{base}{i}");
            if self.lookup(&candidate).is_none() {
                return candidate;
            }
            i += 1;
        }
    }
}

impl fmt::Display for VarRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vars.iter().map(|i| i.name.as_str()).collect();
        write!(f, "[{}]", names.join(", "))
    }
}

/// Returns whichever of the two registries is the longer, asserting that the
/// shorter is a prefix of it.
pub fn join_registries(a: &Arc<VarRegistry>, b: &Arc<VarRegistry>) -> Arc<VarRegistry> {
    if a.len() >= b.len() {
        debug_assert!(b.is_prefix_of(a), "incompatible registries {b} vs {a}");
        a.clone()
    } else {
        debug_assert!(a.is_prefix_of(b), "incompatible registries {a} vs {b}");
        b.clone()
    }
}
