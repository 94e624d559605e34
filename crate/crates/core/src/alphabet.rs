//! Atomic propositions, label sets and the tagged alphabet seen by
//! stack-aware specifications.
//!
//! Game vertices are labeled with sets of atomic propositions.  Up to 64
//! propositions are supported, so a label set is a bitmask.  Specifications
//! that observe the call/return structure of a play read *tagged* symbols:
//! the label set together with whether the position performs a call, a
//! return, or neither.

use std::fmt;

/// Index of an atomic proposition in an [`ApTable`].
pub type ApId = u8;

/// Maximum number of atomic propositions.
pub const MAX_APS: usize = 64;

/// Interned table of atomic proposition names.
///
/// The table fixes the meaning of bit `i` in every [`LabelSet`] used with it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApTable {
    names: Vec<String>,
}

impl ApTable {
    pub fn new() -> Self {
        ApTable { names: Vec::new() }
    }

    /// Build a table from names, failing on duplicates or overflow.
    pub fn from_names<I, S>(names: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut t = ApTable::new();
        for n in names {
            t.intern(&n.into())?;
        }
        Ok(t)
    }

    /// Return the id for `name`, adding it if new.
    pub fn intern(&mut self, name: &str) -> Result<ApId, AlphabetError> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i as ApId);
        }
        if self.names.len() >= MAX_APS {
            return Err(AlphabetError::TooManyPropositions);
        }
        self.names.push(name.to_string());
        Ok((self.names.len() - 1) as ApId)
    }

    /// Look up an existing name.
    pub fn lookup(&self, name: &str) -> Option<ApId> {
        self.names.iter().position(|n| n == name).map(|i| i as ApId)
    }

    pub fn name(&self, id: ApId) -> &str {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// All ids as a mask (the full universe of this table).
    pub fn universe(&self) -> LabelSet {
        if self.names.is_empty() {
            LabelSet::empty()
        } else {
            LabelSet((!0u64) >> (64 - self.names.len()))
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = ApId> + '_ {
        (0..self.names.len()).map(|i| i as ApId)
    }

    /// Render a label set using this table's names, e.g. `{p, q}`.
    pub fn format_set(&self, set: LabelSet) -> String {
        let mut parts = Vec::new();
        for id in self.ids() {
            if set.contains(id) {
                parts.push(self.name(id).to_string());
            }
        }
        format!("{{{}}}", parts.join(", "))
    }
}

/// A set of atomic propositions, stored as a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabelSet(pub u64);

impl LabelSet {
    pub const fn empty() -> Self {
        LabelSet(0)
    }

    pub fn singleton(ap: ApId) -> Self {
        LabelSet(1u64 << ap)
    }

    pub fn from_ids<I: IntoIterator<Item = ApId>>(ids: I) -> Self {
        let mut s = 0u64;
        for id in ids {
            s |= 1u64 << id;
        }
        LabelSet(s)
    }

    pub fn contains(self, ap: ApId) -> bool {
        self.0 & (1u64 << ap) != 0
    }

    pub fn insert(&mut self, ap: ApId) {
        self.0 |= 1u64 << ap;
    }

    pub fn union(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 | other.0)
    }

    pub fn intersect(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 & other.0)
    }

    pub fn minus(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 & !other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = ApId> {
        (0..64u8).filter(move |i| self.contains(*i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelSet[")?;
        let mut first = true;
        for id in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{id}")?;
            first = false;
        }
        write!(f, "]")
    }
}

/// Call/return structure of one play position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// Plain move inside a module.
    Internal,
    /// The position performs a call (transfers control into a box).
    Call,
    /// The position performs a matching return out of a box.
    Return,
}

/// One position as seen by a stack-aware specification: the vertex label and
/// the structural tag of the move taken *from* that vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TaggedSymbol {
    pub label: LabelSet,
    pub tag: Tag,
}

impl TaggedSymbol {
    pub fn new(label: LabelSet, tag: Tag) -> Self {
        TaggedSymbol { label, tag }
    }

    pub fn internal(label: LabelSet) -> Self {
        TaggedSymbol { label, tag: Tag::Internal }
    }
}

/// A finite tagged word (used for finite prefixes and lasso components).
pub type TaggedWord = Vec<TaggedSymbol>;

/// A boolean predicate over label sets, used as a symbolic transition guard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pred {
    True,
    False,
    /// Holds iff the proposition is in the label.
    Ap(ApId),
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
}

impl Pred {
    pub fn eval(&self, label: LabelSet) -> bool {
        match self {
            Pred::True => true,
            Pred::False => false,
            Pred::Ap(a) => label.contains(*a),
            Pred::Not(p) => !p.eval(label),
            Pred::And(p, q) => p.eval(label) && q.eval(label),
            Pred::Or(p, q) => p.eval(label) || q.eval(label),
        }
    }

    /// Every proposition mentioned anywhere in the predicate.
    pub fn mentioned(&self) -> LabelSet {
        match self {
            Pred::True | Pred::False => LabelSet::empty(),
            Pred::Ap(a) => LabelSet::singleton(*a),
            Pred::Not(p) => p.mentioned(),
            Pred::And(p, q) | Pred::Or(p, q) => p.mentioned().union(q.mentioned()),
        }
    }

    pub fn and(self, other: Pred) -> Pred {
        match (self, other) {
            (Pred::True, q) => q,
            (p, Pred::True) => p,
            (Pred::False, _) | (_, Pred::False) => Pred::False,
            (p, q) => Pred::And(Box::new(p), Box::new(q)),
        }
    }

    pub fn or(self, other: Pred) -> Pred {
        match (self, other) {
            (Pred::False, q) => q,
            (p, Pred::False) => p,
            (Pred::True, _) | (_, Pred::True) => Pred::True,
            (p, q) => Pred::Or(Box::new(p), Box::new(q)),
        }
    }

    pub fn not(self) -> Pred {
        match self {
            Pred::True => Pred::False,
            Pred::False => Pred::True,
            p => Pred::Not(Box::new(p)),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("more than {MAX_APS} atomic propositions")]
    TooManyPropositions,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intern_is_idempotent() {
        let mut t = ApTable::new();
        let a = t.intern("p").unwrap();
        let b = t.intern("q").unwrap();
        let a2 = t.intern("p").unwrap();
        assert_eq!(a, a2);
        assert_ne!(a, b);
        assert_eq!(t.len(), 2);
        assert_eq!(t.name(b), "q");
    }

    #[test]
    fn table_overflow_is_reported() {
        let mut t = ApTable::new();
        for i in 0..MAX_APS {
            t.intern(&format!("p{i}")).unwrap();
        }
        assert_eq!(t.intern("overflow"), Err(AlphabetError::TooManyPropositions));
        // Existing names still resolve.
        assert!(t.intern("p3").is_ok());
    }

    #[test]
    fn universe_matches_len() {
        let t = ApTable::from_names(["a", "b", "c"]).unwrap();
        assert_eq!(t.universe(), LabelSet::from_ids([0, 1, 2]));
        assert_eq!(ApTable::new().universe(), LabelSet::empty());
    }

    #[test]
    fn set_operations() {
        let s = LabelSet::from_ids([1, 3]);
        let u = LabelSet::from_ids([3, 5]);
        assert_eq!(s.union(u), LabelSet::from_ids([1, 3, 5]));
        assert_eq!(s.intersect(u), LabelSet::from_ids([3]));
        assert_eq!(s.minus(u), LabelSet::from_ids([1]));
        assert!(s.contains(1));
        assert!(!s.contains(2));
        assert!(LabelSet::from_ids([3]).is_subset_of(s));
        assert!(!u.is_subset_of(s));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn pred_eval_and_mentions() {
        // (p0 and not p1) or p2
        let p = Pred::Ap(0).and(Pred::Ap(1).not()).or(Pred::Ap(2));
        assert!(p.eval(LabelSet::from_ids([0])));
        assert!(!p.eval(LabelSet::from_ids([0, 1])));
        assert!(p.eval(LabelSet::from_ids([0, 1, 2])));
        assert!(!p.eval(LabelSet::empty()));
        assert_eq!(p.mentioned(), LabelSet::from_ids([0, 1, 2]));
        // Smart constructors fold constants.
        assert_eq!(Pred::True.and(Pred::Ap(0)), Pred::Ap(0));
        assert_eq!(Pred::False.or(Pred::Ap(0)), Pred::Ap(0));
        assert_eq!(Pred::True.not(), Pred::False);
    }
}
