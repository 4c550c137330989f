//! Feature domains and the value sets carried by tree literals.
//!
//! Every feature value is stored as a [`Value`] (an `i64`). For categorical
//! features the value is the position of the symbol in the domain list; for
//! ordinal features it is the integer itself. A [`ValueSet`] is kept in a
//! canonical form (sorted, disjoint, non-adjacent closed ranges) so finite
//! sets and intervals share one set algebra and compare structurally.

use std::fmt;

use serde::{Deserialize, Serialize};

pub type Value = i64;

/// A class label or categorical domain symbol as written in tree files.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Symbol {
    Int(i64),
    Str(String),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Int(i) => write!(f, "{i}"),
            Symbol::Str(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Categorical(Vec<Symbol>),
    Ordinal { min: Value, max: Value },
}

impl Domain {
    pub fn size(&self) -> u64 {
        match self {
            Domain::Categorical(values) => values.len() as u64,
            Domain::Ordinal { min, max } => (max - min) as u64 + 1,
        }
    }

    pub fn is_ordinal(&self) -> bool {
        matches!(self, Domain::Ordinal { .. })
    }

    pub fn contains(&self, v: Value) -> bool {
        match self {
            Domain::Categorical(values) => v >= 0 && (v as usize) < values.len(),
            Domain::Ordinal { min, max } => *min <= v && v <= *max,
        }
    }

    pub fn full_set(&self) -> ValueSet {
        match self {
            Domain::Categorical(values) => ValueSet::interval(0, values.len() as Value - 1),
            Domain::Ordinal { min, max } => ValueSet::interval(*min, *max),
        }
    }

    pub fn values(&self) -> impl Iterator<Item = Value> {
        let (lo, hi) = match self {
            Domain::Categorical(values) => (0, values.len() as Value - 1),
            Domain::Ordinal { min, max } => (*min, *max),
        };
        lo..=hi
    }

    /// Symbol used when rendering `v` back to users.
    pub fn symbol(&self, v: Value) -> Symbol {
        match self {
            Domain::Categorical(values) => values[v as usize].clone(),
            Domain::Ordinal { .. } => Symbol::Int(v),
        }
    }

    pub fn lookup(&self, sym: &Symbol) -> Option<Value> {
        match self {
            Domain::Categorical(values) => values.iter().position(|s| s == sym).map(|p| p as Value),
            Domain::Ordinal { .. } => match sym {
                Symbol::Int(i) if self.contains(*i) => Some(*i),
                Symbol::Str(s) => s.trim().parse().ok().filter(|v| self.contains(*v)),
                _ => None,
            },
        }
    }

    /// Looks a value up from its textual form (CLI instances).
    pub fn parse(&self, text: &str) -> Option<Value> {
        let text = text.trim();
        match self {
            Domain::Categorical(values) => values
                .iter()
                .position(|s| s.to_string() == text)
                .map(|p| p as Value),
            Domain::Ordinal { .. } => text.parse().ok().filter(|v| self.contains(*v)),
        }
    }
}

/// A set of feature values in canonical range form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ValueSet {
    ranges: Vec<(Value, Value)>,
}

impl ValueSet {
    pub fn empty() -> Self {
        ValueSet { ranges: Vec::new() }
    }

    /// Closed interval `[lo, hi]`; empty when `lo > hi`.
    pub fn interval(lo: Value, hi: Value) -> Self {
        if lo > hi {
            return Self::empty();
        }
        ValueSet {
            ranges: vec![(lo, hi)],
        }
    }

    pub fn singleton(v: Value) -> Self {
        Self::interval(v, v)
    }

    pub fn from_values<I: IntoIterator<Item = Value>>(values: I) -> Self {
        let mut vals: Vec<Value> = values.into_iter().collect();
        vals.sort_unstable();
        vals.dedup();
        let mut ranges: Vec<(Value, Value)> = Vec::new();
        for v in vals {
            match ranges.last_mut() {
                Some((_, hi)) if *hi + 1 == v => *hi = v,
                _ => ranges.push((v, v)),
            }
        }
        ValueSet { ranges }
    }

    fn from_ranges(mut raw: Vec<(Value, Value)>) -> Self {
        raw.retain(|(lo, hi)| lo <= hi);
        raw.sort_unstable();
        let mut ranges: Vec<(Value, Value)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match ranges.last_mut() {
                Some((_, last_hi)) if lo <= *last_hi + 1 => *last_hi = (*last_hi).max(hi),
                _ => ranges.push((lo, hi)),
            }
        }
        ValueSet { ranges }
    }

    pub fn ranges(&self) -> &[(Value, Value)] {
        &self.ranges
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn len(&self) -> u64 {
        self.ranges.iter().map(|(lo, hi)| (hi - lo) as u64 + 1).sum()
    }

    pub fn contains(&self, v: Value) -> bool {
        // ranges are sorted, so binary search on the lower bounds
        let idx = self.ranges.partition_point(|(lo, _)| *lo <= v);
        idx > 0 && v <= self.ranges[idx - 1].1
    }

    pub fn iter(&self) -> impl Iterator<Item = Value> + '_ {
        self.ranges.iter().flat_map(|&(lo, hi)| lo..=hi)
    }

    /// Single contiguous range, if the set is one.
    pub fn as_interval(&self) -> Option<(Value, Value)> {
        match self.ranges.as_slice() {
            [r] => Some(*r),
            _ => None,
        }
    }

    pub fn intersect(&self, other: &ValueSet) -> ValueSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a_lo, a_hi) = self.ranges[i];
            let (b_lo, b_hi) = other.ranges[j];
            let lo = a_lo.max(b_lo);
            let hi = a_hi.min(b_hi);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a_hi < b_hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        ValueSet { ranges: out }
    }

    pub fn intersects(&self, other: &ValueSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a_lo, a_hi) = self.ranges[i];
            let (b_lo, b_hi) = other.ranges[j];
            if a_lo.max(b_lo) <= a_hi.min(b_hi) {
                return true;
            }
            if a_hi < b_hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        false
    }

    pub fn union(&self, other: &ValueSet) -> ValueSet {
        let mut raw = self.ranges.clone();
        raw.extend_from_slice(&other.ranges);
        Self::from_ranges(raw)
    }

    pub fn difference(&self, other: &ValueSet) -> ValueSet {
        let mut out = Vec::new();
        for &(lo, hi) in &self.ranges {
            let mut cur = lo;
            for &(o_lo, o_hi) in &other.ranges {
                if o_hi < cur || o_lo > hi {
                    continue;
                }
                if o_lo > cur {
                    out.push((cur, o_lo - 1));
                }
                cur = o_hi.saturating_add(1);
                if cur > hi {
                    break;
                }
            }
            if cur <= hi {
                out.push((cur, hi));
            }
        }
        ValueSet { ranges: out }
    }

    pub fn is_subset(&self, other: &ValueSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Renders the set with the domain's symbols, e.g. `{0,1}` or `[3..25]`.
    pub fn display<'a>(&'a self, domain: &'a Domain) -> impl fmt::Display + 'a {
        DisplaySet { set: self, domain }
    }
}

struct DisplaySet<'a> {
    set: &'a ValueSet,
    domain: &'a Domain,
}

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.domain.is_ordinal() {
            if let Some((lo, hi)) = self.set.as_interval() {
                if hi > lo + 1 {
                    return write!(f, "[{lo}..{hi}]");
                }
            }
        }
        f.write_str("{")?;
        for (k, v) in self.set.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.domain.symbol(v))?;
        }
        f.write_str("}")
    }
}
