use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GroupTable;

/// A subset of group elements, stored as a bitset over element indices.
///
/// Equality and hashing look only at the members; the label is display data.
#[derive(Clone)]
pub struct Subgroup {
    members: FixedBitSet,
    order: usize,
    label: Option<String>,
}

impl Subgroup {
    pub fn from_bits(members: FixedBitSet) -> Self {
        let order = members.count_ones(..);
        Subgroup {
            members,
            order,
            label: None,
        }
    }

    pub fn from_elements(group_order: usize, elements: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = FixedBitSet::with_capacity(group_order);
        for e in elements {
            bits.insert(e);
        }
        Self::from_bits(bits)
    }

    pub fn trivial(group_order: usize) -> Self {
        Self::from_elements(group_order, [0])
    }

    pub fn whole(group_order: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(group_order);
        bits.insert_range(..);
        Self::from_bits(bits)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn set_label(&mut self, label: Option<String>) {
        self.label = label;
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.contains(g)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mut bits = self.members.clone();
        bits.intersect_with(&other.members);
        Subgroup::from_bits(bits)
    }

    /// Checks the subgroup axioms against `group`. Returns a witness pair
    /// `(a, b)` with `a * b` outside the set on failure (`(0, 0)` when the
    /// identity is missing).
    pub fn check_closed(&self, group: &GroupTable) -> Result<(), (usize, usize)> {
        if self.members.len() != group.order() || !self.contains(0) {
            return Err((0, 0));
        }
        for a in self.elements() {
            if !self.contains(group.inv(a)) {
                return Err((a, a));
            }
            for b in self.elements() {
                if !self.contains(group.mul(a, b)) {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}{:?}", self.to_vec()),
            None => write!(f, "{:?}", self.to_vec()),
        }
    }
}

/// JSON form: sorted array of element indices.
impl Serialize for Subgroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

/// Deserialized subgroups carry a bitset sized to their largest element; use
/// [`Subgroup::resized`] before comparing against a group's subgroups.
impl<'de> Deserialize<'de> for Subgroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let elements = Vec::<usize>::deserialize(d)?;
        let len = elements.iter().max().map_or(1, |m| m + 1);
        Ok(Subgroup::from_elements(len, elements))
    }
}

impl Subgroup {
    /// Re-sizes the underlying bitset to a group of order `group_order`.
    /// Returns `None` if an element lies outside the group.
    pub fn resized(&self, group_order: usize) -> Option<Subgroup> {
        if self.elements().any(|e| e >= group_order) {
            return None;
        }
        let mut s = Subgroup::from_elements(group_order, self.elements());
        s.label = self.label.clone();
        Some(s)
    }
}
