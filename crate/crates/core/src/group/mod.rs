//! Finite groups as indexed multiplication tables.
//!
//! Every group, whatever it was built from, is stored as dense element
//! indices `0..order` with the identity pinned at `0`.

mod field;
mod subgroup;

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::{prime_power, FiniteField};
pub use subgroup::Subgroup;

/// Default cap on group order.
pub const DEFAULT_MAX_ORDER: usize = 4096;
/// Orders above this get a randomized associativity spot check.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 512;

/// Structured description of a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic {
        n: usize,
    },
    VectorSpace {
        q: usize,
        dim: usize,
    },
    Table {
        mul: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    Product {
        factors: Vec<GroupSpec>,
    },
}

impl GroupSpec {
    pub fn cyclic(n: usize) -> Self {
        GroupSpec::Cyclic { n }
    }

    pub fn vector_space(q: usize, dim: usize) -> Self {
        GroupSpec::VectorSpace { q, dim }
    }

    pub fn table(mul: Vec<Vec<usize>>, name: Option<&str>) -> Self {
        GroupSpec::Table {
            mul,
            name: name.map(str::to_owned),
        }
    }

    pub fn product(factors: Vec<GroupSpec>) -> Self {
        GroupSpec::Product { factors }
    }

    /// Order implied by the spec, without building it. `None` on overflow or
    /// invalid parameters.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic { n } => (*n >= 1).then_some(*n),
            GroupSpec::VectorSpace { q, dim } => q.checked_pow(u32::try_from(*dim).ok()?),
            GroupSpec::Table { mul, .. } => Some(mul.len()),
            GroupSpec::Product { factors } => factors
                .iter()
                .try_fold(1usize, |acc, f| acc.checked_mul(f.order()?)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GroupSpec::Cyclic { n } => format!("C_{n}"),
            GroupSpec::VectorSpace { q, dim } => format!("F_{q}^{dim}"),
            GroupSpec::Table { name: Some(n), .. } => n.clone(),
            GroupSpec::Table { mul, .. } => format!("T_{}", mul.len()),
            GroupSpec::Product { factors } => factors
                .iter()
                .map(GroupSpec::name)
                .collect::<Vec<_>>()
                .join(" x "),
        }
    }
}

/// Group table invariant names used in error witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableInvariant {
    Shape,
    Identity,
    LatinSquare,
    Inverse,
    Associativity,
}

impl TableInvariant {
    pub fn as_str(self) -> &'static str {
        match self {
            TableInvariant::Shape => "shape",
            TableInvariant::Identity => "identity",
            TableInvariant::LatinSquare => "latin_square",
            TableInvariant::Inverse => "inverse",
            TableInvariant::Associativity => "associativity",
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GroupError {
    #[error("group table violates {} invariant (witness {witness:?})", invariant.as_str())]
    Invariant {
        invariant: TableInvariant,
        witness: Vec<usize>,
    },
    #[error("q = {0} is not a prime power")]
    NotPrimePower(usize),
    #[error("invalid group parameter: {0}")]
    InvalidParameter(String),
    #[error("group order {order} exceeds cap {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("operation requires an abelian group")]
    NotAbelian,
    #[error("invalid embedding: {reason} (witness {witness:?})")]
    Embedding {
        reason: &'static str,
        witness: Vec<usize>,
    },
}

/// Construction limits. `seed` drives the associativity spot check on large
/// groups.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_order: usize,
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: DEFAULT_MAX_ORDER,
            seed: 0,
        }
    }
}

impl Limits {
    /// Default limits with `LATSUPER_MAX_ORDER` applied when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var("LATSUPER_MAX_ORDER")
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            limits.max_order = cap;
        }
        limits
    }
}

/// A finite group as a multiplication table over `0..order`.
#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    spec: GroupSpec,
}

impl PartialEq for GroupTable {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

pub fn make_group(spec: &GroupSpec) -> Result<GroupTable, GroupError> {
    make_group_with(spec, &Limits::default())
}

pub fn make_group_with(spec: &GroupSpec, limits: &Limits) -> Result<GroupTable, GroupError> {
    let order = spec
        .order()
        .ok_or_else(|| GroupError::InvalidParameter(format!("{spec:?}")))?;
    if order > limits.max_order {
        return Err(GroupError::TooLarge {
            order,
            cap: limits.max_order,
        });
    }
    let mul = raw_table(spec)?;
    GroupTable::from_flat(order, mul, spec.clone(), limits)
}

fn raw_table(spec: &GroupSpec) -> Result<Vec<u32>, GroupError> {
    match spec {
        GroupSpec::Cyclic { n } => {
            if *n == 0 {
                return Err(GroupError::InvalidParameter("cyclic order n must be >= 1".into()));
            }
            let n = *n;
            Ok((0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect())
        }
        GroupSpec::VectorSpace { q, dim } => {
            if *dim == 0 {
                return Err(GroupError::InvalidParameter("dim must be >= 1".into()));
            }
            let field = FiniteField::new(*q)?;
            let space = VectorSpace::new(field, *dim);
            let n = space.size();
            let mut mul = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    mul.push(space.add(a, b) as u32);
                }
            }
            Ok(mul)
        }
        GroupSpec::Table { mul, .. } => {
            let n = mul.len();
            if n == 0 {
                return Err(GroupError::Invariant {
                    invariant: TableInvariant::Shape,
                    witness: vec![],
                });
            }
            let mut flat = Vec::with_capacity(n * n);
            for (i, row) in mul.iter().enumerate() {
                if row.len() != n {
                    return Err(GroupError::Invariant {
                        invariant: TableInvariant::Shape,
                        witness: vec![i],
                    });
                }
                for (j, &v) in row.iter().enumerate() {
                    if v >= n {
                        return Err(GroupError::Invariant {
                            invariant: TableInvariant::Shape,
                            witness: vec![i, j],
                        });
                    }
                    flat.push(v as u32);
                }
            }
            Ok(flat)
        }
        GroupSpec::Product { factors } => {
            let mut order = 1usize;
            let mut table = vec![0u32];
            for f in factors {
                let fo = f.order().ok_or_else(|| GroupError::InvalidParameter(format!("{f:?}")))?;
                let ft = raw_table(f)?;
                let new_order = order * fo;
                let mut next = vec![0u32; new_order * new_order];
                // index (a, b) = a * fo + b, earlier factors most significant
                for a1 in 0..order {
                    for b1 in 0..fo {
                        let x = a1 * fo + b1;
                        for a2 in 0..order {
                            let hi = table[a1 * order + a2] as usize;
                            for b2 in 0..fo {
                                let lo = ft[b1 * fo + b2] as usize;
                                next[x * new_order + a2 * fo + b2] = (hi * fo + lo) as u32;
                            }
                        }
                    }
                }
                order = new_order;
                table = next;
            }
            Ok(table)
        }
    }
}

impl GroupTable {
    fn from_flat(
        order: usize,
        mul: Vec<u32>,
        spec: GroupSpec,
        limits: &Limits,
    ) -> Result<Self, GroupError> {
        let inv = validate(order, &mul, limits)?;
        Ok(GroupTable {
            order,
            mul,
            inv,
            spec,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `x g x^-1`
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn name(&self) -> String {
        self.spec.name()
    }

    pub fn mul_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, g| num_integer::lcm(acc, self.element_order(g)))
    }

    /// Human-readable element name derived from the spec.
    pub fn element_label(&self, g: usize) -> String {
        match &self.spec {
            GroupSpec::Cyclic { .. } => match g {
                0 => "1".into(),
                1 => "x".into(),
                _ => format!("x^{g}"),
            },
            GroupSpec::VectorSpace { q, dim } => {
                let mut coords = vec![0; *dim];
                let mut rest = g;
                for c in coords.iter_mut().rev() {
                    *c = rest % q;
                    rest /= q;
                }
                let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
                format!("({})", parts.join(","))
            }
            _ => format!("g{g}"),
        }
    }

    /// Conjugacy classes, each sorted, ordered by minimal element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = FixedBitSet::with_capacity(self.order);
        let mut classes = Vec::new();
        for g in 0..self.order {
            if seen.contains(g) {
                continue;
            }
            let mut class = FixedBitSet::with_capacity(self.order);
            for x in 0..self.order {
                class.insert(self.conjugate(g, x));
            }
            seen.union_with(&class);
            classes.push(class.ones().collect());
        }
        classes
    }

    /// Smallest subgroup containing `gens`.
    pub fn subgroup_generated(&self, gens: impl IntoIterator<Item = usize>) -> Subgroup {
        let gens: Vec<usize> = gens.into_iter().filter(|&g| g != 0).collect();
        let mut bits = FixedBitSet::with_capacity(self.order);
        bits.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !bits.contains(y) {
                    bits.insert(y);
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_bits(bits)
    }

    /// Product set `AB`; for normal subgroups this is their join.
    pub fn product_set(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut bits = b.bits().clone();
        for x in a.elements() {
            if bits.contains(x) {
                continue;
            }
            for y in b.elements() {
                bits.insert(self.mul(x, y));
            }
        }
        Subgroup::from_bits(bits)
    }

    /// Normal closure of a set of elements.
    pub fn normal_closure(&self, elements: impl IntoIterator<Item = usize>) -> Subgroup {
        let mut gens = FixedBitSet::with_capacity(self.order);
        for g in elements {
            for x in 0..self.order {
                gens.insert(self.conjugate(g, x));
            }
        }
        self.subgroup_generated(gens.ones())
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.normality_witness(h).is_none()
    }

    /// A pair `(g, x)` with `g ∈ H` and `x g x^-1 ∉ H`, if any.
    pub fn normality_witness(&self, h: &Subgroup) -> Option<(usize, usize)> {
        for g in h.elements() {
            for x in 0..self.order {
                if !h.contains(self.conjugate(g, x)) {
                    return Some((g, x));
                }
            }
        }
        None
    }

    /// The subgroup `h` re-indexed as a group in its own right (elements in
    /// increasing order, so the identity stays at 0), with the inclusion map.
    pub fn subgroup_table(&self, h: &Subgroup) -> Result<(GroupTable, Vec<usize>), GroupError> {
        h.check_closed(self).map_err(|(a, b)| GroupError::Invariant {
            invariant: TableInvariant::Shape,
            witness: vec![a, b],
        })?;
        let elems = h.to_vec();
        let mut pos = vec![usize::MAX; self.order];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = i;
        }
        let rows: Vec<Vec<usize>> = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos[self.mul(a, b)]).collect())
            .collect();
        let name = h
            .label()
            .map(str::to_owned)
            .unwrap_or_else(|| format!("H{}<{}", elems.len(), self.name()));
        let table = make_group(&GroupSpec::Table {
            mul: rows,
            name: Some(name),
        })?;
        Ok((table, elems))
    }
}

/// Checks the table invariants and returns the inverse map.
fn validate(order: usize, mul: &[u32], limits: &Limits) -> Result<Vec<u32>, GroupError> {
    let at = |a: usize, b: usize| mul[a * order + b] as usize;
    let fail = |invariant, witness| Err(GroupError::Invariant { invariant, witness });
    if mul.len() != order * order {
        return fail(TableInvariant::Shape, vec![]);
    }
    for g in 0..order {
        if at(0, g) != g || at(g, 0) != g {
            return fail(TableInvariant::Identity, vec![g]);
        }
    }
    let mut seen = vec![usize::MAX; order];
    for a in 0..order {
        for b in 0..order {
            let v = at(a, b);
            if seen[v] == a {
                let first = (0..b).find(|&c| at(a, c) == v).unwrap_or(0);
                return fail(TableInvariant::LatinSquare, vec![a, first, b]);
            }
            seen[v] = a;
        }
    }
    let mut seen = vec![usize::MAX; order];
    for b in 0..order {
        for a in 0..order {
            let v = at(a, b);
            if seen[v] == b {
                let first = (0..a).find(|&c| at(c, b) == v).unwrap_or(0);
                return fail(TableInvariant::LatinSquare, vec![first, a, b]);
            }
            seen[v] = b;
        }
    }
    let mut inv = vec![0u32; order];
    for g in 0..order {
        let h = (0..order).find(|&h| at(g, h) == 0).unwrap_or(0);
        if at(h, g) != 0 {
            return fail(TableInvariant::Inverse, vec![g, h]);
        }
        inv[g] = h as u32;
    }
    let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
    if order <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 1..order {
            for b in 1..order {
                let ab = at(a, b);
                for c in 1..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return fail(TableInvariant::Associativity, vec![a, b, c]);
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
        for _ in 0..10 * order {
            let (a, b, c) = (
                rng.gen_range(0..order),
                rng.gen_range(0..order),
                rng.gen_range(0..order),
            );
            if !assoc(a, b, c) {
                return fail(TableInvariant::Associativity, vec![a, b, c]);
            }
        }
    }
    Ok(inv)
}

/// Coordinates and scalar action for a `vector_space` group.
#[derive(Debug, Clone)]
pub struct VectorSpace {
    field: FiniteField,
    dim: usize,
}

impl VectorSpace {
    pub fn new(field: FiniteField, dim: usize) -> Self {
        VectorSpace { field, dim }
    }

    /// The space underlying a group built from a `vector_space` spec.
    pub fn of_group(group: &GroupTable) -> Option<Self> {
        match group.spec() {
            GroupSpec::VectorSpace { q, dim } => {
                Some(VectorSpace::new(FiniteField::new(*q).ok()?, *dim))
            }
            _ => None,
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.field.order().pow(self.dim as u32)
    }

    /// Row-major: the first coordinate is most significant.
    pub fn coords(&self, v: usize) -> Vec<usize> {
        let q = self.field.order();
        let mut out = vec![0; self.dim];
        let mut rest = v;
        for c in out.iter_mut().rev() {
            *c = rest % q;
            rest /= q;
        }
        out
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        let q = self.field.order();
        coords.iter().fold(0, |acc, &c| acc * q + c)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let sum: Vec<usize> = ca.iter().zip(&cb).map(|(&x, &y)| self.field.add(x, y)).collect();
        self.index(&sum)
    }

    pub fn scale(&self, c: usize, v: usize) -> usize {
        let cv: Vec<usize> = self.coords(v).iter().map(|&x| self.field.mul(c, x)).collect();
        self.index(&cv)
    }

    /// Standard basis vector `e_i`.
    pub fn basis_vector(&self, i: usize) -> usize {
        let mut c = vec![0; self.dim];
        c[i] = 1;
        self.index(&c)
    }

    /// F_q-span of `vectors`.
    pub fn span(&self, vectors: &[usize]) -> Subgroup {
        let size = self.size();
        let mut members = vec![0usize];
        let mut bits = FixedBitSet::with_capacity(size);
        bits.insert(0);
        for &v in vectors {
            if bits.contains(v) {
                continue;
            }
            let current = members.clone();
            for c in 1..self.field.order() {
                let cv = self.scale(c, v);
                for &s in &current {
                    let w = self.add(s, cv);
                    if !bits.contains(w) {
                        bits.insert(w);
                        members.push(w);
                    }
                }
            }
        }
        Subgroup::from_bits(bits)
    }
}
