//! Oriented matroids realized by linear spaces: signed circuits, closure,
//! the lattice of flats and its maximal chains.
//!
//! Indices are 0-based in memory; every `Display` impl renders them 1-based.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::arith::{Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};

pub const MAX_GROUND_SIZE: usize = 64;

/// Subset of a ground set of at most 64 elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const fn empty() -> Self {
        Self(0)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Self(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(items: I) -> Self {
        Self(items.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        Self(self.0 | (1u64 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// 1-based element list for reports.
    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the sorted element lists.
impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedCircuit {
    pub positive: ElementSet,
    pub negative: ElementSet,
}

impl SignedCircuit {
    pub fn new(positive: ElementSet, negative: ElementSet) -> Result<Self> {
        if !positive.intersection(negative).is_empty() {
            return Err(Error::InvalidParameter(format!("circuit parts {positive} and {negative} overlap")));
        }
        if positive.union(negative).is_empty() {
            return Err(Error::InvalidParameter("empty circuit".into()));
        }
        Ok(Self { positive, negative })
    }

    /// Sign pattern of a vector; `None` for the zero vector.
    pub fn from_signs(v: &[Rational]) -> Option<Self> {
        let positive = ElementSet::from_indices(v.iter().enumerate().filter(|(_, x)| x.is_positive()).map(|(i, _)| i));
        let negative = ElementSet::from_indices(v.iter().enumerate().filter(|(_, x)| x.is_negative()).map(|(i, _)| i));
        if positive.union(negative).is_empty() {
            None
        } else {
            Some(Self { positive, negative })
        }
    }

    pub fn support(&self) -> ElementSet {
        self.positive.union(self.negative)
    }

    pub fn negated(&self) -> Self {
        Self { positive: self.negative, negative: self.positive }
    }
}

impl fmt::Display for SignedCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

impl fmt::Debug for SignedCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    pub rank: usize,
    pub elements: ElementSet,
}

impl fmt::Debug for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.elements)
    }
}

/// Chain of proper flats `F₁ ⊊ F₂ ⊊ … ⊊ F_k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FlagOfFlats {
    pub chain: Vec<Flat>,
}

impl FlagOfFlats {
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// The successive differences `F₁, F₂∖F₁, …, E∖F_k`.
    pub fn blocks(&self, ground_size: usize) -> Vec<ElementSet> {
        let mut blocks = Vec::with_capacity(self.chain.len() + 1);
        let mut below = ElementSet::empty();
        for flat in &self.chain {
            blocks.push(flat.elements.difference(below));
            below = flat.elements;
        }
        blocks.push(ElementSet::full(ground_size).difference(below));
        blocks
    }

    pub fn contains_flat(&self, elements: ElementSet) -> bool {
        self.chain.iter().any(|f| f.elements == elements)
    }
}

impl fmt::Display for FlagOfFlats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chain.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.chain.iter().map(|fl| fl.elements.to_string()).collect();
        write!(f, "{}", parts.join(" ⊂ "))
    }
}

impl fmt::Debug for FlagOfFlats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedMatroid {
    ground_size: usize,
    /// Closed under negation, sorted.
    circuits: Vec<SignedCircuit>,
    supports: Vec<ElementSet>,
    /// Rows span the realized linear space, when known.
    realization: Option<RationalMatrix>,
}

impl OrientedMatroid {
    /// Oriented matroid realized by `ker C`: its signed circuits are the sign
    /// vectors of minimal-support nonzero vectors in the row space of `C`.
    pub fn realize_from_kernel(c: &RationalMatrix) -> Result<Self> {
        let r = c.cols();
        check_ground_size(r)?;
        if c.rows() == 0 {
            return Err(Error::EmptyMatrix);
        }
        let (reduced, pivots) = c.rref();
        let basis = reduced.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        let k = pivots.len();
        let mut patterns = BTreeSet::new();
        if k > 0 {
            for_each_combination(r, k - 1, |cols| {
                let sub = basis.select_columns(cols);
                if sub.rank() != k - 1 {
                    return;
                }
                let u = sub.transpose().kernel_basis();
                debug_assert_eq!(u.rows(), 1);
                let y: RationalVector = (0..r).map(|j| crate::arith::dot(u.row(0), &basis.column(j))).collect();
                if let Some(sc) = SignedCircuit::from_signs(&y) {
                    patterns.insert(sc);
                    patterns.insert(sc.negated());
                }
            });
        }
        Ok(Self::assemble(r, patterns, Some(c.kernel_basis())))
    }

    /// Builds a matroid directly from signed circuits without checking the
    /// oriented-matroid axioms. Negations are added where missing.
    pub fn from_circuits(ground_size: usize, circuits: &[SignedCircuit]) -> Result<Self> {
        check_ground_size(ground_size)?;
        let full = ElementSet::full(ground_size);
        let mut set = BTreeSet::new();
        for c in circuits {
            if !c.support().is_subset(full) {
                return Err(Error::InvalidParameter(format!("circuit {c} leaves the ground set of size {ground_size}")));
            }
            SignedCircuit::new(c.positive, c.negative)?;
            set.insert(*c);
            set.insert(c.negated());
        }
        Ok(Self::assemble(ground_size, set, None))
    }

    fn assemble(ground_size: usize, circuits: BTreeSet<SignedCircuit>, realization: Option<RationalMatrix>) -> Self {
        let supports: BTreeSet<ElementSet> = circuits.iter().map(SignedCircuit::support).collect();
        Self { ground_size, circuits: circuits.into_iter().collect(), supports: supports.into_iter().collect(), realization }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn circuits(&self) -> &[SignedCircuit] {
        &self.circuits
    }

    pub fn realization(&self) -> Option<&RationalMatrix> {
        self.realization.as_ref()
    }

    /// Distinct circuit supports, sorted.
    pub fn supports(&self) -> &[ElementSet] {
        &self.supports
    }

    /// One representative per negation pair (the one whose smallest element
    /// is positive).
    pub fn circuit_representatives(&self) -> Vec<SignedCircuit> {
        self.circuits.iter().filter(|c| c.support().iter().next().is_some_and(|i| c.positive.contains(i))).copied().collect()
    }

    pub fn is_free(&self) -> bool {
        self.circuits.is_empty()
    }

    pub fn loops(&self) -> ElementSet {
        self.circuits.iter().map(SignedCircuit::support).filter(|s| s.len() == 1).fold(ElementSet::empty(), ElementSet::union)
    }

    pub fn is_independent(&self, s: ElementSet) -> bool {
        !self.supports.iter().any(|c| c.is_subset(s))
    }

    pub fn rank(&self) -> usize {
        let mut basis = ElementSet::empty();
        for e in 0..self.ground_size {
            let candidate = basis.with(e);
            if self.is_independent(candidate) {
                basis = candidate;
            }
        }
        basis.len()
    }

    /// Rank of an arbitrary subset.
    pub fn rank_of(&self, s: ElementSet) -> usize {
        let mut basis = ElementSet::empty();
        for e in s.iter() {
            let candidate = basis.with(e);
            if self.is_independent(candidate) {
                basis = candidate;
            }
        }
        basis.len()
    }

    /// Smallest flat containing `s`.
    pub fn closure(&self, s: ElementSet) -> Flat {
        let supports = &self.supports;
        let mut current = s;
        loop {
            let mut next = current;
            for sup in supports {
                let outside = sup.difference(current);
                if outside.len() == 1 {
                    next = next.union(outside);
                }
            }
            if next == current {
                break;
            }
            current = next;
        }
        Flat { rank: self.rank_of(current), elements: current }
    }

    /// Every flat, sorted by rank and then lexicographically.
    pub fn all_flats(&self) -> Vec<Flat> {
        self.flat_lattice().flats
    }

    /// Maximal chains of proper flats strictly between `cl(∅)` and the
    /// ground set, in lexicographic order.
    pub fn maximal_flags(&self) -> Vec<FlagOfFlats> {
        let lattice = self.flat_lattice();
        let rank = self.rank();
        if rank == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let bottom = lattice.flats[0];
        let mut chain = Vec::with_capacity(rank - 1);
        extend_chains(&lattice, bottom, rank, &mut chain, &mut out);
        out
    }

    fn flat_lattice(&self) -> FlatLattice {
        let bottom = self.closure(ElementSet::empty());
        let mut levels: Vec<Vec<Flat>> = vec![vec![bottom]];
        let mut covers: HashMap<ElementSet, Vec<Flat>> = HashMap::new();
        let full = ElementSet::full(self.ground_size);
        loop {
            let last = levels.last().expect("at least the bottom level");
            let mut next: BTreeSet<Flat> = BTreeSet::new();
            for flat in last {
                let mut up: BTreeSet<Flat> = BTreeSet::new();
                for e in full.difference(flat.elements).iter() {
                    let cover = self.closure(flat.elements.with(e));
                    up.insert(cover);
                }
                covers.insert(flat.elements, up.iter().copied().collect());
                next.extend(up);
            }
            if next.is_empty() {
                break;
            }
            levels.push(next.into_iter().collect());
        }
        let flats = levels.into_iter().flatten().collect();
        FlatLattice { flats, covers }
    }
}

struct FlatLattice {
    flats: Vec<Flat>,
    covers: HashMap<ElementSet, Vec<Flat>>,
}

fn extend_chains(lattice: &FlatLattice, current: Flat, rank: usize, chain: &mut Vec<Flat>, out: &mut Vec<FlagOfFlats>) {
    if chain.len() + 1 == rank {
        out.push(FlagOfFlats { chain: chain.clone() });
        return;
    }
    for &next in &lattice.covers[&current.elements] {
        chain.push(next);
        extend_chains(lattice, next, rank, chain, out);
        chain.pop();
    }
}

fn check_ground_size(r: usize) -> Result<()> {
    if r > MAX_GROUND_SIZE {
        Err(Error::GroundSetTooLarge(r))
    } else {
        Ok(())
    }
}

/// Signed circuits of the column matroid of `g`: for each inclusion-minimal
/// dependent set of columns, the sign pattern of its (unique up to scale)
/// linear relation, in both orientations.
pub fn circuits_via_subsets(g: &RationalMatrix) -> Result<Vec<SignedCircuit>> {
    let r = g.cols();
    check_ground_size(r)?;
    let rank = g.rank();
    let mut found: Vec<ElementSet> = Vec::new();
    let mut out = BTreeSet::new();
    for size in 1..=(rank + 1).min(r) {
        let mut new_supports = Vec::new();
        for_each_combination(r, size, |cols| {
            let s = ElementSet::from_indices(cols.iter().copied());
            if found.iter().any(|c| c.is_subset(s)) {
                return;
            }
            let sub = g.select_columns(cols);
            if sub.rank() == size {
                return;
            }
            let relation = sub.kernel_basis();
            debug_assert_eq!(relation.rows(), 1, "minimal dependent sets have a 1-dimensional relation space");
            let mut full = vec![Rational::zero(); r];
            for (k, &j) in cols.iter().enumerate() {
                full[j] = relation.get(0, k).clone();
            }
            let sc = SignedCircuit::from_signs(&full).expect("relation is nonzero");
            out.insert(sc);
            out.insert(sc.negated());
            new_supports.push(s);
        });
        found.extend(new_supports);
    }
    Ok(out.into_iter().collect())
}

/// `in_w(C)`: the parts of `c` attaining the minimum of `w` over its support.
pub fn initial_circuit(w: &[Rational], c: &SignedCircuit) -> SignedCircuit {
    let argmin = argmin_within(w, c.support());
    SignedCircuit { positive: c.positive.intersection(argmin), negative: c.negative.intersection(argmin) }
}

pub(crate) fn argmin_within(w: &[Rational], s: ElementSet) -> ElementSet {
    let mut best: Option<&Rational> = None;
    let mut set = ElementSet::empty();
    for i in s.iter() {
        match best {
            Some(b) if &w[i] > b => {}
            Some(b) if &w[i] == b => set = set.with(i),
            _ => {
                best = Some(&w[i]);
                set = ElementSet::singleton(i);
            }
        }
    }
    set
}

/// Calls `f` with each `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    fn go<F: FnMut(&[usize])>(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut F) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let remaining = k - cur.len();
        for i in start..=(n - remaining) {
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    if k > n {
        return;
    }
    go(0, n, k, &mut Vec::with_capacity(k), &mut f);
}

/// Checks the circuit elimination axiom on supports: for distinct circuits
/// `C₁, C₂` and `e ∈ C₁ ∩ C₂`, some circuit lies in `(C₁ ∪ C₂) ∖ {e}`.
pub fn satisfies_circuit_elimination(m: &OrientedMatroid) -> bool {
    let supports = m.supports();
    let set: HashSet<ElementSet> = supports.iter().copied().collect();
    for (i, a) in supports.iter().enumerate() {
        for b in &supports[i + 1..] {
            for e in a.intersection(*b).iter() {
                let target = a.union(*b).difference(ElementSet::singleton(e));
                if !set.iter().any(|c| c.is_subset(target)) {
                    return false;
                }
            }
        }
    }
    true
}
