//! The finite set `(Trop⁺(ker C) − h) ∩ rowspan(A)`.
//!
//! Points are parametrized as `w = Aᵀv`; a point belongs to the set iff
//! `w + h` passes the positive Bergman membership test. Two complete
//! enumeration routes are provided:
//!
//! * [`intersect_via_fan`] walks the positive fine cones. Inside the cone of
//!   a flag with blocks `B₁,…,B_k`, the vector `Aᵀv + h` must be constant on
//!   every block, which is a linear system in `v`.
//! * [`intersect_via_vertices`] enumerates every vertex of the arrangement of
//!   tie hyperplanes `(Aᵀv + h)_j = (Aᵀv + h)_k` in exact integer arithmetic
//!   and keeps those passing the membership test.
//!
//! Isolation of a point is decided from the local star of the positive fan:
//! for every positive maximal cone through `W = w + h`, the directions `d`
//! with `W + εAᵀd` staying in that cone form a polyhedral cone, and the
//! point is isolated iff all of these are `{0}`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::arith::{common_denominator, fmt_vector, IntMatrix, Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};
use crate::fan::{is_positive_member, positive_fan, FlagCone, PositiveFan};
use crate::matroid::{argmin_within, ElementSet, FlagOfFlats, Flat, OrientedMatroid};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub n: usize,
    pub rank_a: usize,
    pub rank_c: usize,
    /// `𝟙 ∈ rowspan(A)`: solutions come in lines and the count is infinite.
    pub ones_in_rowspan: bool,
    pub messages: Vec<String>,
}

impl Diagnostics {
    pub fn lineality_ok(&self) -> bool {
        !self.ones_in_rowspan
    }
}

/// Checks the shape and rank hypotheses. Only a rank-deficient exponent
/// matrix (or a shape mismatch) is fatal; everything else is reported.
pub fn validate_inputs(c: &RationalMatrix, a: &IntMatrix, h: &[Rational]) -> Result<Diagnostics> {
    if c.cols() != a.cols() || a.cols() != h.len() {
        return Err(Error::Dimension(format!(
            "coefficient matrix has {} columns, exponent matrix {}, shift vector {} entries",
            c.cols(),
            a.cols(),
            h.len()
        )));
    }
    if c.rows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let n = a.rows();
    let a_rat = a.to_rational();
    let rank_a = a_rat.rank();
    if rank_a < n {
        return Err(Error::ExponentRankDeficient { rank: rank_a, rows: n });
    }
    let rank_c = c.rank();
    let ones = vec![Rational::one(); a.cols()];
    let ones_in_rowspan = a_rat.row_space_contains(&ones);
    let mut messages = Vec::new();
    if rank_c != n {
        messages.push(format!(
            "rank of the coefficient matrix is {rank_c} but the exponent matrix has {n} rows; the intersection is not expected to be finite"
        ));
    }
    if ones_in_rowspan {
        messages.push("the all-ones vector lies in the row span of the exponent matrix; intersection points are not isolated".into());
    }
    Ok(Diagnostics { n, rank_a, rank_c, ones_in_rowspan, messages })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionPoint {
    pub v: RationalVector,
    /// `Aᵀv`.
    pub w: RationalVector,
    /// Chain of proper upper level sets of `w + h`; its relative interior
    /// contains `w + h`.
    pub supporting_flag: FlagOfFlats,
    pub isolated: bool,
    /// `w + h` lies in the relative interior of a maximal cell, where cells
    /// collect vectors with the same argmin set on every circuit.
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionReport {
    /// Solutions that are vertices of the arrangement of all pairwise ties
    /// `(Aᵀv + h)_j = (Aᵀv + h)_k`. When the solution set is finite these
    /// are all of its points.
    pub points: Vec<IntersectionPoint>,
    pub count: usize,
    /// Every point is isolated and interior, and the lineality check passed.
    pub transverse: bool,
    pub lineality_ok: bool,
    /// The matroid has no circuits, so the intersection is all of rowspan(A).
    pub free_matroid: bool,
    /// Positive maximal cones whose block system had a positive-dimensional
    /// solution set.
    pub underdetermined_cones: usize,
    pub notes: Vec<String>,
}

impl IntersectionReport {
    pub fn v_set(&self) -> BTreeSet<RationalVector> {
        self.points.iter().map(|p| p.v.clone()).collect()
    }
}

/// Shared data for one `(OM, A, h)` instance.
struct Instance<'a> {
    om: &'a OrientedMatroid,
    a: &'a IntMatrix,
    h: &'a [Rational],
    fan: PositiveFan,
}

enum BlockSolution {
    Inconsistent,
    Unique(RationalVector),
    Family,
}

impl<'a> Instance<'a> {
    fn new(om: &'a OrientedMatroid, a: &'a IntMatrix, h: &'a [Rational]) -> Result<Self> {
        if a.cols() != om.ground_size() || h.len() != om.ground_size() {
            return Err(Error::Dimension(format!(
                "ground set {} vs exponent columns {} vs shift length {}",
                om.ground_size(),
                a.cols(),
                h.len()
            )));
        }
        Ok(Self { om, a, h, fan: positive_fan(om) })
    }

    fn r(&self) -> usize {
        self.om.ground_size()
    }

    fn n(&self) -> usize {
        self.a.rows()
    }

    fn shifted(&self, w: &[Rational]) -> RationalVector {
        w.iter().zip(self.h).map(|(x, y)| x + y).collect()
    }

    /// `Aᵀv + h` constant on each block.
    fn solve_blocks(&self, blocks: &[ElementSet]) -> BlockSolution {
        let n = self.n();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for block in blocks {
            let mut items = block.iter();
            let Some(first) = items.next() else { continue };
            for other in items {
                rows.push((0..n).map(|i| Rational::from_integer(BigInt::from(self.a.get(i, first) - self.a.get(i, other)))).collect());
                rhs.push(&self.h[other] - &self.h[first]);
            }
        }
        let m = RationalMatrix::from_rows(rows, n).expect("rows have n entries");
        match m.solve_affine(&rhs).expect("rhs length matches") {
            None => BlockSolution::Inconsistent,
            Some((v, kernel)) if kernel.rows() == 0 => BlockSolution::Unique(v),
            Some(_) => BlockSolution::Family,
        }
    }

    fn point(&self, v: RationalVector, positive_cones: &[&FlagCone]) -> IntersectionPoint {
        let w = self.a.transpose_mul(&v);
        let shifted = self.shifted(&w);
        let supporting_flag = level_flag(&shifted, self.om);
        let interior = cell_dimension(&shifted, self.om) == self.om.rank();
        let isolated = isolated_at(&shifted, self.a, positive_cones);
        IntersectionPoint { v, w, supporting_flag, isolated, interior }
    }

    fn report(
        &self,
        vs: BTreeSet<RationalVector>,
        underdetermined: usize,
        lineality_ok: bool,
        mut notes: Vec<String>,
    ) -> IntersectionReport {
        let cones: Vec<&FlagCone> = self.fan.cones.iter().collect();
        let points: Vec<IntersectionPoint> = vs
            .into_iter()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|v| {
                let shifted = self.shifted(&self.a.transpose_mul(&v));
                let through: Vec<&FlagCone> = cones.iter().copied().filter(|c| c.contains(&shifted)).collect();
                self.point(v, &through)
            })
            .collect();
        let transverse = lineality_ok && points.iter().all(|p| p.isolated && p.interior);
        if underdetermined > 0 {
            notes.push(format!("{underdetermined} positive cone(s) have a positive-dimensional block system"));
        }
        IntersectionReport {
            count: points.len(),
            points,
            transverse,
            lineality_ok,
            free_matroid: false,
            underdetermined_cones: underdetermined,
            notes,
        }
    }

    fn free_report(&self) -> IntersectionReport {
        IntersectionReport {
            points: Vec::new(),
            count: 0,
            transverse: false,
            lineality_ok: !ones_in_rowspan(self.a),
            free_matroid: true,
            underdetermined_cones: 0,
            notes: vec!["free matroid: the positive Bergman fan is the whole space, so the intersection is all of rowspan(A)".into()],
        }
    }
}

fn ones_in_rowspan(a: &IntMatrix) -> bool {
    a.to_rational().row_space_contains(&vec![Rational::one(); a.cols()])
}

/// Chain of the proper nonempty upper level sets `{j : W_j ≥ c}`.
pub fn level_flag(shifted: &[Rational], om: &OrientedMatroid) -> FlagOfFlats {
    let mut values: Vec<&Rational> = shifted.iter().collect();
    values.sort();
    values.dedup();
    let mut chain = Vec::new();
    // descending thresholds, skipping the smallest (whose level set is E)
    for threshold in values.iter().skip(1).rev() {
        let elements = ElementSet::from_indices((0..shifted.len()).filter(|&j| &shifted[j] >= threshold));
        chain.push(Flat { rank: om.rank_of(elements), elements });
    }
    FlagOfFlats { chain }
}

/// Dimension of the cell of `shifted`: the number of classes of the
/// equivalence generated by ties inside every circuit's argmin set.
pub fn cell_dimension(shifted: &[Rational], om: &OrientedMatroid) -> usize {
    let r = shifted.len();
    let mut parent: Vec<usize> = (0..r).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        parent[x] = root;
        root
    }
    for &support in om.supports() {
        let argmin = argmin_within(shifted, support);
        let mut items = argmin.iter();
        if let Some(first) = items.next() {
            for other in items {
                let (x, y) = (find(&mut parent, first), find(&mut parent, other));
                parent[x] = y;
            }
        }
    }
    (0..r).filter(|&j| find(&mut parent, j) == j).count()
}

/// Fan-walk enumeration.
pub fn intersect_via_fan(om: &OrientedMatroid, a: &IntMatrix, h: &[Rational]) -> Result<IntersectionReport> {
    let inst = Instance::new(om, a, h)?;
    if om.is_free() {
        return Ok(inst.free_report());
    }
    let r = inst.r();
    let found: Vec<(Vec<RationalVector>, bool)> = inst
        .fan
        .cones
        .par_iter()
        .map(|cone| {
            let blocks = cone.flag.blocks(r);
            match inst.solve_blocks(&blocks) {
                BlockSolution::Inconsistent => (Vec::new(), false),
                BlockSolution::Unique(v) => {
                    let shifted = inst.shifted(&a.transpose_mul(&v));
                    if cone.contains(&shifted) && is_positive_member(&shifted, om) {
                        (vec![v], false)
                    } else {
                        (Vec::new(), false)
                    }
                }
                BlockSolution::Family => (face_points(&inst, cone), true),
            }
        })
        .collect();
    let mut vs = BTreeSet::new();
    let mut underdetermined = 0;
    for (points, under) in found {
        underdetermined += under as usize;
        vs.extend(points);
    }
    let lineality_ok = !ones_in_rowspan(a);
    Ok(inst.report(vs, underdetermined, lineality_ok, Vec::new()))
}

/// Points in the relative interiors of proper faces of a cone whose own
/// block system is underdetermined.
fn face_points(inst: &Instance<'_>, cone: &FlagCone) -> Vec<RationalVector> {
    let k = cone.flag.len();
    let mut out = Vec::new();
    for keep in 0u64..(1 << k) {
        if keep == (1 << k) - 1 {
            continue;
        }
        let chain: Vec<Flat> = (0..k).filter(|i| keep >> i & 1 == 1).map(|i| cone.flag.chain[i]).collect();
        let face = FlagCone::new(FlagOfFlats { chain }, inst.r());
        if let BlockSolution::Unique(v) = inst.solve_blocks(&face.flag.blocks(inst.r())) {
            let shifted = inst.shifted(&inst.a.transpose_mul(&v));
            if face.contains_in_relative_interior(&shifted) && is_positive_member(&shifted, inst.om) {
                out.push(v);
            }
        }
    }
    out
}

/// Whether some direction keeps `W + εAᵀd` inside one of `cones` (all of
/// which must contain `W`).
fn isolated_at(shifted: &[Rational], a: &IntMatrix, cones: &[&FlagCone]) -> bool {
    cones.iter().all(|cone| direction_cone_is_trivial(shifted, a, cone))
}

fn direction_cone_is_trivial(shifted: &[Rational], a: &IntMatrix, cone: &FlagCone) -> bool {
    let n = a.rows();
    if cone.is_whole_space() {
        return n == 0;
    }
    let blocks: Vec<ElementSet> = cone.flag.blocks(cone.ground_size()).into_iter().filter(|b| !b.is_empty()).collect();
    let diff = |j: usize, k: usize| -> RationalVector {
        (0..n).map(|i| Rational::from_integer(BigInt::from(a.get(i, j) - a.get(i, k)))).collect()
    };
    let mut equalities = Vec::new();
    for block in &blocks {
        let mut items = block.iter();
        let first = items.next().expect("nonempty block");
        for other in items {
            equalities.push(diff(first, other));
        }
    }
    let eq = RationalMatrix::from_rows(equalities, n).expect("n columns");
    let z = eq.kernel_basis().transpose(); // n × k, d = Z y
    let k = z.cols();
    if k == 0 {
        return true;
    }
    let mut active = Vec::new();
    for pair in blocks.windows(2) {
        let (hi, lo) = (pair[0].iter().next().unwrap(), pair[1].iter().next().unwrap());
        if shifted[hi] == shifted[lo] {
            // moving must keep the outer block no larger than the inner one
            let g = RationalMatrix::from_rows(vec![diff(hi, lo)], n).unwrap().mul(&z).unwrap();
            active.push(g.row(0).to_vec());
        }
    }
    !polyhedral_cone_nontrivial(&active, k)
}

/// Whether `{y ∈ ℚ^k : g·y ≥ 0 for every row g}` contains a nonzero vector.
fn polyhedral_cone_nontrivial(rows: &[RationalVector], k: usize) -> bool {
    let g = RationalMatrix::from_rows(rows.to_vec(), k).expect("k columns");
    if g.rank() < k {
        return true;
    }
    let satisfies = |y: &[Rational]| rows.iter().all(|row| !crate::arith::dot(row, y).is_negative());
    let mut nontrivial = false;
    crate::matroid::for_each_combination(rows.len(), k - 1, |subset| {
        if nontrivial {
            return;
        }
        let sub = g.select_rows(subset);
        if sub.rank() != k - 1 {
            return;
        }
        let ray = sub.kernel_basis();
        let y = ray.row(0).to_vec();
        let neg: RationalVector = y.iter().map(|x| -x).collect();
        if satisfies(&y) || satisfies(&neg) {
            nontrivial = true;
        }
    });
    nontrivial
}

/// Standalone isolation test for a reported point.
pub fn is_isolated(p: &IntersectionPoint, om: &OrientedMatroid, a: &IntMatrix, h: &[Rational]) -> bool {
    let shifted: RationalVector = p.w.iter().zip(h).map(|(x, y)| x + y).collect();
    let fan = positive_fan(om);
    let through: Vec<&FlagCone> = fan.cones.iter().filter(|c| c.contains(&shifted)).collect();
    isolated_at(&shifted, a, &through)
}

/// Vertex enumeration over tie hyperplanes.
///
/// Positivity of `Aᵀv + h` only depends on comparisons between oppositely
/// signed elements of a common circuit, so the solution set is a union of
/// faces of the arrangement of those ties, and every isolated solution is a
/// vertex of it. When some solution is not isolated (or that arrangement
/// has no vertices), the set is infinite and the enumeration is repeated
/// over all pairwise ties, matching what [`intersect_via_fan`] reports.
pub fn intersect_via_vertices(om: &OrientedMatroid, a: &IntMatrix, h: &[Rational]) -> Result<IntersectionReport> {
    let inst = Instance::new(om, a, h)?;
    if om.is_free() {
        return Ok(inst.free_report());
    }
    let circuits: Vec<(u64, u64)> = om.circuits().iter().map(|c| (c.positive.bits(), c.negative.bits())).collect();
    let mut pairs = BTreeSet::new();
    for c in om.circuits() {
        for j in c.positive.iter() {
            for k in c.negative.iter() {
                pairs.insert((j.min(k), j.max(k)));
            }
        }
    }
    let r = om.ground_size();
    let all: BTreeSet<(usize, usize)> = (0..r).flat_map(|j| ((j + 1)..r).map(move |k| (j, k))).collect();
    let lineality_ok = !ones_in_rowspan(a);
    let mut notes = Vec::new();
    let (mut vs, essential) = positive_vertices(a, h, &pairs, &circuits)?;
    let mut report = inst.report(vs, 0, lineality_ok, Vec::new());
    if !essential || !report.points.iter().all(|p| p.isolated) {
        notes.push("solution set is not finite; reporting the vertices of the full tie arrangement it contains".into());
        (vs, _) = positive_vertices(a, h, &all, &circuits)?;
        report = inst.report(vs, 0, lineality_ok, Vec::new());
    }
    report.notes = notes;
    Ok(report)
}

/// Positive vertices of the arrangement of ties over `pairs`, and whether
/// that arrangement has any vertex at all.
fn positive_vertices(
    a: &IntMatrix,
    h: &[Rational],
    pairs: &BTreeSet<(usize, usize)>,
    circuits: &[(u64, u64)],
) -> Result<(BTreeSet<RationalVector>, bool)> {
    let arrangement = TieArrangement::new(a, h, pairs)?;
    let bases = arrangement.independent_class_subsets();
    let found: Result<Vec<Vec<RationalVector>>> = bases.par_iter().map(|basis| arrangement.positive_vertices(basis, circuits)).collect();
    Ok((found?.into_iter().flatten().collect(), !bases.is_empty()))
}

/// Tie hyperplanes for a set of pairs, grouped into parallel classes and
/// scaled to integers.
///
/// With `h` scaled by `denominator` to integers `H`, hyperplane
/// `(α_j − α_k)·v' = H_k − H_j` is stored as `p·v' = b/scale` with `p`
/// primitive and `b` an integer, where `scale` is shared by all hyperplanes.
struct TieArrangement {
    n: usize,
    columns: Vec<Vec<i128>>,
    shifts: Vec<i128>,
    denominator: i128,
    scale: i128,
    classes: Vec<(Vec<i128>, Vec<i128>)>,
}

impl TieArrangement {
    fn new(a: &IntMatrix, h: &[Rational], pairs: &BTreeSet<(usize, usize)>) -> Result<Self> {
        let n = a.rows();
        let r = a.cols();
        let d_big = common_denominator(h);
        let denominator = d_big.to_i128().ok_or(Error::Overflow("shift denominators"))?;
        let shifts: Vec<i128> =
            h.iter().map(|q| (q.numer() * (&d_big / q.denom())).to_i128().ok_or(Error::Overflow("scaled shift"))).collect::<Result<_>>()?;
        let columns: Vec<Vec<i128>> = (0..r).map(|j| a.column(j).into_iter().map(i128::from).collect()).collect();

        // primitive normal -> set of reduced right-hand sides (num, den)
        let mut raw: BTreeMap<Vec<i128>, BTreeSet<(i128, i128)>> = BTreeMap::new();
        {
            for &(j, k) in pairs {
                let mut normal: Vec<i128> = (0..n).map(|i| columns[j][i] - columns[k][i]).collect();
                let mut rhs = shifts[k] - shifts[j];
                let Some(lead) = normal.iter().find(|x| **x != 0).copied() else {
                    continue;
                };
                if lead < 0 {
                    normal.iter_mut().for_each(|x| *x = -*x);
                    rhs = -rhs;
                }
                let g = normal.iter().fold(0i128, |acc, x| acc.gcd(x));
                normal.iter_mut().for_each(|x| *x /= g);
                let common = rhs.gcd(&g).max(1);
                raw.entry(normal).or_default().insert((rhs / common, g / common));
            }
        }
        let mut scale: i128 = 1;
        for rhs in raw.values() {
            for &(_, den) in rhs {
                scale = scale.lcm(&den);
            }
        }
        let classes = raw
            .into_iter()
            .map(|(p, rhs)| {
                let bs = rhs.into_iter().map(|(num, den)| num * (scale / den)).collect();
                (p, bs)
            })
            .collect();
        Ok(Self { n, columns, shifts, denominator, scale, classes })
    }

    /// All `n`-subsets of classes whose primitive normals are independent.
    fn independent_class_subsets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.extend_independent(0, &mut chosen, &mut Vec::new(), &mut out);
        out
    }

    fn extend_independent(&self, start: usize, chosen: &mut Vec<usize>, echelon: &mut Vec<Vec<i128>>, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == self.n {
            out.push(chosen.clone());
            return;
        }
        let needed = self.n - chosen.len();
        for c in start..self.classes.len() {
            if self.classes.len() - c < needed {
                break;
            }
            let Some(reduced) = reduce_against(echelon, self.classes[c].0.clone()) else { continue };
            echelon.push(reduced);
            chosen.push(c);
            self.extend_independent(c + 1, chosen, echelon, out);
            chosen.pop();
            echelon.pop();
        }
    }

    /// Positive vertices for one basis of classes, over every choice of one
    /// hyperplane per class.
    fn positive_vertices(&self, basis: &[usize], circuits: &[(u64, u64)]) -> Result<Vec<RationalVector>> {
        let n = self.n;
        let p: Vec<Vec<i128>> = basis.iter().map(|&c| self.classes[c].0.clone()).collect();
        let (mut det, mut adj) = scaled_inverse(&p)?;
        if det < 0 {
            det = -det;
            adj.iter_mut().flatten().for_each(|x| *x = -*x);
        }
        // v' = adj·b / (det·scale) solves the scaled problem, v = v' / denominator
        let s = det.checked_mul(self.scale).ok_or(Error::Overflow("vertex scale"))?;
        let shifted_offsets: Vec<i128> =
            self.shifts.iter().map(|&x| x.checked_mul(s).ok_or(Error::Overflow("shift offset"))).collect::<Result<_>>()?;
        let choices: Vec<&[i128]> = basis.iter().map(|&c| self.classes[c].1.as_slice()).collect();
        let mut out = Vec::new();
        let mut index = vec![0usize; n];
        let r = self.columns.len();
        let mut scaled_w = vec![0i128; r];
        loop {
            let mut vertex = vec![0i128; n];
            for (i, row) in adj.iter().enumerate() {
                let mut acc: i128 = 0;
                for (k, &x) in row.iter().enumerate() {
                    let term = x.checked_mul(choices[k][index[k]]).ok_or(Error::Overflow("vertex"))?;
                    acc = acc.checked_add(term).ok_or(Error::Overflow("vertex"))?;
                }
                vertex[i] = acc;
            }
            for (j, col) in self.columns.iter().enumerate() {
                let mut acc = shifted_offsets[j];
                for (x, y) in col.iter().zip(&vertex) {
                    acc = x.checked_mul(*y).and_then(|t| acc.checked_add(t)).ok_or(Error::Overflow("tropical point"))?;
                }
                scaled_w[j] = acc;
            }
            if positive_member_int(&scaled_w, circuits) {
                let total = BigInt::from(s) * BigInt::from(self.denominator);
                out.push(vertex.iter().map(|&x| Rational::new(BigInt::from(x), total.clone())).collect());
            }
            // odometer over the rhs choices
            let mut pos = 0;
            loop {
                if pos == n {
                    return Ok(out);
                }
                index[pos] += 1;
                if index[pos] < choices[pos].len() {
                    break;
                }
                index[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Reduces `row` against primitive echelon rows; `None` when it becomes
/// zero. Rows are kept primitive, so entries stay small.
fn reduce_against(echelon: &[Vec<i128>], mut row: Vec<i128>) -> Option<Vec<i128>> {
    for basis_row in echelon {
        let lead = basis_row.iter().position(|&x| x != 0).expect("echelon rows are nonzero");
        if row[lead] == 0 {
            continue;
        }
        let (p, q) = (basis_row[lead], row[lead]);
        for (x, &y) in row.iter_mut().zip(basis_row) {
            *x = p * *x - q * y;
        }
        let g = row.iter().fold(0i128, |acc, x| acc.gcd(x));
        if g > 1 {
            row.iter_mut().for_each(|x| *x /= g);
        }
    }
    row.iter().any(|&x| x != 0).then_some(row)
}

fn positive_member_int(w: &[i128], circuits: &[(u64, u64)]) -> bool {
    circuits.iter().all(|&(pos, neg)| {
        let support = pos | neg;
        let mut best = i128::MAX;
        let mut argmin = 0u64;
        let mut bits = support;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            match w[j].cmp(&best) {
                std::cmp::Ordering::Less => {
                    best = w[j];
                    argmin = 1 << j;
                }
                std::cmp::Ordering::Equal => argmin |= 1 << j,
                std::cmp::Ordering::Greater => {}
            }
        }
        argmin & pos != 0 && argmin & neg != 0
    })
}

/// Fraction-free Gauss–Jordan: returns `(d, M)` with `M = d·P⁻¹`.
fn scaled_inverse(p: &[Vec<i128>]) -> Result<(i128, Vec<Vec<i128>>)> {
    let n = p.len();
    let mut m: Vec<Vec<i128>> = p
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut full = row.clone();
            full.extend((0..n).map(|j| i128::from(i == j)));
            full
        })
        .collect();
    let mut prev: i128 = 1;
    for k in 0..n {
        let pivot_row = (k..n).find(|&i| m[i][k] != 0).ok_or(Error::Dimension("singular basis".into()))?;
        m.swap(k, pivot_row);
        let pivot = m[k][k];
        let pivot_row = m[k].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k];
            for (j, entry) in row.iter_mut().enumerate() {
                if j == k {
                    continue;
                }
                let v = pivot
                    .checked_mul(*entry)
                    .and_then(|a| factor.checked_mul(pivot_row[j]).and_then(|b| a.checked_sub(b)))
                    .ok_or(Error::Overflow("fraction-free inverse"))?;
                debug_assert_eq!(v % prev, 0);
                *entry = v / prev;
            }
            row[k] = 0;
        }
        prev = pivot;
    }
    // left block is prev·I up to row order restored by the swaps above
    let inverse = m.iter().map(|row| row[n..].to_vec()).collect();
    Ok((prev, inverse))
}

/// Fan enumeration, optionally cross-checked against vertex enumeration.
pub fn lower_bound(c: &RationalMatrix, a: &IntMatrix, h: &[Rational], cross_check: bool) -> Result<IntersectionReport> {
    let diagnostics = validate_inputs(c, a, h)?;
    let om = OrientedMatroid::realize_from_kernel(c)?;
    let mut report = intersect_via_fan(&om, a, h)?;
    if cross_check {
        let oracle = intersect_via_vertices(&om, a, h)?;
        if oracle.v_set() != report.v_set() {
            let show = |s: BTreeSet<RationalVector>| s.iter().map(|v| fmt_vector(v)).collect::<Vec<_>>().join(" ");
            return Err(Error::OracleMismatch(format!(
                "fan enumeration found [{}], vertex enumeration found [{}]",
                show(report.v_set()),
                show(oracle.v_set())
            )));
        }
        report.notes.push("cross-checked against vertex enumeration".into());
    }
    report.notes.extend(diagnostics.messages);
    if !report.transverse {
        report.notes.push("count computed, transversality not certified".into());
    }
    Ok(report)
}

/// Shifts `h` by `Aᵀu`; used to state covariance.
pub fn shift_by_rowspan(a: &IntMatrix, h: &[Rational], u: &[Rational]) -> RationalVector {
    a.transpose_mul(u).iter().zip(h).map(|(x, y)| x + y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat, rat_vec};

    fn running() -> (RationalMatrix, IntMatrix) {
        (
            RationalMatrix::from_i64(&[&[-3, 1, -1, -2, 2], &[-1, 1, -1, -1, 1]]),
            IntMatrix::from_slices(&[&[0, 2, 0, 2, 1], &[0, 0, 2, 2, 1]]),
        )
    }

    #[test]
    fn scaled_inverse_matches_rational_inverse() {
        let p = vec![vec![2i128, 1, 0], vec![1, 3, 1], vec![0, 1, 4]];
        let (d, m) = scaled_inverse(&p).unwrap();
        let pr = RationalMatrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(rat(d as i64).abs(), pr.det().unwrap().abs());
        let mr = RationalMatrix::from_i64(
            &m.iter()
                .map(|r| r.iter().map(|&x| x as i64).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .iter()
                .map(|r| r.as_slice())
                .collect::<Vec<_>>(),
        );
        let prod = pr.mul(&mr).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod.get(i, j), &rat(if i == j { d as i64 } else { 0 }));
            }
        }
        // with a row swap
        let p = vec![vec![0i128, 1], vec![1, 0]];
        let (d, m) = scaled_inverse(&p).unwrap();
        assert_eq!((d, m), (1, vec![vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn running_example_points() {
        let (n, a) = running();
        let h = rat_vec(&[0, 0, 0, 0, -1]);
        let report = lower_bound(&n, &a, &h, true).unwrap();
        assert_eq!(report.count, 2);
        assert!(report.transverse);
        let ws: BTreeSet<RationalVector> = report.points.iter().map(|p| p.w.clone()).collect();
        assert!(ws.contains(&rat_vec(&[0, 2, 0, 2, 1])));
        assert!(ws.contains(&rat_vec(&[0, -1, -1, -2, -1])));
        let vs = report.v_set();
        assert!(vs.contains(&rat_vec(&[1, 0])));
        assert!(vs.contains(&vec![frac(-1, 2), frac(-1, 2)]));
        for p in &report.points {
            assert!(p.isolated && p.interior);
        }
    }

    #[test]
    fn all_positive_row_gives_nothing() {
        let c = RationalMatrix::from_i64(&[&[1, 1]]);
        let a = IntMatrix::from_slices(&[&[0, 1]]);
        let report = lower_bound(&c, &a, &rat_vec(&[0, 3]), true).unwrap();
        assert_eq!(report.count, 0);
    }

    #[test]
    fn duplicated_exponent_row_is_fatal() {
        let c = RationalMatrix::from_i64(&[&[1, -1, 0], &[0, 1, -1]]);
        let a = IntMatrix::from_slices(&[&[0, 1, 2], &[0, 1, 2]]);
        assert!(matches!(validate_inputs(&c, &a, &rat_vec(&[0, 0, 0])), Err(Error::ExponentRankDeficient { rank: 1, rows: 2 })));
    }

    #[test]
    fn free_matroid_is_not_transverse() {
        let c = RationalMatrix::zeros(1, 3);
        let om = OrientedMatroid::realize_from_kernel(&c).unwrap();
        let a = IntMatrix::from_slices(&[&[0, 1, 2]]);
        let h = rat_vec(&[0, 0, 0]);
        for report in [intersect_via_fan(&om, &a, &h).unwrap(), intersect_via_vertices(&om, &a, &h).unwrap()] {
            assert!(report.free_matroid);
            assert!(!report.transverse);
            assert!(report.lineality_ok);
        }
    }

    #[test]
    fn line_of_solutions_is_not_isolated() {
        // x1 - x2 = 0 in one variable with exponents (0, 1, 1): the tie between
        // the two equal columns holds identically along a line of v.
        let c = RationalMatrix::from_i64(&[&[0, 1, -1]]);
        let a = IntMatrix::from_slices(&[&[0, 1, 1]]);
        let h = rat_vec(&[0, 0, 0]);
        let om = OrientedMatroid::realize_from_kernel(&c).unwrap();
        let report = intersect_via_fan(&om, &a, &h).unwrap();
        assert!(report.underdetermined_cones > 0);
        assert!(!report.points.is_empty());
        assert!(!report.transverse);
        for p in &report.points {
            assert!(!is_isolated(p, &om, &a, &h));
        }
    }
}
