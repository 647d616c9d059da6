//! Vertically parametrized systems `C diag(t^h) x^A = 0`, reaction-network
//! assembly, and the combined bound.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::arith::{fmt_vector, IntMatrix, Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};
use crate::intersect::{lower_bound, IntersectionReport};
use crate::matroid::OrientedMatroid;
use crate::subdivision::{decorated_count, decorated_to_tropical, DecoratedSimplex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalSystem {
    pub c: RationalMatrix,
    pub a: IntMatrix,
    pub h: RationalVector,
}

impl VerticalSystem {
    pub fn new(c: RationalMatrix, a: IntMatrix, h: RationalVector) -> Result<Self> {
        if c.cols() != a.cols() || a.cols() != h.len() {
            return Err(Error::Dimension(format!(
                "coefficient matrix has {} columns, exponent matrix {}, shift vector {} entries",
                c.cols(),
                a.cols(),
                h.len()
            )));
        }
        Ok(Self { c, a, h })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// The first `rank(C)` linearly independent rows of `C`.
    pub fn rank_selected(&self) -> RationalMatrix {
        let rows = self.c.independent_rows();
        self.c.select_rows(&rows)
    }
}

/// Mass-action network data with conservation laws `W x = T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrnModel {
    pub stoichiometric: RationalMatrix,
    pub reactant: IntMatrix,
    pub conservation: RationalMatrix,
    pub totals: RationalVector,
    pub h: RationalVector,
}

/// Stacks `C = [[N, 0, 0], [0, W, −T]]`, `A = [B | Id | 0]`, `h = (h, 0, …, 0)`.
pub fn assemble_crn(model: &CrnModel) -> Result<VerticalSystem> {
    let n = &model.stoichiometric;
    let b = &model.reactant;
    let w = &model.conservation;
    let (ns, rs) = (n.rows(), n.cols());
    if b.rows() != ns || b.cols() != rs {
        return Err(Error::Dimension(format!("reactant matrix is {}x{}, expected {ns}x{rs}", b.rows(), b.cols())));
    }
    if model.h.len() != rs {
        return Err(Error::Dimension(format!("{} rate exponents for {rs} reactions", model.h.len())));
    }
    let nw = w.rows();
    if nw > 0 && w.cols() != ns {
        return Err(Error::Dimension(format!("conservation matrix has {} columns, expected {ns}", w.cols())));
    }
    if model.totals.len() != nw {
        return Err(Error::Dimension(format!("{} totals for {nw} conservation laws", model.totals.len())));
    }
    if nw > 0 && !w.mul(n)?.is_zero() {
        return Err(Error::ConservationMismatch);
    }
    let cols = rs + ns + 1;
    let mut c = RationalMatrix::zeros(ns + nw, cols);
    for i in 0..ns {
        for j in 0..rs {
            c.set(i, j, n.get(i, j).clone());
        }
    }
    for i in 0..nw {
        for j in 0..ns {
            c.set(ns + i, rs + j, w.get(i, j).clone());
        }
        c.set(ns + i, cols - 1, -model.totals[i].clone());
    }
    let mut a = vec![vec![0i64; cols]; ns];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().take(rs).enumerate() {
            *entry = b.get(i, j);
        }
        row[rs + i] = 1;
    }
    let a = IntMatrix::from_rows(&a, cols)?;
    let mut h = model.h.clone();
    h.extend(std::iter::repeat_n(Rational::zero(), ns + 1));
    VerticalSystem::new(c, a, h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedSummary {
    pub count: usize,
    pub simplices: Vec<DecoratedSimplex>,
    /// Images `Aᵀv` of the simplices, in the same order.
    pub images: Vec<RationalVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub tropical: IntersectionReport,
    pub decorated: Option<DecoratedSummary>,
    pub certified_bound: usize,
    pub method_notes: Vec<String>,
}

/// Tropical count, decorated count, and the comparison between them.
pub fn bound(system: &VerticalSystem, cross_check: bool) -> Result<BoundReport> {
    let tropical = lower_bound(&system.c, &system.a, &system.h, cross_check)?;
    let mut notes = Vec::new();
    let decorated = decorated_summary(system, &tropical, &mut notes)?;
    let certified_bound = if tropical.transverse {
        notes.push(format!("bound from the transverse tropical intersection: {}", tropical.count));
        tropical.count
    } else if let Some(d) = &decorated {
        notes.push(format!("intersection not certified transverse; bound from decorated simplices: {}", d.count));
        d.count
    } else {
        notes.push("no certified bound: intersection not transverse and decorated simplices unavailable".into());
        0
    };
    if tropical.count == 0 && !tropical.free_matroid {
        notes.push("the positive part of the intersection is empty".into());
    }
    Ok(BoundReport { tropical, decorated, certified_bound, method_notes: notes })
}

fn decorated_summary(system: &VerticalSystem, tropical: &IntersectionReport, notes: &mut Vec<String>) -> Result<Option<DecoratedSummary>> {
    if let Some((i, j)) = system.a.repeated_columns() {
        notes.push(format!("exponent matrix has repeated columns {} and {}; decorated simplices skipped", i + 1, j + 1));
        return Ok(None);
    }
    let reduced = system.rank_selected();
    if reduced.rows() != system.n() {
        notes.push(format!("coefficient matrix has rank {} but {} variables; decorated simplices skipped", reduced.rows(), system.n()));
        return Ok(None);
    }
    if reduced.rows() != system.c.rows() {
        notes.push(format!("decorated simplices computed on {} independent coefficient rows", reduced.rows()));
    }
    let (count, simplices) = decorated_count(&reduced, &system.a, &system.h)?;
    let om = OrientedMatroid::realize_from_kernel(&system.c)?;
    let reported: BTreeSet<&RationalVector> = tropical.points.iter().map(|p| &p.w).collect();
    let mut images = Vec::with_capacity(simplices.len());
    for d in &simplices {
        let w = decorated_to_tropical(d, &system.a, &system.h, &om)?;
        if !tropical.free_matroid && !reported.contains(&w) {
            return Err(Error::ComparisonViolated { cell: format!("{:?}", d.cell.one_based()), point: fmt_vector(&w) });
        }
        images.push(w);
    }
    let distinct: BTreeSet<&RationalVector> = images.iter().collect();
    if distinct.len() != images.len() {
        return Err(Error::ComparisonViolated { cell: "two decorated simplices".into(), point: "the same point".into() });
    }
    if tropical.transverse && count > tropical.count {
        return Err(Error::ComparisonViolated {
            cell: format!("{count} decorated simplices"),
            point: format!("{} intersection points", tropical.count),
        });
    }
    Ok(Some(DecoratedSummary { count, simplices, images }))
}

/// Two-component histidine kinase network: six species, six reactions,
/// two conservation laws.
pub fn hybrid_histidine_kinase(totals: [i64; 2], h: [i64; 6]) -> CrnModel {
    CrnModel {
        stoichiometric: RationalMatrix::from_i64(&[
            &[-1, 0, 0, 1, 0, 0],
            &[1, -1, 0, 0, 1, 0],
            &[0, 1, -1, -1, 0, 0],
            &[0, 0, 1, 0, -1, 0],
            &[0, 0, 0, -1, -1, 1],
            &[0, 0, 0, 1, 1, -1],
        ]),
        reactant: IntMatrix::from_slices(&[
            &[1, 0, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0, 0],
            &[0, 0, 1, 1, 0, 0],
            &[0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 1, 1, 0],
            &[0, 0, 0, 0, 0, 1],
        ]),
        conservation: RationalMatrix::from_i64(&[&[1, 1, 1, 1, 0, 0], &[0, 0, 0, 0, 1, 1]]),
        totals: totals.iter().map(|&x| Rational::from_integer(x.into())).collect(),
        h: h.iter().map(|&x| Rational::from_integer(x.into())).collect(),
    }
}
