//! Regular subdivision of the exponent columns lifted by `h`, and the
//! positively decorated simplices it contains.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{fmt_vector, IntMatrix, Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};
use crate::fan::is_positive_member;
use crate::matroid::{for_each_combination, OrientedMatroid};

/// Columns of `A` lifted to heights `h`.
#[derive(Clone, Debug)]
pub struct LiftedConfig<'a> {
    pub points: &'a IntMatrix,
    pub lifts: &'a [Rational],
}

impl<'a> LiftedConfig<'a> {
    pub fn new(points: &'a IntMatrix, lifts: &'a [Rational]) -> Result<Self> {
        if points.cols() != lifts.len() {
            return Err(Error::Dimension(format!("{} columns but {} lifts", points.cols(), lifts.len())));
        }
        if let Some((i, j)) = points.repeated_columns() {
            return Err(Error::DuplicateColumns(i + 1, j + 1));
        }
        Ok(Self { points, lifts })
    }

    fn dim(&self) -> usize {
        self.points.rows()
    }

    fn len(&self) -> usize {
        self.points.cols()
    }

    /// `(v,1)·(α_j, h_j)`.
    fn height(&self, v: &[Rational], j: usize) -> Rational {
        let mut acc = self.lifts[j].clone();
        for (i, x) in v.iter().enumerate() {
            acc += x * Rational::from_integer(BigInt::from(self.points.get(i, j)));
        }
        acc
    }

    /// Indices attaining the minimum of `(v,1)·(α_j,h_j)`.
    pub fn argmin(&self, v: &[Rational]) -> Vec<usize> {
        let heights: Vec<Rational> = (0..self.len()).map(|j| self.height(v, j)).collect();
        let min = heights.iter().min().expect("nonempty configuration");
        (0..self.len()).filter(|&j| &heights[j] == min).collect()
    }

    /// The normal `v` making the lifted points of `subset` a lower face, when
    /// they are affinely independent and the face is a global minimum.
    fn lower_face_normal(&self, subset: &[usize]) -> Option<RationalVector> {
        let n = self.dim();
        let rows: Vec<RationalVector> = subset
            .iter()
            .map(|&j| {
                let mut row: RationalVector = (0..n).map(|i| Rational::from_integer(BigInt::from(self.points.get(i, j)))).collect();
                row.push(-Rational::one());
                row
            })
            .collect();
        let rhs: RationalVector = subset.iter().map(|&j| -self.lifts[j].clone()).collect();
        let m = RationalMatrix::from_rows(rows, n + 1).expect("n+1 columns");
        let (mut solution, kernel) = m.solve_affine(&rhs).expect("rhs length")?;
        if kernel.rows() != 0 {
            return None;
        }
        let level = solution.pop().expect("n+1 unknowns");
        let v = solution;
        (0..self.len()).all(|j| self.height(&v, j) >= level).then_some(v)
    }
}

/// A full-dimensional cell with a normal `(v,1)` of its lower face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// Sorted 0-based column indices.
    pub members: Vec<usize>,
    pub witness: RationalVector,
}

impl Cell {
    pub fn one_based(&self) -> Vec<usize> {
        self.members.iter().map(|j| j + 1).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedSimplex {
    pub cell: Cell,
    /// Primitive integer kernel vector of `N_Δ` with positive entries.
    pub kernel_vector: RationalVector,
}

/// Full-dimensional cells, sorted by member set.
pub fn full_cells(a: &IntMatrix, h: &[Rational]) -> Result<Vec<Cell>> {
    let config = LiftedConfig::new(a, h)?;
    let n = config.dim();
    let r = config.len();
    if r < n + 1 {
        return Ok(Vec::new());
    }
    let mut subsets = Vec::new();
    for_each_combination(r, n + 1, |s| subsets.push(s.to_vec()));
    let found: Vec<Cell> =
        subsets.par_iter().filter_map(|s| config.lower_face_normal(s)).map(|v| Cell { members: config.argmin(&v), witness: v }).collect();
    let mut cells = BTreeMap::new();
    for cell in found {
        cells.entry(cell.members.clone()).or_insert(cell);
    }
    Ok(cells.into_values().collect())
}

pub fn witness_normal(cell: &Cell) -> &RationalVector {
    &cell.witness
}

pub fn is_triangulation(cells: &[Cell], n: usize) -> bool {
    cells.iter().all(|c| c.members.len() == n + 1)
}

/// Signed-cofactor kernel of an `n × (n+1)` matrix:
/// `λ_k = (−1)^k det(M without column k)`.
pub fn cofactor_kernel(m: &RationalMatrix) -> Result<RationalVector> {
    let cols = m.cols();
    if cols != m.rows() + 1 {
        return Err(Error::Dimension(format!("expected {} columns, found {}", m.rows() + 1, cols)));
    }
    (0..cols)
        .map(|k| {
            let rest: Vec<usize> = (0..cols).filter(|&j| j != k).collect();
            let det = m.select_columns(&rest).det()?;
            Ok(if k % 2 == 0 { det } else { -det })
        })
        .collect()
}

pub fn positively_decorated(coefficients: &RationalMatrix, cell: &Cell) -> Result<Option<DecoratedSimplex>> {
    let n = coefficients.rows();
    if cell.members.len() != n + 1 {
        return Ok(None);
    }
    let sub = coefficients.select_columns(&cell.members);
    if sub.rank() != n {
        return Ok(None);
    }
    let lambda = cofactor_kernel(&sub)?;
    let positive = lambda.iter().all(Signed::is_positive);
    let negative = lambda.iter().all(Signed::is_negative);
    if !positive && !negative {
        return Ok(None);
    }
    Ok(Some(DecoratedSimplex { cell: cell.clone(), kernel_vector: primitive(&lambda, negative) }))
}

/// Positive primitive integer multiple of a same-signed vector.
fn primitive(v: &[Rational], flip: bool) -> RationalVector {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter()
        .map(|x| {
            let q = Rational::new(x, gcd.clone());
            if flip {
                -q
            } else {
                q
            }
        })
        .collect()
}

/// Positively decorated `n`-simplices of the subdivision.
pub fn decorated_count(coefficients: &RationalMatrix, a: &IntMatrix, h: &[Rational]) -> Result<(usize, Vec<DecoratedSimplex>)> {
    if coefficients.rows() != a.rows() || coefficients.cols() != a.cols() {
        return Err(Error::Dimension(format!(
            "coefficient matrix is {}x{} but exponent matrix is {}x{}",
            coefficients.rows(),
            coefficients.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let cells = full_cells(a, h)?;
    let mut simplices = Vec::new();
    for cell in &cells {
        if let Some(d) = positively_decorated(coefficients, cell)? {
            simplices.push(d);
        }
    }
    Ok((simplices.len(), simplices))
}

/// `Aᵀv` for the witness normal of a decorated simplex; `Aᵀv + h` must lie
/// in the positive Bergman fan of the coefficient kernel.
pub fn decorated_to_tropical(d: &DecoratedSimplex, a: &IntMatrix, h: &[Rational], om: &OrientedMatroid) -> Result<RationalVector> {
    let w = a.transpose_mul(&d.cell.witness);
    let shifted: RationalVector = w.iter().zip(h).map(|(x, y)| x + y).collect();
    if !is_positive_member(&shifted, om) {
        return Err(Error::ComparisonViolated { cell: format!("{:?}", d.cell.one_based()), point: fmt_vector(&w) });
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat, rat_vec};
    use proptest::prelude::*;

    fn running() -> (RationalMatrix, IntMatrix, RationalVector) {
        (
            RationalMatrix::from_i64(&[&[-3, 1, -1, -2, 2], &[-1, 1, -1, -1, 1]]),
            IntMatrix::from_slices(&[&[0, 2, 0, 2, 1], &[0, 0, 2, 2, 1]]),
            rat_vec(&[0, 0, 0, 0, -1]),
        )
    }

    /// Every subset whose equality system pins down `(v, c)` and whose
    /// complement lies strictly above.
    fn brute_force_cells(a: &IntMatrix, h: &[Rational]) -> Vec<Vec<usize>> {
        let n = a.rows();
        let r = a.cols();
        let config = LiftedConfig::new(a, h).unwrap();
        let mut out = Vec::new();
        for mask in 1u32..(1 << r) {
            let s: Vec<usize> = (0..r).filter(|j| mask >> j & 1 == 1).collect();
            let rows: Vec<RationalVector> = s
                .iter()
                .map(|&j| {
                    let mut row: RationalVector = (0..n).map(|i| rat(a.get(i, j))).collect();
                    row.push(rat(-1));
                    row
                })
                .collect();
            let rhs: RationalVector = s.iter().map(|&j| -h[j].clone()).collect();
            let m = RationalMatrix::from_rows(rows, n + 1).unwrap();
            let Some((mut sol, kernel)) = m.solve_affine(&rhs).unwrap() else { continue };
            if kernel.rows() != 0 {
                continue;
            }
            let c = sol.pop().unwrap();
            if (0..r).filter(|j| mask >> j & 1 == 0).all(|j| config.height(&sol, j) > c) {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn running_example_cells() {
        let (_, a, h) = running();
        let cells = full_cells(&a, &h).unwrap();
        let members: Vec<Vec<usize>> = cells.iter().map(Cell::one_based).collect();
        assert_eq!(members, vec![vec![1, 2, 5], vec![1, 3, 5], vec![2, 4, 5], vec![3, 4, 5]]);
        assert!(is_triangulation(&cells, 2));
        assert_eq!(witness_normal(&cells[1]), &rat_vec(&[1, 0]));
        for cell in &cells {
            assert_eq!(LiftedConfig::new(&a, &h).unwrap().argmin(&cell.witness), cell.members);
        }
    }

    #[test]
    fn flat_lift_is_one_cell() {
        let (_, a, _) = running();
        let cells = full_cells(&a, &rat_vec(&[0, 0, 0, 0, 0])).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].members, vec![0, 1, 2, 3, 4]);
        assert_eq!(cells[0].witness, rat_vec(&[0, 0]));
        assert!(!is_triangulation(&cells, 2));
    }

    #[test]
    fn duplicate_columns_rejected() {
        let a = IntMatrix::from_slices(&[&[0, 1, 1]]);
        assert_eq!(full_cells(&a, &rat_vec(&[0, 0, 0])), Err(Error::DuplicateColumns(2, 3)));
    }

    #[test]
    fn running_example_decoration() {
        let (n, a, h) = running();
        let cells = full_cells(&a, &h).unwrap();
        assert_eq!(cofactor_kernel(&n.select_columns(&cells[0].members)).unwrap(), rat_vec(&[-1, 1, -2]));
        assert!(positively_decorated(&n, &cells[0]).unwrap().is_none());
        let (count, simplices) = decorated_count(&n, &a, &h).unwrap();
        assert_eq!(count, 1);
        assert_eq!(simplices[0].cell.one_based(), vec![1, 3, 5]);
        assert_eq!(simplices[0].kernel_vector, rat_vec(&[1, 1, 2]));
        let om = OrientedMatroid::realize_from_kernel(&n).unwrap();
        assert_eq!(decorated_to_tropical(&simplices[0], &a, &h, &om).unwrap(), rat_vec(&[0, 2, 0, 2, 1]));
    }

    #[test]
    fn telescoping_chain_is_decorated() {
        let m = RationalMatrix::from_i64(&[&[1, -1, 0], &[0, 1, -1]]);
        let cell = Cell { members: vec![0, 1, 2], witness: vec![] };
        let d = positively_decorated(&m, &cell).unwrap().unwrap();
        assert_eq!(d.kernel_vector, rat_vec(&[1, 1, 1]));
        let product = m.mul_vec(&d.kernel_vector).unwrap();
        assert!(product.iter().all(Zero::is_zero));
    }

    #[test]
    fn all_positive_row_never_decorates() {
        let n = RationalMatrix::from_i64(&[&[1, 1, 1]]);
        let a = IntMatrix::from_slices(&[&[0, 1, 2]]);
        for h in [rat_vec(&[0, -1, 0]), rat_vec(&[0, 1, 0]), vec![rat(0), frac(-1, 3), rat(5)]] {
            assert_eq!(decorated_count(&n, &a, &h).unwrap().0, 0);
        }
    }

    fn instance() -> impl Strategy<Value = (usize, Vec<Vec<i64>>, Vec<(i64, i64)>)> {
        (1usize..=2, 3usize..=6).prop_flat_map(|(n, r)| {
            (
                Just(n),
                proptest::collection::vec(proptest::collection::vec(-2i64..=2, r), n),
                proptest::collection::vec((-6i64..=6, 1i64..=3), r),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn cells_match_brute_force((n, rows, lifts) in instance(), du in proptest::collection::vec(-3i64..=3, 2), dc in -3i64..=3) {
            let r = rows[0].len();
            let a = IntMatrix::from_rows(&rows, r).unwrap();
            prop_assume!(a.repeated_columns().is_none());
            prop_assume!(a.to_rational().rank() == n);
            let h: RationalVector = lifts.iter().map(|&(p, q)| frac(p, q)).collect();
            let cells = full_cells(&a, &h).unwrap();
            let members: Vec<Vec<usize>> = cells.iter().map(|c| c.members.clone()).collect();
            let full_dim: Vec<Vec<usize>> = brute_force_cells(&a, &h)
                .into_iter()
                .filter(|s| {
                    let rows: Vec<RationalVector> = s.iter().map(|&j| {
                        let mut row: RationalVector = (0..n).map(|i| rat(a.get(i, j))).collect();
                        row.push(rat(1));
                        row
                    }).collect();
                    RationalMatrix::from_rows(rows, n + 1).unwrap().rank() == n + 1
                })
                .collect();
            prop_assert_eq!(&members, &full_dim);
            let config = LiftedConfig::new(&a, &h).unwrap();
            for cell in &cells {
                prop_assert_eq!(&config.argmin(&cell.witness), &cell.members);
            }
            // lift shift by Aᵀu + c𝟙
            let u: RationalVector = du[..n].iter().map(|&x| rat(x)).collect();
            let shifted: RationalVector = a.transpose_mul(&u).iter().zip(&h).map(|(x, y)| x + y + rat(dc)).collect();
            let moved: Vec<Vec<usize>> = full_cells(&a, &shifted).unwrap().into_iter().map(|c| c.members).collect();
            prop_assert_eq!(moved, members);
        }
    }
}
