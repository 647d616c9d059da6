//! Bergman fans in the min convention.
//!
//! The fan is represented in its fine structure: one cone per maximal flag
//! of flats `F₁ ⊊ … ⊊ F_k`, spanned by the indicator vectors `e_{F_i}` plus
//! the lineality line `ℝ·𝟙`. Smaller flats therefore carry larger weights,
//! and the minimum of `w` over any circuit is attained on the complement of
//! the largest flat it meets.
//!
//! The positive part is obtained by filtering fine cones with a relative
//! interior sample; initial circuits are constant on each open fine cell.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{Rational, RationalVector};
use crate::matroid::{argmin_within, initial_circuit, ElementSet, FlagOfFlats, OrientedMatroid};

/// For every circuit support the minimum of `w` is attained at least twice.
pub fn is_member(w: &[Rational], m: &OrientedMatroid) -> bool {
    m.supports().iter().all(|s| argmin_within(w, *s).len() >= 2)
}

/// For every signed circuit the argmin meets both the positive and the
/// negative part.
pub fn is_positive_member(w: &[Rational], m: &OrientedMatroid) -> bool {
    m.circuits().iter().all(|c| {
        let init = initial_circuit(w, c);
        !init.positive.is_empty() && !init.negative.is_empty()
    })
}

/// A maximal cone of the fine Bergman fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagCone {
    pub flag: FlagOfFlats,
    ground_size: usize,
    /// Set for matroids without circuits: the cone is the whole space.
    whole_space: bool,
}

impl FlagCone {
    pub fn new(flag: FlagOfFlats, ground_size: usize) -> Self {
        Self { flag, ground_size, whole_space: false }
    }

    fn whole_space(ground_size: usize) -> Self {
        Self { flag: FlagOfFlats::default(), ground_size, whole_space: true }
    }

    pub fn is_whole_space(&self) -> bool {
        self.whole_space
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    /// Ray generators `e_F`; for the whole-space cone the singleton
    /// indicators, whose linear span together with `𝟙` is everything.
    pub fn generators(&self) -> Vec<RationalVector> {
        if self.whole_space {
            return (0..self.ground_size).map(|i| indicator(ElementSet::singleton(i), self.ground_size)).collect();
        }
        self.flag.chain.iter().map(|f| indicator(f.elements, self.ground_size)).collect()
    }

    pub fn lineality(&self) -> RationalVector {
        vec![Rational::one(); self.ground_size]
    }

    /// Dimension including the lineality line.
    pub fn dimension(&self) -> usize {
        if self.whole_space {
            self.ground_size
        } else {
            self.flag.len() + 1
        }
    }

    /// `w` is constant on each block of the flag and the block values weakly
    /// decrease from the smallest flat outwards.
    pub fn contains(&self, w: &[Rational]) -> bool {
        if self.whole_space {
            return true;
        }
        let mut previous: Option<&Rational> = None;
        for block in self.flag.blocks(self.ground_size) {
            let mut items = block.iter();
            let Some(first) = items.next() else {
                continue;
            };
            let value = &w[first];
            if items.any(|i| &w[i] != value) {
                return false;
            }
            if previous.is_some_and(|p| p < value) {
                return false;
            }
            previous = Some(value);
        }
        true
    }

    /// Like [`contains`](Self::contains) with strict decrease between blocks.
    pub fn contains_in_relative_interior(&self, w: &[Rational]) -> bool {
        if self.whole_space {
            return true;
        }
        if !self.contains(w) {
            return false;
        }
        let values: Vec<&Rational> =
            self.flag.blocks(self.ground_size).into_iter().filter_map(|b| b.iter().next().map(|i| &w[i])).collect();
        values.windows(2).all(|p| p[0] > p[1])
    }
}

pub(crate) fn indicator(s: ElementSet, n: usize) -> RationalVector {
    (0..n).map(|i| if s.contains(i) { Rational::one() } else { Rational::zero() }).collect()
}

/// One cone per maximal flag. A matroid with a loop has an empty Bergman
/// fan; a matroid without circuits has the whole space as its only cone.
pub fn fine_fan(m: &OrientedMatroid) -> Vec<FlagCone> {
    if m.is_free() {
        return vec![FlagCone::whole_space(m.ground_size())];
    }
    if !m.loops().is_empty() {
        return Vec::new();
    }
    m.maximal_flags().into_iter().map(|f| FlagCone::new(f, m.ground_size())).collect()
}

/// `Σ e_{F_i}`: unit coefficients and zero lineality part.
pub fn sample_relative_interior(cone: &FlagCone) -> RationalVector {
    let mut w = vec![Rational::zero(); cone.ground_size];
    if cone.whole_space {
        return w;
    }
    for flat in &cone.flag.chain {
        for i in flat.elements.iter() {
            w[i] += Rational::one();
        }
    }
    w
}

#[derive(Clone, Debug)]
pub struct PositiveFan {
    pub cones: Vec<FlagCone>,
    /// The matroid has no circuits, so the positive fan is the whole space.
    pub free: bool,
    ground_size: usize,
}

impl PositiveFan {
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn contains(&self, w: &[Rational]) -> bool {
        self.cones.iter().any(|c| c.contains(w))
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }
}

/// Keeps the fine cones whose interior sample passes the positivity test.
pub fn positive_fan(m: &OrientedMatroid) -> PositiveFan {
    let fine = fine_fan(m);
    let cones: Vec<FlagCone> = fine.into_par_iter().filter(|cone| is_positive_member(&sample_relative_interior(cone), m)).collect();
    PositiveFan { cones, free: m.is_free(), ground_size: m.ground_size() }
}

/// Verdict for one externally supplied coarse cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseVerdict {
    pub rays: Vec<usize>,
    pub sample: RationalVector,
    pub member: bool,
    pub positive: bool,
}

/// Tests the sum of each coarse cone's rays against both predicates.
/// `cones` holds 0-based indices into `rays`.
pub fn coarse_compare(m: &OrientedMatroid, rays: &[RationalVector], cones: &[Vec<usize>]) -> Vec<CoarseVerdict> {
    cones
        .iter()
        .map(|cone| {
            let mut sample = vec![Rational::zero(); m.ground_size()];
            for &r in cone {
                for (s, x) in sample.iter_mut().zip(&rays[r]) {
                    *s += x;
                }
            }
            CoarseVerdict { rays: cone.clone(), member: is_member(&sample, m), positive: is_positive_member(&sample, m), sample }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat, rat_vec, RationalMatrix};
    use crate::matroid::{Flat, SignedCircuit};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn running() -> OrientedMatroid {
        OrientedMatroid::realize_from_kernel(&RationalMatrix::from_i64(&[&[-3, 1, -1, -2, 2], &[-1, 1, -1, -1, 1]])).unwrap()
    }

    fn set(items: &[usize]) -> ElementSet {
        ElementSet::from_indices(items.iter().map(|i| i - 1))
    }

    #[test]
    fn membership_examples() {
        let m = running();
        assert!(is_member(&rat_vec(&[0, 1, 0, 0, 0]), &m));
        assert!(!is_member(&rat_vec(&[0, -1, 0, 0, 0]), &m));
        assert!(is_member(&rat_vec(&[7, 7, 7, 7, 7]), &m));
    }

    #[test]
    fn positive_membership_examples() {
        let m = running();
        assert!(is_positive_member(&rat_vec(&[0, 2, 0, 2, 0]), &m));
        assert!(!is_positive_member(&rat_vec(&[0, 1, 0, 0, 1]), &m));
        let all_positive = OrientedMatroid::realize_from_kernel(&RationalMatrix::from_i64(&[&[1, 1]])).unwrap();
        assert_eq!(
            all_positive.circuits(),
            &[
                SignedCircuit { positive: ElementSet::empty(), negative: set(&[1, 2]) },
                SignedCircuit { positive: set(&[1, 2]), negative: ElementSet::empty() }
            ]
        );
        for w in [rat_vec(&[0, 0]), rat_vec(&[1, -4])] {
            assert!(!is_positive_member(&w, &all_positive));
        }
        assert!(positive_fan(&all_positive).is_empty());
    }

    #[test]
    fn running_fine_fan() {
        let m = running();
        let fan = fine_fan(&m);
        assert_eq!(fan.len(), 14);
        let rays = [
            rat_vec(&[0, 1, 0, 0, 0]),
            rat_vec(&[0, 0, 0, 1, 0]),
            rat_vec(&[0, 0, 0, -1, -1]),
            rat_vec(&[0, -1, -1, 0, 0]),
            rat_vec(&[0, -1, -1, -1, -1]),
            rat_vec(&[0, 0, 0, 0, 1]),
            rat_vec(&[0, 0, 1, 0, 0]),
        ];
        for ray in &rays {
            assert!(fan.iter().any(|c| c.contains(ray)));
        }
    }

    #[test]
    fn free_matroid_fan_is_everything() {
        let free = OrientedMatroid::from_circuits(3, &[]).unwrap();
        let fan = fine_fan(&free);
        assert_eq!(fan.len(), 1);
        assert!(fan[0].is_whole_space());
        assert_eq!(fan[0].dimension(), 3);
        assert!(fan[0].contains(&rat_vec(&[5, -2, 9])));
        let pos = positive_fan(&free);
        assert!(pos.free);
        assert!(pos.contains(&rat_vec(&[1, 2, 3])));
    }

    #[test]
    fn interior_samples() {
        let flag =
            |chain: &[(&[usize], usize)]| FlagOfFlats { chain: chain.iter().map(|(e, r)| Flat { rank: *r, elements: set(e) }).collect() };
        let cone = FlagCone::new(flag(&[(&[2], 1), (&[1, 2, 3], 2)]), 5);
        assert_eq!(sample_relative_interior(&cone), rat_vec(&[1, 2, 1, 0, 0]));
        let cone = FlagCone::new(flag(&[(&[4], 1)]), 5);
        assert_eq!(sample_relative_interior(&cone), rat_vec(&[0, 0, 0, 1, 0]));
        let m = running();
        for cone in fine_fan(&m) {
            let w = sample_relative_interior(&cone);
            assert!(is_member(&w, &m));
            assert!(cone.contains_in_relative_interior(&w));
        }
    }

    #[test]
    fn positive_fan_of_running_example() {
        let m = running();
        let pos = positive_fan(&m);
        // rays ρ1..ρ7 and the ten coarse cones
        let rays = [
            rat_vec(&[0, 1, 0, 0, 0]),
            rat_vec(&[0, 0, 0, 1, 0]),
            rat_vec(&[0, 0, 0, -1, -1]),
            rat_vec(&[0, -1, -1, 0, 0]),
            rat_vec(&[0, -1, -1, -1, -1]),
            rat_vec(&[0, 0, 0, 0, 1]),
            rat_vec(&[0, 0, 1, 0, 0]),
        ];
        let cones: Vec<Vec<usize>> = [(1, 2), (1, 3), (2, 4), (3, 5), (4, 5), (1, 6), (4, 6), (2, 7), (3, 7), (6, 7)]
            .iter()
            .map(|&(a, b)| vec![a - 1, b - 1])
            .collect();
        let verdicts = coarse_compare(&m, &rays, &cones);
        for (i, v) in verdicts.iter().enumerate() {
            assert!(v.member);
            assert_eq!(v.positive, i < 5, "coarse cone σ{}", i + 1);
            assert_eq!(pos.contains(&v.sample), v.positive);
        }
    }

    fn random_matroid(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> OrientedMatroid {
        loop {
            let entries = (0..rows * cols).map(|_| rat(rng.gen_range(-3..=3))).collect();
            let c = RationalMatrix::new(rows, cols, entries).unwrap();
            if c.rank() == rows {
                return OrientedMatroid::realize_from_kernel(&c).unwrap();
            }
        }
    }

    /// Random w biased towards ties so that membership is not vacuous.
    fn random_weight(rng: &mut ChaCha8Rng, n: usize) -> RationalVector {
        (0..n).map(|_| frac(rng.gen_range(-2..=2), rng.gen_range(1..=2))).collect()
    }

    #[test]
    fn fine_fan_two_sided_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let m = random_matroid(&mut rng, 2, 5);
            let fan = fine_fan(&m);
            let pos = positive_fan(&m);
            let mut hits = 0;
            for _ in 0..1000 {
                let w = random_weight(&mut rng, 5);
                let member = is_member(&w, &m);
                hits += member as usize;
                assert_eq!(member, fan.iter().any(|c| c.contains(&w)), "w = {w:?}");
                assert_eq!(is_positive_member(&w, &m), pos.contains(&w), "w = {w:?}");
            }
            assert!(hits > 0);
        }
    }

    #[test]
    fn fine_cones_are_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let m = random_matroid(&mut rng, 2, 6);
            for cone in fine_fan(&m) {
                for _ in 0..20 {
                    let mut w = vec![rat(rng.gen_range(-3..=3)); 6];
                    for g in cone.generators() {
                        let lambda = rat(rng.gen_range(0..=3));
                        for (x, y) in w.iter_mut().zip(&g) {
                            *x += &lambda * y;
                        }
                    }
                    assert!(is_member(&w, &m));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn predicates_are_invariant(
            w in prop::collection::vec(-4i64..=4, 5),
            shift in -5i64..=5,
            scale in 1i64..=4,
        ) {
            let m = running();
            let w = rat_vec(&w);
            let shifted: Vec<_> = w.iter().map(|x| x + rat(shift)).collect();
            let scaled: Vec<_> = w.iter().map(|x| x * frac(scale, 3)).collect();
            let member = is_member(&w, &m);
            let positive = is_positive_member(&w, &m);
            prop_assert_eq!(is_member(&shifted, &m), member);
            prop_assert_eq!(is_member(&scaled, &m), member);
            prop_assert_eq!(is_positive_member(&shifted, &m), positive);
            prop_assert_eq!(is_positive_member(&scaled, &m), positive);
            prop_assert!(!positive || member);
            let negated: Vec<SignedCircuit> = m.circuits().iter().map(SignedCircuit::negated).collect();
            let flipped = OrientedMatroid::from_circuits(5, &negated).unwrap();
            prop_assert_eq!(is_member(&w, &flipped), member);
            prop_assert_eq!(is_positive_member(&w, &flipped), positive);
        }
    }
}
