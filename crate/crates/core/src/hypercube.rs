//! Functions on the Boolean hypercube `{-1,1}^n` and their exact Fourier
//! spectra.
//!
//! Encoding (fixed, bit-exact): a point `x` is the mask `m` where bit `i-1`
//! of `m` is 1 iff `x_i = -1`; a subset `S` of `[n]` is the mask `s` where
//! bit `i-1` is set iff `i` is in `S`. Negating a point is `m XOR (2^n - 1)`
//! and the character evaluation is a popcount.

use crate::dyadic::Dyadic;
use crate::{Error, Result};

/// Largest supported dimension; keeps `2^n`-scaled quantities comfortably
/// inside 64-bit integers.
pub const MAX_DIM: u32 = 24;
/// Largest dimension the quadratic naive transform accepts.
pub const MAX_NAIVE_DIM: u32 = 14;

fn check_dim(n: u32, max: u32, what: &'static str) -> Result<()> {
    if n < 1 || n > max {
        return Err(Error::DimensionOutOfRange { n, max, what });
    }
    Ok(())
}

/// A point of `{-1,1}^n`. `m = 0` is the all-(+1) point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointMask {
    n: u32,
    m: u32,
}

impl PointMask {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        check_dim(n, MAX_DIM, "point mask")?;
        if u64::from(m) >= 1u64 << n {
            return Err(Error::Domain(format!("point mask {m} out of range for n={n}")));
        }
        Ok(PointMask { n, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.m
    }

    /// Coordinate `x_i` for `i` in `1..=n`.
    pub fn coord(&self, i: u32) -> i64 {
        debug_assert!(1 <= i && i <= self.n);
        1 - 2 * i64::from((self.m >> (i - 1)) & 1)
    }

    /// The negated point `-x`.
    pub fn negate(self) -> Self {
        PointMask {
            n: self.n,
            m: self.m ^ full_mask(self.n),
        }
    }
}

/// A subset of `[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetMask {
    n: u32,
    s: u32,
}

impl SubsetMask {
    pub fn new(n: u32, s: u32) -> Result<Self> {
        check_dim(n, MAX_DIM, "subset mask")?;
        if u64::from(s) >= 1u64 << n {
            return Err(Error::Domain(format!("subset mask {s} out of range for n={n}")));
        }
        Ok(SubsetMask { n, s })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.s
    }

    pub fn size(&self) -> u32 {
        self.s.count_ones()
    }
}

pub fn full_mask(n: u32) -> u32 {
    ((1u64 << n) - 1) as u32
}

/// Evaluates the character `prod_{i in S} x_i`.
pub fn character(s: SubsetMask, x: PointMask) -> Result<i64> {
    if s.n != x.n {
        return Err(Error::DimensionMismatch(s.n, x.n));
    }
    Ok(1 - 2 * i64::from((s.s & x.m).count_ones() & 1))
}

/// An integer-valued function on `{-1,1}^n`, tabulated in point-mask order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: u32,
    values: Vec<i64>,
}

impl TruthTable {
    pub fn new(n: u32, values: Vec<i64>) -> Result<Self> {
        check_dim(n, MAX_DIM, "truth table")?;
        if values.len() != 1 << n {
            return Err(Error::Domain(format!(
                "truth table for n={n} needs {} values, got {}",
                1u64 << n,
                values.len()
            )));
        }
        Ok(TruthTable { n, values })
    }

    pub fn from_fn(n: u32, f: impl FnMut(u32) -> i64) -> Result<Self> {
        check_dim(n, MAX_DIM, "truth table")?;
        Ok(TruthTable {
            n,
            values: (0..1u32 << n).map(f).collect(),
        })
    }

    /// The 0/1 indicator of the set whose members are the set bits of `bits`.
    pub fn indicator_from_bits(n: u32, bits: u64) -> Result<Self> {
        check_dim(n, MAX_DIM, "truth table")?;
        if n > 6 {
            return Err(Error::Domain("indicator_from_bits supports n <= 6".into()));
        }
        Self::from_fn(n, |m| ((bits >> m) & 1) as i64)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, m: u32) -> i64 {
        self.values[m as usize]
    }

    /// The table of `x -> h(-x)`.
    pub fn negated_argument(&self) -> TruthTable {
        let full = full_mask(self.n);
        TruthTable {
            n: self.n,
            values: (0..1u32 << self.n)
                .map(|m| self.values[(m ^ full) as usize])
                .collect(),
        }
    }
}

/// An exact spectrum: `coefficient(S) = raw[s] / 2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    n: u32,
    raw: Vec<i64>,
}

impl Spectrum {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn raw(&self) -> &[i64] {
        &self.raw
    }

    pub fn raw_at(&self, s: u32) -> i64 {
        self.raw[s as usize]
    }

    pub fn coefficient(&self, s: SubsetMask) -> Dyadic {
        Dyadic::new(self.raw[s.s as usize] as i128, self.n)
    }
}

/// In-place integer butterfly over `2^n` entries; `O(n 2^n)`, exact.
fn butterfly(a: &mut [i64]) {
    let size = a.len();
    let mut len = 1;
    while len < size {
        let mut block = 0;
        while block < size {
            for p in block..block + len {
                let (x, y) = (a[p], a[p + len]);
                a[p] = x + y;
                a[p + len] = x - y;
            }
            block += 2 * len;
        }
        len <<= 1;
    }
}

/// Fast Walsh-Hadamard transform: `raw[s] = sum_m t[m] * character(s, m)`.
pub fn wht(t: &TruthTable) -> Spectrum {
    let mut raw = t.values.clone();
    butterfly(&mut raw);
    Spectrum { n: t.n, raw }
}

/// Quadratic-time transform by direct double summation. Independent oracle
/// for `wht`; bit-identical output.
pub fn wht_naive(t: &TruthTable) -> Result<Spectrum> {
    check_dim(t.n, MAX_NAIVE_DIM, "naive transform")?;
    let size = 1u32 << t.n;
    let raw = (0..size)
        .map(|s| {
            (0..size)
                .map(|m| {
                    let sign = 1 - 2 * i64::from((s & m).count_ones() & 1);
                    t.values[m as usize] * sign
                })
                .sum()
        })
        .collect();
    Ok(Spectrum { n: t.n, raw })
}

/// The inner product `<a, b> = E[a(X) b(X)]`, exact.
pub fn inner_product(a: &TruthTable, b: &TruthTable) -> Result<Dyadic> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    let sum: i128 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(&x, &y)| x as i128 * y as i128)
        .sum();
    Ok(Dyadic::new(sum, a.n))
}

/// Selects spectrum entries by the size of their subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeFilter {
    /// Singletons only.
    Level1,
    /// All odd sizes.
    Odd,
    /// Odd sizes of at least three.
    OddAtLeastThree,
    /// Everything.
    All,
    /// An explicit set of sizes.
    Degrees(Vec<u32>),
}

impl DegreeFilter {
    pub fn accepts(&self, degree: u32) -> bool {
        match self {
            DegreeFilter::Level1 => degree == 1,
            DegreeFilter::Odd => degree % 2 == 1,
            DegreeFilter::OddAtLeastThree => degree % 2 == 1 && degree >= 3,
            DegreeFilter::All => true,
            DegreeFilter::Degrees(ds) => ds.contains(&degree),
        }
    }
}

/// `sum over selected S of coefficient(S)^2`, exact with denominator `2^2n`.
pub fn spectral_mass(sp: &Spectrum, selector: &DegreeFilter) -> Dyadic {
    let sum: i128 = sp
        .raw
        .iter()
        .enumerate()
        .filter(|(s, _)| selector.accepts((*s as u32).count_ones()))
        .map(|(_, &r)| r as i128 * r as i128)
        .sum();
    Dyadic::new(sum, 2 * sp.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dictator(n: u32) -> TruthTable {
        // 1{x_1 = +1}: bit 0 of m clear
        TruthTable::from_fn(n, |m| ((m & 1) ^ 1) as i64).unwrap()
    }

    #[test]
    fn character_examples() {
        let n = 2;
        let empty = SubsetMask::new(n, 0).unwrap();
        let any = PointMask::new(n, 0b01).unwrap();
        assert_eq!(character(empty, any).unwrap(), 1);

        let s1 = SubsetMask::new(n, 0b01).unwrap();
        let x = PointMask::new(n, 0b01).unwrap(); // x_1 = -1
        assert_eq!(character(s1, x).unwrap(), -1);

        let s12 = SubsetMask::new(n, 0b11).unwrap();
        let all_minus = PointMask::new(n, 0b11).unwrap();
        assert_eq!(character(s12, all_minus).unwrap(), 1);
    }

    #[test]
    fn character_dimension_mismatch() {
        let s = SubsetMask::new(2, 1).unwrap();
        let x = PointMask::new(3, 1).unwrap();
        assert!(character(s, x).is_err());
    }

    #[test]
    fn point_negation_is_mask_xor() {
        let x = PointMask::new(3, 0b010).unwrap();
        assert_eq!(x.negate().mask(), 0b101);
        assert_eq!(x.coord(2), -1);
        assert_eq!(x.negate().coord(2), 1);
    }

    #[test]
    fn wht_constant_table() {
        let t = TruthTable::from_fn(2, |_| 1).unwrap();
        assert_eq!(wht(&t).raw(), &[4, 0, 0, 0]);
    }

    #[test]
    fn wht_dictator_spectrum() {
        let sp = wht(&dictator(2));
        // coefficients 1/2, 1/2, 0, 0
        assert_eq!(sp.raw(), &[2, 2, 0, 0]);
        assert_eq!(
            sp.coefficient(SubsetMask::new(2, 1).unwrap()),
            Dyadic::new(1, 1)
        );
    }

    #[test]
    fn wht_subcube_spectrum() {
        // 1{x_1 = +1, x_2 = +1}: only m = 0
        let t = TruthTable::from_fn(2, |m| (m == 0) as i64).unwrap();
        assert_eq!(wht(&t).raw(), &[1, 1, 1, 1]);
    }

    #[test]
    fn naive_matches_fast_on_examples() {
        for t in [
            TruthTable::from_fn(2, |_| 1).unwrap(),
            dictator(2),
            TruthTable::from_fn(3, |_| 0).unwrap(),
        ] {
            assert_eq!(wht(&t).raw(), wht_naive(&t).unwrap().raw());
        }
    }

    #[test]
    fn naive_rejects_large_dimension() {
        let t = TruthTable::from_fn(15, |_| 0);
        assert!(t.is_ok());
        assert!(wht_naive(&t.unwrap()).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let d = dictator(2); // alpha = 1/2
        assert_eq!(inner_product(&d, &d).unwrap(), Dyadic::new(1, 1));
        // disjoint supports: <h, h(-.)> = 0 for the dictator
        let neg = d.negated_argument();
        assert_eq!(inner_product(&d, &neg).unwrap(), Dyadic::ZERO);
    }

    #[test]
    fn spectral_mass_examples() {
        let sp = wht(&dictator(3));
        assert_eq!(
            spectral_mass(&sp, &DegreeFilter::Level1),
            Dyadic::new(1, 2)
        );
        assert_eq!(
            spectral_mass(&sp, &DegreeFilter::OddAtLeastThree),
            Dyadic::ZERO
        );

        // subcube of measure 1/4: level-1 mass = alpha/2 = 1/8
        let t = TruthTable::from_fn(2, |m| (m == 0) as i64).unwrap();
        assert_eq!(
            spectral_mass(&wht(&t), &DegreeFilter::Level1),
            Dyadic::new(1, 3)
        );
    }

    #[test]
    fn explicit_degree_filter() {
        let sp = wht(&dictator(3));
        assert_eq!(
            spectral_mass(&sp, &DegreeFilter::Degrees(vec![0, 1])),
            spectral_mass(&sp, &DegreeFilter::All)
        );
    }

    #[test]
    fn truth_table_length_validation() {
        assert!(TruthTable::new(2, vec![1, 0, 0]).is_err());
        assert!(TruthTable::new(0, vec![]).is_err());
        assert!(TruthTable::new(25, vec![0]).is_err());
    }
}
