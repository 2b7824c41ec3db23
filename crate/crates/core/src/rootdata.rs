//! Finite-type root data.
//!
//! Conventions: `cartan[i][j] = <alpha_i, alpha_j^vee>`, so that
//! `[h_i, e_j] = cartan[j][i] e_j` and the Serre relations read
//! `(ad e_i)^(1 - cartan[j][i]) e_j = 0`. Roots are stored in simple-root
//! coordinates, coroots in simple-coroot coordinates, weights in the
//! fundamental-weight basis and coweights in the fundamental-coweight basis.
//! Every pairing therefore reduces to a dot product or a multiplication by the
//! Cartan matrix.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;

/// Default rank cap. `G2` is always accepted.
pub const DEFAULT_RANK_CAP: usize = 4;

/// Bound on Weyl orbit sizes (|W(E8)| comfortably fits).
pub const ORBIT_BOUND: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn parse(label: &str) -> Result<Self> {
        let unknown = || Error::UnknownType(label.to_string());
        let mut chars = label.trim().chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(unknown()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| unknown())?;
        let valid = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !valid {
            return Err(unknown());
        }
        Ok(CartanType { family, rank })
    }

    /// Type of the Langlands dual (transposed Cartan matrix).
    pub fn dual(self) -> Self {
        let family = match self.family {
            Family::B => Family::C,
            Family::C => Family::B,
            other => other,
        };
        CartanType { family, ..self }
    }

    /// Cartan matrix with Bourbaki node numbering.
    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..n - 1 {
                    link(i, i + 1);
                }
            }
            Family::D => {
                for i in 0..n - 2 {
                    link(i, i + 1);
                }
                link(n - 3, n - 1);
            }
            Family::E => {
                link(0, 2);
                link(1, 3);
                for i in 2..n - 1 {
                    link(i, i + 1);
                }
            }
            Family::F => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            Family::G => link(0, 1),
        }
        match self.family {
            // alpha_n short
            Family::B => a[n - 2][n - 1] = -2,
            // alpha_n long
            Family::C => a[n - 1][n - 2] = -2,
            // alpha_3, alpha_4 short
            Family::F => a[1][2] = -2,
            // alpha_1 short
            Family::G => a[1][0] = -3,
            _ => {}
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Integral weight in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

/// Integral coweight in the fundamental-coweight basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coweight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn is_dominant_integral(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }
}

impl Coweight {
    pub fn zero(rank: usize) -> Self {
        Coweight(vec![0; rank])
    }

    pub fn is_dominant_integral(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Coweight {
        Coweight(self.0.iter().map(|a| -a).collect())
    }
}

/// Which side of the duality a rational vector lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    /// Fundamental-weight coordinates (elements of h*).
    Weights,
    /// Fundamental-coweight coordinates (elements of h).
    Coweights,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    positive_coroots: Vec<Vec<i64>>,
    exponents: Vec<u32>,
    /// Squared lengths `(alpha_i, alpha_i)` normalised so the shortest is 1.
    norms: Vec<i64>,
    rho: Weight,
    rho_check: Coweight,
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.cartan == other.cartan
    }
}

impl Eq for RootSystem {}

pub fn build_root_system(label: &str) -> Result<RootSystem> {
    build_root_system_with_cap(label, DEFAULT_RANK_CAP)
}

pub fn build_root_system_with_cap(label: &str, cap: usize) -> Result<RootSystem> {
    let ty = CartanType::parse(label)?;
    if ty.family != Family::G && ty.rank > cap {
        return Err(Error::RankAboveCap { label: ty.to_string(), rank: ty.rank, cap });
    }
    Ok(RootSystem::from_cartan(ty, ty.cartan_matrix()))
}

/// Positive roots of the Cartan matrix, obtained by closing the simple roots
/// under simple reflections. `reflect_row(i)` gives `<beta, alpha_i^vee>`
/// as `sum_j beta_j cartan[j][i]`.
fn positive_roots_of(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let simple: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut seen: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut queue: VecDeque<Vec<i64>> = simple.into_iter().collect();
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
            let mut image = beta.clone();
            image[i] -= pairing;
            if image.iter().all(|&c| c >= 0) && image.iter().any(|&c| c > 0) && seen.insert(image.clone()) {
                queue.push_back(image);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    sort_roots(&mut roots);
    roots
}

/// Height ascending, then reverse-lexicographic so that `alpha_1` precedes
/// `alpha_2` within height one.
pub(crate) fn sort_roots(roots: &mut [Vec<i64>]) {
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
}

/// Exponents as the partition dual to the multiset of root heights.
fn exponents_from_heights(roots: &[Vec<i64>]) -> Vec<u32> {
    let mut count: BTreeMap<i64, i64> = BTreeMap::new();
    for r in roots {
        *count.entry(r.iter().sum()).or_default() += 1;
    }
    let max = count.keys().copied().max().unwrap_or(0);
    let mut exps = Vec::new();
    for m in 1..=max {
        let here = count.get(&m).copied().unwrap_or(0);
        let next = count.get(&(m + 1)).copied().unwrap_or(0);
        for _ in 0..(here - next) {
            exps.push(m as u32);
        }
    }
    exps
}

fn root_norms(cartan: &[Vec<i64>]) -> Vec<i64> {
    let n = cartan.len();
    // d_j / d_i = A_ji / A_ij along every edge of the Dynkin diagram.
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    d[0] = Some(BigRational::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 && d[j].is_none() {
                let di = d[i].clone().unwrap();
                d[j] = Some(di * BigRational::from_integer(cartan[j][i].into())
                    / BigRational::from_integer(cartan[i][j].into()));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<BigRational> = d.into_iter().map(|x| x.expect("connected Dynkin diagram")).collect();
    let min = d.iter().min().unwrap().clone();
    d.iter()
        .map(|x| {
            let r = x / &min;
            assert!(r.is_integer(), "non-integral length ratio");
            r.to_integer().try_into().unwrap()
        })
        .collect()
}

impl RootSystem {
    fn from_cartan(cartan_type: CartanType, cartan: Vec<Vec<i64>>) -> Self {
        let n = cartan.len();
        let transpose: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| cartan[j][i]).collect()).collect();
        let positive_roots = positive_roots_of(&cartan);
        let positive_coroots = positive_roots_of(&transpose);
        let exponents = exponents_from_heights(&positive_coroots);
        let norms = root_norms(&cartan);
        RootSystem {
            cartan_type,
            cartan,
            positive_roots,
            positive_coroots,
            exponents,
            norms,
            rho: Weight(vec![1; n]),
            rho_check: Coweight(vec![1; n]),
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn label(&self) -> String {
        self.cartan_type.to_string()
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn rho_check(&self) -> &Coweight {
        &self.rho_check
    }

    pub fn norms(&self) -> &[i64] {
        &self.norms
    }

    pub fn height(root: &[i64]) -> i64 {
        root.iter().sum()
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive_roots.last().expect("nonempty root system")
    }

    /// Symmetric form on the root lattice, `(alpha_i, alpha_j) = A_ij d_j / 2`.
    pub fn inner_roots(&self, a: &[i64], b: &[i64]) -> BigRational {
        let n = self.rank();
        let mut acc = BigRational::zero();
        for i in 0..n {
            for j in 0..n {
                if a[i] != 0 && b[j] != 0 {
                    acc += BigRational::new(
                        (a[i] * b[j] * self.cartan[i][j] * self.norms[j]).into(),
                        2.into(),
                    );
                }
            }
        }
        acc
    }

    /// `<beta, alpha_i^vee>` for a root-lattice vector `beta`.
    pub fn root_on_simple_coroot(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|j| beta[j] * self.cartan[j][i]).sum()
    }

    /// Coroot of a root, in simple-coroot coordinates.
    pub fn coroot_of(&self, root: &[i64]) -> Vec<i64> {
        let len = self.inner_roots(root, root);
        root.iter()
            .zip(&self.norms)
            .map(|(&c, &d)| {
                let v = BigRational::from_integer((c * d).into()) / &len;
                assert!(v.is_integer());
                v.to_integer().try_into().unwrap()
            })
            .collect()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        if v.iter().all(|&c| c <= 0) {
            let neg: Vec<i64> = v.iter().map(|c| -c).collect();
            self.positive_roots.binary_search_by(|r| root_cmp(r, &neg)).is_ok()
        } else {
            self.positive_roots.binary_search_by(|r| root_cmp(r, v)).is_ok()
        }
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.positive_roots.binary_search_by(|r| root_cmp(r, v)).ok()
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got == self.rank() {
            Ok(())
        } else {
            Err(Error::Mismatch { expected: self.rank(), got })
        }
    }

    /// `<alpha, mu^vee>` for a root in simple-root coordinates.
    pub fn pair_root(&self, root: &[i64], coweight: &Coweight) -> Result<i64> {
        self.check_len(root.len())?;
        self.check_len(coweight.0.len())?;
        Ok(root.iter().zip(&coweight.0).map(|(a, b)| a * b).sum())
    }

    /// `<alpha^vee, mu>` for a coroot in simple-coroot coordinates.
    pub fn pair_coroot(&self, coroot: &[i64], weight: &Weight) -> Result<i64> {
        self.check_len(coroot.len())?;
        self.check_len(weight.0.len())?;
        Ok(coroot.iter().zip(&weight.0).map(|(a, b)| a * b).sum())
    }

    /// Coweight expressed in the simple-coroot basis `h_i`: solves `A y = c`.
    pub fn coweight_in_coroot_basis(&self, cw: &[BigRational]) -> Vec<BigRational> {
        let a = linalg::int_matrix(&self.cartan);
        linalg::solve(&a, cw).expect("Cartan matrix is invertible")
    }

    /// Inverse of [`Self::coweight_in_coroot_basis`]: `c = A y`.
    pub fn coroot_basis_to_coweight(&self, y: &[BigRational]) -> Vec<BigRational> {
        let n = self.rank();
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| BigRational::from_integer(self.cartan[j][i].into()) * &y[i])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Image of `v` under the simple reflection `s_i`.
    pub fn reflect(&self, v: &[BigRational], i: usize, side: Lattice) -> Vec<BigRational> {
        let n = self.rank();
        let mut out = v.to_vec();
        let c = v[i].clone();
        if c.is_zero() {
            return out;
        }
        for (j, slot) in out.iter_mut().enumerate().take(n) {
            // alpha_i = sum_j A_ij omega_j ; alpha_i^vee = sum_j A_ji omega_j^vee
            let entry = match side {
                Lattice::Weights => self.cartan[i][j],
                Lattice::Coweights => self.cartan[j][i],
            };
            if entry != 0 {
                *slot -= &c * BigRational::from_integer(entry.into());
            }
        }
        out
    }

    pub fn weyl_orbit(&self, v: &[BigRational], side: Lattice) -> Result<Vec<Vec<BigRational>>> {
        self.check_len(v.len())?;
        let mut seen: HashSet<Vec<BigRational>> = HashSet::new();
        seen.insert(v.to_vec());
        let mut queue = VecDeque::from([v.to_vec()]);
        let mut out = vec![v.to_vec()];
        while let Some(x) = queue.pop_front() {
            for i in 0..self.rank() {
                let y = self.reflect(&x, i, side);
                if seen.insert(y.clone()) {
                    if seen.len() > ORBIT_BOUND {
                        return Err(Error::OrbitBound(ORBIT_BOUND));
                    }
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Equality of images under `h* -> h*/W`, i.e. W-orbit membership.
    pub fn harish_chandra_equal(&self, mu: &[BigRational], nu: &[BigRational]) -> Result<bool> {
        self.harish_chandra_equal_on(mu, nu, Lattice::Weights)
    }

    pub fn harish_chandra_equal_on(&self, mu: &[BigRational], nu: &[BigRational], side: Lattice) -> Result<bool> {
        self.check_len(nu.len())?;
        Ok(self.weyl_orbit(mu, side)?.binary_search(&nu.to_vec()).is_ok())
    }

    /// Representative of the orbit lying in the closed antidominant chamber.
    pub fn antidominant_representative(&self, v: &[BigRational], side: Lattice) -> Vec<BigRational> {
        let mut x = v.to_vec();
        loop {
            match (0..self.rank()).find(|&i| x[i].is_positive()) {
                Some(i) => x = self.reflect(&x, i, side),
                None => return x,
            }
        }
    }

    pub fn langlands_dual(&self) -> RootSystem {
        let n = self.rank();
        let transpose: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| self.cartan[j][i]).collect()).collect();
        RootSystem::from_cartan(self.cartan_type.dual(), transpose)
    }

    /// Dominant weights with every fundamental coordinate at most `max`.
    pub fn dominant_box(&self, max: i64) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..self.rank() {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..=max).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

fn root_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    let ha: i64 = a.iter().sum();
    let hb: i64 = b.iter().sum();
    ha.cmp(&hb).then_with(|| b.cmp(a))
}

pub fn is_dominant_integral(coords: &[i64]) -> bool {
    coords.iter().all(|&c| c >= 0)
}

pub fn langlands_dual(rs: &RootSystem) -> RootSystem {
    rs.langlands_dual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn rat(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| q(c, 1)).collect()
    }

    #[test]
    fn small_types_have_expected_counts_and_exponents() {
        let a1 = build_root_system("A1").unwrap();
        assert_eq!(a1.positive_roots().len(), 1);
        assert_eq!(a1.exponents(), &[1]);
        let a2 = build_root_system("A2").unwrap();
        assert_eq!(a2.positive_roots(), &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(a2.exponents(), &[1, 2]);
        let g2 = build_root_system("G2").unwrap();
        assert_eq!(g2.positive_roots().len(), 6);
        assert_eq!(g2.exponents(), &[1, 5]);
        assert_eq!(g2.highest_root(), &[3, 2]);
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(matches!(build_root_system("Z3"), Err(Error::UnknownType(_))));
        assert!(matches!(build_root_system("D3"), Err(Error::UnknownType(_))));
        assert!(matches!(build_root_system("G3"), Err(Error::UnknownType(_))));
        assert!(matches!(build_root_system("A5"), Err(Error::RankAboveCap { .. })));
        assert!(build_root_system_with_cap("E6", 6).is_ok());
    }

    #[test]
    fn duality() {
        let b2 = build_root_system("B2").unwrap();
        let c2 = build_root_system("C2").unwrap();
        assert_eq!(b2.langlands_dual(), c2);
        assert_eq!(b2.langlands_dual().label(), "C2");
        let a1 = build_root_system("A1").unwrap();
        assert_eq!(a1.langlands_dual(), a1);
        let g2 = build_root_system("G2").unwrap();
        assert_eq!(g2.langlands_dual().langlands_dual(), g2);
        assert_eq!(g2.langlands_dual().positive_roots(), g2.positive_coroots());
    }

    #[test]
    fn pairings() {
        let a1 = build_root_system("A1").unwrap();
        for m in 0..5 {
            let lr = Weight(vec![m + 1]);
            assert_eq!(a1.pair_coroot(&[1], &lr).unwrap(), m + 1);
        }
        let b3 = build_root_system("B3").unwrap();
        for c in b3.positive_coroots() {
            assert_eq!(b3.pair_coroot(c, b3.rho()).unwrap(), RootSystem::height(c));
        }
        for i in 0..3 {
            let mut e = vec![0; 3];
            e[i] = 1;
            assert_eq!(b3.pair_root(&e, b3.rho_check()).unwrap(), 1);
        }
        assert!(matches!(b3.pair_root(&[1, 0], b3.rho_check()), Err(Error::Mismatch { .. })));
    }

    #[test]
    fn dominance() {
        assert!(Weight::zero(3).is_dominant_integral());
        assert!(!Weight(vec![1, -1]).is_dominant_integral());
        assert!(Weight(vec![3]).is_dominant_integral());
    }

    #[test]
    fn harish_chandra_sl2() {
        let a1 = build_root_system("A1").unwrap();
        assert!(a1.harish_chandra_equal(&rat(&[-1]), &rat(&[1])).unwrap());
        assert!(!a1.harish_chandra_equal(&rat(&[-1]), &rat(&[2])).unwrap());
        let a2 = build_root_system("A2").unwrap();
        let mu = vec![q(1, 2), q(-3, 1)];
        for i in 0..2 {
            let s = a2.reflect(&mu, i, Lattice::Weights);
            assert!(a2.harish_chandra_equal(&mu, &s).unwrap());
        }
        assert_eq!(a2.weyl_orbit(&rat(&[1, 1]), Lattice::Weights).unwrap().len(), 6);
    }

    #[test]
    fn coroots_of_roots_are_the_dual_positive_roots() {
        for label in ["A3", "B3", "C3", "D4", "G2", "F4"] {
            let rs = build_root_system(label).unwrap();
            let mut cor: Vec<Vec<i64>> = rs.positive_roots().iter().map(|r| rs.coroot_of(r)).collect();
            sort_roots(&mut cor);
            assert_eq!(cor, rs.positive_coroots(), "{label}");
        }
    }
}
