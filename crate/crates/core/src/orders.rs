//! Orders, indices and double-coset counts in `SL3(F_p)` and `Sp4(F_p)`.
//!
//! The stabilizer orders here are the orders of the images mod p of the
//! INTEGRAL Borel and parabolic subgroups (diagonal entries ±1), not the
//! full algebraic parabolics. That is where the factors 4 and 8 come
//! from: `|B(p)| = 4p^3` rather than `p^3(p-1)^2`. The double-coset
//! counts of the congruence-subgroup action on the building are indices
//! against these integral images.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderError {
    /// The level must be an odd prime.
    NotOddPrime(u64),
    /// An index formula failed to divide exactly (order-formula bug).
    InexactDivision { group: u128, stabilizer: u128 },
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::NotOddPrime(p) => write!(f, "{p} is not an odd prime"),
            OrderError::InexactDivision { group, stabilizer } => {
                write!(
                    f,
                    "stabilizer order {stabilizer} does not divide group order {group}"
                )
            }
        }
    }
}

/// An odd prime level p >= 3, checked by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimeLevel(u64);

impl PrimeLevel {
    pub fn new(p: u64) -> Result<Self, OrderError> {
        if p < 3 || p % 2 == 0 {
            return Err(OrderError::NotOddPrime(p));
        }
        let mut d = 3;
        while d * d <= p {
            if p % d == 0 {
                return Err(OrderError::NotOddPrime(p));
            }
            d += 2;
        }
        Ok(PrimeLevel(p))
    }

    pub fn get(&self) -> u64 {
        self.0
    }
}

impl fmt::Display for PrimeLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Sl3,
    Sp4,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Sl3 => write!(f, "sl3"),
            GroupKind::Sp4 => write!(f, "sp4"),
        }
    }
}

/// Group order, stabilizer orders and the double-coset counts they
/// determine. Entries are position-matched: `indices[i]` is the index of
/// `stabilizer_orders[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetCountReport {
    pub group: GroupKind,
    pub p: u64,
    pub group_order: u128,
    pub stabilizer_orders: Vec<(String, u128)>,
    pub indices: Vec<(String, u128)>,
}

impl CosetCountReport {
    /// index * stabilizer order = group order, for every pair.
    pub fn check(&self) -> Result<(), OrderError> {
        for ((_, stab), (_, idx)) in self.stabilizer_orders.iter().zip(&self.indices) {
            if idx * stab != self.group_order {
                return Err(OrderError::InexactDivision {
                    group: self.group_order,
                    stabilizer: *stab,
                });
            }
        }
        Ok(())
    }
}

pub fn sl3_order(p: &PrimeLevel) -> u128 {
    let p = p.get() as u128;
    p.pow(3) * (p.pow(3) - 1) * (p.pow(2) - 1)
}

/// Orders of the mod-p images of the integral Borel and the two maximal
/// parabolics: `(4p^3, 2p^3(p^2-1), 2p^3(p^2-1))`.
pub fn sl3_stabilizer_orders(p: &PrimeLevel) -> (u128, u128, u128) {
    let p = p.get() as u128;
    let borel = 4 * p.pow(3);
    let parabolic = 2 * p.pow(3) * (p.pow(2) - 1);
    (borel, parabolic, parabolic)
}

pub fn sl3_double_coset_counts(p: &PrimeLevel) -> Result<CosetCountReport, OrderError> {
    let order = sl3_order(p);
    let (b, p1, p2) = sl3_stabilizer_orders(p);
    let report = CosetCountReport {
        group: GroupKind::Sl3,
        p: p.get(),
        group_order: order,
        stabilizer_orders: vec![("B".into(), b), ("P1".into(), p1), ("P2".into(), p2)],
        indices: vec![
            ("I0".into(), exact_index(order, b)?),
            ("I1".into(), exact_index(order, p1)?),
            ("I2".into(), exact_index(order, p2)?),
        ],
    };
    report.check()?;
    Ok(report)
}

pub fn sp4_order(p: &PrimeLevel) -> u128 {
    let p = p.get() as u128;
    p.pow(4) * (p.pow(4) - 1) * (p.pow(2) - 1)
}

/// Orders of the mod-p images of the integral parabolics of `Sp4(Z)`:
/// `(8p^4, 2p^4(p^2-1), 2p^4(p^2-1))` for `(G0, G1, G2)`.
pub fn sp4_stabilizer_orders(p: &PrimeLevel) -> (u128, u128, u128) {
    let p = p.get() as u128;
    let g0 = 8 * p.pow(4);
    let g12 = 2 * p.pow(4) * (p.pow(2) - 1);
    (g0, g12, g12)
}

pub fn sp4_indices(p: &PrimeLevel) -> Result<CosetCountReport, OrderError> {
    let order = sp4_order(p);
    let (g0, g1, g2) = sp4_stabilizer_orders(p);
    let report = CosetCountReport {
        group: GroupKind::Sp4,
        p: p.get(),
        group_order: order,
        stabilizer_orders: vec![("G0".into(), g0), ("G1".into(), g1), ("G2".into(), g2)],
        indices: vec![
            ("j0".into(), exact_index(order, g0)?),
            ("j1".into(), exact_index(order, g1)?),
            ("j2".into(), exact_index(order, g2)?),
        ],
    };
    report.check()?;
    Ok(report)
}

fn exact_index(group: u128, stabilizer: u128) -> Result<u128, OrderError> {
    if stabilizer == 0 || group % stabilizer != 0 {
        return Err(OrderError::InexactDivision { group, stabilizer });
    }
    Ok(group / stabilizer)
}

/// The alternating form on Z^4 defining `Sp4(Z)`: antidiagonal with
/// entries -1, -1, 1, 1 from the top.
pub fn symplectic_form_j() -> IntMatrix {
    IntMatrix::from_i64_rows(&[&[0, 0, 0, -1], &[0, 0, -1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]])
}

/// Is `a` symplectic, i.e. `aᵀ J a = J`?
///
/// The same condition is evaluated a second time through the 2x2 block
/// decomposition `J = [[0, -Q], [Q, 0]]` (with Q read off from J, not
/// hardcoded); the two routes must agree, which cross-checks the block
/// algebra itself.
pub fn symplectic_check(a: &IntMatrix) -> bool {
    assert_eq!(
        (a.rows(), a.cols()),
        (4, 4),
        "symplectic_check expects a 4x4 matrix"
    );
    let j = symplectic_form_j();
    let direct = a.transpose().mul(&j).mul(a) == j;

    let block = |m: &IntMatrix, br: usize, bc: usize| {
        IntMatrix::from_fn(2, 2, |r, c| m.at(2 * br + r, 2 * bc + c).clone())
    };
    let q = block(&j, 1, 0);
    debug_assert!(block(&j, 0, 0).is_zero() && block(&j, 1, 1).is_zero());
    debug_assert_eq!(block(&j, 0, 1), IntMatrix::zeros(2, 2).sub(&q));

    let (a1, a2, a3, a4) = (
        block(a, 0, 0),
        block(a, 0, 1),
        block(a, 1, 0),
        block(a, 1, 1),
    );
    let zero = IntMatrix::zeros(2, 2);
    let neg_q = zero.sub(&q);
    let c1 = a3
        .transpose()
        .mul(&q)
        .mul(&a1)
        .sub(&a1.transpose().mul(&q).mul(&a3))
        == zero;
    let c2 = a3
        .transpose()
        .mul(&q)
        .mul(&a2)
        .sub(&a1.transpose().mul(&q).mul(&a4))
        == neg_q;
    let c3 = a4
        .transpose()
        .mul(&q)
        .mul(&a1)
        .sub(&a2.transpose().mul(&q).mul(&a3))
        == q;
    let c4 = a4
        .transpose()
        .mul(&q)
        .mul(&a2)
        .sub(&a2.transpose().mul(&q).mul(&a4))
        == zero;
    let blockwise = c1 && c2 && c3 && c4;

    assert_eq!(direct, blockwise, "block conditions disagree with aᵀJa = J");
    direct
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> PrimeLevel {
        PrimeLevel::new(v).unwrap()
    }

    #[test]
    fn prime_level_validation() {
        assert!(PrimeLevel::new(2).is_err());
        assert!(PrimeLevel::new(4).is_err());
        assert!(PrimeLevel::new(9).is_err());
        assert!(PrimeLevel::new(1).is_err());
        assert!(PrimeLevel::new(13).is_ok());
        assert!(PrimeLevel::new(47).is_ok());
    }

    #[test]
    fn sl3_orders_and_indices() {
        assert_eq!(sl3_order(&p(3)), 5616);
        assert_eq!(sl3_order(&p(5)), 372000);
        assert_eq!(sl3_stabilizer_orders(&p(3)), (108, 432, 432));
        assert_eq!(sl3_stabilizer_orders(&p(5)), (500, 6000, 6000));

        let r3 = sl3_double_coset_counts(&p(3)).unwrap();
        assert_eq!(r3.indices[0], ("I0".into(), 52));
        assert_eq!(r3.indices[1], ("I1".into(), 13));
        assert_eq!(r3.indices[2], ("I2".into(), 13));

        let r5 = sl3_double_coset_counts(&p(5)).unwrap();
        assert_eq!(r5.indices[0].1, 744);
        assert_eq!(r5.indices[1].1, 62);
    }

    #[test]
    fn sp4_orders_and_indices() {
        assert_eq!(sp4_order(&p(3)), 51840);
        let r3 = sp4_indices(&p(3)).unwrap();
        assert_eq!(r3.indices[0].1, 80);
        assert_eq!(r3.indices[1].1, 40);
        assert_eq!(r3.indices[2].1, 40);
        let r5 = sp4_indices(&p(5)).unwrap();
        assert_eq!(r5.indices[0].1, 1872);
        assert_eq!(r5.indices[1].1, 312);
    }

    #[test]
    fn index_identities_up_to_50() {
        let mut q = 3;
        while q <= 50 {
            if let Ok(level) = PrimeLevel::new(q) {
                sl3_double_coset_counts(&level).unwrap().check().unwrap();
                sp4_indices(&level).unwrap().check().unwrap();
                // closed forms from the order formulas
                let pp = q as u128;
                let r = sl3_double_coset_counts(&level).unwrap();
                assert_eq!(r.indices[0].1, (pp.pow(3) - 1) * (pp.pow(2) - 1) / 4);
                assert_eq!(r.indices[1].1, (pp.pow(3) - 1) / 2);
                let s = sp4_indices(&level).unwrap();
                assert_eq!(s.indices[0].1, (pp.pow(4) - 1) * (pp.pow(2) - 1) / 8);
                assert_eq!(s.indices[1].1, (pp.pow(4) - 1) / 2);
            }
            q += 2;
        }
    }

    /// Enumeration oracle: count all 3x3 matrices over F_3 with det 1.
    #[test]
    fn sl3_f3_order_by_enumeration() {
        let p = 3i64;
        let mut count = 0u128;
        let n = p.pow(9);
        for code in 0..n {
            let mut m = [0i64; 9];
            let mut c = code;
            for d in m.iter_mut() {
                *d = c % p;
                c /= p;
            }
            let det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6]);
            if det.rem_euclid(p) == 1 {
                count += 1;
            }
        }
        assert_eq!(count, sl3_order(&PrimeLevel::new(3).unwrap()));
    }

    /// Enumeration oracle for the integral Borel image: upper-triangular
    /// matrices over F_3 with diagonal entries ±1 and det 1.
    #[test]
    fn borel_image_order_by_enumeration() {
        let p = 3u64;
        let mut count = 0u64;
        for d0 in [1, p - 1] {
            for d1 in [1, p - 1] {
                for d2 in [1, p - 1] {
                    if d0 * d1 % p * d2 % p == 1 {
                        count += p.pow(3); // free strictly-upper entries
                    }
                }
            }
        }
        assert_eq!(
            count as u128,
            sl3_stabilizer_orders(&PrimeLevel::new(3).unwrap()).0
        );
    }

    /// Enumeration oracle for |Sp4(F_3)|: build matrices column by column
    /// with pairing constraints, pruning as soon as a constraint fails.
    #[test]
    fn sp4_f3_order_by_enumeration() {
        let p = 3i64;
        let n = (p.pow(4)) as usize; // 81 vectors in F_3^4
        let decode = |v: usize| {
            let mut out = [0i64; 4];
            let mut c = v as i64;
            for o in out.iter_mut() {
                *o = c % p;
                c /= p;
            }
            out
        };
        // pairing table <u, w> = uᵀ J w mod p
        let j = symplectic_form_j();
        let mut pair = alloc::vec![alloc::vec![0i64; n]; n];
        for u in 0..n {
            let uu = decode(u);
            for w in 0..n {
                let ww = decode(w);
                let mut s = 0i64;
                for r in 0..4 {
                    for c in 0..4 {
                        let jrc = i64::try_from(j.at(r, c).clone()).unwrap();
                        s += uu[r] * jrc * ww[c];
                    }
                }
                pair[u][w] = s.rem_euclid(p);
            }
        }
        // target Gram values J[i][k] mod p
        let tgt = |i: usize, k: usize| {
            i64::try_from(symplectic_form_j().at(i, k).clone())
                .unwrap()
                .rem_euclid(p)
        };
        let mut count = 0u128;
        for c0 in 0..n {
            for c1 in 0..n {
                if pair[c0][c1] != tgt(0, 1) {
                    continue;
                }
                for c2 in 0..n {
                    if pair[c0][c2] != tgt(0, 2) || pair[c1][c2] != tgt(1, 2) {
                        continue;
                    }
                    for c3 in 0..n {
                        if pair[c0][c3] == tgt(0, 3)
                            && pair[c1][c3] == tgt(1, 3)
                            && pair[c2][c3] == tgt(2, 3)
                        {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count, sp4_order(&PrimeLevel::new(3).unwrap()));
    }

    #[test]
    fn symplectic_check_examples() {
        assert!(symplectic_check(&IntMatrix::identity(4)));
        // J itself: JᵀJJ = -Jᵀ = J since J² = -I and J is antisymmetric
        assert!(symplectic_check(&symplectic_form_j()));
        let d =
            IntMatrix::from_i64_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 2]]);
        assert!(!symplectic_check(&d));
    }
}
