//! Free generating sets for the principal congruence subgroup
//! `Γ₂(p) ⊂ SL2(Z)`, p an odd prime.
//!
//! `PSL2(Z) = <s, u | s² = u³ = 1>` with `s` the image of
//! `S = [[0,-1],[1,0]]` and `u` the image of `U = ST`. For odd p the
//! congruence subgroup is torsion-free and maps isomorphically onto the
//! kernel of `PSL2(Z) -> PSL2(F_p)`, so a free basis can be extracted
//! from the Schreier graph of the coset action:
//!
//! 1. enumerate `PSL2(F_p)` by BFS under right multiplication by
//!    `(s, s⁻¹, u, u⁻¹)`, recording a spanning tree and its transversal
//!    lifts in `SL2(Z)`;
//! 2. collect Schreier elements `t_v · x · t_{v·x}⁻¹` for `x ∈ {s, u}`;
//! 3. discard the redundancies forced by the torsion relators: each
//!    s-orbit `{v, vs}` contributes one element (the two Schreier pairs
//!    are mutually inverse), each u-orbit `{v, vu, vu²}` contributes
//!    two (the cyclic product is a conjugate of `u³`), less one for
//!    every spanning-tree edge inside the orbit.
//!
//! The survivor count must equal `1 + (p-1)p(p+1)/12`; a generating set
//! of a free group whose size equals the rank is a free basis, so the
//! count check is the freeness certificate.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::linalg::IntMatrix;
use crate::orders::PrimeLevel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    /// Coset enumeration is only supported for p <= 13 (index <= 1092).
    LevelTooLarge(u64),
    /// The surviving Schreier generator count disagrees with
    /// `1 + (p-1)p(p+1)/12`: an enumeration or lifting bug.
    RankMismatch { expected: usize, got: usize },
    /// A generator failed `det = 1` or the congruence condition.
    InvalidGenerator,
}

impl fmt::Display for CongruenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceError::LevelTooLarge(p) => {
                write!(f, "level {p} too large for coset enumeration (p <= 13)")
            }
            CongruenceError::RankMismatch { expected, got } => {
                write!(
                    f,
                    "rank mismatch: expected {expected} free generators, got {got}"
                )
            }
            CongruenceError::InvalidGenerator => {
                write!(f, "generator is not in the congruence subgroup")
            }
        }
    }
}

/// One letter of the ambient presentation `PSL2(Z) = <s, u | s², u³>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    S,
    SInv,
    U,
    UInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::S => Letter::SInv,
            Letter::SInv => Letter::S,
            Letter::U => Letter::UInv,
            Letter::UInv => Letter::U,
        }
    }

    /// The chosen SL2(Z) lift of the letter.
    pub fn lift(self) -> IntMatrix {
        match self {
            Letter::S => IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]),
            Letter::SInv => IntMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]),
            Letter::U => IntMatrix::from_i64_rows(&[&[0, -1], &[1, 1]]),
            Letter::UInv => IntMatrix::from_i64_rows(&[&[1, 1], &[-1, 0]]),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::S => write!(f, "s"),
            Letter::SInv => write!(f, "s^-1"),
            Letter::U => write!(f, "u"),
            Letter::UInv => write!(f, "u^-1"),
        }
    }
}

/// A word in the ambient generators; provenance of a Schreier generator.
pub type Word = Vec<Letter>;

pub fn word_to_string(w: &Word) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for (i, l) in w.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{l}");
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// A free group of 2x2 integer matrices: the congruence subgroup Γ₂(p)
/// with an explicit free basis and the Schreier word each basis element
/// came from. Every generator has determinant 1 and is ≡ I mod p.
#[derive(Debug, Clone)]
pub struct FreeMatrixGroup {
    pub p: u64,
    pub generators: Vec<IntMatrix>,
    pub rank: usize,
    pub schreier_words: Vec<Word>,
}

impl FreeMatrixGroup {
    /// Validating constructor: determinant, congruence and the rank
    /// formula are all re-checked, so a hand-built (e.g. permuted)
    /// generating set can be certified as well.
    pub fn from_parts(
        p: &PrimeLevel,
        generators: Vec<IntMatrix>,
        schreier_words: Vec<Word>,
    ) -> Result<Self, CongruenceError> {
        let pv = p.get();
        let expected = expected_rank(pv);
        if generators.len() != expected || schreier_words.len() != generators.len() {
            return Err(CongruenceError::RankMismatch {
                expected,
                got: generators.len(),
            });
        }
        let modulus = BigInt::from(pv);
        for g in &generators {
            if !g.is_square() || g.rows() != 2 || !g.det().is_one() {
                return Err(CongruenceError::InvalidGenerator);
            }
            if !is_identity_mod(g, &modulus) {
                return Err(CongruenceError::InvalidGenerator);
            }
        }
        Ok(FreeMatrixGroup {
            p: pv,
            generators,
            rank: expected,
            schreier_words,
        })
    }
}

/// `rank Γ₂(p) = 1 + (p-1)p(p+1)/12`.
pub fn expected_rank(p: u64) -> usize {
    (1 + (p - 1) * p * (p + 1) / 12) as usize
}

/// `|PSL2(F_p)| = p(p²-1)/2`, the index of Γ₂(p).
pub fn psl2_order(p: u64) -> usize {
    (p * (p * p - 1) / 2) as usize
}

fn is_identity_mod(m: &IntMatrix, modulus: &BigInt) -> bool {
    (0..2).all(|r| {
        (0..2).all(|c| {
            let want = if r == c {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            (m.at(r, c) - want).mod_floor(modulus).is_zero()
        })
    })
}

/// Canonical representative of a PSL2(F_p) element: entries reduced mod
/// p with the first nonzero entry in `1..=(p-1)/2`.
fn canonical(mut m: [u64; 4], p: u64) -> [u64; 4] {
    for e in m.iter_mut() {
        *e %= p;
    }
    let lead = m
        .iter()
        .copied()
        .find(|&e| e != 0)
        .expect("nonsingular matrix");
    if lead > (p - 1) / 2 {
        for e in m.iter_mut() {
            if *e != 0 {
                *e = p - *e;
            }
        }
    }
    m
}

fn mul_mod(a: &[u64; 4], b: &[u64; 4], p: u64) -> [u64; 4] {
    [
        (a[0] * b[0] + a[1] * b[2]) % p,
        (a[0] * b[1] + a[1] * b[3]) % p,
        (a[2] * b[0] + a[3] * b[2]) % p,
        (a[2] * b[1] + a[3] * b[3]) % p,
    ]
}

fn letter_mod(l: Letter, p: u64) -> [u64; 4] {
    let m = l.lift();
    let mut out = [0u64; 4];
    for r in 0..2 {
        for c in 0..2 {
            let v = i64::try_from(m.at(r, c).clone()).unwrap();
            out[2 * r + c] = v.rem_euclid(p as i64) as u64;
        }
    }
    out
}

struct CosetTable {
    p: u64,
    /// canonical PSL2(F_p) form of each coset, in BFS order
    keys: Vec<[u64; 4]>,
    /// SL2(Z) lift of the transversal word
    lifts: Vec<IntMatrix>,
    words: Vec<Word>,
    parent: Vec<Option<(usize, Letter)>>,
    index_of: BTreeMap<[u64; 4], usize>,
}

impl CosetTable {
    fn enumerate(p: u64) -> CosetTable {
        let letters = [Letter::S, Letter::SInv, Letter::U, Letter::UInv];
        let letter_keys: Vec<[u64; 4]> = letters.iter().map(|&l| letter_mod(l, p)).collect();
        let identity = canonical([1, 0, 0, 1], p);
        let mut table = CosetTable {
            p,
            keys: vec![identity],
            lifts: vec![IntMatrix::identity(2)],
            words: vec![Vec::new()],
            parent: vec![None],
            index_of: BTreeMap::new(),
        };
        table.index_of.insert(identity, 0);
        let mut head = 0;
        while head < table.keys.len() {
            let current = table.keys[head];
            for (i, &l) in letters.iter().enumerate() {
                let target = canonical(mul_mod(&current, &letter_keys[i], p), p);
                if table.index_of.contains_key(&target) {
                    continue;
                }
                let idx = table.keys.len();
                table.index_of.insert(target, idx);
                table.keys.push(target);
                table.lifts.push(table.lifts[head].mul(&l.lift()));
                let mut w = table.words[head].clone();
                w.push(l);
                table.words.push(w);
                table.parent.push(Some((head, l)));
            }
            head += 1;
        }
        table
    }

    fn step(&self, v: usize, l: Letter) -> usize {
        let target = canonical(
            mul_mod(&self.keys[v], &letter_mod(l, self.p), self.p),
            self.p,
        );
        self.index_of[&target]
    }

    /// Is the (a -> a·l) transition an edge of the spanning tree? For
    /// the involution s both directions and both spellings count.
    fn is_tree_transition(&self, a: usize, b: usize, l: Letter) -> bool {
        let matches = |child: usize, par: usize, want: &[Letter]| {
            self.parent[child].is_some_and(|(pp, pl)| pp == par && want.contains(&pl))
        };
        match l {
            Letter::S => {
                matches(b, a, &[Letter::S, Letter::SInv])
                    || matches(a, b, &[Letter::S, Letter::SInv])
            }
            Letter::U => matches(b, a, &[Letter::U]) || matches(a, b, &[Letter::UInv]),
            _ => unreachable!("transitions are tested with s and u only"),
        }
    }

    /// Schreier element t_a · l · t_b⁻¹ for the transition a -> b = a·l,
    /// lifted to SL2(Z) with the sign making it ≡ I mod p.
    fn schreier_element(&self, a: usize, b: usize, l: Letter) -> (IntMatrix, Word) {
        let raw = self.lifts[a]
            .mul(&l.lift())
            .mul(&self.lifts[b].inverse_unimodular());
        let modulus = BigInt::from(self.p);
        let m = if is_identity_mod(&raw, &modulus) {
            raw
        } else {
            let neg = IntMatrix::from_fn(2, 2, |r, c| -raw.at(r, c).clone());
            debug_assert!(is_identity_mod(&neg, &modulus), "lift is not ±I mod p");
            neg
        };
        let mut word = self.words[a].clone();
        word.push(l);
        word.extend(self.words[b].iter().rev().map(|x| x.inverse()));
        (m, word)
    }
}

/// Free generating set of Γ₂(p) by Schreier's method (see module docs).
pub fn congruence_generators(p: &PrimeLevel) -> Result<FreeMatrixGroup, CongruenceError> {
    let pv = p.get();
    if pv > 13 {
        return Err(CongruenceError::LevelTooLarge(pv));
    }
    let table = CosetTable::enumerate(pv);
    let n = table.keys.len();
    debug_assert_eq!(n, psl2_order(pv), "coset action must be transitive");

    let mut generators = Vec::new();
    let mut words = Vec::new();

    // s-orbits: fixed-point free of size 2; one generator per non-tree pair
    let mut done = vec![false; n];
    for v in 0..n {
        if done[v] {
            continue;
        }
        let w = table.step(v, Letter::S);
        debug_assert_ne!(v, w, "s acts without fixed points on the cosets");
        done[v] = true;
        done[w] = true;
        if !table.is_tree_transition(v, w, Letter::S) {
            let (m, word) = table.schreier_element(v, w, Letter::S);
            generators.push(m);
            words.push(word);
        }
    }

    // u-orbits: 3-cycles; the cyclic Schreier product is t_v u³ t_v⁻¹ = 1,
    // so the last non-tree transition of each orbit is redundant
    let mut done = vec![false; n];
    for v in 0..n {
        if done[v] {
            continue;
        }
        let a = table.step(v, Letter::U);
        let b = table.step(a, Letter::U);
        debug_assert!(v != a && a != b && b != v, "u-orbits have size exactly 3");
        debug_assert_eq!(table.step(b, Letter::U), v);
        done[v] = true;
        done[a] = true;
        done[b] = true;
        let transitions = [(v, a), (a, b), (b, v)];
        let non_tree: Vec<(usize, usize)> = transitions
            .iter()
            .copied()
            .filter(|&(x, y)| !table.is_tree_transition(x, y, Letter::U))
            .collect();
        for &(x, y) in non_tree.iter().take(non_tree.len().saturating_sub(1)) {
            let (m, word) = table.schreier_element(x, y, Letter::U);
            generators.push(m);
            words.push(word);
        }
    }

    let expected = expected_rank(pv);
    if generators.len() != expected {
        return Err(CongruenceError::RankMismatch {
            expected,
            got: generators.len(),
        });
    }
    FreeMatrixGroup::from_parts(p, generators, words)
}

/// The symmetric-square homomorphism `SL2(Z) -> SL3(Z)`,
/// `[[a,b],[c,d]] -> [[a², 2ab, b²], [ac, ad+bc, bd], [c², 2cd, d²]]` —
/// the action on coefficient vectors of binary quadratic forms.
pub fn sym2_hom(a: &IntMatrix) -> Result<IntMatrix, CongruenceError> {
    if a.rows() != 2 || a.cols() != 2 || !a.det().is_one() {
        return Err(CongruenceError::InvalidGenerator);
    }
    let (aa, bb, cc, dd) = (a.at(0, 0), a.at(0, 1), a.at(1, 0), a.at(1, 1));
    let two = BigInt::from(2);
    let rows: [[BigInt; 3]; 3] = [
        [aa * aa, &two * (aa * bb), bb * bb],
        [aa * cc, aa * dd + bb * cc, bb * dd],
        [cc * cc, &two * (cc * dd), dd * dd],
    ];
    Ok(IntMatrix::from_fn(3, 3, |r, c| rows[r][c].clone()))
}
