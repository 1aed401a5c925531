//! Finite subgroups of GL2(F_l) for l in {2, 3, 5, 7}, stored as explicit element sets.

mod appendix;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not found: {0}")]
    NotFound(String),
}

pub const SUPPORTED_PRIMES: [u8; 4] = [2, 3, 5, 7];

fn check_ell(ell: u8) -> Result<(), GaloisError> {
    if SUPPORTED_PRIMES.contains(&ell) {
        Ok(())
    } else {
        Err(GaloisError::InvalidArgument(format!("l = {ell} is not one of 2, 3, 5, 7")))
    }
}

/// Order of GL2(F_l).
pub fn gl2_order(ell: u8) -> usize {
    let l = ell as usize;
    (l * l - 1) * (l * l - l)
}

/// Invertible 2x2 matrix mod l, entries `[a, b, c, d]` for `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MatGL2 {
    pub ell: u8,
    pub entries: [u8; 4],
}

impl MatGL2 {
    pub fn new(ell: u8, rows: [[i64; 2]; 2]) -> Result<Self, GaloisError> {
        check_ell(ell)?;
        let r = |v: i64| v.rem_euclid(ell as i64) as u8;
        let m = MatGL2 { ell, entries: [r(rows[0][0]), r(rows[0][1]), r(rows[1][0]), r(rows[1][1])] };
        if m.det() == 0 {
            return Err(GaloisError::InvalidArgument(format!("{m} is singular mod {ell}")));
        }
        Ok(m)
    }

    pub fn from_entries(ell: u8, e: [u8; 4]) -> Result<Self, GaloisError> {
        let i = |k: usize| e[k] as i64;
        Self::new(ell, [[i(0), i(1)], [i(2), i(3)]])
    }

    pub fn identity(ell: u8) -> Self {
        MatGL2 { ell, entries: [1, 0, 0, 1] }
    }

    pub fn diag(ell: u8, a: i64, d: i64) -> Result<Self, GaloisError> {
        Self::new(ell, [[a, 0], [0, d]])
    }

    fn l(&self) -> u32 {
        self.ell as u32
    }

    pub fn det(&self) -> u8 {
        let [a, b, c, d] = self.entries.map(u32::from);
        let l = self.l();
        ((a * d + l * l - (b * c) % (l * l)) % l) as u8
    }

    pub fn mul(&self, o: &MatGL2) -> MatGL2 {
        debug_assert_eq!(self.ell, o.ell);
        let [a, b, c, d] = self.entries.map(u32::from);
        let [e, f, g, h] = o.entries.map(u32::from);
        let l = self.l();
        MatGL2 {
            ell: self.ell,
            entries: [
                ((a * e + b * g) % l) as u8,
                ((a * f + b * h) % l) as u8,
                ((c * e + d * g) % l) as u8,
                ((c * f + d * h) % l) as u8,
            ],
        }
    }

    pub fn inv(&self) -> MatGL2 {
        let l = self.l();
        let det = self.det() as u32;
        let di = (1..l).find(|k| (k * det) % l == 1).expect("invertible");
        let [a, b, c, d] = self.entries.map(u32::from);
        let s = |v: u32| ((v * di) % l) as u8;
        MatGL2 { ell: self.ell, entries: [s(d), s((l - b) % l), s((l - c) % l), s(a)] }
    }

    pub fn pow(&self, k: u64) -> MatGL2 {
        let mut acc = MatGL2::identity(self.ell);
        let mut base = *self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.entries == [1, 0, 0, 1]
    }

    pub fn order(&self) -> usize {
        let mut m = *self;
        let mut n = 1;
        while !m.is_identity() {
            m = m.mul(self);
            n += 1;
        }
        n
    }

    /// g * self * g^-1
    pub fn conjugate_by(&self, g: &MatGL2) -> MatGL2 {
        g.mul(self).mul(&g.inv())
    }

    pub fn apply(&self, v: &GF2Vector) -> GF2Vector {
        let [a, b, c, d] = self.entries.map(u32::from);
        let (x, y) = (v.x as u32, v.y as u32);
        let l = self.l();
        GF2Vector { ell: self.ell, x: ((a * x + b * y) % l) as u8, y: ((c * x + d * y) % l) as u8 }
    }

    pub fn fixes(&self, v: &GF2Vector) -> bool {
        self.apply(v) == *v
    }
}

impl fmt::Display for MatGL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// Column vector (x, y) in F_l^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GF2Vector {
    pub ell: u8,
    pub x: u8,
    pub y: u8,
}

impl GF2Vector {
    pub fn new(ell: u8, x: i64, y: i64) -> Self {
        let l = ell as i64;
        GF2Vector { ell, x: x.rem_euclid(l) as u8, y: y.rem_euclid(l) as u8 }
    }

    pub fn nonzero(ell: u8) -> impl Iterator<Item = GF2Vector> {
        (0..ell).flat_map(move |x| (0..ell).map(move |y| GF2Vector { ell, x, y })).filter(|v| v.x != 0 || v.y != 0)
    }
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupGL2 {
    pub ell: u8,
    /// Sorted, no duplicates.
    pub elements: Vec<MatGL2>,
    pub generators: Vec<MatGL2>,
    pub label: Option<String>,
}

impl PartialEq for SubgroupGL2 {
    fn eq(&self, o: &Self) -> bool {
        self.ell == o.ell && self.elements == o.elements
    }
}
impl Eq for SubgroupGL2 {}

impl SubgroupGL2 {
    fn from_set(ell: u8, set: BTreeSet<MatGL2>, generators: Vec<MatGL2>) -> Self {
        SubgroupGL2 { ell, elements: set.into_iter().collect(), generators, label: None }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &MatGL2) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn is_subset_of(&self, o: &SubgroupGL2) -> bool {
        self.elements.iter().all(|m| o.contains(m))
    }

    /// g G g^-1
    pub fn conjugate_by(&self, g: &MatGL2) -> SubgroupGL2 {
        let set: BTreeSet<_> = self.elements.iter().map(|m| m.conjugate_by(g)).collect();
        let gens = self.generators.iter().map(|m| m.conjugate_by(g)).collect();
        SubgroupGL2::from_set(self.ell, set, gens)
    }

    /// Elements satisfying `pred`, assumed to form a subgroup.
    fn filter_subgroup(&self, pred: impl Fn(&MatGL2) -> bool) -> SubgroupGL2 {
        let set: BTreeSet<_> = self.elements.iter().copied().filter(|m| pred(m)).collect();
        SubgroupGL2::from_set(self.ell, set, Vec::new())
    }

    pub fn is_closed(&self) -> bool {
        self.contains(&MatGL2::identity(self.ell))
            && self
                .elements
                .iter()
                .all(|a| self.contains(&a.inv()) && self.elements.iter().all(|b| self.contains(&a.mul(b))))
    }
}

impl fmt::Display for SubgroupGL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l} (order {})", self.order()),
            None => write!(f, "subgroup of order {}", self.order()),
        }
    }
}

/// Closure of `gens` under multiplication.
pub fn generate(ell: u8, gens: &[MatGL2]) -> Result<SubgroupGL2, GaloisError> {
    check_ell(ell)?;
    for g in gens {
        if g.ell != ell {
            return Err(GaloisError::InvalidArgument(format!("generator {g} lives mod {}, not mod {ell}", g.ell)));
        }
        if g.det() == 0 {
            return Err(GaloisError::InvalidArgument(format!("generator {g} is singular")));
        }
    }
    let id = MatGL2::identity(ell);
    let mut set = BTreeSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let n = m.mul(g);
            if set.insert(n) {
                queue.push_back(n);
            }
        }
    }
    Ok(SubgroupGL2::from_set(ell, set, gens.to_vec()))
}

fn generate_rows(ell: u8, gens: &[[[i64; 2]; 2]]) -> Result<SubgroupGL2, GaloisError> {
    let gens = gens.iter().map(|r| MatGL2::new(ell, *r)).collect::<Result<Vec<_>, _>>()?;
    generate(ell, &gens)
}

pub fn gl2(ell: u8) -> Result<SubgroupGL2, GaloisError> {
    check_ell(ell)?;
    let mut set = BTreeSet::new();
    for a in 0..ell {
        for b in 0..ell {
            for c in 0..ell {
                for d in 0..ell {
                    let m = MatGL2 { ell, entries: [a, b, c, d] };
                    if m.det() != 0 {
                        set.insert(m);
                    }
                }
            }
        }
    }
    Ok(SubgroupGL2::from_set(ell, set, Vec::new()).with_label("GL2"))
}

pub fn sl2(ell: u8) -> Result<SubgroupGL2, GaloisError> {
    Ok(gl2(ell)?.filter_subgroup(|m| m.det() == 1).with_label("SL2"))
}

pub fn sl2_membership(g: &SubgroupGL2) -> bool {
    g.elements.iter().all(|m| m.det() == 1)
}

pub fn fixed_vectors(g: &SubgroupGL2) -> BTreeSet<GF2Vector> {
    GF2Vector::nonzero(g.ell).filter(|v| g.elements.iter().all(|m| m.fixes(v))).collect()
}

/// Elements of `g` fixing `v`.
pub fn vector_stabilizer(g: &SubgroupGL2, v: &GF2Vector) -> SubgroupGL2 {
    g.filter_subgroup(|m| m.fixes(v))
}

/// All index-2 subgroups, as kernels of the nonzero functionals on G / G^2.
/// G^2 (generated by squares) contains every commutator, so the quotient is elementary abelian.
pub fn index2_subgroups(g: &SubgroupGL2) -> Vec<SubgroupGL2> {
    let squares: Vec<MatGL2> = g.elements.iter().map(|m| m.mul(m)).collect();
    let sq = generate(g.ell, &squares).expect("squares are invertible");
    let mut coset: HashMap<MatGL2, u32> = sq.elements.iter().map(|m| (*m, 0)).collect();
    let mut rank = 0u32;
    for m in &g.elements {
        if coset.contains_key(m) {
            continue;
        }
        let current: Vec<(MatGL2, u32)> = coset.iter().map(|(k, v)| (*k, *v)).collect();
        for (h, bits) in current {
            coset.insert(m.mul(&h), bits | (1 << rank));
        }
        rank += 1;
    }
    debug_assert_eq!(coset.len(), g.order());
    let mut out = Vec::new();
    for phi in 1u32..(1 << rank) {
        let set: BTreeSet<MatGL2> =
            coset.iter().filter(|(_, bits)| (*bits & phi).count_ones() % 2 == 0).map(|(m, _)| *m).collect();
        out.push(SubgroupGL2::from_set(g.ell, set, Vec::new()));
    }
    out.sort_by(|a, b| a.elements.cmp(&b.elements));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthCase {
    pub subgroup: SubgroupGL2,
    pub new_fixed: Vec<GF2Vector>,
    pub in_sl2: bool,
}

/// Index-2 subgroups H of G with strictly more fixed vectors than G.
pub fn quadratic_growth_analysis(g: &SubgroupGL2) -> Vec<GrowthCase> {
    let base = fixed_vectors(g);
    index2_subgroups(g)
        .into_iter()
        .filter_map(|h| {
            let fixed = fixed_vectors(&h);
            if fixed.len() > base.len() {
                let new_fixed = fixed.difference(&base).copied().collect();
                let in_sl2 = sl2_membership(&h);
                Some(GrowthCase { subgroup: h, new_fixed, in_sl2 })
            } else {
                None
            }
        })
        .collect()
}

/// Some g in `ambient` with g A g^-1 = B.
pub fn conjugate_in(a: &SubgroupGL2, b: &SubgroupGL2, ambient: &SubgroupGL2) -> Option<MatGL2> {
    if a.ell != b.ell || a.order() != b.order() {
        return None;
    }
    ambient.elements.iter().copied().find(|g| a.elements.iter().all(|m| b.contains(&m.conjugate_by(g))))
}

/// Some g in GL2 with g A g^-1 contained in B.
pub fn conjugate_into(a: &SubgroupGL2, b: &SubgroupGL2) -> Option<MatGL2> {
    let ambient = gl2(a.ell).ok()?;
    ambient.elements.iter().copied().find(|g| a.elements.iter().all(|m| b.contains(&m.conjugate_by(g))))
}

/// Distinct cyclic subgroups of `g` of order `n`.
pub fn cyclic_subgroups(g: &SubgroupGL2, n: usize) -> Vec<SubgroupGL2> {
    let mut seen: Vec<SubgroupGL2> = Vec::new();
    for m in &g.elements {
        if m.order() != n {
            continue;
        }
        let c = generate(g.ell, &[*m]).expect("element of a group");
        if !seen.contains(&c) {
            seen.push(c);
        }
    }
    seen
}

/// A subgroup of G conjugate in GL2 to H1 = {diag(a, 1)}.
pub fn contains_split_torus_conjugate(g: &SubgroupGL2, ell: u8) -> Option<SubgroupGL2> {
    if g.ell != ell || !(ell == 5 || ell == 7) {
        return None;
    }
    let h1 = named_subgroup(ell, "H1").ok()?;
    let ambient = gl2(ell).ok()?;
    cyclic_subgroups(g, ell as usize - 1).into_iter().find(|c| conjugate_in(c, &h1, &ambient).is_some())
}

/// Least positive quadratic non-residue mod l (l odd).
pub fn least_nonresidue(ell: u8) -> u8 {
    let l = ell as u32;
    (2..l).find(|e| (1..l).all(|x| (x * x) % l != *e)).unwrap_or(0) as u8
}

/// {[[a, b eps], [b, a]]} minus the zero matrix.
pub fn nonsplit_cartan(ell: u8, eps: u8) -> Result<SubgroupGL2, GaloisError> {
    check_ell(ell)?;
    let l = ell as u32;
    if ell == 2 || (1..l).any(|x| (x * x) % l == eps as u32 % l) || eps as u32 % l == 0 {
        return Err(GaloisError::InvalidArgument(format!("eps = {eps} is not a non-residue mod {ell}")));
    }
    let set: BTreeSet<MatGL2> = (0..ell)
        .flat_map(|a| (0..ell).map(move |b| (a, b)))
        .filter(|&(a, b)| a != 0 || b != 0)
        .map(|(a, b)| MatGL2 { ell, entries: [a, ((b as u32 * eps as u32) % l) as u8, b, a] })
        .collect();
    Ok(SubgroupGL2::from_set(ell, set, Vec::new()).with_label("nonsplit_cartan"))
}

/// Names accepted by [`named_subgroup`] for a given l.
pub fn catalog(ell: u8) -> &'static [&'static str] {
    match ell {
        2 => &["G1", "G2", "G3", "G4"],
        3 => &[
            "GL2", "SL2", "B", "N_ns", "Q8", "N_s", "C_ns", "C6", "H31", "H32", "C4", "C_s", "C3", "H11", "minus_id",
            "id",
        ],
        5 => &["GL2", "SL2", "5Cs.1.3", "5Cs.4.1", "5B.1.4", "5B.4.1", "H1", "H2", "H3", "nonsplit_cartan"],
        7 => &["GL2", "SL2", "7B.1.6", "7B.6.1", "H1", "H2", "H3", "nonsplit_cartan"],
        _ => &[],
    }
}

pub fn named_subgroup(ell: u8, name: &str) -> Result<SubgroupGL2, GaloisError> {
    check_ell(ell)?;
    let g = match (ell, name) {
        (_, "GL2") => gl2(ell)?,
        (_, "SL2") => sl2(ell)?,
        (2, "G1") => generate(2, &[])?,
        (2, "G2") => generate_rows(2, &[[[1, 1], [0, 1]]])?,
        (2, "G3") => generate_rows(2, &[[[1, 1], [1, 0]]])?,
        (2, "G4") => gl2(2)?,
        (3, "B") => gl2(3)?.filter_subgroup(|m| m.entries[2] == 0),
        (3, "N_ns") => generate_rows(3, &[[[1, -1], [1, 1]], [[1, 0], [0, -1]]])?,
        (3, "Q8") => generate_rows(3, &[[[0, 1], [-1, 0]], [[1, 1], [1, -1]]])?,
        (3, "N_s") => gl2(3)?.filter_subgroup(|m| {
            let [a, b, c, d] = m.entries;
            (b == 0 && c == 0) || (a == 0 && d == 0)
        }),
        (3, "C_ns") => generate_rows(3, &[[[1, -1], [1, 1]]])?,
        (3, "C6") => generate_rows(3, &[[[-1, -1], [0, -1]]])?,
        (3, "H31") => gl2(3)?.filter_subgroup(|m| m.entries[0] == 1 && m.entries[2] == 0),
        (3, "H32") => gl2(3)?.filter_subgroup(|m| m.entries[2] == 0 && m.entries[3] == 1),
        (3, "C4") => generate_rows(3, &[[[0, 1], [-1, 0]]])?,
        (3, "C_s") => gl2(3)?.filter_subgroup(|m| m.entries[1] == 0 && m.entries[2] == 0),
        (3, "C3") => generate_rows(3, &[[[1, 1], [0, 1]]])?,
        (3, "H11") => gl2(3)?.filter_subgroup(|m| m.entries[..3] == [1, 0, 0]),
        (3, "minus_id") => generate_rows(3, &[[[-1, 0], [0, -1]]])?,
        (3, "id") => generate(3, &[])?,
        (5, "5Cs.1.3") => generate_rows(5, &[[[3, 0], [0, 4]]])?,
        (5, "5Cs.4.1") => generate_rows(5, &[[[4, 0], [0, 4]], [[1, 0], [0, 2]]])?,
        (5, "5B.1.4") => generate_rows(5, &[[[4, 0], [0, 3]], [[1, 1], [0, 1]]])?,
        (5, "5B.4.1") => generate_rows(5, &[[[4, 0], [0, 4]], [[1, 0], [0, 2]], [[1, 1], [0, 1]]])?,
        (7, "7B.1.6") => generate_rows(7, &[[[6, 0], [0, 4]], [[1, 1], [0, 1]]])?,
        (7, "7B.6.1") => generate_rows(7, &[[[6, 0], [0, 6]], [[1, 0], [0, 3]], [[1, 1], [0, 1]]])?,
        (5 | 7, "H1") => gl2(ell)?.filter_subgroup(|m| m.entries[1..] == [0, 0, 1]),
        (5 | 7, "H2") => gl2(ell)?.filter_subgroup(|m| m.entries[0] == 1 && m.entries[2..] == [0, 1]),
        (5 | 7, "H3") => gl2(ell)?.filter_subgroup(|m| m.entries[2..] == [0, 1]),
        (3 | 5 | 7, "nonsplit_cartan") => nonsplit_cartan(ell, least_nonresidue(ell))?,
        _ => return Err(GaloisError::NotFound(format!("no catalogued subgroup {name:?} over F_{ell}"))),
    };
    Ok(g.with_label(name))
}

/// Element list of a Borel-type group exactly as tabulated.
pub fn appendix_elements(label: &str) -> Result<Vec<MatGL2>, GaloisError> {
    let (ell, raw): (u8, &[[u8; 4]]) = match label {
        "5B.1.4" => (5, &appendix::G5B_1_4),
        "5B.4.1" => (5, &appendix::G5B_4_1),
        "7B.1.6" => (7, &appendix::G7B_1_6),
        "7B.6.1" => (7, &appendix::G7B_6_1),
        _ => return Err(GaloisError::NotFound(format!("no tabulated group {label:?}"))),
    };
    raw.iter().map(|e| MatGL2::from_entries(ell, *e)).collect()
}

pub const APPENDIX_LABELS: [&str; 4] = ["5B.1.4", "5B.4.1", "7B.1.6", "7B.6.1"];

/// Inclusions (smaller, larger, dotted) of the lattice of subgroups of GL2(F_3), up to conjugacy.
/// Dotted edges are those whose larger group lies in SL2.
pub const F3_LATTICE_EDGES: [(&str, &str, bool); 26] = [
    ("SL2", "GL2", false),
    ("N_ns", "GL2", false),
    ("B", "GL2", false),
    ("Q8", "SL2", true),
    ("Q8", "N_ns", false),
    ("N_s", "N_ns", false),
    ("C_ns", "N_ns", false),
    ("C6", "SL2", true),
    ("C6", "B", false),
    ("H31", "B", false),
    ("H32", "B", false),
    ("C4", "Q8", true),
    ("C4", "N_s", false),
    ("C4", "C_ns", false),
    ("C_s", "B", false),
    ("C_s", "N_s", false),
    ("C3", "C6", true),
    ("H11", "H31", false),
    ("H11", "H32", false),
    ("H11", "C_s", false),
    ("minus_id", "C6", true),
    ("minus_id", "C4", true),
    ("minus_id", "C_s", false),
    ("id", "C3", true),
    ("id", "H11", false),
    ("id", "minus_id", true),
];
