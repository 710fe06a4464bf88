//! Partitions, Frobenius coordinates, symmetric group characters (by the
//! Murnaghan-Nakayama rule and by enumerating filled structures), the finite
//! z-measures and the index sets Phi_{n,d}.

use crate::error::{Error, Result};
use crate::scalar::{int, Field};
use crate::Complex;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashMap;

pub const MAX_PARTITION_SIZE: usize = 60;
pub const MAX_STRUCTURE_CHAR_SIZE: usize = 14;
pub const MAX_STRUCTURE_BLOCKS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidCoords(format!("parts {parts:?} are not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width).map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32).collect();
        Partition { parts }
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FrobeniusCoords {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

impl FrobeniusCoords {
    pub fn rank(&self) -> usize {
        self.p.len()
    }
}

/// All partitions of n in reverse lexicographic order.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    if n > MAX_PARTITION_SIZE {
        return Err(Error::SizeGuard { what: format!("partition size {n}"), limit: MAX_PARTITION_SIZE });
    }
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n as u32, n as u32, &mut Vec::new(), &mut out);
    Ok(out)
}

pub fn frobenius(lambda: &Partition) -> FrobeniusCoords {
    let conj = lambda.conjugate();
    let mut p = Vec::new();
    let mut q = Vec::new();
    for (i, &row) in lambda.parts.iter().enumerate() {
        if row as usize > i {
            p.push(row - i as u32 - 1);
            q.push(conj.parts[i] - i as u32 - 1);
        } else {
            break;
        }
    }
    FrobeniusCoords { p, q }
}

pub fn from_frobenius(f: &FrobeniusCoords) -> Result<Partition> {
    let d = f.p.len();
    let strict = |v: &[u32]| v.windows(2).all(|w| w[0] > w[1]);
    if f.q.len() != d || !strict(&f.p) || !strict(&f.q) {
        return Err(Error::InvalidCoords(format!("{f:?}")));
    }
    // rows i < d have length p_i + i + 1; below the diagonal block, row r has
    // #{j : q_j + j >= r} boxes
    let mut parts: Vec<u32> = (0..d).map(|i| f.p[i] + i as u32 + 1).collect();
    let depth = f.q.first().map(|&q| q as usize + 1).unwrap_or(0);
    for r in d..depth {
        let len = (0..d).filter(|&j| f.q[j] as usize + j >= r).count() as u32;
        parts.push(len);
    }
    Partition::new(parts)
}

/// Number of standard Young tableaux, by the hook length formula.
pub fn dim(lambda: &Partition) -> Result<BigUint> {
    let n = lambda.size();
    if n > MAX_PARTITION_SIZE {
        return Err(Error::SizeGuard { what: format!("partition size {n}"), limit: MAX_PARTITION_SIZE });
    }
    let conj = lambda.conjugate();
    let mut num = BigUint::one();
    for k in 2..=n {
        num *= k;
    }
    let mut den = BigUint::one();
    for (i, &row) in lambda.parts.iter().enumerate() {
        for j in 0..row as usize {
            let hook = row as usize - j + conj.parts[j] as usize - i - 1;
            den *= hook;
        }
    }
    Ok(num / den)
}

/// chi^lambda at the class of cycle type rho, by stripping rim hooks of
/// lengths rho_k, rho_{k-1}, ... from beta-sets.
pub fn mn_character(lambda: &Partition, rho: &[u32]) -> Result<BigInt> {
    let total: usize = rho.iter().map(|&r| r as usize).sum();
    if total != lambda.size() {
        return Err(Error::SizeMismatch(format!("|lambda| = {} but sum(rho) = {total}", lambda.size())));
    }
    let mut memo = HashMap::new();
    Ok(mn_rec(&lambda.parts, rho, &mut memo))
}

fn mn_rec(parts: &[u32], rho: &[u32], memo: &mut HashMap<(Vec<u32>, usize), BigInt>) -> BigInt {
    if rho.is_empty() {
        return if parts.is_empty() { BigInt::one() } else { BigInt::zero() };
    }
    let key = (parts.to_vec(), rho.len());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let r = *rho.last().unwrap();
    let l = parts.len();
    let beta: Vec<u32> = parts.iter().enumerate().map(|(i, &p)| p + (l - 1 - i) as u32).collect();
    let mut acc = BigInt::zero();
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let nb = b - r;
        let height = beta.iter().filter(|&&g| g > nb && g < b).count();
        let mut new_beta = beta.clone();
        new_beta[i] = nb;
        new_beta.sort_unstable_by(|a, b| b.cmp(a));
        let new_parts: Vec<u32> =
            new_beta.iter().enumerate().map(|(j, &g)| g - (l - 1 - j) as u32).filter(|&p| p > 0).collect();
        let v = mn_rec(&new_parts, &rho[..rho.len() - 1], memo);
        if height % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    memo.insert(key, acc.clone());
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BlockKind {
    Hook,
    /// Linear horizontal block of the fragment with the given index.
    Horizontal(usize),
    /// Linear vertical block of the fragment with the given index.
    Vertical(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fragment {
    pub hook: usize,
    pub horizontal: Vec<usize>,
    pub vertical: Vec<usize>,
}

/// Blocks listed in the total order; fragments are numbered by the position
/// of their hook block, so each structure has exactly one encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Structure {
    pub blocks: Vec<BlockKind>,
}

impl Structure {
    pub fn fragments(&self) -> Vec<Fragment> {
        let mut frags: Vec<Fragment> = Vec::new();
        for (pos, b) in self.blocks.iter().enumerate() {
            match *b {
                BlockKind::Hook => frags.push(Fragment { hook: pos, horizontal: vec![], vertical: vec![] }),
                BlockKind::Horizontal(f) => frags[f].horizontal.push(pos),
                BlockKind::Vertical(f) => frags[f].vertical.push(pos),
            }
        }
        frags
    }
}

pub fn enumerate_structures(n: usize) -> Result<Vec<Structure>> {
    if n > MAX_STRUCTURE_BLOCKS {
        return Err(Error::SizeGuard { what: format!("{n} blocks"), limit: MAX_STRUCTURE_BLOCKS });
    }
    fn rec(n: usize, frags: usize, cur: &mut Vec<BlockKind>, out: &mut Vec<Structure>) {
        if cur.len() == n {
            out.push(Structure { blocks: cur.clone() });
            return;
        }
        let mut options = vec![BlockKind::Hook];
        for f in 0..frags {
            options.push(BlockKind::Horizontal(f));
            options.push(BlockKind::Vertical(f));
        }
        for o in options {
            cur.push(o);
            rec(n, frags + usize::from(o == BlockKind::Hook), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, 0, &mut Vec::new(), &mut out);
    }
    Ok(out)
}

/// A structure with a filling: hook blocks carry (p', q'), linear blocks a
/// positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilledStructure {
    pub structure: Structure,
    pub hook_fillings: Vec<(u32, u32)>,
    pub linear_fillings: Vec<u32>,
}

impl FilledStructure {
    /// Fragment filling numbers (P_i, Q_i) in fragment order.
    pub fn fragment_numbers(&self) -> (Vec<i64>, Vec<i64>) {
        let mut pp = Vec::new();
        let mut qq = Vec::new();
        let (mut h, mut l) = (0, 0);
        for b in &self.structure.blocks {
            match *b {
                BlockKind::Hook => {
                    let (p, q) = self.hook_fillings[h];
                    h += 1;
                    pp.push(p as i64);
                    qq.push(q as i64);
                }
                BlockKind::Horizontal(f) => {
                    pp[f] += self.linear_fillings[l] as i64;
                    l += 1;
                }
                BlockKind::Vertical(f) => {
                    qq[f] += self.linear_fillings[l] as i64;
                    l += 1;
                }
            }
        }
        (pp, qq)
    }

    pub fn sign(&self) -> i32 {
        let (pp, qq) = self.fragment_numbers();
        let upsilon = self.structure.blocks.iter().filter(|b| matches!(b, BlockKind::Vertical(_))).count() as i64;
        structure_sign(&pp, &qq, upsilon)
    }
}

fn structure_sign(pp: &[i64], qq: &[i64], upsilon: i64) -> i32 {
    let mut s = 1i32;
    for i in 0..pp.len() {
        for j in i + 1..pp.len() {
            let d = (pp[i] - pp[j]).signum() * (qq[i] - qq[j]).signum();
            if d == 0 {
                return 0;
            }
            s *= d as i32;
        }
    }
    let parity = qq.iter().sum::<i64>() + upsilon;
    if parity % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Filled structures of cardinality rho (ordered), block j carrying rho_j.
pub fn enumerate_filled_structures(rho: &[u32]) -> Result<Vec<FilledStructure>> {
    let mut out = Vec::new();
    for s in enumerate_structures(rho.len())? {
        let hooks: Vec<usize> =
            s.blocks.iter().enumerate().filter(|(_, b)| **b == BlockKind::Hook).map(|(i, _)| i).collect();
        let linear: Vec<u32> = s
            .blocks
            .iter()
            .zip(rho)
            .filter(|(b, _)| **b != BlockKind::Hook)
            .map(|(_, &r)| r)
            .collect();
        let mut fill = vec![0u32; hooks.len()];
        loop {
            let hook_fillings = hooks.iter().zip(&fill).map(|(&pos, &p)| (p, rho[pos] - 1 - p)).collect();
            out.push(FilledStructure { structure: s.clone(), hook_fillings, linear_fillings: linear.clone() });
            // odometer over the hook splits
            let mut k = 0;
            while k < fill.len() {
                fill[k] += 1;
                if fill[k] < rho[hooks[k]] {
                    break;
                }
                fill[k] = 0;
                k += 1;
            }
            if k == fill.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// Characters chi^lambda_rho for every lambda of size sum(rho), computed by
/// summing signs of filled structures. Improper structures are included
/// unless `proper_only` is set.
pub fn structure_character_table(rho: &[u32], proper_only: bool) -> Result<HashMap<Partition, BigInt>> {
    let n: usize = rho.iter().map(|&r| r as usize).sum();
    if n > MAX_STRUCTURE_CHAR_SIZE {
        return Err(Error::SizeGuard { what: format!("character of S_{n}"), limit: MAX_STRUCTURE_CHAR_SIZE });
    }
    if rho.iter().any(|&r| r == 0) {
        return Err(Error::SizeMismatch("cycle lengths must be positive".into()));
    }
    struct State<'a> {
        rho: &'a [u32],
        proper_only: bool,
        pp: Vec<i64>,
        qq: Vec<i64>,
        upsilon: i64,
        table: HashMap<Partition, BigInt>,
    }
    fn distinct(v: &[i64]) -> bool {
        (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i] != v[j]))
    }
    fn rec(st: &mut State, pos: usize) {
        if st.proper_only && !(distinct(&st.pp) && distinct(&st.qq)) {
            return;
        }
        if pos == st.rho.len() {
            let sign = structure_sign(&st.pp, &st.qq, st.upsilon);
            if sign == 0 {
                return;
            }
            let mut p: Vec<u32> = st.pp.iter().map(|&v| v as u32).collect();
            let mut q: Vec<u32> = st.qq.iter().map(|&v| v as u32).collect();
            p.sort_unstable_by(|a, b| b.cmp(a));
            q.sort_unstable_by(|a, b| b.cmp(a));
            if let Ok(lambda) = from_frobenius(&FrobeniusCoords { p, q }) {
                *st.table.entry(lambda).or_insert_with(BigInt::zero) += sign;
            }
            return;
        }
        let r = st.rho[pos] as i64;
        for p in 0..r {
            st.pp.push(p);
            st.qq.push(r - 1 - p);
            rec(st, pos + 1);
            st.pp.pop();
            st.qq.pop();
        }
        for f in 0..st.pp.len() {
            st.pp[f] += r;
            rec(st, pos + 1);
            st.pp[f] -= r;
            st.qq[f] += r;
            st.upsilon += 1;
            rec(st, pos + 1);
            st.qq[f] -= r;
            st.upsilon -= 1;
        }
    }
    let mut st = State { rho, proper_only, pp: vec![], qq: vec![], upsilon: 0, table: HashMap::new() };
    rec(&mut st, 0);
    let mut table = st.table;
    for lambda in enumerate_partitions(n)? {
        table.entry(lambda).or_insert_with(BigInt::zero);
    }
    table.retain(|l, _| l.size() == n);
    Ok(table)
}

pub fn structure_character(lambda: &Partition, rho: &[u32]) -> Result<BigInt> {
    structure_character_with(lambda, rho, false)
}

pub fn structure_character_with(lambda: &Partition, rho: &[u32], proper_only: bool) -> Result<BigInt> {
    let total: usize = rho.iter().map(|&r| r as usize).sum();
    if total != lambda.size() {
        return Err(Error::SizeMismatch(format!("|lambda| = {} but sum(rho) = {total}", lambda.size())));
    }
    let table = structure_character_table(rho, proper_only)?;
    Ok(table.get(lambda).cloned().unwrap_or_else(BigInt::zero))
}

/// Injective maps {1..n} -> {1, 1', ..., d, d'} meeting every pair {m, m'}.
/// Target 2m stands for m + 1 and 2m + 1 for (m + 1)'.
pub fn phi_maps(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if d == 0 || n < d || 2 * d < n {
        return out;
    }
    fn rec(n: usize, d: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            if (0..d).all(|m| used[2 * m] || used[2 * m + 1]) {
                out.push(cur.clone());
            }
            return;
        }
        for t in 0..2 * d {
            if !used[t] {
                used[t] = true;
                cur.push(t);
                rec(n, d, cur, used, out);
                cur.pop();
                used[t] = false;
            }
        }
    }
    rec(n, d, &mut Vec::new(), &mut vec![false; 2 * d], &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Series {
    Principal,
    Complementary(i64),
}

/// A raw parameter pair with no admissibility check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZPair {
    pub z: Complex,
    pub zp: Complex,
}

impl ZPair {
    pub fn new(z: Complex, zp: Complex) -> Self {
        Self { z, zp }
    }

    pub fn t(&self) -> Complex {
        self.z * self.zp
    }

    pub fn s(&self) -> Complex {
        self.z + self.zp
    }

    pub fn negated(&self) -> Self {
        Self { z: -self.z, zp: -self.zp }
    }
}

/// Admissible parameters: principal series (z' = conj z, z not an integer)
/// or complementary series (m < z, z' < m + 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZParams {
    pair: ZPair,
    t: f64,
    s: f64,
    series: Series,
}

impl ZParams {
    pub fn new(z: Complex, zp: Complex) -> Result<Self> {
        let tol = 1e-14 * (1.0 + z.norm());
        let real = z.im == 0.0 && zp.im == 0.0;
        let series = if (zp - z.conj()).norm() <= tol && (z.im != 0.0 || z.re != z.re.round()) {
            Series::Principal
        } else if real && z.re.floor() == zp.re.floor() && z.re != z.re.floor() && zp.re != zp.re.floor() {
            Series::Complementary(z.re.floor() as i64)
        } else {
            return Err(Error::InadmissibleParams(format!("z = {z}, z' = {zp}")));
        };
        let zp = if series == Series::Principal { z.conj() } else { zp };
        let pair = ZPair { z, zp };
        let t = pair.t().re;
        let s = pair.s().re;
        if !(t > 0.0) {
            return Err(Error::InadmissibleParams(format!("t = {t} is not positive")));
        }
        Ok(Self { pair, t, s, series })
    }

    pub fn principal(re: f64, im: f64) -> Result<Self> {
        let z = Complex::new(re, im);
        Self::new(z, z.conj())
    }

    pub fn complementary(z: f64, zp: f64) -> Result<Self> {
        Self::new(Complex::new(z, 0.0), Complex::new(zp, 0.0))
    }

    pub fn z(&self) -> Complex {
        self.pair.z
    }

    pub fn zp(&self) -> Complex {
        self.pair.zp
    }

    pub fn pair(&self) -> ZPair {
        self.pair
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn series(&self) -> Series {
        self.series
    }

    /// (z, z') -> (-z, -z'), which stays admissible.
    pub fn negated(&self) -> Self {
        let series = match self.series {
            Series::Principal => Series::Principal,
            Series::Complementary(m) => Series::Complementary(-m - 1),
        };
        Self { pair: self.pair.negated(), t: self.t, s: -self.s, series }
    }
}

/// The z-measures and their controlling moments, which depend on (z, z')
/// only through s = z + z' and t = z z'. Generic over the scalar field so the
/// same code runs in floating point and in exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ZMeasure<T: Field> {
    pub s: T,
    pub t: T,
}

pub const MAX_MOMENT_VARS: usize = 4;
pub const MAX_MOMENT_ORDER: u32 = 8;

impl ZMeasure<f64> {
    pub fn from_params(p: &ZParams) -> Self {
        Self { s: p.s(), t: p.t() }
    }
}

impl<T: Field> ZMeasure<T> {
    pub fn new(s: T, t: T) -> Self {
        Self { s, t }
    }

    /// (z+1)_p (z'+1)_p = prod_{j=1}^p (j^2 + s j + t)
    fn upper(&self, p: u32) -> T {
        (1..=p as i64).fold(T::one(), |acc, j| acc * (int::<T>(j * j) + self.s.clone() * int(j) + self.t.clone()))
    }

    /// (1-z)_q (1-z')_q = prod_{j=1}^q (j^2 - s j + t)
    fn lower(&self, q: u32) -> T {
        (1..=q as i64).fold(T::one(), |acc, j| acc * (int::<T>(j * j) - self.s.clone() * int(j) + self.t.clone()))
    }

    fn rising_t(&self, n: usize) -> T {
        (0..n as i64).fold(T::one(), |acc, j| acc * (self.t.clone() + int(j)))
    }

    fn pow_t(&self, d: usize) -> T {
        (0..d).fold(T::one(), |acc, _| acc * self.t.clone())
    }

    /// P^(n)(lambda) with n = |lambda|.
    pub fn prob(&self, lambda: &Partition) -> T {
        let n = lambda.size();
        let f = frobenius(lambda);
        let d = f.rank();
        let mut v = factorial::<T>(n) * self.pow_t(d) / self.rising_t(n);
        for i in 0..d {
            let (p, q) = (f.p[i], f.q[i]);
            let fp = factorial::<T>(p as usize);
            let fq = factorial::<T>(q as usize);
            v = v * self.upper(p) * self.lower(q) / (fp.clone() * fp * fq.clone() * fq);
        }
        let c = cauchy_det::<T>(&f);
        v * c.clone() * c
    }

    /// Moment of the controlling measure sigma_n with exponents l.
    pub fn moment(&self, l: &[u32]) -> Result<T> {
        if l.is_empty() || l.len() > MAX_MOMENT_VARS || l.iter().any(|&v| v > MAX_MOMENT_ORDER) {
            return Err(Error::SizeGuard { what: format!("moment index {l:?}"), limit: MAX_MOMENT_VARS });
        }
        let rho: Vec<u32> = l.iter().map(|&v| v + 1).collect();
        let n: usize = rho.iter().map(|&r| r as usize).sum();
        let tn = self.rising_t(n);
        let mut memo = HashMap::new();
        let mut acc = T::zero();
        for lambda in enumerate_partitions(n)? {
            let chi = mn_rec(lambda.parts(), &rho, &mut memo);
            if chi.is_zero() {
                continue;
            }
            let f = frobenius(&lambda);
            let mut term = T::from_bigint(&chi) * self.pow_t(f.rank()) / tn.clone();
            for i in 0..f.rank() {
                let (p, q) = (f.p[i], f.q[i]);
                term = term * self.upper(p) * self.lower(q)
                    / (factorial::<T>(p as usize) * factorial::<T>(q as usize));
            }
            acc = acc + term * cauchy_det::<T>(&f);
        }
        Ok(acc)
    }
}

fn factorial<T: Field>(n: usize) -> T {
    (2..=n as i64).fold(T::one(), |acc, k| acc * int(k))
}

/// det[1 / (p_i + q_j + 1)] by the Cauchy product formula.
pub fn cauchy_det<T: Field>(f: &FrobeniusCoords) -> T {
    let d = f.rank();
    let mut num = T::one();
    let mut den = T::one();
    for i in 0..d {
        for j in 0..d {
            den = den * int(f.p[i] as i64 + f.q[j] as i64 + 1);
            if i < j {
                num = num * int((f.p[i] as i64 - f.p[j] as i64) * (f.q[i] as i64 - f.q[j] as i64));
            }
        }
    }
    num / den
}

pub fn z_measure_prob(params: &ZParams, lambda: &Partition) -> Result<f64> {
    if lambda.is_empty() {
        return Err(Error::SizeMismatch("the z-measure lives on partitions of n >= 1".into()));
    }
    Ok(ZMeasure::from_params(params).prob(lambda))
}

pub fn controlling_moment(params: &ZParams, l: &[u32]) -> Result<f64> {
    ZMeasure::from_params(params).moment(l)
}

/// Integer value of an exact character, for convenience in tests and reports.
pub fn character_to_i64(v: &BigInt) -> Option<i64> {
    v.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn partition_count(n: usize) -> u64 {
        // p(n) by the pentagonal recurrence
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for m in 1..=n {
            let mut k = 1i64;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                p[m] += sign * p[m - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= m {
                    p[m] += sign * p[m - g2];
                }
                k += 1;
            }
        }
        p[n] as u64
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(0).unwrap(), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(20).unwrap().len() as u64, partition_count(20));
        assert_eq!(partition_count(20), 627);
        assert!(matches!(enumerate_partitions(61), Err(Error::SizeGuard { .. })));
        let p5 = enumerate_partitions(5).unwrap();
        assert_eq!(p5[0], part(&[5]));
        assert_eq!(p5[1], part(&[4, 1]));
        assert_eq!(p5.last().unwrap(), &part(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius(&part(&[1])), FrobeniusCoords { p: vec![0], q: vec![0] });
        assert_eq!(frobenius(&part(&[2, 1])), FrobeniusCoords { p: vec![1], q: vec![1] });
        assert_eq!(frobenius(&part(&[4, 3, 1])), FrobeniusCoords { p: vec![3, 1], q: vec![2, 0] });
        for n in 0..=10 {
            for l in enumerate_partitions(n).unwrap() {
                let f = frobenius(&l);
                let total: u32 = f.p.iter().zip(&f.q).map(|(p, q)| p + q + 1).sum();
                assert_eq!(total as usize, n);
                assert_eq!(from_frobenius(&f).unwrap(), l);
            }
        }
        assert!(from_frobenius(&FrobeniusCoords { p: vec![1, 1], q: vec![2, 0] }).is_err());
    }

    /// Counts standard tableaux by removing corners recursively.
    fn tableaux(parts: &[u32]) -> u64 {
        if parts.iter().all(|&p| p == 0) {
            return 1;
        }
        let mut total = 0;
        for i in 0..parts.len() {
            let next = parts.get(i + 1).copied().unwrap_or(0);
            if parts[i] > next {
                let mut q = parts.to_vec();
                q[i] -= 1;
                total += tableaux(&q);
            }
        }
        total
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim(&part(&[7])).unwrap(), BigUint::one());
        assert_eq!(dim(&part(&[2, 1])).unwrap(), BigUint::from(2u32));
        assert_eq!(tableaux(&[2, 1]), 2);
        let s: BigUint = enumerate_partitions(6).unwrap().iter().map(|l| dim(l).unwrap().pow(2)).sum();
        assert_eq!(s, BigUint::from(720u32));
        for l in enumerate_partitions(8).unwrap() {
            assert_eq!(dim(&l).unwrap(), BigUint::from(tableaux(l.parts())));
        }
    }

    /// chi^lambda(sigma) for the permutation representation route: characters
    /// of S_3 from permutation matrices of the natural and sign actions.
    #[test]
    fn small_character_values() {
        assert_eq!(mn_character(&part(&[4]), &[2, 1, 1]).unwrap(), BigInt::one());
        // standard rep of S_3 = natural - trivial; 3-cycle has no fixed points
        assert_eq!(mn_character(&part(&[2, 1]), &[3]).unwrap(), BigInt::from(-1));
        assert_eq!(mn_character(&part(&[2, 1]), &[1, 1, 1]).unwrap(), BigInt::from(2));
        assert_eq!(mn_character(&part(&[2, 1]), &[2, 1]).unwrap(), BigInt::from(0));
        for n in 1..=5 {
            let sign = Partition::new(vec![1; n]).unwrap();
            for rho in enumerate_partitions(n).unwrap() {
                let k = rho.len();
                let expect = if (n - k) % 2 == 0 { 1 } else { -1 };
                assert_eq!(mn_character(&sign, rho.parts()).unwrap(), BigInt::from(expect));
            }
        }
        assert!(matches!(mn_character(&part(&[2]), &[1]), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn column_orthogonality() {
        for n in 1..=7 {
            let parts = enumerate_partitions(n).unwrap();
            for (i, r1) in parts.iter().enumerate() {
                for r2 in parts.iter().skip(i + 1) {
                    let s: BigInt = parts
                        .iter()
                        .map(|l| mn_character(l, r1.parts()).unwrap() * mn_character(l, r2.parts()).unwrap())
                        .sum();
                    assert!(s.is_zero(), "{r1} {r2}");
                }
            }
        }
    }

    fn structure_count_by_set_partitions(n: usize) -> usize {
        // sum over set partitions of prod 2^(|B| - 1), via S(n, k)
        let mut s = vec![vec![0usize; n + 1]; n + 1];
        s[0][0] = 1;
        for i in 1..=n {
            for k in 1..=i {
                s[i][k] = k * s[i - 1][k] + s[i - 1][k - 1];
            }
        }
        (1..=n).map(|k| s[n][k] << (n - k)).sum()
    }

    #[test]
    fn structure_counts() {
        assert_eq!(enumerate_structures(1).unwrap().len(), 1);
        assert_eq!(enumerate_structures(2).unwrap().len(), 3);
        for n in 1..=6 {
            assert_eq!(enumerate_structures(n).unwrap().len(), structure_count_by_set_partitions(n));
        }
        for s in enumerate_structures(4).unwrap() {
            for f in s.fragments() {
                assert!(f.horizontal.iter().chain(&f.vertical).all(|&b| b > f.hook));
            }
        }
        assert!(enumerate_structures(9).is_err());
    }

    #[test]
    fn structure_character_examples() {
        assert_eq!(structure_character(&part(&[2, 1]), &[3]).unwrap(), BigInt::from(-1));
        for p in 0..=4u32 {
            for q in 0..=4u32 {
                let hook = from_frobenius(&FrobeniusCoords { p: vec![p], q: vec![q] }).unwrap();
                let expect = if q % 2 == 0 { 1 } else { -1 };
                assert_eq!(structure_character(&hook, &[p + q + 1]).unwrap(), BigInt::from(expect));
                assert_eq!(mn_character(&hook, &[p + q + 1]).unwrap(), BigInt::from(expect));
            }
        }
    }

    #[test]
    fn filled_structure_signs_agree_with_dfs() {
        let rho = [2u32, 1, 2];
        let mut table: HashMap<Partition, i64> = HashMap::new();
        for fs in enumerate_filled_structures(&rho).unwrap() {
            let s = fs.sign();
            if s == 0 {
                continue;
            }
            let (mut p, mut q) = fs.fragment_numbers();
            p.sort_unstable_by(|a, b| b.cmp(a));
            q.sort_unstable_by(|a, b| b.cmp(a));
            let f = FrobeniusCoords { p: p.iter().map(|&v| v as u32).collect(), q: q.iter().map(|&v| v as u32).collect() };
            if let Ok(l) = from_frobenius(&f) {
                *table.entry(l).or_default() += s as i64;
            }
        }
        for l in enumerate_partitions(5).unwrap() {
            let a = table.get(&l).copied().unwrap_or(0);
            assert_eq!(BigInt::from(a), mn_character(&l, &rho).unwrap(), "{l}");
        }
    }

    #[test]
    fn structure_route_matches_murnaghan_nakayama() {
        for n in 1..=8 {
            let lambdas = enumerate_partitions(n).unwrap();
            for rho in enumerate_partitions(n).unwrap() {
                let table = structure_character_table(rho.parts(), false).unwrap();
                let mut memo = HashMap::new();
                for l in &lambdas {
                    assert_eq!(table[l], mn_rec(l.parts(), rho.parts(), &mut memo), "{l} {rho}");
                }
            }
        }
    }

    #[test]
    fn proper_structures_alone_give_the_character() {
        for rho in [vec![1u32, 2, 1, 2], vec![3, 1, 1], vec![2, 2, 2]] {
            let all = structure_character_table(&rho, false).unwrap();
            let proper = structure_character_table(&rho, true).unwrap();
            assert_eq!(all, proper);
        }
    }

    #[test]
    fn character_independent_of_cycle_order() {
        let a = structure_character_table(&[3, 1, 2], false).unwrap();
        let b = structure_character_table(&[1, 2, 3], false).unwrap();
        let c = structure_character_table(&[2, 3, 1], false).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn phi_map_sets() {
        assert_eq!(phi_maps(1, 1).len(), 2);
        assert_eq!(phi_maps(2, 2).len(), 8);
        assert!(phi_maps(3, 1).is_empty());
        assert!(phi_maps(2, 3).is_empty());
        for (n, d) in [(3, 2), (4, 2), (4, 3), (3, 3), (5, 3)] {
            let maps = phi_maps(n, d);
            assert!(!maps.is_empty());
            // orbit sizes under relabelling of the pairs
            let perms = permutations(d);
            let mut seen = std::collections::HashSet::new();
            for m in &maps {
                if seen.contains(m) {
                    continue;
                }
                let orbit: std::collections::HashSet<Vec<usize>> = perms
                    .iter()
                    .map(|s| m.iter().map(|&t| 2 * s[t / 2] + t % 2).collect())
                    .collect();
                assert_eq!(orbit.len(), perms.len());
                seen.extend(orbit);
            }
            assert_eq!(seen.len(), maps.len());
        }
    }

    fn permutations(d: usize) -> Vec<Vec<usize>> {
        if d == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(d - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, d - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn admissibility() {
        assert!(ZParams::complementary(1.2, 1.8).is_ok());
        assert_eq!(ZParams::complementary(1.2, 1.8).unwrap().series(), Series::Complementary(1));
        assert!(ZParams::principal(0.3, 0.4).is_ok());
        assert!(ZParams::complementary(1.2, 2.8).is_err());
        assert!(ZParams::principal(2.0, 0.0).is_err());
        assert!(ZParams::new(Complex::new(0.3, 0.4), Complex::new(0.3, 0.5)).is_err());
        let p = ZParams::complementary(1.2, 1.8).unwrap().negated();
        assert_eq!(p.series(), Series::Complementary(-2));
    }

    #[test]
    fn z_measure_small_n() {
        let params = ZParams::complementary(1.2, 1.8).unwrap();
        assert!((z_measure_prob(&params, &part(&[1])).unwrap() - 1.0).abs() < 1e-15);
        let (z, zp, t) = (1.2, 1.8, 1.2 * 1.8);
        let p2 = z_measure_prob(&params, &part(&[2])).unwrap();
        let p11 = z_measure_prob(&params, &part(&[1, 1])).unwrap();
        assert!((p2 - (z + 1.0) * (zp + 1.0) / (2.0 * (t + 1.0))).abs() < 1e-15);
        assert!((p11 - (1.0 - z) * (1.0 - zp) / (2.0 * (t + 1.0))).abs() < 1e-15);
        assert!((p2 - 0.974_683_544_303_797_5).abs() < 1e-12);
        assert!((p2 + p11 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_normalization() {
        // z = 6/5, z' = 9/5: s = 3, t = 54/25
        let m = ZMeasure::new(Rational::from_integer(3.into()), Rational::new(54.into(), 25.into()));
        // z = (3 + 4i)/10: s = 3/5, t = 1/4
        let mp = ZMeasure::new(Rational::new(3.into(), 5.into()), Rational::new(1.into(), 4.into()));
        for n in 1..=9 {
            for mm in [&m, &mp] {
                let total: Rational = enumerate_partitions(n).unwrap().iter().map(|l| mm.prob(l)).sum();
                assert_eq!(total, Rational::from_integer(1.into()), "n = {n}");
            }
        }
    }

    #[test]
    fn float_normalization_and_positivity() {
        for params in [ZParams::complementary(1.2, 1.8).unwrap(), ZParams::principal(0.3, 0.4).unwrap()] {
            for n in 1..=12 {
                let mut total = 0.0;
                for l in enumerate_partitions(n).unwrap() {
                    let p = z_measure_prob(&params, &l).unwrap();
                    assert!(p > 0.0);
                    total += p;
                }
                assert!((total - 1.0).abs() < 1e-10, "n = {n}: {total}");
            }
        }
    }

    #[test]
    fn moment_examples() {
        let params = ZParams::complementary(1.2, 1.8).unwrap();
        assert!((controlling_moment(&params, &[0]).unwrap() - 1.0).abs() < 1e-14);
        let (z, zp, t) = (1.2f64, 1.8f64, 1.2 * 1.8);
        let m1 = controlling_moment(&params, &[1]).unwrap();
        assert!((m1 - (z + zp) / (t + 1.0)).abs() < 1e-14);
        // hand reduction at n = 1: sum over hooks p + q = l with chi = (-1)^q
        let l = 2u32;
        let poch = |a: f64, k: u32| (0..k).fold(1.0, |acc, j| acc * (a + j as f64));
        let fact = |k: u32| (1..=k).fold(1.0, |acc, j| acc * j as f64);
        let mut hand = 0.0;
        for p in 0..=l {
            let q = l - p;
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            hand += sign * t / poch(t, l + 1) * poch(z + 1.0, p) * poch(zp + 1.0, p) * poch(1.0 - z, q) * poch(1.0 - zp, q)
                / (fact(p) * fact(q) * (l + 1) as f64);
        }
        let m2 = controlling_moment(&params, &[2]).unwrap();
        assert!((m2 - hand).abs() < 1e-14, "{m2} {hand}");
        let a = controlling_moment(&params, &[2, 3]).unwrap();
        let b = controlling_moment(&params, &[3, 2]).unwrap();
        assert!((a - b).abs() < 1e-13 * a.abs());
        assert!(controlling_moment(&params, &[9]).is_err());
    }

    #[test]
    fn exact_moments_symmetric() {
        let m = ZMeasure::new(Rational::from_integer(3.into()), Rational::new(54.into(), 25.into()));
        assert_eq!(m.moment(&[1, 2, 0]).unwrap(), m.moment(&[0, 2, 1]).unwrap());
        assert_eq!(m.moment(&[0]).unwrap(), Rational::from_integer(1.into()));
        // sigma_2 has mass one as well
        assert_eq!(m.moment(&[0, 0]).unwrap(), Rational::from_integer(1.into()));
    }

    proptest! {
        #[test]
        fn conjugation_reflects_parameters(n in 1usize..9, idx in 0usize..30) {
            // P_{z,z'}(lambda') = P_{-z,-z'}(lambda)
            let parts = enumerate_partitions(n).unwrap();
            let l = &parts[idx % parts.len()];
            let params = ZParams::complementary(1.2, 1.8).unwrap();
            let a = z_measure_prob(&params, &l.conjugate()).unwrap();
            let b = z_measure_prob(&params.negated(), l).unwrap();
            prop_assert!((a - b).abs() < 1e-14 * a.abs().max(1e-300));
        }

        #[test]
        fn frobenius_round_trip(n in 0usize..16, idx in 0usize..300) {
            let parts = enumerate_partitions(n).unwrap();
            let l = &parts[idx % parts.len()];
            prop_assert_eq!(&from_frobenius(&frobenius(l)).unwrap(), l);
            prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        }
    }
}
