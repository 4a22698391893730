//! Integer partitions and the symmetric-function combinatorics the expansion
//! machinery is built on: box enumeration, conjugation and box complements,
//! irreducible symmetric-group dimensions, Kostka numbers and
//! Murnaghan-Nakayama characters.
//!
//! Partitions store weakly decreasing positive parts with no trailing zeros,
//! so structural equality is partition equality.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, rat, ExactScalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from weakly decreasing parts; trailing zeros are
    /// stripped, increasing sequences are rejected.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("parts not weakly decreasing: {parts:?}")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Single-row partition (r); the empty partition when r = 0.
    pub fn row(r: u32) -> Self {
        if r == 0 {
            Partition::empty()
        } else {
            Partition { parts: vec![r] }
        }
    }

    /// Single-column partition (1^c).
    pub fn column(c: usize) -> Self {
        Partition { parts: vec![1; c] }
    }

    /// Rectangular partition (n^p): p parts equal to n.
    pub fn rect(n: u32, p: usize) -> Self {
        if n == 0 {
            Partition::empty()
        } else {
            Partition { parts: vec![n; p] }
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of (positive) parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// i-th part, zero-based, 0 beyond the last part.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0) as usize;
        let mut parts = Vec::with_capacity(cols);
        for c in 1..=cols {
            parts.push(self.parts.iter().take_while(|&&p| p as usize >= c).count() as u32);
        }
        Partition { parts }
    }

    /// mu is contained in self cell-wise.
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.parts.iter().enumerate().all(|(i, &m)| self.part(i) >= m)
    }

    pub fn fits_in_box(&self, n: u32, p: usize) -> bool {
        self.len() <= p && self.part(0) <= n
    }

    /// Box complement-conjugate: for lambda inside the (n^p) box, the
    /// partition (p - lambda'_n, ..., p - lambda'_1) inside (p^n).
    pub fn tilde(&self, n: u32, p: usize) -> Result<Partition> {
        if !self.fits_in_box(n, p) {
            return Err(Error::Containment(format!(
                "{self} does not fit in the ({n}^{p}) box"
            )));
        }
        let conj = self.conjugate();
        let mut parts: Vec<u32> = (0..n as usize)
            .rev()
            .map(|i| p as u32 - conj.part(i))
            .collect();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Dominance order (equal weights assumed by the caller).
    pub fn dominates(&self, mu: &Partition) -> bool {
        let mut a = 0u64;
        let mut b = 0u64;
        for i in 0..self.len().max(mu.len()) {
            a += self.part(i) as u64;
            b += mu.part(i) as u64;
            if a < b {
                return false;
            }
        }
        true
    }

    /// True when the 2-core is empty, i.e. the diagram tiles by dominoes.
    /// Subtracting 2 from a beta number preserves its parity, so the core is
    /// empty iff the parity counts match the staircase (l-1, ..., 1, 0).
    pub fn has_empty_two_core(&self) -> bool {
        let l = self.len();
        let even = (0..l)
            .filter(|&i| (self.part(i) as usize + (l - 1 - i)) % 2 == 0)
            .count();
        even == l - l / 2
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Weight filter for box enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightFilter {
    All,
    Even,
    Exact(u64),
}

/// Lazy enumeration of all partitions inside the (n^p) box (at most p parts,
/// each at most n) in descending lexicographic order of the zero-padded part
/// vector: (n,...,n) first, the empty partition last.
pub struct BoxPartitionIterator {
    state: Option<Vec<u32>>,
    filter: WeightFilter,
}

impl BoxPartitionIterator {
    pub fn new(n: u32, p: usize) -> Self {
        BoxPartitionIterator {
            state: Some(vec![n; p]),
            filter: WeightFilter::All,
        }
    }

    pub fn with_filter(n: u32, p: usize, filter: WeightFilter) -> Self {
        BoxPartitionIterator {
            state: Some(vec![n; p]),
            filter,
        }
    }

    /// Number of partitions in the (n^p) box: binomial(n+p, p).
    pub fn count_in_box(n: u32, p: usize) -> BigInt {
        crate::exact::binomial(n as u64 + p as u64, p as u64)
    }

    fn advance(&mut self) {
        let Some(v) = self.state.as_mut() else { return };
        match v.iter().rposition(|&x| x > 0) {
            None => self.state = None,
            Some(i) => {
                let nv = v[i] - 1;
                for x in v.iter_mut().skip(i) {
                    *x = nv;
                }
            }
        }
    }
}

impl Iterator for BoxPartitionIterator {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        loop {
            let v = self.state.as_ref()?.clone();
            self.advance();
            let lam = Partition::new(v).expect("box enumeration is monotone");
            let keep = match self.filter {
                WeightFilter::All => true,
                WeightFilter::Even => lam.weight() % 2 == 0,
                WeightFilter::Exact(w) => lam.weight() == w,
            };
            if keep {
                return Some(lam);
            }
        }
    }
}

/// All sub-partitions mu of lambda (cell-wise containment), descending lex.
pub fn subpartitions(lambda: &Partition) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    fn rec(lambda: &Partition, i: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == lambda.len() {
            out.push(Partition::new(cur.clone()).unwrap());
            return;
        }
        let hi = max.min(lambda.part(i));
        for v in (0..=hi).rev() {
            cur.push(v);
            rec(lambda, i + 1, v, cur, out);
            cur.pop();
        }
    }
    rec(lambda, 0, u32::MAX, &mut cur, &mut out);
    out.sort_by(|a, b| {
        let pa: Vec<u32> = (0..lambda.len()).map(|i| a.part(i)).collect();
        let pb: Vec<u32> = (0..lambda.len()).map(|i| b.part(i)).collect();
        pb.cmp(&pa)
    });
    out.dedup();
    out
}

/// All partitions of weight w, descending lex.
pub fn partitions_of(w: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: u64, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition::new(cur.clone()).unwrap());
            return;
        }
        let hi = (max as u64).min(rem) as u32;
        for v in (1..=hi).rev() {
            cur.push(v);
            rec(rem - v as u64, v, cur, out);
            cur.pop();
        }
    }
    rec(w, u32::MAX.min(w as u32).max(1), &mut cur, &mut out);
    out
}

/// Dimension of the irreducible S_|lambda| representation indexed by lambda:
/// |lambda|! * prod_{j<k} (lambda_j - lambda_k - j + k) / prod_j (lambda_j + l - j)!.
pub fn dim_v(lambda: &Partition) -> BigInt {
    let l = lambda.len();
    let mut num = factorial(lambda.weight());
    for j in 0..l {
        for k in j + 1..l {
            num *= lambda.part(j) as i64 - lambda.part(k) as i64 - j as i64 + k as i64;
        }
    }
    let mut den = BigInt::one();
    for j in 0..l {
        den *= factorial(lambda.part(j) as u64 + (l - 1 - j) as u64);
    }
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(r.is_zero());
    q
}

/// C_lambda(n) = prod_j (lambda_j + n - j)!/(n - j)!, as the cell product
/// prod_j prod_{i=1..lambda_j} (n - j + i); vanishes when l(lambda) > n.
pub fn c_lambda(lambda: &Partition, n: u32) -> ExactScalar {
    let mut acc = ExactScalar::one();
    for j in 1..=lambda.len() {
        for i in 1..=lambda.part(j - 1) as i64 {
            acc *= rat(n as i64 - j as i64 + i);
        }
    }
    acc
}

/// Kostka number K_{lambda,mu}: semistandard tableaux of shape lambda and
/// content mu, computed by Pieri chains (adding horizontal strips of sizes
/// mu_1, mu_2, ...).
pub fn kostka(lambda: &Partition, mu: &Partition) -> BigInt {
    if lambda.weight() != mu.weight() {
        return BigInt::zero();
    }
    let mut layer: HashMap<Partition, BigInt> = HashMap::new();
    layer.insert(Partition::empty(), BigInt::one());
    for i in 0..mu.len() {
        let strip = mu.part(i);
        let mut next: HashMap<Partition, BigInt> = HashMap::new();
        for (shape, count) in &layer {
            for ext in horizontal_strip_extensions(shape, strip, lambda) {
                *next.entry(ext).or_insert_with(BigInt::zero) += count;
            }
        }
        layer = next;
    }
    layer.remove(lambda).unwrap_or_else(BigInt::zero)
}

/// Shapes nu obtained from shape by adding a horizontal strip of the given
/// size, staying inside bound.
fn horizontal_strip_extensions(shape: &Partition, size: u32, bound: &Partition) -> Vec<Partition> {
    let rows = shape.len() + 1;
    let mut out = Vec::new();
    let mut add = vec![0u32; rows];
    fn rec(
        shape: &Partition,
        bound: &Partition,
        add: &mut Vec<u32>,
        row: usize,
        rem: u32,
        out: &mut Vec<Partition>,
    ) {
        if row == add.len() {
            if rem == 0 {
                let parts: Vec<u32> = (0..add.len()).map(|i| shape.part(i) + add[i]).collect();
                out.push(Partition::new(parts).expect("strip addition keeps monotonicity"));
            }
            return;
        }
        // Horizontal strip: new row r length between shape_r and shape_{r-1};
        // cap by the target shape so dead branches are pruned.
        let lo = shape.part(row);
        let hi = if row == 0 { u32::MAX } else { shape.part(row - 1) }.min(bound.part(row));
        if hi < lo {
            return;
        }
        let max_add = (hi - lo).min(rem);
        for a in 0..=max_add {
            add[row] = a;
            rec(shape, bound, add, row + 1, rem - a, out);
        }
        add[row] = 0;
    }
    rec(shape, bound, &mut add, 0, size, &mut out);
    out.retain(|nu| bound.contains(nu));
    out
}

/// Brute-force semistandard tableau enumeration; reference oracle for
/// `kostka` and for Schur expansions in the validation suites.
pub fn kostka_by_tableaux(lambda: &Partition, mu: &Partition) -> BigInt {
    if lambda.weight() != mu.weight() {
        return BigInt::zero();
    }
    // Fill cells in row-major order; entry constraints: rows weakly increase,
    // columns strictly increase, content budget from mu.
    let shape: Vec<usize> = lambda.parts().iter().map(|&p| p as usize).collect();
    let n_colors = mu.len().max(1);
    let mut budget: Vec<u32> = (0..n_colors).map(|i| mu.part(i)).collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&w| vec![0; w]).collect();
    let mut count = BigInt::zero();

    fn rec(
        shape: &[usize],
        budget: &mut [u32],
        grid: &mut [Vec<usize>],
        r: usize,
        c: usize,
        count: &mut BigInt,
    ) {
        if r == shape.len() {
            *count += 1;
            return;
        }
        let (nr, nc) = if c + 1 < shape[r] { (r, c + 1) } else { (r + 1, 0) };
        let lo_row = if c > 0 { grid[r][c - 1] } else { 0 };
        let lo_col = if r > 0 && shape[r - 1] > c { grid[r - 1][c] + 1 } else { 0 };
        let lo = lo_row.max(lo_col);
        for v in lo..budget.len() {
            if budget[v] == 0 {
                continue;
            }
            budget[v] -= 1;
            grid[r][c] = v;
            rec(shape, budget, grid, nr, nc, count);
            budget[v] += 1;
        }
    }
    if shape.is_empty() {
        return BigInt::one();
    }
    rec(&shape, &mut budget, &mut grid, 0, 0, &mut count);
    count
}

/// Centralizer order z_rho = prod_i i^{m_i} m_i! of the conjugacy class rho.
pub fn centralizer_order(rho: &Partition) -> BigInt {
    let mut mult: HashMap<u32, u64> = HashMap::new();
    for &p in rho.parts() {
        *mult.entry(p).or_insert(0) += 1;
    }
    let mut z = BigInt::one();
    for (i, m) in mult {
        z *= BigInt::from(i).pow(m as u32) * factorial(m);
    }
    z
}

type CharKey = (Vec<u32>, Vec<u32>);

fn char_cache() -> &'static Mutex<HashMap<CharKey, BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<CharKey, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Irreducible character chi^mu at class rho (|mu| = |rho|), by the
/// Murnaghan-Nakayama rule on beta numbers, memoized globally.
pub fn character(mu: &Partition, rho: &Partition) -> Result<BigInt> {
    if mu.weight() != rho.weight() {
        return Err(Error::DimensionMismatch(format!(
            "character needs |mu| = |rho|, got {} and {}",
            mu.weight(),
            rho.weight()
        )));
    }
    Ok(mn_character(mu.parts().to_vec(), rho.parts().to_vec()))
}

fn mn_character(mu: Vec<u32>, rho: Vec<u32>) -> BigInt {
    if mu.is_empty() {
        return BigInt::one();
    }
    let key = (mu.clone(), rho.clone());
    if let Some(v) = char_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let (&r, rest) = rho.split_last().map(|(a, b)| (a, b)).unwrap();
    // Beta numbers (distinct, strictly decreasing).
    let l = mu.len();
    let beta: Vec<i64> = (0..l)
        .map(|i| mu[i] as i64 + (l - 1 - i) as i64)
        .collect();
    let mut total = BigInt::zero();
    for i in 0..l {
        let b = beta[i] - r as i64;
        if b < 0 || beta.contains(&b) {
            continue;
        }
        // Crossings: occupied positions strictly between b and beta[i].
        let crossings = beta.iter().filter(|&&x| x > b && x < beta[i]).count();
        let mut nb = beta.clone();
        nb[i] = b;
        nb.sort_unstable_by(|a, c| c.cmp(a));
        let mut nmu: Vec<u32> = (0..l)
            .map(|j| (nb[j] - (l - 1 - j) as i64) as u32)
            .collect();
        while nmu.last() == Some(&0) {
            nmu.pop();
        }
        let sub = mn_character(nmu, rest.to_vec());
        if crossings % 2 == 0 {
            total += sub;
        } else {
            total -= sub;
        }
    }
    char_cache().lock().unwrap().insert(key, total.clone());
    total
}

/// Brute-force character oracle: chi^mu_rho as the coefficient of
/// x^{mu + delta} in the Vandermonde times the power sums p_rho (Frobenius
/// formula); independent of the Murnaghan-Nakayama recursion.
pub fn character_by_frobenius(mu: &Partition, rho: &Partition) -> BigInt {
    let l = mu.len().max(1);
    // Polynomials in l variables as exponent-vector -> integer maps.
    type Poly = HashMap<Vec<u32>, BigInt>;
    fn mul(a: &Poly, b: &Poly) -> Poly {
        let mut out: Poly = HashMap::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        out
    }
    // Vandermonde det as sum over permutations.
    let mut vander: Poly = HashMap::new();
    let mut perm: Vec<u32> = (0..l as u32).collect();
    loop {
        let mut inv = 0;
        for i in 0..l {
            for j in i + 1..l {
                if perm[i] < perm[j] {
                    inv += 1;
                }
            }
        }
        let sign = if inv % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        // Exponents delta = (l-1, ..., 1, 0) permuted.
        *vander.entry(perm.clone()).or_insert_with(BigInt::zero) += sign;
        // Next permutation in lexicographic order.
        let Some(i) = (0..l - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..l).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    let mut acc = vander;
    for &r in rho.parts() {
        let mut psum: Poly = HashMap::new();
        for v in 0..l {
            let mut e = vec![0u32; l];
            e[v] = r;
            *psum.entry(e).or_insert_with(BigInt::zero) += 1;
        }
        acc = mul(&acc, &psum);
    }
    let target: Vec<u32> = (0..l)
        .map(|i| mu.part(i) + (l - 1 - i) as u32)
        .collect();
    acc.remove(&target).unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::exact::big;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(p(&[3, 1, 0, 0]).parts(), &[3, 1]);
        assert_eq!(Partition::empty().weight(), 0);
        assert_eq!(p(&[4, 2]).part(5), 0);
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[4, 2]).conjugate(), p(&[2, 2, 1, 1]));
        assert_eq!(p(&[1]).conjugate(), p(&[1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    proptest::proptest! {
        #[test]
        fn conjugate_is_involutive(parts in proptest::collection::vec(0u32..9, 0..7)) {
            let mut sorted = parts.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(sorted).unwrap();
            proptest::prop_assert_eq!(lam.conjugate().conjugate(), lam.clone());
            proptest::prop_assert_eq!(lam.conjugate().weight(), lam.weight());
        }

        #[test]
        fn tilde_is_involutive(parts in proptest::collection::vec(0u32..5, 0..5)) {
            let mut sorted = parts.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(sorted).unwrap();
            let (n, pp) = (6u32, 5usize);
            let t = lam.tilde(n, pp).unwrap();
            proptest::prop_assert!(t.fits_in_box(pp as u32, n as usize));
            proptest::prop_assert_eq!(t.weight() + lam.weight(), n as u64 * pp as u64);
            proptest::prop_assert_eq!(t.tilde(pp as u32, n as usize).unwrap(), lam);
        }
    }

    #[test]
    fn tilde_example() {
        assert_eq!(p(&[1]).tilde(2, 2).unwrap(), p(&[2, 1]));
        assert_eq!(Partition::empty().tilde(2, 2).unwrap(), p(&[2, 2]));
        assert!(p(&[3]).tilde(2, 2).is_err());
    }

    #[test]
    fn box_enumeration_order_and_count() {
        let all: Vec<Partition> = BoxPartitionIterator::new(2, 2).collect();
        let expect: Vec<Partition> = vec![
            p(&[2, 2]),
            p(&[2, 1]),
            p(&[2]),
            p(&[1, 1]),
            p(&[1]),
            Partition::empty(),
        ];
        assert_eq!(all, expect);
        assert_eq!(BoxPartitionIterator::count_in_box(2, 2), big(6));
        for (n, q) in [(3u32, 4usize), (5, 2), (4, 4)] {
            let cnt = BoxPartitionIterator::new(n, q).count();
            assert_eq!(BigInt::from(cnt), BoxPartitionIterator::count_in_box(n, q));
        }
    }

    #[test]
    fn box_filters() {
        let even: Vec<Partition> =
            BoxPartitionIterator::with_filter(2, 2, WeightFilter::Even).collect();
        assert_eq!(even, vec![p(&[2, 2]), p(&[2]), p(&[1, 1]), Partition::empty()]);
        let w3: Vec<Partition> =
            BoxPartitionIterator::with_filter(3, 3, WeightFilter::Exact(3)).collect();
        assert_eq!(w3, vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
    }

    #[test]
    fn subpartition_enumeration() {
        let subs = subpartitions(&p(&[2, 1]));
        assert_eq!(
            subs,
            vec![p(&[2, 1]), p(&[2]), p(&[1, 1]), p(&[1]), Partition::empty()]
        );
    }

    #[test]
    fn dim_v_values() {
        assert_eq!(dim_v(&p(&[2, 1])), big(2));
        assert_eq!(dim_v(&Partition::empty()), big(1));
        assert_eq!(dim_v(&p(&[3, 2])), big(5));
        // sum of squares over partitions of n equals n!.
        for n in 0..=8u64 {
            let total: BigInt = partitions_of(n).iter().map(|mu| dim_v(mu).pow(2)).sum();
            assert_eq!(total, factorial(n), "n = {n}");
        }
    }

    #[test]
    fn c_lambda_values() {
        // C_(2,2)(2) = 3!/1! * 2!/0! = 12.
        assert_eq!(c_lambda(&p(&[2, 2]), 2), rat(12));
        assert_eq!(c_lambda(&Partition::empty(), 5), rat(1));
        // Vanishes when the partition has more rows than variables.
        assert!(c_lambda(&p(&[1, 1, 1]), 2).is_zero());
    }

    #[test]
    fn kostka_values() {
        assert_eq!(kostka(&p(&[2, 1]), &p(&[1, 1, 1])), big(2));
        assert_eq!(kostka(&p(&[2, 1]), &p(&[2, 1])), big(1));
        assert_eq!(kostka(&p(&[2, 1]), &p(&[3])), big(0));
        assert_eq!(kostka(&p(&[3, 3, 2]), &p(&[2, 2, 2, 1, 1])), kostka_by_tableaux(&p(&[3, 3, 2]), &p(&[2, 2, 2, 1, 1])));
    }

    #[test]
    fn kostka_matches_tableaux_and_dominance() {
        for w in 1..=6u64 {
            let shapes = partitions_of(w);
            for lam in &shapes {
                for mu in &shapes {
                    let k = kostka(lam, mu);
                    assert_eq!(k, kostka_by_tableaux(lam, mu), "K_{lam},{mu}");
                    assert_eq!(k.is_positive(), lam.dominates(mu), "dominance at {lam},{mu}");
                }
            }
        }
    }

    #[test]
    fn character_values() {
        assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), big(-1));
        assert_eq!(character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), big(2));
        assert_eq!(character(&p(&[2, 2]), &p(&[2, 2])).unwrap(), big(2));
        assert_eq!(character(&p(&[1, 1]), &p(&[2])).unwrap(), big(-1));
        assert!(character(&p(&[2]), &p(&[3])).is_err());
    }

    #[test]
    fn characters_match_frobenius_oracle() {
        for w in 1..=5u64 {
            let shapes = partitions_of(w);
            for mu in &shapes {
                for rho in &shapes {
                    assert_eq!(
                        character(mu, rho).unwrap(),
                        character_by_frobenius(mu, rho),
                        "chi^{mu}_{rho}"
                    );
                }
            }
        }
    }

    #[test]
    fn character_identity_class_is_dimension() {
        for w in 1..=6u64 {
            for mu in partitions_of(w) {
                let id = Partition::column(w as usize);
                assert_eq!(character(&mu, &id).unwrap(), dim_v(&mu));
            }
        }
    }

    #[test]
    fn character_column_orthogonality() {
        // sum_mu chi^mu_rho chi^mu_sigma = delta * z_rho, n <= 6.
        for w in 1..=6u64 {
            let shapes = partitions_of(w);
            for rho in &shapes {
                for sigma in &shapes {
                    let s: BigInt = shapes
                        .iter()
                        .map(|mu| character(mu, rho).unwrap() * character(mu, sigma).unwrap())
                        .sum();
                    let expect = if rho == sigma {
                        centralizer_order(rho)
                    } else {
                        BigInt::zero()
                    };
                    assert_eq!(s, expect, "rho {rho} sigma {sigma}");
                }
            }
        }
    }

    #[test]
    fn centralizer_orders_match_class_sizes() {
        // Enumerate S_n for n <= 5, count cycle types, check n!/z_rho.
        for n in 1..=5usize {
            let mut counts: HashMap<Partition, u64> = HashMap::new();
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                // cycle type
                let mut seen = vec![false; n];
                let mut cycles = Vec::new();
                for s in 0..n {
                    if seen[s] {
                        continue;
                    }
                    let mut len = 0u32;
                    let mut cur = s;
                    while !seen[cur] {
                        seen[cur] = true;
                        cur = perm[cur];
                        len += 1;
                    }
                    cycles.push(len);
                }
                cycles.sort_unstable_by(|a, b| b.cmp(a));
                *counts.entry(Partition::new(cycles).unwrap()).or_insert(0) += 1;
                let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1])
                else {
                    break;
                };
                let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
                perm.swap(i, j);
                perm[i + 1..].reverse();
            }
            for (rho, cnt) in counts {
                assert_eq!(
                    BigInt::from(cnt) * centralizer_order(&rho),
                    factorial(n as u64),
                    "class {rho}"
                );
            }
        }
    }

    #[test]
    fn two_core_detection() {
        assert!(p(&[2]).has_empty_two_core());
        assert!(p(&[1, 1]).has_empty_two_core());
        assert!(!p(&[1]).has_empty_two_core());
        assert!(!p(&[2, 1]).has_empty_two_core());
        assert!(p(&[2, 2]).has_empty_two_core());
        assert!(p(&[3, 1]).has_empty_two_core());
        // Domino-tileable iff chi at the domino class is nonzero, w <= 8 even.
        for w in (2..=8u64).step_by(2) {
            let dominoes = Partition::new(vec![2; (w / 2) as usize]).unwrap();
            for mu in partitions_of(w) {
                let chi = character(&mu, &dominoes).unwrap();
                assert_eq!(mu.has_empty_two_core(), !chi.is_zero(), "mu {mu}");
            }
        }
    }
}
