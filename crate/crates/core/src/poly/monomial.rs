use std::cmp::Ordering;

/// Exponent vector of a monomial `x0^e0 * x1^e1 * ...`.
///
/// Ordered graded-lexicographically with `x0 > x1 > ...`: higher total degree
/// is larger, ties are broken by comparing exponents of `x0`, then `x1`, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Variables renamed by `x_j -> x_{perm[j]}`.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut e = vec![0; self.0.len()];
        for (j, &ej) in self.0.iter().enumerate() {
            e[perm[j]] = ej;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `k` in `nvars` variables, in descending
/// graded-lex order (`x0^k` first, `x_{n}^k` last).
pub fn monomials_of_degree(nvars: usize, k: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(k);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            rec(nvars, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if k == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(nvars, k, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Binomial coefficient as `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Multinomial coefficient `(sum e)! / prod(e_i!)`.
pub fn multinomial(exps: &[u32]) -> u64 {
    let mut total = 0u64;
    let mut acc = 1u64;
    for &e in exps {
        total += e as u64;
        acc *= binomial(total, e as u64);
    }
    acc
}
