//! Symbolic arithmetic in the extended Clifford algebra.
//!
//! The algebra is generated by `n` anticommuting `γ`'s with `γ² = −1` and `a`
//! commuting `δ`'s with `δ² = +1` that also commute with every `γ`. Signed
//! basis monomials form a finite group `G = G_μ × G_δ` of order `2^(n+a+1)`,
//! where `G_μ` is the Clifford group on the `γ`'s and `G_δ ≅ C₂^a`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Neg;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::verifier::{CheckBuilder, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_minus() != rhs.is_minus())
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// Number of `γ` and `δ` generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub n: u32,
    pub a: u32,
}

impl GroupSpec {
    pub fn new(n: u32, a: u32) -> Self {
        Self { n, a }
    }

    /// The algebra behind a code with `g` groups of `lambda` real variables.
    pub fn for_code(g: usize, lambda: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidGroupCount);
        }
        let a = log2_exact(lambda).ok_or(Error::InvalidLambda(lambda))?;
        Ok(Self::new(g as u32 - 1, a))
    }

    pub fn lambda(&self) -> usize {
        1 << self.a
    }

    /// `|G| = 2^(n+a+1)`.
    pub fn order(&self) -> usize {
        1 << (self.n + self.a + 1)
    }

    fn gamma_limit(&self) -> u32 {
        1 << self.n
    }

    fn delta_limit(&self) -> u32 {
        1 << self.a
    }

    pub fn contains(&self, x: &SignedMonomial) -> bool {
        x.gamma_mask < self.gamma_limit() && x.delta_mask < self.delta_limit()
    }

    pub fn check(&self, x: &SignedMonomial) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::MaskOutOfRange {
                gamma_mask: x.gamma_mask,
                delta_mask: x.delta_mask,
                n: self.n,
                a: self.a,
            })
        }
    }

    /// Position of `x` in [`enumerate_group`] order.
    pub fn index_of(&self, x: &SignedMonomial) -> usize {
        let sign = usize::from(x.sign.is_minus());
        (((sign << self.a) | x.delta_mask as usize) << self.n) | x.gamma_mask as usize
    }
}

pub(crate) fn log2_exact(value: usize) -> Option<u32> {
    value.is_power_of_two().then(|| value.trailing_zeros())
}

/// `±∏γ_k ∏δ_j`, with generator sets stored as bitmasks (bit `k−1` ↔ `γ_k`).
///
/// Field order makes the derived `Ord` the canonical group order:
/// sign (`+` first), then `δ`-mask, then `γ`-mask, each read as a binary integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedMonomial {
    pub sign: Sign,
    pub delta_mask: u32,
    pub gamma_mask: u32,
}

impl SignedMonomial {
    pub const ONE: SignedMonomial = SignedMonomial::new(Sign::Plus, 0, 0);
    pub const MINUS_ONE: SignedMonomial = SignedMonomial::new(Sign::Minus, 0, 0);

    pub const fn new(sign: Sign, gamma_mask: u32, delta_mask: u32) -> Self {
        Self {
            sign,
            delta_mask,
            gamma_mask,
        }
    }

    /// The generator `γ_k`, 1-based.
    pub fn gamma(k: u32) -> Self {
        Self::new(Sign::Plus, 1 << (k - 1), 0)
    }

    /// The generator `δ_k`, 1-based.
    pub fn delta(k: u32) -> Self {
        Self::new(Sign::Plus, 0, 1 << (k - 1))
    }

    pub fn gamma_degree(&self) -> u32 {
        self.gamma_mask.count_ones()
    }

    /// Member of `G_μ` (no `δ` factor).
    pub fn is_clifford_part(&self) -> bool {
        self.delta_mask == 0
    }

    /// Member of `G_δ` (positive, no `γ` factor).
    pub fn is_delta_part(&self) -> bool {
        self.gamma_mask == 0 && self.sign == Sign::Plus
    }

    pub fn is_plus_or_minus_one(&self) -> bool {
        self.gamma_mask == 0 && self.delta_mask == 0
    }

    /// Splits `s` into `(s₁, s₂)` with `s₁ ∈ G_μ`, `s₂ ∈ G_δ`, `s = s₁s₂`.
    pub fn factor(&self) -> (SignedMonomial, SignedMonomial) {
        (
            SignedMonomial::new(self.sign, self.gamma_mask, 0),
            SignedMonomial::new(Sign::Plus, 0, self.delta_mask),
        )
    }
}

impl Neg for SignedMonomial {
    type Output = SignedMonomial;
    fn neg(self) -> SignedMonomial {
        SignedMonomial::new(-self.sign, self.gamma_mask, self.delta_mask)
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign.is_minus() {
            write!(f, "-")?;
        }
        if self.is_plus_or_minus_one() {
            return write!(f, "1");
        }
        for k in bits(self.gamma_mask) {
            write!(f, "γ{}", k + 1)?;
        }
        for k in bits(self.delta_mask) {
            write!(f, "δ{}", k + 1)?;
        }
        Ok(())
    }
}

fn bits(mask: u32) -> impl Iterator<Item = u32> {
    (0..32).filter(move |b| mask >> b & 1 == 1)
}

/// Sign picked up when the `γ`-word of `x` is followed by the `γ`-word of `y`
/// and reduced to sorted form.
fn gamma_reorder_sign(x_gamma: u32, y_gamma: u32) -> Sign {
    // transpositions needed to sort the concatenated word
    let transpositions: u32 = bits(y_gamma)
        .map(|j| (x_gamma.checked_shr(j + 1).unwrap_or(0)).count_ones())
        .sum();
    // each repeated γ squares to −1
    let squares = (x_gamma & y_gamma).count_ones();
    Sign::from_parity((transpositions + squares) % 2 == 1)
}

pub(crate) fn mul_unchecked(x: &SignedMonomial, y: &SignedMonomial) -> SignedMonomial {
    let sign = x.sign * y.sign * gamma_reorder_sign(x.gamma_mask, y.gamma_mask);
    SignedMonomial::new(sign, x.gamma_mask ^ y.gamma_mask, x.delta_mask ^ y.delta_mask)
}

/// Product `x·y` in `G`.
pub fn mono_mul(x: &SignedMonomial, y: &SignedMonomial, spec: &GroupSpec) -> Result<SignedMonomial> {
    spec.check(x)?;
    spec.check(y)?;
    Ok(mul_unchecked(x, y))
}

/// Two-sided inverse. A degree-`m` `γ`-word picks up `(−1)^⌈m/2⌉`; `δ`-words
/// are involutions.
pub fn inverse(x: &SignedMonomial, spec: &GroupSpec) -> Result<SignedMonomial> {
    spec.check(x)?;
    let m = x.gamma_degree();
    let flip = Sign::from_parity(m.div_ceil(2) % 2 == 1);
    Ok(SignedMonomial::new(x.sign * flip, x.gamma_mask, x.delta_mask))
}

/// All `2^(n+a+1)` elements of `G` in canonical order.
pub fn enumerate_group(spec: &GroupSpec) -> Vec<SignedMonomial> {
    let mut out = Vec::with_capacity(spec.order());
    for sign in [Sign::Plus, Sign::Minus] {
        for delta in 0..spec.delta_limit() {
            for gamma in 0..spec.gamma_limit() {
                out.push(SignedMonomial::new(sign, gamma, delta));
            }
        }
    }
    out
}

/// The `λ = 2^a` positive `δ`-monomials in canonical order `1, δ1, δ2, δ1δ2, δ3, …`.
pub fn delta_monomials(spec: &GroupSpec) -> Vec<SignedMonomial> {
    (0..spec.delta_limit())
        .map(|d| SignedMonomial::new(Sign::Plus, 0, d))
        .collect()
}

/// The sign-positive basis monomials of the algebra.
pub fn basis(spec: &GroupSpec) -> Vec<SignedMonomial> {
    enumerate_group(spec)
        .into_iter()
        .filter(|m| m.sign == Sign::Plus)
        .collect()
}

/// Groups up to this order get every associativity triple checked; larger
/// ones a fixed-seed sample of 20 000 triples.
pub const EXHAUSTIVE_ASSOCIATIVITY_ORDER: usize = 256;

/// Exhaustively checks the group axioms and the `G_μ × G_δ` decomposition.
pub fn verify_group_structure(spec: &GroupSpec) -> VerificationReport {
    verify_group_structure_verbose(spec, false)
}

pub fn verify_group_structure_verbose(spec: &GroupSpec, verbose: bool) -> VerificationReport {
    verify_group_structure_with(spec, verbose, mul_unchecked)
}

/// Same as [`verify_group_structure`] with an arbitrary multiplication rule,
/// so that faulty rules can be exercised.
pub fn verify_group_structure_with<F>(spec: &GroupSpec, verbose: bool, mul: F) -> VerificationReport
where
    F: Fn(&SignedMonomial, &SignedMonomial) -> SignedMonomial,
{
    let elements = enumerate_group(spec);
    let mut report = VerificationReport::new();

    let mut check = CheckBuilder::new("closure", verbose);
    for x in &elements {
        for y in &elements {
            let p = mul(x, y);
            if !spec.contains(&p) {
                check.violation(format!("{x} * {y} = {p} lies outside G"));
            }
        }
    }
    let closed = check.passed();
    report.push(check);

    let mut check = CheckBuilder::new("identity", verbose);
    for x in &elements {
        if mul(&SignedMonomial::ONE, x) != *x || mul(x, &SignedMonomial::ONE) != *x {
            check.violation(format!("1 is not a two-sided identity for {x}"));
        }
    }
    report.push(check);

    let mut check = CheckBuilder::new("associativity", verbose);
    let assoc = |check: &mut CheckBuilder, x: &SignedMonomial, y: &SignedMonomial, z: &SignedMonomial| {
        if mul(&mul(x, y), z) != mul(x, &mul(y, z)) {
            check.violation(format!("({x} * {y}) * {z} != {x} * ({y} * {z})"));
        }
    };
    let order = elements.len();
    if order <= EXHAUSTIVE_ASSOCIATIVITY_ORDER && closed {
        // Cayley table, row-major: table[i * order + j] = index of x_i x_j
        let table: Vec<usize> = elements
            .iter()
            .flat_map(|x| elements.iter().map(|y| spec.index_of(&mul(x, y))))
            .collect();
        'indexed: for i in 0..order {
            for j in 0..order {
                let ij = table[i * order + j];
                for k in 0..order {
                    if table[ij * order + k] != table[i * order + table[j * order + k]] {
                        let (x, y, z) = (elements[i], elements[j], elements[k]);
                        check.violation(format!("({x} * {y}) * {z} != {x} * ({y} * {z})"));
                        if check.saturated() {
                            break 'indexed;
                        }
                    }
                }
            }
        }
    } else if order <= EXHAUSTIVE_ASSOCIATIVITY_ORDER {
        'triples: for x in &elements {
            for y in &elements {
                for z in &elements {
                    assoc(&mut check, x, y, z);
                    if check.saturated() {
                        break 'triples;
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0a55);
        for _ in 0..20_000 {
            let pick = |rng: &mut ChaCha8Rng| elements[rng.random_range(0..elements.len())];
            let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            assoc(&mut check, &x, &y, &z);
        }
    }
    report.push(check);

    let mut check = CheckBuilder::new("inverses", verbose);
    for x in &elements {
        let has_inverse = elements
            .iter()
            .any(|y| mul(x, y) == SignedMonomial::ONE && mul(y, x) == SignedMonomial::ONE);
        if !has_inverse {
            check.violation(format!("{x} has no two-sided inverse"));
        }
    }
    report.push(check);

    let clifford: Vec<_> = elements
        .iter()
        .copied()
        .filter(SignedMonomial::is_clifford_part)
        .collect();
    let deltas: Vec<_> = elements.iter().copied().filter(SignedMonomial::is_delta_part).collect();

    let mut check = CheckBuilder::new("unique factorization", verbose);
    let mut hits = vec![0usize; elements.len()];
    for s1 in &clifford {
        for s2 in &deltas {
            let p = mul(s1, s2);
            if spec.contains(&p) {
                hits[spec.index_of(&p)] += 1;
            }
        }
    }
    for (x, &count) in elements.iter().zip(&hits) {
        if count != 1 {
            check.violation(format!("{x} has {count} factorizations s1*s2"));
        }
    }
    report.push(check);

    let mut check = CheckBuilder::new("commutation", verbose);
    for s1 in &clifford {
        for s2 in &deltas {
            if mul(s1, s2) != mul(s2, s1) {
                check.violation(format!("{s1} and {s2} do not commute"));
            }
        }
    }
    report.push(check);

    report
}

/// Finitely supported real (rational) combination of basis monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    /// `(gamma_mask, delta_mask) → coefficient`; zero coefficients are never stored.
    coefficients: BTreeMap<(u32, u32), Ratio<i64>>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(value: Ratio<i64>) -> Self {
        Self::from_monomial(&SignedMonomial::ONE, value)
    }

    pub fn from_monomial(m: &SignedMonomial, coefficient: Ratio<i64>) -> Self {
        let mut out = Self::zero();
        out.add_term(m.gamma_mask, m.delta_mask, coefficient * m.sign.value());
        out
    }

    fn add_term(&mut self, gamma: u32, delta: u32, c: Ratio<i64>) {
        let entry = self.coefficients.entry((gamma, delta)).or_default();
        *entry += c;
        if *entry == Ratio::from_integer(0) {
            self.coefficients.remove(&(gamma, delta));
        }
    }

    pub fn coefficient(&self, gamma_mask: u32, delta_mask: u32) -> Ratio<i64> {
        self.coefficients
            .get(&(gamma_mask, delta_mask))
            .copied()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (SignedMonomial, Ratio<i64>)> + '_ {
        self.coefficients
            .iter()
            .map(|(&(g, d), &c)| (SignedMonomial::new(Sign::Plus, g, d), c))
    }

    pub fn add(&self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (&(g, d), &c) in &rhs.coefficients {
            out.add_term(g, d, c);
        }
        out
    }

    pub fn mul(&self, rhs: &AlgebraElement, spec: &GroupSpec) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (x, cx) in self.terms() {
            spec.check(&x)?;
            for (y, cy) in rhs.terms() {
                spec.check(&y)?;
                let p = mul_unchecked(&x, &y);
                out.add_term(p.gamma_mask, p.delta_mask, cx * cy * p.sign.value());
            }
        }
        Ok(out)
    }
}
