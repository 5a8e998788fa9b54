//! Exact checks of the CUW conditions, group decodability, unique
//! decodability and the rate formulas.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::constructions::{LinearDesign, Partition};
use crate::error::{Error, Result};
use crate::extended_algebra::{enumerate_group, mul_unchecked, GroupSpec, SignedMonomial};
use crate::linalg_exact::{GaussianInt, GaussianMatrix};

/// Outcome of a single named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// First violation found, if any.
    pub witness: Option<String>,
    /// Every violation; only collected in verbose mode.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub all_witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Default for VerificationReport {
    fn default() -> Self {
        Self::new()
    }
}

impl VerificationReport {
    pub fn new() -> Self {
        Self {
            passed: true,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: CheckBuilder) {
        let check = check.finish();
        self.passed &= check.passed;
        self.checks.push(check);
    }

    /// Appends the checks of `other`, prefixing their names.
    pub fn extend(&mut self, prefix: &str, other: VerificationReport) {
        self.passed &= other.passed;
        self.checks.extend(other.checks.into_iter().map(|mut c| {
            c.name = format!("{prefix}: {}", c.name);
            c
        }));
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            match &c.witness {
                Some(w) => writeln!(f, "[{tag}] {}: {w}", c.name)?,
                None => writeln!(f, "[{tag}] {}", c.name)?,
            }
            for w in c.all_witnesses.iter().skip(1) {
                writeln!(f, "       {w}")?;
            }
        }
        write!(f, "overall: {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// Accumulates the violations of one check.
#[derive(Debug)]
pub struct CheckBuilder {
    name: String,
    verbose: bool,
    first: Option<String>,
    all: Vec<String>,
}

impl CheckBuilder {
    pub fn new(name: &str, verbose: bool) -> Self {
        Self {
            name: name.to_string(),
            verbose,
            first: None,
            all: Vec::new(),
        }
    }

    pub fn violation(&mut self, witness: String) {
        if self.verbose {
            self.all.push(witness.clone());
        }
        if self.first.is_none() {
            self.first = Some(witness);
        }
    }

    /// Lets callers stop scanning once a witness exists.
    pub fn saturated(&self) -> bool {
        !self.verbose && self.first.is_some()
    }

    pub fn passed(&self) -> bool {
        self.first.is_none()
    }

    fn finish(self) -> Check {
        Check {
            passed: self.first.is_none(),
            name: self.name,
            witness: self.first,
            all_witnesses: self.all,
        }
    }
}

/// Rate achieved by a design against the maximal rate for its `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateResult {
    pub k: usize,
    pub nt: usize,
    pub rate: Ratio<u64>,
    pub max_rate: Ratio<u64>,
}

impl RateResult {
    pub fn of(d: &LinearDesign) -> Self {
        Self {
            k: d.k(),
            nt: d.nt,
            rate: d.rate(),
            max_rate: max_rate(d.g).expect("designs have g >= 1"),
        }
    }

    pub fn is_maximal(&self) -> bool {
        self.rate == self.max_rate
    }
}

/// `R_max = g / 2^(⌊(g−1)/2⌋+1)`, independent of `λ`.
pub fn max_rate(g: usize) -> Result<Ratio<u64>> {
    if g == 0 {
        return Err(Error::InvalidGroupCount);
    }
    Ok(Ratio::new(g as u64, 1u64 << ((g - 1) / 2 + 1)))
}

/// Smallest `N_t` for `g` groups of `λ = 2^a` real variables: `λ·2^⌊(g−1)/2⌋`.
pub fn min_nt(g: usize, lambda: usize) -> Result<usize> {
    if g == 0 {
        return Err(Error::InvalidGroupCount);
    }
    if !lambda.is_power_of_two() {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(lambda << ((g - 1) / 2))
}

fn anticommutator_vanishes(a: &GaussianMatrix, b: &GaussianMatrix) -> bool {
    a.mul_square(b).add(&b.mul_square(a)).expect("equal sizes").is_zero()
}

fn commute(a: &GaussianMatrix, b: &GaussianMatrix) -> bool {
    a.mul_square(b) == b.mul_square(a)
}

/// Checks the CUW sufficient conditions exactly.
///
/// Indices in witnesses are 1-based array positions.
pub fn verify_cuw(d: &LinearDesign) -> VerificationReport {
    verify_cuw_verbose(d, false)
}

pub fn verify_cuw_verbose(d: &LinearDesign, verbose: bool) -> VerificationReport {
    let mut report = VerificationReport::new();

    let mut check = CheckBuilder::new("unitary weights", verbose);
    for (i, w) in d.weights.iter().enumerate() {
        if !w.is_unitary() {
            check.violation(format!("weight {} is not unitary", i + 1));
        }
    }
    report.push(check);

    let mut check = CheckBuilder::new("A1 = I", verbose);
    if !d.weights[0].is_identity() {
        check.violation("weight 1 is not the identity".into());
    }
    report.push(check);

    let row = d.first_row();
    let col = d.first_col();
    let minus_one = GaussianInt::new(-1, 0);

    let mut check = CheckBuilder::new("first row squares to -I", verbose);
    for (j, w) in row.iter().enumerate().skip(1) {
        if !w.mul_square(w).is_scalar_identity(minus_one) {
            check.violation(format!("first-row entry {} does not square to -I", j + 1));
        }
    }
    report.push(check);

    let mut check = CheckBuilder::new("first row anticommutes", verbose);
    'outer: for j in 1..row.len() {
        for l in j + 1..row.len() {
            if !anticommutator_vanishes(row[j], row[l]) {
                check.violation(format!("first-row pair ({}, {}) does not anticommute", j + 1, l + 1));
                if check.saturated() {
                    break 'outer;
                }
            }
        }
    }
    report.push(check);

    let mut check = CheckBuilder::new("first column squares to I", verbose);
    for (i, w) in col.iter().enumerate() {
        if !w.mul_square(w).is_identity() {
            check.violation(format!("first-column entry {} does not square to I", i + 1));
        }
    }
    report.push(check);

    let mut check = CheckBuilder::new("first column commutes with first row and column", verbose);
    'outer2: for (i, c) in col.iter().enumerate() {
        for (j, r) in row.iter().enumerate() {
            if !commute(c, r) {
                check.violation(format!(
                    "first-column entry {} does not commute with first-row entry {}",
                    i + 1,
                    j + 1
                ));
            }
        }
        for (l, c2) in col.iter().enumerate().skip(i + 1) {
            if !commute(c, c2) {
                check.violation(format!("first-column entries {} and {} do not commute", i + 1, l + 1));
            }
        }
        if check.saturated() {
            break 'outer2;
        }
    }
    report.push(check);

    let mut check = CheckBuilder::new("fill rule", verbose);
    for (j, r) in row.iter().enumerate() {
        for (i, c) in col.iter().enumerate() {
            if *d.weight_at(i, j) != c.mul_square(r) {
                check.violation(format!(
                    "weight {} at array position ({}, {}) is not first_col[{}] * first_row[{}]",
                    d.flat_index(i, j) + 1,
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                ));
            }
        }
    }
    report.push(check);

    report
}

/// Checks `A_iᴴA_j + A_jᴴA_i = 0` for every pair of variables in different
/// groups, the condition under which the ML metric splits along `partition`.
pub fn verify_partition_decodable(d: &LinearDesign, partition: &Partition) -> Result<VerificationReport> {
    verify_partition_decodable_verbose(d, partition, false)
}

pub fn verify_partition_decodable_verbose(
    d: &LinearDesign,
    partition: &Partition,
    verbose: bool,
) -> Result<VerificationReport> {
    if partition.k() != d.k() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} indices, design has {}",
            partition.k(),
            d.k()
        )));
    }
    let membership = partition.membership();
    let adjoints: Vec<_> = d.weights.iter().map(GaussianMatrix::conj_transpose).collect();
    let mut check = CheckBuilder::new("cross-group Hermitian anticommutators vanish", verbose);
    'outer: for i in 0..d.k() {
        for j in i + 1..d.k() {
            if membership[i] == membership[j] {
                continue;
            }
            let sum = adjoints[i]
                .mul_square(&d.weights[j])
                .add(&adjoints[j].mul_square(&d.weights[i]))
                .expect("equal sizes");
            if !sum.is_zero() {
                check.violation(format!(
                    "variables {} (group {}) and {} (group {}) interact",
                    i + 1,
                    membership[i] + 1,
                    j + 1,
                    membership[j] + 1
                ));
                if check.saturated() {
                    break 'outer;
                }
            }
        }
    }
    let mut report = VerificationReport::new();
    report.push(check);
    Ok(report)
}

/// A map from the group `G` to matrices.
pub trait GroupRepresentation {
    /// `None` when the element has no image.
    fn image(&self, x: &SignedMonomial) -> Option<GaussianMatrix>;
}

impl GroupRepresentation for BTreeMap<SignedMonomial, GaussianMatrix> {
    fn image(&self, x: &SignedMonomial) -> Option<GaussianMatrix> {
        self.get(x).cloned()
    }
}

impl GroupRepresentation for HashMap<SignedMonomial, GaussianMatrix> {
    fn image(&self, x: &SignedMonomial) -> Option<GaussianMatrix> {
        self.get(x).cloned()
    }
}

/// Tabulates a representation over all of `G`.
pub fn tabulate<R: GroupRepresentation>(spec: &GroupSpec, rep: &R) -> Result<BTreeMap<SignedMonomial, GaussianMatrix>> {
    enumerate_group(spec)
        .into_iter()
        .map(|x| {
            rep.image(&x)
                .map(|m| (x, m))
                .ok_or_else(|| Error::IncompleteRepresentation(x.to_string()))
        })
        .collect()
}

/// Checks that `rep` is a non-degenerate homomorphism of `G` with
/// `ρ(x) ≠ ±I` for `x ≠ ±1` and `ρ(x) ≠ ±ρ(y)` for distinct `x, y ∈ G_δ`.
pub fn verify_unique_decodability<R: GroupRepresentation>(spec: &GroupSpec, rep: &R) -> Result<VerificationReport> {
    verify_unique_decodability_verbose(spec, rep, false)
}

pub fn verify_unique_decodability_verbose<R: GroupRepresentation>(
    spec: &GroupSpec,
    rep: &R,
    verbose: bool,
) -> Result<VerificationReport> {
    let missing = |x: &SignedMonomial| Error::IncompleteRepresentation(x.to_string());
    let image = |x: &SignedMonomial| rep.image(x).ok_or_else(|| missing(x));

    let one = image(&SignedMonomial::ONE)?;
    let dim = one.rows();
    let minus_one_image = image(&SignedMonomial::MINUS_ONE)?;

    // -1, γ_1..γ_n, δ_1..δ_a generate G; checking ρ(g·y) = ρ(g)ρ(y) for these
    // g and every y, plus ρ(1) = I, makes ρ a homomorphism.
    let mut generators = vec![SignedMonomial::MINUS_ONE];
    generators.extend((1..=spec.n).map(SignedMonomial::gamma));
    generators.extend((1..=spec.a).map(SignedMonomial::delta));
    let generator_images = generators.iter().map(image).collect::<Result<Vec<_>>>()?;

    let mut homomorphism = CheckBuilder::new("homomorphism", verbose);
    if !one.is_identity() {
        homomorphism.violation("rho(1) is not the identity".into());
    }
    let mut shape_ok = true;
    let mut not_scalar = CheckBuilder::new("rho(x) != +-I for x != +-1", verbose);
    let minus = GaussianInt::new(-1, 0);
    for y in enumerate_group(spec) {
        let image_y = image(&y)?;
        if image_y.rows() != dim || image_y.cols() != dim {
            shape_ok = false;
            homomorphism.violation(format!("rho({y}) has the wrong shape"));
            continue;
        }
        if !y.is_plus_or_minus_one() && (image_y.is_identity() || image_y.is_scalar_identity(minus)) {
            not_scalar.violation(format!("rho({y}) = {}I", if image_y.is_identity() { "" } else { "-" }));
        }
        if homomorphism.saturated() {
            continue;
        }
        for (gen, gen_image) in generators.iter().zip(&generator_images) {
            let product = mul_unchecked(gen, &y);
            if image(&product)? != gen_image.mul_square(&image_y) {
                homomorphism.violation(format!("rho({gen} * {y}) != rho({gen}) rho({y})"));
                break;
            }
        }
    }

    let mut report = VerificationReport::new();
    report.push(homomorphism);
    let mut degenerate = CheckBuilder::new("non-degenerate: rho(-1) = -rho(1)", verbose);
    if shape_ok && minus_one_image != one.neg() {
        degenerate.violation("rho(-1) != -rho(1)".into());
    }
    report.push(degenerate);
    report.push(not_scalar);

    let mut distinct = CheckBuilder::new("rho(x) != +-rho(y) for x != y in G_delta", verbose);
    let deltas: Vec<_> = enumerate_group(spec)
        .into_iter()
        .filter(SignedMonomial::is_delta_part)
        .collect();
    let delta_images = deltas.iter().map(image).collect::<Result<Vec<_>>>()?;
    for i in 0..deltas.len() {
        for j in i + 1..deltas.len() {
            if delta_images[i] == delta_images[j] || delta_images[i] == delta_images[j].neg() {
                distinct.violation(format!("rho({}) = +-rho({})", deltas[i], deltas[j]));
            }
        }
    }
    report.push(distinct);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford_rep::gamma_family;
    use crate::constructions::{
        abba_construction, assemble_array, blockdiag_construction, blockdiag_representation,
        irreducible_representation, tensor_construction, DeltaStyle, SlotDesign,
    };

    fn gi(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn max_rate_values() {
        assert_eq!(max_rate(1).unwrap(), Ratio::new(1, 2));
        assert_eq!(max_rate(2).unwrap(), Ratio::from_integer(1));
        assert_eq!(max_rate(5).unwrap(), Ratio::new(5, 8));
        assert!(max_rate(0).is_err());
    }

    #[test]
    fn min_nt_values() {
        assert_eq!(min_nt(4, 2).unwrap(), 4);
        assert_eq!(min_nt(2, 2).unwrap(), 2);
        assert_eq!(min_nt(5, 4).unwrap(), 16);
        assert!(matches!(min_nt(3, 6), Err(Error::InvalidLambda(6))));
    }

    #[test]
    fn blockdiag_meets_rate_and_size() {
        for g in 1..=8 {
            for lambda in [2, 4, 8] {
                let d = blockdiag_construction(g, lambda).unwrap();
                let r = RateResult::of(&d);
                assert!(r.is_maximal(), "g={g} λ={lambda}");
                assert_eq!(r.nt, min_nt(g, lambda).unwrap());
            }
        }
    }

    #[test]
    fn cuw_passes_for_blockdiag_3_2() {
        let report = verify_cuw(&blockdiag_construction(3, 2).unwrap());
        assert!(report.passed, "{report}");
        assert_eq!(report.checks.len(), 7);
    }

    #[test]
    fn alamouti_as_single_row_design() {
        let f = gamma_family(2);
        let g12 = f.matrices[0].mat_mul(&f.matrices[1]).unwrap();
        let row = vec![
            GaussianMatrix::identity(2),
            f.matrices[0].clone(),
            f.matrices[1].clone(),
            g12,
        ];
        let d = assemble_array(&row, &[GaussianMatrix::identity(2)]).unwrap();
        assert_eq!((d.g, d.lambda), (4, 1));
        assert!(verify_cuw(&d).passed);
    }

    #[test]
    fn commuting_first_row_is_witnessed() {
        let row = vec![
            GaussianMatrix::identity(2),
            GaussianMatrix::scalar_identity(2, GaussianInt::I),
            GaussianMatrix::diagonal(&[gi(0, 1), gi(0, -1)]),
        ];
        let d = assemble_array(&row, &[GaussianMatrix::identity(2)]).unwrap();
        let report = verify_cuw(&d);
        assert!(!report.passed);
        let failure = report.first_failure().unwrap();
        assert_eq!(failure.name, "first row anticommutes");
        assert_eq!(
            failure.witness.as_deref(),
            Some("first-row pair (2, 3) does not anticommute")
        );
    }

    #[test]
    fn broken_fill_rule_and_unitarity_are_caught() {
        let mut d = blockdiag_construction(3, 2).unwrap();
        d.weights[3] = d.weights[3].neg();
        let report = verify_cuw(&d);
        assert!(!report.check("fill rule").unwrap().passed);
        assert!(report.check("unitary weights").unwrap().passed);

        let mut d = blockdiag_construction(2, 2).unwrap();
        d.weights[1] = d.weights[1].scale(gi(2, 0));
        let report = verify_cuw(&d);
        assert_eq!(
            report.check("unitary weights").unwrap().witness.as_deref(),
            Some("weight 2 is not unitary")
        );
    }

    #[test]
    fn non_commuting_first_column_is_caught() {
        // a first column that anticommutes with the first row
        let f = gamma_family(3);
        let row = vec![GaussianMatrix::identity(2), f.matrices[0].clone()];
        let x = GaussianMatrix::from_real(&[&[0, 1], &[1, 0]]).unwrap();
        let d = assemble_array(&row, &[GaussianMatrix::identity(2), x]).unwrap();
        let report = verify_cuw(&d);
        assert!(
            !report
                .check("first column commutes with first row and column")
                .unwrap()
                .passed
        );
        assert!(report.check("first column squares to I").unwrap().passed);
    }

    #[test]
    fn verbose_collects_every_witness() {
        let row = vec![
            GaussianMatrix::identity(1),
            GaussianMatrix::scalar_identity(1, GaussianInt::I),
            GaussianMatrix::scalar_identity(1, GaussianInt::I),
            GaussianMatrix::scalar_identity(1, GaussianInt::I),
        ];
        let d = assemble_array(&row, &[GaussianMatrix::identity(1)]).unwrap();
        let quiet = verify_cuw(&d);
        let loud = verify_cuw_verbose(&d, true);
        assert!(quiet.check("first row anticommutes").unwrap().all_witnesses.is_empty());
        assert_eq!(loud.check("first row anticommutes").unwrap().all_witnesses.len(), 3);
    }

    fn abba4() -> LinearDesign {
        abba_construction(&SlotDesign::alamouti(), 1).unwrap()
    }

    #[test]
    fn abba_regrouping() {
        let d = abba4();
        // flat order: x1I x3I x1Q x3Q x2I x4I x2Q x4Q
        let regrouped = Partition::from_one_based(&[vec![1, 2], vec![3, 4], vec![5, 6], vec![7, 8]], 8).unwrap();
        assert!(verify_partition_decodable(&d, &regrouped).unwrap().passed);
        let naive = Partition::from_one_based(&[vec![1, 3], vec![5, 7], vec![2, 4], vec![6, 8]], 8).unwrap();
        let report = verify_partition_decodable(&d, &naive).unwrap();
        assert!(!report.passed);
        // x1 and x3 pooled, x2 and x4 pooled
        let coarse = naive.coarsen(&[vec![0, 2], vec![1, 3]]).unwrap();
        assert!(verify_partition_decodable(&d, &coarse).unwrap().passed);
    }

    #[test]
    fn single_group_always_passes() {
        let d = abba4();
        assert!(
            verify_partition_decodable(&d, &Partition::single_group(8))
                .unwrap()
                .passed
        );
        let bad = Partition::single_group(4);
        assert!(verify_partition_decodable(&d, &bad).is_err());
    }

    #[test]
    fn default_partition_passes_whenever_cuw_passes() {
        for g in 1..=5 {
            for lambda in [1, 2, 4] {
                for d in [
                    blockdiag_construction(g, lambda).unwrap(),
                    tensor_construction(g, lambda, DeltaStyle::Regular).unwrap(),
                ] {
                    assert!(verify_cuw(&d).passed);
                    assert!(verify_partition_decodable(&d, &d.partition).unwrap().passed);
                }
            }
        }
    }

    #[test]
    fn blockdiag_representation_is_uniquely_decodable() {
        let spec = GroupSpec::new(2, 1);
        let rep = blockdiag_representation(3, 2).unwrap();
        let table = tabulate(&spec, &rep).unwrap();
        assert_eq!(table.len(), 16);
        let report = verify_unique_decodability(&spec, &table).unwrap();
        assert!(report.passed, "{report}");
    }

    #[test]
    fn central_gamma_product_breaks_condition_one() {
        // n = 3: γ1γ2γ3 is central, so an irreducible Clifford block maps it to ±I
        let spec = GroupSpec::new(3, 1);
        let rep = blockdiag_representation(4, 2).unwrap();
        let table = tabulate(&spec, &rep).unwrap();
        assert_eq!(table.len(), 32);
        let report = verify_unique_decodability(&spec, &table).unwrap();
        assert!(report.check("homomorphism").unwrap().passed);
        assert!(report.check("rho(x) != +-rho(y) for x != y in G_delta").unwrap().passed);
        let failed = report.check("rho(x) != +-I for x != +-1").unwrap();
        assert_eq!(failed.witness.as_deref(), Some("rho(γ1γ2γ3) = -I"));
    }

    #[test]
    fn mixed_character_representation_passes_at_lambda_four() {
        // ω = γ1γ2γ3 takes both signs across blocks, so no element maps to ±I
        let spec = GroupSpec::new(3, 2);
        let d = |v: [i64; 4]| GaussianMatrix::diagonal(&v.map(|x| gi(x, 0)));
        let gammas = gamma_family(3)
            .matrices
            .iter()
            .map(|g| d([1, 1, 1, -1]).kron(g))
            .collect();
        let i2 = GaussianMatrix::identity(2);
        let deltas = vec![d([1, -1, 1, 1]).kron(&i2), d([1, 1, -1, 1]).kron(&i2)];
        let rep = crate::constructions::GeneratorRepresentation::new(spec, gammas, deltas).unwrap();
        assert_eq!(rep.dim, min_nt(4, 4).unwrap());
        let report = verify_unique_decodability(&spec, &rep).unwrap();
        assert!(report.passed, "{report}");
    }

    #[test]
    fn delta_mapped_to_identity_fails_distinctness() {
        let spec = GroupSpec::new(3, 1);
        let mut table = tabulate(&spec, &blockdiag_representation(4, 2).unwrap()).unwrap();
        let dim = table[&SignedMonomial::ONE].rows();
        table.insert(SignedMonomial::delta(1), GaussianMatrix::identity(dim));
        let report = verify_unique_decodability(&spec, &table).unwrap();
        assert!(!report.check("rho(x) != +-rho(y) for x != y in G_delta").unwrap().passed);
    }

    #[test]
    fn irreducible_representations_fail() {
        for g in 1..=6 {
            for character in [0, 1] {
                let rep = irreducible_representation(g, 2, character).unwrap();
                let report = verify_unique_decodability(&rep.spec, &rep).unwrap();
                assert!(report.check("homomorphism").unwrap().passed);
                assert!(!report.passed, "g={g} character={character}");
            }
        }
    }

    #[test]
    fn degenerate_representation_is_flagged() {
        let spec = GroupSpec::new(0, 1);
        let rep = crate::constructions::GeneratorRepresentation::with_minus_one(
            spec,
            2,
            vec![],
            vec![GaussianMatrix::diagonal(&[gi(1, 0), gi(-1, 0)])],
            GaussianMatrix::identity(2),
        )
        .unwrap();
        let report = verify_unique_decodability(&spec, &rep).unwrap();
        assert!(!report.check("non-degenerate: rho(-1) = -rho(1)").unwrap().passed);
    }

    #[test]
    fn broken_homomorphism_is_flagged() {
        let spec = GroupSpec::new(2, 0);
        let mut table = tabulate(&spec, &blockdiag_representation(3, 1).unwrap()).unwrap();
        let g12 = SignedMonomial::new(crate::extended_algebra::Sign::Plus, 0b11, 0);
        let flipped = table[&g12].neg();
        table.insert(g12, flipped);
        let report = verify_unique_decodability(&spec, &table).unwrap();
        assert!(!report.check("homomorphism").unwrap().passed);
    }

    #[test]
    fn incomplete_map_is_an_error() {
        let spec = GroupSpec::new(1, 1);
        let mut table = tabulate(&spec, &blockdiag_representation(2, 2).unwrap()).unwrap();
        table.remove(&SignedMonomial::new(crate::extended_algebra::Sign::Minus, 1, 1));
        assert!(matches!(
            verify_unique_decodability(&spec, &table),
            Err(Error::IncompleteRepresentation(_))
        ));
    }

    /// Groups indices by label, dropping unused labels.
    fn from_labels(labels: &[usize]) -> Partition {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(i);
        }
        Partition::new(groups.into_values().collect(), labels.len()).unwrap()
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn coarsening_a_passing_partition_keeps_it_passing(
            choice in 0usize..4,
            merge in proptest::collection::vec(0usize..3, 8),
        ) {
            let d = match choice {
                0 => blockdiag_construction(4, 2).unwrap(),
                1 => tensor_construction(3, 2, DeltaStyle::Regular).unwrap(),
                2 => abba_construction(&SlotDesign::alamouti(), 1).unwrap(),
                _ => blockdiag_construction(2, 4).unwrap(),
            };
            proptest::prop_assert!(verify_partition_decodable(&d, &d.partition).unwrap().passed);
            let labels: Vec<usize> = d.partition.membership().iter().map(|&g| merge[g]).collect();
            let coarse = from_labels(&labels);
            proptest::prop_assert!(verify_partition_decodable(&d, &coarse).unwrap().passed);
        }

        #[test]
        fn refinement_monotonicity_on_arbitrary_partitions(
            labels in proptest::collection::vec(0usize..4, 8),
            merge in proptest::collection::vec(0usize..2, 4),
        ) {
            let d = abba_construction(&SlotDesign::alamouti(), 1).unwrap();
            let fine = from_labels(&labels);
            let coarse = from_labels(&labels.iter().map(|&l| merge[l]).collect::<Vec<_>>());
            if verify_partition_decodable(&d, &fine).unwrap().passed {
                proptest::prop_assert!(verify_partition_decodable(&d, &coarse).unwrap().passed);
            }
            if !verify_partition_decodable(&d, &coarse).unwrap().passed {
                proptest::prop_assert!(!verify_partition_decodable(&d, &fine).unwrap().passed);
            }
        }
    }
}
