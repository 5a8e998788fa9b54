//! Maximal-rate CUW linear designs.
//!
//! A design with `g` groups of `λ` real variables stores its `K = gλ` weight
//! matrices in array layout: array row `i` (a `δ`-monomial) and column `j`
//! (`1` or a `γ` generator) map to flat index `j·λ + i` (0-based). The weight
//! at `(i, j)` is `first_col[i] · first_row[j]`, and the default partition
//! groups each array column.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use crate::clifford_rep::{gamma_family, verify_hr_family};
use crate::error::{Error, Result};
use crate::extended_algebra::{delta_monomials, GroupSpec, Sign, SignedMonomial};
use crate::linalg_exact::{GaussianInt, GaussianMatrix};
use crate::verifier::GroupRepresentation;

/// A disjoint cover of the variable indices `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    k: usize,
    groups: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates that `groups` are non-empty, disjoint and cover `0..k`.
    pub fn new(groups: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        let mut seen = vec![false; k];
        for (gi, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidPartition(format!("group {} is empty", gi + 1)));
            }
            for &idx in group {
                if idx >= k {
                    return Err(Error::InvalidPartition(format!(
                        "index {} out of range 1..={k}",
                        idx + 1
                    )));
                }
                if std::mem::replace(&mut seen[idx], true) {
                    return Err(Error::InvalidPartition(format!("index {} appears twice", idx + 1)));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {} is not covered", missing + 1)));
        }
        Ok(Self { k, groups })
    }

    /// Same as [`Partition::new`] with 1-based indices.
    pub fn from_one_based(groups: &[Vec<usize>], k: usize) -> Result<Self> {
        let shifted = groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&i| {
                        i.checked_sub(1)
                            .ok_or_else(|| Error::InvalidPartition("indices are 1-based".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(shifted, k)
    }

    /// Each array column is one group.
    pub fn columns(g: usize, lambda: usize) -> Self {
        let groups = (0..g).map(|j| (j * lambda..(j + 1) * lambda).collect()).collect();
        Self { k: g * lambda, groups }
    }

    pub fn single_group(k: usize) -> Self {
        Self {
            k,
            groups: vec![(0..k).collect()],
        }
    }

    pub fn singletons(k: usize) -> Self {
        Self {
            k,
            groups: (0..k).map(|i| vec![i]).collect(),
        }
    }

    /// Merges groups: `merge[m]` lists the indices of the groups forming new group `m`.
    pub fn coarsen(&self, merge: &[Vec<usize>]) -> Result<Self> {
        let groups = merge
            .iter()
            .map(|ids| {
                ids.iter()
                    .map(|&g| {
                        self.groups
                            .get(g)
                            .cloned()
                            .ok_or_else(|| Error::InvalidPartition(format!("no group {}", g + 1)))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(|parts| parts.concat())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(groups, self.k)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Group number of every variable index.
    pub fn membership(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for (gi, group) in self.groups.iter().enumerate() {
            for &i in group {
                out[i] = gi;
            }
        }
        out
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.groups.iter().map(|g| g.iter().map(|i| i + 1).collect()).collect()
    }
}

/// Which construction produced a design, with its integer/string parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Origin {
    pub method: String,
    pub params: BTreeMap<String, String>,
}

impl Origin {
    pub fn new(method: &str, params: &[(&str, String)]) -> Self {
        Self {
            method: method.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        }
    }
}

/// `S = Σ x_i A_i` with weights in array layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearDesign {
    pub nt: usize,
    pub lambda: usize,
    pub g: usize,
    pub weights: Vec<GaussianMatrix>,
    pub partition: Partition,
    pub origin: Origin,
}

impl LinearDesign {
    /// Checks the structural invariants. Algebraic conditions are left to the verifier.
    pub fn new(
        nt: usize,
        lambda: usize,
        g: usize,
        weights: Vec<GaussianMatrix>,
        partition: Partition,
        origin: Origin,
    ) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidGroupCount);
        }
        if !lambda.is_power_of_two() {
            return Err(Error::InvalidLambda(lambda));
        }
        if weights.len() != g * lambda {
            return Err(Error::InvalidArray(format!(
                "expected K = g*lambda = {} weights, got {}",
                g * lambda,
                weights.len()
            )));
        }
        if nt == 0 {
            return Err(Error::InvalidArray("nt must be positive".into()));
        }
        if let Some(i) = weights.iter().position(|w| w.rows() != nt || w.cols() != nt) {
            return Err(Error::InvalidArray(format!("weight {} is not {nt}x{nt}", i + 1)));
        }
        if partition.k() != weights.len() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} indices, design has {}",
                partition.k(),
                weights.len()
            )));
        }
        Ok(Self {
            nt,
            lambda,
            g,
            weights,
            partition,
            origin,
        })
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    /// Flat index of array position `(row, col)`, both 0-based.
    pub fn flat_index(&self, row: usize, col: usize) -> usize {
        col * self.lambda + row
    }

    pub fn weight_at(&self, row: usize, col: usize) -> &GaussianMatrix {
        &self.weights[self.flat_index(row, col)]
    }

    pub fn first_row(&self) -> Vec<&GaussianMatrix> {
        (0..self.g).map(|j| self.weight_at(0, j)).collect()
    }

    pub fn first_col(&self) -> Vec<&GaussianMatrix> {
        (0..self.lambda).map(|i| self.weight_at(i, 0)).collect()
    }

    /// `K / (2 N_t)` complex symbols per channel use.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.k() as u64, 2 * self.nt as u64)
    }

    pub fn with_partition(mut self, partition: Partition) -> Result<Self> {
        if partition.k() != self.k() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} indices, design has {}",
                partition.k(),
                self.k()
            )));
        }
        self.partition = partition;
        Ok(self)
    }
}

fn square_dim(mats: &[GaussianMatrix]) -> Result<usize> {
    let dim = mats[0].rows();
    for m in mats {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::DimensionMismatch {
                op: "assemble_array",
                left: (dim, dim),
                right: (m.rows(), m.cols()),
            });
        }
    }
    Ok(dim)
}

/// Fills the weight array from its first row (`g` matrices) and first column
/// (`λ` matrices); both must start with the identity.
pub fn assemble_array(first_row: &[GaussianMatrix], first_col: &[GaussianMatrix]) -> Result<LinearDesign> {
    if first_row.is_empty() || first_col.is_empty() {
        return Err(Error::InvalidArray(
            "first row and first column must be non-empty".into(),
        ));
    }
    let dim = square_dim(first_row)?;
    let col_dim = square_dim(first_col)?;
    if dim != col_dim {
        return Err(Error::DimensionMismatch {
            op: "assemble_array",
            left: (dim, dim),
            right: (col_dim, col_dim),
        });
    }
    if !first_row[0].is_identity() || !first_col[0].is_identity() {
        return Err(Error::InvalidArray("leading weight must be the identity".into()));
    }
    let (g, lambda) = (first_row.len(), first_col.len());
    let mut weights = Vec::with_capacity(g * lambda);
    for row_weight in first_row {
        for col_weight in first_col {
            weights.push(col_weight.mul_square(row_weight));
        }
    }
    LinearDesign::new(
        dim,
        lambda,
        g,
        weights,
        Partition::columns(g, lambda),
        Origin::new("array", &[]),
    )
}

/// A group representation given by the images of its generators.
///
/// Images of arbitrary elements are ordered products `ρ(±1)·∏ρ(γ_k)·∏ρ(δ_j)`.
/// `minus_one` is normally `−I`; any other value yields a degenerate
/// representation.
#[derive(Clone, Debug)]
pub struct GeneratorRepresentation {
    pub spec: GroupSpec,
    pub dim: usize,
    pub gammas: Vec<GaussianMatrix>,
    pub deltas: Vec<GaussianMatrix>,
    pub minus_one: GaussianMatrix,
    gamma_words: Vec<GaussianMatrix>,
    delta_words: Vec<GaussianMatrix>,
}

fn ordered_products(generators: &[GaussianMatrix], dim: usize) -> Vec<GaussianMatrix> {
    let mut words = vec![GaussianMatrix::identity(dim)];
    // words[mask | bit] = words[mask] · generator, where bit is above every bit of mask
    for (k, gen) in generators.iter().enumerate() {
        let extended: Vec<_> = words.iter().map(|w| w.mul_square(gen)).collect();
        words.extend(extended);
        debug_assert_eq!(words.len(), 1 << (k + 1));
    }
    words
}

impl GeneratorRepresentation {
    pub fn new(spec: GroupSpec, gammas: Vec<GaussianMatrix>, deltas: Vec<GaussianMatrix>) -> Result<Self> {
        let dim = gammas.first().or(deltas.first()).map_or(1, GaussianMatrix::rows);
        Self::with_minus_one(
            spec,
            dim,
            gammas,
            deltas,
            GaussianMatrix::scalar_identity(dim, GaussianInt::new(-1, 0)),
        )
    }

    pub fn with_minus_one(
        spec: GroupSpec,
        dim: usize,
        gammas: Vec<GaussianMatrix>,
        deltas: Vec<GaussianMatrix>,
        minus_one: GaussianMatrix,
    ) -> Result<Self> {
        if gammas.len() != spec.n as usize || deltas.len() != spec.a as usize {
            return Err(Error::InvalidArray(format!(
                "expected {} gamma and {} delta images, got {} and {}",
                spec.n,
                spec.a,
                gammas.len(),
                deltas.len()
            )));
        }
        for m in gammas.iter().chain(&deltas).chain(std::iter::once(&minus_one)) {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch {
                    op: "representation",
                    left: (dim, dim),
                    right: (m.rows(), m.cols()),
                });
            }
        }
        let gamma_words = ordered_products(&gammas, dim);
        let delta_words = ordered_products(&deltas, dim);
        Ok(Self {
            spec,
            dim,
            gammas,
            deltas,
            minus_one,
            gamma_words,
            delta_words,
        })
    }

    /// Images of the positive `δ`-monomials in canonical order.
    pub fn delta_images(&self) -> Vec<GaussianMatrix> {
        delta_monomials(&self.spec)
            .iter()
            .map(|d| self.delta_words[d.delta_mask as usize].clone())
            .collect()
    }

    /// Array design with first row `{I, ρ(γ_1), …}` and first column `ρ(G_δ)`.
    pub fn to_design(&self, origin: Origin) -> Result<LinearDesign> {
        let mut first_row = vec![GaussianMatrix::identity(self.dim)];
        first_row.extend(self.gammas.iter().cloned());
        let mut design = assemble_array(&first_row, &self.delta_images())?;
        design.origin = origin;
        Ok(design)
    }
}

impl GroupRepresentation for GeneratorRepresentation {
    fn image(&self, x: &SignedMonomial) -> Option<GaussianMatrix> {
        if !self.spec.contains(x) {
            return None;
        }
        let word = self.gamma_words[x.gamma_mask as usize].mul_square(&self.delta_words[x.delta_mask as usize]);
        Some(match x.sign {
            Sign::Plus => word,
            Sign::Minus => self.minus_one.mul_square(&word),
        })
    }
}

fn pauli_z() -> GaussianMatrix {
    GaussianMatrix::diagonal(&[GaussianInt::ONE, GaussianInt::new(-1, 0)])
}

fn pauli_x() -> GaussianMatrix {
    GaussianMatrix::from_real(&[&[0, 1], &[1, 0]]).expect("2x2")
}

/// `I_{2^(k−1)} ⊗ base ⊗ I_{2^(a−k)}` for 1-based `k`.
fn embed_factor(base: &GaussianMatrix, k: u32, a: u32) -> GaussianMatrix {
    GaussianMatrix::identity(1 << (k - 1))
        .kron(base)
        .kron(&GaussianMatrix::identity(1 << (a - k)))
}

/// How the commuting involutions `ρ(δ_k)` are realised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaStyle {
    /// `D_k = I ⊗ diag(1,−1) ⊗ I`, simultaneously diagonal.
    Diagonal,
    /// `P_k = I ⊗ [[0,1],[1,0]] ⊗ I`, the left-regular representation of `C₂^a`.
    Regular,
}

impl DeltaStyle {
    pub fn name(self) -> &'static str {
        match self {
            DeltaStyle::Diagonal => "diagonal",
            DeltaStyle::Regular => "regular",
        }
    }
}

impl fmt::Display for DeltaStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DeltaStyle {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "diagonal" => Ok(DeltaStyle::Diagonal),
            "regular" => Ok(DeltaStyle::Regular),
            other => Err(format!("unknown delta style {other:?} (expected diagonal or regular)")),
        }
    }
}

/// `ρ(γ_i) = I_λ ⊗ γ_i`, `ρ(δ_k) = (commuting involution)_k ⊗ I_m`, with
/// `m = 2^⌊(g−1)/2⌋`.
pub fn tensor_representation(g: usize, lambda: usize, style: DeltaStyle) -> Result<GeneratorRepresentation> {
    let spec = GroupSpec::for_code(g, lambda)?;
    let family = gamma_family(spec.n as usize);
    let m = family.dim;
    let id_lambda = GaussianMatrix::identity(lambda);
    let id_m = GaussianMatrix::identity(m);
    let gammas = family.matrices.iter().map(|gm| id_lambda.kron(gm)).collect();
    let base = match style {
        DeltaStyle::Diagonal => pauli_z(),
        DeltaStyle::Regular => pauli_x(),
    };
    let deltas = (1..=spec.a)
        .map(|k| embed_factor(&base, k, spec.a).kron(&id_m))
        .collect();
    GeneratorRepresentation::new(spec, gammas, deltas)
}

/// The smallest reducible representation meeting the unique-decodability
/// conditions: `λ` diagonal blocks of the irreducible Clifford representation
/// with `±1` characters of `G_δ`.
pub fn blockdiag_representation(g: usize, lambda: usize) -> Result<GeneratorRepresentation> {
    tensor_representation(g, lambda, DeltaStyle::Diagonal)
}

/// Irreducible representation `ρ₁ ⊗ χ` of `G`: the Clifford representation
/// in dimension `2^⌊(g−1)/2⌋` with `δ_k ↦ ±I` according to the character
/// bitmask (`bit k−1` set means `δ_k ↦ −I`).
pub fn irreducible_representation(g: usize, lambda: usize, character: u32) -> Result<GeneratorRepresentation> {
    let spec = GroupSpec::for_code(g, lambda)?;
    let family = gamma_family(spec.n as usize);
    let m = family.dim;
    let deltas = (0..spec.a)
        .map(|k| {
            let s = if character >> k & 1 == 1 { -1 } else { 1 };
            GaussianMatrix::scalar_identity(m, GaussianInt::new(s, 0))
        })
        .collect();
    GeneratorRepresentation::with_minus_one(
        spec,
        m,
        family.matrices,
        deltas,
        GaussianMatrix::scalar_identity(m, GaussianInt::new(-1, 0)),
    )
}

/// Block-diagonal construction achieving the maximal rate with
/// `N_t = λ·2^⌊(g−1)/2⌋`.
pub fn blockdiag_construction(g: usize, lambda: usize) -> Result<LinearDesign> {
    blockdiag_representation(g, lambda)?.to_design(Origin::new(
        "blockdiag",
        &[("g", g.to_string()), ("lambda", lambda.to_string())],
    ))
}

/// Tensor-product construction; the diagonal style coincides with
/// [`blockdiag_construction`].
pub fn tensor_construction(g: usize, lambda: usize, style: DeltaStyle) -> Result<LinearDesign> {
    tensor_representation(g, lambda, style)?.to_design(Origin::new(
        "tensor",
        &[
            ("delta_style", style.name().to_string()),
            ("g", g.to_string()),
            ("lambda", lambda.to_string()),
        ],
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlotKind {
    Scalar,
    Alamouti,
    Custom,
}

impl SlotKind {
    pub fn name(self) -> &'static str {
        match self {
            SlotKind::Scalar => "scalar",
            SlotKind::Alamouti => "alamouti",
            SlotKind::Custom => "custom",
        }
    }
}

/// The weight set of a complex orthogonal design filling each block slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotDesign {
    pub kind: SlotKind,
    pub size: usize,
    /// `weights[0] = I`, the rest a Hurwitz-Radon family.
    pub weights: Vec<GaussianMatrix>,
    /// `(in-phase, quadrature)` weight indices of each complex slot symbol,
    /// when the slot is written in complex symbols.
    pub symbols: Vec<(usize, usize)>,
}

impl SlotDesign {
    /// One complex symbol `c = c_I + i·c_Q` as a `1×1` block.
    pub fn scalar() -> Self {
        Self {
            kind: SlotKind::Scalar,
            size: 1,
            weights: vec![
                GaussianMatrix::identity(1),
                GaussianMatrix::scalar_identity(1, GaussianInt::I),
            ],
            symbols: vec![(0, 1)],
        }
    }

    /// `[[x1, −x2*], [x2, x1*]]` with weight order `x1I, x1Q, x2I, x2Q`.
    pub fn alamouti() -> Self {
        let w = |rows: Vec<Vec<(i64, i64)>>| GaussianMatrix::from_pairs(&rows).expect("2x2");
        Self {
            kind: SlotKind::Alamouti,
            size: 2,
            weights: vec![
                GaussianMatrix::identity(2),
                w(vec![vec![(0, 1), (0, 0)], vec![(0, 0), (0, -1)]]),
                w(vec![vec![(0, 0), (-1, 0)], vec![(1, 0), (0, 0)]]),
                w(vec![vec![(0, 0), (0, 1)], vec![(0, 1), (0, 0)]]),
            ],
            symbols: vec![(0, 1), (2, 3)],
        }
    }

    /// Any weight set `{I} ∪ HR family`, validated exactly.
    pub fn custom(weights: Vec<GaussianMatrix>) -> Result<Self> {
        let first = weights.first().ok_or_else(|| Error::InvalidSlot("no weights".into()))?;
        if !first.is_identity() {
            return Err(Error::InvalidSlot("first weight must be the identity".into()));
        }
        let report = verify_hr_family(&weights[1..]);
        if !report.passed {
            return Err(Error::InvalidSlot(report.to_string()));
        }
        Ok(Self {
            kind: SlotKind::Custom,
            size: first.rows(),
            weights,
            symbols: Vec::new(),
        })
    }

    /// `{I} ∪ gamma_family(g − 1)`, a COD with `g` real variables.
    pub fn clifford(g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidGroupCount);
        }
        let family = gamma_family(g - 1);
        let mut weights = vec![GaussianMatrix::identity(family.dim)];
        weights.extend(family.matrices);
        Self::custom(weights)
    }

    fn validate(&self) -> Result<()> {
        if self.weights.is_empty() || !self.weights[0].is_identity() || self.weights[0].rows() != self.size {
            return Err(Error::InvalidSlot(
                "first weight must be the identity of the slot size".into(),
            ));
        }
        let report = verify_hr_family(&self.weights[1..]);
        if !report.passed {
            return Err(Error::InvalidSlot(report.to_string()));
        }
        Ok(())
    }
}

/// Slot-variable-set index carried by each block of the left-regular pattern:
/// block `(S, T)` holds `c_{S△T}` (0-based, `δ`-subsets as bitmasks).
pub fn abba_block_pattern(a: u32) -> Vec<Vec<usize>> {
    let l = 1usize << a;
    (0..l).map(|s| (0..l).map(|t| s ^ t).collect()).collect()
}

/// Block permutation moving block `T` to block `T△S`.
fn block_permutation(s: usize, l: usize) -> GaussianMatrix {
    let mut p = GaussianMatrix::zeros(l, l);
    for t in 0..l {
        p.set(t, t ^ s, GaussianInt::ONE);
    }
    p
}

/// ABBA design: left multiplication on the extended algebra viewed as a
/// module over the Clifford algebra, with each slot replaced by a COD.
///
/// `N_t = 2^a · slot.size`, `g = |slot.weights|`, `λ = 2^a`. Real variable
/// `(row S, col j)` multiplies `P_S ⊗ W_j`, so slot-variable-set `S` occupies
/// array row `S`.
pub fn abba_construction(slot: &SlotDesign, a: u32) -> Result<LinearDesign> {
    slot.validate()?;
    let l = 1usize << a;
    let id_slot = GaussianMatrix::identity(slot.size);
    let id_l = GaussianMatrix::identity(l);
    let first_row: Vec<_> = slot.weights.iter().map(|w| id_l.kron(w)).collect();
    let first_col: Vec<_> = (0..l).map(|s| block_permutation(s, l).kron(&id_slot)).collect();
    let mut design = assemble_array(&first_row, &first_col)?;
    design.origin = Origin::new("abba", &[("a", a.to_string()), ("slot", slot.kind.name().to_string())]);
    Ok(design)
}

/// `(in-phase, quadrature)` flat indices of the complex symbols of an ABBA
/// design, ordered slot-variable-set first: `x1, x2` fill `c_1`, `x3, x4`
/// fill `c_2`, and so on.
pub fn abba_complex_symbols(slot: &SlotDesign, a: u32) -> Vec<(usize, usize)> {
    let l = 1usize << a;
    (0..l)
        .flat_map(|s| slot.symbols.iter().map(move |&(re, im)| (re * l + s, im * l + s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::verify_cuw;

    fn gi(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    fn diag(d: &[(i64, i64)]) -> GaussianMatrix {
        GaussianMatrix::diagonal(&d.iter().map(|&(r, i)| gi(r, i)).collect::<Vec<_>>())
    }

    #[test]
    fn trivial_array() {
        let d = assemble_array(&[GaussianMatrix::identity(1)], &[GaussianMatrix::identity(1)]).unwrap();
        assert_eq!((d.g, d.lambda, d.k()), (1, 1, 1));
        assert!(d.weights[0].is_identity());
    }

    #[test]
    fn two_by_two_array_products() {
        let row = [
            GaussianMatrix::identity(2),
            GaussianMatrix::scalar_identity(2, GaussianInt::I),
        ];
        let col = [GaussianMatrix::identity(2), diag(&[(1, 0), (-1, 0)])];
        let d = assemble_array(&row, &col).unwrap();
        assert_eq!(
            d.weights,
            vec![
                GaussianMatrix::identity(2),
                diag(&[(1, 0), (-1, 0)]),
                GaussianMatrix::scalar_identity(2, GaussianInt::I),
                diag(&[(0, 1), (0, -1)]),
            ]
        );
        assert_eq!(d.partition, Partition::new(vec![vec![0, 1], vec![2, 3]], 4).unwrap());
    }

    #[test]
    fn array_errors() {
        let i2 = GaussianMatrix::identity(2);
        let z = diag(&[(1, 0), (-1, 0)]);
        assert!(matches!(
            assemble_array(std::slice::from_ref(&z), std::slice::from_ref(&i2)),
            Err(Error::InvalidArray(_))
        ));
        assert!(matches!(
            assemble_array(std::slice::from_ref(&i2), &[GaussianMatrix::identity(4)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            assemble_array(std::slice::from_ref(&i2), &[i2.clone(), z.clone(), z]),
            Err(Error::InvalidLambda(3))
        ));
    }

    #[test]
    fn fill_rule_entry() {
        let rep = blockdiag_representation(4, 2).unwrap();
        let d = blockdiag_construction(4, 2).unwrap();
        let expected = rep.deltas[0].mat_mul(&rep.gammas[0]).unwrap();
        assert_eq!(d.weight_at(1, 1), &expected);
    }

    #[test]
    fn blockdiag_g2_lambda2() {
        let d = blockdiag_construction(2, 2).unwrap();
        assert_eq!((d.nt, d.k()), (2, 4));
        assert_eq!(d.rate(), Ratio::from_integer(1));
        let mut got = d.weights.clone();
        let mut expected = vec![
            GaussianMatrix::identity(2),
            GaussianMatrix::scalar_identity(2, GaussianInt::I),
            diag(&[(1, 0), (-1, 0)]),
            diag(&[(0, 1), (0, -1)]),
        ];
        got.sort_by_key(|m| format!("{m}"));
        expected.sort_by_key(|m| format!("{m}"));
        assert_eq!(got, expected);
    }

    #[test]
    fn blockdiag_g4_lambda2() {
        let d = blockdiag_construction(4, 2).unwrap();
        assert_eq!((d.nt, d.k()), (4, 8));
        assert_eq!(d.rate(), Ratio::from_integer(1));
    }

    #[test]
    fn first_delta_is_block_sign() {
        for g in 1..=6 {
            let rep = blockdiag_representation(g, 2).unwrap();
            let m = rep.dim / 2;
            let mut d = vec![GaussianInt::ONE; m];
            d.extend(vec![gi(-1, 0); m]);
            assert_eq!(rep.deltas[0], GaussianMatrix::diagonal(&d), "g={g}");
        }
    }

    #[test]
    fn invalid_lambda_is_rejected() {
        assert!(matches!(blockdiag_construction(3, 3), Err(Error::InvalidLambda(3))));
        assert!(matches!(blockdiag_construction(0, 2), Err(Error::InvalidGroupCount)));
        assert!(tensor_construction(2, 6, DeltaStyle::Regular).is_err());
    }

    #[test]
    fn diagonal_tensor_equals_blockdiag() {
        for g in 1..=5 {
            for lambda in [1, 2, 4] {
                let a = tensor_construction(g, lambda, DeltaStyle::Diagonal).unwrap();
                let b = blockdiag_construction(g, lambda).unwrap();
                assert_eq!(a.weights, b.weights);
            }
        }
    }

    #[test]
    fn regular_style_first_column() {
        let d = tensor_construction(2, 2, DeltaStyle::Regular).unwrap();
        let col: Vec<_> = d.first_col().into_iter().cloned().collect();
        assert_eq!(col, vec![GaussianMatrix::identity(2), pauli_x()]);
    }

    #[test]
    fn regular_deltas_commute_and_square_to_identity() {
        for a in 0..=3u32 {
            let lambda = 1 << a;
            let rep = tensor_representation(3, lambda, DeltaStyle::Regular).unwrap();
            for x in &rep.deltas {
                assert!(x.mat_mul(x).unwrap().is_identity());
                for y in &rep.deltas {
                    assert_eq!(x.mat_mul(y).unwrap(), y.mat_mul(x).unwrap());
                }
            }
        }
    }

    #[test]
    fn abba_pattern_a2() {
        let p = abba_block_pattern(2);
        let one_based: Vec<Vec<usize>> = p.iter().map(|r| r.iter().map(|c| c + 1).collect()).collect();
        assert_eq!(
            one_based,
            vec![vec![1, 2, 3, 4], vec![2, 1, 4, 3], vec![3, 4, 1, 2], vec![4, 3, 2, 1]]
        );
        for a in 0..=3 {
            let p = abba_block_pattern(a);
            for (s, row) in p.iter().enumerate() {
                for (t, &c) in row.iter().enumerate() {
                    assert_eq!(c, p[t][s]);
                }
            }
        }
    }

    #[test]
    fn abba_scalar_a1() {
        let d = abba_construction(&SlotDesign::scalar(), 1).unwrap();
        assert_eq!((d.nt, d.g, d.lambda), (2, 2, 2));
        assert_eq!(d.rate(), Ratio::from_integer(1));
        // [[c1, c2], [c2, c1]]: weights of c1I, c2I, c1Q, c2Q
        assert_eq!(
            d.weights,
            vec![
                GaussianMatrix::identity(2),
                pauli_x(),
                GaussianMatrix::scalar_identity(2, GaussianInt::I),
                pauli_x().scale(GaussianInt::I),
            ]
        );
        assert_eq!(abba_complex_symbols(&SlotDesign::scalar(), 1), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn alamouti_slot_is_a_cod() {
        assert!(SlotDesign::alamouti().validate().is_ok());
        assert!(SlotDesign::custom(SlotDesign::alamouti().weights).is_ok());
    }

    #[test]
    fn invalid_slots() {
        assert!(SlotDesign::custom(vec![]).is_err());
        assert!(SlotDesign::custom(vec![pauli_z()]).is_err());
        assert!(SlotDesign::custom(vec![GaussianMatrix::identity(2), pauli_z()]).is_err());
        let mut broken = SlotDesign::alamouti();
        broken.weights[2] = broken.weights[1].clone();
        assert!(matches!(abba_construction(&broken, 1), Err(Error::InvalidSlot(_))));
    }

    #[test]
    fn every_construction_passes_cuw_on_small_grid() {
        for g in 1..=6 {
            for a in 0..=3u32 {
                let lambda = 1 << a;
                let designs = [
                    blockdiag_construction(g, lambda).unwrap(),
                    tensor_construction(g, lambda, DeltaStyle::Regular).unwrap(),
                    abba_construction(&SlotDesign::clifford(g).unwrap(), a).unwrap(),
                ];
                for d in &designs {
                    assert!(d.weights.iter().all(GaussianMatrix::has_unit_entries));
                    let report = verify_cuw(d);
                    assert!(report.passed, "{} g={g} λ={lambda}: {report}", d.origin.method);
                }
            }
        }
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![vec![0, 1], vec![1]], 2).is_err());
        assert!(Partition::new(vec![vec![0]], 2).is_err());
        assert!(Partition::new(vec![vec![0], vec![]], 1).is_err());
        assert!(Partition::new(vec![vec![0, 5]], 2).is_err());
        assert!(Partition::from_one_based(&[vec![0]], 1).is_err());
        let p = Partition::from_one_based(&[vec![2], vec![1]], 2).unwrap();
        assert_eq!(p.membership(), vec![1, 0]);
        let c = Partition::columns(4, 2).coarsen(&[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(c.groups(), &[vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
    }

    /// Weight set with each matrix identified with its negative, order ignored.
    fn weights_up_to_sign(d: &LinearDesign) -> Vec<Vec<Vec<(i64, i64)>>> {
        let mut keys: Vec<_> = d
            .weights
            .iter()
            .map(|w| w.row_pairs().min(w.neg().row_pairs()))
            .collect();
        keys.sort();
        keys
    }

    #[test]
    fn abba_matches_regular_tensor() {
        for a in 1..=3u32 {
            let l = 1usize << a;
            let regular_scalar = tensor_construction(2, l, DeltaStyle::Regular).unwrap();
            let abba_scalar = abba_construction(&SlotDesign::scalar(), a).unwrap();
            let mut x: Vec<_> = abba_scalar.weights.iter().map(GaussianMatrix::row_pairs).collect();
            let mut y: Vec<_> = regular_scalar.weights.iter().map(GaussianMatrix::row_pairs).collect();
            x.sort();
            y.sort();
            assert_eq!(x, y, "scalar slot, a={a}");

            // one Alamouti weight is the negative of the canonical gamma
            let regular = tensor_construction(4, l, DeltaStyle::Regular).unwrap();
            let abba = abba_construction(&SlotDesign::alamouti(), a).unwrap();
            assert_eq!(
                weights_up_to_sign(&abba),
                weights_up_to_sign(&regular),
                "alamouti slot, a={a}"
            );
        }
    }

    proptest::proptest! {
        #[test]
        fn block_pattern_is_a_symmetric_latin_square(a in 0u32..=5) {
            let p = abba_block_pattern(a);
            let l = 1usize << a;
            for (s, row) in p.iter().enumerate() {
                let mut sorted = row.clone();
                sorted.sort_unstable();
                proptest::prop_assert_eq!(sorted, (0..l).collect::<Vec<_>>());
                for (t, &c) in row.iter().enumerate() {
                    proptest::prop_assert_eq!(c, p[t][s]);
                }
            }
        }
    }
}
