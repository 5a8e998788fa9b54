//! Monte-Carlo comparison of per-group and exhaustive ML decoding.
//!
//! Channel model: `Y = S(x)·H + N` with `S` the `T×N_t` codeword (`T = N_t`),
//! `H` an `N_t×N_r` matrix of i.i.d. `CN(0,1)` fades and `N` i.i.d.
//! `CN(0,σ²)` noise. `σ²` is set so that the average received SNR per
//! receive antenna equals the requested value.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{LinearDesign, Partition};
use crate::error::{Error, Result};
use crate::linalg_exact::GaussianMatrix;

pub type CMatrix = DMatrix<Complex64>;

/// Default rotation of the 4-point square used for 2-dimensional groups,
/// `½·arctan 2 ≈ 31.7°`.
pub fn default_rotation() -> f64 {
    0.5 * 2f64.atan()
}

/// Largest product constellation the exhaustive decoder will enumerate.
pub const DEFAULT_MAX_EXHAUSTIVE: u128 = 1 << 22;

pub fn to_complex(m: &GaussianMatrix) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let z = m.get(i, j);
        Complex64::new(z.re as f64, z.im as f64)
    })
}

/// `S(x) = Σ x_i A_i` in floating point.
pub fn evaluate_design(d: &LinearDesign, x: &[f64]) -> Result<CMatrix> {
    if x.len() != d.k() {
        return Err(Error::LengthMismatch {
            expected: d.k(),
            got: x.len(),
        });
    }
    let mut s = CMatrix::zeros(d.nt, d.nt);
    for (xi, w) in x.iter().zip(&d.weights) {
        s += to_complex(w) * Complex64::from(*xi);
    }
    Ok(s)
}

/// `Re tr(Aᴴ B)`.
fn real_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// A finite set of real points of one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Constellation {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl Constellation {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or(Error::EmptyConstellation(0))?;
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::ConstellationDim {
                group: 0,
                expected: dim,
                got: bad.len(),
            });
        }
        Ok(Self { dim, points })
    }

    /// `{±1}^dim`, with each consecutive coordinate pair rotated by `rotation`.
    /// For `dim = 2` this is the rotated 4-point square.
    pub fn rotated_hypercube(dim: usize, rotation: f64) -> Self {
        let (sin, cos) = rotation.sin_cos();
        let points = (0..1usize << dim)
            .map(|bits| {
                let mut p: Vec<f64> = (0..dim).map(|k| if bits >> k & 1 == 1 { -1.0 } else { 1.0 }).collect();
                for pair in p.chunks_exact_mut(2) {
                    let (u, v) = (pair[0], pair[1]);
                    pair[0] = cos * u - sin * v;
                    pair[1] = sin * u + cos * v;
                }
                p
            })
            .collect();
        Self { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }
}

/// One constellation per group; groups take values independently.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedSignalSet {
    pub groups: Vec<Constellation>,
    pub rotation: f64,
}

impl GroupedSignalSet {
    /// Rotated hypercube for every group of `partition`.
    pub fn default_for(partition: &Partition, rotation: f64) -> Self {
        Self {
            groups: partition
                .groups()
                .iter()
                .map(|g| Constellation::rotated_hypercube(g.len(), rotation))
                .collect(),
            rotation,
        }
    }

    pub fn validate(&self, partition: &Partition) -> Result<()> {
        if self.groups.len() != partition.len() {
            return Err(Error::LengthMismatch {
                expected: partition.len(),
                got: self.groups.len(),
            });
        }
        for (gi, (c, group)) in self.groups.iter().zip(partition.groups()).enumerate() {
            if c.is_empty() {
                return Err(Error::EmptyConstellation(gi));
            }
            if c.dim() != group.len() {
                return Err(Error::ConstellationDim {
                    group: gi,
                    expected: group.len(),
                    got: c.dim(),
                });
            }
        }
        Ok(())
    }

    /// `Π |C_g|`.
    pub fn product_size(&self) -> u128 {
        self.groups.iter().map(|c| c.len() as u128).product()
    }

    /// Writes the chosen point of each group into the full variable vector.
    pub fn assemble(&self, partition: &Partition, indices: &[usize]) -> Vec<f64> {
        let mut x = vec![0.0; partition.k()];
        for ((group, c), &idx) in partition.groups().iter().zip(&self.groups).zip(indices) {
            for (&var, &v) in group.iter().zip(c.point(idx)) {
                x[var] = v;
            }
        }
        x
    }

    /// `E‖S‖²_F` with every group uniform over its constellation.
    pub fn average_codeword_energy(&self, d: &LinearDesign, partition: &Partition) -> f64 {
        let weights: Vec<CMatrix> = d.weights.iter().map(to_complex).collect();
        let mut mean_total = CMatrix::zeros(d.nt, d.nt);
        let mut spread = 0.0;
        for (group, c) in partition.groups().iter().zip(&self.groups) {
            let mut mean = CMatrix::zeros(d.nt, d.nt);
            let mut energy = 0.0;
            for p in c.points() {
                let mut s = CMatrix::zeros(d.nt, d.nt);
                for (&var, &v) in group.iter().zip(p) {
                    s += &weights[var] * Complex64::from(v);
                }
                energy += s.norm_squared();
                mean += s;
            }
            let n = c.len() as f64;
            mean /= Complex64::from(n);
            spread += energy / n - mean.norm_squared();
            mean_total += mean;
        }
        mean_total.norm_squared() + spread
    }
}

/// One draw of fading and noise.
#[derive(Clone, Debug)]
pub struct ChannelRealization {
    pub h: CMatrix,
    pub noise: CMatrix,
    pub snr: f64,
}

fn complex_gaussian<R: Rng>(rng: &mut R, rows: usize, cols: usize, variance: f64) -> CMatrix {
    let scale = (variance / 2.0).sqrt();
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * scale, im * scale)
    })
}

impl ChannelRealization {
    /// Rayleigh fades and noise of variance `noise_variance`.
    pub fn draw<R: Rng>(rng: &mut R, nt: usize, nr: usize, t: usize, snr: f64, noise_variance: f64) -> Self {
        let h = complex_gaussian(rng, nt, nr, 1.0);
        let noise = complex_gaussian(rng, t, nr, noise_variance);
        Self { h, noise, snr }
    }
}

/// The ML metric `‖Y − S(x)H‖²` expanded around `B_i = A_i H`.
struct MetricTerms {
    projections: Vec<CMatrix>,
    y: CMatrix,
    /// `Re⟨B_i, Y⟩`
    correlation: Vec<f64>,
    /// `Re⟨B_i, B_j⟩`
    gram: Vec<Vec<f64>>,
}

impl MetricTerms {
    fn new(weights: &[CMatrix], y: &CMatrix, h: &CMatrix) -> Self {
        let projections: Vec<CMatrix> = weights.iter().map(|w| w * h).collect();
        let correlation = projections.iter().map(|b| real_inner(b, y)).collect();
        let gram = projections
            .iter()
            .map(|bi| projections.iter().map(|bj| real_inner(bi, bj)).collect())
            .collect();
        Self {
            projections,
            y: y.clone(),
            correlation,
            gram,
        }
    }

    /// `‖Y − Σ x_i B_i‖²`, evaluated directly.
    fn full(&self, x: &[f64]) -> f64 {
        let mut r = self.y.clone();
        for (b, &xi) in self.projections.iter().zip(x) {
            if xi != 0.0 {
                r -= b * Complex64::from(xi);
            }
        }
        r.norm_squared()
    }

    /// The part of the metric depending only on the variables of `group`.
    fn group(&self, group: &[usize], values: &[f64]) -> f64 {
        let mut m = 0.0;
        for (a, (&i, &xi)) in group.iter().zip(values).enumerate() {
            m += xi * xi * self.gram[i][i] - 2.0 * xi * self.correlation[i];
            for (&j, &xj) in group.iter().zip(values).skip(a + 1) {
                m += 2.0 * xi * xj * self.gram[i][j];
            }
        }
        m
    }
}

/// Largest `|x_i x_j · Re tr(Hᴴ(A_iᴴA_j + A_jᴴA_i)H)|` over pairs in different groups.
pub fn max_cross_term(d: &LinearDesign, partition: &Partition, h: &CMatrix, x: &[f64]) -> Result<f64> {
    if x.len() != d.k() || partition.k() != d.k() {
        return Err(Error::LengthMismatch {
            expected: d.k(),
            got: x.len().min(partition.k()),
        });
    }
    let weights: Vec<CMatrix> = d.weights.iter().map(to_complex).collect();
    let membership = partition.membership();
    let hh = h.adjoint();
    let mut worst = 0.0f64;
    for i in 0..d.k() {
        for j in i + 1..d.k() {
            if membership[i] == membership[j] {
                continue;
            }
            let anti = weights[i].adjoint() * &weights[j] + weights[j].adjoint() * &weights[i];
            let coupling = (&hh * anti * h).trace().re;
            worst = worst.max((x[i] * x[j] * coupling).abs());
        }
    }
    Ok(worst)
}

/// Maximum cross-group metric term over `trials` random channels and
/// Gaussian variable vectors.
pub fn metric_split_check(d: &LinearDesign, partition: &Partition, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let h = complex_gaussian(&mut rng, d.nt, 1, 1.0);
        let x: Vec<f64> = (0..d.k()).map(|_| StandardNormal.sample(&mut rng)).collect();
        worst = worst.max(max_cross_term(d, partition, &h, &x)?);
    }
    Ok(worst)
}

/// `|‖Y − S(x)H‖² − (‖Y‖² + Σ_g m_g(x_g))|`, where the left side is built
/// from `evaluate_design` and the group terms from the split expansion.
pub fn metric_split_residual(
    d: &LinearDesign,
    partition: &Partition,
    x: &[f64],
    y: &CMatrix,
    h: &CMatrix,
) -> Result<f64> {
    let s = evaluate_design(d, x)?;
    let direct = (y - s * h).norm_squared();
    let weights: Vec<CMatrix> = d.weights.iter().map(to_complex).collect();
    let terms = MetricTerms::new(&weights, y, h);
    let split: f64 = partition
        .groups()
        .iter()
        .map(|g| {
            let values: Vec<f64> = g.iter().map(|&i| x[i]).collect();
            terms.group(g, &values)
        })
        .sum();
    Ok((direct - (y.norm_squared() + split)).abs())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub per_group_indices: Vec<usize>,
    pub exhaustive_indices: Vec<usize>,
    /// Full metric at the per-group decision minus the exhaustive minimum.
    pub metric_gap: f64,
    pub metric_evals_per_group: u128,
    pub metric_evals_exhaustive: u128,
}

impl DecodeOutcome {
    pub fn agrees(&self) -> bool {
        self.per_group_indices == self.exhaustive_indices
    }
}

fn argmin<I: Iterator<Item = f64>>(values: I) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Decoder state for one design, partition and signal set.
pub struct Decoder<'a> {
    partition: &'a Partition,
    sets: &'a GroupedSignalSet,
    weights: Vec<CMatrix>,
    max_exhaustive: u128,
}

impl<'a> Decoder<'a> {
    pub fn new(d: &LinearDesign, partition: &'a Partition, sets: &'a GroupedSignalSet) -> Result<Self> {
        if partition.k() != d.k() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} indices, design has {}",
                partition.k(),
                d.k()
            )));
        }
        sets.validate(partition)?;
        Ok(Self {
            partition,
            sets,
            weights: d.weights.iter().map(to_complex).collect(),
            max_exhaustive: DEFAULT_MAX_EXHAUSTIVE,
        })
    }

    pub fn with_max_exhaustive(mut self, limit: u128) -> Self {
        self.max_exhaustive = limit;
        self
    }

    /// Independent per-group minimisation plus exhaustive search over the
    /// product constellation.
    pub fn decode(&self, y: &CMatrix, h: &CMatrix) -> Result<DecodeOutcome> {
        let total = self.sets.product_size();
        if total > self.max_exhaustive {
            return Err(Error::ExhaustiveTooLarge(total));
        }
        let terms = MetricTerms::new(&self.weights, y, h);

        let per_group_indices: Vec<usize> = self
            .partition
            .groups()
            .iter()
            .zip(&self.sets.groups)
            .map(|(group, c)| argmin(c.points().iter().map(|p| terms.group(group, p))))
            .collect();

        let radices: Vec<usize> = self.sets.groups.iter().map(Constellation::len).collect();
        let mut digits = vec![0usize; radices.len()];
        let mut best = (digits.clone(), f64::INFINITY);
        'search: loop {
            let m = terms.full(&self.sets.assemble(self.partition, &digits));
            if m < best.1 {
                best = (digits.clone(), m);
            }
            // mixed-radix increment, last group fastest
            let mut pos = digits.len();
            loop {
                if pos == 0 {
                    break 'search;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < radices[pos] {
                    break;
                }
                digits[pos] = 0;
            }
        }
        let per_group_metric = terms.full(&self.sets.assemble(self.partition, &per_group_indices));

        Ok(DecodeOutcome {
            metric_gap: per_group_metric - best.1,
            exhaustive_indices: best.0,
            per_group_indices,
            metric_evals_per_group: radices.iter().map(|&r| r as u128).sum(),
            metric_evals_exhaustive: total,
        })
    }
}

/// One-shot per-group and exhaustive ML decoding of `y` given `h`.
pub fn ml_decode(
    d: &LinearDesign,
    partition: &Partition,
    sets: &GroupedSignalSet,
    y: &CMatrix,
    h: &CMatrix,
) -> Result<DecodeOutcome> {
    Decoder::new(d, partition, sets)?.decode(y, h)
}

#[derive(Clone, Copy, Debug)]
pub struct SimulationConfig {
    pub nr: usize,
    pub max_exhaustive: u128,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            nr: 1,
            max_exhaustive: DEFAULT_MAX_EXHAUSTIVE,
        }
    }
}

/// Everything observed in one simulated transmission.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub transmitted: Vec<usize>,
    pub decode: DecodeOutcome,
    pub split_residual: f64,
}

/// Transmits a uniformly chosen codeword over a fresh channel and decodes it.
pub fn simulate_trial<R: Rng>(
    d: &LinearDesign,
    decoder: &Decoder<'_>,
    noise_variance: f64,
    snr: f64,
    nr: usize,
    rng: &mut R,
) -> Result<TrialOutcome> {
    let transmitted: Vec<usize> = decoder
        .sets
        .groups
        .iter()
        .map(|c| rng.random_range(0..c.len()))
        .collect();
    let x = decoder.sets.assemble(decoder.partition, &transmitted);
    let s = evaluate_design(d, &x)?;
    let channel = ChannelRealization::draw(rng, d.nt, nr, d.nt, snr, noise_variance);
    let y = &s * &channel.h + &channel.noise;
    let decode = decoder.decode(&y, &channel.h)?;
    let split_residual = metric_split_residual(d, decoder.partition, &x, &y, &channel.h)?;
    Ok(TrialOutcome {
        transmitted,
        decode,
        split_residual,
    })
}

/// One row of the Monte-Carlo table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McRow {
    pub snr_db: f64,
    pub ser: f64,
    pub agreement: f64,
    pub trials: usize,
    #[serde(skip)]
    pub max_split_residual: f64,
}

/// Noise variance giving average per-receive-antenna SNR `snr` (linear).
pub fn noise_variance_for(d: &LinearDesign, partition: &Partition, sets: &GroupedSignalSet, snr: f64) -> f64 {
    sets.average_codeword_energy(d, partition) / (d.nt as f64 * snr)
}

pub fn run_monte_carlo(
    d: &LinearDesign,
    partition: &Partition,
    sets: &GroupedSignalSet,
    snr_db: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<McRow>> {
    run_monte_carlo_with(&SimulationConfig::default(), d, partition, sets, snr_db, trials, seed)
}

/// Per-trial generators are ChaCha streams of one seed, so results do not
/// depend on thread scheduling.
pub fn run_monte_carlo_with(
    config: &SimulationConfig,
    d: &LinearDesign,
    partition: &Partition,
    sets: &GroupedSignalSet,
    snr_db: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<McRow>> {
    let decoder = Decoder::new(d, partition, sets)?.with_max_exhaustive(config.max_exhaustive);
    let groups = partition.len();
    snr_db
        .iter()
        .enumerate()
        .map(|(snr_index, &db)| {
            let snr = 10f64.powf(db / 10.0);
            let noise_variance = noise_variance_for(d, partition, sets, snr);
            let (errors, agreements, residual) = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream((snr_index * trials + t) as u64);
                    let outcome = simulate_trial(d, &decoder, noise_variance, snr, config.nr, &mut rng)?;
                    let errors = outcome
                        .transmitted
                        .iter()
                        .zip(&outcome.decode.per_group_indices)
                        .filter(|(a, b)| a != b)
                        .count();
                    Ok((errors, usize::from(outcome.decode.agrees()), outcome.split_residual))
                })
                .try_reduce(|| (0, 0, 0.0f64), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2.max(b.2))))?;
            let denom = trials.max(1) as f64;
            Ok(McRow {
                snr_db: db,
                ser: errors as f64 / (denom * groups as f64),
                agreement: agreements as f64 / denom,
                trials,
                max_split_residual: residual,
            })
        })
        .collect()
}

/// CSV with columns `snr_db,ser,agreement,trials`.
pub fn write_csv<W: std::io::Write>(rows: &[McRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(std::io::Error::other)?;
    }
    w.flush()
}
