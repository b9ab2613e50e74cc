//! Fading channel models, their gain samplers and gain distributions.
//!
//! Two models are supported:
//!
//! * [`ChannelModel::Ordered`]: every user fades independently as unit-mean
//!   Rayleigh, and users are indexed by channel quality, so user `n`
//!   receives the `n`-th smallest of `K` iid exponential power gains. This
//!   matches the convention that the user decoded first has the weakest
//!   channel.
//! * [`ChannelModel::Mimo`]: each user `n` has an `N x M` channel matrix
//!   with iid complex normal entries of variance `beta_n`, and the base
//!   station transmits through a fixed unit-norm precoder `p`. The received
//!   power gain `||H_n p||^2` is then Erlang with shape `N` and scale
//!   `beta_n`, independent of which unit vector `p` happens to be.
//!
//! Sampling is deterministic given a seed: every Monte Carlo trial draws
//! from its own counter-indexed substream via [`trial_rng`], so results do
//! not depend on how trials are batched across worker threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};

/// Stream index reserved for drawing the precoder, keeping scenario setup
/// out of the per-trial stream space.
pub const PRECODER_STREAM: u64 = u64::MAX;

/// Independent random stream for one Monte Carlo trial. Streams with the
/// same seed and different trial indices never overlap, which is what makes
/// chunked parallel simulation reproducible.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

// ---------------------------------------------------------------------------
// Model 1: ordered Rayleigh gains
// ---------------------------------------------------------------------------

/// Draws `K` iid Exp(1) power gains and sorts them ascending, so index `n`
/// is the `n`-th order statistic.
pub fn sample_gains_model1<R: Rng + ?Sized>(rng: &mut R, num_users: usize) -> Vec<f64> {
    let mut gains: Vec<f64> = (0..num_users).map(|_| rng.sample(Exp1)).collect();
    gains.sort_by(f64::total_cmp);
    gains
}

/// CDF of the `n`-th smallest of `K` iid Exp(1) gains (1-based `n`):
/// the probability that at least `n` of the `K` gains fall below `t`,
/// `sum_{j=n..K} C(K,j) (1 - e^-t)^j e^{-t(K-j)}`.
pub fn cdf_model1(t: f64, n: usize, num_users: usize) -> f64 {
    assert!(n >= 1 && n <= num_users, "order index {n} out of 1..={num_users}");
    if t <= 0.0 {
        return 0.0;
    }
    let p = -(-t).exp_m1();
    let q = (-t).exp();
    let mut cdf = 0.0;
    let mut binom = binomial(num_users, n);
    for j in n..=num_users {
        cdf += binom * p.powi(j as i32) * q.powi((num_users - j) as i32);
        binom = binom * (num_users - j) as f64 / (j + 1) as f64;
    }
    cdf.min(1.0)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut value = 1.0;
    for i in 0..k {
        value = value * (n - i) as f64 / (i + 1) as f64;
    }
    value
}

// ---------------------------------------------------------------------------
// Model 2: MIMO Rayleigh with a fixed precoder
// ---------------------------------------------------------------------------

/// Per-user MIMO Rayleigh description: antenna counts, per-user variance
/// scales `beta_n` and the shared unit-norm precoder.
#[derive(Debug, Clone, Serialize)]
pub struct MimoChannel {
    tx_antennas: usize,
    rx_antennas: usize,
    scales: Vec<f64>,
    precoder: Vec<Complex64>,
}

impl MimoChannel {
    /// Validates antenna counts, scales and that the precoder is unit norm.
    pub fn new(
        tx_antennas: usize,
        rx_antennas: usize,
        scales: Vec<f64>,
        precoder: Vec<Complex64>,
    ) -> Result<Self> {
        if tx_antennas == 0 || rx_antennas == 0 {
            return Err(Error::InvalidScenario("antenna counts must be at least 1".into()));
        }
        if scales.is_empty() {
            return Err(Error::EmptySystem);
        }
        if scales.iter().any(|&b| !b.is_finite() || b <= 0.0) {
            return Err(Error::InvalidScenario("channel scales must be positive".into()));
        }
        if precoder.len() != tx_antennas {
            return Err(Error::DimensionMismatch { expected: tx_antennas, actual: precoder.len() });
        }
        let norm: f64 = precoder.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidScenario(format!(
                "precoder must have unit norm, got squared norm {norm}"
            )));
        }
        Ok(MimoChannel { tx_antennas, rx_antennas, scales, precoder })
    }

    /// Builds the channel with an isotropically random precoder drawn from
    /// the reserved stream of `seed`.
    pub fn with_random_precoder(
        tx_antennas: usize,
        rx_antennas: usize,
        scales: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = trial_rng(seed, PRECODER_STREAM);
        let precoder = isotropic_precoder(tx_antennas, &mut rng);
        MimoChannel::new(tx_antennas, rx_antennas, scales, precoder)
    }

    pub fn num_users(&self) -> usize {
        self.scales.len()
    }

    pub fn tx_antennas(&self) -> usize {
        self.tx_antennas
    }

    pub fn rx_antennas(&self) -> usize {
        self.rx_antennas
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn precoder(&self) -> &[Complex64] {
        &self.precoder
    }
}

/// Uniform random point on the complex unit sphere: normalize a vector of
/// iid standard complex normals.
pub fn isotropic_precoder<R: Rng + ?Sized>(tx_antennas: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let raw: Vec<Complex64> = (0..tx_antennas)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return raw.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Draws `||H_n p||^2` for every user: each matrix entry is complex normal
/// with variance `beta_n` (so real and imaginary parts carry `beta_n / 2`
/// each), and the row-times-precoder products are accumulated directly.
/// Gains are per user and deliberately not sorted.
pub fn sample_gains_model2<R: Rng + ?Sized>(rng: &mut R, channel: &MimoChannel) -> Vec<f64> {
    let mut gains = Vec::with_capacity(channel.scales.len());
    for &beta in &channel.scales {
        let sigma = (beta / 2.0).sqrt();
        let mut gain = 0.0;
        for _ in 0..channel.rx_antennas {
            let mut row_output = Complex64::new(0.0, 0.0);
            for p in &channel.precoder {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                row_output += Complex64::new(sigma * re, sigma * im) * p;
            }
            gain += row_output.norm_sqr();
        }
        gains.push(gain);
    }
    gains
}

/// Erlang CDF with integer shape `N` and scale `beta`:
/// `1 - e^{-t/beta} sum_{k=0..N-1} (t/beta)^k / k!`.
pub fn cdf_model2(t: f64, shape: usize, scale: f64) -> f64 {
    assert!(shape >= 1, "Erlang shape must be at least 1");
    assert!(scale > 0.0, "Erlang scale must be positive");
    if t <= 0.0 {
        return 0.0;
    }
    let x = t / scale;
    let mut term = 1.0;
    let mut partial = 1.0;
    for k in 1..shape {
        term *= x / k as f64;
        partial += term;
    }
    (1.0 - (-x).exp() * partial).max(0.0)
}

// ---------------------------------------------------------------------------
// Unified channel handle
// ---------------------------------------------------------------------------

/// A concrete channel bound to a user population, exposing one sampler and
/// one per-user gain CDF regardless of the model.
#[derive(Debug, Clone, Serialize)]
pub enum ChannelModel {
    /// Ordered iid Rayleigh gains for `num_users` users.
    Ordered { num_users: usize },
    /// MIMO Rayleigh with per-user scales and a fixed precoder.
    Mimo(MimoChannel),
}

impl ChannelModel {
    pub fn num_users(&self) -> usize {
        match self {
            ChannelModel::Ordered { num_users } => *num_users,
            ChannelModel::Mimo(mimo) => mimo.num_users(),
        }
    }

    /// One trial's worth of per-user power gains.
    pub fn sample_gains<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            ChannelModel::Ordered { num_users } => sample_gains_model1(rng, *num_users),
            ChannelModel::Mimo(mimo) => sample_gains_model2(rng, mimo),
        }
    }

    /// `P(gain_user < t)` for the 1-based `user`.
    pub fn cdf(&self, t: f64, user: usize) -> f64 {
        match self {
            ChannelModel::Ordered { num_users } => cdf_model1(t, user, *num_users),
            ChannelModel::Mimo(mimo) => {
                cdf_model2(t, mimo.rx_antennas, mimo.scales[user - 1])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_trial_streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = sample_gains_model1(&mut trial_rng(7, 0), 5);
        let b: Vec<f64> = sample_gains_model1(&mut trial_rng(7, 0), 5);
        assert_eq!(a, b, "same seed and trial must replay identically");

        let c: Vec<f64> = sample_gains_model1(&mut trial_rng(7, 1), 5);
        assert_ne!(a, c, "different trials must draw different gains");
        let d: Vec<f64> = sample_gains_model1(&mut trial_rng(8, 0), 5);
        assert_ne!(a, d, "different seeds must draw different gains");
    }

    #[test]
    fn test_model1_gains_are_sorted_and_positive() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..1000 {
            let gains = sample_gains_model1(&mut rng, 5);
            assert!(gains.iter().all(|&g| g > 0.0));
            assert!(gains.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn test_model1_order_statistic_means() {
        // E[gain_n] for exponential order statistics is sum_{j=K-n+1..K} 1/j.
        let k = 5;
        let trials = 200_000;
        let mut sums = vec![0.0; k];
        for t in 0..trials {
            let gains = sample_gains_model1(&mut trial_rng(11, t), k);
            for (s, g) in sums.iter_mut().zip(&gains) {
                *s += g;
            }
        }
        for n in 1..=k {
            let expected: f64 = (k - n + 1..=k).map(|j| 1.0 / j as f64).sum();
            let mean = sums[n - 1] / trials as f64;
            let sigma: f64 =
                ((k - n + 1..=k).map(|j| 1.0 / (j * j) as f64).sum::<f64>() / trials as f64).sqrt();
            assert!(
                (mean - expected).abs() < 5.0 * sigma,
                "user {n}: mean {mean} vs {expected} (sigma {sigma})"
            );
        }
    }

    #[test]
    fn test_cdf_model1_matches_empirical() {
        let k = 5;
        let trials = 200_000u64;
        let thresholds = [0.2, 0.7, 1.5];
        let mut counts = vec![[0u64; 3]; k];
        for t in 0..trials {
            let gains = sample_gains_model1(&mut trial_rng(13, t), k);
            for (n, &g) in gains.iter().enumerate() {
                for (i, &thr) in thresholds.iter().enumerate() {
                    if g < thr {
                        counts[n][i] += 1;
                    }
                }
            }
        }
        for n in 1..=k {
            for (i, &thr) in thresholds.iter().enumerate() {
                let analytic = cdf_model1(thr, n, k);
                let empirical = counts[n - 1][i] as f64 / trials as f64;
                let sigma = (analytic * (1.0 - analytic) / trials as f64).sqrt();
                assert!(
                    (empirical - analytic).abs() < 4.0 * sigma.max(1e-6),
                    "user {n} at t {thr}: {empirical} vs {analytic}"
                );
            }
        }
    }

    #[test]
    fn test_cdf_model1_shape() {
        assert_eq!(cdf_model1(0.0, 1, 5), 0.0);
        assert!((cdf_model1(1.0, 1, 1) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        // Largest order statistic: all gains below t.
        let t: f64 = 0.8;
        let p = -(-t).exp_m1();
        assert!((cdf_model1(t, 5, 5) - p.powi(5)).abs() < 1e-15);
        // Monotone in t, decreasing in order index.
        let grid: Vec<f64> = (0..60).map(|i| i as f64 * 0.1).collect();
        for n in 1..=5 {
            for pair in grid.windows(2) {
                assert!(cdf_model1(pair[0], n, 5) <= cdf_model1(pair[1], n, 5));
            }
        }
        for n in 1..5 {
            assert!(cdf_model1(1.0, n + 1, 5) < cdf_model1(1.0, n, 5));
        }
    }

    #[test]
    fn test_cdf_model2_reference_value() {
        // Shape 3, scale 1 at t = 3: 1 - e^-3 (1 + 3 + 4.5).
        let expected = 1.0 - (-3.0f64).exp() * 8.5;
        assert!((cdf_model2(3.0, 3, 1.0) - expected).abs() < 1e-15);
        assert!((expected - 0.576810).abs() < 1e-6);
        assert_eq!(cdf_model2(0.0, 3, 1.0), 0.0);
        assert!((cdf_model2(2.0, 1, 2.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn test_precoder_is_unit_norm() {
        let mut rng = trial_rng(5, PRECODER_STREAM);
        for m in 1..=4 {
            let p = isotropic_precoder(m, &mut rng);
            let norm: f64 = p.iter().map(|c| c.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn test_mimo_validation() {
        let unit = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(MimoChannel::new(2, 3, vec![1.0, 2.0], unit.clone()).is_ok());
        assert!(MimoChannel::new(0, 3, vec![1.0], unit.clone()).is_err());
        assert!(MimoChannel::new(2, 3, vec![1.0, -0.5], unit.clone()).is_err());
        assert!(MimoChannel::new(2, 3, vec![1.0], vec![Complex64::new(1.0, 0.0)]).is_err());
        assert!(MimoChannel::new(2, 3, vec![1.0], vec![Complex64::new(0.7, 0.0); 2]).is_err());
    }

    #[test]
    fn test_model2_gain_means() {
        // ||H p||^2 is Erlang(shape N, scale beta): mean N * beta.
        let betas = vec![0.5, 1.4, 0.8, 1.7, 1.1];
        let channel = MimoChannel::with_random_precoder(2, 3, betas.clone(), 17).unwrap();
        let trials = 100_000;
        let mut sums = vec![0.0; betas.len()];
        for t in 0..trials {
            let gains = sample_gains_model2(&mut trial_rng(17, t), &channel);
            for (s, g) in sums.iter_mut().zip(&gains) {
                *s += g;
            }
        }
        for (n, &beta) in betas.iter().enumerate() {
            let mean = sums[n] / trials as f64;
            let expected = 3.0 * beta;
            let sigma = beta * (3.0 / trials as f64).sqrt();
            assert!(
                (mean - expected).abs() < 5.0 * sigma,
                "user {}: mean {mean} vs {expected}",
                n + 1
            );
        }
    }

    #[test]
    fn test_model2_matches_erlang_for_any_precoder() {
        // The gain distribution must not depend on where the precoder
        // points, only on its norm.
        let betas = vec![1.0];
        let aligned =
            MimoChannel::new(2, 3, betas.clone(), vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
                .unwrap();
        let random = MimoChannel::with_random_precoder(2, 3, betas, 23).unwrap();
        let trials = 100_000u64;
        let thresholds = [1.0, 3.0, 6.0];
        for (label, channel) in [("aligned", &aligned), ("random", &random)] {
            let mut counts = [0u64; 3];
            for t in 0..trials {
                let gain = sample_gains_model2(&mut trial_rng(29, t), channel)[0];
                for (i, &thr) in thresholds.iter().enumerate() {
                    if gain < thr {
                        counts[i] += 1;
                    }
                }
            }
            for (i, &thr) in thresholds.iter().enumerate() {
                let analytic = cdf_model2(thr, 3, 1.0);
                let empirical = counts[i] as f64 / trials as f64;
                let sigma = (analytic * (1.0 - analytic) / trials as f64).sqrt();
                assert!(
                    (empirical - analytic).abs() < 4.0 * sigma,
                    "{label} precoder at t {thr}: {empirical} vs {analytic}"
                );
            }
        }
    }

    #[test]
    fn test_model2_single_receive_antenna_is_exponential() {
        // With N = 1 the gain is |row . p|^2 ~ Exp(beta); check by a
        // Kolmogorov-Smirnov test at the 1% level.
        let channel = MimoChannel::with_random_precoder(2, 1, vec![1.0], 31).unwrap();
        let n = 50_000;
        let mut samples: Vec<f64> = (0..n)
            .map(|t| sample_gains_model2(&mut trial_rng(31, t), &channel)[0])
            .collect();
        samples.sort_by(f64::total_cmp);
        let mut d: f64 = 0.0;
        for (i, &x) in samples.iter().enumerate() {
            let f = 1.0 - (-x).exp();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d = d.max((f - lo).abs()).max((hi - f).abs());
        }
        let critical = 1.63 / (n as f64).sqrt();
        assert!(d < critical, "KS statistic {d} exceeds the 1% critical value {critical}");
    }

    #[test]
    fn test_channel_model_dispatch() {
        let ordered = ChannelModel::Ordered { num_users: 4 };
        assert_eq!(ordered.num_users(), 4);
        assert_eq!(ordered.sample_gains(&mut trial_rng(1, 0)).len(), 4);
        assert!((ordered.cdf(0.9, 2) - cdf_model1(0.9, 2, 4)).abs() < 1e-15);

        let mimo = ChannelModel::Mimo(
            MimoChannel::with_random_precoder(2, 3, vec![0.5, 1.4], 9).unwrap(),
        );
        assert_eq!(mimo.num_users(), 2);
        assert_eq!(mimo.sample_gains(&mut trial_rng(9, 0)).len(), 2);
        assert!((mimo.cdf(1.2, 2) - cdf_model2(1.2, 3, 1.4)).abs() < 1e-15);
    }
}
