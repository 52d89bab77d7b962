use crate::error::{Error, Result};
use crate::scalar::{cabs, czero, from_usize, lit, to_f64, Cx, Real};

use super::poly::{cluster_roots, default_cluster_tol};
use super::rational::RationalFn;

/// Extra coefficients computed past the requested window to calibrate the tail majorant.
pub const VALIDATION_BAND: usize = 50;

/// Poles must sit at modulus greater than `1 + POLE_EPS`.
pub const POLE_EPS: f64 = 1e-9;

const MAX_WINDOW: usize = 20_000;

// Envelope growth allowed between the two halves of the validation band.
const ENVELOPE_SLACK: f64 = 1.05;

/// How the tail majorant of a [`CoeffStream`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailCertificate {
    /// No poles; every coefficient past the window vanishes.
    Exact,
    /// Calibrated on the validation band (amplitude doubled).
    Calibrated,
    /// Majorant-series bound `|c_k| <= A (k+1)^{N-1} r^k` with `N` the pole count.
    Majorant,
}

/// Taylor coefficients `c_0..c_J` of a rational function, plus a bound
/// `|c_k| <= A (k+1)^m r^k` for every `k > J`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffStream<T: Real> {
    window: Vec<Cx<T>>,
    decay_base: T,
    decay_amp: T,
    poly_order: usize,
    certificate: TailCertificate,
}

impl<T: Real> CoeffStream<T> {
    pub fn window(&self) -> &[Cx<T>] {
        &self.window
    }

    /// Index of the last stored coefficient.
    pub fn last_index(&self) -> usize {
        self.window.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Option<Cx<T>> {
        self.window.get(k).copied()
    }

    pub fn decay_base(&self) -> T {
        self.decay_base
    }

    pub fn decay_amp(&self) -> T {
        self.decay_amp
    }

    pub fn poly_order(&self) -> usize {
        self.poly_order
    }

    pub fn certificate(&self) -> TailCertificate {
        self.certificate
    }

    /// Majorant `A (k+1)^m r^k`.
    pub fn tail_bound(&self, k: usize) -> T {
        if self.decay_amp == T::zero() {
            return T::zero();
        }
        let kk = from_usize::<T>(k);
        let log = self.decay_amp.ln()
            + from_usize::<T>(self.poly_order) * (kk + T::one()).ln()
            + kk * self.decay_base.ln();
        log.exp()
    }
}

fn recurrence<T: Real>(f: &RationalFn<T>, upto: usize) -> Vec<Cx<T>> {
    let num = f.num();
    let den = f.den().coeffs();
    let d0 = den[0];
    let mut c: Vec<Cx<T>> = Vec::with_capacity(upto + 1);
    for k in 0..=upto {
        let mut acc = num.coeff(k);
        for (t, &dt) in den.iter().enumerate().skip(1).take(k) {
            acc -= dt * c[k - t];
        }
        c.push(acc / d0);
    }
    c
}

/// Streams Taylor coefficients of `f` through index `j` (or further, if the
/// tail calibration asks for a longer window).
///
/// The coefficients follow `c_k = (p_k - sum_{t>=1} d_t c_{k-t}) / d_0`. With
/// `r` the largest reciprocal pole modulus and `m` one less than the largest
/// pole multiplicity, the amplitude is twice the largest
/// `|c_k| / ((k+1)^m r^k)` over a validation band of [`VALIDATION_BAND`]
/// extra coefficients. The band must not show growth of that ratio; when it
/// does, the window is enlarged, and past [`MAX_WINDOW`] the stream falls back
/// to the always-valid majorant-series bound.
pub fn taylor_stream<T: Real>(f: &RationalFn<T>, j: usize) -> Result<CoeffStream<T>> {
    let poles = f.poles();
    for p in &poles {
        if cabs(*p) <= T::one() + lit(POLE_EPS) {
            return Err(Error::PoleInDisk { modulus: to_f64(cabs(*p)) });
        }
    }
    let deg_num = f.num().degree().unwrap_or(0);
    if poles.is_empty() {
        let d0 = f.den().coeff(0);
        let len = j.max(deg_num) + 1;
        let window = (0..len).map(|k| f.num().coeff(k) / d0).collect();
        return Ok(CoeffStream {
            window,
            decay_base: T::zero(),
            decay_amp: T::zero(),
            poly_order: 0,
            certificate: TailCertificate::Exact,
        });
    }

    let clusters = cluster_roots(&poles, default_cluster_tol());
    let r = poles.iter().fold(T::zero(), |a, p| a.max(T::one() / cabs(*p)));
    let m = clusters.iter().map(|c| c.1).max().unwrap_or(1) - 1;
    let ln_r = r.ln();
    let mm = from_usize::<T>(m);
    let log_ratio = |k: usize, c: Cx<T>| -> T {
        let a = cabs(c);
        if a == T::zero() {
            return T::min_value().unwrap_or(lit(-1e300));
        }
        let kk = from_usize::<T>(k);
        a.ln() - mm * (kk + T::one()).ln() - kk * ln_r
    };

    let mut jj = j.max(deg_num);
    let half = VALIDATION_BAND / 2;
    while jj + VALIDATION_BAND <= MAX_WINDOW {
        let c = recurrence(f, jj + VALIDATION_BAND);
        let band: Vec<T> = (jj + 1..=jj + VALIDATION_BAND).map(|k| log_ratio(k, c[k])).collect();
        let first = band[..half].iter().fold(band[0], |a, &b| a.max(b));
        let second = band[half..].iter().fold(band[half], |a, &b| a.max(b));
        if second <= first + lit::<T>(ENVELOPE_SLACK).ln() {
            let top = first.max(second);
            let mut window = c;
            window.truncate(jj + 1);
            return Ok(CoeffStream {
                window,
                decay_base: r,
                decay_amp: lit::<T>(2.0) * top.exp(),
                poly_order: m,
                certificate: TailCertificate::Calibrated,
            });
        }
        jj = 2 * jj + VALIDATION_BAND;
    }

    // 1/q = 1/(d_0 prod (1 - z/xi)) is coefficientwise dominated by
    // 1/(|d_0| (1 - r z)^N), whose coefficients are at most (k+1)^{N-1} r^k.
    let d0 = cabs(f.den().coeff(0));
    let amp = f
        .num()
        .coeffs()
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (t, &p)| acc + cabs(p) * (-(from_usize::<T>(t)) * ln_r).exp())
        / d0;
    let mut window = recurrence(f, j.max(deg_num));
    window.resize(j.max(deg_num) + 1, czero());
    Ok(CoeffStream {
        window,
        decay_base: r,
        decay_amp: amp,
        poly_order: poles.len() - 1,
        certificate: TailCertificate::Majorant,
    })
}
