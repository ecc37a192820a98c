//! Distribution of the largest eigenvalue of a complex central Wishart
//! matrix, expanded into a table of `x^b e^{-a x}` terms.
//!
//! For `A` an `m x n` matrix of i.i.d. unit-variance complex Gaussians with
//! `s = min(m, n)` and `t = max(m, n)`, the CDF of the largest eigenvalue of
//! `A^H A` is a normalised `s x s` determinant whose entries are lower
//! incomplete gamma functions `gamma(t - s + i + j - 1, x)`. Expanding that
//! determinant symbolically over exact rationals (each entry is a constant
//! plus polynomial-times-`e^{-x}`) and differentiating yields the density
//!
//! ```text
//! f(x) = sum_{a=1}^{s} sum_b  a^{b+1} d(a,b) / b!  x^b e^{-a x}
//! ```
//!
//! with rational coefficients `d(a,b)`. The table is exact; scaling by the
//! average SNR is a plain change of variables applied at evaluation time.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

use super::OutageError;

/// Polynomial-times-exponential element: `coeffs[e][p]` multiplies
/// `x^p e^{-e x}`.
#[derive(Debug, Clone, PartialEq)]
struct PolyExp {
    coeffs: Vec<Vec<BigRational>>,
}

impl PolyExp {
    fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    fn entry_mut(&mut self, e: usize, p: usize) -> &mut BigRational {
        while self.coeffs.len() <= e {
            self.coeffs.push(vec![]);
        }
        while self.coeffs[e].len() <= p {
            self.coeffs[e].push(BigRational::zero());
        }
        &mut self.coeffs[e][p]
    }

    fn add_assign(&mut self, other: &Self) {
        for (e, poly) in other.coeffs.iter().enumerate() {
            for (p, c) in poly.iter().enumerate() {
                if !c.is_zero() {
                    *self.entry_mut(e, p) += c;
                }
            }
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, poly1) in self.coeffs.iter().enumerate() {
            for (p1, c1) in poly1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (e2, poly2) in other.coeffs.iter().enumerate() {
                    for (p2, c2) in poly2.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        *out.entry_mut(e1 + e2, p1 + p2) += c1 * c2;
                    }
                }
            }
        }
        out
    }

    fn neg(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|poly| poly.iter().map(|c| -c).collect())
                .collect(),
        }
    }

    /// d/dx of `x^p e^{-e x}` is `p x^{p-1} e^{-e x} - e x^p e^{-e x}`.
    fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (e, poly) in self.coeffs.iter().enumerate() {
            for (p, c) in poly.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if p > 0 {
                    *out.entry_mut(e, p - 1) += c * BigRational::from_integer(BigInt::from(p));
                }
                *out.entry_mut(e, p) -= c * BigRational::from_integer(BigInt::from(e));
            }
        }
        out
    }

    /// Lower incomplete gamma for integer order:
    /// `gamma(n, x) = (n-1)! (1 - e^{-x} sum_{r<n} x^r / r!)`.
    fn lower_incomplete_gamma(n: usize) -> Self {
        let fact_n1 = factorial_big(n - 1);
        let mut out = Self::zero();
        *out.entry_mut(0, 0) = BigRational::from_integer(fact_n1.clone());
        for r in 0..n {
            *out.entry_mut(1, r) -=
                BigRational::new(fact_n1.clone(), factorial_big(r));
        }
        out
    }
}

fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn determinant(mat: &[Vec<PolyExp>]) -> PolyExp {
    let n = mat.len();
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut det = PolyExp::zero();
    for (col, pivot) in mat[0].iter().enumerate() {
        let minor: Vec<Vec<PolyExp>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let cofactor = pivot.mul(&determinant(&minor));
        if col % 2 == 0 {
            det.add_assign(&cofactor);
        } else {
            det.add_assign(&cofactor.neg());
        }
    }
    det
}

/// One `d(a,b) x^b e^{-a x}` entry of an expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    /// Exponential decay index `a` (1..=min(m, n)).
    pub decay: u32,
    /// Polynomial power `b`.
    pub power: u32,
    /// Coefficient `d(a, b)`.
    pub coeff: f64,
}

/// Largest-eigenvalue density/CDF of an `m x n` complex Wishart form, as a
/// finite table of polynomial-times-exponential terms, normalised to an
/// average SNR `scale`.
#[derive(Debug, Clone)]
pub struct PolyExpExpansion {
    dims: (usize, usize),
    scale: f64,
    terms: Vec<ExpansionTerm>,
}

impl PolyExpExpansion {
    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn terms(&self) -> &[ExpansionTerm] {
        &self.terms
    }

    /// Same expansion renormalised to average SNR `scale`.
    pub fn with_scale(&self, scale: f64) -> Self {
        Self {
            dims: self.dims,
            scale,
            terms: self.terms.clone(),
        }
    }

    /// Density `f(x) = sum a^{b+1} d(a,b) / (b! scale^{b+1}) x^b e^{-a x / scale}`.
    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let u = x / self.scale;
        let mut acc = 0.0;
        for term in &self.terms {
            let a = term.decay as f64;
            let b = term.power;
            acc += a.powi(b as i32 + 1) * term.coeff / factorial_f64(b) * u.powi(b as i32)
                * (-a * u).exp();
        }
        acc / self.scale
    }

    /// Survival function `1 - cdf(x)` evaluated directly from the table.
    pub fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        let u = x / self.scale;
        let mut acc = 0.0;
        for term in &self.terms {
            let a = term.decay as f64;
            let decay = (-a * u).exp();
            let mut inner = 0.0;
            for m in 0..=term.power {
                inner += a.powi(m as i32) / factorial_f64(m) * u.powi(m as i32);
            }
            acc += term.coeff * inner * decay;
        }
        acc
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.survival(x)
    }
}

fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Expands the largest-eigenvalue distribution of an `m x n` complex Wishart
/// form by symbolic determinant expansion over exact rationals. The returned
/// table is normalised (`sum d(a,b) = 1` exactly before rounding) and uses
/// unit scale; apply [`PolyExpExpansion::with_scale`] for a given average SNR.
pub fn wishart_maxeig_expansion(m: usize, n: usize) -> Result<PolyExpExpansion, OutageError> {
    if m == 0 || n == 0 {
        return Err(OutageError::Domain(
            "Wishart dimensions must be at least 1".into(),
        ));
    }
    let s = m.min(n);
    let t = m.max(n);
    if s > 6 || t > 12 {
        return Err(OutageError::ExpansionTooLarge { m, n });
    }

    // CDF determinant: entries gamma(t - s + i + j - 1, x), 1-based i, j.
    let mat: Vec<Vec<PolyExp>> = (1..=s)
        .map(|i| {
            (1..=s)
                .map(|j| PolyExp::lower_incomplete_gamma(t - s + i + j - 1))
                .collect()
        })
        .collect();
    let det = determinant(&mat);

    // Normalise so the CDF tends to 1: the x -> inf limit is the constant
    // part of the e^0 component.
    let norm = det.coeffs[0][0].clone();
    assert!(
        det.coeffs[0].iter().skip(1).all(Zero::is_zero),
        "e^0 component of the CDF determinant must be constant"
    );
    let pdf = det.derivative();

    let mut terms = Vec::new();
    let mut total = BigRational::zero();
    for (a, poly) in pdf.coeffs.iter().enumerate().skip(1) {
        for (b, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // d(a, b) = b! * coeff / a^{b+1}, with the CDF normalisation.
            let d = c * BigRational::from_integer(factorial_big(b))
                / BigRational::from_integer(BigInt::from(a).pow(b as u32 + 1))
                / &norm;
            total += &d;
            // Term indices obey the summation limits of the expansion.
            debug_assert!(b >= t - s && b <= (m + n) * a - 2 * a * a);
            terms.push(ExpansionTerm {
                decay: a as u32,
                power: b as u32,
                coeff: d.to_f64().expect("coefficient fits in f64"),
            });
        }
    }
    assert!(pdf.coeffs[0].iter().all(Zero::is_zero));
    assert!(
        (total - BigRational::one()).is_zero(),
        "expansion must integrate to one exactly"
    );

    Ok(PolyExpExpansion {
        dims: (m, n),
        scale: 1.0,
        terms,
    })
}
