use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::scalar::{cabs, cone, czero, from_usize, lit, Cx, Real};

/// Dense polynomial with complex coefficients; `coeffs[k]` multiplies `z^k`.
///
/// Trailing exact zeros are stripped so the zero polynomial is the empty
/// coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T: Real> {
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> Poly<T> {
    pub fn new(mut coeffs: Vec<Cx<T>>) -> Self {
        while coeffs.last().is_some_and(|c| *c == czero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Cx::new(c, T::zero())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(cone())
    }

    pub fn constant(c: Cx<T>) -> Self {
        Poly::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![czero(); k + 1];
        c[k] = cone();
        Poly { coeffs: c }
    }

    /// `z - root`.
    pub fn linear_factor(root: Cx<T>) -> Self {
        Poly::new(vec![-root, cone()])
    }

    /// Monic polynomial with the given roots (repeated entries give multiplicity).
    pub fn from_roots(roots: &[Cx<T>]) -> Self {
        roots
            .iter()
            .fold(Poly::one(), |acc, &r| &acc * &Poly::linear_factor(r))
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Cx<T> {
        self.coeffs.get(k).copied().unwrap_or_else(czero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Cx<T> {
        self.coeffs.last().copied().unwrap_or_else(czero)
    }

    pub fn eval(&self, z: Cx<T>) -> Cx<T> {
        self.coeffs.iter().rev().fold(czero(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * from_usize::<T>(k))
                .collect(),
        )
    }

    /// `f^{(j)}(z)`.
    pub fn eval_derivative(&self, j: usize, z: Cx<T>) -> Cx<T> {
        let mut p = self.clone();
        for _ in 0..j {
            p = p.derivative();
        }
        p.eval(z)
    }

    pub fn scale(&self, c: Cx<T>) -> Self {
        Poly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Drops trailing coefficients of modulus at most `tol`.
    pub fn trimmed(&self, tol: T) -> Self {
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| cabs(*x) <= tol) {
            c.pop();
        }
        Poly { coeffs: c }
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    ///
    /// Panics if `d` is the zero polynomial.
    pub fn div_rem(&self, d: &Poly<T>) -> (Poly<T>, Poly<T>) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let Some(n) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if n < dd {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![czero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (t, &dc) in d.coeffs.iter().enumerate() {
                rem[k + t] -= q * dc;
            }
            rem[k + dd] = czero();
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Sum of coefficient moduli.
    pub fn l1_coeffs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |a, &c| a + cabs(c))
    }

    /// All complex roots, counted with multiplicity.
    ///
    /// Eigenvalues of the companion matrix, followed by a few Newton steps at
    /// simple roots. Multiple roots come back as clusters of radius roughly
    /// `eps^(1/mult)`; see [`cluster_roots`].
    pub fn roots(&self) -> Vec<Cx<T>> {
        let Some(n) = self.degree() else {
            return Vec::new();
        };
        // leading zeros of the coefficient vector are roots at the origin
        let shift = self.coeffs.iter().take_while(|c| **c == czero()).count();
        let mut out = vec![czero(); shift];
        let core: Vec<Cx<T>> = self.coeffs[shift..].to_vec();
        let m = n - shift;
        if m == 0 {
            return out;
        }
        if m == 1 {
            out.push(-core[0] / core[1]);
            return out;
        }
        let lead = core[m];
        let mut comp = DMatrix::<Cx<T>>::zeros(m, m);
        for i in 1..m {
            comp[(i, i - 1)] = cone();
        }
        for i in 0..m {
            comp[(i, m - 1)] = -core[i] / lead;
        }
        let eig = nalgebra::Schur::new(comp)
            .eigenvalues()
            .expect("complex Schur form is triangular");
        let core_poly = Poly { coeffs: core };
        let dpoly = core_poly.derivative();
        let raw: Vec<Cx<T>> = eig.iter().copied().collect();
        let tol = default_cluster_tol::<T>();
        for (i, &z0) in raw.iter().enumerate() {
            let scale = T::one().max(cabs(z0));
            let isolated = raw
                .iter()
                .enumerate()
                .all(|(j, &z1)| j == i || cabs(z1 - z0) > tol * scale);
            // Newton on a cluster member would spoil the cluster centroid
            out.push(if isolated { polish_root(&core_poly, &dpoly, z0) } else { z0 });
        }
        out
    }
}

fn polish_root<T: Real>(p: &Poly<T>, dp: &Poly<T>, z0: Cx<T>) -> Cx<T> {
    let mut z = z0;
    let mut fz = cabs(p.eval(z));
    for _ in 0..4 {
        let d = dp.eval(z);
        if cabs(d) == T::zero() {
            break;
        }
        let cand = z - p.eval(z) / d;
        let fc = cabs(p.eval(cand));
        if !(fc < fz) {
            break;
        }
        z = cand;
        fz = fc;
    }
    z
}

/// Groups roots closer than `tol` (relative to `max(1, |root|)`) and returns
/// each cluster's centroid with its size.
///
/// The centroid of a perturbed multiple root is far more accurate than the
/// individual members.
pub fn cluster_roots<T: Real>(roots: &[Cx<T>], tol: T) -> Vec<(Cx<T>, usize)> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = T::one().max(cabs(roots[i])).max(cabs(roots[j]));
            if cabs(roots[i] - roots[j]) <= tol * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Cx<T>, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += roots[i];
                g.2 += 1;
            }
            None => groups.push((r, roots[i], 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, s, c)| (s / from_usize::<T>(c), c))
        .collect()
}

/// Clustering radius used for multiplicity detection of polynomial roots.
pub fn default_cluster_tol<T: Real>() -> T {
    lit(1e-6)
}

impl<T: Real> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Real> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Real> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![czero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl<T: Real> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}
