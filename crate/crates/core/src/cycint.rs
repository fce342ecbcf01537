//! Exact arithmetic in rings of cyclotomic integers Z[ζ_n].
//!
//! An element is stored in canonical reduced form: the coefficient vector of
//! ζ_n^0 .. ζ_n^{φ(n)−1} after reduction modulo the n-th cyclotomic polynomial
//! Φ_n. Reduced forms are unique, so equality is coefficient-wise. Coefficients
//! are arbitrary-precision integers; multiplication takes an i128 fast path when
//! a size pre-check proves no overflow is possible and falls back to big-integer
//! schoolbook otherwise, so results are identical either way.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{crt_pair, divisors, euler_phi};
use crate::error::{Error, Result};

/// Above this conductor, Φ_n is built from the Möbius product of binomials
/// x^d − 1 instead of the divide-out-all-proper-divisors recursion; the two
/// agree everywhere (tested) but the recursion is quadratic in the cofactor
/// degree and becomes unreasonable past a few ten-thousands.
const PHI_DIVISION_LIMIT: u64 = 20_000;

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

/// The n-th cyclotomic polynomial Φ_n, monic of degree φ(n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloPoly {
    n: u64,
    /// Little-endian dense coefficients, length φ(n) + 1, leading coefficient 1.
    coeffs: Vec<BigInt>,
    /// Nonzero coefficients below the leading term, for sparse reduction.
    lower_nonzero: Vec<(usize, BigInt)>,
    /// Same, as i64, present when every coefficient fits (always, in practice).
    lower_small: Option<Vec<(usize, i64)>>,
}

impl CycloPoly {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Little-endian coefficients including the leading 1.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn from_dense(n: u64, coeffs: Vec<BigInt>) -> Self {
        let lower_nonzero: Vec<(usize, BigInt)> = coeffs[..coeffs.len() - 1]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        let lower_small = lower_nonzero
            .iter()
            .map(|(i, c)| c.to_i64().map(|v| (*i, v)))
            .collect::<Option<Vec<_>>>();
        CycloPoly { n, coeffs, lower_nonzero, lower_small }
    }
}

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<CycloPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CycloPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Φ_n, memoized and safe for concurrent use.
pub fn cyclotomic_poly(n: u64) -> Result<Arc<CycloPoly>> {
    if n == 0 {
        return Err(Error::BadOrder { ell: 0, detail: "cyclotomic polynomial index must be >= 1".into() });
    }
    if let Some(hit) = phi_cache().read().unwrap().get(&n) {
        return Ok(hit.clone());
    }
    let computed = Arc::new(compute_cyclotomic(n));
    let mut cache = phi_cache().write().unwrap();
    Ok(cache.entry(n).or_insert(computed).clone())
}

fn compute_cyclotomic(n: u64) -> CycloPoly {
    if n == 1 {
        return CycloPoly::from_dense(1, vec![BigInt::from(-1), BigInt::from(1)]);
    }
    let coeffs = if n <= PHI_DIVISION_LIMIT {
        cyclotomic_by_division(n)
    } else {
        cyclotomic_by_moebius(n)
    };
    debug_assert_eq!(coeffs.len() as u64 - 1, euler_phi(n));
    CycloPoly::from_dense(n, coeffs)
}

/// Φ_n = (x^n − 1) / Π_{d | n, d < n} Φ_d, exactly.
fn cyclotomic_by_division(n: u64) -> Vec<BigInt> {
    let mut divisor = vec![BigInt::from(1)];
    for d in divisors(n) {
        if d < n {
            divisor = poly_mul(&divisor, cyclotomic_poly(d).expect("d >= 1").coeffs());
        }
    }
    let mut numerator = vec![BigInt::from(0); n as usize + 1];
    numerator[0] = BigInt::from(-1);
    numerator[n as usize] = BigInt::from(1);
    poly_div_exact(&numerator, &divisor)
}

/// Φ_n = Π_{d | rad(n)} (x^{d·n/rad})^{μ(rad/d)} − the binomial product form.
fn cyclotomic_by_moebius(n: u64) -> Vec<BigInt> {
    let primes: Vec<u64> = crate::arith::factorize(n).iter().map(|&(p, _)| p).collect();
    let rad: u64 = primes.iter().product();
    let stretch = (n / rad) as usize;
    // Split squarefree divisors of rad by the sign of μ(rad/d).
    let mut mul_ds = Vec::new();
    let mut div_ds = Vec::new();
    for mask in 0u32..(1 << primes.len()) {
        let d: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p)
            .product();
        let omitted = primes.len() as u32 - mask.count_ones();
        if omitted % 2 == 0 {
            mul_ds.push(d as usize);
        } else {
            div_ds.push(d as usize);
        }
    }
    let mut poly = vec![BigInt::from(1)];
    for d in mul_ds {
        poly = poly_mul_binomial(&poly, d);
    }
    for d in div_ds {
        poly = poly_div_binomial(&poly, d);
    }
    // Φ_n(x) = Φ_rad(x^{n/rad})
    let mut out = vec![BigInt::from(0); (poly.len() - 1) * stretch + 1];
    for (i, c) in poly.into_iter().enumerate() {
        out[i * stretch] = c;
    }
    out
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Multiply by (x^d − 1).
fn poly_mul_binomial(a: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); a.len() + d];
    for (i, c) in a.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

/// Divide exactly by (x^d − 1): num = q·x^d − q solved top-down.
fn poly_div_binomial(num: &[BigInt], d: usize) -> Vec<BigInt> {
    let out_len = num.len() - d;
    let mut q = vec![BigInt::from(0); out_len];
    for j in (d..num.len()).rev() {
        let carried = if j < out_len { q[j].clone() } else { BigInt::from(0) };
        q[j - d] = &num[j] + carried;
    }
    for j in 0..d.min(num.len()) {
        let qj = if j < out_len { q[j].clone() } else { BigInt::from(0) };
        debug_assert_eq!(num[j], -qj, "inexact division by x^{d} - 1");
    }
    q
}

/// Exact long division; panics (debug) if a nonzero remainder appears.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(*den.last().unwrap(), BigInt::from(1), "divisor must be monic");
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let out_len = num.len() - dd;
    let mut q = vec![BigInt::from(0); out_len];
    for j in (dd..num.len()).rev() {
        if rem[j].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut rem[j]);
        for (i, dc) in den[..dd].iter().enumerate() {
            if !dc.is_zero() {
                let sub = &c * dc;
                rem[j - dd + i] -= sub;
            }
        }
        q[j - dd] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

// ---------------------------------------------------------------------------
// Cyclotomic integers
// ---------------------------------------------------------------------------

/// An element of Z[ζ_n], always in reduced form (see module docs).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    n: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(n: u64) -> Self {
        let phi = euler_phi(n.max(1)) as usize;
        CycInt { n: n.max(1), coeffs: vec![BigInt::from(0); phi] }
    }

    pub fn one(n: u64) -> Self {
        Self::constant(n, BigInt::from(1))
    }

    pub fn constant(n: u64, value: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(n);
        out.coeffs[0] = value.into();
        out
    }

    /// ζ_n^e (any integer e, reduced mod n then mod Φ_n).
    pub fn zeta_pow(n: u64, e: i64) -> Self {
        let n = n.max(1);
        let mut redundant = vec![BigInt::from(0); n as usize];
        redundant[e.rem_euclid(n as i64) as usize] = BigInt::from(1);
        Self::from_unreduced(n, redundant)
    }

    /// Build from coefficients of arbitrary length: exponents are folded mod n,
    /// then reduced mod Φ_n.
    pub fn from_unreduced(n: u64, coeffs: Vec<BigInt>) -> Self {
        let n = n.max(1);
        let mut redundant = vec![BigInt::from(0); n as usize];
        for (i, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                redundant[i % n as usize] += c;
            }
        }
        let phi = cyclotomic_poly(n).expect("n >= 1");
        let reduced = reduce_mod_phi(redundant, &phi);
        CycInt { n, coeffs: reduced }
    }

    /// Build from an exact reduced coefficient vector (length must be φ(n)).
    pub fn from_reduced(n: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        let n = n.max(1);
        let want = euler_phi(n) as usize;
        if coeffs.len() != want {
            return Err(Error::ConductorMismatch(coeffs.len() as u64, want as u64));
        }
        Ok(CycInt { n, coeffs })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Some(c) when the element is the rational integer c.
    pub fn rational_value(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ConductorMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycInt { n: self.n, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycInt { n: self.n, coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let phi = cyclotomic_poly(self.n).expect("n >= 1");
        if let Some(coeffs) = mul_fast_i128(&self.coeffs, &other.coeffs, &phi) {
            return Ok(CycInt { n: self.n, coeffs });
        }
        let conv = poly_mul(&self.coeffs, &other.coeffs);
        let folded = fold_mod_n(conv, self.n);
        Ok(CycInt { n: self.n, coeffs: reduce_mod_phi(folded, &phi) })
    }

    pub fn negate(&self) -> Self {
        CycInt { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CycInt { n: self.n, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(&BigInt::from(c))
    }

    /// Multiply by the monomial ζ_n^e.
    pub fn mul_zeta_pow(&self, e: i64) -> Self {
        let n = self.n as usize;
        let shift = e.rem_euclid(self.n as i64) as usize;
        let mut redundant = vec![BigInt::from(0); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                redundant[(i + shift) % n] += c;
            }
        }
        let phi = cyclotomic_poly(self.n).expect("n >= 1");
        CycInt { n: self.n, coeffs: reduce_mod_phi(redundant, &phi) }
    }

    /// The ring automorphism ζ_n ↦ ζ_n^u, for gcd(u, n) = 1.
    pub fn galois_power(&self, u: i64) -> Result<Self> {
        let n = self.n;
        let ur = u.rem_euclid(n as i64) as u64;
        if ur.gcd(&n) != 1 {
            return Err(Error::NotCoprime { exponent: u, modulus: n });
        }
        let mut redundant = vec![BigInt::from(0); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                redundant[((i as u64 * ur) % n) as usize] += c;
            }
        }
        let phi = cyclotomic_poly(n).expect("n >= 1");
        Ok(CycInt { n, coeffs: reduce_mod_phi(redundant, &phi) })
    }

    /// The automorphism acting as ζ_k ↦ ζ_k^s on the prime-to-p part and
    /// ζ_{p^v} ↦ ζ_{p^v}^t on the p-part, for a conductor splitting n = k·p^v
    /// with gcd(k, p) = 1.
    pub fn galois(&self, s: i64, t: i64, k: u64, p: u64) -> Result<Self> {
        let n = self.n;
        let mut p_part = 1u64;
        if p >= 2 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
                p_part *= p;
            }
        }
        if k * p_part != n || k.gcd(&p_part) != 1 {
            return Err(Error::BadConductorSplit { n, k, p });
        }
        let s_red = s.rem_euclid(k as i64) as u64;
        if s_red.gcd(&k) != 1 {
            return Err(Error::NotCoprime { exponent: s, modulus: k });
        }
        let t_red = t.rem_euclid(p_part.max(1) as i64) as u64;
        if p_part > 1 && t_red.gcd(&p_part) != 1 {
            return Err(Error::NotCoprime { exponent: t, modulus: p_part });
        }
        let u = if p_part == 1 { s_red } else { crt_pair(s_red, k, t_red, p_part) };
        self.galois_power(u as i64)
    }

    /// Complex conjugation ζ_n ↦ ζ_n^{−1}.
    pub fn conj(&self) -> Self {
        self.galois_power(-1).expect("-1 is always coprime to n")
    }

    /// self · conj(self); rational when the element's absolute value is.
    pub fn abs_square(&self) -> Self {
        self.try_mul(&self.conj()).expect("same conductor")
    }

    /// Exact p-adic valuation: min over coefficients of v_p. Errors on zero.
    pub fn valuation(&self, p: u64) -> Result<u32> {
        assert!(p >= 2, "valuation needs p >= 2");
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let big_p = BigInt::from(p);
        let mut best: Option<u32> = None;
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let mut v = 0u32;
            let mut c = c.clone();
            loop {
                let (q, r) = c.div_rem(&big_p);
                if !r.is_zero() {
                    break;
                }
                v += 1;
                c = q;
                if let Some(b) = best {
                    if v >= b {
                        break;
                    }
                }
            }
            best = Some(best.map_or(v, |b| b.min(v)));
            if best == Some(0) {
                break;
            }
        }
        Ok(best.unwrap())
    }

    /// Numerical embedding with ζ_n ↦ exp(2πi/n).
    pub fn embed(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let step = 2.0 * std::f64::consts::PI / self.n as f64;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = c.to_f64().unwrap_or(f64::NAN);
            let angle = step * i as f64;
            acc += Complex64::new(cf * angle.cos(), cf * angle.sin());
        }
        acc
    }

    /// Absolute error bound for `embed`: φ(n) · max|coeff| · 2^{−50}.
    pub fn embed_error_bound(&self) -> f64 {
        let max = self
            .coeffs
            .iter()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0f64, f64::max);
        self.coeffs.len() as f64 * max * 2f64.powi(-50)
    }

    /// Re-express in Z[ζ_m] for a conductor multiple m (n | m).
    pub fn raise_conductor(&self, m: u64) -> Result<Self> {
        if m % self.n != 0 {
            return Err(Error::ConductorMismatch(self.n, m));
        }
        if m == self.n {
            return Ok(self.clone());
        }
        let stretch = (m / self.n) as usize;
        let mut redundant = vec![BigInt::from(0); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                redundant[i * stretch] = c.clone();
            }
        }
        let phi = cyclotomic_poly(m)?;
        Ok(CycInt { n: m, coeffs: reduce_mod_phi(redundant, &phi) })
    }
}

/// Fold a coefficient vector of arbitrary length into exponents mod n.
fn fold_mod_n(coeffs: Vec<BigInt>, n: u64) -> Vec<BigInt> {
    let n = n as usize;
    let mut out = vec![BigInt::from(0); n];
    for (i, c) in coeffs.into_iter().enumerate() {
        if !c.is_zero() {
            out[i % n] += c;
        }
    }
    out
}

/// Long division by Φ_n on a vector of degree < n; returns exactly φ(n) coefficients.
fn reduce_mod_phi(mut v: Vec<BigInt>, phi: &CycloPoly) -> Vec<BigInt> {
    let d = phi.degree();
    for deg in (d..v.len()).rev() {
        if v[deg].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[deg]);
        for (j, pc) in &phi.lower_nonzero {
            let sub = &c * pc;
            v[deg - d + j] -= sub;
        }
    }
    v.truncate(d);
    v.resize(d, BigInt::from(0));
    v
}

/// i128 multiply-and-reduce; None when inputs/intermediates may not fit.
fn mul_fast_i128(a: &[BigInt], b: &[BigInt], phi: &CycloPoly) -> Option<Vec<BigInt>> {
    let small = phi.lower_small.as_ref()?;
    let to_small = |v: &[BigInt]| v.iter().map(|c| c.to_i128()).collect::<Option<Vec<i128>>>();
    let av = to_small(a)?;
    let bv = to_small(b)?;
    let max_a = av.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    let max_b = bv.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    // Convolution coefficients are bounded by len·max_a·max_b; demand plenty of
    // headroom so the (checked) reduction below rarely has to bail out.
    let bound = (max_a.checked_mul(max_b)?).checked_mul(av.len() as u128)?;
    if bound > 1 << 100 {
        return None;
    }
    let mut conv = vec![0i128; av.len() + bv.len() - 1];
    for (i, &ai) in av.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in bv.iter().enumerate() {
            conv[i + j] += ai * bj;
        }
    }
    // Fold mod n, then checked long division by Φ_n.
    let n = phi.n as usize;
    let mut v = vec![0i128; n.max(conv.len())];
    for (i, c) in conv.into_iter().enumerate() {
        let idx = i % n;
        v[idx] = v[idx].checked_add(c)?;
    }
    v.truncate(n);
    let d = phi.degree();
    for deg in (d..v.len()).rev() {
        if v[deg] == 0 {
            continue;
        }
        let c = v[deg];
        v[deg] = 0;
        for &(j, pc) in small {
            let sub = c.checked_mul(pc as i128)?;
            v[deg - d + j] = v[deg - d + j].checked_sub(sub)?;
        }
    }
    v.truncate(d);
    Some(v.into_iter().map(BigInt::from).collect())
}

// Operator sugar; panics on conductor mismatch (use try_* for fallible code).
impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.try_add(rhs).expect("conductor mismatch in +")
    }
}
impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.try_sub(rhs).expect("conductor mismatch in -")
    }
}
impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.try_mul(rhs).expect("conductor mismatch in *")
    }
}
impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.negate()
    }
}

// JSON form: {"n": 12, "coeffs": ["1", "0", "-1", "0"]} — decimal strings so
// arbitrary-precision coefficients survive any JSON parser.
#[derive(Serialize, Deserialize)]
struct CycIntDto {
    n: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycIntDto { n: self.n, coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = CycIntDto::deserialize(d)?;
        let coeffs = dto
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| D::Error::custom(format!("bad coefficient {s:?}: {e}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycInt::from_reduced(dto.n, coeffs)
            .map_err(|_| D::Error::custom(format!("expected {} coefficients for conductor {}", euler_phi(dto.n), dto.n)))
    }
}
