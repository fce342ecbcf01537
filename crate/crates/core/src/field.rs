//! Finite fields F_q, q = p^f, as F_p[x] modulo a monic irreducible.
//!
//! Elements travel as dense little-endian coefficient vectors or, more often,
//! as their integer encoding Σ c_i p^i < q, which doubles as a table index.
//! Construction is deterministic: the modulus is the encoding-smallest monic
//! irreducible of degree f (just x when f = 1) and the fixed generator γ is the
//! encoding-smallest primitive element, so every run of every binary agrees on
//! which cyclotomic class an element falls in.

use crate::arith::{factorize, mod_inverse, mul_mod};
use crate::error::{Error, Result};

/// Largest supported field order; sweeps and tables are sized for this.
pub const MAX_FIELD_ORDER: u64 = 100_000_000;

/// Largest order for which full dlog/power/trace tables may be built.
pub const MAX_TABLE_ORDER: u64 = 1 << 27;

#[derive(Debug, Clone)]
pub struct Field {
    p: u64,
    f: u32,
    q: u64,
    /// Monic modulus, little-endian, length f + 1, leading coefficient 1.
    modulus: Vec<u64>,
    /// The fixed primitive element γ.
    gamma: Vec<u64>,
    gamma_enc: u64,
    /// trace(x^i) ∈ F_p for each basis monomial.
    tr_basis: Vec<u64>,
    /// Prime factors of q − 1, for order checks.
    group_factors: Vec<u64>,
}

/// Full discrete-log tables for one field, indexed by element encoding.
#[derive(Debug, Clone)]
pub struct DlogTable {
    /// dlog[enc] = j with γ^j = enc; u32::MAX at enc = 0.
    pub dlog: Vec<u32>,
    /// power[j] = encoding of γ^j, length q − 1.
    pub power: Vec<u32>,
    /// trace[enc] ∈ F_p.
    pub trace: Vec<u32>,
}

/// Build F_{p^f} with the canonical modulus and generator.
pub fn build_field(p: u64, f: u32) -> Result<Field> {
    build_field_inner(p, f, None)
}

/// Build F_{p^f} over a caller-supplied monic irreducible modulus.
pub fn build_field_with_modulus(p: u64, f: u32, modulus: Vec<u64>) -> Result<Field> {
    build_field_inner(p, f, Some(modulus))
}

fn build_field_inner(p: u64, f: u32, modulus: Option<Vec<u64>>) -> Result<Field> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    assert!(f >= 1, "extension degree must be >= 1");
    let q = p
        .checked_pow(f)
        .filter(|&q| q <= MAX_FIELD_ORDER)
        .ok_or(Error::FieldTooLarge { q: 0, bound: MAX_FIELD_ORDER, context: "field order p^f".into() })?;

    let modulus = match modulus {
        Some(m) => {
            validate_modulus(p, f, &m)?;
            m
        }
        None => canonical_modulus(p, f),
    };

    let mut fld = Field {
        p,
        f,
        q,
        modulus,
        gamma: vec![0; f as usize],
        gamma_enc: 0,
        tr_basis: vec![0; f as usize],
        group_factors: factorize(q - 1).into_iter().map(|(r, _)| r).collect(),
    };
    fld.tr_basis = fld.compute_trace_basis();
    let (gamma_enc, gamma) = fld.find_generator();
    fld.gamma_enc = gamma_enc;
    fld.gamma = gamma;
    Ok(fld)
}

fn validate_modulus(p: u64, f: u32, m: &[u64]) -> Result<()> {
    let ok_shape = m.len() == f as usize + 1 && *m.last().unwrap() == 1 && m.iter().all(|&c| c < p);
    if !ok_shape {
        return Err(Error::ReducibleModulus {
            p,
            detail: format!("modulus must be monic of degree {f} with coefficients below {p}"),
        });
    }
    if f > 1 && !is_irreducible(p, m) {
        return Err(Error::ReducibleModulus { p, detail: format!("{} is not irreducible", poly_string(m)) });
    }
    Ok(())
}

/// The encoding-smallest monic irreducible of degree f (x itself when f = 1).
fn canonical_modulus(p: u64, f: u32) -> Vec<u64> {
    if f == 1 {
        return vec![0, 1];
    }
    let deg = f as usize;
    let mut lower = vec![0u64; deg];
    loop {
        let mut cand = lower.clone();
        cand.push(1);
        if is_irreducible(p, &cand) {
            return cand;
        }
        // increment the lower-coefficient vector as a base-p counter
        for c in lower.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
        assert!(
            lower.iter().any(|&c| c != 0),
            "no irreducible of degree {f} over F_{p} — impossible"
        );
    }
}

// --- polynomial arithmetic over F_p (little-endian, reduced mod the modulus) ---

fn poly_mul_mod(p: u64, m: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    let deg = m.len() - 1;
    let mut prod = vec![0u64; 2 * deg - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                let cell = &mut prod[i + j];
                *cell = (*cell + mul_mod(ai, bj, p)) % p;
            }
        }
    }
    poly_reduce(p, m, &mut prod);
    prod.truncate(deg);
    prod.resize(deg, 0);
    prod
}

fn poly_reduce(p: u64, m: &[u64], v: &mut Vec<u64>) {
    let deg = m.len() - 1;
    for i in (deg..v.len()).rev() {
        let c = v[i];
        if c == 0 {
            continue;
        }
        v[i] = 0;
        for (j, &mj) in m[..deg].iter().enumerate() {
            if mj != 0 {
                let cell = &mut v[i - deg + j];
                let sub = mul_mod(c, mj, p);
                *cell = (*cell + p - sub % p) % p;
            }
        }
    }
    v.truncate(deg);
}

fn poly_pow_mod(p: u64, m: &[u64], base: &[u64], mut e: u64) -> Vec<u64> {
    let deg = m.len() - 1;
    let mut acc = vec![0u64; deg];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(p, m, &acc, &b);
        }
        b = poly_mul_mod(p, m, &b, &b);
        e >>= 1;
    }
    acc
}

fn poly_is_zero(v: &[u64]) -> bool {
    v.iter().all(|&c| c == 0)
}

/// Strip leading zeros; the zero polynomial becomes the empty vector.
fn poly_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Remainder of a mod b over F_p; b must be nonzero.
fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let b = poly_trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let inv = mod_inverse(*b.last().unwrap(), p);
    let mut r = poly_trim(a.to_vec());
    while r.len() > db {
        let da = r.len() - 1;
        let c = mul_mod(r[da], inv, p);
        for (j, &bj) in b.iter().enumerate() {
            let cell = &mut r[da - db + j];
            let sub = mul_mod(c, bj, p);
            *cell = (*cell + p - sub) % p;
        }
        r = poly_trim(r);
    }
    r
}

/// gcd of two polynomials over F_p; the empty vector means gcd(0, 0).
fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: m (monic, degree f ≥ 2) is irreducible over F_p iff
/// x^{p^f} ≡ x mod m and gcd(x^{p^{f/r}} − x, m) = 1 for every prime r | f.
fn is_irreducible(p: u64, m: &[u64]) -> bool {
    let f = (m.len() - 1) as u32;
    let deg = f as usize;
    let x: Vec<u64> = (0..deg).map(|i| u64::from(i == 1)).collect();
    if deg == 1 {
        return true;
    }
    // frobenius iterate: x^{p^j} via repeated p-th powering
    let mut fr = x.clone();
    let mut frob_at = vec![x.clone()]; // frob_at[j] = x^{p^j}
    for _ in 0..f {
        fr = poly_pow_mod(p, m, &fr, p);
        frob_at.push(fr.clone());
    }
    if frob_at[deg] != x {
        return false;
    }
    for (r, _) in factorize(f as u64) {
        let j = (f / r as u32) as usize;
        let mut diff = frob_at[j].clone();
        // diff = x^{p^j} - x
        diff[1] = (diff[1] + p - 1) % p;
        if poly_is_zero(&diff) {
            return false;
        }
        let g = poly_gcd(p, &diff, m);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn poly_string(m: &[u64]) -> String {
    let terms: Vec<String> = m
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    terms.join(" + ")
}

impl Field {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn gamma(&self) -> &[u64] {
        &self.gamma
    }
    pub fn gamma_enc(&self) -> u64 {
        self.gamma_enc
    }

    /// Integer encoding Σ c_i p^i of a coefficient vector.
    pub fn enc(&self, elt: &[u64]) -> u64 {
        let mut acc = 0u64;
        for &c in elt.iter().rev() {
            acc = acc * self.p + c % self.p;
        }
        acc
    }

    /// Coefficient vector of an encoding.
    pub fn dec(&self, mut enc: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.f as usize];
        for c in out.iter_mut() {
            *c = enc % self.p;
            enc /= self.p;
        }
        debug_assert_eq!(enc, 0, "encoding out of range");
        out
    }

    pub fn add_enc(&self, a: u64, b: u64) -> u64 {
        let (av, bv) = (self.dec(a), self.dec(b));
        let sum: Vec<u64> = av.iter().zip(&bv).map(|(x, y)| (x + y) % self.p).collect();
        self.enc(&sum)
    }

    pub fn neg_enc(&self, a: u64) -> u64 {
        let av = self.dec(a);
        let neg: Vec<u64> = av.iter().map(|&x| (self.p - x) % self.p).collect();
        self.enc(&neg)
    }

    pub fn sub_enc(&self, a: u64, b: u64) -> u64 {
        self.add_enc(a, self.neg_enc(b))
    }

    pub fn mul_enc(&self, a: u64, b: u64) -> u64 {
        if self.f == 1 {
            return mul_mod(a, b, self.p);
        }
        let prod = poly_mul_mod(self.p, &self.modulus, &self.dec(a), &self.dec(b));
        self.enc(&prod)
    }

    pub fn pow_enc(&self, a: u64, mut e: u64) -> u64 {
        if self.f == 1 {
            return crate::arith::pow_mod(a, e, self.p);
        }
        let mut acc = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_enc(acc, base);
            }
            base = self.mul_enc(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv_enc(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow_enc(a, self.q - 2)
    }

    /// The absolute trace Tr_{F_q/F_p}(a) ∈ F_p.
    pub fn trace_enc(&self, a: u64) -> u64 {
        if self.f == 1 {
            return a % self.p;
        }
        let av = self.dec(a);
        let mut acc = 0u64;
        for (c, t) in av.iter().zip(&self.tr_basis) {
            acc = (acc + mul_mod(*c, *t, self.p)) % self.p;
        }
        acc
    }

    fn compute_trace_basis(&self) -> Vec<u64> {
        let deg = self.f as usize;
        if deg == 1 {
            return vec![1];
        }
        // frob[j] = x^{p^j} mod m, then tr(x^i) = Σ_j (frob[j])^i
        let x: Vec<u64> = (0..deg).map(|i| u64::from(i == 1)).collect();
        let mut frob = vec![x.clone()];
        for j in 1..deg {
            let prev = &frob[j - 1];
            frob.push(poly_pow_mod(self.p, &self.modulus, prev, self.p));
        }
        let mut basis = vec![0u64; deg];
        for (i, slot) in basis.iter_mut().enumerate() {
            let mut acc = vec![0u64; deg];
            for fj in &frob {
                let term = poly_pow_mod(self.p, &self.modulus, fj, i as u64);
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a = (*a + t) % self.p;
                }
            }
            assert!(acc[1..].iter().all(|&c| c == 0), "trace of basis monomial not in prime field");
            *slot = acc[0];
        }
        basis
    }

    /// Order of a nonzero element divides q − 1; primitive iff no proper
    /// (q−1)/r power is 1.
    fn is_primitive(&self, enc: u64) -> bool {
        if enc == 0 {
            return false;
        }
        self.group_factors.iter().all(|&r| self.pow_enc(enc, (self.q - 1) / r) != 1)
    }

    fn find_generator(&self) -> (u64, Vec<u64>) {
        for enc in 1..self.q {
            if self.is_primitive(enc) {
                return (enc, self.dec(enc));
            }
        }
        unreachable!("F_q^* is cyclic; a generator exists");
    }

    /// Visit (j, encoding of γ^j) for j = 0 .. q−2 with one multiplication per
    /// step — the O(1)-memory way to sweep the whole multiplicative group.
    pub fn stream_powers(&self, mut visit: impl FnMut(u64, u64)) {
        let mut cur = 1u64;
        for j in 0..self.q - 1 {
            visit(j, cur);
            cur = self.mul_enc(cur, self.gamma_enc);
        }
        debug_assert_eq!(cur, 1, "gamma order must be q - 1");
    }

    /// Full dlog/power/trace tables; refuses fields beyond `MAX_TABLE_ORDER`.
    pub fn dlog_table(&self) -> Result<DlogTable> {
        if self.q > MAX_TABLE_ORDER {
            return Err(Error::FieldTooLarge { q: self.q, bound: MAX_TABLE_ORDER, context: "dlog table".into() });
        }
        let qs = self.q as usize;
        let mut dlog = vec![u32::MAX; qs];
        let mut power = vec![0u32; qs - 1];
        let mut trace = vec![0u32; qs];
        self.stream_powers(|j, enc| {
            dlog[enc as usize] = j as u32;
            power[j as usize] = enc as u32;
        });
        for (enc, t) in trace.iter_mut().enumerate() {
            *t = self.trace_enc(enc as u64) as u32;
        }
        Ok(DlogTable { dlog, power, trace })
    }

    /// Encodings of the class union γ^I·⟨γ^k⟩ = { γ^j : j ≡ i mod k, i ∈ I }.
    pub fn class_union_elements(&self, k: u64, indices: &[u64]) -> Result<Vec<u64>> {
        if (self.q - 1) % k != 0 {
            return Err(Error::ModulusDoesNotDivideGroupOrder { k, group_order: self.q - 1 });
        }
        let mut mask = vec![false; k as usize];
        for &i in indices {
            mask[(i % k) as usize] = true;
        }
        let mut out = Vec::with_capacity(((self.q - 1) / k) as usize * indices.len());
        self.stream_powers(|j, enc| {
            if mask[(j % k) as usize] {
                out.push(enc);
            }
        });
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn prime_field_f7() {
        let f7 = build_field(7, 1).unwrap();
        assert_eq!(f7.q(), 7);
        assert_eq!(f7.gamma_enc(), 3, "3 is the least primitive root mod 7");
        let powers: Vec<u64> = (0..6).map(|j| f7.pow_enc(3, j)).collect();
        assert_eq!(powers, vec![1, 3, 2, 6, 4, 5]);
        assert_eq!(f7.trace_enc(5), 5);
        assert_eq!(f7.pow_enc(3, 3), 6, "dlog of -1 is (q-1)/2");
    }

    #[test]
    fn f9_canonical_modulus_and_generator() {
        let f9 = build_field(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1], "x^2 + 1 is the least irreducible");
        assert_eq!(f9.gamma_enc(), 4, "1 + x is the least primitive element");
        // x has order 4, not 8
        assert_eq!(f9.pow_enc(3, 4), 1);
        assert_ne!(f9.pow_enc(3, 2), 1);
        // trace(x) = x + x^3 = x - x = 0; trace(1) = 2
        assert_eq!(f9.trace_enc(3), 0);
        assert_eq!(f9.trace_enc(1), 2);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 2 = (x-1)(x+1) over F_3
        let err = build_field_with_modulus(3, 2, vec![2, 0, 1]).unwrap_err();
        assert!(matches!(err, Error::ReducibleModulus { p: 3, .. }));
        let err = build_field(6, 1).unwrap_err();
        assert!(matches!(err, Error::NonPrimeCharacteristic(6)));
        let err = build_field(2, 40).unwrap_err();
        assert!(matches!(err, Error::FieldTooLarge { .. }));
    }

    #[test]
    fn field_axioms_hold_exhaustively_in_f8_and_f9() {
        for (p, f) in [(2u64, 3u32), (3, 2)] {
            let fld = build_field(p, f).unwrap();
            let q = fld.q();
            for a in 0..q {
                assert_eq!(fld.add_enc(a, 0), a);
                assert_eq!(fld.mul_enc(a, 1), a);
                assert_eq!(fld.add_enc(a, fld.neg_enc(a)), 0);
                if a != 0 {
                    assert_eq!(fld.mul_enc(a, fld.inv_enc(a)), 1);
                }
                for b in 0..q {
                    assert_eq!(fld.add_enc(a, b), fld.add_enc(b, a));
                    assert_eq!(fld.mul_enc(a, b), fld.mul_enc(b, a));
                    for c in 0..q {
                        assert_eq!(
                            fld.mul_enc(a, fld.add_enc(b, c)),
                            fld.add_enc(fld.mul_enc(a, b), fld.mul_enc(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn trace_is_additive_and_surjective() {
        let f27 = build_field(3, 3).unwrap();
        let mut seen = HashSet::new();
        for a in 0..27 {
            seen.insert(f27.trace_enc(a));
            for b in 0..27 {
                assert_eq!(
                    f27.trace_enc(f27.add_enc(a, b)),
                    (f27.trace_enc(a) + f27.trace_enc(b)) % 3
                );
            }
        }
        assert_eq!(seen.len(), 3);
        // Frobenius invariance: tr(a^p) = tr(a)
        for a in 0..27 {
            assert_eq!(f27.trace_enc(fld_pow(&f27, a, 3)), f27.trace_enc(a));
        }
    }

    fn fld_pow(fld: &Field, a: u64, e: u64) -> u64 {
        fld.pow_enc(a, e)
    }

    #[test]
    fn dlog_table_is_bijective() {
        let f25 = build_field(5, 2).unwrap();
        let t = f25.dlog_table().unwrap();
        assert_eq!(t.dlog[0], u32::MAX);
        for j in 0..24u32 {
            assert_eq!(t.dlog[t.power[j as usize] as usize], j);
        }
        let uniq: HashSet<u32> = t.power.iter().copied().collect();
        assert_eq!(uniq.len(), 24);
        for enc in 0..25u64 {
            assert_eq!(t.trace[enc as usize] as u64, f25.trace_enc(enc));
        }
    }

    #[test]
    fn stream_powers_matches_table() {
        let f49 = build_field(7, 2).unwrap();
        let t = f49.dlog_table().unwrap();
        let mut n = 0u64;
        f49.stream_powers(|j, enc| {
            assert_eq!(t.power[j as usize] as u64, enc);
            n += 1;
        });
        assert_eq!(n, 48);
        assert_eq!(f49.pow_enc(f49.gamma_enc(), 24), 6, "γ^{{(q-1)/2}} = -1");
    }

    #[test]
    fn class_union_partitions_the_group() {
        let f27 = build_field(3, 3).unwrap();
        let all: Vec<u64> = (0..13).collect();
        let union = f27.class_union_elements(13, &all).unwrap();
        assert_eq!(union.len(), 26);
        let c0 = f27.class_union_elements(13, &[0]).unwrap();
        assert_eq!(c0.len(), 2);
        assert!(c0.contains(&1));
        let err = f27.class_union_elements(5, &[0]).unwrap_err();
        assert!(matches!(err, Error::ModulusDoesNotDivideGroupOrder { k: 5, group_order: 26 }));
    }
}
