//! Multiplicative characters, Gauss sums, and Cayley-graph spectra over F_q.
//!
//! The central object is the count table N(i, t) = #{x ∈ F_q^* : x ∈
//! C_i^{(k,q)}, Tr(x) = t}. Gauss sums of characters of order dividing k,
//! Gauss periods, and eigenvalues of cyclotomic Cayley graphs are all
//! Z-linear combinations of roots of unity whose coefficients are read off
//! N, so a single pass over the powers of γ funds every exact character
//! computation at that modulus.
//!
//! Exact values live in `CycInt` (conductor k·p for Gauss sums, p for
//! periods and spectra). The floating-point DFT path exists only as a
//! screening device for fields too large for exact summation; every float
//! result carries an explicit error bound and is either confirmed by exact
//! rounding (autocorrelation counts) or labelled as float evidence.

use num_bigint::BigInt;
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::field::{Field, MAX_TABLE_ORDER};

/// Largest k·p for which a count table is materialised.
pub const MAX_COUNT_TABLE_CELLS: u64 = 1 << 25;

/// Default ceiling on q for the exact spectrum path (O(q·|D|) work).
pub const DEFAULT_EXACT_SPECTRUM_CEILING: u64 = 100_000;

/// Default ceiling on q for the float DFT path (O(q) complex storage).
pub const DEFAULT_FLOAT_CEILING: u64 = 10_000_000;

/// Cluster separation threshold, as a multiple of the DFT error bound.
pub const CLUSTER_SEPARATION_FACTOR: f64 = 1.0e3;

/// Count table N(i, t) for a fixed field and modulus k | q−1.
///
/// Row i (0 ≤ i < k) counts elements of the cyclotomic class C_i^{(k,q)} by
/// their absolute trace t ∈ F_p. The table also records the discrete logs of
/// the prime-field constants met during the stream, which later checks need
/// for values like χ(b) with b ∈ F_p^*.
pub struct ClassCountTable {
    p: u64,
    f: u32,
    q: u64,
    k: u64,
    counts: Vec<u32>,
    const_dlog: Vec<u64>,
}

/// Build the count table for k | q−1 with one pass over the powers of γ.
pub fn class_count_table(field: &Field, k: u64) -> Result<ClassCountTable> {
    let (p, q) = (field.p(), field.q());
    if k == 0 || (q - 1) % k != 0 {
        return Err(Error::ModulusDoesNotDivideGroupOrder { k, group_order: q - 1 });
    }
    if k * p > MAX_COUNT_TABLE_CELLS {
        return Err(Error::FieldTooLarge {
            q,
            bound: MAX_COUNT_TABLE_CELLS,
            context: format!("count table needs k·p = {} cells", k * p),
        });
    }
    let mut counts = vec![0u32; (k * p) as usize];
    let mut const_dlog = vec![u64::MAX; p as usize];
    let mut i = 0u64;
    field.stream_powers(|j, enc| {
        let t = field.trace_enc(enc);
        counts[(i * p + t) as usize] += 1;
        if enc < p {
            const_dlog[enc as usize] = j;
        }
        i += 1;
        if i == k {
            i = 0;
        }
    });
    let table = ClassCountTable { p, f: field.f(), q, k, counts, const_dlog };
    debug_assert!(table.row_sums_are_balanced());
    Ok(table)
}

impl ClassCountTable {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn k(&self) -> u64 {
        self.k
    }

    /// N(i, t): elements of C_i with trace t.
    pub fn count(&self, i: u64, t: u64) -> u64 {
        self.counts[(i % self.k * self.p + t % self.p) as usize] as u64
    }

    /// Discrete log of the constant c ∈ F_p^* to base γ, if c ≠ 0.
    pub fn const_dlog(&self, c: u64) -> Option<u64> {
        let d = self.const_dlog[(c % self.p) as usize];
        (d != u64::MAX).then_some(d)
    }

    /// Conductor of the Gauss sums read from this table: k·p (coprime parts).
    pub fn conductor(&self) -> u64 {
        self.k * self.p
    }

    /// dlog of −1, reduced mod k. In characteristic 2 this is 0.
    pub fn minus_one_dlog_mod_k(&self) -> u64 {
        if self.p == 2 {
            0
        } else {
            (self.q - 1) / 2 % self.k
        }
    }

    fn row_sums_are_balanced(&self) -> bool {
        let expect = (self.q - 1) / self.k;
        (0..self.k).all(|i| {
            (0..self.p).map(|t| self.count(i, t)).sum::<u64>() == expect
        })
    }

    /// G_f(χ_k^j) = Σ_{x ∈ F_q^*} χ_k^j(x) ψ(x), exact at conductor k·p.
    ///
    /// χ_k is the character with χ_k(γ) = ζ_k; ψ(x) = ζ_p^{Tr(x)}. Grouping
    /// the defining sum by (class, trace) gives Σ_{i,t} N(i,t) ζ_k^{ji} ζ_p^t.
    pub fn gauss_sum(&self, j: u64) -> CycInt {
        let (k, p) = (self.k, self.p);
        let n = k * p;
        let jr = j % k;
        let mut coeffs = vec![BigInt::from(0); n as usize];
        for i in 0..k {
            // ζ_k = ζ_n^p, ζ_p = ζ_n^k.
            let base = jr * i % k * p;
            for t in 0..p {
                let c = self.counts[(i * p + t) as usize];
                if c != 0 {
                    coeffs[((base + t * k) % n) as usize] += c;
                }
            }
        }
        CycInt::from_unreduced(n, coeffs)
    }

    /// Gauss periods ψ(C_i) for i = 0..k, exact at conductor p.
    pub fn class_sums(&self) -> Vec<CycInt> {
        (0..self.k)
            .map(|i| {
                let coeffs = (0..self.p)
                    .map(|t| BigInt::from(self.counts[(i * self.p + t) as usize]))
                    .collect();
                CycInt::from_unreduced(self.p, coeffs)
            })
            .collect()
    }
}

/// The quadratic-character Gauss sum in closed form: (−1)^{f−1} g_p^f at
/// conductor p, where g_p = Σ_{x∈F_p^*} (x|p) ζ_p^x.
///
/// This is the independent route against which the tabulated k = 2 Gauss sum
/// is compared; it never touches the count table.
pub fn quadratic_closed_form(p: u64, f: u32) -> Result<CycInt> {
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !crate::arith::is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    let mut coeffs = vec![BigInt::from(0); p as usize];
    for x in 1..p {
        let sign = if crate::arith::pow_mod(x, (p - 1) / 2, p) == 1 { 1 } else { -1 };
        coeffs[x as usize] = BigInt::from(sign);
    }
    let g = CycInt::from_unreduced(p, coeffs);
    let mut acc = CycInt::one(p);
    for _ in 0..f {
        acc = acc.try_mul(&g)?;
    }
    if f % 2 == 0 {
        acc = acc.negate();
    }
    Ok(acc)
}

/// Outcome of the direct (ring-arithmetic) Gauss-sum property checks.
#[derive(Debug)]
pub struct GaussPropertyReport {
    pub q: u64,
    pub k: u64,
    /// G(trivial χ) = −1.
    pub trivial_ok: bool,
    /// G(χ)·conj(G(χ)) = q for every nontrivial χ.
    pub modulus_ok: bool,
    /// G(χ^p) = G(χ) for every χ.
    pub frobenius_ok: bool,
    /// G(χ^{−1}) = χ(−1)·conj(G(χ)) for every nontrivial χ.
    pub inversion_ok: bool,
    /// σ_{a,b}(G(χ)) = χ^{−a}(b)·G(χ^a) on sampled automorphisms σ_{a,b}.
    pub twist_ok: bool,
    pub twist_samples: usize,
    pub failures: Vec<String>,
}

impl GaussPropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the defining Gauss-sum identities for every character of order
/// dividing k, entirely in exact cyclotomic arithmetic.
///
/// The conjugation, Frobenius, and inversion identities are checked for all
/// characters; the Galois-twist identity is checked on `twist_samples`
/// deterministically sampled automorphisms σ_{a,b} (the full sweep over all
/// automorphisms is the job of the modular-image engine).
pub fn check_gauss_properties(
    table: &ClassCountTable,
    twist_samples: usize,
) -> GaussPropertyReport {
    let (k, p, q) = (table.k(), table.p(), table.q());
    let n = table.conductor();
    let sums: Vec<CycInt> = (0..k).map(|j| table.gauss_sum(j)).collect();
    let mut failures = Vec::new();

    let trivial_ok = sums[0] == CycInt::constant(n, -1);
    if !trivial_ok {
        failures.push("trivial character sum != -1".into());
    }

    let mut modulus_ok = true;
    let mut frobenius_ok = true;
    let mut inversion_ok = true;
    let m1 = table.minus_one_dlog_mod_k();
    for j in 0..k {
        let g = &sums[j as usize];
        if sums[(j * p % k) as usize] != *g {
            frobenius_ok = false;
            failures.push(format!("Frobenius identity failed at j = {j}"));
        }
        if j == 0 {
            continue;
        }
        if g.try_mul(&g.conj()).unwrap() != CycInt::constant(n, q) {
            modulus_ok = false;
            failures.push(format!("|G|^2 != q at j = {j}"));
        }
        // χ^j(−1) = ζ_k^{j·dlog(−1)}; ζ_k = ζ_n^p.
        let chi_m1 = (j * m1 % k * p) as i64;
        if sums[((k - j) % k) as usize] != g.conj().mul_zeta_pow(chi_m1) {
            inversion_ok = false;
            failures.push(format!("inversion identity failed at j = {j}"));
        }
    }

    // Deterministic sample of automorphisms σ_{a,b}: ζ_k ↦ ζ_k^a, ζ_p ↦ ζ_p^b.
    let mut twist_ok = true;
    let mut taken = 0usize;
    let mut state = q.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(k);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        state >> 11
    };
    let mut guard = 0;
    while taken < twist_samples && guard < 200 {
        guard += 1;
        let a = next() % k;
        let b = 1 + next() % (p - 1);
        if num_integer::gcd(a, k) != 1 {
            continue;
        }
        taken += 1;
        let dlog_b = table
            .const_dlog(b)
            .expect("every prime-field constant appears in the power stream");
        for j in 1..k {
            let lhs = sums[j as usize].galois(a as i64, b as i64, k, p).unwrap();
            // χ^{−ja}(b) = ζ_k^{−ja·dlog(b)}.
            let e = (k - j * a % k * (dlog_b % k) % k % k) % k;
            let rhs = sums[(j * a % k) as usize].mul_zeta_pow((e * p) as i64);
            if lhs != rhs {
                twist_ok = false;
                failures.push(format!("twist identity failed at j = {j}, a = {a}, b = {b}"));
            }
        }
    }

    GaussPropertyReport {
        q,
        k,
        trivial_ok,
        modulus_ok,
        frobenius_ok,
        inversion_ok,
        twist_ok,
        twist_samples: taken,
        failures,
    }
}

/// Exact product-formula check for one character and one auxiliary order.
///
/// With χ = χ_k^j and η = χ_k^{k/ℓ} (the order-ℓ character), verifies in
/// cross-multiplied form, entirely in Z[ζ_{kp}]:
///
///   G(χ) · χ^ℓ(ℓ) · Π_{i=1}^{ℓ−1} G(χη^i)  =  G(χ^ℓ) · Π_{i=1}^{ℓ−1} G(η^i).
///
/// Preconditions (`BadOrder` otherwise): ℓ > 1, ℓ | k, χ nontrivial, and χ^ℓ
/// nontrivial. The last one is not a loss of generality worth relaxing: if
/// χ^ℓ is trivial then χ lies in ⟨η⟩ and some factor G(χη^i) degenerates.
pub fn davenport_hasse_check(table: &ClassCountTable, j: u64, ell: u64) -> Result<bool> {
    let (k, p) = (table.k(), table.p());
    if ell < 2 {
        return Err(Error::BadOrder { ell, detail: "auxiliary order must exceed 1".into() });
    }
    if k % ell != 0 {
        return Err(Error::BadOrder {
            ell,
            detail: format!("order must divide the table modulus k = {k}"),
        });
    }
    let j = j % k;
    if j == 0 {
        return Err(Error::BadOrder { ell, detail: "character must be nontrivial".into() });
    }
    if j * ell % k == 0 {
        return Err(Error::BadOrder {
            ell,
            detail: "χ^ℓ must be nontrivial (χ outside the order-ℓ subgroup)".into(),
        });
    }
    let ell_const = ell % p;
    if ell_const == 0 {
        return Err(Error::BadOrder { ell, detail: "order is divisible by the characteristic".into() });
    }
    let step = k / ell;
    let dlog_ell = table
        .const_dlog(ell_const)
        .expect("every prime-field constant appears in the power stream");
    // χ^ℓ(ℓ) = ζ_k^{jℓ·dlog(ℓ)}; ζ_k = ζ_n^p.
    let chi_ell_of_ell = j * ell % k * (dlog_ell % k) % k;
    let mut lhs = table.gauss_sum(j).mul_zeta_pow((chi_ell_of_ell * p) as i64);
    let mut rhs = table.gauss_sum(j * ell % k);
    for i in 1..ell {
        lhs = lhs.try_mul(&table.gauss_sum((j + i * step) % k))?;
        rhs = rhs.try_mul(&table.gauss_sum(i * step))?;
    }
    Ok(lhs == rhs)
}

/// Exact spectrum of a union of cyclotomic classes.
///
/// For D = ∪_{i∈I} C_i^{(k,q)}, the Cayley eigenvalue at a = γ^c x (x ∈ C_0)
/// is ψ(γ^c D) = Σ_{i∈I} ψ(C_{i+c}), so the whole spectrum is k exact
/// conductor-p values, each with multiplicity (q−1)/k, plus |D| at a = 0.
pub struct ClassSpectrum {
    pub k: u64,
    /// Multiplicity of each of the k values: (q−1)/k.
    pub multiplicity: u64,
    /// values[c] = ψ(γ^c D).
    pub values: Vec<CycInt>,
    /// Eigenvalue at a = 0, i.e. |D|.
    pub zero_value: u64,
}

/// Compute the exact class-union spectrum and check the two global
/// identities it must satisfy (power sum and plain sum over all of F_q).
pub fn spectrum_exact_classes(field: &Field, k: u64, indices: &[u64]) -> Result<ClassSpectrum> {
    let table = class_count_table(field, k)?;
    spectrum_from_table(&table, indices)
}

/// Same as `spectrum_exact_classes` for callers that already hold the table.
pub fn spectrum_from_table(table: &ClassCountTable, indices: &[u64]) -> Result<ClassSpectrum> {
    let (k, p, q) = (table.k(), table.p(), table.q());
    let mut seen = vec![false; k as usize];
    for &i in indices {
        if i >= k {
            return Err(Error::InvalidElement(format!("class index {i} out of range for k = {k}")));
        }
        if seen[i as usize] {
            return Err(Error::InvalidElement(format!("class index {i} repeated")));
        }
        seen[i as usize] = true;
    }
    let cs = table.class_sums();
    let mult = (q - 1) / k;
    let size = mult * indices.len() as u64;
    let values: Vec<CycInt> = (0..k)
        .map(|c| {
            let mut acc = CycInt::zero(p);
            for &i in indices {
                acc = acc.try_add(&cs[((i + c) % k) as usize]).unwrap();
            }
            acc
        })
        .collect();

    // Σ_{a∈F_q} ψ_a(D) = q·[0 ∈ D] = 0 here, and Parseval:
    // Σ_{a∈F_q} |ψ_a(D)|² = q·|D|. Both exact in Z[ζ_p].
    let mut plain = CycInt::constant(p, size);
    let mut power = CycInt::constant(p, BigInt::from(size) * BigInt::from(size));
    for v in &values {
        plain = plain.try_add(&v.scale(&BigInt::from(mult))).unwrap();
        power = power.try_add(&v.abs_square().scale(&BigInt::from(mult))).unwrap();
    }
    assert!(plain.is_zero(), "class spectrum failed the zero-sum identity");
    assert_eq!(
        power,
        CycInt::constant(p, BigInt::from(q) * BigInt::from(size)),
        "class spectrum failed the power-sum identity"
    );

    Ok(ClassSpectrum { k, multiplicity: mult, values, zero_value: size })
}

fn validate_elements(field: &Field, elements: &[u64]) -> Result<()> {
    let q = field.q();
    let mut sorted: Vec<u64> = elements.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidElement(format!("element {} repeated", w[0])));
        }
    }
    if let Some(&big) = sorted.last() {
        if big >= q {
            return Err(Error::InvalidElement(format!("element {big} out of range for q = {q}")));
        }
    }
    Ok(())
}

/// Stream the exact eigenvalue data of an arbitrary subset D ⊆ F_q.
///
/// For each a ∈ F_q (in encoding order, a = 0 first) calls `visit(a, hist)`
/// where hist[t] = #{d ∈ D : Tr(a·d) = t}; the eigenvalue at a is exactly
/// Σ_t hist[t]·ζ_p^t. Costs O(q·|D|) table lookups, so it is gated by
/// `ceiling`.
pub fn psi_histograms(
    field: &Field,
    elements: &[u64],
    ceiling: u64,
    mut visit: impl FnMut(u64, &[u32]),
) -> Result<()> {
    let (p, q) = (field.p(), field.q());
    if q > ceiling || q > MAX_TABLE_ORDER {
        return Err(Error::FieldTooLargeForExactPath {
            q,
            set_size: elements.len() as u64,
            ceiling: ceiling.min(MAX_TABLE_ORDER),
        });
    }
    validate_elements(field, elements)?;
    let table = field.dlog_table()?;
    let dlogs: Vec<u64> = elements
        .iter()
        .map(|&d| {
            if d == 0 {
                return Err(Error::InvalidElement("0 has no discrete log; exclude it".into()));
            }
            Ok(table.dlog[d as usize] as u64)
        })
        .collect::<Result<_>>()?;
    let mut hist = vec![0u32; p as usize];
    hist[0] = elements.len() as u32;
    visit(0, &hist);
    let group = q - 1;
    for a in 1..q {
        hist.iter_mut().for_each(|c| *c = 0);
        let alpha = table.dlog[a as usize] as u64;
        for &delta in &dlogs {
            let mut e = alpha + delta;
            if e >= group {
                e -= group;
            }
            hist[table.trace[table.power[e as usize] as usize] as usize] += 1;
        }
        visit(a, &hist);
    }
    Ok(())
}

/// Summary of an exact spectrum: distinct values with multiplicities.
pub struct ExactSpectrumSummary {
    pub zero_value: u64,
    /// Distinct eigenvalues over a ∈ F_q^*, conductor p, with multiplicities.
    pub values: Vec<(CycInt, u64)>,
    /// True if the scan stopped after exceeding the distinct-value cap; the
    /// list is then a prefix, not the full spectrum.
    pub truncated: bool,
}

/// Exact spectrum of an arbitrary subset, summarised by distinct values.
///
/// Stops early (with `truncated = true`) once more than `distinct_cap`
/// distinct values appear: the summary form is only useful for highly
/// structured sets, and an unstructured set would produce Θ(q) entries.
pub fn spectrum_exact(
    field: &Field,
    elements: &[u64],
    distinct_cap: usize,
    ceiling: u64,
) -> Result<ExactSpectrumSummary> {
    let p = field.p();
    let mut keyed: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut truncated = false;
    let mut zero_value = 0;
    psi_histograms(field, elements, ceiling, |a, hist| {
        if a == 0 {
            zero_value = hist[0] as u64;
            return;
        }
        if truncated {
            return;
        }
        if keyed.len() > distinct_cap {
            truncated = true;
            return;
        }
        *keyed.entry(hist.to_vec()).or_insert(0) += 1;
    })?;
    let mut values: Vec<(CycInt, u64)> = keyed
        .into_iter()
        .map(|(hist, count)| {
            let coeffs = hist.iter().map(|&c| BigInt::from(c)).collect();
            (CycInt::from_unreduced(p, coeffs), count)
        })
        .collect();
    values.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.coeffs().cmp(b.0.coeffs())));
    if truncated {
        values.truncate(distinct_cap);
    }
    Ok(ExactSpectrumSummary { zero_value, values, truncated })
}

/// Floating-point additive-character transform of a subset indicator.
pub struct FloatSpectrum {
    /// values[b] = Σ_{d∈D} ω_p^{⟨b,d⟩} in standard coordinates, where
    /// ⟨·,·⟩ is the coordinatewise form on F_q ≅ (F_p)^f. The Cayley
    /// eigenvalue at a is values[TraceReindex::index(a)]; index 0 is a = 0.
    pub values: Vec<Complex64>,
    /// Uniform bound on |values[b] − exact|: q·f·p·2^{−50}.
    pub error_bound: f64,
}

/// Map field elements to their slot in the standard-form transform.
///
/// Tr(a·d) is a nondegenerate bilinear form; in coordinates Tr(a·d) =
/// ⟨M·a, d⟩ with M_{ji} = Tr(x^{i+j}). So the eigenvalue of a is the
/// standard-form transform evaluated at b = M·a.
pub struct TraceReindex {
    p: u64,
    f: u32,
    m: Vec<u64>,
}

impl TraceReindex {
    pub fn new(field: &Field) -> Self {
        let (p, f) = (field.p(), field.f());
        // f = 1: trace is the identity and M = (1).
        if f == 1 {
            return TraceReindex { p, f, m: vec![1] };
        }
        let x_enc = p; // encoding of the polynomial generator x
        let mut pow = 1u64; // x^0
        let mut tr_pows = Vec::with_capacity(2 * f as usize - 1);
        for _ in 0..2 * f - 1 {
            tr_pows.push(field.trace_enc(pow));
            pow = field.mul_enc(pow, x_enc);
        }
        let mut m = vec![0u64; (f * f) as usize];
        for j in 0..f {
            for i in 0..f {
                m[(j * f + i) as usize] = tr_pows[(i + j) as usize];
            }
        }
        TraceReindex { p, f, m }
    }

    /// Index of the slot holding the eigenvalue of a.
    pub fn index(&self, a_enc: u64) -> u64 {
        if self.f == 1 {
            return a_enc % self.p;
        }
        let (p, f) = (self.p, self.f as u64);
        let mut digits = [0u64; 64];
        let mut rest = a_enc;
        for d in digits.iter_mut().take(f as usize) {
            *d = rest % p;
            rest /= p;
        }
        let mut out = 0u64;
        for j in (0..f).rev() {
            let mut acc = 0u64;
            for i in 0..f {
                acc += self.m[(j * f + i) as usize] * digits[i as usize];
            }
            out = out * p + acc % p;
        }
        out
    }
}

fn roots_table(p: u64, sign: f64) -> Vec<Complex64> {
    (0..p)
        .map(|m| {
            let theta = sign * 2.0 * PI * m as f64 / p as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect()
}

/// In-place separable DFT over (F_p)^f with kernel ω_p^{sign·s·t}.
fn separable_dft(v: &mut [Complex64], p: u64, f: u32, sign: f64) {
    let roots = roots_table(p, sign);
    let pu = p as usize;
    let mut line = vec![Complex64::new(0.0, 0.0); pu];
    let mut stride = 1usize;
    for _ in 0..f {
        let block = stride * pu;
        let mut base_block = 0usize;
        while base_block < v.len() {
            for lo in 0..stride {
                let base = base_block + lo;
                for (t, slot) in line.iter_mut().enumerate() {
                    *slot = v[base + t * stride];
                }
                for s in 0..pu {
                    let mut acc = Complex64::new(0.0, 0.0);
                    let mut idx = 0usize;
                    for &x in line.iter() {
                        acc += x * roots[idx];
                        idx += s;
                        if idx >= pu {
                            idx -= pu;
                        }
                    }
                    v[base + s * stride] = acc;
                }
            }
            base_block += block;
        }
        stride *= pu;
    }
}

/// Float transform of the indicator of `elements`, with its error bound.
pub fn spectrum_dft(field: &Field, elements: &[u64], ceiling: u64) -> Result<FloatSpectrum> {
    let (p, f, q) = (field.p(), field.f(), field.q());
    if q > ceiling {
        return Err(Error::FieldTooLarge {
            q,
            bound: ceiling,
            context: "float spectrum storage".into(),
        });
    }
    validate_elements(field, elements)?;
    let mut v = vec![Complex64::new(0.0, 0.0); q as usize];
    for &d in elements {
        v[d as usize] = Complex64::new(1.0, 0.0);
    }
    separable_dft(&mut v, p, f, 1.0);
    let error_bound = q as f64 * f as f64 * p as f64 * 2f64.powi(-50);
    Ok(FloatSpectrum { values: v, error_bound })
}

/// Value clusters of a (nearly real) float spectrum.
#[derive(Debug)]
pub struct SpectrumClusters {
    pub centers: Vec<f64>,
    pub counts: Vec<u64>,
    /// Largest within-cluster spread observed.
    pub max_diameter: f64,
    /// Smallest gap between consecutive clusters (∞ for a single cluster).
    pub min_gap: f64,
    /// Separation threshold that was used.
    pub threshold: f64,
}

/// Group near-real float eigenvalues into well-separated clusters.
///
/// Two values land in one cluster when they are closer than the threshold
/// T = `CLUSTER_SEPARATION_FACTOR`·error_bound, so distinct clusters are
/// ≥ T apart by construction. The grouping is only accepted if every
/// cluster is tight (diameter ≤ T/10) and every imaginary part is ≤ T;
/// otherwise the spectrum does not consist of well-separated point masses
/// at this precision and `ClusteringAmbiguous` is returned.
pub fn cluster_real_values(values: &[Complex64], error_bound: f64) -> Result<SpectrumClusters> {
    let threshold = CLUSTER_SEPARATION_FACTOR * error_bound;
    let mut re = Vec::with_capacity(values.len());
    for z in values {
        if z.im.abs() > threshold {
            return Err(Error::ClusteringAmbiguous { threshold, distance: z.im.abs() });
        }
        re.push(z.re);
    }
    re.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite spectrum values"));
    let mut centers = Vec::new();
    let mut counts = Vec::new();
    let mut max_diameter: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut start = 0usize;
    for i in 1..=re.len() {
        if i < re.len() && re[i] - re[i - 1] <= threshold {
            continue;
        }
        let chunk = &re[start..i];
        let diameter = chunk[chunk.len() - 1] - chunk[0];
        if diameter > threshold / 10.0 {
            return Err(Error::ClusteringAmbiguous { threshold: threshold / 10.0, distance: diameter });
        }
        max_diameter = max_diameter.max(diameter);
        centers.push(chunk.iter().sum::<f64>() / chunk.len() as f64);
        counts.push(chunk.len() as u64);
        if centers.len() >= 2 {
            min_gap = min_gap.min(re[start] - re[start - 1]);
        }
        start = i;
    }
    Ok(SpectrumClusters { centers, counts, max_diameter, min_gap, threshold })
}

/// Exact difference-multiset counts N(c) = #{(d₁,d₂) ∈ D² : d₁ − d₂ = c},
/// computed through the float transform and certified by rounding.
///
/// The pipeline is forward transform → |·|² → inverse transform → divide by
/// q. Every N(c) is an integer; the float result is accepted only when the
/// propagated error bound is < 0.5, in which case rounding recovers the
/// exact counts. Three exact integer identities are re-checked afterwards
/// (N(0) = |D|, Σ_c N(c) = |D|², N(c) ≥ 0) as a belt-and-braces guard.
pub fn autocorrelation_counts(field: &Field, elements: &[u64], ceiling: u64) -> Result<Vec<u64>> {
    let (p, f, q) = (field.p(), field.f(), field.q());
    if q > ceiling {
        return Err(Error::FieldTooLarge {
            q,
            bound: ceiling,
            context: "autocorrelation storage".into(),
        });
    }
    validate_elements(field, elements)?;
    let size = elements.len() as f64;
    let eps = q as f64 * f as f64 * p as f64 * 2f64.powi(-50);
    let bound = 2.5 * size * eps + 1e-9;
    if bound >= 0.5 {
        return Err(Error::PrecisionExceeded {
            bound,
            context: "autocorrelation rounding (need < 0.5)".into(),
        });
    }
    let mut v = vec![Complex64::new(0.0, 0.0); q as usize];
    for &d in elements {
        v[d as usize] = Complex64::new(1.0, 0.0);
    }
    separable_dft(&mut v, p, f, 1.0);
    for z in v.iter_mut() {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    separable_dft(&mut v, p, f, -1.0);
    let qf = q as f64;
    let mut out = Vec::with_capacity(q as usize);
    for z in &v {
        let value = z.re / qf;
        let rounded = value.round();
        if (value - rounded).abs() > bound || rounded < 0.0 {
            return Err(Error::PrecisionExceeded {
                bound: (value - rounded).abs(),
                context: format!("autocorrelation count failed to round (value {value})"),
            });
        }
        out.push(rounded as u64);
    }
    if out[0] != elements.len() as u64
        || out.iter().sum::<u64>() != (elements.len() as u64).pow(2)
    {
        return Err(Error::PrecisionExceeded {
            bound,
            context: "autocorrelation counts failed integer cross-checks".into(),
        });
    }
    Ok(out)
}
