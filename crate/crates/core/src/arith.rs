//! Modular arithmetic and factorization helpers on machine integers.
//!
//! Everything here is deterministic. Primality is Miller–Rabin with a witness
//! set that is exact for all u64 inputs, so `is_prime` is a decision procedure,
//! not a probabilistic test.

use num_integer::Integer;

/// `a * b mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a^e mod m` by square-and-multiply. `0^0 = 1`.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for u64 (witness set exact below 3.3 * 10^24).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = (n - 1).trailing_zeros();
    let odd = (n - 1) >> d;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..d {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard's rho with Brent cycle detection; `n` must be odd composite > 1.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as (prime, exponent) pairs, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    // Recursive split of what's left using rho.
    fn split(n: u64, acc: &mut Vec<u64>) {
        if n == 1 {
            return;
        }
        if is_prime(n) {
            acc.push(n);
            return;
        }
        let d = pollard_rho(n);
        split(d, acc);
        split(n / d, acc);
    }
    let mut rest = Vec::new();
    split(n, &mut rest);
    rest.sort_unstable();
    for p in rest {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out.sort_unstable();
    out
}

/// All positive divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = ds.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            ds.extend(prev.iter().map(|d| d * pe));
        }
    }
    ds.sort_unstable();
    ds
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Multiplicative order of a mod n; requires gcd(a, n) = 1.
pub fn multiplicative_order(a: u64, n: u64) -> u64 {
    assert_eq!(a.gcd(&n), 1, "order of non-unit {a} mod {n}");
    if n == 1 {
        return 1;
    }
    let mut order = euler_phi(n);
    for (p, e) in factorize(order) {
        for _ in 0..e {
            if pow_mod(a, order / p, n) == 1 {
                order /= p;
            } else {
                break;
            }
        }
    }
    order
}

/// Inverse of a mod m (coprime inputs), via extended Euclid.
pub fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r.abs(), 1, "{a} not invertible mod {m}");
    let inv = old_s * old_r.signum();
    inv.rem_euclid(m as i128) as u64
}

/// Solve x ≡ r1 (mod m1), x ≡ r2 (mod m2) for coprime m1, m2; result mod m1*m2.
pub fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    let m1_inv = mod_inverse(m1 % m2, m2);
    let diff = (r2 + m2 - r1 % m2) % m2;
    let t = mul_mod(diff, m1_inv, m2);
    r1 + m1 * t
}

/// Smallest generator of (Z/pZ)^* for prime p, given the factorization of p - 1.
pub fn primitive_root_mod_prime(p: u64, p_minus_1_factors: &[(u64, u32)]) -> u64 {
    'g: for g in 2..p {
        for &(q, _) in p_minus_1_factors {
            if pow_mod(g, (p - 1) / q, p) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("no primitive root mod prime {p}")
}

/// Primes up to n inclusive, by sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}
