//! Small modular-arithmetic helpers on machine integers.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut i = 5u64;
    while i.saturating_mul(i) <= n {
        if n % i == 0 || n % (i + 2) == 0 {
            return false;
        }
        i += 6;
    }
    true
}

/// `p^a`, or `None` on overflow.
pub fn checked_pow(p: u64, a: u32) -> Option<u64> {
    p.checked_pow(a)
}

/// Euler's totient of a prime power `p^a` (`a ≥ 1`).
pub fn phi_prime_power(p: u64, a: u32) -> u64 {
    p.pow(a - 1) * (p - 1)
}

/// Multiplicative order of the unit `x` modulo `m`.
pub fn multiplicative_order(x: u64, m: u64) -> u64 {
    debug_assert_eq!(gcd(x, m), 1);
    if m == 1 {
        return 1;
    }
    let mut acc = x % m;
    let mut k = 1;
    while acc != 1 {
        acc = mul_mod(acc, x, m);
        k += 1;
    }
    k
}

/// Solves `x ≡ r_i (mod m_i)` for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> u64 {
    let total: u64 = residues.iter().map(|&(_, m)| m).product();
    let mut acc = 0u64;
    for &(r, m) in residues {
        let rest = total / m;
        let inv = mod_inv(rest % m, m).expect("moduli are pairwise coprime");
        let coeff = mul_mod(rest, inv, total);
        acc = (acc + mul_mod(r % m, coeff, total)) % total;
    }
    acc
}
