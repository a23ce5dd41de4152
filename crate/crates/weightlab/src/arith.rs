//! Small integer helpers shared by the combinatorial and matrix layers.

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

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, f)` with `q = p^f`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut r = q;
    let mut f = 0;
    while r % p == 0 {
        r /= p;
        f += 1;
    }
    (r == 1).then_some((p, f))
}

/// Exponent of the prime `l` in `n`; `n` must be nonzero.
pub fn val(l: u64, mut n: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n % l == 0 {
        n /= l;
        v += 1;
    }
    v
}

/// Exponent of `l` in a signed nonzero integer.
pub fn val_i(l: u64, n: i128) -> u32 {
    debug_assert!(n != 0);
    let mut n = n.unsigned_abs();
    let l = l as u128;
    let mut v = 0;
    while n % l == 0 {
        n /= l;
        v += 1;
    }
    v
}

/// The `l`-part of `n`.
pub fn l_part(l: u64, n: u64) -> u64 {
    l.pow(val(l, n))
}

/// The prime-to-`l` part of `n`.
pub fn l_prime_part(l: u64, n: u64) -> u64 {
    n / l_part(l, n)
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut r: u128 = 1;
    let mut b128 = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m128;
        }
        b128 = b128 * b128 % m128;
        e >>= 1;
    }
    b = r as u64;
    b
}

/// Reduces a signed integer into `[0, m)`.
pub fn rem(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Multiplicative order of `x` modulo `m`; `x` must be a unit mod `m`.
pub fn mult_order(x: i128, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let x = rem(x, m);
    debug_assert_eq!(gcd(x, m), 1);
    let mut k = 1;
    let mut y = x;
    while y != 1 {
        y = ((y as u128 * x as u128) % m as u128) as u64;
        k += 1;
    }
    k
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Smallest `k >= 0` with `l^k >= n`, i.e. the ceiling of `log_l(n)` for `n >= 1`.
pub fn ceil_log(l: u64, n: u64) -> u32 {
    let mut k = 0;
    let mut p = 1u64;
    while p < n {
        p *= l;
        k += 1;
    }
    k
}

/// Number of partitions of `n`.
pub fn partition_count(n: u64) -> u64 {
    let n = n as usize;
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for k in 1..=n {
        for m in k..=n {
            p[m] += p[m - k];
        }
    }
    p[n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(val(2, 48), 4);
        assert_eq!(mult_order(3, 8), 2);
        assert_eq!(mult_order(-2, 9), 3);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(ceil_log(2, 5), 3);
        assert_eq!(ceil_log(3, 1), 0);
        assert_eq!(partition_count(15), 176);
    }
}
