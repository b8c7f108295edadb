//! Polynomials over a small prime field, enough for Rabin's irreducibility
//! test. Coefficients are lowest degree first.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        let shift = top - df;
        for (j, &fj) in f.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * fj % p) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_rem(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, f, p)
}

fn pow_rem(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_rem(&acc, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = mul_rem(&b, &b, f, p);
        }
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    trim(
        (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: a monic `f` of degree `n` over `F_p` is irreducible iff
/// `x^(p^n) = x mod f` and `gcd(f, x^(p^(n/r)) - x) = 1` for every prime
/// `r | n`. `f` must be monic with coefficients reduced mod `p`.
pub fn is_irreducible_mod(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    assert!(f.last() == Some(&1), "polynomial must be monic mod p");
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    let x = vec![0, 1];
    // frob[k] = x^(p^k) mod f
    let mut frob = vec![rem(&x, &f, p)];
    for _ in 0..n {
        let next = pow_rem(frob.last().unwrap(), p, &f, p);
        frob.push(next);
    }
    if sub(&frob[n], &x, p) != rem(&[], &f, p) {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        let g = gcd(&f, &sub(&frob[n / r], &x, p), p);
        g.len() == 1
    })
}
