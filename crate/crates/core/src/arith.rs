//! Small integer helpers shared by the modules.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `a * b mod m` without intermediate overflow.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Reduces any signed integer into `[0, m)`.
pub fn reduce(j: i128, m: u64) -> u64 {
    j.rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        for m in [2u64, 8, 26, 242] {
            for a in 1..m {
                match inv_mod(a, m) {
                    Some(x) => assert_eq!(mul_mod(a, x, m), 1),
                    None => assert!(gcd(a, m) > 1),
                }
            }
        }
    }

    #[test]
    fn reduce_negative() {
        assert_eq!(reduce(-16, 26), 10);
        assert_eq!(reduce(112, 26), 8);
    }
}
