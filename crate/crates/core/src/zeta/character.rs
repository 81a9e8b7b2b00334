//! Dirichlet characters as explicit value tables.

use crate::arith::{euler_phi, gcd};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A Dirichlet character mod `q`, stored as its values on `0..q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    q: u64,
    /// Position in its [`CharacterTable`]; 0 is principal.
    pub index: usize,
    values: Vec<Complex64>,
}

/// `e^{2πi num/den}` with exact values at multiples of a quarter turn.
fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let num = num % den;
    if (4 * num) % den == 0 {
        return match 4 * num / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let ang = 2.0 * PI * num as f64 / den as f64;
    Complex64::new(ang.cos(), ang.sin())
}

impl Character {
    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, n: u64) -> Complex64 {
        self.values[(n % self.q) as usize]
    }

    /// The trivial character mod 1 (its L-function is ζ).
    pub fn trivial() -> Self {
        Character {
            q: 1,
            index: 0,
            values: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn is_principal(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.norm() < 0.5 || (v - Complex64::new(1.0, 0.0)).norm() < 1e-12)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im.abs() < 1e-12)
    }

    /// 0 for even characters, 1 for odd ones.
    pub fn parity(&self) -> u32 {
        if self.q <= 2 {
            return 0;
        }
        if self.at(self.q - 1).re < 0.0 {
            1
        } else {
            0
        }
    }

    pub fn conj(&self) -> Self {
        Character {
            q: self.q,
            index: self.index,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Smallest `d | q` from which the character is induced.
    pub fn conductor(&self) -> u64 {
        let q = self.q;
        for d in 1..=q {
            if q % d != 0 {
                continue;
            }
            let induced = (1..q).all(|n| {
                gcd(n, q) != 1 || n % d != 1 % d || (self.at(n) - Complex64::new(1.0, 0.0)).norm() < 1e-12
            });
            if induced {
                return d;
            }
        }
        q
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Character {
        let d = self.conductor();
        if d == self.q {
            return self.clone();
        }
        let values = (0..d)
            .map(|m| {
                if gcd(m, d) != 1 {
                    return Complex64::new(0.0, 0.0);
                }
                let mut n = m;
                while gcd(n, self.q) != 1 {
                    n += d;
                }
                self.at(n)
            })
            .collect();
        Character {
            q: d,
            index: self.index,
            values,
        }
    }

    /// τ(χ) = Σ_a χ(a) e^{2πi a/q}.
    pub fn gauss_sum(&self) -> Complex64 {
        (0..self.q)
            .map(|a| self.at(a) * root_of_unity(a, self.q))
            .sum()
    }

    /// ε = τ(χ)/(i^κ √q), meaningful for primitive characters.
    pub fn root_number(&self) -> Complex64 {
        let ik = if self.parity() == 1 {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.gauss_sum() / (ik * (self.q as f64).sqrt())
    }
}

/// All φ(q) characters mod q. Index 0 is the principal character.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub q: u64,
    pub phi: u64,
    pub chars: Vec<Character>,
}

/// One cyclic factor of (ℤ/qℤ)^×: discrete logs of every residue mod q.
struct Factor {
    order: u64,
    log: Vec<u64>,
}

fn cyclic_factors(q: u64) -> Vec<Factor> {
    let mut out = Vec::new();
    let mut m = q;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            let mut pe = 1;
            while m % p == 0 {
                m /= p;
                pe *= p;
            }
            out.extend(prime_power_factors(q, p, pe));
        }
        p += 1;
    }
    out
}

fn prime_power_factors(q: u64, p: u64, pe: u64) -> Vec<Factor> {
    let dlog_cyclic = |g: u64, order: u64, modulus: u64, map: &dyn Fn(u64) -> u64| {
        let mut table = vec![u64::MAX; modulus as usize];
        let mut x = 1u64;
        for k in 0..order {
            table[x as usize] = k;
            x = x * g % modulus;
        }
        let log = (0..q)
            .map(|n| {
                if gcd(n, q) != 1 {
                    0
                } else {
                    table[map(n) as usize]
                }
            })
            .collect();
        Factor { order, log }
    };
    if p == 2 {
        match pe {
            2 => vec![],
            4 => vec![dlog_cyclic(3, 2, 4, &|n| n % 4)],
            _ => {
                let sign = Factor {
                    order: 2,
                    log: (0..q).map(|n| if n % 4 == 3 { 1 } else { 0 }).collect(),
                };
                let five = dlog_cyclic(5, pe / 4, pe, &|n| {
                    let r = n % pe;
                    if r % 4 == 3 {
                        pe - r
                    } else {
                        r
                    }
                });
                vec![sign, five]
            }
        }
    } else {
        let order = pe / p * (p - 1);
        let g = (2..pe)
            .find(|&g| {
                if gcd(g, p) != 1 {
                    return false;
                }
                let mut x = g;
                for _ in 1..order {
                    if x == 1 {
                        return false;
                    }
                    x = x * g % pe;
                }
                x == 1
            })
            .unwrap_or(1);
        vec![dlog_cyclic(g, order, pe, &|n| n % pe)]
    }
}

impl CharacterTable {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be >= 1".into()));
        }
        if q > 100_000 {
            return Err(Error::Capacity {
                requested: q,
                limit: 100_000,
            });
        }
        if q == 1 {
            return Ok(CharacterTable {
                q,
                phi: 1,
                chars: vec![Character::trivial()],
            });
        }
        let factors = cyclic_factors(q);
        let phi = euler_phi(q);
        let orders: Vec<u64> = factors.iter().map(|f| f.order).collect();
        let den: u64 = orders.iter().product::<u64>().max(1);
        let mut chars = Vec::with_capacity(phi as usize);
        let mut exps = vec![0u64; factors.len()];
        loop {
            let values = (0..q)
                .map(|n| {
                    if gcd(n, q) != 1 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let num: u64 = factors
                        .iter()
                        .zip(&exps)
                        .map(|(f, &j)| (j * f.log[n as usize] % f.order) * (den / f.order))
                        .sum();
                    root_of_unity(num, den)
                })
                .collect();
            chars.push(Character {
                q,
                index: chars.len(),
                values,
            });
            // odometer over the exponent tuple
            let mut i = 0;
            loop {
                if i == exps.len() {
                    debug_assert_eq!(chars.len() as u64, phi);
                    return Ok(CharacterTable { q, phi, chars });
                }
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    /// max over coprime a, n of |(1/φ(q)) Σ_χ χ̄(a)χ(n) − [n ≡ a]|.
    pub fn orthogonality_error(&self) -> f64 {
        let q = self.q;
        let mut worst: f64 = 0.0;
        for a in 0..q {
            if gcd(a, q) != 1 {
                continue;
            }
            for n in 0..q {
                if gcd(n, q) != 1 {
                    continue;
                }
                let s: Complex64 = self.chars.iter().map(|c| c.at(a).conj() * c.at(n)).sum();
                let s = s / self.phi as f64;
                let want = if n == a { 1.0 } else { 0.0 };
                worst = worst.max((s - want).norm());
            }
        }
        worst
    }
}
