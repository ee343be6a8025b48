//! Dirichlet characters with values stored as exact fractions of a turn.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::scalar::{format_rational, rat};
use crate::error::{Error, Result};
use crate::Rational;

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; limit as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= limit as usize {
        if sieve[i] {
            for j in (i * i..=limit as usize).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u128;
    let mut bb = (b % m) as u128;
    let mm = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    b = r as u64;
    b
}

fn totient_prime_power(p: u64, e: u32) -> u64 {
    p.pow(e - 1) * (p - 1)
}

/// Multiplicative order of `a` modulo `m`, given `φ(m)`.
fn order_mod(a: u64, m: u64, phi: u64) -> u64 {
    let mut ord = phi;
    for (r, _) in factorize(phi) {
        while ord % r == 0 && pow_mod(a, ord / r, m) == 1 {
            ord /= r;
        }
    }
    ord
}

/// Solves `x ≡ a (mod m1)`, `x ≡ b (mod m2)` for coprime moduli.
fn crt(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    let g = (m1 as i128).extended_gcd(&(m2 as i128));
    debug_assert_eq!(g.gcd, 1);
    let m = m1 as i128 * m2 as i128;
    let x = a as i128 + (b as i128 - a as i128) * g.x % m2 as i128 * m1 as i128;
    x.rem_euclid(m) as u64
}

/// Generators of `(Z/N)^×` with their orders, one cyclic factor at a time:
/// a primitive root for each odd prime power, `-1` for `4`, and `-1, 5`
/// for `2^e` with `e >= 3`. Each generator is `≡ 1` modulo the other
/// prime-power factors.
pub fn unit_group_generators(modulus: u64) -> Vec<(u64, u64)> {
    let mut gens = Vec::new();
    for (p, e) in factorize(modulus) {
        let pe = p.pow(e);
        let rest = modulus / pe;
        let local: Vec<(u64, u64)> = if p == 2 {
            match e {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(pe - 1, 2), (5, pe / 4)],
            }
        } else {
            let phi = totient_prime_power(p, e);
            let g = (2..pe)
                .find(|&g| g % p != 0 && order_mod(g, pe, phi) == phi)
                .expect("odd prime powers have primitive roots");
            vec![(g, phi)]
        };
        for (g, ord) in local {
            gens.push((crt(g, pe, 1, rest), ord));
        }
    }
    gens
}

/// A Dirichlet character modulo `N`, determined by the images of the
/// generators from [`unit_group_generators`]: `χ(g_j) = e^{2πi a_j / o_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    images: Vec<u64>,
    /// Residue coprime to N -> angle in [0, 1) as a fraction of a full turn.
    table: BTreeMap<u64, Rational>,
}

impl DirichletCharacter {
    /// `images[j]` is the numerator `a_j` of the angle `a_j / o_j` at the
    /// `j`-th generator.
    pub fn new(modulus: u64, images: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        let gens = unit_group_generators(modulus);
        if images.len() != gens.len() {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus} has {} generators, got {} images",
                gens.len(),
                images.len()
            )));
        }
        let mut table = BTreeMap::new();
        let mut exps = vec![0u64; gens.len()];
        loop {
            let mut a = 1 % modulus;
            let mut angle = Rational::zero();
            for ((&(g, o), &e), &img) in gens.iter().zip(&exps).zip(&images) {
                a = ((a as u128 * pow_mod(g, e, modulus) as u128) % modulus as u128) as u64;
                angle += rat((e * (img % o)) as i64, o as i64);
            }
            table.insert(a, reduce_turn(angle));
            let mut j = 0;
            loop {
                if j == gens.len() {
                    return Ok(DirichletCharacter { modulus, images, table });
                }
                exps[j] += 1;
                if exps[j] < gens[j].1 {
                    break;
                }
                exps[j] = 0;
                j += 1;
            }
        }
    }

    pub fn trivial(modulus: u64) -> Self {
        let k = unit_group_generators(modulus).len();
        Self::new(modulus, vec![0; k]).expect("trivial character")
    }

    /// Every character modulo `N`.
    pub fn all(modulus: u64) -> Vec<Self> {
        let gens = unit_group_generators(modulus);
        let mut out = Vec::new();
        let mut imgs = vec![0u64; gens.len()];
        loop {
            out.push(Self::new(modulus, imgs.clone()).expect("valid images"));
            let mut j = 0;
            loop {
                if j == gens.len() {
                    return out;
                }
                imgs[j] += 1;
                if imgs[j] < gens[j].1 {
                    break;
                }
                imgs[j] = 0;
                j += 1;
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    /// Angle of `χ(a)` in turns, or `None` when `gcd(a, N) > 1`.
    pub fn angle(&self, a: i64) -> Option<&Rational> {
        let r = a.rem_euclid(self.modulus as i64) as u64;
        self.table.get(&r)
    }

    pub fn value(&self, a: i64) -> Complex64 {
        match self.angle(a) {
            Some(t) => turn_to_complex(t),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `χ(-1) = ±1`.
    pub fn parity(&self) -> i8 {
        let t = self.angle(-1).expect("-1 is a unit");
        if t.is_zero() {
            1
        } else {
            -1
        }
    }

    pub fn is_principal(&self) -> bool {
        self.table.values().all(Zero::is_zero)
    }

    /// The order of `χ` in the character group.
    pub fn order(&self) -> u64 {
        self.table.values().fold(1u64, |acc, t| acc.lcm(&t.denom().try_into().unwrap_or(1)))
    }

    /// Whether `χ` is trivial on units `≡ 1 (mod m)`.
    fn factors_through(&self, m: u64) -> bool {
        self.table.iter().all(|(&a, t)| a % m != 1 % m || t.is_zero())
    }

    pub fn conductor(&self) -> u64 {
        let mut divisors: Vec<u64> = (1..=self.modulus).filter(|d| self.modulus % d == 0).collect();
        divisors.sort_unstable();
        divisors.into_iter().find(|&d| self.factors_through(d)).unwrap_or(self.modulus)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// `χ²`, as a character of the same modulus.
    pub fn square(&self) -> Self {
        let gens = unit_group_generators(self.modulus);
        let images = self.images.iter().zip(&gens).map(|(a, (_, o))| (2 * a) % o).collect();
        Self::new(self.modulus, images).expect("valid images")
    }

    /// The value table as `residue -> "num/den"` turns.
    pub fn table_json(&self) -> BTreeMap<u64, String> {
        self.table.iter().map(|(a, t)| (*a, format_rational(t))).collect()
    }
}

fn reduce_turn(t: Rational) -> Rational {
    let f = t.floor();
    t - f
}

/// `e^{2πi t}` with exact values at multiples of a quarter turn.
pub fn turn_to_complex(t: &Rational) -> Complex64 {
    let four = t.clone() * Rational::from_integer(4.into());
    if four.is_integer() {
        let k: i64 = four.to_integer().try_into().unwrap_or(0);
        return match k.rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let x = crate::Scalar::to_f64(t) * std::f64::consts::TAU;
    Complex64::new(x.cos(), x.sin())
}

/// `G(χ) = Σ_{a ∈ (Z/N)^×} χ(a) e^{2πi a/N}`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let n = chi.modulus as i64;
    chi.table
        .iter()
        .map(|(&a, t)| {
            let turn = reduce_turn(t.clone() + rat(a as i64, n));
            turn_to_complex(&turn)
        })
        .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v)
}

/// JSON-facing description of a character.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterInfo {
    pub modulus: u64,
    pub generators: Vec<(u64, u64)>,
    pub images: Vec<u64>,
    pub conductor: u64,
    pub primitive: bool,
    pub parity: i8,
    pub order: u64,
}

impl From<&DirichletCharacter> for CharacterInfo {
    fn from(c: &DirichletCharacter) -> Self {
        CharacterInfo {
            modulus: c.modulus,
            generators: unit_group_generators(c.modulus),
            images: c.images.clone(),
            conductor: c.conductor(),
            primitive: c.is_primitive(),
            parity: c.parity(),
            order: c.order(),
        }
    }
}

impl DirichletCharacter {
    /// `χ(1) = 1` and complete multiplicativity, checked on the full table.
    pub fn check_homomorphism(&self) -> bool {
        let n = self.modulus;
        self.angle(1).is_some_and(Zero::is_zero)
            && self.table.iter().all(|(&a, ta)| {
                self.table.iter().all(|(&b, tb)| {
                    let ab = ((a as u128 * b as u128) % n as u128) as i64;
                    self.angle(ab) == Some(&reduce_turn(ta.clone() + tb.clone()))
                })
            })
    }
}
