//! Minimal exact rational arithmetic for hyperplane level tests.
//!
//! Level equality `<s, gamma> = n` must not depend on floating rounding when
//! the weights are rational, so weights recognized as small-denominator
//! rationals are compared exactly and everything else falls back to a
//! floating tolerance at the call site.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Rational {
    num: i128,
    den: i128, // > 0, reduced
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Rational {
    pub(crate) fn new(num: i128, den: i128) -> Rational {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Rational {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub(crate) fn from_u32(v: u32) -> Rational {
        Rational {
            num: i128::from(v),
            den: 1,
        }
    }

    /// Continued-fraction reconstruction with a denominator cap; succeeds
    /// only when the reconstructed fraction converts back to exactly `x`.
    pub(crate) fn from_f64(x: f64, max_den: i64) -> Option<Rational> {
        if !x.is_finite() {
            return None;
        }
        let (mut h0, mut h1) = (1i128, x.floor() as i128);
        let (mut k0, mut k1) = (0i128, 1i128);
        let mut frac = x - x.floor();
        for _ in 0..64 {
            if (h1 as f64) / (k1 as f64) == x {
                return Some(Rational::new(h1, k1));
            }
            if frac.abs() < f64::EPSILON {
                break;
            }
            let inv = 1.0 / frac;
            let a = inv.floor();
            frac = inv - a;
            let a = a as i128;
            let h2 = a * h1 + h0;
            let k2 = a * k1 + k0;
            if k2 > i128::from(max_den) {
                break;
            }
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
        }
        if k1 > 0 && (h1 as f64) / (k1 as f64) == x {
            Some(Rational::new(h1, k1))
        } else {
            None
        }
    }

    pub(crate) fn add(self, other: Rational) -> Rational {
        Rational::new(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )
    }

    pub(crate) fn mul(self, other: Rational) -> Rational {
        Rational::new(self.num * other.num, self.den * other.den)
    }

    pub(crate) fn zero() -> Rational {
        Rational { num: 0, den: 1 }
    }
}
