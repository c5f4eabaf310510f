//! Asymptotic growth classes of the form
//! `exp(rate * n * ln(n)^q) * n^p * ln(n)^l * ln(ln(n))^m`
//! with multiplicative prefactors dropped.

use crate::error::{Error, Result};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Rates closer to zero than this are treated as zero.
const RATE_TOL: f64 = 1e-12;

pub fn ratio(num: i64, den: i64) -> Rational64 {
    Rational64::new(num, den)
}

fn zero() -> Rational64 {
    Rational64::from_integer(0)
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthClass {
    pub exp_rate: f64,
    /// Power of `ln(n)` multiplying `n` inside the exponential; nonzero only
    /// for super-exponential classes such as `n^n`.
    pub exp_log_deg: Rational64,
    pub poly_deg: Rational64,
    pub log_deg: Rational64,
    pub loglog_deg: Rational64,
}

impl Default for GrowthClass {
    fn default() -> Self {
        Self::constant()
    }
}

impl GrowthClass {
    pub fn constant() -> Self {
        GrowthClass {
            exp_rate: 0.0,
            exp_log_deg: zero(),
            poly_deg: zero(),
            log_deg: zero(),
            loglog_deg: zero(),
        }
    }

    pub fn new(exp_rate: f64, poly: Rational64, log: Rational64, loglog: Rational64) -> Self {
        GrowthClass { exp_rate, exp_log_deg: zero(), poly_deg: poly, log_deg: log, loglog_deg: loglog }
            .normalized()
    }

    /// `n^p`.
    pub fn poly(p: Rational64) -> Self {
        GrowthClass { poly_deg: p, ..Self::constant() }
    }

    /// `ln(n)^l`.
    pub fn polylog(l: Rational64) -> Self {
        GrowthClass { log_deg: l, ..Self::constant() }
    }

    /// `ln(ln(n))^m`.
    pub fn loglog(m: Rational64) -> Self {
        GrowthClass { loglog_deg: m, ..Self::constant() }
    }

    /// `b^n`.
    pub fn exp_base(b: f64) -> Self {
        GrowthClass { exp_rate: b.ln(), ..Self::constant() }.normalized()
    }

    /// `exp(rate * n * ln(n)^q)`; `n^n` is `super_exp(1, 1)`.
    pub fn super_exp(rate: f64, q: Rational64) -> Self {
        GrowthClass { exp_rate: rate, exp_log_deg: q, ..Self::constant() }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.exp_rate.abs() < RATE_TOL {
            self.exp_rate = 0.0;
            self.exp_log_deg = zero();
        }
        self
    }

    pub fn has_exponential(&self) -> bool {
        self.exp_rate != 0.0
    }

    pub fn is_constant(&self) -> bool {
        self.exp_rate == 0.0
            && self.poly_deg == zero()
            && self.log_deg == zero()
            && self.loglog_deg == zero()
    }

    /// Product of two classes. Exponential factors with different inner
    /// log powers keep only the dominant one.
    pub fn mul(&self, o: &GrowthClass) -> GrowthClass {
        let (rate, q) = if self.exp_rate == 0.0 {
            (o.exp_rate, o.exp_log_deg)
        } else if o.exp_rate == 0.0 {
            (self.exp_rate, self.exp_log_deg)
        } else {
            match self.exp_log_deg.cmp(&o.exp_log_deg) {
                Ordering::Equal => (self.exp_rate + o.exp_rate, self.exp_log_deg),
                Ordering::Greater => (self.exp_rate, self.exp_log_deg),
                Ordering::Less => (o.exp_rate, o.exp_log_deg),
            }
        };
        GrowthClass {
            exp_rate: rate,
            exp_log_deg: q,
            poly_deg: self.poly_deg + o.poly_deg,
            log_deg: self.log_deg + o.log_deg,
            loglog_deg: self.loglog_deg + o.loglog_deg,
        }
        .normalized()
    }

    pub fn div(&self, o: &GrowthClass) -> GrowthClass {
        self.mul(&o.recip())
    }

    pub fn recip(&self) -> GrowthClass {
        self.pow(ratio(-1, 1))
    }

    pub fn pow(&self, r: Rational64) -> GrowthClass {
        GrowthClass {
            exp_rate: self.exp_rate * to_f64(r),
            exp_log_deg: self.exp_log_deg,
            poly_deg: self.poly_deg * r,
            log_deg: self.log_deg * r,
            loglog_deg: self.loglog_deg * r,
        }
        .normalized()
    }

    /// Growth class of `ln(f(n))`.
    pub fn log_of(&self) -> GrowthClass {
        if self.exp_rate > 0.0 {
            GrowthClass { poly_deg: ratio(1, 1), log_deg: self.exp_log_deg, ..Self::constant() }
        } else if self.poly_deg > zero() {
            Self::polylog(ratio(1, 1))
        } else if self.log_deg > zero() {
            Self::loglog(ratio(1, 1))
        } else {
            Self::constant()
        }
    }

    /// Numeric value with unit prefactors.
    pub fn eval(&self, n: f64) -> f64 {
        let ln = n.ln();
        let mut v = 1.0;
        if self.exp_rate != 0.0 {
            v *= (self.exp_rate * n * ln.powf(to_f64(self.exp_log_deg))).exp();
        }
        if self.poly_deg != zero() {
            v *= n.powf(to_f64(self.poly_deg));
        }
        if self.log_deg != zero() {
            v *= ln.powf(to_f64(self.log_deg));
        }
        if self.loglog_deg != zero() {
            v *= ln.ln().powf(to_f64(self.loglog_deg));
        }
        v
    }

    /// Sign of the leading factor in the order exp, poly, log, loglog.
    pub fn leading_sign(&self) -> Ordering {
        if self.exp_rate > 0.0 {
            return Ordering::Greater;
        }
        if self.exp_rate < 0.0 {
            return Ordering::Less;
        }
        for d in [self.poly_deg, self.log_deg, self.loglog_deg] {
            match d.cmp(&zero()) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Asymptotic comparison.
    pub fn cmp_growth(&self, o: &GrowthClass) -> Ordering {
        self.div(o).leading_sign()
    }

    /// Substitutes `N = size(n)` into a class expressed in `N`.
    /// An exponential in `N` is representable only when `size` is `n`.
    pub fn compose(&self, size: &GrowthClass) -> Result<GrowthClass> {
        let l = size.log_of();
        let ll = l.log_of();
        let mut out = size
            .pow(self.poly_deg)
            .mul(&l.pow(self.log_deg))
            .mul(&ll.pow(self.loglog_deg));
        if self.exp_rate != 0.0 {
            let linear = size.exp_rate == 0.0
                && size.poly_deg == ratio(1, 1)
                && size.log_deg == zero()
                && size.loglog_deg == zero();
            if !linear {
                return Err(Error::Unrepresentable(format!(
                    "exponential in N composed with N(n) = {size}"
                )));
            }
            out = out.mul(&GrowthClass::super_exp(self.exp_rate, self.exp_log_deg));
        }
        Ok(out)
    }
}

impl PartialOrd for GrowthClass {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp_growth(o))
    }
}

fn fmt_pow(r: Rational64) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.exp_rate != 0.0 {
            let inner = if self.exp_log_deg == zero() {
                "n".to_string()
            } else if self.exp_log_deg == ratio(1, 1) {
                "n*log(n)".to_string()
            } else {
                format!("n*log(n)^{}", fmt_pow(self.exp_log_deg))
            };
            parts.push(format!("exp({:.4}*{inner})", self.exp_rate));
        }
        for (d, base) in [(self.poly_deg, "n"), (self.log_deg, "log(n)"), (self.loglog_deg, "loglog(n)")] {
            if d == ratio(1, 1) {
                parts.push(base.to_string());
            } else if d != zero() {
                parts.push(format!("{base}^{}", fmt_pow(d)));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_of_rules() {
        let two_n = GrowthClass::exp_base(2.0);
        assert_eq!(two_n.log_of(), GrowthClass::poly(ratio(1, 1)));
        assert_eq!(GrowthClass::poly(ratio(2, 1)).log_of(), GrowthClass::polylog(ratio(1, 1)));
        assert_eq!(GrowthClass::polylog(ratio(3, 1)).log_of(), GrowthClass::loglog(ratio(1, 1)));
        assert!(GrowthClass::loglog(ratio(1, 1)).log_of().is_constant());
        let nn = GrowthClass::super_exp(1.0, ratio(1, 1));
        assert_eq!(
            nn.log_of(),
            GrowthClass::new(0.0, ratio(1, 1), ratio(1, 1), zero())
        );
    }

    #[test]
    fn compose_polylog_into_exponential_size() {
        let kappa = GrowthClass::polylog(ratio(1, 1));
        let n = kappa.compose(&GrowthClass::exp_base(2.0)).unwrap();
        assert_eq!(n, GrowthClass::poly(ratio(1, 1)));
        let e = GrowthClass::exp_base(2.0);
        assert!(e.compose(&GrowthClass::poly(ratio(2, 1))).is_err());
        assert!(e.compose(&GrowthClass::poly(ratio(1, 1))).unwrap().has_exponential());
    }

    #[test]
    fn ordering() {
        let a = GrowthClass::poly(ratio(1, 1));
        let b = GrowthClass::polylog(ratio(5, 1));
        assert!(a > b);
        assert!(GrowthClass::exp_base(1.01) > GrowthClass::poly(ratio(100, 1)));
        assert_eq!(a.cmp_growth(&a), Ordering::Equal);
    }

    #[test]
    fn display() {
        let c = GrowthClass::new(0.0, ratio(3, 2), ratio(-2, 1), ratio(1, 1));
        assert_eq!(c.to_string(), "n^(3/2)*log(n)^-2*loglog(n)");
        assert_eq!(GrowthClass::constant().to_string(), "1");
    }
}
