use crate::real::Real;

/// Small exact rational used for orbit template coefficients so that the
/// double-double path sees constants such as 1/3 at full precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ratio {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn int(n: i64) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn add(self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    pub fn scale(self, k: i64) -> Ratio {
        Ratio::new(self.num * k, self.den)
    }

    pub fn to_real<T: Real>(self) -> T {
        T::ratio(self.num, self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// `constant + Σ coeffs[k] · params[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineForm {
    pub constant: Ratio,
    pub coeffs: Vec<Ratio>,
}

impl AffineForm {
    pub fn constant(c: Ratio, nparams: usize) -> Self {
        AffineForm {
            constant: c,
            coeffs: vec![Ratio::ZERO; nparams],
        }
    }

    /// `constant + Σ k·p` from `(param_index, integer_coeff)` pairs.
    pub fn linear(c: Ratio, terms: &[(usize, i64)], nparams: usize) -> Self {
        let mut f = AffineForm::constant(c, nparams);
        for &(k, a) in terms {
            f.coeffs[k] = f.coeffs[k].add(Ratio::int(a));
        }
        f
    }

    pub fn add_scaled(&self, other: &AffineForm, k: i64) -> AffineForm {
        AffineForm {
            constant: self.constant.add(other.constant.scale(k)),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b.scale(k)))
                .collect(),
        }
    }

    pub fn negate(&self) -> AffineForm {
        AffineForm::constant(Ratio::ZERO, self.coeffs.len()).add_scaled(self, -1)
    }

    pub fn eval<T: Real>(&self, params: &[T]) -> T {
        let mut v = self.constant.to_real::<T>();
        for (c, &p) in self.coeffs.iter().zip(params) {
            if !c.is_zero() {
                v += c.to_real::<T>() * p;
            }
        }
        v
    }
}
