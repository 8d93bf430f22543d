use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest derivative order a [`Jet`] carries.
pub const MAX_ORDER: usize = 4;

const N: usize = MAX_ORDER + 1;

/// Truncated Taylor expansion `c0 + c1 h + ... + ck h^k` of a function
/// around an evaluation point.
///
/// Coefficients are stored in Taylor form (`f^(j)/j!`); use
/// [`Jet::derivative`] to read plain derivatives. Binary operations on
/// jets of different order truncate to the smaller one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    coeffs: [f64; N],
    order: usize,
}

const FACTORIAL: [f64; N] = [1.0, 1.0, 2.0, 6.0, 24.0];

impl Jet {
    pub fn constant(value: f64, order: usize) -> Jet {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut coeffs = [0.0; N];
        coeffs[0] = value;
        Jet { coeffs, order }
    }

    /// The identity function seeded at `x`.
    pub fn variable(x: f64, order: usize) -> Jet {
        let mut j = Jet::constant(x, order);
        if order > 0 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    pub fn from_taylor(coeffs: &[f64]) -> Jet {
        assert!(!coeffs.is_empty() && coeffs.len() <= N);
        let mut c = [0.0; N];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Jet {
            coeffs: c,
            order: coeffs.len() - 1,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn taylor(&self) -> &[f64] {
        &self.coeffs[..=self.order]
    }

    /// The `k`-th derivative at the expansion point (`k <= order`).
    pub fn derivative(&self, k: usize) -> f64 {
        assert!(
            k <= self.order,
            "derivative {k} beyond jet order {}",
            self.order
        );
        self.coeffs[k] * FACTORIAL[k]
    }

    /// Derivatives `d1..=d_order`.
    pub fn derivatives(&self) -> Vec<f64> {
        (1..=self.order).map(|k| self.derivative(k)).collect()
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order);
        let mut coeffs = [0.0; N];
        coeffs[..=order].copy_from_slice(&self.coeffs[..=order]);
        Jet { coeffs, order }
    }

    /// Jet of the derivative; the order drops by one.
    pub fn differentiate(&self) -> Jet {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let mut coeffs = [0.0; N];
        for (k, c) in coeffs.iter_mut().take(self.order).enumerate() {
            *c = (k + 1) as f64 * self.coeffs[k + 1];
        }
        Jet {
            coeffs,
            order: self.order - 1,
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut out = *self;
        for c in &mut out.coeffs[..=self.order] {
            *c *= s;
        }
        out
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..=self.order].iter().all(|&c| c == 0.0)
    }

    pub fn recip(&self) -> Jet {
        Jet::constant(1.0, self.order) / *self
    }

    pub fn exp(&self) -> Jet {
        self.exp_with_value(self.coeffs[0].exp())
    }

    /// `exp` recurrence seeded with a caller-supplied value of `exp(c0)`.
    fn exp_with_value(&self, e0: f64) -> Jet {
        let a = &self.coeffs;
        let mut e = [0.0; N];
        e[0] = e0;
        for k in 1..=self.order {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Jet {
            coeffs: e,
            order: self.order,
        }
    }

    pub fn ln(&self) -> Jet {
        let a = &self.coeffs;
        let mut l = [0.0; N];
        l[0] = a[0].ln();
        for k in 1..=self.order {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * a[k - j]).sum();
            l[k] = (a[k] - s / k as f64) / a[0];
        }
        Jet {
            coeffs: l,
            order: self.order,
        }
    }

    pub fn sin_cos(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let mut s = [0.0; N];
        let mut c = [0.0; N];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..=self.order {
            let kf = k as f64;
            s[k] = (1..=k).map(|j| j as f64 * a[j] * c[k - j]).sum::<f64>() / kf;
            c[k] = -(1..=k).map(|j| j as f64 * a[j] * s[k - j]).sum::<f64>() / kf;
        }
        let order = self.order;
        (Jet { coeffs: s, order }, Jet { coeffs: c, order })
    }

    pub fn sqrt(&self) -> Jet {
        let a = &self.coeffs;
        let mut r = [0.0; N];
        r[0] = a[0].sqrt();
        for k in 1..=self.order {
            let s: f64 = (1..k).map(|j| r[j] * r[k - j]).sum();
            r[k] = (a[k] - s) / (2.0 * r[0]);
        }
        Jet {
            coeffs: r,
            order: self.order,
        }
    }

    /// `self^p` for a constant real exponent; needs a positive value.
    pub fn powf(&self, p: f64) -> Jet {
        let a = &self.coeffs;
        let mut h = [0.0; N];
        h[0] = a[0].powf(p);
        for k in 1..=self.order {
            let kf = k as f64;
            let s: f64 = (1..=k)
                .map(|j| ((p + 1.0) * j as f64 - kf) * a[j] * h[k - j])
                .sum();
            h[k] = s / (kf * a[0]);
        }
        Jet {
            coeffs: h,
            order: self.order,
        }
    }

    /// `self^e` for a jet exponent, via `exp(e ln self)`.
    pub fn pow(&self, e: &Jet) -> Jet {
        let order = self.order.min(e.order);
        let u = e.truncate(order) * self.truncate(order).ln();
        u.exp_with_value(self.coeffs[0].powf(e.coeffs[0]))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut coeffs = [0.0; N];
        for (k, c) in coeffs.iter_mut().take(order + 1).enumerate() {
            *c = self.coeffs[k] + rhs.coeffs[k];
        }
        Jet { coeffs, order }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut coeffs = [0.0; N];
        for (k, c) in coeffs.iter_mut().take(order + 1).enumerate() {
            *c = self.coeffs[k] - rhs.coeffs[k];
        }
        Jet { coeffs, order }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        let mut out = self;
        for c in &mut out.coeffs {
            *c = -*c;
        }
        out
    }
}

impl Mul for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let mut coeffs = [0.0; N];
        coeffs[0] = a[0] * b[0];
        for k in 1..=order {
            coeffs[k] = (0..=k).map(|i| a[i] * b[k - i]).sum();
        }
        Jet { coeffs, order }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let mut q = [0.0; N];
        q[0] = a[0] / b[0];
        for k in 1..=order {
            let s: f64 = (1..=k).map(|i| b[i] * q[k - i]).sum();
            q[k] = (a[k] - s) / b[0];
        }
        Jet { coeffs: q, order }
    }
}
