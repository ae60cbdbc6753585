use super::field::{Elem, Field};

/// Polynomial over a [`Field`], coefficients little-endian with trailing
/// zeros trimmed. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// `c * x^k`
    pub fn monomial(c: Elem, k: usize) -> Self {
        let mut coeffs = vec![Elem::ZERO; k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(field: &Field, n: usize) -> Self {
        let mut coeffs = vec![Elem::ZERO; n + 1];
        coeffs[0] = field.neg(Elem::ONE);
        coeffs[n] = field.add(coeffs[n], Elem::ONE);
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, field: &Field, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn sub(&self, field: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(Elem::ZERO);
        Poly::new(
            (0..n)
                .map(|i| field.sub(get(self, i), get(other, i)))
                .collect(),
        )
    }

    /// Remainder of division by a nonzero divisor.
    pub fn rem(&self, field: &Field, divisor: &Poly) -> Poly {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = field
            .inv(divisor.coeffs[d])
            .expect("leading coefficient is nonzero");
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let top = r.len() - 1;
            let c = field.mul(r[top], lead_inv);
            let shift = top - d;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                r[shift + i] = field.sub(r[shift + i], field.mul(c, b));
            }
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    pub fn monic(&self, field: &Field) -> Poly {
        match self.coeffs.last() {
            None => Poly::zero(),
            Some(&lead) => {
                let inv = field.inv(lead).expect("leading coefficient is nonzero");
                Poly::new(self.coeffs.iter().map(|&c| field.mul(c, inv)).collect())
            }
        }
    }

    /// Roots lying in `field` itself, by exhaustive evaluation.
    pub fn roots(&self, field: &Field) -> Vec<Elem> {
        field.elements().filter(|&x| self.eval(field, x).is_zero()).collect()
    }
}

/// Monic greatest common divisor.
pub fn gcd(field: &Field, a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.rem(field, &y);
        x = y;
        y = r;
    }
    x.monic(field)
}

/// Whether `f` and `g` vanish together at some element of `field`.
///
/// Computed as the roots of `gcd(f, g)` in the field; roots that only exist in
/// an extension are not counted. When one polynomial is zero every root of the
/// other is common.
pub fn common_root_exists(field: &Field, f: &Poly, g: &Poly) -> bool {
    let h = gcd(field, f, g);
    match h.degree() {
        None => true,
        Some(0) => false,
        Some(_) => field.elements().any(|x| h.eval(field, x).is_zero()),
    }
}
