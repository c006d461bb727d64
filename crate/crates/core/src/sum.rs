//! Ordered compensated accumulation.
//!
//! Sums over primes are conditionally convergent on the critical line, so the
//! order of accumulation is part of every contract in this crate. The
//! accumulator below never reorders; it only carries a Neumaier correction.

use num_complex::Complex;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug)]
pub struct OrderedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Default for OrderedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> OrderedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Real> Extend<T> for OrderedSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Sums an iterator in the order it yields.
pub fn ordered_sum<T: Real, I: IntoIterator<Item = T>>(iter: I) -> T {
    let mut acc = OrderedSum::new();
    acc.extend(iter);
    acc.value()
}

#[derive(Clone, Copy, Debug)]
pub struct OrderedComplexSum<T> {
    re: OrderedSum<T>,
    im: OrderedSum<T>,
}

impl<T: Real> Default for OrderedComplexSum<T> {
    fn default() -> Self {
        Self {
            re: OrderedSum::new(),
            im: OrderedSum::new(),
        }
    }
}

impl<T: Real> OrderedComplexSum<T> {
    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}
