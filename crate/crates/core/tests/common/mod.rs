use femwave::exact::RatMatrix;
use femwave::scalar::{int, to_f64};
use femwave::Rational;
use num_traits::{One, Signed, Zero};

/// Smallest real root of `det(tI - A)` located by exact sign changes.
pub fn smallest_root(a: &RatMatrix) -> f64 {
    let n = a.nrows();
    // Faddeev-LeVerrier: coefficients c_k of t^n + c_1 t^{n-1} + ... + c_n
    let mut c = vec![Rational::one()];
    let mut m = RatMatrix::zeros(n, n);
    for k in 1..=n {
        let am = a.mul(&m);
        m = RatMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { c[k - 1].clone() } else { Rational::zero() };
            &am[(i, j)] + d
        });
        let tr: Rational = (0..n).map(|i| a.mul(&m)[(i, i)].clone()).sum();
        c.push(-tr / int(k as i64));
    }
    let eval = |t: &Rational| c.iter().fold(Rational::zero(), |acc, ck| acc * t + ck);
    let bound: Rational = (0..n).map(|i| a.row(i).iter().map(|v| v.abs()).sum::<Rational>()).max().unwrap();
    let steps = 4000;
    let mut lo = -bound.clone();
    let width = &bound * int(2) / int(steps);
    for _ in 0..steps {
        let hi = &lo + &width;
        let (fl, fh) = (eval(&lo), eval(&hi));
        if fl.is_zero() {
            return to_f64(&lo);
        }
        if (fl < Rational::zero()) != (fh < Rational::zero()) {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..80 {
                let mid = (&a + &b) / int(2);
                if (eval(&a) < Rational::zero()) == (eval(&mid) < Rational::zero()) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return to_f64(&((a + b) / int(2)));
        }
        lo = hi;
    }
    panic!("no root found");
}
