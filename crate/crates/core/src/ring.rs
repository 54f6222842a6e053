//! Exact rings: rational integers, imaginary quadratic integers, quaternions,
//! 2x2 matrices and projective boundary points.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Minimal exact ring interface shared by matrix and projective code.
pub trait RingElem: Clone + PartialEq + fmt::Debug {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Positive real part, or zero real part and positive imaginary part.
    fn is_positive(&self) -> bool;
}

impl RingElem for i64 {
    fn add(&self, o: &Self) -> Self {
        self.checked_add(*o).expect("i64 overflow")
    }
    fn sub(&self, o: &Self) -> Self {
        self.checked_sub(*o).expect("i64 overflow")
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(*o).expect("i64 overflow")
    }
    fn neg(&self) -> Self {
        self.checked_neg().expect("i64 overflow")
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn zero_like(&self) -> Self {
        0
    }
    fn one_like(&self) -> Self {
        1
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
}

impl RingElem for i128 {
    fn add(&self, o: &Self) -> Self {
        self.checked_add(*o).expect("i128 overflow")
    }
    fn sub(&self, o: &Self) -> Self {
        self.checked_sub(*o).expect("i128 overflow")
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(*o).expect("i128 overflow")
    }
    fn neg(&self) -> Self {
        self.checked_neg().expect("i128 overflow")
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn zero_like(&self) -> Self {
        0
    }
    fn one_like(&self) -> Self {
        1
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
}

impl RingElem for BigInt {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

/// Real Mobius maps (used to normalize geodesics); equality is exact.
impl RingElem for f64 {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
}

/// Ring of integers of Q (`Rational`) or of an imaginary quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Discriminant {
    Rational,
    Imaginary(i64),
}

fn squarefree(mut n: i64) -> bool {
    n = n.abs();
    let mut p = 2i64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || d < -(1i64 << 40) {
            return Err(Error::InvalidDiscriminant(d));
        }
        let ok = match d.rem_euclid(4) {
            1 => squarefree(d),
            0 => {
                let m = d / 4;
                matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
            }
            _ => false,
        };
        if ok {
            Ok(Discriminant::Imaginary(d))
        } else {
            Err(Error::InvalidDiscriminant(d))
        }
    }

    /// D, or 0 for the rational integers (so that omega is never used).
    pub fn d(&self) -> i64 {
        match self {
            Discriminant::Rational => 0,
            Discriminant::Imaginary(d) => *d,
        }
    }

    /// (D^2 - D)/4 = omega * conj(omega).
    pub fn norm_c(&self) -> i64 {
        let d = self.d();
        (d * d - d) / 4
    }

    pub fn unit_count(&self) -> usize {
        match self {
            Discriminant::Rational => 2,
            Discriminant::Imaginary(-4) => 4,
            Discriminant::Imaginary(-3) => 6,
            Discriminant::Imaginary(_) => 2,
        }
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Discriminant::Rational => write!(f, "Z"),
            Discriminant::Imaginary(d) => write!(f, "{d}"),
        }
    }
}

/// x + y*omega with omega = (D + sqrt(D))/2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    x: BigInt,
    y: BigInt,
    disc: Discriminant,
}

impl QuadInt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, disc: Discriminant) -> Result<Self> {
        let y = y.into();
        if disc == Discriminant::Rational && !Zero::is_zero(&y) {
            return Err(Error::Precondition("rational integers have no omega part".into()));
        }
        Ok(QuadInt { x: x.into(), y, disc })
    }

    /// Panics only for a nonzero omega part over `Rational`.
    pub fn from_xy(x: i64, y: i64, disc: Discriminant) -> Self {
        QuadInt::new(x, y, disc).expect("omega part over Z")
    }

    pub fn from_int(x: impl Into<BigInt>, disc: Discriminant) -> Self {
        QuadInt { x: x.into(), y: BigInt::zero(), disc }
    }

    pub fn zero(disc: Discriminant) -> Self {
        QuadInt::from_int(0, disc)
    }

    pub fn one(disc: Discriminant) -> Self {
        QuadInt::from_int(1, disc)
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn disc(&self) -> Discriminant {
        self.disc
    }

    /// (x, y) as machine integers, if they fit.
    pub fn coords_i64(&self) -> Option<(i64, i64)> {
        Some((self.x.to_i64()?, self.y.to_i64()?))
    }

    pub fn norm(&self) -> BigInt {
        let d = BigInt::from(self.disc.d());
        let c = BigInt::from(self.disc.norm_c());
        &self.x * &self.x + d * &self.x * &self.y + c * &self.y * &self.y
    }

    pub fn conj(&self) -> Self {
        let d = BigInt::from(self.disc.d());
        QuadInt { x: &self.x + d * &self.y, y: -&self.y, disc: self.disc }
    }

    pub fn to_complex(&self) -> Complex64 {
        let d = self.disc.d() as f64;
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let y = self.y.to_f64().unwrap_or(f64::NAN);
        Complex64::new(x + y * d / 2.0, y * d.abs().sqrt() / 2.0)
    }

    /// Twice the real part, as an exact integer: 2x + yD.
    pub fn twice_re(&self) -> BigInt {
        BigInt::from(2) * &self.x + BigInt::from(self.disc.d()) * &self.y
    }

    /// Exact quotient self / other when other divides self.
    pub fn div_exact(&self, other: &QuadInt) -> Result<Option<QuadInt>> {
        let n = other.norm();
        if Zero::is_zero(&n) {
            return Err(Error::ZeroDivisor);
        }
        let t = self * &other.conj();
        let (qx, rx) = t.x.div_rem(&n);
        let (qy, ry) = t.y.div_rem(&n);
        if Zero::is_zero(&rx) && Zero::is_zero(&ry) {
            Ok(Some(QuadInt { x: qx, y: qy, disc: self.disc }))
        } else {
            Ok(None)
        }
    }

    pub fn divides(&self, other: &QuadInt) -> Result<bool> {
        Ok(other.div_exact(self)?.is_some())
    }

    fn check(&self, o: &QuadInt) {
        assert_eq!(self.disc, o.disc, "mixed discriminants");
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}w[{}]", self.x, self.y, self.disc)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'a> Add<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn add(self, o: &QuadInt) -> QuadInt {
        self.check(o);
        QuadInt { x: &self.x + &o.x, y: &self.y + &o.y, disc: self.disc }
    }
}

impl<'a> Sub<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn sub(self, o: &QuadInt) -> QuadInt {
        self.check(o);
        QuadInt { x: &self.x - &o.x, y: &self.y - &o.y, disc: self.disc }
    }
}

impl<'a> Mul<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn mul(self, o: &QuadInt) -> QuadInt {
        self.check(o);
        let d = BigInt::from(self.disc.d());
        let c = BigInt::from(self.disc.norm_c());
        let yy = &self.y * &o.y;
        QuadInt {
            x: &self.x * &o.x - &c * &yy,
            y: &self.x * &o.y + &o.x * &self.y + d * yy,
            disc: self.disc,
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { x: -&self.x, y: -&self.y, disc: self.disc }
    }
}

impl RingElem for QuadInt {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.x) && Zero::is_zero(&self.y)
    }
    fn zero_like(&self) -> Self {
        QuadInt::zero(self.disc)
    }
    fn one_like(&self) -> Self {
        QuadInt::one(self.disc)
    }
    fn is_positive(&self) -> bool {
        let re2 = self.twice_re();
        if Zero::is_zero(&re2) {
            Signed::is_positive(&self.y)
        } else {
            Signed::is_positive(&re2)
        }
    }
}

/// All units of the ring.
pub fn units(disc: Discriminant) -> Vec<QuadInt> {
    let d = disc.d();
    if disc == Discriminant::Rational {
        return vec![QuadInt::one(disc), QuadInt::from_int(-1, disc)];
    }
    // N >= |D| y^2 / 4, so units have |y| <= 1 once |D| > 4.
    let bound = 3i64;
    let mut out = Vec::new();
    for y in -bound..=bound {
        for x in -(d.abs() + bound)..=(d.abs() + bound) {
            let q = QuadInt::from_xy(x, y, disc);
            if q.norm() == BigInt::one() {
                out.push(q);
            }
        }
    }
    out
}

pub fn qnorm(q: &QuadInt) -> BigInt {
    q.norm()
}

/// Double-precision quaternion x0 + x1 i + x2 j + x3 k.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Quaternion(pub [f64; 4]);

impl Quaternion {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Quaternion([x0, x1, x2, x3])
    }

    pub fn real(x: f64) -> Self {
        Quaternion([x, 0.0, 0.0, 0.0])
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = self.0;
        Quaternion([a, -b, -c, -d])
    }

    pub fn norm2(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn abs(&self) -> f64 {
        self.norm2().sqrt()
    }

    /// Re x = (x + conj x)/2.
    pub fn re(&self) -> f64 {
        self.0[0]
    }

    /// Im x = (x - conj x)/2.
    pub fn im(&self) -> Self {
        let [_, b, c, d] = self.0;
        Quaternion([0.0, b, c, d])
    }

    pub fn scale(&self, s: f64) -> Self {
        let [a, b, c, d] = self.0;
        Quaternion([a * s, b * s, c * s, d * s])
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        let (a, b) = (self.0, o.0);
        Quaternion([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        let (a, b) = (self.0, o.0);
        Quaternion([a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]])
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = o.0;
        Quaternion([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }
}

/// 2x2 matrix (a b; c d).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: RingElem> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity_like(x: &T) -> Self {
        Mat2::new(x.one_like(), x.zero_like(), x.zero_like(), x.one_like())
    }

    pub fn det(&self) -> T {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn trace(&self) -> T {
        self.a.add(&self.d)
    }

    pub fn mul(&self, o: &Mat2<T>) -> Mat2<T> {
        Mat2::new(
            self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        )
    }

    /// Adjugate (d -b; -c a); the inverse when det = 1.
    pub fn adj(&self) -> Mat2<T> {
        Mat2::new(self.d.clone(), self.b.neg(), self.c.neg(), self.a.clone())
    }

    pub fn neg(&self) -> Mat2<T> {
        Mat2::new(self.a.neg(), self.b.neg(), self.c.neg(), self.d.neg())
    }

    pub fn pow(&self, k: u32) -> Mat2<T> {
        let mut r = Mat2::identity_like(&self.a);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Equality in PSL2: m = o or m = -o.
    pub fn eq_psl(&self, o: &Mat2<T>) -> bool {
        self == o || *self == o.neg()
    }
}

impl Mat2<BigInt> {
    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn to_i64(&self) -> Option<Mat2<i64>> {
        Some(Mat2::new(self.a.to_i64()?, self.b.to_i64()?, self.c.to_i64()?, self.d.to_i64()?))
    }
}

impl Mat2<i64> {
    pub fn to_big(&self) -> Mat2<BigInt> {
        Mat2::from_i64(self.a, self.b, self.c, self.d)
    }
}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Point (p : q) of the projective line; infinity is (1 : 0).
#[derive(Clone, Debug)]
pub struct ProjPoint<T> {
    pub p: T,
    pub q: T,
}

impl<T: RingElem> ProjPoint<T> {
    pub fn new(p: T, q: T) -> Result<Self> {
        if p.is_zero() && q.is_zero() {
            return Err(Error::Precondition("(0 : 0) is not a projective point".into()));
        }
        Ok(ProjPoint { p, q })
    }

    pub fn finite(x: T) -> Self {
        let q = x.one_like();
        ProjPoint { p: x, q }
    }

    pub fn infinity_like(x: &T) -> Self {
        ProjPoint { p: x.one_like(), q: x.zero_like() }
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    /// Equality on cross products p q' - p' q = 0.
    pub fn same(&self, o: &ProjPoint<T>) -> bool {
        self.p.mul(&o.q).sub(&o.p.mul(&self.q)).is_zero()
    }
}

impl<T: RingElem> PartialEq for ProjPoint<T> {
    fn eq(&self, o: &Self) -> bool {
        self.same(o)
    }
}

/// (p : q) -> (a p + b q : c p + d q).
pub fn mobius_apply<T: RingElem>(m: &Mat2<T>, z: &ProjPoint<T>) -> Result<ProjPoint<T>> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if m.det().is_zero() {
        return Err(Error::Precondition("singular matrix".into()));
    }
    Ok(ProjPoint {
        p: m.a.mul(&z.p).add(&m.b.mul(&z.q)),
        q: m.c.mul(&z.p).add(&m.d.mul(&z.q)),
    })
}

/// Representative of {m, -m} whose first nonzero entry is positive
/// (positive real part, ties broken by positive imaginary part).
pub fn psl_canonicalize<T: RingElem>(m: &Mat2<T>) -> Result<Mat2<T>> {
    if m.det() != m.a.one_like() {
        return Err(Error::DetNotOne);
    }
    let first = m.entries().into_iter().find(|e| !e.is_zero()).expect("det 1 matrix is nonzero");
    Ok(if first.is_positive() { m.clone() } else { m.neg() })
}
