//! Small fixed-size vector helpers. Points are plain arrays.

use crate::scalar::Scalar;

pub type Point3<S> = [S; 3];
pub type Point2<S> = [S; 2];

#[inline]
pub fn sub3<S: Scalar>(a: Point3<S>, b: Point3<S>) -> Point3<S> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn dot3<S: Scalar>(a: Point3<S>, b: Point3<S>) -> S {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross3<S: Scalar>(a: Point3<S>, b: Point3<S>) -> Point3<S> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm3<S: Scalar>(a: Point3<S>) -> S {
    dot3(a, a).sqrt()
}

#[inline]
pub fn dist3<S: Scalar>(a: Point3<S>, b: Point3<S>) -> S {
    norm3(sub3(a, b))
}

#[inline]
pub fn sub2<S: Scalar>(a: Point2<S>, b: Point2<S>) -> Point2<S> {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add2<S: Scalar>(a: Point2<S>, b: Point2<S>) -> Point2<S> {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn dot2<S: Scalar>(a: Point2<S>, b: Point2<S>) -> S {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn dist2<S: Scalar>(a: Point2<S>, b: Point2<S>) -> S {
    let d = sub2(a, b);
    dot2(d, d).sqrt()
}

/// Rotates `p` counterclockwise by `angle` radians about the origin.
#[inline]
pub fn rotate2<S: Scalar>(p: Point2<S>, angle: S) -> Point2<S> {
    let (s, c) = angle.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

/// Twice the area of a 3D triangle.
pub fn double_area3<S: Scalar>(a: Point3<S>, b: Point3<S>, c: Point3<S>) -> S {
    norm3(cross3(sub3(b, a), sub3(c, a)))
}

/// True when the triangle's area is at most `1e-12` times its squared longest edge.
pub fn is_degenerate3<S: Scalar>(a: Point3<S>, b: Point3<S>, c: Point3<S>) -> bool {
    let longest = dist3(a, b).max(dist3(b, c)).max(dist3(c, a));
    let area = double_area3(a, b, c) / crate::scalar::lit(2.0);
    !(area > crate::scalar::lit::<S>(1e-12) * longest * longest)
}
