#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace pericontact {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return (&x)[i]; }
  double operator[](int i) const { return (&x)[i]; }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }

  Vec3& operator+=(const Vec3& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  Vec3& operator*=(double s) {
    x *= s; y *= s; z *= s;
    return *this;
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  return n > 0.0 ? v / n : Vec3{};
}

// Row-major 3x3 matrix; only the handful of operations the solver needs.
struct Mat3 {
  std::array<double, 9> a{};  // a[3*r + c]

  double& operator()(int r, int c) { return a[3 * r + c]; }
  double operator()(int r, int c) const { return a[3 * r + c]; }

  static Mat3 identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
  }

  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i];
    return r;
  }
  Mat3 operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = a[i] * s;
    return r;
  }

  Vec3 operator*(const Vec3& v) const {
    return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
            a[3] * v.x + a[4] * v.y + a[5] * v.z,
            a[6] * v.x + a[7] * v.y + a[8] * v.z};
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  double det() const {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) -
           a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
  }
};

// Adds s * (u outer u) to m.
inline void add_outer(Mat3& m, const Vec3& u, double s) {
  m(0, 0) += s * u.x * u.x;
  m(0, 1) += s * u.x * u.y;
  m(0, 2) += s * u.x * u.z;
  m(1, 0) += s * u.y * u.x;
  m(1, 1) += s * u.y * u.y;
  m(1, 2) += s * u.y * u.z;
  m(2, 0) += s * u.z * u.x;
  m(2, 1) += s * u.z * u.y;
  m(2, 2) += s * u.z * u.z;
}

inline bool invert(const Mat3& m, Mat3& out) {
  double d = m.det();
  if (d == 0.0 || !std::isfinite(d)) return false;
  double inv = 1.0 / d;
  out(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) * inv;
  out(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) * inv;
  out(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) * inv;
  out(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) * inv;
  out(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) * inv;
  out(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) * inv;
  out(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) * inv;
  out(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) * inv;
  out(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) * inv;
  return true;
}

// Eigenvalues of a symmetric 3x3 matrix, ascending, by the trigonometric
// closed form. Deterministic: no iteration, no pivoting.
inline std::array<double, 3> symmetric_eigenvalues(const Mat3& m) {
  double p1 = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
  if (p1 == 0.0) {
    std::array<double, 3> e{m(0, 0), m(1, 1), m(2, 2)};
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    if (e[1] > e[2]) std::swap(e[1], e[2]);
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    return e;
  }
  double q = (m(0, 0) + m(1, 1) + m(2, 2)) / 3.0;
  double p2 = (m(0, 0) - q) * (m(0, 0) - q) + (m(1, 1) - q) * (m(1, 1) - q) +
              (m(2, 2) - q) * (m(2, 2) - q) + 2.0 * p1;
  double p = std::sqrt(p2 / 6.0);
  Mat3 b;
  double invp = 1.0 / p;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      b(i, j) = (m(i, j) - (i == j ? q : 0.0)) * invp;
  double r = b.det() / 2.0;
  r = std::clamp(r, -1.0, 1.0);
  double phi = std::acos(r) / 3.0;
  double e2 = q + 2.0 * p * std::cos(phi);
  double e0 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  double e1 = 3.0 * q - e0 - e2;

  // The trigonometric estimates are only ~1e-11 accurate near repeated
  // roots. Newton-polish the best-separated root on the characteristic
  // polynomial, then deflate and solve the remaining quadratic, which stays
  // exact for (near-)double roots.
  double tr = m(0, 0) + m(1, 1) + m(2, 2);
  double m2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
              m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  double det = m.det();

  double iso = (e1 - e0 >= e2 - e1) ? e0 : e2;
  // The closed form is already within ~1e-11 of the root, so any Newton
  // step beyond that scale is evaluation noise (small p' near clustered
  // roots) and must not be taken.
  double step_limit = 1e-10 * std::max({std::abs(e0), std::abs(e2), 1e-300});
  for (int it = 0; it < 3; ++it) {
    double f = ((iso - tr) * iso + m2) * iso - det;
    double df = (3.0 * iso - 2.0 * tr) * iso + m2;
    if (df == 0.0) break;
    double step = f / df;
    if (!(std::abs(step) <= step_limit)) break;
    iso -= step;
    if (std::abs(step) <= 1e-15 * std::abs(iso)) break;
  }

  // Remaining pair: restrict M to the plane orthogonal to iso's
  // eigenvector and use the 2x2 closed form, whose discriminant is a sum of
  // squares (no cancellation even for clustered roots).
  Mat3 s = m;
  s(0, 0) -= iso;
  s(1, 1) -= iso;
  s(2, 2) -= iso;
  Vec3 r0{s(0, 0), s(0, 1), s(0, 2)};
  Vec3 r1{s(1, 0), s(1, 1), s(1, 2)};
  Vec3 r2{s(2, 0), s(2, 1), s(2, 2)};
  Vec3 c01 = cross(r0, r1), c02 = cross(r0, r2), c12 = cross(r1, r2);
  Vec3 v = c01;
  if (norm2(c02) > norm2(v)) v = c02;
  if (norm2(c12) > norm2(v)) v = c12;
  if (norm2(v) == 0.0) {
    // (Numerically) isotropic at iso: pick any direction.
    v = Vec3{1.0, 0.0, 0.0};
  }
  v = normalized(v);
  // Axis least aligned with v spans the complement robustly.
  int least = std::abs(v.x) <= std::abs(v.y)
                  ? (std::abs(v.x) <= std::abs(v.z) ? 0 : 2)
                  : (std::abs(v.y) <= std::abs(v.z) ? 1 : 2);
  Vec3 axis{least == 0 ? 1.0 : 0.0, least == 1 ? 1.0 : 0.0,
            least == 2 ? 1.0 : 0.0};
  Vec3 u = normalized(cross(v, axis));
  Vec3 w = cross(v, u);
  double a11 = dot(u, m * u);
  double a12 = dot(u, m * w);
  double a22 = dot(w, m * w);
  double mid = 0.5 * (a11 + a22);
  double halfdiff = 0.5 * (a11 - a22);
  double rad = std::sqrt(halfdiff * halfdiff + a12 * a12);

  std::array<double, 3> e{iso, mid - rad, mid + rad};
  if (e[0] > e[1]) std::swap(e[0], e[1]);
  if (e[1] > e[2]) std::swap(e[1], e[2]);
  if (e[0] > e[1]) std::swap(e[0], e[1]);
  return e;
}

}  // namespace pericontact
