#pragma once

#include <cmath>

// Scalar-generic Inner-SIoU arithmetic. Instantiated with double for the
// loss values and with Dual for the exact anchor gradient; both paths run
// the identical expression tree.

namespace cfis::detail {

struct Dual {
  double v = 0.0;
  double d = 0.0;

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit constants
  Dual(double value, double deriv) : v(value), d(deriv) {}
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

inline double value(double x) { return x; }
inline double value(Dual x) { return x.v; }

inline double min_s(double a, double b) { return a < b ? a : b; }
inline double max_s(double a, double b) { return a > b ? a : b; }
inline double abs_s(double a) { return a < 0 ? -a : a; }
inline Dual min_s(Dual a, Dual b) { return a.v < b.v ? a : b; }
inline Dual max_s(Dual a, Dual b) { return a.v > b.v ? a : b; }
inline Dual abs_s(Dual a) { return a.v < 0 ? -a : a; }

inline double sqrt_s(double a) { return std::sqrt(a); }
inline double exp_s(double a) { return std::exp(a); }
inline double sin_s(double a) { return std::sin(a); }
inline double asin_s(double a) { return std::asin(a); }
inline Dual sqrt_s(Dual a) {
  const double r = std::sqrt(a.v);
  return {r, a.d / (2.0 * r)};
}
inline Dual exp_s(Dual a) {
  const double e = std::exp(a.v);
  return {e, a.d * e};
}
inline Dual sin_s(Dual a) { return {std::sin(a.v), a.d * std::cos(a.v)}; }
inline Dual asin_s(Dual a) {
  return {std::asin(a.v), a.d / std::sqrt(1.0 - a.v * a.v)};
}

template <class T>
T clamp_pos(T x) {
  return max_s(x, T(0.0));
}

template <class T>
T pow4(T x) {
  const T x2 = x * x;
  return x2 * x2;
}

template <class T>
struct BoxT {
  T cx, cy, w, h;
};

template <class T>
struct BreakdownT {
  T iou, iou_inner, angle, dist, shape, l_siou, l_inner_siou;
};

template <class T>
T iou_t(const BoxT<T>& b1, const BoxT<T>& b2) {
  const T half(0.5);
  const T iw = clamp_pos(min_s(b1.cx + b1.w * half, b2.cx + b2.w * half) -
                         max_s(b1.cx - b1.w * half, b2.cx - b2.w * half));
  const T ih = clamp_pos(min_s(b1.cy + b1.h * half, b2.cy + b2.h * half) -
                         max_s(b1.cy - b1.h * half, b2.cy - b2.h * half));
  const T inter = iw * ih;
  const T uni = b1.w * b1.h + b2.w * b2.h - inter;
  return inter / uni;
}

template <class T>
T inner_iou_t(const BoxT<T>& t, const BoxT<T>& a, double gamma) {
  const T half_g(gamma * 0.5);
  const T iw = clamp_pos(min_s(t.cx + t.w * half_g, a.cx + a.w * half_g) -
                         max_s(t.cx - t.w * half_g, a.cx - a.w * half_g));
  const T ih = clamp_pos(min_s(t.cy + t.h * half_g, a.cy + a.h * half_g) -
                         max_s(t.cy - t.h * half_g, a.cy - a.h * half_g));
  const T inter = iw * ih;
  const T uni = T(gamma * gamma) * (t.w * t.h + a.w * a.h) - inter;
  return inter / uni;
}

template <class T>
struct ComponentsT {
  T angle, dist, shape;
};

template <class T>
ComponentsT<T> siou_components_t(const BoxT<T>& t, const BoxT<T>& a) {
  constexpr double kQuarterPi = 0.78539816339744830961;
  const T half(0.5);

  const T dx = a.cx - t.cx;
  const T dy = a.cy - t.cy;
  const T sigma = sqrt_s(dx * dx + dy * dy);

  T angle(0.0);
  if (value(sigma) != 0.0) {
    const T sin_alpha = min_s(abs_s(dx), abs_s(dy)) / sigma;
    const T s = sin_s(asin_s(sin_alpha) - T(kQuarterPi));
    angle = T(1.0) - T(2.0) * s * s;
  }

  // Smallest enclosing box of the original boxes.
  const T cw = max_s(t.cx + t.w * half, a.cx + a.w * half) -
               min_s(t.cx - t.w * half, a.cx - a.w * half);
  const T ch = max_s(t.cy + t.h * half, a.cy + a.h * half) -
               min_s(t.cy - t.h * half, a.cy - a.h * half);
  const T rho_x = (dx / cw) * (dx / cw);
  const T rho_y = (dy / ch) * (dy / ch);
  const T gamma_d = T(2.0) - angle;
  const T dist = (T(1.0) - exp_s(-gamma_d * rho_x)) + (T(1.0) - exp_s(-gamma_d * rho_y));

  const T omega_w = abs_s(a.w - t.w) / max_s(a.w, t.w);
  const T omega_h = abs_s(a.h - t.h) / max_s(a.h, t.h);
  const T shape = pow4(T(1.0) - exp_s(-omega_w)) + pow4(T(1.0) - exp_s(-omega_h));

  return {angle, dist, shape};
}

template <class T>
BreakdownT<T> breakdown_t(const BoxT<T>& t, const BoxT<T>& a, double gamma, double lambda1,
                          double lambda2) {
  BreakdownT<T> out;
  out.iou = iou_t(t, a);
  out.iou_inner = inner_iou_t(t, a, gamma);
  const ComponentsT<T> c = siou_components_t(t, a);
  out.angle = c.angle;
  out.dist = c.dist;
  out.shape = c.shape;
  out.l_siou = T(1.0) - out.iou + T(lambda1) * out.dist + T(lambda2) * out.shape;
  out.l_inner_siou = out.l_siou + (out.iou - out.iou_inner);
  return out;
}

}  // namespace cfis::detail
