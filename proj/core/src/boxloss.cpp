#include "cfis/boxloss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "siou_detail.hpp"

namespace cfis {

namespace {

void check_gamma(double gamma) {
  if (!(gamma >= 0.5 && gamma <= 1.5)) {
    throw ConfigError("gamma must be in [0.5, 1.5], got " + std::to_string(gamma));
  }
}

detail::BoxT<double> as_plain(const BBox& b) { return {b.cx, b.cy, b.w, b.h}; }

}  // namespace

BBox::BBox(double cx_, double cy_, double w_, double h_) : cx(cx_), cy(cy_), w(w_), h(h_) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) || !std::isfinite(h)) {
    throw ConfigError("box coordinates must be finite");
  }
  if (w <= 0.0 || h <= 0.0) {
    throw ConfigError("box dimensions must be positive, got w=" + std::to_string(w) +
                      " h=" + std::to_string(h));
  }
}

double iou(const BBox& b1, const BBox& b2) { return detail::iou_t(as_plain(b1), as_plain(b2)); }

Corners auxiliary_box(const BBox& b, double gamma) {
  check_gamma(gamma);
  return {b.cx - gamma * b.w / 2, b.cy - gamma * b.h / 2, b.cx + gamma * b.w / 2,
          b.cy + gamma * b.h / 2};
}

double inner_iou(const BBox& t, const BBox& a, double gamma) {
  check_gamma(gamma);
  return detail::inner_iou_t(as_plain(t), as_plain(a), gamma);
}

SiouComponents siou_components(const BBox& t, const BBox& a) {
  const auto c = detail::siou_components_t(as_plain(t), as_plain(a));
  return {c.angle, c.dist, c.shape};
}

double siou_loss(const BBox& t, const BBox& a, const LossConfig& cfg) {
  const SiouComponents c = siou_components(t, a);
  return 1.0 - iou(t, a) + cfg.lambda1 * c.dist_cost + cfg.lambda2 * c.shape_cost;
}

LossBreakdown inner_siou_loss(const BBox& t, const BBox& a, const LossConfig& cfg) {
  check_gamma(cfg.gamma);
  const auto b =
      detail::breakdown_t(as_plain(t), as_plain(a), cfg.gamma, cfg.lambda1, cfg.lambda2);
  return {b.iou, b.iou_inner, b.angle, b.dist, b.shape, b.l_siou, b.l_inner_siou};
}

std::array<double, 4> inner_siou_gradient(const BBox& t, const BBox& a, const LossConfig& cfg) {
  check_gamma(cfg.gamma);
  using detail::Dual;
  const detail::BoxT<Dual> tb = {Dual(t.cx), Dual(t.cy), Dual(t.w), Dual(t.h)};
  std::array<double, 4> grad{};
  for (int i = 0; i < 4; ++i) {
    detail::BoxT<Dual> ab = {Dual(a.cx), Dual(a.cy), Dual(a.w), Dual(a.h)};
    (i == 0 ? ab.cx : i == 1 ? ab.cy : i == 2 ? ab.w : ab.h).d = 1.0;
    grad[i] = detail::breakdown_t(tb, ab, cfg.gamma, cfg.lambda1, cfg.lambda2).l_inner_siou.d;
  }
  return grad;
}

double grad_check(const BBox& t, const BBox& a, const LossConfig& cfg, double eps) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::array<double, 4> impl = inner_siou_gradient(t, a, cfg);
  double max_rel = 0.0;
  for (int i = 0; i < 4; ++i) {
    double plus[4] = {a.cx, a.cy, a.w, a.h};
    double minus[4] = {a.cx, a.cy, a.w, a.h};
    plus[i] += eps;
    minus[i] -= eps;
    double lp, lm;
    try {
      lp = inner_siou_loss(t, BBox(plus[0], plus[1], plus[2], plus[3]), cfg).l_inner_siou;
      lm = inner_siou_loss(t, BBox(minus[0], minus[1], minus[2], minus[3]), cfg).l_inner_siou;
    } catch (const ConfigError&) {
      return kInf;  // probe point left the valid box domain
    }
    if (!std::isfinite(lp) || !std::isfinite(lm)) {
      return kInf;
    }
    const double numeric = (lp - lm) / (2.0 * eps);
    const double denom = std::max({std::abs(impl[i]), std::abs(numeric), 1e-8});
    max_rel = std::max(max_rel, std::abs(impl[i] - numeric) / denom);
  }
  return max_rel;
}

}  // namespace cfis
