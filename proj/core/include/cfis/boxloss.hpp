#pragma once

#include <array>

#include "cfis/errors.hpp"

namespace cfis {

/// Axis-aligned box in center form. Width and height must be positive and
/// finite; degenerate boxes are rejected at construction.
struct BBox {
  double cx, cy, w, h;

  BBox(double cx, double cy, double w, double h);

  double x1() const { return cx - w / 2; }
  double y1() const { return cy - h / 2; }
  double x2() const { return cx + w / 2; }
  double y2() const { return cy + h / 2; }
  double area() const { return w * h; }
};

/// Corner form (top-left, bottom-right).
struct Corners {
  double x1, y1, x2, y2;
};

struct LossConfig {
  double gamma = 1.25;  // auxiliary box scale, in [0.5, 1.5]
  double lambda1 = 0.5;
  double lambda2 = 0.5;
};

struct SiouComponents {
  double angle_cost;  // in [0, 1]
  double dist_cost;   // in [0, 2)
  double shape_cost;  // in [0, 2)
};

struct LossBreakdown {
  double iou;
  double iou_inner;
  double angle_cost;
  double dist_cost;
  double shape_cost;
  double l_siou;
  double l_inner_siou;
};

double iou(const BBox& b1, const BBox& b2);

/// Same center, dimensions scaled by gamma. gamma outside [0.5, 1.5] is a
/// configuration error.
Corners auxiliary_box(const BBox& b, double gamma);

/// IoU of the gamma-scaled auxiliary boxes; the union is the closed form
/// gamma^2 * (area_t + area_a) - intersection.
double inner_iou(const BBox& t, const BBox& a, double gamma);

/// Angle, distance, and shape costs. t is the ground-truth box; the
/// components are not symmetric in their arguments.
SiouComponents siou_components(const BBox& t, const BBox& a);

double siou_loss(const BBox& t, const BBox& a, const LossConfig& cfg);

LossBreakdown inner_siou_loss(const BBox& t, const BBox& a, const LossConfig& cfg);

/// Exact derivative of l_inner_siou with respect to (cx, cy, w, h) of the
/// anchor box, computed by forward-mode differentiation of the same
/// arithmetic path as inner_siou_loss.
std::array<double, 4> inner_siou_gradient(const BBox& t, const BBox& a, const LossConfig& cfg);

/// Central-difference check of inner_siou_gradient. Returns the max relative
/// error over the four anchor coordinates, or +inf if the loss is non-finite
/// at a probe point. The caller must keep `a` away from non-differentiable
/// configurations (identical boxes, touching edges, exact axis alignment).
double grad_check(const BBox& t, const BBox& a, const LossConfig& cfg, double eps);

}  // namespace cfis
