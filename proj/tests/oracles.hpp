#pragma once

// Test-only reference implementations, written as literal translations of
// the defining formulas. They must stay independent of the library code
// paths they are used to check.

#include <algorithm>
#include <vector>

#include "cfis/boxloss.hpp"
#include "cfis/tensor.hpp"

namespace oracles {

// Direct sextuple-loop dense convolution, stride 1, zero same-padding.
inline cfis::Tensor naive_conv(const cfis::Tensor& x, const cfis::ConvSpec& spec) {
  const int B = x.batch(), C = x.channels(), H = x.height(), W = x.width();
  const int K = spec.kernel, P = K / 2, O = spec.out_channels;
  cfis::Tensor out(B, O, H, W);
  for (int b = 0; b < B; ++b)
    for (int oc = 0; oc < O; ++oc)
      for (int y = 0; y < H; ++y)
        for (int xx = 0; xx < W; ++xx) {
          float acc = spec.bias[oc];
          for (int ic = 0; ic < C; ++ic)
            for (int ky = 0; ky < K; ++ky)
              for (int kx = 0; kx < K; ++kx) {
                const int yy = y + ky - P, xs = xx + kx - P;
                if (yy < 0 || yy >= H || xs < 0 || xs >= W) continue;
                acc += spec.weights[((static_cast<std::size_t>(oc) * C + ic) * K + ky) * K + kx] *
                       x.at(b, ic, yy, xs);
              }
          out.at(b, oc, y, xx) = acc;
        }
  return out;
}

// Explicit coordinate-map nearest upsampling: out(u',v') = in(u'/s, v'/s).
inline cfis::Tensor naive_nearest(const cfis::Tensor& x, int s) {
  cfis::Tensor out(x.batch(), x.channels(), x.height() * s, x.width() * s);
  for (int b = 0; b < x.batch(); ++b)
    for (int c = 0; c < x.channels(); ++c)
      for (int oy = 0; oy < x.height() * s; ++oy)
        for (int ox = 0; ox < x.width() * s; ++ox)
          out.at(b, c, oy, ox) = x.at(b, c, oy / s, ox / s);
  return out;
}

// Exact-coverage rasterization on a cells x cells grid spanning both boxes:
// per-axis cell coverage is accumulated and the separable sums multiplied,
// which equals the full 2-D per-cell quadrature for axis-aligned boxes.
inline double rasterized_iou(const cfis::Corners& b1, const cfis::Corners& b2, int cells) {
  const double pad = 1e-3;
  const double lo_x = std::min(b1.x1, b2.x1) - pad, hi_x = std::max(b1.x2, b2.x2) + pad;
  const double lo_y = std::min(b1.y1, b2.y1) - pad, hi_y = std::max(b1.y2, b2.y2) + pad;
  const double sx = (hi_x - lo_x) / cells, sy = (hi_y - lo_y) / cells;

  auto overlap = [](double lo, double hi, double a, double b) {
    return std::max(0.0, std::min(hi, b) - std::max(lo, a));
  };
  double c1x = 0, c2x = 0, ix = 0, c1y = 0, c2y = 0, iy = 0;
  for (int i = 0; i < cells; ++i) {
    const double xl = lo_x + i * sx, xh = xl + sx;
    c1x += overlap(xl, xh, b1.x1, b1.x2);
    c2x += overlap(xl, xh, b2.x1, b2.x2);
    ix += std::max(0.0, std::min({xh, b1.x2, b2.x2}) - std::max({xl, b1.x1, b2.x1}));
    const double yl = lo_y + i * sy, yh = yl + sy;
    c1y += overlap(yl, yh, b1.y1, b1.y2);
    c2y += overlap(yl, yh, b2.y1, b2.y2);
    iy += std::max(0.0, std::min({yh, b1.y2, b2.y2}) - std::max({yl, b1.y1, b2.y1}));
  }
  const double inter = ix * iy;
  const double uni = c1x * c1y + c2x * c2y - inter;
  return uni <= 0.0 ? 0.0 : inter / uni;
}

inline double rasterized_iou(const cfis::BBox& b1, const cfis::BBox& b2, int cells) {
  return rasterized_iou(cfis::Corners{b1.x1(), b1.y1(), b1.x2(), b1.y2()},
                        cfis::Corners{b2.x1(), b2.y1(), b2.x2(), b2.y2()}, cells);
}

// Confidence-priority assignment by exhaustive enumeration: over all
// injective detection->GT assignments (IoU >= tau per pair), pick the one
// whose per-detection IoU vector, in descending-confidence order, is
// lexicographically largest (unmatched = -1). Returns its TP count.
struct OracleDet {
  double confidence;
  cfis::BBox box;
};

inline void enumerate_assignments(const std::vector<cfis::BBox>& gts,
                                  const std::vector<OracleDet>& dets, double tau,
                                  std::size_t det_idx, std::vector<bool>& used,
                                  std::vector<double>& key, std::vector<double>& best_key) {
  if (det_idx == dets.size()) {
    if (best_key.empty() || std::lexicographical_compare(best_key.begin(), best_key.end(),
                                                         key.begin(), key.end())) {
      best_key = key;
    }
    return;
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (used[g]) continue;
    const double v = cfis::iou(dets[det_idx].box, gts[g]);
    if (v < tau) continue;
    used[g] = true;
    key.push_back(v);
    enumerate_assignments(gts, dets, tau, det_idx + 1, used, key, best_key);
    key.pop_back();
    used[g] = false;
  }
  key.push_back(-1.0);  // detection left unmatched
  enumerate_assignments(gts, dets, tau, det_idx + 1, used, key, best_key);
  key.pop_back();
}

inline int exhaustive_priority_tp(const std::vector<cfis::BBox>& gts,
                                  std::vector<OracleDet> dets, double tau) {
  std::stable_sort(dets.begin(), dets.end(),
                   [](const OracleDet& a, const OracleDet& b) { return a.confidence > b.confidence; });
  std::vector<bool> used(gts.size(), false);
  std::vector<double> key, best_key;
  enumerate_assignments(gts, dets, tau, 0, used, key, best_key);
  int tp = 0;
  for (double v : best_key) {
    if (v >= 0.0) ++tp;
  }
  return tp;
}

}  // namespace oracles
