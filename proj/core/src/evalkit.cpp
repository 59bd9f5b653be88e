#include "cfis/evalkit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

namespace cfis {

MatchResult match(const std::vector<GroundTruth>& gts, const std::vector<Detection>& dets,
                  double tau) {
  MatchResult result;
  result.gt_matched.assign(gts.size(), false);

  // Ground truths grouped by (class, image); values are indices into gts.
  std::map<std::pair<int, std::string>, std::vector<std::size_t>> gt_groups;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    gt_groups[{gts[i].class_id, gts[i].image_id}].push_back(i);
  }

  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (dets[a].confidence != dets[b].confidence) {
      return dets[a].confidence > dets[b].confidence;
    }
    if (dets[a].image_id != dets[b].image_id) {
      return dets[a].image_id < dets[b].image_id;
    }
    return a < b;
  });

  for (int idx : order) {
    const Detection& det = dets[idx];
    bool tp = false;
    auto it = gt_groups.find({det.class_id, det.image_id});
    if (it != gt_groups.end()) {
      double best_iou = -1.0;
      std::size_t best_gt = 0;
      for (std::size_t gi : it->second) {
        if (result.gt_matched[gi]) continue;
        const double v = iou(det.box, gts[gi].box);
        if (v > best_iou) {
          best_iou = v;
          best_gt = gi;
        }
      }
      if (best_iou >= tau) {
        tp = true;
        result.gt_matched[best_gt] = true;
      }
    }
    result.detections.push_back({idx, det.image_id, det.class_id, det.confidence, tp});
    tp ? ++result.tp : ++result.fp;
  }
  result.fn = static_cast<int>(gts.size()) - result.tp;
  return result;
}

std::vector<PrPoint> pr_curve(const std::vector<bool>& tp_labels,
                              const std::vector<double>& confidences, int n_gt) {
  if (tp_labels.size() != confidences.size()) {
    throw ConfigError("pr_curve: labels and confidences must be aligned");
  }
  std::vector<int> order(tp_labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return confidences[a] > confidences[b]; });

  std::vector<PrPoint> pr;
  pr.reserve(order.size());
  int cum_tp = 0, cum_fp = 0;
  for (int i : order) {
    tp_labels[i] ? ++cum_tp : ++cum_fp;
    PrPoint p;
    p.precision = cum_tp + cum_fp == 0 ? 0.0 : static_cast<double>(cum_tp) / (cum_tp + cum_fp);
    p.recall = n_gt == 0 ? 0.0 : static_cast<double>(cum_tp) / n_gt;
    pr.push_back(p);
  }
  return pr;
}

double average_precision(const std::vector<PrPoint>& pr) {
  if (pr.empty()) return 0.0;
  std::vector<double> envelope(pr.size());
  double running = 0.0;
  for (std::size_t i = pr.size(); i-- > 0;) {
    running = std::max(running, pr[i].precision);
    envelope[i] = running;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    ap += (pr[i].recall - prev_recall) * envelope[i];
    prev_recall = pr[i].recall;
  }
  return ap;
}

EvalReport evaluate(const std::vector<GroundTruth>& gts, const std::vector<Detection>& dets,
                    double tau, int n_classes) {
  if (n_classes < 1) {
    throw ConfigError("evaluate: class count must be >= 1");
  }
  EvalReport report;
  report.tau = tau;
  report.n_classes = n_classes;
  report.empty_ground_truth = gts.empty();

  const MatchResult all = match(gts, dets, tau);
  report.tp = all.tp;
  report.fp = all.fp;
  report.fn = all.fn;

  std::vector<int> gt_count(n_classes, 0);
  for (const auto& gt : gts) {
    if (gt.class_id < 0 || gt.class_id >= n_classes) {
      throw ConfigError("evaluate: ground-truth class id out of range");
    }
    ++gt_count[gt.class_id];
  }

  double ap_sum = 0.0;
  int evaluated = 0;
  for (int cls = 0; cls < n_classes; ++cls) {
    if (gt_count[cls] == 0) {
      report.skipped_classes.push_back(cls);
      continue;
    }
    ClassEval ce;
    ce.class_id = cls;
    std::vector<bool> labels;
    std::vector<double> confs;
    for (const auto& entry : all.detections) {
      if (entry.class_id != cls) continue;
      labels.push_back(entry.tp);
      confs.push_back(entry.confidence);
      entry.tp ? ++ce.tp : ++ce.fp;
    }
    ce.fn = gt_count[cls] - ce.tp;
    ce.pr = pr_curve(labels, confs, gt_count[cls]);
    ce.ap = average_precision(ce.pr);
    ap_sum += ce.ap;
    ++evaluated;
    report.classes.push_back(std::move(ce));
  }
  report.map = evaluated == 0 ? 0.0 : ap_sum / evaluated;
  return report;
}

TimingStats throughput_bench(const std::function<void()>& op, int warmup, int reps) {
  using clock = std::chrono::steady_clock;
  for (int i = 0; i < warmup; ++i) op();

  TimingStats stats;
  stats.reps = reps;
  if (reps <= 0) return stats;

  std::vector<double> ms(reps);
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clock::now();
    op();
    const auto t1 = clock::now();
    ms[i] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  std::sort(ms.begin(), ms.end());
  const std::size_t mid = ms.size() / 2;
  stats.median_ms = ms.size() % 2 == 1 ? ms[mid] : 0.5 * (ms[mid - 1] + ms[mid]);
  const std::size_t p95 =
      std::min(ms.size() - 1, static_cast<std::size_t>(std::ceil(0.95 * ms.size())) - 1);
  stats.p95_ms = ms[p95];
  stats.fps = stats.median_ms > 0.0 ? 1000.0 / stats.median_ms : 0.0;
  return stats;
}

}  // namespace cfis
