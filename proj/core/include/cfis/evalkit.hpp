#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cfis/boxloss.hpp"

namespace cfis {

struct GroundTruth {
  std::string image_id;
  int class_id;
  BBox box;  // normalized [0,1] coordinates
};

struct Detection {
  std::string image_id;
  int class_id;
  double confidence;  // in [0, 1]
  BBox box;
};

/// Greedy matching outcome. `detections` is in the canonical processing
/// order: confidence descending, ties broken by (image_id, input order).
struct MatchResult {
  struct Entry {
    int det_index;  // index into the input detection list
    std::string image_id;
    int class_id;
    double confidence;
    bool tp;
  };
  std::vector<Entry> detections;
  std::vector<bool> gt_matched;  // aligned with the input ground-truth list
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

/// Greedy matching at IoU threshold tau: detections are processed in the
/// canonical order; each takes the best-IoU unmatched same-class ground
/// truth in its image, and is a TP iff that IoU is >= tau. Every ground
/// truth matches at most once; leftovers are FNs.
MatchResult match(const std::vector<GroundTruth>& gts, const std::vector<Detection>& dets,
                  double tau);

struct PrPoint {
  double precision;
  double recall;
};

/// Cumulative precision/recall after each detection. Entries are sorted by
/// confidence descending (stable) before cumulating. Precision is 0 when no
/// detections have been seen.
std::vector<PrPoint> pr_curve(const std::vector<bool>& tp_labels,
                              const std::vector<double>& confidences, int n_gt);

/// Area under the monotone (from the right) precision envelope over the full
/// recall axis. Empty input gives 0.
double average_precision(const std::vector<PrPoint>& pr);

struct ClassEval {
  int class_id;
  double ap;
  std::vector<PrPoint> pr;
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

struct EvalReport {
  double map = 0.0;
  double tau = 0.5;
  int n_classes = 0;
  std::vector<ClassEval> classes;       // classes with >= 1 ground truth, ascending id
  std::vector<int> skipped_classes;     // classes with no ground truth (excluded from mAP)
  int tp = 0;
  int fp = 0;
  int fn = 0;
  bool empty_ground_truth = false;
};

/// Per-class match -> PR -> AP pipeline; mAP is the mean AP over classes
/// that have at least one ground-truth instance.
EvalReport evaluate(const std::vector<GroundTruth>& gts, const std::vector<Detection>& dets,
                    double tau, int n_classes);

struct TimingStats {
  int reps = 0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
  double fps = 0.0;  // 1000 / median_ms
};

/// Times op() single-threaded: `warmup` untimed calls, then `reps` timed
/// ones. FPS is defined from the median latency.
TimingStats throughput_bench(const std::function<void()>& op, int warmup, int reps);

}  // namespace cfis
