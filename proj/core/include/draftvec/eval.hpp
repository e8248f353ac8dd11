#pragma once

#include "draftvec/entities.hpp"
#include "draftvec/pipeline.hpp"
#include "draftvec/synth.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace draftvec {

struct Tolerances {
    double circle_center = 2.0;
    double circle_radius = 2.0;
    double segment_endpoint = 3.0;
    double box_iou = 0.5;
    double text_iou = 0.5;
};

struct ClassScore {
    std::string name;
    std::size_t truth_count = 0;
    std::size_t detected_count = 0;
    std::size_t matched_count = 0;

    /// 1 when nothing was detected and nothing matched.
    double precision() const;
    /// 1 when there is nothing to find.
    double recall() const;
    ClassScore& operator+=(const ClassScore& other);
};

struct EvalReport {
    ClassScore circles{"Circles"};
    ClassScore ornaments{"Ornaments"};
    ClassScore dimension_lines{"Dimension Lines"};
    ClassScore text_regions{"Text Regions"};
    ClassScore lines{"Lines"};
    /// Sum and count of per-pair character accuracies over matched text regions.
    double text_accuracy_sum = 0.0;
    std::size_t text_pairs = 0;

    double text_accuracy() const;
    /// Table rows in report order (lines are reported separately).
    std::vector<const ClassScore*> rows() const;
};

struct MatchCandidate {
    std::size_t truth = 0;
    std::size_t detected = 0;
    /// Smaller is better: a distance, or negated IoU.
    double cost = 0.0;
};

/// One-to-one greedy assignment in ascending cost; ties broken by
/// (truth, detected) index. Returns accepted pairs in acceptance order.
std::vector<MatchCandidate> greedy_match(std::vector<MatchCandidate> candidates);

EvalReport match_and_score(const GroundTruth& truth, const DrawingEntitySet& detected,
                           const Tolerances& tol = {});

/// Sums counts and accuracy terms (micro-average).
EvalReport aggregate(const std::vector<EvalReport>& reports);

/// Aligned text table with Ground Truth / Proposed Solution columns.
std::string render_report(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

struct BenchmarkResult {
    EvalReport aggregate;
    std::vector<EvalReport> per_image;
    std::vector<double> seconds;
};

/// Generates `n_images` scenes from seeds base_seed, base_seed + 1, ... and
/// scores the pipeline on each. Sidecars and OCR in `cfg` are ignored, so only
/// the raster stages are measured. Images run on `cfg.workers` threads.
BenchmarkResult run_benchmark(std::size_t n_images, const GenSpec& spec, std::uint64_t base_seed,
                              const PipelineConfig& cfg, const Tolerances& tol = {});

}  // namespace draftvec
