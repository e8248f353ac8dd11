#include "draftvec/eval.hpp"

#include "draftvec/detection.hpp"
#include "draftvec/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <thread>

namespace draftvec {

double ClassScore::precision() const {
    if (detected_count == 0) {
        return matched_count == 0 ? 1.0 : 0.0;
    }
    return static_cast<double>(matched_count) / static_cast<double>(detected_count);
}

double ClassScore::recall() const {
    if (truth_count == 0) {
        return 1.0;
    }
    return static_cast<double>(matched_count) / static_cast<double>(truth_count);
}

ClassScore& ClassScore::operator+=(const ClassScore& other) {
    truth_count += other.truth_count;
    detected_count += other.detected_count;
    matched_count += other.matched_count;
    return *this;
}

double EvalReport::text_accuracy() const {
    if (text_pairs == 0) {
        return text_regions.truth_count == 0 ? 1.0 : 0.0;
    }
    return text_accuracy_sum / static_cast<double>(text_pairs);
}

std::vector<const ClassScore*> EvalReport::rows() const {
    return {&circles, &ornaments, &dimension_lines, &text_regions};
}

std::vector<MatchCandidate> greedy_match(std::vector<MatchCandidate> candidates) {
    std::sort(candidates.begin(), candidates.end(), [](const MatchCandidate& a, const MatchCandidate& b) {
        if (a.cost != b.cost) {
            return a.cost < b.cost;
        }
        return std::pair{a.truth, a.detected} < std::pair{b.truth, b.detected};
    });
    std::vector<bool> truth_used;
    std::vector<bool> detected_used;
    std::vector<MatchCandidate> accepted;
    for (const auto& c : candidates) {
        if (c.truth >= truth_used.size()) {
            truth_used.resize(c.truth + 1, false);
        }
        if (c.detected >= detected_used.size()) {
            detected_used.resize(c.detected + 1, false);
        }
        if (truth_used[c.truth] || detected_used[c.detected]) {
            continue;
        }
        truth_used[c.truth] = true;
        detected_used[c.detected] = true;
        accepted.push_back(c);
    }
    return accepted;
}

namespace {

template <typename T, typename Cost>
std::vector<MatchCandidate> score_class(ClassScore& score, const std::vector<T>& truth,
                                        const std::vector<T>& detected, Cost&& cost) {
    score.truth_count = truth.size();
    score.detected_count = detected.size();
    std::vector<MatchCandidate> candidates;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        for (std::size_t j = 0; j < detected.size(); ++j) {
            if (const auto c = cost(truth[i], detected[j])) {
                candidates.push_back({i, j, *c});
            }
        }
    }
    auto matches = greedy_match(std::move(candidates));
    score.matched_count = matches.size();
    return matches;
}

double distance(double x1, double y1, double x2, double y2) {
    return std::hypot(x1 - x2, y1 - y2);
}

}  // namespace

EvalReport match_and_score(const GroundTruth& truth, const DrawingEntitySet& detected, const Tolerances& tol) {
    EvalReport report;
    const auto& t = truth.entities;

    score_class(report.circles, t.circles, detected.circles,
                [&](const Circle& a, const Circle& b) -> std::optional<double> {
                    const double d = distance(a.cx, a.cy, b.cx, b.cy);
                    if (d > tol.circle_center || std::abs(a.radius - b.radius) > tol.circle_radius) {
                        return std::nullopt;
                    }
                    return d + std::abs(a.radius - b.radius);
                });

    score_class(report.lines, t.lines, detected.lines,
                [&](const LineSegment& a, const LineSegment& b) -> std::optional<double> {
                    const double same = std::max(distance(a.x1, a.y1, b.x1, b.y1), distance(a.x2, a.y2, b.x2, b.y2));
                    const double swapped =
                        std::max(distance(a.x1, a.y1, b.x2, b.y2), distance(a.x2, a.y2, b.x1, b.y1));
                    const double d = std::min(same, swapped);
                    if (d > tol.segment_endpoint) {
                        return std::nullopt;
                    }
                    return d;
                });

    const auto box_cost = [&](double min_iou, bool same_label) {
        return [=](const DetectionBox& a, const DetectionBox& b) -> std::optional<double> {
            if (same_label && a.class_label != b.class_label) {
                return std::nullopt;
            }
            const double v = iou(a, b);
            if (v < min_iou || v <= 0.0) {
                return std::nullopt;
            }
            return -v;
        };
    };
    score_class(report.ornaments, t.lights, detected.lights, box_cost(tol.box_iou, true));
    score_class(report.dimension_lines, t.dimension_lines, detected.dimension_lines, box_cost(tol.box_iou, false));

    const auto text_box_of = [](const TextRegion& r) { return r.box; };
    std::vector<DetectionBox> truth_boxes;
    std::vector<DetectionBox> detected_boxes;
    std::transform(t.texts.begin(), t.texts.end(), std::back_inserter(truth_boxes), text_box_of);
    std::transform(detected.texts.begin(), detected.texts.end(), std::back_inserter(detected_boxes), text_box_of);
    const auto text_matches =
        score_class(report.text_regions, truth_boxes, detected_boxes, box_cost(tol.text_iou, false));
    for (const auto& m : text_matches) {
        const auto& truth_text = t.texts[m.truth].text;
        if (truth_text.empty()) {
            continue;
        }
        report.text_accuracy_sum += character_accuracy(detected.texts[m.detected].text, truth_text);
        ++report.text_pairs;
    }
    return report;
}

EvalReport aggregate(const std::vector<EvalReport>& reports) {
    EvalReport total;
    for (const auto& r : reports) {
        total.circles += r.circles;
        total.ornaments += r.ornaments;
        total.dimension_lines += r.dimension_lines;
        total.text_regions += r.text_regions;
        total.lines += r.lines;
        total.text_accuracy_sum += r.text_accuracy_sum;
        total.text_pairs += r.text_pairs;
    }
    return total;
}

namespace {

std::string percent(double v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.0f%%", v * 100.0);
    return buf;
}

std::string fixed3(double v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string render_report(const EvalReport& report) {
    std::vector<std::vector<std::string>> table;
    table.push_back({"S.No", "Component", "Ground Truth", "Proposed Solution", "Matched", "Precision", "Recall"});
    int n = 1;
    for (const auto* row : report.rows()) {
        table.push_back({std::to_string(n++) + ".", "No. of " + row->name, std::to_string(row->truth_count),
                         std::to_string(row->detected_count), std::to_string(row->matched_count),
                         fixed3(row->precision()), fixed3(row->recall())});
    }
    table.push_back({std::to_string(n) + ".", "Accuracy of Text", "100%", percent(report.text_accuracy()), "", "", ""});

    std::vector<std::size_t> widths(table.front().size(), 0);
    for (const auto& row : table) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::string out;
    for (const auto& row : table) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::string cell = row[c];
            cell.resize(widths[c], ' ');
            line += cell;
            if (c + 1 < row.size()) {
                line += "  ";
            }
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line + "\n";
    }
    return out;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::ordered_json doc;
    const auto row_json = [](const ClassScore& s) {
        return nlohmann::ordered_json{{"class", s.name},
                                      {"truth_count", s.truth_count},
                                      {"detected_count", s.detected_count},
                                      {"matched_count", s.matched_count},
                                      {"precision", s.precision()},
                                      {"recall", s.recall()}};
    };
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto* row : report.rows()) {
        doc["rows"].push_back(row_json(*row));
    }
    doc["lines"] = row_json(report.lines);
    doc["text_accuracy"] = report.text_accuracy();
    doc["text_pairs"] = report.text_pairs;
    return doc.dump(2) + "\n";
}

BenchmarkResult run_benchmark(std::size_t n_images, const GenSpec& spec, std::uint64_t base_seed,
                              const PipelineConfig& cfg, const Tolerances& tol) {
    PipelineConfig run_cfg = cfg;
    run_cfg.sidecars = {};
    run_cfg.ocr = {};
    run_cfg.dump_stages.reset();
    run_cfg.workers = 1;

    BenchmarkResult result;
    result.per_image.resize(n_images);
    result.seconds.resize(n_images);
    std::vector<std::exception_ptr> errors(n_images);

    const auto run_one = [&](std::size_t i) {
        try {
            const auto seed = base_seed + i;
            auto [img, truth] = generate(spec, seed);
            const auto start = std::chrono::steady_clock::now();
            const auto out = process_image(img, run_cfg, truth.entities.source, "synthetic");
            result.seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            result.per_image[i] = match_and_score(truth, out.entities, tol);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, cfg.workers)), 1,
                                                        std::max<std::size_t>(1, n_images));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n_images; i += workers) {
                    run_one(i);
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    result.aggregate = aggregate(result.per_image);
    return result;
}

}  // namespace draftvec
