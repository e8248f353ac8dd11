#pragma once

#include "draftvec/canny.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

namespace draftvec {

/// Line x*cos(theta) + y*sin(theta) = rho, theta in [0, pi).
struct PolarLine {
    double rho = 0.0;
    double theta = 0.0;
    int votes = 0;
    int rho_index = 0;
    int theta_index = 0;

    friend bool operator==(const PolarLine&, const PolarLine&) = default;
};

struct LineSegment {
    int x1 = 0;
    int y1 = 0;
    int x2 = 0;
    int y2 = 0;
    PolarLine parent{};

    double length() const;

    // Parent line is provenance only; two segments are equal when their
    // endpoints are.
    friend bool operator==(const LineSegment& a, const LineSegment& b) {
        return a.x1 == b.x1 && a.y1 == b.y1 && a.x2 == b.x2 && a.y2 == b.y2;
    }
};

struct Circle {
    int cx = 0;
    int cy = 0;
    int radius = 0;
    int votes = 0;

    friend bool operator==(const Circle& a, const Circle& b) {
        return a.cx == b.cx && a.cy == b.cy && a.radius == b.radius;
    }
};

struct HoughParams {
    double rho_resolution = 1.0;
    double theta_resolution = std::numbers::pi / 180.0;
    /// Unset: max(30, 0.3 * strongest cell).
    std::optional<int> line_peak_threshold;
    int nms_window = 3;
    int max_gap = 5;
    int min_length = 20;
    int r_min = 6;
    int r_max = 48;
    /// Minimum center votes as a fraction of round(2*pi*r).
    double circle_peak_threshold = 0.3;
    /// Worker threads for voting; results are identical for any value.
    int workers = 1;

    void validate() const;
};

/// Vote grid over (rho, theta). Row = rho bin, column = theta bin.
class HoughAccumulator {
public:
    HoughAccumulator(int image_width, int image_height, double rho_resolution, double theta_resolution);

    int rho_bins() const noexcept { return rho_bins_; }
    int theta_bins() const noexcept { return theta_bins_; }
    double rho_resolution() const noexcept { return rho_resolution_; }
    double theta_resolution() const noexcept { return theta_resolution_; }
    /// Bin index of rho == 0.
    int rho_offset() const noexcept { return rho_offset_; }

    double rho_of(int rho_index) const noexcept { return (rho_index - rho_offset_) * rho_resolution_; }
    double theta_of(int theta_index) const noexcept { return theta_index * theta_resolution_; }
    /// Nearest rho bin, ties away from zero.
    int rho_index(double rho) const noexcept;

    std::int32_t at(int rho_index, int theta_index) const {
        return cells_[static_cast<std::size_t>(rho_index) * theta_bins_ + theta_index];
    }
    std::int32_t& at(int rho_index, int theta_index) {
        return cells_[static_cast<std::size_t>(rho_index) * theta_bins_ + theta_index];
    }

    const std::vector<double>& cos_table() const noexcept { return cos_; }
    const std::vector<double>& sin_table() const noexcept { return sin_; }
    const std::vector<std::int32_t>& cells() const noexcept { return cells_; }
    std::vector<std::int32_t>& cells() noexcept { return cells_; }

    std::int64_t total_votes() const;
    std::int32_t max_cell() const;

    friend bool operator==(const HoughAccumulator&, const HoughAccumulator&) = default;

private:
    int rho_bins_ = 0;
    int theta_bins_ = 0;
    int rho_offset_ = 0;
    double rho_resolution_ = 1.0;
    double theta_resolution_ = 0.0;
    std::vector<double> cos_;
    std::vector<double> sin_;
    std::vector<std::int32_t> cells_;
};

HoughAccumulator accumulate_lines(const EdgeMap& edges, const HoughParams& p);

/// Local maxima of the accumulator with at least `threshold` votes. Ties
/// inside the window go to the lexicographically smallest (rho, theta) index.
/// Sorted by votes descending, then (rho index, theta index) ascending.
std::vector<PolarLine> find_peaks(const HoughAccumulator& acc, int threshold, int nms_window);

/// Traces edge pixels within rho_resolution of the line, ordered along it,
/// and cuts the run wherever consecutive pixels are more than max_gap apart.
std::vector<LineSegment> extract_segments(const EdgeMap& edges, const PolarLine& line, const HoughParams& p);

std::vector<LineSegment> detect_lines(const EdgeMap& edges, const HoughParams& p);

/// Gradient-directed circle Hough: each edge pixel votes for the centers at
/// +-r along its gradient, one 2-D accumulator per radius.
std::vector<Circle> detect_circles(const EdgeMap& edges, const GradientField& grad, const HoughParams& p);

/// Keeps circles whose ring passes over an ink component (intensity < 128,
/// 8-connected) at least as wide and tall as the circle, less 2 px. Glyphs
/// such as 'O' vote like small circles but are narrower than the circle they
/// suggest.
std::vector<Circle> confirm_circles(const RasterImage& img, const std::vector<Circle>& circles);

/// Accumulator as a heatmap (for --dump-stages).
RasterImage accumulator_to_raster(const HoughAccumulator& acc);

}  // namespace draftvec
