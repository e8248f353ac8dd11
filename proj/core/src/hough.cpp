#include "draftvec/hough.hpp"

#include "draftvec/detection.hpp"
#include "draftvec/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace draftvec {

double LineSegment::length() const {
    return std::hypot(static_cast<double>(x2 - x1), static_cast<double>(y2 - y1));
}

void HoughParams::validate() const {
    const bool ok = rho_resolution > 0.0 && theta_resolution > 0.0 && theta_resolution < std::numbers::pi &&
                    (!line_peak_threshold || *line_peak_threshold > 0) && nms_window >= 1 &&
                    nms_window % 2 == 1 && max_gap >= 0 && min_length >= 0 && r_min >= 3 && r_min <= r_max &&
                    circle_peak_threshold > 0.0 && circle_peak_threshold <= 1.0 && workers >= 1;
    if (!ok) {
        throw Error(ErrorCode::ConfigInvalid, "hough parameters out of range");
    }
}

HoughAccumulator::HoughAccumulator(int image_width, int image_height, double rho_resolution,
                                   double theta_resolution)
    : rho_resolution_(rho_resolution), theta_resolution_(theta_resolution) {
    theta_bins_ = std::max(1, static_cast<int>(std::lround(std::numbers::pi / theta_resolution)));
    const double diagonal = std::hypot(static_cast<double>(image_width), static_cast<double>(image_height));
    rho_offset_ = static_cast<int>(std::ceil(diagonal / rho_resolution));
    rho_bins_ = 2 * rho_offset_ + 1;
    cos_.resize(static_cast<std::size_t>(theta_bins_));
    sin_.resize(static_cast<std::size_t>(theta_bins_));
    for (int t = 0; t < theta_bins_; ++t) {
        cos_[static_cast<std::size_t>(t)] = std::cos(theta_of(t));
        sin_[static_cast<std::size_t>(t)] = std::sin(theta_of(t));
    }
    cells_.assign(static_cast<std::size_t>(rho_bins_) * static_cast<std::size_t>(theta_bins_), 0);
}

int HoughAccumulator::rho_index(double rho) const noexcept {
    return static_cast<int>(std::lround(rho / rho_resolution_)) + rho_offset_;
}

std::int64_t HoughAccumulator::total_votes() const {
    return std::accumulate(cells_.begin(), cells_.end(), std::int64_t{0});
}

std::int32_t HoughAccumulator::max_cell() const {
    return cells_.empty() ? 0 : *std::max_element(cells_.begin(), cells_.end());
}

namespace {

struct Pixel {
    int x;
    int y;
};

std::vector<Pixel> edge_pixels(const EdgeMap& edges) {
    std::vector<Pixel> out;
    for (int y = 0; y < edges.height; ++y) {
        for (int x = 0; x < edges.width; ++x) {
            if (edges.test(x, y)) {
                out.push_back({x, y});
            }
        }
    }
    return out;
}

HoughAccumulator vote_lines(const EdgeMap& edges, const std::vector<Pixel>& pixels, const HoughParams& p) {
    HoughAccumulator acc(edges.width, edges.height, p.rho_resolution, p.theta_resolution);
    const int n = static_cast<int>(pixels.size());
    const int workers = std::clamp(p.workers, 1, std::max(1, n));
    std::vector<std::vector<std::int32_t>> partial(static_cast<std::size_t>(workers));
    const int chunk = (n + workers - 1) / std::max(1, workers);
    detail::parallel_rows(workers, workers, [&](int w0, int w1) {
        for (int w = w0; w < w1; ++w) {
            auto& cells = partial[static_cast<std::size_t>(w)];
            cells.assign(acc.cells().size(), 0);
            const int begin = w * chunk;
            const int end = std::min(n, begin + chunk);
            for (int i = begin; i < end; ++i) {
                const auto [x, y] = pixels[static_cast<std::size_t>(i)];
                for (int t = 0; t < acc.theta_bins(); ++t) {
                    const double rho = x * acc.cos_table()[static_cast<std::size_t>(t)] +
                                       y * acc.sin_table()[static_cast<std::size_t>(t)];
                    const int r = acc.rho_index(rho);
                    ++cells[static_cast<std::size_t>(r) * acc.theta_bins() + t];
                }
            }
        }
    });
    for (const auto& cells : partial) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            acc.cells()[i] += cells[i];
        }
    }
    return acc;
}

std::vector<LineSegment> trace_segments(const std::vector<Pixel>& pixels, const PolarLine& line,
                                        const HoughParams& p) {
    const double c = std::cos(line.theta);
    const double s = std::sin(line.theta);
    struct Hit {
        double t;
        int x;
        int y;
    };
    std::vector<Hit> hits;
    for (const auto [x, y] : pixels) {
        const double distance = x * c + y * s - line.rho;
        if (std::abs(distance) <= p.rho_resolution) {
            hits.push_back({-x * s + y * c, x, y});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return std::tie(a.t, a.y, a.x) < std::tie(b.t, b.y, b.x);
    });

    std::vector<LineSegment> out;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= hits.size(); ++i) {
        if (i < hits.size() && hits[i].t - hits[i - 1].t <= p.max_gap) {
            continue;
        }
        if (i > start) {
            LineSegment seg{hits[start].x, hits[start].y, hits[i - 1].x, hits[i - 1].y, line};
            if (seg.length() >= p.min_length) {
                out.push_back(seg);
            }
        }
        start = i;
    }
    return out;
}

bool near(int ax, int ay, int bx, int by, double tol) {
    return std::hypot(static_cast<double>(ax - bx), static_cast<double>(ay - by)) <= tol;
}

bool duplicates(const LineSegment& a, const LineSegment& b) {
    constexpr double kTol = 2.0;
    return (near(a.x1, a.y1, b.x1, b.y1, kTol) && near(a.x2, a.y2, b.x2, b.y2, kTol)) ||
           (near(a.x1, a.y1, b.x2, b.y2, kTol) && near(a.x2, a.y2, b.x1, b.y1, kTol));
}

}  // namespace

HoughAccumulator accumulate_lines(const EdgeMap& edges, const HoughParams& p) {
    p.validate();
    return vote_lines(edges, edge_pixels(edges), p);
}

std::vector<PolarLine> find_peaks(const HoughAccumulator& acc, int threshold, int nms_window) {
    threshold = std::max(threshold, 1);
    const int half = std::max(0, nms_window / 2);
    std::vector<PolarLine> peaks;
    for (int r = 0; r < acc.rho_bins(); ++r) {
        for (int t = 0; t < acc.theta_bins(); ++t) {
            const auto v = acc.at(r, t);
            if (v < threshold) {
                continue;
            }
            bool is_peak = true;
            for (int dr = -half; dr <= half && is_peak; ++dr) {
                for (int dt = -half; dt <= half; ++dt) {
                    const int nr = r + dr;
                    const int nt = t + dt;
                    if ((dr == 0 && dt == 0) || nr < 0 || nt < 0 || nr >= acc.rho_bins() || nt >= acc.theta_bins()) {
                        continue;
                    }
                    const auto nv = acc.at(nr, nt);
                    // A tied neighbor earlier in (rho, theta) order owns the peak.
                    if (nv > v || (nv == v && std::pair(nr, nt) < std::pair(r, t))) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (is_peak) {
                peaks.push_back({acc.rho_of(r), acc.theta_of(t), v, r, t});
            }
        }
    }
    std::sort(peaks.begin(), peaks.end(), [](const PolarLine& a, const PolarLine& b) {
        return std::tuple(-a.votes, a.rho_index, a.theta_index) < std::tuple(-b.votes, b.rho_index, b.theta_index);
    });
    return peaks;
}

std::vector<LineSegment> extract_segments(const EdgeMap& edges, const PolarLine& line, const HoughParams& p) {
    return trace_segments(edge_pixels(edges), line, p);
}

std::vector<LineSegment> detect_lines(const EdgeMap& edges, const HoughParams& p) {
    p.validate();
    const auto pixels = edge_pixels(edges);
    if (pixels.empty()) {
        return {};
    }
    const auto acc = vote_lines(edges, pixels, p);
    const int threshold = p.line_peak_threshold.value_or(
        std::max(30, static_cast<int>(std::ceil(0.3 * acc.max_cell()))));
    std::vector<LineSegment> out;
    for (const auto& peak : find_peaks(acc, threshold, p.nms_window)) {
        for (const auto& seg : trace_segments(pixels, peak, p)) {
            const bool seen = std::any_of(out.begin(), out.end(),
                                          [&](const LineSegment& kept) { return duplicates(kept, seg); });
            if (!seen) {
                out.push_back(seg);
            }
        }
    }
    return out;
}

constexpr double kRingBand = 3.0;
constexpr double kRadialCosine = 0.9;

std::vector<Circle> detect_circles(const EdgeMap& edges, const GradientField& grad, const HoughParams& p) {
    p.validate();
    if (grad.width != edges.width || grad.height != edges.height) {
        throw std::invalid_argument("detect_circles: gradient and edge map sizes differ");
    }
    struct Voter {
        int x;
        int y;
        double c;
        double s;
    };
    std::vector<Voter> voters;
    for (const auto [x, y] : edge_pixels(edges)) {
        const double d = grad.dir(x, y);
        voters.push_back({x, y, std::cos(d), std::sin(d)});
    }
    if (voters.empty()) {
        return {};
    }

    const int w = edges.width;
    const int h = edges.height;
    const int radii = p.r_max - p.r_min + 1;
    std::vector<std::vector<Circle>> per_radius(static_cast<std::size_t>(radii));
    detail::parallel_rows(radii, p.workers, [&](int i0, int i1) {
        std::vector<std::int32_t> acc(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
        std::vector<std::int32_t> block(acc.size());
        for (int i = i0; i < i1; ++i) {
            const int r = p.r_min + i;
            std::fill(acc.begin(), acc.end(), 0);
            for (const auto& v : voters) {
                for (const int sign : {1, -1}) {
                    const int cx = v.x + static_cast<int>(std::lround(sign * r * v.c));
                    const int cy = v.y + static_cast<int>(std::lround(sign * r * v.s));
                    if (cx >= 0 && cy >= 0 && cx < w && cy < h) {
                        ++acc[static_cast<std::size_t>(cy) * w + cx];
                    }
                }
            }
            // Centers land within a pixel of each other once positions are
            // rounded, so a candidate scores the 3x3 block around it.
            for (int cy = 0; cy < h; ++cy) {
                auto* row = &acc[static_cast<std::size_t>(cy) * w];
                std::int32_t prev = 0;
                for (int cx = 0; cx < w; ++cx) {
                    const auto cur = row[cx];
                    row[cx] = prev + cur + (cx + 1 < w ? row[cx + 1] : 0);
                    prev = cur;
                }
            }
            std::copy(acc.begin(), acc.end(), block.begin());
            for (int cy = 0; cy < h; ++cy) {
                for (int cx = 0; cx < w; ++cx) {
                    const auto idx = static_cast<std::size_t>(cy) * w + cx;
                    block[idx] = acc[idx] + (cy > 0 ? acc[idx - w] : 0) + (cy + 1 < h ? acc[idx + w] : 0);
                }
            }
            const double needed = p.circle_peak_threshold * std::round(2.0 * std::numbers::pi * r);
            auto& found = per_radius[static_cast<std::size_t>(i)];
            for (int cy = 0; cy < h; ++cy) {
                for (int cx = 0; cx < w; ++cx) {
                    const auto votes = block[static_cast<std::size_t>(cy) * w + cx];
                    if (votes > 0 && votes >= needed) {
                        found.push_back({cx, cy, r, votes});
                    }
                }
            }
        }
    });

    std::vector<Circle> candidates;
    for (auto& found : per_radius) {
        candidates.insert(candidates.end(), found.begin(), found.end());
    }
    std::sort(candidates.begin(), candidates.end(), [](const Circle& a, const Circle& b) {
        return std::tuple(-a.votes, a.cy, a.cx, a.radius) < std::tuple(-b.votes, b.cy, b.cx, b.radius);
    });
    std::vector<Circle> accepted;
    for (const auto& c : candidates) {
        const bool suppressed = std::any_of(accepted.begin(), accepted.end(), [&](const Circle& k) {
            return std::hypot(static_cast<double>(c.cx - k.cx), static_cast<double>(c.cy - k.cy)) <= p.r_min;
        });
        if (!suppressed) {
            accepted.push_back(c);
        }
    }
    // A stroked circle leaves two concentric edge rings; report the radius
    // midway between them rather than whichever ring won the vote.
    for (auto& c : accepted) {
        double sum = 0.0;
        int n = 0;
        for (const auto& v : voters) {
            const double dx = v.x - c.cx;
            const double dy = v.y - c.cy;
            const double dist = std::hypot(dx, dy);
            if (dist < 1.0 || std::abs(dist - c.radius) > kRingBand) {
                continue;
            }
            if (std::abs(dx * v.c + dy * v.s) / dist < kRadialCosine) {
                continue;
            }
            sum += dist;
            ++n;
        }
        if (n > 0) {
            c.radius = std::clamp(static_cast<int>(std::lround(sum / n)), p.r_min, p.r_max);
        }
    }
    return accepted;
}

namespace {

constexpr int kRingRays = 72;

bool ink_at(const RasterImage& img, double x, double y) {
    const int ix = static_cast<int>(std::lround(x));
    const int iy = static_cast<int>(std::lround(y));
    return img.contains(ix, iy) && img.at(ix, iy) < kInkThreshold;
}

// Most rays from the center must meet their first ink on the ring and find
// white just beyond it; solid shapes such as a thick-bordered box fail.
bool ring_is_hollow(const RasterImage& img, const Circle& c) {
    int on_ring = 0;
    int beyond = 0;
    for (int k = 0; k < kRingRays; ++k) {
        const double a = 2.0 * std::numbers::pi * k / kRingRays;
        const double ux = std::cos(a);
        const double uy = std::sin(a);
        double first = -1.0;
        for (double d = 1.0; d <= c.radius + 1.0; d += 0.5) {
            if (ink_at(img, c.cx + d * ux, c.cy + d * uy)) {
                first = d;
                break;
            }
        }
        on_ring += first >= c.radius - 3.0 ? 1 : 0;
        if (ink_at(img, c.cx + (c.radius + 3.0) * ux, c.cy + (c.radius + 3.0) * uy) ||
            ink_at(img, c.cx + (c.radius + 4.0) * ux, c.cy + (c.radius + 4.0) * uy)) {
            ++beyond;
        }
    }
    return on_ring * 4 >= kRingRays * 3 && beyond * 4 <= kRingRays;
}

}  // namespace

std::vector<Circle> confirm_circles(const RasterImage& img, const std::vector<Circle>& circles) {
    if (circles.empty()) {
        return {};
    }
    const int w = img.width();
    const int h = img.height();
    constexpr std::int32_t kUnlabelled = -1;
    std::vector<std::int32_t> label(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), kUnlabelled);
    struct Span {
        int x1, y1, x2, y2;
    };
    std::vector<Span> spans;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto idx = static_cast<std::size_t>(y) * w + x;
            if (img.at(x, y) >= kInkThreshold || label[idx] != kUnlabelled) {
                continue;
            }
            const auto id = static_cast<std::int32_t>(spans.size());
            Span span{x, y, x, y};
            label[idx] = id;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const auto [px, py] = stack.back();
                stack.pop_back();
                span = {std::min(span.x1, px), std::min(span.y1, py), std::max(span.x2, px), std::max(span.y2, py)};
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = px + dx;
                        const int ny = py + dy;
                        if (!img.contains(nx, ny) || img.at(nx, ny) >= kInkThreshold) {
                            continue;
                        }
                        auto& l = label[static_cast<std::size_t>(ny) * w + nx];
                        if (l == kUnlabelled) {
                            l = id;
                            stack.push_back({nx, ny});
                        }
                    }
                }
            }
            spans.push_back(span);
        }
    }

    std::vector<Circle> kept;
    for (const auto& c : circles) {
        const int need = 2 * c.radius - 1;
        bool supported = false;
        const int reach = c.radius + 2;
        for (int y = c.cy - reach; y <= c.cy + reach && !supported; ++y) {
            for (int x = c.cx - reach; x <= c.cx + reach; ++x) {
                if (!img.contains(x, y)) {
                    continue;
                }
                const double d = std::hypot(static_cast<double>(x - c.cx), static_cast<double>(y - c.cy));
                const auto l = label[static_cast<std::size_t>(y) * w + x];
                if (l == kUnlabelled || std::abs(d - c.radius) > 2.0) {
                    continue;
                }
                const auto& s = spans[static_cast<std::size_t>(l)];
                if (s.x2 - s.x1 + 1 >= need && s.y2 - s.y1 + 1 >= need) {
                    supported = true;
                    break;
                }
            }
        }
        if (supported && ring_is_hollow(img, c)) {
            kept.push_back(c);
        }
    }
    return kept;
}

RasterImage accumulator_to_raster(const HoughAccumulator& acc) {
    RasterImage out(acc.theta_bins(), acc.rho_bins());
    const double peak = acc.max_cell();
    if (peak <= 0) {
        return out;
    }
    for (int r = 0; r < acc.rho_bins(); ++r) {
        for (int t = 0; t < acc.theta_bins(); ++t) {
            out.at(t, r) = static_cast<std::uint8_t>(std::lround(255.0 * acc.at(r, t) / peak));
        }
    }
    return out;
}

}  // namespace draftvec
