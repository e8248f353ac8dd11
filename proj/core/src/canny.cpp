#include "draftvec/canny.hpp"

#include "draftvec/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace draftvec {

std::size_t EdgeMap::count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

void CannyParams::validate() const {
    if (!(sigma >= 0.0) || !(low_threshold >= 0.0) || !(low_threshold <= high_threshold)) {
        throw Error(ErrorCode::ConfigInvalid,
                    "canny parameters require sigma >= 0 and 0 <= low <= high");
    }
}

std::vector<double> gaussian_kernel(double sigma) {
    if (sigma <= 0.0) {
        return {1.0};
    }
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (double& v : k) {
        v /= sum;
    }
    return k;
}

RasterImage gaussian_blur(const RasterImage& img, double sigma, int workers) {
    if (sigma <= 0.0) {
        return img;
    }
    const auto kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    const int w = img.width();
    const int h = img.height();

    std::vector<double> horizontal(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    detail::parallel_rows(h, workers, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    acc += kernel[static_cast<std::size_t>(i + radius)] * img.clamped(x + i, y);
                }
                horizontal[static_cast<std::size_t>(y) * w + x] = acc;
            }
        }
    });

    RasterImage out(w, h);
    detail::parallel_rows(h, workers, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    const int yy = std::clamp(y + i, 0, h - 1);
                    acc += kernel[static_cast<std::size_t>(i + radius)] *
                           horizontal[static_cast<std::size_t>(yy) * w + x];
                }
                out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::floor(acc + 0.5), 0.0, 255.0));
            }
        }
    });
    return out;
}

GradientField sobel_gradients(const RasterImage& img, int workers) {
    const int w = img.width();
    const int h = img.height();
    if (w < 3 || h < 3) {
        throw Error(ErrorCode::ImageTooSmall, "sobel needs at least 3x3 pixels");
    }
    GradientField g(w, h);
    detail::parallel_rows(h, workers, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                const int tl = img.clamped(x - 1, y - 1);
                const int tc = img.clamped(x, y - 1);
                const int tr = img.clamped(x + 1, y - 1);
                const int ml = img.clamped(x - 1, y);
                const int mr = img.clamped(x + 1, y);
                const int bl = img.clamped(x - 1, y + 1);
                const int bc = img.clamped(x, y + 1);
                const int br = img.clamped(x + 1, y + 1);
                const int gx = (tr + 2 * mr + br) - (tl + 2 * ml + bl);
                const int gy = (bl + 2 * bc + br) - (tl + 2 * tc + tr);
                const auto i = g.index(x, y);
                if (gx == 0 && gy == 0) {
                    continue;
                }
                g.magnitude[i] = std::sqrt(static_cast<double>(gx) * gx + static_cast<double>(gy) * gy);
                double theta = std::atan2(static_cast<double>(gy), static_cast<double>(gx));
                if (theta < 0.0) {
                    theta += std::numbers::pi;
                }
                if (theta >= std::numbers::pi) {
                    theta -= std::numbers::pi;
                }
                g.direction[i] = theta;
            }
        }
    });
    return g;
}

int quantize_direction(double theta) {
    const double deg = theta * 180.0 / std::numbers::pi;
    if (deg < 22.5 || deg >= 157.5) {
        return 0;
    }
    if (deg < 67.5) {
        return 1;
    }
    if (deg < 112.5) {
        return 2;
    }
    return 3;
}

GradientField non_max_suppression(const GradientField& g) {
    // "Ahead" offsets per direction bin; "behind" is the negation.
    static constexpr int kAhead[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
    GradientField out(g.width, g.height);
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            const auto i = g.index(x, y);
            const double m = g.magnitude[i];
            if (m <= 0.0) {
                continue;
            }
            const int bin = quantize_direction(g.direction[i]);
            const int ax = x + kAhead[bin][0];
            const int ay = y + kAhead[bin][1];
            const int bx = x - kAhead[bin][0];
            const int by = y - kAhead[bin][1];
            const bool inside_ahead = ax >= 0 && ay >= 0 && ax < g.width && ay < g.height;
            const bool inside_behind = bx >= 0 && by >= 0 && bx < g.width && by < g.height;
            if (inside_ahead && !(m > g.mag(ax, ay))) {
                continue;
            }
            if (inside_behind && !(m >= g.mag(bx, by))) {
                continue;
            }
            out.magnitude[i] = m;
            out.direction[i] = g.direction[i];
        }
    }
    return out;
}

EdgeMap hysteresis_threshold(const GradientField& g, double low, double high) {
    EdgeMap edges(g.width, g.height);
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            if (g.mag(x, y) >= high && !edges.test(x, y)) {
                edges.set(x, y);
                stack.emplace_back(x, y);
            }
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if ((dx == 0 && dy == 0) || !edges.contains(nx, ny) || edges.test(nx, ny)) {
                            continue;
                        }
                        if (g.mag(nx, ny) >= low) {
                            edges.set(nx, ny);
                            stack.emplace_back(nx, ny);
                        }
                    }
                }
            }
        }
    }
    return edges;
}

CannyStages canny_stages(const RasterImage& img, const CannyParams& p, int workers) {
    p.validate();
    CannyStages s;
    s.blurred = gaussian_blur(img, p.sigma, workers);
    s.gradients = sobel_gradients(s.blurred, workers);
    s.suppressed = non_max_suppression(s.gradients);
    s.edges = hysteresis_threshold(s.suppressed, p.low_threshold, p.high_threshold);
    return s;
}

EdgeMap canny(const RasterImage& img, const CannyParams& p, int workers) {
    return canny_stages(img, p, workers).edges;
}

RasterImage magnitude_to_raster(const GradientField& g) {
    RasterImage out(g.width, g.height);
    const double peak = g.magnitude.empty()
                            ? 0.0
                            : *std::max_element(g.magnitude.begin(), g.magnitude.end());
    if (peak <= 0.0) {
        return out;
    }
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            out.at(x, y) = static_cast<std::uint8_t>(std::lround(255.0 * g.mag(x, y) / peak));
        }
    }
    return out;
}

RasterImage edges_to_raster(const EdgeMap& e) {
    RasterImage out(e.width, e.height);
    for (std::size_t i = 0; i < e.bits.size(); ++i) {
        out.pixels()[i] = e.bits[i] ? 255 : 0;
    }
    return out;
}

}  // namespace draftvec
