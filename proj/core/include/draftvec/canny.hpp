#pragma once

#include "draftvec/raster.hpp"

#include <cstdint>
#include <vector>

namespace draftvec {

/// Per-pixel gradient magnitude (raw Sobel L2) and orientation folded into [0, pi).
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> magnitude;
    std::vector<double> direction;

    GradientField() = default;
    GradientField(int w, int h)
        : width(w), height(h),
          magnitude(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0),
          direction(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0) {}

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
    }
    double mag(int x, int y) const { return magnitude[index(x, y)]; }
    double dir(int x, int y) const { return direction[index(x, y)]; }
};

/// Binary edge mask, one byte per pixel (0 or 1).
struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    EdgeMap() = default;
    EdgeMap(int w, int h)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
    }
    bool test(int x, int y) const { return bits[index(x, y)] != 0; }
    void set(int x, int y, bool on = true) { bits[index(x, y)] = on ? 1 : 0; }
    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width && y < height;
    }
    std::size_t count() const;

    friend bool operator==(const EdgeMap&, const EdgeMap&) = default;
};

struct CannyParams {
    double sigma = 1.4;           ///< 0 skips the blur stage
    double low_threshold = 50.0;  ///< on raw Sobel L2 magnitude
    double high_threshold = 150.0;

    void validate() const;
};

/// Separable Gaussian blur, radius ceil(3*sigma), edge-clamped borders,
/// rounded back to 8 bits. sigma == 0 returns the input unchanged.
RasterImage gaussian_blur(const RasterImage& img, double sigma, int workers = 1);

/// Normalized 1-D kernel of radius ceil(3*sigma); `{1.0}` for sigma == 0.
std::vector<double> gaussian_kernel(double sigma);

/// 3x3 Sobel with edge clamping. Throws ImageTooSmall below 3x3.
GradientField sobel_gradients(const RasterImage& img, int workers = 1);

/// Direction bin of an orientation in [0, pi): 0, 1, 2, 3 for 0/45/90/135 degrees.
int quantize_direction(double theta);

/// Thins ridges along the quantized gradient direction. A pixel survives when
/// its magnitude is >= the neighbor behind it and > the neighbor ahead of it
/// (ahead = +x for 0 deg, +x+y for 45, +y for 90, -x+y for 135). Neighbors
/// outside the image do not compete. Suppressed pixels get magnitude 0 and
/// direction 0.
GradientField non_max_suppression(const GradientField& g);

/// Strong pixels (>= high) seed an 8-connected flood over weak pixels
/// (low <= m < high).
EdgeMap hysteresis_threshold(const GradientField& g, double low, double high);

/// Intermediate products, kept for debug dumps.
struct CannyStages {
    RasterImage blurred;
    GradientField gradients;
    GradientField suppressed;
    EdgeMap edges;
};

CannyStages canny_stages(const RasterImage& img, const CannyParams& p, int workers = 1);

EdgeMap canny(const RasterImage& img, const CannyParams& p, int workers = 1);

/// Scales a magnitude field onto 0..255 for viewing.
RasterImage magnitude_to_raster(const GradientField& g);
RasterImage edges_to_raster(const EdgeMap& e);

}  // namespace draftvec
