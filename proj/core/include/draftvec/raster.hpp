#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace draftvec {

/// 8-bit grayscale image, row-major, origin top-left with y pointing down.
class RasterImage {
public:
    RasterImage() = default;
    RasterImage(int width, int height, std::uint8_t fill = 0);
    RasterImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return pixels_.empty(); }

    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

    // Edge-clamp access: coordinates outside the image replicate the border.
    std::uint8_t clamped(int x, int y) const;

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<std::uint8_t> pixels() noexcept { return pixels_; }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// BT.601 luma with half-up rounding, in exact integer arithmetic.
constexpr std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

/// Decodes PNG, JPEG or PGM (P2/P5) into grayscale. Color inputs are
/// converted with `luminance`; alpha is composited over white.
RasterImage load_image(const std::filesystem::path& path);

/// Decodes an in-memory file image; format is sniffed from the magic bytes.
RasterImage decode_image(std::span<const std::uint8_t> bytes);

/// Writes a binary (P5) PGM with maxval 255.
void save_pgm(const RasterImage& img, const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG.
void save_png(const RasterImage& img, const std::filesystem::path& path);

}  // namespace draftvec
