#pragma once

#include "draftvec/entities.hpp"
#include "draftvec/raster.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace draftvec {

/// Portable seeded generator: mt19937_64 plus distributions implemented
/// here, since the standard library's distributions vary by vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi);
    /// Uniform real in [0, 1).
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct CountRange {
    int min = 0;
    int max = 0;
};

/// What to draw. Counts are drawn uniformly from each range.
struct GenSpec {
    int width = 800;
    int height = 600;
    CountRange circles;
    CountRange lines;
    CountRange lights;
    CountRange dimlines;
    CountRange texts;
    int radius_min = 8;
    int radius_max = 40;
    int line_min_length = 30;
    int line_max_length = 200;
    int light_min_size = 14;
    int light_max_size = 24;
    int dimline_min_length = 30;
    int dimline_max_length = 120;
    int text_scale = 2;
    int text_min_chars = 3;
    int text_max_chars = 10;
    double noise_sigma = 0.0;
};

GenSpec parse_gen_spec(const std::string& json_text);

struct GroundTruth {
    DrawingEntitySet entities;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const std::string& json_text);

/// Samples non-overlapping entities (circle perimeters and boxes at least
/// 5 px apart; segments may cross anything) and renders them. Throws
/// SpecInfeasible when placement needs more than 10,000 attempts.
std::pair<RasterImage, GroundTruth> generate(const GenSpec& spec, std::uint64_t seed);

/// Deterministic rendering of a ground truth: black strokes on white, then
/// Gaussian noise seeded from truth.seed.
RasterImage render(const GroundTruth& truth);

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;

/// Rows of a 5x7 glyph, bit 4 = leftmost column. Lowercase maps to
/// uppercase; unknown characters render as '?'.
const std::uint8_t* glyph_rows(char c);

/// Pixel box of a string drawn at (x, y): advance 6*scale per character.
DetectionBox text_box(const std::string& text, int x, int y, int scale);

void draw_segment(RasterImage& img, int x1, int y1, int x2, int y2, std::uint8_t ink = 0);
/// Midpoint circle thickened one pixel inward (2 px stroke).
void draw_circle(RasterImage& img, int cx, int cy, int r, std::uint8_t ink = 0);
/// Rectangle outline with a 3 px border; (x2, y2) exclusive.
void draw_light(RasterImage& img, const DetectionBox& box, std::uint8_t ink = 0);
/// Main line along the long axis of the box with end ticks across it.
void draw_dimline(RasterImage& img, const DetectionBox& box, std::uint8_t ink = 0);
void draw_text(RasterImage& img, const std::string& text, int x, int y, int scale, std::uint8_t ink = 0);

/// The packaged demo drawing: 3 circles, 8 lights, 20 dimension lines and 18
/// text regions, with detector sidecars that report all 8 lights, 16 of the
/// dimension lines and 17 text boxes, and OCR answers with one wrong
/// character in every 14.
struct DemoScene {
    GroundTruth truth;
    std::vector<DetectionBox> light_detections;
    std::vector<DetectionBox> dimline_detections;
    std::vector<DetectionBox> text_detections;
    std::map<std::size_t, std::string> ocr_answers;
};

DemoScene make_demo_scene();

/// Writes image.png, truth.json, lights.txt, dimlines.txt, text.txt,
/// ocr_fixture.json and config.json (paths relative to `dir`).
void write_demo_scene(const DemoScene& scene, const std::filesystem::path& dir);

}  // namespace draftvec
