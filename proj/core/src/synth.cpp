#include "draftvec/synth.hpp"

#include "draftvec/error.hpp"
#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

namespace draftvec {

int Rng::uniform_int(int lo, int hi) {
    if (hi <= lo) {
        return lo;
    }
    const std::uint64_t span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v = 0;
    do {
        v = next();
    } while (v >= limit);
    return static_cast<int>(static_cast<std::int64_t>(lo) + static_cast<std::int64_t>(v % span));
}

double Rng::uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

// clang-format off
constexpr std::uint8_t kFont[][8] = {
    // char, 7 rows
    {'0', 0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110},
    {'1', 0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110},
    {'2', 0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111},
    {'3', 0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110},
    {'4', 0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010},
    {'5', 0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110},
    {'6', 0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110},
    {'7', 0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000},
    {'8', 0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110},
    {'9', 0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100},
    {'A', 0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001},
    {'B', 0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110},
    {'C', 0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110},
    {'D', 0b11100, 0b10010, 0b10001, 0b10001, 0b10001, 0b10010, 0b11100},
    {'E', 0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111},
    {'F', 0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000},
    {'G', 0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01111},
    {'H', 0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001},
    {'I', 0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110},
    {'J', 0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100},
    {'K', 0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001},
    {'L', 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111},
    {'M', 0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001},
    {'N', 0b10001, 0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001},
    {'O', 0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110},
    {'P', 0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000},
    {'Q', 0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101},
    {'R', 0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001},
    {'S', 0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110},
    {'T', 0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100},
    {'U', 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110},
    {'V', 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100},
    {'W', 0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b10101, 0b01010},
    {'X', 0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001},
    {'Y', 0b10001, 0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100},
    {'Z', 0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111},
    {'-', 0b00000, 0b00000, 0b00000, 0b11111, 0b00000, 0b00000, 0b00000},
    {'.', 0b00000, 0b00000, 0b00000, 0b00000, 0b00000, 0b01100, 0b01100},
    {'/', 0b00000, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b00000},
    {':', 0b00000, 0b01100, 0b01100, 0b00000, 0b01100, 0b01100, 0b00000},
    {'=', 0b00000, 0b00000, 0b11111, 0b00000, 0b11111, 0b00000, 0b00000},
    {' ', 0b00000, 0b00000, 0b00000, 0b00000, 0b00000, 0b00000, 0b00000},
    {'?', 0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b00000, 0b00100},
};
// clang-format on

constexpr char kTextAlphabet[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
constexpr const char* kLightLabels[] = {"PL", "CS", "CL", "DL"};
constexpr int kSeparation = 5;
constexpr int kCanvasMargin = 8;
constexpr int kMaxAttempts = 10'000;
constexpr int kDimlineTick = 3;
constexpr std::uint64_t kNoiseStream = 0x9E3779B97F4A7C15ULL;

void put(RasterImage& img, int x, int y, std::uint8_t ink) {
    if (img.contains(x, y)) {
        img.at(x, y) = ink;
    }
}

}  // namespace

const std::uint8_t* glyph_rows(char c) {
    if (c >= 'a' && c <= 'z') {
        c = static_cast<char>(c - 'a' + 'A');
    }
    for (const auto& g : kFont) {
        if (g[0] == static_cast<std::uint8_t>(c)) {
            return &g[1];
        }
    }
    return glyph_rows('?');
}

DetectionBox text_box(const std::string& text, int x, int y, int scale) {
    const int n = static_cast<int>(text.size());
    const int w = n == 0 ? 0 : ((kGlyphWidth + 1) * n - 1) * scale;
    return {"text", x, y, x + w, y + kGlyphHeight * scale, 1.0};
}

void draw_segment(RasterImage& img, int x1, int y1, int x2, int y2, std::uint8_t ink) {
    const int dx = std::abs(x2 - x1);
    const int dy = -std::abs(y2 - y1);
    const int sx = x1 < x2 ? 1 : -1;
    const int sy = y1 < y2 ? 1 : -1;
    int err = dx + dy;
    for (int x = x1, y = y1;;) {
        put(img, x, y, ink);
        if (x == x2 && y == y2) {
            break;
        }
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

void draw_circle(RasterImage& img, int cx, int cy, int r, std::uint8_t ink) {
    const auto plot = [&](int px, int py) {
        const int sx = (px > 0) - (px < 0);
        const int sy = (py > 0) - (py < 0);
        put(img, cx + px, cy + py, ink);
        put(img, cx + px - sx, cy + py, ink);
        put(img, cx + px, cy + py - sy, ink);
    };
    int x = 0;
    int y = r;
    int d = 1 - r;
    while (x <= y) {
        for (const auto& [px, py] : {std::pair{x, y}, {y, x}}) {
            plot(px, py);
            plot(-px, py);
            plot(px, -py);
            plot(-px, -py);
        }
        if (d < 0) {
            d += 2 * x + 3;
        } else {
            d += 2 * (x - y) + 5;
            --y;
        }
        ++x;
    }
}

void draw_light(RasterImage& img, const DetectionBox& b, std::uint8_t ink) {
    constexpr int kBorder = 3;
    for (int y = b.y1; y < b.y2; ++y) {
        for (int x = b.x1; x < b.x2; ++x) {
            if (x < b.x1 + kBorder || x >= b.x2 - kBorder || y < b.y1 + kBorder || y >= b.y2 - kBorder) {
                put(img, x, y, ink);
            }
        }
    }
}

void draw_dimline(RasterImage& img, const DetectionBox& b, std::uint8_t ink) {
    if (b.width() >= b.height()) {
        const int y = (b.y1 + b.y2 - 1) / 2;
        draw_segment(img, b.x1, y, b.x2 - 1, y, ink);
        draw_segment(img, b.x1, b.y1, b.x1, b.y2 - 1, ink);
        draw_segment(img, b.x2 - 1, b.y1, b.x2 - 1, b.y2 - 1, ink);
    } else {
        const int x = (b.x1 + b.x2 - 1) / 2;
        draw_segment(img, x, b.y1, x, b.y2 - 1, ink);
        draw_segment(img, b.x1, b.y1, b.x2 - 1, b.y1, ink);
        draw_segment(img, b.x1, b.y2 - 1, b.x2 - 1, b.y2 - 1, ink);
    }
}

void draw_text(RasterImage& img, const std::string& text, int x, int y, int scale, std::uint8_t ink) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto* rows = glyph_rows(text[i]);
        const int ox = x + static_cast<int>(i) * (kGlyphWidth + 1) * scale;
        for (int row = 0; row < kGlyphHeight; ++row) {
            for (int col = 0; col < kGlyphWidth; ++col) {
                if ((rows[row] >> (kGlyphWidth - 1 - col)) & 1) {
                    for (int dy = 0; dy < scale; ++dy) {
                        for (int dx = 0; dx < scale; ++dx) {
                            put(img, ox + col * scale + dx, y + row * scale + dy, ink);
                        }
                    }
                }
            }
        }
    }
}

RasterImage render(const GroundTruth& truth) {
    const auto& e = truth.entities;
    RasterImage img(e.image_width, e.image_height, 255);
    for (const auto& l : e.lines) {
        draw_segment(img, l.x1, l.y1, l.x2, l.y2);
    }
    for (const auto& c : e.circles) {
        draw_circle(img, c.cx, c.cy, c.radius);
    }
    for (const auto& b : e.dimension_lines) {
        draw_dimline(img, b);
    }
    for (const auto& b : e.lights) {
        draw_light(img, b);
    }
    // Text boxes are laid out at a scale recoverable from their height.
    for (const auto& t : e.texts) {
        const int scale = std::max(1, t.box.height() / kGlyphHeight);
        draw_text(img, t.text, t.box.x1, t.box.y1, scale);
    }
    if (truth.noise_sigma > 0.0) {
        Rng rng(truth.seed ^ kNoiseStream);
        for (auto& px : img.pixels()) {
            const double v = px + truth.noise_sigma * rng.normal();
            px = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
        }
    }
    return img;
}

namespace {

struct Footprint {
    bool is_circle = false;
    int cx = 0;
    int cy = 0;
    int r = 0;
    DetectionBox box;
};

Footprint circle_footprint(int cx, int cy, int r) {
    return {true, cx, cy, r, {"", cx - r - 1, cy - r - 1, cx + r + 2, cy + r + 2, 1.0}};
}

Footprint box_footprint(const DetectionBox& b) {
    return {false, 0, 0, 0, b};
}

bool clear_of(const Footprint& a, const Footprint& b) {
    if (a.is_circle && b.is_circle) {
        return std::hypot(static_cast<double>(a.cx - b.cx), static_cast<double>(a.cy - b.cy)) >=
               a.r + b.r + kSeparation;
    }
    return a.box.x2 + kSeparation <= b.box.x1 || b.box.x2 + kSeparation <= a.box.x1 ||
           a.box.y2 + kSeparation <= b.box.y1 || b.box.y2 + kSeparation <= a.box.y1;
}

class Placer {
public:
    Placer(const GenSpec& spec, Rng& rng) : spec_(spec), rng_(rng) {}

    template <typename Propose>
    Footprint place(Propose&& propose) {
        for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
            auto candidate = propose();
            if (!candidate) {
                continue;
            }
            const bool ok = std::all_of(placed_.begin(), placed_.end(),
                                        [&](const Footprint& f) { return clear_of(f, *candidate); });
            if (ok) {
                placed_.push_back(*candidate);
                return *candidate;
            }
        }
        throw Error(ErrorCode::SpecInfeasible, "could not place entity within 10000 attempts");
    }

    // Top-left corner for a w x h box, or nullopt when it cannot fit.
    std::optional<std::pair<int, int>> corner(int w, int h) {
        const int max_x = spec_.width - kCanvasMargin - w;
        const int max_y = spec_.height - kCanvasMargin - h;
        if (max_x < kCanvasMargin || max_y < kCanvasMargin) {
            return std::nullopt;
        }
        return std::pair{rng_.uniform_int(kCanvasMargin, max_x), rng_.uniform_int(kCanvasMargin, max_y)};
    }

private:
    const GenSpec& spec_;
    Rng& rng_;
    std::vector<Footprint> placed_;
};

int draw_count(Rng& rng, const CountRange& r) {
    return rng.uniform_int(r.min, std::max(r.min, r.max));
}

void validate(const GenSpec& s) {
    const bool ok = s.width >= 16 && s.height >= 16 && s.radius_min >= 3 && s.radius_min <= s.radius_max &&
                    s.line_min_length >= 1 && s.line_min_length <= s.line_max_length && s.light_min_size >= 7 &&
                    s.light_min_size <= s.light_max_size && s.dimline_min_length >= 3 &&
                    s.dimline_min_length <= s.dimline_max_length && s.text_scale >= 1 && s.text_min_chars >= 1 &&
                    s.text_min_chars <= s.text_max_chars && s.noise_sigma >= 0.0;
    for (const auto* r : {&s.circles, &s.lines, &s.lights, &s.dimlines, &s.texts}) {
        if (r->min < 0 || r->max < r->min) {
            throw Error(ErrorCode::SpecInfeasible, "entity count ranges need 0 <= min <= max");
        }
    }
    if (!ok) {
        throw Error(ErrorCode::SpecInfeasible, "generator parameters out of range");
    }
}

}  // namespace

std::pair<RasterImage, GroundTruth> generate(const GenSpec& spec, std::uint64_t seed) {
    validate(spec);
    Rng rng(seed);
    GroundTruth truth;
    truth.seed = seed;
    truth.noise_sigma = spec.noise_sigma;
    auto& e = truth.entities;
    e.image_width = spec.width;
    e.image_height = spec.height;
    e.source = "synthetic:" + std::to_string(seed);

    const int n_circles = draw_count(rng, spec.circles);
    const int n_lights = draw_count(rng, spec.lights);
    const int n_dimlines = draw_count(rng, spec.dimlines);
    const int n_texts = draw_count(rng, spec.texts);
    const int n_lines = draw_count(rng, spec.lines);

    Placer placer(spec, rng);
    for (int i = 0; i < n_circles; ++i) {
        const auto f = placer.place([&]() -> std::optional<Footprint> {
            const int r = rng.uniform_int(spec.radius_min, spec.radius_max);
            const int lo = kCanvasMargin + r;
            if (spec.width - 1 - lo < lo || spec.height - 1 - lo < lo) {
                return std::nullopt;
            }
            return circle_footprint(rng.uniform_int(lo, spec.width - 1 - lo),
                                    rng.uniform_int(lo, spec.height - 1 - lo), r);
        });
        e.circles.push_back({f.cx, f.cy, f.r, 0});
    }
    for (int i = 0; i < n_lights; ++i) {
        const auto f = placer.place([&]() -> std::optional<Footprint> {
            const int w = rng.uniform_int(spec.light_min_size, spec.light_max_size);
            const int h = rng.uniform_int(spec.light_min_size, spec.light_max_size);
            const auto label = kLightLabels[rng.uniform_int(0, 3)];
            const auto c = placer.corner(w, h);
            if (!c) {
                return std::nullopt;
            }
            return box_footprint({label, c->first, c->second, c->first + w, c->second + h, 1.0});
        });
        e.lights.push_back(f.box);
    }
    for (int i = 0; i < n_dimlines; ++i) {
        const auto f = placer.place([&]() -> std::optional<Footprint> {
            const int len = rng.uniform_int(spec.dimline_min_length, spec.dimline_max_length);
            const bool horizontal = rng.uniform_int(0, 1) == 0;
            const int thick = 2 * kDimlineTick + 1;
            const int w = horizontal ? len : thick;
            const int h = horizontal ? thick : len;
            const auto c = placer.corner(w, h);
            if (!c) {
                return std::nullopt;
            }
            return box_footprint({"dimline", c->first, c->second, c->first + w, c->second + h, 1.0});
        });
        e.dimension_lines.push_back(f.box);
    }
    for (int i = 0; i < n_texts; ++i) {
        std::string text;
        const auto f = placer.place([&]() -> std::optional<Footprint> {
            const int n = rng.uniform_int(spec.text_min_chars, spec.text_max_chars);
            text.clear();
            for (int k = 0; k < n; ++k) {
                text += kTextAlphabet[rng.uniform_int(0, static_cast<int>(sizeof kTextAlphabet) - 2)];
            }
            const auto probe = text_box(text, 0, 0, spec.text_scale);
            const auto c = placer.corner(probe.width(), probe.height());
            if (!c) {
                return std::nullopt;
            }
            return box_footprint(text_box(text, c->first, c->second, spec.text_scale));
        });
        e.texts.push_back({f.box, text, 1.0});
    }
    for (int i = 0; i < n_lines; ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt >= kMaxAttempts) {
                throw Error(ErrorCode::SpecInfeasible, "could not place segment within 10000 attempts");
            }
            const int x1 = rng.uniform_int(kCanvasMargin, spec.width - 1 - kCanvasMargin);
            const int y1 = rng.uniform_int(kCanvasMargin, spec.height - 1 - kCanvasMargin);
            const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double len = rng.uniform(spec.line_min_length, spec.line_max_length);
            const int x2 = static_cast<int>(std::lround(x1 + len * std::cos(angle)));
            const int y2 = static_cast<int>(std::lround(y1 + len * std::sin(angle)));
            LineSegment seg{x1, y1, x2, y2, {}};
            const bool inside = x2 >= kCanvasMargin && y2 >= kCanvasMargin && x2 <= spec.width - 1 - kCanvasMargin &&
                                y2 <= spec.height - 1 - kCanvasMargin;
            if (inside && seg.length() >= spec.line_min_length) {
                e.lines.push_back(seg);
                break;
            }
        }
    }
    return {render(truth), std::move(truth)};
}

GenSpec parse_gen_spec(const std::string& json_text) {
    GenSpec spec;
    try {
        const auto doc = nlohmann::ordered_json::parse(json_text);
        static const std::set<std::string> kKeys = {
            "circles",         "lines",           "lights",         "dimlines",           "texts",
            "width",           "height",          "radius_min",     "radius_max",         "line_min_length",
            "line_max_length", "light_min_size",  "light_max_size", "dimline_min_length", "dimline_max_length",
            "text_scale",      "text_min_chars",  "text_max_chars", "noise_sigma"};
        if (!doc.is_object()) {
            throw Error(ErrorCode::ParseError, "generator spec must be a JSON object");
        }
        for (const auto& [key, _] : doc.items()) {
            if (!kKeys.contains(key)) {
                throw Error(ErrorCode::ParseError, "unknown generator spec key '" + key + "'");
            }
        }
        const auto count = [&](const char* key, CountRange& out) {
            if (!doc.contains(key)) {
                return;
            }
            const auto& v = doc[key];
            if (v.is_number_integer()) {
                out = {v.get<int>(), v.get<int>()};
            } else if (v.is_array() && v.size() == 2) {
                out = {v[0].get<int>(), v[1].get<int>()};
            } else {
                throw Error(ErrorCode::ParseError, std::string(key) + " must be an integer or [min, max]");
            }
            if (out.min < 0 || out.min > out.max) {
                throw Error(ErrorCode::ParseError, std::string(key) + " needs 0 <= min <= max");
            }
        };
        count("circles", spec.circles);
        count("lines", spec.lines);
        count("lights", spec.lights);
        count("dimlines", spec.dimlines);
        count("texts", spec.texts);
        const auto num = [&](const char* key, auto& out) {
            if (doc.contains(key)) {
                out = doc[key].get<std::remove_reference_t<decltype(out)>>();
            }
        };
        num("width", spec.width);
        num("height", spec.height);
        num("radius_min", spec.radius_min);
        num("radius_max", spec.radius_max);
        num("line_min_length", spec.line_min_length);
        num("line_max_length", spec.line_max_length);
        num("light_min_size", spec.light_min_size);
        num("light_max_size", spec.light_max_size);
        num("dimline_min_length", spec.dimline_min_length);
        num("dimline_max_length", spec.dimline_max_length);
        num("text_scale", spec.text_scale);
        num("text_min_chars", spec.text_min_chars);
        num("text_max_chars", spec.text_max_chars);
        num("noise_sigma", spec.noise_sigma);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("generator spec: ") + e.what());
    }
    return spec;
}

std::string ground_truth_to_json(const GroundTruth& truth) {
    auto doc = detail::to_json(truth.entities);
    doc["noise_sigma"] = truth.noise_sigma;
    doc["seed"] = truth.seed;
    return doc.dump(2) + "\n";
}

GroundTruth ground_truth_from_json(const std::string& json_text) {
    try {
        const auto doc = nlohmann::ordered_json::parse(json_text);
        GroundTruth truth;
        truth.entities = detail::entity_set_from(doc);
        truth.noise_sigma = doc.value("noise_sigma", 0.0);
        truth.seed = doc.value("seed", std::uint64_t{0});
        return truth;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("ground truth: ") + e.what());
    }
}

}  // namespace draftvec

namespace draftvec {

namespace {

DetectionBox box(const char* label, int x1, int y1, int x2, int y2) {
    return {label, x1, y1, x2, y2, 1.0};
}

}  // namespace

DemoScene make_demo_scene() {
    DemoScene scene;
    auto& truth = scene.truth;
    truth.seed = 0;
    auto& e = truth.entities;
    e.image_width = 800;
    e.image_height = 600;
    e.source = "demo";

    e.circles = {{368, 280, 14, 0}, {368, 232, 14, 0}, {368, 328, 15, 0}};
    e.lines = {{81, 427, 686, 427, {}},
               {361, 425, 574, 425, {}},
               {168, 169, 645, 169, {}},
               {173, 167, 463, 167, {}},
               {346, 394, 458, 394, {}}};
    e.lights = {box("PL", 629, 348, 643, 358), box("CS", 591, 285, 611, 303), box("CS", 663, 222, 684, 241),
                box("CL", 748, 254, 767, 271), box("DL", 696, 205, 706, 215), box("PL", 700, 300, 716, 314),
                box("CL", 600, 230, 620, 248), box("DL", 720, 340, 732, 352)};
    e.dimension_lines = {box("dimline", 342, 278, 347, 299), box("dimline", 170, 423, 343, 428),
                         box("dimline", 404, 277, 437, 282), box("dimline", 255, 278, 260, 365),
                         box("dimline", 355, 422, 398, 428)};
    for (int k = 0; k < 8; ++k) {
        e.dimension_lines.push_back(box("dimline", 40, 240 + 20 * k, 120 + 10 * k, 247 + 20 * k));
    }
    for (int k = 0; k < 7; ++k) {
        e.dimension_lines.push_back(box("dimline", 480 + 16 * k, 190, 487 + 16 * k, 260));
    }

    constexpr int kScale = 2;
    std::vector<std::pair<int, int>> origins;
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            origins.emplace_back(30 + col * 186, 470 + row * 30);
        }
    }
    origins.emplace_back(30, 20);
    origins.emplace_back(400, 20);
    for (std::size_t i = 0; i < origins.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "ROOM-%02zu/AREA-%zu", i + 1, (i * 7) % 10);
        const std::string text = buf;
        e.texts.push_back({text_box(text, origins[i].first, origins[i].second, kScale), text, 1.0});
    }

    scene.light_detections = e.lights;
    for (std::size_t i = 0; i < e.dimension_lines.size(); ++i) {
        if (i != 5 && i != 9 && i != 13 && i != 17) {
            scene.dimline_detections.push_back(e.dimension_lines[i]);
        }
    }
    // The last text region is left undetected; each recognised string has
    // one character replaced.
    for (std::size_t i = 0; i + 1 < e.texts.size(); ++i) {
        scene.text_detections.push_back(e.texts[i].box);
        std::string answer = e.texts[i].text;
        const std::size_t pos = (i * 5) % answer.size();
        answer[pos] = answer[pos] == 'X' ? 'Y' : 'X';
        scene.ocr_answers[i] = answer;
    }
    return scene;
}

void write_demo_scene(const DemoScene& scene, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot create " + dir.string());
    }
    const auto& e = scene.truth.entities;
    save_png(render(scene.truth), dir / "image.png");
    write_text_file(dir / "truth.json", ground_truth_to_json(scene.truth));
    write_text_file(dir / "lights.txt",
                    to_yolo_txt(scene.light_detections, e.image_width, e.image_height, class_maps::lights()));
    write_text_file(dir / "dimlines.txt",
                    to_yolo_txt(scene.dimline_detections, e.image_width, e.image_height, class_maps::dimlines()));
    write_text_file(dir / "text.txt",
                    to_yolo_txt(scene.text_detections, e.image_width, e.image_height, class_maps::text()));

    nlohmann::ordered_json fixture = nlohmann::ordered_json::object();
    for (const auto& [idx, text] : scene.ocr_answers) {
        fixture[std::to_string(idx)] = text;
    }
    write_text_file(dir / "ocr_fixture.json", fixture.dump(2) + "\n");

    const nlohmann::ordered_json config = {
        {"sidecars", {{"lights", "lights.txt"}, {"dimlines", "dimlines.txt"}, {"text", "text.txt"}}},
        {"ocr", {{"fixture", "ocr_fixture.json"}}},
    };
    write_text_file(dir / "config.json", config.dump(2) + "\n");
}

}  // namespace draftvec
