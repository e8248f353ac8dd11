#pragma once

#include "draftvec/entities.hpp"

#include <array>
#include <random>
#include <string>

namespace fixture {

// The four published coordinate tables, as one entity set.
inline draftvec::DrawingEntitySet reference_tables() {
    draftvec::DrawingEntitySet s;
    s.image_width = 800;
    s.image_height = 600;
    s.circles = {{368, 280, 14, 0}, {368, 232, 14, 0}, {368, 328, 15, 0}};
    for (const auto& [x1, y1, x2, y2] : {std::array{342, 278, 347, 299}, std::array{170, 423, 343, 428},
                                         std::array{404, 277, 437, 282}, std::array{255, 278, 260, 365},
                                         std::array{355, 422, 398, 428}}) {
        s.dimension_lines.push_back({"dimline", x1, y1, x2, y2, 1.0});
    }
    s.lights = {{"PL", 629, 348, 643, 358, 1.0},
                {"CS", 591, 285, 611, 303, 1.0},
                {"CS", 663, 222, 684, 241, 1.0},
                {"CL", 748, 254, 767, 271, 1.0},
                {"DL", 696, 205, 706, 215, 1.0}};
    s.lines = {{81, 427, 686, 427, {}}, {361, 425, 574, 425, {}}, {168, 169, 645, 169, {}},
               {173, 167, 463, 167, {}}, {346, 394, 458, 394, {}}, {24, 201, 150, 201, {}}};
    return s;
}

inline std::string random_text(std::mt19937_64& rng) {
    static const std::string alphabet = "AB c,\"\n<>&'x\xC3\xA9";
    std::uniform_int_distribution<std::size_t> len(0, 8);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 2);
    std::string s;
    for (std::size_t n = len(rng); n > 0; --n) {
        const auto i = pick(rng);
        // Keep the two-byte code point whole.
        s += i == alphabet.size() - 2 ? alphabet.substr(i) : alphabet.substr(i, 1);
    }
    return s;
}

// Arbitrary valid entity set; coordinates stay inside a w x h frame.
inline draftvec::DrawingEntitySet random_set(std::mt19937_64& rng, bool single_line_text = false) {
    std::uniform_int_distribution<int> count(0, 6);
    std::uniform_int_distribution<int> dim(20, 900);
    draftvec::DrawingEntitySet s;
    s.image_width = dim(rng);
    s.image_height = dim(rng);
    s.source = "set-" + std::to_string(rng() % 1000) + ".png";
    std::uniform_int_distribution<int> xs(0, s.image_width);
    std::uniform_int_distribution<int> ys(0, s.image_height);
    const auto box = [&](const std::string& label) {
        int x1 = xs(rng), x2 = xs(rng), y1 = ys(rng), y2 = ys(rng);
        if (x1 > x2) std::swap(x1, x2);
        if (y1 > y2) std::swap(y1, y2);
        return draftvec::DetectionBox{label, x1, y1, x2, y2, 1.0};
    };
    static const char* kLights[] = {"PL", "CS", "CL", "DL"};
    for (int n = count(rng); n > 0; --n) {
        s.lines.push_back({xs(rng), ys(rng), xs(rng), ys(rng), {}});
    }
    for (int n = count(rng); n > 0; --n) {
        s.circles.push_back({xs(rng), ys(rng), 1 + static_cast<int>(rng() % 60), 0});
    }
    for (int n = count(rng); n > 0; --n) {
        s.dimension_lines.push_back(box("dimline"));
    }
    for (int n = count(rng); n > 0; --n) {
        s.lights.push_back(box(kLights[rng() % 4]));
    }
    for (int n = count(rng); n > 0; --n) {
        std::string text = random_text(rng);
        if (single_line_text) {
            std::erase(text, '\n');
        }
        s.texts.push_back({box("text"), text, 1.0});
    }
    return s;
}

}  // namespace fixture
