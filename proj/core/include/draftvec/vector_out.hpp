#pragma once

#include "draftvec/entities.hpp"

#include <string>
#include <utility>
#include <vector>

namespace draftvec {

/// SVG 1.1 document sized to the image. Element order: lines, circles,
/// dimension lines (as their x1,y1-x2,y2 diagonal), light rects, texts.
std::string to_svg(const DrawingEntitySet& set);

/// ASCII DXF (R12 subset) with y flipped to the CAD y-up convention.
std::string to_dxf(const DrawingEntitySet& set);

/// Image y to DXF y and back; applying it twice is the identity.
constexpr int flip_y(int y, int image_height) noexcept { return image_height - y; }

struct DxfEntity {
    std::string type;
    std::vector<std::pair<int, std::string>> groups;

    /// First value for a group code, or empty.
    std::string value(int code) const;
    double number(int code) const;
};

struct DxfDocument {
    std::vector<std::string> sections;
    std::vector<std::pair<std::string, std::string>> header;  // variable -> first value
    std::vector<DxfEntity> entities;
    bool has_eof = false;
};

/// Reads the group-code/value pairs written by to_dxf. Throws ParseError on
/// malformed structure (odd line count, unterminated section, missing EOF).
DxfDocument parse_dxf(const std::string& text);

}  // namespace draftvec
