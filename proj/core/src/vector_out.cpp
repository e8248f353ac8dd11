#include "draftvec/vector_out.hpp"

#include "draftvec/error.hpp"

#include <sstream>

namespace draftvec {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

void svg_line(std::ostringstream& out, const char* cls, int x1, int y1, int x2, int y2) {
    out << "  <line class=\"" << cls << "\" x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
}

}  // namespace

std::string to_svg(const DrawingEntitySet& set) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << set.image_width
        << "\" height=\"" << set.image_height << "\" viewBox=\"0 0 " << set.image_width << ' ' << set.image_height
        << "\">\n";
    for (const auto& l : set.lines) {
        svg_line(out, "line", l.x1, l.y1, l.x2, l.y2);
    }
    for (const auto& c : set.circles) {
        out << "  <circle class=\"circle\" cx=\"" << c.cx << "\" cy=\"" << c.cy << "\" r=\"" << c.radius
            << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    for (const auto& b : set.dimension_lines) {
        svg_line(out, "dimline", b.x1, b.y1, b.x2, b.y2);
    }
    for (const auto& b : set.lights) {
        out << "  <rect class=\"light\" data-label=\"" << xml_escape(b.class_label) << "\" x=\"" << b.x1
            << "\" y=\"" << b.y1 << "\" width=\"" << b.width() << "\" height=\"" << b.height()
            << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    for (const auto& t : set.texts) {
        out << "  <text class=\"text\" x=\"" << t.box.x1 << "\" y=\"" << t.box.y1 << "\" font-size=\""
            << t.box.height() << "\" dominant-baseline=\"hanging\">" << xml_escape(t.text) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

namespace {

class DxfWriter {
public:
    void pair(int code, const std::string& value) { out_ << code << '\n' << value << '\n'; }
    void pair(int code, int value) { out_ << code << '\n' << value << '\n'; }

    void line(const std::string& layer, int x1, int y1, int x2, int y2) {
        pair(0, "LINE");
        pair(8, layer);
        pair(10, x1);
        pair(20, y1);
        pair(30, 0);
        pair(11, x2);
        pair(21, y2);
        pair(31, 0);
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

std::string dxf_text(const std::string& s) {
    // Group values are single lines.
    std::string out;
    for (const char c : s) {
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out;
}

}  // namespace

std::string to_dxf(const DrawingEntitySet& set) {
    const int h = set.image_height;
    DxfWriter w;
    w.pair(0, "SECTION");
    w.pair(2, "HEADER");
    w.pair(9, "$ACADVER");
    w.pair(1, "AC1009");
    w.pair(9, "$EXTMIN");
    w.pair(10, 0);
    w.pair(20, 0);
    w.pair(9, "$EXTMAX");
    w.pair(10, set.image_width);
    w.pair(20, set.image_height);
    w.pair(0, "ENDSEC");

    w.pair(0, "SECTION");
    w.pair(2, "ENTITIES");
    for (const auto& l : set.lines) {
        w.line("LINES", l.x1, flip_y(l.y1, h), l.x2, flip_y(l.y2, h));
    }
    for (const auto& c : set.circles) {
        w.pair(0, "CIRCLE");
        w.pair(8, "CIRCLES");
        w.pair(10, c.cx);
        w.pair(20, flip_y(c.cy, h));
        w.pair(30, 0);
        w.pair(40, c.radius);
    }
    for (const auto& b : set.dimension_lines) {
        w.line("DIMLINES", b.x1, flip_y(b.y1, h), b.x2, flip_y(b.y2, h));
    }
    for (const auto& b : set.lights) {
        const int top = flip_y(b.y1, h);
        const int bottom = flip_y(b.y2, h);
        w.line(b.class_label, b.x1, top, b.x2, top);
        w.line(b.class_label, b.x2, top, b.x2, bottom);
        w.line(b.class_label, b.x2, bottom, b.x1, bottom);
        w.line(b.class_label, b.x1, bottom, b.x1, top);
    }
    for (const auto& t : set.texts) {
        w.pair(0, "TEXT");
        w.pair(8, "TEXT");
        // DXF text sits on its baseline, i.e. the box's lower edge.
        w.pair(10, t.box.x1);
        w.pair(20, flip_y(t.box.y2, h));
        w.pair(30, 0);
        w.pair(40, t.box.height());
        w.pair(1, dxf_text(t.text));
    }
    w.pair(0, "ENDSEC");
    w.pair(0, "EOF");
    return w.str();
}

std::string DxfEntity::value(int code) const {
    for (const auto& [c, v] : groups) {
        if (c == code) {
            return v;
        }
    }
    return {};
}

double DxfEntity::number(int code) const {
    const auto v = value(code);
    try {
        return std::stod(v);
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "DXF group " + std::to_string(code) + " is not numeric: '" + v + "'");
    }
}

DxfDocument parse_dxf(const std::string& text) {
    std::vector<std::pair<int, std::string>> pairs;
    {
        std::istringstream in(text);
        std::string code_line;
        std::string value_line;
        std::size_t line_no = 0;
        while (std::getline(in, code_line)) {
            ++line_no;
            if (!std::getline(in, value_line)) {
                throw Error(ErrorCode::ParseError, "DXF line " + std::to_string(line_no) + ": code without value");
            }
            int code = 0;
            try {
                std::size_t used = 0;
                code = std::stoi(code_line, &used);
                if (code_line.find_first_not_of(" \t\r", used) != std::string::npos) {
                    throw std::invalid_argument(code_line);
                }
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError,
                            "DXF line " + std::to_string(line_no) + ": bad group code '" + code_line + "'");
            }
            if (!value_line.empty() && value_line.back() == '\r') {
                value_line.pop_back();
            }
            pairs.emplace_back(code, value_line);
            ++line_no;
        }
    }

    DxfDocument doc;
    std::string section;
    std::string pending_var;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [code, value] = pairs[i];
        if (doc.has_eof) {
            throw Error(ErrorCode::ParseError, "DXF data after EOF");
        }
        if (code == 0 && value == "EOF") {
            if (!section.empty()) {
                throw Error(ErrorCode::ParseError, "DXF EOF inside section " + section);
            }
            doc.has_eof = true;
            continue;
        }
        if (code == 0 && value == "SECTION") {
            if (!section.empty() || i + 1 >= pairs.size() || pairs[i + 1].first != 2) {
                throw Error(ErrorCode::ParseError, "DXF malformed SECTION");
            }
            section = pairs[++i].second;
            doc.sections.push_back(section);
            continue;
        }
        if (code == 0 && value == "ENDSEC") {
            if (section.empty()) {
                throw Error(ErrorCode::ParseError, "DXF ENDSEC without SECTION");
            }
            section.clear();
            continue;
        }
        if (section == "HEADER") {
            if (code == 9) {
                pending_var = value;
            } else if (!pending_var.empty()) {
                doc.header.emplace_back(pending_var, value);
                pending_var.clear();
            }
        } else if (section == "ENTITIES") {
            if (code == 0) {
                doc.entities.push_back({value, {}});
            } else if (doc.entities.empty()) {
                throw Error(ErrorCode::ParseError, "DXF group before first entity");
            } else {
                doc.entities.back().groups.emplace_back(code, value);
            }
        } else if (section.empty()) {
            throw Error(ErrorCode::ParseError, "DXF group outside any section");
        }
    }
    if (!section.empty()) {
        throw Error(ErrorCode::ParseError, "DXF unterminated section " + section);
    }
    if (!doc.has_eof) {
        throw Error(ErrorCode::ParseError, "DXF missing EOF");
    }
    return doc;
}

}  // namespace draftvec
