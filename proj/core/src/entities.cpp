#include "draftvec/entities.hpp"

#include "draftvec/error.hpp"
#include "json_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace draftvec {

const char* csv_file_name(EntityKind kind) {
    switch (kind) {
        case EntityKind::Circles: return "circles.csv";
        case EntityKind::Lines: return "lines.csv";
        case EntityKind::DimensionLines: return "dimlines.csv";
        case EntityKind::Lights: return "lights.csv";
        case EntityKind::Text: return "text.csv";
    }
    return "";
}

namespace {

constexpr const char* kBoxHeader = "label,x1,y1,x2,y2";
constexpr const char* kCircleHeader = "label,x,y,radius";
constexpr const char* kTextHeader = "label,x1,y1,x2,y2,text";

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

std::string label_field(const std::string& s) {
    return s.find_first_of(",\"\r\n") == std::string::npos ? s : quoted(s);
}

void box_row(std::ostringstream& out, const std::string& label, int x1, int y1, int x2, int y2) {
    out << label_field(label) << ',' << x1 << ',' << y1 << ',' << x2 << ',' << y2;
}

}  // namespace

std::string format_csv(const DrawingEntitySet& set, EntityKind kind) {
    std::ostringstream out;
    switch (kind) {
        case EntityKind::Circles:
            out << kCircleHeader << '\n';
            for (const auto& c : set.circles) {
                out << "Circle," << c.cx << ',' << c.cy << ',' << c.radius << '\n';
            }
            break;
        case EntityKind::Lines:
            out << kBoxHeader << '\n';
            for (const auto& l : set.lines) {
                box_row(out, "Line", l.x1, l.y1, l.x2, l.y2);
                out << '\n';
            }
            break;
        case EntityKind::DimensionLines:
            out << kBoxHeader << '\n';
            for (const auto& b : set.dimension_lines) {
                box_row(out, "Dimension Line", b.x1, b.y1, b.x2, b.y2);
                out << '\n';
            }
            break;
        case EntityKind::Lights:
            out << kBoxHeader << '\n';
            for (const auto& b : set.lights) {
                box_row(out, b.class_label, b.x1, b.y1, b.x2, b.y2);
                out << '\n';
            }
            break;
        case EntityKind::Text:
            out << kTextHeader << '\n';
            for (const auto& t : set.texts) {
                box_row(out, "Text", t.box.x1, t.box.y1, t.box.x2, t.box.y2);
                out << ',' << quoted(t.text) << '\n';
            }
            break;
    }
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed: " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path write_entity_csv(const DrawingEntitySet& set, EntityKind kind,
                                       const std::filesystem::path& out_dir) {
    const auto path = out_dir / csv_file_name(kind);
    write_text_file(path, format_csv(set, kind));
    return path;
}

std::vector<std::filesystem::path> to_csv(const DrawingEntitySet& set, const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    for (const auto kind : kAllEntityKinds) {
        written.push_back(write_entity_csv(set, kind, out_dir));
    }
    return written;
}

namespace {

// RFC 4180 records: quoted fields may hold commas, doubled quotes and newlines.
class CsvReader {
public:
    CsvReader(const std::string& content, std::string file) : s_(content), file_(std::move(file)) {}

    bool next(std::vector<std::string>& fields) {
        fields.clear();
        if (pos_ >= s_.size()) {
            return false;
        }
        line_ = next_line_;
        std::string field;
        bool in_quotes = false;
        bool was_quoted = false;
        while (pos_ < s_.size()) {
            const char c = s_[pos_++];
            if (in_quotes) {
                if (c == '"') {
                    if (pos_ < s_.size() && s_[pos_] == '"') {
                        field += '"';
                        ++pos_;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (c == '\n') {
                        ++next_line_;
                    }
                    field += c;
                }
            } else if (c == '"') {
                if (!field.empty() || was_quoted) {
                    throw error("stray quote");
                }
                in_quotes = was_quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
                was_quoted = false;
            } else if (c == '\n') {
                ++next_line_;
                fields.push_back(std::move(field));
                return true;
            } else if (c == '\r') {
                throw error("CR line endings are not supported");
            } else {
                if (was_quoted) {
                    throw error("text after closing quote");
                }
                field += c;
            }
        }
        if (in_quotes) {
            throw error("unterminated quoted field");
        }
        fields.push_back(std::move(field));
        return true;
    }

    Error error(const std::string& why) const {
        return Error(ErrorCode::ParseError, file_ + ":" + std::to_string(line_) + ": " + why);
    }

private:
    const std::string& s_;
    std::string file_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t next_line_ = 1;
};

int to_int(const CsvReader& r, const std::string& f) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) {
        throw r.error("expected integer, got '" + f + "'");
    }
    return v;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        out += (i ? "," : "") + fields[i];
    }
    return out;
}

}  // namespace

void parse_csv(const std::string& content, EntityKind kind, DrawingEntitySet& set, const std::string& file) {
    CsvReader reader(content, file);
    std::vector<std::string> f;
    const std::string header = kind == EntityKind::Circles ? kCircleHeader
                               : kind == EntityKind::Text  ? kTextHeader
                                                           : kBoxHeader;
    if (!reader.next(f) || join(f) != header) {
        throw reader.error("expected header '" + header + "'");
    }
    const std::size_t columns = kind == EntityKind::Circles ? 4 : kind == EntityKind::Text ? 6 : 5;
    while (reader.next(f)) {
        if (f.size() != columns) {
            throw reader.error("expected " + std::to_string(columns) + " columns, got " + std::to_string(f.size()));
        }
        const auto expect_label = [&](const char* label) {
            if (f[0] != label) {
                throw reader.error("expected label '" + std::string(label) + "', got '" + f[0] + "'");
            }
        };
        switch (kind) {
            case EntityKind::Circles:
                expect_label("Circle");
                set.circles.push_back({to_int(reader, f[1]), to_int(reader, f[2]), to_int(reader, f[3]), 0});
                break;
            case EntityKind::Lines:
                expect_label("Line");
                set.lines.push_back(
                    {to_int(reader, f[1]), to_int(reader, f[2]), to_int(reader, f[3]), to_int(reader, f[4]), {}});
                break;
            case EntityKind::DimensionLines:
                expect_label("Dimension Line");
                set.dimension_lines.push_back({"dimline", to_int(reader, f[1]), to_int(reader, f[2]),
                                               to_int(reader, f[3]), to_int(reader, f[4]), 1.0});
                break;
            case EntityKind::Lights:
                set.lights.push_back({f[0], to_int(reader, f[1]), to_int(reader, f[2]), to_int(reader, f[3]),
                                      to_int(reader, f[4]), 1.0});
                break;
            case EntityKind::Text:
                expect_label("Text");
                set.texts.push_back({{"text", to_int(reader, f[1]), to_int(reader, f[2]), to_int(reader, f[3]),
                                      to_int(reader, f[4]), 1.0},
                                     f[5],
                                     1.0});
                break;
        }
    }
}

DrawingEntitySet from_csv(const std::filesystem::path& dir) {
    DrawingEntitySet set;
    const auto manifest = dir / "manifest.json";
    if (std::filesystem::exists(manifest)) {
        try {
            const auto doc = nlohmann::json::parse(read_text_file(manifest));
            set.source = doc.value("source", std::string{});
            set.image_width = doc.value("image_width", 0);
            set.image_height = doc.value("image_height", 0);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError, manifest.string() + ": " + e.what());
        }
    }
    for (const auto kind : kAllEntityKinds) {
        const auto path = dir / csv_file_name(kind);
        if (std::filesystem::exists(path)) {
            parse_csv(read_text_file(path), kind, set, path.string());
        }
    }
    return set;
}

std::string format_manifest(const DrawingEntitySet& set, const std::string& config_hash) {
    nlohmann::ordered_json doc;
    doc["source"] = set.source;
    doc["image_width"] = set.image_width;
    doc["image_height"] = set.image_height;
    doc["counts"] = {
        {"circles", set.circles.size()},   {"lines", set.lines.size()}, {"dimlines", set.dimension_lines.size()},
        {"lights", set.lights.size()},     {"text", set.texts.size()},
    };
    doc["config_hash"] = config_hash;
    return doc.dump(2) + "\n";
}

std::filesystem::path write_manifest(const DrawingEntitySet& set, const std::filesystem::path& out_dir,
                                     const std::string& config_hash) {
    const auto path = out_dir / "manifest.json";
    write_text_file(path, format_manifest(set, config_hash));
    return path;
}

namespace detail {

namespace {

nlohmann::ordered_json box_json(const DetectionBox& b) {
    return {{"label", b.class_label}, {"x1", b.x1}, {"y1", b.y1}, {"x2", b.x2}, {"y2", b.y2},
            {"confidence", b.confidence}};
}

DetectionBox box_from(const nlohmann::ordered_json& j) {
    return {j.at("label").get<std::string>(), j.at("x1").get<int>(), j.at("y1").get<int>(),
            j.at("x2").get<int>(),           j.at("y2").get<int>(), j.value("confidence", 1.0)};
}

}  // namespace

nlohmann::ordered_json to_json(const DrawingEntitySet& set) {
    nlohmann::ordered_json doc;
    doc["source"] = set.source;
    doc["image_width"] = set.image_width;
    doc["image_height"] = set.image_height;
    auto& lines = doc["lines"] = nlohmann::ordered_json::array();
    for (const auto& l : set.lines) {
        lines.push_back({{"x1", l.x1}, {"y1", l.y1}, {"x2", l.x2}, {"y2", l.y2}});
    }
    auto& circles = doc["circles"] = nlohmann::ordered_json::array();
    for (const auto& c : set.circles) {
        circles.push_back({{"x", c.cx}, {"y", c.cy}, {"radius", c.radius}});
    }
    auto& dims = doc["dimension_lines"] = nlohmann::ordered_json::array();
    for (const auto& b : set.dimension_lines) {
        dims.push_back(box_json(b));
    }
    auto& lights = doc["lights"] = nlohmann::ordered_json::array();
    for (const auto& b : set.lights) {
        lights.push_back(box_json(b));
    }
    auto& texts = doc["texts"] = nlohmann::ordered_json::array();
    for (const auto& t : set.texts) {
        auto j = box_json(t.box);
        j["text"] = t.text;
        j["text_confidence"] = t.confidence;
        texts.push_back(j);
    }
    return doc;
}

DrawingEntitySet entity_set_from(const nlohmann::ordered_json& doc) {
    DrawingEntitySet set;
    set.source = doc.value("source", std::string{});
    set.image_width = doc.value("image_width", 0);
    set.image_height = doc.value("image_height", 0);
    for (const auto& j : doc.value("lines", nlohmann::ordered_json::array())) {
        set.lines.push_back({j.at("x1").get<int>(), j.at("y1").get<int>(), j.at("x2").get<int>(),
                             j.at("y2").get<int>(), {}});
    }
    for (const auto& j : doc.value("circles", nlohmann::ordered_json::array())) {
        set.circles.push_back({j.at("x").get<int>(), j.at("y").get<int>(), j.at("radius").get<int>(), 0});
    }
    for (const auto& j : doc.value("dimension_lines", nlohmann::ordered_json::array())) {
        set.dimension_lines.push_back(box_from(j));
    }
    for (const auto& j : doc.value("lights", nlohmann::ordered_json::array())) {
        set.lights.push_back(box_from(j));
    }
    for (const auto& j : doc.value("texts", nlohmann::ordered_json::array())) {
        set.texts.push_back({box_from(j), j.value("text", std::string{}), j.value("text_confidence", 1.0)});
    }
    return set;
}

}  // namespace detail

std::string entity_set_to_json(const DrawingEntitySet& set) {
    return detail::to_json(set).dump(2) + "\n";
}

DrawingEntitySet entity_set_from_json(const std::string& json_text) {
    try {
        return detail::entity_set_from(nlohmann::ordered_json::parse(json_text));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("entity set JSON: ") + e.what());
    }
}

}  // namespace draftvec
