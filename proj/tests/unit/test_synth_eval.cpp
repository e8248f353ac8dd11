#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "draftvec/error.hpp"
#include "draftvec/eval.hpp"
#include "draftvec/synth.hpp"

#include "json.hpp"

#include <cmath>
#include <set>
#include <sstream>

using namespace draftvec;

namespace {

double segment_distance(double px, double py, const LineSegment& s) {
    const double dx = s.x2 - s.x1;
    const double dy = s.y2 - s.y1;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((px - s.x1) * dx + (py - s.y1) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (s.x1 + t * dx), py - (s.y1 + t * dy));
}

double inside(double px, double py, const DetectionBox& b) {
    return px >= b.x1 && px < b.x2 && py >= b.y1 && py < b.y2 ? 0.0 : 1e9;
}

// Distance from a pixel to the nearest stroke the truth says was drawn.
double stroke_distance(int x, int y, const DrawingEntitySet& e) {
    double best = 1e9;
    for (const auto& c : e.circles) {
        best = std::min(best, std::abs(std::hypot(x - c.cx, y - c.cy) - c.radius));
    }
    for (const auto& l : e.lines) {
        best = std::min(best, segment_distance(x, y, l));
    }
    for (const auto& b : e.lights) {
        best = std::min(best, inside(x, y, b));
    }
    for (const auto& b : e.dimension_lines) {
        best = std::min(best, inside(x, y, b));
    }
    for (const auto& t : e.texts) {
        best = std::min(best, inside(x, y, t.box));
    }
    return best;
}

GroundTruth truth_of(DrawingEntitySet e) {
    GroundTruth t;
    t.entities = std::move(e);
    return t;
}

}  // namespace

TEST_CASE("an empty spec renders a white page") {
    GenSpec spec;
    spec.width = 64;
    spec.height = 48;
    const auto [img, truth] = generate(spec, 11);
    CHECK(img.width() == 64);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            REQUIRE(img.at(x, y) == 255);
        }
    }
    CHECK(truth.entities.circles.empty());
    CHECK(truth.seed == 11);
}

TEST_CASE("generation is deterministic and reproducible from the truth") {
    GenSpec spec;
    spec.circles = {1, 4};
    spec.lines = {0, 3};
    spec.lights = {0, 2};
    spec.texts = {0, 2};
    spec.noise_sigma = 6.0;
    const auto [a, ta] = generate(spec, 123);
    const auto [b, tb] = generate(spec, 123);
    CHECK(a == b);
    CHECK(ground_truth_to_json(ta) == ground_truth_to_json(tb));
    CHECK(render(ta) == a);
    CHECK(render(ground_truth_from_json(ground_truth_to_json(ta))) == a);
    const auto [c, tc] = generate(spec, 124);
    CHECK_FALSE(a == c);
}

TEST_CASE("ink pixels lie on the truth strokes") {
    GenSpec spec;
    spec.circles = {3, 3};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto [img, truth] = generate(spec, seed);
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                if (img.at(x, y) < 128) {
                    REQUIRE(stroke_distance(x, y, truth.entities) <= 1.5);
                }
            }
        }
    }
    spec.circles = {1, 3};
    spec.lines = {1, 3};
    spec.lights = {1, 2};
    spec.dimlines = {1, 2};
    spec.texts = {1, 2};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto [img, truth] = generate(spec, seed);
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                if (img.at(x, y) < 128) {
                    REQUIRE(stroke_distance(x, y, truth.entities) <= 1.5);
                }
            }
        }
    }
}

TEST_CASE("placed circles keep their separation and stay on the page") {
    GenSpec spec;
    spec.circles = {5, 5};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto truth = generate(spec, seed).second;
        const auto& cs = truth.entities.circles;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            CHECK(cs[i].radius >= spec.radius_min);
            CHECK(cs[i].radius <= spec.radius_max);
            CHECK(cs[i].cx - cs[i].radius >= 0);
            CHECK(cs[i].cx + cs[i].radius < spec.width);
            for (std::size_t j = i + 1; j < cs.size(); ++j) {
                CHECK(std::hypot(cs[i].cx - cs[j].cx, cs[i].cy - cs[j].cy) >= cs[i].radius + cs[j].radius + 5);
            }
        }
    }
}

TEST_CASE("an impossible spec is SpecInfeasible") {
    GenSpec spec;
    spec.width = 40;
    spec.height = 40;
    spec.circles = {6, 6};
    spec.radius_min = 12;
    spec.radius_max = 14;
    try {
        generate(spec, 1);
        FAIL("expected SpecInfeasible");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SpecInfeasible);
    }
}

TEST_CASE("spec parsing") {
    const auto spec = parse_gen_spec(R"({"width": 320, "circles": [1, 5], "lines": 2, "noise_sigma": 8})");
    CHECK(spec.width == 320);
    CHECK(spec.circles.min == 1);
    CHECK(spec.circles.max == 5);
    CHECK(spec.lines.min == 2);
    CHECK(spec.lines.max == 2);
    CHECK(spec.noise_sigma == 8.0);
    CHECK_THROWS_AS(parse_gen_spec(R"({"circles": [5, 1]})"), Error);
    CHECK_THROWS_AS(parse_gen_spec(R"({"triangles": 1})"), Error);
}

TEST_CASE("uniform integers cover their range evenly") {
    Rng rng(5);
    std::vector<int> hist(6, 0);
    for (int i = 0; i < 60000; ++i) {
        const int v = rng.uniform_int(10, 15);
        REQUIRE(v >= 10);
        REQUIRE(v <= 15);
        ++hist[v - 10];
    }
    for (const int h : hist) {
        CHECK(h > 9500);
        CHECK(h < 10500);
    }
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / 20000) < 0.03);
    CHECK(std::abs(sq / 20000 - 1.0) < 0.05);
}

TEST_CASE("identical detections score perfectly") {
    std::mt19937_64 rng(80);
    for (int i = 0; i < 20; ++i) {
        auto set = fixture::random_set(rng, true);
        const auto r = match_and_score(truth_of(set), set);
        for (const auto* row : r.rows()) {
            CHECK(row->precision() == 1.0);
            CHECK(row->recall() == 1.0);
        }
        CHECK(r.lines.recall() == 1.0);
        CHECK(r.text_accuracy() == 1.0);
    }
}

TEST_CASE("20 dimension lines with 16 found") {
    DrawingEntitySet truth;
    for (int i = 0; i < 20; ++i) {
        truth.dimension_lines.push_back({"dimline", 10, 10 + 20 * i, 100, 17 + 20 * i, 1.0});
    }
    DrawingEntitySet found = truth;
    found.dimension_lines.resize(16);
    const auto r = match_and_score(truth_of(truth), found);
    CHECK(r.dimension_lines.truth_count == 20);
    CHECK(r.dimension_lines.detected_count == 16);
    CHECK(r.dimension_lines.matched_count == 16);
    CHECK(r.dimension_lines.recall() == doctest::Approx(0.8));
    CHECK(r.dimension_lines.precision() == 1.0);
}

TEST_CASE("tolerances decide matches") {
    DrawingEntitySet truth;
    truth.circles = {{100, 100, 20, 0}};
    truth.lines = {{0, 0, 100, 0, {}}};
    truth.lights = {{"PL", 0, 0, 10, 10, 1.0}};
    DrawingEntitySet found;
    found.circles = {{102, 100, 22, 0}};
    found.lines = {{100, 3, 0, 0, {}}};
    found.lights = {{"CS", 0, 0, 10, 10, 1.0}};
    auto r = match_and_score(truth_of(truth), found);
    CHECK(r.circles.matched_count == 1);
    CHECK(r.lines.matched_count == 1);
    CHECK(r.ornaments.matched_count == 0);
    found.circles = {{103, 100, 20, 0}};
    found.lines = {{0, 0, 100, 4, {}}};
    r = match_and_score(truth_of(truth), found);
    CHECK(r.circles.matched_count == 0);
    CHECK(r.lines.matched_count == 0);
}

TEST_CASE("text accuracy over matched regions") {
    DrawingEntitySet truth;
    truth.texts = {{{"text", 0, 0, 50, 10, 1.0}, "HELLO", 1.0}, {{"text", 0, 20, 50, 30, 1.0}, "ABCDE", 1.0}};
    DrawingEntitySet found;
    found.texts = {{{"text", 0, 0, 50, 10, 1.0}, "HELPO", 1.0}};
    const auto r = match_and_score(truth_of(truth), found);
    CHECK(r.text_regions.matched_count == 1);
    CHECK(r.text_pairs == 1);
    CHECK(r.text_accuracy() == doctest::Approx(0.8));
}

TEST_CASE("greedy matching never beats the optimal assignment and is one-to-one") {
    std::mt19937_64 rng(81);
    std::uniform_int_distribution<int> n(0, 5);
    std::uniform_int_distribution<int> coord(0, 12);
    for (int trial = 0; trial < 300; ++trial) {
        DrawingEntitySet truth;
        DrawingEntitySet found;
        for (int k = n(rng); k > 0; --k) {
            truth.circles.push_back({coord(rng), coord(rng), 10, 0});
        }
        for (int k = n(rng); k > 0; --k) {
            found.circles.push_back({coord(rng), coord(rng), 10 + coord(rng) % 3, 0});
        }
        const Tolerances tol;
        std::vector<std::vector<bool>> ok(truth.circles.size(), std::vector<bool>(found.circles.size()));
        std::vector<MatchCandidate> cands;
        for (std::size_t i = 0; i < truth.circles.size(); ++i) {
            for (std::size_t j = 0; j < found.circles.size(); ++j) {
                const auto& t = truth.circles[i];
                const auto& d = found.circles[j];
                const double dist = std::hypot(t.cx - d.cx, t.cy - d.cy);
                ok[i][j] = dist <= tol.circle_center && std::abs(t.radius - d.radius) <= tol.circle_radius;
                if (ok[i][j]) {
                    cands.push_back({i, j, dist});
                }
            }
        }
        const auto r = match_and_score(truth_of(truth), found, tol);
        const auto optimal = oracle::max_matching(ok);
        CHECK(r.circles.matched_count <= optimal);
        const auto pairs = greedy_match(cands);
        CHECK(pairs.size() == r.circles.matched_count);
        std::set<std::size_t> ts;
        std::set<std::size_t> ds;
        for (const auto& p : pairs) {
            CHECK(ts.insert(p.truth).second);
            CHECK(ds.insert(p.detected).second);
        }
        CHECK(r.circles.matched_count <= std::min(r.circles.truth_count, r.circles.detected_count));
        CHECK(r.circles.precision() >= 0.0);
        CHECK(r.circles.precision() <= 1.0);
    }
}

TEST_CASE("greedy order breaks ties by index") {
    const auto pairs = greedy_match({{1, 0, 1.0}, {0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 0.5}});
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].truth == 1);
    CHECK(pairs[0].detected == 1);
    CHECK(pairs[1].truth == 0);
    CHECK(pairs[1].detected == 0);
}

TEST_CASE("report layout") {
    EvalReport r;
    r.circles = {"Circles", 3, 3, 3};
    r.ornaments = {"Ornaments", 8, 8, 8};
    r.dimension_lines = {"Dimension Lines", 20, 16, 16};
    r.text_regions = {"Text Regions", 18, 17, 17};
    r.text_accuracy_sum = 0.93 * 17;
    r.text_pairs = 17;
    const auto table = render_report(r);
    std::vector<std::string> lines;
    std::istringstream in(table);
    for (std::string l; std::getline(in, l);) {
        lines.push_back(l);
    }
    REQUIRE(lines.size() == 6);
    CHECK(lines[0].rfind("S.No", 0) == 0);
    CHECK(lines[1].find("No. of Circles") != std::string::npos);
    CHECK(lines[3].find("No. of Dimension Lines") != std::string::npos);
    CHECK(lines[3].find("20") != std::string::npos);
    CHECK(lines[3].find("16") != std::string::npos);
    CHECK(lines[5].find("Accuracy of Text") != std::string::npos);
    CHECK(lines[5].find("93%") != std::string::npos);
    const auto doc = nlohmann::json::parse(report_to_json(r));
    CHECK(doc.dump().find("Dimension Lines") != std::string::npos);
}

TEST_CASE("benchmark conventions") {
    PipelineConfig cfg;
    GenSpec empty;
    empty.width = 200;
    empty.height = 150;
    const auto one = run_benchmark(1, empty, 7, cfg);
    REQUIRE(one.per_image.size() == 1);
    for (const auto* row : one.aggregate.rows()) {
        CHECK(row->truth_count == 0);
        CHECK(row->detected_count == 0);
        CHECK(row->precision() == 1.0);
        CHECK(row->recall() == 1.0);
    }
    CHECK(one.aggregate.text_accuracy() == 1.0);

    GenSpec spec;
    spec.width = 300;
    spec.height = 200;
    spec.circles = {1, 3};
    const auto single = run_benchmark(1, spec, 21, cfg);
    const auto twice = aggregate({single.aggregate, single.aggregate});
    CHECK(twice.circles.truth_count == 2 * single.aggregate.circles.truth_count);
    CHECK(twice.circles.detected_count == 2 * single.aggregate.circles.detected_count);
    CHECK(twice.circles.matched_count == 2 * single.aggregate.circles.matched_count);
    const auto pair = run_benchmark(2, spec, 21, cfg);
    CHECK(pair.per_image[0].circles.truth_count == single.aggregate.circles.truth_count);
    CHECK(pair.aggregate.circles.truth_count ==
          pair.per_image[0].circles.truth_count + pair.per_image[1].circles.truth_count);

    cfg.workers = 3;
    const auto threaded = run_benchmark(4, spec, 30, cfg);
    cfg.workers = 1;
    const auto serial = run_benchmark(4, spec, 30, cfg);
    CHECK(report_to_json(threaded.aggregate) == report_to_json(serial.aggregate));
}

TEST_CASE("demo scene contents") {
    const auto scene = make_demo_scene();
    const auto& e = scene.truth.entities;
    CHECK(e.circles.size() == 3);
    CHECK(e.lights.size() == 8);
    CHECK(e.dimension_lines.size() == 20);
    CHECK(e.texts.size() == 18);
    CHECK(scene.light_detections.size() == 8);
    CHECK(scene.dimline_detections.size() == 16);
    CHECK(scene.text_detections.size() == 17);
    std::size_t chars = 0;
    std::size_t wrong = 0;
    for (const auto& [i, answer] : scene.ocr_answers) {
        chars += e.texts[i].text.size();
        wrong += levenshtein(answer, e.texts[i].text);
    }
    CHECK(static_cast<double>(wrong) / static_cast<double>(chars) == doctest::Approx(1.0 / 14.0).epsilon(0.15));
}
