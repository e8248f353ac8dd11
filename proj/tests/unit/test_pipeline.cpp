#include "doctest.h"
#include "oracles.hpp"
#include "scratch.hpp"
#include "vector_oracles.hpp"

#include "cli.hpp"
#include "draftvec/error.hpp"
#include "draftvec/pipeline.hpp"
#include "draftvec/synth.hpp"
#include "draftvec/vector_out.hpp"

#include <cstdlib>
#include <sstream>

using namespace draftvec;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "draftvec");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path write_image(const fs::path& path, const RasterImage& img) {
    save_png(img, path);
    return path;
}

GroundTruth circles_truth(int w, int h, std::vector<Circle> circles) {
    GroundTruth t;
    t.entities.image_width = w;
    t.entities.image_height = h;
    t.entities.circles = std::move(circles);
    return t;
}

}  // namespace

TEST_CASE("blank image gives header-only CSVs and empty vector files") {
    ScratchDir dir("pipe");
    const auto input = write_image(dir / "blank.png", RasterImage(160, 120, 255));
    PipelineConfig cfg;
    cfg.output_dir = dir / "out";
    const auto r = run_pipeline(input, cfg);
    CHECK(r.output_dir == dir / "out" / "blank");
    const auto tree = oracle::tree_bytes(r.output_dir);
    CHECK(tree.at("circles.csv") == "label,x,y,radius\n");
    CHECK(tree.at("lines.csv") == "label,x1,y1,x2,y2\n");
    CHECK(tree.at("dimlines.csv") == "label,x1,y1,x2,y2\n");
    CHECK(tree.at("lights.csv") == "label,x1,y1,x2,y2\n");
    CHECK(tree.at("text.csv") == "label,x1,y1,x2,y2,text\n");
    CHECK(tree.count("manifest.json") == 1);
    CHECK(parse_dxf(tree.at("out.dxf")).entities.empty());
    CHECK(oracle::svg_element_order(tree.at("out.svg")).empty());
    const auto back = oracle::reparse_svg(tree.at("out.svg"));
    CHECK(back.image_width == 160);
    CHECK(back.image_height == 120);
    // Missing optional sidecars are warnings, never failures.
    CHECK(r.warnings.size() >= 2);
}

TEST_CASE("three rendered circles come back within one pixel") {
    for (const std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        GenSpec spec;
        spec.width = 400;
        spec.height = 300;
        spec.circles = {3, 3};
        const auto [img, truth] = generate(spec, seed);
        const auto r = process_image(img, PipelineConfig{}, "mem", "mem");
        CAPTURE(seed);
        REQUIRE(r.entities.circles.size() == 3);
        for (const auto& t : truth.entities.circles) {
            const bool found = std::any_of(r.entities.circles.begin(), r.entities.circles.end(), [&](const Circle& c) {
                return std::abs(c.cx - t.cx) <= 1 && std::abs(c.cy - t.cy) <= 1 && std::abs(c.radius - t.radius) <= 1;
            });
            CHECK(found);
        }
    }
}

TEST_CASE("coordinates are reported in full-image space") {
    const auto truth = circles_truth(300, 200, {{230, 140, 20, 0}});
    const auto img = render(truth);
    const auto r = process_image(img, PipelineConfig{}, "mem", "mem");
    REQUIRE(r.entities.circles.size() == 1);
    CHECK(std::abs(r.entities.circles[0].cx - 230) <= 1);
    CHECK(std::abs(r.entities.circles[0].cy - 140) <= 1);
    CHECK(r.entities.image_width == 300);
}

TEST_CASE("same input and config give byte-identical trees, whatever the worker count") {
    ScratchDir dir("pipe");
    GenSpec spec;
    spec.circles = {2, 4};
    spec.lines = {2, 4};
    spec.texts = {1, 3};
    const auto input = write_image(dir / "drawing.png", generate(spec, 9).first);
    PipelineConfig cfg;
    cfg.output_dir = dir / "a";
    run_pipeline(input, cfg);
    cfg.output_dir = dir / "b";
    run_pipeline(input, cfg);
    cfg.output_dir = dir / "c";
    cfg.workers = 4;
    run_pipeline(input, cfg);
    const auto a = oracle::tree_bytes(dir / "a");
    CHECK(a.size() == 8);
    CHECK(a == oracle::tree_bytes(dir / "b"));
    CHECK(a == oracle::tree_bytes(dir / "c"));
}

TEST_CASE("sidecars feed lights, dimension lines and text") {
    ScratchDir dir("pipe");
    const auto scene = make_demo_scene();
    write_demo_scene(scene, dir.path());
    auto cfg = load_config(dir / "config.json");
    cfg.output_dir = dir / "out";
    const auto r = run_pipeline(dir / "image.png", cfg);
    CHECK(r.entities.lights == scene.light_detections);
    CHECK(r.entities.dimension_lines.size() == scene.dimline_detections.size());
    REQUIRE(r.entities.texts.size() == scene.text_detections.size());
    for (std::size_t i = 0; i < r.entities.texts.size(); ++i) {
        CHECK(r.entities.texts[i].text == scene.ocr_answers.at(i));
    }
}

TEST_CASE("a missing sidecar file is a warning") {
    ScratchDir dir("pipe");
    const auto input = write_image(dir / "x.png", RasterImage(50, 50, 255));
    PipelineConfig cfg;
    cfg.output_dir = dir / "out";
    cfg.sidecars.lights = (dir / "{stem}.lights.txt").string();
    const auto r = run_pipeline(input, cfg);
    CHECK(r.entities.lights.empty());
    const bool named = std::any_of(r.warnings.begin(), r.warnings.end(), [&](const std::string& w) {
        return w.find("x.lights.txt") != std::string::npos;
    });
    CHECK(named);
}

TEST_CASE("detection tables are on disk before recognition starts") {
    ScratchDir dir("pipe");
    RasterImage img(200, 80, 255);
    draw_text(img, "A1", 20, 20, 2);
    const auto input = write_image(dir / "t.png", img);
    std::ofstream(dir / "ocr.sh") << "#!/bin/sh\nd=" << (dir / "out" / "t").string()
                                  << "\nif test -f \"$d/lights.csv\" && test -f \"$d/dimlines.csv\" && "
                                     "! test -f \"$d/text.csv\"; then echo ordered; else echo unordered; fi\n";
    PipelineConfig cfg;
    cfg.output_dir = dir / "out";
    cfg.ocr.command = "sh " + (dir / "ocr.sh").string();
    const auto r = run_pipeline(input, cfg);
    REQUIRE(r.entities.texts.size() == 1);
    CHECK(r.entities.texts[0].text == "ordered");
}

TEST_CASE("stage dumps follow the processing order") {
    ScratchDir dir("pipe");
    const auto input = write_image(dir / "s.png", render(circles_truth(120, 90, {{60, 45, 20, 0}})));
    PipelineConfig cfg;
    cfg.output_dir = dir / "out";
    cfg.dump_stages = dir / "stages";
    run_pipeline(input, cfg);
    std::vector<std::string> names;
    for (const auto& [rel, _] : oracle::tree_bytes(dir / "stages" / "s")) {
        names.push_back(rel);
    }
    CHECK(names == std::vector<std::string>{"01_roi.pgm", "02_blur.pgm", "03_gradient.pgm", "04_nms.pgm",
                                            "05_edges.pgm", "06_line_votes.pgm"});
    // The first stage is the cropped drawing region.
    const auto roi = load_image(dir / "stages" / "s" / "01_roi.pgm");
    CHECK(roi.width() < 120);
}

TEST_CASE("pipeline errors") {
    ScratchDir dir("pipe");
    PipelineConfig cfg;
    cfg.output_dir = dir / "out";
    try {
        run_pipeline(dir / "missing.png", cfg);
        FAIL("expected InputUnreadable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InputUnreadable);
    }
    const auto input = write_image(dir / "ok.png", RasterImage(10, 10, 255));
    std::ofstream(dir / "file") << "x";
    cfg.output_dir = dir / "file";
    try {
        run_pipeline(input, cfg);
        FAIL("expected OutputUnwritable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutputUnwritable);
    }
    cfg.output_dir = dir / "out";
    cfg.canny.sigma = -1;
    try {
        run_pipeline(input, cfg);
        FAIL("expected ConfigInvalid");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigInvalid);
    }
}

TEST_CASE("config files") {
    ScratchDir dir("cfg");
    fs::create_directories(dir / "conf");
    std::ofstream(dir / "conf" / "c.json")
        << R"({"canny": {"sigma": 2.0}, "sidecars": {"lights": "det/{stem}.txt", "roi": "/abs/roi.txt"},
              "ocr": {"fixture": "ocr.json"}, "workers": 3})";
    const auto cfg = load_config(dir / "conf" / "c.json");
    CHECK(cfg.canny.sigma == 2.0);
    CHECK(*cfg.sidecars.lights == (dir / "conf" / "det" / "{stem}.txt").string());
    CHECK(*cfg.sidecars.roi == "/abs/roi.txt");
    CHECK(*cfg.ocr.fixture == (dir / "conf" / "ocr.json").string());
    CHECK(cfg.workers == 3);
    CHECK(resolve_template(*cfg.sidecars.lights, "plan") == (dir / "conf" / "det" / "plan.txt").string());

    PipelineConfig bad;
    CHECK_THROWS_AS(apply_config_json(bad, R"({"canny": {"sigmaa": 1}})"), Error);
    CHECK_THROWS_AS(apply_config_json(bad, R"({"hough": {"r_min": 50, "r_max": 10}})"), Error);
    CHECK_THROWS_AS(apply_config_json(bad, "[1"), Error);
    try {
        load_config(dir / "none.json");
        FAIL("expected ConfigInvalid");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigInvalid);
    }
}

TEST_CASE("config hash covers output-affecting settings only") {
    PipelineConfig a;
    PipelineConfig b;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.workers = 8;
    b.output_dir = "elsewhere";
    b.dump_stages = "dump";
    CHECK(config_hash(a) == config_hash(b));
    b.canny.sigma = 1.5;
    CHECK(config_hash(a) != config_hash(b));
    PipelineConfig c;
    apply_config_json(c, config_to_json(b));
    CHECK(config_hash(c) == config_hash(b));
}

TEST_CASE("cli convert happy path and exit codes") {
    ScratchDir dir("cli");
    write_image(dir / "drawing.png", render(circles_truth(120, 90, {{60, 45, 20, 0}})));
    auto r = run_cli({"convert", (dir / "drawing.png").string(), "--out", (dir / "out").string()});
    CHECK(r.code == cli::kOk);
    CHECK(fs::exists(dir / "out" / "drawing" / "circles.csv"));
    CHECK(oracle::slurp(dir / "out" / "drawing" / "circles.csv").find("Circle,60,45,") != std::string::npos);

    r = run_cli({"convert", (dir / "drawing.png").string(), "--bogus"});
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("convert") != std::string::npos);

    r = run_cli({"convert", (dir / "missing.png").string(), "--out", (dir / "out").string()});
    CHECK(r.code == cli::kInput);

    std::ofstream(dir / "blocker") << "x";
    r = run_cli({"convert", (dir / "drawing.png").string(), "--out", (dir / "blocker").string()});
    CHECK(r.code == cli::kOutput);

    r = run_cli({"convert", (dir / "drawing.png").string(), "--sigma", "-2"});
    CHECK(r.code == cli::kUsage);

    r = run_cli({});
    CHECK(r.code == cli::kUsage);
}

TEST_CASE("cli batch keeps going and reports the worst exit code") {
    ScratchDir dir("cli");
    write_image(dir / "a.png", render(circles_truth(100, 100, {{50, 50, 15, 0}})));
    auto r = run_cli({"convert", (dir / "missing.png").string(), (dir / "a.png").string(), "--out",
                  (dir / "out").string()});
    CHECK(r.code == cli::kInput);
    CHECK(fs::exists(dir / "out" / "a" / "out.svg"));
}

TEST_CASE("multi-image convert equals single-image runs") {
    ScratchDir dir("cli");
    GenSpec spec;
    spec.width = 300;
    spec.height = 200;
    spec.circles = {1, 3};
    spec.lines = {1, 2};
    for (int i = 0; i < 3; ++i) {
        write_image(dir / ("img" + std::to_string(i) + ".png"), generate(spec, 40 + i).first);
    }
    std::vector<std::string> batch = {"convert"};
    for (int i = 0; i < 3; ++i) {
        const auto img = (dir / ("img" + std::to_string(i) + ".png")).string();
        batch.push_back(img);
        CHECK(run_cli({"convert", img, "--out", (dir / "single").string()}).code == 0);
    }
    batch.insert(batch.end(), {"--out", (dir / "batch").string(), "--threads", "2"});
    CHECK(run_cli(batch).code == 0);
    const auto single = oracle::tree_bytes(dir / "single");
    CHECK(single.size() == 24);
    CHECK(single == oracle::tree_bytes(dir / "batch"));
}

TEST_CASE("cli flags override the config file, which DRAFTVEC_CONFIG names") {
    ScratchDir dir("cli");
    write_image(dir / "d.png", render(circles_truth(100, 100, {{50, 50, 15, 0}})));
    std::ofstream(dir / "c.json") << R"({"hough": {"r_min": 30, "r_max": 40}, "output_dir": ")"
                                  << (dir / "from_config").string() << "\"}";
    ::setenv("DRAFTVEC_CONFIG", (dir / "c.json").c_str(), 1);
    auto r = run_cli({"convert", (dir / "d.png").string()});
    CHECK(r.code == 0);
    CHECK(oracle::slurp(dir / "from_config" / "d" / "circles.csv") == "label,x,y,radius\n");
    r = run_cli({"convert", (dir / "d.png").string(), "--r-min", "10", "--out", (dir / "flag").string()});
    CHECK(r.code == 0);
    CHECK(oracle::slurp(dir / "flag" / "d" / "circles.csv").find("Circle,") != std::string::npos);
    std::ofstream(dir / "bad.json") << R"({"nope": 1})";
    ::setenv("DRAFTVEC_CONFIG", (dir / "bad.json").c_str(), 1);
    CHECK(run_cli({"convert", (dir / "d.png").string()}).code == cli::kUsage);
    ::unsetenv("DRAFTVEC_CONFIG");
}

TEST_CASE("cli gen and eval") {
    ScratchDir dir("cli");
    std::ofstream(dir / "spec.json") << R"({"width": 300, "height": 200, "circles": 2})";
    auto r = run_cli({"gen", "--spec", (dir / "spec.json").string(), "--seed", "5", "--out", (dir / "g").string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "g" / "image.png"));
    r = run_cli({"convert", (dir / "g" / "image.png").string(), "--out", (dir / "p").string()});
    REQUIRE(r.code == 0);
    r = run_cli({"eval", "--truth", (dir / "g").string(), "--pred", (dir / "p" / "image").string(), "--out",
             (dir / "rep").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("No. of Circles") != std::string::npos);
    CHECK(fs::exists(dir / "rep" / "report.json"));
    CHECK(run_cli({"eval", "--truth", (dir / "nothing").string(), "--pred", (dir / "p").string()}).code == cli::kInput);
    std::ofstream(dir / "tight.json") << R"({"width": 30, "height": 30, "circles": 5, "radius_min": 10})";
    CHECK(run_cli({"gen", "--spec", (dir / "tight.json").string(), "--out", (dir / "t").string()}).code == cli::kUsage);
    r = run_cli({"gen", "--demo", "--out", (dir / "demo").string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "demo" / "config.json"));
}
