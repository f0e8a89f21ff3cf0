#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace csf;
using namespace csf::test;

namespace {

const char* kMinimal = R"({
  "version": 1,
  "name": "tiny",
  "initial": {"generator": "bent_line", "n": 201},
  "flow": {"dt": 0.001, "t_end": 0.5, "record_every": 0.25},
  "checks": "all"
})";

io::SceneError scene_error(const std::string& text) {
    try {
        io::parse_scene(text);
    } catch (const io::SceneError& e) {
        return e;
    }
    ADD_FAILURE() << "no SceneError for " << text;
    return io::SceneError("none", 0, 0);
}

}  // namespace

TEST(Scene, MinimalDefaults) {
    const io::Scene s = io::parse_scene(kMinimal);
    EXPECT_EQ(s.name, "tiny");
    EXPECT_EQ(s.initial.n, 201u);
    EXPECT_DOUBLE_EQ(s.flow.pin_radius, 6.5);
    EXPECT_DOUBLE_EQ(s.initial.pin_radius, 6.5);
    EXPECT_EQ(s.flow.scheme, Scheme::semi_implicit);
    ASSERT_EQ(s.flow.record_times.size(), 2u);
    EXPECT_DOUBLE_EQ(s.flow.record_times[1], 0.5);
    EXPECT_EQ(s.checks, check_ids());
    EXPECT_EQ(s.outputs.directory, "out");
}

TEST(Scene, UnknownKeyHasPosition) {
    const io::SceneError e = scene_error(R"({
  "version": 1,
  "initial": {"generator": "wedge", "n": 101},
  "flow": {"dt": 0.001, "tend": 1.0}
})");
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.column(), 25u);
    EXPECT_EQ(e.pointer(), "/flow/tend");
    EXPECT_NE(std::string(e.what()).find("tend"), std::string::npos);
}

TEST(Scene, WrongTypeHasPointer) {
    const io::SceneError e = scene_error(R"({"version": 1, "initial": {"generator": "wedge", "n": "many"}})");
    EXPECT_EQ(e.pointer(), "/initial/n");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 50u);
}

TEST(Scene, MalformedJsonPosition) {
    const io::SceneError e = scene_error("{\n  \"version\": 1,\n  \"initial\": {\n}}}");
    EXPECT_EQ(e.line(), 4u);
    EXPECT_GT(e.column(), 0u);
}

TEST(Scene, InvalidValuesRejected) {
    EXPECT_THROW(io::parse_scene(R"({"version": 2, "initial": {"generator": "wedge"}})"), io::SceneError);
    EXPECT_THROW(io::parse_scene(R"({"version": 1})"), io::SceneError);
    EXPECT_THROW(io::parse_scene(R"({"version": 1, "initial": {"generator": "blob"}})"), io::SceneError);
    EXPECT_THROW(io::parse_scene(R"({"version": 1, "initial": {"generator": "wedge"}, "flow": {"dt": -1}})"),
                 io::SceneError);
    EXPECT_THROW(io::parse_scene(R"({"version": 1, "initial": {"generator": "wedge"}, "checks": ["nope"]})"),
                 io::SceneError);
    EXPECT_THROW(io::parse_scene(R"({"version": 1, "initial": {"generator": "wedge"}, "flow": {"scheme": "rk4"}})"),
                 io::SceneError);
    EXPECT_THROW(io::parse_scene(R"({"version": 1, "initial": {"generator": "wedge"}, "outputs": {"formats": ["png"]}})"),
                 io::SceneError);
}

TEST(Scene, CheckToleranceOverrides) {
    const io::Scene s = io::parse_scene(
        R"({"version": 1, "initial": {"generator": "wedge"},
            "checks": ["end_decay", {"id": "hamilton", "tolerance": 0.5}]})");
    ASSERT_EQ(s.checks.size(), 2u);
    EXPECT_EQ(s.checks[1], "hamilton");
    EXPECT_DOUBLE_EQ(s.verify.tolerance_overrides.at("hamilton"), 0.5);
}

TEST(Scene, CanonicalJsonAndHash) {
    const io::Scene s = io::parse_scene(kMinimal);
    const std::string j = io::scene_json(s);
    const io::Scene back = io::parse_scene(j);
    EXPECT_EQ(io::scene_json(back), j);
    EXPECT_EQ(io::scene_hash(back), io::scene_hash(s));
    EXPECT_EQ(io::scene_hash(s).size(), 16u);
    io::Scene other = s;
    other.flow.dt = 5e-4;
    EXPECT_NE(io::scene_hash(other), io::scene_hash(s));
}

TEST(Scene, Refinement) {
    io::Scene s = io::parse_scene(kMinimal);
    const io::Scene r = io::refined(s, 2);
    EXPECT_EQ(r.initial.n, 801u);
    EXPECT_DOUBLE_EQ(r.flow.dt, 0.001 / 4);
    EXPECT_EQ(r.flow.resample_every, s.flow.resample_every * 4);
    s.flow.scheme = Scheme::explicit_euler;
    EXPECT_DOUBLE_EQ(io::refined(s, 1).flow.dt, 0.001 / 4);
    EXPECT_EQ(io::refined(s, 0).initial.n, 201u);
}

TEST(Scene, CorpusScenesParse) {
    for (const char* name : {"wedge", "bent_line", "spiral", "zigzag", "random_wiggle", "circle", "oval",
                             "perturbed_wedge"}) {
        const std::string path = std::string(CSF_SOURCE_DIR) + "/scenes/" + name + ".json";
        EXPECT_NO_THROW(io::load_scene(path)) << path;
    }
    EXPECT_THROW(io::load_scene("/nonexistent/scene.json"), ConfigError);
}

TEST(Numbers, SeventeenDigitsRoundTrip) {
    EXPECT_EQ(io::format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(io::format_number(0.0), "0");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int k = 0; k < 1000; ++k) {
        const double x = u(rng) * std::pow(10.0, static_cast<double>(k % 40 - 20));
        EXPECT_EQ(std::strtod(io::format_number(x).c_str(), nullptr), x);
    }
}

TEST(TraceCsv, RoundTripIsExact) {
    FlowConfig cfg;
    cfg.t_end = 0.1;
    cfg.pin_radius = 6.1;
    cfg.record_times = {0.05, 0.1};
    const FlowTrace trace = run(corpus_curve("zigzag", 101, 6.1), cfg);
    std::stringstream csv;
    io::write_trace_csv(csv, trace);
    std::string header;
    std::getline(std::stringstream(csv.str()), header);
    EXPECT_EQ(header, io::kTraceHeader);
    const auto rows = io::read_trace_csv(csv);
    ASSERT_EQ(rows.size(), 3u * 101u);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Snapshot& s = trace.snapshots[k / 101];
        const std::size_t i = k % 101;
        EXPECT_EQ(rows[k].t, s.t);
        EXPECT_EQ(rows[k].node_index, i);
        EXPECT_EQ(rows[k].x, s.curve[i].x);
        EXPECT_EQ(rows[k].y, s.curve[i].y);
        EXPECT_EQ(rows[k].psi, s.lift.psi[i]);
        EXPECT_EQ(rows[k].kappa, s.curvature.kappa[i]);
        EXPECT_EQ(rows[k].s, s.curvature.arclengths[i]);
    }
}

TEST(TraceCsv, ClosedCurveListsNodesOnce) {
    FlowConfig cfg;
    cfg.t_end = 0.0;
    const FlowTrace trace = run(unit_circle(50), cfg);
    std::stringstream csv;
    io::write_trace_csv(csv, trace);
    EXPECT_EQ(io::read_trace_csv(csv).size(), 50u);
}

TEST(TraceCsv, BadHeaderRejected) {
    std::stringstream csv("t,x,y\n0,1,2\n");
    EXPECT_THROW(io::read_trace_csv(csv), ConfigError);
}

TEST(Report, JsonRoundTrip) {
    CheckReport a;
    a.check_id = "hamilton";
    a.status = CheckStatus::fail;
    a.max_violation = 0.125;
    a.tolerance = 1e-3;
    a.notes = "min increment -0.125";
    a.witness = Witness{1.5, std::nullopt, std::nullopt, 17, 0.75};
    CheckReport b;
    b.check_id = "blowdown";
    b.status = CheckStatus::inconclusive;
    b.max_violation = std::numeric_limits<double>::infinity();
    const std::string text = io::report_json({a, b});
    EXPECT_NE(text.find("null"), std::string::npos);
    const auto back = io::parse_report_json(text);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].check_id, "hamilton");
    EXPECT_EQ(back[0].status, CheckStatus::fail);
    EXPECT_EQ(back[0].max_violation, 0.125);
    ASSERT_TRUE(back[0].witness.has_value());
    EXPECT_EQ(back[0].witness->node, 17u);
    EXPECT_EQ(back[0].witness->psi, 0.75);
    EXPECT_FALSE(back[0].witness->v.has_value());
    EXPECT_EQ(back[1].status, CheckStatus::inconclusive);
    EXPECT_FALSE(std::isfinite(back[1].max_violation));
    EXPECT_FALSE(back[1].witness.has_value());
    EXPECT_EQ(io::report_json(back), text);
}

TEST(Report, MalformedRejected) {
    EXPECT_THROW(io::parse_report_json("{}"), ConfigError);
    EXPECT_THROW(io::parse_report_json(R"([{"check_id": "x", "status": "maybe"}])"), ConfigError);
}

TEST(Manifest, FieldsPresent) {
    io::Manifest m;
    m.scene_name = "w";
    m.scene_hash = "0123456789abcdef";
    m.seed = 3;
    m.times = {0.0, 0.5};
    m.files = {"trace.csv"};
    m.status = "step_failed";
    m.error = "boom";
    const std::string j = io::manifest_json(m);
    for (const char* key : {"\"scene\"", "\"scene_hash\"", "\"seed\"", "\"times\"", "\"files\"",
                            "\"step_failed\"", "\"boom\""})
        EXPECT_NE(j.find(key), std::string::npos) << key;
}

TEST(Svg, FrameIsSelfContained) {
    const Snapshot s = make_snapshot(0.0, corpus_curve("bent_line", 101));
    const std::string svg = io::svg_frame(s, 4.0);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("<path"), std::string::npos);
}

TEST(OracleTables, ReaperHasLogTwoRow) {
    std::stringstream out;
    io::write_reaper_table(out, 0.0, 5.0, 20);
    std::string line;
    std::getline(out, line);
    EXPECT_EQ(line, "t,x,y");
    bool found = false;
    while (std::getline(out, line)) {
        double t = 0;
        double x = 0;
        double y = 0;
        ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &x, &y), 3) << line;
        if (x == std::log(2.0)) {
            found = true;
            EXPECT_NEAR(y, kPi / 6, 1e-15);
        }
    }
    EXPECT_TRUE(found);
}

TEST(OracleTables, WedgeAndCircleHeaders) {
    std::stringstream w;
    io::write_wedge_table(w, solve_wedge_profile(kPi / 2, 1e-3));
    std::string line;
    std::getline(w, line);
    EXPECT_EQ(line, "psi,kappa_beta,x,y,D_beta");
    std::stringstream c;
    io::write_circle_table(c, 1.0, 0.25, 8);
    std::getline(c, line);
    EXPECT_EQ(line, "t,node_index,x,y");
    std::size_t rows = 0;
    while (std::getline(c, line)) ++rows;
    EXPECT_EQ(rows, 8u);
}

TEST(Simulate, DeterministicBytes) {
    io::Scene s = io::parse_scene(kMinimal);
    auto csv_of = [&]() {
        std::stringstream out;
        io::write_trace_csv(out, io::simulate(s));
        return out.str();
    };
    EXPECT_EQ(csv_of(), csv_of());
    s.initial.generator = "random_wiggle";
    s.initial.seed = 11;
    const std::string a = csv_of();
    EXPECT_EQ(a, csv_of());
    s.initial.seed = 12;
    EXPECT_NE(a, csv_of());
}
