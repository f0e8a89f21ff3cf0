#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csf/csf.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kFailed = 1, kInvalid = 2, kStepFailed = 3, kInconclusive = 4 };

struct Common {
    std::string scene;
    std::string out;
    std::optional<std::uint64_t> seed;
    unsigned refine{0};
    bool strict{false};
    double view_radius{0.0};
};

std::size_t thread_cap() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CSF_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = std::min<std::size_t>(n, v);
    }
    return n;
}

void write_file(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw csf::ConfigError("cannot write " + path.string());
    out << text;
}

double frame_radius(const csf::io::Scene& scene, double requested) {
    if (requested > 0.0) return requested;
    return std::min(scene.flow.pin_radius, 3.0 + 2.0 * std::sqrt(scene.flow.t_end));
}

/// Trace CSV, SVG frames and manifest for one run.
void write_outputs(const csf::io::Scene& scene, const csf::FlowTrace& trace, const fs::path& dir,
                   const Common& opts, const std::string& status, const std::string& error) {
    csf::io::Manifest m;
    m.scene_name = scene.name;
    m.scene_hash = csf::io::scene_hash(scene);
    m.seed = scene.initial.seed;
    m.status = status;
    m.error = error;
    for (const csf::Snapshot& s : trace.snapshots) m.times.push_back(s.t);
    if (scene.outputs.csv) {
        std::ostringstream csv;
        csf::io::write_trace_csv(csv, trace);
        write_file(dir / "trace.csv", csv.str());
        m.files.push_back("trace.csv");
    }
    if (scene.outputs.svg) {
        const double radius = frame_radius(scene, opts.view_radius);
        for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%04zu.svg", k);
            write_file(dir / "frames" / name, csf::io::svg_frame(trace.snapshots[k], radius));
            m.files.push_back(std::string("frames/") + name);
        }
    }
    write_file(dir / "manifest.json", csf::io::manifest_json(m));
}

fs::path level_dir(const fs::path& base, unsigned level, unsigned levels) {
    return levels == 0 ? base : base / ("level_" + std::to_string(level));
}

csf::io::Scene prepare(const Common& opts) {
    csf::io::Scene scene = csf::io::load_scene(opts.scene);
    if (opts.seed) scene.initial.seed = *opts.seed;
    if (!opts.out.empty()) scene.outputs.directory = opts.out;
    scene.verify.threads = thread_cap();
    return scene;
}

/// Runs one level; returns the trace or the exit code of a step failure.
std::optional<csf::FlowTrace> run_level(const csf::io::Scene& scene, const fs::path& dir, const Common& opts,
                                        int& code) {
    try {
        csf::FlowTrace trace = csf::io::simulate(scene);
        write_outputs(scene, trace, dir, opts, "ok", "");
        return trace;
    } catch (const csf::RunError& e) {
        write_outputs(scene, e.partial(), dir, opts, "step_failed", e.what());
        std::cerr << "csf: " << e.what() << "\n";
        code = std::max<int>(code, kStepFailed);
        return std::nullopt;
    }
}

int cmd_simulate(const Common& opts) {
    const csf::io::Scene base = prepare(opts);
    int code = kOk;
    for (unsigned level = 0; level <= opts.refine; ++level) {
        const csf::io::Scene scene = csf::io::refined(base, level);
        const fs::path dir = level_dir(base.outputs.directory, level, opts.refine);
        if (auto trace = run_level(scene, dir, opts, code))
            std::cout << dir.string() << ": " << trace->snapshots.size() << " snapshots\n";
    }
    return code;
}

int status_code(const std::vector<csf::CheckReport>& reports, bool strict) {
    bool failed = false;
    bool inconclusive = false;
    for (const csf::CheckReport& r : reports) {
        failed = failed || r.status == csf::CheckStatus::fail;
        inconclusive = inconclusive || r.status == csf::CheckStatus::inconclusive;
    }
    if (failed) return kFailed;
    if (inconclusive && strict) return kInconclusive;
    return kOk;
}

void print_reports(const std::vector<csf::CheckReport>& reports) {
    for (const csf::CheckReport& r : reports) {
        std::printf("%-18s %-12s violation %.3e tolerance %.3e\n", r.check_id.c_str(), csf::to_string(r.status),
                    r.max_violation, r.tolerance);
    }
}

int cmd_verify(const Common& opts) {
    const csf::io::Scene base = prepare(opts);
    if (base.checks.empty()) throw csf::ConfigError("scene has no checks list");
    int code = kOk;
    bool failed = false;
    bool inconclusive = false;
    nlohmann::json study = nlohmann::json::array();
    for (unsigned level = 0; level <= opts.refine; ++level) {
        const csf::io::Scene scene = csf::io::refined(base, level);
        const fs::path dir = level_dir(base.outputs.directory, level, opts.refine);
        const auto trace = run_level(scene, dir, opts, code);
        if (!trace) continue;
        const auto reports = csf::run_checks(*trace, scene.checks, scene.verify);
        if (scene.outputs.json) write_file(dir / "report.json", csf::io::report_json(reports));
        if (opts.refine > 0) std::printf("level %u (n = %zu, dt = %g)\n", level, scene.initial.n, scene.flow.dt);
        print_reports(reports);
        const int level_code = status_code(reports, opts.strict);
        if (level_code == kFailed) failed = true;
        if (level_code == kInconclusive) inconclusive = true;
        nlohmann::json row;
        row["level"] = level;
        row["n"] = scene.initial.n;
        row["dt"] = scene.flow.dt;
        for (const csf::CheckReport& r : reports) row["max_violation"][r.check_id] = r.max_violation;
        study.push_back(row);
    }
    if (opts.refine > 0) write_file(fs::path(base.outputs.directory) / "refinement.json", study.dump(2) + "\n");
    if (code != kOk) return code;
    if (failed) return kFailed;
    return inconclusive ? kInconclusive : kOk;
}

struct OracleArgs {
    std::string kind;
    std::string out;
    double beta{std::acos(0.0)};
    double tol{1e-3};
    double a{5.0};
    double t{0.0};
    double radius{1.0};
    double x_max{10.0};
    std::size_t n{400};
};

int cmd_oracle(const OracleArgs& o) {
    std::ostringstream table;
    if (o.kind == "wedge") {
        if (!(o.beta > 0.0 && o.beta <= std::acos(-1.0))) throw csf::ConfigError("--beta must lie in (0, pi]");
        csf::io::write_wedge_table(table, *csf::wedge_profile(o.beta, o.tol));
    } else if (o.kind == "oval") {
        csf::io::write_oval_table(table, o.a, o.t, o.n);
    } else if (o.kind == "reaper") {
        if (!(o.x_max > o.t)) throw csf::ConfigError("--x-max must exceed --t");
        csf::io::write_reaper_table(table, o.t, o.x_max, o.n);
    } else if (o.kind == "circle") {
        if (!(o.radius * o.radius > 2.0 * o.t)) throw csf::ConfigError("circle is extinct at --t");
        csf::io::write_circle_table(table, o.radius, o.t, o.n);
    } else {
        throw csf::ConfigError("oracle kind must be oval, reaper, wedge or circle");
    }
    if (o.out.empty() || o.out == "-") {
        std::cout << table.str();
    } else {
        write_file(fs::absolute(o.out), table.str());
    }
    return kOk;
}

int cmd_report(const std::vector<std::string>& files, bool strict) {
    int code = kOk;
    for (const std::string& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw csf::ConfigError("cannot open report " + file);
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const auto reports = csf::io::parse_report_json(text);
        std::cout << file << "\n";
        print_reports(reports);
        code = std::max(code, status_code(reports, strict));
    }
    return code;
}

void add_scene_options(CLI::App* cmd, Common& opts) {
    cmd->add_option("--scene", opts.scene, "Scene JSON file")->required();
    cmd->add_option("--out", opts.out, "Output directory (overrides the scene)");
    cmd->add_option("--seed", opts.seed, "Seed for random generators");
    cmd->add_option("--refine", opts.refine, "Also run k successive 2x refinements");
    cmd->add_option("--view-radius", opts.view_radius, "Half-width of SVG frames");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curve shortening flow with radial ends: simulation and verification"};
    app.require_subcommand(1);

    Common sim_opts;
    CLI::App* sim = app.add_subcommand("simulate", "Run a scene and write trace, frames and manifest");
    add_scene_options(sim, sim_opts);

    Common ver_opts;
    CLI::App* ver = app.add_subcommand("verify", "Run a scene and its checks, writing report.json");
    add_scene_options(ver, ver_opts);
    ver->add_flag("--strict", ver_opts.strict, "Exit 4 if any check is inconclusive");

    OracleArgs oracle;
    CLI::App* ora = app.add_subcommand("oracle", "Write a table of an exact solution");
    ora->add_option("kind", oracle.kind, "oval | reaper | wedge | circle")->required();
    ora->add_option("--out", oracle.out, "Output CSV (stdout when omitted)");
    ora->add_option("--beta", oracle.beta, "Wedge opening");
    ora->add_option("--tol", oracle.tol, "Wedge profile tolerance");
    ora->add_option("--a", oracle.a, "Oval parameter");
    ora->add_option("--t", oracle.t, "Time");
    ora->add_option("--radius", oracle.radius, "Initial circle radius");
    ora->add_option("--x-max", oracle.x_max, "Right end of the reaper samples");
    ora->add_option("--n", oracle.n, "Sample count")->check(CLI::Range(3, 100000000));

    std::vector<std::string> report_files;
    bool report_strict = false;
    CLI::App* rep = app.add_subcommand("report", "Summarize report JSON files");
    rep->add_option("files", report_files, "report.json files")->required();
    rep->add_flag("--strict", report_strict, "Exit 4 if any check is inconclusive");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*sim) return cmd_simulate(sim_opts);
        if (*ver) return cmd_verify(ver_opts);
        if (*ora) return cmd_oracle(oracle);
        if (*rep) return cmd_report(report_files, report_strict);
    } catch (const csf::ConfigError& e) {
        std::cerr << "csf: " << e.what() << "\n";
        return kInvalid;
    } catch (const csf::DomainError& e) {
        std::cerr << "csf: " << e.what() << "\n";
        return kInvalid;
    } catch (const csf::CurveError& e) {
        std::cerr << "csf: " << e.what() << "\n";
        return kInvalid;
    } catch (const csf::NotEmbeddedError& e) {
        std::cerr << "csf: " << e.what() << "\n";
        return kInvalid;
    } catch (const csf::StepError& e) {
        std::cerr << "csf: " << e.what() << "\n";
        return kStepFailed;
    } catch (const csf::Error& e) {
        std::cerr << "csf: " << e.what() << "\n";
        return kStepFailed;
    } catch (const std::exception& e) {
        std::cerr << "csf: " << e.what() << "\n";
        return kStepFailed;
    }
    return kOk;
}
