#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "csf/exact.hpp"
#include "csf/flow.hpp"
#include "csf/generators.hpp"
#include "csf/verifier.hpp"

namespace csf::io {

/// Malformed or invalid scene. line and column are 1-based; 0 when unknown.
class SceneError : public ConfigError {
public:
    SceneError(const std::string& message, std::size_t line, std::size_t column, std::string pointer = {});
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }
    [[nodiscard]] const std::string& pointer() const noexcept { return pointer_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string pointer_;
};

struct OutputOptions {
    std::string directory{"out"};
    bool csv{true};
    bool svg{false};
    bool json{true};
};

struct Scene {
    int version{1};
    std::string name;
    InitialCurveSpec initial;
    FlowConfig flow;
    /// Check ids in request order; empty when the scene has no checks entry.
    std::vector<std::string> checks;
    VerifyOptions verify;
    OutputOptions outputs;
};

/// Strict parse: unknown keys and wrong types are SceneErrors carrying the line and column.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::filesystem::path& path);

/// Canonical JSON of a scene with every default filled in.
std::string scene_json(const Scene& scene);
/// 16 hex digits of FNV-1a over scene_json.
std::string scene_hash(const Scene& scene);

/// Scene with n, dt and record times refined by 2^level in space (dt by 4^level for explicit runs,
/// 2^level otherwise).
Scene refined(const Scene& scene, unsigned level);

PlanarCurve initial_curve(const Scene& scene);
/// Throws RunError with the partial trace on a step failure.
FlowTrace simulate(const Scene& scene);

/// 17 significant digits.
std::string format_number(double value);

inline constexpr std::string_view kTraceHeader = "t,node_index,u,x,y,psi,kappa,s";

/// Rows sorted by (t, node_index); closed curves list each node once.
void write_trace_csv(std::ostream& out, const FlowTrace& trace);

struct TraceRow {
    double t{0.0};
    std::size_t node_index{0};
    double u{0.0};
    double x{0.0};
    double y{0.0};
    double psi{0.0};
    double kappa{0.0};
    double s{0.0};
};
std::vector<TraceRow> read_trace_csv(std::istream& in);

/// Curve as one polyline path, radial ends drawn as rays out to radius.
std::string svg_frame(const Snapshot& snapshot, double radius);

std::string report_json(const std::vector<CheckReport>& reports);
std::vector<CheckReport> parse_report_json(std::string_view text);

struct Manifest {
    std::string scene_name;
    std::string scene_hash;
    std::uint64_t seed{0};
    std::vector<double> times;
    std::vector<std::string> files;
    std::string status{"ok"};
    std::string error;
};
std::string manifest_json(const Manifest& manifest);

void write_wedge_table(std::ostream& out, const WedgeProfile& profile);
void write_oval_table(std::ostream& out, double a, double t, std::size_t n);
/// Includes the row at x = t + ln 2.
void write_reaper_table(std::ostream& out, double t, double x_max, std::size_t n);
void write_circle_table(std::ostream& out, double radius, double t, std::size_t n);

}  // namespace csf::io
