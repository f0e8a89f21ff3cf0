#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csf/flow.hpp"
#include "csf/functionals.hpp"

namespace csf {

enum class CheckStatus { pass, fail, inconclusive };

const char* to_string(CheckStatus status) noexcept;
std::optional<CheckStatus> parse_status(const std::string& text);

/// Location of the worst violation: a pair, a node, or a tangent angle, at time t.
struct Witness {
    double t{0.0};
    std::optional<std::size_t> v;
    std::optional<std::size_t> w;
    std::optional<std::size_t> node;
    std::optional<double> psi;
};

struct CheckReport {
    std::string check_id;
    CheckStatus status{CheckStatus::inconclusive};
    double max_violation{0.0};
    std::optional<Witness> witness;
    double tolerance{0.0};
    std::string notes;
};

/// tolerance = relative * max(scale, 1) + c1 h^2 + c2 dt + c3 eps_pin
struct SlackModel {
    double relative{0.01};
    double c1{4.0};
    double c2{0.5};
    double c3{1.0};

    [[nodiscard]] double discretization(double h, double dt, double eps_pin) const noexcept {
        return c1 * h * h + c2 * dt + c3 * eps_pin;
    }
    [[nodiscard]] double tolerance(double scale, double h, double dt, double eps_pin) const noexcept {
        return relative * std::max(scale, 1.0) + discretization(h, dt, eps_pin);
    }
};

struct VerifyOptions {
    SlackModel slack;
    /// Largest side of the strided pair grid.
    std::size_t grid_side{250};
    /// Replaces the computed tolerance for the named check.
    std::map<std::string, double> tolerance_overrides;
    /// Number of worker threads for run_checks; 0 means hardware concurrency.
    std::size_t threads{1};
    /// Fixed-label window used by the heat residual check.
    std::size_t window_steps{160};
    /// Window step as a multiple of h_min^2; the O(dt) error of the fine run is shared by all strides.
    double window_dt_factor{0.05};
    /// Start time for the heat residual window; defaults to the first recorded t > 0.
    std::optional<double> window_start;
};

/// Node-index pairs v <= w: a strided grid plus the supplied witnesses and (first, last).
struct PairGrid {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<double> times;
};

PairGrid make_pair_grid(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& witnesses,
                        std::size_t side = 250);

/// Quantities shared by the checks, computed from the first snapshot.
struct TraceContext {
    double beta{0.0};
    double alpha{0.0};
    double a_minus{0.0};
    double a_plus{0.0};
    double h{0.0};
    double dt{0.0};
    double eps_pin{0.0};
    bool radial{false};
};

/// Throws ConfigError for an empty trace.
TraceContext trace_context(const FlowTrace& trace);

/// Throws Error if A(first,last) or Psi(first,last) moved by more than roundoff under a rotation.
void assert_rotation_invariant(const Snapshot& before, const Snapshot& after);

CheckReport check_harnack_bounds(const FlowTrace& trace, const VerifyOptions& options = {});
CheckReport check_area_control(const FlowTrace& trace, const VerifyOptions& options = {});
CheckReport check_turning_bounds(const FlowTrace& trace, const VerifyOptions& options = {});
CheckReport check_graphicality(const FlowTrace& trace, const VerifyOptions& options = {});
CheckReport check_total_area_law(const FlowTrace& trace, const VerifyOptions& options = {});
CheckReport check_polar_harnack(const FlowTrace& trace, const VerifyOptions& options = {});
/// Single snapshot in any frame; alpha is the canonical second end angle.
CheckReport check_extremal_turning(const Snapshot& snapshot, double alpha, double tolerance);
/// Every recorded t > 0 of the trace.
CheckReport check_extremal_turning(const FlowTrace& trace, const VerifyOptions& options = {});
CheckReport check_support_curvature(const FlowTrace& trace, const VerifyOptions& options = {});
CheckReport check_hamilton(const FlowTrace& trace, const VerifyOptions& options = {});
CheckReport check_end_decay(const FlowTrace& trace, const VerifyOptions& options = {});
/// Window must be a fixed-label explicit run with every step recorded, at least 33 steps and (n - 1) divisible by 4.
CheckReport check_heat_residuals(const FlowTrace& window, const VerifyOptions& options = {});
CheckReport check_blowdown(const FlowTrace& trace, const VerifyOptions& options = {});

/// Residuals of the three heat equations on one label stride of a window.
struct HeatResiduals {
    std::size_t stride{1};
    double psi{0.0};
    double area{0.0};
    double harnack{0.0};
};

/// Centred 16 steps before the window's end; time offsets are stride^2 steps.
HeatResiduals heat_residuals_at_stride(const FlowTrace& window, std::size_t stride);

/// Window for check_heat_residuals built from a trace snapshot, resampled to 4k+1 nodes.
FlowTrace heat_window(const FlowTrace& trace, const VerifyOptions& options = {});

struct DecayFit {
    double max_ratio{0.0};
    double rate{0.0};
    std::size_t samples{0};
};

/// |y| / ((pi/2) e^{t-x}) and the fitted exponential decay rate for samples (x, y) with x >= t.
DecayFit fit_end_decay(const std::vector<double>& x, const std::vector<double>& y, double t);

const std::vector<std::string>& check_ids();

/// Runs the named checks (all when empty) and returns reports in the order requested.
/// Throws ConfigError for an unknown id.
std::vector<CheckReport> run_checks(const FlowTrace& trace, const std::vector<std::string>& ids = {},
                                    const VerifyOptions& options = {});

}  // namespace csf
