#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csf/curve.hpp"
#include "csf/errors.hpp"

namespace csf {

enum class Scheme { explicit_euler, semi_implicit };

struct FlowConfig {
    double dt{1e-3};
    /// 0 keeps the node count of the initial curve.
    std::size_t n_nodes{0};
    double t_end{1.0};
    double pin_radius{8.0};
    Scheme scheme{Scheme::semi_implicit};
    /// 0 disables resampling.
    std::size_t resample_every{25};
    /// t = 0 is always recorded; t_end is recorded when the list is empty.
    std::vector<double> record_times;
    /// Regularizing explicit first step with dt = h^2/8.
    bool smoothing_step{true};
};

/// Validates FlowConfig invariants against an initial curve; throws ConfigError.
void validate_config(const FlowConfig& config, const PlanarCurve& initial);

struct Snapshot {
    double t{0.0};
    PlanarCurve curve;
    TangentField lift;
    CurvatureField curvature;
};

Snapshot make_snapshot(double t, PlanarCurve curve);

struct FlowTrace {
    std::vector<Snapshot> snapshots;
    FlowConfig config;
    std::string provenance;
};

/// Aborted run; carries the snapshots recorded before the failure.
class RunError : public StepError {
public:
    RunError(const std::string& what, FlowTrace partial)
        : StepError(what), partial_(std::make_shared<FlowTrace>(std::move(partial))) {}
    [[nodiscard]] const FlowTrace& partial() const noexcept { return *partial_; }

private:
    std::shared_ptr<FlowTrace> partial_;
};

/// In-place integrator state reused between steps.
class Stepper {
public:
    explicit Stepper(bool closed) : closed_(closed) {}

    /// Advance points by dt; end nodes of open curves are held fixed.
    void advance(std::vector<Vec2>& points, double dt, Scheme scheme);

    /// Discrete Laplace-Beltrami of the points (zero at pinned ends).
    [[nodiscard]] std::vector<Vec2> laplacian(const std::vector<Vec2>& points) const;

private:
    void coefficients(const std::vector<Vec2>& points);

    bool closed_;
    std::vector<double> a_;
    std::vector<double> c_;
    std::vector<double> work_;
    std::vector<Vec2> rhs_;
};

/// One step of the flow from a snapshot.
Snapshot step(const Snapshot& snapshot, double dt, Scheme scheme = Scheme::semi_implicit);

FlowTrace run(const PlanarCurve& initial, const FlowConfig& config, std::string provenance = {});

enum class Frame { canonical, symmetric };

/// Rotation taking the trace's ends to the requested frame; nullopt without radial ends.
std::optional<double> frame_rotation(const PlanarCurve& curve, Frame frame);

/// Every snapshot rotated about the origin, derived fields recomputed.
FlowTrace rotated(const FlowTrace& trace, double angle);
Snapshot rotated(const Snapshot& snapshot, double angle);

/// sup |psi| of the snapshot in the given frame.
std::optional<double> max_abs_tangent_angle(const Snapshot& snapshot, Frame frame);

inline constexpr double kGraphicalMargin = 1e-6;

/// Earliest recorded t > 0 at which sup |psi| < pi/2 - margin in the frame.
std::optional<double> detect_graphical_time(const FlowTrace& trace, Frame frame = Frame::symmetric);

inline constexpr double kSectorResolution = 1e-3;

/// Longest run of line directions theta (sampled every kSectorResolution) whose full line through the
/// origin meets the curve exactly once, transversally. Returned as (theta_lo, theta_hi) with
/// theta_lo in [0, pi); theta_hi may exceed pi when the run wraps.
std::optional<std::pair<double, double>> detect_polar_sector(const Snapshot& snapshot);
bool line_crosses_once(const PlanarCurve& curve, double theta);

struct WindowConfig {
    double dt{0.0};
    std::size_t steps{64};
};

/// Fixed-label explicit run from a snapshot with every step recorded and no resampling.
/// Throws StepError when dt exceeds the explicit stability bound.
FlowTrace fixed_label_window(const Snapshot& start, const WindowConfig& config);
/// Window starting from the recorded snapshot of trace nearest to t0.
FlowTrace fixed_label_window(const FlowTrace& trace, double t0, const WindowConfig& config);

}  // namespace csf
