#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "csf/curve.hpp"

namespace csf {

/// Initial data request. Generator-specific numeric parameters go in params;
/// missing keys take documented defaults, unknown keys are rejected.
struct InitialCurveSpec {
    std::string generator{"wedge"};
    std::size_t n{1001};
    double angle_a{std::numbers::pi};
    double angle_b{std::numbers::pi / 2};
    double pin_radius{8.0};
    std::uint64_t seed{1};
    std::map<std::string, double> params;
    std::vector<Vec2> points;
};

/// Generators: wedge, bent_line, spiral, zigzag, random_wiggle, perturbed_wedge,
/// circle, oval, from_points.
PlanarCurve build_initial_curve(const InitialCurveSpec& spec);

const std::vector<std::string>& generator_names();
/// Parameter names with defaults for a generator; throws ConfigError for unknown generators.
const std::map<std::string, double>& generator_defaults(const std::string& generator);

/// Opening beta = pi - alpha of the sector between the ends, with alpha the last-end angle
/// after rotating the first end onto angle pi. Throws ConfigError unless alpha lies in [0, pi).
double sector_opening(double angle_a, double angle_b);

/// Rotation taking the first end onto angle pi.
inline double canonical_rotation(double angle_a) { return std::numbers::pi - angle_a; }

}  // namespace csf
