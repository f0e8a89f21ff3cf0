#pragma once

#include "csf/curve.hpp"
#include "csf/errors.hpp"
#include "csf/exact.hpp"
#include "csf/flow.hpp"
#include "csf/functionals.hpp"
#include "csf/generators.hpp"
#include "csf/io.hpp"
#include "csf/numerics.hpp"
#include "csf/vec2.hpp"
#include "csf/verifier.hpp"
