#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "twistforge/duality.hpp"

namespace twistforge {

struct ParseError : std::invalid_argument {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " at position " + std::to_string(pos)), position(pos) {}
};

/// Reads the rendered form of relation values: sums of products of rationals,
/// i, parameter names, p0..p3, x0..x3 (at most linearly), powers and
/// cos/sin/cosh/sinh/exp of linear momentum forms.
PhaseValue parse_phase_value(std::string_view text);
/// Same grammar without coordinates.
MomentumFunction parse_momentum_function(std::string_view text);
/// Same grammar with parameters and numbers only.
ParamScalar parse_scalar(std::string_view text);

}  // namespace twistforge
