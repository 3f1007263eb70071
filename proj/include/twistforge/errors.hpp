#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace twistforge {

struct TruncationMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ArityMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Series did not fit any closed-form ansatz, or fit more than one.
struct RecognitionError : std::runtime_error {
  std::vector<std::string> candidates;
  RecognitionError(const std::string& what, std::vector<std::string> c = {})
      : std::runtime_error(what), candidates(std::move(c)) {}
};

/// Pairing requested on an element outside the translation sector.
struct SectorError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct HermiticityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Antisymmetrised quadratic coproduct part not expressible through single
/// coordinates; carries the residual rendering.
struct NonLieError : std::runtime_error {
  std::string residual;
  NonLieError(const std::string& what, std::string r) : std::runtime_error(what), residual(std::move(r)) {}
};

/// Numeric grid too coarse or too small for the requested states.
struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace twistforge
