#pragma once

#include <string>

#include "segconv/sigma.hpp"

namespace segconv {

/// Built-in configurations:
///   zero          sigma = 0 on [0,pi]          (Delta identically 1)
///   antiperiodic  sigma = i/2 on [0,pi]        (spectrum = odd integers)
///   empty         sigma = i on all of [0,pi]   (empty spectrum)
///   double        sigma = i(alpha + gamma x/b) tuned so Delta has a double
///                 zero at lambda = i * 0.73357791...; see
///                 tests/fixtures/double_zero.json for the tuning record.
struct PresetSetup {
    GridPtr grid;
    SigmaSpec sigma;
};

namespace fixture {
// Frozen double-zero tuning (regenerate with tests/fixtures/regen_double_zero.py).
inline constexpr double kDoubleAlpha = 0.5;
inline constexpr double kDoubleGamma = 1.8909105774710098;
inline constexpr double kDoubleLambdaIm = 0.7335779147178846;
inline constexpr double kDoubleDelta2Re = -1.1194227172831857;
}  // namespace fixture

PresetSetup make_preset(const std::string& name, int n = 128);

}  // namespace segconv
