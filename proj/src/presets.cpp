#include "segconv/presets.hpp"

#include <numbers>

namespace segconv {

PresetSetup make_preset(const std::string& name, int n) {
    const Segment seg(std::numbers::pi);
    auto grid = make_grid(seg, n);
    if (name == "zero") return {grid, SigmaSpec::zero(seg)};
    if (name == "antiperiodic") return {grid, SigmaSpec::constant_imag(seg, 0.5)};
    if (name == "empty") return {grid, SigmaSpec::indicator_i(seg, seg.b)};
    if (name == "double") {
        auto samples = GridFunction::sample(grid, [&](double x) {
            return Cplx(0.0, fixture::kDoubleAlpha + fixture::kDoubleGamma * x / seg.b);
        });
        return {grid, SigmaSpec::sampled(std::move(samples))};
    }
    throw ConfigError("unknown preset '" + name + "' (expected zero, antiperiodic, empty, double)");
}

}  // namespace segconv
