#include "segconv/characteristic.hpp"

#include <cmath>

namespace segconv {

namespace {
const Cplx I(0.0, 1.0);
constexpr double kOverflowGuard = 700.0;
}  // namespace

CharacteristicFn::CharacteristicFn(SigmaSpec sigma, GridPtr grid)
    : sigma_(std::move(sigma)), grid_(std::move(grid)), rule_(sigma_.rule(grid_)) {
    if (sigma_.segment().b != grid_->length()) throw ConfigError("sigma and grid segments differ");
}

void CharacteristicFn::guard(Cplx lambda) const {
    if (std::abs(lambda.imag()) * grid_->length() > kOverflowGuard)
        throw NumericalError("characteristic function overflow: |Im lambda| * b too large");
}

Cplx CharacteristicFn::delta(Cplx lambda) const {
    guard(lambda);
    const double b = grid_->length();
    switch (sigma_.kind()) {
        case SigmaKind::Zero:
            return Cplx(1.0);
        case SigmaKind::ConstantImag: {
            double a = sigma_.alpha();
            return (1.0 - a) + a * std::exp(I * lambda * b);
        }
        case SigmaKind::IndicatorI:
            return std::exp(I * lambda * sigma_.indicator_cutoff());
        case SigmaKind::Sampled:
            return delta_quadrature(lambda);
    }
    return Cplx(1.0);
}

Cplx CharacteristicFn::delta_quadrature(Cplx lambda) const {
    guard(lambda);
    Cplx acc(0.0);
    for (size_t k = 0; k < rule_.nodes.size(); ++k)
        acc += rule_.weights[k] * std::exp(I * lambda * rule_.nodes[k]);
    return 1.0 - lambda * acc;
}

Cplx CharacteristicFn::delta_derivative(Cplx lambda, int j) const {
    if (j < 1 || j > 12) throw ConfigError("derivative order must be in [1,12]");
    guard(lambda);
    const double b = grid_->length();
    switch (sigma_.kind()) {
        case SigmaKind::Zero:
            return Cplx(0.0);
        case SigmaKind::ConstantImag:
            return sigma_.alpha() * std::pow(I * b, j) * std::exp(I * lambda * b);
        case SigmaKind::IndicatorI: {
            double c = sigma_.indicator_cutoff();
            return std::pow(I * c, j) * std::exp(I * lambda * c);
        }
        case SigmaKind::Sampled: {
            // d^j/dlambda^j [lambda exp(i lambda x)] = (lambda (ix)^j + j (ix)^{j-1}) exp(i lambda x)
            Cplx acc(0.0);
            for (size_t k = 0; k < rule_.nodes.size(); ++k) {
                Cplx ix = I * rule_.nodes[k];
                Cplx poly = lambda * std::pow(ix, j) + static_cast<double>(j) * std::pow(ix, j - 1);
                acc += rule_.weights[k] * poly * std::exp(I * lambda * rule_.nodes[k]);
            }
            return -acc;
        }
    }
    return Cplx(0.0);
}

Cplx CharacteristicFn::g_function(const GridFunction& f, double x, Cplx lambda, int quad_points) const {
    guard(lambda);
    if (!(x >= 0.0 && x <= grid_->length())) throw DomainError("g_function point outside [0,b]");
    const auto& gl = gauss_legendre(quad_points);
    Cplx acc(0.0);
    for (int q = 0; q < quad_points; ++q) {
        double xi = 0.5 * x * (gl.nodes[q] + 1.0);
        acc += 0.5 * x * gl.weights[q] * f.evaluate(xi) * std::exp(-I * lambda * xi);
    }
    return I * delta(lambda) * acc;
}

}  // namespace segconv
