#pragma once

#include "segconv/characteristic.hpp"
#include "segconv/grid.hpp"
#include "segconv/sigma.hpp"

namespace segconv {

/// The boundary-dependent convolution
///
///   (f * g)(x) = i U_mu{ int_mu^x f(xi) g(x + mu - xi) dxi }
///
/// with U acting on the mu-dependence.  Writing F(x,mu) for the inner
/// integral, the engine evaluates i [ F(x,0) - int_0^b (-i dF/dmu) conj(sigma) dmu ]
/// with dF/dmu always taken by the Leibniz rule,
///
///   dF/dmu = -f(mu) g(x) + int_mu^x f(xi) g'(x + mu - xi) dxi.
///
/// For piecewise-constant conj(sigma) (the Zero/ConstantImag/IndicatorI
/// presets) the mu-integral of conj(sigma) dF/dmu telescopes to boundary
/// values of F, which is both exact and fast; sampled sigma runs the full
/// quadrature in mu.
class ConvolutionEngine {
  public:
    ConvolutionEngine(SigmaSpec sigma, GridPtr grid, int min_quad = 48);

    const SigmaSpec& sigma() const { return sigma_; }
    const GridPtr& grid() const { return grid_; }

    /// Oriented kernel integral int_t^x f(xi) g(x+t-xi) dxi (negative when t > x).
    Cplx circ(const GridFunction& f, const GridFunction& g, double x, double t) const;

    GridFunction convolve(const GridFunction& f, const GridFunction& g) const;

    /// (L - lambda I)^{-1} f = (exp(i lambda x)/Delta(lambda)) * f.
    GridFunction resolvent_form(const CharacteristicFn& cf, Cplx lambda, const GridFunction& f,
                                double tol_zero = 1e-11) const;

  private:
    SigmaSpec sigma_;
    GridPtr grid_;
    int min_quad_;
};

}  // namespace segconv
