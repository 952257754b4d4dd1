#pragma once

#include "segconv/grid.hpp"
#include "segconv/sigma.hpp"

namespace segconv {

/// The entire function Delta(lambda) = 1 - lambda * integral over [0,b] of
/// exp(i lambda x) conj(sigma(x)) dx, whose zero set (with multiplicity) is
/// the spectrum of L.  Presets evaluate through their closed forms:
///   sigma = 0          ->  1
///   sigma = i*alpha    ->  (1-alpha) + alpha exp(i lambda b)
///   sigma = i 1_[0,c]  ->  exp(i lambda c)
/// Sampled sigma goes through the grid quadrature; Delta(0) = 1 identically.
class CharacteristicFn {
  public:
    CharacteristicFn(SigmaSpec sigma, GridPtr grid);

    const SigmaSpec& sigma() const { return sigma_; }
    const GridPtr& grid() const { return grid_; }
    bool has_closed_form() const { return sigma_.kind() != SigmaKind::Sampled; }

    Cplx delta(Cplx lambda) const;

    /// Quadrature evaluation regardless of preset (cross-validation path).
    Cplx delta_quadrature(Cplx lambda) const;

    /// j-th lambda-derivative, 1 <= j <= 12, by differentiating under the
    /// integral (or the closed form); never by divided differences.
    Cplx delta_derivative(Cplx lambda, int j) const;

    /// G(f;x,lambda) = i Delta(lambda) * integral over [0,x] of f(xi) exp(-i lambda xi) dxi.
    /// Vanishes with all lambda-derivatives when lambda is a zero of Delta.
    Cplx g_function(const GridFunction& f, double x, Cplx lambda, int quad_points = 96) const;

  private:
    void guard(Cplx lambda) const;
    SigmaSpec sigma_;
    GridPtr grid_;
    SigmaRule rule_;
};

}  // namespace segconv
