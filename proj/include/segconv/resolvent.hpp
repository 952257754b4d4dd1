#pragma once

#include "segconv/characteristic.hpp"
#include "segconv/grid.hpp"
#include "segconv/sigma.hpp"

namespace segconv {

/// Resolvent application with its certification residuals.
struct ResolventResult {
    GridFunction y;
    double residual_ode;       // max over grid of |-i y' - lambda y - f|
    double residual_boundary;  // |U(y)|
};

struct ResolventOptions {
    double tol_zero = 1e-11;
    double singular_factor = 1e3;  // |Delta| <= factor * tol_zero is singular
    int quad_points = 0;           // 0: sized from the data bandwidth
};

/// (L - lambda I)^{-1} f by the explicit formula
///   y(x) = i int_0^x e^{i lambda (x-xi)} f(xi) dxi
///        + e^{i lambda x}/Delta(lambda) * ( int_0^b f conj(sigma)
///          + i lambda int_0^b conj(sigma(t)) int_0^t e^{i lambda (t-xi)} f(xi) dxi dt ).
/// Throws SingularResolvent near zeros of Delta, carrying the nearest
/// eigenvalue when a local search finds one.
ResolventResult apply_resolvent(const SigmaSpec& sigma, const CharacteristicFn& cf, Cplx lambda,
                                const GridFunction& f, const ResolventOptions& opts = {});

struct DomainCheck {
    double u_abs = 0.0;
    double y_norm = 0.0;
    bool in_domain = true;
};

/// L y = -i y'.  When |U(y)| exceeds tol_boundary * ||y||_L2 the result is
/// still returned but the check reports y outside the operator domain.
GridFunction apply_L(const SigmaSpec& sigma, const GridFunction& y, DomainCheck* check = nullptr,
                     double tol_boundary = 1e-7);

}  // namespace segconv
