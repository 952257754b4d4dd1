#include "segconv/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace segconv {

namespace {
const Cplx I(0.0, 1.0);

int auto_points(const GridFunction& f, Cplx lambda, double b, int requested) {
    if (requested > 0) return requested;
    int deg = f.effective_degree();
    int osc = static_cast<int>((std::abs(lambda.real()) + std::abs(lambda.imag())) * b * 0.5);
    return std::clamp((deg + osc) / 2 + 24, 48, 200);
}

// int_0^x exp(i lambda (x - xi)) f(xi) dxi by a mapped Gauss rule.
Cplx duhamel(const GridFunction& f, Cplx lambda, double x, const QuadratureRule& gl) {
    Cplx acc(0.0);
    for (size_t q = 0; q < gl.nodes.size(); ++q) {
        double xi = 0.5 * x * (gl.nodes[q] + 1.0);
        acc += 0.5 * x * gl.weights[q] * std::exp(I * lambda * (x - xi)) * f.evaluate(xi);
    }
    return acc;
}
}  // namespace

ResolventResult apply_resolvent(const SigmaSpec& sigma, const CharacteristicFn& cf, Cplx lambda,
                                const GridFunction& f, const ResolventOptions& opts) {
    const GridPtr& grid = f.grid();
    const double b = grid->length();
    Cplx det = cf.delta(lambda);
    if (std::abs(det) <= opts.singular_factor * opts.tol_zero) {
        // locate the offending eigenvalue for the error report
        Cplx z = lambda;
        std::optional<Cplx> nearest;
        for (int it = 0; it < 30; ++it) {
            Cplx dp = cf.delta_derivative(z, 1);
            if (std::abs(dp) < 1e-300) break;
            Cplx step = cf.delta(z) / dp;
            z -= step;
            if (std::abs(step) < 1e-13 * (1.0 + std::abs(z))) {
                nearest = z;
                break;
            }
        }
        std::ostringstream os;
        os << "resolvent is singular: |Delta(lambda)| = " << std::abs(det);
        throw SingularResolvent(os.str(), nearest);
    }

    const auto& gl = gauss_legendre(auto_points(f, lambda, b, opts.quad_points));

    const int n = grid->size();
    std::vector<Cplx> inner(n);
    for (int j = 0; j < n; ++j) inner[j] = duhamel(f, lambda, grid->nodes()[j], gl);

    SigmaRule rule = sigma.rule(grid);
    Cplx c1(0.0), c2(0.0);
    if (rule.on_grid) {
        for (size_t k = 0; k < rule.nodes.size(); ++k) {
            c1 += rule.weights[k] * f[static_cast<int>(k)];
            c2 += rule.weights[k] * inner[k];
        }
    } else {
        for (size_t k = 0; k < rule.nodes.size(); ++k) {
            c1 += rule.weights[k] * f.evaluate(rule.nodes[k]);
            c2 += rule.weights[k] * duhamel(f, lambda, rule.nodes[k], gl);
        }
    }
    Cplx boundary_coeff = (c1 + I * lambda * c2) / det;

    std::vector<Cplx> yv(n);
    for (int j = 0; j < n; ++j)
        yv[j] = I * inner[j] + std::exp(I * lambda * grid->nodes()[j]) * boundary_coeff;
    GridFunction y(grid, std::move(yv));

    GridFunction dy = y.derivative();
    double res_ode = 0.0;
    for (int j = 0; j < n; ++j)
        res_ode = std::max(res_ode, std::abs(-I * dy[j] - lambda * y[j] - f[j]));
    double res_bc = std::abs(apply_U(sigma, y));
    return ResolventResult{std::move(y), res_ode, res_bc};
}

GridFunction apply_L(const SigmaSpec& sigma, const GridFunction& y, DomainCheck* check,
                     double tol_boundary) {
    if (check) {
        check->u_abs = std::abs(apply_U(sigma, y));
        check->y_norm = y.l2_norm();
        check->in_domain = check->u_abs <= tol_boundary * std::max(check->y_norm, 1e-300);
    }
    GridFunction dy = y.derivative();
    return Cplx(0.0, -1.0) * dy;
}

}  // namespace segconv
