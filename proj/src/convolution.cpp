#include "segconv/convolution.hpp"

#include <algorithm>
#include <cmath>

namespace segconv {

namespace {
const Cplx I(0.0, 1.0);

// Clenshaw evaluation of the Chebyshev interpolant, truncated at the
// effective degree.  Cheaper than barycentric inside the O(n^2 m) quadrature
// loops; interpolates the same polynomial to rounding.
class ChebEvaluator {
  public:
    explicit ChebEvaluator(const GridFunction& f) : b_(f.grid()->length()) {
        a_ = f.cheb_coefficients();
        double amax = 0.0;
        for (const Cplx& c : a_) amax = std::max(amax, std::abs(c));
        size_t keep = 1;
        for (size_t k = 0; k < a_.size(); ++k)
            if (std::abs(a_[k]) > 1e-14 * amax) keep = k + 1;
        a_.resize(keep);
    }

    Cplx operator()(double x) const {
        double t = 1.0 - 2.0 * x / b_;
        const int n = static_cast<int>(a_.size());
        Cplx u1(0.0), u2(0.0);
        for (int k = n - 1; k >= 1; --k) {
            Cplx u = a_[k] + 2.0 * t * u1 - u2;
            u2 = u1;
            u1 = u;
        }
        return a_[0] + t * u1 - u2;
    }

    int degree() const { return static_cast<int>(a_.size()) - 1; }

  private:
    std::vector<Cplx> a_;
    double b_;
};

// int_t^x f(xi) g(x + t - xi) dxi on the mapped Gauss rule (oriented).
Cplx kernel_integral(const ChebEvaluator& f, const ChebEvaluator& g, double x, double t,
                     const QuadratureRule& gl) {
    const double half = 0.5 * (x - t);
    const double mid = 0.5 * (x + t);
    Cplx acc(0.0);
    for (size_t q = 0; q < gl.nodes.size(); ++q) {
        double xi = mid + half * gl.nodes[q];
        acc += gl.weights[q] * f(xi) * g(x + t - xi);
    }
    return half * acc;
}

int pick_quad(int deg_f, int deg_g, int min_quad, int n) {
    return std::clamp((deg_f + deg_g) / 2 + 14, min_quad, n + 8);
}
}  // namespace

ConvolutionEngine::ConvolutionEngine(SigmaSpec sigma, GridPtr grid, int min_quad)
    : sigma_(std::move(sigma)), grid_(std::move(grid)), min_quad_(min_quad) {
    if (sigma_.segment().b != grid_->length()) throw ConfigError("sigma and grid segments differ");
}

Cplx ConvolutionEngine::circ(const GridFunction& f, const GridFunction& g, double x, double t) const {
    const double b = grid_->length();
    if (!(x >= 0.0 && x <= b && t >= 0.0 && t <= b)) throw DomainError("circ arguments outside [0,b]");
    f.check_same_family(g);
    ChebEvaluator fe(f), ge(g);
    const auto& gl = gauss_legendre(pick_quad(fe.degree(), ge.degree(), min_quad_, grid_->size()));
    return kernel_integral(fe, ge, x, t, gl);
}

GridFunction ConvolutionEngine::convolve(const GridFunction& f, const GridFunction& g) const {
    f.check_same_family(g);
    if (!f.grid()->same_family(*grid_)) throw ConfigError("inputs use a different node family");
    const int n = grid_->size();
    const auto& xs = grid_->nodes();
    const double b = grid_->length();

    ChebEvaluator fe(f), ge(g);
    const auto& gl = gauss_legendre(pick_quad(fe.degree(), ge.degree(), min_quad_, n));

    std::vector<Cplx> out(n);
    switch (sigma_.kind()) {
        case SigmaKind::Zero: {
            for (int i = 0; i < n; ++i) out[i] = I * kernel_integral(fe, ge, xs[i], 0.0, gl);
            break;
        }
        case SigmaKind::ConstantImag: {
            // int_0^b conj(sigma) dF/dmu dmu = -i alpha (F(x,b) - F(x,0))
            const double a = sigma_.alpha();
            for (int i = 0; i < n; ++i) {
                Cplx F0 = kernel_integral(fe, ge, xs[i], 0.0, gl);
                Cplx Fb = kernel_integral(fe, ge, xs[i], b, gl);
                out[i] = I * ((1.0 - a) * F0 + a * Fb);
            }
            break;
        }
        case SigmaKind::IndicatorI: {
            const double c = sigma_.indicator_cutoff();
            for (int i = 0; i < n; ++i) out[i] = I * kernel_integral(fe, ge, xs[i], c, gl);
            break;
        }
        case SigmaKind::Sampled: {
            GridFunction gp = g.derivative();
            ChebEvaluator gpe(gp);
            // mu-integrand bandwidth is set by f, g and sigma, not by the grid
            // size, so a sub-sampled Gauss rule in mu loses nothing.
            std::vector<Cplx> sbar(sigma_.samples().values());
            for (Cplx& v : sbar) v = std::conj(v);
            ChebEvaluator se(GridFunction(grid_, std::move(sbar)));
            const int m_mu = std::clamp(se.degree() + (fe.degree() + ge.degree()) / 2 + 16, min_quad_, n);
            const auto& glm = gauss_legendre(m_mu);
            std::vector<double> mus(m_mu);
            std::vector<Cplx> wts(m_mu);
            for (int k = 0; k < m_mu; ++k) {
                mus[k] = 0.5 * b * (glm.nodes[k] + 1.0);
                wts[k] = 0.5 * b * glm.weights[k] * se(mus[k]);
            }
            for (int i = 0; i < n; ++i) {
                const double x = xs[i];
                Cplx gux(0.0);  // int_0^b conj(sigma) dF/dmu dmu
                for (int k = 0; k < m_mu; ++k) {
                    Cplx dF = -fe(mus[k]) * ge(x) + kernel_integral(fe, gpe, x, mus[k], gl);
                    gux += wts[k] * dF;
                }
                out[i] = I * kernel_integral(fe, ge, x, 0.0, gl) - gux;
            }
            break;
        }
    }
    return GridFunction(grid_, std::move(out));
}

GridFunction ConvolutionEngine::resolvent_form(const CharacteristicFn& cf, Cplx lambda,
                                               const GridFunction& f, double tol_zero) const {
    Cplx det = cf.delta(lambda);
    if (std::abs(det) <= 1e3 * tol_zero)
        throw SingularResolvent("resolvent kernel is singular: |Delta(lambda)| = " + std::to_string(std::abs(det)),
                                std::nullopt);
    auto kernel = GridFunction::sample(grid_, [&](double x) { return std::exp(I * lambda * x) / det; });
    return convolve(kernel, f);
}

}  // namespace segconv
