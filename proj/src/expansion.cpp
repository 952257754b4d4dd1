#include "segconv/expansion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "segconv/resolvent.hpp"

namespace segconv {

namespace {
constexpr double kPi = std::numbers::pi;
const Cplx I(0.0, 1.0);

double factorial(int k) {
    double f = 1.0;
    for (int j = 2; j <= k; ++j) f *= j;
    return f;
}

// phi_k(t) = (it)^k / k! * exp(i lambda t)
Cplx phi(int k, Cplx lambda, double t) {
    return std::pow(I * t, k) / factorial(k) * std::exp(I * lambda * t);
}

// phi_k'(t) = i (phi_{k-1}(t) + lambda phi_k(t)), with phi_{-1} = 0
Cplx phi_prime(int k, Cplx lambda, double t) {
    Cplx low = (k >= 1) ? phi(k - 1, lambda, t) : Cplx(0.0);
    return I * (low + lambda * phi(k, lambda, t));
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}
}  // namespace

double SequenceElement::block_sup_diff(const SequenceElement& other) const {
    if (blocks.size() != other.blocks.size()) throw ConfigError("sequence elements have different block counts");
    double m = 0.0;
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].size() != other.blocks[i].size())
            throw ConfigError("sequence elements have mismatched block sizes");
        for (size_t k = 0; k < blocks[i].size(); ++k)
            m = std::max(m, std::abs(blocks[i][k] - other.blocks[i][k]));
    }
    return m;
}

ExpansionEngine::ExpansionEngine(SigmaSpec sigma, GridPtr grid, int contour_points)
    : sigma_(sigma), grid_(grid), cf_(sigma, grid), conv_(sigma, grid), contour_points_(contour_points) {}

std::vector<GridFunction> ExpansionEngine::literal_root_functions(const Eigenvalue& ev) const {
    const int m = ev.multiplicity;
    if (static_cast<int>(ev.taylor.size()) != m) throw ConfigError("taylor data does not match multiplicity");
    if (std::abs(ev.taylor[0]) < 1e-12) throw ConfigError("degenerate eigenvalue data: d_0 = 0");
    std::vector<GridFunction> out;
    out.reserve(m);
    for (int s = 0; s < m; ++s) {
        out.push_back(GridFunction::sample(grid_, [&](double x) {
            Cplx acc(0.0);
            for (int j = 0; j <= s; ++j)
                acc += ev.taylor[j] / factorial(j) * std::pow(I * x, s - j) / factorial(s - j);
            return acc * std::exp(I * ev.lambda * x);
        }));
    }
    return out;
}

void ExpansionEngine::resolve_signs(const Eigenvalue& ev) const {
    if (basis_sign_ && coef_sign_) return;
    auto lit = literal_root_functions(ev);
    const GridFunction& top = lit.back();

    // Basis sign: the convolution with the top root function must be the
    // contour-integral projector.
    Rng rng(12345);
    auto f = random_smooth(grid_, rng);
    auto conv_proj = conv_.convolve(top, f);
    auto contour_proj = project_contour(ev, f, 0.05, 64);
    double plus = sup_diff(conv_proj, contour_proj);
    GridFunction neg = Cplx(-1.0, 0.0) * conv_proj;
    double minus = sup_diff(neg, contour_proj);
    double scale = std::max(1.0, contour_proj.sup_norm());
    if (std::min(plus, minus) > 1e-5 * scale)
        throw NumericalError("projector sign resolution failed: neither sign matches the contour integral");
    basis_sign_ = (minus < plus) ? -1 : 1;

    // Coefficient sign: the expansion P f = sum_k C_{m-1-k} u_k must hold with
    // the signed basis; fit the coefficients and compare with the formula.
    std::vector<GridFunction> u = lit;
    for (auto& fn : u) fn *= Cplx(*basis_sign_, 0.0);
    const int m = ev.multiplicity;
    GridFunction pf = (*basis_sign_ == -1) ? std::move(neg) : std::move(conv_proj);
    Eigen::MatrixXcd A(grid_->size(), m);
    Eigen::VectorXcd rhs(grid_->size());
    for (int j = 0; j < grid_->size(); ++j) {
        for (int k = 0; k < m; ++k) A(j, k) = u[k][j];
        rhs(j) = pf[j];
    }
    Eigen::VectorXcd fitted = A.colPivHouseholderQr().solve(rhs);
    auto literal = literal_coefficients(ev, f);
    // fitted(k) should equal C_{m-1-k}
    double plus_err = 0.0, minus_err = 0.0, size = 0.0;
    for (int k = 0; k < m; ++k) {
        plus_err = std::max(plus_err, std::abs(fitted(k) - literal[m - 1 - k]));
        minus_err = std::max(minus_err, std::abs(fitted(k) + literal[m - 1 - k]));
        size = std::max(size, std::abs(fitted(k)));
    }
    if (std::min(plus_err, minus_err) > 1e-5 * std::max(1.0, size))
        throw NumericalError("coefficient sign resolution failed against the expansion identity");
    coef_sign_ = (plus_err <= minus_err) ? 1 : -1;
}

RootBasis ExpansionEngine::build_root_basis(const Eigenvalue& ev) const {
    resolve_signs(ev);
    RootBasis basis;
    basis.eigenvalue = ev;
    basis.functions = literal_root_functions(ev);
    for (auto& fn : basis.functions) fn *= Cplx(*basis_sign_, 0.0);
    return basis;
}

GridFunction ExpansionEngine::project(const Eigenvalue& ev, const GridFunction& f) const {
    auto basis = build_root_basis(ev);
    return conv_.convolve(basis.functions.back(), f);
}

GridFunction ExpansionEngine::project_contour(const Eigenvalue& ev, const GridFunction& f,
                                              double circle_radius, int points) const {
    const int N = points > 0 ? points : contour_points_;
    GridFunction acc = GridFunction::zeros(grid_);
    for (int k = 0; k < N; ++k) {
        double th = 2.0 * kPi * k / N;
        Cplx lam = ev.lambda + circle_radius * std::exp(I * th);
        auto r = apply_resolvent(sigma_, cf_, lam, f);
        acc += (-circle_radius / N) * std::exp(I * th) * r.y;
    }
    return acc;
}

std::vector<Cplx> ExpansionEngine::literal_coefficients(const Eigenvalue& ev, const GridFunction& f) const {
    const int m = ev.multiplicity;
    SigmaRule rule = sigma_.rule(grid_);
    const auto& gl = gauss_legendre(std::clamp(f.effective_degree() / 2 + 32, 48, 160));
    std::vector<Cplx> C(m, Cplx(0.0));
    for (size_t jn = 0; jn < rule.nodes.size(); ++jn) {
        const double mu = rule.nodes[jn];
        // H_k'(mu) = delta_{k0} f(mu) + int_0^mu f(xi) phi_k'(mu - xi) dxi
        for (int k = 0; k < m; ++k) {
            Cplx hk = (k == 0) ? f.evaluate(mu) : Cplx(0.0);
            Cplx inner(0.0);
            for (size_t q = 0; q < gl.nodes.size(); ++q) {
                double xi = 0.5 * mu * (gl.nodes[q] + 1.0);
                inner += 0.5 * mu * gl.weights[q] * f.evaluate(xi) * phi_prime(k, ev.lambda, mu - xi);
            }
            C[k] += rule.weights[jn] * (hk + inner);
        }
    }
    return C;
}

std::vector<Cplx> ExpansionEngine::coefficients(const Eigenvalue& ev, const GridFunction& f) const {
    resolve_signs(ev);
    auto C = literal_coefficients(ev, f);
    for (Cplx& c : C) c *= static_cast<double>(*coef_sign_);
    return C;
}

std::vector<GridFunction> ExpansionEngine::biorthogonal(const Eigenvalue& ev) const {
    resolve_signs(ev);
    const int m = ev.multiplicity;
    std::vector<GridFunction> literal;
    literal.reserve(m);
    for (int k = 0; k < m; ++k) {
        literal.push_back(GridFunction::sample(grid_, [&](double xi) {
            Cplx h = sigma_.integral_against(xi, [&](double mu) { return phi_prime(k, ev.lambda, mu - xi); });
            if (k == 0) h += std::conj(sigma_.value(xi));
            return h;
        }));
    }
    // Dual ordering: pairing of u_l against out[l'] is delta_{l l'}.
    std::vector<GridFunction> out;
    out.reserve(m);
    for (int l = 0; l < m; ++l) {
        GridFunction h = literal[m - 1 - l];
        h *= Cplx(static_cast<double>(*coef_sign_), 0.0);
        out.push_back(std::move(h));
    }
    return out;
}

SequenceElement ExpansionEngine::fourier_transform(const std::vector<Eigenvalue>& spectrum,
                                                   const GridFunction& f, double R) const {
    SequenceElement out;
    out.radius = R;
    for (const auto& ev : spectrum) {
        if (std::abs(ev.lambda) > R) continue;
        out.lambdas.push_back(ev.lambda);
        out.blocks.push_back(coefficients(ev, f));
    }
    return out;
}

SequenceElement ExpansionEngine::cauchy_convolve(const SequenceElement& a, const SequenceElement& b) {
    if (a.lambdas.size() != b.lambdas.size()) throw ConfigError("sequence elements cover different spectra");
    SequenceElement out;
    out.radius = std::min(a.radius, b.radius);
    out.lambdas = a.lambdas;
    out.blocks.resize(a.blocks.size());
    for (size_t i = 0; i < a.blocks.size(); ++i) {
        if (std::abs(a.lambdas[i] - b.lambdas[i]) > 1e-9)
            throw ConfigError("sequence elements cover different spectra");
        const auto& xa = a.blocks[i];
        const auto& xb = b.blocks[i];
        if (xa.size() != xb.size()) throw ConfigError("sequence elements have mismatched block sizes");
        std::vector<Cplx> prod(xa.size(), Cplx(0.0));
        for (size_t k = 0; k < xa.size(); ++k)
            for (size_t j = 0; j <= k; ++j) prod[k] += xa[j] * xb[k - j];
        out.blocks[i] = std::move(prod);
    }
    return out;
}

PartialSum ExpansionEngine::partial_sum(const std::vector<Eigenvalue>& spectrum, const GridFunction& f,
                                        double R, double clearance) const {
    double r_eff = R;
    bool shifted = false;
    for (int guard = 0; guard < 64; ++guard) {
        bool clear = true;
        for (const auto& ev : spectrum)
            if (std::abs(std::abs(ev.lambda) - r_eff) < clearance) { clear = false; break; }
        if (clear) break;
        r_eff += 2.0 * clearance;
        shifted = true;
    }
    GridFunction acc = GridFunction::zeros(grid_);
    for (const auto& ev : spectrum)
        if (std::abs(ev.lambda) < r_eff) acc += project(ev, f);
    return PartialSum{std::move(acc), r_eff, shifted};
}

GridFunction ExpansionEngine::remainder(const std::vector<Eigenvalue>& spectrum, const GridFunction& f,
                                        double R) const {
    auto ps = partial_sum(spectrum, f, R);
    return ps.sum - f;
}

GridFunction ExpansionEngine::remainder_exp_contour(double R, Cplx mu) const {
    const int N = contour_points_;
    Cplx dmu = cf_.delta(mu);
    std::vector<Cplx> vals(grid_->size(), Cplx(0.0));
    for (int k = 0; k < N; ++k) {
        double th = 2.0 * kPi * k / N;
        Cplx lam = R * std::exp(I * th);
        Cplx w = std::exp(I * th) / (cf_.delta(lam) * (mu - lam));
        for (int j = 0; j < grid_->size(); ++j)
            vals[j] += w * std::exp(I * lam * grid_->nodes()[j]);
    }
    GridFunction out(grid_, std::move(vals));
    out *= dmu * R / static_cast<double>(N);
    return out;
}

double ExpansionEngine::weighted_remainder_norm(const GridFunction& q) {
    const auto& xs = q.grid()->nodes();
    const double b = q.grid()->length();
    double m = 0.0;
    for (int j = 0; j < q.size(); ++j)
        m = std::max(m, std::sqrt(std::max(xs[j] * (b - xs[j]), 0.0)) * std::abs(q[j]));
    return m;
}

RieszDiagnostics ExpansionEngine::riesz_diagnostics(const std::vector<Eigenvalue>& spectrum, double R,
                                                    std::uint64_t seed) const {
    RieszDiagnostics diag;

    // (i) coefficient l2 norm against ||f||_L2 on random smooth samples
    Rng rng(seed ? seed : 1);
    for (int t = 0; t < 3; ++t) {
        auto f = random_smooth(grid_, rng);
        auto seq = fourier_transform(spectrum, f, R);
        double l2 = 0.0;
        for (const auto& blk : seq.blocks)
            for (const Cplx& c : blk) l2 += std::norm(c);
        l2 = std::sqrt(l2);
        double fn = f.l2_norm();
        if (fn > 0) diag.l2_ratio = std::max(diag.l2_ratio, l2 / fn);
    }

    // (ii) Muckenhoupt quotient of omega = |Delta|^2 over a dyadic interval
    // family on the real axis (finite proxy, reported as observed sup).
    const double b = grid_->length();
    const auto& gl = gauss_legendre(48);
    double sup = 0.0;
    for (int j = -64; j <= 64; ++j) {
        double center = j * kPi / b;
        for (double len = b / 32.0; len <= 32.0 * kPi / b; len *= 2.0) {
            double wmean = 0.0, winvmean = 0.0;
            for (size_t q = 0; q < gl.nodes.size(); ++q) {
                double lam = center + 0.5 * len * gl.nodes[q];
                double w = std::norm(cf_.delta(Cplx(lam, 0.0)));
                w = std::max(w, 1e-300);
                wmean += 0.5 * gl.weights[q] * w;
                winvmean += 0.5 * gl.weights[q] / w;
            }
            sup = std::max(sup, wmean * winvmean);
        }
    }
    diag.muckenhoupt_sup = sup;

    // (iii) Gram condition number of the normalized root functions
    std::vector<GridFunction> all;
    for (const auto& ev : spectrum) {
        if (std::abs(ev.lambda) > R) continue;
        auto basis = build_root_basis(ev);
        for (auto& u : basis.functions) {
            double nrm = u.l2_norm();
            if (nrm > 0) u *= Cplx(1.0 / nrm, 0.0);
            all.push_back(std::move(u));
        }
    }
    if (!all.empty()) {
        Eigen::MatrixXcd G(all.size(), all.size());
        for (size_t i = 0; i < all.size(); ++i)
            for (size_t j = 0; j < all.size(); ++j) G(i, j) = all[i].inner(all[j]);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
        double smax = svd.singularValues()(0);
        double smin = svd.singularValues()(svd.singularValues().size() - 1);
        diag.gram_condition = (smin > 0) ? smax / smin : std::numeric_limits<double>::infinity();
    }
    return diag;
}

int ExpansionEngine::basis_sign() const {
    if (!basis_sign_) throw ConfigError("signs not resolved yet; build a root basis first");
    return *basis_sign_;
}

int ExpansionEngine::coefficient_sign() const {
    if (!coef_sign_) throw ConfigError("signs not resolved yet; build a root basis first");
    return *coef_sign_;
}

}  // namespace segconv
