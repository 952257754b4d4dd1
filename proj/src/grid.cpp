#include "segconv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace segconv {

namespace {
constexpr double kPi = std::numbers::pi;
}

const QuadratureRule& gauss_legendre(int m) {
    static std::mutex mtx;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    QuadratureRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    // Newton on P_m with the Bonnet recurrence; standard initial guesses.
    for (int k = 0; k < m; ++k) {
        double x = std::cos(kPi * (k + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= m; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[m - 1 - k] = x;
        rule.weights[m - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(m, std::move(rule)).first->second;
}

ChebyshevGrid::ChebyshevGrid(Segment segment, int n) : segment_(segment) {
    if (n < 8) throw ConfigError("grid needs at least 8 nodes");
    const int N = n - 1;
    const double b = segment_.b;

    nodes_.resize(n);
    for (int j = 0; j <= N; ++j) nodes_[j] = 0.5 * b * (1.0 - std::cos(kPi * j / N));
    nodes_.front() = 0.0;
    nodes_.back() = b;
    if (n % 2 == 1) nodes_[N / 2] = 0.5 * b;  // exact midpoint

    // Barycentric weights for Chebyshev-Lobatto points (scale-free form).
    bary_w_.resize(n);
    for (int j = 0; j <= N; ++j) bary_w_[j] = (j % 2 == 0 ? 1.0 : -1.0);
    bary_w_.front() *= 0.5;
    bary_w_.back() *= 0.5;

    // Clenshaw-Curtis weights (Trefethen's closed form), mapped by b/2.
    quad_w_.assign(n, 0.0);
    if (N % 2 == 0) {
        quad_w_[0] = quad_w_[N] = 1.0 / (N * N - 1.0);
        for (int j = 1; j < N; ++j) {
            double theta = kPi * j / N;
            double v = 1.0;
            for (int k = 1; k <= N / 2 - 1; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
            v -= std::cos(N * theta) / (N * N - 1.0);
            quad_w_[j] = 2.0 * v / N;
        }
    } else {
        quad_w_[0] = quad_w_[N] = 1.0 / (N * N);
        for (int j = 1; j < N; ++j) {
            double theta = kPi * j / N;
            double v = 1.0;
            for (int k = 1; k <= (N - 1) / 2; ++k) v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
            quad_w_[j] = 2.0 * v / N;
        }
    }
    for (double& w : quad_w_) w *= 0.5 * b;

    // Differentiation matrix in barycentric form with the negative-sum trick.
    diff_.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = (bary_w_[j] / bary_w_[i]) / (nodes_[i] - nodes_[j]);
            diff_[static_cast<size_t>(i) * n + j] = d;
            rowsum += d;
        }
        diff_[static_cast<size_t>(i) * n + i] = -rowsum;
    }

    // Value-to-coefficient transform (DCT-I with endpoint halving); node j
    // sits at t_j = cos(j pi/N) in the mapped variable t = 1 - 2x/b.
    coef_.assign(static_cast<size_t>(n) * n, 0.0);
    for (int k = 0; k <= N; ++k) {
        for (int j = 0; j <= N; ++j) {
            double c = std::cos(kPi * k * j / N);
            double scale = 2.0 / N;
            if (j == 0 || j == N) scale *= 0.5;
            if (k == 0 || k == N) scale *= 0.5;
            coef_[static_cast<size_t>(k) * n + j] = scale * c;
        }
    }
}

GridPtr make_grid(Segment segment, int n) { return std::make_shared<ChebyshevGrid>(segment, n); }

GridFunction::GridFunction(GridPtr grid, std::vector<Cplx> values) : grid_(std::move(grid)), v_(std::move(values)) {
    if (!grid_) throw ConfigError("null grid");
    if (static_cast<int>(v_.size()) != grid_->size()) throw ConfigError("value count does not match grid");
}

GridFunction GridFunction::zeros(const GridPtr& grid) {
    return GridFunction(grid, std::vector<Cplx>(grid->size(), Cplx(0.0)));
}

GridFunction GridFunction::constant(const GridPtr& grid, Cplx c) {
    return GridFunction(grid, std::vector<Cplx>(grid->size(), c));
}

GridFunction GridFunction::sample(const GridPtr& grid, const std::function<Cplx(double)>& fn) {
    std::vector<Cplx> v(grid->size());
    for (int j = 0; j < grid->size(); ++j) v[j] = fn(grid->nodes()[j]);
    return GridFunction(grid, std::move(v));
}

void GridFunction::check_same_family(const GridFunction& g) const {
    if (!grid_->same_family(*g.grid_)) throw ConfigError("grid functions use different node families");
}

Cplx GridFunction::evaluate(double x) const {
    const double b = grid_->length();
    if (!(x >= 0.0 && x <= b)) {
        if (x > -1e-14 * b && x < 0.0) x = 0.0;          // clamp harmless rounding
        else if (x > b && x < b * (1.0 + 1e-14)) x = b;
        else throw DomainError("evaluation point outside [0,b]");
    }
    const auto& xs = grid_->nodes();
    const auto& w = grid_->barycentric_weights();
    const int n = size();
    Cplx num(0.0), den(0.0);
    for (int j = 0; j < n; ++j) {
        double dx = x - xs[j];
        if (dx == 0.0) return v_[j];
        double t = w[j] / dx;
        num += t * v_[j];
        den += t;
    }
    return num / den;
}

GridFunction GridFunction::derivative() const {
    const int n = size();
    const auto& D = grid_->diff_matrix();
    std::vector<Cplx> out(n, Cplx(0.0));
    for (int i = 0; i < n; ++i) {
        const double* row = D.data() + static_cast<size_t>(i) * n;
        Cplx acc(0.0);
        for (int j = 0; j < n; ++j) acc += row[j] * v_[j];
        out[i] = acc;
    }
    return GridFunction(grid_, std::move(out));
}

Cplx GridFunction::integrate() const {
    const auto& w = grid_->quadrature_weights();
    Cplx acc(0.0);
    for (int j = 0; j < size(); ++j) acc += w[j] * v_[j];
    return acc;
}

Cplx GridFunction::inner(const GridFunction& g) const {
    check_same_family(g);
    const auto& w = grid_->quadrature_weights();
    Cplx acc(0.0);
    for (int j = 0; j < size(); ++j) acc += w[j] * v_[j] * std::conj(g.v_[j]);
    return acc;
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (const Cplx& z : v_) m = std::max(m, std::abs(z));
    return m;
}

double GridFunction::l2_norm() const {
    const auto& w = grid_->quadrature_weights();
    double acc = 0.0;
    for (int j = 0; j < size(); ++j) acc += w[j] * std::norm(v_[j]);
    return std::sqrt(std::max(acc, 0.0));
}

std::vector<Cplx> GridFunction::cheb_coefficients() const {
    const int n = size();
    const auto& C = grid_->coeff_matrix();
    std::vector<Cplx> a(n, Cplx(0.0));
    for (int k = 0; k < n; ++k) {
        const double* row = C.data() + static_cast<size_t>(k) * n;
        Cplx acc(0.0);
        for (int j = 0; j < n; ++j) acc += row[j] * v_[j];
        a[k] = acc;
    }
    return a;
}

int GridFunction::effective_degree(double tol) const {
    auto a = cheb_coefficients();
    double amax = 0.0;
    for (const Cplx& z : a) amax = std::max(amax, std::abs(z));
    if (amax == 0.0) return 0;
    int d = 0;
    for (int k = 0; k < static_cast<int>(a.size()); ++k)
        if (std::abs(a[k]) > tol * amax) d = k;
    return d;
}

GridFunction& GridFunction::operator+=(const GridFunction& g) {
    check_same_family(g);
    for (int j = 0; j < size(); ++j) v_[j] += g.v_[j];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& g) {
    check_same_family(g);
    for (int j = 0; j < size(); ++j) v_[j] -= g.v_[j];
    return *this;
}

GridFunction& GridFunction::operator*=(Cplx a) {
    for (Cplx& z : v_) z *= a;
    return *this;
}

std::uint64_t Rng::next() {
    // splitmix64; stable across standard libraries.
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
double Rng::symmetric() { return 2.0 * uniform() - 1.0; }
Cplx Rng::unit_complex() { return Cplx(symmetric(), symmetric()); }

GridFunction random_smooth(const GridPtr& grid, Rng& rng, int terms, double decay) {
    const double b = grid->length();
    std::vector<Cplx> coeff(2 * terms + 1);
    double scale = 1.0;
    for (int k = -terms; k <= terms; ++k) {
        coeff[k + terms] = rng.unit_complex() * scale * std::pow(decay, std::abs(k));
    }
    auto f = GridFunction::sample(grid, [&](double x) {
        Cplx acc(0.0);
        for (int k = -terms; k <= terms; ++k) {
            double omega = 2.0 * kPi * k / b;
            acc += coeff[k + terms] * std::exp(Cplx(0.0, omega * x));
        }
        return acc;
    });
    double s = f.sup_norm();
    if (s > 0) f *= Cplx(1.0 / s, 0.0);
    return f;
}

}  // namespace segconv
