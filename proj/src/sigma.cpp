#include "segconv/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace segconv {

namespace {
const Cplx I(0.0, 1.0);
}

SigmaSpec SigmaSpec::zero(Segment seg) { return SigmaSpec(SigmaKind::Zero, seg); }

SigmaSpec SigmaSpec::indicator_i(Segment seg, double c) {
    if (!(c >= 0.0 && c <= seg.b)) throw ConfigError("indicator cutoff must lie in [0,b]");
    SigmaSpec s(SigmaKind::IndicatorI, seg);
    s.param_ = c;
    return s;
}

SigmaSpec SigmaSpec::constant_imag(Segment seg, double alpha) {
    if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
    SigmaSpec s(SigmaKind::ConstantImag, seg);
    s.param_ = alpha;
    return s;
}

SigmaSpec SigmaSpec::sampled(GridFunction samples, std::string source_path) {
    for (const Cplx& v : samples.values())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ConfigError("sampled sigma has non-finite values");
    SigmaSpec s(SigmaKind::Sampled, samples.grid()->segment());
    s.samples_ = std::move(samples);
    s.path_ = std::move(source_path);
    return s;
}

const GridFunction& SigmaSpec::samples() const {
    if (!samples_) throw ConfigError("sigma has no samples");
    return *samples_;
}

Cplx SigmaSpec::value(double x) const {
    switch (kind_) {
        case SigmaKind::Zero: return Cplx(0.0);
        case SigmaKind::IndicatorI: return x <= param_ ? I : Cplx(0.0);
        case SigmaKind::ConstantImag: return I * param_;
        case SigmaKind::Sampled: return samples_->evaluate(x);
    }
    return Cplx(0.0);
}

SigmaRule SigmaSpec::rule(const GridPtr& grid) const {
    SigmaRule r;
    switch (kind_) {
        case SigmaKind::Zero:
            break;
        case SigmaKind::ConstantImag: {
            r.on_grid = true;
            r.nodes = grid->nodes();
            const Cplx sbar = std::conj(I * param_);
            r.weights.resize(grid->size());
            for (int j = 0; j < grid->size(); ++j) r.weights[j] = grid->quadrature_weights()[j] * sbar;
            break;
        }
        case SigmaKind::IndicatorI: {
            // conj(sigma) = -i on [0,c]; a mapped rule keeps full accuracy
            // across the jump at c.
            const double c = param_;
            if (c <= 0.0) break;
            const int m = std::max(grid->size(), 64);
            const auto& gl = gauss_legendre(m);
            r.nodes.resize(m);
            r.weights.resize(m);
            for (int q = 0; q < m; ++q) {
                r.nodes[q] = 0.5 * c * (gl.nodes[q] + 1.0);
                r.weights[q] = 0.5 * c * gl.weights[q] * (-I);
            }
            break;
        }
        case SigmaKind::Sampled: {
            if (!grid->same_family(*samples_->grid()))
                throw ConfigError("sampled sigma lives on a different node family");
            r.on_grid = true;
            r.nodes = grid->nodes();
            r.weights.resize(grid->size());
            for (int j = 0; j < grid->size(); ++j)
                r.weights[j] = grid->quadrature_weights()[j] * std::conj(samples_->values()[j]);
            break;
        }
    }
    return r;
}

Cplx SigmaSpec::integral_against(double lo, const std::function<Cplx(double)>& h, int quad_points) const {
    const double b = seg_.b;
    if (!(lo >= 0.0 && lo <= b)) throw DomainError("lower limit outside [0,b]");
    auto gl_on = [&](double a0, double a1) {
        const auto& gl = gauss_legendre(quad_points);
        Cplx acc(0.0);
        for (int q = 0; q < quad_points; ++q) {
            double mu = 0.5 * (a1 - a0) * gl.nodes[q] + 0.5 * (a1 + a0);
            Cplx sbar = std::conj(value(mu));
            acc += 0.5 * (a1 - a0) * gl.weights[q] * sbar * h(mu);
        }
        return acc;
    };
    switch (kind_) {
        case SigmaKind::Zero: return Cplx(0.0);
        case SigmaKind::ConstantImag: return gl_on(lo, b);
        case SigmaKind::IndicatorI: return lo < param_ ? gl_on(lo, param_) : Cplx(0.0);
        case SigmaKind::Sampled: return gl_on(lo, b);
    }
    return Cplx(0.0);
}

std::optional<double> SigmaSpec::min_support_sigma_minus_i(double tol) const {
    const double b = seg_.b;
    switch (kind_) {
        case SigmaKind::Zero: return 0.0;  // sigma - i = -i everywhere
        case SigmaKind::ConstantImag: return param_ == 1.0 ? std::nullopt : std::optional<double>(0.0);
        case SigmaKind::IndicatorI: return param_ >= b ? std::nullopt : std::optional<double>(param_);
        case SigmaKind::Sampled: {
            const auto& xs = samples_->grid()->nodes();
            for (int j = 0; j < samples_->size(); ++j)
                if (std::abs(samples_->values()[j] - I) > tol) return xs[j];
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::optional<double> SigmaSpec::max_support_sigma(double tol) const {
    const double b = seg_.b;
    switch (kind_) {
        case SigmaKind::Zero: return std::nullopt;
        case SigmaKind::ConstantImag: return param_ == 0.0 ? std::nullopt : std::optional<double>(b);
        case SigmaKind::IndicatorI: return param_ <= 0.0 ? std::nullopt : std::optional<double>(param_);
        case SigmaKind::Sampled: {
            const auto& xs = samples_->grid()->nodes();
            for (int j = samples_->size() - 1; j >= 0; --j)
                if (std::abs(samples_->values()[j]) > tol) return xs[j];
            return std::nullopt;
        }
    }
    return std::nullopt;
}

Cplx apply_U(const SigmaSpec& sigma, const GridFunction& y) {
    SigmaRule r = sigma.rule(y.grid());
    Cplx u = y[0];
    if (r.nodes.empty()) return u;
    GridFunction dy = y.derivative();
    // U(y) = y(0) + i * sum w_k y'(mu_k), the weights carrying conj(sigma).
    Cplx acc(0.0);
    if (r.on_grid) {
        for (size_t k = 0; k < r.nodes.size(); ++k) acc += r.weights[k] * dy[static_cast<int>(k)];
    } else {
        for (size_t k = 0; k < r.nodes.size(); ++k) acc += r.weights[k] * dy.evaluate(r.nodes[k]);
    }
    return u + Cplx(0.0, 1.0) * acc;
}

GridFunction apply_U_parametric(const SigmaSpec& sigma, const GridPtr& grid,
                                const std::function<Cplx(double, double)>& F,
                                const std::function<Cplx(double, double)>& dF_dmu) {
    SigmaRule r = sigma.rule(grid);
    std::vector<Cplx> out(grid->size());
    for (int i = 0; i < grid->size(); ++i) {
        double x = grid->nodes()[i];
        Cplx acc(0.0);
        for (size_t k = 0; k < r.nodes.size(); ++k) acc += r.weights[k] * dF_dmu(x, r.nodes[k]);
        out[i] = F(x, 0.0) + Cplx(0.0, 1.0) * acc;
    }
    return GridFunction(grid, std::move(out));
}

ConditionReport check_conditions(const SigmaSpec& sigma, const std::vector<Eigenvalue>& spectrum,
                                 double radius, double support_tol) {
    ConditionReport rep;
    rep.radius = radius;
    rep.min_supp_sigma_minus_i = sigma.min_support_sigma_minus_i(support_tol);
    rep.max_supp_sigma = sigma.max_support_sigma(support_tol);
    const double b = sigma.segment().b;
    const double tol = 1e-9 * b;
    rep.conminmax_holds = rep.min_supp_sigma_minus_i && std::abs(*rep.min_supp_sigma_minus_i) <= tol &&
                          rep.max_supp_sigma && std::abs(*rep.max_supp_sigma - b) <= tol;

    if (spectrum.empty()) {
        rep.vacuous = true;
        return rep;
    }
    for (const auto& ev : spectrum) {
        rep.strip_bound = std::max(rep.strip_bound, std::abs(ev.lambda.imag()));
        rep.max_multiplicity = std::max(rep.max_multiplicity, ev.multiplicity);
    }
    rep.separation = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < spectrum.size(); ++i)
        for (size_t j = i + 1; j < spectrum.size(); ++j)
            rep.separation = std::min(rep.separation, std::abs(spectrum[i].lambda - spectrum[j].lambda));
    if (spectrum.size() < 2) rep.separation = std::numeric_limits<double>::infinity();
    return rep;
}

}  // namespace segconv
