#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "segconv/eigenvalue.hpp"
#include "segconv/grid.hpp"

namespace segconv {

enum class SigmaKind { Zero, IndicatorI, ConstantImag, Sampled };

/// Discretization of the functional h -> integral over [0,b] of h(mu) conj(sigma(mu)) dmu.
/// Weights carry the conj(sigma) factor.  When on_grid is true the nodes are
/// exactly the grid nodes, in order.
struct SigmaRule {
    std::vector<double> nodes;
    std::vector<Cplx> weights;
    bool on_grid = false;
};

/// The boundary function sigma on [0,b].
///
/// Presets have exact supports and closed-form characteristic functions;
/// Sampled carries grid data.  sigma = i on [0,c] (IndicatorI) and
/// sigma = i*alpha (ConstantImag) are the two families the spectral theory
/// singles out.
class SigmaSpec {
  public:
    static SigmaSpec zero(Segment seg);
    static SigmaSpec indicator_i(Segment seg, double c);
    static SigmaSpec constant_imag(Segment seg, double alpha);
    static SigmaSpec sampled(GridFunction samples, std::string source_path = {});

    SigmaKind kind() const { return kind_; }
    const Segment& segment() const { return seg_; }
    double indicator_cutoff() const { return param_; }
    double alpha() const { return param_; }
    const GridFunction& samples() const;
    const std::string& source_path() const { return path_; }

    Cplx value(double x) const;

    /// Quadrature rule for integrals against conj(sigma) on [0,b].
    SigmaRule rule(const GridPtr& grid) const;

    /// integral over [lo,b] of conj(sigma(mu)) h(mu) dmu, spectrally accurate in h.
    Cplx integral_against(double lo, const std::function<Cplx(double)>& h, int quad_points = 96) const;

    /// True when conj(sigma) is piecewise constant, enabling exact evaluation of
    /// integrals of conj(sigma) * dF/dmu by the fundamental theorem of calculus.
    bool piecewise_constant() const { return kind_ != SigmaKind::Sampled; }

    /// Support extrema: smallest point of supp(sigma - i), largest of supp(sigma).
    /// nullopt when the corresponding function vanishes identically.
    std::optional<double> min_support_sigma_minus_i(double tol = 1e-12) const;
    std::optional<double> max_support_sigma(double tol = 1e-12) const;

  private:
    SigmaSpec(SigmaKind k, Segment seg) : kind_(k), seg_(seg) {}
    SigmaKind kind_;
    Segment seg_;
    double param_ = 0.0;
    std::optional<GridFunction> samples_;
    std::string path_;
};

/// U(y) = y(0) - integral over [0,b] of (-i y'(x)) conj(sigma(x)) dx.
/// The kernel of U inside W^1_2 is the domain of the operator L.
Cplx apply_U(const SigmaSpec& sigma, const GridFunction& y);

/// U applied in the second argument of F(x, mu), one value per grid node x:
/// returns F(x,0) - integral of (-i dF/dmu(x,mu)) conj(sigma(mu)) dmu.
/// dF must be the analytic mu-derivative (callers use the Leibniz rule).
GridFunction apply_U_parametric(const SigmaSpec& sigma, const GridPtr& grid,
                                const std::function<Cplx(double, double)>& F,
                                const std::function<Cplx(double, double)>& dF_dmu);

/// Measured spectral-structure report.  Support measurements use sigma - i and
/// sigma: the convention under which sigma = i on [0,c], 0 beyond, produces an
/// empty spectrum.  (Some statements of condition (A) elsewhere carry sigma + i;
/// the sigma - i form is the one consistent with that empty-spectrum family.)
/// The (B)/(C)/(D) numbers are observed over the supplied finite spectrum only,
/// never claimed as suprema.
struct ConditionReport {
    bool conminmax_holds = false;
    std::optional<double> min_supp_sigma_minus_i;
    std::optional<double> max_supp_sigma;
    double strip_bound = 0.0;      // max |Im lambda_n| observed
    double separation = 0.0;       // min distance between distinct spectrum points
    int max_multiplicity = 0;
    double radius = 0.0;           // disk over which the spectrum was computed
    bool vacuous = false;          // empty spectrum: (B),(C),(D) hold vacuously
};

ConditionReport check_conditions(const SigmaSpec& sigma, const std::vector<Eigenvalue>& spectrum,
                                 double radius, double support_tol = 1e-12);

}  // namespace segconv
