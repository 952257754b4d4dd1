#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "segconv/errors.hpp"

namespace segconv {

using Cplx = std::complex<double>;

/// The interval [0,b] everything lives on.
struct Segment {
    double b;
    explicit Segment(double length) : b(length) {
        if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("segment length must be positive and finite");
    }
};

/// Fixed-order Gauss-Legendre rule on [-1,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes and weights for an m-point Gauss-Legendre rule on [-1,1] (cached per m).
const QuadratureRule& gauss_legendre(int m);

/// Chebyshev-Gauss-Lobatto collocation grid on [0,b].
///
/// Nodes ascend from 0 to b, x_j = (b/2)(1 - cos(j pi/(n-1))).  Carries the
/// barycentric weights, the collocation differentiation matrix and
/// Clenshaw-Curtis quadrature weights for the same node set.
class ChebyshevGrid {
  public:
    ChebyshevGrid(Segment segment, int n);

    int size() const { return static_cast<int>(nodes_.size()); }
    double length() const { return segment_.b; }
    const Segment& segment() const { return segment_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& quadrature_weights() const { return quad_w_; }
    const std::vector<double>& barycentric_weights() const { return bary_w_; }

    /// Row-major (n x n) collocation differentiation matrix.
    const std::vector<double>& diff_matrix() const { return diff_; }

    /// Row-major (n x n) value-to-Chebyshev-coefficient transform.
    const std::vector<double>& coeff_matrix() const { return coef_; }

    bool same_family(const ChebyshevGrid& other) const {
        return size() == other.size() && length() == other.length();
    }

  private:
    Segment segment_;
    std::vector<double> nodes_;
    std::vector<double> bary_w_;
    std::vector<double> quad_w_;
    std::vector<double> diff_;
    std::vector<double> coef_;
};

using GridPtr = std::shared_ptr<const ChebyshevGrid>;

/// Build a shared grid; n >= 8 or ConfigError.
GridPtr make_grid(Segment segment, int n);

/// A complex-valued function sampled on a ChebyshevGrid.
///
/// Evaluation between nodes uses barycentric interpolation (exact at nodes);
/// derivative/integral/inner are spectral collocation operations.  Values are
/// immutable after construction.
class GridFunction {
  public:
    GridFunction(GridPtr grid, std::vector<Cplx> values);

    static GridFunction zeros(const GridPtr& grid);
    static GridFunction constant(const GridPtr& grid, Cplx c);
    static GridFunction sample(const GridPtr& grid, const std::function<Cplx(double)>& fn);

    const GridPtr& grid() const { return grid_; }
    const std::vector<Cplx>& values() const { return v_; }
    int size() const { return static_cast<int>(v_.size()); }
    Cplx operator[](int j) const { return v_[j]; }

    /// Barycentric interpolation; x must lie in [0,b].
    Cplx evaluate(double x) const;

    /// Spectral derivative on the same node family.
    GridFunction derivative() const;

    /// Integral over [0,b] by the grid quadrature rule.
    Cplx integrate() const;

    /// L2 pairing: integral of f * conj(g) over [0,b].
    Cplx inner(const GridFunction& g) const;

    double sup_norm() const;
    double l2_norm() const;

    /// Chebyshev coefficients of the interpolant (degree-ordered, length n).
    std::vector<Cplx> cheb_coefficients() const;

    /// Smallest d with all coefficients above degree d below tol * max; used to
    /// size inner quadratures.
    int effective_degree(double tol = 1e-13) const;

    GridFunction& operator+=(const GridFunction& g);
    GridFunction& operator-=(const GridFunction& g);
    GridFunction& operator*=(Cplx a);
    friend GridFunction operator+(GridFunction f, const GridFunction& g) { return f += g; }
    friend GridFunction operator-(GridFunction f, const GridFunction& g) { return f -= g; }
    friend GridFunction operator*(Cplx a, GridFunction f) { return f *= a; }

    void check_same_family(const GridFunction& g) const;

  private:
    GridPtr grid_;
    std::vector<Cplx> v_;
};

/// Deterministic xorshift-free uniform doubles from mt19937_64 (identical
/// across platforms, unlike std::normal_distribution).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    double uniform();              // [0,1)
    double symmetric();            // [-1,1)
    Cplx unit_complex();           // re,im in [-1,1)
  private:
    std::uint64_t next();
    std::uint64_t state_;
};

/// Random smooth test function: a short trigonometric series with decaying
/// coefficients, normalized to sup-norm about 1.
GridFunction random_smooth(const GridPtr& grid, Rng& rng, int terms = 8, double decay = 0.7);

}  // namespace segconv
