#pragma once

#include <utility>
#include <vector>

#include "segconv/characteristic.hpp"
#include "segconv/eigenvalue.hpp"

namespace segconv {

/// Integration contour for argument-principle counts and residue data.
struct ContourSpec {
    enum class Shape { Circle, Rect };
    Shape shape = Shape::Circle;
    Cplx center{0.0, 0.0};
    double radius = 0.0;            // circle
    double half_width = 0.0;        // rectangle
    double half_height = 0.0;
    int points = 256;

    static ContourSpec circle(Cplx center, double radius, int points = 256);
    static ContourSpec rect(Cplx center, double half_width, double half_height);
};

struct SpectrumOptions {
    double tol_zero = 1e-11;        // acceptance threshold for |Delta| at a zero
    int contour_points = 256;       // trapezoid points on circles
    double cluster_diameter = 1e-3; // zeros closer than this count as one multiple zero
    int max_iterations = 60;
    double boundary_slack = 1e-9;   // keep |lambda| <= R (1 + slack) + slack
};

/// Number of zeros (with multiplicity) enclosed by the contour, by the
/// argument principle.  Circles use the trapezoid rule on Delta'/Delta;
/// rectangles track the continuous argument of Delta along the edges with
/// adaptive bisection.  Throws ContourError when the contour grazes a zero or
/// the winding count does not settle.
int count_zeros(const CharacteristicFn& cf, const ContourSpec& contour);

/// All zeros of Delta with |lambda| <= R, refined to tol_zero, with
/// multiplicities (tight-circle recount) and Taylor data d_j of
/// (lambda-lambda_n)^m / Delta (Cauchy coefficients on the tight circle).
/// Sorted by (Re, Im).  Zeros closer together than cluster_diameter are
/// reported as one multiple zero.
std::vector<Eigenvalue> find_spectrum(const CharacteristicFn& cf, double R,
                                      const SpectrumOptions& opts = {});

/// N(r) for each radius (argument-principle count on |lambda| = r).
std::vector<std::pair<double, int>> counting_function(const CharacteristicFn& cf,
                                                      const std::vector<double>& radii,
                                                      const SpectrumOptions& opts = {});

/// max |Im lambda_n| over the supplied spectrum; 0 when empty.
double strip_diagnostic(const std::vector<Eigenvalue>& spectrum);

}  // namespace segconv
