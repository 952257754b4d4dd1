#pragma once

#include <complex>
#include <vector>

namespace segconv {

/// One spectral point: location, multiplicity and the Taylor data d_j of
/// (lambda - lambda_n)^m / Delta(lambda) at the zero (d_j = j! times the j-th
/// Taylor coefficient), j = 0..m-1.
struct Eigenvalue {
    std::complex<double> lambda;
    int multiplicity = 1;
    std::vector<std::complex<double>> taylor;
};

}  // namespace segconv
