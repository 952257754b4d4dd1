#include <pybind11/pybind11.h>

#include "segconv/grid.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_segconv, m) {
    m.doc() = "Spectral calculus for -i d/dx on [0,b] under a nonlocal boundary condition";
    m.attr("__version__") = "0.1.0";
}
