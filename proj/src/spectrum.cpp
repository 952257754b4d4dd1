#include "segconv/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

namespace segconv {

namespace {
constexpr double kPi = std::numbers::pi;
const Cplx I(0.0, 1.0);

std::string cplx_str(Cplx z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

// ---- circle count: trapezoid rule on Delta'/Delta --------------------------

int circle_count(const CharacteristicFn& cf, Cplx center, double radius, int points) {
    for (int attempt = 0; attempt < 3; ++attempt, points *= 2) {
        std::vector<Cplx> vals(points);
        for (int k = 0; k < points; ++k) {
            double th = 2.0 * kPi * k / points;
            vals[k] = cf.delta(center + radius * std::exp(I * th));
        }
        // |Delta| spans many decades on contours with large |Im lambda|, so a
        // graze is detected against the neighbouring samples, not a global max.
        for (int k = 0; k < points; ++k) {
            double here = std::abs(vals[k]);
            double near = std::abs(vals[(k + 1) % points]) + std::abs(vals[(k + points - 1) % points]);
            if (here < 1e-10 * near || here < 1e-290)
                throw ContourError("contour |lambda - " + cplx_str(center) + "| = " + std::to_string(radius) +
                                   " passes too close to a zero");
        }
        Cplx acc(0.0);
        for (int k = 0; k < points; ++k) {
            double th = 2.0 * kPi * k / points;
            Cplx lam = center + radius * std::exp(I * th);
            acc += cf.delta_derivative(lam, 1) / vals[k] * std::exp(I * th);
        }
        Cplx integral = acc * (radius / static_cast<double>(points));
        double rounded = std::round(integral.real());
        double residual = std::abs(integral - rounded);
        if (residual < 0.25 && rounded >= -0.25) return static_cast<int>(rounded);
    }
    throw ContourError("winding count on circle about " + cplx_str(center) + " did not settle");
}

// ---- rectangle count: continuous-argument tracking along the edges ---------

class EdgeWinding {
  public:
    explicit EdgeWinding(const CharacteristicFn& cf) : cf_(cf) {}

    double total() const { return total_; }

    void edge(Cplx z0, Cplx z1) {
        const int coarse = 16;
        Cplx prev_z = z0, prev_f = value(z0);
        for (int k = 1; k <= coarse; ++k) {
            Cplx z = z0 + (z1 - z0) * (static_cast<double>(k) / coarse);
            Cplx f = value(z);
            total_ += walk(prev_z, z, prev_f, f, 0);
            prev_z = z;
            prev_f = f;
        }
    }

  private:
    Cplx value(Cplx z) {
        Cplx f = cf_.delta(z);
        // Only a true underflow defeats argument tracking; moderate dips are
        // resolved by bisection and the final winding residual.
        if (std::abs(f) < 1e-290)
            throw ContourError("rectangle edge passes too close to a zero near " + cplx_str(z));
        return f;
    }

    // Phase increment over [z0,z1].  A segment is accepted only when the
    // midpoint-split increments agree with the direct one and the magnitude
    // stays within a fixed band: a zero near the segment makes |Delta| dip and
    // the phase spin, and either symptom forces bisection down to the scale of
    // the distance to the zero, which defeats 2 pi aliasing.
    double walk(Cplx z0, Cplx z1, Cplx f0, Cplx f1, int depth) {
        if (depth > 48) throw ContourError("argument tracking did not settle near " + cplx_str(z0));
        Cplx zm = 0.5 * (z0 + z1);
        Cplx fm = value(zm);
        double direct = std::arg(f1 / f0);
        double left = std::arg(fm / f0);
        double right = std::arg(f1 / fm);
        double a0 = std::abs(f0), a1 = std::abs(f1), am = std::abs(fm);
        double hi = std::max({a0, a1, am});
        double lo = std::min({a0, a1, am});
        bool tame = std::abs(direct) <= 0.5 * kPi && std::abs(left) <= 0.5 * kPi &&
                    std::abs(right) <= 0.5 * kPi && std::abs(left + right - direct) < 1e-9 &&
                    hi <= 4.0 * lo;
        if (tame) return direct;
        return walk(z0, zm, f0, fm, depth + 1) + walk(zm, z1, fm, f1, depth + 1);
    }

    const CharacteristicFn& cf_;
    double total_ = 0.0;
};

int rect_count(const CharacteristicFn& cf, Cplx center, double hw, double hh) {
    EdgeWinding w(cf);
    Cplx a = center + Cplx(-hw, -hh);
    Cplx b = center + Cplx(hw, -hh);
    Cplx c = center + Cplx(hw, hh);
    Cplx d = center + Cplx(-hw, hh);
    w.edge(a, b);
    w.edge(b, c);
    w.edge(c, d);
    w.edge(d, a);
    double winding = w.total() / (2.0 * kPi);
    double rounded = std::round(winding);
    if (std::abs(winding - rounded) >= 0.25)
        throw ContourError("winding count on rectangle about " + cplx_str(center) + " did not settle");
    return static_cast<int>(rounded);
}

// ---- localization ----------------------------------------------------------

struct Box {
    Cplx center;
    double hw, hh;
};

// Deterministic off-center split ratios; avoids cutting straight through
// symmetric zero configurations (e.g. a spectrum on the real axis).
constexpr double kSplitJitter = 3.4e-3;

struct CountedBox {
    int count;
    double hw, hh;  // extents actually used (inflated when an edge grazed a zero)
};

CountedBox robust_rect_count(const CharacteristicFn& cf, const Box& box) {
    // Retry with slightly inflated boxes when an edge grazes a zero.
    double grow = 1.0;
    for (int attempt = 0;; ++attempt) {
        try {
            return CountedBox{rect_count(cf, box.center, box.hw * grow, box.hh * grow),
                              box.hw * grow, box.hh * grow};
        } catch (const ContourError&) {
            if (attempt >= 4) throw;
            grow *= 1.0 + 7.3e-3 * (attempt + 1);
        }
    }
}

struct RawZero {
    Cplx z;
    int multiplicity = 1;
};

Cplx newton_step(const CharacteristicFn& cf, Cplx z) {
    Cplx d = cf.delta(z);
    Cplx dp = cf.delta_derivative(z, 1);
    if (std::abs(dp) < 1e-300) return Cplx(1e-8, 1e-8);
    return d / dp;
}

// Plain Newton, confined to a region around the starting box; escape means
// the box should be subdivided instead.
bool refine_zero(const CharacteristicFn& cf, Cplx& z, int max_iter, double& last_step,
                 Cplx region_center, double region_radius) {
    last_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(z - region_center) > region_radius) return false;
        Cplx step = newton_step(cf, z);
        z -= step;
        last_step = std::abs(step);
        if (last_step < 1e-14 * (1.0 + std::abs(z))) return true;
    }
    return last_step < 1e-6 * (1.0 + std::abs(z)) && std::abs(z - region_center) <= region_radius;
}

int multiplicity_recount(const CharacteristicFn& cf, Cplx z, double radius, int points) {
    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            return circle_count(cf, z, radius, points);
        } catch (const ContourError&) {
            radius *= 1.37;
        }
    }
    throw ContourError("multiplicity recount failed at " + cplx_str(z));
}

// Newton on the (m-1)-th derivative polishes the centroid of an m-fold zero.
void polish_multiple(const CharacteristicFn& cf, Cplx& z, int m, int iters) {
    for (int it = 0; it < iters; ++it) {
        Cplx d = cf.delta_derivative(z, m - 1);
        Cplx dp = cf.delta_derivative(z, m);
        if (std::abs(dp) < 1e-300) return;
        Cplx step = d / dp;
        z -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) return;
    }
}

}  // namespace

ContourSpec ContourSpec::circle(Cplx center, double radius, int points) {
    if (!(radius > 0.0)) throw ConfigError("contour radius must be positive");
    ContourSpec c;
    c.shape = Shape::Circle;
    c.center = center;
    c.radius = radius;
    c.points = points;
    return c;
}

ContourSpec ContourSpec::rect(Cplx center, double half_width, double half_height) {
    if (!(half_width > 0.0 && half_height > 0.0)) throw ConfigError("rectangle extents must be positive");
    ContourSpec c;
    c.shape = Shape::Rect;
    c.center = center;
    c.half_width = half_width;
    c.half_height = half_height;
    return c;
}

int count_zeros(const CharacteristicFn& cf, const ContourSpec& contour) {
    if (contour.shape == ContourSpec::Shape::Circle)
        return circle_count(cf, contour.center, contour.radius, contour.points);
    return rect_count(cf, contour.center, contour.half_width, contour.half_height);
}

std::vector<Eigenvalue> find_spectrum(const CharacteristicFn& cf, double R, const SpectrumOptions& opts) {
    if (!(R > 0.0)) throw ConfigError("spectrum radius must be positive");
    const double Rs = R + std::max(0.1, 1e-3 * R);

    std::vector<RawZero> raw;
    const int expected_total = robust_rect_count(cf, Box{Cplx(0.0, 0.0), Rs, Rs});
    std::deque<Box> queue{Box{Cplx(0.0, 0.0), Rs, Rs}};
    int guard = 0;
    while (!queue.empty()) {
        if (++guard > 200000) throw NumericalError("zero localization did not terminate");
        Box box = queue.front();
        queue.pop_front();
        int count = robust_rect_count(cf, box);
        if (count == 0) continue;

        double diam = 2.0 * std::max(box.hw, box.hh);
        if (count == 1 || diam <= 4.0 * opts.cluster_diameter) {
            Cplx z = box.center;
            double last_step = 0.0;
            double region = 3.0 * std::max(box.hw, box.hh) + 1.0;
            bool ok = refine_zero(cf, z, opts.max_iterations, last_step, box.center, region);
            // The counted zero lies inside the (possibly slightly grown) box;
            // a refinement that lands elsewhere chased a different zero.
            double margin = 0.05 * std::max(box.hw, box.hh) + opts.cluster_diameter;
            bool inside = std::abs(z.real() - box.center.real()) <= box.hw + margin &&
                          std::abs(z.imag() - box.center.imag()) <= box.hh + margin;
            if (ok && inside) {
                raw.push_back({z, count});
                continue;
            }
            if (diam <= opts.cluster_diameter) {
                std::ostringstream os;
                os << "Newton refinement failed in box about " << cplx_str(box.center)
                   << " (half-extent " << box.hw << ", count " << count << ")";
                throw NumericalError(os.str());
            }
        }
        // 4-way split, slightly off center
        double ox = box.hw * kSplitJitter;
        double oy = box.hh * kSplitJitter;
        double cx = box.center.real() + ox;
        double cy = box.center.imag() + oy;
        double left = box.center.real() - box.hw, right = box.center.real() + box.hw;
        double bottom = box.center.imag() - box.hh, top = box.center.imag() + box.hh;
        auto sub = [&](double x0, double x1, double y0, double y1) {
            queue.push_back(Box{Cplx(0.5 * (x0 + x1), 0.5 * (y0 + y1)), 0.5 * (x1 - x0), 0.5 * (y1 - y0)});
        };
        sub(left, cx, bottom, cy);
        sub(cx, right, bottom, cy);
        sub(left, cx, cy, top);
        sub(cx, right, cy, top);
    }

    // Merge raw hits that refined to the same point (or micro-cluster).
    std::vector<Cplx> merged;
    for (const auto& r : raw) {
        bool dup = false;
        for (const Cplx& z : merged)
            if (std::abs(z - r.z) < opts.cluster_diameter) { dup = true; break; }
        if (!dup) merged.push_back(r.z);
    }

    // Multiplicity by tight-circle recount, then polish and Taylor data.
    std::vector<Eigenvalue> out;
    for (size_t i = 0; i < merged.size(); ++i) {
        double sep = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < merged.size(); ++j)
            if (j != i) sep = std::min(sep, std::abs(merged[i] - merged[j]));
        double delta_r = std::min(0.1, sep / 4.0);

        Cplx z = merged[i];
        int m = multiplicity_recount(cf, z, std::min(delta_r, 5e-4), opts.contour_points);
        if (m < 1) continue;  // spurious hit refined into a neighbouring box
        if (m > 1) {
            polish_multiple(cf, z, m, 12);
        } else {
            double ls;
            refine_zero(cf, z, 8, ls, z, 1.0);
        }

        double local_scale = std::max(1.0, std::abs(cf.delta_derivative(z, 1)));
        if (std::abs(cf.delta(z)) > opts.tol_zero * local_scale) {
            std::ostringstream os;
            os << "zero candidate at " << cplx_str(z) << " failed the residual test: |Delta| = "
               << std::abs(cf.delta(z));
            throw NumericalError(os.str());
        }

        // d_j = j! * (j-th Taylor coefficient of (lambda-z)^m / Delta) on the circle.
        Eigenvalue ev;
        ev.lambda = z;
        ev.multiplicity = m;
        ev.taylor.assign(m, Cplx(0.0));
        const int N = opts.contour_points;
        std::vector<Cplx> h(N);
        for (int k = 0; k < N; ++k) {
            double th = 2.0 * kPi * k / N;
            Cplx lam = z + delta_r * std::exp(I * th);
            h[k] = std::pow(lam - z, m) / cf.delta(lam);
        }
        double fact = 1.0;
        for (int j = 0; j < m; ++j) {
            if (j > 0) fact *= j;
            Cplx acc(0.0);
            for (int k = 0; k < N; ++k) {
                double th = 2.0 * kPi * k / N;
                acc += h[k] * std::exp(-I * static_cast<double>(j) * th);
            }
            ev.taylor[j] = fact * acc / (static_cast<double>(N) * std::pow(delta_r, j));
        }
        if (std::abs(ev.taylor[0]) < 1e-12) {
            throw NumericalError("leading Taylor datum vanished at " + cplx_str(z));
        }
        out.push_back(std::move(ev));
    }

    int found_total = 0;
    for (const auto& ev : out) found_total += ev.multiplicity;
    if (found_total != expected_total) {
        std::ostringstream os;
        os << "located " << found_total << " zeros but the enclosing count is " << expected_total;
        throw NumericalError(os.str());
    }

    // Keep the closed disk |lambda| <= R (with slack for boundary zeros).
    std::vector<Eigenvalue> kept;
    for (auto& ev : out)
        if (std::abs(ev.lambda) <= R * (1.0 + opts.boundary_slack) + opts.boundary_slack)
            kept.push_back(std::move(ev));

    std::sort(kept.begin(), kept.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    return kept;
}

std::vector<std::pair<double, int>> counting_function(const CharacteristicFn& cf,
                                                      const std::vector<double>& radii,
                                                      const SpectrumOptions& opts) {
    std::vector<std::pair<double, int>> out;
    for (double r : radii) out.emplace_back(r, count_zeros(cf, ContourSpec::circle(Cplx(0.0), r, opts.contour_points)));
    return out;
}

double strip_diagnostic(const std::vector<Eigenvalue>& spectrum) {
    double m = 0.0;
    for (const auto& ev : spectrum) m = std::max(m, std::abs(ev.lambda.imag()));
    return m;
}

}  // namespace segconv
