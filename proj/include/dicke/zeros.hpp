// zeros.hpp — zero set of the variational Husimi distribution in the
// superradiant phase: the per-branch zero surfaces
//
//   alpha = (j/alpha_e) Log((1 - z z_e)/(1 + z z_e)) + i pi (2l+1)/(2 alpha_e),
//
// their conformal-map images of a regular z-plane grid, and the straight
// dark-fringe lines of the high-j limit in beta = sqrt(2j) z coordinates.
// The normal phase has no zeros; asking for them raises NoZerosError.

#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/io.hpp"
#include "dicke/variational.hpp"

namespace dicke {

struct ZeroSurface {
    int l = 0;                // branch label
    Equilibrium equilibrium;  // superradiant equilibrium (alpha_e != 0)
    double j = 0.5;
};

inline ZeroSurface make_zero_surface(const Equilibrium& eq, int l) {
    if (eq.alpha_e == 0.0)
        throw NoZerosError("zero surface: the Husimi distribution has no zeros in the normal phase");
    return ZeroSurface{l, eq, eq.params.j};
}

// Principal-branch value of the surface map at z. Singular at z z_e = +-1.
inline Complex zero_surface_alpha(const ZeroSurface& s, Complex z) {
    const double ae = s.equilibrium.alpha_e;
    const double ze = s.equilibrium.z_e;
    const Complex w = z * ze;
    const Complex num = 1.0 - w;
    const Complex den = 1.0 + w;
    if (std::abs(num) < 1e-12 || std::abs(den) < 1e-12)
        throw SingularInputError("zero_surface_alpha: z z_e at a log branch point");
    return (s.j / ae) * std::log(num / den) +
           Complex{0.0, std::numbers::pi * (2.0 * s.l + 1.0) / (2.0 * ae)};
}

// ------------------------------ conformal grid -------------------------------

struct ConformalGridSpec {
    double z_min = -1.0;
    double z_max = 1.0;
    int lines_per_family = 21;
    int samples_per_line = 401;
};

enum class LineFamily { vertical, horizontal };  // Re z = const / Im z = const

struct ZeroCurvePoint {
    Complex z;
    Complex alpha;
};

struct ZeroCurve {
    LineFamily family = LineFamily::vertical;
    int line_id = 0;  // unique per polyline segment
    std::vector<ZeroCurvePoint> points;
};

// Images of the lines Re z = const and Im z = const under the surface map.
// Branch-cut crossings show up as jumps of about 2 pi j / |alpha_e| between
// neighbouring samples; curves are split there so plots stay clean.
inline std::vector<ZeroCurve> conformal_grid(const ZeroSurface& s,
                                             const ConformalGridSpec& grid = {}) {
    if (grid.lines_per_family < 1 || grid.samples_per_line < 2 || !(grid.z_max > grid.z_min))
        throw std::invalid_argument("conformal_grid: bad grid spec");
    const double jump_threshold = std::numbers::pi * s.j / std::abs(s.equilibrium.alpha_e);

    std::vector<ZeroCurve> curves;
    int next_id = 0;
    auto trace = [&](LineFamily family, double c) {
        ZeroCurve cur;
        cur.family = family;
        cur.line_id = next_id;
        for (int k = 0; k < grid.samples_per_line; ++k) {
            const double t =
                grid.z_min + (grid.z_max - grid.z_min) * k / (grid.samples_per_line - 1);
            const Complex z = family == LineFamily::vertical ? Complex{c, t} : Complex{t, c};
            Complex alpha;
            try {
                alpha = zero_surface_alpha(s, z);
            } catch (const SingularInputError&) {
                // break the polyline at the singular sample
                if (cur.points.size() >= 2) {
                    curves.push_back(std::move(cur));
                    next_id++;
                }
                cur = ZeroCurve{family, next_id, {}};
                continue;
            }
            if (!cur.points.empty() &&
                std::abs(alpha - cur.points.back().alpha) > jump_threshold) {
                if (cur.points.size() >= 2) {
                    curves.push_back(std::move(cur));
                    next_id++;
                }
                cur = ZeroCurve{family, next_id, {}};
            }
            cur.points.push_back({z, alpha});
        }
        if (cur.points.size() >= 2) {
            curves.push_back(std::move(cur));
            next_id++;
        }
    };

    for (int i = 0; i < grid.lines_per_family; ++i) {
        const double c = grid.lines_per_family == 1
                             ? 0.5 * (grid.z_min + grid.z_max)
                             : grid.z_min + (grid.z_max - grid.z_min) * i /
                                                (grid.lines_per_family - 1);
        trace(LineFamily::vertical, c);
    }
    for (int i = 0; i < grid.lines_per_family; ++i) {
        const double c = grid.lines_per_family == 1
                             ? 0.5 * (grid.z_min + grid.z_max)
                             : grid.z_min + (grid.z_max - grid.z_min) * i /
                                                (grid.lines_per_family - 1);
        trace(LineFamily::horizontal, c);
    }
    return curves;
}

inline void write_curves_csv(const std::vector<ZeroCurve>& curves, std::ostream& out) {
    CsvWriter csv(out);
    csv.header({"family", "line_id", "re_alpha", "im_alpha", "re_z", "im_z"});
    for (const auto& c : curves) {
        const std::string fam = c.family == LineFamily::vertical ? "vertical" : "horizontal";
        for (const auto& pt : c.points)
            csv.row({fam, std::to_string(c.line_id), format_full(pt.alpha.real()),
                     format_full(pt.alpha.imag()), format_full(pt.z.real()),
                     format_full(pt.z.imag())});
    }
}

// -------------------------------- dark fringes -------------------------------

// High-j limit in beta = sqrt(2j) z: zeros lie on straight lines
//   alpha_1 = -(beta_e/alpha_e) beta_1                      (position plane)
//   alpha_2 = -(beta_e/alpha_e) beta_2 + pi (2l+1)/(2 alpha_e)   (momentum)
struct FringeLines {
    int l = 0;
    double slope = 0.0;
    double intercept_position = 0.0;
    double intercept_momentum = 0.0;
};

inline FringeLines fringe_lines(const Equilibrium& eq, double j, int l) {
    if (eq.alpha_e == 0.0)
        throw NoZerosError("fringe_lines: no zeros in the normal phase");
    const double beta_e = std::sqrt(2.0 * j) * eq.z_e;
    FringeLines f;
    f.l = l;
    f.slope = -beta_e / eq.alpha_e;
    f.intercept_position = 0.0;
    f.intercept_momentum = std::numbers::pi * (2.0 * l + 1.0) / (2.0 * eq.alpha_e);
    return f;
}

inline nlohmann::json to_json(const FringeLines& f) {
    return nlohmann::json{{"l", f.l},
                          {"slope", f.slope},
                          {"intercept_position", f.intercept_position},
                          {"intercept_momentum", f.intercept_momentum}};
}

} // namespace dicke
