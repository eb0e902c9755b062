#pragma once

// Extended-real helpers. Penalties and rates routinely take the values
// -inf / +inf, and we rely on the exact absorbing rules
//   r + (-inf) = -inf   (r finite),   max(v, -inf) = v,
// which IEEE doubles already provide. The only ill-defined combination,
// (+inf) + (-inf), is guarded explicitly so a level never "cancels" a
// penalty. Large negative floats are never used as stand-ins for -inf.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>

namespace ldrisk {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

inline bool is_finite(double x) { return std::isfinite(x); }

/// level + penalty with the penalty absorbing: (+inf) + (-inf) = -inf.
inline double add_penalty(double level, double penalty) {
    if (std::isinf(level) && std::isinf(penalty) && std::signbit(level) != std::signbit(penalty))
        return neg_inf;
    return level + penalty;
}

/// log(e^a + e^b), exact for the -inf identity element.
inline double log_add_exp(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    if (a == pos_inf || b == pos_inf) return pos_inf;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

/// log sum_i e^{v_i}; empty sums give -inf.
inline double log_sum_exp(std::span<const double> v) {
    double m = neg_inf;
    for (double x : v) m = std::max(m, x);
    if (m == neg_inf) return neg_inf;
    if (m == pos_inf) return pos_inf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

/// |a - b| that treats equal infinities as agreement (gap 0) and mixed
/// finite/infinite values as maximal disagreement.
inline double abs_gap(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b ? 0.0 : pos_inf;
    return std::abs(a - b);
}

/// Lossless decimal rendering; infinities become the literals "inf"/"-inf"
/// so CSV/JSON round trips preserve the sentinels.
inline std::string format_real(double x) {
    if (x == pos_inf) return "inf";
    if (x == neg_inf) return "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline double parse_real(const std::string& s) {
    if (s == "inf") return pos_inf;
    if (s == "-inf") return neg_inf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

}  // namespace ldrisk
