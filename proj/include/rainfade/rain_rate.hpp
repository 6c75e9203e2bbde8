#pragma once

// Rice-Holmberg surface-point rain-rate statistics.
//
// The model splits annual rainfall into a convective ("mode 1") and a
// stratiform component and expresses the number of hours per average year
// during which a given 1-minute rain rate is exceeded as a sum of
// exponentials driven by two climate parameters: the mean annual rainfall
// depth M (mm) and the thunderstorm ratio beta (convective fraction).
//
// Reference: P. L. Rice, N. R. Holmberg, "Cumulative Time Statistics of
// Surface-Point Rainfall Rates", IEEE Trans. Commun., COM-21(10), 1973.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rainfade/errors.hpp"

namespace rainfade {

/// Hours in an average year (365.25 days). Exceedance percentages are
/// always relative to this figure.
inline constexpr double hours_per_year = 8766.0;

/// Climate parameters of the Rice-Holmberg distribution.
struct RainRateModel {
    double annual_depth_mm;     // M, mean annual rainfall depth
    double thunderstorm_ratio;  // beta, convective fraction of total rainfall

    RainRateModel(double annual_depth, double beta)
        : annual_depth_mm(annual_depth), thunderstorm_ratio(beta) {
        if (!(annual_depth > 0.0))
            throw std::domain_error("annual rainfall depth must be positive, got " +
                                    std::to_string(annual_depth));
        if (!(beta >= 0.0 && beta <= 1.0))
            throw std::domain_error("thunderstorm ratio must lie in [0,1], got " +
                                    std::to_string(beta));
    }
};

/// One sample of the rain-rate cumulative distribution: the rate in mm/h
/// exceeded for `percent_of_year` percent of an average year.
struct ExceedancePoint {
    double rate_mm_per_h;
    double percent_of_year;
};

/// Hours per average year during which the 1-minute rain rate exceeds
/// `rate_mm_per_h`. Strictly decreasing in the rate;
/// T(0) = M * (0.03*beta + 0.572*(1-beta)).
inline double exceedance_hours(const RainRateModel& model, double rate_mm_per_h) {
    if (rate_mm_per_h < 0.0)
        throw std::domain_error("rain rate must be non-negative, got " +
                                std::to_string(rate_mm_per_h));
    const double r = rate_mm_per_h;
    const double convective = 0.03 * model.thunderstorm_ratio * std::exp(-0.03 * r);
    const double stratiform = 0.2 * (1.0 - model.thunderstorm_ratio) *
                              (std::exp(-0.258 * r) + 1.86 * std::exp(-1.63 * r));
    return model.annual_depth_mm * (convective + stratiform);
}

/// Exceedance expressed as a percentage of the year. Note the unit: 0.01
/// means 0.01% of the year (~53 minutes), not the fraction 0.01.
inline double exceedance_percent(const RainRateModel& model, double rate_mm_per_h) {
    return 100.0 * exceedance_hours(model, rate_mm_per_h) / hours_per_year;
}

namespace detail {

inline constexpr double rate_percent_tolerance = 1e-9;  // relative, in percent
inline constexpr int rate_max_iterations = 200;

}  // namespace detail

/// Rain rate exceeded for `percent` percent of the year: the inverse of
/// exceedance_percent, solved by bracketed bisection. The attainable range
/// is (0, exceedance_percent(model, 0)]; requests outside it are rejected.
inline double rate_at_percent(const RainRateModel& model, double percent) {
    const double pct_max = exceedance_percent(model, 0.0);
    if (!(percent >= 1e-4 && percent <= pct_max))
        throw std::domain_error("exceedance percent " + std::to_string(percent) +
                                " outside the attainable range [0.0001, " +
                                std::to_string(pct_max) + "] for this climate");
    if (percent == pct_max) return 0.0;

    // Grow the upper bracket until the target percentage is enclosed.
    double hi = 50.0;
    while (exceedance_percent(model, hi) > percent) hi *= 2.0;

    double lo = 0.0;
    double mid = 0.5 * hi;
    for (int i = 0; i < detail::rate_max_iterations; ++i) {
        mid = 0.5 * (lo + hi);
        const double p_mid = exceedance_percent(model, mid);
        if (std::abs(p_mid - percent) <= detail::rate_percent_tolerance * percent) break;
        if (p_mid > percent)
            lo = mid;  // exceedance too frequent: rate is higher up
        else
            hi = mid;
    }
    return mid;
}

/// Samples the cumulative distribution at `n_points` percentages log-spaced
/// over [percent_lo, percent_hi]. Rates come out strictly decreasing as the
/// percentage increases.
inline std::vector<ExceedancePoint> cdf_curve(const RainRateModel& model, double percent_lo,
                                              double percent_hi, int n_points) {
    if (!(percent_lo > 0.0) || !(percent_lo < percent_hi))
        throw std::domain_error("need 0 < percent_lo < percent_hi, got [" +
                                std::to_string(percent_lo) + ", " +
                                std::to_string(percent_hi) + "]");
    if (n_points < 2)
        throw std::domain_error("need at least 2 curve points, got " +
                                std::to_string(n_points));

    std::vector<ExceedancePoint> points;
    points.reserve(static_cast<std::size_t>(n_points));
    const double log_lo = std::log10(percent_lo);
    const double step = (std::log10(percent_hi) - log_lo) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        const double p = (i == n_points - 1) ? percent_hi : std::pow(10.0, log_lo + i * step);
        points.push_back({rate_at_percent(model, p), p});
    }
    return points;
}

}  // namespace rainfade
