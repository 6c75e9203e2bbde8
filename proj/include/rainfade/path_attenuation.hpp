#pragma once

// Whole-path rain attenuation for terrestrial line-of-sight links, after
// the prediction procedure of Recommendation ITU-R P.530: anchor the
// statistics at the rain rate exceeded 0.01% of the year, reduce the
// physical path to an effective length through the rain-cell model,
// multiply by the specific attenuation, then extrapolate to other
// exceedance percentages with a latitude-dependent power law. Worst-month
// conversion follows Recommendation ITU-R P.841.
//
// The procedure is stated as valid for frequencies up to 40 GHz and path
// lengths up to 60 km; LinkSpec enforces those bounds.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rainfade/rain_rate.hpp"
#include "rainfade/specific_attenuation.hpp"
#include "rainfade/station.hpp"

namespace rainfade {

/// A terrestrial link: carrier frequency, polarization, physical path
/// length and the latitude deciding the extrapolation branch.
struct LinkSpec {
    double freq_ghz;
    Polarization pol;
    double length_km;
    double latitude_deg;

    LinkSpec(double freq, Polarization polarization, double length, double latitude)
        : freq_ghz(freq), pol(polarization), length_km(length), latitude_deg(latitude) {
        if (!(freq >= 1.0 && freq <= 40.0))
            throw std::domain_error("frequency " + std::to_string(freq) +
                                    " GHz outside the path model validity range [1, 40] GHz");
        if (!(length > 0.0 && length <= 60.0))
            throw std::domain_error("path length " + std::to_string(length) +
                                    " km outside the path model validity range (0, 60] km");
        if (!(latitude >= -90.0 && latitude <= 90.0))
            throw std::domain_error("latitude " + std::to_string(latitude) +
                                    " deg outside [-90, 90]");
    }
};

/// Every intermediate of the prediction pipeline, so reports can show how
/// a figure was arrived at.
struct PathAttenuationResult {
    double r001_mm_per_h;     // rain rate exceeded 0.01% of the year
    double gamma_db_per_km;   // specific attenuation at that rate
    double d0_km;             // rain cell length
    double deff_km;           // effective path length
    double a001_db;           // path attenuation exceeded 0.01% of the year
    double attenuation_db;    // attenuation at the requested percentage
    double percent_of_year;   // the requested exceedance percentage
};

/// Length over which rain is treated as uniform. Decays exponentially with
/// the anchor rain rate and saturates above 100 mm/h; both branches agree
/// at the boundary, so the function is continuous.
inline double rain_cell_length(double r001_mm_per_h) {
    if (r001_mm_per_h < 0.0)
        throw std::domain_error("rain rate must be non-negative, got " +
                                std::to_string(r001_mm_per_h));
    if (r001_mm_per_h > 100.0) return 35.0 * std::exp(-1.5);
    return 35.0 * std::exp(-0.015 * r001_mm_per_h);
}

/// Harmonic-style reduction of the physical path: d / (1 + d/d0), which is
/// below both d and d0 and approaches d0 as the path grows.
inline double effective_path_length(double d_km, double d0_km) {
    if (!(d_km > 0.0) || !(d0_km > 0.0))
        throw std::domain_error("path and cell lengths must be positive, got d=" +
                                std::to_string(d_km) + ", d0=" + std::to_string(d0_km));
    return d_km / (1.0 + d_km / d0_km);
}

/// Path attenuation exceeded 0.01% of the year.
inline double attenuation_001(double gamma_db_per_km, double deff_km) {
    if (gamma_db_per_km < 0.0)
        throw std::domain_error("specific attenuation must be non-negative, got " +
                                std::to_string(gamma_db_per_km));
    if (!(deff_km > 0.0))
        throw std::domain_error("effective path length must be positive, got " +
                                std::to_string(deff_km));
    return gamma_db_per_km * deff_km;
}

/// Extrapolates the 0.01% attenuation to another exceedance percentage in
/// [0.001, 1]. Sites at 30 degrees latitude or above use
///   A_p = 0.12 A001 p^-(0.546 + 0.043 log10 p),
/// sites below use
///   A_p = 0.07 A001 p^-(0.855 + 0.139 log10 p).
inline double scale_to_percent(double a001_db, double percent, double latitude_deg) {
    if (!(percent >= 0.001 && percent <= 1.0))
        throw std::domain_error("exceedance percent " + std::to_string(percent) +
                                " outside the extrapolation range [0.001, 1]");
    if (a001_db < 0.0)
        throw std::domain_error("attenuation must be non-negative, got " +
                                std::to_string(a001_db));
    const double lp = std::log10(percent);
    if (std::abs(latitude_deg) >= 30.0)
        return 0.12 * a001_db * std::pow(percent, -(0.546 + 0.043 * lp));
    return 0.07 * a001_db * std::pow(percent, -(0.855 + 0.139 * lp));
}

/// Worst-month exceedance percentage corresponding to an annual one:
/// p_wm = (p_a / 0.3)^(1/1.15). The two scales agree at 0.3%.
inline double worst_month_percent(double annual_percent) {
    if (!(annual_percent > 0.0))
        throw std::domain_error("annual percent must be positive, got " +
                                std::to_string(annual_percent));
    return std::exp(std::log(annual_percent / 0.3) / 1.15);
}

/// Inverse of worst_month_percent: p_a = 0.3 * p_wm^1.15.
inline double annual_percent_for_worst_month(double worst_month_pct) {
    if (!(worst_month_pct > 0.0))
        throw std::domain_error("worst-month percent must be positive, got " +
                                std::to_string(worst_month_pct));
    return 0.3 * std::pow(worst_month_pct, 1.15);
}

namespace detail {

template <typename Fn>
auto pipeline_stage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const std::domain_error& e) {
        throw std::domain_error(std::string(stage) + ": " + e.what());
    }
}

}  // namespace detail

/// Runs the full prediction for one station/link at an annual exceedance
/// percentage in [0.001, 1]. The anchor rate is always the 0.01% one; only
/// the final extrapolation step depends on `percent`.
inline PathAttenuationResult link_attenuation(const StationRecord& station, const LinkSpec& link,
                                              double percent) {
    PathAttenuationResult result{};
    result.percent_of_year = percent;
    result.r001_mm_per_h = detail::pipeline_stage("rain-rate inversion", [&] {
        return rate_at_percent(station.rain_model(), 0.01);
    });
    result.gamma_db_per_km = detail::pipeline_stage("specific attenuation", [&] {
        return specific_attenuation(link.freq_ghz, link.pol, result.r001_mm_per_h);
    });
    result.d0_km = detail::pipeline_stage("rain cell length", [&] {
        return rain_cell_length(result.r001_mm_per_h);
    });
    result.deff_km = detail::pipeline_stage("effective path length", [&] {
        return effective_path_length(link.length_km, result.d0_km);
    });
    result.a001_db = detail::pipeline_stage("path attenuation", [&] {
        return attenuation_001(result.gamma_db_per_km, result.deff_km);
    });
    result.attenuation_db = detail::pipeline_stage("percentage extrapolation", [&] {
        return scale_to_percent(result.a001_db, percent, station.latitude_deg);
    });
    return result;
}

/// Attenuation exceeded for a given percentage of the worst month: the
/// annual prediction evaluated at the equivalent annual percentage, which
/// must land inside the extrapolation range.
inline double worst_month_attenuation(const StationRecord& station, const LinkSpec& link,
                                      double worst_month_pct) {
    const double annual = annual_percent_for_worst_month(worst_month_pct);
    if (!(annual >= 0.001 && annual <= 1.0))
        throw std::domain_error("worst-month percent " + std::to_string(worst_month_pct) +
                                " implies annual percent " + std::to_string(annual) +
                                " outside the extrapolation range [0.001, 1]");
    return link_attenuation(station, link, annual).attenuation_db;
}

/// Per-month attenuation, one value per calendar month. Each month is
/// annualized (12x its mean rainfall) and run through the full pipeline
/// with the station's thunderstorm ratio, so the values answer "what if the
/// whole year rained like this month". Months with no rainfall, or with too
/// little for the 0.01% anchor rate to exist, produce 0 dB.
inline std::array<double, 12> monthly_attenuation(const StationRecord& station,
                                                  const LinkSpec& link, double percent) {
    if (!station.has_monthly_means())
        throw std::domain_error("station '" + station.name +
                                "' has no monthly means; ingest a rainfall archive first");
    std::array<double, 12> result{};
    for (int m = 0; m < 12; ++m) {
        const double depth = 12.0 * station.monthly_means_mm[static_cast<std::size_t>(m)];
        if (depth <= 0.0) continue;
        StationRecord month_station = station;
        month_station.annual_depth_mm = depth;
        if (exceedance_percent(month_station.rain_model(), 0.0) <= 0.01)
            continue;  // too dry for the anchor percentage to be reached
        result[static_cast<std::size_t>(m)] =
            link_attenuation(month_station, link, percent).attenuation_db;
    }
    return result;
}

}  // namespace rainfade
