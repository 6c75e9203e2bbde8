#pragma once

// Power-law specific attenuation gamma_R = k * R^alpha (dB/km).
//
// The frequency- and polarization-dependent coefficients k and alpha are
// evaluated from the Gaussian-in-log-frequency regression of Recommendation
// ITU-R P.838-3, "Specific attenuation model for rain for use in prediction
// methods" (2005). The regression constants below are transcribed from that
// Recommendation's Tables 1-4 and checked against its own frequency table
// (at 10 GHz: k_H 0.01217, alpha_H 1.2571, k_V 0.01129, alpha_V 1.2156).

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rainfade/errors.hpp"

namespace rainfade {

enum class Polarization { horizontal, vertical, circular };

inline const char* to_string(Polarization pol) {
    switch (pol) {
        case Polarization::horizontal: return "horizontal";
        case Polarization::vertical: return "vertical";
        case Polarization::circular: return "circular";
    }
    return "?";
}

inline Polarization polarization_from_string(const std::string& text) {
    if (text == "h" || text == "horizontal") return Polarization::horizontal;
    if (text == "v" || text == "vertical") return Polarization::vertical;
    if (text == "c" || text == "circular") return Polarization::circular;
    throw std::domain_error("unknown polarization '" + text +
                            "' (expected h, v, c, horizontal, vertical or circular)");
}

/// The (k, alpha) pair of the power law for one frequency/polarization.
struct AttenuationCoefficients {
    double k;
    double alpha;
};

namespace p838 {

// One Gaussian term of the regression: a * exp(-((log10 f - b) / c)^2).
struct RegressionTerm {
    double a, b, c;
};

// log10 k_H (Table 1)
inline constexpr std::array<RegressionTerm, 4> k_h_terms{{
    {-5.33980, -0.10008, 1.13098},
    {-0.35351, 1.26970, 0.45400},
    {-0.23789, 0.86036, 0.15354},
    {-0.94158, 0.64552, 0.16817},
}};
inline constexpr double k_h_m = -0.18961;
inline constexpr double k_h_c = 0.71147;

// log10 k_V (Table 2)
inline constexpr std::array<RegressionTerm, 4> k_v_terms{{
    {-3.80595, 0.56934, 0.81061},
    {-3.44965, -0.22911, 0.51059},
    {-0.39902, 0.73042, 0.11899},
    {0.50167, 1.07319, 0.27195},
}};
inline constexpr double k_v_m = -0.16398;
inline constexpr double k_v_c = 0.63297;

// alpha_H (Table 3)
inline constexpr std::array<RegressionTerm, 5> alpha_h_terms{{
    {-0.14318, 1.82442, -0.55187},
    {0.29591, 0.77564, 0.19822},
    {0.32177, 0.62773, 0.13164},
    {-5.37610, -0.96230, 1.47828},
    {16.1721, -3.29980, 3.43990},
}};
inline constexpr double alpha_h_m = 0.67849;
inline constexpr double alpha_h_c = -1.95537;

// alpha_V (Table 4)
inline constexpr std::array<RegressionTerm, 5> alpha_v_terms{{
    {-0.07771, 2.33840, -0.76284},
    {0.56727, 0.95545, 0.54039},
    {-0.20238, 1.14520, 0.26809},
    {-48.2991, 0.791669, 0.116226},
    {48.5833, 0.791459, 0.116479},
}};
inline constexpr double alpha_v_m = -0.053739;
inline constexpr double alpha_v_c = 0.83433;

template <std::size_t N>
double evaluate(const std::array<RegressionTerm, N>& terms, double m, double c,
                double log10_freq) {
    double sum = m * log10_freq + c;
    for (const auto& t : terms) {
        const double u = (log10_freq - t.b) / t.c;
        sum += t.a * std::exp(-(u * u));
    }
    return sum;
}

}  // namespace p838

/// Frequency range over which the embedded regression is applied.
inline constexpr double min_frequency_ghz = 1.0;
inline constexpr double max_frequency_ghz = 100.0;

inline void check_frequency(double freq_ghz) {
    if (!(freq_ghz >= min_frequency_ghz && freq_ghz <= max_frequency_ghz))
        throw std::domain_error("frequency " + std::to_string(freq_ghz) +
                                " GHz outside the supported range [1, 100] GHz");
}

/// Coefficients for a linear polarization, straight from the regression.
inline AttenuationCoefficients base_coefficients(double freq_ghz, Polarization pol) {
    check_frequency(freq_ghz);
    const double lf = std::log10(freq_ghz);
    switch (pol) {
        case Polarization::horizontal:
            return {std::pow(10.0, p838::evaluate(p838::k_h_terms, p838::k_h_m, p838::k_h_c, lf)),
                    p838::evaluate(p838::alpha_h_terms, p838::alpha_h_m, p838::alpha_h_c, lf)};
        case Polarization::vertical:
            return {std::pow(10.0, p838::evaluate(p838::k_v_terms, p838::k_v_m, p838::k_v_c, lf)),
                    p838::evaluate(p838::alpha_v_terms, p838::alpha_v_m, p838::alpha_v_c, lf)};
        default:
            throw std::invalid_argument(
                "base coefficients exist for linear polarizations only; "
                "use combined_coefficients for circular");
    }
}

/// Blends horizontal and vertical coefficients for an arbitrary path
/// elevation theta and polarization tilt tau (both in degrees):
///   k     = [k_H + k_V + (k_H - k_V) cos^2(theta) cos(2 tau)] / 2
///   alpha = [k_H a_H + k_V a_V + (k_H a_H - k_V a_V) cos^2(theta) cos(2 tau)] / (2 k)
inline AttenuationCoefficients combine_coefficients(const AttenuationCoefficients& horizontal,
                                                    const AttenuationCoefficients& vertical,
                                                    double path_elevation_deg, double tilt_deg) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double cos_theta = std::cos(path_elevation_deg * deg);
    const double geometry = cos_theta * cos_theta * std::cos(2.0 * tilt_deg * deg);

    const double kh = horizontal.k, kv = vertical.k;
    const double kah = horizontal.k * horizontal.alpha, kav = vertical.k * vertical.alpha;
    const double k = 0.5 * (kh + kv + (kh - kv) * geometry);
    const double alpha = (kah + kav + (kah - kav) * geometry) / (2.0 * k);
    return {k, alpha};
}

/// Equivalent tilt angle of each polarization: 0 deg horizontal, 90 deg
/// vertical, 45 deg circular.
inline double polarization_tilt_deg(Polarization pol) {
    switch (pol) {
        case Polarization::horizontal: return 0.0;
        case Polarization::vertical: return 90.0;
        case Polarization::circular: return 45.0;
    }
    return 0.0;
}

/// Coefficients for an arbitrary polarization. Terrestrial links have zero
/// path elevation, so horizontal and vertical reduce to base_coefficients
/// and circular is the equal-weight blend.
inline AttenuationCoefficients combined_coefficients(double freq_ghz, Polarization pol,
                                                     double path_elevation_deg = 0.0) {
    return combine_coefficients(base_coefficients(freq_ghz, Polarization::horizontal),
                                base_coefficients(freq_ghz, Polarization::vertical),
                                path_elevation_deg, polarization_tilt_deg(pol));
}

/// Attenuation per kilometre at the given rain rate: gamma = k * R^alpha.
inline double specific_attenuation(double freq_ghz, Polarization pol, double rate_mm_per_h) {
    if (rate_mm_per_h < 0.0)
        throw std::domain_error("rain rate must be non-negative, got " +
                                std::to_string(rate_mm_per_h));
    if (rate_mm_per_h == 0.0) {
        check_frequency(freq_ghz);
        return 0.0;
    }
    const AttenuationCoefficients c = combined_coefficients(freq_ghz, pol);
    return c.k * std::pow(rate_mm_per_h, c.alpha);
}

/// Specific attenuation sampled at n evenly spaced frequencies across
/// [freq_lo, freq_hi], as (GHz, dB/km) pairs.
inline std::vector<std::pair<double, double>> attenuation_spectrum(double freq_lo, double freq_hi,
                                                                   int n, Polarization pol,
                                                                   double rate_mm_per_h) {
    if (!(freq_lo < freq_hi))
        throw std::domain_error("need freq_lo < freq_hi, got [" + std::to_string(freq_lo) +
                                ", " + std::to_string(freq_hi) + "]");
    check_frequency(freq_lo);
    check_frequency(freq_hi);
    if (n < 2)
        throw std::domain_error("need at least 2 spectrum points, got " + std::to_string(n));

    std::vector<std::pair<double, double>> samples;
    samples.reserve(static_cast<std::size_t>(n));
    const double step = (freq_hi - freq_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double f = (i == n - 1) ? freq_hi : freq_lo + i * step;
        samples.emplace_back(f, specific_attenuation(f, pol, rate_mm_per_h));
    }
    return samples;
}

}  // namespace rainfade
