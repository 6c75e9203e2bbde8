#pragma once

// Tabular and curve outputs: the fade-margin grid (frequency x station x
// availability) and the plotted data series (rain-rate CDF, specific
// attenuation spectra, attenuation vs distance / exceedance percentage /
// worst-month percentage / calendar month).
//
// Both CSV and JSON emissions round each quantity to a fixed, documented
// precision first, so the two formats always carry identical numeric
// values and repeated runs are byte-identical.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rainfade/path_attenuation.hpp"
#include "rainfade/rain_rate.hpp"
#include "rainfade/specific_attenuation.hpp"
#include "rainfade/station.hpp"

namespace rainfade {

namespace fmt {

// Output precisions: attenuation 0.1 dB, rates 0.01 mm/h, per-km
// attenuation and lengths 3 decimals. Finer than the figures they are
// compared against, so rounding differences stay one-sided.
inline constexpr int db_decimals = 1;
inline constexpr int rate_decimals = 2;
inline constexpr int km_decimals = 3;
inline constexpr int gamma_decimals = 3;

inline double round_to(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double rounded = std::round(value * scale) / scale;
    return rounded == 0.0 ? 0.0 : rounded;  // avoid "-0"
}

inline std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, round_to(value, decimals));
    return buf;
}

/// Six significant digits, trailing zeros trimmed ("%g"); used for axis
/// values such as frequencies and percentages.
inline std::string sig(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

/// The double actually carrying a formatted value, for JSON emission.
inline double sig_value(double value) { return std::stod(sig(value)); }

}  // namespace fmt

/// Attenuation grid over frequency x station x availability.
struct FadeMarginTable {
    Polarization pol = Polarization::horizontal;
    double length_km = 0.0;
    std::vector<double> availabilities_percent;  // e.g. 99.99, 99.95, 99.9
    std::vector<double> frequencies_ghz;
    std::vector<std::string> stations;
    // cells[i_freq][i_station][i_availability], dB
    std::vector<std::vector<std::vector<double>>> cells;
};

inline double exceedance_for_availability(double availability_percent) {
    return 100.0 - availability_percent;
}

/// Fills the grid by running the full pipeline per (station, frequency)
/// cell; stations and frequencies keep their requested order.
inline FadeMarginTable fade_margin_table(const std::vector<StationRecord>& stations,
                                         const std::vector<double>& frequencies_ghz,
                                         const std::vector<double>& availabilities_percent,
                                         Polarization pol, double length_km) {
    if (stations.empty() || frequencies_ghz.empty() || availabilities_percent.empty())
        throw std::domain_error("table grid has an empty dimension (stations, frequencies or "
                                "availabilities)");
    FadeMarginTable table;
    table.pol = pol;
    table.length_km = length_km;
    table.availabilities_percent = availabilities_percent;
    table.frequencies_ghz = frequencies_ghz;
    for (const auto& st : stations) table.stations.push_back(st.name);

    for (const double freq : frequencies_ghz) {
        std::vector<std::vector<double>> row;
        for (const auto& station : stations) {
            const LinkSpec link(freq, pol, length_km, station.latitude_deg);
            std::vector<double> per_availability;
            for (const double avail : availabilities_percent) {
                const double p = exceedance_for_availability(avail);
                per_availability.push_back(link_attenuation(station, link, p).attenuation_db);
            }
            row.push_back(std::move(per_availability));
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

inline std::string to_csv(const FadeMarginTable& table) {
    std::string out;
    out += "# rain fade margin (dB), ";
    out += to_string(table.pol);
    out += " polarization, ";
    out += fmt::sig(table.length_km);
    out += " km path\n";
    out += "frequency_ghz";
    for (const auto& station : table.stations)
        for (const double avail : table.availabilities_percent)
            out += "," + station + "_" + fmt::sig(avail);
    out += '\n';
    for (std::size_t i = 0; i < table.frequencies_ghz.size(); ++i) {
        out += fmt::sig(table.frequencies_ghz[i]);
        for (const auto& per_station : table.cells[i])
            for (const double db : per_station) out += "," + fmt::fixed(db, fmt::db_decimals);
        out += '\n';
    }
    return out;
}

inline std::string to_json(const FadeMarginTable& table) {
    nlohmann::json doc;
    doc["kind"] = "fade_margin_table";
    doc["polarization"] = to_string(table.pol);
    doc["length_km"] = fmt::sig_value(table.length_km);
    doc["availabilities_percent"] = nlohmann::json::array();
    for (const double a : table.availabilities_percent)
        doc["availabilities_percent"].push_back(fmt::sig_value(a));
    doc["frequencies_ghz"] = nlohmann::json::array();
    for (const double f : table.frequencies_ghz)
        doc["frequencies_ghz"].push_back(fmt::sig_value(f));
    doc["stations"] = table.stations;
    doc["attenuation_db"] = nlohmann::json::array();
    for (const auto& row : table.cells) {
        nlohmann::json json_row = nlohmann::json::array();
        for (const auto& per_station : row) {
            nlohmann::json cell = nlohmann::json::array();
            for (const double db : per_station) cell.push_back(fmt::round_to(db, fmt::db_decimals));
            json_row.push_back(std::move(cell));
        }
        doc["attenuation_db"].push_back(std::move(json_row));
    }
    return doc.dump(2) + "\n";
}

/// One plotted data series per station over a shared x axis.
struct CurveSeries {
    std::string kind;     // cdf | spectrum | distance | percent | worst-month | monthly
    std::string x_label;
    std::vector<std::pair<std::string, std::string>> metadata;  // echoed inputs, in order
    std::vector<double> x;
    std::vector<std::string> stations;
    std::vector<std::vector<double>> y;  // y[i_station][i_x]
    int y_decimals = fmt::db_decimals;
    bool x_integer = false;
};

namespace detail {

inline std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    const double log_lo = std::log10(lo);
    const double step = (std::log10(hi) - log_lo) / (n - 1);
    for (int i = 0; i < n; ++i)
        xs.push_back(i == n - 1 ? hi : std::pow(10.0, log_lo + i * step));
    return xs;
}

inline std::vector<double> lin_spaced(double lo, double hi, int n) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) xs.push_back(i == n - 1 ? hi : lo + i * step);
    return xs;
}

inline void require_points(int n) {
    if (n < 2) throw std::domain_error("need at least 2 curve points, got " + std::to_string(n));
}

}  // namespace detail

/// Rain-rate CDF (rate exceeded vs percentage of year), log-spaced.
inline CurveSeries cdf_series(const std::vector<StationRecord>& stations, double percent_lo,
                              double percent_hi, int n) {
    CurveSeries series;
    series.kind = "cdf";
    series.x_label = "percent_of_year";
    series.y_decimals = fmt::rate_decimals;
    series.metadata = {{"percent_lo", fmt::sig(percent_lo)}, {"percent_hi", fmt::sig(percent_hi)}};
    for (const auto& station : stations) {
        const auto points = cdf_curve(station.rain_model(), percent_lo, percent_hi, n);
        if (series.x.empty())
            for (const auto& pt : points) series.x.push_back(pt.percent_of_year);
        series.stations.push_back(station.name);
        std::vector<double> rates;
        for (const auto& pt : points) rates.push_back(pt.rate_mm_per_h);
        series.y.push_back(std::move(rates));
    }
    return series;
}

/// Specific attenuation vs frequency, each station at its own 0.01% rate.
inline CurveSeries spectrum_series(const std::vector<StationRecord>& stations, double freq_lo,
                                   double freq_hi, int n, Polarization pol) {
    CurveSeries series;
    series.kind = "spectrum";
    series.x_label = "frequency_ghz";
    series.y_decimals = fmt::gamma_decimals;
    series.metadata = {{"polarization", to_string(pol)}, {"rate_anchor", "r001"}};
    for (const auto& station : stations) {
        const double r001 = rate_at_percent(station.rain_model(), 0.01);
        const auto samples = attenuation_spectrum(freq_lo, freq_hi, n, pol, r001);
        if (series.x.empty())
            for (const auto& [f, g] : samples) series.x.push_back(f);
        series.stations.push_back(station.name);
        std::vector<double> gammas;
        for (const auto& [f, g] : samples) gammas.push_back(g);
        series.y.push_back(std::move(gammas));
    }
    return series;
}

/// Path attenuation vs physical path length at a fixed frequency.
inline CurveSeries distance_series(const std::vector<StationRecord>& stations, double freq_ghz,
                                   Polarization pol, double percent, double km_lo, double km_hi,
                                   int n) {
    detail::require_points(n);
    if (!(km_lo > 0.0 && km_lo < km_hi && km_hi <= 60.0))
        throw std::domain_error("distance range must satisfy 0 < lo < hi <= 60 km, got [" +
                                std::to_string(km_lo) + ", " + std::to_string(km_hi) + "]");
    CurveSeries series;
    series.kind = "distance";
    series.x_label = "distance_km";
    series.metadata = {{"frequency_ghz", fmt::sig(freq_ghz)},
                       {"polarization", to_string(pol)},
                       {"percent_of_year", fmt::sig(percent)}};
    series.x = detail::lin_spaced(km_lo, km_hi, n);
    for (const auto& station : stations) {
        series.stations.push_back(station.name);
        std::vector<double> values;
        for (const double d : series.x) {
            const LinkSpec link(freq_ghz, pol, d, station.latitude_deg);
            values.push_back(link_attenuation(station, link, percent).attenuation_db);
        }
        series.y.push_back(std::move(values));
    }
    return series;
}

/// Path attenuation vs annual exceedance percentage (log-spaced).
inline CurveSeries percent_series(const std::vector<StationRecord>& stations, double freq_ghz,
                                  Polarization pol, double length_km, double percent_lo,
                                  double percent_hi, int n) {
    detail::require_points(n);
    if (!(percent_lo >= 0.001 && percent_lo < percent_hi && percent_hi <= 1.0))
        throw std::domain_error("percent range must satisfy 0.001 <= lo < hi <= 1, got [" +
                                std::to_string(percent_lo) + ", " + std::to_string(percent_hi) +
                                "]");
    CurveSeries series;
    series.kind = "percent";
    series.x_label = "percent_of_year";
    series.metadata = {{"frequency_ghz", fmt::sig(freq_ghz)},
                       {"polarization", to_string(pol)},
                       {"length_km", fmt::sig(length_km)}};
    series.x = detail::log_spaced(percent_lo, percent_hi, n);
    for (const auto& station : stations) {
        series.stations.push_back(station.name);
        const LinkSpec link(freq_ghz, pol, length_km, station.latitude_deg);
        std::vector<double> values;
        for (const double p : series.x)
            values.push_back(link_attenuation(station, link, p).attenuation_db);
        series.y.push_back(std::move(values));
    }
    return series;
}

/// Path attenuation vs worst-month exceedance percentage. The x axis is
/// the worst-month percentage corresponding to log-spaced annual ones.
inline CurveSeries worst_month_series(const std::vector<StationRecord>& stations, double freq_ghz,
                                      Polarization pol, double length_km, double annual_lo,
                                      double annual_hi, int n) {
    detail::require_points(n);
    if (!(annual_lo >= 0.001 && annual_lo < annual_hi && annual_hi <= 1.0))
        throw std::domain_error("annual percent range must satisfy 0.001 <= lo < hi <= 1, got [" +
                                std::to_string(annual_lo) + ", " + std::to_string(annual_hi) +
                                "]");
    CurveSeries series;
    series.kind = "worst-month";
    series.x_label = "worst_month_percent";
    series.metadata = {{"frequency_ghz", fmt::sig(freq_ghz)},
                       {"polarization", to_string(pol)},
                       {"length_km", fmt::sig(length_km)}};
    for (const double pa : detail::log_spaced(annual_lo, annual_hi, n))
        series.x.push_back(worst_month_percent(pa));
    for (const auto& station : stations) {
        series.stations.push_back(station.name);
        const LinkSpec link(freq_ghz, pol, length_km, station.latitude_deg);
        std::vector<double> values;
        for (const double pwm : series.x)
            values.push_back(worst_month_attenuation(station, link, pwm));
        series.y.push_back(std::move(values));
    }
    return series;
}

/// Path attenuation per calendar month, each month annualized through the
/// full pipeline. Requires ingested monthly means.
inline CurveSeries monthly_series(const std::vector<StationRecord>& stations, double freq_ghz,
                                  Polarization pol, double length_km, double percent) {
    CurveSeries series;
    series.kind = "monthly";
    series.x_label = "month";
    series.x_integer = true;
    series.metadata = {{"frequency_ghz", fmt::sig(freq_ghz)},
                       {"polarization", to_string(pol)},
                       {"length_km", fmt::sig(length_km)},
                       {"percent_of_year", fmt::sig(percent)},
                       {"method", "month annualized as 12x its mean rainfall"}};
    for (int m = 1; m <= 12; ++m) series.x.push_back(m);
    for (const auto& station : stations) {
        series.stations.push_back(station.name);
        const LinkSpec link(freq_ghz, pol, length_km, station.latitude_deg);
        const auto by_month = monthly_attenuation(station, link, percent);
        series.y.emplace_back(by_month.begin(), by_month.end());
    }
    return series;
}

inline std::string to_csv(const CurveSeries& series) {
    std::string out;
    out += "# kind: " + series.kind + "\n";
    for (const auto& [key, value] : series.metadata) out += "# " + key + ": " + value + "\n";
    out += series.x_label;
    for (const auto& station : series.stations) out += "," + station;
    out += '\n';
    for (std::size_t i = 0; i < series.x.size(); ++i) {
        out += series.x_integer ? std::to_string(static_cast<int>(series.x[i]))
                                : fmt::sig(series.x[i]);
        for (const auto& y : series.y) out += "," + fmt::fixed(y[i], series.y_decimals);
        out += '\n';
    }
    return out;
}

inline std::string to_json(const CurveSeries& series) {
    nlohmann::json doc;
    doc["kind"] = series.kind;
    doc["metadata"] = nlohmann::json::object();
    for (const auto& [key, value] : series.metadata) doc["metadata"][key] = value;
    doc["x_label"] = series.x_label;
    doc["x"] = nlohmann::json::array();
    for (const double x : series.x)
        doc["x"].push_back(series.x_integer ? nlohmann::json(static_cast<int>(x))
                                            : nlohmann::json(fmt::sig_value(x)));
    doc["stations"] = series.stations;
    doc["y"] = nlohmann::json::array();
    for (const auto& y : series.y) {
        nlohmann::json values = nlohmann::json::array();
        for (const double v : y) values.push_back(fmt::round_to(v, series.y_decimals));
        doc["y"].push_back(std::move(values));
    }
    return doc.dump(2) + "\n";
}

}  // namespace rainfade
