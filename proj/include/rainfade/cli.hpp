#pragma once

// Command-line front end. Subcommands:
//   rate    rain rate exceeded for a percentage of the year
//   atten   single-link attenuation with all pipeline intermediates
//   table   fade-margin grid over frequency x station x availability
//   curve   plotted data series (cdf, spectrum, distance, percent,
//           worst-month, monthly)
//   ingest  compute station statistics from a rainfall CSV archive and
//           merge them into a registry document
//
// Exit codes: 0 success, 2 usage or domain error, 3 data error (unreadable
// or invalid input files). Output goes to stdout or --out, as CSV or JSON
// per --format; identical invocations produce byte-identical output.

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rainfade/errors.hpp"
#include "rainfade/path_attenuation.hpp"
#include "rainfade/rain_rate.hpp"
#include "rainfade/report.hpp"
#include "rainfade/specific_attenuation.hpp"
#include "rainfade/station.hpp"

namespace rainfade::cli {

/// 0.01% rain rate for the region from the global precipitation maps of
/// Recommendation ITU-R P.837; printed alongside locally derived rates
/// for comparison.
inline constexpr double itu_map_r001_mm_per_h = 95.0;

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot read file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write file '" + path + "'");
    out << content;
    if (!out) throw validation_error("failed while writing file '" + path + "'");
}

inline std::vector<StationRecord> load_registry(const std::string& path) {
    if (path.empty()) return builtin_registry();
    return load_station_registry(read_file(path));
}

inline std::vector<StationRecord> select_stations(const std::vector<StationRecord>& registry,
                                                  const std::vector<std::string>& names) {
    if (names.empty()) return registry;
    std::vector<StationRecord> selected;
    for (const auto& name : names) selected.push_back(find_station(registry, name));
    return selected;
}

inline double resolve_percent(const std::optional<double>& percent,
                              const std::optional<double>& availability,
                              double fallback) {
    if (percent && availability)
        throw std::domain_error("give either --percent or --availability, not both");
    if (percent) return *percent;
    if (availability) return exceedance_for_availability(*availability);
    return fallback;
}

inline bool near(double a, double b) { return std::abs(a - b) <= 1e-9; }

struct RateReport {
    std::string station;
    double percent = 0.0;
    double rate = 0.0;
    bool with_map_comparison = false;
    double diff_vs_map_pct = 0.0;
    double diff_vs_measured_pct = 0.0;
};

inline std::string to_csv(const RateReport& r) {
    std::string out = "station,percent_of_year,rate_mm_per_h";
    if (r.with_map_comparison)
        out += ",itu_map_rate_mm_per_h,diff_vs_map_percent,diff_vs_measured_percent";
    out += '\n';
    out += r.station + "," + fmt::sig(r.percent) + "," + fmt::fixed(r.rate, fmt::rate_decimals);
    if (r.with_map_comparison) {
        out += "," + fmt::sig(itu_map_r001_mm_per_h);
        out += "," + fmt::fixed(r.diff_vs_map_pct, 2);
        out += "," + fmt::fixed(r.diff_vs_measured_pct, 2);
    }
    out += '\n';
    return out;
}

inline std::string to_json(const RateReport& r) {
    nlohmann::json doc;
    doc["station"] = r.station;
    doc["percent_of_year"] = fmt::sig_value(r.percent);
    doc["rate_mm_per_h"] = fmt::round_to(r.rate, fmt::rate_decimals);
    if (r.with_map_comparison) {
        doc["itu_map_rate_mm_per_h"] = itu_map_r001_mm_per_h;
        doc["diff_vs_map_percent"] = fmt::round_to(r.diff_vs_map_pct, 2);
        doc["diff_vs_measured_percent"] = fmt::round_to(r.diff_vs_measured_pct, 2);
    }
    return doc.dump(2) + "\n";
}

struct AttenReport {
    std::string station;
    double freq = 0.0;
    Polarization pol = Polarization::horizontal;
    double length = 0.0;
    PathAttenuationResult result{};
};

inline std::string to_csv(const AttenReport& r) {
    std::string out =
        "station,freq_ghz,polarization,length_km,percent_of_year,availability_percent,"
        "r001_mm_per_h,gamma_db_per_km,d0_km,deff_km,a001_db,attenuation_db\n";
    out += r.station;
    out += "," + fmt::sig(r.freq);
    out += std::string(",") + to_string(r.pol);
    out += "," + fmt::sig(r.length);
    out += "," + fmt::sig(r.result.percent_of_year);
    out += "," + fmt::sig(100.0 - r.result.percent_of_year);
    out += "," + fmt::fixed(r.result.r001_mm_per_h, fmt::rate_decimals);
    out += "," + fmt::fixed(r.result.gamma_db_per_km, fmt::gamma_decimals);
    out += "," + fmt::fixed(r.result.d0_km, fmt::km_decimals);
    out += "," + fmt::fixed(r.result.deff_km, fmt::km_decimals);
    out += "," + fmt::fixed(r.result.a001_db, fmt::db_decimals);
    out += "," + fmt::fixed(r.result.attenuation_db, fmt::db_decimals);
    out += '\n';
    return out;
}

inline std::string to_json(const AttenReport& r) {
    nlohmann::json doc;
    doc["station"] = r.station;
    doc["freq_ghz"] = fmt::sig_value(r.freq);
    doc["polarization"] = to_string(r.pol);
    doc["length_km"] = fmt::sig_value(r.length);
    doc["percent_of_year"] = fmt::sig_value(r.result.percent_of_year);
    doc["availability_percent"] = fmt::sig_value(100.0 - r.result.percent_of_year);
    doc["r001_mm_per_h"] = fmt::round_to(r.result.r001_mm_per_h, fmt::rate_decimals);
    doc["gamma_db_per_km"] = fmt::round_to(r.result.gamma_db_per_km, fmt::gamma_decimals);
    doc["d0_km"] = fmt::round_to(r.result.d0_km, fmt::km_decimals);
    doc["deff_km"] = fmt::round_to(r.result.deff_km, fmt::km_decimals);
    doc["a001_db"] = fmt::round_to(r.result.a001_db, fmt::db_decimals);
    doc["attenuation_db"] = fmt::round_to(r.result.attenuation_db, fmt::db_decimals);
    return doc.dump(2) + "\n";
}

}  // namespace detail

/// Runs the CLI on `args` (program name excluded). Streams `out` and `err`
/// receive what would normally go to stdout/stderr.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"rain attenuation and fade-margin planner for terrestrial microwave links"};
    app.name("rainfade");
    app.require_subcommand(1);
    app.fallthrough();

    std::string registry_path;
    std::string format = "csv";
    std::string out_path;
    app.add_option("--registry", registry_path,
                   "station registry JSON (default: built-in stations)");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", out_path, "write output to this file instead of stdout");

    // rate
    auto* rate_cmd = app.add_subcommand("rate", "rain rate exceeded for a percentage of the year");
    std::string rate_station;
    std::optional<double> rate_percent, rate_availability;
    rate_cmd->add_option("--station", rate_station, "station name")->required();
    rate_cmd->add_option("--percent", rate_percent, "exceedance percentage of the year");
    rate_cmd->add_option("--availability", rate_availability, "availability percentage");

    // atten
    auto* atten_cmd = app.add_subcommand("atten", "single-link rain attenuation");
    std::string atten_station, atten_pol = "h";
    double atten_freq = 10.0, atten_length = 40.0;
    std::optional<double> atten_percent, atten_availability;
    atten_cmd->add_option("--station", atten_station, "station name")->required();
    atten_cmd->add_option("--freq", atten_freq, "frequency in GHz")->capture_default_str();
    atten_cmd->add_option("--pol", atten_pol, "polarization (h, v or c)")->capture_default_str();
    atten_cmd->add_option("--length", atten_length, "path length in km")->capture_default_str();
    atten_cmd->add_option("--percent", atten_percent, "exceedance percentage of the year");
    atten_cmd->add_option("--availability", atten_availability, "availability percentage");

    // table
    auto* table_cmd = app.add_subcommand("table", "fade-margin grid over frequency x station x "
                                                  "availability");
    std::string table_pol = "h";
    double table_length = 40.0;
    std::vector<double> table_freqs, table_avails;
    std::vector<std::string> table_stations;
    table_cmd->add_option("--pol", table_pol, "polarization (h, v or c)")->capture_default_str();
    table_cmd->add_option("--length", table_length, "path length in km")->capture_default_str();
    table_cmd->add_option("--freqs", table_freqs, "frequencies in GHz (default 5..40 step 5)")
        ->delimiter(',');
    table_cmd
        ->add_option("--availabilities", table_avails,
                     "availability percentages (default 99.99,99.95,99.9)")
        ->delimiter(',');
    table_cmd->add_option("--stations", table_stations, "stations (default: whole registry)")
        ->delimiter(',');

    // curve
    auto* curve_cmd = app.add_subcommand(
        "curve", "data series: cdf | spectrum | distance | percent | worst-month | monthly");
    std::string curve_kind, curve_pol = "h";
    double curve_freq = 10.0, curve_length = 40.0;
    std::optional<double> curve_percent, curve_availability, curve_lo, curve_hi;
    std::optional<int> curve_points;
    std::vector<std::string> curve_stations;
    curve_cmd->add_option("kind", curve_kind, "curve kind")->required();
    curve_cmd->add_option("--stations", curve_stations, "stations (default: whole registry)")
        ->delimiter(',');
    curve_cmd->add_option("--pol", curve_pol, "polarization (h, v or c)")->capture_default_str();
    curve_cmd->add_option("--freq", curve_freq, "frequency in GHz")->capture_default_str();
    curve_cmd->add_option("--length", curve_length, "path length in km")->capture_default_str();
    curve_cmd->add_option("--percent", curve_percent, "exceedance percentage of the year");
    curve_cmd->add_option("--availability", curve_availability, "availability percentage");
    curve_cmd->add_option("--lo", curve_lo, "lower end of the x range");
    curve_cmd->add_option("--hi", curve_hi, "upper end of the x range");
    curve_cmd->add_option("--points", curve_points, "number of samples");

    // ingest
    auto* ingest_cmd = app.add_subcommand(
        "ingest", "merge station statistics from a rainfall CSV archive into a registry");
    std::string ingest_csv;
    std::optional<double> ingest_beta, ingest_latitude;
    ingest_cmd->add_option("--csv", ingest_csv, "rainfall archive (station,year,month,rainfall_mm)")
        ->required();
    ingest_cmd->add_option("--beta", ingest_beta, "thunderstorm ratio for stations new to the "
                                                  "registry");
    ingest_cmd->add_option("--latitude", ingest_latitude, "latitude for stations new to the "
                                                          "registry");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        std::string document;

        if (app.got_subcommand(rate_cmd)) {
            const auto registry = detail::load_registry(registry_path);
            const StationRecord& station = find_station(registry, rate_station);
            detail::RateReport report;
            report.station = station.name;
            report.percent = detail::resolve_percent(rate_percent, rate_availability, 0.01);
            report.rate = rate_at_percent(station.rain_model(), report.percent);
            if (detail::near(report.percent, 0.01)) {
                report.with_map_comparison = true;
                report.diff_vs_map_pct =
                    100.0 * (report.rate - itu_map_r001_mm_per_h) / itu_map_r001_mm_per_h;
                report.diff_vs_measured_pct =
                    100.0 * (report.rate - itu_map_r001_mm_per_h) / report.rate;
            }
            document = (format == "json") ? detail::to_json(report) : detail::to_csv(report);
        } else if (app.got_subcommand(atten_cmd)) {
            const auto registry = detail::load_registry(registry_path);
            const StationRecord& station = find_station(registry, atten_station);
            detail::AttenReport report;
            report.station = station.name;
            report.freq = atten_freq;
            report.pol = polarization_from_string(atten_pol);
            report.length = atten_length;
            const double percent =
                detail::resolve_percent(atten_percent, atten_availability, 0.01);
            const LinkSpec link(atten_freq, report.pol, atten_length, station.latitude_deg);
            report.result = link_attenuation(station, link, percent);
            document = (format == "json") ? detail::to_json(report) : detail::to_csv(report);
        } else if (app.got_subcommand(table_cmd)) {
            const auto registry = detail::load_registry(registry_path);
            if (table_freqs.empty())
                table_freqs = {5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
            if (table_avails.empty()) table_avails = {99.99, 99.95, 99.9};
            const auto table =
                fade_margin_table(detail::select_stations(registry, table_stations), table_freqs,
                                  table_avails, polarization_from_string(table_pol), table_length);
            document = (format == "json") ? to_json(table) : to_csv(table);
        } else if (app.got_subcommand(curve_cmd)) {
            const auto registry = detail::load_registry(registry_path);
            const auto stations = detail::select_stations(registry, curve_stations);
            const Polarization pol = polarization_from_string(curve_pol);
            const double percent =
                detail::resolve_percent(curve_percent, curve_availability, 0.01);
            CurveSeries series;
            if (curve_kind == "cdf") {
                series = cdf_series(stations, curve_lo.value_or(0.001), curve_hi.value_or(1.0),
                                    curve_points.value_or(50));
            } else if (curve_kind == "spectrum") {
                series = spectrum_series(stations, curve_lo.value_or(1.0),
                                         curve_hi.value_or(100.0), curve_points.value_or(100),
                                         pol);
            } else if (curve_kind == "distance") {
                series = distance_series(stations, curve_freq, pol, percent,
                                         curve_lo.value_or(1.0), curve_hi.value_or(60.0),
                                         curve_points.value_or(60));
            } else if (curve_kind == "percent") {
                series = percent_series(stations, curve_freq, pol, curve_length,
                                        curve_lo.value_or(0.001), curve_hi.value_or(1.0),
                                        curve_points.value_or(50));
            } else if (curve_kind == "worst-month") {
                series = worst_month_series(stations, curve_freq, pol, curve_length,
                                            curve_lo.value_or(0.001), curve_hi.value_or(1.0),
                                            curve_points.value_or(50));
            } else if (curve_kind == "monthly") {
                series = monthly_series(stations, curve_freq, pol, curve_length, percent);
            } else {
                throw std::domain_error(
                    "unknown curve kind '" + curve_kind +
                    "' (expected cdf, spectrum, distance, percent, worst-month or monthly)");
            }
            document = (format == "json") ? to_json(series) : to_csv(series);
        } else if (app.got_subcommand(ingest_cmd)) {
            const std::string target = !out_path.empty() ? out_path : registry_path;
            if (target.empty())
                throw std::domain_error("ingest needs --registry or --out to name the registry "
                                        "file to write");
            std::vector<StationRecord> registry;
            if (!registry_path.empty() && std::ifstream(registry_path).good())
                registry = detail::load_registry(registry_path);
            else
                registry = builtin_registry();

            const std::string csv_text = detail::read_file(ingest_csv);
            std::vector<RainfallRecord> records;
            try {
                records = parse_rainfall_csv(csv_text);
            } catch (const parse_error& e) {
                throw parse_error(ingest_csv + ": " + e.what());
            } catch (const validation_error& e) {
                throw validation_error(ingest_csv + ": " + e.what());
            }

            std::size_t updated = 0, added = 0;
            if (records.empty()) {
                err << "warning: '" << ingest_csv << "' has no data rows; registry unchanged\n";
            } else {
                for (const auto& id : station_ids(records)) {
                    const StationStats stats = station_stats(records, id);
                    for (const auto& warning : stats.warnings)
                        err << "warning: " << warning << '\n';
                    auto existing = std::find_if(
                        registry.begin(), registry.end(),
                        [&](const StationRecord& st) { return to_lower(st.name) == id; });
                    if (existing != registry.end()) {
                        existing->annual_depth_mm = stats.annual_depth_mm;
                        existing->monthly_means_mm.assign(stats.monthly_means_mm.begin(),
                                                          stats.monthly_means_mm.end());
                        ++updated;
                    } else {
                        if (!ingest_beta)
                            throw validation_error("station '" + id +
                                                   "' is new to the registry; pass --beta "
                                                   "(thunderstorm ratio) for it");
                        if (!ingest_latitude)
                            throw validation_error("station '" + id +
                                                   "' is new to the registry; pass --latitude "
                                                   "for it");
                        StationRecord st;
                        st.name = id;
                        st.annual_depth_mm = stats.annual_depth_mm;
                        st.thunderstorm_ratio = *ingest_beta;
                        st.latitude_deg = *ingest_latitude;
                        st.monthly_means_mm.assign(stats.monthly_means_mm.begin(),
                                                   stats.monthly_means_mm.end());
                        if (!(st.thunderstorm_ratio >= 0.0 && st.thunderstorm_ratio <= 1.0))
                            throw validation_error("--beta must lie in [0,1]");
                        if (!(st.latitude_deg >= -90.0 && st.latitude_deg <= 90.0))
                            throw validation_error("--latitude must lie in [-90,90]");
                        registry.push_back(std::move(st));
                        ++added;
                    }
                }
            }
            detail::write_file(target, save_station_registry(registry));
            out << "ingested " << records.size() << " records: updated " << updated
                << " stations, added " << added << " -> " << target << '\n';
            return 0;
        }

        if (!out_path.empty())
            detail::write_file(out_path, document);
        else
            out << document;
        return 0;
    } catch (const station_not_found& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace rainfade::cli
