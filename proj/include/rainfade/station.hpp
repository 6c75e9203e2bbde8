#pragma once

// Station records and rainfall-archive ingestion.
//
// Rainfall archives are plain CSV with the header
//   station,year,month,rainfall_mm
// one observation per row, '.' decimal separator, no thousands separators.
// Station registries are JSON documents of the form
//   {"stations":[{"name":...,"annual_depth_mm":...,"thunderstorm_ratio":...,
//                 "latitude_deg":...,"monthly_means_mm":[12 numbers]}]}
// where monthly_means_mm may be empty (or absent) when no per-month data
// has been ingested yet.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rainfade/errors.hpp"
#include "rainfade/rain_rate.hpp"

namespace rainfade {

/// One monthly rainfall observation from an archive.
struct RainfallRecord {
    std::string station_id;
    int year = 0;
    int month = 0;  // 1..12
    double rainfall_mm = 0.0;

    friend bool operator==(const RainfallRecord&, const RainfallRecord&) = default;
};

/// A named site with its Rice-Holmberg climate parameters. Monthly means
/// are empty until an archive has been ingested for the station.
struct StationRecord {
    std::string name;
    double annual_depth_mm = 0.0;    // M
    double thunderstorm_ratio = 0.5; // beta
    double latitude_deg = 0.0;
    std::vector<double> monthly_means_mm;  // empty or exactly 12 values

    bool has_monthly_means() const { return monthly_means_mm.size() == 12; }

    RainRateModel rain_model() const {
        return RainRateModel(annual_depth_mm, thunderstorm_ratio);
    }

    friend bool operator==(const StationRecord&, const StationRecord&) = default;
};

/// Derived statistics for one station of an archive.
struct StationStats {
    double annual_depth_mm = 0.0;             // mean of yearly totals
    std::array<double, 12> monthly_means_mm{};  // mean per calendar month
    std::vector<std::string> warnings;        // data-completeness notes
};

inline std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

inline int parse_int_field(std::string_view text, const char* field, std::size_t line_no) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw parse_error("field '" + std::string(field) + "' is not an integer: '" +
                          std::string(text) + "'", line_no);
    return value;
}

inline double parse_double_field(std::string_view text, const char* field, std::size_t line_no) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw parse_error("field '" + std::string(field) + "' is not a number: '" +
                          std::string(text) + "'", line_no);
    return value;
}

inline std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

}  // namespace detail

inline constexpr std::string_view rainfall_csv_header = "station,year,month,rainfall_mm";

/// Parses a rainfall archive. Rows come back in input order; errors carry
/// the 1-based line number of the offending row.
inline std::vector<RainfallRecord> parse_rainfall_csv(std::string_view text) {
    std::vector<RainfallRecord> records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool saw_header = false;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        line = detail::trim(line);
        if (line.empty()) continue;

        if (!saw_header) {
            if (line != rainfall_csv_header)
                throw parse_error("unknown header '" + std::string(line) + "' (expected '" +
                                  std::string(rainfall_csv_header) + "')", line_no);
            saw_header = true;
            continue;
        }

        const auto fields = detail::split_fields(line);
        if (fields.size() != 4)
            throw parse_error("expected 4 fields, got " + std::to_string(fields.size()), line_no);
        RainfallRecord rec;
        rec.station_id = std::string(fields[0]);
        if (rec.station_id.empty())
            throw parse_error("field 'station' is empty", line_no);
        rec.year = detail::parse_int_field(fields[1], "year", line_no);
        rec.month = detail::parse_int_field(fields[2], "month", line_no);
        if (rec.month < 1 || rec.month > 12)
            throw parse_error("field 'month' must be in [1,12], got " +
                              std::to_string(rec.month), line_no);
        rec.rainfall_mm = detail::parse_double_field(fields[3], "rainfall_mm", line_no);
        if (rec.rainfall_mm < 0.0)
            throw validation_error("line " + std::to_string(line_no) +
                                   ": field 'rainfall_mm' must be non-negative, got " +
                                   detail::format_double(rec.rainfall_mm));
        records.push_back(std::move(rec));
    }
    if (!saw_header)
        throw parse_error("missing header '" + std::string(rainfall_csv_header) + "'", 1);
    return records;
}

/// Inverse of parse_rainfall_csv; numbers are written shortest-round-trip
/// so parse(serialize(r)) == r exactly.
inline std::string serialize_rainfall_csv(const std::vector<RainfallRecord>& records) {
    std::string out(rainfall_csv_header);
    out += '\n';
    for (const auto& rec : records) {
        out += rec.station_id;
        out += ',';
        out += std::to_string(rec.year);
        out += ',';
        out += std::to_string(rec.month);
        out += ',';
        out += detail::format_double(rec.rainfall_mm);
        out += '\n';
    }
    return out;
}

/// Station ids appearing in an archive, in order of first appearance
/// (lower-cased).
inline std::vector<std::string> station_ids(const std::vector<RainfallRecord>& records) {
    std::vector<std::string> ids;
    for (const auto& rec : records) {
        const std::string id = to_lower(rec.station_id);
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    return ids;
}

/// Computes the mean annual depth and per-month means for one station.
/// Years with missing months still contribute their available months; the
/// gaps are reported through `warnings` rather than by dropping the year.
inline StationStats station_stats(const std::vector<RainfallRecord>& records,
                                  std::string_view station_id) {
    const std::string wanted = to_lower(station_id);
    std::map<int, std::array<bool, 12>> seen;          // year -> months present
    std::map<int, double> yearly_total;
    std::array<double, 12> month_sum{};
    std::array<int, 12> month_count{};

    for (const auto& rec : records) {
        if (to_lower(rec.station_id) != wanted) continue;
        auto& months = seen[rec.year];
        if (months[rec.month - 1])
            throw validation_error("duplicate record for station '" + std::string(station_id) +
                                   "', year " + std::to_string(rec.year) + ", month " +
                                   std::to_string(rec.month));
        months[rec.month - 1] = true;
        yearly_total[rec.year] += rec.rainfall_mm;
        month_sum[rec.month - 1] += rec.rainfall_mm;
        ++month_count[rec.month - 1];
    }
    if (yearly_total.empty())
        throw station_not_found("no rainfall records for station '" + std::string(station_id) +
                                "'");

    StationStats stats;
    double total = 0.0;
    for (const auto& [year, sum] : yearly_total) {
        total += sum;
        const auto& months = seen[year];
        const int present = static_cast<int>(std::count(months.begin(), months.end(), true));
        if (present < 12)
            stats.warnings.push_back("station '" + std::string(station_id) + "': year " +
                                     std::to_string(year) + " covers " +
                                     std::to_string(present) + " of 12 months");
    }
    stats.annual_depth_mm = total / static_cast<double>(yearly_total.size());
    for (int m = 0; m < 12; ++m) {
        if (month_count[m] > 0)
            stats.monthly_means_mm[m] = month_sum[m] / month_count[m];
        else
            stats.warnings.push_back("station '" + std::string(station_id) + "': month " +
                                     std::to_string(m + 1) +
                                     " has no observations; mean set to 0");
    }
    return stats;
}

/// The five built-in stations. Annual depths are the 1968-2008 long-term
/// averages of the Bangladesh Agriculture Research Council archive; the
/// thunderstorm ratio 0.5 comes from the Rice-Holmberg climate map for the
/// region; latitudes are gazetteer values (only the 30-degree branch choice
/// of the exceedance scaling depends on them). No monthly means are bundled;
/// ingest an archive to fill them in.
inline std::vector<StationRecord> builtin_registry() {
    return {
        {"dhaka", 2124.0, 0.5, 23.81, {}},
        {"chittagong", 2887.0, 0.5, 22.36, {}},
        {"rajshahi", 1545.0, 0.5, 24.37, {}},
        {"sylhet", 4101.0, 0.5, 24.90, {}},
        {"khulna", 1819.0, 0.5, 22.85, {}},
    };
}

namespace detail {

inline double require_number(const nlohmann::json& entry, const char* field,
                             const std::string& station) {
    if (!entry.contains(field))
        throw validation_error("station '" + station + "': missing field '" + field + "'");
    const auto& value = entry.at(field);
    if (!value.is_number())
        throw validation_error("station '" + station + "': field '" + field +
                               "' must be a number");
    return value.get<double>();
}

}  // namespace detail

/// Parses and validates a registry document.
inline std::vector<StationRecord> load_station_registry(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("registry is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("stations") || !doc.at("stations").is_array())
        throw validation_error("registry must be an object with a 'stations' array");

    std::vector<StationRecord> stations;
    for (const auto& entry : doc.at("stations")) {
        std::string name = entry.value("name", std::string{});
        if (name.empty())
            throw validation_error("station entry #" + std::to_string(stations.size() + 1) +
                                   ": missing or empty field 'name'");
        StationRecord st;
        st.name = std::move(name);
        st.annual_depth_mm = detail::require_number(entry, "annual_depth_mm", st.name);
        if (!(st.annual_depth_mm > 0.0))
            throw validation_error("station '" + st.name +
                                   "': field 'annual_depth_mm' must be positive");
        st.thunderstorm_ratio = detail::require_number(entry, "thunderstorm_ratio", st.name);
        if (!(st.thunderstorm_ratio >= 0.0 && st.thunderstorm_ratio <= 1.0))
            throw validation_error("station '" + st.name +
                                   "': field 'thunderstorm_ratio' must lie in [0,1]");
        st.latitude_deg = detail::require_number(entry, "latitude_deg", st.name);
        if (!(st.latitude_deg >= -90.0 && st.latitude_deg <= 90.0))
            throw validation_error("station '" + st.name +
                                   "': field 'latitude_deg' must lie in [-90,90]");
        if (entry.contains("monthly_means_mm")) {
            const auto& means = entry.at("monthly_means_mm");
            if (!means.is_array() || (means.size() != 0 && means.size() != 12))
                throw validation_error("station '" + st.name +
                                       "': field 'monthly_means_mm' must hold 0 or 12 numbers");
            for (const auto& v : means) {
                if (!v.is_number() || v.get<double>() < 0.0)
                    throw validation_error("station '" + st.name +
                                           "': field 'monthly_means_mm' must hold "
                                           "non-negative numbers");
                st.monthly_means_mm.push_back(v.get<double>());
            }
        }
        stations.push_back(std::move(st));
    }
    return stations;
}

/// Serializes a registry; load(save(r)) == r exactly.
inline std::string save_station_registry(const std::vector<StationRecord>& stations) {
    nlohmann::json doc;
    doc["stations"] = nlohmann::json::array();
    for (const auto& st : stations) {
        nlohmann::json entry;
        entry["name"] = st.name;
        entry["annual_depth_mm"] = st.annual_depth_mm;
        entry["thunderstorm_ratio"] = st.thunderstorm_ratio;
        entry["latitude_deg"] = st.latitude_deg;
        entry["monthly_means_mm"] = st.monthly_means_mm;
        doc["stations"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

/// Case-insensitive registry lookup; the error message lists what is
/// available so CLI users see their options.
inline const StationRecord& find_station(const std::vector<StationRecord>& registry,
                                         std::string_view name) {
    const std::string wanted = to_lower(name);
    for (const auto& st : registry)
        if (to_lower(st.name) == wanted) return st;
    std::string known;
    for (const auto& st : registry) {
        if (!known.empty()) known += ", ";
        known += st.name;
    }
    throw station_not_found("unknown station '" + std::string(name) +
                            "'; known stations: " + known);
}

}  // namespace rainfade
