#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "rainfade/cli.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = rainfade::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

// Splits an emitted CSV into header fields and data rows, skipping '#'
// comment lines.
struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream split(line);
        std::string field;
        while (std::getline(split, field, ',')) fields.push_back(field);
        if (csv.header.empty())
            csv.header = std::move(fields);
        else
            csv.rows.push_back(std::move(fields));
    }
    return csv;
}

double field(const Csv& csv, std::size_t row, const std::string& name) {
    for (std::size_t i = 0; i < csv.header.size(); ++i)
        if (csv.header[i] == name) return std::stod(csv.rows.at(row).at(i));
    throw std::runtime_error("no column " + name);
}

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "rainfade_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("rate reports the anchor rain rate") {
    const auto result = run({"rate", "--station", "sylhet", "--percent", "0.01"});
    REQUIRE(result.code == 0);
    const auto csv = parse_csv(result.out);
    REQUIRE(field(csv, 0, "rate_mm_per_h") == Approx(141.6991).margin(0.2));
}

TEST_CASE("rate at the anchor percentage reports the map comparison") {
    const auto result = run({"rate", "--station", "dhaka", "--percent", "0.01"});
    REQUIRE(result.code == 0);
    const auto csv = parse_csv(result.out);
    REQUIRE(field(csv, 0, "rate_mm_per_h") == Approx(119.7673).margin(0.2));
    REQUIRE(field(csv, 0, "itu_map_rate_mm_per_h") == 95.0);
    REQUIRE(field(csv, 0, "diff_vs_map_percent") == Approx(26.07).margin(0.01));
    REQUIRE(field(csv, 0, "diff_vs_measured_percent") == Approx(20.68).margin(0.01));

    // away from the anchor there is no map column
    const auto other = run({"rate", "--station", "dhaka", "--percent", "0.1"});
    REQUIRE(other.out.find("itu_map") == std::string::npos);

    const auto json = run({"--format", "json", "rate", "--station", "dhaka"});
    REQUIRE(json.code == 0);
    const auto doc = nlohmann::json::parse(json.out);
    REQUIRE(doc.at("diff_vs_map_percent").get<double>() == Approx(26.07).margin(0.01));
}

TEST_CASE("unknown stations exit 2 and list the registry") {
    const auto result = run({"rate", "--station", "atlantis"});
    REQUIRE(result.code == 2);
    REQUIRE_THAT(result.err, ContainsSubstring("atlantis"));
    REQUIRE_THAT(result.err, ContainsSubstring("dhaka"));
    REQUIRE_THAT(result.err, ContainsSubstring("sylhet"));
}

TEST_CASE("rate rejects unattainable percentages") {
    const auto result = run({"rate", "--station", "dhaka", "--percent", "50"});
    REQUIRE(result.code == 2);
    REQUIRE_THAT(result.err, ContainsSubstring("attainable"));
}

TEST_CASE("atten prints the whole pipeline") {
    const auto result = run({"atten", "--station", "sylhet", "--freq", "10", "--pol", "h",
                             "--length", "40", "--availability", "99.99"});
    REQUIRE(result.code == 0);
    const auto csv = parse_csv(result.out);
    REQUIRE(field(csv, 0, "attenuation_db") == Approx(40.2).margin(0.05));
    REQUIRE(field(csv, 0, "r001_mm_per_h") == Approx(141.70).margin(0.2));
    REQUIRE(field(csv, 0, "gamma_db_per_km") == Approx(6.159).margin(0.01));
    REQUIRE(field(csv, 0, "d0_km") == Approx(7.810).margin(0.001));
    REQUIRE(field(csv, 0, "deff_km") == Approx(6.534).margin(0.001));
    REQUIRE(field(csv, 0, "a001_db") == Approx(40.2).margin(0.1));
    REQUIRE(field(csv, 0, "availability_percent") == Approx(99.99).epsilon(1e-9));
}

TEST_CASE("atten accepts either exceedance or availability") {
    const auto by_percent = run({"atten", "--station", "dhaka", "--percent", "0.1"});
    const auto by_availability = run({"atten", "--station", "dhaka", "--availability", "99.9"});
    REQUIRE(by_percent.code == 0);
    REQUIRE(by_percent.out == by_availability.out);

    const auto both = run({"atten", "--station", "dhaka", "--percent", "0.1", "--availability",
                           "99.9"});
    REQUIRE(both.code == 2);
}

TEST_CASE("atten enforces the model validity bounds") {
    const auto high = run({"atten", "--station", "dhaka", "--freq", "50"});
    REQUIRE(high.code == 2);
    REQUIRE_THAT(high.err, ContainsSubstring("40"));
    const auto long_path = run({"atten", "--station", "dhaka", "--length", "70"});
    REQUIRE(long_path.code == 2);
    REQUIRE_THAT(long_path.err, ContainsSubstring("60"));
}

TEST_CASE("table defaults produce the full reference grid shape") {
    const auto result = run({"table"});
    REQUIRE(result.code == 0);
    const auto csv = parse_csv(result.out);
    REQUIRE(csv.rows.size() == 8);
    REQUIRE(csv.header.size() == 1 + 5 * 3);
    REQUIRE(csv.header[0] == "frequency_ghz");
    REQUIRE(field(csv, 1, "dhaka_99.99") == Approx(32.5).margin(0.05));
    REQUIRE(field(csv, 1, "sylhet_99.99") == Approx(40.2).margin(0.05));

    // repeated runs are byte-identical
    const auto again = run({"table"});
    REQUIRE(result.out == again.out);
}

TEST_CASE("table vertical spot value") {
    const auto result = run({"table", "--pol", "v"});
    REQUIRE(result.code == 0);
    const auto csv = parse_csv(result.out);
    // 40 GHz row, rajshahi at 99.9%
    REQUIRE(field(csv, 7, "rajshahi_99.9") == Approx(52.9).margin(0.05));
}

TEST_CASE("table CSV and JSON agree cell by cell") {
    const auto csv_run = run({"table", "--pol", "c"});
    const auto json_run = run({"--format", "json", "table", "--pol", "c"});
    REQUIRE(csv_run.code == 0);
    REQUIRE(json_run.code == 0);
    const auto csv = parse_csv(csv_run.out);
    const auto doc = nlohmann::json::parse(json_run.out);
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
        for (std::size_t s = 0; s < 5; ++s)
            for (std::size_t a = 0; a < 3; ++a)
                REQUIRE(doc.at("attenuation_db").at(i).at(s).at(a).get<double>() ==
                        std::stod(csv.rows[i][1 + s * 3 + a]));
}

TEST_CASE("table rejects an empty grid") {
    const auto result = run({"table", "--freqs", ""});
    REQUIRE(result.code == 2);
}

TEST_CASE("curve distance matches the published 10 km reading") {
    const auto result = run({"curve", "distance", "--freq", "10", "--pol", "h"});
    REQUIRE(result.code == 0);
    const auto csv = parse_csv(result.out);
    REQUIRE(csv.rows.size() == 60);
    REQUIRE(field(csv, 9, "distance_km") == Approx(10.0));
    REQUIRE(field(csv, 9, "sylhet") == Approx(27.0).margin(0.1));
    REQUIRE(field(csv, 9, "rajshahi") == Approx(19.4).margin(0.1));
}

TEST_CASE("curve percent matches the published fade margins") {
    const auto result = run({"curve", "percent", "--freq", "10", "--pol", "h", "--length", "40",
                             "--points", "4"});
    REQUIRE(result.code == 0);
    const auto csv = parse_csv(result.out);
    REQUIRE(field(csv, 1, "percent_of_year") == Approx(0.01));
    REQUIRE(field(csv, 1, "sylhet") == Approx(40.2).margin(0.05));
    REQUIRE(field(csv, 1, "dhaka") == Approx(32.5).margin(0.05));
}

TEST_CASE("curve kinds are validated") {
    const auto result = run({"curve", "banana"});
    REQUIRE(result.code == 2);
    REQUIRE_THAT(result.err, ContainsSubstring("banana"));

    const auto monthly = run({"curve", "monthly"});
    REQUIRE(monthly.code == 2);  // built-in registry has no monthly means
    REQUIRE_THAT(monthly.err, ContainsSubstring("monthly"));
}

TEST_CASE("curve station subsets select and order columns") {
    const auto result = run({"curve", "cdf", "--stations", "sylhet,rajshahi", "--points", "4"});
    REQUIRE(result.code == 0);
    const auto csv = parse_csv(result.out);
    REQUIRE(csv.header ==
            std::vector<std::string>{"percent_of_year", "sylhet", "rajshahi"});
    REQUIRE(field(csv, 1, "sylhet") > field(csv, 1, "rajshahi"));
}

TEST_CASE("--out writes the document to a file") {
    const auto path = temp_file("table.csv");
    std::filesystem::remove(path);
    const auto result = run({"--out", path.string(), "table"});
    REQUIRE(result.code == 0);
    REQUIRE(result.out.empty());
    const auto direct = run({"table"});
    REQUIRE(read_text(path) == direct.out);
}

TEST_CASE("ingest merges an archive into the registry") {
    const auto csv_path = temp_file("sylhet.csv");
    const auto reg_path = temp_file("registry.json");
    std::filesystem::remove(reg_path);

    std::string archive = "station,year,month,rainfall_mm\n";
    for (const int year : {2007, 2008})
        for (int m = 1; m <= 12; ++m)
            archive += "sylhet," + std::to_string(year) + "," + std::to_string(m) + ",341.75\n";
    write_text(csv_path, archive);

    const auto result =
        run({"--registry", reg_path.string(), "ingest", "--csv", csv_path.string()});
    INFO(result.err);
    REQUIRE(result.code == 0);

    const auto registry = rainfade::load_station_registry(read_text(reg_path));
    const auto& sylhet = rainfade::find_station(registry, "sylhet");
    REQUIRE(sylhet.annual_depth_mm == Approx(4101.0).epsilon(1e-12));
    REQUIRE(sylhet.has_monthly_means());
    REQUIRE(sylhet.monthly_means_mm[0] == Approx(341.75));
    // untouched stations keep their built-in parameters
    REQUIRE(rainfade::find_station(registry, "dhaka").annual_depth_mm == 2124.0);

    // the updated registry now supports monthly curves
    const auto monthly = run({"--registry", reg_path.string(), "curve", "monthly", "--stations",
                              "sylhet"});
    REQUIRE(monthly.code == 0);
}

TEST_CASE("ingest requires beta and latitude for new stations") {
    const auto csv_path = temp_file("new_station.csv");
    const auto reg_path = temp_file("registry_new.json");
    std::filesystem::remove(reg_path);
    write_text(csv_path, "station,year,month,rainfall_mm\natlantis,2008,7,100\n");

    const auto missing =
        run({"--registry", reg_path.string(), "ingest", "--csv", csv_path.string()});
    REQUIRE(missing.code == 3);
    REQUIRE_THAT(missing.err, ContainsSubstring("beta"));

    const auto ok = run({"--registry", reg_path.string(), "ingest", "--csv", csv_path.string(),
                         "--beta", "0.4", "--latitude", "20.5"});
    INFO(ok.err);
    REQUIRE(ok.code == 0);
    const auto registry = rainfade::load_station_registry(read_text(reg_path));
    const auto& atlantis = rainfade::find_station(registry, "atlantis");
    REQUIRE(atlantis.thunderstorm_ratio == 0.4);
    REQUIRE(atlantis.latitude_deg == 20.5);
    REQUIRE(atlantis.annual_depth_mm == Approx(100.0));
}

TEST_CASE("ingest of an empty archive warns and leaves the registry unchanged") {
    const auto csv_path = temp_file("empty.csv");
    const auto reg_path = temp_file("registry_empty.json");
    std::filesystem::remove(reg_path);
    write_text(csv_path, "station,year,month,rainfall_mm\n");

    const auto result =
        run({"--registry", reg_path.string(), "ingest", "--csv", csv_path.string()});
    REQUIRE(result.code == 0);
    REQUIRE_THAT(result.err, ContainsSubstring("no data rows"));
    const auto registry = rainfade::load_station_registry(read_text(reg_path));
    REQUIRE(registry == rainfade::builtin_registry());
}

TEST_CASE("ingest surfaces parse errors with file and line context") {
    const auto csv_path = temp_file("broken.csv");
    write_text(csv_path, "station,year,month,rainfall_mm\ndhaka,2008,13,10\n");
    const auto result = run({"--registry", temp_file("unused.json").string(), "ingest", "--csv",
                             csv_path.string()});
    REQUIRE(result.code == 3);
    REQUIRE_THAT(result.err, ContainsSubstring("line 2"));
    REQUIRE_THAT(result.err, ContainsSubstring("broken.csv"));

    const auto missing = run({"--registry", temp_file("unused.json").string(), "ingest", "--csv",
                              temp_file("nonexistent.csv").string()});
    REQUIRE(missing.code == 3);
}

TEST_CASE("ingest needs a writable target") {
    const auto csv_path = temp_file("any.csv");
    write_text(csv_path, "station,year,month,rainfall_mm\n");
    const auto result = run({"ingest", "--csv", csv_path.string()});
    REQUIRE(result.code == 2);
    REQUIRE_THAT(result.err, ContainsSubstring("--registry"));
}

TEST_CASE("usage errors exit 2") {
    REQUIRE(run({}).code == 2);
    REQUIRE(run({"frobnicate"}).code == 2);
    REQUIRE(run({"rate"}).code == 2);                      // missing --station
    REQUIRE(run({"rate", "--station"}).code == 2);         // missing value
    REQUIRE(run({"--format", "xml", "table"}).code == 2);  // bad enum
    REQUIRE(run({"--help"}).code == 0);
}
