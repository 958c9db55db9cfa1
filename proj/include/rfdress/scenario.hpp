#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfdress::scenario {

// Configuration problems (bad key, missing unit, unparseable file). The CLI
// maps these to exit code 1; numerical failures surface as std::runtime_error
// and map to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value file with unit suffixes and single-parent inheritance via
// `inherit = <relative path>`. Keys read through the typed getters are
// tracked; ensure_all_consumed() rejects anything left over.
class Config {
  public:
    static Config load(const std::filesystem::path& file);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    double number(const std::string& key) const;  // dimensionless
    double number_or(const std::string& key, double fallback) const;
    long integer(const std::string& key) const;
    long integer_or(const std::string& key, long fallback) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;

    double frequency(const std::string& key) const;  // Hz/kHz/MHz/rad_s -> rad/s
    double frequency_or(const std::string& key, double fallback) const;
    double field(const std::string& key) const;  // T/mT/uT/G/mG -> T
    double field_or(const std::string& key, double fallback) const;
    double gradient_or(const std::string& key, double fallback) const;  // T/m, G/cm -> T/m
    double time(const std::string& key) const;  // s/ms/us -> s
    double time_or(const std::string& key, double fallback) const;
    double length_or(const std::string& key, double fallback) const;  // m/mm/um/a0 -> m
    double mass_or(const std::string& key, double fallback) const;    // kg/amu -> kg

    void ensure_all_consumed() const;

  private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> accessed_;
    std::string raw(const std::string& key) const;
};

struct RunOptions {
    int jobs = 0;  // 0: hardware concurrency
    std::optional<double> tol;
    std::optional<std::string> out_path;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Resolved parameters and regime warnings from a dry run.
struct Report {
    std::vector<std::pair<std::string, std::string>> values;
    std::vector<std::string> warnings;
};

std::vector<std::string> scenario_names();
bool is_scenario(const std::string& name);

Table compute_scenario(const std::string& name, const Config& cfg, const RunOptions& options);
Report validate_scenario(const std::string& name, const Config& cfg);

// Computes and writes the CSV; returns the output path.
std::filesystem::path run_scenario(const std::string& name, const std::filesystem::path& config,
                                   const RunOptions& options);

std::string csv_string(const Table& table);
void write_csv(const Table& table, const std::filesystem::path& path);

}  // namespace rfdress::scenario
