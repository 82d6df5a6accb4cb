#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sp4/group_function.hpp"

namespace sp4 {

struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnknownCheck : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::uint32_t q = 3;
    /// Grid of chamber pairs with i + j <= max_length.
    int max_length = 4;
    int gauss_level_max = 6;
    int gauss_exhaustive_max = 4;
    int gauss_samples = 1000;
    int cells_i_max = 2;
    int cells_m_max = 1;
    int pairing_tables = 100;
    /// Blocks audited by the blocks suite; only pairs inside the length grid are used.
    std::vector<CartanPair> block_cells{{2, 1}, {3, 1}, {3, 2}};
    /// Largest regular-representation window used for engine cross-checks.
    std::uint64_t crosscheck_window_cap = 200'000;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string out;

    void validate() const;
    nlohmann::json to_json() const;
    /// Fields present in j override the current values.
    void merge_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
    /// Worker count from SP4_JOBS if set and positive.
    static std::optional<unsigned> jobs_from_env();
};

struct CheckRecord {
    std::string id;
    std::string anchor;
    nlohmann::json params = nlohmann::json::object();
    double computed = 0;
    std::optional<double> bound;
    bool pass = false;
    std::string engine;
    std::int64_t iterations = 0;
    nlohmann::json extra = nlohmann::json::object();
    double runtime_ms = 0;

    nlohmann::json to_json(bool with_timing = true) const;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckRecord> records;
    std::size_t passed() const;
    std::size_t failed() const;
    bool ok() const { return failed() == 0; }
    nlohmann::json summary(const RunConfig& cfg) const;
};

const std::vector<std::string>& suite_names();

/// Runs a suite over the configured grid. Failures inside a check become failing records.
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

/// Writes one JSON line per record followed by the summary line.
void write_report(std::ostream& os, const SuiteResult& r, const RunConfig& cfg);

/// Anchor, checked formula and parameter grid of a check id.
std::string explain(const std::string& id);
std::string check_anchor(const std::string& id);
const std::vector<std::string>& check_ids();

/// Runs the tasks on `jobs` workers and returns results in task order.
std::vector<CheckRecord> run_tasks(const std::vector<std::function<CheckRecord()>>& tasks, unsigned jobs);

nlohmann::json to_json(const GroupFunction& f);

}  // namespace sp4
