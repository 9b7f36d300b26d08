#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "poplab/analysis.hpp"
#include "poplab/config.hpp"

namespace poplab {

using Cell = std::variant<std::int64_t, double, std::string>;

struct ResultsTable {
    std::string scenario;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<double> wall_seconds;  // per row; emitted only on request
    std::vector<std::pair<std::string, std::string>> metadata;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

// Per-user record for the social scenario.
struct StoryRecord {
    std::size_t user = 0;
    std::vector<double> x;
    std::vector<double> moved_dark;
    std::vector<double> moved_transparent;
    int label = 0;
    int verdict_truthful = 0;
    int verdict_transparent = 0;
    int verdict_dark = 0;
    std::size_t samples = 0;
    bool one_sided = false;
    bool no_information = false;
    bool in_E = false;
    double embed_x = 0.0;  // partial score on the first feature group, bias included
    double embed_y = 0.0;  // partial score on the second group
    double embed_dark_x = 0.0;
    double embed_dark_y = 0.0;
};

struct ScenarioResult {
    ResultsTable table;
    std::vector<StoryRecord> stories;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);
ResultsTable run_inequity(const ScenarioConfig& cfg);
ResultsTable run_theory_sweep(const ScenarioConfig& cfg);

// Column order of a PopReport row.
const std::vector<std::string>& pop_columns();

std::string format_number(double v);
void write_csv(const ResultsTable& table, std::ostream& out, bool include_timing = false);
void write_json(const ResultsTable& table, std::ostream& out, bool include_timing = false);
void write_stories(const std::vector<StoryRecord>& stories, std::ostream& out);

// Writes the table (and stories, if any) per cfg.output. Without a path the
// table goes to `fallback`.
void emit_results(const ScenarioResult& result, const OutputOptions& output, std::ostream& fallback);

}  // namespace poplab
