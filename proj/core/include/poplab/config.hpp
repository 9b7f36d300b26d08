#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poplab/cost.hpp"
#include "poplab/dataset.hpp"
#include "poplab/learners.hpp"

namespace poplab {

enum class ScenarioKind {
    split_gaussian,
    mvn,
    mixture_negative_pop,
    loans_csv,
    safe_contestant,
    social_network,
    theory_sweep,
};

const char* to_string(ScenarioKind kind) noexcept;
ScenarioKind scenario_from_string(const std::string& name);

enum class OutputFormat { csv, json };

enum class SampleSourceKind { fresh, pool };

struct ContestantOptions {
    SampleSourceKind source = SampleSourceKind::fresh;
    SamplingOptions sampling{};
    std::size_t test_points = 0;  // 0 keeps the whole test split
};

struct GraphOptions {
    std::optional<std::string> edges_path;
    std::optional<std::string> mapping_path;
    double mean_degree = 1.5;
    std::size_t hops = 2;
    std::size_t embedding_split = 3;  // features [0, split) form the first group
};

struct MvnOptions {
    std::vector<std::size_t> dims{1, 2, 3, 5, 10};
    double mean = 0.0;  // every coordinate; the source leaves it open
    double variance = 2.0;
    double label_threshold = 0.0;
    double cost_scale = 1.0;
    std::size_t test_points = 100;
    std::size_t draws = 50;
    std::size_t calibration_draws = 100;
    std::size_t probe_points = 2000;
    double target_disagreement = 0.01;
    double target_confidence = 0.95;
    std::size_t min_m = 4;
    std::size_t max_m = 4096;
};

struct TheoryGrid {
    std::vector<double> alpha{0.0};
    std::vector<double> sigma{0.5};
    std::vector<double> t{2.0};
    std::vector<double> t_f{1.8};
    std::vector<double> t_fhat{2.5};
    std::vector<std::size_t> n{5000};
    std::vector<std::size_t> m{4};
    std::vector<double> delta{0.05};
    std::size_t mc_samples = 200000;
};

struct OutputOptions {
    std::optional<std::string> path;
    OutputFormat format = OutputFormat::csv;
    bool include_timing = false;
    std::optional<std::string> stories_path;
};

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::split_gaussian;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    std::size_t repeats = 20;
    std::size_t n = 5000;
    std::vector<double> splits{0.8, 0.2};
    std::vector<std::size_t> m_grid;
    std::optional<DistributionSpec> distribution;
    std::optional<std::vector<double>> cost_rates;  // ones(d) when absent
    ContestantOptions contestant{};
    TrainConfig train{};
    std::vector<double> safety_k{0.0};
    std::optional<std::string> dataset_csv;
    std::string label_column = "label";
    GraphOptions graph{};
    MvnOptions mvn{};
    TheoryGrid theory{};
    OutputOptions output{};
};

std::vector<std::size_t> doubling_grid(std::size_t from, std::size_t to);

// Paper-scale defaults for the scenario; JSON keys override them.
ScenarioConfig default_config(ScenarioKind kind);

// Parses and validates. Unknown keys are validation errors naming the key.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

void validate(const ScenarioConfig& cfg);

// Synthetic stand-in for a six-feature credit dataset: correlated Gaussian
// features, noisy linear ground truth tuned so a linear fit scores about 85%.
Mvn loan_style_distribution();

}  // namespace poplab
