#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "poplab/classifier.hpp"
#include "poplab/cost.hpp"
#include "poplab/dataset.hpp"
#include "poplab/rng.hpp"

namespace poplab {

// Where an optimal 0/1 threshold is placed inside its interval of minimizers.
enum class TieRule {
    smallest,  // the smallest candidate (a sample coordinate)
    midpoint,  // halfway between the neighbouring sample coordinates
};

struct TrainConfig {
    std::size_t epochs = 200;
    double step = 0.1;  // epoch e uses step / sqrt(e)
    double l2 = 1e-4;
    TieRule contestant_tie = TieRule::midpoint;
};

void validate(const TrainConfig& cfg);

double empirical_error(const Classifier& g, const Dataset& ds);

Classifier fit_threshold_erm(const Dataset& train, std::size_t axis = 0,
                             TieRule tie = TieRule::smallest);

// Regularized hinge loss, full-batch subgradient descent from zero. Returns
// the iterate with the lowest objective.
Classifier fit_linear_erm(const Dataset& train, const TrainConfig& cfg);

struct StrategicFit {
    Classifier classifier;
    double error = 0.0;  // empirical strategic error err(g, g) on train
};

// Empirical err(g, g): labels against g's verdict after every point best
// responds to g.
double empirical_strategic_error(const Classifier& g, const CostSpec& c, const Dataset& ds);

StrategicFit strategic_erm_threshold(const Dataset& train, const CostSpec& c,
                                     std::size_t axis = 0);
StrategicFit strategic_erm_linear(const Dataset& train, const CostSpec& c,
                                  const TrainConfig& cfg);
// Threshold family for 1D data, linear otherwise.
StrategicFit strategic_erm(const Dataset& train, const CostSpec& c, const TrainConfig& cfg);

// Candidate thresholds searched by the threshold learners: every coordinate,
// every coordinate plus t, and +-infinity. Sorted, unique.
std::vector<double> strategic_threshold_candidates(const Dataset& train, const CostSpec& c,
                                                   std::size_t axis = 0);

class ResponseFunction {
public:
    using Table = std::function<std::optional<Classifier>(const Classifier&)>;

    static ResponseFunction identity();
    static ResponseFunction fixed(Classifier believed);
    static ResponseFunction table(Table lookup);

    // nullopt when the mapping is undefined for g.
    std::optional<Classifier> operator()(const Classifier& g) const;

    const Classifier* fixed_target() const noexcept;

private:
    std::variant<std::monostate, Classifier, Table> impl_;
};

// Minimizes err(g, R(g)) over the threshold candidates (plus R's fixed
// threshold, if any). Ties go to the smallest threshold.
StrategicFit r_strategic_erm(const Dataset& train, const CostSpec& c, const ResponseFunction& r,
                             std::size_t axis = 0,
                             const std::vector<double>& extra_candidates = {});

class SocialGraph {
public:
    SocialGraph(std::size_t users, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                std::vector<std::size_t> example_rows);

    std::size_t users() const noexcept { return adjacency_.size(); }
    std::size_t example_row(std::size_t user) const { return rows_.at(user); }
    const std::vector<std::size_t>& neighbours(std::size_t user) const {
        return adjacency_.at(user);
    }

    // Users within `hops` edges of `user`, excluding `user`, ascending.
    std::vector<std::size_t> neighbourhood(std::size_t user, std::size_t hops) const;

private:
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::size_t> rows_;
};

// Edge list "a,b" per line and mapping "user,row" per line; an optional
// non-numeric header line is skipped in both. User ids must be 0..U-1.
SocialGraph load_social_graph(const std::string& edges_path, const std::string& mapping_path);

// Erdos-Renyi style graph over `users` users mapped to rows 0..users-1.
SocialGraph random_social_graph(std::size_t users, double mean_degree, SeedSpec seed);

struct UniformPool {
    const Dataset* pool = nullptr;
};
struct FreshDraws {
    const Sampler* sampler = nullptr;
};
struct NetworkNeighbours {
    const Dataset* pool = nullptr;
    const SocialGraph* graph = nullptr;
    std::size_t user = 0;
    std::size_t hops = 2;
};

using SampleSource = std::variant<UniformPool, FreshDraws, NetworkNeighbours>;

struct SamplingOptions {
    bool require_both_classes = true;
    std::size_t max_attempts = 1000;
};

struct ContestantSamples {
    Dataset samples;
    std::size_t attempts = 0;
    bool empty = false;
    bool one_sided = false;
};

// m points labeled by f. Uniform and fresh sources redraw until both labels
// appear (if required); the network source returns the whole neighbourhood.
ContestantSamples contestant_sample_set(const SampleSource& source, const Classifier& f,
                                        std::size_t m, SeedSpec seed,
                                        const SamplingOptions& opts = {});

enum class Family { threshold, linear };

// ERM over the contestant's hypothesis family. Threshold fits place the
// boundary per cfg.contestant_tie; linear fits take the hinge direction and
// then the best 0/1 bias (same tie rule on the projected scores).
ContestantModel contestant_fit(const Dataset& samples, Family family, const TrainConfig& cfg,
                               std::size_t axis = 0);

}  // namespace poplab
