#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "poplab/error.hpp"
#include "poplab/learners.hpp"

namespace poplab {

SocialGraph::SocialGraph(std::size_t users,
                         const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                         std::vector<std::size_t> example_rows)
    : adjacency_(users), rows_(std::move(example_rows)) {
    require(rows_.size() == users, ErrorKind::validation,
            "social graph: need one example row per user");
    for (const auto& [a, b] : edges) {
        require(a < users && b < users, ErrorKind::validation,
                "social graph: edge (" + std::to_string(a) + "," + std::to_string(b) +
                    ") references an unknown user");
        require(a != b, ErrorKind::validation,
                "social graph: self loop on user " + std::to_string(a));
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
}

std::vector<std::size_t> SocialGraph::neighbourhood(std::size_t user, std::size_t hops) const {
    require(user < users(), ErrorKind::validation,
            "social graph: unknown user " + std::to_string(user));
    std::vector<std::size_t> depth(users(), std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> frontier{user};
    depth[user] = 0;
    std::vector<std::size_t> found;
    for (std::size_t level = 1; level <= hops && !frontier.empty(); ++level) {
        std::vector<std::size_t> next;
        for (std::size_t u : frontier) {
            for (std::size_t v : adjacency_[u]) {
                if (depth[v] != std::numeric_limits<std::size_t>::max()) continue;
                depth[v] = level;
                next.push_back(v);
                found.push_back(v);
            }
        }
        frontier = std::move(next);
    }
    std::sort(found.begin(), found.end());
    return found;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> read_pairs(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open '" + path + "'");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        long long a = -1, b = -1;
        std::string extra;
        if (!(fields >> a >> b) || (fields >> extra)) {
            if (line_no == 1) continue;  // header
            fail(ErrorKind::parse, path + ":" + std::to_string(line_no) + ": expected two integer ids");
        }
        require(a >= 0 && b >= 0, ErrorKind::parse,
                path + ":" + std::to_string(line_no) + ": ids must be non-negative");
        out.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    }
    return out;
}

}  // namespace

SocialGraph load_social_graph(const std::string& edges_path, const std::string& mapping_path) {
    const auto mapping = read_pairs(mapping_path);
    std::size_t users = 0;
    for (const auto& [user, row] : mapping) users = std::max(users, user + 1);
    std::vector<std::size_t> rows(users, std::numeric_limits<std::size_t>::max());
    for (const auto& [user, row] : mapping) {
        require(rows[user] == std::numeric_limits<std::size_t>::max(), ErrorKind::validation,
                mapping_path + ": user " + std::to_string(user) + " mapped twice");
        rows[user] = row;
    }
    for (std::size_t u = 0; u < users; ++u) {
        require(rows[u] != std::numeric_limits<std::size_t>::max(), ErrorKind::validation,
                mapping_path + ": user " + std::to_string(u) + " has no example row");
    }
    return SocialGraph(users, read_pairs(edges_path), std::move(rows));
}

SocialGraph random_social_graph(std::size_t users, double mean_degree, SeedSpec seed) {
    require(users >= 2, ErrorKind::validation, "random graph: need at least two users");
    require(mean_degree >= 0.0 && mean_degree < static_cast<double>(users - 1), ErrorKind::validation,
            "random graph: mean degree out of range");
    const auto target = static_cast<std::size_t>(std::llround(mean_degree * static_cast<double>(users) / 2.0));
    Engine rng = seed.engine();
    std::uniform_int_distribution<std::size_t> pick(0, users - 1);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(target);
    while (edges.size() < target) {
        std::size_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (seen.insert({a, b}).second) edges.emplace_back(a, b);
    }
    std::vector<std::size_t> rows(users);
    for (std::size_t u = 0; u < users; ++u) rows[u] = u;
    return SocialGraph(users, edges, std::move(rows));
}

namespace {

bool both_labels(const Dataset& ds) {
    bool pos = false, neg = false;
    for (const auto& e : ds) {
        pos = pos || e.y == Label::positive;
        neg = neg || e.y == Label::negative;
    }
    return pos && neg;
}

}  // namespace

ContestantSamples contestant_sample_set(const SampleSource& source, const Classifier& f,
                                        std::size_t m, SeedSpec seed, const SamplingOptions& opts) {
    ContestantSamples out;

    if (const auto* net = std::get_if<NetworkNeighbours>(&source)) {
        require(net->pool && net->graph, ErrorKind::validation, "network source: missing pool or graph");
        Dataset samples(net->pool->dim());
        for (std::size_t user : net->graph->neighbourhood(net->user, net->hops)) {
            const std::size_t row = net->graph->example_row(user);
            if (row >= net->pool->size()) {
                fail(ErrorKind::validation, "network source: user " + std::to_string(user) + " maps past the pool");
            }
            const FeatureVector& x = (*net->pool)[row].x;
            samples.add(Example{x, f.predict(x)});
        }
        out.attempts = 1;
        out.empty = samples.empty();
        out.one_sided = !out.empty && !both_labels(samples);
        out.samples = std::move(samples);
        return out;
    }

    require(m >= 1, ErrorKind::validation, "contestant samples: m must be at least 1");
    require(!opts.require_both_classes || m >= 2, ErrorKind::validation,
            "contestant samples: both classes need m >= 2");
    require(opts.max_attempts >= 1, ErrorKind::validation, "contestant samples: max_attempts is 0");

    Engine rng = seed.engine();
    const auto* uniform = std::get_if<UniformPool>(&source);
    const auto* fresh = std::get_if<FreshDraws>(&source);
    require(uniform ? uniform->pool != nullptr : fresh->sampler != nullptr, ErrorKind::validation,
            "contestant samples: source not set");
    if (uniform) require(!uniform->pool->empty(), ErrorKind::validation, "contestant samples: empty pool");
    const std::size_t dim = uniform ? uniform->pool->dim() : fresh->sampler->dim();

    for (std::size_t attempt = 1; attempt <= opts.max_attempts; ++attempt) {
        Dataset samples(dim);
        samples.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            FeatureVector x;
            if (uniform) {
                std::uniform_int_distribution<std::size_t> pick(0, uniform->pool->size() - 1);
                x = (*uniform->pool)[pick(rng)].x;
            } else {
                x = fresh->sampler->draw(rng).x;
            }
            const Label y = f.predict(x);
            samples.add(Example{std::move(x), y});
        }
        const bool mixed = both_labels(samples);
        if (mixed || !opts.require_both_classes) {
            out.samples = std::move(samples);
            out.attempts = attempt;
            out.one_sided = !mixed;
            return out;
        }
    }
    fail(ErrorKind::sampling, "contestant samples: no two-class sample after " +
                                  std::to_string(opts.max_attempts) + " attempts (m=" +
                                  std::to_string(m) + ", f=" + f.describe() + ")");
}

ContestantModel contestant_fit(const Dataset& samples, Family family, const TrainConfig& cfg,
                               std::size_t axis) {
    if (samples.empty()) return ContestantModel{Classifier::reject_all(axis), false, true};
    const std::size_t positives = samples.count(Label::positive);
    if (positives == samples.size()) return ContestantModel{Classifier::accept_all(axis), true, false};
    if (positives == 0) return ContestantModel{Classifier::reject_all(axis), true, false};

    if (family == Family::threshold) {
        return ContestantModel::informed(fit_threshold_erm(samples, axis, cfg.contestant_tie));
    }

    const Classifier hinge = fit_linear_erm(samples, cfg);
    const auto& w = hinge.weights();
    Dataset projected(1);
    projected.reserve(samples.size());
    for (const auto& e : samples) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * e.x[i];
        projected.add(Example{FeatureVector{s}, e.y});
    }
    const double cut = fit_threshold_erm(projected, 0, cfg.contestant_tie).threshold_value();
    if (cut == -std::numeric_limits<double>::infinity()) return ContestantModel::informed(Classifier::accept_all(axis));
    if (cut == std::numeric_limits<double>::infinity()) return ContestantModel::informed(Classifier::reject_all(axis));
    return ContestantModel::informed(Classifier::linear(w, -cut));
}

}  // namespace poplab
