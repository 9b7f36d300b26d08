#include "poplab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "poplab/error.hpp"

namespace poplab {

namespace {

using nlohmann::json;

constexpr const char* kScenarioNames[] = {
    "split_gaussian", "mvn",           "mixture_negative_pop", "loans_csv",
    "safe_contestant", "social_network", "theory_sweep",
};

// Reads one JSON object, remembering which keys were used so leftovers can be
// reported as unknown.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        require(j_.is_object(), ErrorKind::validation, where_ + ": expected a JSON object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string path(const std::string& key) const { return where_ + "." + key; }

    template <typename T>
    void read(const std::string& key, T& target) {
        if (!has(key)) return;
        try {
            target = j_.at(key).get<T>();
        } catch (const json::exception&) {
            fail(ErrorKind::validation, path(key) + ": wrong value type");
        }
    }

    template <typename T>
    void read_opt(const std::string& key, std::optional<T>& target) {
        if (!has(key)) return;
        T value{};
        read(key, value);
        target = std::move(value);
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) fail(ErrorKind::validation, "unknown key '" + path(item.key()) + "'");
        }
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

Labeler parse_labeler(const json& j, const std::string& where) {
    ObjectReader r(j, where);
    std::string type;
    r.read("type", type);
    Labeler out;
    if (type == "threshold") {
        ThresholdLabeler l;
        r.read("axis", l.axis);
        r.read("threshold", l.threshold);
        out = l;
    } else if (type == "linear") {
        LinearLabeler l;
        r.read("weights", l.weights);
        r.read("bias", l.bias);
        out = l;
    } else if (type == "noisy_linear") {
        NoisyLinearLabeler l;
        r.read("weights", l.weights);
        r.read("bias", l.bias);
        r.read("noise_sd", l.noise_sd);
        out = l;
    } else if (type == "component") {
        std::vector<int> labels;
        r.read("labels", labels);
        ComponentLabeler l;
        for (int v : labels) {
            require(v == 1 || v == -1, ErrorKind::validation, r.path("labels") + ": labels must be -1 or 1");
            l.labels.push_back(v == 1 ? Label::positive : Label::negative);
        }
        out = l;
    } else {
        fail(ErrorKind::validation, r.path("type") + ": unknown labeler '" + type + "'");
    }
    r.finish();
    return out;
}

DistributionSpec parse_distribution(const json& j, const std::string& where) {
    ObjectReader r(j, where);
    std::string type;
    r.read("type", type);
    DistributionSpec out;
    if (type == "gaussian1d") {
        Gaussian1d g;
        r.read("mean", g.mean);
        r.read("sd", g.sd);
        g.labeler = ThresholdLabeler{0, g.mean};
        if (r.has("labeler")) g.labeler = parse_labeler(r.raw("labeler"), r.path("labeler"));
        out = g;
    } else if (type == "mvn") {
        std::vector<double> mean;
        r.read("mean", mean);
        Mvn m;
        if (r.has("covariance")) {
            std::vector<std::vector<double>> cov;
            r.read("covariance", cov);
            require(cov.size() == mean.size(), ErrorKind::validation, r.path("covariance") + ": must be d x d");
            for (const auto& row : cov) {
                require(row.size() == mean.size(), ErrorKind::validation, r.path("covariance") + ": must be d x d");
                m.covariance.insert(m.covariance.end(), row.begin(), row.end());
            }
            m.mean = mean;
        } else {
            std::vector<double> variances(mean.size(), 1.0);
            r.read("variances", variances);
            m = Mvn::diagonal(mean, variances, ThresholdLabeler{});
        }
        if (r.has("labeler")) m.labeler = parse_labeler(r.raw("labeler"), r.path("labeler"));
        out = m;
    } else if (type == "mixture1d") {
        Mixture1d mix;
        r.read("centers", mix.centers);
        r.read("weights", mix.weights);
        r.read("sds", mix.sds);
        if (r.has("labeler")) mix.labeler = parse_labeler(r.raw("labeler"), r.path("labeler"));
        out = mix;
    } else if (type == "loan_style") {
        out = loan_style_distribution();
    } else {
        fail(ErrorKind::validation, r.path("type") + ": unknown distribution '" + type + "'");
    }
    r.finish();
    validate(out);
    return out;
}

TieRule parse_tie(const std::string& s, const std::string& where) {
    if (s == "midpoint") return TieRule::midpoint;
    if (s == "smallest") return TieRule::smallest;
    fail(ErrorKind::validation, where + ": tie rule must be 'midpoint' or 'smallest'");
}

}  // namespace

const char* to_string(ScenarioKind kind) noexcept {
    return kScenarioNames[static_cast<int>(kind)];
}

ScenarioKind scenario_from_string(const std::string& name) {
    for (int i = 0; i < static_cast<int>(std::size(kScenarioNames)); ++i) {
        if (name == kScenarioNames[i]) return static_cast<ScenarioKind>(i);
    }
    fail(ErrorKind::validation, "unknown scenario '" + name + "'");
}

std::vector<std::size_t> doubling_grid(std::size_t from, std::size_t to) {
    require(from >= 1 && from <= to, ErrorKind::validation, "doubling grid: need 1 <= from <= to");
    std::vector<std::size_t> grid;
    for (std::size_t m = from; m <= to; m *= 2) grid.push_back(m);
    return grid;
}

Mvn loan_style_distribution() {
    // Feature scales loosely follow credit data: two dollar amounts (k$), two
    // proportions, a count and a history length in years.
    const std::vector<double> mean{8.0, 6.5, 0.9, 0.55, 4.0, 12.0};
    const std::vector<double> sd{6.0, 4.5, 0.1, 0.3, 3.0, 7.0};
    const double corr[6][6] = {
        {1.00, 0.45, 0.20, 0.25, 0.10, 0.30}, {0.45, 1.00, 0.10, 0.15, 0.05, 0.20},
        {0.20, 0.10, 1.00, 0.35, 0.15, 0.25}, {0.25, 0.15, 0.35, 1.00, 0.20, 0.15},
        {0.10, 0.05, 0.15, 0.20, 1.00, 0.10}, {0.30, 0.20, 0.25, 0.15, 0.10, 1.00},
    };
    // Weights on standardized features; higher is better on every axis.
    const std::vector<double> w_std{0.8, 0.35, 0.6, 0.5, 0.3, 0.55};
    // Noise variance relative to the signal variance. A sign-of-noisy-score
    // label agrees with sign of the clean score with probability
    // 1/2 + asin(rho)/pi, rho = 1/sqrt(1 + ratio); 0.2596 gives 0.85.
    constexpr double kNoiseRatio = 0.2596;

    const std::size_t d = mean.size();
    Mvn m;
    m.mean = mean;
    m.covariance.resize(d * d);
    double signal_var = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            m.covariance[i * d + j] = corr[i][j] * (sd[i] * sd[j]);
            signal_var += w_std[i] * corr[i][j] * w_std[j];
        }
    }
    NoisyLinearLabeler labeler;
    labeler.weights.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        labeler.weights[i] = w_std[i] / sd[i];
        labeler.bias -= labeler.weights[i] * mean[i];
    }
    labeler.noise_sd = std::sqrt(kNoiseRatio * signal_var);
    m.labeler = labeler;
    return m;
}

ScenarioConfig default_config(ScenarioKind kind) {
    ScenarioConfig cfg;
    cfg.scenario = kind;
    cfg.m_grid = doubling_grid(4, 4096);
    switch (kind) {
        case ScenarioKind::split_gaussian:
            cfg.distribution = Gaussian1d{0.0, 1.0, ThresholdLabeler{0, 0.0}};
            break;
        case ScenarioKind::mixture_negative_pop:
            cfg.distribution = Mixture1d{{0.0, 1.0}, {0.5, 0.5}, {1.0, 1.0},
                                         ComponentLabeler{{Label::negative, Label::positive}}};
            break;
        case ScenarioKind::mvn:
            cfg.repeats = 1;
            break;
        case ScenarioKind::loans_csv:
        case ScenarioKind::safe_contestant:
            cfg.n = 20222;
            cfg.repeats = 1;
            cfg.splits = {0.7, 0.15, 0.15};
            cfg.distribution = loan_style_distribution();
            cfg.contestant.source = SampleSourceKind::pool;
            if (kind == ScenarioKind::safe_contestant) cfg.safety_k = {0.02, 0.2};
            break;
        case ScenarioKind::social_network:
            cfg.n = 2000;
            cfg.repeats = 1;
            cfg.splits = {0.85, 0.15};
            cfg.distribution = loan_style_distribution();
            cfg.contestant.source = SampleSourceKind::pool;
            cfg.contestant.sampling.require_both_classes = false;
            break;
        case ScenarioKind::theory_sweep:
            cfg.repeats = 1;
            break;
    }
    return cfg;
}

void validate(const ScenarioConfig& cfg) {
    require(cfg.repeats >= 1, ErrorKind::validation, "config: repeats must be at least 1");
    require(cfg.n >= 2, ErrorKind::validation, "config: n must be at least 2");
    validate(cfg.train);
    const bool uses_m = cfg.scenario != ScenarioKind::mvn && cfg.scenario != ScenarioKind::theory_sweep &&
                        cfg.scenario != ScenarioKind::social_network;
    if (uses_m) {
        require(!cfg.m_grid.empty(), ErrorKind::validation, "config: m_grid must not be empty");
        for (std::size_t i = 0; i < cfg.m_grid.size(); ++i) {
            require(cfg.m_grid[i] >= 1, ErrorKind::validation, "config: m_grid entries must be >= 1");
            require(i == 0 || cfg.m_grid[i - 1] < cfg.m_grid[i], ErrorKind::validation,
                    "config: m_grid must be sorted ascending without repeats");
        }
    }
    for (double k : cfg.safety_k) {
        require(k >= 0.0 && k <= 2.0, ErrorKind::validation, "config: safety_k entries lie in [0, 2]");
    }
    require(!cfg.safety_k.empty(), ErrorKind::validation, "config: safety_k must not be empty");
    if (cfg.distribution) validate(*cfg.distribution);
    if (cfg.cost_rates) CostSpec::linear_separable(*cfg.cost_rates);

    std::size_t parts = 2;
    if (cfg.scenario == ScenarioKind::loans_csv || cfg.scenario == ScenarioKind::safe_contestant) parts = 3;
    if (cfg.scenario != ScenarioKind::mvn && cfg.scenario != ScenarioKind::theory_sweep) {
        require(cfg.splits.size() == parts, ErrorKind::validation,
                "config: " + std::string(to_string(cfg.scenario)) + " needs " + std::to_string(parts) +
                    " split fractions");
        split_sizes(cfg.n, cfg.splits);
    }

    const auto& mv = cfg.mvn;
    require(!mv.dims.empty(), ErrorKind::validation, "config: mvn.dims must not be empty");
    for (std::size_t d : mv.dims) require(d >= 1, ErrorKind::validation, "config: mvn.dims entries must be >= 1");
    require(mv.variance > 0.0 && mv.cost_scale > 0.0, ErrorKind::validation,
            "config: mvn.variance and mvn.cost_scale must be > 0");
    require(mv.test_points >= 1 && mv.draws >= 1 && mv.calibration_draws >= 1 && mv.probe_points >= 1,
            ErrorKind::validation, "config: mvn counts must be >= 1");
    require(mv.min_m >= 2 && mv.min_m <= mv.max_m, ErrorKind::validation,
            "config: need 2 <= mvn.min_m <= mvn.max_m");
    require(mv.target_confidence > 0.0 && mv.target_confidence <= 1.0, ErrorKind::validation,
            "config: mvn.target_confidence lies in (0, 1]");

    const auto& th = cfg.theory;
    for (const auto* list : {&th.alpha, &th.sigma, &th.t, &th.t_f, &th.t_fhat, &th.delta}) {
        require(!list->empty(), ErrorKind::validation, "config: theory lists must not be empty");
    }
    require(!th.n.empty() && !th.m.empty(), ErrorKind::validation, "config: theory lists must not be empty");

    require(cfg.graph.hops >= 1, ErrorKind::validation, "config: graph.hops must be >= 1");
    require(cfg.graph.edges_path.has_value() == cfg.graph.mapping_path.has_value(), ErrorKind::validation,
            "config: graph.edges and graph.mapping go together");
}

ScenarioConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::validation, std::string("config: invalid JSON: ") + e.what());
    }
    ObjectReader r(root, "config");
    require(r.has("scenario"), ErrorKind::validation, "config: missing 'scenario'");
    std::string name;
    r.read("scenario", name);
    ScenarioConfig cfg = default_config(scenario_from_string(name));

    r.read("seed", cfg.seed);
    r.read("threads", cfg.threads);
    r.read("repeats", cfg.repeats);
    r.read("n", cfg.n);
    r.read("splits", cfg.splits);
    r.read("m_grid", cfg.m_grid);
    r.read("safety_k", cfg.safety_k);
    r.read_opt("dataset_csv", cfg.dataset_csv);
    r.read("label_column", cfg.label_column);
    if (r.has("distribution")) cfg.distribution = parse_distribution(r.raw("distribution"), r.path("distribution"));

    if (r.has("cost")) {
        ObjectReader c(r.raw("cost"), r.path("cost"));
        std::string type = "linear_separable";
        c.read("type", type);
        require(type == "linear_separable", ErrorKind::validation,
                c.path("type") + ": only 'linear_separable' costs are supported");
        std::vector<double> rates;
        c.read("rates", rates);
        cfg.cost_rates = rates;
        c.finish();
    }
    if (r.has("contestant")) {
        ObjectReader c(r.raw("contestant"), r.path("contestant"));
        if (c.has("source")) {
            std::string src;
            c.read("source", src);
            if (src == "fresh") cfg.contestant.source = SampleSourceKind::fresh;
            else if (src == "pool") cfg.contestant.source = SampleSourceKind::pool;
            else fail(ErrorKind::validation, c.path("source") + ": expected 'fresh' or 'pool'");
        }
        c.read("require_both_classes", cfg.contestant.sampling.require_both_classes);
        c.read("max_attempts", cfg.contestant.sampling.max_attempts);
        c.read("test_points", cfg.contestant.test_points);
        if (c.has("tie_rule")) {
            std::string tie;
            c.read("tie_rule", tie);
            cfg.train.contestant_tie = parse_tie(tie, c.path("tie_rule"));
        }
        c.finish();
    }
    if (r.has("train")) {
        ObjectReader t(r.raw("train"), r.path("train"));
        t.read("epochs", cfg.train.epochs);
        t.read("step", cfg.train.step);
        t.read("l2", cfg.train.l2);
        t.finish();
    }
    if (r.has("graph")) {
        ObjectReader g(r.raw("graph"), r.path("graph"));
        g.read_opt("edges", cfg.graph.edges_path);
        g.read_opt("mapping", cfg.graph.mapping_path);
        g.read("mean_degree", cfg.graph.mean_degree);
        g.read("hops", cfg.graph.hops);
        g.read("embedding_split", cfg.graph.embedding_split);
        g.finish();
    }
    if (r.has("mvn")) {
        ObjectReader m(r.raw("mvn"), r.path("mvn"));
        auto& mv = cfg.mvn;
        m.read("dims", mv.dims);
        m.read("mean", mv.mean);
        m.read("variance", mv.variance);
        m.read("label_threshold", mv.label_threshold);
        m.read("cost_scale", mv.cost_scale);
        m.read("test_points", mv.test_points);
        m.read("draws", mv.draws);
        m.read("calibration_draws", mv.calibration_draws);
        m.read("probe_points", mv.probe_points);
        m.read("target_disagreement", mv.target_disagreement);
        m.read("target_confidence", mv.target_confidence);
        m.read("min_m", mv.min_m);
        m.read("max_m", mv.max_m);
        m.finish();
    }
    if (r.has("theory")) {
        ObjectReader t(r.raw("theory"), r.path("theory"));
        auto& th = cfg.theory;
        t.read("alpha", th.alpha);
        t.read("sigma", th.sigma);
        t.read("t", th.t);
        t.read("t_f", th.t_f);
        t.read("t_fhat", th.t_fhat);
        t.read("n", th.n);
        t.read("m", th.m);
        t.read("delta", th.delta);
        t.read("mc_samples", th.mc_samples);
        t.finish();
    }
    if (r.has("output")) {
        ObjectReader o(r.raw("output"), r.path("output"));
        o.read_opt("path", cfg.output.path);
        if (o.has("format")) {
            std::string fmt;
            o.read("format", fmt);
            if (fmt == "csv") cfg.output.format = OutputFormat::csv;
            else if (fmt == "json") cfg.output.format = OutputFormat::json;
            else fail(ErrorKind::validation, o.path("format") + ": expected 'csv' or 'json'");
        }
        o.read("include_timing", cfg.output.include_timing);
        o.read_opt("stories", cfg.output.stories_path);
        o.finish();
    }
    r.finish();
    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace poplab
