#include "poplab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "poplab/error.hpp"
#include "poplab/parallel.hpp"

namespace poplab {

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
auto in_stage(const std::string& stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& e) {
        throw Error(e.kind(), stage + ": " + e.what());
    }
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::vector<std::string>& summary_columns() {
    static const std::vector<std::string> cols{
        "scenario", "sweep_key", "sweep_value", "repeats", "pop_std", "inequity",
        "err_nonstrategic", "one_sided_rate", "no_information_rate",
    };
    return cols;
}

ResultsTable make_table(const ScenarioConfig& cfg, const std::vector<std::string>& extra) {
    ResultsTable t;
    t.scenario = to_string(cfg.scenario);
    t.columns = pop_columns();
    t.columns.insert(t.columns.end(), summary_columns().begin(), summary_columns().end());
    t.columns.insert(t.columns.end(), extra.begin(), extra.end());
    t.metadata.emplace_back("scenario", t.scenario);
    t.metadata.emplace_back("seed", std::to_string(cfg.seed));
    return t;
}

double mean_of(const std::vector<PopReport>& reps, double (PopReport::*field)() const) {
    double sum = 0.0;
    for (const auto& r : reps) sum += (r.*field)();
    return reps.empty() ? 0.0 : sum / static_cast<double>(reps.size());
}

double stddev_of(const std::vector<PopReport>& reps, double (PopReport::*field)() const) {
    if (reps.size() < 2) return 0.0;
    const double mu = mean_of(reps, field);
    double ss = 0.0;
    for (const auto& r : reps) ss += ((r.*field)() - mu) * ((r.*field)() - mu);
    return std::sqrt(ss / static_cast<double>(reps.size() - 1));
}

double rate_of(const std::vector<PopReport>& reps, std::uint64_t PopCounts::*field) {
    std::uint64_t num = 0, den = 0;
    for (const auto& r : reps) {
        num += r.counts.*field;
        den += r.counts.n;
    }
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::vector<Cell> pop_row(const ScenarioConfig& cfg, std::int64_t m, const std::string& sweep_key,
                          double sweep_value, const std::vector<PopReport>& reps) {
    return {
        m,
        mean_of(reps, &PopReport::err_transparent),
        mean_of(reps, &PopReport::err_dark),
        mean_of(reps, &PopReport::pop),
        mean_of(reps, &PopReport::pop_plus),
        mean_of(reps, &PopReport::pop_minus),
        mean_of(reps, &PopReport::eps2),
        mean_of(reps, &PopReport::mass_E),
        std::string(to_string(cfg.scenario)),
        sweep_key,
        sweep_value,
        static_cast<std::int64_t>(reps.size()),
        stddev_of(reps, &PopReport::pop),
        mean_of(reps, &PopReport::inequity),
        mean_of(reps, &PopReport::err_nonstrategic),
        rate_of(reps, &PopCounts::one_sided),
        rate_of(reps, &PopCounts::no_information),
    };
}

std::string join_grid(const std::vector<std::size_t>& grid) {
    std::string s;
    for (std::size_t i = 0; i < grid.size(); ++i) s += (i ? " " : "") + std::to_string(grid[i]);
    return s;
}

Dataset head(const Dataset& ds, std::size_t count) {
    if (count == 0 || count >= ds.size()) return ds;
    std::vector<std::size_t> rows(count);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return subset(ds, rows);
}

CostSpec cost_for(const ScenarioConfig& cfg, std::size_t dim) {
    if (cfg.cost_rates) {
        require(cfg.cost_rates->size() == dim, ErrorKind::validation,
                "cost: " + std::to_string(cfg.cost_rates->size()) + " rates for " + std::to_string(dim) +
                    "-dimensional data");
        return CostSpec::linear_separable(*cfg.cost_rates);
    }
    return CostSpec::linear_separable(std::vector<double>(dim, 1.0));
}

Family family_for(std::size_t dim) { return dim == 1 ? Family::threshold : Family::linear; }

Classifier non_strategic_fit(const Dataset& train, const TrainConfig& cfg) {
    return train.dim() == 1 ? fit_threshold_erm(train, 0) : fit_linear_erm(train, cfg);
}

// Fits one contestant model per test point, all in slot order.
std::vector<ContestantModel> fit_contestants(const Dataset& test, std::size_t threads,
                                             const std::function<ContestantModel(std::size_t)>& fit_one) {
    std::vector<ContestantModel> models(test.size());
    parallel_for(test.size(), threads, [&](std::size_t i) { models[i] = fit_one(i); });
    return models;
}

ModelProvider provider_from(const std::vector<ContestantModel>& models) {
    return [&models](std::size_t i, const Example&) { return models[i]; };
}

// split_gaussian and mixture_negative_pop.
ResultsTable run_population_1d(const ScenarioConfig& cfg) {
    require(cfg.distribution.has_value(), ErrorKind::validation, "config: distribution required");
    const Sampler sampler(*cfg.distribution);
    require(sampler.dim() == 1, ErrorKind::validation, "scenario needs a one-dimensional distribution");
    const CostSpec cost = cost_for(cfg, 1);
    const SeedSpec root{cfg.seed, 0};

    ResultsTable table = make_table(cfg, {"jury_threshold_mean"});
    table.metadata.emplace_back("m_grid", join_grid(cfg.m_grid));

    std::vector<std::vector<PopReport>> reports(cfg.m_grid.size());
    std::vector<double> seconds(cfg.m_grid.size(), 0.0);
    double threshold_sum = 0.0;

    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        const Dataset data = in_stage("synthesize data", [&] {
            return synth_dataset(*cfg.distribution, cfg.n, root.child("data").child(r));
        });
        const auto parts = in_stage("split data", [&] {
            return split_dataset(data, cfg.splits, root.child("split").child(r));
        });
        const Dataset& train = parts[0];
        const Dataset test = head(parts[1], cfg.contestant.test_points);
        const StrategicFit jury = in_stage("train jury", [&] { return strategic_erm(train, cost, cfg.train); });
        threshold_sum += jury.classifier.threshold_value();

        for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
            const auto start = Clock::now();
            const std::size_t m = cfg.m_grid[mi];
            const SeedSpec seeds = root.child("contestant").child(r).child(m);
            const auto models = in_stage("contestant samples", [&] {
                return fit_contestants(test, cfg.threads, [&](std::size_t i) {
                    const SampleSource source = cfg.contestant.source == SampleSourceKind::fresh
                                                    ? SampleSource{FreshDraws{&sampler}}
                                                    : SampleSource{UniformPool{&train}};
                    const auto s = contestant_sample_set(source, jury.classifier, m, seeds.child(i),
                                                         cfg.contestant.sampling);
                    return contestant_fit(s.samples, Family::threshold, cfg.train);
                });
            });
            reports[mi].push_back(in_stage("evaluate", [&] {
                return pop_report(jury.classifier, provider_from(models), cost, test, {0.0, false, cfg.threads});
            }));
            seconds[mi] += seconds_since(start);
        }
    }

    for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
        const auto m = static_cast<std::int64_t>(cfg.m_grid[mi]);
        auto row = pop_row(cfg, m, "m", static_cast<double>(m), reports[mi]);
        row.emplace_back(threshold_sum / static_cast<double>(cfg.repeats));
        table.rows.push_back(std::move(row));
        table.wall_seconds.push_back(seconds[mi]);
    }
    return table;
}

double disagreement(const Classifier& f, const Classifier& g, const Dataset& probe) {
    std::size_t differ = 0;
    for (const auto& e : probe) differ += f.predict(e.x) != g.predict(e.x) ? 1 : 0;
    return static_cast<double>(differ) / static_cast<double>(probe.size());
}

ResultsTable run_mvn(const ScenarioConfig& cfg) {
    const MvnOptions& mv = cfg.mvn;
    const SeedSpec root{cfg.seed, 0};
    ResultsTable table = make_table(cfg, {"d", "calibration_capped", "calibration_pass_rate", "pop_zero_share"});
    table.metadata.emplace_back("mvn_mean", format_number(mv.mean));
    table.metadata.emplace_back("mvn_variance", format_number(mv.variance));

    for (std::size_t d : mv.dims) {
        const auto start = Clock::now();
        const SeedSpec seeds = root.child("mvn").child(d);
        const Mvn dist = Mvn::diagonal(std::vector<double>(d, mv.mean), std::vector<double>(d, mv.variance),
                                       ThresholdLabeler{0, mv.label_threshold});
        const Sampler sampler(dist);
        std::vector<double> rates(d, 0.0);
        rates[0] = mv.cost_scale;
        const CostSpec cost = CostSpec::linear_separable(rates);
        const Classifier f = Classifier::threshold(0, mv.label_threshold + budget_t(cost).t);
        const Family family = family_for(d);

        auto fit_once = [&](std::size_t m, SeedSpec seed) {
            const auto s = contestant_sample_set(FreshDraws{&sampler}, f, m, seed, cfg.contestant.sampling);
            return contestant_fit(s.samples, family, cfg.train);
        };

        const Dataset probe = synth_dataset(dist, mv.probe_points, seeds.child("probe"));
        std::size_t chosen = 0;
        double pass_rate = 0.0;
        for (std::size_t m = mv.min_m; m <= mv.max_m; m *= 2) {
            std::vector<char> pass(mv.calibration_draws, 0);
            in_stage("calibrate m(d)", [&] {
                parallel_for(mv.calibration_draws, cfg.threads, [&](std::size_t c) {
                    const ContestantModel model = fit_once(m, seeds.child("calibration").child(m).child(c));
                    pass[c] = disagreement(f, model.classifier, probe) <= mv.target_disagreement;
                });
            });
            pass_rate = static_cast<double>(std::count(pass.begin(), pass.end(), 1)) /
                        static_cast<double>(mv.calibration_draws);
            chosen = m;
            if (pass_rate >= mv.target_confidence) break;
        }
        const bool capped = pass_rate < mv.target_confidence;

        std::vector<PopReport> reps(mv.draws);
        in_stage("evaluate", [&] {
            parallel_for(mv.draws, cfg.threads, [&](std::size_t k) {
                const Dataset test = synth_dataset(dist, mv.test_points, seeds.child("test").child(k));
                const ContestantModel model = fit_once(chosen, seeds.child("draw").child(k));
                reps[k] = pop_report(f, [&](std::size_t, const Example&) { return model; }, cost, test);
            });
        });
        const auto zero_draws = std::count_if(reps.begin(), reps.end(), [](const PopReport& r) {
            return r.counts.err_dark == r.counts.err_transparent;
        });

        auto row = pop_row(cfg, static_cast<std::int64_t>(chosen), "d", static_cast<double>(d), reps);
        row.emplace_back(static_cast<std::int64_t>(d));
        row.emplace_back(static_cast<std::int64_t>(capped ? 1 : 0));
        row.emplace_back(pass_rate);
        row.emplace_back(static_cast<double>(zero_draws) / static_cast<double>(reps.size()));
        table.rows.push_back(std::move(row));
        table.wall_seconds.push_back(seconds_since(start));
    }
    return table;
}

Dataset load_or_synthesize(const ScenarioConfig& cfg, SeedSpec seed) {
    if (cfg.dataset_csv) {
        return in_stage("load data", [&] { return load_dataset_csv(*cfg.dataset_csv, cfg.label_column); });
    }
    require(cfg.distribution.has_value(), ErrorKind::validation, "config: distribution required");
    return in_stage("synthesize data", [&] { return synth_dataset(*cfg.distribution, cfg.n, seed); });
}

// loans_csv and safe_contestant share one pipeline; the former has k = 0.
ResultsTable run_loans(const ScenarioConfig& cfg) {
    const SeedSpec root{cfg.seed, 0};
    ResultsTable table = make_table(cfg, {"k", "baseline_err_nonstrategic", "baseline_err_transparent",
                                          "jury_train_error"});
    table.metadata.emplace_back("m_grid", join_grid(cfg.m_grid));
    table.metadata.emplace_back("data", cfg.dataset_csv ? *cfg.dataset_csv : std::string("synthetic"));
    const bool sweep_k = cfg.scenario == ScenarioKind::safe_contestant;

    // One data set; repeats redraw the contestants' samples.
    const Dataset data = load_or_synthesize(cfg, root.child("data"));
    const auto rows = split_indices(data.size(), cfg.splits, root.child("split"));
    const Standardized scaled =
        standardize(subset(data, rows[0]), {subset(data, rows[1]), subset(data, rows[2])});
    const Dataset& train = scaled.train;
    const Dataset test = head(scaled.others[0], cfg.contestant.test_points);
    const Dataset& pool = scaled.others[1];
    const CostSpec cost = cost_for(cfg, data.dim());

    const StrategicFit jury = in_stage("train jury", [&] { return strategic_erm(train, cost, cfg.train); });
    const Classifier baseline = in_stage("train baseline", [&] { return non_strategic_fit(train, cfg.train); });
    const double baseline_truthful = empirical_error(baseline, test);
    const double baseline_gamed = strategic_error(baseline, BestResponse{baseline}, cost, test);

    std::vector<std::vector<std::vector<PopReport>>> reports(
        cfg.safety_k.size(), std::vector<std::vector<PopReport>>(cfg.m_grid.size()));
    std::vector<double> seconds(cfg.m_grid.size(), 0.0);
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
            const auto start = Clock::now();
            const std::size_t m = cfg.m_grid[mi];
            const SeedSpec seeds = root.child("contestant").child(r).child(m);
            const auto models = in_stage("contestant samples", [&] {
                return fit_contestants(test, cfg.threads, [&](std::size_t i) {
                    const auto s = contestant_sample_set(UniformPool{&pool}, jury.classifier, m, seeds.child(i),
                                                         cfg.contestant.sampling);
                    return contestant_fit(s.samples, family_for(data.dim()), cfg.train);
                });
            });
            for (std::size_t ki = 0; ki < cfg.safety_k.size(); ++ki) {
                reports[ki][mi].push_back(in_stage("evaluate", [&] {
                    return pop_report(jury.classifier, provider_from(models), cost, test,
                                      {cfg.safety_k[ki], false, cfg.threads});
                }));
            }
            seconds[mi] += seconds_since(start);
        }
    }

    for (std::size_t ki = 0; ki < cfg.safety_k.size(); ++ki) {
        for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
            const auto m = static_cast<std::int64_t>(cfg.m_grid[mi]);
            auto row = sweep_k ? pop_row(cfg, m, "k", cfg.safety_k[ki], reports[ki][mi])
                               : pop_row(cfg, m, "m", static_cast<double>(m), reports[ki][mi]);
            row.emplace_back(cfg.safety_k[ki]);
            row.emplace_back(baseline_truthful);
            row.emplace_back(baseline_gamed);
            row.emplace_back(jury.error);
            table.rows.push_back(std::move(row));
            table.wall_seconds.push_back(seconds[mi] / static_cast<double>(cfg.safety_k.size()));
        }
    }
    return table;
}

struct Bucket {
    std::size_t lo;
    std::size_t hi;
};

ScenarioResult run_social(const ScenarioConfig& cfg) {
    const SeedSpec root{cfg.seed, 0};
    const auto start = Clock::now();
    const Dataset data = load_or_synthesize(cfg, root.child("data"));
    const SocialGraph graph = in_stage("load graph", [&] {
        if (cfg.graph.edges_path) return load_social_graph(*cfg.graph.edges_path, *cfg.graph.mapping_path);
        return random_social_graph(data.size(), cfg.graph.mean_degree, root.child("graph"));
    });
    const auto rows = split_indices(data.size(), cfg.splits, root.child("split"));
    const Scaler scaler = fit_scaler(subset(data, rows[0]));
    const Dataset population = scaler.apply(data);
    const Dataset train = subset(population, rows[0]);
    const CostSpec cost = cost_for(cfg, data.dim());
    const StrategicFit jury = in_stage("train jury", [&] { return strategic_erm(train, cost, cfg.train); });
    const Classifier& f = jury.classifier;

    std::vector<char> is_test(data.size(), 0);
    for (std::size_t row : rows[1]) is_test[row] = 1;
    std::vector<std::size_t> users;
    for (std::size_t u = 0; u < graph.users(); ++u) {
        const std::size_t row = graph.example_row(u);
        require(row < data.size(), ErrorKind::validation,
                "graph: user " + std::to_string(u) + " maps to a missing example row");
        if (is_test[row]) users.push_back(u);
    }
    Dataset test(data.dim());
    for (std::size_t u : users) test.add(population[graph.example_row(u)]);

    std::vector<std::size_t> sample_sizes(users.size());
    const auto models = in_stage("contestant samples", [&] {
        return fit_contestants(test, cfg.threads, [&](std::size_t i) {
            const auto s = contestant_sample_set(NetworkNeighbours{&population, &graph, users[i], cfg.graph.hops},
                                                 f, 0, root.child("contestant").child(i), cfg.contestant.sampling);
            sample_sizes[i] = s.samples.size();
            return contestant_fit(s.samples, family_for(data.dim()), cfg.train);
        });
    });
    const PopReport all = in_stage("evaluate", [&] {
        return pop_report(f, provider_from(models), cost, test, {0.0, true, cfg.threads});
    });

    ScenarioResult result;
    result.table = make_table(cfg, {"sample_size_hi", "users"});
    result.table.metadata.emplace_back("hops", std::to_string(cfg.graph.hops));
    const std::vector<Bucket> buckets{{0, 0}, {1, 4}, {5, 16}, {17, 64}, {65, std::numeric_limits<std::size_t>::max()}};
    for (const auto& b : buckets) {
        PopReport rep;
        for (std::size_t i = 0; i < users.size(); ++i) {
            if (sample_sizes[i] < b.lo || sample_sizes[i] > b.hi) continue;
            rep.counts += point_counts(all.tags[i], test[i], f.predict(test[i].x), models[i]);
        }
        auto row = pop_row(cfg, static_cast<std::int64_t>(b.lo), "sample_size_at_least",
                           static_cast<double>(b.lo), {rep});
        row.emplace_back(b.hi == std::numeric_limits<std::size_t>::max() ? -1 : static_cast<std::int64_t>(b.hi));
        row.emplace_back(static_cast<std::int64_t>(rep.counts.n));
        result.table.rows.push_back(std::move(row));
        result.table.wall_seconds.push_back(0.0);
    }
    auto total = pop_row(cfg, 0, "all", 0.0, {all});
    total.emplace_back(std::int64_t{-1});
    total.emplace_back(static_cast<std::int64_t>(all.counts.n));
    result.table.rows.push_back(std::move(total));
    result.table.wall_seconds.push_back(seconds_since(start));

    // Embedding: partial scores over two feature groups, bias in the first.
    const std::size_t split = std::min(cfg.graph.embedding_split, data.dim());
    auto embed = [&](const FeatureVector& x) -> std::pair<double, double> {
        if (f.is_threshold()) return {f.score(x), 0.0};
        double a = f.bias(), b = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) (j < split ? a : b) += f.weights()[j] * x[j];
        return {a, b};
    };
    for (std::size_t i = 0; i < users.size(); ++i) {
        const Example& e = test[i];
        const FeatureVector transparent = best_response(f, cost, e.x);
        const FeatureVector dark = respond(policy_for(models[i]), cost, e.x);
        StoryRecord s;
        s.user = users[i];
        s.x.assign(e.x.begin(), e.x.end());
        s.moved_transparent.assign(transparent.begin(), transparent.end());
        s.moved_dark.assign(dark.begin(), dark.end());
        s.label = to_int(e.y);
        s.verdict_truthful = to_int(f.predict(e.x));
        s.verdict_transparent = to_int(all.tags[i].transparent_verdict);
        s.verdict_dark = to_int(all.tags[i].dark_verdict);
        s.samples = sample_sizes[i];
        s.one_sided = models[i].one_sided;
        s.no_information = models[i].no_information;
        s.in_E = all.tags[i].in_E;
        std::tie(s.embed_x, s.embed_y) = embed(e.x);
        std::tie(s.embed_dark_x, s.embed_dark_y) = embed(dark);
        result.stories.push_back(std::move(s));
    }
    return result;
}

std::string cell_text(const Cell& cell) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    return std::get<std::string>(cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
    if (const auto* d = std::get_if<double>(&cell)) {
        if (!std::isfinite(*d)) return nullptr;
        return *d;
    }
    return std::get<std::string>(cell);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::io, "output: cannot open '" + path + "' for writing");
    return out;
}

void write_table(const ResultsTable& table, OutputFormat format, bool timing, std::ostream& out) {
    if (format == OutputFormat::json) write_json(table, out, timing);
    else write_csv(table, out, timing);
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(const ResultsTable& table, std::ostream& out, bool include_timing) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    if (include_timing) out << ",wall_seconds";
    out << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
        if (include_timing) out << ',' << format_number(r < table.wall_seconds.size() ? table.wall_seconds[r] : 0.0);
        out << '\n';
    }
}

void write_json(const ResultsTable& table, std::ostream& out, bool include_timing) {
    nlohmann::ordered_json doc;
    doc["scenario"] = table.scenario;
    auto& meta = doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.metadata) meta[k] = v;
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        nlohmann::ordered_json row;
        for (std::size_t c = 0; c < table.columns.size(); ++c) row[table.columns[c]] = cell_json(table.rows[r][c]);
        if (include_timing && r < table.wall_seconds.size()) row["wall_seconds"] = table.wall_seconds[r];
        rows.push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
}

void write_stories(const std::vector<StoryRecord>& stories, std::ostream& out) {
    auto doc = nlohmann::ordered_json::array();
    for (const auto& s : stories) {
        doc.push_back({{"user", s.user},
                       {"x", s.x},
                       {"moved_transparent", s.moved_transparent},
                       {"moved_dark", s.moved_dark},
                       {"label", s.label},
                       {"verdict_truthful", s.verdict_truthful},
                       {"verdict_transparent", s.verdict_transparent},
                       {"verdict_dark", s.verdict_dark},
                       {"samples", s.samples},
                       {"one_sided", s.one_sided},
                       {"no_information", s.no_information},
                       {"in_E", s.in_E},
                       {"embedding", {s.embed_x, s.embed_y}},
                       {"embedding_dark", {s.embed_dark_x, s.embed_dark_y}}});
    }
    out << doc.dump(2) << '\n';
}

void emit_results(const ScenarioResult& result, const OutputOptions& output, std::ostream& fallback) {
    if (!output.path) {
        write_table(result.table, output.format, output.include_timing, fallback);
    } else {
        auto out = open_output(*output.path);
        write_table(result.table, output.format, output.include_timing, out);
        auto meta = open_output(*output.path + ".meta.json");
        nlohmann::ordered_json doc = nlohmann::ordered_json::object();
        for (const auto& [k, v] : result.table.metadata) doc[k] = v;
        meta << doc.dump(2) << '\n';
    }
    if (result.stories.empty() || !(output.stories_path || output.path)) return;
    auto out = open_output(output.stories_path ? *output.stories_path : *output.path + ".stories.json");
    write_stories(result.stories, out);
}

const std::vector<std::string>& pop_columns() {
    static const std::vector<std::string> cols{
        "m", "err_transparent", "err_dark", "pop", "pop_plus", "pop_minus", "eps2", "mass_E",
    };
    return cols;
}

std::size_t ResultsTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) fail(ErrorKind::validation, "results: no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

double ResultsTable::number(std::size_t row, const std::string& name) const {
    const Cell& cell = rows.at(row).at(column(name));
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&cell)) return *d;
    fail(ErrorKind::validation, "results: column '" + name + "' is not numeric");
}

ResultsTable run_theory_sweep(const ScenarioConfig& cfg) {
    const TheoryGrid& g = cfg.theory;
    const SeedSpec root{cfg.seed, 0};
    ResultsTable table;
    table.scenario = to_string(ScenarioKind::theory_sweep);
    table.columns = {"alpha", "sigma", "t", "t_f", "t_fhat", "n", "m", "delta", "pop_closed_form", "branch",
                     "in_regime", "exact", "sufficient", "regime", "mass_E_above_2eps1", "mass_E", "eps1",
                     "eps2", "sigma0", "eps1_bound", "pop_population", "pop_mc", "mc_samples"};
    table.metadata.emplace_back("scenario", table.scenario);
    table.metadata.emplace_back("seed", std::to_string(cfg.seed));

    std::size_t index = 0;
    for (double alpha : g.alpha)
    for (double sigma : g.sigma)
    for (double t : g.t)
    for (double t_f : g.t_f)
    for (double t_fhat : g.t_fhat)
    for (std::size_t n : g.n)
    for (std::size_t m : g.m)
    for (double delta : g.delta) {
        const auto start = Clock::now();
        TheoryParams p;
        p.alpha = alpha;
        p.sigma = sigma;
        p.t = t;
        p.t_f = t_f;
        p.t_fhat = t_fhat;
        p.n = n;
        p.m = m;
        p.delta = delta;
        const ClosedFormPop cf = in_stage("theory", [&] { return closed_form_pop_1d(p); });
        const PopCondition cond = pop_condition_1d(p);

        double pop_mc = std::numeric_limits<double>::quiet_NaN();
        if (g.mc_samples > 0) {
            const Dataset sample = synth_dataset(Gaussian1d{alpha, sigma, ThresholdLabeler{0, alpha}},
                                                 g.mc_samples, root.child("theory").child(index));
            const ContestantModel believed = ContestantModel::informed(Classifier::threshold(0, t_fhat));
            pop_mc = pop_report(Classifier::threshold(0, t_f),
                                [&](std::size_t, const Example&) { return believed; },
                                CostSpec::scalar(2.0 / t), sample, {0.0, false, cfg.threads})
                         .pop();
        }
        const char* branch = cf.branch == PopBranch::jury_lower    ? "jury_lower"
                             : cf.branch == PopBranch::jury_higher ? "jury_higher"
                                                                   : "none";
        table.rows.push_back({alpha, sigma, t, t_f, t_fhat, static_cast<std::int64_t>(n),
                              static_cast<std::int64_t>(m), delta, cf.pop, std::string(branch),
                              std::int64_t{cf.in_regime}, std::int64_t{cf.exact}, std::int64_t{cond.sufficient},
                              std::int64_t{cond.regime}, std::int64_t{cond.necessary_iff_regime}, cond.mass_E,
                              cf.eps1, cf.eps2, cf.sigma0, n >= 1 ? eps1_bound(n, delta) : 0.0,
                              population_pop_1d(p), pop_mc, static_cast<std::int64_t>(g.mc_samples)});
        table.wall_seconds.push_back(seconds_since(start));
        ++index;
    }
    return table;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    switch (cfg.scenario) {
        case ScenarioKind::split_gaussian:
        case ScenarioKind::mixture_negative_pop:
            return {run_population_1d(cfg), {}};
        case ScenarioKind::mvn:
            return {run_mvn(cfg), {}};
        case ScenarioKind::loans_csv:
        case ScenarioKind::safe_contestant:
            return {run_loans(cfg), {}};
        case ScenarioKind::social_network:
            return run_social(cfg);
        case ScenarioKind::theory_sweep:
            return {run_theory_sweep(cfg), {}};
    }
    fail(ErrorKind::validation, "unknown scenario");
}

ResultsTable run_inequity(const ScenarioConfig& cfg) {
    require(cfg.scenario != ScenarioKind::theory_sweep, ErrorKind::validation,
            "inequity: the theory sweep has no per-user labels");
    const ResultsTable full = run_scenario(cfg).table;
    ResultsTable out;
    out.scenario = full.scenario;
    out.metadata = full.metadata;
    out.columns = {"scenario", "sweep_key", "sweep_value", "m", "repeats", "inequity", "pop_plus"};
    for (std::size_t r = 0; r < full.rows.size(); ++r) {
        std::vector<Cell> row;
        for (const auto& c : out.columns) row.push_back(full.rows[r][full.column(c)]);
        out.rows.push_back(std::move(row));
        out.wall_seconds.push_back(full.wall_seconds[r]);
    }
    return out;
}

}  // namespace poplab
