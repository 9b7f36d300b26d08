#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "poplab/config.hpp"
#include "poplab/error.hpp"
#include "poplab/scenario.hpp"

using namespace poplab;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("poplab_test_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("doubling grid") {
    CHECK(doubling_grid(4, 4096).size() == 11);
    CHECK(doubling_grid(4, 4096).front() == 4);
    CHECK(doubling_grid(4, 4096).back() == 4096);
}

TEST_CASE("config parsing") {
    const ScenarioConfig cfg = parse_config(R"({"scenario": "split_gaussian", "seed": 9, "repeats": 3,
        "m_grid": [4, 8], "cost": {"rates": [0.5]}})");
    CHECK(cfg.seed == 9);
    CHECK(cfg.repeats == 3);
    CHECK(cfg.m_grid == std::vector<std::size_t>{4, 8});
    REQUIRE(cfg.cost_rates);
    CHECK((*cfg.cost_rates)[0] == 0.5);
    REQUIRE(cfg.distribution);

    try {
        parse_config(R"({"scenario": "split_gaussian", "mgrid": [4]})");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
        CHECK(std::string(e.what()).find("mgrid") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(R"({"scenario": "split_gaussian", "contestant": {"sauce": "x"}})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "split_gaussian", "m_grid": [8, 4]})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "split_gaussian", "repeats": 0})"), Error);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "nope"})"), Error);
    CHECK_THROWS_AS(parse_config("{not json"), Error);
    try {
        load_config("/nonexistent/poplab.json");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io);
    }
}

TEST_CASE("scenario defaults") {
    const ScenarioConfig safe = default_config(ScenarioKind::safe_contestant);
    CHECK(safe.safety_k == std::vector<double>{0.02, 0.2});
    CHECK(safe.splits.size() == 3);
    CHECK(default_config(ScenarioKind::mvn).mvn.mean == 0.0);
}

TEST_CASE("loan-style generator scores about 85% with a linear rule") {
    const Mvn spec = loan_style_distribution();
    const Dataset ds = synth_dataset(spec, 20000, SeedSpec{31, 0});
    const auto& lab = std::get<NoisyLinearLabeler>(spec.labeler);
    std::size_t agree = 0;
    for (const auto& e : ds) {
        double s = lab.bias;
        for (std::size_t j = 0; j < ds.dim(); ++j) s += lab.weights[j] * e.x[j];
        agree += label_of(s >= 0.0) == e.y;
    }
    CHECK(static_cast<double>(agree) / 20000.0 == doctest::Approx(0.85).epsilon(0.02));
}

TEST_CASE("csv and json emission") {
    ResultsTable empty;
    empty.columns = pop_columns();
    std::ostringstream csv;
    write_csv(empty, csv);
    CHECK(csv.str() == "m,err_transparent,err_dark,pop,pop_plus,pop_minus,eps2,mass_E\n");

    ResultsTable one;
    one.scenario = "split_gaussian";
    one.columns = {"m", "pop", "label"};
    one.rows.push_back({std::int64_t{4}, 0.1 + 0.2, std::string("x")});
    std::ostringstream js;
    write_json(one, js);
    const auto doc = nlohmann::json::parse(js.str());
    REQUIRE(doc["rows"].size() == 1);
    CHECK(doc["rows"][0]["m"].get<std::int64_t>() == 4);
    CHECK(doc["rows"][0]["pop"].get<double>() == 0.1 + 0.2);
    CHECK(doc["rows"][0]["label"].get<std::string>() == "x");

    CHECK(format_number(0.1 + 0.2) == "0.30000000000000004");
    CHECK(format_number(2.0) == "2");
    CHECK(one.number(0, "pop") == 0.1 + 0.2);
    CHECK_THROWS_AS(one.number(0, "label"), Error);
}

TEST_CASE("small split-gaussian run is reproducible across thread counts") {
    ScenarioConfig cfg = default_config(ScenarioKind::split_gaussian);
    cfg.n = 500;
    cfg.repeats = 2;
    cfg.m_grid = {4, 64};
    auto render = [&](std::size_t threads) {
        cfg.threads = threads;
        std::ostringstream out;
        write_csv(run_scenario(cfg).table, out);
        return out.str();
    };
    const std::string a = render(1);
    CHECK(a == render(1));
    CHECK(a == render(4));
}

TEST_CASE("social stories on a toy graph") {
    const std::string data = temp_path("toy.csv");
    const std::string edges = temp_path("edges.csv");
    const std::string mapping = temp_path("mapping.csv");
    write_file(data, "a,b,c,d,label\n0.5,1.0,0.2,0.1,1\n-0.3,0.4,0.1,-0.2,-1\n1.2,-0.5,0.3,0.4,1\n"
                     "0.1,0.1,0.1,0.1,-1\n-1.0,-0.2,0.5,0.3,-1\n0.9,0.8,-0.1,0.2,1\n");
    write_file(edges, "a,b\n0,1\n1,2\n");
    write_file(mapping, "user,row\n0,0\n1,1\n2,2\n");

    ScenarioConfig cfg = default_config(ScenarioKind::social_network);
    cfg.dataset_csv = data;
    cfg.graph.edges_path = edges;
    cfg.graph.mapping_path = mapping;
    cfg.graph.embedding_split = 2;
    cfg.splits = {0.5, 0.5};
    cfg.n = 6;
    cfg.seed = 3;
    // Put every graph user in the test split by trying seeds.
    ScenarioResult result;
    for (std::uint64_t seed = 1; seed < 200; ++seed) {
        cfg.seed = seed;
        result = run_scenario(cfg);
        if (result.stories.size() == 3) break;
    }
    REQUIRE(result.stories.size() == 3);
    for (const auto& s : result.stories) {
        CHECK((s.embed_x + s.embed_y >= 0.0) == (s.verdict_truthful == 1));
    }
    std::remove(data.c_str());
    std::remove(edges.c_str());
    std::remove(mapping.c_str());
}
