#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankfit/errors.hpp"
#include "rankfit/io.hpp"
#include "rankfit/report.hpp"
#include "rankfit/rng.hpp"

using namespace rankfit;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("/tmp/rankfit_io_") + name;
}

std::string write_file(const std::string& name, const std::string& content) {
    std::string path = temp_path(name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

const char* kPlainSoc =
    "# two colors\n"
    "2\n"
    "1: red\n"
    "2: blue\n"
    "4, 2\n"
    "3: 1,2\n"
    "1: 2,1\n";

}  // namespace

TEST_CASE("plain soc shape parses") {
    Dataset data = parse_soc(write_file("plain.soc", kPlainSoc));
    CHECK(data.m() == 2);
    CHECK(data.n() == 4);
    CHECK(data.labels()[0] == "red");
    CHECK(data.labels()[1] == "blue");
    CHECK(empirical_pairwise(data)(0, 1) == doctest::Approx(0.75));
}

TEST_CASE("metadata soc shape parses") {
    Dataset data = parse_soc(write_file("meta.soc",
                                        "# NUMBER ALTERNATIVES: 3\n"
                                        "# ALTERNATIVE NAME 1: apple\n"
                                        "# ALTERNATIVE NAME 2: banana\n"
                                        "# ALTERNATIVE NAME 3: cherry\n"
                                        "# NUMBER VOTERS: 3\n"
                                        "2: 1,2,3\n"
                                        "1: 3,2,1\n"));
    CHECK(data.m() == 3);
    CHECK(data.n() == 3);
    CHECK(data.labels()[0] == "apple");
    CHECK(data.labels()[2] == "cherry");
    CHECK(data.ranking(2) == Ranking({2, 1, 0}));
}

TEST_CASE("sushi file loads with the documented shape") {
    Dataset data = parse_soc(std::string(RANKFIT_DATA_DIR) + "/sushi.soc");
    CHECK(data.m() == 10);
    CHECK(data.n() == 5000);
    CHECK(data.labels()[7] == "toro");
    CHECK(data.labels()[9] == "kappa-maki");
}

TEST_CASE("soc parse errors carry line numbers") {
    try {
        parse_soc(write_file("badcount.soc",
                             "2\n1: a\n2: b\n2, 2\nx: 1,2\n1: 2,1\n"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
    }

    CHECK_THROWS_AS(
        parse_soc(write_file("dupid.soc", "2\n1: a\n2: b\n1, 1\n1: 1,1\n")),
        ValidationError);
    try {
        parse_soc(write_file("dupid.soc", "2\n1: a\n2: b\n1, 1\n1: 1,1\n"));
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    }

    CHECK_THROWS_AS(
        parse_soc(write_file("range.soc", "2\n1: a\n2: b\n1, 1\n1: 1,3\n")),
        ValidationError);
    CHECK_THROWS_AS(
        parse_soc(write_file("short.soc", "2\n1: a\n2: b\n1, 1\n1: 1\n")),
        ValidationError);
    CHECK_THROWS_AS(
        parse_soc(write_file("mismatch.soc", "2\n1: a\n2: b\n5, 2\n"
                                             "3: 1,2\n1: 2,1\n")),
        ValidationError);
    CHECK_THROWS_AS(
        parse_soc(write_file("empty.soc", "2\n1: a\n2: b\n0, 0\n")),
        EmptyInputError);
    CHECK_THROWS_AS(
        parse_soc(write_file("header.soc", "2\n1: a\n")), ParseError);
    CHECK_THROWS_AS(parse_soc(temp_path("missing.soc")), IoError);
}

TEST_CASE("soc parsing is total under fuzzing") {
    Rng rng(81);
    const std::string alphabet = "0123456789,:# ab\n\r\t-";
    for (int rep = 0; rep < 400; ++rep) {
        int length = static_cast<int>(rng.below(300));
        std::string content;
        for (int i = 0; i < length; ++i) {
            content += alphabet[static_cast<size_t>(
                rng.below(alphabet.size()))];
        }
        std::string path = write_file("fuzz.soc", content);
        try {
            Dataset data = parse_soc(path);
            CHECK(data.n() >= 1);
        } catch (const Error&) {
        }
        try {
            Dataset data = parse_csv_rankings(path);
            CHECK(data.n() >= 1);
        } catch (const Error&) {
        }
    }
}

TEST_CASE("soc parsing is total under mutation") {
    Rng rng(82);
    const std::string base = kPlainSoc;
    for (int rep = 0; rep < 200; ++rep) {
        std::string mutated = base;
        size_t at = static_cast<size_t>(rng.below(mutated.size()));
        mutated[at] = static_cast<char>(32 + rng.below(95));
        std::string path = write_file("mutate.soc", mutated);
        try {
            parse_soc(path);
        } catch (const Error&) {
        }
    }
}

TEST_CASE("csv rankings round-trip") {
    std::vector<Ranking> rows = {Ranking({0, 1, 2}), Ranking({2, 0, 1}),
                                 Ranking({1, 2, 0})};
    Dataset data({"gold", "silver", "bronze"}, rows);
    std::string path = temp_path("round.csv");
    write_csv_rankings(path, data);
    Dataset back = parse_csv_rankings(path);
    CHECK(back.labels() == data.labels());
    REQUIRE(back.n() == data.n());
    for (int i = 0; i < back.n(); ++i) CHECK(back.ranking(i) == data.ranking(i));
}

TEST_CASE("csv parse errors") {
    CHECK_THROWS_AS(
        parse_csv_rankings(write_file("ragged.csv", "a,b,c\nb,a\n")),
        ParseError);
    CHECK_THROWS_AS(
        parse_csv_rankings(write_file("dup.csv", "a,b\nb,b\n")), ParseError);
    CHECK_THROWS_AS(
        parse_csv_rankings(write_file("unknown.csv", "a,b\nc,a\n")),
        ParseError);
    CHECK_THROWS_AS(parse_csv_rankings(write_file("none.csv", "\n\n")),
                    EmptyInputError);
    try {
        parse_csv_rankings(write_file("ragged.csv", "a,b,c\nb,a\n"));
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    Dataset crlf = parse_csv_rankings(write_file("crlf.csv", "a,b\r\nb,a\r\n"));
    CHECK(crlf.n() == 2);
    CHECK_THROWS_AS(
        write_csv_rankings(temp_path("badlabel.csv"),
                           Dataset({"a,x", "b"},
                                   {Ranking({0, 1})})),
        ValidationError);
}

TEST_CASE("params files round-trip exactly") {
    std::string path = temp_path("params.json");

    MallowsParams mal{Ranking({2, 0, 1}), 0.7851159926890999, 0.0, false};
    mal.phi = (1.0 - mal.p) / mal.p;
    save_params(path, ParamsFile{mal, {"x", "y", "z"}, 99});
    ParamsFile loaded = load_params(path);
    CHECK(loaded.seed == 99);
    CHECK(loaded.labels == std::vector<std::string>{"x", "y", "z"});
    const MallowsParams& mal2 = std::get<MallowsParams>(loaded.params);
    CHECK(mal2.reference == mal.reference);
    CHECK(mal2.p == mal.p);
    CHECK(mal2.phi == mal.phi);

    PLParams pl{{0.5, 0.3, 0.2}};
    save_params(path, ParamsFile{pl, {"x", "y", "z"}, 1});
    ParamsFile loaded_pl = load_params(path);
    const PLParams& pl2 = std::get<PLParams>(loaded_pl.params);
    CHECK(pl2.strengths == pl.strengths);

    NormalRUMParams normal;
    normal.means = {0.3, 0.0, -0.25};
    normal.sds = {1.5, 1.0, 0.75};
    normal.reference = 1;
    save_params(path, ParamsFile{normal, {"x", "y", "z"}, 2});
    ParamsFile loaded_normal = load_params(path);
    const NormalRUMParams& normal2 =
        std::get<NormalRUMParams>(loaded_normal.params);
    CHECK(normal2.means == normal.means);
    CHECK(normal2.sds == normal.sds);
    CHECK(normal2.reference == 1);
}

TEST_CASE("params files are validated on load") {
    std::string path = temp_path("tamper.json");
    MallowsParams mal{Ranking({0, 1}), 0.8, 0.25, false};
    save_params(path, ParamsFile{mal, {"x", "y"}, 0});

    auto tamper = [&](auto mutate) {
        std::ifstream in(path);
        nlohmann::json j;
        in >> j;
        mutate(j);
        std::string out_path = temp_path("tampered.json");
        std::ofstream out(out_path);
        out << j.dump();
        out.close();
        return out_path;
    };

    CHECK_THROWS_AS(
        load_params(tamper([](nlohmann::json& j) { j["phi"] = 0.4; })),
        ValidationError);
    CHECK_THROWS_AS(
        load_params(tamper([](nlohmann::json& j) { j["p"] = 0.3; })),
        ValidationError);
    CHECK_THROWS_AS(
        load_params(tamper([](nlohmann::json& j) { j["model"] = "other"; })),
        ValidationError);
    CHECK_THROWS_AS(
        load_params(tamper([](nlohmann::json& j) { j.erase("p"); })),
        ParseError);
    CHECK_THROWS_AS(
        load_params(tamper([](nlohmann::json& j) { j["m"] = 5; })),
        ValidationError);
    CHECK_THROWS_AS(load_params(write_file("garbage.json", "{nope")),
                    ParseError);
    CHECK_THROWS_AS(load_params(temp_path("absent.json")), IoError);

    PLParams pl{{0.5, 0.5}};
    save_params(path, ParamsFile{pl, {"x", "y"}, 0});
    CHECK_THROWS_AS(
        load_params(tamper(
            [](nlohmann::json& j) { j["strengths"] = {0.5, 0.1}; })),
        ValidationError);
    CHECK_THROWS_AS(
        load_params(tamper(
            [](nlohmann::json& j) { j["strengths"] = {1.2, -0.2}; })),
        ValidationError);

    NormalRUMParams normal;
    normal.means = {0.0, 0.5};
    normal.sds = {1.0, 2.0};
    save_params(path, ParamsFile{normal, {"x", "y"}, 0});
    CHECK_THROWS_AS(
        load_params(tamper([](nlohmann::json& j) { j["means"][0] = 0.2; })),
        ValidationError);
    CHECK_THROWS_AS(
        load_params(tamper([](nlohmann::json& j) { j["sds"][1] = -1.0; })),
        ValidationError);
}

TEST_CASE("report json carries the figure data") {
    Dataset data = Dataset::from_rankings(
        {Ranking({0, 1, 2}), Ranking({0, 2, 1}), Ranking({1, 0, 2}),
         Ranking({0, 1, 2})});
    std::vector<FitReport> reports =
        compare_models(data, {ModelKind::pl}, 5);
    std::string path = temp_path("report.json");
    write_report_json(path, reports[0], data.labels());
    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    CHECK(j["model"] == "pl");
    CHECK(j["pairwise"].size() == 3);
    CHECK(j["pairwise"][0].size() == 3);
    CHECK(j["modal_ordering"].size() == 3);
    CHECK(j["modal_labels"][0] == "a0");
    CHECK(j["adjacent_probs"].size() == 2);
    CHECK(j["params"]["model"] == "pl");
    CHECK(j["nll"].get<double>() > 0.0);
}

TEST_CASE("synthetic generator hits the designed size") {
    SynthConfig cfg;
    cfg.seed = 83;
    std::vector<std::pair<std::string, Dataset>> levels = synth_generate(cfg);
    REQUIRE(levels.size() == 4);
    int total = 0;
    for (size_t i = 0; i < levels.size(); ++i) {
        CHECK(levels[i].first == "level" + std::to_string(i + 1));
        CHECK(levels[i].second.m() == 4);
        CHECK(levels[i].second.n() == 800);
        total += levels[i].second.n();
    }
    CHECK(total == 3200);
}

TEST_CASE("synthetic generator is deterministic") {
    SynthConfig cfg;
    cfg.levels = 2;
    cfg.sets_per_level = 3;
    cfg.rankings_per_set = 10;
    cfg.seed = 84;
    auto a = synth_generate(cfg);
    auto b = synth_generate(cfg);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].second.rankings() == b[i].second.rankings());
    }
    cfg.seed = 85;
    auto c = synth_generate(cfg);
    CHECK(a[0].second.rankings() != c[0].second.rankings());
}

TEST_CASE("difficulty rises across the generated levels") {
    for (DomainStyle style :
         {DomainStyle::gap_shrinking, DomainStyle::gap_uniform}) {
        SynthConfig cfg;
        cfg.style = style;
        cfg.seed = 86;
        std::vector<std::pair<std::string, Dataset>> levels =
            synth_generate(cfg);
        double previous = 1.0;
        for (const auto& [label, data] : levels) {
            PairwiseMatrix p = empirical_pairwise(data);
            double mean_adjacent = 0.0;
            for (int t = 0; t + 1 < data.m(); ++t) {
                mean_adjacent += p(t, t + 1);
            }
            mean_adjacent /= data.m() - 1;
            CHECK(mean_adjacent < previous);
            CHECK(mean_adjacent > 0.5);
            previous = mean_adjacent;
        }
    }
}

TEST_CASE("synthetic config is validated") {
    SynthConfig cfg;
    cfg.levels = 0;
    CHECK_THROWS_AS(synth_generate(cfg), ValidationError);
    cfg.levels = 2;
    cfg.m = 1;
    CHECK_THROWS_AS(synth_generate(cfg), ValidationError);
    cfg.m = 4;
    cfg.noise_scales = {0.5};
    CHECK_THROWS_AS(synth_generate(cfg), ValidationError);
    cfg.noise_scales = {0.5, -1.0};
    CHECK_THROWS_AS(synth_generate(cfg), ValidationError);
    cfg.noise_scales = {0.5, 2.0};
    CHECK(synth_generate(cfg).size() == 2);
}
