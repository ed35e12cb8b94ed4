#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rankfit/io.hpp"

using namespace rankfit;
namespace fs = std::filesystem;

namespace {

const std::string kRoot = "/tmp/rankfit_cli_tests";

std::string sandbox(const std::string& name) {
    std::string dir = kRoot + "/" + name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    fs::create_directories(kRoot);
    const std::string out_file = kRoot + "/stdout.txt";
    const std::string err_file = kRoot + "/stderr.txt";
    std::string cmd = std::string(RANKFIT_CLI_PATH) + " " + args + " >" +
                      out_file + " 2>" + err_file;
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    if (out_text) *out_text = slurp(out_file);
    if (err_text) *err_text = slurp(err_file);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

std::string tiny_csv(const std::string& dir) {
    return write_file(dir + "/tiny.csv",
                      "a,b,c\nb,c,a\nc,a,b\na,b,c\na,c,b\nb,a,c\n");
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("") == 1);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("fit") == 1);

    std::string dir = sandbox("usage");
    std::string data = tiny_csv(dir);
    std::string err;
    CHECK(run_cli("fit --model nosuch --data " + data, nullptr, &err) == 1);
    CHECK(err.find("usage error") != std::string::npos);
    CHECK(run_cli("sweep --model all --data " + dir) == 1);
    CHECK(run_cli("synth --style wavy --out " + dir) == 1);
}

TEST_CASE("data errors exit with code 2") {
    std::string dir = sandbox("data_errors");
    std::string err;
    CHECK(run_cli("fit --model pl --data " + dir + "/absent.csv", nullptr,
                  &err) == 2);

    std::string unanimous =
        write_file(dir + "/unanimous.csv", "a,b,c\na,b,c\na,b,c\n");
    CHECK(run_cli("fit --model pl --data " + unanimous, nullptr, &err) == 2);
    CHECK(err.find("never ranked above") != std::string::npos);

    std::string broken = write_file(dir + "/broken.soc", "2\n1: a\n");
    CHECK(run_cli("fit --model mallows --data " + broken) == 2);

    CHECK(run_cli("sweep --model pl --data " + dir + "/nolevels") == 2);
}

TEST_CASE("fit writes a loadable params file") {
    std::string dir = sandbox("fit");
    std::string data = tiny_csv(dir);
    std::string out;
    CHECK(run_cli("fit --model pl --data " + data + " --out " + dir,
                  &out) == 0);
    CHECK(out.find("pl nll") != std::string::npos);
    ParamsFile file = load_params(dir + "/pl_params.json");
    CHECK(file.labels == std::vector<std::string>{"a", "b", "c"});

    CHECK(run_cli("fit --model mallows --data " + data + " --out " + dir) == 0);
    ParamsFile mal = load_params(dir + "/mallows_params.json");
    CHECK(std::holds_alternative<MallowsParams>(mal.params));
}

TEST_CASE("sample draws from a params file") {
    std::string dir = sandbox("sample");
    std::string data = tiny_csv(dir);
    REQUIRE(run_cli("fit --model mallows --data " + data + " --out " + dir) ==
            0);
    CHECK(run_cli("sample --data " + dir + "/mallows_params.json" +
                  " --count 25 --seed 4 --out " + dir) == 0);
    Dataset samples = parse_csv_rankings(dir + "/samples.csv");
    CHECK(samples.n() == 25);
    CHECK(samples.m() == 3);
}

TEST_CASE("matrix emits heatmaps") {
    std::string dir = sandbox("matrix");
    std::string data = tiny_csv(dir);
    CHECK(run_cli("matrix --data " + data + " --out " + dir) == 0);
    std::string csv = slurp_file(dir + "/empirical_pairwise.csv");
    CHECK(csv.substr(0, 1) == ",");
    std::string svg = slurp_file(dir + "/empirical_pairwise.svg");
    CHECK(svg.find("<svg") != std::string::npos);

    CHECK(run_cli("matrix --model pl --data " + data + " --out " + dir) == 0);
    CHECK(fs::exists(dir + "/pl_pairwise.svg"));
}

TEST_CASE("compare writes reports and is deterministic") {
    std::string dir = sandbox("compare");
    std::string data = tiny_csv(dir);
    std::string out1;
    CHECK(run_cli("compare --model mallows,pl --data " + data + " --seed 3" +
                  " --out " + dir + "/one", &out1) == 0);
    for (const char* name :
         {"mallows_report.json", "pl_report.json", "mallows_pairwise.csv",
          "mallows_empirical.svg", "pl_deviation.csv", "pl_pairwise.svg"}) {
        CHECK(fs::exists(dir + "/one/" + name));
    }
    CHECK(out1.find("mallows nll") != std::string::npos);
    CHECK(out1.find("pl nll") != std::string::npos);

    CHECK(run_cli("compare --model mallows,pl --data " + data + " --seed 3" +
                  " --out " + dir + "/two") == 0);
    for (const fs::directory_entry& entry :
         fs::directory_iterator(dir + "/one")) {
        std::string name = entry.path().filename().string();
        CHECK(slurp_file(dir + "/one/" + name) ==
              slurp_file(dir + "/two/" + name));
    }
}

TEST_CASE("synth then sweep produces per-level reports") {
    std::string dir = sandbox("pipeline");
    std::string out;
    CHECK(run_cli("synth --levels 3 --sets 4 --rankings 20 --m 3 --seed 11" +
                  std::string(" --out ") + dir + "/gen", &out) == 0);
    CHECK(out.find("generated 240 rankings") != std::string::npos);
    for (int level = 1; level <= 3; ++level) {
        CHECK(fs::exists(dir + "/gen/level" + std::to_string(level) + ".csv"));
    }
    CHECK(run_cli("sweep --model pl --data " + dir + "/gen --seed 12" +
                  " --out " + dir + "/sw", &out) == 0);
    for (int level = 1; level <= 3; ++level) {
        CHECK(fs::exists(dir + "/sw/level" + std::to_string(level) +
                         "_report.json"));
    }
    CHECK(out.find("level1 nll") != std::string::npos);
    CHECK(out.find("adjacent") != std::string::npos);
}

TEST_CASE("config file overrides flags") {
    std::string dir = sandbox("config");
    std::string cfg = write_file(dir + "/run.cfg", "# comment\nseed = 2\n");
    CHECK(run_cli("synth --levels 1 --sets 2 --rankings 5 --m 3 --seed 1" +
                  std::string(" --config ") + cfg + " --out " + dir +
                  "/from_config") == 0);
    CHECK(run_cli("synth --levels 1 --sets 2 --rankings 5 --m 3 --seed 2" +
                  std::string(" --out ") + dir + "/from_flag") == 0);
    CHECK(slurp_file(dir + "/from_config/level1.csv") ==
          slurp_file(dir + "/from_flag/level1.csv"));

    std::string bad = write_file(dir + "/bad.cfg", "nonsense = 1\n");
    CHECK(run_cli("synth --config " + bad + " --out " + dir) == 1);
    std::string malformed = write_file(dir + "/broken.cfg", "just words\n");
    CHECK(run_cli("synth --config " + malformed + " --out " + dir) == 1);
}
