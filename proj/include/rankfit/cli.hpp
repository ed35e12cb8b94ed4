#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankfit/normal_rum.hpp"

namespace rankfit {

/// Settings shared by the subcommands. Config-file keys (`key = value`
/// lines) map onto these fields by name and override command-line flags.
struct RunConfig {
    std::string model;
    std::string data;
    std::string format;  // "soc", "csv", or "" to infer from the extension
    std::string out = ".";
    std::uint64_t seed = 0;
    int draws = 5000;
    double tol = 1e-9;
    int count = 100;          // sample subcommand
    std::string kemeny = "auto";
    MCEMConfig mcem;          // gibbs_samples, burn_in, ... config keys
    std::string style = "gap-shrinking";
    int levels = 4;
    int sets = 40;
    int rankings = 20;
    int m = 4;
    std::vector<double> noise_scales;
};

/// Entry point behind main(). Exit codes: 0 success, 1 usage, 2 data or
/// validation failure, 3 numerical failure.
int cli_main(int argc, char** argv);

}  // namespace rankfit
