#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rankfit/report.hpp"
#include "rankfit/types.hpp"

namespace rankfit {

/// Parses the strict-order-complete family. Plain shape: an integer m line,
/// m alternative lines ("i: label" or "i,label", 1-based), a summary line of
/// 2 or 3 integers whose first entry is n, then order lines
/// "count: id,id,..." or "count,id,id,..." (most preferred first).
/// Metadata shape: "# NUMBER ALTERNATIVES: m" and optional
/// "# ALTERNATIVE NAME i: label" comments followed by order lines. Other
/// comment and blank lines are ignored.
Dataset parse_soc(const std::string& path);

/// One ranking per line, comma-separated labels, most preferred first. The
/// first row fixes the alternative set; labels are interned in first-seen
/// order.
Dataset parse_csv_rankings(const std::string& path);

/// Inverse of parse_csv_rankings; exact round trip.
void write_csv_rankings(const std::string& path, const Dataset& data);

using AnyParams = std::variant<MallowsParams, PLParams, NormalRUMParams>;

struct ParamsFile {
    AnyParams params;
    std::vector<std::string> labels;
    std::uint64_t seed = 0;
};

/// Plain JSON persistence; doubles survive the round trip bit-exactly.
void save_params(const std::string& path, const ParamsFile& file);
ParamsFile load_params(const std::string& path);

void write_report_json(const std::string& path, const FitReport& report,
                       const std::vector<std::string>& labels);

enum class DomainStyle { gap_shrinking, gap_uniform };

/// Difficulty-graded synthetic rankings from a normal generator. Each level
/// pools sets_per_level independently jittered instances; alternative j of
/// every set is the true j-th best, so the identity ranking is the ground
/// truth. gap_shrinking spaces latent means with gaps decaying along the
/// true order; gap_uniform spaces them evenly. noise_scales (one sd per
/// level, defaulting to a geometric ramp) set the difficulty.
struct SynthConfig {
    DomainStyle style = DomainStyle::gap_shrinking;
    int levels = 4;
    int sets_per_level = 40;
    int rankings_per_set = 20;
    int m = 4;
    std::vector<double> noise_scales;
    std::uint64_t seed = 0;
};

std::vector<std::pair<std::string, Dataset>> synth_generate(
    const SynthConfig& cfg);

}  // namespace rankfit
