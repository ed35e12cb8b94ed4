#include "rankfit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "rankfit/errors.hpp"
#include "rankfit/rng.hpp"
#include "rankfit/stats.hpp"

namespace rankfit {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream stream(s);
    std::string field;
    while (std::getline(stream, field, sep)) out.push_back(field);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

bool parse_ll(const std::string& raw, long long& value) {
    const std::string s = trim(raw);
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end;
}

struct Line {
    int number;
    std::string text;
};

std::vector<Line> significant_lines(std::istream& in,
                                    std::vector<Line>* comments = nullptr) {
    std::vector<Line> lines;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        std::string text = trim(raw);
        if (text.empty()) continue;
        if (text[0] == '#') {
            if (comments) comments->push_back(Line{number, text});
            continue;
        }
        lines.push_back(Line{number, std::move(text)});
    }
    return lines;
}

// "count: id,id,..." or "count,id,id,...", ids 1-based.
std::pair<long long, std::vector<int>> parse_order_line(const Line& line, int m) {
    std::string count_part;
    std::string ids_part;
    const size_t colon = line.text.find(':');
    if (colon != std::string::npos) {
        count_part = line.text.substr(0, colon);
        ids_part = line.text.substr(colon + 1);
    } else {
        const size_t comma = line.text.find(',');
        if (comma == std::string::npos) {
            throw ParseError("expected an order line", line.number);
        }
        count_part = line.text.substr(0, comma);
        ids_part = line.text.substr(comma + 1);
    }

    long long count = 0;
    if (!parse_ll(count_part, count) || count < 1) {
        throw ParseError("order line needs a positive count", line.number);
    }
    std::vector<int> order;
    for (const std::string& field : split(ids_part, ',')) {
        long long id = 0;
        if (!parse_ll(field, id)) {
            throw ParseError("order line has a malformed id", line.number);
        }
        if (id < 1 || id > m) {
            throw ValidationError("alternative id out of range on line " +
                                  std::to_string(line.number));
        }
        order.push_back(static_cast<int>(id - 1));
    }
    return {count, std::move(order)};
}

Dataset build_dataset(std::vector<std::string> labels,
                      const std::vector<Line>& order_lines, int m,
                      long long declared_n) {
    if (order_lines.empty()) throw EmptyInputError("no rankings in file");
    std::vector<Ranking> rankings;
    long long total = 0;
    for (const Line& line : order_lines) {
        auto [count, order] = parse_order_line(line, m);
        Ranking ranking = [&] {
            try {
                return Ranking(std::move(order));
            } catch (const ValidationError& e) {
                throw ValidationError(std::string(e.what()) + " on line " +
                                      std::to_string(line.number));
            }
        }();
        if (ranking.size() != m) {
            throw ValidationError("order length does not match m on line " +
                                  std::to_string(line.number));
        }
        total += count;
        if (total > 10000000) {
            throw ValidationError("ranking multiplicities exceed supported size");
        }
        for (long long c = 0; c < count; ++c) rankings.push_back(ranking);
    }
    if (declared_n >= 0 && declared_n != total) {
        throw ValidationError("summary count " + std::to_string(declared_n) +
                              " does not match " + std::to_string(total) +
                              " parsed rankings");
    }
    return Dataset(std::move(labels), std::move(rankings));
}

}  // namespace

Dataset parse_soc(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::vector<Line> comments;
    std::vector<Line> lines = significant_lines(in, &comments);

    // Metadata shape: alternative count and names live in the comments.
    int meta_m = -1;
    std::unordered_map<int, std::string> meta_names;
    for (const Line& c : comments) {
        const std::string body = trim(c.text.substr(1));
        const std::string count_key = "NUMBER ALTERNATIVES:";
        const std::string name_key = "ALTERNATIVE NAME";
        if (body.rfind(count_key, 0) == 0) {
            long long m = 0;
            if (!parse_ll(body.substr(count_key.size()), m) || m < 1 || m > 10000) {
                throw ParseError("bad alternative count", c.number);
            }
            meta_m = static_cast<int>(m);
        } else if (body.rfind(name_key, 0) == 0) {
            const size_t colon = body.find(':', name_key.size());
            long long idx = 0;
            if (colon == std::string::npos ||
                !parse_ll(body.substr(name_key.size(), colon - name_key.size()),
                          idx)) {
                throw ParseError("bad alternative name entry", c.number);
            }
            meta_names[static_cast<int>(idx)] = trim(body.substr(colon + 1));
        }
    }

    if (meta_m > 0) {
        std::vector<std::string> labels;
        labels.reserve(static_cast<size_t>(meta_m));
        for (int i = 1; i <= meta_m; ++i) {
            auto it = meta_names.find(i);
            labels.push_back(it != meta_names.end() ? it->second
                                                    : "a" + std::to_string(i - 1));
        }
        return build_dataset(std::move(labels), lines, meta_m, -1);
    }

    // Plain shape: m, m alternative lines, a 2-3 integer summary, orders.
    if (lines.empty()) throw EmptyInputError("no rankings in file");
    long long m_ll = 0;
    if (!parse_ll(lines[0].text, m_ll) || m_ll < 1 || m_ll > 10000) {
        throw ParseError("expected the alternative count", lines[0].number);
    }
    const int m = static_cast<int>(m_ll);
    if (static_cast<int>(lines.size()) < m + 2) {
        throw ParseError("file ends before the orders section",
                         lines.back().number);
    }

    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(m));
    for (int i = 1; i <= m; ++i) {
        const Line& line = lines[static_cast<size_t>(i)];
        size_t sep = line.text.find_first_of(":,");
        long long idx = 0;
        if (sep == std::string::npos || !parse_ll(line.text.substr(0, sep), idx) ||
            idx != i) {
            throw ParseError("expected alternative " + std::to_string(i),
                             line.number);
        }
        std::string label = trim(line.text.substr(sep + 1));
        if (label.empty()) label = "a" + std::to_string(i - 1);
        labels.push_back(std::move(label));
    }

    const Line& summary = lines[static_cast<size_t>(m) + 1];
    std::vector<std::string> fields = split(summary.text, ',');
    if (fields.size() < 2 || fields.size() > 3) {
        throw ParseError("expected the summary line", summary.number);
    }
    long long declared_n = 0;
    for (size_t f = 0; f < fields.size(); ++f) {
        long long v = 0;
        if (!parse_ll(fields[f], v) || v < 0) {
            throw ParseError("expected the summary line", summary.number);
        }
        if (f == 0) declared_n = v;
    }

    std::vector<Line> orders(lines.begin() + m + 2, lines.end());
    return build_dataset(std::move(labels), orders, m, declared_n);
}

Dataset parse_csv_rankings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::vector<Line> lines = significant_lines(in);
    if (lines.empty()) throw EmptyInputError("no rankings in file");

    std::vector<std::string> labels;
    std::unordered_map<std::string, int> index_of;
    std::vector<Ranking> rankings;
    for (const Line& line : lines) {
        std::vector<std::string> fields = split(line.text, ',');
        std::vector<int> order;
        order.reserve(fields.size());
        for (std::string& field : fields) {
            std::string label = trim(field);
            if (label.empty()) {
                throw ParseError("empty label", line.number);
            }
            auto it = index_of.find(label);
            if (it == index_of.end()) {
                if (!rankings.empty()) {
                    throw ParseError("unknown label '" + label + "'", line.number);
                }
                it = index_of.emplace(label, static_cast<int>(labels.size())).first;
                labels.push_back(label);
            }
            order.push_back(it->second);
        }
        if (!rankings.empty() && order.size() != labels.size()) {
            throw ParseError("row length does not match the first row",
                             line.number);
        }
        std::vector<bool> seen(labels.size(), false);
        for (int j : order) {
            if (seen[static_cast<size_t>(j)]) {
                throw ParseError("duplicate label '" + labels[static_cast<size_t>(j)] + "'",
                                 line.number);
            }
            seen[static_cast<size_t>(j)] = true;
        }
        rankings.emplace_back(std::move(order));
    }
    return Dataset(std::move(labels), std::move(rankings));
}

void write_csv_rankings(const std::string& path, const Dataset& data) {
    for (const std::string& label : data.labels()) {
        if (label.find_first_of(",\n\r") != std::string::npos) {
            throw ValidationError("label '" + label + "' cannot be written as CSV");
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (const Ranking& r : data.rankings()) {
        for (int t = 0; t < r.size(); ++t) {
            if (t > 0) out << ',';
            out << data.labels()[static_cast<size_t>(r.at(t))];
        }
        out << '\n';
    }
    if (!out.flush()) throw IoError("cannot write " + path);
}

namespace {

json params_to_json(const AnyParams& params) {
    json j;
    if (const auto* mal = std::get_if<MallowsParams>(&params)) {
        j["model"] = "mallows";
        j["reference"] = mal->reference.order();
        j["p"] = mal->p;
        j["phi"] = mal->phi;
        j["clamped"] = mal->clamped;
    } else if (const auto* pl = std::get_if<PLParams>(&params)) {
        j["model"] = "pl";
        j["strengths"] = pl->strengths;
    } else {
        const auto& normal = std::get<NormalRUMParams>(params);
        j["model"] = "normal";
        j["means"] = normal.means;
        j["sds"] = normal.sds;
        j["reference"] = normal.reference;
        j["sd_floored"] = normal.sd_floored;
    }
    return j;
}

AnyParams params_from_json(const json& j, int m) {
    const std::string model = j.at("model").get<std::string>();
    if (model == "mallows") {
        MallowsParams params{Ranking(j.at("reference").get<std::vector<int>>()),
                             j.at("p").get<double>(), j.at("phi").get<double>(),
                             j.value("clamped", false)};
        if (params.reference.size() != m) {
            throw ValidationError("reference length does not match m");
        }
        if (!(params.p > 0.5) || params.p > 1.0) {
            throw ValidationError("p must lie in (0.5, 1]");
        }
        if (std::abs(params.phi - (1.0 - params.p) / params.p) > 1e-9) {
            throw ValidationError("phi does not match (1 - p) / p");
        }
        return params;
    }
    if (model == "pl") {
        PLParams params{j.at("strengths").get<std::vector<double>>()};
        if (static_cast<int>(params.strengths.size()) != m) {
            throw ValidationError("strength count does not match m");
        }
        double total = 0.0;
        for (double g : params.strengths) {
            if (!(g > 0.0)) throw ValidationError("strengths must be positive");
            total += g;
        }
        if (std::abs(total - 1.0) > 1e-6) {
            throw ValidationError("strengths must sum to 1");
        }
        for (double& g : params.strengths) g /= total;
        return params;
    }
    if (model == "normal") {
        NormalRUMParams params;
        params.means = j.at("means").get<std::vector<double>>();
        params.sds = j.at("sds").get<std::vector<double>>();
        params.reference = j.at("reference").get<int>();
        params.sd_floored = j.value("sd_floored", false);
        if (static_cast<int>(params.means.size()) != m ||
            static_cast<int>(params.sds.size()) != m) {
            throw ValidationError("parameter counts do not match m");
        }
        for (double sd : params.sds) {
            if (!(sd > 0.0)) throw ValidationError("sds must be positive");
        }
        if (params.reference < 0 || params.reference >= m) {
            throw ValidationError("reference index out of range");
        }
        if (std::abs(params.means[static_cast<size_t>(params.reference)]) > 1e-9 ||
            std::abs(params.sds[static_cast<size_t>(params.reference)] - 1.0) > 1e-9) {
            throw ValidationError("reference alternative must be pinned to (0, 1)");
        }
        params.means[static_cast<size_t>(params.reference)] = 0.0;
        params.sds[static_cast<size_t>(params.reference)] = 1.0;
        return params;
    }
    throw ValidationError("unknown model '" + model + "'");
}

}  // namespace

void save_params(const std::string& path, const ParamsFile& file) {
    json j = params_to_json(file.params);
    j["m"] = file.labels.size();
    j["labels"] = file.labels;
    j["seed"] = file.seed;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out.flush()) throw IoError("cannot write " + path);
}

ParamsFile load_params(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        ParamsFile file{PLParams{}, {}, 0};
        file.labels = j.at("labels").get<std::vector<std::string>>();
        file.seed = j.value("seed", std::uint64_t{0});
        const int m = j.at("m").get<int>();
        if (static_cast<int>(file.labels.size()) != m) {
            throw ValidationError("label count does not match m");
        }
        file.params = params_from_json(j, m);
        return file;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_report_json(const std::string& path, const FitReport& report,
                       const std::vector<std::string>& labels) {
    const int m = report.pairwise.size();
    json j;
    j["model"] = report.model;
    j["nll"] = report.nll;
    j["nll_std_error"] = report.nll_std_error;
    j["modal_ordering"] = report.modal.order();
    json modal_labels = json::array();
    for (int t = 0; t < m; ++t) {
        modal_labels.push_back(labels[static_cast<size_t>(report.modal.at(t))]);
    }
    j["modal_labels"] = modal_labels;
    j["adjacent_probs"] = report.adjacent_probs;
    j["mean_abs_deviation"] = report.mean_abs_deviation;
    j["max_abs_deviation"] = report.max_abs_deviation;

    auto matrix = [m](const std::vector<double>& values) {
        json rows = json::array();
        for (int i = 0; i < m; ++i) {
            json row = json::array();
            for (int k = 0; k < m; ++k) {
                row.push_back(values[static_cast<size_t>(i) * m + k]);
            }
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["pairwise"] = matrix(report.pairwise.data());
    j["empirical"] = matrix(report.empirical.data());
    j["deviation"] = matrix(report.deviation);
    if (report.mallows_params) j["params"] = params_to_json(*report.mallows_params);
    if (report.pl_params) j["params"] = params_to_json(*report.pl_params);
    if (report.normal_params) j["params"] = params_to_json(*report.normal_params);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out.flush()) throw IoError("cannot write " + path);
}

std::vector<std::pair<std::string, Dataset>> synth_generate(
    const SynthConfig& cfg) {
    if (cfg.levels < 1 || cfg.sets_per_level < 1 || cfg.rankings_per_set < 1) {
        throw ValidationError("synth counts must be >= 1");
    }
    if (cfg.m < 2) throw ValidationError("synth needs m >= 2");
    if (!cfg.noise_scales.empty() &&
        static_cast<int>(cfg.noise_scales.size()) != cfg.levels) {
        throw ValidationError("need one noise scale per level");
    }
    for (double s : cfg.noise_scales) {
        if (!(s > 0.0)) throw ValidationError("noise scales must be positive");
    }

    std::vector<double> scales = cfg.noise_scales;
    if (scales.empty()) {
        scales.resize(static_cast<size_t>(cfg.levels));
        for (int level = 0; level < cfg.levels; ++level) {
            scales[static_cast<size_t>(level)] = 0.55 * std::pow(2.2, level);
        }
    }

    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(cfg.m));
    for (int j = 0; j < cfg.m; ++j) labels.push_back("a" + std::to_string(j));

    std::vector<std::pair<std::string, Dataset>> out;
    out.reserve(static_cast<size_t>(cfg.levels));
    for (int level = 0; level < cfg.levels; ++level) {
        std::vector<Ranking> pooled;
        pooled.reserve(static_cast<size_t>(cfg.sets_per_level) *
                       cfg.rankings_per_set);
        for (int set = 0; set < cfg.sets_per_level; ++set) {
            Rng jitter = Rng::stream(cfg.seed, static_cast<std::uint64_t>(level),
                                     static_cast<std::uint64_t>(set), 1);
            NormalRUMParams truth;
            truth.means.assign(static_cast<size_t>(cfg.m), 0.0);
            truth.sds.assign(static_cast<size_t>(cfg.m),
                             scales[static_cast<size_t>(level)]);
            for (int j = cfg.m - 2; j >= 0; --j) {
                double gap = cfg.style == DomainStyle::gap_shrinking
                                 ? 2.0 * (cfg.m - 1 - j) / cfg.m
                                 : 1.0;
                gap *= 0.8 + 0.4 * jitter.uniform();
                truth.means[static_cast<size_t>(j)] =
                    truth.means[static_cast<size_t>(j) + 1] + gap;
            }
            std::vector<Ranking> sampled = sample_normal_rum(
                truth, cfg.rankings_per_set,
                derive_seed(cfg.seed, static_cast<std::uint64_t>(level),
                            static_cast<std::uint64_t>(set)));
            for (Ranking& r : sampled) pooled.push_back(std::move(r));
        }
        out.emplace_back("level" + std::to_string(level + 1),
                         Dataset(labels, std::move(pooled)));
    }
    return out;
}

}  // namespace rankfit
