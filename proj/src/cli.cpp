#include "rankfit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankfit/errors.hpp"
#include "rankfit/io.hpp"
#include "rankfit/report.hpp"
#include "rankfit/rng.hpp"

namespace rankfit {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw UsageError("bad value for " + what + ": '" + s + "'");
    }
    return v;
}

int to_int(const std::string& s, const std::string& what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw UsageError("bad value for " + what + ": '" + s + "'");
    }
    return v;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad value for " + what + ": '" + s + "'");
    }
}

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "model") cfg.model = value;
    else if (key == "data") cfg.data = value;
    else if (key == "format") cfg.format = value;
    else if (key == "out") cfg.out = value;
    else if (key == "seed") cfg.seed = to_u64(value, key);
    else if (key == "draws") cfg.draws = to_int(value, key);
    else if (key == "tol") cfg.tol = to_double(value, key);
    else if (key == "count") cfg.count = to_int(value, key);
    else if (key == "kemeny") cfg.kemeny = value;
    else if (key == "style") cfg.style = value;
    else if (key == "levels") cfg.levels = to_int(value, key);
    else if (key == "sets") cfg.sets = to_int(value, key);
    else if (key == "rankings") cfg.rankings = to_int(value, key);
    else if (key == "m") cfg.m = to_int(value, key);
    else if (key == "gibbs_samples") cfg.mcem.gibbs_samples = to_int(value, key);
    else if (key == "gibbs_growth") cfg.mcem.gibbs_growth = to_double(value, key);
    else if (key == "gibbs_cap") cfg.mcem.gibbs_cap = to_int(value, key);
    else if (key == "burn_in") cfg.mcem.burn_in = to_int(value, key);
    else if (key == "max_em_iters") cfg.mcem.max_em_iters = to_int(value, key);
    else if (key == "rel_tol") cfg.mcem.rel_tol = to_double(value, key);
    else if (key == "noise_scales") {
        cfg.noise_scales.clear();
        std::stringstream stream(value);
        std::string field;
        while (std::getline(stream, field, ',')) {
            cfg.noise_scales.push_back(to_double(trim(field), key));
        }
    } else {
        throw UsageError("unknown config key '" + key + "'");
    }
}

void apply_config(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(number) +
                             " is not key = value");
        }
        try {
            apply_config_entry(cfg, trim(line.substr(0, eq)),
                               trim(line.substr(eq + 1)));
        } catch (const UsageError& e) {
            throw UsageError(std::string(e.what()) + " (config line " +
                             std::to_string(number) + ")");
        }
    }
}

KemenyMethod kemeny_method(const RunConfig& cfg) {
    if (cfg.kemeny == "exact") return KemenyMethod::exact;
    if (cfg.kemeny == "local-search") return KemenyMethod::local_search;
    if (cfg.kemeny == "auto") return KemenyMethod::auto_choose;
    throw UsageError("unknown kemeny method '" + cfg.kemeny + "'");
}

ModelKind model_kind(const std::string& name) {
    if (name == "mallows") return ModelKind::mallows;
    if (name == "pl") return ModelKind::pl;
    if (name == "normal") return ModelKind::normal;
    throw UsageError("unknown model '" + name + "'");
}

std::vector<ModelKind> model_list(const std::string& names) {
    if (names == "all") {
        return {ModelKind::mallows, ModelKind::pl, ModelKind::normal};
    }
    std::vector<ModelKind> kinds;
    std::stringstream stream(names);
    std::string field;
    while (std::getline(stream, field, ',')) {
        kinds.push_back(model_kind(trim(field)));
    }
    if (kinds.empty()) throw UsageError("no model given");
    return kinds;
}

Dataset load_dataset(const RunConfig& cfg) {
    if (cfg.data.empty()) throw UsageError("--data is required");
    std::string format = cfg.format;
    if (format.empty()) {
        format = fs::path(cfg.data).extension() == ".csv" ? "csv" : "soc";
    }
    if (format == "soc") return parse_soc(cfg.data);
    if (format == "csv") return parse_csv_rankings(cfg.data);
    throw UsageError("unknown format '" + format + "'");
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) throw IoError("cannot create " + cfg.out + ": " + ec.message());
    return (fs::path(cfg.out) / name).string();
}

CompareOptions compare_options(const RunConfig& cfg) {
    CompareOptions options;
    options.draws = cfg.draws;
    options.kemeny = kemeny_method(cfg);
    options.pl_tol = cfg.tol;
    options.mcem = cfg.mcem;
    return options;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string join_labels(const Ranking& ordering,
                        const std::vector<std::string>& labels) {
    std::string out;
    for (int t = 0; t < ordering.size(); ++t) {
        if (t > 0) out += " > ";
        out += labels[static_cast<size_t>(ordering.at(t))];
    }
    return out;
}

void emit_heatmaps(const RunConfig& cfg, const FitReport& report,
                   const std::vector<std::string>& labels) {
    const std::string base = report.model;
    heatmap_emit(report.pairwise, report.modal, labels,
                 out_path(cfg, base + "_pairwise.csv"), HeatmapFormat::csv);
    heatmap_emit(report.pairwise, report.modal, labels,
                 out_path(cfg, base + "_pairwise.svg"), HeatmapFormat::svg);
    heatmap_emit(report.empirical, report.modal, labels,
                 out_path(cfg, base + "_empirical.csv"), HeatmapFormat::csv);
    heatmap_emit(report.empirical, report.modal, labels,
                 out_path(cfg, base + "_empirical.svg"), HeatmapFormat::svg);
    heatmap_emit(report.deviation, report.pairwise.size(), false, report.modal,
                 labels, out_path(cfg, base + "_deviation.csv"),
                 HeatmapFormat::csv);
    heatmap_emit(report.deviation, report.pairwise.size(), false, report.modal,
                 labels, out_path(cfg, base + "_deviation.svg"),
                 HeatmapFormat::svg);
}

void print_report_line(const FitReport& report,
                       const std::vector<std::string>& labels) {
    std::cout << report.model << " nll " << fmt(report.nll);
    if (report.nll_std_error > 0.0) {
        std::cout << " se " << fmt(report.nll_std_error);
    }
    std::cout << " mean_abs_dev " << fmt(report.mean_abs_deviation) << "\n"
              << report.model << " modal " << join_labels(report.modal, labels)
              << "\n";
}

int run_fit(const RunConfig& cfg) {
    if (cfg.model.empty()) throw UsageError("fit needs --model");
    const ModelKind kind = model_kind(cfg.model);
    const Dataset data = load_dataset(cfg);
    ParamsFile file{PLParams{}, data.labels(), cfg.seed};
    if (kind == ModelKind::mallows) {
        MallowsParams params = fit_mallows(data, kemeny_method(cfg));
        std::cout << "mallows nll " << fmt(mallows_nll(data, params)) << " p "
                  << fmt(params.p) << "\n";
        file.params = params;
    } else if (kind == ModelKind::pl) {
        PLParams params = fit_pl_mm(data, cfg.tol);
        std::cout << "pl nll " << fmt(pl_nll(data, params)) << "\n";
        file.params = params;
    } else {
        MCEMConfig mcem = cfg.mcem;
        mcem.seed = derive_seed(cfg.seed, 1);
        NormalRUMParams params = fit_normal_mcem(data, mcem);
        LoglikEstimate nll =
            normal_dataset_nll(data, params, cfg.draws, derive_seed(cfg.seed, 2));
        std::cout << "normal nll " << fmt(nll.estimate) << " se "
                  << fmt(nll.std_error) << "\n";
        file.params = params;
    }
    const std::string path = out_path(cfg, cfg.model + "_params.json");
    save_params(path, file);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int run_compare(const RunConfig& cfg) {
    const std::string names = cfg.model.empty() ? "all" : cfg.model;
    const Dataset data = load_dataset(cfg);
    std::vector<FitReport> reports =
        compare_models(data, model_list(names), cfg.seed, compare_options(cfg));
    for (const FitReport& report : reports) {
        print_report_line(report, data.labels());
        const std::string path = out_path(cfg, report.model + "_report.json");
        write_report_json(path, report, data.labels());
        emit_heatmaps(cfg, report, data.labels());
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

int run_sample(const RunConfig& cfg) {
    if (cfg.data.empty()) throw UsageError("sample needs --data PARAMS_FILE");
    if (cfg.count < 1) throw UsageError("--count must be >= 1");
    const ParamsFile file = load_params(cfg.data);
    std::vector<Ranking> samples;
    if (const auto* mal = std::get_if<MallowsParams>(&file.params)) {
        samples = sample_mallows(*mal, cfg.count, cfg.seed);
    } else if (const auto* pl = std::get_if<PLParams>(&file.params)) {
        samples = sample_pl(*pl, cfg.count, cfg.seed);
    } else {
        samples = sample_normal_rum(std::get<NormalRUMParams>(file.params),
                                    cfg.count, cfg.seed);
    }
    const std::string path = out_path(cfg, "samples.csv");
    write_csv_rankings(path, Dataset(file.labels, std::move(samples)));
    std::cout << "wrote " << path << " (" << cfg.count << " rankings)\n";
    return 0;
}

int run_matrix(const RunConfig& cfg) {
    const std::string which = cfg.model.empty() ? "empirical" : cfg.model;
    const Dataset data = load_dataset(cfg);
    PairwiseMatrix matrix(data.m());
    Ranking ordering = Ranking::identity(data.m());
    if (which == "empirical") {
        matrix = empirical_pairwise(data);
        ordering = kemeny_rank(data, kemeny_method(cfg));
    } else if (which == "mallows") {
        MallowsParams params = fit_mallows(data, kemeny_method(cfg));
        matrix = mallows_pairwise(params);
        ordering = modal_ordering(params);
    } else if (which == "pl") {
        PLParams params = fit_pl_mm(data, cfg.tol);
        matrix = pl_pairwise(params);
        ordering = modal_ordering(params);
    } else if (which == "normal") {
        MCEMConfig mcem = cfg.mcem;
        mcem.seed = derive_seed(cfg.seed, 1);
        NormalRUMParams params = fit_normal_mcem(data, mcem);
        matrix = normal_pairwise(params);
        ordering = modal_ordering(params);
    } else {
        throw UsageError("unknown matrix source '" + which + "'");
    }
    const std::string csv = out_path(cfg, which + "_pairwise.csv");
    const std::string svg = out_path(cfg, which + "_pairwise.svg");
    heatmap_emit(matrix, ordering, data.labels(), csv, HeatmapFormat::csv);
    heatmap_emit(matrix, ordering, data.labels(), svg, HeatmapFormat::svg);
    std::cout << "wrote " << csv << "\nwrote " << svg << "\n";
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    if (cfg.data.empty()) throw UsageError("sweep needs --data DIR");
    if (cfg.model == "all") throw UsageError("sweep needs a single model");
    const std::string ext = cfg.format == "soc" ? ".soc" : ".csv";
    std::vector<fs::path> files;
    std::error_code ec;
    for (fs::directory_iterator it(cfg.data, ec), end; !ec && it != end;
         it.increment(ec)) {
        if (it->is_regular_file() && it->path().extension() == ext) {
            files.push_back(it->path());
        }
    }
    if (ec) throw IoError("cannot list " + cfg.data + ": " + ec.message());
    std::sort(files.begin(), files.end());
    std::vector<std::pair<std::string, Dataset>> groups;
    for (const fs::path& file : files) {
        Dataset level = ext == ".soc" ? parse_soc(file.string())
                                      : parse_csv_rankings(file.string());
        groups.emplace_back(file.stem().string(), std::move(level));
    }
    if (groups.empty()) {
        throw EmptyInputError("no " + ext + " level files in " + cfg.data);
    }

    const ModelKind kind =
        model_kind(cfg.model.empty() ? "normal" : cfg.model);
    DifficultySweep sweep =
        difficulty_sweep(groups, kind, cfg.seed, compare_options(cfg));
    for (size_t level = 0; level < sweep.levels.size(); ++level) {
        const DifficultyLevel& entry = sweep.levels[level];
        const std::vector<std::string>& labels =
            groups[level].second.labels();
        const std::string path = out_path(cfg, entry.label + "_report.json");
        write_report_json(path, entry.report, labels);
        std::cout << entry.label << " nll " << fmt(entry.report.nll)
                  << " adjacent";
        for (double p : sweep.adjacent_prob_lines[level]) {
            std::cout << ' ' << fmt(p);
        }
        std::cout << "\nwrote " << path << "\n";
    }
    return 0;
}

int run_synth(const RunConfig& cfg) {
    SynthConfig synth;
    if (cfg.style == "gap-shrinking" || cfg.style == "puzzle") {
        synth.style = DomainStyle::gap_shrinking;
    } else if (cfg.style == "gap-uniform" || cfg.style == "dots") {
        synth.style = DomainStyle::gap_uniform;
    } else {
        throw UsageError("unknown style '" + cfg.style + "'");
    }
    synth.levels = cfg.levels;
    synth.sets_per_level = cfg.sets;
    synth.rankings_per_set = cfg.rankings;
    synth.m = cfg.m;
    synth.noise_scales = cfg.noise_scales;
    synth.seed = cfg.seed;
    int total = 0;
    for (const auto& [label, level] : synth_generate(synth)) {
        const std::string path = out_path(cfg, label + ".csv");
        write_csv_rankings(path, level);
        total += level.n();
        std::cout << "wrote " << path << " (" << level.n() << " rankings)\n";
    }
    std::cout << "generated " << total << " rankings\n";
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"rankfit: Mallows, Plackett-Luce and Normal RUM fitting"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    app.add_option("--model", cfg.model,
                   "mallows, pl, normal; compare also takes all or a list");
    app.add_option("--data", cfg.data, "input file (sweep: directory)");
    app.add_option("--format", cfg.format, "soc or csv (default: by extension)");
    app.add_option("--seed", cfg.seed, "master seed (default 0)");
    app.add_option("--draws", cfg.draws, "Monte Carlo draws for the normal NLL");
    app.add_option("--tol", cfg.tol, "Plackett-Luce convergence tolerance");
    app.add_option("--out", cfg.out, "output directory (default .)");
    app.add_option("--config", config_path,
                   "key = value file overriding the flags");
    app.add_option("--kemeny", cfg.kemeny, "exact, local-search or auto");

    CLI::App* fit = app.add_subcommand("fit", "fit one model, write params");
    CLI::App* compare =
        app.add_subcommand("compare", "fit models, write reports and heatmaps");
    CLI::App* sample =
        app.add_subcommand("sample", "draw rankings from a params file");
    sample->add_option("--count", cfg.count, "rankings to draw (default 100)");
    CLI::App* matrix =
        app.add_subcommand("matrix", "emit an empirical or model heatmap");
    CLI::App* sweep =
        app.add_subcommand("sweep", "difficulty sweep over level files");
    CLI::App* synth =
        app.add_subcommand("synth", "generate difficulty-graded rankings");
    synth->add_option("--style", cfg.style, "gap-shrinking or gap-uniform");
    synth->add_option("--levels", cfg.levels, "difficulty levels (default 4)");
    synth->add_option("--sets", cfg.sets, "sets per level (default 40)");
    synth->add_option("--rankings", cfg.rankings,
                      "rankings per set (default 20)");
    synth->add_option("--m", cfg.m, "alternatives per set (default 4)");
    for (CLI::App* sub : {fit, compare, sample, matrix, sweep, synth}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!config_path.empty()) apply_config(config_path, cfg);
        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "fit") return run_fit(cfg);
        if (command == "compare") return run_compare(cfg);
        if (command == "sample") return run_sample(cfg);
        if (command == "matrix") return run_matrix(cfg);
        if (command == "sweep") return run_sweep(cfg);
        return run_synth(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace rankfit
