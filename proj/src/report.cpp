#include "rankfit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "rankfit/errors.hpp"
#include "rankfit/rng.hpp"

namespace rankfit {

namespace {

Ranking sort_descending(const std::vector<double>& values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return values[static_cast<size_t>(a)] > values[static_cast<size_t>(b)];
    });
    return Ranking(std::move(order));
}

struct DeviationSummary {
    double mean_abs = 0.0;
    double max_abs = 0.0;
};

DeviationSummary summarize_deviation(const PairwiseMatrix& model,
                                     const PairwiseMatrix& empirical,
                                     const Ranking& modal) {
    const PairwiseMatrix pm = permute_matrix(model, modal);
    const PairwiseMatrix pe = permute_matrix(empirical, modal);
    const int m = pm.size();
    DeviationSummary out;
    int pairs = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double d = std::abs(pm(i, j) - pe(i, j));
            out.mean_abs += d;
            out.max_abs = std::max(out.max_abs, d);
            ++pairs;
        }
    }
    if (pairs > 0) out.mean_abs /= pairs;
    return out;
}

FitReport assemble_report(std::string name, double nll, double se,
                          Ranking modal, PairwiseMatrix pairwise,
                          PairwiseMatrix empirical) {
    std::vector<double> deviation = deviation_matrix(pairwise, empirical);
    std::vector<double> adjacent = adjacent_pair_report(pairwise, modal);
    DeviationSummary summary = summarize_deviation(pairwise, empirical, modal);
    return FitReport{std::move(name),
                     nll,
                     se,
                     std::move(modal),
                     std::move(pairwise),
                     std::move(empirical),
                     std::move(deviation),
                     std::move(adjacent),
                     summary.mean_abs,
                     summary.max_abs,
                     std::nullopt,
                     std::nullopt,
                     std::nullopt};
}

std::string csv_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string svg_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct Color {
    int r, g, b;
};

Color lerp(Color a, Color b, double t) {
    t = std::clamp(t, 0.0, 1.0);
    return Color{static_cast<int>(std::lround(a.r + (b.r - a.r) * t)),
                 static_cast<int>(std::lround(a.g + (b.g - a.g) * t)),
                 static_cast<int>(std::lround(a.b + (b.b - a.b) * t))};
}

std::string hex(Color c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

// Sequential: white to steel blue over [0, 1]. Diverging: indigo below
// zero, white at zero, brick above, symmetric range.
std::string cell_color(double v, bool probability, double signed_max) {
    const Color white{255, 255, 255};
    if (probability) {
        return hex(lerp(white, Color{62, 110, 171}, v));
    }
    if (v >= 0.0) return hex(lerp(white, Color{178, 42, 52}, v / signed_max));
    return hex(lerp(white, Color{64, 74, 158}, -v / signed_max));
}

void emit_csv(const std::vector<double>& values, int m, bool probability,
              const Ranking& ordering, const std::vector<std::string>& labels,
              const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (int j = 0; j < m; ++j) {
        out << ',' << labels[static_cast<size_t>(ordering.at(j))];
    }
    out << '\n';
    for (int i = 0; i < m; ++i) {
        out << labels[static_cast<size_t>(ordering.at(i))];
        for (int j = 0; j < m; ++j) {
            out << ',';
            if (probability && j <= i) continue;
            out << csv_cell(values[static_cast<size_t>(ordering.at(i)) * m +
                                   ordering.at(j)]);
        }
        out << '\n';
    }
    if (!out.flush()) throw IoError("cannot write " + path);
}

void emit_svg(const std::vector<double>& values, int m, bool probability,
              const Ranking& ordering, const std::vector<std::string>& labels,
              const std::string& path) {
    const int cell = 64;
    const int margin = 110;
    const int width = margin + m * cell + 10;
    const int height = margin + m * cell + 10;

    double signed_max = 1e-12;
    if (!probability) {
        for (double v : values) signed_max = std::max(signed_max, std::abs(v));
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    for (int i = 0; i < m; ++i) {
        const std::string& label = labels[static_cast<size_t>(ordering.at(i))];
        out << "<text x=\"" << margin - 6 << "\" y=\""
            << margin + i * cell + cell / 2 + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << label << "</text>\n";
        out << "<text x=\"" << margin + i * cell + cell / 2 << "\" y=\""
            << margin - 8
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << label << "</text>\n";
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const int x = margin + j * cell;
            const int y = margin + i * cell;
            if (probability && j <= i) {
                out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                    << "\" height=\"" << cell
                    << "\" fill=\"#f2f2f2\" stroke=\"#cccccc\"/>\n";
                continue;
            }
            const double v =
                values[static_cast<size_t>(ordering.at(i)) * m + ordering.at(j)];
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\""
                << cell_color(v, probability, signed_max)
                << "\" stroke=\"#cccccc\"/>\n";
            out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
                << svg_cell(v) << "</text>\n";
        }
    }
    out << "</svg>\n";
    if (!out.flush()) throw IoError("cannot write " + path);
}

}  // namespace

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::mallows:
            return "mallows";
        case ModelKind::pl:
            return "pl";
        case ModelKind::normal:
        default:
            return "normal";
    }
}

Ranking modal_ordering(const MallowsParams& params) { return params.reference; }

Ranking modal_ordering(const PLParams& params) {
    return sort_descending(params.strengths);
}

Ranking modal_ordering(const NormalRUMParams& params) {
    return sort_descending(params.means);
}

Ranking monte_carlo_modal(const NormalRUMParams& params, int samples,
                          std::uint64_t seed) {
    std::map<Ranking, int> counts;
    for (const Ranking& r : sample_normal_rum(params, samples, seed)) {
        ++counts[r];
    }
    const Ranking* best = nullptr;
    int best_count = -1;
    for (const auto& [ranking, count] : counts) {
        if (count > best_count) {
            best = &ranking;
            best_count = count;
        }
    }
    return *best;
}

std::vector<double> deviation_matrix(const PairwiseMatrix& model,
                                     const PairwiseMatrix& empirical) {
    const int m = model.size();
    if (empirical.size() != m) throw DimensionError("matrix sizes differ");
    std::vector<double> out(static_cast<size_t>(m) * m, 0.0);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            if (j == k) continue;
            out[static_cast<size_t>(j) * m + k] = model(j, k) - empirical(j, k);
        }
    }
    return out;
}

std::vector<double> adjacent_pair_report(const PairwiseMatrix& pairwise,
                                         const Ranking& ordering) {
    if (ordering.size() != pairwise.size()) {
        throw DimensionError("ordering length does not match matrix");
    }
    std::vector<double> out;
    out.reserve(static_cast<size_t>(std::max(ordering.size() - 1, 0)));
    for (int i = 0; i + 1 < ordering.size(); ++i) {
        out.push_back(pairwise(ordering.at(i), ordering.at(i + 1)));
    }
    return out;
}

std::vector<double> adjacent_pair_report(const MallowsParams& params,
                                         const Ranking& ordering) {
    return adjacent_pair_report(mallows_pairwise(params), ordering);
}

std::vector<double> adjacent_pair_report(const PLParams& params,
                                         const Ranking& ordering) {
    return adjacent_pair_report(pl_pairwise(params), ordering);
}

std::vector<double> adjacent_pair_report(const NormalRUMParams& params,
                                         const Ranking& ordering) {
    return adjacent_pair_report(normal_pairwise(params), ordering);
}

std::vector<FitReport> compare_models(const Dataset& data,
                                      const std::vector<ModelKind>& kinds,
                                      std::uint64_t seed,
                                      const CompareOptions& options) {
    if (data.n() < 2) throw ValidationError("model comparison needs n >= 2");
    const PairwiseMatrix empirical = empirical_pairwise(data);

    std::vector<FitReport> reports;
    reports.reserve(kinds.size());
    for (ModelKind kind : kinds) {
        switch (kind) {
            case ModelKind::mallows: {
                MallowsParams params = fit_mallows(data, options.kemeny);
                const double nll = mallows_nll(data, params);
                FitReport report =
                    assemble_report(model_name(kind), nll, 0.0,
                                    modal_ordering(params),
                                    mallows_pairwise(params), empirical);
                report.mallows_params = std::move(params);
                reports.push_back(std::move(report));
                break;
            }
            case ModelKind::pl: {
                PLParams params =
                    fit_pl_mm(data, options.pl_tol, options.pl_max_iter);
                const double nll = pl_nll(data, params);
                FitReport report = assemble_report(
                    model_name(kind), nll, 0.0, modal_ordering(params),
                    pl_pairwise(params), empirical);
                report.pl_params = std::move(params);
                reports.push_back(std::move(report));
                break;
            }
            case ModelKind::normal: {
                MCEMConfig cfg = options.mcem;
                cfg.seed = derive_seed(seed, 1);
                NormalRUMParams params = fit_normal_mcem(data, cfg);
                LoglikEstimate nll = normal_dataset_nll(
                    data, params, options.draws, derive_seed(seed, 2));
                FitReport report = assemble_report(
                    model_name(kind), nll.estimate, nll.std_error,
                    modal_ordering(params), normal_pairwise(params), empirical);
                report.normal_params = std::move(params);
                reports.push_back(std::move(report));
                break;
            }
        }
    }
    return reports;
}

DifficultySweep difficulty_sweep(
    const std::vector<std::pair<std::string, Dataset>>& groups, ModelKind kind,
    std::uint64_t seed, const CompareOptions& options, const Ranking* truth) {
    if (groups.empty()) throw EmptyInputError("difficulty sweep needs groups");
    const int m = groups.front().second.m();
    for (const auto& [label, data] : groups) {
        if (data.m() != m) {
            throw DimensionError("difficulty levels must share the alternative count");
        }
    }
    if (truth && truth->size() != m) {
        throw DimensionError("truth ordering length does not match groups");
    }

    DifficultySweep sweep;
    for (const auto& [label, data] : groups) {
        std::vector<FitReport> reports = compare_models(data, {kind}, seed, options);
        FitReport report = std::move(reports.front());
        const Ranking& display = truth ? *truth : report.modal;
        sweep.adjacent_prob_lines.push_back(
            adjacent_pair_report(report.pairwise, display));
        sweep.levels.push_back(DifficultyLevel{label, std::move(report)});
    }
    return sweep;
}

void heatmap_emit(const std::vector<double>& values, int m, bool probability,
                  const Ranking& ordering,
                  const std::vector<std::string>& labels,
                  const std::string& path, HeatmapFormat format) {
    if (static_cast<int>(values.size()) != m * m) {
        throw DimensionError("matrix size does not match m");
    }
    if (ordering.size() != m || static_cast<int>(labels.size()) != m) {
        throw DimensionError("ordering or labels do not match m");
    }
    if (format == HeatmapFormat::csv) {
        emit_csv(values, m, probability, ordering, labels, path);
    } else {
        emit_svg(values, m, probability, ordering, labels, path);
    }
}

void heatmap_emit(const PairwiseMatrix& mat, const Ranking& ordering,
                  const std::vector<std::string>& labels,
                  const std::string& path, HeatmapFormat format) {
    heatmap_emit(mat.data(), mat.size(), true, ordering, labels, path, format);
}

}  // namespace rankfit
