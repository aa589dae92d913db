#include "egab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "egab/dataset.hpp"
#include "egab/errors.hpp"
#include "egab/report.hpp"
#include "egab/tuning.hpp"

namespace egab::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DataOptions {
    bool prices = false;
};

struct OutputOptions {
    std::string output;
    std::string format = "json";
    bool series = false;
};

struct RunOptions {
    std::string dataset;
    std::string strategy;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> eta;
    std::optional<double> epsilon;
    std::optional<std::size_t> window;
    std::optional<std::string> preprocess;
    std::optional<int> direction;
    double cost_rate = 0.0;
    double split = 0.125;
    unsigned threads = 0;
};

struct CompareOptions {
    std::vector<std::string> datasets;
    std::vector<std::string> strategies;
    std::vector<double> cost_rates;
    double split = 0.125;
    unsigned threads = 0;
};

struct PlotOptions {
    std::string report;
    std::string output_dir = ".";
};

struct SyntheticOptions {
    std::size_t assets = 10;
    std::size_t periods = 500;
    std::uint64_t seed = 1;
    std::string output;
};

StrategyFamily family_or_usage(const std::string& name) {
    try {
        return parse_family(name);
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
}

Preprocess preprocess_or_usage(const std::string& name) {
    try {
        return parse_preprocess(name);
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
}

CostModel cost_or_usage(double rate) {
    try {
        return CostModel(rate);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

MarketData load(const std::string& path, const DataOptions& data) {
    return data.prices ? load_prices(path) : load_dataset(path);
}

std::string dataset_id(const std::string& path) { return fs::path(path).stem().string(); }

void emit(const std::string& text, const OutputOptions& opts, std::ostream& out) {
    if (opts.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opts.output, std::ios::binary);
    if (!file) throw ParseError("cannot write '" + opts.output + "'", 0);
    file << text;
}

std::string render(const ReportDocument& doc, const OutputOptions& opts) {
    return opts.format == "csv" ? to_csv(doc) : to_json(doc);
}

bool has_overrides(const RunOptions& o) {
    return o.alpha || o.beta || o.eta || o.epsilon || o.preprocess || o.direction;
}

// Rejects flags the chosen family does not consume and assembles an explicit
// configuration when any hyperparameter override is present.
std::optional<StrategyConfig> explicit_config(const RunOptions& o, StrategyFamily family, CostModel cost) {
    const auto reject = [&](bool present, const char* flag) {
        if (present) {
            throw UsageError(std::string(flag) + " does not apply to strategy '" + o.strategy + "'");
        }
    };
    const std::size_t window = o.window.value_or(4);
    switch (family) {
        case StrategyFamily::UBAH:
            reject(o.alpha || o.beta || o.eta || o.epsilon || o.preprocess || o.direction || o.window,
                   "hyperparameter flags");
            return StrategyConfig::ubah(cost);
        case StrategyFamily::EG:
            reject(o.alpha || o.beta, "--alpha/--beta");
            reject(o.epsilon.has_value(), "--epsilon");
            reject(o.preprocess || o.direction || o.window, "--preprocess/--direction/--window");
            return StrategyConfig::eg(cost, o.eta.value_or(0.05));
        case StrategyFamily::PAMR:
            reject(o.alpha || o.beta || o.eta || o.preprocess || o.direction || o.window, "EG-family flags");
            return StrategyConfig::pamr(cost, o.epsilon.value_or(0.5));
        case StrategyFamily::OLMAR:
            reject(o.alpha || o.beta || o.eta || o.preprocess || o.direction, "EG-family flags");
            return StrategyConfig::olmar(cost, o.epsilon.value_or(5.0), window);
        case StrategyFamily::RMR:
            reject(o.alpha || o.beta || o.eta || o.preprocess || o.direction, "EG-family flags");
            return StrategyConfig::rmr(cost, o.epsilon.value_or(5.0), window);
        case StrategyFamily::EGPlus:
        case StrategyFamily::EgabN:
        case StrategyFamily::EgabP:
            break;
    }
    reject(o.epsilon.has_value(), "--epsilon");
    if (family == StrategyFamily::EGPlus) reject(o.alpha || o.beta, "--alpha/--beta");
    if (!has_overrides(o)) return std::nullopt;

    if (o.direction && *o.direction != 1 && *o.direction != -1) throw UsageError("--direction must be 1 or -1");
    if (o.eta && !(*o.eta > 0.0)) throw UsageError("--eta must be positive");
    const int s = o.direction.value_or(1);
    const Preprocess mode = o.preprocess ? preprocess_or_usage(*o.preprocess) : Preprocess::LastRelative;
    const ABParams params(o.alpha.value_or(1.0), o.beta.value_or(0.0), o.eta.value_or(0.05));
    switch (family) {
        case StrategyFamily::EGPlus: return StrategyConfig::eg_plus(cost, params.eta(), s, mode, window);
        case StrategyFamily::EgabN: return StrategyConfig::egab_n(cost, params, s, mode, window);
        default: return StrategyConfig::egab_p(cost, params, s, mode, window);
    }
}

struct Evaluation {
    StrategyConfig config;
    BacktestResult result;
};

Evaluation evaluate(const MarketData& data, StrategyFamily family, const std::optional<StrategyConfig>& fixed,
                    CostModel cost, double split_fraction, const TuningGrid& grid, unsigned threads) {
    if (split_fraction == 0.0) {
        if (!fixed) throw UsageError("--split 0 requires explicit hyperparameters for learned strategies");
        return {*fixed, run_backtest(data, *fixed)};
    }
    const SplitSpec split{split_fraction};
    StrategyConfig config = fixed ? *fixed : grid_search(data, family, grid, split, cost, threads).best;
    return {config, evaluate_oos(data, config, split)};
}

void check_split(double split) {
    if (!(split == 0.0 || (split > 0.0 && split < 1.0))) throw UsageError("--split must be 0 or lie in (0, 1)");
}

void check_format(const OutputOptions& o) {
    if (o.format != "json" && o.format != "csv") throw UsageError("--format must be json or csv");
}

int cmd_run(const RunOptions& o, const DataOptions& d, const OutputOptions& out_opts, std::ostream& out) {
    check_format(out_opts);
    check_split(o.split);
    const StrategyFamily family = family_or_usage(o.strategy);
    const CostModel cost = cost_or_usage(o.cost_rate);
    const std::optional<StrategyConfig> fixed = explicit_config(o, family, cost);
    if (o.split == 0.0 && !fixed) {
        throw UsageError("--split 0 requires explicit hyperparameters for learned strategies");
    }

    const MarketData data = load(o.dataset, d);
    TuningGrid grid = TuningGrid::defaults();
    if (o.window) grid.window = *o.window;
    const Evaluation ev = evaluate(data, family, fixed, cost, o.split, grid, o.threads);

    ReportDocument doc;
    doc.command = "run";
    doc.datasets = {dataset_id(o.dataset)};
    doc.cost_rates = {o.cost_rate};
    doc.validation_fraction = o.split;
    doc.blocks.push_back(make_block(doc.datasets.front(), ev.config, ev.result, data.periods(), out_opts.series));
    set_test_dates(doc.blocks.back(), data);
    add_geometric_means(doc);
    emit(render(doc, out_opts), out_opts, out);
    return kSuccess;
}

int cmd_compare(const CompareOptions& o, const DataOptions& d, const OutputOptions& out_opts, std::ostream& out) {
    check_format(out_opts);
    if (!(o.split > 0.0 && o.split < 1.0)) throw UsageError("compare needs --split in (0, 1)");
    std::vector<StrategyFamily> families;
    for (const auto& s : o.strategies) families.push_back(family_or_usage(s));
    for (double r : o.cost_rates) cost_or_usage(r);

    ReportDocument doc;
    doc.command = "compare";
    doc.cost_rates = o.cost_rates;
    doc.validation_fraction = o.split;
    for (const auto& path : o.datasets) doc.datasets.push_back(dataset_id(path));

    const TuningGrid grid = TuningGrid::defaults();
    for (double rate : o.cost_rates) {
        const CostModel cost(rate);
        for (std::size_t k = 0; k < o.datasets.size(); ++k) {
            const MarketData data = load(o.datasets[k], d);
            for (StrategyFamily family : families) {
                std::optional<StrategyConfig> fixed;
                if (!learns_hyperparameters(family)) fixed = enumerate_configs(family, grid, cost).front();
                const Evaluation ev = evaluate(data, family, fixed, cost, o.split, grid, o.threads);
                doc.blocks.push_back(make_block(doc.datasets[k], ev.config, ev.result, data.periods(),
                                                out_opts.series));
                set_test_dates(doc.blocks.back(), data);
            }
        }
    }
    add_geometric_means(doc);
    emit(render(doc, out_opts), out_opts, out);
    return kSuccess;
}

int cmd_grid(const RunOptions& o, const DataOptions& d, const OutputOptions& out_opts, std::ostream& out) {
    check_format(out_opts);
    if (!(o.split > 0.0 && o.split < 1.0)) throw UsageError("grid needs --split in (0, 1)");
    const StrategyFamily family = family_or_usage(o.strategy);
    const CostModel cost = cost_or_usage(o.cost_rate);
    const MarketData data = load(o.dataset, d);
    TuningGrid grid = TuningGrid::defaults();
    if (o.window) grid.window = *o.window;
    const SplitSpec split{o.split};
    const GridSearchResult gs = grid_search(data, family, grid, split, cost, o.threads);

    std::ostringstream text;
    if (out_opts.format == "csv") {
        text << "index,family,alpha,beta,eta,direction,preprocess,window,validation_cw,selected\n";
        for (std::size_t i = 0; i < gs.scoreboard.size(); ++i) {
            const ConfigSummary c = ConfigSummary::from(gs.scoreboard[i].config);
            text << i << ',' << c.family << ',' << format_number(c.alpha) << ',' << format_number(c.beta) << ','
                 << format_number(c.eta) << ',' << c.direction << ',' << c.preprocess << ',' << c.window << ','
                 << format_number(gs.scoreboard[i].validation_cw) << ',' << (i == gs.best_index ? 1 : 0) << '\n';
        }
    } else {
        using json = nlohmann::ordered_json;
        auto config_json = [](const StrategyConfig& cfg) {
            const ConfigSummary c = ConfigSummary::from(cfg);
            return json{{"family", c.family},       {"alpha", c.alpha},
                        {"beta", c.beta},           {"eta", c.eta},
                        {"direction", c.direction}, {"epsilon", c.epsilon},
                        {"preprocess", c.preprocess}, {"window", c.window}};
        };
        json j;
        j["tool_version"] = kToolVersion;
        j["command"] = "grid";
        j["dataset"] = dataset_id(o.dataset);
        j["strategy"] = o.strategy;
        j["cost_rate"] = o.cost_rate;
        j["validation_periods"] = split.t_split(data.periods());
        j["selected_index"] = gs.best_index;
        j["selected"] = config_json(gs.best);
        j["scoreboard"] = json::array();
        for (const auto& e : gs.scoreboard) {
            j["scoreboard"].push_back({{"config", config_json(e.config)}, {"validation_cw", round_report(e.validation_cw)}});
        }
        text << j.dump(2) << '\n';
    }
    emit(text.str(), out_opts, out);
    return kSuccess;
}

double quantile(Vec sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void write_series(const fs::path& path, const std::vector<std::pair<double, double>>& rows) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ParseError("cannot write '" + path.string() + "'", 0);
    for (const auto& [x, y] : rows) file << format_number(x) << ' ' << format_number(y) << '\n';
}

int cmd_plot_data(const PlotOptions& o, std::ostream& out) {
    std::ifstream in(o.report);
    if (!in) throw ParseError("cannot open '" + o.report + "'", 0);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const ReportDocument doc = report_from_json(buffer.str());

    const fs::path dir(o.output_dir);
    fs::create_directories(dir);
    std::size_t written = 0;
    for (const auto& b : doc.blocks) {
        if (!b.series) {
            throw PreconditionError("report block " + b.dataset + "/" + b.strategy +
                                    " has no per-period series; rerun with --series");
        }
        const std::string tag = b.dataset + "_" + b.strategy + "_cr" + format_number(b.cost_rate);
        std::vector<std::pair<double, double>> wealth;
        for (std::size_t t = 0; t < b.series->wealth.size(); ++t) {
            wealth.emplace_back(static_cast<double>(t), b.series->wealth[t]);
        }
        write_series(dir / ("wealth_" + tag + ".dat"), wealth);

        Vec sorted = b.series->turnovers;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::pair<double, double>> summary;
        for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) summary.emplace_back(q, quantile(sorted, q));
        write_series(dir / ("turnover_" + tag + ".dat"), summary);
        written += 2;
    }

    std::vector<std::string> strategies;
    for (const auto& g : doc.geometric_means) {
        if (std::find(strategies.begin(), strategies.end(), g.strategy) == strategies.end()) {
            strategies.push_back(g.strategy);
        }
    }
    for (const auto& s : strategies) {
        std::vector<std::pair<double, double>> rows;
        for (const auto& g : doc.geometric_means) {
            if (g.strategy == s) rows.emplace_back(g.cost_rate, g.value);
        }
        std::sort(rows.begin(), rows.end());
        write_series(dir / ("gm_vs_cost_" + s + ".dat"), rows);
        ++written;
    }
    out << "wrote " << written << " series files to " << dir.string() << '\n';
    return kSuccess;
}

int cmd_gen_synthetic(const SyntheticOptions& o, std::ostream& out) {
    const MarketData data = generate_synthetic(o.assets, o.periods, o.seed);
    if (o.output.empty()) {
        write_dataset(out, data);
        return kSuccess;
    }
    std::ofstream file(o.output, std::ios::binary);
    if (!file) throw ParseError("cannot write '" + o.output + "'", 0);
    write_dataset(file, data);
    return kSuccess;
}

void add_output_flags(CLI::App* cmd, OutputOptions& o) {
    cmd->add_option("--output", o.output, "Write the report to this file instead of stdout");
    cmd->add_option("--format", o.format, "Report format: json (default) or csv");
    cmd->add_flag("--series", o.series, "Include per-period wealth and turnover series");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Alpha-Beta exponentiated gradient portfolio selection", "egab"};
    app.require_subcommand(1);

    DataOptions data_opts;
    OutputOptions out_opts;
    RunOptions run_opts;
    CompareOptions cmp_opts;
    PlotOptions plot_opts;
    SyntheticOptions syn_opts;

    auto* run_cmd = app.add_subcommand("run", "Backtest one strategy on one dataset");
    run_cmd->add_option("--dataset", run_opts.dataset, "CSV of price relatives")->required();
    run_cmd->add_flag("--prices", data_opts.prices, "Input holds raw prices instead of relatives");
    run_cmd->add_option("--strategy", run_opts.strategy,
                        "ubah | eg | pamr | olmar | rmr | eg-plus | egab-n | egab-p")
        ->required();
    run_cmd->add_option("--alpha", run_opts.alpha, "EGAB alpha; fixes the configuration instead of tuning");
    run_cmd->add_option("--beta", run_opts.beta, "EGAB beta");
    run_cmd->add_option("--eta", run_opts.eta, "Learning rate (EG, EG+, EGAB)");
    run_cmd->add_option("--epsilon", run_opts.epsilon, "Reversion threshold (PAMR, OLMAR, RMR)");
    run_cmd->add_option("--window", run_opts.window, "Price history length for mean/median prediction")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--preprocess", run_opts.preprocess, "last | mean | median");
    run_cmd->add_option("--direction", run_opts.direction, "1 (follow the winner) or -1 (follow the loser)");
    run_cmd->add_option("--cost-rate", run_opts.cost_rate, "Commission per unit turnover")->required();
    run_cmd->add_option("--split", run_opts.split, "Validation fraction; 0 trades the whole span");
    run_cmd->add_option("--threads", run_opts.threads, "Grid-search workers; 0 uses the hardware count");
    add_output_flags(run_cmd, out_opts);

    auto* cmp_cmd = app.add_subcommand("compare", "Test-span wealth table over datasets, strategies and costs");
    cmp_cmd->add_option("--datasets", cmp_opts.datasets, "One or more relatives CSV files")->required();
    cmp_cmd->add_flag("--prices", data_opts.prices);
    cmp_cmd->add_option("--strategies", cmp_opts.strategies, "Comma-separated strategy names")
        ->required()
        ->delimiter(',');
    cmp_cmd->add_option("--cost-rates", cmp_opts.cost_rates, "Comma-separated commission rates")
        ->required()
        ->delimiter(',');
    cmp_cmd->add_option("--split", cmp_opts.split, "Validation fraction");
    cmp_cmd->add_option("--threads", cmp_opts.threads, "Grid-search workers");
    add_output_flags(cmp_cmd, out_opts);

    auto* grid_cmd = app.add_subcommand("grid", "Validation scoreboard of a hyperparameter grid");
    grid_cmd->add_option("--dataset", run_opts.dataset)->required();
    grid_cmd->add_flag("--prices", data_opts.prices);
    grid_cmd->add_option("--strategy", run_opts.strategy)->required();
    grid_cmd->add_option("--cost-rate", run_opts.cost_rate)->required();
    grid_cmd->add_option("--split", run_opts.split);
    grid_cmd->add_option("--window", run_opts.window)->check(CLI::PositiveNumber);
    grid_cmd->add_option("--threads", run_opts.threads);
    add_output_flags(grid_cmd, out_opts);

    auto* plot_cmd = app.add_subcommand("plot-data", "Two-column series files from a JSON report with --series");
    plot_cmd->add_option("--report", plot_opts.report)->required();
    plot_cmd->add_option("--output-dir", plot_opts.output_dir);

    auto* syn_cmd = app.add_subcommand("gen-synthetic", "Write a seeded synthetic relatives CSV");
    syn_cmd->add_option("--assets", syn_opts.assets)->check(CLI::PositiveNumber);
    syn_cmd->add_option("--periods", syn_opts.periods)->check(CLI::PositiveNumber);
    syn_cmd->add_option("--seed", syn_opts.seed);
    syn_cmd->add_option("--output", syn_opts.output);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_opts, data_opts, out_opts, out);
        if (cmp_cmd->parsed()) return cmd_compare(cmp_opts, data_opts, out_opts, out);
        if (grid_cmd->parsed()) return cmd_grid(run_opts, data_opts, out_opts, out);
        if (plot_cmd->parsed()) return cmd_plot_data(plot_opts, out);
        if (syn_cmd->parsed()) return cmd_gen_synthetic(syn_opts, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ParseError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::logic_error& e) {
        // DomainError, PreconditionError and DegenerateInputError
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const ComputationError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternalError;
    }
    return kUsageError;
}

}  // namespace egab::cli
