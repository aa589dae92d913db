#include "egab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include <json.hpp>

#include "egab/errors.hpp"

namespace egab {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kUndefined = "undefined";

json metric_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(kUndefined);
}

std::optional<double> metric_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != kUndefined) throw DomainError("report: unknown metric flag");
        return std::nullopt;
    }
    return j.get<double>();
}

std::optional<double> rounded(const std::optional<double>& v) {
    return v ? std::optional<double>(round_report(*v)) : std::nullopt;
}

Vec rounded(const Vec& v) {
    Vec out(v);
    for (double& x : out) x = round_report(x);
    return out;
}

std::string format_metric(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string(kUndefined);
}

}  // namespace

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

double round_report(double value) {
    if (!std::isfinite(value)) return value;
    return std::strtod(format_number(value).c_str(), nullptr);
}

ConfigSummary ConfigSummary::from(const StrategyConfig& config) {
    ConfigSummary s;
    s.family = std::string(to_string(config.family));
    s.alpha = config.params.alpha();
    s.beta = config.params.beta();
    s.eta = round_report(config.params.eta());
    s.direction = config.direction;
    s.epsilon = config.epsilon;
    s.preprocess = std::string(to_string(config.preprocess));
    s.window = config.window;
    return s;
}

StrategyBlock make_block(const std::string& dataset, const StrategyConfig& config, const BacktestResult& result,
                         std::size_t total_periods, bool with_series) {
    StrategyBlock b;
    b.dataset = dataset;
    b.strategy = std::string(to_string(config.family));
    b.cost_rate = round_report(config.cost.rate());
    b.config = ConfigSummary::from(config);
    b.total_periods = total_periods;
    b.test_periods = result.per_period_returns.size();
    b.final_cw = round_report(result.final_cw);
    b.extrapolated_cw = round_report(extrapolate_cw(result.final_cw, total_periods, b.test_periods));
    b.apy = rounded(std::optional<double>(result.metrics.apy));
    b.sharpe = rounded(result.metrics.sharpe);
    b.calmar = rounded(result.metrics.calmar);
    b.mdd = rounded(std::optional<double>(result.metrics.mdd));
    b.mean_turnover = round_report(result.mean_turnover());
    if (with_series) {
        b.series = SeriesData{rounded(result.wealth), rounded(result.turnovers)};
    }
    return b;
}

void set_test_dates(StrategyBlock& block, const MarketData& data) {
    const auto& dates = data.dates();
    if (dates.empty() || block.test_periods == 0 || block.test_periods > dates.size()) return;
    block.test_start = dates[dates.size() - block.test_periods];
    block.test_end = dates.back();
}

void add_geometric_means(ReportDocument& doc) {
    // Keep first-appearance order of cost rates and strategies.
    std::vector<std::pair<double, std::string>> keys;
    for (const auto& b : doc.blocks) {
        const std::pair<double, std::string> key{b.cost_rate, b.strategy};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& [rate, strategy] : keys) {
        Vec values;
        for (const auto& b : doc.blocks) {
            if (b.cost_rate == rate && b.strategy == strategy) values.push_back(b.final_cw);
        }
        doc.geometric_means.push_back(GeometricMeanRow{rate, strategy, round_report(geometric_mean(values))});
    }
}

std::string to_json(const ReportDocument& doc) {
    json j;
    j["tool_version"] = doc.tool_version;
    j["command"] = doc.command;
    j["datasets"] = doc.datasets;
    j["cost_rates"] = doc.cost_rates;
    j["validation_fraction"] = doc.validation_fraction;
    j["seed"] = doc.seed ? json(*doc.seed) : json(nullptr);
    j["periods_per_year"] = kPeriodsPerYear;
    j["blocks"] = json::array();
    for (const auto& b : doc.blocks) {
        json jb;
        jb["dataset"] = b.dataset;
        jb["strategy"] = b.strategy;
        jb["cost_rate"] = b.cost_rate;
        jb["config"] = {{"family", b.config.family},       {"alpha", b.config.alpha},
                        {"beta", b.config.beta},           {"eta", b.config.eta},
                        {"direction", b.config.direction}, {"epsilon", b.config.epsilon},
                        {"preprocess", b.config.preprocess}, {"window", b.config.window}};
        jb["total_periods"] = b.total_periods;
        jb["test_periods"] = b.test_periods;
        jb["test_start"] = b.test_start.empty() ? json(nullptr) : json(b.test_start);
        jb["test_end"] = b.test_end.empty() ? json(nullptr) : json(b.test_end);
        jb["final_cw"] = b.final_cw;
        jb["extrapolated_cw"] = b.extrapolated_cw;
        jb["apy"] = metric_to_json(b.apy);
        jb["sharpe"] = metric_to_json(b.sharpe);
        jb["calmar"] = metric_to_json(b.calmar);
        jb["mdd"] = metric_to_json(b.mdd);
        jb["mean_turnover"] = b.mean_turnover;
        if (b.series) {
            jb["series"] = {{"wealth", b.series->wealth}, {"turnover", b.series->turnovers}};
        }
        j["blocks"].push_back(std::move(jb));
    }
    j["geometric_means"] = json::array();
    for (const auto& g : doc.geometric_means) {
        j["geometric_means"].push_back({{"cost_rate", g.cost_rate}, {"strategy", g.strategy}, {"value", g.value}});
    }
    return j.dump(2) + "\n";
}

ReportDocument report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("report is not valid JSON: ") + e.what(), 0);
    }
    try {
        ReportDocument doc;
        doc.tool_version = j.at("tool_version").get<std::string>();
        doc.command = j.at("command").get<std::string>();
        doc.datasets = j.at("datasets").get<std::vector<std::string>>();
        doc.cost_rates = j.at("cost_rates").get<std::vector<double>>();
        doc.validation_fraction = j.at("validation_fraction").get<double>();
        if (!j.at("seed").is_null()) doc.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& jb : j.at("blocks")) {
            StrategyBlock b;
            b.dataset = jb.at("dataset").get<std::string>();
            b.strategy = jb.at("strategy").get<std::string>();
            b.cost_rate = jb.at("cost_rate").get<double>();
            const auto& jc = jb.at("config");
            b.config.family = jc.at("family").get<std::string>();
            b.config.alpha = jc.at("alpha").get<double>();
            b.config.beta = jc.at("beta").get<double>();
            b.config.eta = jc.at("eta").get<double>();
            b.config.direction = jc.at("direction").get<int>();
            b.config.epsilon = jc.at("epsilon").get<double>();
            b.config.preprocess = jc.at("preprocess").get<std::string>();
            b.config.window = jc.at("window").get<std::size_t>();
            b.total_periods = jb.at("total_periods").get<std::size_t>();
            b.test_periods = jb.at("test_periods").get<std::size_t>();
            if (!jb.at("test_start").is_null()) b.test_start = jb.at("test_start").get<std::string>();
            if (!jb.at("test_end").is_null()) b.test_end = jb.at("test_end").get<std::string>();
            b.final_cw = jb.at("final_cw").get<double>();
            b.extrapolated_cw = jb.at("extrapolated_cw").get<double>();
            b.apy = metric_from_json(jb.at("apy"));
            b.sharpe = metric_from_json(jb.at("sharpe"));
            b.calmar = metric_from_json(jb.at("calmar"));
            b.mdd = metric_from_json(jb.at("mdd"));
            b.mean_turnover = jb.at("mean_turnover").get<double>();
            if (jb.contains("series")) {
                b.series = SeriesData{jb.at("series").at("wealth").get<Vec>(),
                                      jb.at("series").at("turnover").get<Vec>()};
            }
            doc.blocks.push_back(std::move(b));
        }
        for (const auto& jg : j.at("geometric_means")) {
            doc.geometric_means.push_back(GeometricMeanRow{jg.at("cost_rate").get<double>(),
                                                           jg.at("strategy").get<std::string>(),
                                                           jg.at("value").get<double>()});
        }
        return doc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what(), 0);
    }
}

std::string to_csv(const ReportDocument& doc) {
    std::ostringstream out;
    if (doc.command == "compare") {
        std::vector<std::string> strategies;
        for (const auto& b : doc.blocks) {
            if (std::find(strategies.begin(), strategies.end(), b.strategy) == strategies.end()) {
                strategies.push_back(b.strategy);
            }
        }
        out << "cost_rate,dataset";
        for (const auto& s : strategies) out << ',' << s;
        out << '\n';
        for (double rate : doc.cost_rates) {
            const double key = round_report(rate);
            for (const auto& dataset : doc.datasets) {
                out << format_number(key) << ',' << dataset;
                for (const auto& s : strategies) {
                    out << ',';
                    for (const auto& b : doc.blocks) {
                        if (b.cost_rate == key && b.dataset == dataset && b.strategy == s) {
                            out << format_number(b.final_cw);
                        }
                    }
                }
                out << '\n';
            }
            out << format_number(key) << ",geometric_mean";
            for (const auto& s : strategies) {
                out << ',';
                for (const auto& g : doc.geometric_means) {
                    if (g.cost_rate == key && g.strategy == s) out << format_number(g.value);
                }
            }
            out << '\n';
        }
        return out.str();
    }

    out << "dataset,strategy,cost_rate,test_periods,test_start,test_end,final_cw,extrapolated_cw,apy,sharpe,calmar,mdd,mean_turnover\n";
    for (const auto& b : doc.blocks) {
        out << b.dataset << ',' << b.strategy << ',' << format_number(b.cost_rate) << ',' << b.test_periods << ','
            << b.test_start << ',' << b.test_end << ',' << format_number(b.final_cw) << ',' << format_number(b.extrapolated_cw) << ',' << format_metric(b.apy)
            << ',' << format_metric(b.sharpe) << ',' << format_metric(b.calmar) << ',' << format_metric(b.mdd) << ','
            << format_number(b.mean_turnover) << '\n';
    }
    return out.str();
}

}  // namespace egab
