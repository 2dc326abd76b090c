#include "stratrd/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "stratrd/mathutil.hpp"

namespace stratrd {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

SeEntry make_se_entry(const PointEstimate& estimate, const VarianceEstimate& variance,
                      double level) {
    SeEntry entry;
    entry.method = variance.method;
    entry.variance = variance.variance;
    entry.components = variance.components;
    entry.warnings = variance.warnings;
    entry.failed_replicates = variance.failed_replicates;
    const double reported = variance.reported_variance();
    if (reported >= 0.0) {
        entry.se = std::sqrt(reported);
        entry.ci = confidence_interval(estimate, variance, level);
    }
    return entry;
}

} // namespace

AnalysisReport analyze_dataset(const StratifiedDataset& dataset,
                               const AnalyzeOptions& options,
                               const std::vector<SubjectRecord>* records) {
    check_dataset(dataset);
    AnalysisReport report;
    report.level = options.level;

    for (const Warning& w : validate(dataset)) {
        report.warnings.push_back(std::string(warning_code_name(w.code)) + ": " + w.message);
    }

    const PointEstimate mh = mh_estimate(dataset);
    report.digest.stratum_count = static_cast<int>(dataset.stratum_count());
    report.digest.n = dataset.total_subjects();
    report.digest.strata_dropped = mh.strata_dropped;

    EstimateEntry mh_for_mh;
    mh_for_mh.estimator = Estimator::MH;
    mh_for_mh.estimand = Estimand::DELTA_MH;
    mh_for_mh.value = mh.value;
    mh_for_mh.strata_used = mh.strata_used;
    mh_for_mh.strata_dropped = mh.strata_dropped;
    mh_for_mh.ses.push_back(make_se_entry(mh, var_gr(dataset), options.level));
    mh_for_mh.ses.push_back(make_se_entry(mh, var_sato(dataset), options.level));
    mh_for_mh.ses.push_back(make_se_entry(mh, var_mgr_mh(dataset), options.level));
    report.estimates.push_back(std::move(mh_for_mh));

    EstimateEntry mh_for_ate;
    mh_for_ate.estimator = Estimator::MH;
    mh_for_ate.estimand = Estimand::DELTA_ATE;
    mh_for_ate.value = mh.value;
    mh_for_ate.strata_used = mh.strata_used;
    mh_for_ate.strata_dropped = mh.strata_dropped;
    mh_for_ate.ses.push_back(make_se_entry(mh, var_mgr_ate(dataset), options.level));
    if (options.bootstrap_replicates > 0) {
        std::vector<SubjectRecord> expanded;
        const std::vector<SubjectRecord>* source = records;
        if (!source) {
            expanded = expand_to_records(dataset);
            source = &expanded;
        }
        BootstrapOptions boot;
        boot.replicates = options.bootstrap_replicates;
        boot.seed = options.seed;
        mh_for_ate.ses.push_back(
            make_se_entry(mh, var_bootstrap(*source, Estimator::MH, boot), options.level));
    }
    report.estimates.push_back(std::move(mh_for_ate));

    const PointEstimate ps = ps_estimate(dataset);
    EstimateEntry ps_entry;
    ps_entry.estimator = Estimator::PS;
    ps_entry.estimand = Estimand::DELTA_ATE;
    ps_entry.value = ps.value;
    ps_entry.strata_used = ps.strata_used;
    ps_entry.strata_dropped = ps.strata_dropped;
    ps_entry.ses.push_back(make_se_entry(ps, var_ps(dataset), options.level));
    report.estimates.push_back(std::move(ps_entry));

    try {
        const PointEstimate unadj = unadjusted_estimate(dataset);
        EstimateEntry unadj_entry;
        unadj_entry.estimator = Estimator::UNADJUSTED;
        unadj_entry.estimand = Estimand::DELTA_ATE;
        unadj_entry.value = unadj.value;
        unadj_entry.strata_used = unadj.strata_used;
        unadj_entry.strata_dropped = unadj.strata_dropped;
        unadj_entry.ses.push_back(make_se_entry(unadj, var_unadjusted(dataset), options.level));
        report.estimates.push_back(std::move(unadj_entry));
    } catch (const Error& e) {
        report.warnings.push_back(std::string(error_code_name(e.code())) +
                                  ": unadjusted estimator unavailable: " + e.what());
    }

    auto run_test = [&](auto&& fn) {
        TestEntry entry;
        try {
            entry.result = fn();
        } catch (const Error& e) {
            entry.available = false;
            entry.error = std::string(error_code_name(e.code())) + ": " + e.what();
        }
        report.tests.push_back(std::move(entry));
    };
    run_test([&] { return mh_test(dataset); });
    run_test([&] { return wald_test(dataset, Estimand::DELTA_MH, 0.0); });
    run_test([&] { return wald_test(dataset, Estimand::DELTA_ATE, 0.0); });
    return report;
}

namespace {

ordered_json warnings_to_json(const std::vector<Warning>& warnings) {
    ordered_json arr = ordered_json::array();
    for (const Warning& w : warnings) {
        arr.push_back({{"code", warning_code_name(w.code)}, {"message", w.message}});
    }
    return arr;
}

WarningCode warning_code_from_name(const std::string& name) {
    for (int i = 0;; ++i) {
        const auto code = static_cast<WarningCode>(i);
        if (std::string(warning_code_name(code)) == name) return code;
        if (code == WarningCode::Chi2Adequacy) break;
    }
    throw Error(ErrorCode::ParseError, "unknown warning code '" + name + "'");
}

std::vector<Warning> warnings_from_json(const json& arr) {
    std::vector<Warning> warnings;
    for (const auto& item : arr) {
        warnings.push_back({warning_code_from_name(item.at("code").get<std::string>()),
                            item.at("message").get<std::string>()});
    }
    return warnings;
}

template <typename Enum>
Enum enum_from_name(const std::string& name, const char* (*to_name)(Enum), Enum last,
                    const char* what) {
    for (int i = 0;; ++i) {
        const auto value = static_cast<Enum>(i);
        if (std::string(to_name(value)) == name) return value;
        if (value == last) break;
    }
    throw Error(ErrorCode::ParseError, std::string("unknown ") + what + " '" + name + "'");
}

} // namespace

ordered_json report_to_json(const AnalysisReport& report) {
    ordered_json j;
    j["digest"] = {{"strata", report.digest.stratum_count},
                   {"n", report.digest.n},
                   {"strata_dropped", report.digest.strata_dropped}};
    j["level"] = report.level;
    ordered_json estimates = ordered_json::array();
    for (const EstimateEntry& e : report.estimates) {
        ordered_json entry;
        entry["estimator"] = estimator_name(e.estimator);
        entry["estimand"] = estimand_name(e.estimand);
        entry["value"] = e.value;
        entry["strata_used"] = e.strata_used;
        entry["strata_dropped"] = e.strata_dropped;
        ordered_json ses = ordered_json::array();
        for (const SeEntry& s : e.ses) {
            ordered_json se;
            se["method"] = variance_method_name(s.method);
            se["variance"] = s.variance;
            se["se"] = s.se ? ordered_json(*s.se) : ordered_json(nullptr);
            se["ci"] = s.ci ? ordered_json({s.ci->lower, s.ci->upper}) : ordered_json(nullptr);
            se["components"] =
                s.components
                    ? ordered_json({{"sigma2", s.components->first}, {"nu2", s.components->second}})
                    : ordered_json(nullptr);
            se["failed_replicates"] = s.failed_replicates;
            se["warnings"] = warnings_to_json(s.warnings);
            ses.push_back(std::move(se));
        }
        entry["ses"] = std::move(ses);
        estimates.push_back(std::move(entry));
    }
    j["estimates"] = std::move(estimates);
    ordered_json tests = ordered_json::array();
    for (const TestEntry& t : report.tests) {
        ordered_json entry;
        entry["method"] = test_method_name(t.result.method);
        entry["null_hypothesis"] = null_hypothesis_name(t.result.null_hypothesis);
        entry["available"] = t.available;
        if (t.available) {
            entry["statistic"] = t.result.statistic;
            entry["p_value"] = t.result.p_value;
            entry["df"] = t.result.df;
            entry["warnings"] = warnings_to_json(t.result.warnings);
        } else {
            entry["error"] = t.error;
        }
        tests.push_back(std::move(entry));
    }
    j["tests"] = std::move(tests);
    j["warnings"] = report.warnings;
    return j;
}

AnalysisReport report_from_json(const json& j) {
    AnalysisReport report;
    report.digest.stratum_count = j.at("digest").at("strata").get<int>();
    report.digest.n = j.at("digest").at("n").get<long long>();
    report.digest.strata_dropped = j.at("digest").at("strata_dropped").get<int>();
    report.level = j.at("level").get<double>();
    for (const auto& entry : j.at("estimates")) {
        EstimateEntry e;
        e.estimator = enum_from_name<Estimator>(entry.at("estimator").get<std::string>(),
                                                estimator_name, Estimator::MH_MULTIARM,
                                                "estimator");
        e.estimand = enum_from_name<Estimand>(entry.at("estimand").get<std::string>(),
                                              estimand_name, Estimand::DELTA_ATE, "estimand");
        e.value = entry.at("value").get<double>();
        e.strata_used = entry.at("strata_used").get<int>();
        e.strata_dropped = entry.at("strata_dropped").get<int>();
        for (const auto& se : entry.at("ses")) {
            SeEntry s;
            s.method = enum_from_name<VarianceMethod>(se.at("method").get<std::string>(),
                                                      variance_method_name,
                                                      VarianceMethod::UNADJUSTED, "method");
            s.variance = se.at("variance").get<double>();
            if (!se.at("se").is_null()) s.se = se.at("se").get<double>();
            if (!se.at("ci").is_null()) {
                ConfidenceInterval ci;
                ci.lower = se.at("ci").at(0).get<double>();
                ci.upper = se.at("ci").at(1).get<double>();
                ci.level = report.level;
                s.ci = ci;
            }
            if (!se.at("components").is_null()) {
                s.components = {se.at("components").at("sigma2").get<double>(),
                                se.at("components").at("nu2").get<double>()};
            }
            s.failed_replicates = se.at("failed_replicates").get<int>();
            s.warnings = warnings_from_json(se.at("warnings"));
            e.ses.push_back(std::move(s));
        }
        report.estimates.push_back(std::move(e));
    }
    for (const auto& entry : j.at("tests")) {
        TestEntry t;
        t.result.method = enum_from_name<TestMethod>(entry.at("method").get<std::string>(),
                                                     test_method_name, TestMethod::WALD_ATE,
                                                     "test method");
        t.result.null_hypothesis = enum_from_name<NullHypothesis>(
            entry.at("null_hypothesis").get<std::string>(), null_hypothesis_name,
            NullHypothesis::DELTA_ATE_ZERO, "null hypothesis");
        t.available = entry.at("available").get<bool>();
        if (t.available) {
            t.result.statistic = entry.at("statistic").get<double>();
            t.result.p_value = entry.at("p_value").get<double>();
            t.result.df = entry.at("df").get<int>();
            t.result.warnings = warnings_from_json(entry.at("warnings"));
        } else {
            t.error = entry.at("error").get<std::string>();
        }
        report.tests.push_back(std::move(t));
    }
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
    return report;
}

namespace {

// Entries x100, two decimals, ties to even — the table convention.
std::string x100(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", round_half_even(value * 100.0, 2));
    return buf;
}

std::string method_label(VarianceMethod m) {
    switch (m) {
        case VarianceMethod::GR: return "GR";
        case VarianceMethod::SATO: return "Sato";
        case VarianceMethod::MGR_MH: return "mGR";
        case VarianceMethod::MGR_ATE: return "mGR";
        case VarianceMethod::PS: return "PS";
        case VarianceMethod::BOOTSTRAP: return "Boot";
        case VarianceMethod::UNADJUSTED: return "Unadj";
    }
    return "?";
}

std::string estimator_label(Estimator e) {
    switch (e) {
        case Estimator::MH: return "MH";
        case Estimator::PS: return "PS";
        case Estimator::UNADJUSTED: return "Unadj";
        case Estimator::MH_MULTIARM: return "MH(jl)";
    }
    return "?";
}

} // namespace

std::string report_to_table(const AnalysisReport& report) {
    std::ostringstream out;
    out << "Dataset: " << report.digest.stratum_count << " strata, n = " << report.digest.n
        << ", " << report.digest.strata_dropped << " dropped by MH weighting\n";
    out << "Entries x100; " << 100.0 * report.level << "% confidence intervals.\n";
    for (const Estimand target : {Estimand::DELTA_MH, Estimand::DELTA_ATE}) {
        out << "\nEstimand " << (target == Estimand::DELTA_MH ? "delta_MH" : "delta_ATE")
            << ":\n";
        out << "  Estimator  Method   Est      SE       CI\n";
        for (const EstimateEntry& e : report.estimates) {
            if (e.estimand != target) continue;
            for (const SeEntry& s : e.ses) {
                out << "  " << estimator_label(e.estimator);
                for (std::size_t i = estimator_label(e.estimator).size(); i < 11; ++i) out << ' ';
                std::string m = method_label(s.method);
                out << m;
                for (std::size_t i = m.size(); i < 9; ++i) out << ' ';
                std::string est = x100(e.value);
                out << est;
                for (std::size_t i = est.size(); i < 9; ++i) out << ' ';
                if (s.se) {
                    std::string se = x100(*s.se);
                    out << se;
                    for (std::size_t i = se.size(); i < 9; ++i) out << ' ';
                    out << '(' << x100(s.ci->lower) << ", " << x100(s.ci->upper) << ")";
                } else {
                    out << "NaN      (negative variance)";
                }
                out << '\n';
            }
        }
    }
    out << "\nTests:\n";
    for (const TestEntry& t : report.tests) {
        out << "  " << test_method_name(t.result.method) << " ["
            << null_hypothesis_name(t.result.null_hypothesis) << "]: ";
        if (t.available) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "statistic %.4f, p = %.4f",
                          t.result.statistic, t.result.p_value);
            out << buf << '\n';
        } else {
            out << t.error << '\n';
        }
    }
    if (!report.warnings.empty()) {
        out << "\nWarnings:\n";
        for (const std::string& w : report.warnings) out << "  " << w << '\n';
    }
    return out.str();
}

namespace {

std::string csv_metric(double value, bool available) {
    if (!available) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", round_half_even(value * 100.0, 1));
    return buf;
}

} // namespace

ordered_json summaries_to_json(const std::vector<ScenarioSummary>& summaries) {
    ordered_json arr = ordered_json::array();
    for (const ScenarioSummary& s : summaries) {
        ordered_json entry;
        entry["scenario"] = s.scenario_id;
        entry["runs"] = s.runs;
        entry["truth_ate"] = s.truth_ate;
        entry["truth_mh_avg"] = s.truth_mh_avg;
        ordered_json cells = ordered_json::array();
        for (const auto& [key, cell] : s.cells) {
            ordered_json c;
            c["estimator"] = estimator_name(key.estimator);
            c["se_method"] = variance_method_name(key.se_method);
            c["estimand"] = estimand_name(key.estimand);
            c["bias"] = cell.bias;
            c["sd"] = cell.sd_available ? ordered_json(cell.sd) : ordered_json(nullptr);
            c["mean_se"] = cell.mean_se;
            c["cp"] = cell.cp;
            c["power"] = cell.power;
            c["runs_used"] = cell.runs_used;
            c["failures"] = cell.failures;
            cells.push_back(std::move(c));
        }
        entry["cells"] = std::move(cells);
        arr.push_back(std::move(entry));
    }
    return arr;
}

std::string summaries_to_csv(const std::vector<ScenarioSummary>& summaries) {
    std::ostringstream out;
    out << "scenario,estimand,truth,metric,gr,sato,mgr,boot,unadj,ps\n";
    const std::vector<VarianceMethod> mh_columns = {
        VarianceMethod::GR, VarianceMethod::SATO, VarianceMethod::MGR_MH,
        VarianceMethod::BOOTSTRAP};
    const std::vector<VarianceMethod> ate_columns = {
        VarianceMethod::GR, VarianceMethod::SATO, VarianceMethod::MGR_ATE,
        VarianceMethod::BOOTSTRAP};
    for (const ScenarioSummary& s : summaries) {
        for (const Estimand target : {Estimand::DELTA_MH, Estimand::DELTA_ATE}) {
            const auto& columns = target == Estimand::DELTA_MH ? mh_columns : ate_columns;
            auto find_cell = [&](Estimator est, VarianceMethod m) -> const CellSummary* {
                for (const auto& [key, cell] : s.cells) {
                    if (key.estimator == est && key.se_method == m && key.estimand == target) {
                        return &cell;
                    }
                }
                return nullptr;
            };
            const double truth =
                target == Estimand::DELTA_MH ? s.truth_mh_avg : s.truth_ate;
            for (const char* metric : {"bias", "sd", "se", "cp", "power"}) {
                out << s.scenario_id << ',' << estimand_name(target) << ','
                    << csv_metric(truth, true) << ',' << metric;
                auto emit = [&](const CellSummary* cell) {
                    if (!cell || cell->runs_used == 0) {
                        out << ",-";
                        return;
                    }
                    std::string text;
                    if (std::string(metric) == "bias") text = csv_metric(cell->bias, true);
                    else if (std::string(metric) == "sd")
                        text = csv_metric(cell->sd, cell->sd_available);
                    else if (std::string(metric) == "se") text = csv_metric(cell->mean_se, true);
                    else if (std::string(metric) == "cp") text = csv_metric(cell->cp, true);
                    else text = csv_metric(cell->power, true);
                    out << ',' << text;
                };
                for (VarianceMethod m : columns) emit(find_cell(Estimator::MH, m));
                if (target == Estimand::DELTA_ATE) {
                    emit(find_cell(Estimator::UNADJUSTED, VarianceMethod::UNADJUSTED));
                    emit(find_cell(Estimator::PS, VarianceMethod::PS));
                } else {
                    out << ",-,-";
                }
                out << '\n';
            }
        }
    }
    return out.str();
}

} // namespace stratrd
