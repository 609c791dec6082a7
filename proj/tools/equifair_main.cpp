#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "equifair/calibration.hpp"
#include "equifair/csv.hpp"
#include "equifair/metrics.hpp"
#include "equifair/plots.hpp"
#include "equifair/synthetic.hpp"

namespace {

using namespace equifair;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDegeneracy = 3;
constexpr int kExitUnknownModality = 4;
constexpr int kExitIo = 5;

struct RunConfig {
    double sigma = kDefaultSigma;
    std::uint64_t seed = 0;
    std::size_t grid_size = kDefaultGridSize;
    std::vector<double> epsilon;
    std::string metric = "mse";
    double threshold = 0.5;
    std::string method = "grid";
    std::vector<std::string> order;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(SensitiveFrame::trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(SensitiveFrame::trim(cur));
    return out;
}

std::vector<double> parse_epsilon(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split_list(s)) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ValidationError("bad epsilon entry: '" + tok + "'");
        }
    }
    return out;
}

PerformanceMetric metric_from(const std::string& m) {
    if (m == "mse") return PerformanceMetric::mse;
    if (m == "mae") return PerformanceMetric::mae;
    if (m == "accuracy") return PerformanceMetric::accuracy;
    throw ValidationError("unknown metric: " + m);
}

UnfairnessMethod method_from(const std::string& m) {
    if (m == "grid") return UnfairnessMethod::grid;
    if (m == "exact") return UnfairnessMethod::exact;
    throw ValidationError("unknown method: " + m);
}

// Flags beat the config file, which beats built-in defaults; EQUIFAIR_SEED
// sits between config and flags.
void load_config_file(RunConfig& cfg, const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config file: invalid JSON: ") + e.what());
    }
    if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("grid_size")) cfg.grid_size = j["grid_size"].get<std::size_t>();
    if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<std::vector<double>>();
    if (j.contains("metric")) cfg.metric = j["metric"].get<std::string>();
    if (j.contains("threshold")) cfg.threshold = j["threshold"].get<double>();
    if (j.contains("method")) cfg.method = j["method"].get<std::string>();
    if (j.contains("order")) cfg.order = j["order"].get<std::vector<std::string>>();
}

struct CommonOpts {
    RunConfig cfg;
    std::string config_path;
    std::string epsilon_str;
    std::string order_str;
    bool seed_given = false;
    bool sigma_given = false;
    bool grid_given = false;
    bool metric_given = false;
    bool method_given = false;
    bool threshold_given = false;
};

void add_config_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file (flags override it)");
    cmd->add_option("--sigma", o.cfg.sigma, "jitter scale (default 1e-4)")
        ->trigger_on_parse()
        ->each([&](const std::string&) { o.sigma_given = true; });
    cmd->add_option("--seed", o.cfg.seed, "master RNG seed (also env EQUIFAIR_SEED)")
        ->each([&](const std::string&) { o.seed_given = true; });
    cmd->add_option("--grid-size", o.cfg.grid_size, "quantile grid size (default 1000)")
        ->each([&](const std::string&) { o.grid_given = true; });
    cmd->add_option("--epsilon", o.epsilon_str, "per-attribute epsilon list, e.g. 0.1,0.2");
    cmd->add_option("--metric", o.cfg.metric, "mse|mae|accuracy")
        ->each([&](const std::string&) { o.metric_given = true; });
    cmd->add_option("--threshold", o.cfg.threshold, "accuracy threshold in (0,1)")
        ->each([&](const std::string&) { o.threshold_given = true; });
    cmd->add_option("--method", o.cfg.method, "unfairness method: grid|exact")
        ->each([&](const std::string&) { o.method_given = true; });
    cmd->add_option("--order", o.order_str, "correction order (comma-separated attribute names)");
}

RunConfig resolve_config(CommonOpts& o) {
    RunConfig flags = o.cfg;  // values as parsed (flag or default)
    RunConfig cfg;            // start from defaults
    if (!o.config_path.empty()) load_config_file(cfg, o.config_path);
    if (const char* env = std::getenv("EQUIFAIR_SEED"); env && !o.seed_given) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ValidationError("EQUIFAIR_SEED is not an integer");
        }
    } else if (o.seed_given) {
        cfg.seed = flags.seed;
    }
    if (o.sigma_given) cfg.sigma = flags.sigma;
    if (o.grid_given) cfg.grid_size = flags.grid_size;
    if (o.metric_given) cfg.metric = flags.metric;
    if (o.method_given) cfg.method = flags.method;
    if (o.threshold_given) cfg.threshold = flags.threshold;
    if (!o.epsilon_str.empty()) cfg.epsilon = parse_epsilon(o.epsilon_str);
    if (!o.order_str.empty()) cfg.order = split_list(o.order_str);
    if (cfg.grid_size < 2) throw ValidationError("grid_size must be at least 2");
    (void)metric_from(cfg.metric);
    (void)method_from(cfg.method);
    return cfg;
}

struct DatasetArgs {
    std::string path;
    std::string pred_col = "pred";
    std::string sensitive_cols;
    std::string label_col;
};

void add_dataset_flags(CLI::App* cmd, DatasetArgs& d, const char* path_flag,
                       const char* path_desc) {
    cmd->add_option(path_flag, d.path, path_desc)->required();
    cmd->add_option("--pred-col", d.pred_col, "prediction column name (default 'pred')");
    cmd->add_option("--sensitive-cols", d.sensitive_cols,
                    "comma-separated sensitive column names")
        ->required();
    cmd->add_option("--label-col", d.label_col, "label column name (optional)");
}

struct Dataset {
    std::vector<double> predictions;
    SensitiveFrame sensitive;
    std::optional<std::vector<double>> labels;
    CsvTable table;
};

Dataset load_dataset(const DatasetArgs& args, const std::vector<std::string>& order) {
    Dataset d;
    d.table = read_csv_file(args.path);
    d.predictions = d.table.numeric_column(args.pred_col);
    auto cols = split_list(args.sensitive_cols);
    if (cols.empty()) throw ValidationError("--sensitive-cols must name at least one column");
    if (!order.empty()) {
        for (const auto& o : order) {
            bool found = false;
            for (const auto& c : cols) found = found || c == o;
            if (!found)
                throw ValidationError("correction order names unknown column '" + o + "'");
        }
        cols = order;
    }
    std::vector<std::vector<std::string>> data;
    for (const auto& c : cols) data.push_back(d.table.column(c));
    d.sensitive = SensitiveFrame(cols, std::move(data));
    if (!args.label_col.empty()) d.labels = d.table.numeric_column(args.label_col);
    return d;
}

std::optional<EpsilonVector> epsilon_for(const RunConfig& cfg, std::size_t r) {
    if (cfg.epsilon.empty()) return std::nullopt;
    EpsilonVector e{cfg.epsilon};
    e.validate(r);
    return e;
}

int cmd_calibrate(const DatasetArgs& data_args, CommonOpts& opts, const std::string& out_path) {
    const auto cfg = resolve_config(opts);
    const auto data = load_dataset(data_args, cfg.order);
    auto cal = fit_msa(data.predictions, data.sensitive, cfg.sigma, cfg.seed);
    write_file_atomic(out_path, save_calibrator(cal));
    for (std::size_t s = 0; s < cal.stage_count(); ++s) {
        const auto& st = cal.stage(s);
        std::printf("stage %zu attribute=%s\n", s + 1, st.attribute().c_str());
        for (const auto& m : st.modalities())
            std::printf("  modality=%s count=%zu weight=%s\n", m.c_str(),
                        st.group_values(m).size(), format_double(st.weight(m)).c_str());
    }
    std::printf("model written to %s\n", out_path.c_str());
    return kExitOk;
}

int cmd_apply(const std::string& model_path, const DatasetArgs& data_args, CommonOpts& opts,
              const std::string& out_path) {
    const auto cfg = resolve_config(opts);
    auto cal = load_calibrator(read_file(model_path));
    const auto attrs = cal.attributes();

    Dataset d;
    d.table = read_csv_file(data_args.path);
    d.predictions = d.table.numeric_column(data_args.pred_col);
    std::vector<std::vector<std::string>> data;
    for (const auto& a : attrs) data.push_back(d.table.column(a));
    d.sensitive = SensitiveFrame(attrs, std::move(data));

    cal.transform(d.predictions, d.sensitive, epsilon_for(cfg, attrs.size()));
    const auto& trace = cal.y_fair();

    std::string out;
    for (std::size_t c = 0; c < d.table.header.size(); ++c) {
        if (c) out += ',';
        out += format_csv_field(d.table.header[c]);
    }
    for (std::size_t s = 1; s < trace.size(); ++s) out += ",fair_after_" + trace[s].first;
    out += ",fair_pred\n";
    const auto& final_vec = trace.back().second;
    for (std::size_t r = 0; r < d.table.rows.size(); ++r) {
        for (std::size_t c = 0; c < d.table.rows[r].size(); ++c) {
            if (c) out += ',';
            out += format_csv_field(d.table.rows[r][c]);
        }
        for (std::size_t s = 1; s < trace.size(); ++s) {
            out += ',';
            out += format_double(trace[s].second[r]);
        }
        out += ',';
        out += format_double(final_vec[r]);
        out += '\n';
    }
    write_file_atomic(out_path, out);
    std::printf("%zu rows written to %s\n", d.table.rows.size(), out_path.c_str());
    return kExitOk;
}

int cmd_audit(const DatasetArgs& data_args, CommonOpts& opts, const std::string& out_path) {
    const auto cfg = resolve_config(opts);
    const auto data = load_dataset(data_args, cfg.order);
    const auto report =
        unfairness(data.predictions, data.sensitive, method_from(cfg.method), cfg.grid_size);
    const auto ks = unfairness_ks(data.predictions, data.sensitive);

    nlohmann::ordered_json j = nlohmann::json::parse(to_json(report));
    j["grid_size"] = cfg.grid_size;
    nlohmann::ordered_json ksj = nlohmann::ordered_json::object();
    for (const auto& [name, v] : ks.per_attribute) ksj[name] = v;
    j["ks_per_attribute"] = ksj;
    if (data.labels) {
        j["performance"] = performance(*data.labels, data.predictions, metric_from(cfg.metric),
                                       cfg.threshold);
        j["performance_metric"] = cfg.metric;
    }
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::fputs(text.c_str(), stdout);
    else
        write_file_atomic(out_path, text);
    return kExitOk;
}

int cmd_decompose(const std::string& model_path, const DatasetArgs& data_args, CommonOpts& opts,
                  const std::string& out_path) {
    const auto cfg = resolve_config(opts);
    auto cal = load_calibrator(read_file(model_path));
    const auto attrs = cal.attributes();

    Dataset d;
    d.table = read_csv_file(data_args.path);
    d.predictions = d.table.numeric_column(data_args.pred_col);
    std::vector<std::vector<std::string>> data;
    for (const auto& a : attrs) data.push_back(d.table.column(a));
    d.sensitive = SensitiveFrame(attrs, std::move(data));

    cal.transform(d.predictions, d.sensitive, epsilon_for(cfg, attrs.size()));
    const auto table = decompose(cal, d.sensitive, method_from(cfg.method), cfg.grid_size);
    const std::string text = to_json(table) + "\n";
    if (out_path.empty())
        std::fputs(text.c_str(), stdout);
    else
        write_file_atomic(out_path, text);
    return kExitOk;
}

int cmd_plot(const std::string& kind, const DatasetArgs& calib_args, const DatasetArgs& test_args,
             CommonOpts& opts, bool both_orders, const std::string& format,
             const std::string& out_path) {
    const auto cfg = resolve_config(opts);
    const auto calib = load_dataset(calib_args, cfg.order);
    const auto test = load_dataset(test_args, cfg.order);

    PlotConfig pc;
    pc.sigma = cfg.sigma;
    pc.seed = cfg.seed;
    pc.grid_size = cfg.grid_size;
    pc.method = method_from(cfg.method);
    pc.metric = metric_from(cfg.metric);
    pc.threshold = cfg.threshold;

    const auto eps = epsilon_for(cfg, calib.sensitive.attribute_count());
    PlotSpec spec;
    if (kind == "arrow" || kind == "multiple_arrow") {
        if (!test.labels)
            throw ValidationError("plot kind '" + kind +
                                  "' needs --label-col for the performance axis");
        spec = kind == "arrow"
                   ? arrow_plot_data(calib.predictions, calib.sensitive, test.predictions,
                                     test.sensitive, *test.labels, eps, pc)
                   : multiple_arrow_plot_data(calib.predictions, calib.sensitive,
                                              test.predictions, test.sensitive, *test.labels, eps,
                                              pc);
    } else if (kind == "density") {
        spec = density_plot_data(calib.predictions, calib.sensitive, test.predictions,
                                 test.sensitive, eps, pc);
    } else if (kind == "waterfall") {
        spec = waterfall_plot_data(calib.predictions, calib.sensitive, test.predictions,
                                   test.sensitive, eps, both_orders, pc);
    } else {
        throw ValidationError("unknown plot kind: " + kind);
    }

    if (format != "json" && format != "svg")
        throw ValidationError("unknown plot format: " + format);
    write_file_atomic(out_path,
                      render(spec, format == "json" ? PlotFormat::json : PlotFormat::svg));
    std::printf("plot written to %s\n", out_path.c_str());
    return kExitOk;
}

int cmd_synth(const SyntheticConfig& sc, const std::string& out_path) {
    const auto data = make_synthetic(sc);
    write_file_atomic(out_path, synthetic_to_csv(data));
    std::printf("%zu rows written to %s\n", data.predictions.size(), out_path.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equifair: demographic-parity post-processing of model scores via "
                 "sequential 1-D Wasserstein-barycenter projections"};
    app.require_subcommand(1);

    CommonOpts opts;
    DatasetArgs data_args, test_args;
    std::string model_path, out_path, plot_kind = "arrow", plot_format = "json";
    bool both_orders = false;
    SyntheticConfig synth_cfg;

    auto* calibrate = app.add_subcommand("calibrate", "fit a calibrator on calibration scores");
    add_dataset_flags(calibrate, data_args, "--calib", "calibration CSV");
    add_config_flags(calibrate, opts);
    calibrate->add_option("--out", out_path, "output model JSON")->required();

    auto* apply = app.add_subcommand("apply", "transform test scores with a fitted model");
    apply->add_option("--model", model_path, "model JSON from 'calibrate'")->required();
    apply->add_option("--test", data_args.path, "test CSV")->required();
    apply->add_option("--pred-col", data_args.pred_col, "prediction column (default 'pred')");
    add_config_flags(apply, opts);
    apply->add_option("--out", out_path, "output CSV")->required();

    auto* audit = app.add_subcommand("audit", "unfairness (and performance) report");
    add_dataset_flags(audit, data_args, "--data", "CSV with predictions and sensitive columns");
    add_config_flags(audit, opts);
    audit->add_option("--out", out_path, "output JSON (stdout when omitted)");

    auto* decomp = app.add_subcommand("decompose", "per-stage unfairness decomposition");
    decomp->add_option("--model", model_path, "model JSON from 'calibrate'")->required();
    decomp->add_option("--test", data_args.path, "test CSV")->required();
    decomp->add_option("--pred-col", data_args.pred_col, "prediction column (default 'pred')");
    add_config_flags(decomp, opts);
    decomp->add_option("--out", out_path, "output JSON (stdout when omitted)");

    auto* plot = app.add_subcommand("plot", "emit a figure as JSON spec or SVG");
    plot->add_option("--kind", plot_kind, "arrow|multiple_arrow|density|waterfall")->required();
    add_dataset_flags(plot, data_args, "--calib", "calibration CSV");
    plot->add_option("--test", test_args.path, "test CSV")->required();
    plot->add_flag("--both-orders", both_orders, "waterfall: also emit the reversed order");
    add_config_flags(plot, opts);
    plot->add_option("--format", plot_format, "json|svg (default json)");
    plot->add_option("--out", out_path, "output file")->required();

    auto* synth = app.add_subcommand("synth", "write a synthetic benchmark dataset");
    synth->add_option("--n", synth_cfg.n, "row count (default 20000)");
    synth->add_option("--correlation", synth_cfg.correlation,
                      "attribute correlation (default 0.05)");
    synth->add_option("--shift1", synth_cfg.shift1, "mean shift for a1 (default 3)");
    synth->add_option("--shift2", synth_cfg.shift2, "mean shift for a2 (default 2)");
    synth->add_option("--score-sigma", synth_cfg.score_sigma, "score noise scale (default 1)");
    synth->add_option("--label-noise", synth_cfg.label_noise, "label noise scale (default 0.5)");
    synth->add_option("--seed", synth_cfg.seed, "RNG seed");
    synth->add_option("--out", out_path, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (calibrate->parsed()) return cmd_calibrate(data_args, opts, out_path);
        if (apply->parsed()) return cmd_apply(model_path, data_args, opts, out_path);
        if (audit->parsed()) return cmd_audit(data_args, opts, out_path);
        if (decomp->parsed()) return cmd_decompose(model_path, data_args, opts, out_path);
        if (plot->parsed()) {
            test_args.pred_col = data_args.pred_col;
            test_args.sensitive_cols = data_args.sensitive_cols;
            test_args.label_col = data_args.label_col;
            return cmd_plot(plot_kind, data_args, test_args, opts, both_orders, plot_format,
                            out_path);
        }
        if (synth->parsed()) return cmd_synth(synth_cfg, out_path);
    } catch (const DegeneracyError& e) {
        std::fprintf(stderr, "degenerate data: %s\n", e.what());
        return kExitDegeneracy;
    } catch (const UnknownModalityError& e) {
        std::fprintf(stderr, "unknown modality: %s\n", e.what());
        return kExitUnknownModality;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitValidation;
    } catch (const StateError& e) {
        std::fprintf(stderr, "state error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitOk;
}
