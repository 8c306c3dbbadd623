#include "sib/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <thread>

#include "json.hpp"
#include "sib/csv.hpp"
#include "sib/errors.hpp"
#include "sib/fit.hpp"
#include "sib/metrics.hpp"
#include "sib/predict.hpp"
#include "sib/selection.hpp"
#include "sib/simgen.hpp"

namespace sib {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct LoadedData {
    std::vector<ViewMatrix> views;
    OutcomeSpec outcome;
    std::vector<std::string> sample_ids;
    std::vector<std::vector<std::string>> variable_names;  // per view
};

std::vector<std::string> split_colon(const std::string& entry) {
    std::vector<std::string> parts;
    std::string part;
    std::stringstream ss(entry);
    while (std::getline(ss, part, ':')) parts.push_back(part);
    return parts;
}

std::vector<ViewMatrix> load_views(const KeyValueConfig& config,
                                   LoadedData* data) {
    std::vector<ViewMatrix> views;
    for (const auto& entry : config.str_list("views")) {
        const auto parts = split_colon(entry);
        if (parts.size() < 2 || parts.size() > 3) {
            throw ConfigError("views entry '" + entry +
                              "' must be path:family[:name]");
        }
        if (!fs::exists(parts[0])) {
            throw DataError("view file not found: " + parts[0]);
        }
        CsvTable table = read_csv(parts[0]);
        ViewMatrix view;
        view.data = std::move(table.values);
        view.family = Family::parse(parts[1]);
        view.name = parts.size() == 3 ? parts[2] : fs::path(parts[0]).stem().string();
        if (data) {
            if (data->sample_ids.empty()) data->sample_ids = table.row_ids;
            data->variable_names.push_back(table.column_names);
        }
        views.push_back(std::move(view));
    }
    if (views.empty()) throw ConfigError("config lists no views");
    return views;
}

OutcomeSpec load_outcome(const KeyValueConfig& config) {
    const auto parts = split_colon(config.str("outcome"));
    if (parts.size() != 2) {
        throw ConfigError("outcome must be path:family");
    }
    if (!fs::exists(parts[0])) {
        throw DataError("outcome file not found: " + parts[0]);
    }
    CsvTable table = read_csv(parts[0]);
    OutcomeSpec outcome;
    if (table.values.cols() != 1) {
        throw DataError("outcome file must have exactly one value column");
    }
    outcome.y = table.values.col(0);
    outcome.family = Family::parse(parts[1]);
    if (config.has("covariates")) {
        const std::string path = config.str("covariates");
        if (!fs::exists(path)) {
            throw DataError("covariate file not found: " + path);
        }
        outcome.covariates = read_csv(path).values;
    }
    return outcome;
}

FitConfig fit_config_from(const KeyValueConfig& config,
                          const CommonOptions& options, std::size_t n_views) {
    FitConfig fc;
    fc.alpha = config.num_or("alpha", 1e-2);
    fc.tol = config.num_or("tol", 1e-5);
    fc.max_iter = config.int_or("max_iter", 2000);
    fc.K = config.int_or("K", 3);
    fc.non_overlapping = config.flag_or("non_overlapping", false);
    fc.seed = options.seed.value_or(config.uint_or("seed", 0));
    const double rho = config.num_or("rho", 0.5);
    const double lambda = config.num_or("lambda", 0.0);
    fc.weights = make_weights(rho, lambda, static_cast<Eigen::Index>(n_views),
                              fc.K);
    return fc;
}

std::optional<SearchSpace> search_space_from(const KeyValueConfig& config,
                                             std::size_t n_views) {
    const bool has_grid = config.has("lambda_grid");
    const bool has_k_range = config.has("k_min") || config.has("k_max");
    if (!has_grid && !has_k_range) return std::nullopt;

    SearchSpace space;
    std::vector<double> grid = has_grid
                                   ? config.num_list("lambda_grid")
                                   : std::vector<double>{
                                         config.num_or("lambda", 0.0)};
    space.lambda_grid.assign(n_views, grid);
    space.shared_lambda = config.flag_or("shared_lambda", true);
    space.use_ebic = config.flag_or("use_ebic", false);
    space.sigma_ebic = config.num_or("sigma_ebic", 0.0);
    space.max_draws = config.int_or("max_draws", 60);
    const std::string loss_kind = config.str_or("loss_for_ic", "total");
    if (loss_kind == "total") {
        space.loss_for_ic = LossForIC::TotalL;
    } else if (loss_kind == "smooth") {
        space.loss_for_ic = LossForIC::SmoothL0;
    } else {
        throw ConfigError("loss_for_ic must be 'total' or 'smooth'");
    }
    const std::string form = config.str_or("score_form", "deviance");
    if (form == "deviance") {
        space.score_form = ScoreForm::Deviance;
    } else if (form == "printed") {
        space.score_form = ScoreForm::PrintedLog;
    } else {
        throw ConfigError("score_form must be 'deviance' or 'printed'");
    }
    if (has_k_range) {
        space.k_min = config.int_or("k_min", 1);
        space.k_max = config.int_or("k_max", space.k_min);
    }
    return space;
}

fs::path ensure_out_dir(const KeyValueConfig& config,
                        const CommonOptions& options,
                        const std::string& fallback) {
    fs::path dir = options.out_dir.value_or(
        fs::path(config.str_or("out_dir", fallback)));
    fs::create_directories(dir);
    return dir;
}

std::string stop_reason_name(StopReason reason) {
    switch (reason) {
        case StopReason::Tolerance: return "tolerance";
        case StopReason::MaxIterations: return "max-iterations";
        case StopReason::EmptyComponent: return "empty-component";
    }
    return "?";
}

// Row permutation groups samples by bicluster; column permutation groups
// variables by their primary bicluster (unassigned variables last). Indices
// are 1-based positions into the original data, in display order.
void write_reorder(const fs::path& path, const Eigen::VectorXi& assignments,
                   const Eigen::MatrixXd& V) {
    const Eigen::Index n = assignments.size();
    const Eigen::Index p = V.rows();
    std::vector<int> row_order(n);
    std::iota(row_order.begin(), row_order.end(), 0);
    std::stable_sort(row_order.begin(), row_order.end(),
                     [&](int a, int b) { return assignments(a) < assignments(b); });

    std::vector<int> col_group(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        int best = -1;
        double best_abs = 0.0;
        for (Eigen::Index k = 0; k < V.cols(); ++k) {
            if (std::abs(V(j, k)) > best_abs) {
                best_abs = std::abs(V(j, k));
                best = static_cast<int>(k);
            }
        }
        col_group[j] = best >= 0 ? best : static_cast<int>(V.cols());
    }
    std::vector<int> col_order(p);
    std::iota(col_order.begin(), col_order.end(), 0);
    std::stable_sort(col_order.begin(), col_order.end(),
                     [&](int a, int b) { return col_group[a] < col_group[b]; });

    CsvTable table;
    table.column_names = {"original_index"};
    table.values.resize(n + p, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        table.row_ids.push_back("row" + std::to_string(i + 1));
        table.values(i, 0) = row_order[i] + 1;
    }
    for (Eigen::Index j = 0; j < p; ++j) {
        table.row_ids.push_back("col" + std::to_string(j + 1));
        table.values(n + j, 0) = col_order[j] + 1;
    }
    write_csv(path, table);
}

void write_fit_outputs(const fs::path& out_dir, const LoadedData& data,
                       const BiclusterResult& result, json report) {
    const ModelParams& params = result.params;
    const Eigen::Index n = params.n();
    const Eigen::Index K = params.K();

    std::vector<std::string> sample_ids = data.sample_ids;
    if (sample_ids.empty()) {
        for (Eigen::Index i = 0; i < n; ++i) {
            sample_ids.push_back("s" + std::to_string(i + 1));
        }
    }

    {
        CsvTable table;
        table.column_names.push_back("bicluster");
        for (Eigen::Index k = 0; k < K; ++k) {
            table.column_names.push_back("w" + std::to_string(k + 1));
        }
        table.row_ids = sample_ids;
        table.values.resize(n, K + 1);
        table.values.col(0) = result.assignments.cast<double>();
        table.values.rightCols(K) = params.W;
        write_csv(out_dir / "assignments.csv", table);
    }

    for (std::size_t d = 0; d < params.V.size(); ++d) {
        const Eigen::MatrixXd& Vd = params.V[d];
        // Long format: member rows carry the loading; variables in no
        // bicluster get a single bicluster-0 row so p stays recoverable.
        std::vector<std::array<double, 3>> rows;
        for (Eigen::Index j = 0; j < Vd.rows(); ++j) {
            bool member = false;
            for (std::size_t k = 0; k < result.variable_members[d].size(); ++k) {
                const auto& vars = result.variable_members[d][k];
                if (std::binary_search(vars.begin(), vars.end(),
                                       static_cast<int>(j))) {
                    rows.push_back({static_cast<double>(j + 1),
                                    static_cast<double>(k + 1),
                                    Vd(j, static_cast<Eigen::Index>(k))});
                    member = true;
                }
            }
            if (!member) {
                rows.push_back({static_cast<double>(j + 1), 0.0, 0.0});
            }
        }
        CsvTable table;
        table.column_names = {"variable", "bicluster", "loading"};
        table.values.resize(static_cast<Eigen::Index>(rows.size()), 3);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            table.row_ids.push_back("e" + std::to_string(r + 1));
            for (int c = 0; c < 3; ++c) {
                table.values(static_cast<Eigen::Index>(r), c) = rows[r][c];
            }
        }
        write_csv(out_dir / ("variables_" + data.views[d].name + ".csv"),
                  table);
        write_reorder(out_dir / ("reorder_" + data.views[d].name + ".csv"),
                      result.assignments, Vd);
    }

    write_matrix_csv(out_dir / "beta.csv", result.beta_hat, {"beta"});

    const fs::path params_dir = out_dir / "params";
    fs::create_directories(params_dir);
    write_matrix_csv(params_dir / "U.csv", params.U);
    write_matrix_csv(params_dir / "W.csv", params.W);
    for (std::size_t d = 0; d < params.V.size(); ++d) {
        const std::string& name = data.views[d].name;
        write_matrix_csv(params_dir / ("V_" + name + ".csv"), params.V[d]);
        write_matrix_csv(params_dir / ("mu_" + name + ".csv"), params.mu[d],
                         {"mu"});
    }

    json model;
    model["k"] = K;
    model["outcome_family"] = "";  // filled by caller via report? keep below
    json views_json = json::array();
    for (std::size_t d = 0; d < data.views.size(); ++d) {
        views_json.push_back({{"name", data.views[d].name},
                              {"family", data.views[d].family.name()},
                              {"p", data.views[d].p()}});
    }
    model["views"] = views_json;
    model["covariates_p"] = result.beta_hat.size() - K;
    model["outcome_family"] = report.value("outcome_family", "gaussian");
    model["non_overlapping"] = report.value("non_overlapping", false);
    model["alpha"] = report.value("alpha", 1e-2);
    model["tol"] = report.value("tol", 1e-5);
    model["max_iter"] = report.value("max_iter", 2000);
    std::ofstream(out_dir / "model.json") << model.dump(2) << '\n';

    report["iterations"] = result.iterations;
    report["converged"] = result.converged;
    report["stop_reason"] = stop_reason_name(result.stop_reason);
    report["separation_warning"] = result.separation_warning;
    report["loss_trace"] = result.loss_trace;
    std::ofstream(out_dir / "fit_report.json") << report.dump(2) << '\n';
}

// Reads a fitted model directory back for prediction.
struct SavedModel {
    BiclusterResult result;
    std::vector<std::string> view_names;
    std::vector<Family> view_families;
    std::vector<Eigen::Index> view_widths;
    Family outcome_family = Family::gaussian();
    FitConfig config;
};

SavedModel load_model(const fs::path& model_dir) {
    const fs::path model_path = model_dir / "model.json";
    if (!fs::exists(model_path)) {
        throw DataError("model.json not found in " + model_dir.string());
    }
    json model;
    std::ifstream(model_path) >> model;

    SavedModel saved;
    saved.outcome_family = Family::parse(model["outcome_family"]);
    saved.config.K = model["k"];
    saved.config.alpha = model["alpha"];
    saved.config.tol = model["tol"];
    saved.config.max_iter = model["max_iter"];
    saved.config.non_overlapping = model["non_overlapping"];

    const fs::path params_dir = model_dir / "params";
    ModelParams& params = saved.result.params;
    params.U = read_csv(params_dir / "U.csv").values;
    params.W = read_csv(params_dir / "W.csv").values;
    for (const auto& view : model["views"]) {
        const std::string name = view["name"];
        saved.view_names.push_back(name);
        saved.view_families.push_back(Family::parse(view["family"]));
        saved.view_widths.push_back(view["p"]);
        params.V.push_back(read_csv(params_dir / ("V_" + name + ".csv")).values);
        params.mu.push_back(
            read_csv(params_dir / ("mu_" + name + ".csv")).values.col(0));
    }
    saved.result.beta_hat = read_csv(model_dir / "beta.csv").values.col(0);
    params.beta = saved.result.beta_hat;
    saved.result.assignments = hard_assign(params.W);
    return saved;
}

struct ReproduceSetting {
    int n = 150;
    int p = 100;
    Family outcome_family = Family::gaussian();
    double lambda = 0.02;
    double rho = 0.5;
    double alpha = 0.1;
    double tol = 1e-9;
    int max_iter = 12000;
};

ReproduceSetting reproduce_setting(const std::string& name) {
    ReproduceSetting s;
    if (name.size() < 2 || (name[0] != 'g' && name[0] != 'b')) {
        throw ConfigError("unknown setting '" + name +
                          "'; expected g|b followed by NxP, e.g. g150x100");
    }
    s.outcome_family =
        name[0] == 'g' ? Family::gaussian() : Family::bernoulli();
    const auto x = name.find('x');
    if (x == std::string::npos) {
        throw ConfigError("setting '" + name + "' must look like g150x100");
    }
    try {
        s.n = std::stoi(name.substr(1, x - 1));
        s.p = std::stoi(name.substr(x + 1));
    } catch (const std::exception&) {
        throw ConfigError("setting '" + name + "' must look like g150x100");
    }
    return s;
}

struct RepResult {
    BiclusterAccuracy train_acc;
    FpFn train_fpfn;
    double train_error = 0.0;
    double test_error = 0.0;
    int k_used = 0;
};

RepResult run_replication(const ReproduceSetting& setting,
                          std::uint64_t seed) {
    SimConfig sim;
    sim.n = setting.n;
    sim.p = setting.p;
    sim.outcome_family = setting.outcome_family;
    sim.seed = seed;
    const SimBundle bundle = generate(sim);

    FitConfig fc;
    fc.alpha = setting.alpha;
    fc.tol = setting.tol;
    fc.max_iter = setting.max_iter;
    fc.K = sim.K;
    fc.non_overlapping = true;
    fc.weights = make_weights(setting.rho, setting.lambda, sim.n_views, fc.K);
    const BiclusterResult result =
        fit(bundle.train_views, bundle.train_outcome, fc);

    std::vector<Eigen::Index> widths(sim.n_views, sim.p);
    const BiclusterSet estimated = membership_matrices(
        result.assignments, result.variable_members, widths);
    const BiclusterSet truth =
        membership_matrices(bundle.train_truth.assignments,
                            bundle.train_truth.variable_members, widths);

    RepResult rep;
    rep.train_acc = relevance_recovery_f(estimated, truth);
    rep.train_fpfn = fp_fn(estimated, truth);
    rep.k_used = fc.K;

    Eigen::VectorXd psi_train =
        result.params.W * result.beta_hat.head(fc.K);
    Eigen::VectorXd y_hat_train(psi_train.size());
    for (Eigen::Index i = 0; i < psi_train.size(); ++i) {
        y_hat_train(i) = mean_link(sim.outcome_family, psi_train(i));
    }
    rep.train_error = outcome_error(bundle.train_outcome.y, y_hat_train,
                                    sim.outcome_family);

    const PredictionResult pred =
        predict(bundle.test_views, result, sim.outcome_family, fc);
    rep.test_error =
        outcome_error(bundle.test_outcome.y, pred.y_hat, sim.outcome_family);
    return rep;
}

}  // namespace

void run_fit(const fs::path& config_path, const CommonOptions& options) {
    const KeyValueConfig config = KeyValueConfig::load(config_path);
    LoadedData data;
    data.views = load_views(config, &data);
    data.outcome = load_outcome(config);
    validate_inputs(data.views, data.outcome);

    FitConfig fc = fit_config_from(config, options, data.views.size());
    const auto space = search_space_from(config, data.views.size());
    const fs::path out_dir = ensure_out_dir(config, options, "sib_out");

    json report;
    report["outcome_family"] = data.outcome.family.name();
    report["non_overlapping"] = fc.non_overlapping;
    report["alpha"] = fc.alpha;
    report["tol"] = fc.tol;
    report["max_iter"] = fc.max_iter;
    report["rho"] = fc.weights.rho;
    report["seed"] = fc.seed;

    BiclusterResult result;
    if (space && space->k_min > 0) {
        KSelection selection = select_k(data.views, data.outcome, fc, *space);
        SearchResult* winner = nullptr;
        for (auto& entry : selection.per_k) {
            if (entry.first == selection.k_hat) winner = &entry.second;
        }
        result = std::move(winner->best);
        fc = winner->best_config;
        report["k_selection"] = "search";
        report["k"] = selection.k_hat;
        json per_k = json::array();
        for (const auto& entry : selection.per_k) {
            json table = json::array();
            for (const auto& cand : entry.second.table) {
                table.push_back({{"lambdas", cand.lambdas},
                                 {"score", cand.score},
                                 {"q", cand.q},
                                 {"failed", cand.fit_failed}});
            }
            per_k.push_back({{"k", entry.first}, {"candidates", table}});
        }
        report["ic_table"] = per_k;
    } else if (space) {
        std::mt19937_64 rng(fc.seed);
        SearchResult search =
            random_search(data.views, data.outcome, fc, *space, rng);
        result = std::move(search.best);
        fc = search.best_config;
        report["k_selection"] = "user";
        report["k"] = fc.K;
        json table = json::array();
        for (const auto& cand : search.table) {
            table.push_back({{"lambdas", cand.lambdas},
                             {"score", cand.score},
                             {"q", cand.q},
                             {"failed", cand.fit_failed}});
        }
        report["ic_table"] = table;
    } else {
        result = fit(data.views, data.outcome, fc);
        report["k_selection"] = "user";
        report["k"] = fc.K;
    }

    json chosen = json::array();
    for (const auto& lam : fc.weights.lambdas) {
        chosen.push_back(std::vector<double>(lam.data(), lam.data() + lam.size()));
    }
    report["chosen_lambdas"] = chosen;
    write_fit_outputs(out_dir, data, result, std::move(report));
}

void run_predict(const fs::path& model_dir, const fs::path& config_path,
                 const CommonOptions& options) {
    const SavedModel saved = load_model(model_dir);
    const KeyValueConfig config = KeyValueConfig::load(config_path);

    LoadedData data;
    data.views = load_views(config, &data);
    if (data.views.size() != saved.view_names.size()) {
        throw ShapeError("model expects " +
                         std::to_string(saved.view_names.size()) + " views, " +
                         "config lists " + std::to_string(data.views.size()));
    }
    for (std::size_t d = 0; d < data.views.size(); ++d) {
        if (!(data.views[d].family == saved.view_families[d])) {
            throw ShapeError("view '" + data.views[d].name +
                             "' family differs from the saved model");
        }
        if (data.views[d].p() != saved.view_widths[d]) {
            throw ShapeError("view '" + data.views[d].name + "' has " +
                             std::to_string(data.views[d].p()) +
                             " variables, model expects " +
                             std::to_string(saved.view_widths[d]));
        }
    }

    std::optional<Eigen::MatrixXd> covariates;
    if (config.has("covariates")) {
        covariates = read_csv(config.str("covariates")).values;
    }

    FitConfig fc = saved.config;
    fc.alpha = config.num_or("alpha", fc.alpha);
    fc.tol = config.num_or("tol", fc.tol);
    fc.max_iter = config.int_or("max_iter", fc.max_iter);

    const PredictionResult pred =
        predict(data.views, saved.result, saved.outcome_family, fc, covariates);

    const fs::path out_dir = ensure_out_dir(config, options, "sib_predict");
    {
        CsvTable table;
        table.column_names = {"bicluster", "psi_y_hat", "y_hat"};
        table.row_ids = data.sample_ids;
        table.values.resize(pred.assignments.size(), 3);
        table.values.col(0) = pred.assignments.cast<double>();
        table.values.col(1) = pred.psi_y_hat;
        table.values.col(2) = pred.y_hat;
        write_csv(out_dir / "predictions.csv", table);
    }

    // A supplied true outcome is used for scoring only.
    if (config.has("truth_outcome")) {
        const auto parts = split_colon(config.str("truth_outcome"));
        if (parts.size() != 2) {
            throw ConfigError("truth_outcome must be path:family");
        }
        const Eigen::VectorXd y_true = read_csv(parts[0]).values.col(0);
        const Family family = Family::parse(parts[1]);
        json metrics;
        metrics[family.kind() == Family::Kind::Bernoulli ? "error_rate"
                                                         : "mse"] =
            outcome_error(y_true, pred.y_hat, family);
        std::ofstream(out_dir / "metrics.json") << metrics.dump(2) << '\n';
    }
}

void run_simulate(const fs::path& config_path, const CommonOptions& options) {
    const KeyValueConfig config = KeyValueConfig::load(config_path);
    SimConfig sim;
    sim.n = config.int_or("n", 150);
    sim.p = config.int_or("p", 100);
    sim.n_views = config.int_or("views", 2);
    sim.K = config.int_or("K", 3);
    sim.important_frac = config.num_or("important_frac", 0.10);
    sim.sigma2_x = config.num_or("sigma2", 1.0);
    sim.outcome_family =
        Family::parse(config.str_or("outcome_family", "gaussian"));
    sim.seed = options.seed.value_or(config.uint_or("seed", 0));
    if (config.has("scale")) {
        const auto scale = config.num_list("scale");
        sim.scale = Eigen::Map<const Eigen::VectorXd>(
            scale.data(), static_cast<Eigen::Index>(scale.size()));
    }
    if (config.has("beta_true")) {
        const auto beta = config.num_list("beta_true");
        sim.beta_true = Eigen::Map<const Eigen::VectorXd>(
            beta.data(), static_cast<Eigen::Index>(beta.size()));
    }
    const SimBundle bundle = generate(sim);

    const fs::path out_dir = ensure_out_dir(config, options, "sib_sim");
    auto write_set = [&](const std::string& prefix,
                         const std::vector<ViewMatrix>& views,
                         const OutcomeSpec& outcome, const SimTruth& truth) {
        for (std::size_t d = 0; d < views.size(); ++d) {
            write_matrix_csv(out_dir / (prefix + "_" + views[d].name + ".csv"),
                             views[d].data);
        }
        write_matrix_csv(out_dir / (prefix + "_outcome.csv"), outcome.y,
                         {"y"});
        write_matrix_csv(
            out_dir / (prefix == "train" ? "sample_truth.csv"
                                         : "test_sample_truth.csv"),
            truth.assignments.cast<double>(), {"bicluster"});
    };
    write_set("train", bundle.train_views, bundle.train_outcome,
              bundle.train_truth);
    write_set("test", bundle.test_views, bundle.test_outcome,
              bundle.test_truth);

    // Variable truth is shared between train and test by construction.
    for (std::size_t d = 0; d < bundle.train_views.size(); ++d) {
        Eigen::MatrixXd table = Eigen::MatrixXd::Zero(sim.p, 2);
        for (int j = 0; j < sim.p; ++j) table(j, 0) = j + 1;
        for (std::size_t k = 0;
             k < bundle.train_truth.variable_members[d].size(); ++k) {
            for (int j : bundle.train_truth.variable_members[d][k]) {
                table(j, 1) = static_cast<double>(k + 1);
            }
        }
        write_matrix_csv(out_dir / ("variable_truth_" +
                                    bundle.train_views[d].name + ".csv"),
                         table, {"variable", "bicluster"});
    }
}

void run_evaluate(const fs::path& estimated_dir, const fs::path& truth_dir,
                  const CommonOptions& options) {
    if (!fs::exists(truth_dir / "sample_truth.csv")) {
        throw DataError("sample_truth.csv not found in " + truth_dir.string());
    }
    if (!fs::exists(estimated_dir / "assignments.csv")) {
        throw DataError("assignments.csv not found in " +
                        estimated_dir.string());
    }

    const Eigen::VectorXi est_assign =
        read_csv(estimated_dir / "assignments.csv")
            .values.col(0)
            .cast<int>();
    const Eigen::VectorXi true_assign =
        read_csv(truth_dir / "sample_truth.csv").values.col(0).cast<int>();
    if (est_assign.size() != true_assign.size()) {
        throw ShapeError("estimated and truth sample counts differ");
    }

    // Views are discovered from the truth directory.
    std::vector<std::string> view_names;
    for (const auto& entry : fs::directory_iterator(truth_dir)) {
        const std::string name = entry.path().filename().string();
        const std::string prefix = "variable_truth_";
        if (name.rfind(prefix, 0) == 0 && entry.path().extension() == ".csv") {
            view_names.push_back(
                name.substr(prefix.size(),
                            name.size() - prefix.size() - 4));
        }
    }
    std::sort(view_names.begin(), view_names.end());
    if (view_names.empty()) {
        throw DataError("no variable_truth_<view>.csv files in " +
                        truth_dir.string());
    }

    int k_est = est_assign.maxCoeff();
    int k_true = true_assign.maxCoeff();
    std::vector<Eigen::Index> widths;
    std::vector<std::vector<std::vector<int>>> est_vars;
    std::vector<std::vector<std::vector<int>>> true_vars;
    for (const auto& name : view_names) {
        const fs::path est_path =
            estimated_dir / ("variables_" + name + ".csv");
        if (!fs::exists(est_path)) {
            throw DataError("missing " + est_path.string());
        }
        const CsvTable est_table = read_csv(est_path);
        const CsvTable true_table =
            read_csv(truth_dir / ("variable_truth_" + name + ".csv"));
        const Eigen::Index p = true_table.values.rows();
        widths.push_back(p);
        for (Eigen::Index r = 0; r < est_table.values.rows(); ++r) {
            k_est = std::max(k_est,
                             static_cast<int>(est_table.values(r, 1)));
        }
        for (Eigen::Index r = 0; r < true_table.values.rows(); ++r) {
            k_true = std::max(k_true,
                              static_cast<int>(true_table.values(r, 1)));
        }
        std::vector<std::vector<int>> est_view(k_est);
        for (Eigen::Index r = 0; r < est_table.values.rows(); ++r) {
            const int k = static_cast<int>(est_table.values(r, 1));
            const int j = static_cast<int>(est_table.values(r, 0)) - 1;
            if (k >= 1) {
                if (j < 0 || j >= p) {
                    throw DataError("variable index out of range in " +
                                    est_path.string());
                }
                est_view[k - 1].push_back(j);
            }
        }
        std::vector<std::vector<int>> true_view(k_true);
        for (Eigen::Index r = 0; r < true_table.values.rows(); ++r) {
            const int k = static_cast<int>(true_table.values(r, 1));
            const int j = static_cast<int>(true_table.values(r, 0)) - 1;
            if (k >= 1) true_view[k - 1].push_back(j);
        }
        est_vars.push_back(std::move(est_view));
        true_vars.push_back(std::move(true_view));
    }
    // Pad per-view lists so every view has K (K*) biclusters.
    for (auto& view : est_vars) view.resize(k_est);
    for (auto& view : true_vars) view.resize(k_true);

    const BiclusterSet estimated =
        membership_matrices(est_assign, est_vars, widths);
    const BiclusterSet truth =
        membership_matrices(true_assign, true_vars, widths);
    const BiclusterAccuracy acc = relevance_recovery_f(estimated, truth);
    const FpFn fpfn = fp_fn(estimated, truth);

    const fs::path out_dir = options.out_dir.value_or(estimated_dir);
    fs::create_directories(out_dir);
    json eval;
    eval["relevance"] = acc.relevance;
    eval["recovery"] = acc.recovery;
    eval["f_score"] = acc.f_score;
    eval["false_positive"] = fpfn.false_positive;
    eval["false_negative"] = fpfn.false_negative;
    std::ofstream(out_dir / "eval.json") << eval.dump(2) << '\n';
}

void run_reproduce(const std::string& setting_name, int reps,
                   const CommonOptions& options) {
    if (reps < 1) throw ConfigError("reps must be >= 1");
    const ReproduceSetting setting = reproduce_setting(setting_name);
    const std::uint64_t base_seed = options.seed.value_or(0);

    std::vector<RepResult> results(static_cast<std::size_t>(reps));
    const int n_workers =
        std::max(1, std::min(options.threads, reps));
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&, w]() {
            try {
                for (int r = w; r < reps; r += n_workers) {
                    results[static_cast<std::size_t>(r)] = run_replication(
                        setting, base_seed + static_cast<std::uint64_t>(r));
                }
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& worker : workers) worker.join();
    for (const auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }

    fs::path out_dir = options.out_dir.value_or(fs::path("sib_reproduce"));
    fs::create_directories(out_dir);

    const std::vector<std::string> columns = {
        "relevance", "recovery",  "f_score",   "false_positive",
        "false_negative", "train_error", "test_error"};
    CsvTable reps_table;
    reps_table.column_names = columns;
    reps_table.values.resize(reps, static_cast<Eigen::Index>(columns.size()));
    for (int r = 0; r < reps; ++r) {
        reps_table.row_ids.push_back("rep" + std::to_string(r + 1));
        const RepResult& rep = results[static_cast<std::size_t>(r)];
        reps_table.values.row(r) << rep.train_acc.relevance,
            rep.train_acc.recovery, rep.train_acc.f_score,
            rep.train_fpfn.false_positive, rep.train_fpfn.false_negative,
            rep.train_error, rep.test_error;
    }
    write_csv(out_dir / "replications.csv", reps_table);

    CsvTable summary;
    summary.column_names = columns;
    summary.row_ids = {setting_name};
    summary.values = reps_table.values.colwise().mean();
    write_csv(out_dir / "summary.csv", summary);

    if (!options.quiet) {
        std::cout << setting_name << " (" << reps << " reps):";
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::cout << ' ' << columns[c] << '='
                      << format_double(summary.values(0, static_cast<Eigen::Index>(c)));
        }
        std::cout << '\n';
    }
}

int run_command(const std::function<void()>& body, bool quiet) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << json{{"kind", "config"}, {"error", e.what()}}.dump()
                  << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << json{{"kind", "data"}, {"error", e.what()}}.dump()
                  << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << json{{"kind", "numerical"}, {"error", e.what()}}.dump()
                  << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << json{{"kind", "internal"}, {"error", e.what()}}.dump()
                  << '\n';
        return 3;
    }
    (void)quiet;
}

}  // namespace sib
