#include "sib/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sib/errors.hpp"

namespace sib {

namespace {

constexpr double kLogGuard = 1e-300;

std::vector<Eigen::Index> widths_of(const std::vector<ViewMatrix>& views) {
    std::vector<Eigen::Index> widths;
    widths.reserve(views.size());
    for (const auto& view : views) widths.push_back(view.p());
    return widths;
}

double l_hat_of(const BiclusterResult& result,
                const std::vector<ViewMatrix>& views,
                const OutcomeSpec& outcome, LossForIC loss_for_ic,
                const LossWeights& weights) {
    if (loss_for_ic == LossForIC::SmoothL0) {
        return loss_smooth(views, outcome, result.params, weights);
    }
    return nll_unaveraged(views, outcome, result.params);
}

// Candidate grids, one per search dimension. Shared lambda: one dimension per
// view. Per-component: K dimensions per view, view-major.
std::vector<const std::vector<double>*> dimensions(const SearchSpace& space,
                                                   int K) {
    std::vector<const std::vector<double>*> dims;
    for (const auto& grid : space.lambda_grid) {
        const int reps = space.shared_lambda ? 1 : K;
        for (int r = 0; r < reps; ++r) dims.push_back(&grid);
    }
    return dims;
}

LossWeights candidate_weights(const std::vector<double>& flat,
                              const SearchSpace& space, double rho,
                              std::size_t n_views, int K) {
    LossWeights weights;
    weights.rho = rho;
    std::size_t pos = 0;
    for (std::size_t d = 0; d < n_views; ++d) {
        Eigen::VectorXd lam(K);
        if (space.shared_lambda) {
            lam.setConstant(flat[pos++]);
        } else {
            for (int k = 0; k < K; ++k) lam(k) = flat[pos++];
        }
        weights.lambdas.push_back(lam);
    }
    return weights;
}

}  // namespace

void SearchSpace::validate() const {
    if (sigma_ebic < 0.0 || sigma_ebic > 1.0) {
        throw ConfigError("sigma_ebic must be in [0,1]");
    }
    if (lambda_grid.empty()) {
        throw ConfigError("lambda grid must have one list per view");
    }
    for (const auto& grid : lambda_grid) {
        if (grid.empty()) throw ConfigError("empty lambda grid for a view");
        for (double lam : grid) {
            if (lam < 0.0) throw ConfigError("negative lambda in grid");
        }
    }
    if (max_draws < 1) throw ConfigError("max_draws must be >= 1");
    if (k_min < 0 || k_max < k_min) {
        throw ConfigError("invalid K range");
    }
}

int selected_variable_count(const BiclusterResult& result) {
    int q = 0;
    for (const auto& Vd : result.params.V) {
        for (Eigen::Index j = 0; j < Vd.rows(); ++j) {
            if ((Vd.row(j).array() != 0.0).any()) ++q;
        }
    }
    return q;
}

double bic_from_parts(int q, Eigen::Index n, double l_hat, ScoreForm form) {
    const double model_term = q * std::log(static_cast<double>(n));
    if (form == ScoreForm::PrintedLog) {
        return model_term - 2.0 * std::log(std::max(l_hat, kLogGuard));
    }
    return model_term + 2.0 * l_hat;
}

double ebic_from_parts(int q, Eigen::Index n,
                       const std::vector<Eigen::Index>& view_widths,
                       double l_hat, double sigma, ScoreForm form) {
    double score = bic_from_parts(q, n, l_hat, form);
    for (Eigen::Index p : view_widths) {
        score += 2.0 * sigma * q * std::log(static_cast<double>(p));
    }
    return score;
}

double bic(const BiclusterResult& result, const std::vector<ViewMatrix>& views,
           const OutcomeSpec& outcome, LossForIC loss_for_ic, ScoreForm form) {
    LossWeights weights = make_weights(0.5, 0.0, views.size(),
                                       result.params.K());
    const double l_hat =
        l_hat_of(result, views, outcome, loss_for_ic, weights);
    return bic_from_parts(selected_variable_count(result),
                          views.front().n(), l_hat, form);
}

double ebic(const BiclusterResult& result, const std::vector<ViewMatrix>& views,
            const OutcomeSpec& outcome, double sigma, LossForIC loss_for_ic,
            ScoreForm form) {
    if (sigma < 0.0 || sigma > 1.0) {
        throw ConfigError("ebic: sigma must be in [0,1]");
    }
    LossWeights weights = make_weights(0.5, 0.0, views.size(),
                                       result.params.K());
    const double l_hat =
        l_hat_of(result, views, outcome, loss_for_ic, weights);
    return ebic_from_parts(selected_variable_count(result), views.front().n(),
                           widths_of(views), l_hat, sigma, form);
}

SearchResult random_search(const std::vector<ViewMatrix>& views,
                           const OutcomeSpec& outcome, const FitConfig& config,
                           const SearchSpace& space, std::mt19937_64& rng) {
    space.validate();
    if (space.lambda_grid.size() != views.size()) {
        throw ConfigError("lambda grid must have one list per view");
    }
    const auto dims = dimensions(space, config.K);

    // |grid| with overflow clamp
    double total = 1.0;
    for (const auto* dim : dims) total *= static_cast<double>(dim->size());
    const bool enumerate_all = total <= static_cast<double>(space.max_draws);
    const std::size_t n_draws =
        enumerate_all ? static_cast<std::size_t>(total)
                      : static_cast<std::size_t>(space.max_draws);

    std::vector<std::vector<std::size_t>> candidates;
    if (enumerate_all) {
        std::vector<std::size_t> idx(dims.size(), 0);
        for (std::size_t c = 0; c < n_draws; ++c) {
            candidates.push_back(idx);
            for (std::size_t d = dims.size(); d-- > 0;) {
                if (++idx[d] < dims[d]->size()) break;
                idx[d] = 0;
            }
        }
    } else {
        std::set<std::vector<std::size_t>> seen;
        while (candidates.size() < n_draws) {
            std::vector<std::size_t> idx(dims.size());
            for (std::size_t d = 0; d < dims.size(); ++d) {
                idx[d] = std::uniform_int_distribution<std::size_t>(
                    0, dims[d]->size() - 1)(rng);
            }
            if (seen.insert(idx).second) candidates.push_back(idx);
        }
    }

    SearchResult out;
    bool have_best = false;
    double best_score = 0.0;
    int best_q = 0;
    for (const auto& idx : candidates) {
        CandidateScore entry;
        for (std::size_t d = 0; d < dims.size(); ++d) {
            entry.lambdas.push_back((*dims[d])[idx[d]]);
        }
        FitConfig cand = config;
        cand.weights = candidate_weights(entry.lambdas, space,
                                         config.weights.rho, views.size(),
                                         config.K);
        try {
            BiclusterResult result = fit(views, outcome, cand);
            entry.q = selected_variable_count(result);
            entry.score =
                space.use_ebic
                    ? ebic(result, views, outcome, space.sigma_ebic,
                           space.loss_for_ic, space.score_form)
                    : bic(result, views, outcome, space.loss_for_ic,
                          space.score_form);
            const bool better =
                !have_best || entry.score < best_score ||
                (entry.score == best_score && entry.q < best_q);
            if (better) {
                have_best = true;
                best_score = entry.score;
                best_q = entry.q;
                out.best_config = cand;
                out.best = std::move(result);
            }
        } catch (const NumericalError& e) {
            entry.fit_failed = true;
            entry.failure = e.what();
        }
        out.table.push_back(std::move(entry));
    }
    if (!have_best) {
        std::string detail;
        for (const auto& entry : out.table) {
            if (entry.fit_failed) detail += "\n  " + entry.failure;
        }
        throw NumericalError("all candidate fits failed:" + detail);
    }
    return out;
}

bool has_empty_bicluster(const BiclusterResult& result) {
    const Eigen::Index K = result.params.K();
    for (int k = 1; k <= K; ++k) {
        if ((result.assignments.array() == k).count() == 0) return true;
    }
    for (Eigen::Index k = 0; k < K; ++k) {
        bool all_zero = true;
        for (const auto& Vd : result.params.V) {
            if ((Vd.col(k).array() != 0.0).any()) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) return true;
    }
    return false;
}

KSelection select_k(const std::vector<ViewMatrix>& views,
                    const OutcomeSpec& outcome, const FitConfig& config,
                    const SearchSpace& space) {
    space.validate();
    const int k_min = space.k_min > 0 ? space.k_min : config.K;
    const int k_max = space.k_max > 0 ? space.k_max : config.K;
    if (k_min < 1) throw ConfigError("select_k: K lower bound must be >= 1");

    KSelection out;
    for (int k = k_min; k <= k_max; ++k) {
        FitConfig cand = config;
        cand.K = k;
        cand.weights.lambdas.clear();  // set per candidate by the search
        std::mt19937_64 rng(config.seed + 0x9e3779b97f4a7c15ULL *
                                              static_cast<std::uint64_t>(k));
        SearchResult search = random_search(views, outcome, cand, space, rng);
        const bool empty = has_empty_bicluster(search.best);
        out.per_k.emplace_back(k, std::move(search));
        if (empty) {
            if (k == k_min) {
                throw ConfigError(
                    "select_k: K = " + std::to_string(k) +
                    " already yields an empty bicluster; try smaller lambda");
            }
            break;
        }
        out.k_hat = k;
    }
    return out;
}

}  // namespace sib
