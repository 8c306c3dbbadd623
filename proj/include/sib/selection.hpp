#pragma once

#include <random>
#include <vector>

#include "sib/fit.hpp"

namespace sib {

// Which loss feeds the information criteria: the unaveraged total negative
// log-likelihood or the averaged differentiable part l0.
enum class LossForIC { TotalL, SmoothL0 };

// Two readings of "-2 log(L-hat)". PrintedLog takes the logarithm of the
// loss itself, guarded at 1e-300 since the loss can be non-positive.
// Deviance treats L-hat as a negative log-likelihood and scores 2*L-hat,
// which is what makes candidates with worse likelihood actually lose; it is
// the default for the search.
enum class ScoreForm { Deviance, PrintedLog };

struct SearchSpace {
    std::vector<std::vector<double>> lambda_grid;  // per view
    bool shared_lambda = true;  // one lambda per view vs one per (k, view)
    double sigma_ebic = 0.0;
    bool use_ebic = false;
    LossForIC loss_for_ic = LossForIC::TotalL;
    ScoreForm score_form = ScoreForm::Deviance;
    int max_draws = 60;
    int k_min = 0;  // 0 means "use config.K, no search"
    int k_max = 0;

    void validate() const;
};

// Number of selected variables: rows of V^(d) with any nonzero loading,
// summed over views.
int selected_variable_count(const BiclusterResult& result);

// BIC arithmetic given the pieces; exposed separately so the formula itself
// is testable. eBIC with sigma = 0 reduces to BIC exactly.
double bic_from_parts(int q, Eigen::Index n, double l_hat, ScoreForm form);
double ebic_from_parts(int q, Eigen::Index n,
                       const std::vector<Eigen::Index>& view_widths,
                       double l_hat, double sigma, ScoreForm form);

double bic(const BiclusterResult& result, const std::vector<ViewMatrix>& views,
           const OutcomeSpec& outcome,
           LossForIC loss_for_ic = LossForIC::TotalL,
           ScoreForm form = ScoreForm::Deviance);
double ebic(const BiclusterResult& result, const std::vector<ViewMatrix>& views,
            const OutcomeSpec& outcome, double sigma,
            LossForIC loss_for_ic = LossForIC::TotalL,
            ScoreForm form = ScoreForm::Deviance);

struct CandidateScore {
    std::vector<double> lambdas;  // flattened candidate, view-major
    double score = 0.0;
    int q = 0;
    bool fit_failed = false;
    std::string failure;
};

struct SearchResult {
    FitConfig best_config;
    BiclusterResult best;
    std::vector<CandidateScore> table;  // in draw order
};

// Draws min(|grid|, max_draws) distinct candidates uniformly without
// replacement, fits each, and returns the IC argmin; ties break by smaller q,
// then by draw order.
SearchResult random_search(const std::vector<ViewMatrix>& views,
                           const OutcomeSpec& outcome, const FitConfig& config,
                           const SearchSpace& space, std::mt19937_64& rng);

// True when some bicluster has no assigned sample or an all-zero loading
// column in every view.
bool has_empty_bicluster(const BiclusterResult& result);

struct KSelection {
    int k_hat = 0;
    std::vector<std::pair<int, SearchResult>> per_k;  // in search order
};

// Searches K upward from k_min, stopping at the first K whose tuned fit has
// an empty bicluster; returns the largest non-empty K.
KSelection select_k(const std::vector<ViewMatrix>& views,
                    const OutcomeSpec& outcome, const FitConfig& config,
                    const SearchSpace& space);

}  // namespace sib
