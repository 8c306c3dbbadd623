#include "sib/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sib/errors.hpp"

namespace sib {

namespace {

// One-hot rows drawn uniformly over K, redrawn until every bicluster has at
// least two samples (empty true biclusters would break the metrics).
Eigen::MatrixXd draw_w(int n, int K, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, K - 1);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, K);
        Eigen::VectorXi counts = Eigen::VectorXi::Zero(K);
        for (int i = 0; i < n; ++i) {
            const int k = pick(rng);
            w(i, k) = 1.0;
            counts(k) += 1;
        }
        if ((counts.array() >= 2).all()) return w;
    }
    throw ConfigError("could not draw W with every bicluster of size >= 2; "
                      "n too small for K");
}

Eigen::MatrixXd uniform_matrix(int rows, int cols, double lo, double hi,
                               std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) m(i, j) = dist(rng);
    }
    return m;
}

struct ViewTemplate {
    Eigen::MatrixXd v;        // p x K, U(0.5, 1)
    Eigen::MatrixXi gamma;    // p x K indicator
    Eigen::VectorXd mu;       // length p, N(0, 1)
};

// One draw of views + outcome given the sample structure W.
void draw_set(const SimConfig& config,
              const std::vector<ViewTemplate>& templates,
              const Eigen::MatrixXd& w, const Eigen::MatrixXd& u,
              std::mt19937_64& rng, std::vector<ViewMatrix>* views,
              OutcomeSpec* outcome, SimTruth* truth) {
    std::normal_distribution<double> noise(0.0, std::sqrt(config.sigma2_x));
    const Eigen::MatrixXd uw = (u.array() * w.array()).matrix();

    views->clear();
    for (int d = 0; d < config.n_views; ++d) {
        const ViewTemplate& t = templates[d];
        const Eigen::MatrixXd loadings =
            (t.v.array() * t.gamma.cast<double>().array()).matrix();
        Eigen::MatrixXd psi =
            uw * config.scale.asDiagonal() * loadings.transpose();
        psi.rowwise() += t.mu.transpose();
        if (config.sigma2_x > 0.0) {
            for (int j = 0; j < config.p; ++j) {
                for (int i = 0; i < config.n; ++i) psi(i, j) += noise(rng);
            }
        }
        ViewMatrix view;
        view.data = std::move(psi);
        view.family = Family::gaussian();
        view.name = "view" + std::to_string(d + 1);
        views->push_back(std::move(view));
    }

    const Eigen::VectorXd beta = config.effective_beta();
    const Eigen::VectorXd psi_y = w * beta;
    outcome->family = config.outcome_family;
    outcome->y.resize(config.n);
    if (config.outcome_family.kind() == Family::Kind::Gaussian) {
        std::normal_distribution<double> y_noise(0.0, 1.0);
        for (int i = 0; i < config.n; ++i) {
            outcome->y(i) = psi_y(i) + y_noise(rng);
        }
    } else {
        // Redraw until each bicluster has both classes, when possible.
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const Eigen::VectorXi assign = hard_assign(w);
        for (int attempt = 0; attempt < 100; ++attempt) {
            for (int i = 0; i < config.n; ++i) {
                const double prob = 1.0 / (1.0 + std::exp(-psi_y(i)));
                outcome->y(i) = unif(rng) < prob ? 1.0 : 0.0;
            }
            bool balanced = true;
            for (int k = 1; k <= config.K; ++k) {
                bool has_pos = false;
                bool has_neg = false;
                for (int i = 0; i < config.n; ++i) {
                    if (assign(i) != k) continue;
                    (outcome->y(i) > 0.5 ? has_pos : has_neg) = true;
                }
                if (!has_pos || !has_neg) balanced = false;
            }
            if (balanced) break;
        }
    }

    truth->assignments = hard_assign(w);
    truth->variable_members.clear();
    for (int d = 0; d < config.n_views; ++d) {
        std::vector<std::vector<int>> per_k(config.K);
        for (int j = 0; j < config.p; ++j) {
            for (int k = 0; k < config.K; ++k) {
                if (templates[d].gamma(j, k) == 1) per_k[k].push_back(j);
            }
        }
        truth->variable_members.push_back(std::move(per_k));
    }
}

}  // namespace

Eigen::VectorXd SimConfig::effective_beta() const {
    if (beta_true.size() > 0) return beta_true;
    if (outcome_family.kind() == Family::Kind::Bernoulli) {
        return (Eigen::VectorXd(3) << 1.5, 0.0, -1.5).finished().head(K);
    }
    return (Eigen::VectorXd(3) << 1.0, -1.0, -5.0).finished().head(K);
}

void SimConfig::validate() const {
    if (n < 2 || p < 1 || n_views < 1 || K < 1) {
        throw ConfigError("simulation dimensions must be positive");
    }
    if (important_frac <= 0.0 || important_frac > 1.0) {
        throw ConfigError("important_frac must be in (0, 1]");
    }
    if (K * important_per_bicluster() > p) {
        throw ConfigError("infeasible simulation: K * l = " +
                          std::to_string(K * important_per_bicluster()) +
                          " exceeds p = " + std::to_string(p));
    }
    if (important_per_bicluster() < 1) {
        throw ConfigError("important_frac too small: no important variables");
    }
    if (scale.size() < K) {
        throw ConfigError("scale vector shorter than K");
    }
    if (beta_true.size() > 0 && beta_true.size() != K) {
        throw ConfigError("beta_true length must equal K");
    }
    if (beta_true.size() == 0 && K > 3) {
        throw ConfigError("beta_true is required when K > 3");
    }
    if (sigma2_x < 0.0) throw ConfigError("sigma2_x must be non-negative");
}

Eigen::MatrixXi assign_gamma(int p, int K, int l, std::mt19937_64& rng) {
    if (K * l > p) {
        throw ConfigError("assign_gamma: K * l exceeds p");
    }
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::MatrixXi gamma = Eigen::MatrixXi::Zero(p, K);
    int next = 0;
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < l; ++i) gamma(order[next++], k) = 1;
    }
    return gamma;
}

SimBundle generate(const SimConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    const int l = config.important_per_bicluster();

    std::vector<ViewTemplate> templates;
    std::normal_distribution<double> std_normal(0.0, 1.0);
    for (int d = 0; d < config.n_views; ++d) {
        ViewTemplate t;
        t.v = uniform_matrix(config.p, config.K, 0.5, 1.0, rng);
        t.gamma = assign_gamma(config.p, config.K, l, rng);
        t.mu.resize(config.p);
        for (int j = 0; j < config.p; ++j) t.mu(j) = std_normal(rng);
        templates.push_back(std::move(t));
    }

    SimBundle bundle;
    {
        const Eigen::MatrixXd w = draw_w(config.n, config.K, rng);
        const Eigen::MatrixXd u =
            uniform_matrix(config.n, config.K, 0.5, 1.0, rng);
        draw_set(config, templates, w, u, rng, &bundle.train_views,
                 &bundle.train_outcome, &bundle.train_truth);
    }
    {
        const Eigen::MatrixXd w = draw_w(config.n, config.K, rng);
        const Eigen::MatrixXd u =
            uniform_matrix(config.n, config.K, 0.5, 1.0, rng);
        draw_set(config, templates, w, u, rng, &bundle.test_views,
                 &bundle.test_outcome, &bundle.test_truth);
    }
    return bundle;
}

}  // namespace sib
