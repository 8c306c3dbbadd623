#pragma once

#include <string>

#include "sib/errors.hpp"

namespace sib {

// Single-parameter exponential families supported by the engine.
// NegBinInit exists only for the initialization transform; it carries the
// number of failures r and is rejected as a likelihood family.
class Family {
  public:
    enum class Kind { Gaussian, Bernoulli, Poisson, NegBinInit };

    Family() = default;

    static Family gaussian() { return Family(Kind::Gaussian, 0); }
    static Family bernoulli() { return Family(Kind::Bernoulli, 0); }
    static Family poisson() { return Family(Kind::Poisson, 0); }
    static Family negbin_init(int r);

    // Parses "gaussian", "bernoulli", "poisson", "negbin:<r>".
    static Family parse(const std::string& name);

    Kind kind() const { return kind_; }
    int failures() const { return r_; }
    bool likelihood_capable() const { return kind_ != Kind::NegBinInit; }
    std::string name() const;

    bool operator==(const Family& other) const {
        return kind_ == other.kind_ && r_ == other.r_;
    }

  private:
    Family(Kind kind, int r) : kind_(kind), r_(r) {}
    Kind kind_ = Kind::Gaussian;
    int r_ = 0;
};

// Cumulant G(psi). Gaussian psi^2/2, Bernoulli log(1+e^psi) (stable form),
// Poisson e^psi.
double cumulant(const Family& f, double psi);

// Mean link G'(psi).
double mean_link(const Family& f, double psi);

// Per-entry negative log-likelihood contribution -x*psi + G(psi),
// normalization constant dropped.
double nll_entry(const Family& f, double x, double psi);

// Initialization transform h(x) mapping raw data to a natural-parameter
// starting value.
double init_transform(const Family& f, double x);

// True when x lies in the family's support (used by data validation).
bool in_support(const Family& f, double x);

}  // namespace sib
