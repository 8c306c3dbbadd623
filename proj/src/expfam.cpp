#include "sib/expfam.hpp"

#include <cmath>

namespace sib {

namespace {

double logit(double u) { return std::log(u / (1.0 - u)); }

[[noreturn]] void bad_family(const char* op, const Family& f) {
    throw ConfigError(std::string(op) + ": family '" + f.name() +
                      "' is not a likelihood family");
}

}  // namespace

Family Family::negbin_init(int r) {
    if (r < 1) throw ConfigError("negbin_init: r must be >= 1");
    return Family(Kind::NegBinInit, r);
}

Family Family::parse(const std::string& name) {
    if (name == "gaussian" || name == "normal") return gaussian();
    if (name == "bernoulli" || name == "binary") return bernoulli();
    if (name == "poisson") return poisson();
    if (name.rfind("negbin:", 0) == 0) {
        return negbin_init(std::stoi(name.substr(7)));
    }
    throw ConfigError("unknown family '" + name + "'");
}

std::string Family::name() const {
    switch (kind_) {
        case Kind::Gaussian: return "gaussian";
        case Kind::Bernoulli: return "bernoulli";
        case Kind::Poisson: return "poisson";
        case Kind::NegBinInit: return "negbin:" + std::to_string(r_);
    }
    return "?";
}

double cumulant(const Family& f, double psi) {
    switch (f.kind()) {
        case Family::Kind::Gaussian:
            return 0.5 * psi * psi;
        case Family::Kind::Bernoulli:
            // log(1+e^psi) without overflow for large |psi|
            return std::max(psi, 0.0) + std::log1p(std::exp(-std::abs(psi)));
        case Family::Kind::Poisson:
            return std::exp(psi);
        default:
            bad_family("cumulant", f);
    }
}

double mean_link(const Family& f, double psi) {
    switch (f.kind()) {
        case Family::Kind::Gaussian:
            return psi;
        case Family::Kind::Bernoulli:
            return 1.0 / (1.0 + std::exp(-psi));
        case Family::Kind::Poisson:
            return std::exp(psi);
        default:
            bad_family("mean_link", f);
    }
}

bool in_support(const Family& f, double x) {
    if (!std::isfinite(x)) return false;
    switch (f.kind()) {
        case Family::Kind::Gaussian:
            return true;
        case Family::Kind::Bernoulli:
            return x == 0.0 || x == 1.0;
        case Family::Kind::Poisson:
        case Family::Kind::NegBinInit:
            return x >= 0.0 && x == std::floor(x);
    }
    return false;
}

double nll_entry(const Family& f, double x, double psi) {
    if (!in_support(f, x)) {
        throw DataError("nll_entry: value " + std::to_string(x) +
                        " outside support of family '" + f.name() + "'");
    }
    return -x * psi + cumulant(f, psi);
}

double init_transform(const Family& f, double x) {
    if (!in_support(f, x)) {
        throw DataError("init_transform: value " + std::to_string(x) +
                        " outside support of family '" + f.name() + "'");
    }
    switch (f.kind()) {
        case Family::Kind::Gaussian:
            return x;
        case Family::Kind::Bernoulli:
            return logit((x + 1.0) / 3.0);
        case Family::Kind::NegBinInit:
            return logit((x + 1.0) / (f.failures() + x + 2.0));
        case Family::Kind::Poisson:
            return std::log(x + 1.0);
    }
    bad_family("init_transform", f);
}

}  // namespace sib
