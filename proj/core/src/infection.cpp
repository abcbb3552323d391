#include "openavg/infection.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace openavg {

namespace {

constexpr double kConservationTol = 1e-9;
constexpr double kNegativityTol = 1e-12;

void chain_derivative(const InfectionChain& chain, const std::vector<double>& y,
                      std::vector<double>& dydt) {
    const std::size_t n = y.size();
    dydt[0] = chain.generator_diag[0] * y[0];
    for (std::size_t i = 1; i < n; ++i)
        dydt[i] = chain.generator_sub[i - 1] * y[i - 1] + chain.generator_diag[i] * y[i];
}

void check_conservation(const std::vector<double>& p) {
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::fabs(sum - 1.0) > kConservationTol)
        throw OdeError("infection: probability mass not conserved", std::fabs(sum - 1.0));
}

std::vector<double> initial_state(int n) {
    std::vector<double> e1(static_cast<std::size_t>(n), 0.0);
    e1[0] = 1.0;
    return e1;
}

std::vector<double> integrate_chain(const InfectionChain& chain, std::vector<double> from,
                                    double t0, double t1, const OdeOptions& opts) {
    return integrate_to(
        [&chain](double, const std::vector<double>& y, std::vector<double>& dydt) {
            chain_derivative(chain, y, dydt);
        },
        std::move(from), t0, t1, opts,
        [](double, const std::vector<double>& y) { check_conservation(y); });
}

/// Monotone checkpoint table for P(s): a query integrates forward from the
/// closest checkpoint at or below s, so scattered quadrature evaluations
/// stay cheap. The chain is autonomous, which makes restarts exact.
class PkCache {
public:
    explicit PkCache(InfectionChain chain) : chain_(std::move(chain)) {
        opts_.abs_tol = 1e-12;
        opts_.rel_tol = 1e-12;
        checkpoints_[0.0] = initial_state(chain_.n_agents);
    }

    std::vector<double> at(double s) {
        if (s <= 0.0) return initial_state(chain_.n_agents);
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = checkpoints_.upper_bound(s);
        --it;  // never past begin(): key 0.0 is always present
        if (it->first == s) return it->second;
        auto state = integrate_chain(chain_, it->second, it->first, s, opts_);
        checkpoints_.emplace(s, state);
        return state;
    }

    const InfectionChain& chain() const { return chain_; }

private:
    InfectionChain chain_;
    OdeOptions opts_;
    std::map<double, std::vector<double>> checkpoints_;
    std::mutex mutex_;
};

}  // namespace

InfectionChain make_infection_chain(int n_agents, double lambda_c) {
    if (n_agents < 2) throw std::invalid_argument("InfectionChain: n_agents must be >= 2");
    if (!(lambda_c >= 0.0)) throw std::invalid_argument("InfectionChain: lambda_c must be >= 0");

    InfectionChain chain;
    chain.n_agents = n_agents;
    chain.lambda_c = lambda_c;
    const double n = static_cast<double>(n_agents);
    chain.generator_diag.resize(n_agents);
    chain.generator_sub.resize(n_agents - 1);
    chain.weights.resize(n_agents);
    for (int i = 1; i <= n_agents; ++i) {
        const double flow = static_cast<double>(i) * (n - i) * lambda_c;
        chain.generator_diag[i - 1] = -flow;
        if (i < n_agents) chain.generator_sub[i - 1] = flow;
        chain.weights[i - 1] = static_cast<double>(i - 1) / (n - 1.0);
    }
    return chain;
}

std::vector<double> solve_pk(const InfectionChain& chain, double s, const OdeOptions& opts) {
    if (!(s >= 0.0)) throw std::invalid_argument("solve_pk: s must be >= 0");
    auto p = integrate_chain(chain, initial_state(chain.n_agents), 0.0, s, opts);
    for (double& v : p) {
        if (v < 0.0) {
            if (v < -kNegativityTol)
                throw OdeError("solve_pk: probability below -1e-12", -v);
            v = 0.0;
        }
    }
    check_conservation(p);
    return p;
}

AgeDistribution infection_age_cdf(const InfectionChain& chain) {
    if (chain.lambda_c == 0.0) return no_information_age();

    auto cache = std::make_shared<PkCache>(chain);
    const int n = chain.n_agents;

    // row vector w^T A: column j of A holds diag[j] and sub[j]
    std::vector<double> weighted_rates(n, 0.0);
    for (int j = 0; j < n - 1; ++j)
        weighted_rates[j] =
            chain.weights[j] * chain.generator_diag[j] + chain.weights[j + 1] * chain.generator_sub[j];

    AgeDistribution age;
    age.cdf = [cache](double s) {
        const auto p = cache->at(s);
        const auto& w = cache->chain().weights;
        double acc = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) acc += w[k] * p[k];
        return acc;
    };
    age.pdf = [cache, weighted_rates](double s) {
        const auto p = cache->at(s);
        double acc = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) acc += weighted_rates[k] * p[k];
        return acc;
    };
    age.mass_at_infinity = 0.0;

    // slowest decay mode has rate (N-1)*lambda_c; the defective eigenvalue
    // adds a polynomial factor, so verify and stretch if needed
    double cutoff =
        (-std::log(kTailTolerance) + 2.0 * std::log(static_cast<double>(n)) + 2.0) /
        ((n - 1) * chain.lambda_c);
    for (int i = 0; i < 64 && 1.0 - age.cdf(cutoff) >= kTailTolerance; ++i) cutoff *= 1.5;
    age.tail_cutoff = cutoff;
    return age;
}

double bidiagonal_resolvent_apply(const InfectionChain& chain, double beta) {
    if (!(beta > 0.0))
        throw std::invalid_argument("bidiagonal_resolvent_apply: resolvent undefined for beta <= 0");

    // forward substitution on (beta I - A) x = e1
    const int n = chain.n_agents;
    double x = 1.0 / (beta - chain.generator_diag[0]);
    double acc = chain.weights[0] * x;
    for (int i = 1; i < n; ++i) {
        x = chain.generator_sub[i - 1] * x / (beta - chain.generator_diag[i]);
        acc += chain.weights[i] * x;
    }
    // w^T A (beta I - A)^{-1} e1 = w^T (beta x - e1) = beta w^T x since w[0] = 0
    return beta * acc;
}

namespace {

BoundResult infection_limit_case(const SystemParams& params, BoundMethod method) {
    BoundResult result;
    result.method = method;
    result.params = params;
    if (params.lambda_c == 0.0)
        throw std::invalid_argument("infection bound: indeterminate for lambda_r = lambda_c = 0");
    result.value = 0.0;
    result.limit_case = true;
    return result;
}

}  // namespace

BoundResult infection_bound_matrix(const SystemParams& params) {
    params.validate();
    if (params.lambda_r == 0.0)
        return infection_limit_case(params, BoundMethod::infection_matrix);

    const auto chain = make_infection_chain(params.n_agents, params.lambda_c);
    BoundResult result;
    result.method = BoundMethod::infection_matrix;
    result.params = params;
    result.value = no_information_mse(params) *
                   (1.0 - bidiagonal_resolvent_apply(chain, 2.0 * params.lambda_r));
    return result;
}

BoundResult infection_bound_algebraic(const SystemParams& params) {
    params.validate();
    if (params.lambda_r == 0.0)
        return infection_limit_case(params, BoundMethod::infection_algebraic);

    const double n = static_cast<double>(params.n_agents);
    const double ratio = params.lambda_c / params.lambda_r;

    // h(N, L) with the running product reused across k
    double product = 1.0;
    double h = 0.0;
    for (int k = 2; k <= params.n_agents; ++k) {
        const double j = static_cast<double>(k - 1);
        product *= j * (n - j) * ratio / (2.0 + (j + 1.0) * (n - j - 1.0) * ratio);
        h += j / (n - 1.0) * product;
    }

    BoundResult result;
    result.method = BoundMethod::infection_algebraic;
    result.params = params;
    result.value =
        no_information_mse(params) * (1.0 - h / (1.0 + 0.5 * (n - 1.0) * ratio));
    return result;
}

}  // namespace openavg
