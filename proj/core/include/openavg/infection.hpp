#pragma once

#include <vector>

#include "openavg/age_distribution.hpp"
#include "openavg/bounds.hpp"
#include "openavg/ode.hpp"
#include "openavg/params.hpp"

namespace openavg {

/// Birth chain of the infected count on the complete graph: state k means
/// k agents hold the information, transitions k -> k+1 at rate k(N-k)*lambda_c,
/// state N absorbing. Stored as the bidiagonal generator (column-stochastic:
/// every column sums to zero) plus the readout weights (k-1)/(N-1).
struct InfectionChain {
    int n_agents = 2;
    double lambda_c = 0.0;
    std::vector<double> generator_diag;  ///< A[i][i] = -i(N-i)*lambda_c, i = 1..N
    std::vector<double> generator_sub;   ///< A[i+1][i] = i(N-i)*lambda_c, i = 1..N-1
    std::vector<double> weights;         ///< w = [0, 1/(N-1), ..., 1]
};

InfectionChain make_infection_chain(int n_agents, double lambda_c);

/// State occupation probabilities P(s) solving dP/ds = A P from P(0) = e1.
/// Entries in (-1e-12, 0) are clipped to 0; probability conservation is
/// checked (not enforced) after every accepted step and on the result,
/// |sum - 1| <= 1e-9, violations throw OdeError. The default tolerance is
/// tight enough that decayed components never undershoot past -1e-12.
std::vector<double> solve_pk(const InfectionChain& chain, double s,
                             const OdeOptions& opts = {.abs_tol = 5e-14, .rel_tol = 1e-11});

/// Age distribution of the Infection relaxation: cdf(s) = w^T P(s),
/// pdf(s) = w^T A P(s). Evaluations share a checkpoint cache so repeated
/// (e.g. quadrature) queries do not re-integrate from zero; the cache is
/// mutex-guarded, so the returned closures are safe to call concurrently.
/// lambda_c = 0 degenerates to an almost-surely infinite age.
AgeDistribution infection_age_cdf(const InfectionChain& chain);

/// w^T A (beta I - A)^{-1} e1 by forward substitution on the lower-bidiagonal
/// system followed by w^T(beta x - e1): O(N), no dense inverse.
/// Requires beta > 0 (throws std::invalid_argument otherwise).
double bidiagonal_resolvent_apply(const InfectionChain& chain, double beta);

/// Infection-model bound in resolvent form:
/// (N-1)/N^2 * (1 - w^T A (2 lambda_r I - A)^{-1} e1) * sigma^2.
BoundResult infection_bound_matrix(const SystemParams& params);

/// Same bound as a product-sum in L = lambda_c/lambda_r:
/// (N-1)/N^2 * (1 - h(N,L) / (1 + (N-1)L/2)) * sigma^2 with
/// h(N,L) = sum_{k=2}^{N} (k-1)/(N-1) prod_{j=1}^{k-1} j(N-j)L / (2 + (j+1)(N-j-1)L).
BoundResult infection_bound_algebraic(const SystemParams& params);

}  // namespace openavg
