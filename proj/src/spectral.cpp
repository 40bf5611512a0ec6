#include "cutoff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cutoff/errors.hpp"

namespace cutoff {

namespace {

const std::size_t MAX_STATES = 2048;
const double ROW_SUM_TOL = 1e-10;
const double REVERSIBILITY_REL_TOL = 1e-9;
const double STATIONARY_EIGEN_TOL = 1e-12; // relative to spectral radius
const double RATE_MERGE_REL_TOL = 1e-9;
const double WEIGHT_DROP_REL_TOL = 1e-12;
const double POISSON_TAIL = 1e-15;

// Strong connectivity of the support graph {i -> j : Q_ij > 0}.
bool strongly_connected(const Generator &g) {
  const std::size_t n = g.states;
  auto reach = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        const double q = transpose ? g.at(v, u) : g.at(u, v);
        if (u != v && q > 0.0 && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return std::count(seen.begin(), seen.end(), 1) == static_cast<long>(n);
  };
  return reach(false) && reach(true);
}

// Dense Gaussian elimination with partial pivoting; A is n x n row-major,
// overwritten. Returns false on a vanishing pivot.
bool solve_inplace(std::vector<double> &A, std::vector<double> &b,
                   std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
    if (std::abs(A[piv * n + col]) < 1e-300) return false;
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k)
        std::swap(A[piv * n + k], A[col * n + k]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r * n + col] / A[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) A[r * n + k] -= f * A[col * n + k];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= A[i * n + k] * b[k];
    b[i] = s / A[i * n + i];
  }
  return true;
}

// Cyclic Jacobi on a symmetric matrix. Rotates every off-diagonal pair per
// sweep until the off-diagonal Frobenius mass is negligible against the
// initial norm. V accumulates eigenvectors as columns.
void jacobi_eigen(std::vector<double> &S, std::vector<double> &V,
                  std::size_t n) {
  V.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) V[i * n + i] = 1.0;
  double norm0 = 0.0;
  for (double x : S) norm0 += x * x;
  norm0 = std::sqrt(norm0);
  const double target = 1e-12 * std::max(norm0, 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        off += 2.0 * S[p * n + q] * S[p * n + q];
    if (std::sqrt(off) <= target) return;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = S[p * n + q];
        if (apq == 0.0) continue;
        const double app = S[p * n + p];
        const double aqq = S[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = S[k * n + p];
          const double skq = S[k * n + q];
          S[k * n + p] = c * skp - s * skq;
          S[k * n + q] = s * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = S[p * n + k];
          const double sqk = S[q * n + k];
          S[p * n + k] = c * spk - s * sqk;
          S[q * n + k] = s * spk + c * sqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = V[k * n + p];
          const double vkq = V[k * n + q];
          V[k * n + p] = c * vkp - s * vkq;
          V[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

} // namespace

Generator make_generator(std::size_t states, std::vector<double> q) {
  if (states < 2)
    throw std::invalid_argument("generator needs at least two states");
  if (states > MAX_STATES)
    throw std::invalid_argument("generator exceeds the size cap of 2048");
  if (q.size() != states * states)
    throw std::invalid_argument("generator matrix is not states x states");
  Generator g{states, std::move(q)};
  for (std::size_t i = 0; i < states; ++i) {
    double row_sum = 0.0, row_scale = 0.0;
    for (std::size_t j = 0; j < states; ++j) {
      const double v = g.at(i, j);
      if (!std::isfinite(v))
        throw std::invalid_argument("generator entries must be finite");
      if (i != j && v < 0.0)
        throw std::invalid_argument("off-diagonal rates must be nonnegative");
      row_sum += v;
      row_scale = std::max(row_scale, std::abs(v));
    }
    if (std::abs(row_sum) > ROW_SUM_TOL * std::max(1.0, row_scale))
      throw std::invalid_argument("row " + std::to_string(i) +
                                  " does not sum to zero");
  }
  return g;
}

std::vector<double> stationary_distribution(const Generator &g) {
  if (!strongly_connected(g))
    raise(errc::not_irreducible, "support graph is not strongly connected");
  const std::size_t n = g.states;
  // pi Q = 0 column equations with the last one swapped for normalization
  std::vector<double> A(n * n);
  std::vector<double> b(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      A[j * n + i] = g.at(i, j); // equation j: sum_i pi_i Q_ij = 0
  for (std::size_t i = 0; i < n; ++i) A[(n - 1) * n + i] = 1.0;
  b[n - 1] = 1.0;
  if (!solve_inplace(A, b, n))
    raise(errc::not_irreducible, "stationary solve degenerated");
  double total = 0.0;
  for (double x : b) {
    if (!(x > 0.0))
      raise(errc::not_irreducible, "stationary solution is not positive");
    total += x;
  }
  for (double &x : b) x /= total;
  return b;
}

ExpMixture chi_square_mixture(const Generator &g, std::size_t start) {
  const std::size_t n = g.states;
  if (start >= n)
    throw std::invalid_argument("start state out of range");
  const std::vector<double> pi = stationary_distribution(g);

  // detailed balance: pi_i Q_ij == pi_j Q_ji
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double fwd = pi[i] * g.at(i, j);
      const double bwd = pi[j] * g.at(j, i);
      const double scale = std::max(std::abs(fwd), std::abs(bwd));
      if (std::abs(fwd - bwd) > REVERSIBILITY_REL_TOL * scale)
        raise(errc::not_reversible,
              "detailed balance fails between states " + std::to_string(i) +
                  " and " + std::to_string(j));
    }
  }

  // S = D^(1/2) Q D^(-1/2), symmetrized against round-off
  std::vector<double> S(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      S[i * n + j] = std::sqrt(pi[i] / pi[j]) * g.at(i, j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (S[i * n + j] + S[j * n + i]);
      S[i * n + j] = S[j * n + i] = avg;
    }

  std::vector<double> V;
  jacobi_eigen(S, V, n);

  double radius = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    radius = std::max(radius, std::abs(S[j * n + j]));
  const double zero_tol = STATIONARY_EIGEN_TOL * std::max(radius, 1e-300);

  // weights psi_j(start)^2 / pi_start for the non-stationary eigenpairs
  struct Component {
    double rate;
    double weight;
  };
  std::vector<Component> comps;
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = S[j * n + j];
    if (std::abs(lambda) <= zero_tol) continue;
    const double psi = V[start * n + j];
    comps.push_back({2.0 * std::abs(lambda), psi * psi / pi[start]});
  }
  if (comps.empty())
    raise(errc::degenerate_leading_term, "no decaying eigencomponent found");
  std::sort(comps.begin(), comps.end(),
            [](const Component &a, const Component &b) {
              return a.rate < b.rate;
            });

  // merge numerically equal rates
  std::vector<Component> merged;
  for (const Component &c : comps) {
    if (!merged.empty() &&
        std::abs(c.rate - merged.back().rate) <=
            RATE_MERGE_REL_TOL * std::max(1.0, c.rate))
      merged.back().weight += c.weight;
    else
      merged.push_back(c);
  }

  double total = 0.0;
  for (const Component &c : merged) total += c.weight;
  if (!(merged.front().weight > WEIGHT_DROP_REL_TOL * total))
    raise(errc::degenerate_leading_term,
          "slowest eigencomponent carries no weight at the start state");

  std::vector<ExpTerm> terms;
  for (const Component &c : merged) {
    if (c.weight <= WEIGHT_DROP_REL_TOL * total) continue; // eigen-noise
    terms.push_back({std::log(c.weight), c.rate});
  }
  return build_mixture_log(std::move(terms));
}

std::vector<double> matrix_exponential_row(const Generator &g,
                                           std::size_t start, double t) {
  const std::size_t n = g.states;
  if (start >= n)
    throw std::invalid_argument("start state out of range");
  if (!(t >= 0.0))
    throw std::invalid_argument("time must be nonnegative");

  double lambda = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    lambda = std::max(lambda, -g.at(i, i));
  if (lambda == 0.0 || t == 0.0) {
    std::vector<double> row(n, 0.0);
    row[start] = 1.0;
    return row;
  }

  // K = I + Q/lambda is stochastic; exp(tQ) = sum_k Pois(lambda t, k) K^k.
  const double lt = lambda * t;
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      K[i * n + j] = (i == j ? 1.0 : 0.0) + g.at(i, j) / lambda;

  std::vector<double> v(n, 0.0), next(n), out(n, 0.0);
  v[start] = 1.0;
  // Poisson weights by log recurrence so large lambda t cannot underflow
  // the k = 0 start before the mode is reached.
  double log_w = -lt;
  double cum = 0.0;
  const std::size_t kmax =
      200 + static_cast<std::size_t>(lt + 60.0 * std::sqrt(lt + 1.0));
  for (std::size_t k = 0; k <= kmax; ++k) {
    if (k > 0) {
      log_w += std::log(lt / static_cast<double>(k));
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i] * K[i * n + j];
        next[j] = s;
      }
      v.swap(next);
    }
    const double w = std::exp(log_w);
    for (std::size_t j = 0; j < n; ++j) out[j] += w * v[j];
    cum += w;
    if (k > lt && 1.0 - cum < POISSON_TAIL) break;
  }
  return out;
}

double chi_square_reference(const Generator &g, const std::vector<double> &pi,
                            std::size_t start, double t) {
  const std::vector<double> row = matrix_exponential_row(g, start, t);
  double acc = 0.0;
  for (std::size_t y = 0; y < g.states; ++y) {
    const double d = row[y] - pi[y];
    acc += d * d / pi[y];
  }
  return acc;
}

} // namespace cutoff
