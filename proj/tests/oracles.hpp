#pragma once

// Independent reference implementations used as test oracles. These follow
// the predicate definitions literally (1-based indexing, exhaustive checks)
// and deliberately share no code with the library implementations.

#include "cyclarb/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace oracle {

using cyclarb::Address;
using cyclarb::BigInt;
using cyclarb::SwapEvent;

/// Builds the 1-based token sequence pi[1..2k] from idx-sorted swaps and
/// checks: k >= 1, pi_1 == pi_2k, and pi_{2j} == pi_{2j+1} for all
/// j in 1..k-1, by explicit index enumeration.
inline bool is_cyclic(std::vector<SwapEvent> trade) {
  std::sort(trade.begin(), trade.end(),
            [](const SwapEvent& a, const SwapEvent& b) { return a.evt_index < b.evt_index; });
  const size_t k = trade.size();
  if (k < 1) return false;
  std::vector<Address> pi(2 * k + 1);  // pi[0] unused
  for (size_t j = 1; j <= k; ++j) {
    pi[2 * j - 1] = trade[j - 1].token_sold;
    pi[2 * j] = trade[j - 1].token_bought;
  }
  if (!(pi[1] == pi[2 * k])) return false;
  for (size_t j = 1; j + 1 <= k; ++j) {
    if (!(pi[2 * j] == pi[2 * j + 1])) return false;
  }
  return true;
}

/// Evaluates delta_kappa = sum(bought where token==kappa) - sum(sold where
/// token==kappa) for every token in the trade, then checks: some delta > 0
/// and all deltas >= 0.
inline bool is_profitable(const std::vector<SwapEvent>& trade) {
  std::set<Address> tokens;
  for (const SwapEvent& s : trade) {
    tokens.insert(s.token_sold);
    tokens.insert(s.token_bought);
  }
  bool any_positive = false;
  for (const Address& kappa : tokens) {
    BigInt delta = 0;
    for (const SwapEvent& s : trade) {
      if (s.token_bought == kappa) delta += s.amount_bought;
      if (s.token_sold == kappa) delta -= s.amount_sold;
    }
    if (delta < 0) return false;
    if (delta > 0) any_positive = true;
  }
  return any_positive;
}

/// Nearest-rank percentile by literal sort-and-index.
inline uint32_t percentile(std::vector<uint32_t> values, double q) {
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  size_t rank = static_cast<size_t>(std::ceil(q * n));
  if (rank == 0) rank = 1;
  return values[rank - 1];
}

/// Solves X'X beta = X'y by Gaussian elimination with partial pivoting in
/// long double arithmetic (the normal-equations route, independent of the
/// library's QR path). X is row-major here.
inline std::vector<double> ols_normal_equations(const std::vector<double>& y,
                                                const std::vector<std::vector<double>>& X) {
  const size_t n = X.size();
  const size_t k = X[0].size();
  std::vector<std::vector<long double>> A(k, std::vector<long double>(k + 1, 0.0L));
  for (size_t a = 0; a < k; ++a) {
    for (size_t b = 0; b < k; ++b) {
      long double acc = 0.0L;
      for (size_t i = 0; i < n; ++i) {
        acc += static_cast<long double>(X[i][a]) * static_cast<long double>(X[i][b]);
      }
      A[a][b] = acc;
    }
    long double rhs = 0.0L;
    for (size_t i = 0; i < n; ++i) {
      rhs += static_cast<long double>(X[i][a]) * static_cast<long double>(y[i]);
    }
    A[a][k] = rhs;
  }
  for (size_t col = 0; col < k; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < k; ++r) {
      if (std::abs(static_cast<double>(A[r][col])) >
          std::abs(static_cast<double>(A[pivot][col]))) {
        pivot = r;
      }
    }
    std::swap(A[col], A[pivot]);
    for (size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const long double factor = A[r][col] / A[col][col];
      for (size_t c = col; c <= k; ++c) A[r][c] -= factor * A[col][c];
    }
  }
  std::vector<double> beta(k);
  for (size_t a = 0; a < k; ++a) beta[a] = static_cast<double>(A[a][k] / A[a][a]);
  return beta;
}

}  // namespace oracle
