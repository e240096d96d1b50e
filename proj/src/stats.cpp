#include "cyclarb/stats.hpp"

#include "cyclarb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace cyclarb {

double garman_klass(const OhlcBar& bar) {
  const double hl = std::log(bar.high) - std::log(bar.low);
  const double co = std::log(bar.close) - std::log(bar.open);
  const double radicand = 0.5 * hl * hl - (2.0 * std::numbers::ln2 - 1.0) * co * co;
  // Non-negative in exact arithmetic; guard the sqrt against rounding.
  return std::sqrt(std::max(radicand, 0.0));
}

std::vector<std::pair<Date, double>> first_difference(
    const std::vector<std::pair<Date, double>>& series, bool allow_gaps,
    uint64_t* gaps_skipped) {
  std::vector<std::pair<Date, double>> out;
  if (series.size() < 2) return out;
  out.reserve(series.size() - 1);
  for (size_t i = 1; i < series.size(); ++i) {
    const auto& [prev_date, prev_value] = series[i - 1];
    const auto& [date, value] = series[i];
    if (date.days() != prev_date.days() + 1) {
      if (date.days() <= prev_date.days()) {
        throw Error("first_difference: series not strictly date-sorted near " +
                    date.to_string());
      }
      if (!allow_gaps) {
        throw Error("first_difference: gap between " + prev_date.to_string() + " and " +
                    date.to_string());
      }
      if (gaps_skipped) ++*gaps_skipped;
      continue;
    }
    out.emplace_back(date, value - prev_value);
  }
  return out;
}

RegressionFrame build_frame(const std::vector<DailyCounts>& counts,
                            const std::vector<OhlcBar>& ohlc, bool allow_gaps,
                            uint64_t* gaps_skipped) {
  std::map<int32_t, const OhlcBar*> bars;
  for (const OhlcBar& bar : ohlc) bars[bar.date.days()] = &bar;

  // Raw per-day series, validated and joined on date.
  std::vector<std::pair<Date, double>> cyclic, cyclic_trade, price, volatility, retail, agg_frac;
  std::vector<DailyCounts> sorted = counts;
  std::sort(sorted.begin(), sorted.end(),
            [](const DailyCounts& a, const DailyCounts& b) { return a.date < b.date; });
  for (const DailyCounts& day : sorted) {
    auto it = bars.find(day.date.days());
    if (it == bars.end()) {
      throw Error("build_frame: no OHLC bar for " + day.date.to_string());
    }
    if (day.retail_txs == 0) {
      throw Error("build_frame: zero retail trades on " + day.date.to_string() +
                  "; aggregator fraction undefined");
    }
    cyclic.emplace_back(day.date, day.cyclic_txs);
    cyclic_trade.emplace_back(day.date, day.cyclic_trade_txs);
    price.emplace_back(day.date, it->second->close);
    volatility.emplace_back(day.date, garman_klass(*it->second));
    retail.emplace_back(day.date, day.retail_txs);
    agg_frac.emplace_back(day.date, day.retail_agg_trades / day.retail_txs);
  }

  const auto d_cyclic = first_difference(cyclic, allow_gaps, gaps_skipped);
  const auto d_cyclic_trade = first_difference(cyclic_trade, allow_gaps);
  const auto d_price = first_difference(price, allow_gaps);
  const auto d_volatility = first_difference(volatility, allow_gaps);
  const auto d_retail = first_difference(retail, allow_gaps);
  const auto d_agg_frac = first_difference(agg_frac, allow_gaps);

  RegressionFrame frame;
  frame.dates.reserve(d_cyclic.size());
  for (size_t i = 0; i < d_cyclic.size(); ++i) {
    frame.dates.push_back(d_cyclic[i].first);
    frame.d_cyclic_txs.push_back(d_cyclic[i].second);
    frame.d_cyclic_trade_txs.push_back(d_cyclic_trade[i].second);
    frame.d_price.push_back(d_price[i].second);
    frame.d_volatility.push_back(d_volatility[i].second);
    frame.d_retail_txs.push_back(d_retail[i].second);
    frame.d_retail_agg_frac.push_back(d_agg_frac[i].second);
  }
  return frame;
}

namespace {

/// Two-sided p-value from the standard normal: 2 * (1 - Phi(|t|)).
double normal_p_value(double t) {
  return std::erfc(std::abs(t) / std::numbers::sqrt2);
}

}  // namespace

std::string OlsResult::stars(size_t coefficient) const {
  const double p = p_values.at(coefficient);
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

OlsResult ols_fit(std::span<const double> y, const Matrix& X) {
  const size_t n = X.rows();
  const size_t k = X.cols();
  if (y.size() != n) throw Error("ols_fit: y length does not match design rows");
  if (n < k + 1) {
    throw Error("ols_fit: need at least " + std::to_string(k + 1) + " rows, got " +
                std::to_string(n));
  }

  // Householder QR of X, applied to y in lockstep.
  Matrix R = X;
  std::vector<double> qty(y.begin(), y.end());
  std::vector<double> v(n);
  double max_diag = 0.0;
  for (size_t j = 0; j < k; ++j) {
    double norm = 0.0;
    for (size_t i = j; i < n; ++i) norm += R.at(i, j) * R.at(i, j);
    norm = std::sqrt(norm);
    max_diag = std::max(max_diag, norm);
    if (norm <= 1e-12 * std::max(max_diag, 1.0)) {
      throw Error("ols_fit: design matrix is rank deficient at column " + std::to_string(j));
    }
    if (R.at(j, j) > 0) norm = -norm;
    for (size_t i = j; i < n; ++i) v[i] = R.at(i, j);
    v[j] -= norm;
    double vnorm_sq = 0.0;
    for (size_t i = j; i < n; ++i) vnorm_sq += v[i] * v[i];
    if (vnorm_sq == 0.0) continue;
    for (size_t c = j; c < k; ++c) {
      double dot = 0.0;
      for (size_t i = j; i < n; ++i) dot += v[i] * R.at(i, c);
      const double scale = 2.0 * dot / vnorm_sq;
      for (size_t i = j; i < n; ++i) R.at(i, c) -= scale * v[i];
    }
    double dot = 0.0;
    for (size_t i = j; i < n; ++i) dot += v[i] * qty[i];
    const double scale = 2.0 * dot / vnorm_sq;
    for (size_t i = j; i < n; ++i) qty[i] -= scale * v[i];
  }

  // Back-substitute R beta = Q'y.
  OlsResult result;
  result.obs = n;
  result.beta.assign(k, 0.0);
  for (size_t j = k; j-- > 0;) {
    double acc = qty[j];
    for (size_t c = j + 1; c < k; ++c) acc -= R.at(j, c) * result.beta[c];
    result.beta[j] = acc / R.at(j, j);
  }

  result.residuals.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double fitted = 0.0;
    for (size_t c = 0; c < k; ++c) fitted += X.at(i, c) * result.beta[c];
    result.residuals[i] = y[i] - fitted;
  }

  // R inverse (upper triangular), then (X'X)^-1 = R^-1 R^-T.
  Matrix rinv(k, k);
  for (size_t j = 0; j < k; ++j) {
    rinv.at(j, j) = 1.0 / R.at(j, j);
    for (size_t i = j; i-- > 0;) {
      double acc = 0.0;
      for (size_t c = i + 1; c <= j; ++c) acc += R.at(i, c) * rinv.at(c, j);
      rinv.at(i, j) = -acc / R.at(i, i);
    }
  }
  Matrix xtx_inv(k, k);
  for (size_t a = 0; a < k; ++a) {
    for (size_t b = a; b < k; ++b) {
      double acc = 0.0;
      for (size_t c = std::max(a, b); c < k; ++c) acc += rinv.at(a, c) * rinv.at(b, c);
      xtx_inv.at(a, b) = acc;
      xtx_inv.at(b, a) = acc;
    }
  }

  // HC1: (n/(n-k)) * (X'X)^-1 (sum e_i^2 x_i x_i') (X'X)^-1.
  std::vector<double> esq(n);
  for (size_t i = 0; i < n; ++i) esq[i] = result.residuals[i] * result.residuals[i];
  Matrix meat(k, k);
  for (size_t a = 0; a < k; ++a) {
    for (size_t b = a; b < k; ++b) {
      const double m = kernels::weighted_dot_f64(X.column(a), X.column(b), esq);
      meat.at(a, b) = m;
      meat.at(b, a) = m;
    }
  }
  const double dof_scale = static_cast<double>(n) / static_cast<double>(n - k);
  result.robust_se.assign(k, 0.0);
  result.t_values.assign(k, 0.0);
  result.p_values.assign(k, 1.0);
  for (size_t a = 0; a < k; ++a) {
    // variance of beta_a: row a of (X'X)^-1 * meat * (X'X)^-1, diagonal entry
    double var = 0.0;
    for (size_t b = 0; b < k; ++b) {
      double inner = 0.0;
      for (size_t c = 0; c < k; ++c) inner += meat.at(b, c) * xtx_inv.at(c, a);
      var += xtx_inv.at(a, b) * inner;
    }
    var *= dof_scale;
    result.robust_se[a] = std::sqrt(std::max(var, 0.0));
    if (result.robust_se[a] > 0) {
      result.t_values[a] = result.beta[a] / result.robust_se[a];
      result.p_values[a] = normal_p_value(result.t_values[a]);
    }
  }

  // Fit statistics (R^2 against the mean model).
  double y_mean = 0.0;
  for (double val : y) y_mean += val;
  y_mean /= static_cast<double>(n);
  double tss = 0.0, rss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    tss += (y[i] - y_mean) * (y[i] - y_mean);
    rss += result.residuals[i] * result.residuals[i];
  }
  result.r2 = tss == 0.0 ? 1.0 : 1.0 - rss / tss;
  result.adj_r2 =
      1.0 - (1.0 - result.r2) * (static_cast<double>(n - 1) / static_cast<double>(n - k));
  if (k > 1) {
    const double ess = tss - rss;
    const double denom = rss / static_cast<double>(n - k);
    result.f_stat = denom == 0.0 ? std::numeric_limits<double>::infinity()
                                 : (ess / static_cast<double>(k - 1)) / denom;
  }
  return result;
}

}  // namespace cyclarb
