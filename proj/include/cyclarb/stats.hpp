#pragma once

#include "cyclarb/types.hpp"

#include <span>

namespace cyclarb {

/// Intraday volatility from one OHLC bar:
///   sigma = sqrt(0.5*(ln H - ln L)^2 - (2 ln 2 - 1)*(ln C - ln O)^2)
/// The radicand is non-negative for every bar satisfying the OHLC
/// invariants, since |ln(C/O)| <= ln(H/L).
double garman_klass(const OhlcBar& bar);

/// First differences of a date-indexed series: out[t] = x[t+1] - x[t] keyed
/// by the later date. Input must be sorted by date. A gap between
/// consecutive dates throws Error naming the gap, unless allow_gaps is set,
/// in which case the difference across the gap is skipped and counted.
std::vector<std::pair<Date, double>> first_difference(
    const std::vector<std::pair<Date, double>>& series, bool allow_gaps = false,
    uint64_t* gaps_skipped = nullptr);

/// Raw per-day regression inputs for one chain.
struct DailyCounts {
  Date date;
  double cyclic_txs = 0;          // transactions with a bot first callee
  double cyclic_trade_txs = 0;    // the subset that executed swaps
  double retail_txs = 0;          // other-trade transactions
  double retail_agg_trades = 0;   // other-trades routed via labeled aggregators
};

/// Date-aligned first-differenced regression columns. The first raw day is
/// consumed by differencing.
struct RegressionFrame {
  std::vector<Date> dates;
  std::vector<double> d_cyclic_txs;
  std::vector<double> d_cyclic_trade_txs;
  std::vector<double> d_price;
  std::vector<double> d_volatility;
  std::vector<double> d_retail_txs;
  std::vector<double> d_retail_agg_frac;

  size_t rows() const { return dates.size(); }
};

/// Joins daily counts with OHLC-derived price/volatility series and
/// differences everything. Every count date must have an OHLC bar; a day
/// with zero retail trades makes the aggregator fraction undefined and
/// throws Error naming the day.
RegressionFrame build_frame(const std::vector<DailyCounts>& counts,
                            const std::vector<OhlcBar>& ohlc, bool allow_gaps = false,
                            uint64_t* gaps_skipped = nullptr);

/// Dense column-major matrix for small regression designs.
class Matrix {
 public:
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double& at(size_t r, size_t c) { return data_[c * rows_ + r]; }
  double at(size_t r, size_t c) const { return data_[c * rows_ + r]; }
  std::span<const double> column(size_t c) const { return {data_.data() + c * rows_, rows_}; }
  std::span<double> column(size_t c) { return {data_.data() + c * rows_, rows_}; }

 private:
  size_t rows_, cols_;
  std::vector<double> data_;
};

struct OlsResult {
  std::vector<double> beta;
  std::vector<double> robust_se;  // HC1
  std::vector<double> t_values;   // beta / robust_se
  std::vector<double> p_values;   // two-sided, normal approximation
  std::vector<double> residuals;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double f_stat = 0.0;  // classic overall F: (ESS/(k-1)) / (RSS/(n-k))
  size_t obs = 0;

  /// Significance stars from the robust t-ratio: *** p<0.01, ** p<0.05,
  /// * p<0.1.
  std::string stars(size_t coefficient) const;
};

/// Least squares via Householder QR (the numerically stable route; tests
/// check it against an independent normal-equations solve). X must include
/// the intercept column. Requires rows >= cols + 1 and full column rank;
/// rank deficiency throws Error naming the collinear column.
OlsResult ols_fit(std::span<const double> y, const Matrix& X);

}  // namespace cyclarb
