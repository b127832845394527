#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ewens/detail/big_numeric.hpp"
#include "ewens/errors.hpp"

namespace ewens {

/// Triangular table of the theta-coefficients of the rising factorial
/// theta(theta+1)...(theta+m-1), for 1 <= x <= m <= n_max. Entries are exact
/// arbitrary-precision integers; natural logs of every entry are derived at
/// build time and kept alongside. Immutable after construction.
class StirlingTable {
 public:
  static constexpr std::int64_t kDefaultLimit = 500;

  [[nodiscard]] std::int64_t n_max() const { return n_max_; }

  /// s(m, x) with 1 <= x <= m <= n_max.
  [[nodiscard]] const BigInt& at(std::int64_t m, std::int64_t x) const {
    check_index(m, x);
    return rows_[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(x - 1)];
  }

  [[nodiscard]] std::span<const BigInt> row(std::int64_t m) const {
    check_index(m, 1);
    return rows_[static_cast<std::size_t>(m - 1)];
  }

  [[nodiscard]] std::span<const double> log_row(std::int64_t m) const {
    check_index(m, 1);
    return log_rows_[static_cast<std::size_t>(m - 1)];
  }

 private:
  friend StirlingTable build_stirling_table(std::int64_t, std::int64_t);

  void check_index(std::int64_t m, std::int64_t x) const {
    if (m < 1 || m > n_max_ || x < 1 || x > m) {
      throw dimension_error("Stirling index (" + std::to_string(m) + ", " + std::to_string(x) +
                            ") outside table of size " + std::to_string(n_max_));
    }
  }

  std::int64_t n_max_ = 0;
  std::vector<std::vector<BigInt>> rows_;
  std::vector<std::vector<double>> log_rows_;
};

/// Builds the table via the recurrence s(m+1, x) = s(m, x-1) + m s(m, x),
/// s(1, 1) = 1. The configured limit caps the table size (entries grow
/// factorially: s(m, 1) = (m-1)!).
inline StirlingTable build_stirling_table(std::int64_t n_max,
                                          std::int64_t limit = StirlingTable::kDefaultLimit) {
  if (n_max < 1) {
    throw domain_error("n_max must be >= 1, got " + std::to_string(n_max));
  }
  if (n_max > limit) {
    throw resource_limit_error("n_max = " + std::to_string(n_max) +
                               " exceeds the exact-path limit of " + std::to_string(limit));
  }
  StirlingTable table;
  table.n_max_ = n_max;
  table.rows_.resize(static_cast<std::size_t>(n_max));
  table.rows_[0] = {BigInt(1)};
  for (std::int64_t m = 1; m < n_max; ++m) {
    const auto& prev = table.rows_[static_cast<std::size_t>(m - 1)];
    auto& cur = table.rows_[static_cast<std::size_t>(m)];
    cur.resize(static_cast<std::size_t>(m + 1));
    for (std::int64_t x = 1; x <= m + 1; ++x) {
      BigInt value = (x >= 2 && x - 2 < m) ? prev[static_cast<std::size_t>(x - 2)] : BigInt(0);
      if (x <= m) {
        value += m * prev[static_cast<std::size_t>(x - 1)];
      }
      cur[static_cast<std::size_t>(x - 1)] = std::move(value);
    }
  }
  table.log_rows_.resize(static_cast<std::size_t>(n_max));
  for (std::int64_t m = 1; m <= n_max; ++m) {
    const auto& row = table.rows_[static_cast<std::size_t>(m - 1)];
    auto& logs = table.log_rows_[static_cast<std::size_t>(m - 1)];
    logs.resize(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      logs[i] = detail::log_big(row[i]);
    }
  }
  return table;
}

}  // namespace ewens
