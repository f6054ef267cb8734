#pragma once

// Exact inference on 2x2 tables: Fisher's exact test (two-sided, by the
// minimum-likelihood rule) and the relative switching propensity, the ratio
// of the near-switch rate among shared items to that among non-shared items.
//
// The hypergeometric pmf is evaluated in log space from a cached table of
// log-factorials. Cache entries are compensated running sums of log(i) kept
// as double-double values, so differences of entries stay accurate to a few
// ulps even for factorials of several million; this is what keeps the pmf
// normalized to ~1e-13 at corpus scale and lets two-sided sums for
// million-token tables come out stable.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cstrig/association.hpp"

namespace cstrig {

namespace detail {

// double-double: value = hi + lo, |lo| <= ulp(hi)/2
struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline DD dd_add(const DD& x, double y) {
  DD s = two_sum(x.hi, y);
  double lo = s.lo + x.lo;
  DD r = two_sum(s.hi, lo);
  return r;
}

inline DD dd_from_long_double(long double v) {
  double hi = static_cast<double>(v);
  double lo = static_cast<double>(v - static_cast<long double>(hi));
  return {hi, lo};
}

}  // namespace detail

// Cached table of ln(n!) values. Growth (`ensure`) is not safe against
// concurrent readers; size the cache before fanning out and read freely
// afterwards.
class LogFactorialCache {
public:
  LogFactorialCache() { table_.push_back({0.0, 0.0}); }

  void ensure(std::uint64_t n) {
    if (n < table_.size()) return;
    table_.reserve(n + 1);
    detail::DD sum = table_.back();
    for (std::uint64_t i = table_.size(); i <= n; ++i) {
      const long double li = std::log(static_cast<long double>(i));
      const double hi = static_cast<double>(li);
      const double lo = static_cast<double>(li - static_cast<long double>(hi));
      sum = detail::dd_add(sum, hi);
      sum = detail::dd_add(sum, lo);
      table_.push_back(sum);
    }
  }

  std::uint64_t size() const { return table_.size(); }

  // ln(n!); n must be covered by a prior ensure().
  long double ln_factorial(std::uint64_t n) const {
    assert(n < table_.size());
    const auto& e = table_[n];
    return static_cast<long double>(e.hi) + static_cast<long double>(e.lo);
  }

private:
  std::vector<detail::DD> table_;
};

inline LogFactorialCache& thread_log_factorial_cache() {
  thread_local LogFactorialCache cache;
  return cache;
}

// Row-1 total, column-1 total and grand total of a 2x2 table with fixed
// margins; the free cell k is the (row 1, column 1) count.
struct HypergeomMargins {
  std::uint64_t row1 = 0;
  std::uint64_t col1 = 0;
  std::uint64_t n = 0;

  std::uint64_t support_lo() const {
    return row1 + col1 > n ? row1 + col1 - n : 0;
  }
  std::uint64_t support_hi() const { return row1 < col1 ? row1 : col1; }
};

namespace detail {

inline long double log_hypergeom_pmf_ld(std::uint64_t k, const HypergeomMargins& m,
                                        const LogFactorialCache& cache) {
  const auto& lf = cache;
  return lf.ln_factorial(m.col1) - lf.ln_factorial(k) - lf.ln_factorial(m.col1 - k) +
         lf.ln_factorial(m.n - m.col1) - lf.ln_factorial(m.row1 - k) -
         lf.ln_factorial(m.n - m.col1 - m.row1 + k) - lf.ln_factorial(m.n) +
         lf.ln_factorial(m.row1) + lf.ln_factorial(m.n - m.row1);
}

}  // namespace detail

// Natural log of P(cell = k) under the hypergeometric distribution with the
// given margins. Throws std::domain_error outside the support.
inline double log_hypergeometric_pmf(std::uint64_t k, const HypergeomMargins& m,
                                     LogFactorialCache& cache) {
  if (m.row1 > m.n || m.col1 > m.n)
    throw std::domain_error("hypergeometric margins exceed the grand total");
  if (k < m.support_lo() || k > m.support_hi())
    throw std::domain_error("hypergeometric cell value outside the support");
  cache.ensure(m.n);
  return static_cast<double>(detail::log_hypergeom_pmf_ld(k, m, cache));
}

inline double log_hypergeometric_pmf(std::uint64_t k, const HypergeomMargins& m) {
  return log_hypergeometric_pmf(k, m, thread_log_factorial_cache());
}

struct FisherResult {
  double p = 1.0;        // clamped to [0, 1]; 0 only on underflow
  double log10_p = 0.0;  // exact in log space, safe below double range
};

// Relative slack when comparing point probabilities for the two-sided sum,
// absorbing floating-point ties.
inline constexpr double kFisherTieSlack = 1e-7;

namespace detail {

inline FisherResult fisher_two_sided_impl(const ContingencyTable& t,
                                          LogFactorialCache& cache) {
  const HypergeomMargins m{t.a + t.b, t.a + t.c, t.n()};
  const std::uint64_t row2 = t.c + t.d, col2 = t.b + t.d;
  if (m.n == 0 || m.row1 == 0 || m.col1 == 0 || row2 == 0 || col2 == 0)
    return {1.0, 0.0};  // degenerate margin: the observed table is forced
  cache.ensure(m.n);

  const std::uint64_t lo = m.support_lo(), hi = m.support_hi();
  const long double lp_obs = log_hypergeom_pmf_ld(t.a, m, cache);
  const long double cutoff =
      lp_obs + static_cast<long double>(std::log1p(kFisherTieSlack));

  // log-sum-exp over qualifying support points, two passes to avoid storage
  long double max_lp = -std::numeric_limits<long double>::infinity();
  for (std::uint64_t k = lo; k <= hi; ++k) {
    const long double lp = log_hypergeom_pmf_ld(k, m, cache);
    if (lp <= cutoff && lp > max_lp) max_lp = lp;
  }
  long double sum = 0.0L;
  for (std::uint64_t k = lo; k <= hi; ++k) {
    const long double lp = log_hypergeom_pmf_ld(k, m, cache);
    if (lp <= cutoff) sum += std::exp(lp - max_lp);
  }
  long double log_p = max_lp + std::log(sum);
  if (log_p > 0.0L) log_p = 0.0L;
  FisherResult r;
  r.log10_p = static_cast<double>(log_p / 2.302585092994045684L);
  r.p = static_cast<double>(std::exp(log_p));
  if (r.p > 1.0) r.p = 1.0;
  return r;
}

}  // namespace detail

inline FisherResult fisher_exact_two_sided_full(const ContingencyTable& t,
                                                LogFactorialCache& cache) {
  return detail::fisher_two_sided_impl(t, cache);
}

inline FisherResult fisher_exact_two_sided_full(const ContingencyTable& t) {
  return detail::fisher_two_sided_impl(t, thread_log_factorial_cache());
}

// Two-sided p-value: the total probability of all same-margin tables no more
// probable than the observed one. Degenerate tables (a zero margin) give 1.
inline double fisher_exact_two_sided(const ContingencyTable& t) {
  return fisher_exact_two_sided_full(t).p;
}

inline double fisher_exact_two_sided(const ContingencyTable& t,
                                     LogFactorialCache& cache) {
  return fisher_exact_two_sided_full(t, cache).p;
}

// (a/(a+c)) / (b/(b+d)); disengaged when either rate is undefined or the
// non-shared rate is zero.
inline std::optional<double> relative_switching_propensity(const ContingencyTable& t) {
  if (t.a + t.c == 0 || t.b + t.d == 0 || t.b == 0) return std::nullopt;
  const double shared_rate =
      static_cast<double>(t.a) / static_cast<double>(t.a + t.c);
  const double nonshared_rate =
      static_cast<double>(t.b) / static_cast<double>(t.b + t.d);
  return shared_rate / nonshared_rate;
}

// Full per-test summary for one contingency table.
struct TestResult {
  ContingencyTable table;
  std::optional<double> shared_rate;
  std::optional<double> nonshared_rate;
  std::optional<double> rsp;
  double p_value = 1.0;
  double log10_p = 0.0;

  bool operator==(const TestResult&) const = default;
};

inline TestResult evaluate_table(const ContingencyTable& t, LogFactorialCache& cache) {
  TestResult r;
  r.table = t;
  if (t.a + t.c > 0)
    r.shared_rate = static_cast<double>(t.a) / static_cast<double>(t.a + t.c);
  if (t.b + t.d > 0)
    r.nonshared_rate = static_cast<double>(t.b) / static_cast<double>(t.b + t.d);
  r.rsp = relative_switching_propensity(t);
  const FisherResult f = fisher_exact_two_sided_full(t, cache);
  r.p_value = f.p;
  r.log10_p = f.log10_p;
  return r;
}

inline TestResult evaluate_table(const ContingencyTable& t) {
  return evaluate_table(t, thread_log_factorial_cache());
}

}  // namespace cstrig
