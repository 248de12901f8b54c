#pragma once

// Independent reference implementations of ARI and AMI, written directly from
// the textbook definitions. Nothing here shares code with fsd::metrics.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace fsd::oracle {

// ARI from the pair confusion matrix, enumerating every unordered pair.
inline double ari_pair_counting(const std::vector<int>& u, const std::vector<int>& v) {
  const std::size_t n = u.size();
  double both = 0, only_u = 0, only_v = 0, neither = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool su = u[i] == u[j];
      const bool sv = v[i] == v[j];
      if (su && sv) both += 1;
      else if (su) only_u += 1;
      else if (sv) only_v += 1;
      else neither += 1;
    }
  }
  if (only_u == 0 && only_v == 0) return 1.0;
  return 2.0 * (neither * both - only_u * only_v) /
         ((neither + only_u) * (only_u + both) + (neither + only_v) * (only_v + both));
}

struct Counts {
  std::map<int, std::int64_t> u;
  std::map<int, std::int64_t> v;
  std::map<std::pair<int, int>, std::int64_t> joint;
  std::int64_t n = 0;
};

inline Counts tally(const std::vector<int>& u, const std::vector<int>& v) {
  Counts c;
  c.n = static_cast<std::int64_t>(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    ++c.u[u[i]];
    ++c.v[v[i]];
    ++c.joint[{u[i], v[i]}];
  }
  return c;
}

inline double entropy_of(const std::map<int, std::int64_t>& sizes, std::int64_t n) {
  double h = 0;
  for (const auto& [label, s] : sizes) {
    const double p = static_cast<double>(s) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

// AMI with arithmetic-mean normalization and the exact hypergeometric E[MI],
// summing over every (u-cluster, v-cluster) pair. Log-factorials are accumulated
// from log(k) rather than lgamma.
inline double ami_direct(const std::vector<int>& u, const std::vector<int>& v) {
  const Counts c = tally(u, v);
  if (c.u.size() == 1 && c.v.size() == 1) return 1.0;
  const std::int64_t n = c.n;
  const double dn = static_cast<double>(n);

  std::vector<double> lf(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t k = 2; k <= n; ++k) lf[k] = lf[k - 1] + std::log(static_cast<double>(k));

  double mi = 0;
  for (const auto& [key, nij] : c.joint) {
    const double a = static_cast<double>(c.u.at(key.first));
    const double b = static_cast<double>(c.v.at(key.second));
    mi += static_cast<double>(nij) / dn * std::log(dn * static_cast<double>(nij) / (a * b));
  }

  double emi = 0;
  for (const auto& [lu, a] : c.u) {
    for (const auto& [lv, b] : c.v) {
      const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
      const std::int64_t hi = std::min(a, b);
      for (std::int64_t nij = lo; nij <= hi; ++nij) {
        const double term1 = static_cast<double>(nij) / dn *
                             std::log(dn * static_cast<double>(nij) /
                                      (static_cast<double>(a) * static_cast<double>(b)));
        const double term2 = std::exp(lf[a] + lf[b] + lf[n - a] + lf[n - b] - lf[n] - lf[nij] -
                                      lf[a - nij] - lf[b - nij] - lf[n - a - b + nij]);
        emi += term1 * term2;
      }
    }
  }

  const double hu = entropy_of(c.u, n);
  const double hv = entropy_of(c.v, n);
  const double num = mi - emi;
  const double den = 0.5 * (hu + hv) - emi;
  if (std::abs(den) < 1e-12 && std::abs(num) < 1e-12) {
    // Identical partitions: every joint cell equals both of its marginals.
    for (const auto& [key, nij] : c.joint) {
      if (nij != c.u.at(key.first) || nij != c.v.at(key.second)) return 0.0;
    }
    return 1.0;
  }
  return num / den;
}

}  // namespace fsd::oracle
