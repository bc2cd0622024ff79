// Copyright 2026 The orsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

namespace orsim::stats {

/// Two-sided tail probability of a standard normal at |z|.
inline double two_sided_p_value(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

struct ChiSquareResult {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
};

/**
 * Pearson goodness-of-fit of observed counts against expected probabilities.
 * Outcomes with zero expected probability are excluded; observing one of them
 * yields p = 0.
 */
inline ChiSquareResult chi_square_gof(const std::map<std::string, std::uint64_t>& observed,
                                      const std::map<std::string, double>& expected) {
  std::uint64_t n = 0;
  for (const auto& [k, c] : observed) n += c;
  if (n == 0) throw std::invalid_argument("chi_square_gof: no observations");
  ChiSquareResult out;
  std::size_t bins = 0;
  for (const auto& [k, p] : expected) {
    if (p <= 0) continue;
    const auto it = observed.find(k);
    const double o = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    const double e = p * static_cast<double>(n);
    out.statistic += (o - e) * (o - e) / e;
    ++bins;
  }
  for (const auto& [k, c] : observed) {
    const auto it = expected.find(k);
    if (c > 0 && (it == expected.end() || it->second <= 0)) {
      out.p_value = 0;
      out.dof = bins > 0 ? bins - 1 : 0;
      return out;
    }
  }
  out.dof = bins > 0 ? bins - 1 : 0;
  if (out.dof == 0) return out;
  boost::math::chi_squared dist(static_cast<double>(out.dof));
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

}  // namespace orsim::stats
