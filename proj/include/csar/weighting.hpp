#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "csar/corpus.hpp"

namespace csar {

enum class Weighting {
  mutual_information,
  joint_probability,
  pmi,
  npmi,
};

inline std::optional<Weighting> parse_weighting(std::string_view name) {
  if (name == "mi" || name == "mutual-information") return Weighting::mutual_information;
  if (name == "joint" || name == "joint-probability") return Weighting::joint_probability;
  if (name == "pmi") return Weighting::pmi;
  if (name == "npmi") return Weighting::npmi;
  return std::nullopt;
}

inline const char* weighting_name(Weighting w) {
  switch (w) {
    case Weighting::mutual_information: return "mutual-information";
    case Weighting::joint_probability: return "joint-probability";
    case Weighting::pmi: return "pmi";
    case Weighting::npmi: return "npmi";
  }
  return "?";
}

namespace detail {
inline double mi_cell(double p, double px, double py) {
  return p > 0.0 ? p * std::log2(p / (px * py)) : 0.0;
}
}  // namespace detail

/// Weight of a form-meaning pair from its 2x2 contingency counts, in bits.
/// n_fm records contain both, n_f the form, n_m the meaning, out of n records.
/// Pairs with non-positive pointwise association score 0 under every method.
inline double pair_weight(std::uint64_t n_fm, std::uint64_t n_f, std::uint64_t n_m,
                          std::uint64_t n, Weighting method) {
  if (n == 0 || n_fm == 0) return 0.0;
  const auto lhs = static_cast<unsigned __int128>(n_fm) * n;
  const auto rhs = static_cast<unsigned __int128>(n_f) * n_m;
  if (lhs < rhs) return 0.0;
  const double dn = static_cast<double>(n);
  const double p11 = static_cast<double>(n_fm) / dn;
  switch (method) {
    case Weighting::joint_probability:
      return p11;
    case Weighting::pmi:
      return std::log2(static_cast<double>(n_fm) * dn /
                       (static_cast<double>(n_f) * static_cast<double>(n_m)));
    case Weighting::npmi: {
      const double pmi = std::log2(static_cast<double>(n_fm) * dn /
                                   (static_cast<double>(n_f) * static_cast<double>(n_m)));
      const double denom = std::log2(dn / static_cast<double>(n_fm));
      return denom > 0.0 ? pmi / denom : 0.0;
    }
    case Weighting::mutual_information: {
      const double pf = static_cast<double>(n_f) / dn;
      const double pm = static_cast<double>(n_m) / dn;
      const double qf = static_cast<double>(n - n_f) / dn;
      const double qm = static_cast<double>(n - n_m) / dn;
      const double p10 = static_cast<double>(n_f - n_fm) / dn;
      const double p01 = static_cast<double>(n_m - n_fm) / dn;
      const double p00 = static_cast<double>(n - n_f - n_m + n_fm) / dn;
      const double w = detail::mi_cell(p11, pf, pm) + detail::mi_cell(p10, pf, qm) +
                       detail::mi_cell(p01, qf, pm) + detail::mi_cell(p00, qf, qm);
      return w > 0.0 ? w : 0.0;
    }
  }
  return 0.0;
}

}  // namespace csar
