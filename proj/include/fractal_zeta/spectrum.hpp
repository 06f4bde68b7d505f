#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fractal_zeta/errors.hpp"
#include "fractal_zeta/polydyn.hpp"

namespace fzeta {

struct SpectrumAtom {
  double lambda;
  long multiplicity;
  int depth;
  Word word;  // representative: smallest (depth, word) in the cluster
};

struct SpectrumList {
  std::vector<SpectrumAtom> atoms;  // ascending lambda
  double cutoff = 0.0;
  double generator = 0.0;

  long total_multiplicity() const {
    long t = 0;
    for (const auto& a : atoms) t += a.multiplicity;
    return t;
  }
};

struct EnumerateOptions {
  std::size_t node_budget = 10'000'000;  // words generated at the deepest level
  double cluster_rel_tol = 1e-8;
};

namespace detail {

inline Word word_from_index(std::uint64_t index, int depth, int N) {
  Word w;
  w.indices.assign(static_cast<std::size_t>(depth), 1);
  for (int k = depth - 1; k >= 0; --k) {
    w.indices[static_cast<std::size_t>(k)] = static_cast<int>(index % static_cast<std::uint64_t>(N)) + 1;
    index /= static_cast<std::uint64_t>(N);
  }
  return w;
}

inline double checked_pow(int N, int m) { return std::pow(static_cast<double>(N), m); }

}  // namespace detail

/// Eigenvalue atoms λ = c^m 𝓡(R_w^{-m}(z0)), w ∈ W_m^+, complete below the cutoff.
inline SpectrumList enumerate(const BranchSystem& bs, double z0, double cutoff, const EnumerateOptions& opt = {}) {
  if (!bs.i0.contains(z0, bs.slack())) throw DomainError("enumerate: z0 outside I_0");
  if (!(cutoff > 0.0)) throw ArgumentError("enumerate: cutoff must be positive");

  int mstar = 0;
  while (std::pow(bs.c, mstar + 1) * bs.fatou_min <= cutoff) ++mstar;
  if (detail::checked_pow(bs.N, mstar) > static_cast<double>(opt.node_budget)) {
    int mok = 0;
    while (detail::checked_pow(bs.N, mok + 1) <= static_cast<double>(opt.node_budget)) ++mok;
    const double reach = std::pow(bs.c, mok + 1) * bs.fatou_min;
    throw ResourceError("enumerate: node budget exceeded; complete enumeration reachable for cutoff below " +
                            std::to_string(reach),
                        reach);
  }

  struct Raw {
    double lambda;
    int depth;
    std::uint64_t index;
  };
  std::vector<Raw> raw;
  const double logc = std::log(bs.c);
  if (z0 > 0.0) {
    const double lam = fatou_fast(bs, z0);
    if (lam > 0.0 && lam <= cutoff) raw.push_back({lam, 0, 0});
  }
  std::vector<double> level{z0};
  for (int m = 1; m <= mstar; ++m) {
    level = preimage_level(bs, level);
    const std::size_t start = level.size() / static_cast<std::size_t>(bs.N);
    for (std::size_t i = start; i < level.size(); ++i) {
      const double lam = std::exp(m * logc + log_fatou_fast(bs, level[i]));
      if (lam > 0.0 && lam <= cutoff) raw.push_back({lam, m, static_cast<std::uint64_t>(i)});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.index < b.index;
  });

  SpectrumList sl;
  sl.cutoff = cutoff;
  sl.generator = z0;
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i + 1;
    while (j < raw.size() && raw[j].lambda <= raw[i].lambda * (1.0 + opt.cluster_rel_tol)) ++j;
    std::size_t rep = i;
    for (std::size_t k = i + 1; k < j; ++k)
      if (raw[k].depth < raw[rep].depth || (raw[k].depth == raw[rep].depth && raw[k].index < raw[rep].index)) rep = k;
    sl.atoms.push_back({raw[rep].lambda, static_cast<long>(j - i), raw[rep].depth,
                        detail::word_from_index(raw[rep].index, raw[rep].depth, bs.N)});
    i = j;
  }
  return sl;
}

/// ρ(λ) = #{j : λ_j < λ} with multiplicity.
inline long counting(const SpectrumList& sl, double lambda) {
  if (lambda > sl.cutoff) throw CompletenessError("counting: lambda exceeds the enumeration cutoff");
  long n = 0;
  for (const auto& a : sl.atoms) {
    if (!(a.lambda < lambda)) break;
    n += a.multiplicity;
  }
  return n;
}

}  // namespace fzeta
