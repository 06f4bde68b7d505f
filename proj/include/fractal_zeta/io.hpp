#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "json.hpp"

#include "fractal_zeta/errors.hpp"
#include "fractal_zeta/models.hpp"
#include "fractal_zeta/oracles.hpp"
#include "fractal_zeta/spectrum.hpp"
#include "fractal_zeta/zeta_result.hpp"

namespace fzeta {

using Json = nlohmann::ordered_json;

/// 15 significant digits, "%.15g".
inline std::string fmt15(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Rounded to 15 digits so the JSON writer's shortest form never exceeds them.
inline Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(fmt15(v).c_str(), nullptr);
}

inline Json to_json(const ZetaResult& r) {
  Json j;
  j["re"] = num(r.value.real());
  j["im"] = num(r.value.imag());
  j["abs_error"] = num(r.abs_error);
  j["method"] = to_string(r.method);
  j["terms"] = r.terms_used;
  Json meta = Json::object();
  for (const auto& [k, v] : r.meta) meta[k] = v;
  j["meta"] = meta;
  return j;
}

inline Json to_json(const PoleLattice& p) {
  return Json{{"base_re", num(p.base_re)}, {"imag_period", num(p.imag_period)}, {"label", p.label}, {"canceled", p.canceled}};
}

inline Json to_json(const DecimationReport& r) {
  Json j;
  j["family"] = r.family;
  j["level"] = r.level;
  j["boundary_mode"] = to_string(r.boundary_mode);
  j["verdict"] = r.verdict;
  j["max_abs_dev"] = num(r.max_abs_dev);
  Json ex = Json::array();
  for (double v : r.exceptional) ex.push_back(num(v));
  j["exceptional"] = ex;
  Json m = Json::array();
  for (const auto& x : r.matched) m.push_back({{"value", num(x.value)}, {"mult_matrix", x.mult_matrix}, {"mult_predicted", x.mult_predicted}});
  j["matched"] = m;
  if (!r.series.empty()) {
    Json s = Json::array();
    for (const auto& x : r.series)
      s.push_back({{"series", x.series}, {"m", x.m}, {"value", num(x.value)}, {"predicted", x.predicted}, {"matrix", x.matrix}});
    j["series"] = s;
  }
  if (!r.mode_findings.empty()) {
    Json f = Json::object();
    for (const auto& [mode, ok] : r.mode_findings) f[mode] = ok;
    j["mode_findings"] = f;
  }
  j["notes"] = r.notes;
  return j;
}

inline Json to_json(const CancellationReport& r) {
  Json rows = Json::array();
  for (const auto& x : r.rows) rows.push_back({{"delta", num(x.delta)}, {"term_a", num(x.term_a)}, {"term_b", num(x.term_b)}, {"sum", num(x.sum)}});
  return Json{{"rows", rows},
              {"coeff_a_at_half", num(r.coeff_a_at_half)},
              {"coeff_b_at_half", num(r.coeff_b_at_half)},
              {"coeff_sum", num(r.coeff_sum)},
              {"coeff_check", r.coeff_check}};
}

inline Json error_json(const Error& e) {
  Json j{{"error", to_string(e.kind())}, {"message", e.what()}};
  if (const auto* p = dynamic_cast<const PoleError*>(&e)) {
    j["factor"] = p->factor;
    j["base_re"] = num(p->base_re);
    j["imag_period"] = num(p->imag_period);
  }
  if (const auto* r = dynamic_cast<const ResourceError*>(&e)) j["reachable"] = num(r->reachable);
  return j;
}

/// lambda,multiplicity,depth,word
inline std::string spectrum_csv(const SpectrumList& sl) {
  std::string out = "lambda,multiplicity,depth,word\n";
  for (const auto& a : sl.atoms)
    out += fmt15(a.lambda) + "," + std::to_string(a.multiplicity) + "," + std::to_string(a.depth) + "," + a.word.to_string() + "\n";
  return out;
}

/// lambda,count on the given grid (counting is right-continuous).
inline std::string counting_csv(const SpectrumList& sl, const std::vector<double>& grid) {
  std::string out = "lambda,count\n";
  for (double l : grid) out += fmt15(l) + "," + std::to_string(counting(sl, l)) + "\n";
  return out;
}

/// s_re,s_im,re,im,abs_error,method; failed points carry the error kind in `method`.
struct GridRow {
  cplx s;
  ZetaResult r;
  std::string error;
};

inline std::string grid_csv(const std::vector<GridRow>& rows) {
  std::string out = "s_re,s_im,re,im,abs_error,method\n";
  for (const auto& g : rows) {
    out += fmt15(g.s.real()) + "," + fmt15(g.s.imag()) + ",";
    if (g.error.empty())
      out += fmt15(g.r.value.real()) + "," + fmt15(g.r.value.imag()) + "," + fmt15(g.r.abs_error) + "," + to_string(g.r.method) + "\n";
    else
      out += "nan,nan,nan,error:" + g.error + "\n";
  }
  return out;
}

inline std::string poles_csv(const std::vector<PoleLattice>& lattices, int k_max) {
  std::string out = "label,base_re,imag_period,k,re,im,canceled\n";
  for (const auto& p : lattices) {
    const int lo = p.isolated() ? 0 : -k_max, hi = p.isolated() ? 0 : k_max;
    for (int k = lo; k <= hi; ++k)
      out += "\"" + p.label + "\"," + fmt15(p.base_re) + "," + fmt15(p.imag_period) + "," + std::to_string(k) + "," + fmt15(p.base_re) +
             "," + fmt15(k * p.imag_period) + "," + (p.canceled ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace fzeta
