// Command-line front end: eval, spectrum, verify, poles, dims, mellin, riemann, cancel-probe, accept.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fractal_zeta/fractal_zeta.hpp"

namespace {

using namespace fzeta;

constexpr int kExitError = 2;
constexpr int kExitVerify = 3;
constexpr int kExitUsage = 64;

struct Options {
  std::string model;
  std::string config;
  std::string s;
  std::string s_grid;
  double max_lambda = 1e4;
  bool max_lambda_set = false;
  int level = -1;
  double tol = 0.0;
  std::string out;
  std::string format;
  double p = 0.5;
  std::optional<double> z0;
  int counting = 0;
  int kmax = 5;
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  int only = 0;
};

double parse_double(const std::string& text, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
  return v;
}

// "re" or "re,im"
cplx parse_s(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_double(text, "--s"), 0.0};
  return {parse_double(text.substr(0, comma), "--s"), parse_double(text.substr(comma + 1), "--s")};
}

// "re0:re1:n,im", n points including both ends
std::vector<cplx> parse_grid(const std::string& text) {
  const auto comma = text.find(',');
  const std::string head = text.substr(0, comma);
  const double im = comma == std::string::npos ? 0.0 : parse_double(text.substr(comma + 1), "--s-grid");
  const auto c1 = head.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : head.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("--s-grid expects re0:re1:n,im");
  const double a = parse_double(head.substr(0, c1), "--s-grid");
  const double b = parse_double(head.substr(c1 + 1, c2 - c1 - 1), "--s-grid");
  const double nd = parse_double(head.substr(c2 + 1), "--s-grid");
  if (!(nd >= 1 && nd <= 100000 && nd == std::floor(nd))) throw UsageError("--s-grid point count must be an integer in [1, 100000]");
  const int n = static_cast<int>(nd);
  std::vector<cplx> g;
  for (int k = 0; k < n; ++k) g.push_back({n == 1 ? a : a + (b - a) * k / (n - 1), im});
  return g;
}

std::vector<cplx> s_points(const Options& o) {
  if (!o.s.empty() && !o.s_grid.empty()) throw UsageError("give either --s or --s-grid, not both");
  if (!o.s.empty()) return {parse_s(o.s)};
  if (!o.s_grid.empty()) return parse_grid(o.s_grid);
  throw UsageError("--s or --s-grid is required");
}

std::size_t budget() {
  if (const char* env = std::getenv("FRACTAL_ZETA_BUDGET")) {
    const double v = parse_double(env, "FRACTAL_ZETA_BUDGET");
    if (!(v >= 1.0)) throw UsageError("FRACTAL_ZETA_BUDGET must be >= 1");
    return static_cast<std::size_t>(v);
  }
  return 10'000'000;
}

RunConfig resolve(const Options& o) {
  RunConfig cfg;
  if (!o.config.empty()) {
    if (!o.model.empty()) throw UsageError("give either --model or --config, not both");
    cfg = load_config(o.config);
  } else if (!o.model.empty()) {
    ModelParams mp;
    mp.p = o.p;
    cfg.model = make_model(o.model, mp);
  } else {
    throw UsageError("--model or --config is required");
  }
  if (o.tol > 0.0) {
    cfg.model.tol = o.tol;
    cfg.decimation_tol = o.tol;
  }
  if (o.max_lambda_set) cfg.cutoff = o.max_lambda;
  return cfg;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ArgumentError("cannot write '" + o.out + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_of(const Options& o, const char* fallback) {
  const std::string f = o.format.empty() ? fallback : o.format;
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

// Evaluates on each grid point; per-point library errors are recorded, not fatal, on grids.
template <class F>
int run_grid(const Options& o, F&& eval) {
  const auto pts = s_points(o);
  const std::string fmt = format_of(o, pts.size() == 1 ? "json" : "csv");
  if (pts.size() == 1 && fmt == "json") {
    emit(o, dump(to_json(eval(pts[0]))));
    return 0;
  }
  std::vector<GridRow> rows;
  for (const cplx& s : pts) {
    GridRow g{s, {}, {}};
    try {
      g.r = eval(s);
    } catch (const Error& e) {
      g.error = to_string(e.kind());
    }
    rows.push_back(std::move(g));
  }
  if (fmt == "csv") {
    emit(o, grid_csv(rows));
  } else {
    Json arr = Json::array();
    for (const auto& g : rows) {
      Json j{{"s_re", num(g.s.real())}, {"s_im", num(g.s.imag())}};
      if (g.error.empty())
        j["result"] = to_json(g.r);
      else
        j["error"] = g.error;
      arr.push_back(j);
    }
    emit(o, dump(arr));
  }
  return 0;
}

int cmd_eval(const Options& o) {
  const RunConfig cfg = resolve(o);
  EngineOptions eo;
  eo.node_budget = budget();
  ModelEvaluator ev(cfg.model, eo);
  if (o.z0) {
    if (!ev.engine()) throw ArgumentError("--z0 needs a model with a polynomial");
    return run_grid(o, [&](cplx s) { return ev.generator_zeta(*o.z0, s, cfg.model.tol); });
  }
  return run_grid(o, [&](cplx s) { return ev(s); });
}

int cmd_riemann(const Options& o) {
  return run_grid(o, [](cplx s) { return riemann_reference(s); });
}

int cmd_spectrum(const Options& o) {
  const RunConfig cfg = resolve(o);
  if (!cfg.model.poly) throw ArgumentError("spectrum: model has no polynomial");
  const BranchSystem bs = build_branch_system(*cfg.model.poly);
  EnumerateOptions eo;
  eo.node_budget = budget();
  const double z0 = o.z0 ? *o.z0 : cfg.model.generators.at(0).z0;
  const SpectrumList sl = enumerate(bs, z0, cfg.cutoff, eo);
  const std::string fmt = format_of(o, "csv");
  if (o.counting > 0) {
    // log-spaced grid from the smallest atom to the cutoff
    const double lo = sl.atoms.empty() ? 1.0 : sl.atoms.front().lambda;
    std::vector<double> grid;
    for (int k = 0; k < o.counting; ++k)
      grid.push_back(o.counting == 1 ? sl.cutoff : std::exp(std::log(lo) + (std::log(sl.cutoff) - std::log(lo)) * k / (o.counting - 1)));
    grid.back() = sl.cutoff;
    if (fmt == "csv") {
      emit(o, counting_csv(sl, grid));
    } else {
      Json arr = Json::array();
      for (double l : grid) arr.push_back({{"lambda", num(l)}, {"count", counting(sl, l)}});
      emit(o, dump(arr));
    }
    return 0;
  }
  if (fmt == "csv") {
    emit(o, spectrum_csv(sl));
  } else {
    Json arr = Json::array();
    for (const auto& a : sl.atoms)
      arr.push_back({{"lambda", num(a.lambda)}, {"multiplicity", a.multiplicity}, {"depth", a.depth}, {"word", a.word.to_string()}});
    emit(o, dump(Json{{"generator", num(sl.generator)}, {"cutoff", num(sl.cutoff)}, {"atoms", arr}}));
  }
  return 0;
}

int cmd_verify(const Options& o) {
  const RunConfig cfg = resolve(o);
  if (o.level < 0) throw UsageError("verify: --level is required");
  const DecimationReport rep = verify_decimation(cfg.model, o.level, cfg.decimation_tol);
  emit(o, dump(to_json(rep)));
  return rep.verdict ? 0 : kExitVerify;
}

int cmd_poles(const Options& o) {
  const RunConfig cfg = resolve(o);
  const auto lat = complex_dimensions(cfg.model);
  if (format_of(o, "csv") == "csv") {
    emit(o, poles_csv(lat, o.kmax));
  } else {
    Json arr = Json::array();
    for (const auto& l : lat) {
      Json pts = Json::array();
      const int lo = l.isolated() ? 0 : -o.kmax, hi = l.isolated() ? 0 : o.kmax;
      for (int k = lo; k <= hi; ++k) pts.push_back({{"re", num(l.base_re)}, {"im", num(k * l.imag_period)}});
      Json j = to_json(l);
      j["points"] = pts;
      arr.push_back(j);
    }
    emit(o, dump(arr));
  }
  return 0;
}

int cmd_dims(const Options& o) {
  const RunConfig cfg = resolve(o);
  const auto lat = complex_dimensions(cfg.model);
  if (format_of(o, "json") == "csv") {
    std::string out = "label,base_re,imag_period,canceled\n";
    for (const auto& l : lat)
      out += "\"" + l.label + "\"," + fmt15(l.base_re) + "," + fmt15(l.imag_period) + "," + (l.canceled ? "true" : "false") + "\n";
    emit(o, out);
  } else {
    Json arr = Json::array();
    for (const auto& l : lat) arr.push_back(to_json(l));
    emit(o, dump(Json{{"model", cfg.model.name}, {"lattices", arr}}));
  }
  return 0;
}

int cmd_mellin(const Options& o) {
  const RunConfig cfg = resolve(o);
  if (!cfg.model.poly) throw ArgumentError("mellin: model has no polynomial");
  ZetaEngine eng(build_branch_system(*cfg.model.poly));
  const int depth = o.level < 0 ? 10 : o.level;
  return run_grid(o, [&](cplx s) { return eng.mellin(s, depth); });
}

int cmd_cancel(const Options& o) {
  emit(o, dump(to_json(sg_cancellation_probe(o.deltas))));
  return 0;
}

int cmd_accept(const Options& o) {
  std::vector<int> ids;
  if (o.only > 0) {
    if (o.only > acceptance_count()) throw UsageError("--only out of range");
    ids.push_back(o.only);
  } else {
    for (int k = 1; k <= acceptance_count(); ++k) ids.push_back(k);
  }
  bool all = true;
  std::string text;
  for (int k : ids) {
    const CriterionResult r = run_criterion(k);
    all = all && r.pass();
    text += format_line(r) + "\n";
  }
  emit(o, text);
  return all ? 0 : kExitVerify;
}

void add_model_flags(CLI::App* c, Options& o) {
  c->add_option("--model", o.model, "model name (interval_quadratic|interval_uniform|interval_cubic|interval_weighted|sg|cantor|...)");
  c->add_option("--config", o.config, "JSON model config (see docs/config_schema.md)");
  c->add_option("--p", o.p, "weight p for interval_weighted");
  c->add_option("--tol", o.tol, "absolute tolerance");
}

void add_out_flags(CLI::App* c, Options& o) {
  c->add_option("--out", o.out, "output file (default stdout)");
  c->add_option("--format", o.format, "json or csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral zeta functions of fractal Laplacians via polynomial dynamics"};
  app.require_subcommand(1);
  Options o;
  double z0 = 0.0;

  auto* eval = app.add_subcommand("eval", "evaluate a model spectral zeta function");
  add_model_flags(eval, o);
  add_out_flags(eval, o);
  eval->add_option("--s", o.s, "re,im");
  eval->add_option("--s-grid", o.s_grid, "re0:re1:n,im");
  auto* eval_z0 = eval->add_option("--z0", z0, "evaluate the polynomial zeta at this generator instead");

  auto* spectrum = app.add_subcommand("spectrum", "enumerate spectrum atoms below --max-lambda");
  add_model_flags(spectrum, o);
  add_out_flags(spectrum, o);
  auto* ml = spectrum->add_option("--max-lambda", o.max_lambda, "cutoff");
  auto* spec_z0 = spectrum->add_option("--z0", z0, "generator (default: first model generator)");
  spectrum->add_option("--counting", o.counting, "emit the counting function on n log-spaced points");

  auto* verify = app.add_subcommand("verify", "spectral decimation check against matrix eigenvalues");
  add_model_flags(verify, o);
  add_out_flags(verify, o);
  verify->add_option("--level", o.level, "level n");

  auto* poles = app.add_subcommand("poles", "pole lattice points");
  add_model_flags(poles, o);
  add_out_flags(poles, o);
  poles->add_option("--kmax", o.kmax, "lattice points k = -kmax..kmax");

  auto* dims = app.add_subcommand("dims", "complex dimension lattices");
  add_model_flags(dims, o);
  add_out_flags(dims, o);

  auto* mellin = app.add_subcommand("mellin", "moments of the balanced measure");
  add_model_flags(mellin, o);
  add_out_flags(mellin, o);
  mellin->add_option("--s", o.s, "re,im");
  mellin->add_option("--s-grid", o.s_grid, "re0:re1:n,im");
  mellin->add_option("--level", o.level, "quadrature depth (default 10)");

  auto* riemann = app.add_subcommand("riemann", "Euler-Maclaurin reference zeta");
  add_out_flags(riemann, o);
  riemann->add_option("--s", o.s, "re,im");
  riemann->add_option("--s-grid", o.s_grid, "re0:re1:n,im");

  auto* cancel = app.add_subcommand("cancel-probe", "gasket pole cancellation near d_R");
  add_out_flags(cancel, o);
  cancel->add_option("--deltas", o.deltas, "offsets from d_R")->delimiter(',');

  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  add_out_flags(accept, o);
  accept->add_option("--only", o.only, "run a single criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  if (ml->count()) o.max_lambda_set = true;
  if (eval_z0->count() || spec_z0->count()) o.z0 = z0;

  try {
    if (*eval) return cmd_eval(o);
    if (*spectrum) return cmd_spectrum(o);
    if (*verify) return cmd_verify(o);
    if (*poles) return cmd_poles(o);
    if (*dims) return cmd_dims(o);
    if (*mellin) return cmd_mellin(o);
    if (*riemann) return cmd_riemann(o);
    if (*cancel) return cmd_cancel(o);
    if (*accept) return cmd_accept(o);
  } catch (const Error& e) {
    std::cerr << error_json(e).dump() << "\n";
    return e.kind() == ErrorKind::usage ? kExitUsage : kExitError;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
