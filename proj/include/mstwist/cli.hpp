#pragma once

// Command-line front end. run() parses arguments, dispatches a subcommand and
// writes JSON or CSV to `out`; diagnostics go to `err`.
// Exit codes: 0 success, 1 precondition/pole/ambiguity/malformed input,
// 2 convergence failure.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mstwist/config.hpp"
#include "mstwist/errors.hpp"
#include "mstwist/lfunc.hpp"
#include "mstwist/spectrum.hpp"
#include "mstwist/sympoly.hpp"
#include "mstwist/twist.hpp"
#include "mstwist/wpoly.hpp"

namespace mstwist::cli {

/// "1.5", "-2i", "0.5+0.3i", "1e-3-2e-1i".
inline cplx parse_complex(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  const auto fail = [&] { throw precondition_error("cannot parse complex number '" + text + "'"); };
  if (t.empty()) fail();
  const auto to_d = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != s.size()) fail();
    return v;
  };
  if (t.back() != 'i' && t.back() != 'j') return to_d(t);
  t.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;)
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) return {0.0, to_d(t)};
  return {to_d(t.substr(0, split)), to_d(t.substr(split))};
}

inline IndexVector parse_witness(const std::string& text) {
  IndexVector n;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long k = 0;
    try {
      k = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw precondition_error("cannot parse witness '" + text + "'");
    }
    if (used != item.size() || k < 1) throw precondition_error("witness entries must be integers >= 1: '" + text + "'");
    n.push_back(k);
  }
  if (n.empty()) throw precondition_error("empty witness");
  return n;
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// RFC 4180 quoting for fields containing commas or quotes.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string witness_text(const IndexVector& n) {
  std::string s = "(";
  for (std::size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
  return s + ")";
}

struct Options {
  std::string config;
  std::string out = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::string witness;
  double alpha_tol = kDefaultAlphaTol;
  // spectrum
  double alpha_max = 0.0;
  std::optional<long long> n_max;
  // invariants
  int structural = 2;
  // eval / residue
  std::vector<std::string> s;
  std::vector<std::string> from, to;
  int steps = 11;
  std::string method = "continue";
  int ell = 0;
  int samples = 5;
  // expand
  std::string form;
  int order = 1;
  std::string lambdas;
};

inline TwistProblem make_problem(const RunConfig& cfg, const Options& o) {
  TwistFamily family = cfg.family();
  auto alpha = cfg.alpha;
  if (!o.witness.empty()) alpha = parse_witness(o.witness);
  else if (o.alpha) alpha = *o.alpha;
  if (std::holds_alternative<IndexVector>(alpha)) return TwistProblem::from_witness(family, std::get<IndexVector>(alpha));
  if (std::holds_alternative<double>(alpha)) return TwistProblem::from_alpha(family, std::get<double>(alpha), o.alpha_tol);
  throw precondition_error("alpha is required (config 'alpha', --alpha or --witness)");
}

inline Point parse_point(const std::vector<std::string>& items, std::size_t dim, const std::string& what) {
  if (items.size() != dim)
    throw precondition_error(what + " needs " + std::to_string(dim) + " coordinates, got " + std::to_string(items.size()));
  Point p;
  for (const auto& it : items) p.push_back(parse_complex(it));
  return p;
}

inline json hit_json(const std::optional<SpectrumHit>& hit) {
  if (!hit) return nullptr;
  json w = json::array();
  for (const auto& n : hit->witnesses) w.push_back(n);
  return {{"alpha", hit->alpha}, {"key", hit->exact_key.str()}, {"witnesses", w}};
}

// ---------------------------------------------------------------------------

inline int cmd_invariants(const RunConfig& cfg, const Options& o, std::ostream& out) {
  json fns = json::array();
  for (const auto& f : cfg.functions) {
    const Invariants inv = compute_invariants(f);
    json j = {{"label", f.label}, {"d", inv.d},           {"q", inv.q},       {"omega", to_json(inv.omega_F)},
              {"tau", inv.tau},   {"xi", to_json(inv.xi)}, {"eta", inv.eta}, {"theta", inv.theta}};
    if (o.structural >= 0) {
      const auto sym = structural_invariants_symbolic(f, o.structural);
      json exact = json::array(), numeric = json::array();
      for (const auto& v : sym) {
        exact.push_back(to_string(v));
        numeric.push_back(to_json(v.value()));
      }
      j["structural"] = {{"exact", exact}, {"numeric", numeric}};
    }
    fns.push_back(j);
  }
  if (o.out == "csv") {
    out << "label,d,q,omega_re,omega_im,tau,xi_re,xi_im,eta,theta\n";
    for (const auto& j : fns)
      out << csv_field(j["label"].get<std::string>()) << ',' << fmt(j["d"]) << ',' << fmt(j["q"]) << ','
          << fmt(j["omega"][0]) << ',' << fmt(j["omega"][1]) << ',' << fmt(j["tau"]) << ',' << fmt(j["xi"][0]) << ','
          << fmt(j["xi"][1]) << ',' << fmt(j["eta"]) << ',' << fmt(j["theta"]) << '\n';
    return 0;
  }
  json doc = {{"functions", fns}};
  if (cfg.has_family()) {
    const TwistFamily F = cfg.family();
    doc["family"] = {{"d", F.d()}, {"theta", F.theta()}, {"omega", to_json(F.omega())}};
  }
  out << doc.dump(2) << '\n';
  return 0;
}

inline int cmd_spectrum(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const TwistFamily F = cfg.family();
  const long long n_max = o.n_max ? *o.n_max : required_index_bound(F, o.alpha_max * (1.0 + 1e-12));
  const auto hits = enumerate_spectrum(F, o.alpha_max, n_max);
  if (o.out == "csv") {
    out << "alpha,witness_count,witnesses\n";
    for (const auto& h : hits) {
      std::string w;
      for (const auto& n : h.witnesses) w += (w.empty() ? "" : " ") + witness_text(n);
      out << fmt(h.alpha) << ',' << h.witnesses.size() << ',' << csv_field(w) << '\n';
    }
    return 0;
  }
  json a = json::array();
  for (const auto& h : hits) a.push_back(hit_json(h));
  out << json{{"alpha_max", o.alpha_max}, {"n_max", n_max}, {"spectrum", a}}.dump(2) << '\n';
  return 0;
}

inline int cmd_eval(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const TwistFamily F = cfg.family();
  const std::size_t N = F.size();
  std::vector<Point> points;
  if (!o.s.empty()) {
    if (!o.from.empty() || !o.to.empty()) throw precondition_error("give either --s or --from/--to, not both");
    points.push_back(parse_point(o.s, N, "--s"));
  } else {
    if (o.from.empty() || o.to.empty()) throw precondition_error("eval needs --s or --from and --to");
    if (o.steps < 2) throw precondition_error("--steps must be >= 2");
    const Point a = parse_point(o.from, N, "--from"), b = parse_point(o.to, N, "--to");
    for (int k = 0; k < o.steps; ++k) {
      const double t = static_cast<double>(k) / (o.steps - 1);
      Point p(N);
      for (std::size_t v = 0; v < N; ++v) p[v] = a[v] + t * (b[v] - a[v]);
      points.push_back(p);
    }
  }
  const EvalParams& p = cfg.params;
  std::optional<TwistProblem> problem;
  double alpha = 0.0;
  if (o.method == "continue") {
    problem.emplace(make_problem(cfg, o));
    alpha = problem->alpha();
  } else {
    auto a = cfg.alpha;
    if (!o.witness.empty()) a = parse_witness(o.witness);
    else if (o.alpha) a = *o.alpha;
    if (std::holds_alternative<double>(a)) alpha = std::get<double>(a);
    else if (std::holds_alternative<IndexVector>(a)) alpha = alpha_of(F, std::get<IndexVector>(a)).alpha;
    else throw precondition_error("alpha is required (config 'alpha', --alpha or --witness)");
  }

  json rows = json::array();
  for (const auto& s : points) {
    json r = {{"s", to_json(s)}};
    if (o.method == "continue") {
      const ContinuationResult c = continue_twist(*problem, s, p);
      r["value"] = to_json(c.value);
      r["ladder_diff"] = c.ladder_diff;
      r["strip"] = c.strip;
      r["integer_terms"] = c.integer_terms;
      r["X"] = c.X;
      r["cauchy"] = c.cauchy;
    } else if (o.method == "series") {
      r["value"] = to_json(smoothed_twist_series(F, s, alpha, p));
      r["ladder_diff"] = 0.0;
    } else {
      r["value"] = to_json(smoothed_twist_mb(F, s, alpha, p));
      r["ladder_diff"] = 0.0;
    }
    rows.push_back(r);
  }
  if (o.out == "csv") {
    for (std::size_t v = 1; v <= N; ++v) out << 's' << v << "_re,s" << v << "_im,";
    out << "value_re,value_im,ladder_diff\n";
    for (const auto& r : rows) {
      for (const auto& z : r["s"]) out << fmt(z[0]) << ',' << fmt(z[1]) << ',';
      out << fmt(r["value"][0]) << ',' << fmt(r["value"][1]) << ',' << fmt(r["ladder_diff"]) << '\n';
    }
    return 0;
  }
  json doc = {{"method", o.method}, {"alpha", alpha}, {"points", rows}};
  if (problem) doc["spectrum_point"] = hit_json(problem->hit());
  out << doc.dump(2) << '\n';
  return 0;
}

inline json report_json(const ResidueReport& r) {
  return {{"ell", r.ell},
          {"s", to_json(r.s)},
          {"numeric", to_json(r.numeric)},
          {"analytic", to_json(r.analytic)},
          {"rel_error", r.rel_error},
          {"direction", to_json(r.direction)},
          {"eps", r.eps},
          {"scaled_values", to_json(r.scaled_values)},
          {"retries", r.retries},
          {"seed", r.seed}};
}

inline void report_csv(const std::vector<ResidueReport>& reports, std::size_t N, std::ostream& out) {
  out << "sample,ell,";
  for (std::size_t v = 1; v <= N; ++v) out << 's' << v << "_re,s" << v << "_im,";
  out << "numeric_re,numeric_im,analytic_re,analytic_im,rel_error,seed\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    out << k << ',' << r.ell << ',';
    for (const auto& z : r.s) out << fmt(z.real()) << ',' << fmt(z.imag()) << ',';
    out << fmt(r.numeric.real()) << ',' << fmt(r.numeric.imag()) << ',' << fmt(r.analytic.real()) << ','
        << fmt(r.analytic.imag()) << ',' << fmt(r.rel_error) << ',' << r.seed << '\n';
  }
}

inline int cmd_residue(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const TwistProblem P = make_problem(cfg, o);
  const Point s = parse_point(o.s, P.family().size(), "--s");
  const ResidueReport r = numeric_residue(P, s, o.ell, cfg.params);
  if (o.out == "csv") {
    report_csv({r}, P.family().size(), out);
    return 0;
  }
  json doc = report_json(r);
  doc["spectrum_point"] = hit_json(P.hit());
  out << doc.dump(2) << '\n';
  return 0;
}

inline int cmd_verify(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const TwistProblem P = make_problem(cfg, o);
  const VerifyReport rep = verify_theorem2(P, o.ell, o.samples, cfg.params);
  if (o.out == "csv") {
    report_csv(rep.samples, P.family().size(), out);
    return 0;
  }
  json samples = json::array();
  for (const auto& r : rep.samples) samples.push_back(report_json(r));
  out << json{{"ell", o.ell},
              {"seed", cfg.params.seed},
              {"spectrum_point", hit_json(P.hit())},
              {"nonvanishing", rep.nonvanishing},
              {"max_rel_error", rep.max_rel_error},
              {"samples", samples}}
             .dump(2)
      << '\n';
  return 0;
}

inline int cmd_expand(const std::optional<RunConfig>& cfg, const Options& o, std::ostream& out) {
  if (o.order < 0 || o.order > kMaxExpansionOrder)
    throw precondition_error("--order must lie in [0, " + std::to_string(kMaxExpansionOrder) + "]");
  std::vector<std::pair<std::string, MultiPoly>> polys;
  std::vector<Scalar> lambdas;
  const auto need_lambdas = [&] {
    if (!o.lambdas.empty()) {
      std::stringstream ss(o.lambdas);
      std::string item;
      while (std::getline(ss, item, ',')) lambdas.emplace_back(parse_rational(item));
    } else if (cfg && cfg->has_family()) {
      lambdas = family_weights(cfg->family());
    } else {
      throw precondition_error("expand V|P needs --lambdas or a config with kappa");
    }
  };
  if (o.form == "R" || o.form == "Q") {
    if (o.order < 1) throw precondition_error("--order must be >= 1 for R and Q");
    const std::vector<std::string> params = {"A", "b"};
    const SumXTForms f = sumxt_forms(MultiPoly::variable(params, 0), MultiPoly::variable(params, 1), o.order);
    if (o.form == "R") {
      for (int m = 1; m <= o.order; ++m) polys.emplace_back("R" + std::to_string(m), f.R[m - 1]);
    } else {
      polys.emplace_back("Q" + std::to_string(o.order), f.Q);
    }
  } else if (o.form == "V" || o.form == "P") {
    need_lambdas();
    GammaProductExpansion g(lambdas);
    for (int k = 0; k <= o.order; ++k) polys.emplace_back(o.form + std::to_string(k), o.form == "V" ? g.v(k) : g.p(k));
  } else if (o.form == "W") {
    if (!cfg) throw precondition_error("expand W needs --config");
    const TwistFamily F = cfg->family();
    for (int l = 0; l <= o.order; ++l) polys.emplace_back("W" + std::to_string(l), w_ell_poly(F, l));
  } else {
    throw precondition_error("--form must be one of R, Q, V, P, W");
  }

  if (o.out == "text") {
    for (const auto& [name, p] : polys) out << name << " = " << p.to_string() << '\n';
    return 0;
  }
  if (o.out == "csv") {
    out << "name,degree,polynomial\n";
    for (const auto& [name, p] : polys) out << name << ',' << p.degree() << ',' << csv_field(p.to_string()) << '\n';
    return 0;
  }
  json a = json::array();
  for (const auto& [name, p] : polys) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms())
      terms.push_back({{"exponents", e}, {"coefficient", to_string(c)}, {"value", to_json(c.value())}, {"exact", c.exact()}});
    a.push_back({{"name", name}, {"vars", p.vars()}, {"degree", p.degree()}, {"text", p.to_string()}, {"terms", terms}});
  }
  out << json{{"form", o.form}, {"order", o.order}, {"polynomials", a}}.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

inline int report_error(const std::string& type, const std::string& msg, json extra, int code, std::ostream& out,
                        std::ostream& err) {
  json e = {{"type", type}, {"message", msg}};
  for (auto& [k, v] : extra.items()) e[k] = v;
  out << json{{"error", e}}.dump() << '\n';
  err << "error (" << type << "): " << msg << '\n';
  return code;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiple standard twists of L-functions: invariants, spectra, continuation and residues"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "JSON run configuration");
    if (config_required) c->required();
    sub->add_option("--out", o.out, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--seed", o.seed, "override the config seed");
  };
  const auto alpha_opts = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "twist parameter (overrides config)");
    sub->add_option("--witness", o.witness, "alpha as an index vector, e.g. 1,4");
    sub->add_option("--alpha-tol", o.alpha_tol, "relative tolerance for spectrum membership");
  };

  auto* inv = app.add_subcommand("invariants", "functional-equation invariants and structural invariants");
  common(inv, true);
  inv->add_option("--structural", o.structural, "structural invariants d_F(0..M); -1 to skip");

  auto* spec = app.add_subcommand("spectrum", "enumerate spectrum points up to alpha-max");
  common(spec, true);
  spec->add_option("--alpha-max", o.alpha_max, "upper bound for alpha")->required();
  spec->add_option("--n-max", o.n_max, "per-axis index bound (checked for completeness)");

  auto* ev = app.add_subcommand("eval", "evaluate the twist at a point or along a segment");
  common(ev, true);
  alpha_opts(ev);
  ev->add_option("--s", o.s, "point, one complex coordinate per function (e.g. 0.5+0.3i)");
  ev->add_option("--from", o.from, "segment start");
  ev->add_option("--to", o.to, "segment end");
  ev->add_option("--steps", o.steps, "points on the segment");
  ev->add_option("--method", o.method, "continue, series or mb")->check(CLI::IsMember({"continue", "series", "mb"}));

  auto* res = app.add_subcommand("residue", "numeric and closed-form residue on H*_l");
  common(res, true);
  alpha_opts(res);
  res->add_option("--ell", o.ell, "pole index")->required();
  res->add_option("--s", o.s, "point on (or projected onto) H*_l")->required();

  auto* ver = app.add_subcommand("verify", "compare numeric and closed-form residues at sampled points of H*_l");
  common(ver, true);
  alpha_opts(ver);
  ver->add_option("--ell", o.ell, "pole index")->required();
  ver->add_option("--samples", o.samples, "number of sample points");

  auto* exp = app.add_subcommand("expand", "symbolic R, Q, V, P or W polynomials");
  common(exp, false);
  exp->add_option("--form", o.form, "R, Q, V, P or W")->required()->check(CLI::IsMember({"R", "Q", "V", "P", "W"}));
  exp->add_option("--order", o.order, "M for R/Q, top index for V/P/W");
  exp->add_option("--lambdas", o.lambdas, "weights for V/P, e.g. 1/2,1/2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), json::object(), 1, out, err);
  }

  try {
    std::optional<RunConfig> cfg;
    if (!o.config.empty()) cfg = load_config(o.config);
    if (cfg && o.seed) cfg->params.seed = cfg->seed = *o.seed;
    if (o.out == "text" && !exp->parsed()) throw precondition_error("--out text is only available for expand");
    if (inv->parsed()) return cmd_invariants(*cfg, o, out);
    if (spec->parsed()) return cmd_spectrum(*cfg, o, out);
    if (ev->parsed()) return cmd_eval(*cfg, o, out);
    if (res->parsed()) return cmd_residue(*cfg, o, out);
    if (ver->parsed()) return cmd_verify(*cfg, o, out);
    return cmd_expand(cfg, o, out);
  } catch (const cutoff_error& e) {
    return report_error("cutoff", e.what(), {{"required", e.required()}}, 1, out, err);
  } catch (const ambiguity_error& e) {
    return report_error("ambiguity", e.what(), json::object(), 1, out, err);
  } catch (const precondition_error& e) {
    return report_error("precondition", e.what(), json::object(), 1, out, err);
  } catch (const pole_error& e) {
    return report_error("pole", e.what(), json::object(), 1, out, err);
  } catch (const convergence_error& e) {
    return report_error("convergence", e.what(), {{"history", e.history()}}, 2, out, err);
  } catch (const disagreement_error& e) {
    return report_error("disagreement", e.what(), {{"first", to_json(e.first())}, {"second", to_json(e.second())}}, 2,
                        out, err);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), json::object(), 1, out, err);
  }
}

}  // namespace mstwist::cli
