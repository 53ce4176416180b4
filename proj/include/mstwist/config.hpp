#pragma once

// JSON run configuration: L-function blocks, kappa, alpha and evaluation
// parameters. Complex numbers are [re, im] pairs, rationals "p/q" strings.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mstwist/errors.hpp"
#include "mstwist/lfunc.hpp"
#include "mstwist/spectrum.hpp"
#include "mstwist/twist.hpp"

namespace mstwist {

using json = nlohmann::json;

struct RunConfig {
  std::vector<SelbergDatum> functions;
  std::vector<rational> kappa;                            // empty when absent
  std::variant<std::monostate, double, IndexVector> alpha;  // unset, float, or witness
  EvalParams params;
  std::uint64_t seed = 0;

  bool has_family() const { return !kappa.empty(); }
  TwistFamily family() const {
    if (!has_family()) throw precondition_error("config: 'kappa' is required for this command");
    return TwistFamily(functions, kappa);
  }
};

namespace detail {

class ConfigReader {
 public:
  [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
    throw precondition_error("config field '" + path + "': " + msg);
  }

  static const json& field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing");
    return *it;
  }

  static double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
  }

  static long long integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long long>();
  }

  static cplx complex(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      fail(path, "expected a complex number [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
  }

  static std::vector<cplx> complex_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of [re, im] pairs");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  static rational rational_value(const json& j, const std::string& path) {
    if (j.is_number_integer()) return rational(j.get<long long>());
    if (!j.is_string()) fail(path, "expected a rational string \"p/q\"");
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
  }

  static CoefficientSource coefficients(const json& j, const std::string& path) {
    const auto& kind = field(j, "kind", path);
    if (!kind.is_string()) fail(path + ".kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "zeta") return CoefficientSource::zeta();
    if (k == "dirichlet") {
      const long long q = integer(field(j, "modulus", path), path + ".modulus");
      if (q < 1 || q > 100000) fail(path + ".modulus", "must lie in [1, 100000]");
      return CoefficientSource::dirichlet(static_cast<int>(q), complex_list(field(j, "values", path), path + ".values"));
    }
    if (k == "list") return CoefficientSource::list(complex_list(field(j, "values", path), path + ".values"));
    fail(path + ".kind", "unknown coefficient kind '" + k + "' (zeta, dirichlet, list)");
  }

  // Either a preset ({"preset": "zeta"}, {"preset": "dirichlet", "modulus": q,
  // "values": [...]}) or the full functional-equation data.
  static SelbergDatum function(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    try {
      if (j.contains("preset")) {
        const auto& preset = j["preset"];
        const std::string t = preset.is_string() ? preset.get<std::string>() : "";
        if (t == "zeta") return zeta_datum();
        if (t == "dirichlet") {
          const long long q = integer(field(j, "modulus", path), path + ".modulus");
          if (q < 2 || q > 100000) fail(path + ".modulus", "must lie in [2, 100000]");
          const auto chi = j.contains("values") ? complex_list(j["values"], path + ".values")
                                                : quadratic_character(static_cast<int>(q));
          return dirichlet_datum(static_cast<int>(q), chi);
        }
        fail(path + ".preset", "expected \"zeta\" or \"dirichlet\"");
      }
      SelbergDatum d;
      if (j.contains("label")) {
        if (!j["label"].is_string()) fail(path + ".label", "expected a string");
        d.label = j["label"].get<std::string>();
      }
      d.Q = number(field(j, "Q", path), path + ".Q");
      d.omega = complex(field(j, "omega", path), path + ".omega");
      const auto& gf = field(j, "factors", path);
      if (!gf.is_array()) fail(path + ".factors", "expected an array");
      for (std::size_t i = 0; i < gf.size(); ++i) {
        const std::string p = path + ".factors[" + std::to_string(i) + "]";
        d.factors.push_back({number(field(gf[i], "lambda", p), p + ".lambda"), complex(field(gf[i], "mu", p), p + ".mu")});
      }
      d.coefficients = coefficients(field(j, "coefficients", path), path + ".coefficients");
      d.validate();
      return d;
    } catch (const precondition_error& e) {
      if (std::string(e.what()).rfind("config field", 0) == 0) throw;
      fail(path, e.what());
    }
  }

  static void params(const json& j, EvalParams& p) {
    const std::string path = "params";
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, val] : j.items()) {
      const std::string fp = path + "." + key;
      if (key == "X") p.X = number(val, fp);
      else if (key == "tail_tol") p.tail_tol = number(val, fp);
      else if (key == "max_keys") p.max_keys = number(val, fp);
      else if (key == "x0") p.x0 = number(val, fp);
      else if (key == "x_ratio") p.x_ratio = number(val, fp);
      else if (key == "rungs") p.rungs = static_cast<int>(integer(val, fp));
      else if (key == "integer_terms") p.integer_terms = static_cast<int>(integer(val, fp));
      else if (key == "ladder_tol") p.ladder_tol = number(val, fp);
      else if (key == "mode") {
        if (val == "analytic") p.mode = ContinuationMode::analytic;
        else if (val == "fitted") p.mode = ContinuationMode::fitted;
        else fail(fp, "expected \"analytic\" or \"fitted\"");
      } else if (key == "contour") {
        if (!val.is_object()) fail(fp, "expected an object");
        for (const auto& [ck, cv] : val.items())
          if (ck != "c" && ck != "h" && ck != "height" && ck != "tol" && ck != "margin") fail(fp + "." + ck, "unknown parameter");
        if (val.contains("c")) p.contour_c = number(val["c"], fp + ".c");
        if (val.contains("h")) p.mb_h = number(val["h"], fp + ".h");
        if (val.contains("height")) p.mb_height = number(val["height"], fp + ".height");
        if (val.contains("tol")) p.mb_tol = number(val["tol"], fp + ".tol");
        if (val.contains("margin")) p.mb_margin = number(val["margin"], fp + ".margin");
      } else if (key == "eps") {
        if (!val.is_array() || val.empty()) fail(fp, "expected a nonempty array of numbers");
        p.eps.clear();
        for (std::size_t i = 0; i < val.size(); ++i) p.eps.push_back(number(val[i], fp + "[" + std::to_string(i) + "]"));
      } else if (key == "eps_degree") p.eps_degree = static_cast<int>(integer(val, fp));
      else if (key == "max_retries") p.max_retries = static_cast<int>(integer(val, fp));
      else if (key == "pole_tol") p.pole_tol = number(val, fp);
      else fail(fp, "unknown parameter");
    }
    if (!(p.X >= 1.0)) fail(path + ".X", "must be >= 1");
    if (!(p.x0 >= 1.0)) fail(path + ".x0", "must be >= 1");
    if (!(p.x_ratio > 1.0)) fail(path + ".x_ratio", "must be > 1");
    if (p.rungs < 3) fail(path + ".rungs", "must be >= 3");
    if (p.integer_terms < 0) fail(path + ".integer_terms", "must be >= 0");
  }
};

}  // namespace detail

/// Parses alpha as a float or a witness index vector.
inline std::variant<std::monostate, double, IndexVector> parse_alpha(const json& j, const std::string& path = "alpha") {
  if (j.is_number()) {
    const double a = j.get<double>();
    if (!(a > 0)) detail::ConfigReader::fail(path, "must be positive");
    return a;
  }
  if (j.is_array()) {
    IndexVector n;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const long long k = detail::ConfigReader::integer(j[i], path + "[" + std::to_string(i) + "]");
      if (k < 1) detail::ConfigReader::fail(path + "[" + std::to_string(i) + "]", "indices must be >= 1");
      n.push_back(k);
    }
    return n;
  }
  detail::ConfigReader::fail(path, "expected a positive number or a witness index array");
}

inline RunConfig parse_config(const json& j) {
  using R = detail::ConfigReader;
  RunConfig cfg;
  if (!j.is_object()) R::fail("<root>", "expected an object");
  const auto& fns = R::field(j, "functions", "<root>");
  if (!fns.is_array() || fns.empty()) R::fail("functions", "expected a nonempty array");
  for (std::size_t i = 0; i < fns.size(); ++i) cfg.functions.push_back(R::function(fns[i], "functions[" + std::to_string(i) + "]"));
  if (j.contains("kappa")) {
    const auto& k = j["kappa"];
    if (!k.is_array()) R::fail("kappa", "expected an array of \"p/q\" strings");
    if (k.size() != cfg.functions.size()) R::fail("kappa", "need one entry per function");
    for (std::size_t i = 0; i < k.size(); ++i) cfg.kappa.push_back(R::rational_value(k[i], "kappa[" + std::to_string(i) + "]"));
    try {
      (void)cfg.family();
    } catch (const precondition_error& e) {
      R::fail("kappa", e.what());
    }
  }
  if (j.contains("alpha")) cfg.alpha = parse_alpha(j["alpha"]);
  if (j.contains("params")) R::params(j["params"], cfg.params);
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      R::fail("seed", "expected a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.params.seed = cfg.seed;
  for (const auto& [key, val] : j.items())
    if (key != "functions" && key != "kappa" && key != "alpha" && key != "params" && key != "seed" && key != "comment")
      R::fail(key, "unknown top-level field");
  return cfg;
}

/// Parses JSON text; syntax errors report line and column.
inline RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw precondition_error("config parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                             ": " + e.what());
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace mstwist
