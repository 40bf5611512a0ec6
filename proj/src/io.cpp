#include "cutoff/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cutoff/errors.hpp"

namespace cutoff::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

double require_number(const json &j, const std::string &key,
                      const std::string &where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw std::invalid_argument(where + " needs a numeric \"" + key + "\"");
  return j.at(key).get<double>();
}

const json &require_member(const json &j, const std::string &key,
                           const std::string &where) {
  if (!j.is_object() || !j.contains(key))
    throw std::invalid_argument(where + " needs a \"" + key + "\" member");
  return j.at(key);
}

std::string trim(const std::string &s) {
  const std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string &s, const std::string &where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw std::invalid_argument(where + ": cannot parse number from \"" + s +
                                "\"");
  }
}

} // namespace

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_failure, "cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) raise(errc::io_failure, "read error on " + path);
  return buf.str();
}

json load_json(const std::string &path) {
  const std::string text = read_text_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw std::invalid_argument(path + " is not valid JSON");
  return j;
}

ExpMixture mixture_from_json(const json &j) {
  const json &jterms = require_member(j, "terms", "mixture");
  if (!jterms.is_array() || jterms.empty())
    throw std::invalid_argument("mixture \"terms\" must be a nonempty array");
  std::vector<ExpTerm> terms;
  terms.reserve(jterms.size());
  for (const json &jt : jterms) {
    if (!jt.is_object())
      throw std::invalid_argument("each mixture term must be an object");
    const bool has_a = jt.contains("a");
    const bool has_log = jt.contains("log_a");
    if (has_a && has_log)
      throw std::invalid_argument(
          "a term carries both \"a\" and \"log_a\"; pick one");
    if (!has_a && !has_log)
      throw std::invalid_argument("a term needs \"a\" or \"log_a\"");
    double log_a;
    if (has_a) {
      const double a = require_number(jt, "a", "mixture term");
      if (a < 0.0)
        throw std::invalid_argument(
            "mixture coefficients are nonnegative; keep signed parts in "
            "separate files");
      log_a = std::log(a);
    } else {
      log_a = require_number(jt, "log_a", "mixture term");
    }
    terms.push_back({log_a, require_number(jt, "rho", "mixture term")});
  }
  return build_mixture_log(std::move(terms));
}

ordered_json mixture_to_json(const ExpMixture &m) {
  ordered_json jterms = ordered_json::array();
  for (const ExpTerm &t : m.terms()) {
    ordered_json jt;
    if (logd::is_zero(t.log_a))
      jt["a"] = 0.0;
    else
      jt["log_a"] = t.log_a;
    jt["rho"] = t.rho;
    jterms.push_back(std::move(jt));
  }
  ordered_json out;
  out["terms"] = std::move(jterms);
  return out;
}

ExpMixture read_mixture(const std::string &path) {
  return mixture_from_json(load_json(path));
}

void write_mixture(const ExpMixture &m, const std::string &path) {
  const std::string body = mixture_to_json(m).dump(2) + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(errc::io_failure, "cannot open " + path + " for writing");
  out << body << std::flush;
  if (!out) raise(errc::io_failure, "short write to " + path);
}

Generator generator_from_json(const json &j) {
  const json &jstates = require_member(j, "states", "chain");
  if (!jstates.is_number_integer() || jstates.get<long>() < 2)
    throw std::invalid_argument("\"states\" must be an integer >= 2");
  const std::size_t n = jstates.get<std::size_t>();
  const json &jq = require_member(j, "Q", "chain");
  if (!jq.is_array() || jq.size() != n)
    throw std::invalid_argument("\"Q\" must be an array of " +
                                std::to_string(n) + " rows");
  std::vector<double> q;
  q.reserve(n * n);
  for (const json &jrow : jq) {
    if (!jrow.is_array() || jrow.size() != n)
      throw std::invalid_argument("every row of \"Q\" must have " +
                                  std::to_string(n) + " entries");
    for (const json &v : jrow) {
      if (!v.is_number())
        throw std::invalid_argument("\"Q\" entries must be numbers");
      q.push_back(v.get<double>());
    }
  }
  return make_generator(n, std::move(q));
}

Generator read_generator(const std::string &path) {
  return generator_from_json(load_json(path));
}

BetaSchedule beta_from_json(const json &j) {
  const json &jcase = require_member(j, "case", "beta schedule");
  const std::string name = jcase.get<std::string>();
  if (name == "const")
    return BetaSchedule::constant(require_number(j, "value", "const beta"));
  if (name == "alternating") return BetaSchedule::alternating();
  if (name == "one_minus_gamma_over_ell")
    return BetaSchedule::one_minus_gamma_over_ell(
        require_number(j, "value", "one_minus_gamma_over_ell beta"));
  if (name == "oscillating") return BetaSchedule::oscillating();
  throw std::invalid_argument("unknown beta case \"" + name + "\"");
}

ParametricFamily family_from_json(const json &j) {
  const json &jkind = require_member(j, "kind", "family descriptor");
  const std::string kind = jkind.get<std::string>();
  if (kind == "single_ou") return ParametricFamily::single_ou_canonical();
  if (kind == "hypercube") {
    double scale = 1.0;
    if (j.contains("rate_scale"))
      scale = require_number(j, "rate_scale", "hypercube descriptor");
    return ParametricFamily::hypercube(scale);
  }
  if (kind == "lemma31")
    return ParametricFamily::lemma31(
        beta_from_json(require_member(j, "beta", "lemma31 descriptor")));
  throw std::invalid_argument("unknown family kind \"" + kind + "\"");
}

ParametricFamily family_from_descriptor(const std::string &text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty family descriptor");
  if (s.front() == '{') {
    json j = json::parse(s, nullptr, false);
    if (j.is_discarded())
      throw std::invalid_argument("family descriptor is not valid JSON");
    return family_from_json(j);
  }

  if (s == "single_ou") return ParametricFamily::single_ou_canonical();
  if (s == "hypercube") return ParametricFamily::hypercube();
  if (s.rfind("hypercube:", 0) == 0)
    return ParametricFamily::hypercube(
        parse_double(s.substr(10), "hypercube descriptor"));
  if (s.rfind("lemma31/", 0) == 0) {
    const std::string rest = s.substr(8);
    if (rest == "alternating")
      return ParametricFamily::lemma31(BetaSchedule::alternating());
    if (rest == "oscillating")
      return ParametricFamily::lemma31(BetaSchedule::oscillating());
    if (rest.rfind("const:", 0) == 0)
      return ParametricFamily::lemma31(BetaSchedule::constant(
          parse_double(rest.substr(6), "const beta")));
    if (rest.rfind("one_minus_gamma_over_ell:", 0) == 0)
      return ParametricFamily::lemma31(BetaSchedule::one_minus_gamma_over_ell(
          parse_double(rest.substr(25), "one_minus_gamma_over_ell beta")));
  }
  throw std::invalid_argument(
      "unrecognized family descriptor \"" + s +
      "\"; expected single_ou, hypercube[:scale], lemma31/const:V, "
      "lemma31/alternating, lemma31/one_minus_gamma_over_ell:V, "
      "lemma31/oscillating, or a JSON object");
}

ParametricFamily family_from_descriptor_or_file(const std::string &text) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(text, ec))
    return family_from_descriptor(read_text_file(text));
  return family_from_descriptor(text);
}

ordered_json analysis_to_json(const AnalysisReport &rep) {
  ordered_json j;
  j["t"] = rep.params.t;
  j["w"] = rep.params.w;
  if (rep.r_defined)
    j["r"] = rep.params.r;
  else
    j["r"] = nullptr;
  j["argmax_index"] = rep.params.argmax_index;
  ordered_json cond;
  cond["tn_positive"] = rep.tn_positive;
  if (rep.alpha) {
    ordered_json ja;
    ja["ok"] = rep.alpha->ok;
    ja["alpha"] = rep.alpha->alpha;
    cond["alpha"] = std::move(ja);
  } else {
    cond["alpha"] = nullptr;
  }
  cond["peres"] = rep.peres
                      ? (rep.peres->consistent ? "consistent" : "inconsistent")
                      : "unchecked";
  j["conditions"] = std::move(cond);
  return j;
}

OffsetRule offset_rule_from_name(const std::string &name) {
  if (name == "left") return OffsetRule::Left;
  if (name == "right") return OffsetRule::Right;
  if (name == "shifted") return OffsetRule::Shifted;
  if (name == "custom") return OffsetRule::Custom;
  throw std::invalid_argument("unknown offset rule \"" + name +
                              "\"; expected left, right, shifted, or custom");
}

SweepSpec sweep_spec_from_json(const json &j) {
  const json &jfam = require_member(j, "family", "sweep spec");
  SweepSpec spec{jfam.is_string()
                     ? family_from_descriptor(jfam.get<std::string>())
                     : family_from_json(jfam),
                 {},
                 {},
                 OffsetRule::Left,
                 0.0,
                 {}};

  const json &jn = require_member(j, "n_grid", "sweep spec");
  if (!jn.is_array() || jn.empty())
    throw std::invalid_argument("\"n_grid\" must be a nonempty array");
  for (const json &v : jn) {
    if (!v.is_number_integer())
      throw std::invalid_argument("\"n_grid\" entries must be integers");
    spec.n_grid.push_back(v.get<long>());
  }

  const json &jc = require_member(j, "c_grid", "sweep spec");
  if (!jc.is_array() || jc.empty())
    throw std::invalid_argument("\"c_grid\" must be a nonempty array");
  for (const json &v : jc) {
    if (!v.is_number())
      throw std::invalid_argument("\"c_grid\" entries must be numbers");
    spec.c_grid.push_back(v.get<double>());
  }

  if (j.contains("offset_rule"))
    spec.offset_rule =
        offset_rule_from_name(j.at("offset_rule").get<std::string>());
  if (j.contains("theta"))
    spec.theta = require_number(j, "theta", "sweep spec");

  if (j.contains("tolerance")) {
    const json &jt = j.at("tolerance");
    if (jt.contains("slack"))
      spec.tol.slack = require_number(jt, "slack", "tolerance");
    if (jt.contains("limit"))
      spec.tol.limit = require_number(jt, "limit", "tolerance");
    if (jt.contains("separation"))
      spec.tol.separation = require_number(jt, "separation", "tolerance");
  }
  return spec;
}

SweepSpec read_sweep_spec(const std::string &path) {
  return sweep_spec_from_json(load_json(path));
}

} // namespace cutoff::io
