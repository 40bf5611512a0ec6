#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cutoff/acceptance.hpp"
#include "cutoff/analysis.hpp"
#include "cutoff/errors.hpp"
#include "cutoff/families.hpp"
#include "cutoff/harness.hpp"
#include "cutoff/io.hpp"
#include "cutoff/mixture.hpp"
#include "cutoff/spectral.hpp"

namespace {

std::string g12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void print_terms(const cutoff::ExpMixture &m) {
  const std::size_t shown = m.size() <= 24 ? m.size() : 3;
  for (std::size_t i = 0; i < shown; ++i) {
    const cutoff::ExpTerm &t = m.term(i);
    std::cout << "term " << (i + 1) << ": log_a = " << g12(t.log_a)
              << ", rho = " << g12(t.rho) << "\n";
  }
  if (shown < m.size())
    std::cout << "... (" << m.size() << " terms total)\n";
}

int cmd_analyze(const std::string &path, const std::optional<double> &alpha,
                const std::vector<double> &cs, bool as_json) {
  const cutoff::ExpMixture m = cutoff::io::read_mixture(path);
  const cutoff::CumulativeMass mass = cutoff::cumulative_mass(m);
  const cutoff::Location loc = cutoff::location(m, mass);

  cutoff::io::AnalysisReport rep;
  rep.params.t = loc.t;
  rep.params.w = cutoff::width(m);
  rep.params.argmax_index = loc.argmax_index;
  rep.tn_positive = loc.t > 0.0;
  try {
    rep.params.r = cutoff::correction(loc.t, rep.params.w);
    rep.r_defined = true;
  } catch (const cutoff::error &e) {
    if (e.code() != cutoff::errc::correction_undefined) throw;
    rep.params.r = std::numeric_limits<double>::quiet_NaN();
    rep.r_defined = false;
  }
  if (alpha) rep.alpha = cutoff::check_alpha(m, mass, *alpha);

  const cutoff::CutoffParams p{rep.params.t, rep.params.w, rep.params.r,
                               rep.params.argmax_index};

  if (as_json) {
    nlohmann::ordered_json j = cutoff::io::analysis_to_json(rep);
    if (!cs.empty()) {
      nlohmann::ordered_json certs = nlohmann::ordered_json::array();
      for (double c : cs) {
        nlohmann::ordered_json jc;
        jc["c"] = c;
        try {
          if (c < 0.0) {
            const cutoff::LowerCertificate lc =
                cutoff::lower_bound_certificate(m, mass, p, c);
            jc["side"] = "lower";
            jc["epsilon"] = lc.epsilon;
            jc["i_star"] = lc.i_star;
            jc["log_bound"] = lc.log_bound;
          } else if (c > 0.0) {
            if (!rep.r_defined)
              cutoff::raise(cutoff::errc::correction_undefined,
                            "correction undefined at this mixture");
            const cutoff::UpperCertificate uc =
                cutoff::upper_bound_certificate(m, mass, p, c);
            jc["side"] = "upper";
            jc["l_index"] = uc.l_index;
            jc["C"] = uc.C;
            jc["log_bound"] = uc.log_bound;
          } else {
            jc["side"] = "none";
          }
        } catch (const cutoff::error &e) {
          jc["error"] = cutoff::errc_name(e.code());
        }
        certs.push_back(std::move(jc));
      }
      j["certificates"] = std::move(certs);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  std::cout << "t = " << g12(rep.params.t) << "\n";
  std::cout << "w = " << g12(rep.params.w) << "\n";
  if (rep.r_defined)
    std::cout << "r = " << g12(rep.params.r) << "\n";
  else
    std::cout << "r = undefined (rho_1 * t <= 1)\n";
  std::cout << "argmax_index = " << rep.params.argmax_index << "\n";
  std::cout << "tn_positive = " << (rep.tn_positive ? "true" : "false")
            << "\n";
  if (rep.alpha)
    std::cout << "alpha(" << g12(rep.alpha->alpha)
              << ") = " << (rep.alpha->ok ? "ok" : "violated at index " +
                            std::to_string(rep.alpha->first_violation))
              << "\n";
  std::cout << "peres = unchecked (needs a family, not one mixture)\n";

  for (double c : cs) {
    try {
      if (c < 0.0) {
        const cutoff::LowerCertificate lc =
            cutoff::lower_bound_certificate(m, mass, p, c);
        std::cout << "lower_certificate c=" << g12(c)
                  << " eps=" << g12(lc.epsilon) << ": i_star=" << lc.i_star
                  << " log_bound=" << g12(lc.log_bound) << "\n";
      } else if (c > 0.0) {
        if (!rep.r_defined)
          cutoff::raise(cutoff::errc::correction_undefined,
                        "correction undefined at this mixture");
        const cutoff::UpperCertificate uc =
            cutoff::upper_bound_certificate(m, mass, p, c);
        std::cout << "upper_certificate c=" << g12(c)
                  << ": l=" << uc.l_index << " C=" << g12(uc.C)
                  << " log_bound=" << g12(uc.log_bound) << "\n";
      } else {
        std::cout << "c=0: no certificate side is defined\n";
      }
    } catch (const cutoff::error &e) {
      std::cout << "certificate c=" << g12(c) << ": "
                << cutoff::errc_name(e.code()) << " (" << e.what() << ")\n";
    }
  }
  return 0;
}

int cmd_family(const std::string &descriptor, long n) {
  const cutoff::ParametricFamily fam =
      cutoff::io::family_from_descriptor_or_file(descriptor);
  std::cout << "family = " << fam.name() << "\n";
  std::cout << "n = " << n << "\n";
  try {
    const cutoff::CutoffParams p = fam.params(n);
    std::cout << "t = " << g12(p.t) << "\n";
    std::cout << "w = " << g12(p.w) << "\n";
    std::cout << "r = " << g12(p.r) << "\n";
    std::cout << "argmax_index = " << p.argmax_index << "\n";
  } catch (const cutoff::error &e) {
    if (e.code() != cutoff::errc::correction_undefined) throw;
    std::cout << "r = undefined (rho_1 * t <= 1)\n";
  }
  std::cout << "rho_1 = " << g12(fam.rho1(n)) << "\n";
  if (const std::optional<double> b = fam.beta(n))
    std::cout << "beta_n = " << g12(*b) << "\n";
  if (fam.materializable(n))
    print_terms(fam.realize(n));
  else
    std::cout << "terms = virtual (evaluable only as an enclosure)\n";
  return 0;
}

int cmd_sweep(const std::string &spec_path, const std::string &out_path,
              const std::string &format) {
  const cutoff::SweepSpec spec = cutoff::io::read_sweep_spec(spec_path);
  const std::vector<cutoff::SweepRow> rows = cutoff::sweep(spec);
  cutoff::emit_report(rows,
                      format == "json" ? cutoff::ReportFormat::Json
                                       : cutoff::ReportFormat::Csv,
                      out_path);
  std::size_t failed = 0;
  for (const cutoff::SweepRow &row : rows)
    if (!row.pass) ++failed;
  std::cout << rows.size() << " rows, " << failed << " failed -> " << out_path
            << "\n";
  return failed == 0 ? 0 : 1;
}

int cmd_spectral(const std::string &chain_path, std::size_t state) {
  const cutoff::Generator g = cutoff::io::read_generator(chain_path);
  const cutoff::ExpMixture mix = cutoff::chi_square_mixture(g, state);
  std::cout << cutoff::io::mixture_to_json(mix).dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string &suite) {
  const std::vector<cutoff::acceptance::CriterionResult> results =
      cutoff::acceptance::run_suite(suite);
  int failed = 0;
  for (const auto &r : results) {
    std::printf("[%s] criterion %d: %s - %s (%.2f s)\n",
                r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str(), r.seconds);
    if (!r.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, results.size());
  return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"window asymptotics laboratory for exponential mixtures"};
  app.require_subcommand(1);

  std::string mixture_path;
  double alpha = 0.0;
  std::vector<double> cs;
  bool as_json = false;
  CLI::App *analyze = app.add_subcommand(
      "analyze", "cutoff parameters, conditions and certificates of a mixture");
  analyze->add_option("--mixture", mixture_path, "mixture JSON file")
      ->required();
  CLI::Option *alpha_opt = analyze->add_option(
      "--alpha", alpha, "check the coefficient growth ratio a_i <= alpha*A_{i-1}");
  analyze->add_option("--c", cs,
                      "window offsets; negative request lower certificates, "
                      "positive upper");
  analyze->add_flag("--json", as_json, "emit JSON instead of text");

  std::string descriptor;
  long fam_n = 0;
  CLI::App *family = app.add_subcommand(
      "family", "closed-form parameters and terms of a parametric family");
  family->add_option("--descriptor", descriptor,
                     "family descriptor (shorthand, JSON, or a file)")
      ->required();
  family->add_option("--n", fam_n, "family index")->required();

  std::string spec_path, out_path, format = "csv";
  CLI::App *sweep_cmd =
      app.add_subcommand("sweep", "run a (n, c) grid sweep and write a report");
  sweep_cmd->add_option("--spec", spec_path, "sweep spec JSON file")
      ->required();
  sweep_cmd->add_option("--out", out_path, "report output path")->required();
  sweep_cmd->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string chain_path;
  std::size_t state = 0;
  CLI::App *spectral = app.add_subcommand(
      "spectral", "chi-square mixture of a reversible generator");
  spectral->add_option("--chain", chain_path, "generator JSON file")
      ->required();
  spectral->add_option("--state", state, "start state (0-based)")->required();

  std::string suite;
  CLI::App *verify =
      app.add_subcommand("verify", "run a bundled verification suite");
  verify->add_option("--suite", suite, "lemma31, bounds, spectral, or all")
      ->required()
      ->check(CLI::IsMember({"lemma31", "bounds", "spectral", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) {
      std::optional<double> a;
      if (alpha_opt->count() > 0) a = alpha;
      return cmd_analyze(mixture_path, a, cs, as_json);
    }
    if (family->parsed()) return cmd_family(descriptor, fam_n);
    if (sweep_cmd->parsed()) return cmd_sweep(spec_path, out_path, format);
    if (spectral->parsed()) return cmd_spectral(chain_path, state);
    if (verify->parsed()) return cmd_verify(suite);
  } catch (const cutoff::error &e) {
    std::cerr << cutoff::errc_name(e.code()) << ": " << e.what() << "\n";
    return e.code() == cutoff::errc::io_failure ? 2 : 1;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
