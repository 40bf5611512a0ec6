#include "cutoff/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cutoff/errors.hpp"

namespace cutoff {

namespace {

const double NAN_D = std::numeric_limits<double>::quiet_NaN();

bool needs_correction(OffsetRule rule, double theta) {
  switch (rule) {
  case OffsetRule::Left: return false;
  case OffsetRule::Right:
  case OffsetRule::Shifted: return true;
  case OffsetRule::Custom: return theta != 0.0;
  }
  return true;
}

// gamma of the schedule at this n's parity; nullopt when undeclared
std::optional<double> gamma_at(const BetaSchedule &sch, long n) {
  const BetaSchedule::GammaInfo g = sch.gamma();
  if (g.limit) return g.limit;
  return (n % 2 == 0) ? g.even : g.odd;
}

void check_grids(const std::vector<long> &n_grid,
                 const std::vector<double> &c_grid) {
  if (n_grid.empty() || c_grid.empty())
    throw std::invalid_argument("sweep grids must be nonempty");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("n grid must be strictly increasing");
}

unsigned thread_cap() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char *env = std::getenv("CUTOFF_LAB_THREADS");
  if (!env || !*env) return hw;
  char *end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<unsigned>(std::min<long>(v, 256));
}

SweepRow compute_row(const SweepSpec &spec, long n, double c) {
  SweepRow row;
  row.family = spec.family.name();
  row.n = n;
  row.c = c;
  row.offset_rule = spec.offset_rule;
  row.t_eval = NAN_D;
  row.log_d = {NAN_D, NAN_D};
  row.reference = NAN_D;
  row.slack = NAN_D;

  try {
    CutoffParams p{};
    try {
      p = spec.family.params(n);
    } catch (const error &e) {
      if (e.code() != errc::correction_undefined ||
          needs_correction(spec.offset_rule, spec.theta))
        throw;
      // t and w exist even where the correction does not
      const ExpMixture m = spec.family.realize(n);
      const CumulativeMass mass = cumulative_mass(m);
      const Location loc = location(m, mass);
      p.t = loc.t;
      p.w = width(m);
      p.r = NAN_D;
      p.argmax_index = loc.argmax_index;
    }

    switch (spec.offset_rule) {
    case OffsetRule::Left: row.t_eval = p.t + c * p.w; break;
    case OffsetRule::Right: row.t_eval = p.t + p.r + c * p.w; break;
    case OffsetRule::Shifted: {
      const std::optional<double> b = spec.family.beta(n);
      if (!b)
        throw std::invalid_argument("shifted offsets need a beta schedule");
      row.t_eval = p.t + (1.0 - *b) * p.r + c * p.w;
      break;
    }
    case OffsetRule::Custom:
      row.t_eval = p.t + spec.theta * p.r + c * p.w;
      break;
    }

    row.log_d = spec.family.eval_log(n, row.t_eval);

    switch (spec.offset_rule) {
    case OffsetRule::Left:
      row.reference = -c;
      if (c < 0.0) {
        row.assertion = "log_d>=reference";
        row.slack = row.log_d.log_lo - row.reference;
        row.pass = row.slack >= -spec.tol.slack;
      } else {
        row.assertion = "none";
        row.slack = row.log_d.midpoint() - row.reference;
        row.pass = true;
      }
      break;
    case OffsetRule::Right:
      if (c > 0.0) {
        const UpperCertificate cert = spec.family.upper_certificate(n, c);
        row.reference = cert.log_bound;
        row.assertion = "log_d<=reference";
        row.slack = row.log_d.log_hi - row.reference;
        row.pass = row.slack <= 0.0;
      } else {
        row.reference = -c;
        row.assertion = "none";
        row.slack = row.log_d.midpoint() - row.reference;
        row.pass = true;
      }
      break;
    case OffsetRule::Shifted: {
      const BetaSchedule *sch = spec.family.beta_schedule();
      const std::optional<double> g = sch ? gamma_at(*sch, n) : std::nullopt;
      row.reference = g ? -c + logd::log1p_exp(-*g) : NAN_D;
      row.assertion = "none";
      row.slack = row.log_d.midpoint() - row.reference;
      row.pass = true;
      break;
    }
    case OffsetRule::Custom:
      row.reference = -c;
      row.assertion = "none";
      row.slack = row.log_d.midpoint() - row.reference;
      row.pass = true;
      break;
    }
  } catch (const error &e) {
    row.assertion = std::string("error:") + errc_name(e.code());
    row.pass = false;
  } catch (const std::exception &) {
    row.assertion = "error:Invalid";
    row.pass = false;
  }
  return row;
}

void sort_rows(std::vector<SweepRow> &rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow &a, const SweepRow &b) {
                     if (a.n != b.n) return a.n < b.n;
                     return a.c < b.c;
                   });
}

std::string fmt_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

} // namespace

const char *offset_rule_name(OffsetRule rule) {
  switch (rule) {
  case OffsetRule::Left: return "left";
  case OffsetRule::Right: return "right";
  case OffsetRule::Shifted: return "shifted";
  case OffsetRule::Custom: return "custom";
  }
  return "unknown";
}

std::vector<SweepRow> sweep(const SweepSpec &spec) {
  check_grids(spec.n_grid, spec.c_grid);
  if (spec.offset_rule == OffsetRule::Shifted &&
      spec.family.beta_schedule() == nullptr)
    throw std::invalid_argument("shifted offsets need a beta schedule");

  const std::size_t nc = spec.c_grid.size();
  const std::size_t total = spec.n_grid.size() * nc;
  std::vector<SweepRow> rows(total);
  const auto compute = [&](std::size_t k) {
    rows[k] = compute_row(spec, spec.n_grid[k / nc], spec.c_grid[k % nc]);
  };

  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(thread_cap(), total));
  if (workers <= 1) {
    for (std::size_t k = 0; k < total; ++k) compute(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < total;
             k = next.fetch_add(1))
          compute(k);
      });
    for (std::thread &th : pool) th.join();
  }

  sort_rows(rows);
  return rows;
}

LimitReport limit_check_report(const BetaSchedule &beta,
                               const std::vector<double> &c_grid,
                               const std::vector<long> &n_grid,
                               const ToleranceProfile &tol) {
  check_grids(n_grid, c_grid);
  std::vector<long> grid;
  for (long n : n_grid)
    if (n >= beta.min_valid_n()) grid.push_back(n);
  if (grid.empty())
    throw std::invalid_argument("every n in the grid is below the schedule's "
                                "validity threshold " +
                                std::to_string(beta.min_valid_n()));

  const ParametricFamily fam = ParametricFamily::lemma31(beta);
  const bool oscillating = beta.kind() == BetaSchedule::Case::Oscillating;

  LimitReport rep;
  rep.tolerance_met = true;
  rep.monotone = true;
  rep.worst_error = 0.0;
  rep.separation = oscillating ? std::numeric_limits<double>::infinity()
                               : NAN_D;
  if (grid.size() != n_grid.size())
    rep.note = "skipped n below the schedule validity threshold; ";

  for (double c : c_grid) {
    // parity -> (error sequence, last error) for the monotonicity and
    // final-n checks; oscillating runs record midpoints instead
    std::vector<double> err_even, err_odd;
    double last_mid_even = NAN_D, last_mid_odd = NAN_D;
    bool seen_even = false, seen_odd = false;

    for (long n : grid) {
      LimitRow row;
      row.n = n;
      row.c = c;
      row.beta_n = beta.value(n);
      const CutoffParams p = fam.params(n);
      row.t_eval = oscillating
                       ? p.t + c * p.w
                       : p.t + (1.0 - row.beta_n) * p.r + c * p.w;
      row.log_d = fam.eval_log(n, row.t_eval);
      const double mid = row.log_d.midpoint();

      if (oscillating) {
        row.target = NAN_D;
        row.error = NAN_D;
        if (n % 2 == 0) {
          last_mid_even = mid;
          seen_even = true;
        } else {
          last_mid_odd = mid;
          seen_odd = true;
        }
      } else {
        const std::optional<double> g = gamma_at(beta, n);
        row.target = g ? -c + logd::log1p_exp(-*g) : NAN_D;
        row.error = std::abs(mid - row.target);
        ((n % 2 == 0) ? err_even : err_odd).push_back(row.error);
      }
      rep.rows.push_back(row);
    }

    if (oscillating) {
      if (seen_even && seen_odd) {
        const double sep = std::abs(last_mid_even - last_mid_odd);
        rep.separation = std::min(rep.separation, sep);
        if (sep < tol.separation) rep.tolerance_met = false;
      } else {
        rep.tolerance_met = false;
        rep.note += "oscillating check needs both parities in the grid; ";
      }
    } else {
      for (const std::vector<double> *errs : {&err_even, &err_odd}) {
        if (errs->empty()) continue;
        for (std::size_t k = 1; k < errs->size(); ++k)
          if ((*errs)[k] > (*errs)[k - 1] + 1e-12) rep.monotone = false;
        const double final_err = errs->back();
        rep.worst_error = std::max(rep.worst_error, final_err);
        if (final_err > tol.limit) rep.tolerance_met = false;
      }
    }
  }
  return rep;
}

LimitReport limit_check(const BetaSchedule &beta,
                        const std::vector<double> &c_grid,
                        const std::vector<long> &n_grid,
                        const ToleranceProfile &tol) {
  LimitReport rep = limit_check_report(beta, c_grid, n_grid, tol);
  if (rep.tolerance_met) return rep;

  if (beta.kind() == BetaSchedule::Case::Oscillating) {
    raise(errc::tolerance_not_met,
          "even/odd separation " + fmt_num(rep.separation) +
              " is below the required " + fmt_num(tol.separation));
  }
  const LimitRow *worst = nullptr;
  for (const LimitRow &row : rep.rows)
    if (!std::isnan(row.error) && (!worst || row.error > worst->error))
      worst = &row;
  std::ostringstream msg;
  msg << "limit tolerance " << fmt_num(tol.limit) << " missed";
  if (worst)
    msg << "; worst row: n=" << worst->n << " c=" << fmt_num(worst->c)
        << " measured=" << fmt_num(worst->log_d.midpoint())
        << " target=" << fmt_num(worst->target)
        << " error=" << fmt_num(worst->error);
  raise(errc::tolerance_not_met, msg.str());
}

std::string render_report(const std::vector<SweepRow> &rows,
                          ReportFormat format) {
  if (rows.empty())
    throw std::invalid_argument("report needs at least one row");
  std::vector<SweepRow> sorted = rows;
  sort_rows(sorted);

  if (format == ReportFormat::Csv) {
    std::string out = "family,n,c,offset_rule,t_eval,log_d_lo,log_d_hi,"
                      "reference,assertion,pass,slack\n";
    for (const SweepRow &row : sorted) {
      out += row.family;
      out += ',';
      out += std::to_string(row.n);
      out += ',';
      out += fmt_num(row.c);
      out += ',';
      out += offset_rule_name(row.offset_rule);
      out += ',';
      out += fmt_num(row.t_eval);
      out += ',';
      out += fmt_num(row.log_d.log_lo);
      out += ',';
      out += fmt_num(row.log_d.log_hi);
      out += ',';
      out += fmt_num(row.reference);
      out += ',';
      out += row.assertion;
      out += ',';
      out += row.pass ? "true" : "false";
      out += ',';
      out += fmt_num(row.slack);
      out += '\n';
    }
    return out;
  }

  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const SweepRow &row : sorted) {
    nlohmann::ordered_json j;
    j["family"] = row.family;
    j["n"] = row.n;
    j["c"] = row.c;
    j["offset_rule"] = offset_rule_name(row.offset_rule);
    j["t_eval"] = row.t_eval;
    j["log_d_lo"] = row.log_d.log_lo;
    j["log_d_hi"] = row.log_d.log_hi;
    j["reference"] = row.reference;
    j["assertion"] = row.assertion;
    j["pass"] = row.pass;
    j["slack"] = row.slack;
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

void emit_report(const std::vector<SweepRow> &rows, ReportFormat format,
                 const std::string &path) {
  const std::string body = render_report(rows, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    raise(errc::io_failure, "cannot open " + path + " for writing");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out)
    raise(errc::io_failure, "short write to " + path);
}

} // namespace cutoff
