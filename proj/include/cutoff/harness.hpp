#ifndef CUTOFF_HARNESS_HPP
#define CUTOFF_HARNESS_HPP

#include <string>
#include <vector>

#include "cutoff/families.hpp"
#include "cutoff/log_domain.hpp"

// Grid sweeps over (n, c) that compare measured distances against profile
// targets and bound certificates, plus the report writer. Rows are pure
// values; the sweep may fan out over threads (capped by CUTOFF_LAB_THREADS)
// and always returns rows sorted by (n, c).

namespace cutoff {

// Where to evaluate relative to the cutoff location t_n:
//   Left     t + c w
//   Right    t + r + c w
//   Shifted  t + (1 - beta_n) r + c w   (needs a beta schedule)
//   Custom   t + theta r + c w          (caller-chosen fraction of r)
enum class OffsetRule { Left, Right, Shifted, Custom };

const char *offset_rule_name(OffsetRule rule);

struct ToleranceProfile {
  double slack = 1e-9;      // exact identities and lower-bound rows
  double limit = 0.02;      // limit targets at the largest n
  double separation = 0.1;  // minimal even/odd gap for oscillating schedules
};

struct SweepSpec {
  ParametricFamily family;
  std::vector<long> n_grid; // strictly increasing
  std::vector<double> c_grid;
  OffsetRule offset_rule = OffsetRule::Left;
  double theta = 0.0; // only read under OffsetRule::Custom
  ToleranceProfile tol;
};

// One evaluated grid point. `reference` is a log-domain comparison value:
// -c for profile targets, the certificate bound for Right rows. `assertion`
// names the check applied ("log_d>=reference", "log_d<=reference", "none",
// or "error:<Code>" when the family or certificate failed at this point),
// and `slack` is the conservative measured endpoint minus the reference.
struct SweepRow {
  std::string family;
  long n = 0;
  double c = 0.0;
  OffsetRule offset_rule = OffsetRule::Left;
  double t_eval = 0.0;
  LogInterval log_d{};
  double reference = 0.0;
  std::string assertion;
  bool pass = false;
  double slack = 0.0;
};

std::vector<SweepRow> sweep(const SweepSpec &spec);

// Subsequence convergence check for the 9^n family under a beta schedule.
// Evaluates ln d_n at t + (1 - beta_n) r + c w and compares against the
// limit -c + ln(1 + e^(-gamma)) for the schedule's gamma; alternating
// schedules are split by parity and checked against their parity limits,
// and the oscillating schedule is instead checked for even/odd separation
// of ln d_n(t + c w), which has no single limit.
struct LimitRow {
  long n = 0;
  double c = 0.0;
  double beta_n = 0.0;
  double t_eval = 0.0;
  LogInterval log_d{};
  double target = 0.0; // log-domain; NaN for separation-style rows
  double error = 0.0;  // |midpoint - target|, NaN when target is NaN
};

struct LimitReport {
  std::vector<LimitRow> rows;
  bool tolerance_met = false; // final-n error vs tol (or separation vs tol)
  bool monotone = false;      // errors nonincreasing along each subsequence
  double worst_error = 0.0;   // largest final-n error over the c grid
  double separation = 0.0;    // smallest even/odd gap (oscillating only)
  std::string note;
};

// Never throws on a tolerance miss; flags it in the report.
LimitReport limit_check_report(const BetaSchedule &beta,
                               const std::vector<double> &c_grid,
                               const std::vector<long> &n_grid,
                               const ToleranceProfile &tol = {});

// Same computation, but raises ToleranceNotMet (worst row in the message)
// when the final-n check fails. Monotonicity misses stay report-only.
LimitReport limit_check(const BetaSchedule &beta,
                        const std::vector<double> &c_grid,
                        const std::vector<long> &n_grid,
                        const ToleranceProfile &tol = {});

enum class ReportFormat { Csv, Json };

// Writes rows (re-sorted by (n, c)) to `path`. CSV columns are fixed:
// family,n,c,offset_rule,t_eval,log_d_lo,log_d_hi,reference,assertion,
// pass,slack. JSON carries the same fields. Output is byte-deterministic
// for identical inputs. Raises IoFailure when the file cannot be written.
void emit_report(const std::vector<SweepRow> &rows, ReportFormat format,
                 const std::string &path);

std::string render_report(const std::vector<SweepRow> &rows,
                          ReportFormat format);

} // namespace cutoff

#endif
