#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smax/theory.hpp"

// Experiment orchestration: sweep (p, q, delta, n) grids with replication,
// fit log-log exponents, compare against the regime table and emit
// machine-readable reports. (config, master_seed) fixes every output byte;
// replicates run concurrently but aggregation is keyed and order-independent.

namespace smax {

struct DeltaRule {
  enum class Kind { Fixed, Power };  // Power: delta = n^value
  Kind kind = Kind::Fixed;
  double value = 1.0;

  double delta_for(long long n) const;
  std::string label() const;
};

struct ExperimentConfig {
  std::vector<std::pair<PNorm, PNorm>> pairs;
  std::vector<DeltaRule> delta_spec;
  std::vector<long long> n_grid;  // strictly increasing, >= 4 points for fits
  int replicates = 100;
  std::uint64_t master_seed = 1;
  std::string out_dir = "out";
  int threads = 0;             // 0 = hardware concurrency
  bool include_timing = false; // measured wall times break byte-determinism

  static ExperimentConfig from_json_file(const std::string& path);
  void validate_for_fit() const;  // replicates >= 30, >= 4 increasing n
};

struct ExperimentRecord {
  PNorm p = PNorm::finite(2);
  PNorm q = PNorm::finite(2);
  double delta = 0.0;
  long long n = 0;
  int replicate = 0;
  std::uint64_t seed_digest = 0;
  int m_n = 0;  // 1 <= m_n <= n
  double wall_time_s = 0.0;
};

// One experiment cell; refuses n * replicates > 1e9 sampled points.
std::vector<ExperimentRecord> run_cell(const PNorm& p, const PNorm& q, double delta,
                                       long long n, int replicates,
                                       std::uint64_t master_seed, int threads = 0);

struct FitPoint {
  long long n = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  int reps = 0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_ci_lo = 0.0;
  double slope_ci_hi = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
  std::vector<FitPoint> points;  // per-n aggregates, ascending n
  // group identity
  PNorm p = PNorm::finite(2);
  PNorm q = PNorm::finite(2);
  DeltaRule rule;
};

// Per-n mean/stderr aggregation of records (all records must share a cell
// group); result sorted by n.
std::vector<FitPoint> aggregate_records(const std::vector<ExperimentRecord>& records);

// Weighted least squares of log(mean) on log(n), weights 1/stderr_log^2;
// CI via weighted OLS with estimated scale. Throws on < 4 points, < 30
// replicates anywhere, or singular design.
FitResult fit_exponent(const std::vector<FitPoint>& points);

struct Verdict {
  bool pass = false;
  std::string reason;
  double fitted_slope = 0.0;
  double expected_exponent = 0.0;
  double tolerance = 0.07;
  bool log_path = false;     // evaluated via the ln-growth criteria
  double ln_fit_r2 = 0.0;    // linearity of mean vs ln n (log path)
  double residual_quadratic = 0.0;  // curvature of log-log residuals
};

// PASS if |slope - expected| <= tolerance; ln-growth regimes instead require
// mean ~ ln n with r^2 >= 0.99 and power slope <= 0.1. The neighbouring
// exponents 1/4 and 2/7 are additionally separated by the sign of the
// residual curvature when the slope is compatible with both.
Verdict compare_to_theory(const FitResult& fit, const RegimePrediction& prediction,
                          double tolerance = 0.07);

struct SweepPoint {
  double delta = 0.0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  int reps = 0;
};

struct SweepSeries {
  PNorm p = PNorm::finite(2);
  PNorm q = PNorm::finite(2);
  long long n = 0;
  std::vector<SweepPoint> points;          // ascending delta
  double delta_at_min_mean = 0.0;
  double max_symmetry_defect = 0.0;  // max |m(d) - m(1/d)| / pooled stderr
};

// Mean maxima count per delta at fixed n; reports the minimizing delta and
// the delta <-> 1/delta symmetry defect over reciprocal grid pairs.
SweepSeries delta_sweep(const PNorm& p, const PNorm& q, long long n,
                        const std::vector<double>& deltas, int replicates,
                        std::uint64_t master_seed, int threads = 0);

struct ReportBundle {
  std::vector<ExperimentRecord> records;
  std::vector<FitResult> fits;
  std::vector<Verdict> verdicts;  // parallel to fits
  bool include_timing = false;
};

// Full config-driven run: cells, aggregation, fits, verdicts.
ReportBundle run_experiment(const ExperimentConfig& config);

// Writes records CSV, fits JSON, verdicts JSON and one plot-ready CSV per
// fit group under out_dir; returns the written paths. Schema carries
// schema_version = 1.
std::vector<std::string> emit_report(const ReportBundle& bundle, const std::string& out_dir);

// Records CSV row formatting (header: p,q,delta,n,replicate,seed_digest,m_n,wall_time_s)
std::string records_csv(const std::vector<ExperimentRecord>& records, bool include_timing);

}  // namespace smax
