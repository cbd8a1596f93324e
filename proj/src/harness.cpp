#include "smax/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "smax/maxima.hpp"
#include "smax/parallel.hpp"
#include "smax/sampling.hpp"

namespace smax {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string pnorm_str(const PNorm& p) { return std::string(p.label().data()); }

std::uint64_t pnorm_bits(const PNorm& p) {
  const double v = p.is_infinite() ? std::numeric_limits<double>::infinity() : p.value();
  std::uint64_t bits;
  static_assert(sizeof bits == sizeof v);
  std::memcpy(&bits, &v, sizeof bits);
  return bits;
}

std::uint64_t double_bits(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  return bits;
}

std::uint64_t cell_hash(const PNorm& p, const PNorm& q, double delta, long long n) {
  std::uint64_t h = mix64(pnorm_bits(p));
  h = mix64(h ^ pnorm_bits(q));
  h = mix64(h ^ double_bits(delta));
  h = mix64(h ^ static_cast<std::uint64_t>(n));
  return h;
}

// two-sided 97.5% t quantiles for small df; 1.96 beyond the table
double t_quantile_975(int df) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                 2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                 2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                 2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return 1.96;
  if (df <= 30) return table[df - 1];
  return 1.96;
}

}  // namespace

double DeltaRule::delta_for(long long n) const {
  if (kind == Kind::Fixed) return value;
  return std::pow(static_cast<double>(n), value);
}

std::string DeltaRule::label() const {
  std::ostringstream os;
  if (kind == Kind::Fixed) {
    os << "fixed:" << fmt_double(value);
  } else {
    os << "pow:" << fmt_double(value);
  }
  return os.str();
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  ExperimentConfig cfg;
  for (const auto& pr : j.at("pairs")) {
    cfg.pairs.emplace_back(PNorm::parse(pr.at(0).get<std::string>().c_str()),
                           PNorm::parse(pr.at(1).get<std::string>().c_str()));
  }
  for (const auto& d : j.at("delta_spec")) {
    DeltaRule rule;
    if (d.contains("fixed")) {
      rule.kind = DeltaRule::Kind::Fixed;
      rule.value = d.at("fixed").get<double>();
    } else if (d.contains("power")) {
      rule.kind = DeltaRule::Kind::Power;
      rule.value = d.at("power").get<double>();
    } else {
      throw std::runtime_error("delta_spec entries need 'fixed' or 'power'");
    }
    cfg.delta_spec.push_back(rule);
  }
  cfg.n_grid = j.at("n_grid").get<std::vector<long long>>();
  cfg.replicates = j.at("replicates").get<int>();
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("include_timing")) cfg.include_timing = j.at("include_timing").get<bool>();
  return cfg;
}

void ExperimentConfig::validate_for_fit() const {
  if (replicates < 30) throw std::invalid_argument("config: replicates must be >= 30 for fits");
  if (n_grid.size() < 4) throw std::invalid_argument("config: n_grid needs >= 4 points");
  for (size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) {
      throw std::invalid_argument("config: n_grid must be strictly increasing");
    }
  }
}

std::vector<ExperimentRecord> run_cell(const PNorm& p, const PNorm& q, double delta,
                                       long long n, int replicates,
                                       std::uint64_t master_seed, int threads) {
  if (n < 1 || replicates < 1) throw std::invalid_argument("run_cell: n and replicates >= 1");
  if (static_cast<double>(n) * replicates > 1e9) {
    throw std::invalid_argument("run_cell: refusing cell with n*replicates > 1e9 points");
  }
  const SmoothedDist dist(p, q, delta);
  const std::uint64_t cell = cell_hash(p, q, delta, n);
  std::vector<ExperimentRecord> records(replicates);
  parallel_for_index(replicates, threads, [&](long long r) {
    const SeedSpec seed{master_seed, cell, static_cast<std::uint64_t>(r)};
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Point> pts = sample_set(dist, static_cast<int>(n), seed);
    const int count = maxima_count(std::move(pts));
    const auto t1 = std::chrono::steady_clock::now();
    ExperimentRecord& rec = records[r];
    rec.p = p;
    rec.q = q;
    rec.delta = delta;
    rec.n = n;
    rec.replicate = static_cast<int>(r);
    rec.seed_digest = StreamRng(seed).key();
    rec.m_n = count;
    rec.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  });
  return records;
}

std::vector<FitPoint> aggregate_records(const std::vector<ExperimentRecord>& records) {
  std::map<long long, std::vector<double>> by_n;
  for (const ExperimentRecord& r : records) by_n[r.n].push_back(r.m_n);
  std::vector<FitPoint> points;
  for (auto& [n, vals] : by_n) {
    double sum = 0.0;
    for (double v : vals) sum += v;
    const double mean = sum / vals.size();
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    const double sd = vals.size() > 1 ? std::sqrt(ss / (vals.size() - 1)) : 0.0;
    points.push_back({n, mean, sd / std::sqrt(static_cast<double>(vals.size())),
                      static_cast<int>(vals.size())});
  }
  return points;
}

FitResult fit_exponent(const std::vector<FitPoint>& points) {
  if (points.size() < 4) throw std::invalid_argument("fit_exponent: need >= 4 n-values");
  for (const FitPoint& pt : points) {
    if (pt.reps < 30) throw std::invalid_argument("fit_exponent: need >= 30 replicates per cell");
    if (!(pt.mean > 0.0)) throw std::invalid_argument("fit_exponent: non-positive mean");
  }
  const size_t k = points.size();
  std::vector<double> x(k), y(k), w(k);
  for (size_t i = 0; i < k; ++i) {
    x[i] = std::log(static_cast<double>(points[i].n));
    y[i] = std::log(points[i].mean);
    const double se_log = std::max(points[i].stderr_mean / points[i].mean, 1e-9);
    w[i] = 1.0 / (se_log * se_log);
  }
  double sw = 0, sx = 0, sy = 0;
  for (size_t i = 0; i < k; ++i) { sw += w[i]; sx += w[i] * x[i]; sy += w[i] * y[i]; }
  const double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < k; ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx <= 1e-12 * sw) throw std::invalid_argument("fit_exponent: singular design (all n equal)");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double rss = 0, tss = 0;
  for (size_t i = 0; i < k; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += w[i] * r * r;
    tss += w[i] * (y[i] - ybar) * (y[i] - ybar);
  }
  const double scale = (k > 2) ? rss / static_cast<double>(k - 2) : 0.0;
  const double se_slope = std::sqrt(std::max(0.0, scale / sxx));
  const double tq = t_quantile_975(static_cast<int>(k) - 2);
  fit.slope_ci_lo = fit.slope - tq * se_slope;
  fit.slope_ci_hi = fit.slope + tq * se_slope;
  fit.r_squared = (tss > 0.0) ? 1.0 - rss / tss : 1.0;
  fit.points_used = static_cast<int>(k);
  fit.points = points;
  std::sort(fit.points.begin(), fit.points.end(),
            [](const FitPoint& a, const FitPoint& b) { return a.n < b.n; });
  return fit;
}

namespace {

// unweighted simple regression helper: returns (slope, r^2)
std::pair<double, double> simple_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t k = x.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < k; ++i) { sx += x[i]; sy += y[i]; }
  const double xb = sx / k, yb = sy / k;
  double sxx = 0, sxy = 0, tss = 0;
  for (size_t i = 0; i < k; ++i) {
    sxx += (x[i] - xb) * (x[i] - xb);
    sxy += (x[i] - xb) * (y[i] - yb);
    tss += (y[i] - yb) * (y[i] - yb);
  }
  const double slope = sxy / std::max(sxx, 1e-300);
  double rss = 0;
  for (size_t i = 0; i < k; ++i) {
    const double r = (y[i] - yb) - slope * (x[i] - xb);
    rss += r * r;
  }
  const double r2 = (tss > 0) ? 1.0 - rss / tss : 1.0;
  return {slope, r2};
}

double residual_quadratic_coeff(const FitResult& fit) {
  const size_t k = fit.points.size();
  std::vector<double> x(k), r(k);
  double xb = 0;
  for (size_t i = 0; i < k; ++i) x[i] = std::log(static_cast<double>(fit.points[i].n));
  for (double xi : x) xb += xi;
  xb /= k;
  for (size_t i = 0; i < k; ++i) {
    r[i] = std::log(fit.points[i].mean) - (fit.intercept + fit.slope * x[i]);
  }
  std::vector<double> h(k);
  double hb = 0;
  for (size_t i = 0; i < k; ++i) { h[i] = (x[i] - xb) * (x[i] - xb); hb += h[i]; }
  hb /= k;
  double shh = 0, shr = 0;
  for (size_t i = 0; i < k; ++i) {
    shh += (h[i] - hb) * (h[i] - hb);
    shr += (h[i] - hb) * r[i];
  }
  return (shh > 0) ? shr / shh : 0.0;
}

}  // namespace

Verdict compare_to_theory(const FitResult& fit, const RegimePrediction& prediction,
                          double tolerance) {
  Verdict v;
  v.tolerance = tolerance;
  v.fitted_slope = fit.slope;
  v.expected_exponent = prediction.expected_exponent;
  if (!(fit.p == prediction.p) || !(fit.q == prediction.q)) {
    v.pass = false;
    v.reason = "regime mismatch: fit pair differs from prediction pair";
    return v;
  }
  // the fit's delta rule must lie inside the prediction's regime
  {
    const double n_ref = static_cast<double>(fit.points.empty() ? 4096 : fit.points.back().n);
    const double a = (fit.rule.kind == DeltaRule::Kind::Power)
                         ? fit.rule.value
                         : (fit.rule.value > 0.0 ? std::log(fit.rule.value) / std::log(n_ref)
                                                 : -std::numeric_limits<double>::infinity());
    if (a < prediction.regime_lo_exp - 1e-9 || a > prediction.regime_hi_exp + 1e-9) {
      v.pass = false;
      v.reason = "regime mismatch: delta rule outside the prediction's regime";
      return v;
    }
  }
  v.residual_quadratic = residual_quadratic_coeff(fit);

  if (prediction.log_like) {
    v.log_path = true;
    std::vector<double> lnln(fit.points.size()), means(fit.points.size());
    for (size_t i = 0; i < fit.points.size(); ++i) {
      lnln[i] = std::log(static_cast<double>(fit.points[i].n));
      means[i] = fit.points[i].mean;
    }
    auto [slope_ln, r2_ln] = simple_fit(lnln, means);
    (void)slope_ln;
    v.ln_fit_r2 = r2_ln;
    if (r2_ln >= 0.99 && std::fabs(fit.slope) <= 0.1) {
      v.pass = true;
      v.reason = "ln-regime: mean is linear in ln n and the power slope is flat";
    } else {
      v.pass = false;
      v.reason = "ln-regime check failed (r2 or power slope out of bounds)";
    }
    return v;
  }

  const double expected = prediction.expected_exponent;
  if (std::fabs(fit.slope - expected) > tolerance) {
    v.pass = false;
    v.reason = "slope outside tolerance of expected exponent";
    return v;
  }
  // 1/4 vs 2/7 are closer than the tolerance; when the slope is compatible
  // with both, the residual curvature separates them: the n^{1/4} rows carry
  // an additive ln-term whose effective slope rises toward the asymptote
  // (clearly positive curvature, ~+0.01 over the tested n range) while the
  // pure 2/7 power stays flat (|curvature| ~ 0.002)
  const double e14 = 0.25, e27 = 2.0 / 7.0;
  const bool ambiguous = std::fabs(fit.slope - e14) <= tolerance &&
                         std::fabs(fit.slope - e27) <= tolerance &&
                         (std::fabs(expected - e14) < 1e-9 || std::fabs(expected - e27) < 1e-9);
  if (ambiguous) {
    const bool expect_quarter = std::fabs(expected - e14) < 1e-9;
    const bool looks_flat = v.residual_quadratic < 0.002;
    const bool looks_log_plus_power = v.residual_quadratic > 0.008;
    if (expect_quarter ? looks_flat : looks_log_plus_power) {
      v.pass = false;
      v.reason = "slope in tolerance but residual curvature favors the neighbouring exponent";
      return v;
    }
  }
  v.pass = true;
  v.reason = "slope within tolerance";
  return v;
}

SweepSeries delta_sweep(const PNorm& p, const PNorm& q, long long n,
                        const std::vector<double>& deltas, int replicates,
                        std::uint64_t master_seed, int threads) {
  SweepSeries series;
  series.p = p;
  series.q = q;
  series.n = n;
  for (double d : deltas) {
    const auto records = run_cell(p, q, d, n, replicates, master_seed, threads);
    const auto agg = aggregate_records(records);
    series.points.push_back({d, agg[0].mean, agg[0].stderr_mean, agg[0].reps});
  }
  std::sort(series.points.begin(), series.points.end(),
            [](const SweepPoint& a, const SweepPoint& b) { return a.delta < b.delta; });
  double min_mean = std::numeric_limits<double>::infinity();
  for (const SweepPoint& pt : series.points) {
    if (pt.mean < min_mean) {
      min_mean = pt.mean;
      series.delta_at_min_mean = pt.delta;
    }
  }
  // symmetry defect over reciprocal pairs present in the grid
  for (const SweepPoint& a : series.points) {
    if (a.delta <= 0.0) continue;
    const double want = 1.0 / a.delta;
    for (const SweepPoint& b : series.points) {
      if (std::fabs(b.delta - want) <= 1e-9 * want) {
        const double pooled = std::sqrt(a.stderr_mean * a.stderr_mean +
                                        b.stderr_mean * b.stderr_mean);
        if (pooled > 0.0) {
          series.max_symmetry_defect =
              std::max(series.max_symmetry_defect, std::fabs(a.mean - b.mean) / pooled);
        }
      }
    }
  }
  return series;
}

ReportBundle run_experiment(const ExperimentConfig& config) {
  config.validate_for_fit();
  ReportBundle bundle;
  bundle.include_timing = config.include_timing;
  for (const auto& [p, q] : config.pairs) {
    for (const DeltaRule& rule : config.delta_spec) {
      std::vector<ExperimentRecord> group_records;
      for (long long n : config.n_grid) {
        auto cell = run_cell(p, q, rule.delta_for(n), n, config.replicates,
                             config.master_seed, config.threads);
        group_records.insert(group_records.end(), cell.begin(), cell.end());
      }
      FitResult fit = fit_exponent(aggregate_records(group_records));
      fit.p = p;
      fit.q = q;
      fit.rule = rule;
      const long long n_ref = config.n_grid.back();
      const RegimePrediction pred =
          predict_regime(p, q, rule.delta_for(n_ref), static_cast<double>(n_ref));
      RegimePrediction adjusted = pred;
      if (rule.kind == DeltaRule::Kind::Power && !pred.log_like) {
        adjusted.expected_exponent =
            expected_exponent_for_rule(p, q, rule.value, static_cast<double>(n_ref));
      }
      bundle.verdicts.push_back(compare_to_theory(fit, adjusted));
      bundle.fits.push_back(std::move(fit));
      bundle.records.insert(bundle.records.end(), group_records.begin(), group_records.end());
    }
  }
  return bundle;
}

std::string records_csv(const std::vector<ExperimentRecord>& records, bool include_timing) {
  std::ostringstream os;
  os << "p,q,delta,n,replicate,seed_digest,m_n,wall_time_s\n";
  char digest[24];
  for (const ExperimentRecord& r : records) {
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(r.seed_digest));
    os << pnorm_str(r.p) << ',' << pnorm_str(r.q) << ',' << fmt_double(r.delta) << ',' << r.n
       << ',' << r.replicate << ',' << digest << ',' << r.m_n << ','
       << (include_timing ? fmt_double(r.wall_time_s) : std::string("0")) << '\n';
  }
  return os.str();
}

namespace {

nlohmann::json fit_to_json(const FitResult& fit) {
  nlohmann::json j;
  j["p"] = pnorm_str(fit.p);
  j["q"] = pnorm_str(fit.q);
  j["delta_rule"] = fit.rule.label();
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["slope_ci95"] = {fit.slope_ci_lo, fit.slope_ci_hi};
  j["r_squared"] = fit.r_squared;
  j["points_used"] = fit.points_used;
  nlohmann::json pts = nlohmann::json::array();
  for (const FitPoint& pt : fit.points) {
    pts.push_back({{"n", pt.n}, {"mean", pt.mean}, {"stderr", pt.stderr_mean}, {"reps", pt.reps}});
  }
  j["points"] = pts;
  return j;
}

nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json j;
  j["pass"] = v.pass;
  j["reason"] = v.reason;
  j["fitted_slope"] = v.fitted_slope;
  j["expected_exponent"] = v.expected_exponent;
  j["tolerance"] = v.tolerance;
  j["log_path"] = v.log_path;
  j["ln_fit_r2"] = v.ln_fit_r2;
  j["residual_quadratic"] = v.residual_quadratic;
  return j;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.')
                              ? c
                              : '_';
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_report: cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("emit_report: write failed: " + path);
}

}  // namespace

std::vector<std::string> emit_report(const ReportBundle& bundle, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;

  const std::string records_path = out_dir + "/records.csv";
  write_file(records_path, records_csv(bundle.records, bundle.include_timing));
  written.push_back(records_path);

  nlohmann::json fits_json;
  fits_json["schema_version"] = 1;
  fits_json["fits"] = nlohmann::json::array();
  for (const FitResult& fit : bundle.fits) fits_json["fits"].push_back(fit_to_json(fit));
  const std::string fits_path = out_dir + "/fits.json";
  write_file(fits_path, fits_json.dump(2) + "\n");
  written.push_back(fits_path);

  nlohmann::json verdicts_json;
  verdicts_json["schema_version"] = 1;
  verdicts_json["verdicts"] = nlohmann::json::array();
  for (size_t i = 0; i < bundle.verdicts.size(); ++i) {
    nlohmann::json v = verdict_to_json(bundle.verdicts[i]);
    if (i < bundle.fits.size()) {
      v["p"] = pnorm_str(bundle.fits[i].p);
      v["q"] = pnorm_str(bundle.fits[i].q);
      v["delta_rule"] = bundle.fits[i].rule.label();
    }
    verdicts_json["verdicts"].push_back(v);
  }
  const std::string verdicts_path = out_dir + "/verdicts.json";
  write_file(verdicts_path, verdicts_json.dump(2) + "\n");
  written.push_back(verdicts_path);

  for (const FitResult& fit : bundle.fits) {
    std::ostringstream os;
    os << "log_n,log_mean,stderr\n";
    for (const FitPoint& pt : fit.points) {
      os << fmt_double(std::log(static_cast<double>(pt.n))) << ','
         << fmt_double(std::log(pt.mean)) << ',' << fmt_double(pt.stderr_mean) << '\n';
    }
    const std::string path = out_dir + "/plot_" + sanitize(pnorm_str(fit.p)) + "_" +
                             sanitize(pnorm_str(fit.q)) + "_" + sanitize(fit.rule.label()) +
                             ".csv";
    write_file(path, os.str());
    written.push_back(path);
  }
  return written;
}

}  // namespace smax
