// Command-line front end: sampling, maxima, density evaluation, witness
// construction/verification and experiment sweeps with reports.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "smax/harness.hpp"
#include "smax/maxima.hpp"

using namespace smax;

namespace {

PNorm parse_norm(const std::string& s) { return PNorm::parse(s.c_str()); }

std::vector<Point> read_points_csv(std::istream& in) {
  std::vector<Point> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string sx, sy;
    if (!std::getline(row, sx, ',') || !std::getline(row, sy, ',')) continue;
    try {
      pts.push_back({std::stod(sx), std::stod(sy)});
    } catch (const std::exception&) {
      // header or malformed row
    }
  }
  return pts;
}

void write_points_csv(std::ostream& out, const std::vector<Point>& pts) {
  out << "x,y\n";
  char buf[80];
  for (const Point& p : pts) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    out << buf;
  }
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

nlohmann::json witness_to_json(const WitnessSet& w, const WitnessReport& report) {
  nlohmann::json j;
  j["schema_version"] = 1;
  switch (w.family) {
    case WitnessFamily::B1B1: j["family"] = "b1b1"; break;
    case WitnessFamily::B2B2: j["family"] = "b2b2"; break;
    case WitnessFamily::BInfQ: j["family"] = "binfq"; break;
  }
  j["kind"] = (w.family == WitnessFamily::B1B1) ? "corner_triangle" : "corner_region";
  j["sigma"] = w.sigma;
  j["m"] = w.m;
  j["n"] = w.n;
  j["predicted_m"] = w.predicted_m;
  nlohmann::json pts = nlohmann::json::array();
  for (const Point& p : w.points) pts.push_back({p.x, p.y});
  j["points"] = pts;
  nlohmann::json rep;
  rep["disjoint"] = report.disjoint;
  rep["dominant"] = report.dominant;
  rep["measures_in_band"] = report.measures_in_band;
  rep["pass"] = report.pass;
  rep["dominance_violations"] = report.dominance_violations;
  rep["worst_overlap_ratio"] = report.worst_overlap_ratio;
  rep["n_mu"] = report.n_mu;
  rep["m_ratio"] = report.m_ratio;
  rep["m_within_factor3"] = report.m_within_factor3;
  j["verification"] = rep;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smoothed-maxima experiment toolkit"};
  app.require_subcommand(1);

  std::string p_str = "2", q_str = "2", out_path, config_path, in_path, family = "numeric";
  double delta = 1.0, delta_power = 0.0;
  long long n = 1024;
  int reps = 100;
  std::uint64_t seed = 1;
  double px = 0.0, py = 0.0;
  int grid = 0;
  int threads = 0;
  std::vector<long long> n_grid;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--p", p_str, "norm index p (e.g. 1, 2, inf)");
    cmd->add_option("--q", q_str, "norm index q");
    cmd->add_option("--delta", delta, "perturbation radius delta");
    cmd->add_option("--delta-power", delta_power,
                    "delta as a power rule delta = n^a (overrides --delta)");
    cmd->add_option("--n", n, "points per trial");
    cmd->add_option("--reps", reps, "replicates");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--out", out_path, "output file (default stdout)");
    cmd->add_option("--threads", threads, "worker threads (0 = auto)");
  };
  auto effective_delta = [&](CLI::App* cmd, long long n_val) {
    if (cmd->count("--delta-power") > 0) {
      return std::pow(static_cast<double>(n_val), delta_power);
    }
    return delta;
  };

  CLI::App* sample = app.add_subcommand("sample", "draw points from B_p + delta*B_q as CSV");
  add_common(sample);

  CLI::App* maxima_cmd = app.add_subcommand("maxima", "maximal points of CSV input");
  maxima_cmd->add_option("--in", in_path, "input CSV of x,y rows (default stdin)");
  maxima_cmd->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* density = app.add_subcommand("density", "evaluate a density family");
  add_common(density);
  density->add_option("--family", family, "numeric|b2b2|b1b2|binfq|t_b1b1|sector_b2b2");
  density->add_option("--x", px, "evaluation point x");
  density->add_option("--y", py, "evaluation point y");
  density->add_option("--grid", grid, "emit an NxN grid over the support box instead");

  CLI::App* witness = app.add_subcommand("witness", "build and verify a lower-bound witness");
  add_common(witness);
  witness->add_option("--family", family, "b1b1|b2b2|binfq");

  CLI::App* experiment = app.add_subcommand("experiment", "run a config-driven sweep");
  experiment->add_option("--config", config_path, "JSON config file");
  add_common(experiment);
  experiment->add_option("--n-grid", n_grid, "n grid for an inline run (without --config)");

  CLI::App* fit = app.add_subcommand("fit", "fit a records CSV (grouped externally)");
  fit->add_option("--in", in_path, "records CSV (default stdin)");
  fit->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* report = app.add_subcommand("report", "alias of experiment; kept for scripts");
  report->add_option("--config", config_path, "JSON config file")->required();
  report->add_option("--out", out_path, "output directory (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ofstream file;
    if (app.got_subcommand(sample)) {
      const SmoothedDist dist(parse_norm(p_str), parse_norm(q_str), effective_delta(sample, n));
      const auto pts = sample_set(dist, static_cast<int>(n), SeedSpec{seed, 0, 0});
      write_points_csv(open_out(file, out_path), pts);
    } else if (app.got_subcommand(maxima_cmd)) {
      std::vector<Point> pts;
      if (in_path.empty()) {
        pts = read_points_csv(std::cin);
      } else {
        std::ifstream in(in_path);
        if (!in) throw std::runtime_error("cannot open input file: " + in_path);
        pts = read_points_csv(in);
      }
      const MaximaResult res = maximal_points(pts);
      std::ostream& out = open_out(file, out_path);
      write_points_csv(out, res.maxima);
      out << "count," << res.count << "\n";
    } else if (app.got_subcommand(density)) {
      const PNorm p = parse_norm(p_str), q = parse_norm(q_str);
      auto eval = [&](Point v) -> double {
        if (family == "numeric") return density_numeric(SmoothedDist(p, q, delta), v);
        if (family == "b2b2") {
          B2B2Density model(delta);
          return model(1.0 + delta - std::hypot(v.x, v.y));
        }
        if (family == "b1b2") return density_b1b2(delta, v);
        if (family == "binfq") return density_binfq(q, delta, v);
        if (family == "t_b1b1") return measure_t_b1b1(delta, v);
        if (family == "sector_b2b2") {
          B2B2SectorMeasure model(delta, 16);
          return model(1.0 + delta - std::hypot(v.x, v.y));
        }
        throw std::runtime_error("unknown density family: " + family);
      };
      std::ostream& out = open_out(file, out_path);
      out << "x,y,f\n";
      char buf[120];
      if (grid > 0) {
        const double b = 1.0 + delta;
        for (int i = 0; i < grid; ++i) {
          for (int j = 0; j < grid; ++j) {
            const Point v{-b + 2.0 * b * (i + 0.5) / grid, -b + 2.0 * b * (j + 0.5) / grid};
            double f = 0.0;
            try {
              f = eval(v);
            } catch (const std::domain_error&) {
              f = 0.0;  // outside the family's domain
            }
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", v.x, v.y, f);
            out << buf;
          }
        }
      } else {
        const double f = eval({px, py});
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", px, py, f);
        out << buf;
      }
    } else if (app.got_subcommand(witness)) {
      const PNorm q = parse_norm(q_str);
      const double d = effective_delta(witness, n);
      WitnessSet w = (family == "b1b1")   ? witness_b1b1(d, n)
                     : (family == "b2b2") ? witness_b2b2(d, n)
                     : (family == "binfq")
                         ? witness_binfq(q, d, n)
                         : throw std::runtime_error("witness family must be b1b1|b2b2|binfq");
      const WitnessReport rep = verify_witness(w.dist, w);
      std::ostream& out = open_out(file, out_path);
      out << witness_to_json(w, rep).dump(2) << "\n";
    } else if (app.got_subcommand(experiment) || app.got_subcommand(report)) {
      ExperimentConfig cfg;
      if (!config_path.empty()) {
        cfg = ExperimentConfig::from_json_file(config_path);
      } else if (app.got_subcommand(experiment)) {
        // inline single-group run from flags
        if (n_grid.empty()) {
          throw std::runtime_error("experiment needs --config or --n-grid with cell flags");
        }
        cfg.pairs = {{parse_norm(p_str), parse_norm(q_str)}};
        DeltaRule rule;
        if (experiment->count("--delta-power") > 0) {
          rule = {DeltaRule::Kind::Power, delta_power};
        } else {
          rule = {DeltaRule::Kind::Fixed, delta};
        }
        cfg.delta_spec = {rule};
        cfg.n_grid = n_grid;
        cfg.replicates = reps;
        cfg.master_seed = seed;
        cfg.threads = threads;
      } else {
        throw std::runtime_error("report needs --config");
      }
      if (!out_path.empty()) cfg.out_dir = out_path;
      const ReportBundle bundle = run_experiment(cfg);
      for (const std::string& path : emit_report(bundle, cfg.out_dir)) {
        std::cout << path << "\n";
      }
      int fails = 0;
      for (const Verdict& v : bundle.verdicts) fails += v.pass ? 0 : 1;
      if (fails > 0) {
        std::cerr << fails << " verdict(s) FAILED\n";
        return 2;
      }
    } else if (app.got_subcommand(fit)) {
      std::vector<ExperimentRecord> records;
      auto parse_records = [&](std::istream& in) {
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          std::istringstream row(line);
          std::string f[8];
          for (int i = 0; i < 8; ++i) std::getline(row, f[i], ',');
          ExperimentRecord r;
          r.p = parse_norm(f[0]);
          r.q = parse_norm(f[1]);
          r.delta = std::stod(f[2]);
          r.n = std::stoll(f[3]);
          r.replicate = std::stoi(f[4]);
          r.seed_digest = std::stoull(f[5], nullptr, 16);
          r.m_n = std::stoi(f[6]);
          records.push_back(r);
        }
      };
      if (in_path.empty()) {
        parse_records(std::cin);
      } else {
        std::ifstream in(in_path);
        if (!in) throw std::runtime_error("cannot open input file: " + in_path);
        parse_records(in);
      }
      if (records.empty()) throw std::runtime_error("fit: no records");
      FitResult res = fit_exponent(aggregate_records(records));
      res.p = records.front().p;
      res.q = records.front().q;
      nlohmann::json j;
      j["schema_version"] = 1;
      j["slope"] = res.slope;
      j["intercept"] = res.intercept;
      j["slope_ci95"] = {res.slope_ci_lo, res.slope_ci_hi};
      j["r_squared"] = res.r_squared;
      j["points_used"] = res.points_used;
      std::ostream& out = open_out(file, out_path);
      out << j.dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
