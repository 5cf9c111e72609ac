// pipeline.hpp - batch stages behind the CLI: solve, analyze, measure, the
// chained pipeline, and the axiom probe. Every stage writes deterministic
// CSV/JSON artifacts and records them in a run manifest.
#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>

#include "dplab/capacity.hpp"
#include "dplab/config.hpp"
#include "dplab/harmonic.hpp"
#include "dplab/ratios.hpp"
#include "dplab/singular_measures.hpp"
#include "dplab/version.hpp"

namespace dplab {

struct RunManifest {
  std::string config_hash;
  std::string version = kVersion;
  // stage name -> output paths / wall time
  std::vector<std::tuple<std::string, std::vector<std::string>, double>> stages;

  void add_stage(const std::string& name, std::vector<std::string> files, double wall_ms) {
    stages.emplace_back(name, std::move(files), wall_ms);
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["version"] = version;
    auto& st = j["stages"];
    st = nlohmann::json::array();
    for (const auto& [name, files, ms] : stages) {
      nlohmann::json s;
      s["name"] = name;
      s["outputs"] = files;
      s["wall_ms"] = ms;
      st.push_back(s);
    }
    return j;
  }

  void verify_outputs(const std::string& dir) const {
    for (const auto& [name, files, ms] : stages)
      for (const auto& f : files)
        if (!std::filesystem::exists(std::filesystem::path(dir) / f))
          throw IoError("manifest: missing output " + f + " of stage " + name);
  }
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw IoError("cannot open " + path + " for writing");
    for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

class StageTimer {
 public:
  StageTimer() : t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

inline std::filesystem::path ensure_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw IoError("cannot create output dir " + dir);
  return p;
}

}  // namespace detail

// --- solve stage ------------------------------------------------------------

inline RunManifest cmd_solve(const LoadedConfig& loaded, const std::string& out_dir) {
  const ExperimentConfig& cfg = loaded.config;
  const auto dir = detail::ensure_out_dir(out_dir);
  detail::StageTimer timer;

  const DensityProfile density =
      DensityProfile::pure(cfg.exponents, cfg.make_coefficient_field());
  GridField u0 = cfg.make_initial_field();
  SolveOptions opts = cfg.solver;
  opts.seed = cfg.seed;
  auto [u, report] = minimize_constrained(density, u0, opts);

  save_field(u, (dir / "field.bin").string(), (dir / "field.json").string());

  nlohmann::json rj;
  rj["iterations"] = report.iterations;
  rj["final_energy"] = report.final_energy;
  rj["final_energy_regularized"] = report.final_energy_regularized;
  rj["energy_trace"] = report.energy_trace;
  rj["max_constraint_violation"] = report.max_constraint_violation;
  rj["el_residual_norm"] = report.el_residual_norm;
  rj["termination"] = report.termination;
  detail::write_json((dir / "solve_report.json").string(), rj);

  RunManifest man;
  man.config_hash = std::to_string(fnv1a(loaded.raw));
  man.add_stage("solve", {"field.bin", "field.json", "solve_report.json"}, timer.ms());
  detail::write_json((dir / "manifest.json").string(), man.to_json());
  man.verify_outputs(out_dir);
  return man;
}

// --- analyze stage ----------------------------------------------------------

inline RunManifest cmd_analyze(const LoadedConfig& loaded, const std::string& field_bin,
                               const std::string& field_sidecar, const std::string& out_dir) {
  const ExperimentConfig& cfg = loaded.config;
  const auto dir = detail::ensure_out_dir(out_dir);
  detail::StageTimer timer;

  const DensityProfile density =
      DensityProfile::pure(cfg.exponents, cfg.make_coefficient_field());
  GridField u = load_field(field_bin, field_sidecar);
  if (!u.grid.same_layout(density.grid()))
    throw ValidationError("analyze: field grid does not match config grid");

  const std::vector<double> ladder = cfg.make_radii_ladder();
  const ClassifyResult classified =
      classify_grid(density, u, ladder, cfg.analyzer.options, cfg.analyzer.probe_stride);

  // regularity.csv: one row per evaluated (point, rho)
  {
    std::vector<std::string> header;
    for (int d = 0; d < cfg.dim; ++d) header.push_back("x" + std::to_string(d + 1));
    header.insert(header.end(), {"rho", "excess", "quotient", "classification"});
    detail::CsvWriter csv((dir / "regularity.csv").string(), header);
    for (const auto& cc : classified.probes) {
      auto point_cells = [&]() {
        std::vector<std::string> cells;
        for (int d = 0; d < cfg.dim; ++d) cells.push_back(detail::fmt_double(cc.center[d]));
        return cells;
      };
      if (cc.detailed) {
        for (size_t i = 0; i < cc.detailed->radii.size(); ++i) {
          auto cells = point_cells();
          cells.push_back(detail::fmt_double(cc.detailed->radii[i]));
          cells.push_back(detail::fmt_double(cc.detailed->excess_values[i]));
          cells.push_back(detail::fmt_double(cc.detailed->intrinsic_quotients[i]));
          cells.push_back(to_string(cc.classification));
          csv.row(cells);
        }
      } else {
        auto cells = point_cells();
        cells.push_back(detail::fmt_double(ladder.back()));
        cells.push_back(detail::fmt_double(cc.excess_min));
        cells.push_back(detail::fmt_double(cc.nms_value));
        cells.push_back(to_string(cc.classification));
        csv.row(cells);
      }
    }
  }

  // flags.csv: flagged singular cells
  {
    std::vector<std::string> header{"cell"};
    for (int d = 0; d < cfg.dim; ++d) header.push_back("x" + std::to_string(d + 1));
    header.insert(header.end(), {"a_value", "limsup"});
    detail::CsvWriter csv((dir / "flags.csv").string(), header);
    for (size_t i = 0; i < classified.flagged.size(); ++i) {
      const long cell = classified.flagged[i];
      const auto& rep = classified.flagged_reports[i];
      std::vector<std::string> cells{std::to_string(cell)};
      for (int d = 0; d < cfg.dim; ++d) cells.push_back(detail::fmt_double(rep.point[d]));
      cells.push_back(detail::fmt_double(density.coefficient.interpolate(rep.point)));
      cells.push_back(detail::fmt_double(rep.limsup_estimate));
      csv.row(cells);
    }
  }

  // integrability probes on the central ball + the harmonic comparison map
  const Grid grid = u.grid;
  Point center(cfg.dim);
  const double probe_r = std::min(0.25 * cfg.half_extent, ladder.front());
  const Ball probe_ball(center, probe_r);
  const double base_ratio = higher_integrability_ratio(density, u, probe_ball, 0.0);
  const double cap = cfg.analyzer.integrability_cap_factor * std::max(base_ratio, 1e-12);
  const IntegrabilityProbe delta_probe =
      probe_higher_integrability(density, u, probe_ball, cfg.analyzer.delta_grid, cap);

  double sigma_probe = 0.0;
  {
    SolveOptions hopts = cfg.solver;
    hopts.max_iters = std::min<long>(hopts.max_iters, 2000);
    const auto hc = harmonic_compare(density, u, Ball(center, 2.0 * probe_r), hopts);
    const double h_base = higher_integrability_ratio(density, hc.h, probe_ball, 0.0);
    const double h_cap = cfg.analyzer.integrability_cap_factor * std::max(h_base, 1e-12);
    const IntegrabilityProbe sp =
        probe_higher_integrability(density, hc.h, probe_ball, cfg.analyzer.delta_grid, h_cap);
    sigma_probe = std::min(sp.delta, delta_probe.delta);
  }

  // phase census over a lattice of balls
  long census_p = 0, census_pq = 0, census_violations = 0;
  {
    const double r = ladder.front();
    const int stride = std::max(1, cfg.analyzer.phase_census_stride);
    for (long c = 0; c < grid.cell_count(); ++c) {
      const auto mi = grid.cell_multi(c);
      bool on = true;
      for (int d = 0; d < cfg.dim; ++d)
        if (mi[size_t(d)] % stride != 0) on = false;
      if (!on) continue;
      const Point p = grid.cell_center(mi);
      bool fits = true;
      for (int d = 0; d < cfg.dim; ++d)
        if (p[d] - r < grid.lo[size_t(d)] - 1e-9 || p[d] + r > grid.hi[size_t(d)] + 1e-9)
          fits = false;
      if (!fits) continue;
      const PhaseLabel label =
          phase_classify(cfg.exponents, density.coefficient, Ball(p, r), cfg.analyzer.gamma);
      (label.label == Phase::p_phase ? census_p : census_pq) += 1;
      if (!label.consequent_ok) ++census_violations;
    }
  }

  nlohmann::json aj;
  aj["delta_g_probe"] = delta_probe.delta;
  aj["sigma_g_probe"] = sigma_probe;
  aj["integrability_cap"] = cap;
  {
    auto& ratios = aj["integrability_ratios"];
    ratios = nlohmann::json::array();
    for (const auto& [d, r] : delta_probe.ratios) ratios.push_back({{"delta", d}, {"ratio", r}});
  }
  aj["phase_census"] = {{"p_phase", census_p},
                        {"pq_phase", census_pq},
                        {"consequent_violations", census_violations}};
  aj["census"] = {{"regular", classified.census_regular},
                  {"singular", classified.census_singular},
                  {"inconclusive", classified.census_inconclusive},
                  {"flagged", classified.flagged.size()}};
  detail::write_json((dir / "analysis.json").string(), aj);

  RunManifest man;
  man.config_hash = std::to_string(fnv1a(loaded.raw));
  man.add_stage("analyze", {"regularity.csv", "flags.csv", "analysis.json"}, timer.ms());
  detail::write_json((dir / "manifest.json").string(), man.to_json());
  man.verify_outputs(out_dir);
  return man;
}

// --- measure stage ----------------------------------------------------------

inline std::vector<FlaggedCell> load_flags_csv(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open flags list " + path);
  std::vector<FlaggedCell> flags;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("flags list: missing header");
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    size_t pos = 0;
    while (true) {
      const size_t comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (int(cells.size()) < 2 + dim)
      throw ValidationError("flags list: malformed row at line " + std::to_string(line_no));
    try {
      FlaggedCell f;
      f.cell = std::stol(cells[0]);
      f.center = Point(dim);
      for (int d = 0; d < dim; ++d) f.center[d] = std::stod(cells[size_t(1 + d)]);
      f.coefficient_value = std::stod(cells[size_t(1 + dim)]);
      flags.push_back(f);
    } catch (const std::exception&) {
      throw ValidationError("flags list: malformed row at line " + std::to_string(line_no));
    }
  }
  return flags;
}

inline RunManifest cmd_measure(const LoadedConfig& loaded, const std::string& flags_path,
                               const std::string& out_dir,
                               std::optional<double> delta_override = std::nullopt) {
  const ExperimentConfig& cfg = loaded.config;
  const auto dir = detail::ensure_out_dir(out_dir);
  detail::StageTimer timer;

  const CoefficientField coeff = cfg.make_coefficient_field();
  const std::vector<FlaggedCell> flags = load_flags_csv(flags_path, cfg.dim);

  double delta = cfg.measure.delta;
  if (delta_override) delta = *delta_override;

  const SingularMeasureReport rep = singular_set_measures(
      flags, cfg.exponents, coeff, delta, cfg.measure.kappa_ladder, cfg.measure.hausdorff);

  auto write_sweep = [&](const std::string& name, const std::vector<SweepEntry>& sweep) {
    detail::CsvWriter csv((dir / name).string(),
                          {"kappa", "estimate_minus", "estimate", "estimate_plus"});
    for (const auto& e : sweep)
      csv.row({detail::fmt_double(e.kappa), detail::fmt_double(e.minus),
               detail::fmt_double(e.integral), detail::fmt_double(e.plus)});
  };
  write_sweep("measure_sigma_p.csv", rep.sweep_p);
  write_sweep("measure_sigma_q.csv", rep.sweep_q);

  // capacity of the flagged set inside the inscribed domain ball
  nlohmann::json capj = nlohmann::json::array();
  if (!flags.empty()) {
    PointCloudSet K;
    K.descriptor = "grid-cells";
    for (const auto& f : flags) K.points.push_back(f.center);
    const Ball domain(Point(cfg.dim), cfg.half_extent);
    const Musielak phi = musielak_flagship(cfg.exponents, coeff, delta);
    for (int mesh : cfg.measure.capacity_meshes) {
      const CapacityReport cr = capacity_estimate(phi, K, domain, mesh);
      capj.push_back({{"mesh", cr.mesh},
                      {"bound", cr.value},
                      {"iterations", cr.iterations},
                      {"termination", cr.termination}});
    }
  }

  nlohmann::json mj;
  mj["delta"] = rep.delta;
  mj["sigma_p_cells"] = rep.sigma_p.size();
  mj["sigma_q_cells"] = rep.sigma_q.size();
  mj["decays_p"] = rep.decays_p;
  mj["decays_q"] = rep.decays_q;
  mj["m_truncation"] = rep.m_truncation;
  mj["kappa_tilde"] = rep.kappa_tilde;
  mj["capacity"] = capj;
  detail::write_json((dir / "measure.json").string(), mj);

  RunManifest man;
  man.config_hash = std::to_string(fnv1a(loaded.raw));
  man.add_stage("measure", {"measure_sigma_p.csv", "measure_sigma_q.csv", "measure.json"},
                timer.ms());
  detail::write_json((dir / "manifest.json").string(), man.to_json());
  man.verify_outputs(out_dir);
  return man;
}

// --- axiom probe stage --------------------------------------------------------

inline RunManifest cmd_probe_axioms(const LoadedConfig& loaded, const std::string& out_dir) {
  const ExperimentConfig& cfg = loaded.config;
  const auto dir = detail::ensure_out_dir(out_dir);
  detail::StageTimer timer;

  const CoefficientField coeff = cfg.make_coefficient_field();
  const Grid grid = cfg.make_grid();

  auto report_json = [](const AxiomReport& r) {
    nlohmann::json j;
    j["envelope_constant"] = r.envelope_constant;
    j["beta3_ok"] = r.beta3_ok;
    j["slope_constant"] = r.slope_constant;
    j["power_low_constant"] = r.power_low_constant;
    j["power_high_constant"] = r.power_high_constant;
    j["control_constant"] = r.control_constant;
    j["pass"] = r.pass;
    return j;
  };

  nlohmann::json aj;
  const double delta = cfg.measure.delta;
  const Musielak flagship = musielak_flagship(cfg.exponents, coeff, delta);
  aj["flagship"] = report_json(axiom_probe(flagship, grid, 4000, cfg.seed));
  const Musielak power = musielak_power(cfg.dim, cfg.exponents.p);
  aj["power_p"] = report_json(axiom_probe(power, grid, 4000, cfg.seed));
  detail::write_json((dir / "axioms.json").string(), aj);

  RunManifest man;
  man.config_hash = std::to_string(fnv1a(loaded.raw));
  man.add_stage("probe-axioms", {"axioms.json"}, timer.ms());
  detail::write_json((dir / "manifest.json").string(), man.to_json());
  man.verify_outputs(out_dir);
  return man;
}

// --- chained pipeline -----------------------------------------------------------

inline RunManifest cmd_pipeline(const LoadedConfig& loaded, const std::string& out_dir) {
  const auto dir = detail::ensure_out_dir(out_dir);
  RunManifest man;
  man.config_hash = std::to_string(fnv1a(loaded.raw));

  const RunManifest solve_man = cmd_solve(loaded, out_dir);
  man.stages.insert(man.stages.end(), solve_man.stages.begin(), solve_man.stages.end());

  const RunManifest analyze_man = cmd_analyze(loaded, (dir / "field.bin").string(),
                                              (dir / "field.json").string(), out_dir);
  man.stages.insert(man.stages.end(), analyze_man.stages.begin(), analyze_man.stages.end());

  std::optional<double> delta_override;
  if (loaded.config.measure.delta_mode == "auto") {
    // take delta from the analyzer probe, clamped into the admissible window
    std::ifstream in((dir / "analysis.json").string());
    nlohmann::json aj;
    in >> aj;
    const double probed = aj.at("delta_g_probe").get<double>();
    const double max_delta = double(loaded.config.dim) / loaded.config.exponents.q - 1.0;
    delta_override = std::max(0.0, std::min(probed, max_delta - 1e-9));
  }
  const RunManifest measure_man =
      cmd_measure(loaded, (dir / "flags.csv").string(), out_dir, delta_override);
  man.stages.insert(man.stages.end(), measure_man.stages.begin(), measure_man.stages.end());

  detail::write_json((dir / "manifest.json").string(), man.to_json());
  man.verify_outputs(out_dir);
  return man;
}

}  // namespace dplab
