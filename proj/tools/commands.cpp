#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "sbc/blockmap.hpp"
#include "sbc/error.hpp"
#include "sbc/transition.hpp"
#include "sbc/verify.hpp"
#include "svg.hpp"

namespace sbc::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string one_line(const std::string& s) {
  std::string r;
  for (char ch : s) r += (ch == '\n' || ch == '\r') ? ' ' : ch;
  return r;
}

namespace {

fs::path out_dir(const ExperimentConfig& c) {
  fs::path p(c.outputs);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error("io_error", "cannot create output directory '" + c.outputs + "': " + ec.message());
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("io_error", "cannot write '" + p.string() + "'");
  f << text;
  if (!f) throw Error("io_error", "write failed for '" + p.string() + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string g(double v, int prec = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

}  // namespace

Failure cmd_constants(const ExperimentConfig& c, const Flags&, std::ostream& out) {
  const auto k = derive_constants(c.masses);
  json j = to_json(k);
  j["A1"] = k.A1();
  j["A2"] = k.A2();
  j["btilde_factor"] = btilde_factor();
  j["prediction"] = to_json(block_map_prediction(k));
  write_file(out_dir(c) / "constants.json", dump(j));
  out << dump(j);
  return {};
}

Failure cmd_normalform(const ExperimentConfig& c, const Flags&, std::ostream& out) {
  const auto k = derive_constants(c.masses);
  const auto r = normal_form_report(k, c.max_degree);
  json j = to_json(r);
  j["masses"] = {c.masses.m1, c.masses.m2, c.masses.m3, c.masses.m4};
  write_file(out_dir(c) / "normalform.json", dump(j));

  auto yn = [](bool b) { return b ? "yes" : "NO"; };
  out << "normal form to degree " << r.max_weight << ", masses (" << c.masses.m1 << ", " << c.masses.m2 << ", "
      << c.masses.m3 << ", " << c.masses.m4 << ")\n";
  out << "  R61    = " << r.R61.to_string() << "   [matches: " << yn(r.R61_matches) << "]\n";
  out << "  R62    = " << r.R62.to_string() << "   [matches: " << yn(r.R62_matches) << "]\n";
  if (r.max_weight >= 9) {
    out << "  R_h    = " << r.Rh.to_string() << "   [matches: " << yn(r.Rh_matches) << "]\n";
    out << "           h1' carries " << g(r.rh_scale, 12) << " R_h, h2' carries " << g(r.rh_scale_h2, 12)
        << " R_h(z2,z1)\n";
    out << "  kappa7 = " << r.kappa7.to_string() << "   [matches: " << yn(r.kappa7_matches) << "]\n";
  } else {
    out << "  " << j["note"].get<std::string>() << "\n";
  }
  out << "  x' = y' = 0: " << yn(r.x_y_flat) << ",  a2^{-1/3} h1' + a1^{-1/3} h2' = 0: " << yn(r.h_combination_zero)
      << "\n";
  out << "  conjugacy certificate: " << (r.certified ? "PASS" : "FAIL") << "\n";
  if (!r.certified) return {"certificate_failed", "normal-form conjugacy certificate failed"};
  return {};
}

Failure cmd_blockmap(const ExperimentConfig& c, const Flags& f, std::ostream& out) {
  const auto k = derive_constants(c.masses);
  const auto o = c.block_map_options();
  const auto r = sweep_and_fit(c.offset_values(), k, o, c.resolved_workers());
  const auto dir = out_dir(c);
  json j = to_json(r);
  j["config"] = c.to_json();
  j["config"].erase("outputs");
  j["options"] = o.to_json();
  j["exponent_band"] = c.exponent_band;
  write_file(dir / "blockmap.csv", sweep_csv(r));
  write_file(dir / "blockmap.json", dump(j));

  PlotSpec p;
  p.title = "energy exchange across the block";
  p.xlabel = "v = |kappa~| at entry";
  p.ylabel = "|delta h|";
  p.logx = p.logy = true;
  PlotSeries s1{"|dh1|", {}, {}, "#1f77b4", false}, s2{"|dh2|", {}, {}, "#d62728", false};
  for (const auto& row : r.rows) {
    s1.x.push_back(row.v);
    s1.y.push_back(std::fabs(row.dh1));
    s2.x.push_back(row.v);
    s2.y.push_back(std::fabs(row.dh2));
  }
  p.series = {s1, s2};
  if (r.fitted && !r.rows.empty()) {
    PlotSeries fl{"fit v^" + g(r.fit.exponent, 5), {}, {}, "#2ca02c", true};
    for (double v : {r.rows.front().v, r.rows.back().v}) {
      fl.x.push_back(v);
      fl.y.push_back(r.fit.coefficient * std::pow(v, r.fit.exponent));
    }
    p.series.push_back(fl);
  }
  write_file(dir / "blockmap.svg", render_svg(p));

  out << "block map sweep: " << r.rows.size() << " rows, " << r.failures.size() << " failures, delta " << o.delta
      << (o.uncoupled ? ", uncoupled field" : "") << (o.extended ? ", extended precision" : "") << "\n";
  for (const auto& fl : r.failures) out << "  failed s=" << g(fl.s) << ": " << fl.error_class << ": " << one_line(fl.message) << "\n";
  if (o.uncoupled) out << "  max drift of h1, h2, y: " << g(r.max_conserved_drift, 3) << "\n";
  else out << "  max energy drift: " << g(r.max_energy_drift, 3) << "\n";

  if (f.ratio_check && !r.rows.empty()) {
    out << "  ratio check, target dh1/dh2 = -(a2/a1)^{1/3} = " << g(-std::cbrt(k.a2 / k.a1), 10) << "\n";
    out << "  " << std::setw(12) << "s" << std::setw(12) << "v" << std::setw(16) << "dh1/dh2" << std::setw(12)
        << "rel.dev" << "\n";
    for (const auto& row : r.rows) {
      const double q = row.dh1 / row.dh2, t = -std::cbrt(k.a2 / k.a1);
      out << "  " << std::setw(12) << g(row.s) << std::setw(12) << g(row.v) << std::setw(16) << g(q, 10)
          << std::setw(12) << g(std::fabs(q / t - 1), 3) << "\n";
    }
  }

  if (!r.fitted) {
    out << "  " << r.fit_note << "\n";
    if (o.uncoupled) return {};
    return {"fit_refused", r.fit_note};
  }
  const auto& best = r.series.candidates[r.series.best];
  out << "  free fit exponent: " << g(r.fit.exponent, 6) << "  (r^2 " << g(r.fit.r_squared, 8) << ")\n";
  out << "  grid selects " << best.exp_num << "/" << best.exp_den << ", neighbour residual ratio "
      << g(r.series.ratio_to_neighbours, 4) << "\n";
  out << "  v^{8/3} coefficient of dh1: " << g(r.coefficient, 8) << " = " << g(r.coefficient_ratio, 6)
      << " x btilde_c a1^{-1/3}\n";
  out << "  dh1/dh2 max deviation from " << g(r.ratio_target, 8) << ": " << g(100 * r.ratio_max_dev, 3) << "%\n";
  bool opposite = true;
  for (const auto& row : r.rows) opposite = opposite && (row.dh1 > 0) != (row.dh2 > 0);
  out << "  sign convention realised: dh2 " << (opposite ? "opposite to" : "NOT opposite to")
      << " dh1, i.e. h2 - btilde_c a2^{-1/3} v^{8/3}\n";
  if (!r.failures.empty())
    return {"sweep_partial", std::to_string(r.failures.size()) + " of " +
                                 std::to_string(r.rows.size() + r.failures.size()) + " offsets failed"};
  if (r.fit.exponent < c.exponent_band[0] || r.fit.exponent > c.exponent_band[1])
    return {"exponent_out_of_band", "fitted exponent " + g(r.fit.exponent, 6) + " outside [" + g(c.exponent_band[0]) +
                                        ", " + g(c.exponent_band[1]) + "]"};
  return {};
}

Failure cmd_verify(const ExperimentConfig& c, const Flags& f, std::ostream& out) {
  if (f.list) {
    for (const auto& s : check_registry()) out << s.name << "\t" << s.anchor << "\n";
    out << "faults:\n";
    for (const auto& [n, d] : fault_registry()) out << "  " << n << "\t" << d << "\n";
    return {};
  }
  CheckContext ctx;
  ctx.seed = c.seed;
  ctx.faults = f.faults;
  const auto res = run_checks(ctx, f.checks);
  json j;
  j["seed"] = c.seed;
  j["faults"] = f.faults;
  j["checks"] = json::array();
  int failed = 0;
  for (const auto& r : res) {
    j["checks"].push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    if (!r.passed) ++failed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  (" << g(r.seconds, 3) << " s)\n";
  }
  j["passed"] = failed == 0;
  write_file(out_dir(c) / "verify.json", dump(j));
  out << (res.size() - failed) << "/" << res.size() << " checks passed\n";
  if (failed) return {"verification_failed", std::to_string(failed) + " of " + std::to_string(res.size()) + " checks failed"};
  return {};
}

Failure cmd_simulate(const ExperimentConfig& c, const Flags& f, std::ostream& out) {
  const auto k = derive_constants(c.masses);
  const auto o = c.block_map_options();
  const double s = f.offset != 0 ? f.offset : c.simulate_offset;
  const auto nodes = passage_trajectory(s, k, o);
  const auto row = numeric_block_map(s, k, o);
  std::ostringstream csv;
  csv.precision(17);
  csv << "tau,z1,z2,x,h1,h2,y,time_physical\n";
  PlotSpec p;
  p.title = "passage through the block, s = " + g(s);
  p.xlabel = "zr1 = (z1 + z2)/2";
  p.ylabel = "zr2 = (z1 - z2)/2";
  PlotSeries path{"orbit", {}, {}, "#1f77b4", true};
  for (const auto& n : nodes) {
    csv << n.tau;
    for (double v : n.state) csv << ',' << v;
    csv << ',' << n.time_physical << '\n';
    path.x.push_back((n.state[0] + n.state[1]) / 2);
    path.y.push_back((n.state[0] - n.state[1]) / 2);
  }
  p.series = {path};
  const auto dir = out_dir(c);
  write_file(dir / "trajectory.csv", csv.str());
  write_file(dir / "trajectory.svg", render_svg(p));
  json j = to_json(row);
  j["nodes"] = nodes.size();
  write_file(dir / "trajectory.json", dump(j));
  out << "simulated s=" << g(s) << ": " << nodes.size() << " nodes, tau " << g(row.time_rescaled, 8)
      << ", physical time " << g(row.time_physical, 8) << ", dh1 " << g(row.dh1, 8) << ", dh2 " << g(row.dh2, 8)
      << "\n";
  return {};
}

}  // namespace sbc::cli
