#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ibtree/errors.hpp"
#include "ibtree/increments.hpp"
#include "ibtree/pareto.hpp"
#include "ibtree/relaxation.hpp"
#include "ibtree/solver.hpp"
#include "ibtree/tree_io.hpp"
#include "ibtree/world.hpp"

namespace ibtree::cli {

namespace {

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct MapArgs {
  std::string input;
  std::string prior;
  bool no_invert = false;
};

void add_map_options(CLI::App* cmd, MapArgs& m) {
  cmd->add_option("--input", m.input, "Grid map as PGM (P2 or P5), square with power-of-two side")->required();
  cmd->add_option("--prior", m.prior, "Cell weights, one per line in row-major order");
  cmd->add_flag("--no-invert", m.no_invert, "Bright pixels are relevant (default: dark pixels are)");
}

WorldMap load_world(const MapArgs& m) {
  WorldMap world = load_pgm(m.input, !m.no_invert);
  if (!m.prior.empty()) world = load_prior(m.prior, world);
  return world;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write " + path);
  f << content;
  if (!f) throw FormatError("error writing " + path);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double now_ms() {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

struct AbstractArgs {
  MapArgs map;
  std::string mode;
  std::optional<double> dhat, dhat_frac, budget, budget_frac;
  std::string out;
  std::string render;
  std::string units = "nats";
  bool timing = false;
};

int cmd_abstract(const AbstractArgs& a, std::ostream& out, std::ostream& err) {
  const double unit = a.units == "bits" ? std::log(2.0) : 1.0;
  const bool min_rate = a.mode == "min-rate";
  if (min_rate && !a.dhat && !a.dhat_frac) {
    err << "min-rate mode needs --dhat or --dhat-frac\n";
    return kExitIo;
  }
  if (!min_rate && !a.budget && !a.budget_frac) {
    err << "max-relevance mode needs --budget or --budget-frac\n";
    return kExitIo;
  }
  if ((min_rate && (a.budget || a.budget_frac)) || (!min_rate && (a.dhat || a.dhat_frac))) {
    err << "bound does not match --mode " << a.mode << '\n';
    return kExitIo;
  }

  const WorldMap world = load_world(a.map);
  const IncrementVectors inc = compute_increments(world);
  const double total_y = inc.total_y();
  SolveResult r;
  if (min_rate) {
    const double d = a.dhat ? *a.dhat * unit : *a.dhat_frac * total_y;
    r = solve_min_rate(inc, d);
    if (!r.optimal()) {
      err << "D̂ exceeds I(X;Y): " << fmt(d / unit) << " > " << fmt(total_y / unit) << ' ' << a.units << '\n';
      return kExitInfeasible;
    }
  } else {
    const double b = a.budget ? *a.budget * unit : *a.budget_frac * inc.total_x();
    r = solve_max_relevance(inc, b);
  }

  if (!a.out.empty()) emit(a.out, tree_to_json(r.selection, {r.i_x, r.i_y}), out);
  if (!a.render.empty()) {
    std::ostringstream img;
    write_pgm_ascii(img, render_abstraction(world, r.selection));
    emit(a.render, img.str(), out);
  }

  const std::size_t leaves = leaf_count(r.selection);
  const std::string& u = a.units;
  out << "i_x_" << u << ": " << fmt(r.i_x / unit) << '\n';
  out << "i_y_" << u << ": " << fmt(r.i_y / unit) << '\n';
  out << "mutual_info_" << u << ": " << fmt(total_y / unit) << '\n';
  out << "leaf_count: " << leaves << '\n';
  out << "relevance_retained: " << fmt(total_y > 0.0 ? r.i_y / total_y : 1.0) << '\n';
  out << "leaf_fraction: " << fmt(static_cast<double>(leaves) / static_cast<double>(world.cell_count())) << '\n';
  if (a.timing) {
    out << "nodes_explored: " << r.nodes_explored << '\n';
    out << "solve_ms: " << fmt(r.wall_ms) << '\n';
  }
  return kExitOk;
}

int cmd_pareto(const MapArgs& m, double eps_step, const std::string& path, bool timing, std::ostream& out) {
  const IncrementVectors inc = compute_increments(load_world(m));
  const std::vector<ParetoPoint> points = trace_pareto(inc, eps_step);
  std::ostringstream csv;
  write_pareto_csv(csv, points, timing);
  emit(path, csv.str(), out);
  return kExitOk;
}

int cmd_infoplane(const MapArgs& m, int sweep, double delta, const std::string& path, bool timing,
                  std::ostream& out) {
  const IncrementVectors inc = compute_increments(load_world(m));
  const double total = inc.total_y();
  std::ostringstream csv;
  csv << "method,d_hat,i_x,i_y,met_constraint,ms\n";
  for (int k = 0; k < sweep; ++k) {
    const double d = sweep == 1 ? 0.0 : total * k / (sweep - 1);
    const SolveResult ilp = solve_min_rate(inc, d);
    csv << "ilp," << fmt(d) << ',' << fmt(ilp.i_x) << ',' << fmt(ilp.i_y) << ',' << (ilp.optimal() ? 1 : 0) << ','
        << (timing ? fmt(ilp.wall_ms) : "") << '\n';
    const double t0 = now_ms();
    const RelaxResult rr = relax_and_round(inc, d, delta);
    const double ms = now_ms() - t0;
    csv << "relax," << fmt(d) << ',' << fmt(rr.result.i_x) << ',' << fmt(rr.result.i_y) << ','
        << (rr.met_constraint ? 1 : 0) << ',' << (timing ? fmt(ms) : "") << '\n';
  }
  emit(path, csv.str(), out);
  return kExitOk;
}

int cmd_relax(const MapArgs& m, std::optional<double> dhat, std::optional<double> dhat_frac, double delta,
              const std::string& path, const std::string& fractional, std::ostream& out, std::ostream& err) {
  if (!dhat && !dhat_frac) {
    err << "relax needs --dhat or --dhat-frac\n";
    return kExitIo;
  }
  const IncrementVectors inc = compute_increments(load_world(m));
  const double d = dhat ? *dhat : *dhat_frac * inc.total_y();
  RelaxResult rr;
  try {
    rr = relax_and_round(inc, d, delta);
  } catch (const InfeasibleError&) {
    err << "D̂ exceeds I(X;Y): " << fmt(d) << " > " << fmt(inc.total_y()) << " nats\n";
    return kExitInfeasible;
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(tree_to_json(rr.result.selection, {rr.result.i_x, rr.result.i_y}));
  j["d_hat_nats"] = d;
  j["delta"] = delta;
  j["lp_objective_nats"] = rr.lp.objective;
  j["lp_relevance_nats"] = rr.lp.relevance;
  j["met_constraint"] = rr.met_constraint;
  emit(path, j.dump(2) + "\n", out);
  if (!fractional.empty()) {
    std::ostringstream csv;
    csv << "candidate,depth,morton,value\n";
    for (std::size_t i = 0; i < rr.lp.z.z.size(); ++i) {
      const NodeId id = node_at(i);
      csv << i << ',' << id.depth << ',' << id.morton << ',' << fmt(rr.lp.z.z[i]) << '\n';
    }
    emit(fractional, csv.str(), out);
  }
  return kExitOk;
}

int cmd_increments(const MapArgs& m, const std::string& path, std::ostream& out) {
  const IncrementVectors inc = compute_increments(load_world(m));
  std::ostringstream csv;
  write_increments_csv(csv, inc);
  emit(path, csv.str(), out);
  return kExitOk;
}

int cmd_validate(const MapArgs& m, const std::string& tree_path, std::ostream& out, std::ostream& err) {
  const StoredTree t = tree_from_json(slurp(tree_path));
  const WorldMap world = load_world(m);
  if (t.selection.depth_l() != world.depth_l()) {
    err << "tree depth " << t.selection.depth_l() << " does not match map depth " << world.depth_l() << '\n';
    return kExitInfeasible;
  }
  if (const auto bad = first_violation(t.selection)) {
    const auto& [child, parent] = *bad;
    err << "invalid tree: node [" << child.depth << ", " << child.morton << "] is selected but its parent ["
        << parent.depth << ", " << parent.morton << "] is not\n";
    return kExitInfeasible;
  }
  const TreeInformation info = tree_information(t.selection, compute_increments(world));
  constexpr double kTol = 1e-9;
  bool ok = true;
  if (std::abs(info.i_x - t.i_x) > kTol) {
    err << "stored i_x " << fmt(t.i_x) << " differs from recomputed " << fmt(info.i_x) << '\n';
    ok = false;
  }
  if (std::abs(info.i_y - t.i_y) > kTol) {
    err << "stored i_y " << fmt(t.i_y) << " differs from recomputed " << fmt(info.i_y) << '\n';
    ok = false;
  }
  if (!ok) return kExitInfeasible;
  out << "valid: " << leaf_count(t.selection) << " leaves, i_x " << fmt(info.i_x) << ", i_y " << fmt(info.i_y)
      << " nats\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information-bottleneck quadtree abstractions of grid maps"};
  app.name("ibtree");
  app.require_subcommand(1);
  app.fallthrough();
  bool timing = false;
  app.add_flag("--timing", timing, "Include wall-clock columns (output is no longer reproducible)");

  AbstractArgs abs;
  auto* c_abs = app.add_subcommand("abstract", "Solve one bound and write the tree");
  add_map_options(c_abs, abs.map);
  c_abs->add_option("--mode", abs.mode, "min-rate or max-relevance")
      ->required()
      ->check(CLI::IsMember({"min-rate", "max-relevance"}));
  auto* o_dhat = c_abs->add_option("--dhat", abs.dhat, "Relevance floor")->check(CLI::NonNegativeNumber);
  auto* o_dfrac = c_abs->add_option("--dhat-frac", abs.dhat_frac, "Relevance floor as a fraction of I(X;Y)")
                      ->check(CLI::Range(0.0, 1.0));
  auto* o_bud = c_abs->add_option("--budget", abs.budget, "Rate budget")->check(CLI::NonNegativeNumber);
  auto* o_bfrac = c_abs->add_option("--budget-frac", abs.budget_frac, "Rate budget as a fraction of H(X)")
                      ->check(CLI::Range(0.0, 1.0));
  o_dhat->excludes(o_dfrac);
  o_bud->excludes(o_bfrac);
  c_abs->add_option("--out", abs.out, "Tree JSON");
  c_abs->add_option("--render", abs.render, "Rendered abstraction as PGM");
  c_abs->add_option("--units", abs.units, "Units of --dhat/--budget and the report")
      ->check(CLI::IsMember({"nats", "bits"}));

  MapArgs par_map;
  double eps_step = 1e-6;
  std::string par_out;
  auto* c_par = app.add_subcommand("pareto", "Trace every Pareto optimal (rate, relevance) pair");
  add_map_options(c_par, par_map);
  c_par->add_option("--eps-step", eps_step, "Relevance step between successive floors, nats")
      ->check(CLI::PositiveNumber);
  c_par->add_option("--out", par_out, "CSV path or - for stdout")->required();

  MapArgs ip_map;
  int sweep = 0;
  double ip_delta = 0.5;
  std::string ip_out;
  auto* c_ip = app.add_subcommand("infoplane", "ILP and relax-and-round points over a relevance sweep");
  add_map_options(c_ip, ip_map);
  c_ip->add_option("--sweep", sweep, "Number of evenly spaced floors in [0, I(X;Y)]")
      ->required()
      ->check(CLI::PositiveNumber);
  c_ip->add_option("--delta", ip_delta, "Rounding threshold")->check(CLI::Range(0.0, 1.0));
  c_ip->add_option("--out", ip_out, "CSV path or - for stdout")->required();

  MapArgs rx_map;
  std::optional<double> rx_dhat, rx_dfrac;
  double rx_delta = 0.5;
  std::string rx_out, rx_frac;
  auto* c_rx = app.add_subcommand("relax", "LP relaxation followed by threshold rounding");
  add_map_options(c_rx, rx_map);
  auto* o_rxd = c_rx->add_option("--dhat", rx_dhat, "Relevance floor, nats")->check(CLI::NonNegativeNumber);
  auto* o_rxf = c_rx->add_option("--dhat-frac", rx_dfrac, "Relevance floor as a fraction of I(X;Y)")
                    ->check(CLI::Range(0.0, 1.0));
  o_rxd->excludes(o_rxf);
  c_rx->add_option("--delta", rx_delta, "Rounding threshold in (0, 1]")->check(CLI::Range(0.0, 1.0));
  c_rx->add_option("--out", rx_out, "JSON path or - for stdout")->required();
  c_rx->add_option("--fractional", rx_frac, "Optional CSV of the LP solution");

  MapArgs inc_map;
  std::string inc_out;
  auto* c_inc = app.add_subcommand("increments", "Per-candidate rate and relevance increments");
  add_map_options(c_inc, inc_map);
  c_inc->add_option("--out", inc_out, "CSV path or - for stdout")->required();

  MapArgs val_map;
  std::string val_tree;
  auto* c_val = app.add_subcommand("validate", "Re-check a stored tree against a map");
  add_map_options(c_val, val_map);
  c_val->add_option("--tree", val_tree, "Tree JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (c_abs->parsed()) {
      abs.timing = timing;
      return cmd_abstract(abs, out, err);
    }
    if (c_par->parsed()) return cmd_pareto(par_map, eps_step, par_out, timing, out);
    if (c_ip->parsed()) {
      if (!(ip_delta > 0.0)) {
        err << "--delta must lie in (0, 1]\n";
        return kExitIo;
      }
      return cmd_infoplane(ip_map, sweep, ip_delta, ip_out, timing, out);
    }
    if (c_rx->parsed()) {
      if (!(rx_delta > 0.0)) {
        err << "--delta must lie in (0, 1]\n";
        return kExitIo;
      }
      return cmd_relax(rx_map, rx_dhat, rx_dfrac, rx_delta, rx_out, rx_frac, out, err);
    }
    if (c_inc->parsed()) return cmd_increments(inc_map, inc_out, out);
    if (c_val->parsed()) return cmd_validate(val_map, val_tree, out, err);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitIo;
}

}  // namespace ibtree::cli
