#include "nonhom/scenario.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "nonhom/cauchy.hpp"
#include "nonhom/cz.hpp"
#include "nonhom/generators.hpp"
#include "nonhom/io.hpp"
#include "nonhom/maximal.hpp"
#include "nonhom/norms.hpp"

namespace nonhom {

using nlohmann::ordered_json;

namespace {

double jget(const ordered_json& j, const std::string& key, double dflt) {
  return j.contains(key) ? j.at(key).get<double>() : dflt;
}
int jgeti(const ordered_json& j, const std::string& key, int dflt) {
  return j.contains(key) ? j.at(key).get<int>() : dflt;
}
std::uint64_t jgetu(const ordered_json& j, const std::string& key, std::uint64_t dflt) {
  return j.contains(key) ? j.at(key).get<std::uint64_t>() : dflt;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
  }
};

}  // namespace

Scenario Scenario::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidInput, "cannot open scenario " + path.string());
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("bad scenario JSON: ") + e.what());
  }
  return Scenario{std::move(j)};
}

Scenario Scenario::from_json(ordered_json j) { return Scenario{std::move(j)}; }

DiscreteMeasure resolve_measure(const ordered_json& cfg, int& n_out) {
  if (cfg.contains("file")) {
    io::MeasureFile mf = io::load_measure(cfg.at("file").get<std::string>());
    n_out = mf.n;
    return std::move(mf.mu);
  }
  const std::string name = cfg.at("generator").get<std::string>();
  const ordered_json params =
      cfg.contains("params") ? cfg.at("params") : ordered_json::object();
  n_out = 1;  // all builtins have growth degree 1
  if (name == "segment") return make_segment(jgeti(params, "n_points", 1024));
  if (name == "square") return make_square(jgeti(params, "n_side", 32));
  if (name == "eps_weighted")
    return make_eps_weighted(jget(params, "h", 0.025), jget(params, "eps", 0.1));
  if (name == "cantor4") return make_cantor4(jgeti(params, "generation", 4));
  if (name == "random_clusters")
    return make_random_clusters(jgetu(params, "seed", 1),
                                jgeti(params, "n_points", 128),
                                jgeti(params, "d", 2));
  fail(ErrorCode::UnknownGenerator, "unknown measure generator: " + name);
}

RealFunction resolve_function(const ordered_json& cfg, const DiscreteMeasure& mu) {
  if (cfg.contains("file"))
    return io::load_real_function(cfg.at("file").get<std::string>(), mu.size());
  const std::string name = cfg.at("builtin").get<std::string>();
  const ordered_json params =
      cfg.contains("params") ? cfg.at("params") : ordered_json::object();
  if (name == "ones") return RealFunction::Ones(mu.size());
  if (name == "zeros") return RealFunction::Zero(mu.size());
  if (name == "step_pair")
    return make_step_pair_function(mu, jget(params, "eps", 0.1));
  if (name == "gaussian") return make_gaussian_function(mu, jgetu(params, "seed", 1));
  if (name == "bumps")
    return make_bumps_function(mu, jgetu(params, "seed", 1),
                               jgeti(params, "n_bumps", 3),
                               jget(params, "sigma_min", 0.03),
                               jget(params, "sigma_max", 0.08),
                               jget(params, "amplitude", 1.0));
  if (name == "spike") return make_spike_function(mu, jget(params, "height", 10.0));
  fail(ErrorCode::UnknownGenerator, "unknown function builtin: " + name);
}

namespace {

AnalysisContext resolve_ctx(const ordered_json& cfg, const DiscreteMeasure& mu,
                            int n_from_measure) {
  const ordered_json j = cfg.contains("ctx") ? cfg.at("ctx") : ordered_json::object();
  AnalysisContext ctx;
  ctx.n = jgeti(j, "n", n_from_measure);
  ctx.rho = jget(j, "rho", 2.0);
  ctx.beta_d = jget(j, "beta_d", 0.0);
  ctx.p0 = jget(j, "p0", 0.0);
  if (ctx.n < 1 || ctx.n > mu.dimension())
    fail(ErrorCode::InvalidInput, "ctx.n must satisfy 1 <= n <= d");
  if (!(ctx.rho > 1.0)) fail(ErrorCode::InvalidInput, "ctx.rho must exceed 1");
  if (ctx.beta_d > 0.0 && !(ctx.beta_d > std::pow(2.0, ctx.n)))
    fail(ErrorCode::InvalidInput, "ctx.beta_d must exceed 2^n");
  return ctx;
}

FamilyOptions resolve_family_options(const ordered_json& cfg, std::uint64_t seed) {
  const ordered_json j =
      cfg.contains("family") ? cfg.at("family") : ordered_json::object();
  FamilyOptions opt;
  opt.max_centers = jgeti(j, "max_centers", 256);
  opt.cross_per_center = jgeti(j, "cross_per_center", 4);
  opt.shifts = jgeti(j, "shifts", 0);
  opt.seed = jgetu(j, "seed", seed);
  if (j.contains("full_pairs")) opt.restrict_pairs_to_p0 = !j.at("full_pairs").get<bool>();
  return opt;
}

ordered_json resolved_echo(const ordered_json& cfg, const AnalysisContext& ctx,
                           const DiscreteMeasure& mu, const FamilyOptions& fopt,
                           std::uint64_t seed) {
  ordered_json echo = cfg;
  echo["resolved"] = {
      {"n", ctx.n},
      {"rho", ctx.rho},
      {"beta_d", effective_beta_d(mu, ctx)},
      {"support_size", mu.size()},
      {"r_min", mu.r_min()},
      {"family_max_centers", fopt.max_centers},
      {"family_cross_per_center", fopt.cross_per_center},
      {"family_shifts", fopt.shifts},
      {"seed", seed},
  };
  return echo;
}

std::vector<double> eps_grid_from(const ordered_json& params,
                                  const DiscreteMeasure& mu) {
  std::vector<double> eps;
  if (params.contains("epsilons"))
    for (const auto& e : params.at("epsilons")) eps.push_back(e.get<double>());
  else
    for (int k = 3; k <= 9; ++k) {
      double e = std::ldexp(1.0, -k);
      if (e >= mu.r_min()) eps.push_back(e);
    }
  return eps;
}

int command_growth_check(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                         ordered_json& out) {
  const double c0 = growth_constant(mu, ctx);
  // Spot-check the certificate on a deterministic sample.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Eigen::Index> pick(0, mu.size() - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double diam = mu.support_diameter();
  int violations = 0;
  const int samples = 200;
  for (int s = 0; s < samples; ++s) {
    Eigen::Index i = pick(rng);
    double r = mu.r_min() * std::pow(std::max(1.0, 2.0 * diam / mu.r_min()), unif(rng));
    if (ball_mass(mu, mu.point(i), r) > c0 * std::pow(r, ctx.n)) ++violations;
  }
  out["c0"] = c0;
  out["certificate_samples"] = samples;
  out["certificate_violations"] = violations;
  out["p0"] = effective_p0(mu, ctx);
  return violations == 0 ? 0 : 2;
}

int command_k_sweep(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                    const ordered_json& params, const std::filesystem::path& out_dir,
                    std::uint64_t seed, ordered_json& out) {
  const int n_pairs = jgeti(params, "pairs", 200);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, mu.size() - 1);
  const double diam = mu.support_diameter();
  int j_lo = dyadic_level_ceil(mu.r_min());
  int j_hi = std::max(j_lo + 1, dyadic_level_ceil(2.0 * diam));
  std::uniform_int_distribution<int> lvl(j_lo, j_hi);

  std::vector<std::vector<double>> rows;
  double max_k = 0.0;
  for (int t = 0; t < n_pairs; ++t) {
    int a = lvl(rng), b = lvl(rng);
    if (a == b) b = a + 1;
    int jq = std::min(a, b), jr = std::max(a, b);
    Eigen::VectorXd c = mu.point(pick(rng));
    NestedCubePair pair(Cube(c, std::ldexp(1.0, jq)), Cube(c, std::ldexp(1.0, jr)));
    double k = k_coeff(mu, ctx, pair);
    double k2 = k_coeff_radial(mu, ctx, pair);
    max_k = std::max(max_k, k);
    rows.push_back({c[0], pair.inner.side, pair.outer.side, k, k2});
  }
  io::write_csv(out_dir / "k_sweep.csv", {"q_center_x", "q_side", "r_side", "k", "k_radial"},
                rows);
  out["pairs"] = n_pairs;
  out["max_k"] = max_k;
  return 0;
}

int command_rbmo(const CubeFamily& fam, const RealFunction& f,
                 const ordered_json& params, ordered_json& out) {
  const double rho = jget(params, "bmo_rho", 5.0);
  out["bmo_rho"] = io::norm_report_json(bmo_rho(fam, f, rho));
  out["bmo_rho_value_of"] = rho;
  out["rbmo_star"] = io::norm_report_json(rbmo_star(fam, f));
  out["rbmo_doublestar"] = io::norm_report_json(rbmo_doublestar(fam, f));
  out["circ_norm"] = io::norm_report_json(circ_norm(fam, f));
  out["rbmo_p2"] = io::norm_report_json(rbmo_p(fam, f, 2.0));
  return 0;
}

int command_jn_tail(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                    const RealFunction& f, const ordered_json& params,
                    const std::filesystem::path& out_dir, ordered_json& out) {
  Eigen::Index ci = jgeti(params, "center_index", 0);
  if (ci < 0 || ci >= mu.size())
    fail(ErrorCode::InvalidInput, "jn-tail center_index out of range");
  double side = jget(params, "side", mu.support_diameter());
  Cube q(mu.point(ci), side);
  std::vector<double> lambdas;
  if (params.contains("lambdas"))
    for (const auto& l : params.at("lambdas")) lambdas.push_back(l.get<double>());
  else {
    const int count = jgeti(params, "lambda_count", 24);
    const double lmax = jget(params, "lambda_max", 4.0);
    for (int i = 1; i <= count; ++i) lambdas.push_back(lmax * i / count);
  }
  auto rows = jn_tail(mu, ctx, f, q, lambdas);
  std::vector<std::vector<double>> csv;
  for (auto [l, t] : rows) csv.push_back({l, t});
  io::write_csv(out_dir / "jn_tail.csv", {"lambda", "tail"}, csv);
  out["rows"] = rows.size();
  out["tail_at_min_lambda"] = rows.empty() ? 0.0 : rows.front().second;
  return 0;
}

int command_maximal(const CubeFamily& fam, const RealFunction& f,
                    const ordered_json& params, const std::filesystem::path& out_dir,
                    ordered_json& out) {
  const auto& mu = fam.measure();
  const double p = jget(params, "p", 2.0);
  const double eta = jget(params, "eta", 1.125);
  const double rho = jget(params, "rho", 2.0);
  RealFunction sharp = sharp_maximal_batch(fam, f);
  RealFunction nf = doubling_maximal_batch(fam, f);
  RealFunction mrho = radial_maximal_batch(fam, f, rho);
  RealFunction mp = p_maximal_batch(fam, f, p, eta);
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    rows.push_back({static_cast<double>(i), sharp[i], nf[i], mrho[i], mp[i]});
  io::write_csv(out_dir / "maximal.csv",
                {"point", "sharp", "doubling_n", "radial", "p_maximal"}, rows);
  const double beta_d = fam.beta_d();
  RealFunction m2 = radial_maximal_batch(fam, f, 2.0);
  int violations = 0;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (nf[i] > beta_d * m2[i]) ++violations;
  out["sup_sharp"] = sharp.maxCoeff();
  out["sup_doubling_n"] = nf.maxCoeff();
  out["n_le_beta_m2_violations"] = violations;
  return violations == 0 ? 0 : 2;
}

int command_cz(const DiscreteMeasure& mu, const AnalysisContext& ctx,
               const RealFunction& f, const ordered_json& params,
               const std::filesystem::path& out_dir, ordered_json& out) {
  const double p = jget(params, "p", 2.0);
  double lambda;
  if (params.contains("lambda")) {
    lambda = params.at("lambda").get<double>();
  } else {
    const double l1 = (f.abs() * mu.masses().array()).sum();
    lambda = jget(params, "lambda_factor", 1.5) * effective_beta_d(mu, ctx) * l1 /
             mu.total_mass();
  }
  CzDecomposition dec = cz_decompose(mu, ctx, f, p, lambda);
  out["cz"] = io::cz_json(dec);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < dec.stopping_cubes.size(); ++i)
    rows.push_back({dec.stopping_cubes[i].center[0], dec.stopping_cubes[i].side,
                    dec.companions[i].side});
  io::write_csv(out_dir / "cz_cubes.csv", {"center_x", "q_side", "r_side"}, rows);
  if (!dec.blocks_valid) {
    out["block_violations"] = dec.block_violations;
    return 2;
  }
  return 0;
}

int command_t1(const DiscreteMeasure& mu, const AnalysisContext& ctx,
               const ordered_json& params, const std::filesystem::path& out_dir,
               std::uint64_t seed, ordered_json& out) {
  PlanarMeasure pm(mu);
  FamilyOptions fopt;
  fopt.max_centers = jgeti(params, "max_centers", 8);
  fopt.cross_per_center = 0;
  fopt.seed = seed;
  CubeFamily fam = CubeFamily::build(mu, ctx, fopt);
  // Cubes carrying the same support set (dilates of a swallowed support)
  // add nothing to the sweep.
  std::vector<Cube> squares = dedup_by_support(mu, fam.cubes());
  TruncationGrid grid = TruncationGrid::validated(eps_grid_from(params, mu), mu.r_min());
  T1Report rep = t1_report(pm, squares, grid);
  out["sup"] = rep.sup;
  out["witness"] = io::cube_json(rep.witness);
  out["witness_eps"] = rep.witness_eps;
  out["cubes"] = squares.size();
  std::vector<std::vector<double>> rows;
  for (const auto& r : rep.table) rows.push_back({r.side, r.eps, r.ratio});
  io::write_csv(out_dir / "t1.csv", {"side", "eps", "ratio"}, rows);
  ordered_json table = ordered_json::array();
  for (const auto& r : rep.table) table.push_back({r.side, r.eps, r.ratio});
  out["table"] = std::move(table);
  return 0;
}

int command_curvature(const DiscreteMeasure& mu, const ordered_json& params,
                      const std::filesystem::path& out_dir, ordered_json& out) {
  PlanarMeasure pm(mu);
  const int cap = jgeti(params, "max_points", 400);
  if (mu.size() > cap)
    fail(ErrorCode::InvalidInput,
         "triple sum is cubic in the support size; raise params.max_points to "
         "override the cap of " +
             std::to_string(cap));
  Eigen::VectorXd c = mu.point(0);
  Cube q(c, 2.0 * (mu.enclosing_radius(0) + 1.0));
  const double eps = jget(params, "eps", mu.r_min());
  out["triple_sum"] = curvature_triple_sum(pm, q, eps, nullptr);
  out["points"] = mu.size();
  out["eps"] = eps;
  (void)out_dir;
  return 0;
}

int command_commutator(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                       const ordered_json& params, const std::filesystem::path& out_dir,
                       std::uint64_t seed, ordered_json& out) {
  PlanarMeasure pm(mu);
  RealFunction b = params.contains("b")
                       ? resolve_function(params.at("b"), mu)
                       : make_gaussian_function(mu, seed ^ 0x9e3779b97f4a7c15ULL);
  const double p = jget(params, "p", 2.0);
  const int draws = jgeti(params, "draws", 8);
  TruncationGrid grid = TruncationGrid::validated(eps_grid_from(params, mu), mu.r_min());
  FamilyOptions fopt = FamilyOptions{};
  fopt.seed = seed;
  CubeFamily fam = CubeFamily::build(mu, ctx, fopt);
  const double bnorm = rbmo_star(fam, b).value;
  double max_ratio = 0.0;
  std::vector<std::vector<double>> rows;
  for (int t = 0; t < draws; ++t) {
    RealFunction fr = make_gaussian_function(mu, seed + 1000 + t);
    ComplexFunction f = fr.cast<std::complex<double>>();
    const double fnorm = lp_norm(mu, fr, p);
    for (double eps : grid.epsilons) {
      ComplexFunction cf = commutator_all(pm, b, f, eps);
      RealFunction mag = cf.abs();
      double ratio = lp_norm(mu, mag, p) / fnorm;
      rows.push_back({static_cast<double>(t), eps, ratio});
      max_ratio = std::max(max_ratio, ratio);
    }
  }
  io::write_csv(out_dir / "commutator.csv", {"draw", "eps", "lp_ratio"}, rows);
  out["max_lp_ratio"] = max_ratio;
  out["rbmo_star_b"] = bnorm;
  out["ratio_over_bnorm"] = bnorm > 0.0 ? max_ratio / bnorm : 0.0;
  if (params.contains("diagnostic") && params.at("diagnostic").get<bool>()) {
    RealFunction fr = make_gaussian_function(mu, seed + 999);
    CommutatorDiagnostic diag = commutator_sharp_diagnostic(
        fam, b, fr.cast<std::complex<double>>(), p, grid);
    out["pointwise_diagnostic_max_ratio"] = diag.max_ratio;
  }
  return 0;
}

int command_equivalence_sweep(const ordered_json& params,
                              const std::filesystem::path& out_dir, std::uint64_t seed,
                              ordered_json& out) {
  const int draws = jgeti(params, "draws", 20);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::vector<std::vector<double>> rows;
  for (int t = 0; t < draws; ++t) {
    DiscreteMeasure mu = make_random_clusters(seed + 17 * t, jgeti(params, "n_points", 96),
                                              jgeti(params, "d", 2));
    AnalysisContext ctx = AnalysisContext::for_dimension(1, mu.dimension());
    FamilyOptions fopt;
    fopt.max_centers = 64;
    fopt.seed = seed + t;
    CubeFamily fam = CubeFamily::build(mu, ctx, fopt);
    RealFunction f = make_gaussian_function(mu, seed + 31 * t + 1);
    double star = rbmo_star(fam, f).value;
    double dstar = rbmo_doublestar(fam, f).value;
    double circ = circ_norm(fam, f).value;
    double p2 = rbmo_p(fam, f, 2.0).value;
    if (star > 0.0) {
      for (double v : {dstar, circ, p2}) {
        lo = std::min(lo, v / star);
        hi = std::max(hi, v / star);
      }
    }
    rows.push_back({static_cast<double>(t), star, dstar, circ, p2});
  }
  io::write_csv(out_dir / "equivalence.csv",
                {"draw", "rbmo_star", "rbmo_doublestar", "circ", "rbmo_p2"}, rows);
  out["draws"] = draws;
  out["min_ratio"] = lo;
  out["max_ratio"] = hi;
  return 0;
}

}  // namespace

int run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ostringstream log;
  Timer total;
  const ordered_json& cfg = scenario.config;

  int exit_code = 0;
  ordered_json report;
  try {
    const std::string command = cfg.at("command").get<std::string>();
    const std::uint64_t seed = jgetu(cfg, "seed", 1);
    const ordered_json params =
        cfg.contains("params") ? cfg.at("params") : ordered_json::object();

    int n_from_measure = 1;
    Timer t_measure;
    DiscreteMeasure mu = resolve_measure(cfg.at("measure"), n_from_measure);
    log << "measure: " << mu.size() << " points, " << t_measure.ms() << " ms\n";
    AnalysisContext ctx = resolve_ctx(cfg, mu, n_from_measure);
    FamilyOptions fopt = resolve_family_options(cfg, seed);

    report["inputs"] = resolved_echo(cfg, ctx, mu, fopt, seed);
    ordered_json out = ordered_json::object();

    auto function_of = [&]() {
      if (!cfg.contains("function"))
        fail(ErrorCode::InvalidInput, "command requires a \"function\" entry");
      return resolve_function(cfg.at("function"), mu);
    };

    Timer t_cmd;
    if (command == "growth-check") {
      exit_code = command_growth_check(mu, ctx, out);
    } else if (command == "k-sweep") {
      exit_code = command_k_sweep(mu, ctx, params, out_dir, seed, out);
    } else if (command == "rbmo") {
      CubeFamily fam = CubeFamily::build(mu, ctx, fopt);
      exit_code = command_rbmo(fam, function_of(), params, out);
    } else if (command == "jn-tail") {
      exit_code = command_jn_tail(mu, ctx, function_of(), params, out_dir, out);
    } else if (command == "maximal") {
      CubeFamily fam = CubeFamily::build(mu, ctx, fopt);
      exit_code = command_maximal(fam, function_of(), params, out_dir, out);
    } else if (command == "cz") {
      exit_code = command_cz(mu, ctx, function_of(), params, out_dir, out);
    } else if (command == "t1") {
      exit_code = command_t1(mu, ctx, params, out_dir, seed, out);
    } else if (command == "curvature") {
      exit_code = command_curvature(mu, params, out_dir, out);
    } else if (command == "commutator") {
      exit_code = command_commutator(mu, ctx, params, out_dir, seed, out);
    } else if (command == "equivalence-sweep") {
      exit_code = command_equivalence_sweep(params, out_dir, seed, out);
    } else {
      fail(ErrorCode::InvalidInput, "unknown command: " + command);
    }
    log << "command " << command << ": " << t_cmd.ms() << " ms\n";

    report["outputs"] = std::move(out);
    report["calibration"] = {
        {"c0", growth_constant(mu, ctx)},
        {"beta_d", effective_beta_d(mu, ctx)},
        {"p0", effective_p0(mu, ctx)},
    };
    io::write_json(out_dir / "report.json", report);
  } catch (const Error& e) {
    ordered_json err = {{"error",
                         {{"code", error_code_name(e.code())}, {"message", e.what()}}}};
    std::fputs((err.dump() + "\n").c_str(), stderr);
    exit_code = e.code() == ErrorCode::ValidationFailure ? 2 : 1;
  } catch (const std::exception& e) {
    ordered_json err = {
        {"error", {{"code", "invalid_input"}, {"message", e.what()}}}};
    std::fputs((err.dump() + "\n").c_str(), stderr);
    exit_code = 1;
  }

  log << "total: " << total.ms() << " ms\n";
  try {
    io::write_text(out_dir / "run.log", log.str());
  } catch (...) {
  }
  return exit_code;
}

}  // namespace nonhom
