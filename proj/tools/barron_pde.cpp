// Command-line front end: solve / verify / rates / counterexample / norm.
//
// Exit codes: 0 success, 1 validation or numerical failure, 2 usage error
// (bad flags, unreadable or malformed input files).

#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "barron_pde/barron_pde.hpp"

using namespace barron_pde;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failure of an explicit check requested on the command line (exit 1).
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void write_or_print(const Report& r, const std::string& path) {
  if (path.empty())
    std::cout << render_report(r);
  else
    emit_report(r, path);
}

CLI::Option* add_seed(CLI::App* app, std::uint64_t& seed) {
  return app->add_option("--seed", seed, "Random seed (repeated flags: the last one wins)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->capture_default_str();
}

void warn_repeated_seed(const CLI::Option* opt, std::uint64_t seed) {
  if (opt && opt->count() > 1)
    std::cerr << "warning: --seed given " << opt->count() << " times; using the last value (" << seed << ")\n";
}

ShallowRep load_shallow(const std::string& path) { return read_shallow(path); }

// "lo:hi,lo:hi,...@h"
std::vector<Interval> parse_box(const std::string& spec, double& h) {
  const auto at = spec.find('@');
  if (at == std::string::npos) throw UsageError("--grid: expected 'lo:hi[,lo:hi...]@h', got '" + spec + "'");
  try {
    h = std::stod(spec.substr(at + 1));
  } catch (...) {
    throw UsageError("--grid: bad spacing in '" + spec + "'");
  }
  if (!(h > 0.0)) throw UsageError("--grid: spacing must be positive");
  std::vector<Interval> box;
  std::stringstream ss(spec.substr(0, at));
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw UsageError("--grid: range '" + part + "' lacks ':'");
    try {
      box.push_back({std::stod(part.substr(0, colon)), std::stod(part.substr(colon + 1))});
    } catch (...) {
      throw UsageError("--grid: bad range '" + part + "'");
    }
    if (!(box.back().hi > box.back().lo)) throw UsageError("--grid: empty range '" + part + "'");
  }
  if (box.empty()) throw UsageError("--grid: no ranges");
  return box;
}

void add_cert_row(Report& r, const std::string& label, const NormCertificate& c) {
  r.add_row({label, cell(c.input_norm), cell(c.output_norm), cell(c.paper_bound), cell(c.ratio)});
}

// ---------------------------------------------------------------------------

struct ScreenedArgs {
  double lambda = 1.0;
  std::string rhs, out, report;
  std::size_t n_quad = 2048, laguerre = 64;
};

int run_screened(const ScreenedArgs& a) {
  ScreenedOptions opt;
  opt.n_quad = a.n_quad;
  opt.laguerre_nodes = a.laguerre;
  const auto sol = solve_screened_poisson({a.lambda, load_shallow(a.rhs)}, opt);
  if (!a.out.empty()) write_net(a.out, sol.solution);
  Report r;
  r.config = {{"command", "solve screened-poisson"}, {"rhs", a.rhs}, {"lambda", format_double(a.lambda)},
              {"n_quad", std::to_string(a.n_quad)}, {"laguerre_nodes", std::to_string(a.laguerre)}};
  r.paper_bound = sol.total.bound_formula;
  r.columns = {"atom_index", "input_norm", "output_norm", "paper_bound", "ratio"};
  for (std::size_t i = 0; i < sol.per_atom.size(); ++i) add_cert_row(r, std::to_string(i), sol.per_atom[i]);
  r.footer = {{"total_input_norm", cell(sol.total.input_norm)},
              {"total_output_norm", cell(sol.total.output_norm)},
              {"total_ratio", cell(sol.total.ratio)},
              {"solution_atoms", cell(sol.solution.size())}};
  write_or_print(r, a.report);
  return 0;
}

struct PairArgs {
  double alpha = 0.5;
  std::string rhs, out, report;
};

int run_pair(const PairArgs& a) {
  const ShallowRep f = load_shallow(a.rhs);
  const auto sol = solve_poisson_activation_pair({f, a.alpha});
  if (!a.out.empty()) write_net(a.out, sol.solution);
  Report r;
  r.config = {{"command", "solve poisson-pair"}, {"rhs", a.rhs}, {"alpha", format_double(a.alpha)}};
  r.paper_bound = "sum |a|/|w|^2 (|w|^(2+alpha) + 1) per source atom";
  r.columns = {"atom_index", "input_norm", "output_norm", "paper_bound", "ratio"};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = euclidean_norm(f.w(i));
    const double mod = std::pow(k, 2.0 + a.alpha) + 1.0;
    const double in = std::abs(f.a(i)) * mod;
    const double out = std::abs(sol.solution.a(i)) * mod;
    const double bound = std::abs(f.a(i)) / (k * k) * mod;
    add_cert_row(r, std::to_string(i), make_certificate(in, out, bound, ""));
  }
  r.footer = {{"rhs_modified_norm", cell(sol.rhs_modified_norm)},
              {"data_modified_norm", cell(sol.data_modified_norm)},
              {"solution_modified_norm", cell(sol.solution_modified_norm)}};
  write_or_print(r, a.report);
  return 0;
}

struct HeatArgs {
  std::string u0, source, out, report;
  double t = 1.0;
  bool spacetime = false;
  std::size_t hermite = 40, cells = 2048, timenodes = 32;
};

int run_heat(const HeatArgs& a) {
  HeatOptions opt;
  opt.n_hermite = a.hermite;
  opt.n_cells = a.cells;
  opt.n_time = a.timenodes;
  HeatProblem p;
  p.u0 = load_shallow(a.u0);
  if (!a.source.empty()) p.source = load_shallow(a.source);
  p.t_max = a.t;
  Report r;
  r.config = {{"command", "solve heat"},           {"u0", a.u0},
              {"source", a.source.empty() ? "none" : a.source},
              {"t", format_double(a.t)},           {"spacetime", a.spacetime ? "1" : "0"},
              {"hermite", std::to_string(a.hermite)}, {"cells", std::to_string(a.cells)},
              {"timenodes", std::to_string(a.timenodes)}};
  r.columns = {"component", "input_norm", "output_norm", "paper_bound", "ratio"};
  const double n0 = p.u0.norm_cert();
  if (a.spacetime) {
    if (p.source) throw InvalidArgument("heat: --spacetime covers the homogeneous problem only; drop --source");
    const auto st = heat_homogeneous_spacetime(p.u0, a.hermite, opt);
    if (!a.out.empty()) write_net(a.out, st.rep);
    r.paper_bound = "2 * ||u0||";
    add_cert_row(r, "spacetime", make_certificate(n0, st.rep.norm_cert(), heat_spacetime_bound(n0), r.paper_bound));
    r.footer = {{"input_layout", "(x, sqrt(t))"}, {"atoms", cell(st.rep.size())}};
  } else {
    const auto sol = heat_full(p, a.t, opt);
    if (!a.out.empty()) write_net(a.out, sol.solution);
    r.paper_bound = p.source ? "(1 + sqrt(t)) * ||u0|| ; (t + 2/3 t^1.5 + t^2/2 + 2/5 t^2.5) * ||f||"
                             : "(1 + sqrt(t)) * ||u0||";
    add_cert_row(r, "homogeneous", sol.hom_cert);
    add_cert_row(r, "homogeneous_sharp",
                 make_certificate(n0, sol.hom_cert.output_norm, heat_fixed_time_sharp_bound(p.u0, a.t), ""));
    if (sol.inhomogeneous) add_cert_row(r, "inhomogeneous", sol.inhom_cert);
    r.footer = {{"atoms", cell(sol.solution.size())}, {"quadrature_tolerance", cell(heat_quadrature_tolerance(p.u0, a.t, opt))}};
  }
  write_or_print(r, a.report);
  return 0;
}

struct HjArgs {
  std::string u0, out, report, guard = "profile-error";
  double radius = 3.0, t_max = 1.0;
  std::size_t mc = 4096, exp_atoms = 256, log_atoms = 256, probes = 64;
  std::uint64_t seed = 0;
};

int run_hj(const HjArgs& a) {
  ColeHopfConfig cfg;
  cfg.n_mc = a.mc;
  cfg.seed = a.seed;
  cfg.exp_atoms = a.exp_atoms;
  cfg.log_atoms = a.log_atoms;
  cfg.radius = a.radius;
  cfg.t_max = a.t_max;
  cfg.n_probe = a.probes;
  cfg.guard = a.guard == "mc-spread" ? ColeHopfConfig::Guard::mc_spread : ColeHopfConfig::Guard::profile_error;
  const auto sol = cole_hopf_solve(load_shallow(a.u0), cfg);
  if (!a.out.empty()) write_net(a.out, sol.net);
  const auto& c = sol.certificate;
  Report r;
  r.config = {{"command", "solve hj"},
              {"u0", a.u0},
              {"radius", format_double(a.radius)},
              {"t_max", format_double(a.t_max)},
              {"mc", std::to_string(a.mc)},
              {"exp_atoms", std::to_string(a.exp_atoms)},
              {"log_atoms", std::to_string(a.log_atoms)},
              {"probes", std::to_string(a.probes)},
              {"guard", a.guard}};
  r.seed = std::to_string(a.seed);
  r.paper_bound = "exp(beta_plus - beta_minus) * ||u0||";
  r.columns = {"component", "input_norm", "output_norm", "paper_bound", "ratio"};
  r.add_row({"exp_profile", cell(c.u0_norm), cell(c.exp_variation), cell(c.exp_reference),
             cell(c.exp_variation / c.exp_reference)});
  r.add_row({"log_profile", cell(c.u0_norm), cell(c.log_variation), cell(c.log_reference),
             cell(c.log_variation / c.log_reference)});
  r.add_row({"product", cell(c.u0_norm), cell(c.product), cell(c.paper_bound), cell(c.ratio)});
  r.footer = {{"beta_minus", cell(sol.range.beta_minus)}, {"beta_plus", cell(sol.range.beta_plus)},
              {"delta", cell(sol.delta)},                 {"mc_spread", cell(sol.mc_spread)},
              {"exp_profile_error", cell(sol.exp_profile_error)},
              {"deep_cert", cell(c.deep_cert)},           {"input_layout", "(x, sqrt(t))"}};
  write_or_print(r, a.report);
  return 0;
}

struct VerifyArgs {
  std::string net, op = "screened", grid, source, out;
  double lambda = 1.0, dt = 0.0, tol = -1.0;
};

int run_verify(const VerifyArgs& a) {
  const DeepRep net = read_deep(a.net);
  oracle::GridSpec spec;
  spec.box = parse_box(a.grid, spec.h);
  spec.dt = a.dt;
  spec.lambda = a.lambda;
  oracle::Operator op;
  if (a.op == "screened")
    op = oracle::Operator::screened;
  else if (a.op == "heat")
    op = oracle::Operator::heat;
  else
    op = oracle::Operator::hj;
  std::function<double(std::span<const double>)> u;
  std::vector<double> z;
  if (op == oracle::Operator::screened) {
    if (spec.box.size() != net.input_dim()) throw DimensionMismatch("verify: grid and network dimensions differ");
    u = [&](std::span<const double> p) { return net(p); };
  } else {
    // networks for time-dependent problems take (x, sqrt t); the grid lists t first
    if (spec.box.size() != net.input_dim()) throw DimensionMismatch("verify: grid must list t and every x coordinate");
    if (spec.box[0].lo < 0.0) throw UsageError("verify: time range must be nonnegative");
    u = [&](std::span<const double> p) {
      std::vector<double> q(p.begin() + 1, p.end());
      q.push_back(std::sqrt(std::max(0.0, p[0])));
      return net(q);
    };
  }
  ShallowRep src;
  if (!a.source.empty()) {
    if (op == oracle::Operator::hj) throw UsageError("verify: the hj operator takes no source");
    src = load_shallow(a.source);
    if (src.input_dim() != spec.box.size()) throw DimensionMismatch("verify: source dimension differs from the grid");
    spec.source = [&](std::span<const double> p) { return src(p); };
  }
  const auto rep = oracle::residual_check(u, op, spec);
  Report r;
  r.config = {{"command", "verify"}, {"net", a.net},  {"op", a.op},
              {"grid", a.grid},      {"dt", format_double(a.dt)},
              {"lambda", format_double(a.lambda)},
              {"source", a.source.empty() ? "none" : a.source}};
  r.columns = {"op", "points", "max_residual", "where"};
  std::string where;
  for (std::size_t j = 0; j < rep.where.size(); ++j) where += (j ? ";" : "") + format_double(rep.where[j]);
  r.add_row({a.op, cell(rep.points), cell(rep.max_abs), where});
  if (a.tol >= 0.0) r.footer = {{"tolerance", cell(a.tol)}, {"pass", rep.max_abs <= a.tol ? "1" : "0"}};
  write_or_print(r, a.out);
  if (a.tol >= 0.0 && rep.max_abs > a.tol)
    throw CheckFailed("verify: residual " + format_double(rep.max_abs) + " exceeds tolerance " + format_double(a.tol));
  return 0;
}

struct RatesArgs {
  std::string net, out, norm = "l2";
  std::vector<std::size_t> m{16, 32, 64, 128, 256, 512, 1024};
  std::size_t seeds = 20, eval = 2000;
  std::uint64_t seed = 0;
};

int run_rates(const RatesArgs& a) {
  RateConfig cfg;
  cfg.m_list = a.m;
  cfg.n_seeds = a.seeds;
  cfg.base_seed = a.seed;
  cfg.n_eval = a.eval;
  cfg.norm = a.norm == "linf" ? ErrorNorm::linf : ErrorNorm::l2;
  const auto rep = load_shallow(a.net);
  const auto res = rate_experiment(rep, cfg);
  Report r;
  r.config = {{"command", "rates"}, {"net", a.net},   {"m", join(a.m)}, {"seeds", std::to_string(a.seeds)},
              {"eval", std::to_string(a.eval)},        {"norm", a.norm}};
  r.seed = std::to_string(a.seed);
  r.paper_bound = cfg.norm == ErrorNorm::l2 ? "cert / sqrt(m)" : "d * max(1, sqrt(d)) * cert / sqrt(m)";
  r.columns = {"m", "seed", "error", "median_error", "bound"};
  for (std::size_t mi = 0; mi < res.m.size(); ++mi)
    for (std::size_t si = 0; si < res.seeds.size(); ++si)
      r.add_row({cell(res.m[mi]), std::to_string(res.seeds[si]), cell(res.seed_errors[mi][si]), cell(res.median_error[mi]),
                 cell(cfg.norm == ErrorNorm::l2 ? res.bound[mi] : res.linf_reference[mi])});
  r.footer = {{"cert", cell(res.cert)}, {"slope", cell(res.fit.slope)}, {"intercept", cell(res.fit.intercept)}};
  if (cfg.norm == ErrorNorm::l2) r.footer.emplace_back("bound_holds", res.bound_holds ? "1" : "0");
  write_or_print(r, a.out);
  return 0;
}

struct BallArgs {
  std::size_t d = 3, seeds = 10, samples = 10000, grid = 200;
  std::vector<std::size_t> m{16, 32, 64, 128, 256, 512};
  std::uint64_t seed = 0;
  double control_time = 0.05, ridge = 1e-8;
  std::string out;
};

int run_ball(const BallArgs& a) {
  const ShallowRep G(1, Activation::relu, {Atom{1.0, {1.0}, 0.0}});
  std::vector<double> e1(a.d, 0.0);
  e1[0] = 1.0;
  const ShallowRep g(a.d, Activation::relu, {Atom{1.0, e1, 0.0}});
  BallRateConfig cfg;
  cfg.m_list = a.m;
  cfg.n_seeds = a.seeds;
  cfg.base_seed = a.seed;
  cfg.n_samples = a.samples;
  cfg.grid_n = a.grid;
  cfg.control_time = a.control_time;
  cfg.ridge = a.ridge;
  HeatOptions ho;
  ho.n_cells = cfg.control_cells;
  const ShallowRep control = heat_homogeneous_at_time(g, cfg.control_time, ho);
  const auto res = ball_rate_experiment(G, a.d, cfg, control);
  const std::vector<double> origin(a.d, 0.0);
  BallProblem bp{a.d, g, {}};
  bp.quad.seed = a.seed;
  Report r;
  r.config = {{"command", "counterexample ball"}, {"boundary_data", "relu(y1)"}, {"d", std::to_string(a.d)},
              {"m", join(a.m)},                   {"seeds", std::to_string(a.seeds)},
              {"samples", std::to_string(a.samples)}, {"grid", std::to_string(a.grid)},
              {"ridge", format_double(a.ridge)},  {"control", "heat flow of relu(x1) at t=" + format_double(a.control_time)}};
  r.seed = std::to_string(a.seed);
  r.columns = {"arm", "m", "median_error"};
  for (std::size_t mi = 0; mi < res.m.size(); ++mi) r.add_row({"ball", cell(res.m[mi]), cell(res.ball.median_error[mi])});
  for (std::size_t mi = 0; mi < res.m.size(); ++mi)
    r.add_row({"control", cell(res.m[mi]), cell(res.control.median_error[mi])});
  r.footer = {{"ball_slope", cell(res.ball.fit.slope)},
              {"control_slope", cell(res.control.fit.slope)},
              {"u_center_poisson_kernel", cell(harmonic_ball_extension(bp, origin))}};
  for (const auto& j : res.jumps) r.footer.emplace_back("gradient_jump_rho_" + format_double(j.rho), cell(j.jump));
  write_or_print(r, a.out);
  return 0;
}

struct CornerArgs {
  int k = 1;
  double theta = 1.5 * std::numbers::pi;
  std::size_t levels = 8;
  std::string out;
};

int run_corner(const CornerArgs& a) {
  const CornerSpec s{a.k, a.theta};
  std::vector<double> radii;
  for (std::size_t l = 1; l <= a.levels; ++l) radii.push_back(std::pow(2.0, -static_cast<double>(l)));
  Report r;
  r.config = {{"command", "counterexample corner"}, {"k", std::to_string(a.k)}, {"theta", format_double(a.theta)},
              {"levels", std::to_string(a.levels)}};
  r.paper_bound = "|grad u| ~ r^(k pi/theta - 1)";
  r.columns = {"radius", "grad_sup"};
  for (double rad : radii) {
    double best = 0.0;
    for (int q = 0; q < 64; ++q) {
      const auto g = corner_grad(s, rad, a.theta * (q + 0.5) / 64.0);
      best = std::max(best, std::hypot(g[0], g[1]));
    }
    r.add_row({cell(rad), cell(best)});
  }
  r.footer = {{"fitted_exponent", cell(corner_gradient_exponent(s, radii))},
              {"fd_exponent", cell(corner_gradient_exponent(s, radii, 1e-4))},
              {"expected_exponent", cell(s.exponent() - 1.0)},
              {"harmonic_residual", cell(corner_harmonic_residual(s, 0.005, 0.25))}};
  write_or_print(r, a.out);
  return 0;
}

struct GrowthArgs {
  std::size_t d = 3;
  std::string out;
};

int run_growth(const GrowthArgs& a) {
  std::vector<double> radii;
  for (int k = 0; k <= 7; ++k) radii.push_back(std::pow(2.0, k));
  Report r;
  r.config = {{"command", "counterexample growth"}, {"d", std::to_string(a.d)}, {"solution", "-max(0,x1)^3/6"}};
  r.columns = {"radius", "sup_abs_u"};
  for (double R : radii) {
    std::vector<double> x(a.d, 0.0);
    x[0] = R;
    r.add_row({cell(R), cell(std::abs(poisson_cubic_growth(x)))});
  }
  r.footer = {{"growth_exponent", cell(growth_diagnostic(radii, a.d))}, {"relu_network_exponent_max", "1"}};
  write_or_print(r, a.out);
  return 0;
}

struct UshapeArgs {
  std::vector<double> probe{0.5, 2.0};
  std::string out;
};

int run_ushape(const UshapeArgs& a) {
  if (a.probe.size() != 2) throw UsageError("--probe takes x,y");
  const double x1 = a.probe[0], x2 = a.probe[1];
  Report r;
  r.config = {{"command", "counterexample ushape"}, {"probe", format_double(x1) + ";" + format_double(x2)}};
  r.columns = {"x1", "x2", "in_domain", "u", "rep_u1", "rep_u2"};
  const double p[2] = {x1, x2};
  const bool in = in_ushape(x1, x2);
  r.add_row({cell(x1), cell(x2), in ? "1" : "0", in ? cell(ushape_eval(x1, x2)) : "nan",
             (in && x1 < 2.0) ? cell(ushape_rep_u1()(p)) : "nan", (in && x1 > 1.0) ? cell(ushape_rep_u2()(p)) : "nan"});
  write_or_print(r, a.out);
  return 0;
}

struct NormArgs {
  std::string net, out;
};

int run_norm(const NormArgs& a) {
  const NetFile f = read_net(a.net);
  Report r;
  r.config = {{"command", "norm"}, {"net", a.net}};
  if (const auto* s = std::get_if<ShallowRep>(&f)) {
    r.paper_bound = norm_convention(s->activation()) == NormConvention::relu ? "sum |a| (|w| + |b|)" : "sum |a| (|w| + 1)";
    r.columns = {"atom_index", "a", "w_norm", "b", "contribution"};
    for (std::size_t i = 0; i < s->size(); ++i) {
      const double wn = euclidean_norm(s->w(i));
      r.add_row({cell(i), cell(s->a(i)), cell(wn), cell(s->b(i)),
                 cell(std::abs(s->a(i)) * weight_factor(s->activation(), wn, s->b(i)))});
    }
    r.footer = {{"norm_cert", cell(s->norm_cert())}};
  } else {
    const auto& d = std::get<DeepRep>(f);
    r.paper_bound = "product over blocks of the largest output path norm";
    r.columns = {"block", "activation", "output_dim", "block_cert"};
    for (std::size_t k = 0; k < d.depth(); ++k) {
      const auto& b = d.blocks()[k];
      r.add_row({cell(k), std::string(to_string(b.activation)), cell(b.output_dim()), cell(b.norm_cert())});
    }
    r.footer = {{"norm_cert", cell(d.norm_cert())}};
  }
  write_or_print(r, a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barron-space PDE solvers: network solutions, norm certificates, oracles and experiments"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: BARRON_PDE_THREADS, else all cores)")
      ->check(CLI::PositiveNumber);

  std::function<int()> action;
  auto* solve = app.add_subcommand("solve", "Build a network solution");
  solve->require_subcommand(1);

  ScreenedArgs sp;
  auto* c_sp = solve->add_subcommand("screened-poisson", "(-Delta + lambda^2) u = f on R^d");
  c_sp->add_option("--lambda", sp.lambda, "Screening parameter")->required()->check(CLI::PositiveNumber);
  c_sp->add_option("--rhs", sp.rhs, "Source network")->required();
  c_sp->add_option("--out", sp.out, "Solution network file");
  c_sp->add_option("--report", sp.report, "Certificate CSV (stdout if absent)");
  c_sp->add_option("--nquad", sp.n_quad, "Profile cells per relu atom")->capture_default_str();
  c_sp->add_option("--laguerre", sp.laguerre, "Gauss-Laguerre nodes for smooth activations")->capture_default_str();
  c_sp->callback([&] { action = [&] { return run_screened(sp); }; });

  PairArgs pp;
  auto* c_pp = solve->add_subcommand("poisson-pair", "-Delta u = sum a sigma''(w.x + b) with u written in sigma");
  c_pp->add_option("--alpha", pp.alpha, "Hoelder exponent of the modified norm")->capture_default_str();
  c_pp->add_option("--rhs", pp.rhs, "Source network (activation sigma)")->required();
  c_pp->add_option("--out", pp.out, "Solution network file");
  c_pp->add_option("--report", pp.report, "Certificate CSV");
  c_pp->callback([&] { action = [&] { return run_pair(pp); }; });

  HeatArgs hp;
  auto* c_h = solve->add_subcommand("heat", "u_t = Delta u + f, u(0) = u0");
  c_h->add_option("--u0", hp.u0, "Initial data network")->required();
  c_h->add_option("--source", hp.source, "Source network over (t, x)");
  c_h->add_option("--t", hp.t, "Time")->required()->check(CLI::NonNegativeNumber);
  c_h->add_flag("--spacetime", hp.spacetime, "Emit one network over (x, sqrt t) instead of a fixed-time slice");
  c_h->add_option("--hermite", hp.hermite, "Gauss-Hermite nodes (smooth activations)")->capture_default_str();
  c_h->add_option("--cells", hp.cells, "Gaussian cells (relu)")->capture_default_str();
  c_h->add_option("--timenodes", hp.timenodes, "Duhamel Gauss-Legendre nodes")->capture_default_str();
  c_h->add_option("--out", hp.out, "Solution network file");
  c_h->add_option("--report", hp.report, "Certificate CSV");
  c_h->callback([&] { action = [&] { return run_heat(hp); }; });

  HjArgs jp;
  auto* c_j = solve->add_subcommand("hj", "u_t - Delta u + |grad u|^2 = 0 by Cole-Hopf");
  c_j->add_option("--u0", jp.u0, "Initial data network")->required();
  c_j->add_option("--radius", jp.radius, "Evaluation radius")->capture_default_str()->check(CLI::PositiveNumber);
  c_j->add_option("--tmax", jp.t_max, "Evaluation horizon")->capture_default_str()->check(CLI::PositiveNumber);
  c_j->add_option("--mc", jp.mc, "Monte Carlo samples (block-1 width)")->capture_default_str();
  c_j->add_option("--exp-atoms", jp.exp_atoms, "exp(-s) profile cells")->capture_default_str();
  c_j->add_option("--log-atoms", jp.log_atoms, "-log profile cells")->capture_default_str();
  c_j->add_option("--probes", jp.probes, "Probe points for the log-domain check")->capture_default_str();
  c_j->add_option("--guard", jp.guard, "Log-domain guard rule")
      ->check(CLI::IsMember({"profile-error", "mc-spread"}))
      ->capture_default_str();
  auto* seed_hj = add_seed(c_j, jp.seed);
  c_j->add_option("--out", jp.out, "Solution network file (deep)");
  c_j->add_option("--report", jp.report, "Certificate CSV");
  c_j->callback([&] {
    action = [&] {
      warn_repeated_seed(seed_hj, jp.seed);
      return run_hj(jp);
    };
  });

  VerifyArgs vp;
  auto* c_v = app.add_subcommand("verify", "Finite-difference residual of a network on a grid");
  c_v->add_option("--net", vp.net, "Network file (time-dependent ops: input (x, sqrt t))")->required();
  c_v->add_option("--op", vp.op, "Operator")->check(CLI::IsMember({"screened", "heat", "hj"}))->capture_default_str();
  c_v->add_option("--lambda", vp.lambda, "Screening parameter")->capture_default_str();
  c_v->add_option("--grid", vp.grid, "lo:hi[,lo:hi...]@h; time first for heat/hj")->required();
  c_v->add_option("--dt", vp.dt, "Time step of the t difference (default h)");
  c_v->add_option("--source", vp.source, "Source network (screened: over x; heat: over (t, x))");
  c_v->add_option("--tol", vp.tol, "Fail with exit code 1 above this residual");
  c_v->add_option("--out", vp.out, "Report CSV");
  c_v->callback([&] { action = [&] { return run_verify(vp); }; });

  RatesArgs rp;
  auto* c_r = app.add_subcommand("rates", "Subsampling error versus width");
  c_r->add_option("--net", rp.net, "Shallow network")->required();
  c_r->add_option("--m", rp.m, "Widths")->delimiter(',')->capture_default_str();
  c_r->add_option("--seeds", rp.seeds, "Seeds per width")->capture_default_str();
  c_r->add_option("--eval", rp.eval, "Evaluation points in [-1, 1]^d")->capture_default_str();
  c_r->add_option("--norm", rp.norm, "Error norm")->check(CLI::IsMember({"l2", "linf"}))->capture_default_str();
  auto* seed_r = add_seed(c_r, rp.seed);
  c_r->add_option("--out", rp.out, "Report CSV");
  c_r->callback([&] {
    action = [&] {
      warn_repeated_seed(seed_r, rp.seed);
      return run_rates(rp);
    };
  });

  auto* ce = app.add_subcommand("counterexample", "Obstruction experiments");
  ce->require_subcommand(1);
  BallArgs bp;
  auto* c_b = ce->add_subcommand("ball", "Harmonic extension of relu(y1) into the unit ball");
  c_b->add_option("--d", bp.d, "Dimension")->capture_default_str()->check(CLI::Range(2, 64));
  c_b->add_option("--m", bp.m, "Widths")->delimiter(',')->capture_default_str();
  c_b->add_option("--seeds", bp.seeds, "Seeds per width")->capture_default_str();
  c_b->add_option("--samples", bp.samples, "Sample points in the ball")->capture_default_str();
  c_b->add_option("--grid", bp.grid, "Reduced solver resolution")->capture_default_str();
  c_b->add_option("--ridge", bp.ridge, "Ridge parameter of the fit")->capture_default_str();
  c_b->add_option("--control-time", bp.control_time, "Heat time of the control target")->capture_default_str();
  auto* seed_b = add_seed(c_b, bp.seed);
  c_b->add_option("--out", bp.out, "Report CSV");
  c_b->callback([&] {
    action = [&] {
      warn_repeated_seed(seed_b, bp.seed);
      return run_ball(bp);
    };
  });

  CornerArgs cp;
  auto* c_c = ce->add_subcommand("corner", "r^(k pi/theta) sin(k pi phi/theta) on a sector");
  c_c->add_option("--k", cp.k, "Mode")->capture_default_str()->check(CLI::PositiveNumber);
  c_c->add_option("--theta", cp.theta, "Opening angle")->capture_default_str();
  c_c->add_option("--levels", cp.levels, "Dyadic radii 2^-1 .. 2^-levels")->capture_default_str();
  c_c->add_option("--out", cp.out, "Report CSV");
  c_c->callback([&] { action = [&] { return run_corner(cp); }; });

  GrowthArgs gp;
  auto* c_g = ce->add_subcommand("growth", "Growth of the solution of -Delta u = relu(x1)");
  c_g->add_option("--d", gp.d, "Dimension")->capture_default_str();
  c_g->add_option("--out", gp.out, "Report CSV");
  c_g->callback([&] { action = [&] { return run_growth(gp); }; });

  UshapeArgs up;
  auto* c_u = ce->add_subcommand("ushape", "Locally but not globally Barron function on a U-shaped domain");
  c_u->add_option("--probe", up.probe, "Point x,y")->delimiter(',')->expected(2);
  c_u->add_option("--out", up.out, "Report CSV");
  c_u->callback([&] { action = [&] { return run_ushape(up); }; });

  NormArgs np;
  auto* c_n = app.add_subcommand("norm", "Norm certificate of a network file");
  c_n->add_option("--net", np.net, "Network file")->required();
  c_n->add_option("--out", np.out, "Report CSV");
  c_n->callback([&] { action = [&] { return run_norm(np); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (threads > 0) set_num_threads(threads);

  try {
    return action ? action() : 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const VersionError& e) {
    std::cerr << "version error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 2;
  } catch (const DimensionMismatch& e) {
    std::cerr << "dimension error: " << e.what() << '\n';
    return 2;
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
