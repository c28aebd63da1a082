#include "nlsob/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "nlsob/experiments.hpp"
#include "nlsob/functional.hpp"
#include "nlsob/manifold.hpp"
#include "nlsob/report.hpp"
#include "nlsob/riesz.hpp"
#include "nlsob/spectrum.hpp"

namespace nlsob {

namespace {

constexpr int kSpectralGridN = 1024;

struct Common {
  int dim = 3;
  double alpha = 1.0;
  double grid_min = kDefaultRMin;
  double grid_max = kDefaultRMax;
  int grid_n = 0;  // 0: the subcommand default
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--dim", c.dim, "Dimension N >= 3");
  sub->add_option("--alpha", c.alpha, "Riesz exponent in (0, N)");
  sub->add_option("--grid-min", c.grid_min, "Smallest grid radius");
  sub->add_option("--grid-max", c.grid_max, "Largest grid radius");
  sub->add_option("--grid-n", c.grid_n, "Number of grid nodes");
  sub->add_option("--seed", c.seed, "Seed for random directions");
  sub->add_option("--out", c.out, "Write the JSON report here instead of stdout");
}

GridSpec grid_spec(const Common& c, int default_n) {
  GridSpec g{c.grid_min, c.grid_max, c.grid_n > 0 ? c.grid_n : default_n};
  if (!(g.r_min > 0.0) || !(g.r_max > g.r_min)) throw ValidationError("grid: need 0 < grid-min < grid-max");
  return g;
}

void emit(const Json& j, const Common& c, std::ostream& out) {
  const std::string text = dump(j);
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + c.out);
  f << text;
}

std::string sibling_csv(const std::string& json_path) {
  std::filesystem::path p(json_path);
  p.replace_extension();
  return p.string() + "_w.csv";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical companion for the nonlocal Sobolev inequality and its stability", "nlsob"};
  app.require_subcommand(1);
  Common c;

  auto* constants = app.add_subcommand("constants", "Sharp HLS and Sobolev constants");
  add_common(constants, c);

  double lambda = 1.0;
  auto* verify = app.add_subcommand("verify-bubble", "Euler-Lagrange residual and sharpness of the bubble");
  add_common(verify, c);
  verify->add_option("--lambda", lambda, "Bubble scale");

  int ell = -1;
  int k = 8;
  std::string kernel_csv;
  auto* spectrum = app.add_subcommand("spectrum", "Linearized eigenvalues per sector, or merged with the gap");
  add_common(spectrum, c);
  spectrum->add_option("--ell", ell, "Sector 0, 1 or 2; omit for all sectors merged");
  spectrum->add_option("--k", k, "Eigenvalues per sector");
  spectrum->add_option("--dump-kernel", kernel_csv, "Write the sector kernel profile (rho, kappa) as CSV");

  std::string input;
  std::string decomposition_out;
  auto* def = app.add_subcommand("deficit", "Deficit, distance and stability ratio of a radial field");
  add_common(def, c);
  def->add_option("--input", input, "RadialField CSV")->required();
  def->add_option("--decomposition-out", decomposition_out,
                  "Write the nearest-bubble decomposition JSON here (remainder CSV alongside)");

  int random_dirs = 2;
  std::vector<double> epsilons{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  int threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Stability ratio along eigenfunction and random directions");
  add_common(sweep, c);
  sweep->add_option("--random", random_dirs, "Number of seeded random directions");
  sweep->add_option("--epsilons", epsilons, "Strictly decreasing perturbation sizes");
  sweep->add_option("--threads", threads, "Worker threads (0: all cores)");

  double radius = 1.0;
  std::vector<double> lambdas{1e2, 1e3, 1e4};
  auto* bounded = app.add_subcommand("bounded", "Truncated bubbles in a ball: weak versus strong remainder");
  add_common(bounded, c);
  bounded->add_option("--radius", radius, "Ball radius R");
  bounded->add_option("--lambdas", lambdas, "Increasing concentration scales with lambda R >= 10");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitValidation;
  }

  try {
    const Params p = make_params(c.dim, c.alpha);
    if (constants->parsed()) {
      Json payload = to_json(p.constants);
      payload["two_star_alpha"] = p.two_star_alpha;
      payload["two_star"] = p.two_star;
      payload["q_weak"] = p.q_weak;
      const auto gs = grid_spec(c, kDefaultGridN);
      emit(envelope(p, gs.r_min, gs.r_max, gs.n, payload), c, out);
    } else if (verify->parsed()) {
      const auto g = grid_spec(c, kDefaultGridN).make();
      const auto U = bubble(p, {1.0, lambda, {}}, g);
      const double el = el_residual(U, p);
      const auto rep = deficit(U, p);
      const double identity = std::pow(p.constants.s_hls, (2.0 * p.N - p.alpha) / (p.N + 2.0 - p.alpha));
      Json payload = {{"lambda", lambda},
                      {"el_residual", el},
                      {"deficit_report", to_json(rep)},
                      {"relative_deficit", rep.deficit / rep.grad_energy},
                      {"grad_energy_identity_error", std::abs(rep.grad_energy / identity - 1.0)},
                      {"passed", el < 1e-4}};
      emit(envelope(p, g, payload), c, out);
    } else if (spectrum->parsed()) {
      if (k < 1) throw ValidationError("--k must be positive");
      const auto g = grid_spec(c, kSpectralGridN).make();
      if (!kernel_csv.empty()) {
        const int e = std::max(ell, 0);
        std::ofstream f(kernel_csv);
        if (!f) throw ValidationError("cannot write " + kernel_csv);
        f << "rho,kappa\n";
        char buf[64];
        for (const auto& [rho, kap] : angular_kernel(p, e, g)->profile()) {
          std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", rho, kap);
          f << buf;
        }
      }
      SpectrumReport rep;
      if (ell < 0) {
        rep = spectral_gap(p, g, k).merged;
      } else {
        rep = solve_generalized(assemble_sector(p, ell, g), k);
      }
      emit(envelope(p, g, to_json(rep)), c, out);
    } else if (def->parsed()) {
      const auto u = read_csv(input);
      auto rep = deficit(u, p);
      const auto dec = dist_to_manifold(u, p);
      rep.dist = dec.d;
      rep.ratio = dec.d > 0.0 ? rep.deficit / (dec.d * dec.d) : std::nan("");
      if (!decomposition_out.empty()) {
        const std::string w_path = sibling_csv(decomposition_out);
        write_csv(dec.w, w_path);
        std::ofstream f(decomposition_out, std::ios::binary);
        if (!f) throw ValidationError("cannot write " + decomposition_out);
        f << dump(envelope(p, u.grid(), to_json(dec, w_path)));
      }
      emit(envelope(p, u.grid(), to_json(rep)), c, out);
    } else if (sweep->parsed()) {
      if (random_dirs < 0) throw ValidationError("--random must be nonnegative");
      SweepConfig cfg;
      cfg.params = p;
      cfg.epsilons = epsilons;
      cfg.grid = grid_spec(c, kDefaultGridN);
      cfg.spectral_grid = {cfg.grid.r_min, cfg.grid.r_max, std::min(kSpectralGridN, cfg.grid.n)};
      cfg.threads = threads;
      cfg.output_path = c.out;
      cfg.directions.push_back(DirectionSpec{});
      for (int i = 0; i < random_dirs; ++i)
        cfg.directions.push_back(DirectionSpec{DirectionSpec::Kind::Random, -1, c.seed + static_cast<std::uint64_t>(i)});
      const auto rep = ratio_sweep(cfg);
      Json payload = to_json(rep);
      payload["seed"] = c.seed;
      emit(envelope(p, cfg.grid.r_min, cfg.grid.r_max, cfg.grid.n, payload), c, out);
    } else if (bounded->parsed()) {
      const auto rep = bounded_domain_experiment(p, radius, lambdas);
      // Each lambda uses its own grid [1e-3 / lambda, R]; the envelope records the first.
      emit(envelope(p, 1e-3 / lambdas.front(), radius, kDefaultGridN, to_json(rep)), c, out);
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace nlsob
