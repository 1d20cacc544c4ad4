#pragma once

#include <CLI11.hpp>
#include <json.hpp>
#include <string>

namespace bgklab::io {

/// Flat configuration of one CLI run. Every key can come from a key=value
/// config file or a command-line flag; flags win. Unknown keys are hard
/// errors.
struct RunConfig {
  std::string command;

  // model
  double alpha = 0.0;
  double t1 = 1.0;
  double t2 = 1.0;

  // discretization
  int k_modes = 64;
  int basis_order = 16;
  int grid_n = 512;
  double cutoff = 0.0;  // 0: default 8 sqrt(max temperature)

  // fixed point / contraction
  double tol = 1e-12;
  int max_iter = 10000;
  std::string init = "uniform";  // uniform | cosine | random
  double amplitude = 0.1;
  int init_kmax = 4;
  int sweep_steps = 0;
  double sweep_max = 0.6;

  // spectrum
  int kmax = 8;
  std::string convention = "both";  // angular | index | both

  // evolution
  double dt = 0.01;
  double t_end = 20.0;
  std::string scheme = "strang";  // strang | lie
  int record_every = 5;
  bool linearized = false;
  std::string preset = "mode";  // mode | density | random
  int preset_k = 1;
  int preset_m = 2;

  // bounds / dms
  double r_exponent = 0.5;
  int samples = 10000;

  std::uint64_t seed = 1;
  std::string output_dir = "bgklab-out";

  nlohmann::json to_json() const {
    return nlohmann::json{{"command", command},
                          {"alpha", alpha},
                          {"t1", t1},
                          {"t2", t2},
                          {"k_modes", k_modes},
                          {"basis_order", basis_order},
                          {"grid_n", grid_n},
                          {"cutoff", cutoff},
                          {"tol", tol},
                          {"max_iter", max_iter},
                          {"init", init},
                          {"amplitude", amplitude},
                          {"init_kmax", init_kmax},
                          {"sweep_steps", sweep_steps},
                          {"sweep_max", sweep_max},
                          {"kmax", kmax},
                          {"convention", convention},
                          {"dt", dt},
                          {"t_end", t_end},
                          {"scheme", scheme},
                          {"record_every", record_every},
                          {"linearized", linearized},
                          {"preset", preset},
                          {"preset_k", preset_k},
                          {"preset_m", preset_m},
                          {"r_exponent", r_exponent},
                          {"samples", samples},
                          {"seed", seed},
                          {"output_dir", output_dir}};
  }
};

/// Build the CLI grammar: `bgklab <command> [--key value]...` with an
/// optional key=value config file; flags override file values.
inline void attach_cli(CLI::App& app, RunConfig& cfg) {
  app.add_option("command", cfg.command, "one of: ness, contraction, "
                 "spectrum, rates, evolve, verify-bounds, dms")
      ->required()
      ->check(CLI::IsMember({"ness", "contraction", "spectrum", "rates",
                             "evolve", "verify-bounds", "dms"}));
  app.set_config("--config", "", "flat key=value configuration file");
  app.allow_config_extras(false);

  app.add_option("--alpha", cfg.alpha, "coupling weight")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--t1", cfg.t1, "first reservoir temperature")
      ->check(CLI::PositiveNumber);
  app.add_option("--t2", cfg.t2, "second reservoir temperature")
      ->check(CLI::PositiveNumber);

  app.add_option("--k-modes", cfg.k_modes, "spatial truncation order")
      ->check(CLI::Range(1, 4096));
  app.add_option("--basis-order", cfg.basis_order, "velocity basis size")
      ->check(CLI::Range(3, 256));
  app.add_option("--grid-n", cfg.grid_n, "velocity grid nodes")
      ->check(CLI::Range(8, 1 << 20));
  app.add_option("--cutoff", cfg.cutoff,
                 "velocity cutoff (0 = 8 sqrt(max temperature))")
      ->check(CLI::NonNegativeNumber);

  app.add_option("--tol", cfg.tol, "fixed-point stopping tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iter", cfg.max_iter, "Picard iteration cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--init", cfg.init, "initial density: uniform|cosine|random")
      ->check(CLI::IsMember({"uniform", "cosine", "random"}));
  app.add_option("--amplitude", cfg.amplitude, "perturbation amplitude")
      ->check(CLI::Range(0.0, 10.0));
  app.add_option("--init-kmax", cfg.init_kmax,
                 "band limit of random initial data")
      ->check(CLI::Range(1, 64));
  app.add_option("--sweep-steps", cfg.sweep_steps,
                 "contraction sweep: number of alpha samples (0 = off)")
      ->check(CLI::Range(0, 1000));
  app.add_option("--sweep-max", cfg.sweep_max, "contraction sweep: last alpha")
      ->check(CLI::Range(0.0, 1.0));

  app.add_option("--kmax", cfg.kmax, "largest Fourier mode for the gap table")
      ->check(CLI::Range(1, 256));
  app.add_option("--convention", cfg.convention,
                 "mode frequency convention: angular|index|both")
      ->check(CLI::IsMember({"angular", "index", "both"}));

  app.add_option("--dt", cfg.dt, "time step")->check(CLI::PositiveNumber);
  app.add_option("--t-end", cfg.t_end, "time horizon")
      ->check(CLI::PositiveNumber);
  app.add_option("--scheme", cfg.scheme, "splitting scheme: strang|lie")
      ->check(CLI::IsMember({"strang", "lie"}));
  app.add_option("--record-every", cfg.record_every, "sampling stride")
      ->check(CLI::PositiveNumber);
  app.add_flag("--linearized", cfg.linearized, "evolve the linearized flow");
  app.add_option("--preset", cfg.preset,
                 "perturbation preset: mode|density|random")
      ->check(CLI::IsMember({"mode", "density", "random"}));
  app.add_option("--preset-k", cfg.preset_k, "preset Fourier mode")
      ->check(CLI::Range(0, 4096));
  app.add_option("--preset-m", cfg.preset_m, "preset basis index")
      ->check(CLI::Range(0, 255));

  app.add_option("--r", cfg.r_exponent,
                 "singular moment exponent for the bound suite")
      ->check(CLI::Range(0.0, 1.0).description("FLOAT in [0 - 1)"));
  app.add_option("--samples", cfg.samples, "randomized corpus size")
      ->check(CLI::PositiveNumber);

  app.add_option("--seed", cfg.seed, "RNG seed for randomized corpora");
  app.add_option("--output-dir", cfg.output_dir, "output directory")
      ->envname("BGKLAB_OUTPUT_DIR");
}

}  // namespace bgklab::io
