#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>

#include "bgklab/evolution/decay.hpp"
#include "bgklab/evolution/remainder.hpp"
#include "bgklab/io/outputs.hpp"
#include "bgklab/io/presets.hpp"
#include "bgklab/io/run_config.hpp"
#include "bgklab/ness/apriori.hpp"
#include "bgklab/ness/contraction.hpp"
#include "bgklab/ness/fixed_point.hpp"
#include "bgklab/spectral/dms.hpp"
#include "bgklab/spectral/mode_block.hpp"

namespace bgklab::io {

inline constexpr const char* kVersion = "bgklab 0.1.0";

inline VelocityGrid make_grid(const RunConfig& cfg, const ModelParams& p) {
  if (cfg.cutoff > 0.0) return VelocityGrid::uniform(cfg.cutoff, cfg.grid_n);
  return VelocityGrid::for_params(p, cfg.grid_n);
}

inline DensityProfile initial_density(const RunConfig& cfg,
                                      std::mt19937_64& rng) {
  if (cfg.init == "uniform") return DensityProfile::uniform(cfg.k_modes);
  if (cfg.init == "cosine")
    return cosine_density(cfg.k_modes, cfg.preset_k, cfg.amplitude);
  return random_positive_density(cfg.k_modes, cfg.init_kmax, cfg.amplitude,
                                 rng);
}

inline void run_ness(const RunConfig& cfg, const ModelParams& p,
                     RunManifest& man,
                     const std::filesystem::path& outdir) {
  const VelocityGrid grid = make_grid(cfg, p);
  std::mt19937_64 rng(cfg.seed);
  const DensityProfile rho0 = initial_density(cfg, rng);

  const FixedPointReport rep =
      iterate_fixed_point(rho0, p, grid, cfg.tol, cfg.max_iter);

  CsvWriter csv(outdir / "ness_series.csv", {"iter", "residual", "ratio"});
  for (std::size_t n = 0; n < rep.residuals.size(); ++n) {
    const double ratio =
        n == 0 ? 0.0 : rep.contraction_ratios[n - 1];
    csv.row({std::to_string(n), format_double(rep.residuals[n]),
             format_double(ratio)},
            "Eq:(Psidef)");
  }
  csv.write();
  man.add_output(csv.path());

  const NessReconstruction rec = reconstruct_ness(rep.final_density, p, grid);
  const Moments m = compute_moments(rec.field);
  const int nx = 4 * cfg.k_modes;
  DensityProfile pdev = m.pressure;
  pdev.c(0) -= p.p_inf();
  const double pressure_dev =
      pdev.values_on_grid(nx).cwiseAbs().maxCoeff();
  const double momentum_sup =
      m.momentum.values_on_grid(nx).cwiseAbs().maxCoeff();
  const double rho_min = rep.final_density.min_on_grid(nx);
  const AprioriBounds bounds = apriori_bounds(p, cfg.r_exponent, grid);
  const FourthMomentCheck fm = verify_fourth_moment_relation(rec.field, p);

  nlohmann::json j;
  j["anchor"] = "Lemma:fixP";
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["final_residual"] =
      rep.residuals.empty() ? 0.0 : rep.residuals.back();
  j["trailing_contraction_ratio"] = rep.trailing_ratio;
  j["distance_to_uniform"] =
      rep.final_density.l2_distance(DensityProfile::uniform(cfg.k_modes));
  j["steady_residual"] = rec.steady_residual;
  j["pressure_deviation"] = {{"value", pressure_dev},
                             {"anchor", "Lemma:conpres"}};
  j["momentum_sup"] = {{"value", momentum_sup}, {"anchor", "Lemma:conpres"}};
  j["rho_min"] = {{"value", rho_min}, {"anchor", "Eq:(plb)"}};
  j["r_inf"] = {{"value", bounds.lower_pointwise}, {"anchor", "Eq:(plb)"}};
  j["moment_lower_bound"] = {{"value", bounds.lower_moment},
                             {"anchor", "Eq:(ST3)"}};
  j["fourth_moment"] = {{"deviation", fm.deviation},
                        {"bound", fm.bound},
                        {"anchor", "Eq:(ST2)"}};
  write_json(outdir / "ness_report.json", j);
  man.add_output(outdir / "ness_report.json");

  man.check("fixed point converged", rep.converged,
            "final residual " +
                format_double(rep.residuals.empty() ? 0.0
                                                    : rep.residuals.back()));
  man.check("pressure constant (Lemma:conpres)", pressure_dev <= 1e-7,
            "sup deviation " + format_double(pressure_dev));
  man.check("momentum zero (Lemma:conpres)", momentum_sup <= 1e-7,
            "sup " + format_double(momentum_sup));
  man.check("pointwise lower bound (Eq:(plb))",
            rho_min >= bounds.lower_pointwise - 1e-9,
            "min " + format_double(rho_min) + " vs r_inf " +
                format_double(bounds.lower_pointwise));
  man.check("moment lower bound (Eq:(ST3))",
            rho_min >= bounds.lower_moment - 1e-9,
            "min " + format_double(rho_min) + " vs " +
                format_double(bounds.lower_moment));
  man.check("fourth moment deviation (Eq:(ST2))", fm.within(),
            format_double(fm.deviation) + " <= " + format_double(fm.bound));
}

inline void run_contraction(const RunConfig& cfg, const ModelParams& p,
                            RunManifest& man,
                            const std::filesystem::path& outdir) {
  const VelocityGrid grid = make_grid(cfg, p);
  std::mt19937_64 rng(cfg.seed);
  const DensityProfile rho_bar = initial_density(cfg, rng);

  std::vector<double> alphas;
  if (cfg.sweep_steps > 0) {
    for (int i = 0; i < cfg.sweep_steps; ++i)
      alphas.push_back(cfg.sweep_max * i / std::max(1, cfg.sweep_steps - 1));
  } else {
    alphas.push_back(cfg.alpha);
  }

  CsvWriter csv(outdir / "contraction_sweep.csv",
                {"alpha", "norm", "iterations", "converged"});
  double below = -1.0, above = -1.0;
  bool all_converged = true;
  double last_norm = 0.0;
  for (double a : alphas) {
    const ModelParams pa(a, p.t1, p.t2);
    const ContractionEstimate est =
        contraction_norm_estimate(rho_bar, pa, grid);
    all_converged = all_converged && est.converged;
    last_norm = est.norm;
    if (est.norm < 1.0) below = a;
    if (est.norm >= 1.0 && above < 0.0) above = a;
    csv.row({format_double(a), format_double(est.norm),
             std::to_string(est.iterations), est.converged ? "1" : "0"},
            "Lemma:CMT");
  }
  csv.write();
  man.add_output(csv.path());

  nlohmann::json j;
  j["anchor"] = "Lemma:CMT";
  j["norm_at_alpha"] = last_norm;
  j["gamma_1"] = g_multiplier(p, grid, 1);
  j["delta_g"] = 1.0 - g_multiplier(p, grid, 1);
  if (cfg.sweep_steps > 0) {
    j["contraction_loss_bracket"] = {
        {"largest_alpha_contractive",
         below >= 0.0 ? nlohmann::json(below) : nlohmann::json()},
        {"smallest_alpha_noncontractive",
         above >= 0.0 ? nlohmann::json(above) : nlohmann::json()},
        {"note", "empirical sweep bracket at the given profile"}};
  }
  write_json(outdir / "contraction_report.json", j);
  man.add_output(outdir / "contraction_report.json");

  man.check("power iteration converged", all_converged, "");
  if (cfg.alpha == 0.0 && cfg.init == "uniform" && cfg.sweep_steps == 0) {
    const double gamma1 = g_multiplier(p, grid, 1);
    man.check("norm equals the reservoir multiplier at alpha=0",
              std::abs(last_norm - gamma1) <= 1e-6,
              format_double(last_norm) + " vs gamma_1 " +
                  format_double(gamma1));
  }
}

inline void run_spectrum(const RunConfig& cfg, const ModelParams& p,
                         RunManifest& man,
                         const std::filesystem::path& outdir) {
  std::vector<FrequencyConvention> convs;
  if (cfg.convention == "angular" || cfg.convention == "both")
    convs.push_back(FrequencyConvention::angular);
  if (cfg.convention == "index" || cfg.convention == "both")
    convs.push_back(FrequencyConvention::index);

  CsvWriter csv(outdir / "spectrum_gaps.csv",
                {"k", "M", "convention", "gap", "gap_refined", "stable",
                 "lambda_bound", "certificate_min_eig", "gap_ge_lambda"});
  bool all_gap = true, all_cert = true;
  for (FrequencyConvention conv : convs) {
    for (int k = 1; k <= cfg.kmax; ++k) {
      const GapResult g = numeric_gap(k, p, cfg.basis_order, conv);
      all_gap = all_gap && g.gap >= g.lambda_bound;
      all_cert = all_cert && g.certificate_min_eig >= -1e-8;
      csv.row({std::to_string(k), std::to_string(cfg.basis_order),
               conv == FrequencyConvention::angular ? "angular" : "index",
               format_double(g.gap), format_double(g.gap_refined),
               g.stable ? "1" : "0", format_double(g.lambda_bound),
               format_double(g.certificate_min_eig),
               g.gap >= g.lambda_bound ? "1" : "0"},
              "Eq:(modno)");
    }
  }
  csv.write();
  man.add_output(csv.path());
  man.check("spectral gap >= certified rate", all_gap, "Eq:(modno)");
  man.check("Lyapunov certificate PSD", all_cert, "Eq:(modno)");
}

inline void run_rates(const RunConfig& cfg, const ModelParams& p,
                      RunManifest& man,
                      const std::filesystem::path& outdir) {
  const RateCertificate rc = explicit_rate(p);
  nlohmann::json j;
  j["anchor"] = "Theorem:expl";
  j["prefactor"] = rc.prefactor;
  j["lambda"] = rc.lambda;
  j["c"] = rc.c;
  j["case"] = rc.case_id;
  j["degenerate"] = rc.degenerate;
  write_json(outdir / "rates.json", j);
  man.add_output(outdir / "rates.json");
  man.check("decay rate positive below alpha=1",
            rc.degenerate || rc.lambda > 0.0, format_double(rc.lambda));
  (void)cfg;
}

inline void run_evolve(const RunConfig& cfg, const ModelParams& p,
                       RunManifest& man,
                       const std::filesystem::path& outdir) {
  EvolutionConfig ec;
  ec.dt = cfg.dt;
  ec.t_end = cfg.t_end;
  ec.scheme =
      cfg.scheme == "lie" ? SplittingScheme::lie : SplittingScheme::strang;
  ec.record_every = cfg.record_every;
  ec.linearized = cfg.linearized;

  std::mt19937_64 rng(cfg.seed);
  DecayReport rep;
  if (cfg.linearized) {
    const SpectralBasis basis =
        build_basis(p, basis_grid(p, cfg.basis_order), cfg.basis_order);
    CoefficientField h0(std::min(cfg.k_modes, 16), cfg.basis_order);
    if (cfg.preset == "mode")
      h0 = mode_perturbation(h0.K, cfg.basis_order, cfg.preset_k,
                             cfg.preset_m, cfg.amplitude);
    else if (cfg.preset == "density")
      h0 = density_perturbation(h0.K, cfg.basis_order, cfg.preset_k,
                                cfg.amplitude);
    else
      h0 = random_perturbation(h0.K, cfg.basis_order, cfg.amplitude, rng);
    rep = run_decay_experiment(h0, basis, ec);
  } else {
    const VelocityGrid grid = make_grid(cfg, p);
    const Eigen::VectorXd fi = uniform_ness(p, grid);
    PhaseField f0(cfg.k_modes, grid);
    DensityProfile rho0 =
        cfg.preset == "random"
            ? random_positive_density(cfg.k_modes, cfg.init_kmax,
                                      cfg.amplitude, rng)
            : cosine_density(cfg.k_modes, cfg.preset_k, cfg.amplitude);
    for (int k = -cfg.k_modes; k <= cfg.k_modes; ++k)
      f0.mode(k) = rho0.c(k) * fi.transpose();
    rep = run_decay_experiment(f0, p, ec);
  }

  CsvWriter csv(outdir / "evolve_series.csv",
                {"t", "norm_H", "norm_H1", "rho_min", "pressure_dev",
                 "momentum_sup"});
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const bool nl = !cfg.linearized;
    csv.row({format_double(rep.times[i]), format_double(rep.norms_h[i]),
             format_double(rep.norms_h1[i]),
             nl ? format_double(rep.rho_min[i]) : "nan",
             nl ? format_double(rep.pressure_dev[i]) : "nan",
             nl ? format_double(rep.momentum_sup[i]) : "nan"},
            "Eq:(hyp)");
  }
  csv.write();
  man.add_output(csv.path());

  nlohmann::json j;
  j["anchor"] = "Eq:(hyp)";
  j["fitted_rate"] = rep.fitted_rate;
  j["fit_residual"] = rep.fit_residual;
  j["fit_stderr"] = rep.fit_stderr;
  j["theorem_rate"] = {{"value", rep.theorem_rate},
                       {"anchor", "Theorem:expl"}};
  j["prefactor_check"] = rep.prefactor_check;
  j["bound_ok"] = rep.bound_ok;
  j["bound_ok_h1"] = rep.bound_ok_h1;
  j["lyapunov_monotone"] = rep.lyapunov_monotone;
  j["final_norm_H"] = rep.norms_h.empty() ? 0.0 : rep.norms_h.back();
  j["final_norm_H1"] = rep.norms_h1.empty() ? 0.0 : rep.norms_h1.back();
  write_json(outdir / "evolve_report.json", j);
  man.add_output(outdir / "evolve_report.json");

  if (cfg.linearized) {
    man.check("decay bound |h_t| <= 4 e^{-lambda t}|h_0| (Eq:(hyp))",
              rep.bound_ok, "prefactor seen " +
                                format_double(rep.prefactor_check));
    man.check("decay bound in the Sobolev norm", rep.bound_ok_h1, "");
    man.check("Lyapunov functional nonincreasing", rep.lyapunov_monotone, "");
    if (rep.fit_stderr < 1e-2)
      man.check("fitted rate >= certified rate",
                rep.fitted_rate >= rep.theorem_rate,
                format_double(rep.fitted_rate) + " vs " +
                    format_double(rep.theorem_rate));
  } else {
    const double n0 = rep.norms_h1.empty() ? 0.0 : rep.norms_h1.front();
    const double nT = rep.norms_h1.empty() ? 0.0 : rep.norms_h1.back();
    man.check("fluctuation decayed", nT < n0,
              format_double(n0) + " -> " + format_double(nT));
  }
}

inline void run_verify_bounds(const RunConfig& cfg, const ModelParams& p,
                              RunManifest& man,
                              const std::filesystem::path& outdir) {
  const VelocityGrid grid = make_grid(cfg, p);
  const AprioriBounds b = apriori_bounds(p, cfg.r_exponent, grid);

  PhaseField uniform_field(cfg.k_modes, grid);
  uniform_field.mode(0) =
      uniform_ness(p, grid).transpose().cast<std::complex<double>>();
  const FourthMomentCheck fm = verify_fourth_moment_relation(uniform_field, p);

  nlohmann::json j;
  j["moment_lower_bound"] = {{"value", b.lower_moment},
                             {"anchor", "Eq:(ST3)"}};
  j["r_inf"] = {{"value", b.lower_pointwise}, {"anchor", "Eq:(plb)"}};
  j["A_r"] = {{"value", b.a_r},
              {"quadrature", b.a_r_quadrature},
              {"anchor", "Eq:(STU)"}};
  j["B_r"] = {{"value", b.b_r},
              {"quadrature", b.b_r_quadrature},
              {"anchor", "Eq:(STU)"}};
  j["delta_g"] = {{"value", b.delta_g}, {"anchor", "Lemma:CMT"}};
  j["alpha_part_norm"] = {{"value", b.alpha_part_norm},
                          {"anchor", "Lemma:CMT"}};
  j["contraction_upper"] = {{"value", b.contraction_upper},
                            {"anchor", "Lemma:CMT"}};
  j["fourth_moment"] = {{"deviation", fm.deviation},
                        {"bound", fm.bound},
                        {"anchor", "Eq:(ST2)"}};
  j["r"] = cfg.r_exponent;
  write_json(outdir / "bounds.json", j);
  man.add_output(outdir / "bounds.json");

  man.check("A_r closed form vs quadrature (Eq:(STU))",
            std::abs(b.a_r - b.a_r_quadrature) <=
                1e-8 * std::max(1.0, b.a_r),
            format_double(b.a_r) + " vs " + format_double(b.a_r_quadrature));
  man.check("B_r closed form vs quadrature (Eq:(STU))",
            std::abs(b.b_r - b.b_r_quadrature) <=
                1e-8 * std::max(1.0, b.b_r),
            format_double(b.b_r) + " vs " + format_double(b.b_r_quadrature));
  man.check("uniform state fourth moment within (Eq:(ST2))", fm.within(),
            format_double(fm.deviation) + " <= " + format_double(fm.bound));
}

inline void run_dms(const RunConfig& cfg, const ModelParams& p,
                    RunManifest& man, const std::filesystem::path& outdir) {
  const SpectralBasis basis =
      build_basis(p, basis_grid(p, cfg.basis_order), cfg.basis_order);
  const DmsConstants d = dms_constants(p, basis, cfg.samples, cfg.seed);

  nlohmann::json j;
  j["anchor"] = "Theorem:theo-hypo";
  j["lambda_m"] = {{"value", d.lambda_m}, {"anchor", "Lemma:mco"}};
  j["lambda_M"] = {{"value", d.lambda_M}, {"anchor", "Theorem:stab"}};
  j["C_M"] = d.c_M;
  j["epsilon"] = d.epsilon;
  j["delta"] = d.delta;
  j["lambda"] = d.lambda;
  j["prefactor"] = d.prefactor;
  j["max_a_ratio"] = {{"value", d.max_a_ratio},
                      {"anchor", "Eq:(ExplicitBound)"}};
  j["max_sa_ratio"] = {{"value", d.max_sa_ratio},
                       {"anchor", "Eq:(ExplicitBound)"}};
  j["samples"] = d.samples;
  write_json(outdir / "dms.json", j);
  man.add_output(outdir / "dms.json");

  man.check("|A h| <= (1/2)|(1-Pi0) h| (Eq:(ExplicitBound))",
            d.max_a_ratio <= 0.5 + 1e-9, format_double(d.max_a_ratio));
  man.check("|S A h| <= |(1-Pi0) h| (Eq:(ExplicitBound))",
            d.max_sa_ratio <= 1.0 + 1e-9, format_double(d.max_sa_ratio));
  man.check("abstract rate positive below alpha=1",
            p.alpha >= 1.0 || d.lambda > 0.0, format_double(d.lambda));
}

/// Dispatch a validated configuration. Returns the process exit code:
/// 0 pass, 1 assertion failure, 3 numerical domain error.
inline int run_command(const RunConfig& cfg) {
  const std::filesystem::path outdir(cfg.output_dir);
  std::filesystem::create_directories(outdir);
  RunManifest man;
  man.version = kVersion;
  man.config = cfg.to_json();
  man.started_at = timestamp_now();
  int code = 0;
  try {
    const ModelParams p(cfg.alpha, cfg.t1, cfg.t2);
    if (cfg.command == "ness")
      run_ness(cfg, p, man, outdir);
    else if (cfg.command == "contraction")
      run_contraction(cfg, p, man, outdir);
    else if (cfg.command == "spectrum")
      run_spectrum(cfg, p, man, outdir);
    else if (cfg.command == "rates")
      run_rates(cfg, p, man, outdir);
    else if (cfg.command == "evolve")
      run_evolve(cfg, p, man, outdir);
    else if (cfg.command == "verify-bounds")
      run_verify_bounds(cfg, p, man, outdir);
    else if (cfg.command == "dms")
      run_dms(cfg, p, man, outdir);
    if (!man.all_passed()) code = 1;
  } catch (const positivity_error& e) {
    man.error = e.what();
    code = 3;
  } catch (const conditioning_error& e) {
    man.error = e.what();
    code = 3;
  }
  man.finished_at = timestamp_now();
  write_json(outdir / "manifest.json", man.to_json());
  return code;
}

}  // namespace bgklab::io
