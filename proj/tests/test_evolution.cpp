#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "bgklab/evolution/decay.hpp"
#include "bgklab/evolution/remainder.hpp"
#include "bgklab/io/presets.hpp"
#include "bgklab/spectral/dms.hpp"
#include "oracles.hpp"

using namespace bgklab;

namespace {

PhaseField density_modulated(const ModelParams& p, const VelocityGrid& g,
                             int K, int k, double amp) {
  const Eigen::VectorXd fi = uniform_ness(p, g);
  PhaseField f(K, g);
  f.mode(0) = fi.transpose().cast<std::complex<double>>();
  f.mode(k) = 0.5 * amp * fi.transpose().cast<std::complex<double>>();
  f.mode(-k) = f.mode(k);
  return f;
}

// carries a genuine temperature fluctuation, so the collision operator and
// the quadratic remainder act nontrivially
PhaseField out_of_equilibrium(const ModelParams& p, const VelocityGrid& g,
                              int K, int k, double amp) {
  PhaseField f = density_modulated(p, g, K, k, amp);
  const Eigen::VectorXd bump = maxwellian(p.t1, g) - maxwellian(p.t2, g);
  f.mode(k) += 0.5 * amp * bump.transpose().cast<std::complex<double>>();
  f.mode(-k) += 0.5 * amp * bump.transpose().cast<std::complex<double>>();
  return f;
}

}  // namespace

TEST_CASE("transport substep") {
  const ModelParams p(0.3, 1.0, 3.0);
  const VelocityGrid g = VelocityGrid::for_params(p, 128);

  SECTION("zero mode and constant fields are invariant") {
    PhaseField f = density_modulated(p, g, 4, 1, 0.1);
    const PhaseField out = step_transport(f, 0.37);
    REQUIRE((out.mode(0) - f.mode(0)).cwiseAbs().maxCoeff() == 0.0);

    PhaseField uniform(4, g);
    uniform.mode(0) = maxwellian(1.0, g).transpose().cast<std::complex<double>>();
    const PhaseField out2 = step_transport(uniform, 0.9);
    REQUIRE((out2.raw() - uniform.raw()).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("phase at a single node") {
    const VelocityGrid half = VelocityGrid::uniform(8.0, 33);  // contains 0.5
    REQUIRE(half.nodes[17] == 0.5);
    PhaseField f(1, half);
    f.at(1, 17) = 1.0;
    f.at(-1, 17) = 1.0;
    const PhaseField out = step_transport(f, 1.0);
    REQUIRE(std::abs(out.at(1, 17) - std::complex<double>(-1.0, 0.0)) <
            1e-14);
  }
  SECTION("mass, momentum and energy preserved per mode") {
    PhaseField f = density_modulated(p, g, 3, 1, 0.2);
    const PhaseField out = step_transport(f, 0.51);
    const Moments before = compute_moments(f);
    const Moments after = compute_moments(out);
    REQUIRE(std::abs(after.rho.c(0) - before.rho.c(0)) < 1e-15);
    // |mode| preserved entrywise, so quadratic moments of |f| are too
    REQUIRE((out.raw().cwiseAbs() - f.raw().cwiseAbs())
                .cwiseAbs()
                .maxCoeff() < 1e-15);
  }
}

TEST_CASE("collision substep") {
  const ModelParams p(0.4, 1.0, 3.0);
  const VelocityGrid g = VelocityGrid::for_params(p);

  SECTION("the uniform steady state is fixed") {
    PhaseField f(4, g);
    f.mode(0) = uniform_ness(p, g).transpose().cast<std::complex<double>>();
    const PhaseField out = step_collision(f, p, 0.1);
    PhaseField diff = out;
    diff -= f;
    REQUIRE(weighted_norm(diff, p, false) < 1e-12);
  }
  SECTION("alpha = 0 uniform relaxation has a closed form") {
    const ModelParams p0(0.0, 1.0, 3.0);
    PhaseField f(2, g);
    f.mode(0) = maxwellian(1.0, g).transpose().cast<std::complex<double>>();
    const double dt = 0.25;
    const PhaseField out = step_collision(f, p0, dt);
    const Eigen::VectorXd expected =
        std::exp(-dt) * maxwellian(1.0, g) +
        (1.0 - std::exp(-dt)) * reservoir_mix(p0, g);
    REQUIRE((out.mode(0).real().transpose() - expected)
                .cwiseAbs()
                .maxCoeff() < 1e-14);
    // iterating drives the profile to the reservoir mixture
    PhaseField iter = f;
    for (int s = 0; s < 100; ++s) iter = step_collision(iter, p0, 0.25);
    REQUIRE((iter.mode(0).real().transpose() - reservoir_mix(p0, g))
                .cwiseAbs()
                .maxCoeff() < 1e-10);
  }
  SECTION("local equilibria are collision-stationary") {
    // f = rho(x) f_inf(v) has T(x) = T_inf, so the relaxation target is f
    const PhaseField f = density_modulated(p, g, 4, 1, 0.05);
    REQUIRE(weighted_norm(collision_rhs(f, p), p, false) < 1e-12);
  }
  SECTION("small-step consistency with the relaxation right-hand side") {
    const PhaseField f = out_of_equilibrium(p, g, 4, 1, 0.05);
    const PhaseField rhs = collision_rhs(f, p);
    REQUIRE(weighted_norm(rhs, p, false) > 1e-3);
    double prev = -1.0;
    for (double dt : {2e-2, 1e-2, 5e-3}) {
      PhaseField quotient = step_collision(f, p, dt);
      quotient -= f;
      quotient *= 1.0 / dt;
      quotient -= rhs;
      const double err = weighted_norm(quotient, p, false);
      if (prev > 0.0) REQUIRE(err < 0.62 * prev);  // O(dt)
      prev = err;
    }
  }
  SECTION("mass conserved to the bit per step") {
    PhaseField f = density_modulated(p, g, 4, 1, 0.3);
    const double m0 = f.total_mass();
    PhaseField out = f;
    for (int s = 0; s < 100; ++s) out = step_collision(out, p, 0.01);
    REQUIRE(std::abs(out.total_mass() - m0) < 1e-13);
  }
  SECTION("positivity loss aborts with a located diagnostic") {
    PhaseField f = density_modulated(p, g, 4, 1, 2.4);
    REQUIRE_THROWS_AS(step_collision(f, p, 0.1), positivity_error);
  }
}

TEST_CASE("composed splitting") {
  const ModelParams p(0.3, 1.0, 3.0);
  const VelocityGrid g = VelocityGrid::for_params(p, 256);

  SECTION("the uniform steady state is an exact fixed point of the step") {
    PhaseField f(4, g);
    f.mode(0) = uniform_ness(p, g).transpose().cast<std::complex<double>>();
    for (SplittingScheme s : {SplittingScheme::lie, SplittingScheme::strang}) {
      PhaseField out = split_step(f, p, 0.05, s);
      out -= f;
      REQUIRE(weighted_norm(out, p, false) < 1e-13);
    }
  }
  SECTION("convergence under step halving") {
    // the frozen-moment relaxation substep limits the asymptotic order to
    // one for both schemes, but the symmetric composition carries a much
    // smaller constant
    const PhaseField f0 = out_of_equilibrium(p, g, 8, 1, 0.05);
    const double T = 0.5;
    auto run = [&](double dt, SplittingScheme s) {
      PhaseField f = f0;
      const int n = static_cast<int>(std::round(T / dt));
      for (int i = 0; i < n; ++i) f = split_step(f, p, dt, s);
      return f;
    };
    double err_at_32[2] = {0.0, 0.0};
    int which = 0;
    for (SplittingScheme s : {SplittingScheme::strang, SplittingScheme::lie}) {
      const PhaseField ref = run(T / 512.0, s);
      double prev = -1.0;
      for (double dt : {T / 8.0, T / 16.0, T / 32.0}) {
        PhaseField diff = run(dt, s);
        diff -= ref;
        const double err = weighted_norm(diff, p, false);
        if (prev > 0.0) {
          REQUIRE(err < prev);             // converging
          REQUIRE(prev / err > 1.8);       // at least first order
        }
        prev = err;
      }
      err_at_32[which++] = prev;
    }
    REQUIRE(err_at_32[0] * 10.0 < err_at_32[1]);  // strang well below lie
  }
}

TEST_CASE("linearized per-mode flow") {
  const ModelParams p(0.3, 1.0, 3.0);
  const SpectralBasis basis = build_basis(p, 16);

  SECTION("mode zero decays at exactly unit rate") {
    CoefficientField h(2, 16);
    h.coeffs(0, 1) = 0.7;  // zero-mass content of mode 0
    const LinearFlow flow(basis, 2, 0.125);
    const double n0 = h.norm(false);
    for (int s = 0; s < 8; ++s) flow.step(h);
    REQUIRE(h.norm(false) ==
            Catch::Approx(std::exp(-1.0) * n0).epsilon(1e-12));
  }
  SECTION("single-mode perturbation decays no slower than the certificate") {
    const CoefficientField h0 = io::mode_perturbation(2, 16, 1, 1, 1.0);
    EvolutionConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 20.0;
    const DecayReport rep = run_decay_experiment(h0, basis, cfg);
    REQUIRE(rep.bound_ok);
    REQUIRE(rep.bound_ok_h1);
    REQUIRE(rep.lyapunov_monotone);
    REQUIRE(rep.fit_stderr < 1e-2);
    REQUIRE(rep.fitted_rate >= rep.theorem_rate);
  }
  SECTION("density-type profiles stream without collision damping") {
    DmsOperators ops(p, basis.grid);
    const Eigen::VectorXcd h =
        (1.3 * basis.f_inf).cast<std::complex<double>>();
    REQUIRE(std::sqrt(ops.norm2(ops.collision(h))) < 1e-10);
    const Eigen::MatrixXd L = collision_matrix(basis);
    REQUIRE(L.col(0).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("decay experiments") {
  const ModelParams p0(0.0, 1.0, 3.0);
  const SpectralBasis basis = build_basis(p0, 24);

  SECTION("zero data stays zero") {
    CoefficientField h0(4, 24);
    EvolutionConfig cfg;
    cfg.t_end = 1.0;
    const DecayReport rep = run_decay_experiment(h0, basis, cfg);
    for (double n : rep.norms_h) REQUIRE(n == 0.0);
  }
  SECTION("energy-mode cosine matches the first-case rate") {
    const RateCertificate rc = explicit_rate(p0);
    REQUIRE(rc.case_id == 1);
    REQUIRE(rc.lambda == Catch::Approx(0.125).epsilon(1e-15));
    const CoefficientField h0 = io::mode_perturbation(1, 24, 1, 2, 1.0);
    EvolutionConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 20.0;
    const DecayReport rep = run_decay_experiment(h0, basis, cfg);
    REQUIRE(rep.bound_ok);
    REQUIRE(rep.fit_stderr < 1e-2);
    REQUIRE(rep.fitted_rate >= 0.125);
  }
  SECTION("nonlinear decay to the steady state") {
    const ModelParams p(0.3, 1.0, 3.0);
    const VelocityGrid g = VelocityGrid::for_params(p, 256);
    PhaseField f0 = density_modulated(p, g, 8, 1, 0.01);
    EvolutionConfig cfg;
    cfg.linearized = false;
    cfg.dt = 0.01;
    cfg.t_end = 40.0;
    cfg.record_every = 25;
    const DecayReport rep = run_decay_experiment(f0, p, cfg);
    REQUIRE(rep.norms_h1.back() < 1e-8);
    // monotone after the sub-unit transient (slack covers the roundoff
    // floor the norm settles into)
    for (std::size_t i = 1; i < rep.times.size(); ++i)
      if (rep.times[i - 1] >= 1.0)
        REQUIRE(rep.norms_h1[i] <=
                rep.norms_h1[i - 1] * (1.0 + 1e-10) + 1e-13);
    // stationary diagnostics at the end of the run
    REQUIRE(rep.pressure_dev.back() < 1e-7);
    REQUIRE(rep.momentum_sup.back() < 1e-7);
    REQUIRE(rep.rho_min.back() > 0.9);
  }
  SECTION("nonlinear mass conservation over unit time") {
    const ModelParams p(0.5, 1.0, 3.0);
    const VelocityGrid g = VelocityGrid::for_params(p, 256);
    PhaseField f = density_modulated(p, g, 8, 2, 0.2);
    const double m0 = f.total_mass();
    for (int s = 0; s < 100; ++s)
      f = split_step(f, p, 0.01, SplittingScheme::strang);
    REQUIRE(std::abs(f.total_mass() - m0) < 1e-12);
  }
}

TEST_CASE("linearized consistency of the nonlinear flow") {
  const ModelParams p(0.3, 1.0, 3.0);
  const VelocityGrid g = VelocityGrid::for_params(p);
  const int K = 4;

  const Eigen::VectorXd fi = uniform_ness(p, g);
  const Eigen::VectorXcd h1 =
      (0.5 * (fi + maxwellian(p.t1, g) - maxwellian(p.t2, g)))
          .cast<std::complex<double>>();

  // grid-level linearized reference on the k = 1 block, integrated by RK4
  DmsOperators ops(p, g);
  auto rhs = [&](const Eigen::VectorXcd& h) {
    return (ops.collision(h) - ops.streaming(1, h)).eval();
  };
  const double T = 1.0;
  Eigen::VectorXcd h_lin = h1;
  const double dtr = 5e-4;
  for (int s = 0; s < static_cast<int>(T / dtr); ++s) {
    const Eigen::VectorXcd k1 = rhs(h_lin);
    const Eigen::VectorXcd k2 = rhs(h_lin + 0.5 * dtr * k1);
    const Eigen::VectorXcd k3 = rhs(h_lin + 0.5 * dtr * k2);
    const Eigen::VectorXcd k4 = rhs(h_lin + dtr * k3);
    h_lin += dtr / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  const double dt = 1e-3;
  auto nonlinear_fluct = [&](double eps) {
    PhaseField f(K, g);
    f.mode(0) = fi.transpose().cast<std::complex<double>>();
    f.mode(1) = eps * h1.transpose();
    f.mode(-1) = eps * h1.conjugate().transpose();
    for (int s = 0; s < static_cast<int>(T / dt); ++s)
      f = split_step(f, p, dt, SplittingScheme::strang);
    PhaseField h = f;
    h.mode(0) -= fi.transpose().cast<std::complex<double>>();
    h *= 1.0 / eps;
    return h;
  };
  // successive amplitude differences cancel the eps-independent splitting
  // error, isolating the O(eps) linearization defect
  const PhaseField f1 = nonlinear_fluct(2e-2);
  const PhaseField f2 = nonlinear_fluct(1e-2);
  const PhaseField f3 = nonlinear_fluct(5e-3);
  PhaseField d12 = f1;
  d12 -= f2;
  PhaseField d23 = f2;
  d23 -= f3;
  const double e12 = weighted_norm(d12, p, false);
  const double e23 = weighted_norm(d23, p, false);
  REQUIRE(e12 / e23 > 1.7);
  REQUIRE(e12 / e23 < 2.4);
  // and the small-amplitude fluctuation sits on the linearized flow
  const Eigen::VectorXcd diff = f3.mode(1).transpose() - h_lin;
  REQUIRE(std::sqrt(ops.norm2(diff)) <
          1e-4 * std::sqrt(ops.norm2(h_lin)) + 1e-5);
}

TEST_CASE("quadratic remainder") {
  const ModelParams p(0.3, 1.0, 3.0);
  const VelocityGrid g = VelocityGrid::for_params(p);

  SECTION("vanishes at zero") {
    PhaseField h(4, g);
    const PhaseField r = nonlinear_remainder(h, p);
    REQUIRE(r.raw().cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("halving the input quarters the remainder") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Eigen::VectorXd fi = uniform_ness(p, g);
    const Eigen::VectorXd mw = maxwellian(p.t_inf(), g);
    for (int trial = 0; trial < 10; ++trial) {
      PhaseField h(4, g);
      for (int k = 1; k <= 2; ++k) {
        const std::complex<double> cs(gauss(rng), gauss(rng));
        const std::complex<double> ct(gauss(rng), gauss(rng));
        // density and energy content
        for (int j = 0; j < g.size(); ++j) {
          const double v = g.nodes[j];
          h.at(k, j) = 0.01 * (cs * fi[j] +
                               ct * (v * v / p.t_inf() - 1.0) * mw[j]);
        }
        h.mode(-k) = h.mode(k).conjugate();
      }
      PhaseField half = h;
      half *= 0.5;
      const double r_full =
          weighted_norm(nonlinear_remainder(h, p), p, true);
      const double r_half =
          weighted_norm(nonlinear_remainder(half, p), p, true);
      const double ratio = r_half / r_full;
      REQUIRE(ratio >= 0.2);
      REQUIRE(ratio <= 0.3);
    }
  }
  SECTION("constant-temperature directions have no remainder at all") {
    // tau = T_inf sigma keeps T(x) = T_inf, where the local Maxwellian is
    // exactly linear in the density
    PhaseField h(2, g);
    const Eigen::VectorXd fi = uniform_ness(p, g);
    h.mode(1) = 0.5 * fi.transpose().cast<std::complex<double>>();
    h.mode(-1) = h.mode(1);
    const PhaseField r = nonlinear_remainder(h, p);
    // the floor is set by roundoff amplified by 1/f_inf at the tail nodes
    REQUIRE(weighted_norm(r, p, true) < 1e-8);
  }
  SECTION("difference quotient converges to the linearization") {
    // energy-carrying perturbation: the remainder is genuinely quadratic
    PhaseField h(2, g);
    const Eigen::VectorXd mw = maxwellian(p.t_inf(), g);
    for (int j = 0; j < g.size(); ++j) {
      const double v = g.nodes[j];
      h.at(1, j) = 0.5 * (v * v / p.t_inf() - 1.0) * mw[j];
    }
    h.mode(-1) = h.mode(1).conjugate();
    // reference linearization = quotient at eps -> 0; errors are O(eps)
    double prev = -1.0;
    for (double eps : {2e-2, 1e-2, 5e-3}) {
      PhaseField q = maxwellian_difference_quotient(h, p, eps);
      PhaseField q2 = maxwellian_difference_quotient(h, p, eps * 1e-3);
      q -= q2;
      const double err = weighted_norm(q, p, false);
      if (prev > 0.0) {
        REQUIRE(prev / err > 1.7);
        REQUIRE(prev / err < 2.4);
      }
      prev = err;
    }
  }
}
