#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "cw/errors.hpp"
#include "cw/sdelimit.hpp"

using namespace cw;

namespace {

double tanh_root(double beta) {
  double lo = 1e-6, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid - std::tanh(beta * mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double integral(const std::function<double(double)>& f, double a, double b) {
  double sum = 0;
  const int pieces = 200;
  for (int i = 0; i < pieces; ++i)
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a + (b - a) * i / pieces,
                                                                         a + (b - a) * (i + 1) / pieces, 5, 1e-15);
  return sum;
}

}  // namespace

TEST_CASE("diffusion specs") {
  auto ou = DiffusionSpec::from_clt(ModelParams::curie_weiss(0.5), 0, 0.0);
  CHECK(ou.drift().coeff(1) == doctest::Approx(-1.0));
  CHECK(ou.sigma() == doctest::Approx(2.0));
  auto crit = DiffusionSpec::from_clt(ModelParams::curie_weiss(1.0), 1, 0.0);
  CHECK(crit.drift().coeff(3) == doctest::Approx(-2.0 / 3));
  CHECK(crit.drift().degree() == 3);
  CHECK(crit.sigma() == doctest::Approx(2.0));
  const double m = tanh_root(1.5);
  auto sup = DiffusionSpec::from_clt(ModelParams::curie_weiss(1.5), 0, m);
  CHECK(sup.sigma() == doctest::Approx(2 * std::sqrt(std::cosh(1.5 * m) - m * std::sinh(1.5 * m))));
  auto temp = DiffusionSpec::temp_rescaled(1.0);
  CHECK(temp.drift()(1.0) == doctest::Approx(2 * (1 - 1.0 / 3)));
  CHECK(temp.sigma() == 2.0);
  for (const auto* s : {&ou, &crit, &sup, &temp}) {
    CHECK(s->drift_at(0.0) == 0.0);
    CHECK(s->confining());
  }
  CHECK_FALSE(DiffusionSpec::brownian(2.0).confining());
  CHECK_THROWS_AS(DiffusionSpec::brownian(0.0), DomainError);
  CHECK_THROWS_AS(DiffusionSpec::from_clt(ModelParams::curie_weiss(1.0), 0, 0.0), RegimeError);
}

TEST_CASE("Brownian terminal law") {
  auto e = integrate_sde(DiffusionSpec::brownian(2.0), 0.0, 1.0, 8000, 17);
  auto mo = e.terminal_moments();
  CHECK(std::abs(mo.mean) <= 3 * 2.0 / std::sqrt(8000.0));
  CHECK(std::abs(mo.variance - 4.0) <= 3 * 4.0 * std::sqrt(2.0 / 8000));
  CHECK(e.diverged_count == 0);
}

TEST_CASE("Euler-Maruyama moments on the OU benchmark") {
  // For b(y) = -y, EM has E Y_N = (1-h)^N y0 and Var Y_N = 4h sum_j (1-h)^{2j}.
  auto ou = DiffusionSpec::from_clt(ModelParams::curie_weiss(0.5), 0, 0.0);
  const double y0 = 1.0, T = 1.0;
  const std::size_t paths = 20000;
  auto em_mean = [&](double h) { return std::pow(1 - h, T / h) * y0; };
  auto em_var = [&](double h) {
    double s = 0;
    for (int j = 0; j < std::lround(T / h); ++j) s += std::pow(1 - h, 2 * j);
    return 4 * h * s;
  };
  for (double h : {0.01, 0.005}) {
    SdeOptions opt;
    opt.dt = h;
    auto mo = integrate_sde(ou, y0, T, paths, 23, opt).terminal_moments();
    CHECK(std::abs(mo.mean - em_mean(h)) <= 3 * mo.sem());
    CHECK(std::abs(mo.variance - em_var(h)) <= 3 * mo.variance * std::sqrt(2.0 / paths));
  }
  const double se = std::sqrt(em_var(0.01) / paths);
  CHECK(std::abs(em_mean(0.01) - em_mean(0.005)) < se);
  CHECK(std::abs(em_var(0.01) - em_var(0.005)) < em_var(0.01) * std::sqrt(2.0 / paths));
}

TEST_CASE("supercritical long-run variance") {
  const double m = tanh_root(1.5);
  auto spec = DiffusionSpec::from_clt(ModelParams::curie_weiss(1.5), 0, m);
  const double ch = std::cosh(1.5 * m), sh = std::sinh(1.5 * m);
  const double target = -(ch - m * sh) / (1.5 * ch - ch - 1.5 * m * sh);
  auto mo = integrate_sde(spec, 0.0, 8.0, 4000, 5).terminal_moments();
  CHECK(mo.variance == doctest::Approx(target).epsilon(0.1));
}

TEST_CASE("sign symmetry and determinism") {
  auto crit = DiffusionSpec::from_clt(ModelParams::curie_weiss(1.0), 1, 0.0);
  auto plus = integrate_sde(crit, 1.5, 2.0, 4000, 1);
  auto minus = integrate_sde(crit, -1.5, 2.0, 4000, 2);
  std::vector<double> flipped;
  for (double y : minus.terminal) flipped.push_back(-y);
  CHECK(ks_distance(EmpiricalDistribution(plus.terminal), EmpiricalDistribution(flipped)) < ks_threshold(4000, 4000, 1.63));

  SdeOptions opt;
  opt.record_every = 0.5;
  auto a = integrate_sde(crit, 0.3, 2.0, 50, 9, opt);
  auto b = integrate_sde(crit, 0.3, 2.0, 50, 9, opt);
  CHECK(a.terminal == b.terminal);
  CHECK(a.record_times.size() == 5);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(a.paths[i].front() == 0.3);
    CHECK(a.paths[i].back() == a.terminal[i]);
  }
  CHECK(integrate_sde(crit, 0.3, 2.0, 50, 10, opt).terminal != a.terminal);
  CHECK_THROWS_AS(integrate_sde(crit, 0.0, 1.0, 0, 1), DomainError);
  SdeOptions bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(integrate_sde(crit, 0.0, 1.0, 10, 1, bad), DomainError);
}

TEST_CASE("divergence guard") {
  auto explode = DiffusionSpec::custom(Polynomial({0.0, 0.0, 0.0, 1.0}), 0.1);
  auto e = integrate_sde(explode, 2.0, 5.0, 20, 3);
  CHECK(e.diverged_count == 20);
  for (double y : e.terminal) CHECK(std::isfinite(y));
  CHECK(e.finite_terminal().empty());
}

TEST_CASE("stationary densities") {
  auto ou = DiffusionSpec::from_clt(ModelParams::curie_weiss(0.5), 0, 0.0);
  auto rho = stationary_density(ou);
  for (double y : {-4.0, -1.0, 0.0, 0.5, 3.0})
    CHECK(rho(y) == doctest::Approx(std::exp(-y * y / 4) / std::sqrt(4 * M_PI)).epsilon(1e-10));

  auto crit = DiffusionSpec::from_clt(ModelParams::curie_weiss(1.0), 1, 0.0);
  auto rc = stationary_density(crit);
  CHECK(rc.exponent().coeff(4) == doctest::Approx(-1.0 / 12).epsilon(1e-14));
  CHECK(rc.exponent().degree() == 4);
  const double z = 2 * std::tgamma(1.25) * std::pow(12.0, 0.25);
  CHECK(rc(0.0) == doctest::Approx(1 / z).epsilon(1e-10));

  for (const auto* r : {&rho, &rc}) {
    const double L = r->window();
    CHECK(integral([&](double y) { return (*r)(y); }, -L, L) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((*r)(L) * L < 1e-8);
    for (double y = 0; y < L; y += 0.1) CHECK(std::abs((*r)(y) - (*r)(-y)) <= 1e-14 * (*r)(0.0));
  }
  auto t = stationary_density(DiffusionSpec::temp_rescaled(1.0));
  CHECK(t(std::sqrt(3.0)) > t(0.0));
  CHECK(t.mass(-t.window(), t.window()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(stationary_density(DiffusionSpec::brownian(2.0)), DomainError);
}

TEST_CASE("Fokker-Planck flux vanishes") {
  for (const auto& spec : {DiffusionSpec::from_clt(ModelParams::curie_weiss(0.5), 0, 0.0),
                           DiffusionSpec::from_clt(ModelParams::curie_weiss(1.0), 1, 0.0),
                           DiffusionSpec::temp_rescaled(0.5)}) {
    auto rho = stationary_density(spec);
    const double s2 = spec.sigma() * spec.sigma();
    for (double y = -0.8 * rho.window(); y <= 0.8 * rho.window(); y += 0.05 * rho.window()) {
      auto d = [&](double h) { return (rho(y + h) - rho(y - h)) / (2 * h); };
      const double h = 1e-3;
      const double drho = (16 * (4 * d(h / 4) - d(h / 2)) / 3 - (4 * d(h / 2) - d(h)) / 3) / 15;
      const double flux = 0.5 * s2 * drho - spec.drift_at(y) * rho(y);
      const double scale = std::abs(0.5 * s2 * drho) + std::abs(spec.drift_at(y) * rho(y));
      CHECK(std::abs(flux) <= 1e-8 * scale + 1e-14 * rho(0.0));
    }
  }
}

TEST_CASE("log-density matches the quasi-potential") {
  struct Case {
    DiffusionSpec d;
    HamiltonianSpec h;
  };
  const std::vector<Case> cases{
      {DiffusionSpec::from_clt(ModelParams::curie_weiss(0.5), 0, 0.0),
       make_hamiltonian(ModelParams::curie_weiss(0.5), ScalingRegime::mdp(0, BSequence::power(0.25), 0.0))},
      {DiffusionSpec::from_clt(ModelParams::curie_weiss(1.0), 1, 0.0),
       make_hamiltonian(ModelParams::curie_weiss(1.0), ScalingRegime::mdp(1, BSequence::power(1.0 / 6), 0.0))},
  };
  for (const auto& c : cases) {
    auto rho = stationary_density(c.d);
    auto s = quasi_potential(c.h);
    const double shift = -rho.log_density(0.0) - s(0.0);
    for (double y = -3; y <= 3; y += 0.1) CHECK(std::abs(-rho.log_density(y) - s(y) - shift) <= 1e-9);
  }
}

TEST_CASE("quartic law has negative excess kurtosis") {
  auto rho = stationary_density(DiffusionSpec::from_clt(ModelParams::curie_weiss(1.0), 1, 0.0));
  const double L = rho.window();
  const double m2 = integral([&](double y) { return y * y * rho(y); }, -L, L);
  const double m4 = integral([&](double y) { return y * y * y * y * rho(y); }, -L, L);
  const double closed = std::pow(std::tgamma(0.25) / std::tgamma(0.75), 2) / 4 - 3;
  CHECK(m4 / (m2 * m2) - 3 == doctest::Approx(closed).epsilon(1e-9));
  CHECK(closed < -0.8);
}

TEST_CASE("density constant discrepancy is reported") {
  auto crit = density_constant_report(ModelParams::curie_weiss(1.0), 1, 0.0);
  CHECK(crit.g2_lead == doctest::Approx(-2.0));
  CHECK(crit.displayed_coefficient == doctest::Approx(1.0 / 3));
  CHECK(crit.fokker_planck_coefficient == doctest::Approx(1.0 / 12));
  CHECK(crit.ratio == doctest::Approx(4.0));
  auto sub = density_constant_report(ModelParams::curie_weiss(0.5), 0, 0.0);
  CHECK(sub.fokker_planck_coefficient == doctest::Approx(0.25));
  CHECK(sub.ratio == doctest::Approx(4.0));
}

TEST_CASE("long-run histogram") {
  auto ou = DiffusionSpec::from_clt(ModelParams::curie_weiss(0.5), 0, 0.0);
  auto check = long_run_histogram_check(ou, 30.0, 0.0, 2000, 20, 8);
  CHECK(check.burn_in == doctest::Approx(10.0));
  CHECK(check.samples == 2000 * 21);
  CHECK(check.l1 < 0.05);
  double ref = 0;
  for (double m : check.reference_mass) ref += m;
  CHECK(ref == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(long_run_histogram_check(DiffusionSpec::brownian(2.0), 30.0, 0.0, 10, 10, 1), DomainError);
  CHECK_THROWS_AS(long_run_histogram_check(ou, 5.0, 0.0, 10, 10, 1), DomainError);
}
