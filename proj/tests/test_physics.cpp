#include <cmath>

#include "chb/discretization.hpp"
#include "chb/errors.hpp"
#include "chb/physics.hpp"
#include "doctest.h"

using namespace chb;

namespace {
constexpr double kBeta = 1.5;
}

TEST_CASE("double well values at hand-computed points") {
  CHECK(psi(0.0, kBeta) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(psi(1.0, kBeta) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(psi(-1.0, kBeta) == doctest::Approx(0.0).epsilon(1e-15));
  // at the cut point: (1 - 2.25)^2 = 1.5625
  CHECK(psi(1.5, kBeta) == doctest::Approx(1.5625).epsilon(1e-15));
  // quadratic continuation beyond the cut: 2(b^2-1)phi^2 - (b^4-1)
  // at phi=2: 2*1.25*4 - 4.0625 = 5.9375
  CHECK(psi(2.0, kBeta) == doctest::Approx(5.9375).epsilon(1e-15));
}

TEST_CASE("convex-concave split recombines to the well") {
  for (double phi : {-2.3, -1.5, -0.9, 0.0, 0.4, 1.0, 1.49999, 1.5, 1.7, 3.0})
    CHECK(psi_c(phi, kBeta) - psi_e(phi) ==
          doctest::Approx(psi(phi, kBeta)).epsilon(1e-13));
}

TEST_CASE("split derivative values") {
  CHECK(psi_c_prime(0.5, kBeta) == doctest::Approx(0.5).epsilon(1e-15));
  // outside the cut: 4 b^2 phi = 9 phi
  CHECK(psi_c_prime(2.0, kBeta) == doctest::Approx(18.0).epsilon(1e-15));
  CHECK(psi_e_prime(0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(psi_c_second(0.5, kBeta) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(psi_c_second(2.0, kBeta) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(psi_prime(0.5, kBeta) ==
        doctest::Approx(psi_c_prime(0.5, kBeta) - psi_e_prime(0.5)));
}

TEST_CASE("double well family is continuous at the cut") {
  const double eps = 1e-9;
  for (double s : {-1.0, 1.0}) {
    const double at = s * kBeta;
    CHECK(psi(at - eps * s, kBeta) ==
          doctest::Approx(psi(at + eps * s, kBeta)).epsilon(1e-7));
    CHECK(psi_c_prime(at - eps * s, kBeta) ==
          doctest::Approx(psi_c_prime(at + eps * s, kBeta)).epsilon(1e-7));
  }
}

TEST_CASE("psi_c_prime is globally Lipschitz") {
  // The reported constant 4 beta^2 is the one used by the contraction
  // estimates; the true global constant is sup psi_c'' = 12 beta^2.
  CHECK(psi_c_lipschitz(kBeta) == doctest::Approx(9.0).epsilon(1e-15));
  const double L_true = 12.0 * kBeta * kBeta;
  double worst = 0.0;
  double prev_phi = -4.0;
  double prev_val = psi_c_prime(prev_phi, kBeta);
  for (int i = 1; i <= 1600; ++i) {
    const double phi = -4.0 + i * 0.005;
    const double val = psi_c_prime(phi, kBeta);
    worst = std::max(worst, std::abs(val - prev_val) / (phi - prev_phi));
    prev_phi = phi;
    prev_val = val;
  }
  CHECK(worst <= L_true * (1 + 1e-12));
  CHECK(worst > 9.0);  // the slope really does exceed the reported constant
}

TEST_CASE("interpolation function values and clamping") {
  CHECK(interp_pi(-1.5) == 0.0);
  CHECK(interp_pi(-1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(interp_pi(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(interp_pi(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(interp_pi(2.0) == 1.0);
  CHECK(interp_pi_prime(0.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(interp_pi_prime(1.5) == 0.0);
  CHECK(interp_pi_second(0.5) == doctest::Approx(-0.75).epsilon(1e-15));
}

TEST_CASE("material interpolation endpoints and midpoint") {
  const MaterialParams p = MaterialParams::defaults();
  CHECK(material_eval(p, -1.0).M == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(material_eval(p, 1.0).M == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(material_eval(p, 0.0).M == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(material_eval(p, 0.0).alpha == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(material_eval(p, -1.0).C[0][0] == doctest::Approx(100.0));
  CHECK(material_eval(p, 1.0).C[0][0] == doctest::Approx(1.0));
  CHECK(material_eval(p, 0.0).C[0][1] == doctest::Approx(10.05));
}

TEST_CASE("material derivative chain matches centered differences") {
  const MaterialParams p = MaterialParams::defaults();
  const double eps = 1e-6;
  for (double phi : {-0.8, -0.3, 0.0, 0.2, 0.7}) {
    const MaterialEval d = material_eval_prime(p, phi);
    const MaterialEval dd = material_eval_second(p, phi);
    const MaterialEval hi = material_eval(p, phi + eps);
    const MaterialEval lo = material_eval(p, phi - eps);
    CHECK(d.M == doctest::Approx((hi.M - lo.M) / (2 * eps)).epsilon(1e-6));
    CHECK(d.alpha ==
          doctest::Approx((hi.alpha - lo.alpha) / (2 * eps)).epsilon(1e-6));
    const MaterialEval d_hi = material_eval_prime(p, phi + eps);
    const MaterialEval d_lo = material_eval_prime(p, phi - eps);
    CHECK(dd.M ==
          doctest::Approx((d_hi.M - d_lo.M) / (2 * eps)).epsilon(1e-5));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(d.C[i][j] ==
              doctest::Approx((hi.C[i][j] - lo.C[i][j]) / (2 * eps))
                  .epsilon(1e-6)
                  .scale(100.0));
        CHECK(dd.C[i][j] ==
              doctest::Approx((d_hi.C[i][j] - d_lo.C[i][j]) / (2 * eps))
                  .epsilon(1e-5)
                  .scale(100.0));
      }
  }
}

TEST_CASE("parameter validation rejects bad inputs") {
  MaterialParams p = MaterialParams::defaults();
  CHECK_NOTHROW(p.validate());
  p.gamma = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MaterialParams::defaults();
  p.alpha_plus = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MaterialParams::defaults();
  p.beta_cut = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MaterialParams::defaults();
  p.C_plus[0][1] = 5.0;  // breaks symmetry
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MaterialParams::defaults();
  p.C_plus = {{{1.0, 2.0, 0.0}, {2.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // indefinite
}

TEST_CASE("free energy of uniform states") {
  const Mesh mesh = build_mesh(8);
  const MaterialParams p = MaterialParams::defaults();

  SUBCASE("phi = 1 everywhere, u = theta = 0") {
    State s = State::zero(mesh);
    for (double& v : s.phi) v = 1.0;
    const EnergyBreakdown e = free_energy(mesh, s, p);
    CHECK(e.interface == doctest::Approx(0.0).epsilon(1e-14));
    // 0.5 * (xi)^2 * e:C_plus e = 0.5 * 0.25 * 2.2 = 0.275
    CHECK(e.elastic == doctest::Approx(0.275).epsilon(1e-12));
    CHECK(e.fluid == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(e.total == doctest::Approx(0.275).epsilon(1e-12));
  }

  SUBCASE("phi = 0 everywhere gives the pure well energy") {
    State s = State::zero(mesh);
    const EnergyBreakdown e = free_energy(mesh, s, p);
    // gamma/ell * psi(0) = 40
    CHECK(e.interface == doctest::Approx(40.0).epsilon(1e-12));
  }

  SUBCASE("uniform theta with zero displacement") {
    State s = State::zero(mesh);
    for (double& v : s.phi) v = 1.0;
    for (double& v : s.theta) v = 2.0;
    const EnergyBreakdown e = free_energy(mesh, s, p);
    // M(1)/2 * theta^2 = 0.05 * 4 = 0.2
    CHECK(e.fluid == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("voigt helpers") {
  const VoigtMatrix C{{{2.0, 1.0, 0.0}, {1.0, 3.0, 0.0}, {0.0, 0.0, 4.0}}};
  const Voigt v{1.0, 2.0, 3.0};
  const Voigt Cv = voigt_apply(C, v);
  CHECK(Cv[0] == doctest::Approx(4.0));
  CHECK(Cv[1] == doctest::Approx(7.0));
  CHECK(Cv[2] == doctest::Approx(12.0));
  CHECK(voigt_dot(v, Cv) == doctest::Approx(4.0 + 14.0 + 36.0));
}

TEST_CASE("State::finite flags non-finite entries") {
  State s = State::zero(4);
  CHECK(s.finite());
  s.theta[2] = std::nan("");
  CHECK(!s.finite());
}
