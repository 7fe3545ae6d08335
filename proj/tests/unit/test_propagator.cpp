#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "quenchlab/analysis.hpp"
#include "quenchlab/errors.hpp"
#include "quenchlab/propagator.hpp"
#include "quenchlab/units.hpp"

using namespace quenchlab;
using units::mhz_to_rad_per_ns;

namespace {

std::shared_ptr<const HamiltonianProfiles> uniform_profiles(int L, double J, double U, double Omega = 0.0) {
  return std::make_shared<const HamiltonianProfiles>(HamiltonianProfiles{
      CouplingProfile::uniform(L, J), AnharmonicityProfile::uniform(L, U), TransverseProfile::uniform(L, Omega)});
}

Segment segment(double duration, std::shared_ptr<const HamiltonianProfiles> p) {
  Segment s;
  s.duration = duration;
  s.profiles = std::move(p);
  return s;
}

SparseOperator from_dense(const BasisPtr& basis, const Eigen::MatrixXcd& m) {
  SparseOperator::Matrix s = m.sparseView();
  return SparseOperator(basis, std::move(s), true);
}

// Dense reference for the substep schemes: same node placement, exact
// exponentials.
Eigen::VectorXcd dense_driven(const Eigen::MatrixXcd& Hs, const Eigen::VectorXd& d, double nu, double origin,
                              Eigen::VectorXcd v, double t0, double t1, int steps, DriveIntegrator scheme) {
  const double h = (t1 - t0) / steps;
  const Eigen::MatrixXcd D = d.cast<cplx>().asDiagonal();
  auto f = [&](double t) { return std::cos(nu * (t - origin)); };
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    if (scheme == DriveIntegrator::kMidpoint) {
      v = oracle::dense_evolve(Hs + f(t + 0.5 * h) * D, v, h);
    } else {
      const double r = std::sqrt(3.0) / 6.0;
      const double a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
      const double a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;
      const double f1 = f(t + (0.5 - r) * h), f2 = f(t + (0.5 + r) * h);
      v = oracle::dense_evolve(0.5 * Hs + (a2 * f1 + a1 * f2) * D, v, h);
      v = oracle::dense_evolve(0.5 * Hs + (a1 * f1 + a2 * f2) * D, v, h);
    }
  }
  return v;
}

}  // namespace

TEST_CASE("static evolution basics") {
  auto b = build_basis(2, 2);
  const double J = 0.3;
  const auto H = build_hopping(b, CouplingProfile::uniform(2, J));
  auto psi = parse_product_state("10", b);
  CHECK((evolve_static(H, psi, 0.0).amplitudes() - psi.amplitudes()).norm() == 0.0);
  for (double t : {0.1, 1.0, 2.5, 7.3, 40.0}) {
    auto out = evolve_static(H, psi, t);
    CHECK(level_population(out, 0, 1) == doctest::Approx(std::pow(std::cos(J * t), 2)).epsilon(1e-12));
    CHECK(level_population(out, 1, 1) == doctest::Approx(std::pow(std::sin(J * t), 2)).epsilon(1e-12));
  }
}

TEST_CASE("static evolution matches dense propagation") {
  std::mt19937_64 rng(21);
  auto b = build_basis(3, 3);
  for (int trial = 0; trial < 3; ++trial) {
    const Eigen::MatrixXcd Hd = oracle::random_hermitian(b->dim(), rng);
    const auto H = from_dense(b, Hd);
    const auto psi = oracle::random_state(b, rng);
    for (double t : {0.3, -1.7, 12.0}) {
      auto out = evolve_static(H, psi, t);
      CHECK((out.amplitudes() - oracle::dense_evolve(Hd, psi.amplitudes(), t)).norm() <= 1e-8);
      CHECK(std::abs(out.norm() - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("static evolution rejects bad input") {
  auto b = build_basis(2, 2);
  SparseOperator::Matrix m(4, 4);
  m.insert(0, 1) = 1.0;
  CHECK_THROWS_AS(evolve_static(SparseOperator(b, m, false), parse_product_state("00", b), 1.0), ArgumentError);
  const auto H = build_hopping(build_basis(2, 3), CouplingProfile::uniform(2, 1.0));
  CHECK_THROWS_AS(evolve_static(H, parse_product_state("00", b), 1.0), ArgumentError);
}

TEST_CASE("driven evolution") {
  std::mt19937_64 rng(31);
  const int L = 4;
  auto b = build_basis(L, 3);
  const auto p = uniform_profiles(L, 0.4, 1.3, 0.25);
  ModelOperators ops(b, p);
  const auto Hs = ops.static_hamiltonian(+1, +1, true);
  DriveSpec drive{staggered_odd_amplitudes(L, 2.0), 1.5, 0.37};
  const auto D = build_number_weighted(b, drive.eps);
  const auto psi = oracle::random_state(b, rng);

  SUBCASE("undriven limit equals static evolution") {
    DriveSpec off{std::vector<double>(L, 0.0), 1.5, 0.0};
    auto a = evolve_driven(Hs, build_number_weighted(b, off.eps), off, psi, 0.0, 5.0, 0.1);
    auto c = evolve_static(Hs, psi, 5.0);
    CHECK((a.amplitudes() - c.amplitudes()).norm() <= 1e-9);
  }
  SUBCASE("matches dense substep oracle") {
    for (auto scheme : {DriveIntegrator::kMidpoint, DriveIntegrator::kCommutatorFree4}) {
      const double T = drive.period();
      auto out = evolve_driven(Hs, D, drive, psi, 0.0, 3 * T, T / 16, scheme);
      auto ref = dense_driven(Hs.to_dense(), D.diagonal().real(), drive.nu, drive.phase_origin, psi.amplitudes(), 0.0,
                              3 * T, 48, scheme);
      CHECK((out.amplitudes() - ref).norm() <= 1e-8);
      CHECK(std::abs(out.norm() - 1.0) <= 1e-8);
    }
  }
  SUBCASE("fourth-order scheme converges to the exact time-ordered evolution") {
    const double T = drive.period();
    const auto Hd = Hs.to_dense();
    const Eigen::VectorXd d = D.diagonal().real();
    const auto fine = dense_driven(Hd, d, drive.nu, drive.phase_origin, psi.amplitudes(), 0.0, 2 * T, 2048,
                                   DriveIntegrator::kCommutatorFree4);
    auto err = [&](int n) {
      auto out = evolve_driven(Hs, D, drive, psi, 0.0, 2 * T, T / n, DriveIntegrator::kCommutatorFree4);
      return (out.amplitudes() - fine).norm();
    };
    const double e32 = err(32), e64 = err(64), e128 = err(128);
    CHECK(err(256) <= 1e-9);
    // Halving the step cuts the error by about 2^4.
    CHECK(std::log2(e32 / e64) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(std::log2(e64 / e128) == doctest::Approx(4.0).epsilon(0.1));
  }
  SUBCASE("backward evolution inverts forward evolution") {
    for (auto scheme : {DriveIntegrator::kMidpoint, DriveIntegrator::kCommutatorFree4}) {
      auto fwd = evolve_driven(Hs, D, drive, psi, 0.2, 4.1, 0.05, scheme);
      auto back = evolve_driven(Hs, D, drive, fwd, 4.1, 0.2, 0.05, scheme);
      CHECK((back.amplitudes() - psi.amplitudes()).norm() <= 1e-9);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(evolve_driven(Hs, D, drive, psi, 0.0, 1.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(evolve_driven(Hs, Hs, drive, psi, 0.0, 1.0, 0.1), ArgumentError);
  }
}

TEST_CASE("staggered odd amplitudes") {
  const auto e = staggered_odd_amplitudes(10, 2.0);
  const std::vector<double> want{2, 0, -2, 0, 2, 0, -2, 0, 2, 0};
  CHECK(e == want);
}

TEST_CASE("reverse_of") {
  auto p = uniform_profiles(3, 1.0, 1.0);
  Segment s = segment(5.0, p);
  auto r = reverse_of(s);
  CHECK(r.coupling_sign == -1);
  CHECK(r.transverse_sign == -1);
  CHECK(r.include_anharmonicity);
  CHECK(r.duration == 5.0);
  auto rr = reverse_of(r);
  CHECK(rr.coupling_sign == s.coupling_sign);
  CHECK(rr.transverse_sign == s.transverse_sign);

  Segment f = s;
  f.drive = DriveSpec{staggered_odd_amplitudes(3, mhz_to_rad_per_ns(213.6)), mhz_to_rad_per_ns(120.0), 0.0};
  DriveSpec back{staggered_odd_amplitudes(3, mhz_to_rad_per_ns(400.0)), mhz_to_rad_per_ns(120.0), 0.0};
  auto fr = reverse_of(f, back);
  CHECK(fr.coupling_sign == +1);
  CHECK(fr.drive->eps == back.eps);
}

TEST_CASE("protocol execution") {
  auto b = build_basis(4, 2);
  auto p = uniform_profiles(4, 0.5, 1.0);
  auto psi0 = parse_product_state("0110", b);

  SUBCASE("empty protocol") {
    Protocol proto;
    auto traj = run_protocol({proto.segments, Sampling::uniform(1.0), true}, psi0);
    REQUIRE(traj.times.size() == 1);
    CHECK(traj.times[0] == 0.0);
    CHECK((traj.states[0].amplitudes() - psi0.amplitudes()).norm() == 0.0);
  }
  SUBCASE("sampling schedule includes segment boundaries") {
    Protocol proto{{segment(2.5, p), segment(1.2, p)}, Sampling::uniform(1.0), false};
    auto traj = run_protocol(proto, psi0);
    const std::vector<double> want{0.0, 1.0, 2.0, 2.5, 3.0, 3.7};
    REQUIRE(traj.times.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(traj.times[i] == doctest::Approx(want[i]));
  }
  SUBCASE("two-level reversal is exact") {
    Segment fwd = segment(30.0, p);
    Protocol proto{{fwd, reverse_of(fwd)}, Sampling::uniform(5.0), true};
    auto traj = run_protocol(proto, psi0);
    CHECK(fidelity(traj.states.back(), psi0) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("single-particle reversal with three levels is exact") {
    auto b3 = build_basis(6, 3);
    auto p3 = uniform_profiles(6, 0.5, 1.4);
    auto one = parse_product_state("000100", b3);
    Segment fwd = segment(25.0, p3);
    Protocol proto{{fwd, reverse_of(fwd)}, Sampling::uniform(5.0), true};
    auto traj = run_protocol(proto, one);
    CHECK(std::abs(fidelity(traj.states.back(), one) - 1.0) <= 1e-8);
  }
  SUBCASE("stroboscopic sampling needs a drive") {
    Protocol proto{{segment(10.0, p)}, Sampling::stroboscopic(1), false};
    CHECK_THROWS_AS(run_protocol(proto, psi0), ArgumentError);
  }
}

TEST_CASE("full protocols agree with dense propagation") {
  std::mt19937_64 rng(41);
  for (int K = 2; K <= 3; ++K) {
    const int L = 4;
    auto b = build_basis(L, K);
    auto p = uniform_profiles(L, 0.6, 1.1, 0.3);
    const auto psi0 = oracle::random_state(b, rng);
    Segment fwd = segment(7.0, p);
    Segment bwd = reverse_of(fwd);
    bwd.duration = 4.0;
    Protocol proto{{fwd, bwd}, Sampling::uniform(1.5), true};
    auto traj = run_protocol(proto, psi0);

    const auto states = oracle::enumerate(L, K);
    const std::vector<double> J(L - 1, 0.6), U(L, 1.1), Om(L, 0.3);
    const Eigen::MatrixXcd H1 = oracle::dense_model(states, J, U, Om);
    const Eigen::MatrixXcd H2 = oracle::dense_model(states, std::vector<double>(L - 1, -0.6), U, std::vector<double>(L, -0.3));
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double t = traj.times[i];
      Eigen::VectorXcd ref = t <= 7.0 ? oracle::dense_evolve(H1, psi0.amplitudes(), t)
                                      : oracle::dense_evolve(H2, oracle::dense_evolve(H1, psi0.amplitudes(), 7.0), t - 7.0);
      CHECK((traj.states[i].amplitudes() - ref).norm() <= 1e-8);
    }
  }
}

TEST_CASE("conservation laws") {
  std::mt19937_64 rng(51);
  const int L = 6;
  auto b = build_basis(L, 3);
  auto p = std::make_shared<const HamiltonianProfiles>(HamiltonianProfiles{
      CouplingProfile::uniform(L, mhz_to_rad_per_ns(16.0)),
      AnharmonicityProfile{{1.33, 1.66, 1.32, 1.68, 1.33, 1.68}},
      TransverseProfile::uniform(L, 0.0)});
  auto psi0 = parse_product_state("010101", b);
  ModelOperators ops(b, p);
  const auto H = ops.static_hamiltonian(+1, +1, true);
  const auto N = build_total_number(b);
  auto expect = [](const SparseOperator& A, const StateVector& s) {
    Eigen::VectorXcd out(s.amplitudes().size());
    A.apply(s.amplitudes(), out);
    return s.amplitudes().dot(out).real();
  };
  Protocol proto{{segment(1000.0, p)}, Sampling::uniform(100.0), true};
  auto traj = run_protocol(proto, psi0);
  const double n0 = expect(N, psi0), e0 = expect(H, psi0);
  for (const auto& s : traj.states) {
    CHECK(std::abs(s.norm() - 1.0) <= 1e-8);
    CHECK(std::abs(expect(N, s) - n0) <= 1e-8);
    CHECK(std::abs(expect(H, s) - e0) <= 1e-8);
  }
}

TEST_CASE("echo curve equals the two-forward-evolution fidelity") {
  const int L = 5;
  auto b = build_basis(L, 3);
  auto p = uniform_profiles(L, 0.5, 1.9);
  auto psi0 = parse_product_state("01011", b);
  Segment fwd = segment(12.0, p);
  auto curve = run_echo_curve(fwd, reverse_of(fwd), psi0, Sampling::uniform(1.0));
  REQUIRE(curve.times.size() == 13);
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    const double t = curve.times[i];
    Segment f = fwd, r = reverse_of(fwd);
    f.duration = t;
    r.duration = t;
    Protocol proto{{f, r}, Sampling::uniform(100.0), true};
    auto traj = run_protocol(proto, psi0);
    CHECK(std::abs(fidelity(traj.states.back(), psi0) - curve.echo[i]) <= 1e-8);
  }
}

TEST_CASE("sector-split propagation matches full-space propagation") {
  const int L = 5;
  auto b = build_basis(L, 3);
  auto p = uniform_profiles(L, 0.7, 2.1);
  std::mt19937_64 rng(77);
  const StateVector psi0 = oracle::random_state(b, rng);
  Segment fwd = segment(0.0, p);
  const double nu = 9.0;
  fwd.drive = DriveSpec{staggered_odd_amplitudes(L, 4.0), nu, 0.0};
  fwd.duration = 3 * (2.0 * std::numbers::pi / nu);
  Segment still = segment(1.3, p);
  PropagationOptions split, whole;
  whole.split_sectors = false;
  auto sampler = [](double, const StateVector& s) {
    ObservableRecord r;
    r.entropy = half_chain_entropy(s, 2);
    return r;
  };

  Protocol proto{{still, reverse_of(still)}, Sampling::uniform(0.4), true};
  auto a = run_protocol(proto, psi0, sampler, split);
  auto c = run_protocol(proto, psi0, sampler, whole);
  REQUIRE(a.states.size() == c.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    CHECK((a.states[i].amplitudes() - c.states[i].amplitudes()).norm() <= 1e-9);
    CHECK(std::abs(*a.records[i].entropy - *c.records[i].entropy) <= 1e-9);
  }

  Protocol driven{{fwd, reverse_of(fwd)}, Sampling::stroboscopic(1), true};
  auto d1 = run_protocol(driven, psi0, {}, split);
  auto d2 = run_protocol(driven, psi0, {}, whole);
  REQUIRE(d1.states.size() == d2.states.size());
  for (std::size_t i = 0; i < d1.states.size(); ++i) {
    CHECK((d1.states[i].amplitudes() - d2.states[i].amplitudes()).norm() <= 1e-9);
  }

  auto e1 = run_echo_curve(fwd, reverse_of(fwd), psi0, Sampling::stroboscopic(1), {}, split);
  auto e2 = run_echo_curve(fwd, reverse_of(fwd), psi0, Sampling::stroboscopic(1), {}, whole);
  REQUIRE(e1.echo.size() == e2.echo.size());
  for (std::size_t i = 0; i < e1.echo.size(); ++i) CHECK(std::abs(e1.echo[i] - e2.echo[i]) <= 1e-9);

  // Block threading does not change results.
  PropagationOptions threaded;
  threaded.threads = 3;
  auto e3 = run_echo_curve(fwd, reverse_of(fwd), psi0, Sampling::stroboscopic(1), {}, threaded);
  CHECK(e3.echo == e1.echo);
  auto d3 = run_protocol(driven, psi0, {}, threaded);
  CHECK(d3.states.back().amplitudes() == d1.states.back().amplitudes());
}
