#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "quenchlab/analysis.hpp"
#include "quenchlab/errors.hpp"

using namespace quenchlab;

TEST_CASE("fidelity") {
  std::mt19937_64 rng(1);
  auto b = build_basis(3, 3);
  auto a = oracle::random_state(b, rng);
  auto c = oracle::random_state(b, rng);
  CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fidelity(a, c) == doctest::Approx(fidelity(c, a)).epsilon(1e-14));
  CHECK(fidelity(a, c) >= 0.0);
  CHECK(fidelity(a, c) < 1.0);
  auto phased = StateVector(b, a.amplitudes() * std::polar(1.0, 0.7));
  CHECK(fidelity(a, phased) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fidelity(StateVector::basis_state(b, 0), StateVector::basis_state(b, 1)) == 0.0);

  SUBCASE("auto-embedding of a two-level state") {
    auto two = parse_product_state("0+1", build_basis(3, 2));
    auto three = parse_product_state("0+1", b);
    CHECK(fidelity(two, three) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fidelity(three, two) == doctest::Approx(1.0).epsilon(1e-14));
    auto sector = parse_product_state("011", build_basis(3, 3, 2));
    CHECK(fidelity(sector, parse_product_state("011", build_basis(3, 2))) == doctest::Approx(1.0));
    CHECK_THROWS_AS(fidelity(a, parse_product_state("0000", build_basis(4, 3))), ArgumentError);
  }
}

TEST_CASE("populations") {
  auto b = build_basis(2, 2);
  auto psi = parse_product_state("01", b);
  CHECK(level_population(psi, 1, 1) == 1.0);
  CHECK(level_population(psi, 0, 1) == 0.0);
  CHECK_THROWS_AS(level_population(psi, 2, 0), ArgumentError);
  CHECK_THROWS_AS(level_population(psi, 0, 2), ArgumentError);

  auto neel = parse_product_state("0101010101", build_basis(10, 3));
  double p2 = 0.0;
  for (const auto& site : level_populations(neel)) p2 += site[2];
  CHECK(p2 == 0.0);

  std::mt19937_64 rng(2);
  auto r = oracle::random_state(build_basis(4, 3), rng);
  const auto pops = level_populations(r);
  for (int j = 0; j < 4; ++j) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      CHECK(pops[j][k] >= 0.0);
      CHECK(pops[j][k] == doctest::Approx(level_population(r, j, k)).epsilon(1e-14));
      s += pops[j][k];
    }
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("projected Pauli expectations") {
  auto b = build_basis(3, 3);
  auto plus = parse_product_state("+02", b);
  CHECK(pauli_expectation(plus, 0, PauliAxis::kX) == doctest::Approx(1.0));
  CHECK(std::abs(pauli_expectation(plus, 0, PauliAxis::kY)) < 1e-15);
  CHECK(std::abs(pauli_expectation(plus, 0, PauliAxis::kZ)) < 1e-15);
  CHECK(pauli_expectation(plus, 1, PauliAxis::kZ) == doctest::Approx(1.0).epsilon(1e-14));
  for (auto axis : {PauliAxis::kX, PauliAxis::kY, PauliAxis::kZ}) CHECK(pauli_expectation(plus, 2, axis) == 0.0);
  CHECK_THROWS_AS(pauli_expectation(plus, 3, PauliAxis::kX), ArgumentError);

  // Equal incoherent mixture on one site via entanglement with a neighbour.
  auto b2 = build_basis(2, 2);
  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell[1] = bell[2] = 1.0 / std::sqrt(2.0);
  auto s = StateVector(b2, bell);
  CHECK(std::abs(pauli_expectation(s, 0, PauliAxis::kZ)) < 1e-15);
  CHECK(std::abs(pauli_expectation(s, 0, PauliAxis::kX)) < 1e-15);

  // <sy> sign: (|0> + i|1>)/sqrt(2) has <sy> = +1.
  std::vector<std::array<cplx, 2>> pairs{{cplx(1.0), cplx(0.0, 1.0)}};
  auto y = product_state(pairs, build_basis(1, 3));
  CHECK(pauli_expectation(y, 0, PauliAxis::kY) == doctest::Approx(1.0));

  // Against explicit projected Pauli matrices on a random state.
  std::mt19937_64 rng(4);
  auto basis = build_basis(3, 3);
  auto r = oracle::random_state(basis, rng);
  const auto states = oracle::enumerate(3, 3);
  for (int j = 0; j < 3; ++j) {
    Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(27, 27), sy = sx, sz = sx;
    for (int c = 0; c < 27; ++c) {
      for (int rr = 0; rr < 27; ++rr) {
        auto a = states[rr], bb = states[c];
        bool others = true;
        for (int k = 0; k < 3; ++k) others = others && (k == j || a[k] == bb[k]);
        if (!others) continue;
        if (a[j] == 1 && bb[j] == 0) { sx(rr, c) = 1.0; sy(rr, c) = cplx(0, 1); }
        if (a[j] == 0 && bb[j] == 1) { sx(rr, c) = 1.0; sy(rr, c) = cplx(0, -1); }
        if (rr == c && a[j] == 0) sz(rr, c) = 1.0;
        if (rr == c && a[j] == 1) sz(rr, c) = -1.0;
      }
    }
    const auto& v = r.amplitudes();
    const auto all = pauli_expectations(r);
    CHECK(all[j][0] == doctest::Approx(v.dot(sx * v).real()).epsilon(1e-12));
    CHECK(all[j][1] == doctest::Approx(v.dot(sy * v).real()).epsilon(1e-12));
    CHECK(all[j][2] == doctest::Approx(v.dot(sz * v).real()).epsilon(1e-12));
  }
}

TEST_CASE("anharmonicity expectation") {
  CHECK(anharmonicity_expectation(parse_product_state("+1+0", build_basis(4, 3))) == 0.0);
  CHECK(anharmonicity_expectation(parse_product_state("0200", build_basis(4, 3))) == 2.0);
  auto b = build_basis(3, 6, 5);
  CHECK(anharmonicity_expectation(StateVector::basis_state(b, b->index_of(Occupation{0, 5, 0}))) == 20.0);
}

TEST_CASE("half-chain entropy") {
  auto b = build_basis(4, 3);
  CHECK(half_chain_entropy(parse_product_state("+1+0", b), 2) < 1e-12);
  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell[1] = bell[2] = 1.0 / std::sqrt(2.0);
  CHECK(half_chain_entropy(StateVector(build_basis(2, 2), bell), 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(half_chain_entropy(parse_product_state("0000", b), 0), ArgumentError);
  CHECK_THROWS_AS(half_chain_entropy(parse_product_state("0000", b), 4), ArgumentError);

  std::mt19937_64 rng(9);
  auto r = oracle::random_state(b, rng);
  const double s = half_chain_entropy(r, 2);
  CHECK(s <= 2 * std::log(3.0));
  CHECK(half_chain_entropy(StateVector(b, r.amplitudes() * std::polar(1.0, 1.1)), 2) == doctest::Approx(s).epsilon(1e-12));

  // Reduced density matrix oracle on an uneven cut.
  Eigen::MatrixXcd m(3, 27);
  for (int i = 0; i < 81; ++i) m(i / 27, i % 27) = r.amplitudes()[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m * m.adjoint());
  double ref = 0.0;
  for (int k = 0; k < 3; ++k) ref -= es.eigenvalues()[k] * std::log(es.eigenvalues()[k]);
  CHECK(half_chain_entropy(r, 1) == doctest::Approx(ref).epsilon(1e-12));

  // Sector states are expanded internally.
  auto sb = build_basis(4, 3, 2);
  auto sr = oracle::random_state(sb, rng);
  CHECK(half_chain_entropy(sr, 2) == doctest::Approx(half_chain_entropy(embed_state(sr, b), 2)).epsilon(1e-12));
}

TEST_CASE("Page estimate") {
  CHECK(page_entropy(10, 5, 2) == doctest::Approx((10 * std::log(2.0) - 1) / 2).epsilon(1e-14));
  CHECK(page_entropy(10, 5, 2) == doctest::Approx(2.9657).epsilon(1e-4));
}

TEST_CASE("sector spectrum") {
  SUBCASE("two-site closed form") {
    const double J = 0.7, U = 3.1;
    HamiltonianProfiles p{CouplingProfile::uniform(2, J), AnharmonicityProfile::uniform(2, U), TransverseProfile::uniform(2, 0.0)};
    auto rep = sector_spectrum(2, 2, 3, p);
    REQUIRE(rep.eigenvalues.size() == 3);
    std::vector<double> want{-U, (-U - std::sqrt(U * U + 16 * J * J)) / 2, (-U + std::sqrt(U * U + 16 * J * J)) / 2};
    std::sort(want.begin(), want.end());
    for (int k = 0; k < 3; ++k) CHECK(std::abs(rep.eigenvalues[k] - want[k]) <= 1e-10 * std::abs(want[k]));
  }
  SUBCASE("matches dense brute force") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int L = 2; L <= 4; ++L) {
      std::vector<double> J(L - 1), U(L);
      for (auto& x : J) x = u(rng);
      for (auto& x : U) x = u(rng);
      HamiltonianProfiles p{{J}, {U}, TransverseProfile::uniform(L, 0.0)};
      const int N = 3, K = 4;
      auto rep = sector_spectrum(L, N, K, p);
      const auto states = oracle::enumerate(L, K, N);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::dense_model(states, J, U, {}));
      REQUIRE(rep.eigenvalues.size() == states.size());
      for (std::size_t k = 0; k < states.size(); ++k) {
        CHECK(std::abs(rep.eigenvalues[k] - es.eigenvalues()[k]) <= 1e-10 * std::max(1.0, std::abs(es.eigenvalues()[k])));
        CHECK(rep.anharmonicity[k] >= -1e-12);
        CHECK(rep.anharmonicity[k] <= N * (N - 1) + 1e-12);
      }
      CHECK(std::is_sorted(rep.eigenvalues.begin(), rep.eigenvalues.end()));
    }
  }
  SUBCASE("band structure at large U/J") {
    const double J = 1.0, U = 30.0;
    HamiltonianProfiles p{CouplingProfile::uniform(6, J), AnharmonicityProfile::uniform(6, U), TransverseProfile::uniform(6, 0.0)};
    auto rep = sector_spectrum(6, 3, 4, p);
    REQUIRE(rep.bands.size() == 3);  // A in {0, 2, 6} for three particles
    CHECK(rep.bands[0].anharmonicity == 0);
    CHECK(rep.bands[2].anharmonicity == 6);
    // Bands sit near -U A / 2, so the A = 0 band is on top, separated by U.
    for (const auto& band : rep.bands) CHECK(band.center == doctest::Approx(-U * band.anharmonicity / 2.0).epsilon(0.05 * U));
    CHECK(rep.bands[0].center - rep.bands[1].center == doctest::Approx(U).epsilon(0.1));
    for (bool a : rep.ambiguous) CHECK_FALSE(a);
  }
  SUBCASE("errors") {
    HamiltonianProfiles p{CouplingProfile::uniform(3, 1.0), AnharmonicityProfile::uniform(3, 1.0), TransverseProfile::uniform(3, 1.0)};
    CHECK_THROWS_AS(sector_spectrum(3, 1, 2, p), UsageError);
    p.transverse = TransverseProfile::uniform(10, 0.0);
    p.coupling = CouplingProfile::uniform(10, 1.0);
    p.anharmonicity = AnharmonicityProfile::uniform(10, 1.0);
    CHECK_THROWS_AS(sector_spectrum(10, 5, 6, p, 1000), ResourceError);
  }
}

TEST_CASE("dominant frequency") {
  std::vector<double> x;
  const double dt = 0.1;
  for (int i = 0; i <= 1000; ++i) x.push_back(0.3 + std::cos(2 * std::numbers::pi * 0.240 * i * dt));
  auto peak = dominant_frequency(x, dt);
  REQUIRE(peak.found);
  CHECK(std::abs(peak.frequency_mhz - 240.0) <= peak.resolution_mhz);
  CHECK(peak.resolution_mhz == doctest::Approx(1e3 / (1001 * dt)));

  std::vector<double> flat(64, 0.25);
  CHECK_FALSE(dominant_frequency(flat, 1.0).found);
  CHECK_THROWS_AS(dominant_frequency(std::vector<double>(15, 1.0), 1.0), ArgumentError);
  CHECK_THROWS_AS(dominant_frequency(flat, 0.0), ArgumentError);
}
