// Copyright 2026 The lzspa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <cmath>
#include <vector>

#include "../oracles.hpp"
#include "lzspa/random.hpp"
#include "lzspa/spa.hpp"
#include "lzspa/types.hpp"

using namespace lzspa;

TEST_CASE("alphabet rejects sizes below two and out-of-range symbols") {
  CHECK_THROWS_AS(Alphabet(1), AlphabetError);
  CHECK_THROWS_AS(Alphabet(0), AlphabetError);
  Alphabet a(3);
  CHECK(a.contains(2));
  CHECK_FALSE(a.contains(3));
  CHECK_THROWS_AS(a.check(3), AlphabetError);
  CHECK_THROWS_AS(Sequence(a, {0, 1, 3}), AlphabetError);
}

TEST_CASE("sequence views keep order and concatenation adds lengths") {
  const Sequence s = Sequence::from_digits(Alphabet(3), "0120210");
  CHECK(s.prefix(3).to_digits() == "012");
  CHECK(s.slice(2, 3).to_digits() == "202");
  CHECK_THROWS_AS(s.slice(5, 3), std::out_of_range);
  const Sequence t = Sequence::from_digits(Alphabet(3), "22");
  const Sequence u = s.concat(t);
  CHECK(u.size() == s.size() + t.size());
  CHECK(u.to_digits() == "012021022");
  CHECK_THROWS_AS(s.concat(Sequence(Alphabet(4))), AlphabetError);
}

TEST_CASE("mu_k matches a direct count and is non-increasing in k") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t a = 2 + rng.below(3);
    std::vector<Symbol> x(50 + rng.below(200));
    for (auto& v : x) v = static_cast<Symbol>(rng.below(a));
    const Sequence seq(Alphabet(a), x);
    double prev = INFINITY;
    for (std::size_t k = 0; k <= 2; ++k) {
      const double mu = markov_entropy_mu_k(seq, k);
      CHECK(mu == doctest::Approx(oracle::empirical_conditional_entropy(x, k)).epsilon(1e-12));
      CHECK(mu <= prev + 1e-12);
      prev = mu;
    }
    CHECK(empirical_entropy_mu0(seq) == doctest::Approx(markov_entropy_mu_k(seq, 0)).epsilon(1e-12));
  }
}

TEST_CASE("entropy helpers") {
  CHECK(surprisal_bits(0.25) == doctest::Approx(2.0));
  CHECK(std::isinf(surprisal_bits(0.0)));
  const std::vector<std::uint64_t> c = {1, 1, 2};
  CHECK(entropy_of_counts(c) == doctest::Approx(1.5));
  CHECK_THROWS(markov_entropy_mu_k(Sequence::from_digits(Alphabet(2), "01"), 2));
}

TEST_CASE("Dirichlet SPA matches hand-computed values") {
  struct Point {
    std::vector<std::uint64_t> counts;
    double gamma;
    std::vector<double> expected;
  };
  // (N(a) + g) / (N + A g), worked out by hand.
  const std::vector<Point> points = {
      {{0, 0}, 0.5, {0.5, 0.5}},
      {{3, 1}, 0.5, {3.5 / 5.0, 1.5 / 5.0}},
      {{2, 0, 1}, 1.0, {3.0 / 6.0, 1.0 / 6.0, 2.0 / 6.0}},
      {{5, 0}, 0.1, {5.1 / 5.2, 0.1 / 5.2}},
      {{1, 2, 3, 4}, 0.25, {1.25 / 11.0, 2.25 / 11.0, 3.25 / 11.0, 4.25 / 11.0}},
      {{0, 7, 0}, 2.0, {2.0 / 13.0, 9.0 / 13.0, 2.0 / 13.0}},
      {{10, 10}, 5.0, {0.5, 0.5}},
  };
  for (const auto& p : points) {
    DirichletSpa spa(p.counts.size(), p.gamma);
    for (std::size_t a = 0; a < p.counts.size(); ++a) spa.observe_n(static_cast<Symbol>(a), p.counts[a]);
    const Pmf q = spa.next_dist();
    for (std::size_t a = 0; a < p.counts.size(); ++a) {
      CHECK(std::fabs(q[a] - p.expected[a]) <= 1e-12);
      CHECK(std::fabs(spa.prob(static_cast<Symbol>(a)) - p.expected[a]) <= 1e-12);
      CHECK(q[a] > 0.0);
    }
    CHECK(q.is_valid(1e-12));
  }
}

TEST_CASE("Dirichlet SPA rejects bad parameters") {
  CHECK_THROWS_AS(DirichletSpa(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DirichletSpa(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(DirichletSpa(1, 0.5), AlphabetError);
  DirichletSpa spa(2, 0.5);
  CHECK_THROWS_AS(spa.observe(2), AlphabetError);
  CHECK_THROWS_AS(spa.restore(), std::logic_error);
}

TEST_CASE("Dirichlet sequential loss equals the closed-form mixture probability") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t a = 2 + rng.below(5);
    const double gamma = 0.05 + rng.uniform01() * 3.0;
    Sequence seq{Alphabet(a)};
    std::vector<std::uint64_t> counts(a, 0);
    for (int i = 0; i < 300; ++i) {
      const Symbol s = static_cast<Symbol>(rng.below(a));
      seq.push_back(s);
      ++counts[s];
    }
    DirichletSpa spa(a, gamma);
    const LogLossReport r = log_loss(spa, seq);
    CHECK(r.total_bits == doctest::Approx(oracle::dirichlet_sequence_bits(counts, gamma)).epsilon(1e-10));
    CHECK(r.per_symbol_bits == doctest::Approx(r.total_bits / 300.0));
    CHECK(spa.total() == 0);
  }
}

TEST_CASE("snapshot and restore nest and round-trip exactly") {
  DirichletSpa spa(3, 0.5);
  spa.observe(0);
  const Pmf before = spa.next_dist();
  spa.snapshot();
  spa.observe(1);
  spa.snapshot();
  spa.observe(2);
  spa.restore();
  CHECK(spa.counts() == std::vector<std::uint64_t>{1, 1, 0});
  spa.restore();
  CHECK(spa.next_dist() == before);
  spa.snapshot();
  spa.observe(2);
  spa.release();
  CHECK(spa.total() == 2);
}

TEST_CASE("uniform SPA") {
  UniformSpa u(4);
  CHECK(u.prob(3) == 0.25);
  u.observe(1);
  CHECK(u.next_dist() == Pmf::uniform(4));
  CHECK_THROWS_AS(u.observe(4), AlphabetError);
  const Sequence seq = Sequence::from_digits(Alphabet(4), "0123");
  CHECK(log_loss(u, seq).total_bits == doctest::Approx(8.0));
}

TEST_CASE("log loss of a zero-probability event is infinite") {
  auto family = SpaFamily::custom("point", [](std::size_t a) -> std::unique_ptr<Spa> {
    struct Point final : Spa {
      std::size_t a;
      explicit Point(std::size_t size) : a(size) {}
      std::size_t alphabet_size() const override { return a; }
      Pmf next_dist() const override { return Pmf::point_mass(a, 0); }
      void observe(Symbol) override {}
      void reset() override {}
      void snapshot() override {}
      void restore() override {}
      void release() override {}
      std::unique_ptr<Spa> clone() const override { return std::make_unique<Point>(a); }
    };
    return std::make_unique<Point>(a);
  });
  auto spa = family.make(2);
  CHECK(std::isinf(log_loss(*spa, Sequence::from_digits(Alphabet(2), "01")).total_bits));
}

TEST_CASE("Rng draws are reproducible and sample follows the pmf") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(1);
  const std::vector<double> p = {0.1, 0.0, 0.6, 0.3};
  std::vector<double> hist(4, 0.0);
  for (int i = 0; i < 100000; ++i) hist[r.sample(p)] += 1e-5;
  CHECK(hist[1] == 0.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(hist[i] == doctest::Approx(p[i]).epsilon(0.03));
}
