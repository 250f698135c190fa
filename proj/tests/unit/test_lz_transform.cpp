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
#include <string>

#include "../oracles.hpp"
#include "lzspa/lz_transform.hpp"
#include "lzspa/random.hpp"

using namespace lzspa;

namespace {

Sequence random_seq(Rng& rng, std::size_t n, std::size_t a) {
  Sequence s{Alphabet(a)};
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<Symbol>(rng.below(a)));
  return s;
}

// Counts-free Dirichlet used to drive the per-node SPA path.
SpaFamily live_dirichlet(double gamma) {
  return SpaFamily::custom("live-dirichlet", [gamma](std::size_t a) -> std::unique_ptr<Spa> {
    return std::make_unique<DirichletSpa>(a, gamma);
  });
}

}  // namespace

TEST_CASE("log loss decomposes into inner-SPA losses on node subsequences") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t a = 2 + rng.below(4);
    const double gamma = 0.1 + rng.uniform01();
    const Sequence seq = random_seq(rng, 100 + rng.below(3000), a);
    LZTransformSpa m(Alphabet(a), SpaFamily::dirichlet(gamma));
    const double total = m.evaluate_log_loss(seq).total_bits;

    std::string s;
    for (Symbol x : seq.tokens()) s.push_back(static_cast<char>('0' + x));
    double sum = 0.0;
    for (const auto& [ctx, y] : oracle::lz78_subsequences(s)) {
      std::vector<std::uint64_t> counts(a, 0);
      for (char c : y) ++counts[static_cast<std::size_t>(c - '0')];
      sum += oracle::dirichlet_sequence_bits(counts, gamma);
    }
    CHECK(std::fabs(total - sum) <= 1e-9 * std::max(1.0, total));
    CHECK(m.tree().node_count() == 1);  // evaluation from an empty model left it empty
  }
}

TEST_CASE("custom inner SPAs give the same predictions as count-based ones") {
  Rng rng(9);
  const Sequence seq = random_seq(rng, 5000, 3);
  LZTransformSpa fast(Alphabet(3), SpaFamily::dirichlet(0.4));
  LZTransformSpa live(Alphabet(3), live_dirichlet(0.4));
  for (Symbol s : seq.tokens()) {
    const Pmf p = fast.next_dist();
    const Pmf q = live.next_dist();
    for (std::size_t i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-14));
    fast.observe(s);
    live.observe(s);
  }
  CHECK(fast.tree() == live.tree());
}

TEST_CASE("snapshot and restore undo growth exactly") {
  Rng rng(12);
  for (const SpaFamily& fam : {SpaFamily::dirichlet(0.5), live_dirichlet(0.5)}) {
    LZTransformSpa m(Alphabet(4), fam);
    m.train(random_seq(rng, 2000, 4));
    for (const Sequence tmp = random_seq(rng, 37, 4); Symbol s : tmp.tokens()) m.observe(s);
    const LZ78Tree tree = m.tree();
    const ParseCursor cursor = m.cursor();
    const Pmf before = m.next_dist();
    m.snapshot();
    for (const Sequence tmp = random_seq(rng, 500, 4); Symbol s : tmp.tokens()) m.observe(s);
    m.snapshot();
    for (const Sequence tmp = random_seq(rng, 50, 4); Symbol s : tmp.tokens()) m.observe(s);
    m.release();
    m.restore();
    CHECK(m.tree() == tree);
    CHECK(m.cursor() == cursor);
    CHECK(m.next_dist() == before);
  }
}

TEST_CASE("sequential observation equals training on the concatenation") {
  Rng rng(2);
  const Sequence a = random_seq(rng, 700, 2);
  const Sequence b = random_seq(rng, 900, 2);
  LZTransformSpa one(Alphabet(2), SpaFamily::dirichlet(0.5));
  one.train(a.concat(b));
  LZTransformSpa two(Alphabet(2), SpaFamily::dirichlet(0.5));
  for (Symbol s : a.tokens()) two.observe(s);
  for (Symbol s : b.tokens()) two.observe(s);
  CHECK(one.tree() == two.tree());

  // Separate training sequences restart at the root.
  LZTransformSpa split(Alphabet(2), SpaFamily::dirichlet(0.5));
  const std::vector<Sequence> parts = {a, b};
  split.train(parts);
  LZTransformSpa manual(Alphabet(2), SpaFamily::dirichlet(0.5));
  for (Symbol s : a.tokens()) manual.observe(s);
  manual.begin_sequence();
  for (Symbol s : b.tokens()) manual.observe(s);
  CHECK(split.tree() == manual.tree());
}

TEST_CASE("epochs replay the data in order") {
  const Sequence seq = Sequence::from_digits(Alphabet(2), "0110100110010110");
  LZTransformSpa twice(Alphabet(2), SpaFamily::dirichlet(0.5));
  twice.train(seq, 2);
  LZTransformSpa manual(Alphabet(2), SpaFamily::dirichlet(0.5));
  manual.train(seq);
  manual.train(seq);
  CHECK(twice.tree() == manual.tree());
  CHECK(twice.epochs_trained() == 2);
  LZTransformSpa once(Alphabet(2), SpaFamily::dirichlet(0.5));
  once.train(seq);
  CHECK(twice.tree().node_count() >= once.tree().node_count());
}

TEST_CASE("frozen evaluation is pure and never grows the tree") {
  Rng rng(1);
  LZTransformSpa m(Alphabet(3), SpaFamily::dirichlet(0.2));
  m.train(random_seq(rng, 20000, 3));
  m.freeze();
  const auto hash = m.model_hash();
  const Sequence test = random_seq(rng, 5000, 3);
  const double l1 = m.evaluate_frozen(test).total_bits;
  const double l2 = m.evaluate_log_loss(test).total_bits;
  CHECK(l1 == l2);
  for (Symbol s : test.tokens()) m.observe(s);
  CHECK(m.model_hash() == hash);
  CHECK_THROWS_AS(m.train(test), std::logic_error);

  // Prediction always comes from the current node's counts.
  m.begin_sequence();
  for (const Sequence tmp = test.prefix(200); Symbol s : tmp.tokens()) {
    CHECK(m.next_dist() == m.dist_at(m.cursor().node));
    const ParseCursor next = m.advance(m.cursor(), s);
    m.observe(s);
    CHECK(m.cursor() == next);
  }
}

TEST_CASE("frozen traversal returns to the root at an unseen child") {
  LZTransformSpa m(Alphabet(2), SpaFamily::dirichlet(0.5));
  m.train(Sequence::from_digits(Alphabet(2), "00011001"));
  m.freeze();
  for (Symbol s : {0u, 1u}) m.observe(s);
  CHECK(m.tree().phrase(m.cursor().node) == std::vector<Symbol>{0, 1});
  m.observe(0);
  CHECK(m.cursor() == ParseCursor{});
}

TEST_CASE("set_gamma swaps the inner parameter without touching counts") {
  Rng rng(30);
  const Sequence seq = random_seq(rng, 3000, 2);
  LZTransformSpa a(Alphabet(2), SpaFamily::dirichlet(0.1));
  a.train(seq);
  LZTransformSpa b(Alphabet(2), SpaFamily::dirichlet(2.0));
  b.train(seq);
  a.set_gamma(2.0);
  a.freeze();
  b.freeze();
  const Sequence test = random_seq(rng, 500, 2);
  CHECK(a.evaluate_frozen(test).total_bits == doctest::Approx(b.evaluate_frozen(test).total_bits).epsilon(1e-12));
  LZTransformSpa u(Alphabet(2), SpaFamily::uniform());
  CHECK_THROWS_AS(u.set_gamma(1.0), std::logic_error);
}

TEST_CASE("uniform inner SPA gives one bit per binary symbol") {
  Rng rng(31);
  LZTransformSpa m(Alphabet(2), SpaFamily::uniform());
  const Sequence seq = random_seq(rng, 1000, 2);
  CHECK(m.evaluate_log_loss(seq).total_bits == doctest::Approx(1000.0));
}

TEST_CASE("complexity report accounts for every symbol") {
  Rng rng(32);
  LZTransformSpa m(Alphabet(2), SpaFamily::dirichlet(0.5));
  m.train(random_seq(rng, 100000, 2));
  const ComplexityReport r = m.complexity_report();
  CHECK(r.nodes == m.tree().node_count());
  CHECK(r.symbols == 100000);
  CHECK(r.linear_cost_total == doctest::Approx(100000.0));
  CHECK(r.unit_cost_total == doctest::Approx(static_cast<double>(r.nodes)));
  // Every phrase starts at the root; an unfinished tail adds one visit.
  CHECK(r.root_visits >= r.nodes - 1);
  CHECK(r.root_visits <= r.nodes);
  CHECK(r.nodes_over_n_per_log2n > 0.5);
  CHECK(r.nodes_over_n_per_log2n < 2.0);
  CHECK(r.memory_bytes >= r.nodes * sizeof(TreeNode));
}

TEST_CASE("reset rewinds a frozen model and clears a trainable one") {
  LZTransformSpa m(Alphabet(2), SpaFamily::dirichlet(0.5));
  m.train(Sequence::from_digits(Alphabet(2), "0001100101"));
  m.observe(0);
  m.reset();
  CHECK(m.tree().node_count() == 1);
  m.train(Sequence::from_digits(Alphabet(2), "0001100101"));
  m.freeze();
  m.observe(0);
  m.reset();
  CHECK(m.cursor() == ParseCursor{});
  CHECK(m.tree().node_count() > 1);
}

TEST_CASE("Dirichlet loss approaches mu_0 on iid data") {
  Rng rng(40);
  Sequence seq{Alphabet(3)};
  const std::vector<double> p = {0.6, 0.3, 0.1};
  for (int i = 0; i < 100000; ++i) seq.push_back(rng.sample(p));
  DirichletSpa spa(3, 0.5);
  const double gap = log_loss(spa, seq).per_symbol_bits - empirical_entropy_mu0(seq);
  CHECK(gap >= 0.0);
  CHECK(gap < 0.02);
}
