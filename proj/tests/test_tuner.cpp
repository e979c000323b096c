#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <stdexcept>

#include "cctune/tuner.hpp"
#include "helpers.hpp"

using namespace cctune;
using cctune::test::affine_params;
using cctune::test::overhead_params;

namespace {
constexpr double kRel = 1e-12;

// Deliberately separate re-derivation of the candidate grid and the argmin,
// used as the optimizer's oracle.
SegmentChoice scan_oracle(BroadcastStrategy strategy, const PLogPParams& params,
                          int nprocs, Bytes m, Bytes base) {
  std::set<Bytes> grid;
  for (Bytes p = std::bit_ceil<std::uint64_t>(base); p <= m; p <<= 1) grid.insert(p);
  for (const GapEntry& e : params.gaps.entries()) {
    if (e.size <= m) grid.insert(e.size);
  }
  grid.insert(m);
  SegmentChoice best{0, 0.0};
  for (Bytes s : grid) {  // std::set iterates ascending, so ties keep the larger s
    const double t = predict_broadcast(strategy, params, nprocs, m, s).time;
    if (best.segment_size == 0 || t <= best.time) best = {s, t};
  }
  return best;
}
}  // namespace

TEST_CASE("the candidate grid unions powers of two, table samples, and m") {
  const std::vector<Bytes> grid = segment_candidates(affine_params(), 1000, 4);
  const std::vector<Bytes> expected = {1,  4,   8,   16,  32,  64,
                                       128, 250, 256, 500, 512, 1000};
  CHECK(grid == expected);

  CHECK(segment_candidates(affine_params(), 4, 4) == std::vector<Bytes>{1, 4});
  CHECK_THROWS_AS(segment_candidates(affine_params(), 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(segment_candidates(affine_params(), 100, 0), std::invalid_argument);
}

TEST_CASE("optimize_segment finds the documented optima") {
  const PLogPParams p = affine_params();

  // Segmented chain, P=4, m=1000: s=250 and s=500 both cost 390 us; the
  // tie-break picks the larger segment.
  const SegmentChoice chain = optimize_segment(BroadcastStrategy::SegmentedChain, p, 4, 1000);
  CHECK(chain.time <= 3.9e-4 * (1 + kRel));
  CHECK(chain.time == doctest::Approx(3.9e-4).epsilon(kRel));
  CHECK(chain.segment_size == 500);

  // A message of one datatype cannot be split.
  const SegmentChoice tiny = optimize_segment(BroadcastStrategy::SegmentedChain, p, 4, 4);
  CHECK(tiny.segment_size == 4);
  CHECK(tiny.time ==
        doctest::Approx(predict_broadcast(BroadcastStrategy::Chain, p, 4, 4).time)
            .epsilon(kRel));

  // Constant gap: every split adds whole extra gaps, so s = m wins.
  const PLogPParams flat_gap(5e-5, GapTable({{1, 1e-4}}), "constant-gap");
  for (BroadcastStrategy s :
       {BroadcastStrategy::SegmentedFlatTree, BroadcastStrategy::SegmentedChain,
        BroadcastStrategy::SegmentedBinomialTree}) {
    CHECK(optimize_segment(s, flat_gap, 4, 60000).segment_size == 60000);
  }

  CHECK_THROWS_AS(optimize_segment(BroadcastStrategy::Chain, p, 4, 1000),
                  std::invalid_argument);
}

TEST_CASE("optimize_segment matches an exhaustive oracle scan") {
  std::mt19937_64 rng(20260815);
  std::uniform_real_distribution<double> overhead_dist(1e-6, 2e-4);
  std::uniform_real_distribution<double> bw_dist(1e6, 1e9);
  std::uniform_real_distribution<double> lat_dist(1e-6, 2e-4);
  std::uniform_int_distribution<int> nprocs_dist(2, 48);
  std::uniform_int_distribution<Bytes> size_dist(1, 1 << 20);
  std::uniform_int_distribution<int> strat_dist(0, 2);
  const BroadcastStrategy segmented[] = {BroadcastStrategy::SegmentedFlatTree,
                                         BroadcastStrategy::SegmentedChain,
                                         BroadcastStrategy::SegmentedBinomialTree};

  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Bytes> samples;
    std::uniform_int_distribution<int> count_dist(0, 6);
    for (int i = count_dist(rng); i > 0; --i) samples.push_back(size_dist(rng));
    const PLogPParams params =
        synth_params(overhead_dist(rng), bw_dist(rng), lat_dist(rng), samples);
    const int P = nprocs_dist(rng);
    const Bytes m = size_dist(rng);
    const BroadcastStrategy strategy = segmented[strat_dist(rng)];

    const SegmentChoice got = optimize_segment(strategy, params, P, m);
    const SegmentChoice want = scan_oracle(strategy, params, P, m, kDefaultBaseDatatype);
    CHECK(got.segment_size == want.segment_size);
    CHECK(got.time == want.time);
  }
}

TEST_CASE("ranking order and tie-breaks") {
  Prediction a;
  a.strategy = BroadcastStrategy::BinomialTree;
  a.time = 1.0;
  Prediction b = a;
  b.time = 2.0;
  CHECK(prediction_order(a, b));
  CHECK_FALSE(prediction_order(b, a));

  b.time = 1.0;
  b.strategy = BroadcastStrategy::SegmentedBinomialTree;
  CHECK(prediction_order(a, b));  // equal time: earlier enumerator wins

  Prediction c = a;
  c.strategy = BroadcastStrategy::SegmentedChain;
  c.segment = SegmentSpec{250, 4};
  Prediction d = c;
  d.segment = SegmentSpec{500, 2};
  CHECK(prediction_order(d, c));  // equal time and strategy: larger segment wins
}

TEST_CASE("select_best matches the documented examples") {
  const PLogPParams p = affine_params();

  const TuneResult small = select_best_broadcast(p, 4, 1000, kAllBroadcastStrategies);
  CHECK(std::get<BroadcastStrategy>(small.best().strategy) ==
        BroadcastStrategy::BinomialTree);
  CHECK(small.best().time == doctest::Approx(3.0e-4).epsilon(kRel));
  CHECK(small.ranked.size() == 10);
  CHECK(std::is_sorted(small.ranked.begin(), small.ranked.end(), prediction_order));
  CHECK(small.candidates_evaluated >
        small.ranked.size());  // segmented strategies scanned a grid

  const TuneResult large = select_best_broadcast(p, 4, 10000000, kAllBroadcastStrategies);
  CHECK(std::get<BroadcastStrategy>(large.best().strategy) ==
        BroadcastStrategy::SegmentedChain);

  const TuneResult scatter_small = select_best_scatter(overhead_params(), 8, 100,
                                                       kAllScatterStrategies);
  CHECK(std::get<ScatterStrategy>(scatter_small.best().strategy) ==
        ScatterStrategy::BinomialTree);
  CHECK(scatter_small.best().time == doctest::Approx(4.507e-4).epsilon(1e-9));

  const TuneResult scatter_band = select_best_scatter(p, 4, 1000, kAllScatterStrategies);
  CHECK(std::get<ScatterStrategy>(scatter_band.best().strategy) ==
        ScatterStrategy::FlatTree);

  CHECK_THROWS_AS(select_best_broadcast(p, 4, 1000, {}), std::invalid_argument);
  CHECK_THROWS_AS(select_best_scatter(p, 4, 1000, {}), std::invalid_argument);
}

TEST_CASE("scaling the time parameters preserves the winner") {
  const PLogPParams p = affine_params();
  std::vector<GapEntry> entries;
  for (const GapEntry& e : p.gaps.entries()) entries.push_back({e.size, e.gap * 3.7});
  const PLogPParams scaled(p.latency * 3.7, GapTable(entries), "scaled");

  for (int P : {4, 24}) {
    for (Bytes m : {Bytes{1000}, Bytes{1048576}}) {
      const TuneResult base = select_best_broadcast(p, P, m, kAllBroadcastStrategies);
      const TuneResult big = select_best_broadcast(scaled, P, m, kAllBroadcastStrategies);
      CHECK(base.best().strategy == big.best().strategy);
      CHECK(big.best().time == doctest::Approx(base.best().time * 3.7).epsilon(kRel));
    }
  }
}

TEST_CASE("best broadcast time is monotone in the message size") {
  const PLogPParams p = affine_params();
  double prev = 0.0;
  for (Bytes m = 1; m <= (1 << 20); m *= 4) {
    const double t = select_best_broadcast(p, 8, m, kAllBroadcastStrategies).best().time;
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("degenerate networks keep the chain orderings sane") {
  // L = 0 and constant g: an unsegmented chain and a one-segment chain agree,
  // and the rendezvous chain can never beat the plain chain.
  const PLogPParams p(0.0, GapTable({{1, 1e-4}}), "zero-latency");
  const double chain = predict_broadcast(BroadcastStrategy::Chain, p, 6, 5000).time;
  const double seg = predict_broadcast(BroadcastStrategy::SegmentedChain, p, 6, 5000,
                                       5000).time;
  CHECK(chain == doctest::Approx(seg).epsilon(kRel));

  const TuneResult ranked = select_best_broadcast(p, 6, 5000, kAllBroadcastStrategies);
  auto index_of = [&](BroadcastStrategy s) {
    for (std::size_t i = 0; i < ranked.ranked.size(); ++i) {
      if (std::get<BroadcastStrategy>(ranked.ranked[i].strategy) == s) return i;
    }
    return ranked.ranked.size();
  };
  CHECK(index_of(BroadcastStrategy::Chain) <
        index_of(BroadcastStrategy::ChainRendezvous));
}

TEST_CASE("sweeps locate the binomial-to-segmented-chain crossover") {
  // Fast-ethernet-like network at P = 24.
  std::vector<Bytes> samples;
  for (Bytes s = 2; s <= (Bytes{1} << 22); s *= 2) samples.push_back(s);
  const PLogPParams p = synth_params(3.0e-5, 1.25e7, 5.0e-5, samples, "fast-ethernet");

  std::vector<Bytes> sizes;
  for (Bytes m = 1024; m <= (1 << 20); m *= 2) sizes.push_back(m);
  const BroadcastStrategy pair[] = {BroadcastStrategy::BinomialTree,
                                    BroadcastStrategy::SegmentedChain};
  const auto points = sweep_broadcast(p, 24, sizes, pair);
  REQUIRE(points.size() == 11);

  int flips = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].best_index != points[i - 1].best_index) ++flips;
  }
  CHECK(flips == 1);
  CHECK(points.front().best_index == 0);  // binomial at 1 KiB
  CHECK(points.back().best_index == 1);   // segmented chain at 1 MiB
  for (const SweepPoint& point : points) {
    REQUIRE(point.predictions.size() == 2);
    CHECK(point.message_size >= 1024);
  }

  const Bytes one[] = {4096};
  const BroadcastStrategy only[] = {BroadcastStrategy::FlatTree};
  const auto single = sweep_broadcast(p, 24, one, only);
  REQUIRE(single.size() == 1);
  CHECK(single[0].best_index == 0);

  CHECK_THROWS_AS(sweep_broadcast(p, 24, {}, pair), std::invalid_argument);
  const auto scatter_points = sweep_scatter(p, 8, sizes, kAllScatterStrategies);
  CHECK(scatter_points.size() == 11);
  CHECK_THROWS_AS(sweep_scatter(p, 8, {}, kAllScatterStrategies),
                  std::invalid_argument);
}
