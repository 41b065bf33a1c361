#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "prodrank/credit.hpp"
#include "prodrank/errors.hpp"
#include "prodrank/prng.hpp"
#include "prodrank/synth.hpp"
#include "testutil.hpp"

using namespace prodrank;

TEST_CASE("the random stream reproduces the published vectors") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ull);
  CHECK(rng.next() == 0x06C45D188009454Full);
}

TEST_CASE("bounded draws stay in range and cover the range") {
  SplitMix64 rng(42);
  CHECK(SplitMix64(7).below(1) == 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    auto v = rng.below(6);
    CHECK(v < 6);
    seen.insert(v);
  }
  CHECK(seen.size() == 6);
}

TEST_CASE("unit doubles live in the half-open unit interval") {
  SplitMix64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    double v = rng.next_double();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("count distributions respect their means roughly") {
  SplitMix64 rng(9);
  double total = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) total += rng.negative_binomial(2.5, 4);
  CHECK(total / trials == doctest::Approx(2.5).epsilon(0.05));

  total = 0;
  for (int i = 0; i < trials; ++i) total += rng.binomial(11, 3.0 / 11);
  CHECK(total / trials == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("equal parameters generate identical corpora") {
  auto params = default_params();
  params.seed = 77;
  auto a = generate_corpus(params);
  auto b = generate_corpus(params);
  CHECK(a == b);

  params.seed = 78;
  auto c = generate_corpus(params);
  CHECK_FALSE(a == c);
}

TEST_CASE("generated corpora pass validation and round-trip") {
  auto params = default_params();
  auto corpus = generate_corpus(params);
  CHECK(validate(corpus).empty());
  CHECK_FALSE(corpus.publications.empty());

  testutil::TempDir dir;
  write_corpus(corpus, dir.path().string());
  auto loaded = load_corpus({dir.file("staff.csv"), dir.file("publications.csv"),
                             dir.file("byline.csv"), dir.file("taxonomy.csv")},
                            corpus.census_date);
  CHECK(loaded == corpus);
}

TEST_CASE("params survive the json round trip") {
  auto params = default_params();
  params.seed = 123;
  params.intramural_probability = 0.25;
  params.sds[0].categories = {"alpha", "beta"};
  auto text = params_to_json(params);
  auto parsed = params_from_json(text);
  CHECK(params_to_json(parsed) == text);
  CHECK(parsed.seed == 123);
  CHECK(parsed.intramural_probability == 0.25);
  CHECK(parsed.sds[0].categories == std::vector<std::string>{"alpha", "beta"});
}

TEST_CASE("unknown parameter keys are rejected") {
  auto text = params_to_json(default_params());
  auto patched = text;
  patched.insert(patched.find("\"seed\""), "\"sneed\": 4,\n  ");
  CHECK_THROWS_AS(params_from_json(patched), Error);
  try {
    params_from_json(patched);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Params);
    CHECK(std::string(e.what()).find("sneed") != std::string::npos);
  }
}

TEST_CASE("infeasible parameters are rejected") {
  auto params = default_params();
  params.byline.max = 0;
  CHECK_THROWS_AS(params.validate(), Error);

  params = default_params();
  params.byline.min = 5;
  params.byline.max = 3;
  CHECK_THROWS_AS(params.validate(), Error);

  params = default_params();
  params.intramural_probability = 1.5;
  CHECK_THROWS_AS(params.validate(), Error);

  params = default_params();
  params.sds.clear();
  CHECK_THROWS_AS(params.validate(), Error);

  params = default_params();
  params.sds[1].sds_code = params.sds[0].sds_code;
  CHECK_THROWS_AS(params.validate(), Error);

  params = default_params();
  params.n_universities = 0;
  CHECK_THROWS_AS(params.validate(), Error);

  CHECK_NOTHROW(default_params().validate());
}

TEST_CASE("intramural probability one forces intramural bylines") {
  auto params = default_params();
  params.seed = 5;
  params.intramural_probability = 1.0;
  auto corpus = generate_corpus(params);
  REQUIRE_FALSE(corpus.publications.empty());
  for (const auto& pub : corpus.publications) {
    CHECK(classify_collaboration(pub) == CollaborationClass::Intramural);
  }
}

TEST_CASE("intramural probability zero forces extramural bylines") {
  auto params = default_params();
  params.seed = 6;
  params.intramural_probability = 0.0;
  params.byline.min = 2;  // a single known author is intramural by definition
  auto corpus = generate_corpus(params);
  REQUIRE_FALSE(corpus.publications.empty());
  for (const auto& pub : corpus.publications) {
    CHECK(classify_collaboration(pub) == CollaborationClass::Extramural);
  }
}

TEST_CASE("byline lengths respect the configured bounds") {
  auto params = default_params();
  params.seed = 8;
  params.byline.min = 3;
  params.byline.max = 7;
  params.byline.mean = 4.0;
  auto corpus = generate_corpus(params);
  double total = 0;
  for (const auto& pub : corpus.publications) {
    CHECK(pub.byline.size() >= 3);
    CHECK(pub.byline.size() <= 7);
    total += pub.byline.size();
  }
  CHECK(total / corpus.publications.size() ==
        doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("generated volume tracks the requested rates") {
  auto params = default_params();
  params.seed = 12;
  // Scale up to make the law of large numbers bite.
  for (auto& spec : params.sds) {
    spec.staff_min = 20;
    spec.staff_max = 20;
  }
  params.n_universities = 20;
  params.publishing_rate = 1.0;
  auto corpus = generate_corpus(params);

  // Each publication has exactly one generating lead, so the volume per
  // head tracks pubs_per_researcher_mean directly.
  const double researchers = static_cast<double>(corpus.roster.size());
  const double per_head =
      static_cast<double>(corpus.publications.size()) / researchers;
  CHECK(per_head ==
        doctest::Approx(params.pubs_per_researcher_mean).epsilon(0.10));

  double cite_total = 0;
  for (const auto& pub : corpus.publications) cite_total += pub.citations;
  CHECK(cite_total / corpus.publications.size() ==
        doctest::Approx(params.citation_mean).epsilon(0.10));
}

TEST_CASE("category draws come from the field's list") {
  auto params = default_params();
  params.seed = 14;
  params.categories_per_pub = 2;
  std::map<std::string, std::set<std::string>> allowed;
  for (const auto& spec : params.sds) {
    allowed[spec.sds_code] = {spec.categories.begin(), spec.categories.end()};
  }
  auto corpus = generate_corpus(params);
  StaffLookup lookup(corpus);
  for (const auto& pub : corpus.publications) {
    CHECK(pub.categories.size() <= 2);
    std::set<std::string> unique(pub.categories.begin(), pub.categories.end());
    CHECK(unique.size() == pub.categories.size());
  }
}

TEST_CASE("single-author corpora exist when requested") {
  auto params = default_params();
  params.seed = 21;
  params.byline.min = 1;
  params.byline.max = 1;
  params.byline.mean = 1.0;
  params.external_author_rate = 0.0;
  auto corpus = generate_corpus(params);
  for (const auto& pub : corpus.publications) {
    CHECK(pub.byline.size() == 1);
    CHECK(pub.byline[0].researcher_id.has_value());
  }
}
