#include <doctest.h>

#include <cmath>
#include <limits>

#include "assess/levels.hpp"
#include "assess/error.hpp"

using namespace assess;

TEST_CASE("infer_level bands") {
  CHECK(infer_level(0) == KnowledgeLevel::low);
  CHECK(infer_level(49.999) == KnowledgeLevel::low);
  CHECK(infer_level(50) == KnowledgeLevel::good);
  CHECK(infer_level(75) == KnowledgeLevel::good);
  CHECK(infer_level(75.001) == KnowledgeLevel::high);
  CHECK(infer_level(100) == KnowledgeLevel::high);
  CHECK(infer_level(std::nextafter(50.0, 0.0)) == KnowledgeLevel::low);
  CHECK(infer_level(std::nextafter(75.0, 100.0)) == KnowledgeLevel::high);
}

TEST_CASE("infer_level rejects values outside the percent range") {
  CHECK_THROWS_AS(infer_level(-0.1), Error);
  CHECK_THROWS_AS(infer_level(100.1), Error);
  CHECK_THROWS_AS(infer_level(std::numeric_limits<double>::quiet_NaN()), Error);
  try {
    infer_level(101);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
}

TEST_CASE("education level range") {
  CHECK(EducationLevel(1).rank() == 1);
  CHECK(EducationLevel(5).rank() == 5);
  CHECK_THROWS_AS(EducationLevel(0), Error);
  CHECK_THROWS_AS(EducationLevel(6), Error);
  EducationScale scale;
  CHECK(scale.label(EducationLevel(3)) == "Upper secondary");
}

TEST_CASE("relations on ordinal scales") {
  CHECK(satisfies(Relation::below, Difficulty::easy, Difficulty::medium));
  CHECK_FALSE(satisfies(Relation::below, Difficulty::medium, Difficulty::medium));
  CHECK(satisfies(Relation::at_most, Difficulty::medium, Difficulty::medium));
  CHECK(satisfies(Relation::match, Difficulty::difficult, Difficulty::difficult));
  CHECK(satisfies(Relation::at_least, Difficulty::difficult, Difficulty::medium));
  CHECK_FALSE(satisfies(Relation::above, Difficulty::medium, Difficulty::difficult));
  CHECK(satisfies(Relation::above, EducationLevel(4), EducationLevel(3)));
}

TEST_CASE("knowledge and difficulty map one to one") {
  CHECK(to_difficulty(KnowledgeLevel::low) == Difficulty::easy);
  CHECK(to_difficulty(KnowledgeLevel::good) == Difficulty::medium);
  CHECK(to_difficulty(KnowledgeLevel::high) == Difficulty::difficult);
  CHECK(to_knowledge(Difficulty::medium) == KnowledgeLevel::good);
}

TEST_CASE("names round trip") {
  for (auto d : {Difficulty::easy, Difficulty::medium, Difficulty::difficult}) {
    CHECK(parse_difficulty(to_string(d)) == d);
  }
  for (auto k : {KnowledgeLevel::low, KnowledgeLevel::good, KnowledgeLevel::high}) {
    CHECK(parse_knowledge(to_string(k)) == k);
  }
  for (auto r : {Relation::below, Relation::at_most, Relation::match, Relation::at_least, Relation::above}) {
    CHECK(parse_relation(to_string(r)) == r);
  }
  CHECK_FALSE(parse_difficulty("hard").has_value());
}
