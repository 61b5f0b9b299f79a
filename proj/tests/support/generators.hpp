#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "assess/bank.hpp"
#include "assess/grading.hpp"

namespace assess::testing {

/// A small valid question of the given type. Keys are deterministic so the
/// fully-correct and fully-wrong answers are easy to build by hand.
Question make_question(const std::string& id, QuestionType type, Difficulty difficulty, int education_rank,
                       std::vector<std::string> topics, double weight = 1.0);

/// 3-level tree ("t", "t.a".."t.c", "t.a.1".."t.c.3") with 200 questions
/// covering every difficulty x education rank on every node, plus a few
/// multi-tagged items and likert surveys.
QuestionBank grid_bank();

/// Random forest of `topic_count` nodes with `question_count` questions
/// tagged on 1-3 random topics each.
QuestionBank random_forest_bank(std::mt19937_64& rng, int topic_count, int question_count);

/// A shape-valid response with random content; may be partially right.
Response random_response(const Question& q, std::mt19937_64& rng);

/// The response that gets every part of a keyed question wrong.
Response all_wrong_response(const Question& q);

std::string read_text(const std::string& path);
std::string fixture_path(const std::string& name);

}  // namespace assess::testing
