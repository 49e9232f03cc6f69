#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace essaylens::refgen::bank {

// Slot markers inside templates:
//   {N} noun  {A} adjective  {V} base verb  {P} past verb  {D} adverb
//   {R} person  {L} place  {#} small number
struct StyleBank {
  std::vector<std::string_view> openers;
  std::vector<std::string_view> body;
  std::vector<std::string_view> closers;
  std::vector<std::string_view> nouns, adjectives, adverbs, people, places;
  std::vector<std::pair<std::string_view, std::string_view>> verbs;  // (base, past)
  double own_rate;  // probability a slot draws from the style list rather than the shared one
  double zipf_s;
  std::size_t target_min, target_max;  // preferred length range in words
};

struct SharedBank {
  std::vector<std::string_view> nouns, adjectives, adverbs, people, places;
  std::vector<std::pair<std::string_view, std::string_view>> verbs;
};

const SharedBank& shared();
const StyleBank& human();
const StyleBank& llm();

}  // namespace essaylens::refgen::bank
